use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-decreasing radial profile on `[0, R]` with values in `[0, 1]` and
/// `f(R) = 1`. Between nodes it is linear; beyond `R` it is extended by 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileData", into = "ProfileData")]
pub struct RadialProfile {
    grid: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ProfileData {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<ProfileData> for RadialProfile {
    type Error = Error;

    fn try_from(data: ProfileData) -> Result<Self> {
        RadialProfile::new(data.grid, data.values)
    }
}

impl From<RadialProfile> for ProfileData {
    fn from(p: RadialProfile) -> Self {
        ProfileData {
            grid: p.grid,
            values: p.values,
        }
    }
}

impl RadialProfile {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidProfile(msg));
        if grid.len() < 2 || grid.len() != values.len() {
            return bad(format!(
                "grid ({}) and values ({}) need equal length >= 2",
                grid.len(),
                values.len()
            ));
        }
        if grid[0] < 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("grid must be strictly increasing from r >= 0".into());
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return bad("profile values must lie in [0, 1]".into());
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return bad("profile values must be non-decreasing".into());
        }
        if values[values.len() - 1] != 1.0 {
            return bad("profile must equal 1 at its outer radius".into());
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn outer_radius(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Linear interpolation; 1 beyond the outer radius, first value below the grid.
    pub fn eval(&self, r: f64) -> f64 {
        if r >= self.outer_radius() {
            return 1.0;
        }
        if r <= self.grid[0] {
            return self.values[0];
        }
        let i = self.grid.partition_point(|&x| x <= r) - 1;
        let t = (r - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }
}
