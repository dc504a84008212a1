//! Hyperbolic space primitives at curvature -1.
//!
//! Two-dimensional points live in the upper half-plane, three-dimensional
//! points on the upper sheet of the hyperboloid `z0^2 - z1^2 - z2^2 - z3^2 = 1`.
//! All radial integrals in the crate use [`radial_weight`] as their measure.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{require_nonnegative, Error, Result};

/// Spatial dimension of the hyperbolic space, restricted to 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn new(d: u32) -> Result<Self> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    pub fn get(self) -> u32 {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    /// Surface area of the unit sphere `S^{d-1}`: `2π` or `4π`.
    pub fn sphere_area(self) -> f64 {
        match self {
            Dimension::Two => 2.0 * PI,
            Dimension::Three => 4.0 * PI,
        }
    }

    /// `sinh^{d-1}(r)`, the radial density without the sphere factor.
    pub fn sinh_power(self, r: f64) -> f64 {
        match self {
            Dimension::Two => r.sinh(),
            Dimension::Three => {
                let s = r.sinh();
                s * s
            }
        }
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;

    fn try_from(d: u32) -> Result<Self> {
        Dimension::new(d)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.get()
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// A point `z1 + i z2` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointH2 {
    z1: f64,
    z2: f64,
}

impl PointH2 {
    pub fn new(z1: f64, z2: f64) -> Result<Self> {
        if !(z1.is_finite() && z2.is_finite()) || z2 <= 0.0 {
            return Err(Error::InvalidPoint(format!(
                "half-plane point ({z1}, {z2}) needs finite coordinates and z2 > 0"
            )));
        }
        Ok(Self { z1, z2 })
    }

    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn z2(&self) -> f64 {
        self.z2
    }
}

const HYPERBOLOID_TOL: f64 = 1e-12;

/// A point on the upper sheet of the hyperboloid model of `H^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointH3 {
    z: [f64; 4],
}

impl PointH3 {
    /// Builds a point from all four coordinates. The Lorentz form must equal 1
    /// to within `1e-12` relative to `z0^2`; the stored point is rescaled onto
    /// the hyperboloid exactly.
    pub fn new(z0: f64, z1: f64, z2: f64, z3: f64) -> Result<Self> {
        let z = [z0, z1, z2, z3];
        if z.iter().any(|c| !c.is_finite()) || z0 <= 0.0 {
            return Err(Error::InvalidPoint(format!(
                "hyperboloid point {z:?} needs finite coordinates and z0 > 0"
            )));
        }
        let q = lorentz_form(&z, &z);
        if (q - 1.0).abs() > HYPERBOLOID_TOL * z0 * z0 {
            return Err(Error::InvalidPoint(format!(
                "hyperboloid point {z:?} has q(z) = {q}, expected 1"
            )));
        }
        let s = q.sqrt().recip();
        Ok(Self {
            z: [z0 * s, z1 * s, z2 * s, z3 * s],
        })
    }

    /// Lifts spatial coordinates onto the hyperboloid.
    pub fn from_spatial(z1: f64, z2: f64, z3: f64) -> Result<Self> {
        let z0 = (1.0 + z1 * z1 + z2 * z2 + z3 * z3).sqrt();
        Self::new(z0, z1, z2, z3)
    }

    pub fn coords(&self) -> [f64; 4] {
        self.z
    }
}

fn lorentz_form(x: &[f64; 4], y: &[f64; 4]) -> f64 {
    x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HyperbolicPoint {
    H2(PointH2),
    H3(PointH3),
}

impl From<PointH2> for HyperbolicPoint {
    fn from(p: PointH2) -> Self {
        HyperbolicPoint::H2(p)
    }
}

impl From<PointH3> for HyperbolicPoint {
    fn from(p: PointH3) -> Self {
        HyperbolicPoint::H3(p)
    }
}

/// Geodesic distance between two points of the model matching `d`.
///
/// Both formulas are evaluated through `2 asinh(chord / 2)`, which stays
/// accurate for nearby points where `acosh` loses half the digits.
pub fn geodesic_distance(d: Dimension, p: &HyperbolicPoint, q: &HyperbolicPoint) -> Result<f64> {
    match (d, p, q) {
        (Dimension::Two, HyperbolicPoint::H2(p), HyperbolicPoint::H2(q)) => {
            let dx = p.z1 - q.z1;
            let dy = p.z2 - q.z2;
            let chord = (dx * dx + dy * dy).sqrt() / (p.z2 * q.z2).sqrt();
            Ok(2.0 * (0.5 * chord).asinh())
        }
        (Dimension::Three, HyperbolicPoint::H3(p), HyperbolicPoint::H3(q)) => {
            let diff = [
                p.z[0] - q.z[0],
                p.z[1] - q.z[1],
                p.z[2] - q.z[2],
                p.z[3] - q.z[3],
            ];
            // -q(p - q) = 2 (B(p, q) - 1) >= 0 on the upper sheet
            let chord_sq = (-lorentz_form(&diff, &diff)).max(0.0);
            Ok(2.0 * (0.5 * chord_sq.sqrt()).asinh())
        }
        _ => Err(Error::DimensionMismatch(d.get())),
    }
}

/// Radial volume density `vol(S^{d-1}) sinh^{d-1}(r)` of geodesic polar coordinates.
pub fn radial_weight(d: Dimension, r: f64) -> Result<f64> {
    require_nonnegative("r", r)?;
    Ok(d.sphere_area() * d.sinh_power(r))
}

/// Volume of the geodesic ball of radius `radius`.
pub fn ball_volume(d: Dimension, radius: f64) -> Result<f64> {
    require_nonnegative("R", radius)?;
    Ok(ball_volume_unchecked(d, radius))
}

/// Closed-form `∫_0^R radial_weight`; callers guarantee `radius >= 0`.
pub(crate) fn ball_volume_unchecked(d: Dimension, radius: f64) -> f64 {
    match d {
        // cosh R - 1 = 2 sinh^2(R/2), no cancellation near 0
        Dimension::Two => {
            let s = (0.5 * radius).sinh();
            4.0 * PI * s * s
        }
        Dimension::Three => PI * sinh_2r_minus_2r(radius),
    }
}

/// `sinh(2R) - 2R`, with a series near zero where the difference cancels.
fn sinh_2r_minus_2r(radius: f64) -> f64 {
    let x = 2.0 * radius;
    if x < 0.1 {
        // x^3/3! + x^5/5! + ... ; six terms reach full precision for x < 0.1
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        for k in 1..6 {
            let n = (2 * k + 2) as f64;
            term *= x2 / (n * (n + 1.0));
            sum += term;
        }
        sum
    } else {
        x.sinh() - x
    }
}

/// An orientation-preserving isometry `z -> (a z + b) / (c z + d)` of the
/// upper half-plane, with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Mobius {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "det",
                value: det,
                reason: "Möbius map needs ad - bc > 0",
            });
        }
        let s = det.sqrt().recip();
        Ok(Self {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        })
    }

    pub fn apply(&self, p: &PointH2) -> PointH2 {
        // (a z + b)/(c z + d) with z = x + i y
        let (x, y) = (p.z1, p.z2);
        let den_re = self.c * x + self.d;
        let den_im = self.c * y;
        let den = den_re * den_re + den_im * den_im;
        let num_re = self.a * x + self.b;
        let num_im = self.a * y;
        let re = (num_re * den_re + num_im * den_im) / den;
        let im = y / den;
        PointH2 { z1: re, z2: im }
    }
}

/// A Lorentz transformation of the hyperboloid, stored as a 4x4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMap {
    m: [[f64; 4]; 4],
}

impl LorentzMap {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { m }
    }

    /// Boost with rapidity `t` along spatial axis `axis` (1, 2 or 3).
    pub fn boost(axis: usize, t: f64) -> Result<Self> {
        if !(1..=3).contains(&axis) {
            return Err(Error::InvalidParameter {
                name: "axis",
                value: axis as f64,
                reason: "spatial axis must be 1, 2 or 3",
            });
        }
        let mut l = Self::identity();
        let (c, s) = (t.cosh(), t.sinh());
        l.m[0][0] = c;
        l.m[0][axis] = s;
        l.m[axis][0] = s;
        l.m[axis][axis] = c;
        Ok(l)
    }

    /// Rotation by `theta` in the plane of spatial axes `i` and `j`.
    pub fn rotation(i: usize, j: usize, theta: f64) -> Result<Self> {
        if !(1..=3).contains(&i) || !(1..=3).contains(&j) || i == j {
            return Err(Error::InvalidParameter {
                name: "axis",
                value: i as f64,
                reason: "rotation needs two distinct spatial axes",
            });
        }
        let mut l = Self::identity();
        let (c, s) = (theta.cos(), theta.sin());
        l.m[i][i] = c;
        l.m[i][j] = -s;
        l.m[j][i] = s;
        l.m[j][j] = c;
        Ok(l)
    }

    pub fn compose(&self, other: &LorentzMap) -> LorentzMap {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        LorentzMap { m }
    }

    pub fn apply(&self, p: &PointH3) -> PointH3 {
        let mut z = [0.0; 4];
        for (i, zi) in z.iter_mut().enumerate() {
            *zi = (0..4).map(|k| self.m[i][k] * p.z[k]).sum();
        }
        // re-project to remove rounding drift off the hyperboloid
        let s = lorentz_form(&z, &z).sqrt().recip();
        PointH3 {
            z: [z[0] * s, z[1] * s, z[2] * s, z[3] * s],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dimension_rejects_other_values() {
        assert!(Dimension::new(2).is_ok());
        assert!(Dimension::new(3).is_ok());
        assert_eq!(Dimension::new(4), Err(Error::UnsupportedDimension(4)));
        assert_eq!(Dimension::new(1), Err(Error::UnsupportedDimension(1)));
    }

    #[test]
    fn vertical_geodesic_distance() {
        let p = PointH2::new(0.0, 1.0).unwrap().into();
        let q = PointH2::new(0.0, 2.0).unwrap().into();
        let dist = geodesic_distance(Dimension::Two, &p, &q).unwrap();
        assert_relative_eq!(dist, 2f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn hyperboloid_geodesic_distance() {
        let t: f64 = 1.3;
        let p = PointH3::new(1.0, 0.0, 0.0, 0.0).unwrap().into();
        let q = PointH3::new(t.cosh(), t.sinh(), 0.0, 0.0).unwrap().into();
        let dist = geodesic_distance(Dimension::Three, &p, &q).unwrap();
        assert_relative_eq!(dist, t, max_relative = 1e-13);
    }

    #[test]
    fn identical_points_have_zero_distance() {
        let p: HyperbolicPoint = PointH2::new(0.3, 1.7).unwrap().into();
        assert_eq!(geodesic_distance(Dimension::Two, &p, &p).unwrap(), 0.0);
    }

    #[test]
    fn model_mismatch_is_rejected() {
        let p: HyperbolicPoint = PointH2::new(0.0, 1.0).unwrap().into();
        let q: HyperbolicPoint = PointH3::from_spatial(0.1, 0.0, 0.0).unwrap().into();
        assert!(geodesic_distance(Dimension::Three, &p, &q).is_err());
        assert!(geodesic_distance(Dimension::Two, &p, &q).is_err());
    }

    #[test]
    fn invalid_points() {
        assert!(PointH2::new(0.0, 0.0).is_err());
        assert!(PointH2::new(0.0, -1.0).is_err());
        assert!(PointH3::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(PointH3::new(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn radial_weight_values() {
        assert_eq!(radial_weight(Dimension::Two, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            radial_weight(Dimension::Two, 1.0).unwrap(),
            7.384_006_872_882_645,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            radial_weight(Dimension::Three, 1.0).unwrap(),
            17.355_387_381_771_437,
            max_relative = 1e-14
        );
        assert!(radial_weight(Dimension::Two, -0.1).is_err());
    }

    #[test]
    fn ball_volume_values() {
        assert_eq!(ball_volume(Dimension::Two, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            ball_volume(Dimension::Two, 1.0).unwrap(),
            3.412_276_265_284_902,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            ball_volume(Dimension::Three, 1.0).unwrap(),
            5.110_932_705_708_289,
            max_relative = 1e-14
        );
        assert!(ball_volume(Dimension::Three, -1.0).is_err());
    }

    #[test]
    fn small_ball_series_matches_direct_form() {
        for &r in &[0.01, 0.03, 0.049] {
            let direct = PI * ((2.0 * r as f64).sinh() - 2.0 * r);
            let series = ball_volume(Dimension::Three, r).unwrap();
            assert_relative_eq!(series, direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn lorentz_maps_preserve_hyperboloid() {
        let l = LorentzMap::boost(2, 0.7)
            .unwrap()
            .compose(&LorentzMap::rotation(1, 3, 0.4).unwrap());
        let p = PointH3::from_spatial(0.3, -1.2, 2.0).unwrap();
        let z = l.apply(&p).coords();
        assert_relative_eq!(lorentz_form(&z, &z), 1.0, max_relative = 1e-14);
    }
}
