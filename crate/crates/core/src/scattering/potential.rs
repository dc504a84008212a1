use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    /// The constraint `f = 0` on `[0, R0]`.
    Hardcore,
    /// Pieces `(r_i, v_i)` meaning `V = v_i` on `[r_{i-1}, r_i)`, with `r_{-1} = 0`.
    #[serde(alias = "piecewise_constant")]
    Piecewise,
    /// Samples `(r_i, v_i)`; `V = v_i` on the left-closed cell `[r_i, r_{i+1})`
    /// and `V = v_0` below the first sample. The last radius is `R0`.
    Sampled,
}

/// A constant value of the potential on `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub start: f64,
    pub end: f64,
    pub value: f64,
}

/// A radial, nonnegative, compactly supported two-body potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialSpec", into = "PotentialSpec")]
pub struct Potential {
    kind: PotentialKind,
    r0: f64,
    pieces: Vec<(f64, f64)>,
    cells: Vec<Cell>,
}

/// On-disk form of a potential: `{"kind": ..., "r0": ..., "pieces": [[r, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub r0: f64,
    #[serde(default)]
    pub pieces: Vec<(f64, f64)>,
}

impl TryFrom<PotentialSpec> for Potential {
    type Error = Error;

    fn try_from(spec: PotentialSpec) -> Result<Self> {
        Potential::from_spec(spec)
    }
}

impl From<Potential> for PotentialSpec {
    fn from(v: Potential) -> Self {
        PotentialSpec {
            kind: v.kind,
            r0: v.r0,
            pieces: v.pieces,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidPotential(msg.into())
}

impl Potential {
    pub fn hardcore(r0: f64) -> Result<Self> {
        Self::from_spec(PotentialSpec {
            kind: PotentialKind::Hardcore,
            r0,
            pieces: Vec::new(),
        })
    }

    /// Piecewise-constant potential; `R0` is the last piece radius.
    pub fn piecewise(pieces: Vec<(f64, f64)>) -> Result<Self> {
        let r0 = pieces
            .last()
            .map(|p| p.0)
            .ok_or_else(|| invalid("piecewise potential needs at least one piece"))?;
        Self::from_spec(PotentialSpec {
            kind: PotentialKind::Piecewise,
            r0,
            pieces,
        })
    }

    /// A constant barrier `V = height` on `[0, r0)`.
    pub fn step(r0: f64, height: f64) -> Result<Self> {
        Self::piecewise(vec![(r0, height)])
    }

    /// The zero potential with nominal support radius `r0`.
    pub fn zero(r0: f64) -> Result<Self> {
        Self::step(r0, 0.0)
    }

    pub fn sampled(samples: Vec<(f64, f64)>) -> Result<Self> {
        let r0 = samples
            .last()
            .map(|p| p.0)
            .ok_or_else(|| invalid("sampled potential needs samples"))?;
        Self::from_spec(PotentialSpec {
            kind: PotentialKind::Sampled,
            r0,
            pieces: samples,
        })
    }

    pub fn from_spec(spec: PotentialSpec) -> Result<Self> {
        let PotentialSpec { kind, r0, pieces } = spec;
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(invalid(format!("support radius r0 = {r0} must be > 0")));
        }
        for &(r, v) in &pieces {
            if !r.is_finite() || !v.is_finite() {
                return Err(invalid(format!("non-finite piece ({r}, {v})")));
            }
            if v < 0.0 {
                return Err(invalid(format!("negative value {v} at r = {r}")));
            }
            if r < 0.0 {
                return Err(invalid(format!("negative radius {r}")));
            }
        }
        if pieces.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(invalid("radii must be strictly increasing"));
        }
        let cells = match kind {
            PotentialKind::Hardcore => {
                if !pieces.is_empty() {
                    return Err(invalid("hardcore potential stores no pieces"));
                }
                Vec::new()
            }
            PotentialKind::Piecewise => {
                match pieces.last() {
                    Some(&(last, _)) if last == r0 => {}
                    _ => return Err(invalid("last piece radius must equal r0")),
                }
                if pieces[0].0 <= 0.0 {
                    return Err(invalid("first piece radius must be > 0"));
                }
                let mut start = 0.0;
                pieces
                    .iter()
                    .map(|&(end, value)| {
                        let cell = Cell { start, end, value };
                        start = end;
                        cell
                    })
                    .collect()
            }
            PotentialKind::Sampled => {
                if pieces.len() < 2 {
                    return Err(invalid("sampled potential needs at least two samples"));
                }
                if pieces.last().map(|p| p.0) != Some(r0) {
                    return Err(invalid("last sample radius must equal r0"));
                }
                let mut cells = Vec::with_capacity(pieces.len());
                if pieces[0].0 > 0.0 {
                    cells.push(Cell {
                        start: 0.0,
                        end: pieces[0].0,
                        value: pieces[0].1,
                    });
                }
                cells.extend(pieces.windows(2).map(|w| Cell {
                    start: w[0].0,
                    end: w[1].0,
                    value: w[0].1,
                }));
                cells
            }
        };
        Ok(Self {
            kind,
            r0,
            pieces,
            cells,
        })
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn support_radius(&self) -> f64 {
        self.r0
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn is_hardcore(&self) -> bool {
        self.kind == PotentialKind::Hardcore
    }

    /// True when the potential vanishes identically.
    pub fn is_zero(&self) -> bool {
        !self.is_hardcore() && self.cells.iter().all(|c| c.value == 0.0)
    }

    /// Constant cells covering `[0, R0)`; empty for hardcore.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// `V(r)`; infinite inside a hardcore, zero for `r >= R0`.
    pub fn value(&self, r: f64) -> f64 {
        if r >= self.r0 {
            return 0.0;
        }
        if self.is_hardcore() {
            return f64::INFINITY;
        }
        // cells are sorted and contiguous
        let idx = self.cells.partition_point(|c| c.end <= r);
        self.cells.get(idx).map_or(0.0, |c| c.value)
    }

    /// Radii in `(0, R0]` where `V` may jump, always ending with `R0`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut points: Vec<f64> = self
            .cells
            .iter()
            .map(|c| c.end)
            .filter(|&r| r > 0.0)
            .collect();
        if points.last() != Some(&self.r0) {
            points.push(self.r0);
        }
        points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_evaluation_is_left_closed() {
        let v = Potential::piecewise(vec![(0.5, 2.0), (1.0, 1.0)]).unwrap();
        assert_eq!(v.value(0.0), 2.0);
        assert_eq!(v.value(0.4999), 2.0);
        assert_eq!(v.value(0.5), 1.0);
        assert_eq!(v.value(0.999), 1.0);
        assert_eq!(v.value(1.0), 0.0);
        assert_eq!(v.value(7.0), 0.0);
        assert_eq!(v.breakpoints(), vec![0.5, 1.0]);
    }

    #[test]
    fn sampled_cells() {
        let v = Potential::sampled(vec![(0.2, 3.0), (0.6, 1.0), (1.0, 9.0)]).unwrap();
        assert_eq!(v.value(0.1), 3.0);
        assert_eq!(v.value(0.3), 3.0);
        assert_eq!(v.value(0.6), 1.0);
        assert_eq!(v.value(1.0), 0.0);
        assert_eq!(v.cells().len(), 3);
    }

    #[test]
    fn hardcore_is_infinite_inside() {
        let v = Potential::hardcore(0.5).unwrap();
        assert!(v.value(0.2).is_infinite());
        assert_eq!(v.value(0.5), 0.0);
        assert!(!v.is_zero());
        assert_eq!(v.breakpoints(), vec![0.5]);
    }

    #[test]
    fn rejects_invalid_definitions() {
        assert!(Potential::hardcore(0.0).is_err());
        assert!(Potential::piecewise(vec![(1.0, -1.0)]).is_err());
        assert!(Potential::piecewise(vec![(1.0, 1.0), (0.5, 1.0)]).is_err());
        assert!(Potential::piecewise(vec![]).is_err());
        assert!(Potential::sampled(vec![(1.0, 1.0)]).is_err());
        let spec = PotentialSpec {
            kind: PotentialKind::Piecewise,
            r0: 2.0,
            pieces: vec![(1.0, 1.0)],
        };
        assert!(Potential::from_spec(spec).is_err());
        let spec = PotentialSpec {
            kind: PotentialKind::Hardcore,
            r0: 1.0,
            pieces: vec![(1.0, 1.0)],
        };
        assert!(Potential::from_spec(spec).is_err());
    }

    #[test]
    fn zero_potential() {
        assert!(Potential::zero(1.0).unwrap().is_zero());
        assert!(!Potential::step(1.0, 1e-9).unwrap().is_zero());
    }
}
