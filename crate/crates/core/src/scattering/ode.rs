//! Adaptive Dormand-Prince 5(4) integration of small first-order systems.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MAX_GROWTH: f64 = 5.0;
const MIN_SHRINK: f64 = 0.2;
const MAX_STEPS: usize = 1_000_000;

/// Stepper state carried between successive calls to [`Dopri5::advance`].
#[derive(Debug, Clone)]
pub(crate) struct Dopri5 {
    rtol: f64,
    atol: f64,
    step: f64,
    pub(crate) accepted: usize,
    pub(crate) rejected: usize,
}

impl Dopri5 {
    pub(crate) fn new(tol: f64, initial_step: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            step: initial_step,
            accepted: 0,
            rejected: 0,
        }
    }

    /// Integrates `y' = rhs(r, y)` from `r` to `r_end`, landing exactly on `r_end`.
    pub(crate) fn advance<F>(&mut self, rhs: F, mut r: f64, mut y: [f64; 2], r_end: f64) -> Result<[f64; 2]>
    where
        F: Fn(f64, &[f64; 2]) -> [f64; 2],
    {
        let mut k = [[0.0; 2]; 7];
        let mut steps = 0;
        while r < r_end {
            let remaining = r_end - r;
            let last = self.step >= remaining;
            let h = if last { remaining } else { self.step };
            if h <= f64::EPSILON * r.abs().max(1.0) * 4.0 && !last {
                return Err(Error::IntegrationFailure {
                    r,
                    reason: "step size underflow",
                });
            }
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::IntegrationFailure {
                    r,
                    reason: "step limit exceeded",
                });
            }

            k[0] = rhs(r, &y);
            for s in 1..7 {
                let mut ys = y;
                for (i, yi) in ys.iter_mut().enumerate() {
                    *yi += h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
                }
                k[s] = rhs(r + C[s] * h, &ys);
            }
            // stage 7 is evaluated at the 5th-order solution (FSAL)
            let mut y_new = y;
            for (i, yi) in y_new.iter_mut().enumerate() {
                *yi += h * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>();
            }
            k[6] = rhs(r + h, &y_new);

            let mut err: f64 = 0.0;
            for i in 0..2 {
                let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
                let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((e / scale).abs());
            }
            if !err.is_finite() {
                return Err(Error::IntegrationFailure {
                    r,
                    reason: "non-finite state",
                });
            }

            let factor = if err == 0.0 {
                MAX_GROWTH
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_SHRINK, MAX_GROWTH)
            };
            if err <= 1.0 {
                self.accepted += 1;
                r = if last { r_end } else { r + h };
                y = y_new;
                // a truncated final step says nothing about the natural step size
                if !last || factor < 1.0 {
                    self.step = h * factor;
                }
            } else {
                self.rejected += 1;
                self.step = h * factor;
            }
        }
        Ok(y)
    }
}
