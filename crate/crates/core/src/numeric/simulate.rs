//! Fixed-step RK4 integration from zero initial state.
//!
//! The grid is `t_k = k*dt` computed by multiplication (never accumulation),
//! so two runs over the same horizon share bit-identical sample times. The
//! update map is linear in (state, input samples), which is what makes the
//! superposition and shift identities hold to rounding on a shared grid.

use std::io::Write;

use super::state_space::StateSpace;
use super::{NumericError, TestSignal, BLOWUP_LIMIT};

/// Uniformly sampled output, `samples[k]` at `t0 + k*dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl Trajectory {
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn final_value(&self) -> f64 {
        *self.samples.last().unwrap_or(&0.0)
    }

    /// Largest pointwise difference on the shared grid.
    pub fn max_abs_diff(&self, other: &Trajectory) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// CSV with header `t,y` and 12-significant-digit values.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,y")?;
        for (k, v) in self.samples.iter().enumerate() {
            writeln!(out, "{:.11e},{:.11e}", self.time(k), v)?;
        }
        Ok(())
    }
}

fn check_sample(v: f64, t: f64) -> Result<(), NumericError> {
    if !v.is_finite() || v.abs() > BLOWUP_LIMIT {
        Err(NumericError::NumericalBlowup { t })
    } else {
        Ok(())
    }
}

/// Number of steps covering `[0, t_end]`; `t_end` must sit on the grid to
/// within rounding.
fn step_count(t_end: f64, dt: f64) -> Result<usize, NumericError> {
    if !(dt > 0.0) || t_end < dt {
        return Err(NumericError::InvalidGrid);
    }
    Ok((t_end / dt).round() as usize)
}

/// Integrate `x' = Ax + Bu, y = Cx + Du` from `x(0) = 0` with classical
/// RK4, sampling the output at every grid point including `t = 0`.
pub fn simulate(
    ss: &StateSpace,
    input: &TestSignal,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory, NumericError> {
    simulate_driven(ss, |t| Ok(input.eval(t)), t_end, dt)
}

/// Same integrator, arbitrary (fallible) input sampler.
pub(crate) fn simulate_driven(
    ss: &StateSpace,
    u: impl Fn(f64) -> Result<f64, NumericError>,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory, NumericError> {
    let steps = step_count(t_end, dt)?;
    let n = ss.dim();
    let mut state = vec![0.0; n];
    let mut samples = Vec::with_capacity(steps + 1);

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut scratch = vec![0.0; n];

    for k in 0..=steps {
        let t = k as f64 * dt;
        let y = ss.output(&state, u(t)?);
        check_sample(y, t)?;
        samples.push(y);
        if k == steps {
            break;
        }

        let u0 = u(t)?;
        let um = u(t + dt / 2.0)?;
        let u1 = u(t + dt)?;

        ss.dynamics(&state, u0, &mut k1);
        for i in 0..n {
            scratch[i] = state[i] + dt / 2.0 * k1[i];
        }
        ss.dynamics(&scratch, um, &mut k2);
        for i in 0..n {
            scratch[i] = state[i] + dt / 2.0 * k2[i];
        }
        ss.dynamics(&scratch, um, &mut k3);
        for i in 0..n {
            scratch[i] = state[i] + dt * k3[i];
        }
        ss.dynamics(&scratch, u1, &mut k4);
        for i in 0..n {
            state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            check_sample(state[i], t)?;
        }
    }
    Ok(Trajectory {
        t0: 0.0,
        dt,
        samples,
    })
}
