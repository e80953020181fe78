//! Closed-form solution of the kinetic equation
//! `dX/dt = b + (b - a) X^2 - 2 b X`.
//!
//! For `a != b` the textbook solution is
//! `X(t) = [b - sqrt(ab) tanh(sqrt(ab) t + K)] / (b - a)` with
//! `K = artanh(s)`, `s = (b + (a - b) X(0)) / sqrt(ab)`. That form only
//! exists for `s < 1`; initial conditions on the far side of equilibrium
//! have `s > 1` and take the `coth`/`arcoth` continuation instead. Both
//! are exposed through [`branch_closed_form`].
//!
//! [`solve_at`] evaluates the same flow through the ratio of distances to
//! the two fixed points, which decays as `exp(-2 sqrt(ab) t)`:
//!
//! ```text
//! X(t) = p + d E / (1 + d (1 - E) (a - b) / (2 sqrt(ab))),   d = X(0) - p,  E = exp(-2 sqrt(ab) t)
//! ```
//!
//! with `p` the stable fixed point. The denominator stays between 1 and
//! `(1 + s)/2 > 0` for every physical start, so there is no pole and no
//! branch, and at `a = b` it reduces to `1/2 + (X(0) - 1/2) exp(-2bt)`.

use crate::error::{ensure_positive, ensure_time, KineticsError, Result};
use crate::kinetics::{equilibrium_concentration, Concentration, RateParams};

/// Relative rate gap under which [`solve_at`] hands off to the `a = b` solver.
pub const NEAR_DEGENERATE_GAP: f64 = 1e-12;

/// Phase `sqrt(ab) t` beyond which the solution equals its equilibrium to
/// double precision.
pub const SATURATION_PHASE: f64 = 20.0;

/// Which closed form describes the trajectory from a given start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `s < 1`: starts between the unstable root and equilibrium.
    Tanh,
    /// `s > 1`: starts beyond equilibrium.
    Coth,
    /// `s = 1`: starts at equilibrium.
    Fixed,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Tanh => "tanh",
            Branch::Coth => "coth",
            Branch::Fixed => "fixed",
        }
    }
}

/// Branch plus the integration constant `K` (artanh or arcoth of `s`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchOffset {
    pub branch: Branch,
    pub offset: f64,
    /// The phase argument `s`.
    pub s: f64,
}

/// Sampled concentration curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<Concentration>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, Concentration)> {
        Some((*self.times.last()?, *self.values.last()?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Concentration)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }
}

/// Checks a sample grid: non-empty, finite, starting at or after zero and
/// strictly increasing.
pub fn validate_grid(times: &[f64]) -> Result<()> {
    let ok = !times.is_empty()
        && times.iter().all(|t| t.is_finite())
        && times[0] >= 0.0
        && times.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(KineticsError::InvalidGrid)
    }
}

/// `steps` evenly spaced points on `[0, t_end]`; a single step yields `[0]`.
pub fn uniform_grid(t_end: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !t_end.is_finite() || t_end < 0.0 || (steps > 1 && t_end == 0.0) {
        return Err(KineticsError::InvalidGrid);
    }
    if steps == 1 {
        return Ok(vec![0.0]);
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                t_end
            } else {
                t_end * i as f64 / last
            }
        })
        .collect())
}

/// Phase argument `s = (b + (a - b) x0) / sqrt(ab)`.
fn phase_argument(rates: &RateParams, x0: f64) -> f64 {
    (rates.b() + (rates.a() - rates.b()) * x0) / rates.sqrt_ab()
}

pub fn integration_offset(rates: &RateParams, x0: Concentration) -> Result<BranchOffset> {
    if rates.is_degenerate() {
        return Err(KineticsError::DegenerateRates(rates.b()));
    }
    let s = phase_argument(rates, x0.value());
    // s = 1 only at equilibrium; allow for the rounding of x0 itself.
    if (s - 1.0).abs() <= 2.0 * f64::EPSILON {
        return Ok(BranchOffset {
            branch: Branch::Fixed,
            offset: 0.0,
            s,
        });
    }
    if s < 1.0 {
        Ok(BranchOffset {
            branch: Branch::Tanh,
            offset: s.atanh(),
            s,
        })
    } else {
        Ok(BranchOffset {
            branch: Branch::Coth,
            offset: arcoth(s),
            s,
        })
    }
}

fn arcoth(s: f64) -> f64 {
    (1.0 / s).atanh()
}

/// Literal `tanh`/`coth` closed form. Meant as a cross-check on
/// [`solve_at`]; it loses accuracy as `a` approaches `b`.
pub fn branch_closed_form(rates: &RateParams, x0: Concentration, t: f64) -> Result<f64> {
    ensure_time(t)?;
    let bo = integration_offset(rates, x0)?;
    let r = rates.sqrt_ab();
    let phase = r * t + bo.offset;
    let shape = match bo.branch {
        Branch::Fixed => return Ok(x0.value()),
        Branch::Tanh => phase.tanh(),
        Branch::Coth => 1.0 / phase.tanh(),
    };
    Ok((rates.b() - r * shape) / (rates.b() - rates.a()))
}

/// `X_C(t)` for initial value `x0`.
pub fn solve_at(rates: &RateParams, x0: Concentration, t: f64) -> Result<Concentration> {
    ensure_time(t)?;
    let (a, b) = (rates.a(), rates.b());
    if (a - b).abs() <= NEAR_DEGENERATE_GAP * a.max(b) {
        return solve_a_equals_b(0.5 * (a + b), x0, t);
    }
    if t == 0.0 {
        return Ok(x0);
    }
    let p = equilibrium_concentration(rates).value();
    let r = rates.sqrt_ab();
    if r * t > SATURATION_PHASE {
        return Ok(Concentration::clamped(p));
    }
    let d = x0.value() - p;
    let decay = (-2.0 * r * t).exp();
    let grown = -(-2.0 * r * t).exp_m1();
    let x = p + d * decay / (1.0 + d * grown * (a - b) / (2.0 * r));
    Ok(Concentration::clamped(x))
}

/// Solution of the linear `a = b` equation, `1/2 + (x0 - 1/2) exp(-2bt)`.
pub fn solve_a_equals_b(b: f64, x0: Concentration, t: f64) -> Result<Concentration> {
    ensure_positive("b", b)?;
    ensure_time(t)?;
    if t == 0.0 {
        return Ok(x0);
    }
    let x = 0.5 + (-2.0 * b * t).exp() * (x0.value() - 0.5);
    Ok(Concentration::clamped(x))
}

/// [`solve_at`] over a strictly increasing grid.
pub fn solve_series(rates: &RateParams, x0: Concentration, times: &[f64]) -> Result<Trajectory> {
    validate_grid(times)?;
    let values = times
        .iter()
        .map(|&t| solve_at(rates, x0, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times: times.to_vec(),
        values,
    })
}

/// `X_A(t)` from `X_A(0)`, obtained by exchanging `a` and `b`.
pub fn solve_complement(rates: &RateParams, x0_a: Concentration, t: f64) -> Result<Concentration> {
    solve_at(&rates.swapped(), x0_a, t)
}
