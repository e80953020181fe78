//! Discrete iterate-map view of the reaction flow.
//!
//! With `w(x) = artanh((b + (a - b) x) / sqrt(ab))` and its inverse
//! `w^-1(z) = (-b + sqrt(ab) tanh z) / (a - b)`, the continuous solution is
//! `X(t) = w^-1(sqrt(ab) t + w(X(0)))`. One step of duration
//! `tau = 1/sqrt(ab)` shifts the phase by exactly one, so the one-step map
//! `v = w^-1 . (z -> z + 1) . w` linearises to a translation (additive
//! Schröder form), and `v^m` samples the flow at `t = m tau`.
//!
//! `w` only exists between the unstable root and equilibrium. The
//! production step [`ConjugacyContext::step_v`] therefore advances the
//! flow through [`solve_at`] for one step, which covers both sides of
//! equilibrium; `w`/`w^-1` are kept as the verification path.

use crate::analytic::solve_at;
use crate::error::{ensure_positive, ensure_time, KineticsError, Result};
use crate::kinetics::{characteristic_time, equilibrium_concentration, Concentration, RateParams};

/// Upper bound on the number of steps actually composed per call. The
/// orbit sits on the fixed point long before this.
pub const MAX_ITERATIONS: u64 = 1_000_000;

/// Rates plus the step bookkeeping of the iterate map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugacyContext {
    pub rates: RateParams,
    /// Phase advanced per step, `sqrt(ab) tau`; 1 whenever `a != b`.
    pub step_shift: f64,
    /// Duration of one step.
    pub tau: f64,
}

impl ConjugacyContext {
    pub fn new(rates: RateParams) -> Self {
        let tau = characteristic_time(&rates);
        Self {
            rates,
            step_shift: rates.sqrt_ab() * tau,
            tau,
        }
    }

    fn require_distinct(&self) -> Result<()> {
        if self.rates.is_degenerate() {
            Err(KineticsError::DegenerateRates(self.rates.b()))
        } else {
            Ok(())
        }
    }

    /// `(-b + sqrt(ab) tanh z) / (a - b)`. Returned as a raw value: phases
    /// far below zero map outside `[0, 1]`.
    pub fn w_inverse(&self, z: f64) -> Result<f64> {
        self.require_distinct()?;
        let (a, b) = (self.rates.a(), self.rates.b());
        Ok((-b + self.rates.sqrt_ab() * z.tanh()) / (a - b))
    }

    /// Phase `artanh(s)` of a concentration on the tanh branch.
    pub fn w_forward(&self, x: f64) -> Result<f64> {
        self.require_distinct()?;
        let (a, b) = (self.rates.a(), self.rates.b());
        let s = (b + (a - b) * x) / self.rates.sqrt_ab();
        if (s - 1.0).abs() <= 2.0 * f64::EPSILON {
            return Err(KineticsError::PhaseSaturated(x));
        }
        if s.abs() >= 1.0 || s.is_nan() {
            return Err(KineticsError::OutsideTanhDomain(s));
        }
        Ok(s.atanh())
    }

    /// The one-step map `v`: advance the flow by `tau`.
    pub fn step_v(&self, x: Concentration) -> Concentration {
        if self.rates.is_degenerate() {
            return degenerate_step(x);
        }
        solve_at(&self.rates, x, self.tau).expect("tau is a valid positive time")
    }

    /// `v^m(x0)`.
    pub fn iterate_n(&self, x0: Concentration, m: u64) -> Concentration {
        let mut x = x0;
        for _ in 0..m.min(MAX_ITERATIONS) {
            let next = self.step_v(x);
            if next == x {
                return x;
            }
            x = next;
        }
        if m > MAX_ITERATIONS {
            equilibrium_concentration(&self.rates)
        } else {
            x
        }
    }

    /// The whole orbit `x0, v(x0), ..., v^m(x0)`.
    pub fn orbit(&self, x0: Concentration, m: u64) -> Vec<Concentration> {
        let m = m.min(MAX_ITERATIONS);
        std::iter::successors(Some(x0), |&x| Some(self.step_v(x)))
            .take(m as usize + 1)
            .collect()
    }

    /// How far one step is from a pure phase translation.
    ///
    /// For `a != b` this is `|w(v(x)) - w(x) - step_shift|` and needs `x` on
    /// the tanh branch. For `a = b` the map is linear around 1/2 and the
    /// multiplicative form `|(v(x) - 1/2)/(x - 1/2) - e^-1|` is returned.
    pub fn schroder_residual(&self, x: Concentration) -> Result<f64> {
        if self.rates.is_degenerate() {
            return degenerate_schroder_residual(x);
        }
        let before = self.w_forward(x.value())?;
        let after = self.w_forward(self.step_v(x).value())?;
        Ok((after - before - self.step_shift).abs())
    }
}

/// One step of the `a = b` map, whose duration `1/(2b)` makes the step
/// independent of `b`: `1/2 + e^-1 (x - 1/2)`.
pub fn step_v_degenerate(b: f64, x: Concentration) -> Result<Concentration> {
    ensure_positive("b", b)?;
    Ok(degenerate_step(x))
}

fn degenerate_step(x: Concentration) -> Concentration {
    Concentration::clamped(0.5 + (-1.0f64).exp() * (x.value() - 0.5))
}

fn degenerate_schroder_residual(x: Concentration) -> Result<f64> {
    let gap = x.value() - 0.5;
    if gap == 0.0 {
        return Err(KineticsError::PhaseSaturated(x.value()));
    }
    let ratio = (degenerate_step(x).value() - 0.5) / gap;
    Ok((ratio - (-1.0f64).exp()).abs())
}

/// A one-parameter family of maps `x -> f^t(x)`.
pub trait Flow {
    fn advance(&self, x: Concentration, t: f64) -> Result<Concentration>;
}

impl Flow for RateParams {
    fn advance(&self, x: Concentration, t: f64) -> Result<Concentration> {
        solve_at(self, x, t)
    }
}

/// The `a = b` flow, kept separate so it can be checked without going
/// through [`solve_at`]'s dispatch.
#[derive(Debug, Clone, Copy)]
pub struct DegenerateFlow {
    pub b: f64,
}

impl Flow for DegenerateFlow {
    fn advance(&self, x: Concentration, t: f64) -> Result<Concentration> {
        crate::analytic::solve_a_equals_b(self.b, x, t)
    }
}

/// Largest violation of `f^t1 . f^t2 = f^t2 . f^t1 = f^(t1+t2)`.
pub fn semigroup_residual<F: Flow + ?Sized>(flow: &F, x0: Concentration, t1: f64, t2: f64) -> Result<f64> {
    ensure_time(t1)?;
    ensure_time(t2)?;
    let one_two = flow.advance(flow.advance(x0, t2)?, t1)?.value();
    let two_one = flow.advance(flow.advance(x0, t1)?, t2)?.value();
    let direct = flow.advance(x0, t1 + t2)?.value();
    Ok((one_two - direct).abs().max((one_two - two_one).abs()))
}
