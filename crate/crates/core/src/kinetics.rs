//! Physical inputs, rate constants, equilibria and characteristic times for
//! the reversible reaction `A + B <-> C + D`.
//!
//! Everything here is unit-agnostic: supply any consistent unit system
//! (SI recommended) and the outputs come back in the matching units.

use crate::error::{ensure_positive, ensure_time, KineticsError, Result};

/// Relative gap `|a - b| / max(a, b)` below which the `a = b` branch of the
/// characteristic time is considered "close" and reported as a discontinuity.
pub const TAU_DISCONTINUITY_GAP: f64 = 1e-9;

/// Physical description of the reaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionSpec {
    /// Total number density of A + C.
    pub n: f64,
    /// Mean speed of B.
    pub v_b: f64,
    /// Mean speed of D.
    pub v_d: f64,
    /// Cross-section of `AB -> CD`.
    pub sigma_fwd: f64,
    /// Cross-section of `CD -> AB`.
    pub sigma_bwd: f64,
}

impl ReactionSpec {
    pub fn new(n: f64, v_b: f64, v_d: f64, sigma_fwd: f64, sigma_bwd: f64) -> Result<Self> {
        let spec = Self {
            n,
            v_b,
            v_d,
            sigma_fwd,
            sigma_bwd,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("n", self.n)?;
        ensure_positive("v_B", self.v_b)?;
        ensure_positive("v_D", self.v_d)?;
        ensure_positive("sigma_fwd", self.sigma_fwd)?;
        ensure_positive("sigma_bwd", self.sigma_bwd)?;
        Ok(())
    }
}

/// Rate constants of the master equation: `a` drives `C -> A`, `b` drives
/// `A -> C`. Both are inverse times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    a: f64,
    b: f64,
}

impl RateParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        ensure_positive("a", a)?;
        ensure_positive("b", b)?;
        Ok(Self { a, b })
    }

    /// Backward rate constant.
    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Forward rate constant.
    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    /// `sqrt(a b)`; falls back to `sqrt(a) sqrt(b)` when the product would
    /// overflow or underflow.
    #[inline]
    pub fn sqrt_ab(&self) -> f64 {
        let product = self.a * self.b;
        if product.is_normal() {
            product.sqrt()
        } else {
            self.a.sqrt() * self.b.sqrt()
        }
    }

    /// Rates with the roles of A and C exchanged.
    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a }
    }

    /// Exact equality, the literal `a = b` case.
    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// Right side of the kinetic equation, `dX_C/dt = b (1 - X)^2 - a X^2`.
    #[inline]
    pub fn rhs(&self, x: f64) -> f64 {
        let xa = 1.0 - x;
        self.b * xa * xa - self.a * x * x
    }

    /// Derivative of [`rhs`](Self::rhs) with respect to `X`.
    #[inline]
    pub fn rhs_slope(&self, x: f64) -> f64 {
        2.0 * (self.b - self.a) * x - 2.0 * self.b
    }
}

/// Relative concentration, a probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Concentration(f64);

impl Concentration {
    pub const HALF: Concentration = Concentration(0.5);

    pub fn new(x: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&x) {
            Ok(Self(x))
        } else {
            Err(KineticsError::ConcentrationOutOfRange(x))
        }
    }

    /// Clamps `x` into `[0, 1]`. Only meant for values that are already in
    /// range up to rounding.
    pub(crate) fn clamped(x: f64) -> Self {
        Self(x.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - x`, the concentration of the partner species.
    #[inline]
    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

impl From<Concentration> for f64 {
    fn from(c: Concentration) -> f64 {
        c.0
    }
}

/// Roots of the right side of the kinetic equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoints {
    /// The attractor; always in `[0, 1]`.
    pub x_stable: f64,
    /// The repeller; `None` when `a = b` (the equation is then linear).
    pub x_unstable: Option<f64>,
    pub degenerate: bool,
}

pub fn rates_from_spec(spec: &ReactionSpec) -> Result<RateParams> {
    spec.validate()?;
    RateParams::new(
        spec.n * spec.v_d * spec.sigma_bwd,
        spec.n * spec.v_b * spec.sigma_fwd,
    )
}

/// Both equilibrium candidates, classified by the sign of the slope of the
/// kinetic right side at each root.
pub fn fixed_points(rates: &RateParams) -> FixedPoints {
    if rates.is_degenerate() {
        return FixedPoints {
            x_stable: 0.5,
            x_unstable: None,
            degenerate: true,
        };
    }
    let (sa, sb) = (rates.a.sqrt(), rates.b.sqrt());
    // (b - sqrt(ab)) / (b - a) and (b + sqrt(ab)) / (b - a), with the
    // common factor (sqrt(b) - sqrt(a)) cancelled.
    let minus_root = sb / (sa + sb);
    let plus_root = sb / (sb - sa);
    let (x_stable, x_unstable) = if rates.rhs_slope(minus_root) < 0.0 {
        (minus_root, plus_root)
    } else {
        (plus_root, minus_root)
    };
    FixedPoints {
        x_stable,
        x_unstable: Some(x_unstable),
        degenerate: false,
    }
}

/// `X_C(inf) = sqrt(b) / (sqrt(a) + sqrt(b))`.
pub fn equilibrium_concentration(rates: &RateParams) -> Concentration {
    let (sa, sb) = (rates.a.sqrt(), rates.b.sqrt());
    Concentration::clamped(sb / (sa + sb))
}

/// `X_C(inf) / X_A(inf) = sqrt(b / a)`.
pub fn equilibrium_ratio(rates: &RateParams) -> f64 {
    rates.b.sqrt() / rates.a.sqrt()
}

/// Time of one iteration step: `1/sqrt(ab)` when `a != b`, `1/(2b)` when
/// `a == b` exactly. The two branches do not join continuously; see
/// [`tau_discontinuity_flag`].
pub fn characteristic_time(rates: &RateParams) -> f64 {
    if rates.is_degenerate() {
        1.0 / (2.0 * rates.b)
    } else {
        1.0 / rates.sqrt_ab()
    }
}

/// True when `a` and `b` are close enough that the jump between the two
/// branches of [`characteristic_time`] matters.
pub fn tau_discontinuity_flag(rates: &RateParams) -> bool {
    (rates.a - rates.b).abs() <= TAU_DISCONTINUITY_GAP * rates.a.max(rates.b)
}

/// Characteristic time written through the gain and loss rates,
/// `sqrt(n_A n_C) / ((n_A + n_C) sqrt(R(A->C) R(C->A)))`.
pub fn tau_gain_loss_form(n_a: f64, n_c: f64, rate_ac: f64, rate_ca: f64) -> Result<f64> {
    ensure_positive("n_A", n_a)?;
    ensure_positive("n_C", n_c)?;
    ensure_positive("R(A->C)", rate_ac)?;
    ensure_positive("R(C->A)", rate_ca)?;
    Ok((n_a.sqrt() * n_c.sqrt()) / ((n_a + n_c) * (rate_ac.sqrt() * rate_ca.sqrt())))
}

/// `1 / (n_B sigma)`.
pub fn mean_free_path(n_b: f64, sigma: f64) -> Result<f64> {
    ensure_positive("n_B", n_b)?;
    ensure_positive("sigma", sigma)?;
    Ok(1.0 / (n_b * sigma))
}

/// Mean free path divided by the speed of the projectile.
pub fn free_flight_time(n_b: f64, v_a: f64, sigma: f64) -> Result<f64> {
    ensure_positive("v_A", v_a)?;
    Ok(mean_free_path(n_b, sigma)? / v_a)
}

/// Surviving fraction `exp(-t/tau_A)` of unscattered particles.
pub fn pure_loss_fraction(t: f64, tau_a: f64) -> Result<f64> {
    ensure_time(t)?;
    ensure_positive("tau_A", tau_a)?;
    Ok((-t / tau_a).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rates(a: f64, b: f64) -> RateParams {
        RateParams::new(a, b).unwrap()
    }

    #[test]
    fn rates_from_reference_specs() {
        let r = rates_from_spec(&ReactionSpec::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!((r.a(), r.b()), (1.0, 1.0));
        let r = rates_from_spec(&ReactionSpec::new(2.0, 5.0, 1.0, 5.0, 1.0).unwrap()).unwrap();
        assert_eq!((r.a(), r.b()), (2.0, 50.0));
        let r = rates_from_spec(&ReactionSpec::new(1.0, 0.5, 2.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!((r.a(), r.b()), (2.0, 0.5));
    }

    #[test]
    fn spec_rejects_bad_fields() {
        assert!(ReactionSpec::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ReactionSpec::new(1.0, -1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ReactionSpec::new(1.0, 1.0, f64::INFINITY, 1.0, 1.0).is_err());
        assert!(ReactionSpec::new(1.0, 1.0, 1.0, f64::NAN, 1.0).is_err());
        let raw = ReactionSpec {
            n: 1.0,
            v_b: 1.0,
            v_d: 1.0,
            sigma_fwd: 1.0,
            sigma_bwd: 0.0,
        };
        assert!(rates_from_spec(&raw).is_err());
        assert!(RateParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn fixed_points_of_reference_rates() {
        let fp = fixed_points(&rates(2.0, 0.5));
        assert_relative_eq!(fp.x_stable, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(fp.x_unstable.unwrap(), -1.0, epsilon = 1e-15);
        let fp = fixed_points(&rates(2.0, 50.0));
        assert_relative_eq!(fp.x_stable, 5.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(fp.x_unstable.unwrap(), 1.25, epsilon = 1e-15);
        let fp = fixed_points(&rates(3.0, 3.0));
        assert!(fp.degenerate);
        assert_eq!(fp.x_stable, 0.5);
        assert_eq!(fp.x_unstable, None);
    }

    #[test]
    fn fixed_points_are_roots() {
        let r = rates(2.0, 50.0);
        let fp = fixed_points(&r);
        assert!(r.rhs(fp.x_stable).abs() < 1e-12);
        assert!(r.rhs(fp.x_unstable.unwrap()).abs() < 1e-12);
        assert!(r.rhs_slope(fp.x_stable) < 0.0);
        assert!(r.rhs_slope(fp.x_unstable.unwrap()) > 0.0);
    }

    #[test]
    fn equilibria_and_ratios() {
        assert_relative_eq!(
            equilibrium_concentration(&rates(2.0, 0.5)).value(),
            1.0 / 3.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            equilibrium_concentration(&rates(2.0, 50.0)).value(),
            5.0 / 6.0,
            epsilon = 1e-15
        );
        assert_eq!(equilibrium_concentration(&rates(7.0, 7.0)).value(), 0.5);
        assert_eq!(equilibrium_ratio(&rates(4.0, 4.0)), 1.0);
        assert_relative_eq!(equilibrium_ratio(&rates(2.0, 50.0)), 5.0, epsilon = 1e-15);
        assert_relative_eq!(equilibrium_ratio(&rates(2.0, 0.5)), 0.5, epsilon = 1e-15);
        for (a, b) in [(2.0, 0.5), (1e-3, 7.0), (9.0, 9.5)] {
            let r = rates(a, b);
            assert_eq!(equilibrium_concentration(&r).value(), fixed_points(&r).x_stable);
        }
    }

    #[test]
    fn characteristic_time_branches() {
        assert_relative_eq!(characteristic_time(&rates(2.0, 0.5)), 1.0, epsilon = 1e-15);
        assert_eq!(characteristic_time(&rates(2.0, 2.0)), 0.25);
        assert_relative_eq!(characteristic_time(&rates(2.0, 50.0)), 0.1, epsilon = 1e-15);
        assert!(tau_discontinuity_flag(&rates(2.0, 2.0)));
        assert!(tau_discontinuity_flag(&rates(10.0, 10.0 + 1e-9)));
        assert!(!tau_discontinuity_flag(&rates(2.0, 2.1)));
    }

    #[test]
    fn doubling_density_halves_tau() {
        let spec = ReactionSpec::new(1.7, 0.3, 2.9, 1.1, 0.4).unwrap();
        let doubled = ReactionSpec {
            n: 2.0 * spec.n,
            ..spec
        };
        let (r1, r2) = (
            rates_from_spec(&spec).unwrap(),
            rates_from_spec(&doubled).unwrap(),
        );
        assert_eq!(r2.a(), 2.0 * r1.a());
        assert_eq!(r2.b(), 2.0 * r1.b());
        assert_eq!(characteristic_time(&r2), characteristic_time(&r1) / 2.0);
    }

    #[test]
    fn gain_loss_tau() {
        let (a, b) = (2.0, 0.5);
        assert_relative_eq!(
            tau_gain_loss_form(1.0, 1.0, b / 2.0, a / 2.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            tau_gain_loss_form(3.0, 3.0, 0.2, 0.2).unwrap(),
            2.5,
            epsilon = 1e-15
        );
        assert!(tau_gain_loss_form(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(tau_gain_loss_form(1.0, 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn free_flight_quantities() {
        assert_eq!(mean_free_path(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(mean_free_path(2.0, 0.5).unwrap(), 1.0);
        assert_relative_eq!(mean_free_path(10.0, 0.1).unwrap(), 1.0, epsilon = 1e-15);
        assert!(mean_free_path(0.0, 1.0).is_err());
        assert_eq!(free_flight_time(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(free_flight_time(1.0, 2.0, 1.0).unwrap(), 0.5);
        assert_eq!(free_flight_time(4.0, 0.5, 0.5).unwrap(), 1.0);
        assert!(free_flight_time(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn pure_loss() {
        assert_eq!(pure_loss_fraction(0.0, 3.0).unwrap(), 1.0);
        assert_relative_eq!(
            pure_loss_fraction(3.0, 3.0).unwrap(),
            0.367_879_441_171_442_3,
            epsilon = 1e-15
        );
        assert_eq!(pure_loss_fraction(f64::INFINITY, 3.0).unwrap(), 0.0);
        assert!(pure_loss_fraction(-1.0, 3.0).is_err());
        assert!(pure_loss_fraction(1.0, 0.0).is_err());
    }

    #[test]
    fn concentration_bounds() {
        assert!(Concentration::new(-1e-18).is_err());
        assert!(Concentration::new(1.0 + 1e-15).is_err());
        assert!(Concentration::new(f64::NAN).is_err());
        assert_eq!(Concentration::new(0.25).unwrap().complement().value(), 0.75);
    }
}
