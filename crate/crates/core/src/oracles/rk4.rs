use crate::analytic::Trajectory;
use crate::error::{KineticsError, Result};
use crate::kinetics::{Concentration, RateParams};

/// How far a step may leave `[0, 1]` before it is counted as an excursion.
pub const RANGE_SLACK: f64 = 1e-12;

/// Output of [`rk4_integrate`].
#[derive(Debug, Clone)]
pub struct Rk4Run {
    /// State after every step, clamped into `[0, 1]`.
    pub trajectory: Trajectory,
    /// Steps whose raw value left `[0, 1]` by more than [`RANGE_SLACK`].
    pub range_excursions: usize,
    /// Step actually used: `t_end / ceil(t_end / dt)`, never above `dt`.
    pub step: f64,
}

/// Classical fixed-step fourth-order Runge-Kutta on
/// `dX/dt = b + (b - a) X^2 - 2 b X`.
///
/// The step is shrunk so that a whole number of steps lands on `t_end`.
pub fn rk4_integrate(rates: &RateParams, x0: Concentration, t_end: f64, dt: f64) -> Result<Rk4Run> {
    if !(dt > 0.0 && dt.is_finite() && t_end.is_finite() && dt <= t_end) {
        return Err(KineticsError::InvalidStep { dt, t_end });
    }
    let n = (t_end / dt).ceil() as usize;
    let h = t_end / n as f64;
    let f = |x: f64| rates.rhs(x);

    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    times.push(0.0);
    values.push(x0);
    let mut x = x0.value();
    let mut range_excursions = 0;
    for i in 1..=n {
        let k1 = f(x);
        let k2 = f(x + 0.5 * h * k1);
        let k3 = f(x + 0.5 * h * k2);
        let k4 = f(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&x) {
            range_excursions += 1;
        }
        x = x.clamp(0.0, 1.0);
        times.push(if i == n { t_end } else { h * i as f64 });
        values.push(Concentration::clamped(x));
    }
    Ok(Rk4Run {
        trajectory: Trajectory { times, values },
        range_excursions,
        step: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::solve_at;
    use crate::kinetics::equilibrium_concentration;

    fn max_dev(rates: &RateParams, x0: Concentration, t_end: f64, dt: f64) -> f64 {
        let run = rk4_integrate(rates, x0, t_end, dt).unwrap();
        run.trajectory
            .iter()
            .map(|(t, x)| (x.value() - solve_at(rates, x0, t).unwrap().value()).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn equilibrium_is_constant() {
        let r = RateParams::new(2.0, 50.0).unwrap();
        let eq = equilibrium_concentration(&r);
        let run = rk4_integrate(&r, eq, 1.0, 1e-3).unwrap();
        assert!(run
            .trajectory
            .values
            .iter()
            .all(|x| (x.value() - eq.value()).abs() <= 1e-12));
        assert_eq!(run.range_excursions, 0);
    }

    #[test]
    fn slow_forward_endpoint() {
        let r = RateParams::new(2.0, 0.5).unwrap();
        let run = rk4_integrate(&r, Concentration::new(0.0).unwrap(), 10.0, 1e-4).unwrap();
        let (t, x) = run.trajectory.last().unwrap();
        assert_eq!(t, 10.0);
        assert!((x.value() - 1.0 / 3.0).abs() <= 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let r = RateParams::new(2.0, 0.5).unwrap();
        let x0 = Concentration::new(0.0).unwrap();
        let coarse = max_dev(&r, x0, 4.0, 0.1);
        let fine = max_dev(&r, x0, 4.0, 0.05);
        let ratio = coarse / fine;
        assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rejects_bad_steps() {
        let r = RateParams::new(2.0, 0.5).unwrap();
        let x0 = Concentration::new(0.0).unwrap();
        assert!(rk4_integrate(&r, x0, 1.0, 0.0).is_err());
        assert!(rk4_integrate(&r, x0, 1.0, 2.0).is_err());
        assert!(rk4_integrate(&r, x0, 1.0, -0.1).is_err());
        let run = rk4_integrate(&r, x0, 1.0, 0.3).unwrap();
        assert_eq!(run.trajectory.len(), 5);
        assert!(run.step <= 0.3);
    }
}
