//! Browser bindings for the kinetx solvers.
//!
//! The plain functions in [`demo`] do the work and are tested natively; the
//! `#[wasm_bindgen]` exports below only convert errors for JavaScript.
//! Curves are returned as flat `[t0, x0, t1, x1, ...]` arrays.

use wasm_bindgen::prelude::*;

pub mod demo {
    use kinetx::analytic::{integration_offset, solve_series, uniform_grid};
    use kinetx::conjugacy::ConjugacyContext;
    use kinetx::kinetics::{characteristic_time, equilibrium_concentration, equilibrium_ratio};
    use kinetx::oracles::gillespie_sample;
    use kinetx::{Concentration, RateParams};

    /// Hard cap on points returned to the page.
    pub const MAX_POINTS: usize = 5000;
    pub const MAX_ITERATES: u64 = 200;
    pub const MAX_PARTICLES: u64 = 1_000_000;

    fn setup(a: f64, b: f64, x0: f64) -> Result<(RateParams, Concentration), String> {
        let rates = RateParams::new(a, b).map_err(|e| e.to_string())?;
        let x0 = Concentration::new(x0).map_err(|e| e.to_string())?;
        Ok((rates, x0))
    }

    fn interleave(times: &[f64], values: impl Iterator<Item = f64>) -> Vec<f64> {
        times.iter().zip(values).flat_map(|(&t, x)| [t, x]).collect()
    }

    /// `X_C(t)` on `points` equally spaced times in `[0, t_span_in_tau * tau]`.
    pub fn trajectory(
        a: f64,
        b: f64,
        x0: f64,
        t_span_in_tau: f64,
        points: usize,
    ) -> Result<Vec<f64>, String> {
        let (rates, x0) = setup(a, b, x0)?;
        let t_end = t_span_in_tau * characteristic_time(&rates);
        let grid = uniform_grid(t_end, points.clamp(1, MAX_POINTS)).map_err(|e| e.to_string())?;
        let traj = solve_series(&rates, x0, &grid).map_err(|e| e.to_string())?;
        Ok(interleave(&traj.times, traj.values.iter().map(|x| x.value())))
    }

    /// Orbit of the one-step map: `X_C(m tau)` for `m = 0..=m`.
    pub fn iterates(a: f64, b: f64, x0: f64, m: u64) -> Result<Vec<f64>, String> {
        let (rates, x0) = setup(a, b, x0)?;
        let ctx = ConjugacyContext::new(rates);
        let orbit = ctx.orbit(x0, m.min(MAX_ITERATES));
        let times: Vec<f64> = (0..orbit.len()).map(|k| k as f64 * ctx.tau).collect();
        Ok(interleave(&times, orbit.iter().map(|x| x.value())))
    }

    /// One stochastic run of `n_particles`, sampled on the same grid as
    /// [`trajectory`].
    pub fn stochastic_path(
        a: f64,
        b: f64,
        x0: f64,
        n_particles: u64,
        t_span_in_tau: f64,
        points: usize,
        seed: u64,
    ) -> Result<Vec<f64>, String> {
        let (rates, x0) = setup(a, b, x0)?;
        if n_particles > MAX_PARTICLES {
            return Err(format!("at most {MAX_PARTICLES} particles"));
        }
        let t_end = t_span_in_tau * characteristic_time(&rates);
        let grid = uniform_grid(t_end, points.clamp(1, MAX_POINTS)).map_err(|e| e.to_string())?;
        let counts = gillespie_sample(&rates, n_particles, x0, &grid, seed).map_err(|e| e.to_string())?;
        Ok(interleave(
            &grid,
            counts.iter().map(|&c| c as f64 / n_particles as f64),
        ))
    }

    /// Short human-readable description of the rates and starting point.
    pub fn summary(a: f64, b: f64, x0: f64) -> Result<String, String> {
        let (rates, x0) = setup(a, b, x0)?;
        let branch = if rates.is_degenerate() {
            "a = b"
        } else {
            integration_offset(&rates, x0)
                .map_err(|e| e.to_string())?
                .branch
                .as_str()
        };
        Ok(format!(
            "X_eq = {:.6}   X_C/X_A = {:.6}   tau = {:.6}   branch: {branch}",
            equilibrium_concentration(&rates).value(),
            equilibrium_ratio(&rates),
            characteristic_time(&rates),
        ))
    }
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
pub fn trajectory(a: f64, b: f64, x0: f64, t_span_in_tau: f64, points: usize) -> Result<Vec<f64>, JsError> {
    demo::trajectory(a, b, x0, t_span_in_tau, points).map_err(js)
}

#[wasm_bindgen]
pub fn iterates(a: f64, b: f64, x0: f64, m: u32) -> Result<Vec<f64>, JsError> {
    demo::iterates(a, b, x0, u64::from(m)).map_err(js)
}

#[wasm_bindgen(js_name = stochasticPath)]
pub fn stochastic_path(
    a: f64,
    b: f64,
    x0: f64,
    n_particles: u32,
    t_span_in_tau: f64,
    points: usize,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    demo::stochastic_path(
        a,
        b,
        x0,
        u64::from(n_particles),
        t_span_in_tau,
        points,
        u64::from(seed),
    )
    .map_err(js)
}

#[wasm_bindgen]
pub fn summary(a: f64, b: f64, x0: f64) -> Result<String, JsError> {
    demo::summary(a, b, x0).map_err(js)
}
