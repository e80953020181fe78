use std::io::Write;

use super::config::*;
use super::output::{format_number as num, Csv, Summary};
use super::{CliError, Outcome, EXIT_OK, EXIT_VALIDATION};
use crate::analytic::{integration_offset, solve_at, solve_series, NEAR_DEGENERATE_GAP};
use crate::conjugacy::ConjugacyContext;
use crate::kinetics::{
    characteristic_time, equilibrium_concentration, equilibrium_ratio, fixed_points, tau_discontinuity_flag,
    RateParams,
};
use crate::oracles::{gillespie_ensemble_mean, rk4_integrate};
use crate::statmech::{
    balanced_sigma_ratio, chemical_potential_gap, detailed_balance_residual, predicted_sigma_ratio,
    KineticQuartet,
};

/// Fraction of Gillespie grid points that must fall inside the band.
pub const GILLESPIE_PASS_FRACTION: f64 = 0.95;

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

fn branch_label(rates: &RateParams, x0: crate::kinetics::Concentration) -> Result<&'static str, CliError> {
    let (a, b) = (rates.a(), rates.b());
    if (a - b).abs() <= NEAR_DEGENERATE_GAP * a.max(b) {
        return Ok("degenerate");
    }
    Ok(integration_offset(rates, x0).map_err(numeric)?.branch.as_str())
}

fn tau_rule(rates: &RateParams) -> &'static str {
    if rates.is_degenerate() {
        "1/(2b)"
    } else {
        "1/sqrt(ab)"
    }
}

/// Adds both branches of the characteristic time when they are close
/// enough for the jump between them to matter.
fn with_tau_flag(summary: Summary, rates: &RateParams) -> Summary {
    if !tau_discontinuity_flag(rates) {
        return summary.text("tau_discontinuity", "none");
    }
    summary
        .text("tau_discontinuity", "flagged")
        .num("tau_sqrt_branch", 1.0 / rates.sqrt_ab())
        .num("tau_equal_branch", 1.0 / (rates.a() + rates.b()))
}

fn rate_summary(command: &str, rates: &RateParams) -> Summary {
    Summary::new()
        .text("command", command)
        .num("a", rates.a())
        .num("b", rates.b())
}

pub fn solve(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let rates = cfg.rate_params()?;
    let x0 = cfg.initial()?;
    let grid = cfg.grid(&rates, DEFAULT_STEPS)?;
    let traj = solve_series(&rates, x0, &grid).map_err(numeric)?;

    let mut csv = Csv::new(&["t", "X_C", "X_A"]);
    for (t, x) in traj.iter() {
        csv.row(&[num(t), num(x.value()), num(x.complement().value())]);
    }
    let data_on_stdout = csv.emit(cfg.out.as_deref(), stdout)?;

    let (_, last) = traj.last().expect("grid is non-empty");
    let summary = rate_summary("solve", &rates)
        .num("x0", x0.value())
        .num("X_eq", equilibrium_concentration(&rates).value())
        .num("tau", characteristic_time(&rates))
        .text("branch", branch_label(&rates, x0)?)
        .num("X_end", last.value())
        .text("rows", traj.len());
    Ok(Outcome {
        summary: with_tau_flag(summary, &rates),
        exit_code: EXIT_OK,
        data_on_stdout,
    })
}

pub fn iterate(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let rates = cfg.rate_params()?;
    let x0 = cfg.initial()?;
    let m = cfg.m.unwrap_or(DEFAULT_M);
    let ctx = ConjugacyContext::new(rates);
    let orbit = ctx.orbit(x0, m);

    let mut csv = Csv::new(&["m", "X_C"]);
    for (k, x) in orbit.iter().enumerate() {
        csv.row(&[k.to_string(), num(x.value())]);
    }
    let data_on_stdout = csv.emit(cfg.out.as_deref(), stdout)?;

    let summary = rate_summary("iterate", &rates)
        .num("x0", x0.value())
        .text("m", orbit.len() - 1)
        .num("tau", ctx.tau)
        .text("tau_rule", tau_rule(&rates))
        .num("step_shift", ctx.step_shift)
        .num("X_m", orbit.last().expect("orbit holds x0").value())
        .num("X_eq", equilibrium_concentration(&rates).value());
    Ok(Outcome {
        summary: with_tau_flag(summary, &rates),
        exit_code: EXIT_OK,
        data_on_stdout,
    })
}

pub fn equilibrium(cfg: &RunConfig, _stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let rates = cfg.rate_params()?;
    let fp = fixed_points(&rates);
    let summary = rate_summary("equilibrium", &rates)
        .num("X_eq", equilibrium_concentration(&rates).value())
        .num("X_A_eq", 1.0 - equilibrium_concentration(&rates).value())
        .num("ratio", equilibrium_ratio(&rates))
        .text(
            "X_unstable",
            fp.x_unstable.map_or_else(|| "none".to_string(), num),
        )
        .text("degenerate", fp.degenerate)
        .num("tau", characteristic_time(&rates));
    Ok(Outcome {
        summary,
        exit_code: EXIT_OK,
        data_on_stdout: false,
    })
}

pub fn chartime(cfg: &RunConfig, _stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let rates = cfg.rate_params()?;
    let summary = rate_summary("chartime", &rates)
        .num("tau", characteristic_time(&rates))
        .text("tau_rule", tau_rule(&rates));
    Ok(Outcome {
        summary: with_tau_flag(summary, &rates),
        exit_code: EXIT_OK,
        data_on_stdout: false,
    })
}

pub fn validate(cfg: &RunConfig, _stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    match cfg.oracle.unwrap_or(OracleKind::Rk4) {
        OracleKind::Rk4 => validate_rk4(cfg),
        OracleKind::Gillespie => validate_gillespie(cfg),
    }
}

fn status(pass: bool) -> (&'static str, i32) {
    if pass {
        ("PASS", EXIT_OK)
    } else {
        ("FAIL", EXIT_VALIDATION)
    }
}

fn validate_rk4(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rates = cfg.rate_params()?;
    let x0 = cfg.initial()?;
    let tau = characteristic_time(&rates);
    let t_end = cfg.t_end(&rates)?;
    let dt = cfg.dt.unwrap_or(tau / DEFAULT_STEPS_PER_TAU);
    let tolerance = cfg.tolerance.unwrap_or(DEFAULT_RK4_TOLERANCE);
    let run = rk4_integrate(&rates, x0, t_end, dt).map_err(|e| CliError::Invalid(e.to_string()))?;

    let mut csv = Csv::new(&["t", "analytic", "rk4", "deviation"]);
    let mut max_dev = 0.0f64;
    for (t, x) in run.trajectory.iter() {
        let exact = solve_at(&rates, x0, t).map_err(numeric)?.value();
        let dev = (x.value() - exact).abs();
        max_dev = max_dev.max(dev);
        csv.row(&[num(t), num(exact), num(x.value()), num(dev)]);
    }
    if let Some(out) = cfg.out.as_deref() {
        csv.emit(Some(out), &mut std::io::sink())?;
    }
    let (label, exit_code) = status(max_dev <= tolerance);
    let summary = rate_summary("validate", &rates)
        .text("oracle", "rk4")
        .num("x0", x0.value())
        .num("t_end", t_end)
        .num("dt", run.step)
        .num("max_deviation", max_dev)
        .num("tolerance", tolerance)
        .text("range_excursions", run.range_excursions)
        .text("status", label);
    Ok(Outcome {
        summary,
        exit_code,
        data_on_stdout: false,
    })
}

fn validate_gillespie(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rates = cfg.rate_params()?;
    let x0 = cfg.initial()?;
    let grid = cfg.grid(&rates, DEFAULT_GILLESPIE_STEPS)?;
    let n_total = cfg.n_particles.unwrap_or(DEFAULT_PARTICLES);
    let trials = cfg.trials.unwrap_or(DEFAULT_TRIALS);
    let seed = cfg.seed.unwrap_or(0);
    let k = cfg.tolerance.unwrap_or(DEFAULT_SIGMA_MULTIPLIER);
    let ens = gillespie_ensemble_mean(&rates, n_total, x0, &grid, trials, seed)
        .map_err(|e| CliError::Invalid(e.to_string()))?;

    let mut csv = Csv::new(&["t", "analytic", "mean", "std_err", "within"]);
    let mut within = 0usize;
    for (i, &t) in ens.times.iter().enumerate() {
        let exact = solve_at(&rates, x0, t).map_err(numeric)?.value();
        let ok = (ens.mean[i] - exact).abs() <= k * ens.std_err[i];
        within += usize::from(ok);
        csv.row(&[
            num(t),
            num(exact),
            num(ens.mean[i]),
            num(ens.std_err[i]),
            ok.to_string(),
        ]);
    }
    if let Some(out) = cfg.out.as_deref() {
        csv.emit(Some(out), &mut std::io::sink())?;
    }
    let fraction = within as f64 / grid.len() as f64;
    let (label, exit_code) = status(fraction >= GILLESPIE_PASS_FRACTION);
    let summary = rate_summary("validate", &rates)
        .text("oracle", "gillespie")
        .num("x0", x0.value())
        .text("n_particles", n_total)
        .text("trials", trials)
        .text("seed", seed)
        .text("points", grid.len())
        .text("within", within)
        .num("fraction", fraction)
        .num("sigma_multiplier", k)
        .text("status", label);
    Ok(Outcome {
        summary,
        exit_code,
        data_on_stdout: false,
    })
}

pub fn statmech(cfg: &RunConfig, _stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let (quartet, kinetic, ctx, speeds_given) = cfg.quartet()?;
    let invalid = |e: crate::KineticsError| CliError::Invalid(e.to_string());
    let predicted = predicted_sigma_ratio(&quartet).map_err(invalid)?;
    let residual = detailed_balance_residual(&quartet, &kinetic).map_err(invalid)?;
    let equip = KineticQuartet::equipartition(&quartet, &ctx, kinetic.sigma_fwd, kinetic.sigma_bwd)
        .map_err(invalid)?;
    let equip_balanced = balanced_sigma_ratio(&quartet, equip.speeds).map_err(invalid)?;
    let summary = Summary::new()
        .text("command", "statmech")
        .text("natural_units", ctx.natural_units)
        .text("speeds", if speeds_given { "given" } else { "equipartition" })
        .num("sigma_ratio", kinetic.sigma_fwd / kinetic.sigma_bwd)
        .num("predicted_sigma_ratio", predicted)
        .num("residual", residual)
        .num(
            "equipartition_consistency",
            (equip_balanced - predicted).abs() / predicted,
        )
        .num(
            "potential_gap",
            chemical_potential_gap(&quartet, &ctx).map_err(invalid)?,
        );
    Ok(Outcome {
        summary,
        exit_code: EXIT_OK,
        data_on_stdout: false,
    })
}
