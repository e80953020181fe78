use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::analytic::uniform_grid;
use crate::kinetics::{characteristic_time, rates_from_spec, Concentration, RateParams, ReactionSpec};
use crate::statmech::{KineticQuartet, Quartet, ThermoContext, ThermoSpecies};

pub const DEFAULT_STEPS: usize = 101;
pub const DEFAULT_GILLESPIE_STEPS: usize = 50;
pub const DEFAULT_M: u64 = 10;
pub const DEFAULT_PARTICLES: u64 = 100_000;
pub const DEFAULT_TRIALS: usize = 50;
/// `t_end` defaults to this many characteristic times.
pub const DEFAULT_SPAN_IN_TAU: f64 = 10.0;
/// RK4 step defaults to `tau` divided by this.
pub const DEFAULT_STEPS_PER_TAU: f64 = 1000.0;
pub const DEFAULT_RK4_TOLERANCE: f64 = 1e-8;
/// Gillespie points must lie within this many standard errors.
pub const DEFAULT_SIGMA_MULTIPLIER: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Rk4,
    Gillespie,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesBlock {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecBlock {
    pub n: f64,
    #[serde(rename = "v_B")]
    pub v_b: f64,
    #[serde(rename = "v_D")]
    pub v_d: f64,
    pub sigma_fwd: f64,
    pub sigma_bwd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesBlock {
    pub mass: f64,
    pub degeneracy: u32,
    #[serde(default)]
    pub chem_potential: f64,
}

impl From<SpeciesBlock> for ThermoSpecies {
    fn from(s: SpeciesBlock) -> Self {
        ThermoSpecies {
            mass: s.mass,
            degeneracy: s.degeneracy,
            chem_potential: s.chem_potential,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuartetBlock {
    #[serde(rename = "A")]
    pub a: SpeciesBlock,
    #[serde(rename = "B")]
    pub b: SpeciesBlock,
    #[serde(rename = "C")]
    pub c: SpeciesBlock,
    #[serde(rename = "D")]
    pub d: SpeciesBlock,
    pub temperature: f64,
    #[serde(default)]
    pub natural_units: bool,
    /// `v_A, v_B, v_C, v_D`; equipartition speeds when absent.
    #[serde(default)]
    pub speeds: Option<[f64; 4]>,
    #[serde(default)]
    pub sigma_fwd: Option<f64>,
    #[serde(default)]
    pub sigma_bwd: Option<f64>,
}

/// Everything a command may need. Every field is optional in the JSON file;
/// command-line flags override file values.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub rates: Option<RatesBlock>,
    pub spec: Option<SpecBlock>,
    pub x0: Option<f64>,
    pub t_end: Option<f64>,
    pub steps: Option<usize>,
    pub times: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub m: Option<u64>,
    pub oracle: Option<OracleKind>,
    pub n_particles: Option<u64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub tolerance: Option<f64>,
    pub quartet: Option<QuartetBlock>,
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("bad config: {e}")))
    }

    /// Setting either rate on the command line replaces the file's rate
    /// source; a missing partner rate is taken from the file's `rates`.
    pub fn override_rates(&mut self, a: Option<f64>, b: Option<f64>) -> Result<(), CliError> {
        if a.is_none() && b.is_none() {
            return Ok(());
        }
        let base = self.rates;
        let a = a.or(base.map(|r| r.a));
        let b = b.or(base.map(|r| r.b));
        match (a, b) {
            (Some(a), Some(b)) => {
                self.rates = Some(RatesBlock { a, b });
                self.spec = None;
                Ok(())
            }
            _ => Err(CliError::Invalid("--a and --b must be given together".into())),
        }
    }

    pub fn rate_params(&self) -> Result<RateParams, CliError> {
        match (self.rates, self.spec) {
            (Some(_), Some(_)) => Err(invalid(
                "config must give exactly one of `rates` and `spec`, not both",
            )),
            (None, None) => Err(invalid("config must give `rates` or `spec`")),
            (Some(r), None) => RateParams::new(r.a, r.b).map_err(invalid),
            (None, Some(s)) => ReactionSpec::new(s.n, s.v_b, s.v_d, s.sigma_fwd, s.sigma_bwd)
                .and_then(|spec| rates_from_spec(&spec))
                .map_err(invalid),
        }
    }

    pub fn initial(&self) -> Result<Concentration, CliError> {
        Concentration::new(self.x0.unwrap_or(0.0)).map_err(invalid)
    }

    pub fn t_end(&self, rates: &RateParams) -> Result<f64, CliError> {
        let t_end = self
            .t_end
            .unwrap_or(DEFAULT_SPAN_IN_TAU * characteristic_time(rates));
        if t_end.is_finite() && t_end >= 0.0 {
            Ok(t_end)
        } else {
            Err(invalid(format!(
                "t_end must be finite and non-negative, got {t_end}"
            )))
        }
    }

    /// Explicit `times` if given, otherwise `steps` points on `[0, t_end]`.
    pub fn grid(&self, rates: &RateParams, default_steps: usize) -> Result<Vec<f64>, CliError> {
        if let Some(times) = &self.times {
            crate::analytic::validate_grid(times).map_err(invalid)?;
            return Ok(times.clone());
        }
        uniform_grid(self.t_end(rates)?, self.steps.unwrap_or(default_steps)).map_err(invalid)
    }

    pub fn quartet(&self) -> Result<(Quartet, KineticQuartet, ThermoContext, bool), CliError> {
        let q = self
            .quartet
            .as_ref()
            .ok_or_else(|| invalid("statmech needs a `quartet` block"))?;
        let quartet = Quartet::new(q.a.into(), q.b.into(), q.c.into(), q.d.into()).map_err(invalid)?;
        let ctx = if q.natural_units {
            ThermoContext::natural(q.temperature)
        } else {
            ThermoContext::si(q.temperature)
        }
        .map_err(invalid)?;
        let sigma_fwd = q.sigma_fwd.unwrap_or(1.0);
        let sigma_bwd = q.sigma_bwd.unwrap_or(1.0);
        let (kinetic, given) = match q.speeds {
            Some(speeds) => (
                KineticQuartet {
                    speeds,
                    sigma_fwd,
                    sigma_bwd,
                },
                true,
            ),
            None => (
                KineticQuartet::equipartition(&quartet, &ctx, sigma_fwd, sigma_bwd).map_err(invalid)?,
                false,
            ),
        };
        kinetic.validate().map_err(invalid)?;
        Ok((quartet, kinetic, ctx, given))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rates_and_spec() {
        let cfg = RunConfig::from_json(r#"{"rates": {"a": 2, "b": 0.5}, "x0": 0.25}"#).unwrap();
        let r = cfg.rate_params().unwrap();
        assert_eq!((r.a(), r.b()), (2.0, 0.5));
        let cfg =
            RunConfig::from_json(r#"{"spec": {"n": 2, "v_B": 5, "v_D": 1, "sigma_fwd": 5, "sigma_bwd": 1}}"#)
                .unwrap();
        let r = cfg.rate_params().unwrap();
        assert_eq!((r.a(), r.b()), (2.0, 50.0));
    }

    #[test]
    fn rejects_ambiguous_or_missing_rates() {
        let both = RunConfig::from_json(
            r#"{"rates": {"a": 1, "b": 1}, "spec": {"n": 1, "v_B": 1, "v_D": 1, "sigma_fwd": 1, "sigma_bwd": 1}}"#,
        )
        .unwrap();
        assert!(both.rate_params().is_err());
        assert!(RunConfig::default().rate_params().is_err());
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn flag_override_drops_spec() {
        let mut cfg =
            RunConfig::from_json(r#"{"spec": {"n": 2, "v_B": 5, "v_D": 1, "sigma_fwd": 5, "sigma_bwd": 1}}"#)
                .unwrap();
        assert!(cfg.override_rates(Some(3.0), None).is_err());
        cfg.override_rates(Some(3.0), Some(4.0)).unwrap();
        assert_eq!(cfg.rate_params().unwrap(), RateParams::new(3.0, 4.0).unwrap());
        cfg.override_rates(None, Some(5.0)).unwrap();
        assert_eq!(cfg.rate_params().unwrap(), RateParams::new(3.0, 5.0).unwrap());
    }

    #[test]
    fn grid_defaults_to_ten_tau() {
        let cfg = RunConfig::default();
        let r = RateParams::new(2.0, 50.0).unwrap();
        let grid = cfg.grid(&r, DEFAULT_STEPS).unwrap();
        assert_eq!(grid.len(), DEFAULT_STEPS);
        assert!((grid.last().unwrap() - 1.0).abs() < 1e-15);
    }
}
