use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{validate_grid, Trajectory};
use crate::error::{ensure_time, KineticsError, Result};
use crate::kinetics::{Concentration, RateParams};

/// One realisation of the finite-N process, recorded at every event.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticRun {
    /// `0.0` followed by every event time up to `t_end`.
    pub times: Vec<f64>,
    /// Number of C particles after each event.
    pub counts: Vec<u64>,
    pub n_total: u64,
    pub seed: u64,
}

impl StochasticRun {
    /// Number of C particles at time `t` (right-continuous step function).
    pub fn count_at(&self, t: f64) -> u64 {
        let idx = self.times.partition_point(|&s| s <= t);
        self.counts[idx.saturating_sub(1)]
    }
}

/// Monte Carlo mean of `X_C` over independent trials.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMean {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    /// Standard error of the mean (sample standard deviation / sqrt(trials)).
    pub std_err: Vec<f64>,
    pub trials: usize,
    pub n_total: u64,
}

impl EnsembleMean {
    pub fn trajectory(&self) -> Trajectory {
        Trajectory {
            times: self.times.clone(),
            values: self.mean.iter().map(|&m| Concentration::clamped(m)).collect(),
        }
    }
}

/// Starting number of C particles: `x0 N` rounded half to even.
pub fn initial_count(x0: Concentration, n_total: u64) -> u64 {
    ((x0.value() * n_total as f64).round_ties_even() as u64).min(n_total)
}

/// Seed of trial `index`, a SplitMix64 hash of the master seed and index.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Direct-method event stepper. `A -> C` fires with propensity
/// `b n_A^2 / N = N b X_A^2`, `C -> A` with `a n_C^2 / N = N a X_C^2`,
/// whose large-N mean obeys the kinetic equation.
struct Process {
    a: f64,
    b: f64,
    n_total: u64,
    inv_n: f64,
    n_c: u64,
    t: f64,
    pending: Option<Pending>,
    rng: ChaCha8Rng,
}

/// Next event, drawn but not yet fired.
#[derive(Clone, Copy)]
struct Pending {
    time: f64,
    forward: f64,
    total: f64,
}

impl Process {
    fn new(rates: &RateParams, n_total: u64, n_c: u64, seed: u64) -> Self {
        Self {
            a: rates.a(),
            b: rates.b(),
            n_total,
            inv_n: 1.0 / n_total as f64,
            n_c,
            t: 0.0,
            pending: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Fires the next event if it happens no later than `t_end`; otherwise
    /// keeps the drawn event pending and returns `false`.
    fn fire_before(&mut self, t_end: f64) -> bool {
        let next = match self.pending {
            Some(next) => next,
            None => {
                let n_a = (self.n_total - self.n_c) as f64;
                let n_c = self.n_c as f64;
                let forward = self.b * n_a * n_a * self.inv_n;
                let backward = self.a * n_c * n_c * self.inv_n;
                let total = forward + backward;
                if total <= 0.0 {
                    return false;
                }
                let u: f64 = self.rng.random();
                let next = Pending {
                    time: self.t - (1.0 - u).ln() / total,
                    forward,
                    total,
                };
                self.pending = Some(next);
                next
            }
        };
        if next.time > t_end {
            return false;
        }
        self.t = next.time;
        self.pending = None;
        if self.rng.random::<f64>() * next.total < next.forward {
            self.n_c += 1;
        } else {
            self.n_c -= 1;
        }
        true
    }
}

fn check_particles(n_total: u64) -> Result<()> {
    if n_total < 2 {
        Err(KineticsError::TooFewParticles(n_total))
    } else {
        Ok(())
    }
}

/// Exact stochastic simulation up to `t_end`, recording every event.
pub fn gillespie_simulate(
    rates: &RateParams,
    n_total: u64,
    x0: Concentration,
    t_end: f64,
    seed: u64,
) -> Result<StochasticRun> {
    check_particles(n_total)?;
    ensure_time(t_end)?;
    if !t_end.is_finite() {
        return Err(KineticsError::NegativeTime(t_end));
    }
    let mut process = Process::new(rates, n_total, initial_count(x0, n_total), seed);
    let mut times = vec![0.0];
    let mut counts = vec![process.n_c];
    while process.fire_before(t_end) {
        times.push(process.t);
        counts.push(process.n_c);
    }
    Ok(StochasticRun {
        times,
        counts,
        n_total,
        seed,
    })
}

/// Same process as [`gillespie_simulate`], but only the C count at each
/// grid time is kept.
pub fn gillespie_sample(
    rates: &RateParams,
    n_total: u64,
    x0: Concentration,
    grid: &[f64],
    seed: u64,
) -> Result<Vec<u64>> {
    check_particles(n_total)?;
    validate_grid(grid)?;
    let mut process = Process::new(rates, n_total, initial_count(x0, n_total), seed);
    Ok(grid
        .iter()
        .map(|&t| {
            while process.fire_before(t) {}
            process.n_c
        })
        .collect())
}

/// Mean and standard error of `X_C` over `trials` independent runs.
///
/// Trial `i` uses [`trial_seed`]`(seed, i)` and results are combined in
/// trial order, so the output does not depend on scheduling.
pub fn gillespie_ensemble_mean(
    rates: &RateParams,
    n_total: u64,
    x0: Concentration,
    grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<EnsembleMean> {
    if trials < 2 {
        return Err(KineticsError::TooFewTrials(trials));
    }
    check_particles(n_total)?;
    validate_grid(grid)?;
    let run = |i: usize| gillespie_sample(rates, n_total, x0, grid, trial_seed(seed, i as u64));

    #[cfg(feature = "parallel")]
    let runs: Vec<Vec<u64>> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(run).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Vec<u64>> = (0..trials).map(run).collect::<Result<_>>()?;

    let n = n_total as f64;
    let k = trials as f64;
    let mut mean = Vec::with_capacity(grid.len());
    let mut std_err = Vec::with_capacity(grid.len());
    for j in 0..grid.len() {
        let m = runs.iter().map(|r| r[j] as f64 / n).sum::<f64>() / k;
        let var = runs.iter().map(|r| (r[j] as f64 / n - m).powi(2)).sum::<f64>() / (k - 1.0);
        mean.push(m);
        std_err.push((var / k).sqrt());
    }
    Ok(EnsembleMean {
        times: grid.to_vec(),
        mean,
        std_err,
        trials,
        n_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::solve_at;

    fn c(x: f64) -> Concentration {
        Concentration::new(x).unwrap()
    }

    #[test]
    fn rounding_is_half_even() {
        assert_eq!(initial_count(c(1.0 / 3.0), 10), 3);
        assert_eq!(initial_count(c(0.375), 4), 2);
        assert_eq!(initial_count(c(0.625), 4), 2);
        assert_eq!(initial_count(c(0.875), 4), 4);
        assert_eq!(initial_count(c(1.0), 7), 7);
    }

    #[test]
    fn counts_stay_in_range() {
        let r = RateParams::new(2.0, 0.5).unwrap();
        let run = gillespie_simulate(&r, 10, c(1.0 / 3.0), 20.0, 7).unwrap();
        assert!(run.counts.iter().all(|&k| k <= 10));
        assert!(run.times.windows(2).all(|w| w[0] <= w[1]));
        assert!(run.times.len() > 10);
        assert_eq!(run.count_at(0.0), run.counts[0]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let r = RateParams::new(2.0, 0.5).unwrap();
        let one = gillespie_simulate(&r, 50, c(0.0), 3.0, 42).unwrap();
        let two = gillespie_simulate(&r, 50, c(0.0), 3.0, 42).unwrap();
        let other = gillespie_simulate(&r, 50, c(0.0), 3.0, 43).unwrap();
        assert_eq!(one, two);
        assert_ne!(one, other);
    }

    #[test]
    fn sample_agrees_with_full_record() {
        let r = RateParams::new(2.0, 50.0).unwrap();
        let grid = [0.0, 0.01, 0.05, 0.2];
        let full = gillespie_simulate(&r, 200, c(1.0), 0.2, 9).unwrap();
        let sampled = gillespie_sample(&r, 200, c(1.0), &grid, 9).unwrap();
        let expected: Vec<u64> = grid.iter().map(|&t| full.count_at(t)).collect();
        assert_eq!(sampled, expected);
    }

    #[test]
    fn large_n_tail_matches_equilibrium() {
        let r = RateParams::new(2.0, 0.5).unwrap();
        let n = 100_000;
        let run = gillespie_simulate(&r, n, c(0.0), 5.0, 1).unwrap();
        let tail: Vec<f64> = (0..100)
            .map(|i| run.count_at(4.0 + i as f64 * 0.01) as f64 / n as f64)
            .collect();
        let avg = tail.iter().sum::<f64>() / tail.len() as f64;
        let expected = solve_at(&r, c(0.0), 4.5).unwrap().value();
        assert!((avg - expected).abs() < 5e-3, "avg {avg} expected {expected}");
    }

    #[test]
    fn smallest_ensemble() {
        let r = RateParams::new(2.0, 0.5).unwrap();
        let ens = gillespie_ensemble_mean(&r, 2, c(0.5), &[0.0, 1.0, 2.0], 2, 3).unwrap();
        assert!(ens.std_err.iter().all(|s| s.is_finite()));
        assert_eq!(ens.mean[0], 0.5);
        assert_eq!(ens.trajectory().len(), 3);
        assert!(gillespie_ensemble_mean(&r, 2, c(0.5), &[0.0], 1, 3).is_err());
        assert!(gillespie_ensemble_mean(&r, 1, c(0.5), &[0.0], 2, 3).is_err());
        assert!(gillespie_simulate(&r, 1, c(0.5), 1.0, 3).is_err());
    }

    #[test]
    fn ensemble_is_deterministic() {
        let r = RateParams::new(2.0, 0.5).unwrap();
        let grid = [0.0, 0.5, 1.0];
        let one = gillespie_ensemble_mean(&r, 100, c(0.0), &grid, 8, 11).unwrap();
        let two = gillespie_ensemble_mean(&r, 100, c(0.0), &grid, 8, 11).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn symmetric_rates_relax_to_half() {
        let r = RateParams::new(1.5, 1.5).unwrap();
        let ens = gillespie_ensemble_mean(&r, 10_000, c(1.0), &[0.0, 5.0], 10, 5).unwrap();
        assert!((ens.mean[1] - 0.5).abs() <= 3.0 * ens.std_err[1] + 1e-3);
    }

    #[test]
    fn trial_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| trial_seed(0, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
