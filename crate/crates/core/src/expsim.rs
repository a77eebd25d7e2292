//! Shot-noise simulation of projective measurements with bootstrap error bars.
//!
//! Every measurement setting (each observable, plus the commutator and
//! composite observables some bounds need) is sampled independently as a
//! multinomial over its eigenbasis. Bounds are then evaluated on the observed
//! frequencies through the same formulas as the analytic report, and ±1σ
//! errors come from resampling the count vectors.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::bounds::{pairs, report_from_inputs, BoundId};
use crate::error::{Error, Result};
use crate::qmath::{commutator, Seed};
use crate::quantum::transition_probabilities;
use crate::spinhalf::is_pauli_triple;
use crate::{BoundInputs, BoundReport, HermitianMatrix, MeasurementStats, Observable, PureState};

/// Default shots per setting: one second at the heralded coincidence rate of ~2800/s.
pub const DEFAULT_SHOTS: u64 = 2800;
pub const DEFAULT_RESAMPLES: usize = 1000;
pub const MIN_RESAMPLES: usize = 100;

/// Sub-seed index reserved for the bootstrap stream.
const BOOTSTRAP_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub shots: u64,
    pub seed: Seed,
    pub bootstrap_resamples: usize,
}

impl SimConfig {
    pub fn new(shots: u64, seed: Seed, bootstrap_resamples: usize) -> Result<Self> {
        if shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        if bootstrap_resamples < MIN_RESAMPLES {
            return Err(Error::Config(format!("bootstrap resamples must be at least {MIN_RESAMPLES}")));
        }
        Ok(SimConfig { shots, seed, bootstrap_resamples })
    }

    pub fn with_seed(self, seed: Seed) -> Self {
        SimConfig { seed, ..self }
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { shots: DEFAULT_SHOTS, seed: Seed(0), bootstrap_resamples: DEFAULT_RESAMPLES }
    }
}

/// Outcome counts per spectrum index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    counts: Vec<u64>,
    total: u64,
}

impl CountVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        let total = counts.iter().sum();
        if total == 0 {
            return Err(Error::ZeroTotal);
        }
        Ok(CountVector { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let t = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / t).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Multinomial draw via conditional binomials.
pub fn sample_multinomial<R: Rng + ?Sized>(rng: &mut R, n: u64, probabilities: &[f64]) -> Vec<u64> {
    let mut out = vec![0; probabilities.len()];
    let mut remaining = n;
    let mut mass = probabilities.iter().map(|p| p.max(0.0)).sum::<f64>();
    let last = probabilities.len().saturating_sub(1);
    for (k, &p) in probabilities.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.max(0.0);
        if k == last || mass <= 0.0 {
            out[k] = remaining;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let draw = Binomial::new(remaining, q).expect("probability in [0, 1]").sample(rng);
        out[k] = draw;
        remaining -= draw;
        mass -= p;
    }
    out
}

/// Samples `cfg.shots` outcomes of measuring `a` on `psi`.
pub fn simulate_projective_counts(a: &Observable, psi: &PureState, cfg: &SimConfig) -> Result<CountVector> {
    let probs = transition_probabilities(a, psi)?;
    CountVector::new(sample_multinomial(&mut cfg.seed.rng(), cfg.shots, &probs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMoments {
    pub mean: EmpiricalEstimate,
    pub variance: EmpiricalEstimate,
    pub probabilities: Vec<f64>,
}

/// Frequencies, mean and variance of a count vector with bootstrap errors.
pub fn empirical_moments(counts: &CountVector, eigenvalues: &[f64], cfg: &SimConfig) -> Result<EmpiricalMoments> {
    if counts.counts().len() != eigenvalues.len() {
        return Err(Error::DimensionMismatch { expected: eigenvalues.len(), found: counts.counts().len() });
    }
    let moments = |c: &CountVector| -> Result<(f64, f64)> {
        let s = MeasurementStats::from_distribution(eigenvalues.to_vec(), c.frequencies())?;
        Ok((s.mean, s.variance()))
    };
    let (mean, var) = moments(counts)?;
    let p_hat = counts.frequencies();
    let mut rng = cfg.seed.derive(BOOTSTRAP_STREAM).rng();
    let mut acc_mean = Accumulator::default();
    let mut acc_var = Accumulator::default();
    for _ in 0..cfg.bootstrap_resamples {
        let resampled = CountVector::new(sample_multinomial(&mut rng, counts.total(), &p_hat))?;
        let (m, v) = moments(&resampled)?;
        acc_mean.push(m);
        acc_var.push(v);
    }
    Ok(EmpiricalMoments {
        mean: EmpiricalEstimate { value: mean, std_error: acc_mean.std_dev() },
        variance: EmpiricalEstimate { value: var, std_error: acc_var.std_dev() },
        probabilities: p_hat,
    })
}

/// Running mean/variance (Welford).
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Sample standard deviation (n − 1 denominator).
    fn std_dev(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0).sqrt()
        }
    }
}

/// Simulated counterpart of [`BoundReport`]: point estimates from the
/// observed counts plus bootstrap standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalBoundReport {
    pub estimate: BoundReport,
    pub lhs_product: EmpiricalEstimate,
    pub lhs_sum: EmpiricalEstimate,
    bounds: [Option<EmpiricalEstimate>; BoundId::COUNT],
}

impl EmpiricalBoundReport {
    pub fn get(&self, id: BoundId) -> Option<EmpiricalEstimate> {
        self.bounds[id as usize]
    }
}

/// Measurement settings in order: the observables, `i[A, B]` when `N = 2`,
/// `Σ A_i`, then `A_i − A_j` for each pair.
struct Plan {
    settings: Vec<Observable>,
    n_obs: usize,
    has_commutator: bool,
    pauli_triple: bool,
    degenerate: bool,
}

impl Plan {
    fn new(obs: &[&Observable]) -> Result<Self> {
        let n = obs.len();
        if n < 2 {
            return Err(Error::TooFewObservables { needed: 2, got: n });
        }
        let mut settings: Vec<Observable> = obs.iter().map(|o| (*o).clone()).collect();
        let has_commutator = n == 2;
        if has_commutator {
            // i[A, B] is Hermitian and |⟨i[A,B]⟩| = |⟨[A,B]⟩|
            let c = commutator(obs[0].matrix(), obs[1].matrix())?.scale(Complex::new(0.0, 1.0));
            settings.push(Observable::new(HermitianMatrix::symmetrize(&c))?);
        }
        let total: Vec<(f64, &HermitianMatrix)> = obs.iter().map(|o| (1.0, o.matrix())).collect();
        settings.push(Observable::new(HermitianMatrix::linear_combination(&total)?)?);
        for (i, j) in pairs(n) {
            let d = HermitianMatrix::linear_combination(&[(1.0, obs[i].matrix()), (-1.0, obs[j].matrix())])?;
            settings.push(Observable::new(d)?);
        }
        Ok(Plan {
            settings,
            n_obs: n,
            has_commutator,
            pauli_triple: is_pauli_triple(obs),
            degenerate: obs.iter().any(|o| o.spectrum().is_degenerate()),
        })
    }

    fn inputs(&self, counts: &[CountVector]) -> Result<BoundInputs> {
        let stats_of = |k: usize| {
            MeasurementStats::from_distribution(
                self.settings[k].spectrum().eigenvalues().to_vec(),
                counts[k].frequencies(),
            )
        };
        let stats = (0..self.n_obs).map(stats_of).collect::<Result<Vec<_>>>()?;
        let variances = stats.iter().map(|s| s.variance()).collect();
        let mut next = self.n_obs;
        let commutator_abs = if self.has_commutator {
            next += 1;
            Some(stats_of(next - 1)?.mean.abs())
        } else {
            None
        };
        let sum_variance = stats_of(next)?.variance();
        let pair_difference_variances =
            (next + 1..self.settings.len()).map(|k| Ok(stats_of(k)?.variance())).collect::<Result<Vec<_>>>()?;
        Ok(BoundInputs {
            stats,
            variances,
            commutator_abs,
            sum_variance,
            pair_difference_variances,
            pauli_triple: self.pauli_triple,
            degenerate: self.degenerate,
        })
    }
}

/// Simulates every setting, evaluates all bounds on the observed frequencies
/// and attaches bootstrap ±1σ errors. Pure function of `(obs, psi, cfg)`.
pub fn empirical_bound_report(obs: &[&Observable], psi: &PureState, cfg: &SimConfig) -> Result<EmpiricalBoundReport> {
    for o in obs {
        if o.dim() != psi.dim() {
            return Err(Error::DimensionMismatch { expected: psi.dim(), found: o.dim() });
        }
    }
    let plan = Plan::new(obs)?;
    let counts = plan
        .settings
        .iter()
        .enumerate()
        .map(|(k, s)| simulate_projective_counts(s, psi, &cfg.with_seed(cfg.seed.derive(k as u64))))
        .collect::<Result<Vec<_>>>()?;
    let estimate = report_from_inputs(&plan.inputs(&counts)?)?;

    let p_hat: Vec<Vec<f64>> = counts.iter().map(|c| c.frequencies()).collect();
    let mut rng = cfg.seed.derive(BOOTSTRAP_STREAM).rng();
    let mut acc_product = Accumulator::default();
    let mut acc_sum = Accumulator::default();
    let mut acc = [Accumulator::default(); BoundId::COUNT];
    for _ in 0..cfg.bootstrap_resamples {
        let resampled = counts
            .iter()
            .zip(&p_hat)
            .map(|(c, p)| CountVector::new(sample_multinomial(&mut rng, c.total(), p)))
            .collect::<Result<Vec<_>>>()?;
        let r = report_from_inputs(&plan.inputs(&resampled)?)?;
        acc_product.push(r.lhs_product);
        acc_sum.push(r.lhs_sum);
        for (id, v) in r.applicable() {
            acc[id as usize].push(v);
        }
    }

    let mut bounds = [None; BoundId::COUNT];
    for (id, v) in estimate.applicable() {
        bounds[id as usize] = Some(EmpiricalEstimate { value: v, std_error: acc[id as usize].std_dev() });
    }
    Ok(EmpiricalBoundReport {
        lhs_product: EmpiricalEstimate { value: estimate.lhs_product, std_error: acc_product.std_dev() },
        lhs_sum: EmpiricalEstimate { value: estimate.lhs_sum, std_error: acc_sum.std_dev() },
        estimate,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::bound_report;
    use crate::spinhalf::{pauli, pauli_triple};
    use std::f64::consts::FRAC_PI_4;

    fn cfg(shots: u64, seed: u64) -> SimConfig {
        SimConfig::new(shots, Seed(seed), 1000).unwrap()
    }

    #[test]
    fn deterministic_outcome() {
        let z = pauli(3).unwrap();
        let c = simulate_projective_counts(&z, &PureState::basis(2, 0), &cfg(1000, 1)).unwrap();
        assert_eq!(c.counts(), &[0, 1000]);
    }

    #[test]
    fn unbiased_basis_fraction() {
        let x = pauli(1).unwrap();
        let c = simulate_projective_counts(&x, &PureState::basis(2, 0), &cfg(1_000_000, 3)).unwrap();
        let frac = c.counts()[1] as f64 / 1e6;
        assert!((frac - 0.5).abs() <= 0.0025, "{frac}");
    }

    #[test]
    fn counts_are_reproducible() {
        let x = pauli(1).unwrap();
        let psi = PureState::bloch(1.0, 2.0).unwrap();
        let a = simulate_projective_counts(&x, &psi, &cfg(5000, 9)).unwrap();
        let b = simulate_projective_counts(&x, &psi, &cfg(5000, 9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total(), 5000);
    }

    #[test]
    fn multinomial_sums_to_n() {
        let mut rng = Seed(4).rng();
        let c = sample_multinomial(&mut rng, 12345, &[0.1, 0.0, 0.3, 0.6]);
        assert_eq!(c.iter().sum::<u64>(), 12345);
        assert_eq!(c[1], 0);
    }

    #[test]
    fn moment_examples() {
        let ev = [-1.0, 1.0];
        let c = cfg(1000, 0);
        let m = empirical_moments(&CountVector::new(vec![0, 1000]).unwrap(), &ev, &c).unwrap();
        assert_eq!((m.mean.value, m.variance.value), (1.0, 0.0));
        assert_eq!(m.mean.std_error, 0.0);
        let m = empirical_moments(&CountVector::new(vec![500, 500]).unwrap(), &ev, &c).unwrap();
        assert_eq!((m.mean.value, m.variance.value), (0.0, 1.0));
        let m = empirical_moments(&CountVector::new(vec![250, 750]).unwrap(), &ev, &c).unwrap();
        assert!((m.mean.value - 0.5).abs() < 1e-15 && (m.variance.value - 0.75).abs() < 1e-15);
        // binomial: sd(mean) = 2·sqrt(p(1−p)/n)
        let expected = 2.0 * (0.25f64 * 0.75 / 1000.0).sqrt();
        assert!((m.mean.std_error / expected - 1.0).abs() < 0.1, "{}", m.mean.std_error);
        assert!(matches!(CountVector::new(vec![0, 0]), Err(Error::ZeroTotal)));
        assert!(empirical_moments(&CountVector::new(vec![1, 2, 3]).unwrap(), &ev, &c).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(0, Seed(0), 1000).is_err());
        assert!(SimConfig::new(10, Seed(0), 99).is_err());
        assert_eq!(SimConfig::default().shots, 2800);
        assert_eq!(SimConfig::default().bootstrap_resamples, 1000);
    }

    #[test]
    fn carlson_estimate_near_analytic() {
        let p = pauli_triple();
        let refs: Vec<_> = p.iter().collect();
        let psi = PureState::bloch(FRAC_PI_4, 0.0).unwrap();
        let r = empirical_bound_report(&refs, &psi, &cfg(1_000_000, 21)).unwrap();
        let e = r.get(BoundId::CarlsonProduct).unwrap();
        assert!((e.value - 0.2041548).abs() <= 5.0 * e.std_error, "{e:?}");
        assert!(e.std_error > 0.0);
    }

    #[test]
    fn additive_estimate_tight_case() {
        let p = pauli_triple();
        let refs: Vec<_> = p.iter().collect();
        let r = empirical_bound_report(&refs, &PureState::basis(2, 0), &cfg(1_000_000, 8)).unwrap();
        let e = r.get(BoundId::Additive).unwrap();
        assert!((e.value - 2.0).abs() <= 5.0 * e.std_error, "{e:?}");
        assert_eq!(r.lhs_product.value, 0.0);
    }

    #[test]
    fn report_shape_matches_analytic() {
        let p = pauli_triple();
        let psi = PureState::bloch(1.1, 0.3).unwrap();
        let two = [&p[0], &p[2]];
        let emp = empirical_bound_report(&two, &psi, &cfg(20_000, 2)).unwrap();
        let ana = bound_report(&two, &psi).unwrap();
        for id in BoundId::ALL {
            assert_eq!(emp.get(id).is_some(), ana.is_applicable(id), "{id}");
        }
        let r = emp.get(BoundId::Robertson).unwrap();
        assert!((r.value - ana.get(BoundId::Robertson).unwrap()).abs() < 5.0 * r.std_error + 1e-12);
    }

    #[test]
    fn report_is_deterministic() {
        let p = pauli_triple();
        let refs: Vec<_> = p.iter().collect();
        let psi = PureState::bloch(0.7, 1.9).unwrap();
        let a = empirical_bound_report(&refs, &psi, &cfg(2800, 5)).unwrap();
        let b = empirical_bound_report(&refs, &psi, &cfg(2800, 5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_bars_scale_with_shots() {
        let p = pauli_triple();
        let refs: Vec<_> = p.iter().collect();
        let psi = PureState::bloch(FRAC_PI_4, 0.0).unwrap();
        let mean_err = |shots: u64| {
            (0..50)
                .map(|s| {
                    let c = SimConfig::new(shots, Seed(1000 + s), 200).unwrap();
                    empirical_bound_report(&refs, &psi, &c).unwrap().get(BoundId::CarlsonProduct).unwrap().std_error
                })
                .sum::<f64>()
                / 50.0
        };
        let ratio = mean_err(2800) / mean_err(11200);
        assert!((ratio / 2.0 - 1.0).abs() <= 0.2, "{ratio}");
    }
}
