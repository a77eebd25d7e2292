use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::csv::format_float;
use super::{config_err, CliResult, VERSION};
use crate::bounds::{bound_report, simple_generalization, BoundId};
use crate::qmath::{random_hermitian, random_pure_state, Seed};
use crate::quantum::{expectation, transition_probabilities, u_vector, variance};
use crate::{BoundReport, Observable, PureState};

/// Relative slack for bound validity.
pub const VALIDITY_SLACK: f64 = 1e-9;
/// Slack for the dominance chains and the exact identities.
pub const CHAIN_SLACK: f64 = 1e-12;
const PERMUTATIONS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    pub dims: Vec<usize>,
    pub n_obs: Vec<usize>,
    pub trials: usize,
    pub seed: Seed,
}

impl FuzzConfig {
    pub fn new(mut dims: Vec<usize>, mut n_obs: Vec<usize>, trials: usize, seed: Seed) -> CliResult<Self> {
        if trials == 0 {
            return config_err("fuzz needs at least one trial");
        }
        dims.sort_unstable();
        dims.dedup();
        n_obs.sort_unstable();
        n_obs.dedup();
        if dims.is_empty() || dims.iter().any(|d| !(2..=6).contains(d)) {
            return config_err(format!("dims must be a nonempty subset of 2..=6, got {dims:?}"));
        }
        if n_obs.is_empty() || n_obs.iter().any(|n| !(2..=4).contains(n)) {
            return config_err(format!("n_obs must be a nonempty subset of 2..=4, got {n_obs:?}"));
        }
        Ok(FuzzConfig { dims, n_obs, trials, seed })
    }
}

/// Aggregate of one check over all trials where it applies.
///
/// `worst_margin` is the smallest `(should be larger) − (should be smaller)`
/// seen; for the identity checks it is minus the largest deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: String,
    pub slack: f64,
    pub instances: usize,
    pub violations: usize,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub checks: Vec<CheckSummary>,
}

impl FuzzReport {
    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# urel {VERSION} fuzz: trials={} seed={} dims={} n_obs={}",
            self.config.trials,
            self.config.seed.0,
            join(&self.config.dims),
            join(&self.config.n_obs)
        );
        let _ = writeln!(
            s,
            "{:<40} {:>9} {:>10} {:>20} {:>8}",
            "check", "instances", "violations", "worst_margin", "slack"
        );
        for c in &self.checks {
            let margin = if c.instances == 0 { "-".to_string() } else { format_float(c.worst_margin) };
            let _ =
                writeln!(s, "{:<40} {:>9} {:>10} {:>20} {:>8.0e}", c.name, c.instances, c.violations, margin, c.slack);
        }
        let _ = writeln!(s, "total violations: {}", self.violation_count());
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Check {
    Valid(BoundId),
    CarlsonOverMondal,
    AdditiveOverMondalSum,
    AdditiveOverSimple,
    Rearrangement,
    Normalization,
    Moments,
    PermutationInvariance,
    ShiftInvariance,
}

impl Check {
    fn all() -> Vec<Check> {
        let mut v: Vec<Check> = BoundId::ALL.into_iter().map(Check::Valid).collect();
        v.extend([
            Check::CarlsonOverMondal,
            Check::AdditiveOverMondalSum,
            Check::AdditiveOverSimple,
            Check::Rearrangement,
            Check::Normalization,
            Check::Moments,
            Check::PermutationInvariance,
            Check::ShiftInvariance,
        ]);
        v
    }

    fn name(self) -> String {
        match self {
            Check::Valid(id) => format!("valid:{id}"),
            Check::CarlsonOverMondal => "chain:carlson_product>=mondal_product".into(),
            Check::AdditiveOverMondalSum => "chain:additive>=mondal_sum".into(),
            Check::AdditiveOverSimple => "chain:additive>=sum_lambda_sq/(2(N-1))".into(),
            Check::Rearrangement => "rearrangement".into(),
            Check::Normalization => "normalization".into(),
            Check::Moments => "moment_consistency".into(),
            Check::PermutationInvariance => "permutation_invariance".into(),
            Check::ShiftInvariance => "shift_invariance".into(),
        }
    }

    fn slack(self) -> f64 {
        match self {
            Check::Valid(_) => VALIDITY_SLACK,
            _ => CHAIN_SLACK,
        }
    }
}

/// One measured margin; violated when below `-slack·scale`.
#[derive(Debug, Clone, Copy)]
struct Outcome {
    check: Check,
    margin: f64,
    scale: f64,
}

fn ordered(check: Check, larger: f64, smaller: f64) -> Outcome {
    Outcome { check, margin: larger - smaller, scale: larger.abs().max(smaller.abs()).max(1.0) }
}

fn identity(check: Check, a: f64, b: f64) -> Outcome {
    Outcome { check, margin: -(a - b).abs(), scale: a.abs().max(b.abs()).max(1.0) }
}

fn same_reports(check: Check, a: &BoundReport, b: &BoundReport, out: &mut Vec<Outcome>) {
    let mut worst = identity(check, a.lhs_product, b.lhs_product);
    let mut consider = |o: Outcome| {
        if o.margin / o.scale < worst.margin / worst.scale {
            worst = o;
        }
    };
    consider(identity(check, a.lhs_sum, b.lhs_sum));
    for id in BoundId::ALL {
        if let (Some(x), Some(y)) = (a.get(id), b.get(id)) {
            consider(identity(check, x, y));
        }
    }
    out.push(worst);
}

fn run_trial(cfg: &FuzzConfig, t: usize) -> crate::Result<Vec<Outcome>> {
    let seed = cfg.seed.derive(t as u64);
    let mut rng = seed.rng();
    let dim = cfg.dims[rng.random_range(0..cfg.dims.len())];
    let n = cfg.n_obs[rng.random_range(0..cfg.n_obs.len())];
    let psi = PureState::new(random_pure_state(seed.derive(0), dim)?)?;
    let obs = (0..n)
        .map(|i| Observable::new(random_hermitian(seed.derive(1 + i as u64), dim)?))
        .collect::<crate::Result<Vec<_>>>()?;
    let refs: Vec<&Observable> = obs.iter().collect();
    let report = bound_report(&refs, &psi)?;

    let mut out = Vec::new();
    for (id, v) in report.applicable() {
        out.push(ordered(Check::Valid(id), report.lhs_for(id), v));
    }
    let get = |id| report.get(id).expect("bound applies for this N");
    if n == 2 {
        out.push(ordered(Check::CarlsonOverMondal, get(BoundId::CarlsonProduct), get(BoundId::MondalProduct)));
        out.push(ordered(Check::AdditiveOverMondalSum, get(BoundId::Additive), get(BoundId::MondalSum)));

        let u1 = u_vector(refs[0], &psi)?;
        let mut u2 = u_vector(refs[1], &psi)?.values().to_vec();
        let dot = |w: &[f64]| u1.values().iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
        let sorted = dot(&u2);
        let mut best_shuffle = f64::NEG_INFINITY;
        for _ in 0..PERMUTATIONS {
            u2.shuffle(&mut rng);
            best_shuffle = best_shuffle.max(dot(&u2));
        }
        out.push(ordered(Check::Rearrangement, sorted, best_shuffle));
    } else {
        out.push(ordered(Check::AdditiveOverSimple, get(BoundId::Additive), simple_generalization(&report.lambda)));
    }

    for o in &obs {
        let f = transition_probabilities(o, &psi)?;
        out.push(identity(Check::Normalization, f.iter().sum(), 1.0));
        let a = o.spectrum().eigenvalues();
        let mean = expectation(o, &psi)?;
        let spectral_mean: f64 = f.iter().zip(a).map(|(p, x)| p * x).sum();
        let spectral_var: f64 = f.iter().zip(a).map(|(p, x)| p * (x - mean) * (x - mean)).sum();
        out.push(identity(Check::Moments, spectral_mean, mean));
        out.push(identity(Check::Moments, spectral_var, variance(o, &psi)?));
    }

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let permuted: Vec<&Observable> = perm.iter().map(|&i| refs[i]).collect();
    same_reports(Check::PermutationInvariance, &report, &bound_report(&permuted, &psi)?, &mut out);

    let shifted = obs.iter().map(|o| o.shifted(rng.random_range(-2.0..2.0))).collect::<crate::Result<Vec<_>>>()?;
    let shifted_refs: Vec<&Observable> = shifted.iter().collect();
    same_reports(Check::ShiftInvariance, &report, &bound_report(&shifted_refs, &psi)?, &mut out);
    Ok(out)
}

/// Runs the invariant suite on `cfg.trials` random instances. Trial `t`
/// draws everything from sub-seed `t`, so the report does not depend on
/// scheduling.
pub fn fuzz(cfg: &FuzzConfig) -> CliResult<FuzzReport> {
    let per_trial = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect::<crate::Result<Vec<_>>>()?;

    let checks_list = Check::all();
    let mut checks: Vec<CheckSummary> = checks_list
        .iter()
        .map(|c| CheckSummary {
            name: c.name(),
            slack: c.slack(),
            instances: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
        })
        .collect();
    for outcomes in &per_trial {
        for o in outcomes {
            let k = checks_list.iter().position(|c| *c == o.check).expect("listed check");
            let summary = &mut checks[k];
            summary.instances += 1;
            summary.worst_margin = summary.worst_margin.min(o.margin);
            if o.margin < -o.check.slack() * o.scale {
                summary.violations += 1;
            }
        }
    }
    Ok(FuzzReport { config: cfg.clone(), checks })
}
