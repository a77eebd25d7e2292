use std::fmt::Write as _;

use rayon::prelude::*;

use super::csv::format_float;
use super::{config_err, CliResult, Grid, Mode, ObservableSet, VERSION};
use crate::bounds::{bound_report, BoundId, BoundKind};
use crate::qmath::{random_pure_state, Seed};
use crate::spinhalf::is_pauli_triple;
use crate::{BlochAngles, BoundReport, PureState};

/// Bounds within this of the maximum share the win.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// Bloch-angle grid, qubit sets only.
    Grid { theta: Grid, phi: Grid },
    /// `count` Haar-random states of the set's dimension.
    Random { count: usize },
}

#[derive(Debug, Clone)]
pub struct TournamentConfig {
    pub set: ObservableSet,
    pub states: StateSpec,
    pub mode: Mode,
    pub seed: Seed,
}

impl TournamentConfig {
    fn validate(&self) -> CliResult<()> {
        match &self.states {
            StateSpec::Grid { theta, phi } => {
                if self.set.dim() != 2 {
                    return config_err("grid tournaments need a qubit observable set; use random states");
                }
                for t in [theta.start, theta.end] {
                    for p in [phi.start, phi.end] {
                        BlochAngles::new(t, p)?;
                    }
                }
            }
            StateSpec::Random { count } if *count == 0 => return config_err("random state count must be positive"),
            StateSpec::Random { .. } => {}
        }
        Ok(())
    }

    fn labelled_states(&self) -> CliResult<Vec<(String, PureState)>> {
        match &self.states {
            StateSpec::Grid { theta, phi } => theta
                .values()
                .flat_map(|t| phi.values().map(move |p| (t, p)))
                .map(|(t, p)| {
                    let label = format!("theta={},phi={}", format_float(t), format_float(p));
                    Ok((label, BlochAngles::new(t, p)?.state()))
                })
                .collect(),
            StateSpec::Random { count } => (0..*count)
                .map(|k| {
                    let psi = PureState::new(random_pure_state(self.seed.derive(k as u64), self.set.dim())?)?;
                    Ok((format!("random#{k}"), psi))
                })
                .collect(),
        }
    }
}

/// The bounds that compete for `kind` on `set`, the new bound first.
///
/// On the Pauli triple the generic Carlson and variance-decomposition bounds
/// coincide with their spin-1/2 closed forms, so only the latter compete.
pub fn competitors(set: &ObservableSet, kind: BoundKind) -> Vec<BoundId> {
    let pauli = is_pauli_triple(&set.refs());
    let n = set.observables.len();
    match (kind, pauli) {
        (BoundKind::Product, true) => vec![BoundId::SpinProClosed, BoundId::SpinProHr, BoundId::SpinProFd],
        (BoundKind::Sum, true) => vec![BoundId::Additive, BoundId::SpinSumSong, BoundId::SpinSumFd],
        (BoundKind::Product, false) if n == 2 => {
            vec![BoundId::CarlsonProduct, BoundId::Robertson, BoundId::MondalProduct]
        }
        (BoundKind::Product, false) => vec![BoundId::CarlsonProduct],
        (BoundKind::Sum, false) if n == 2 => {
            vec![BoundId::Additive, BoundId::MondalSum, BoundId::VarianceDecomposition]
        }
        (BoundKind::Sum, false) => vec![BoundId::Additive, BoundId::VarianceDecomposition],
    }
}

/// Bounds among `candidates` attaining the largest value, ties included.
pub fn winners(report: &BoundReport, candidates: &[BoundId]) -> Vec<BoundId> {
    let values: Vec<(BoundId, f64)> = candidates.iter().filter_map(|&id| report.get(id).map(|v| (id, v))).collect();
    let best = values.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    values.into_iter().filter(|&(_, v)| v >= best - TIE_TOLERANCE).map(|(id, _)| id).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Standing {
    pub bound: BoundId,
    pub wins: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KindResult {
    pub kind: BoundKind,
    pub competitors: Vec<BoundId>,
    pub standings: Vec<Standing>,
    /// Per state, in state order.
    pub winners: Vec<Vec<BoundId>>,
    /// Labels of states where the first competitor does not win.
    pub new_bound_losses: Vec<String>,
}

impl KindResult {
    pub fn fraction(&self, id: BoundId) -> Option<f64> {
        self.standings.iter().find(|s| s.bound == id).map(|s| s.fraction)
    }
}

#[derive(Debug, Clone)]
pub struct TournamentSummary {
    pub set_name: String,
    pub labels: Vec<String>,
    pub results: Vec<KindResult>,
}

impl TournamentSummary {
    pub fn result(&self, kind: BoundKind) -> Option<&KindResult> {
        self.results.iter().find(|r| r.kind == kind)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# urel {VERSION} tournament: set={} states={}", self.set_name, self.labels.len());
        for r in &self.results {
            let kind = match r.kind {
                BoundKind::Product => "product",
                BoundKind::Sum => "sum",
            };
            let _ = writeln!(s, "\n[{kind}]");
            let _ = writeln!(s, "{:<26} {:>8} {:>14}", "bound", "wins", "win_fraction");
            for st in &r.standings {
                let _ = writeln!(s, "{:<26} {:>8} {:>14.6}", st.bound.as_str(), st.wins, st.fraction);
            }
            let _ = writeln!(s, "states where {} loses: {}", r.competitors[0], r.new_bound_losses.len());
            for label in &r.new_bound_losses {
                let _ = writeln!(s, "  {label}");
            }
        }
        s
    }
}

pub fn tournament(cfg: &TournamentConfig) -> CliResult<TournamentSummary> {
    cfg.validate()?;
    let states = cfg.labelled_states()?;
    let obs = cfg.set.refs();
    let reports = states.par_iter().map(|(_, psi)| bound_report(&obs, psi)).collect::<crate::Result<Vec<_>>>()?;

    let mut kinds = Vec::new();
    if cfg.mode.includes_product() {
        kinds.push(BoundKind::Product);
    }
    if cfg.mode.includes_sum() {
        kinds.push(BoundKind::Sum);
    }
    let total = reports.len() as f64;
    let results = kinds
        .into_iter()
        .map(|kind| {
            let comp = competitors(&cfg.set, kind);
            let per_state: Vec<Vec<BoundId>> = reports.iter().map(|r| winners(r, &comp)).collect();
            let standings = comp
                .iter()
                .map(|&id| {
                    let wins = per_state.iter().filter(|w| w.contains(&id)).count();
                    Standing { bound: id, wins, fraction: wins as f64 / total }
                })
                .collect();
            let new_bound_losses = per_state
                .iter()
                .zip(&states)
                .filter(|(w, _)| !w.contains(&comp[0]))
                .map(|(_, (label, _))| label.clone())
                .collect();
            KindResult { kind, competitors: comp, standings, winners: per_state, new_bound_losses }
        })
        .collect();
    Ok(TournamentSummary {
        set_name: cfg.set.name.clone(),
        labels: states.into_iter().map(|(l, _)| l).collect(),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn single(theta: f64, mode: Mode) -> TournamentConfig {
        TournamentConfig {
            set: ObservableSet::pauli3(),
            states: StateSpec::Grid { theta: Grid::fixed(theta), phi: Grid::fixed(0.0) },
            mode,
            seed: Seed(0),
        }
    }

    #[test]
    fn sum_winners_at_hand_checked_states() {
        let t = tournament(&single(FRAC_PI_4, Mode::Sum)).unwrap();
        let r = t.result(BoundKind::Sum).unwrap();
        assert_eq!(r.winners[0], vec![BoundId::SpinSumSong]);
        assert_eq!(r.new_bound_losses.len(), 1);
        assert!(t.result(BoundKind::Product).is_none());

        let t = tournament(&single(0.0, Mode::Sum)).unwrap();
        assert_eq!(t.result(BoundKind::Sum).unwrap().winners[0], vec![BoundId::Additive]);
    }

    #[test]
    fn random_states_for_custom_sets() {
        let json = "[[[[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[-1,0]]],\
                     [[[0,0],[1,0],[0,0]],[[1,0],[0,0],[1,0]],[[0,0],[1,0],[0,0]]]]";
        let set = ObservableSet::from_json(json).unwrap();
        let cfg = TournamentConfig { set, states: StateSpec::Random { count: 50 }, mode: Mode::Both, seed: Seed(3) };
        let t = tournament(&cfg).unwrap();
        assert_eq!(t.labels.len(), 50);
        let p = t.result(BoundKind::Product).unwrap();
        assert_eq!(p.competitors, vec![BoundId::CarlsonProduct, BoundId::Robertson, BoundId::MondalProduct]);
        let total: usize = p.winners.iter().map(|w| w.len()).sum();
        assert!(total >= 50);
        assert_eq!(t.render(), tournament(&cfg).unwrap().render());

        let grid =
            TournamentConfig { states: StateSpec::Grid { theta: Grid::fixed(0.0), phi: Grid::fixed(0.0) }, ..cfg };
        assert!(tournament(&grid).is_err());
    }
}
