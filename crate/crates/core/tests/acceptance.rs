//! Acceptance suite. Runs as a plain binary (`harness = false`) so every
//! criterion prints its PASS/FAIL line; exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use uncertainty_core::bounds::{bound_report, variance_decomposition_sum_bound};
use uncertainty_core::cli::{fuzz, scan, simulate, FuzzConfig, Grid, Mode, ObservableSet, ScanConfig};
use uncertainty_core::expsim::{empirical_bound_report, SimConfig};
use uncertainty_core::qmath::{hermitian_eigendecompose, random_hermitian};
use uncertainty_core::spinhalf::{pauli, pauli_triple, spin_product_bounds, spin_sum_bounds};
use uncertainty_core::{BlochAngles, BoundId, Observable, PureState, Seed, SquareMatrix};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn bloch(theta: f64, phi: f64) -> PureState {
    BlochAngles::new(theta, phi).unwrap().state()
}

fn grid61() -> Vec<(f64, f64)> {
    let t = Grid::new(0.0, PI, 61).unwrap();
    let p = Grid::new(0.0, 2.0 * PI, 61).unwrap();
    t.values().flat_map(|a| p.values().map(move |b| (a, b))).collect()
}

fn max_abs_diff(a: &SquareMatrix, b: &SquareMatrix) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn qubit_sum_identity() -> Verdict {
    let start = Instant::now();
    let cfg = ScanConfig {
        set: ObservableSet::pauli3(),
        theta: Grid::new(0.0, PI, 61).unwrap(),
        phi: Grid::new(0.0, 2.0 * PI, 61).unwrap(),
        mode: Mode::Sum,
        simulation: None,
    };
    let table = scan(&cfg).unwrap();
    let worst = table.rows.iter().map(|r| (r.report.lhs_sum - 2.0).abs()).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    verdict(
        table.rows.len() == 3721 && worst <= 1e-12 && elapsed < Duration::from_secs(5),
        format!("3721 points, max |sum - 2| = {worst:.1e}, {elapsed:.2?} (limit 5 s)"),
    )
}

fn tight_cases() -> Verdict {
    let obs = pauli_triple::<f64>();
    let refs: Vec<&Observable> = obs.iter().collect();
    let mut worst: f64 = 0.0;
    let states: Vec<(f64, f64)> = vec![(0.0, 0.0), (0.0, PI / 3.0), (0.0, PI), (0.0, 2.0 * PI), (PI / 2.0, 0.0)];
    for (t, p) in &states {
        let r = bound_report(&refs, &bloch(*t, *p)).unwrap();
        let add = r.get(BoundId::Additive).unwrap();
        worst = worst.max((add - 2.0).abs()).max((r.lhs_sum - 2.0).abs());
    }
    verdict(worst <= 1e-12, format!("additive = lhs_sum = 2 at {} states, max deviation {worst:.1e}", states.len()))
}

fn spot_values() -> Verdict {
    let obs = pauli_triple::<f64>();
    let refs: Vec<&Observable> = obs.iter().collect();
    let r = bound_report(&refs, &bloch(PI / 4.0, 0.0)).unwrap();
    let g = |id| r.get(id).unwrap();
    let expected = [
        ("lhs_product", r.lhs_product, 0.25),
        ("carlson_product", g(BoundId::CarlsonProduct), 0.204155),
        ("spin_pro_closed", g(BoundId::SpinProClosed), 0.204155),
        ("spin_pro_hr", g(BoundId::SpinProHr), 0.0),
        ("spin_pro_fd", g(BoundId::SpinProFd), 0.0),
        ("additive", g(BoundId::Additive), 1.937359),
        ("spin_sum_song", g(BoundId::SpinSumSong), 1.992023),
        ("spin_sum_fd", g(BoundId::SpinSumFd), 0.816497),
    ];
    let bad: Vec<String> = expected
        .iter()
        .filter(|(_, got, want)| (got - want).abs() > 1e-6)
        .map(|(name, got, want)| format!("{name} {got:.7} != {want}"))
        .collect();
    if bad.is_empty() {
        verdict(true, format!("{} values within 1e-6", expected.len()))
    } else {
        verdict(false, bad.join("; "))
    }
}

fn strictness_witness() -> Verdict {
    let (s1, s3) = (pauli::<f64>(1).unwrap(), pauli::<f64>(3).unwrap());
    let r = bound_report(&[&s1, &s3], &bloch(2.0 * PI / 3.0, 0.0)).unwrap();
    let mp = r.get(BoundId::MondalProduct).unwrap();
    let carl = r.get(BoundId::CarlsonProduct).unwrap();
    let ok = (mp - 0.09375).abs() <= 1e-6 && (carl - 0.174940).abs() <= 1e-6 && (r.lhs_product - 0.1875).abs() <= 1e-6;
    verdict(
        ok && carl > mp,
        format!("mondal_product {mp:.6}, carlson_product {carl:.6}, lhs_product {:.6}", r.lhs_product),
    )
}

fn fuzz_validity() -> Verdict {
    let start = Instant::now();
    let cfg = FuzzConfig::new(vec![2, 3, 4, 5, 6], vec![2, 3, 4], 10_000, Seed(1)).unwrap();
    let report = fuzz(&cfg).unwrap();
    let elapsed = start.elapsed();
    let chains = [
        "chain:carlson_product>=mondal_product",
        "chain:additive>=mondal_sum",
        "chain:additive>=sum_lambda_sq/(2(N-1))",
    ];
    let chains_seen = chains.iter().all(|c| report.check(c).is_some_and(|s| s.instances > 0));
    verdict(
        report.violation_count() == 0 && chains_seen && elapsed < Duration::from_secs(60),
        format!("10000 instances, {} violations, {elapsed:.2?} (limit 60 s)", report.violation_count()),
    )
}

fn closed_form_equivalence() -> Verdict {
    let obs = pauli_triple::<f64>();
    let refs: Vec<&Observable> = obs.iter().collect();
    let (mut product, mut sum): (f64, f64) = (0.0, 0.0);
    for (t, p) in grid61() {
        let psi = bloch(t, p);
        let generic = bound_report(&refs, &psi).unwrap();
        let closed = spin_product_bounds(&psi).unwrap().pro_closed;
        product = product.max((closed - generic.get(BoundId::CarlsonProduct).unwrap()).abs());
        let song = spin_sum_bounds(&psi).unwrap().sum_song;
        sum = sum.max((song - variance_decomposition_sum_bound(&refs, &psi).unwrap()).abs());
    }
    verdict(product <= 1e-12 && sum <= 1e-12, format!("max product gap {product:.1e}, max sum gap {sum:.1e}"))
}

fn triviality_contrast() -> Verdict {
    let mut min_closed = f64::INFINITY;
    let mut nonzero_trivial = 0;
    for n in (1..=11).filter(|&n| n != 6) {
        let b = spin_product_bounds(&bloch(n as f64 * PI / 12.0, 0.0)).unwrap();
        if b.pro_hr != 0.0 || b.pro_fd != 0.0 {
            nonzero_trivial += 1;
        }
        min_closed = min_closed.min(b.pro_closed);
    }
    verdict(
        nonzero_trivial == 0 && min_closed > 1e-4,
        format!("hr = fd = 0 at 10 states, min spin_pro_closed {min_closed:.4e}"),
    )
}

fn eigensolver() -> Verdict {
    let (mut recon, mut ortho): (f64, f64) = (0.0, 0.0);
    for k in 0..100u64 {
        let dim = 2 + (k as usize % 7);
        let m = random_hermitian::<f64>(Seed(1000).derive(k), dim).unwrap();
        let sd = hermitian_eigendecompose(&m).unwrap();
        recon = recon.max(max_abs_diff(&sd.reconstruct(), m.matrix()));
        ortho = ortho.max(max_abs_diff(&sd.gram(), &SquareMatrix::identity(dim)));
    }
    verdict(
        recon <= 1e-10 && ortho <= 1e-10,
        format!("100 matrices, reconstruction {recon:.1e}, orthonormality {ortho:.1e}"),
    )
}

fn convergence_states() -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = (0..13).map(|n| (n as f64 * PI / 12.0, 0.0)).collect();
    v.extend((1..=7).map(|n| (PI / 4.0, n as f64 * PI / 4.0)));
    v
}

fn simulation_convergence() -> Verdict {
    let start = Instant::now();
    let obs = pauli_triple::<f64>();
    let refs: Vec<&Observable> = obs.iter().collect();
    let states = convergence_states();
    let ids = [BoundId::CarlsonProduct, BoundId::Additive];
    let mut outside = Vec::new();
    let mut err_sums = [[0.0; 2]; 2];
    for (si, shots) in [1_000_000u64, 4_000_000].into_iter().enumerate() {
        for (k, (t, p)) in states.iter().enumerate() {
            let psi = bloch(*t, *p);
            let exact = bound_report(&refs, &psi).unwrap();
            let cfg = SimConfig::new(shots, Seed(9).derive(k as u64), 1000).unwrap();
            let emp = empirical_bound_report(&refs, &psi, &cfg).unwrap();
            for (j, id) in ids.iter().enumerate() {
                let e = emp.get(*id).unwrap();
                err_sums[si][j] += e.std_error;
                let gap = (e.value - exact.get(*id).unwrap()).abs();
                if si == 0 && gap > 5.0 * e.std_error + 1e-12 {
                    outside.push(format!("{id}@({t:.3},{p:.3}) gap {gap:.2e} se {:.2e}", e.std_error));
                }
            }
        }
    }
    let ratios = [err_sums[0][0] / err_sums[1][0], err_sums[0][1] / err_sums[1][1]];
    let elapsed = start.elapsed();
    let ratios_ok = ratios.iter().all(|r| (r / 2.0 - 1.0).abs() <= 0.2);
    let mut detail = format!(
        "20 states, {} estimates outside 5 se, error-bar ratio carlson {:.3} additive {:.3}, {elapsed:.2?} (limit 120 s)",
        outside.len(),
        ratios[0],
        ratios[1]
    );
    if !outside.is_empty() {
        detail.push_str(&format!(": {}", outside.join("; ")));
    }
    verdict(outside.is_empty() && ratios_ok && elapsed < Duration::from_secs(120), detail)
}

fn run_urel(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_urel")).args(args).output().expect("urel runs");
    assert!(out.status.success(), "urel {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Verdict {
    let cases: [&[&str]; 3] = [
        &["--seed", "3", "scan", "--theta", "0:pi:61", "--phi", "0:2pi:7"],
        &["--seed", "1", "fuzz", "--trials", "2000"],
        &["--seed", "5", "simulate", "--theta", "0:pi:13", "--shots", "2800", "--resamples", "200"],
    ];
    let mut differing = Vec::new();
    for args in cases {
        if run_urel(args) != run_urel(args) {
            differing.push(args[2]);
        }
    }
    let cfg = ScanConfig {
        set: ObservableSet::pauli3(),
        theta: Grid::new(0.0, PI, 13).unwrap(),
        phi: Grid::fixed(0.0),
        mode: Mode::Both,
        simulation: Some(SimConfig::new(2800, Seed(5), 200).unwrap()),
    };
    if simulate(&cfg).unwrap().to_csv() != simulate(&cfg).unwrap().to_csv() {
        differing.push("simulate (library)");
    }
    verdict(differing.is_empty(), format!("scan, fuzz, simulate rerun; differing outputs: {differing:?}"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 10] = [
        ("qubit sum identity", qubit_sum_identity),
        ("tight cases", tight_cases),
        ("spot values at bloch(pi/4, 0)", spot_values),
        ("carlson strictly above mondal product", strictness_witness),
        ("fuzz validity", fuzz_validity),
        ("closed-form equivalence", closed_form_equivalence),
        ("triviality contrast on the phi = 0 meridian", triviality_contrast),
        ("eigensolver residuals", eigensolver),
        ("simulation convergence", simulation_convergence),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("{} criterion {:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
