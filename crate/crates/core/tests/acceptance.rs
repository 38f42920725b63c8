//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the summary is always printed.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperberge::bounds::{bai_lu_bound, binom, check_convexity_chain};
use hyperberge::hypergraph::subsets_of_size;
use hyperberge::spectral::{classify, gradient_form, evaluate_form, spectral_radius, ThresholdVerdict};
use hyperberge::verify::{verify_edge_theorem, verify_lemma_r_plus_2, VerifyOptions};
use hyperberge::{brute_force_oracle, search_cycle, search_path, CertificateKind, Edge, Hypergraph};

/// Half-width allowed around closed-form spectral radii.
const CLOSED_FORM_TOL: f64 = 1e-8;
/// Slack on the Bai–Lu comparison.
const BAI_LU_SLACK: f64 = 1e-9;
/// Bracket width requested from the spectral solver.
const SOLVER_TOL: f64 = 1e-10;
const SOLVER_MAX_ITER: usize = 1_000_000;
const FD_STEP: f64 = 1e-5;
const FD_REL_TOL: f64 = 1e-6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn options() -> VerifyOptions {
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    VerifyOptions { jobs, ..Default::default() }
}

fn lemma_replication() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for n in 5..=8usize {
        let report = verify_lemma_r_plus_2(n, &options(), &mut |_| {}).map_err(|e| e.to_string())?;
        let copies = n as u64 * binom(n as u64 - 1, n as u64 - 3).unwrap() as u64;
        let at_n = &report.levels[0];
        let at_n1 = &report.levels[1];
        let good = report.pass
            && at_n.nonhamiltonian == copies
            && at_n.exceptions.len() == 1
            && at_n1.nonhamiltonian == 0
            && at_n.size == binom(binom(n as u64, 2).unwrap() as u64, n as u64).unwrap()
            && at_n1.visited as u128 == at_n1.size;
        ok &= good;
        details.push(format!(
            "n={n}: {}/{} non-Hamiltonian at m={}, {} at m={} ({:.1}s)",
            at_n.nonhamiltonian, at_n.visited, at_n.m, at_n1.nonhamiltonian, at_n1.m, report.wall_time_secs
        ));
    }
    check(ok, details.join("; "))
}

fn edge_thresholds() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (n, r) in [(5usize, 3usize), (6, 3), (6, 4), (7, 5)] {
        let report = verify_edge_theorem(n, r, &options(), &mut |_| {}).map_err(|e| e.to_string())?;
        let [path, cycle, above] = &report.levels[..] else {
            return Err(format!("({n},{r}): unexpected level layout"));
        };
        let pendant_copies = n as u64 * binom(n as u64 - 1, r as u64 - 1).unwrap() as u64;
        let good = report.pass
            && path.nonhamiltonian == n as u64
            && cycle.nonhamiltonian == pendant_copies
            && above.nonhamiltonian == 0
            && path.exceptions.len() == 1
            && cycle.exceptions.len() == 1;
        ok &= good;
        details.push(format!(
            "({n},{r}): {} untraceable at m={}, {} non-Hamiltonian at m={}, {} at m={}",
            path.nonhamiltonian, path.m, cycle.nonhamiltonian, cycle.m, above.nonhamiltonian, above.m
        ));
    }
    check(ok, details.join("; "))
}

fn brackets(h: &Hypergraph, target: f64) -> Result<bool, String> {
    let est = spectral_radius(h, SOLVER_TOL, SOLVER_MAX_ITER).map_err(|e| e.to_string())?;
    Ok(est.lower <= est.upper && est.lower >= target - CLOSED_FORM_TOL && est.upper <= target + CLOSED_FORM_TOL)
}

fn spectral_closed_forms() -> Outcome {
    let mut failures = Vec::new();
    for (k, r) in [(4usize, 3usize), (5, 3), (6, 3), (6, 4), (7, 5)] {
        let target = binom(k as u64 - 1, r as u64 - 1).unwrap() as f64;
        if !brackets(&Hypergraph::complete(k, r).unwrap(), target)? {
            failures.push(format!("K_{k}^{r}"));
        }
    }
    for (n, r) in [(6usize, 3usize), (7, 4), (7, 5)] {
        let target = binom(n as u64 - 2, r as u64 - 1).unwrap() as f64;
        if !brackets(&Hypergraph::clique_plus_isolated(n, r).unwrap(), target)? {
            failures.push(format!("K_{}^{r}+v", n - 1));
        }
        let pendant = Hypergraph::clique_plus_pendant(n, r).unwrap();
        let est = spectral_radius(&pendant, SOLVER_TOL, SOLVER_MAX_ITER).map_err(|e| e.to_string())?;
        if classify(&est, target) != ThresholdVerdict::CertifiedAbove {
            failures.push(format!("K_{}^{r}+e not certified above {target}", n - 1));
        }
    }
    check(failures.is_empty(), if failures.is_empty() { "13 brackets".into() } else { failures.join(", ") })
}

fn bai_lu_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBA11);
    let mut violations = 0;
    let mut unconverged = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let n = rng.gen_range(5..=8usize);
        let r = rng.gen_range(3..=n - 2);
        let total = binom(n as u64, r as u64).unwrap() as usize;
        let m = rng.gen_range(0..=total);
        let h = Hypergraph::random(n, r, m, &mut rng).unwrap();
        let est = spectral_radius(&h, SOLVER_TOL, SOLVER_MAX_ITER).map_err(|e| e.to_string())?;
        let gap = est.upper - bai_lu_bound(r as u32, m as u64);
        worst = worst.max(gap);
        if gap > BAI_LU_SLACK {
            violations += 1;
        }
        if !est.converged {
            unconverged += 1;
        }
    }
    check(
        violations == 0,
        format!("10000 instances, {violations} violations, {unconverged} unconverged, max(upper - f_r(m)) = {worst:.3e}"),
    )
}

fn implication_chain() -> Outcome {
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for r in 3..=8u64 {
        for n in r + 2..=20 {
            let t = binom(n - 2, r - 1).unwrap() as f64;
            let need = binom(n - 1, r).unwrap();
            for m in 0..=binom(n, r).unwrap() as u64 {
                checked += 1;
                if bai_lu_bound(r as u32, m) >= t && (m as u128) < need {
                    violations.push((n, r, m));
                }
            }
        }
    }
    check(violations.is_empty(), format!("{checked} (n, r, m) triples, violations: {violations:?}"))
}

fn convexity_chain() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for r in 3..=12u64 {
        for n in r + 3..=40 {
            checked += 1;
            match check_convexity_chain(n, r) {
                Ok(chain) if chain.holds() => {}
                Ok(chain) => failures.push(format!("({n},{r}) line {:?}", chain.failed_step)),
                Err(e) => failures.push(format!("({n},{r}): {e}")),
            }
        }
    }
    check(failures.is_empty(), format!("{checked} (n, r) pairs, failures: {failures:?}"))
}

fn agrees(h: &Hypergraph) -> bool {
    let cycle = brute_force_oracle(h, CertificateKind::Cycle).unwrap();
    let path = brute_force_oracle(h, CertificateKind::Path).unwrap();
    search_cycle(h).found() == cycle && search_path(h, None).unwrap().found() == path
}

fn oracle_equivalence() -> Outcome {
    let universe: Vec<Edge> = subsets_of_size(5, 3).map(Edge::from_mask).collect();
    let mut disagreements = 0;
    for bits in 0u32..1 << universe.len() {
        let edges = (0..universe.len()).filter(|i| bits & (1 << i) != 0).map(|i| universe[i]);
        if !agrees(&Hypergraph::from_edges(5, 3, edges).unwrap()) {
            disagreements += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    let mut random_disagreements = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(6..=7usize);
        let r = rng.gen_range(2..n);
        let m = rng.gen_range(0..=binom(n as u64, r as u64).unwrap() as usize);
        if !agrees(&Hypergraph::random(n, r, m, &mut rng).unwrap()) {
            random_disagreements += 1;
        }
    }
    check(
        disagreements == 0 && random_disagreements == 0,
        format!("1024 exhaustive ({disagreements} disagreements), 10000 random ({random_disagreements} disagreements)"),
    )
}

fn tightness() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for r in 3..=5usize {
        let n = r + 1;
        let universe: Vec<Edge> = subsets_of_size(n, r).map(Edge::from_mask).collect();
        let mut hamiltonian = Vec::new();
        for bits in 0u32..1 << universe.len() {
            let edges = (0..universe.len()).filter(|i| bits & (1 << i) != 0).map(|i| universe[i]);
            let h = Hypergraph::from_edges(n, r, edges).unwrap();
            if search_cycle(&h).found() {
                hamiltonian.push(h);
            }
        }
        ok &= hamiltonian == [Hypergraph::complete(n, r).unwrap()];
        details.push(format!("r={r}: {} Hamiltonian of {}", hamiltonian.len(), 1u32 << universe.len()));
    }
    check(ok, details.join("; "))
}

fn gradient_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6AAD);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..20 {
        let n = rng.gen_range(5..=9usize);
        let r = rng.gen_range(2..n);
        let m = rng.gen_range(1..=binom(n as u64, r as u64).unwrap() as usize);
        let h = Hypergraph::random(n, r, m, &mut rng).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
            let g = gradient_form(&h, &x).unwrap();
            for i in 0..n {
                let (mut up, mut down) = (x.clone(), x.clone());
                up[i] += FD_STEP;
                down[i] -= FD_STEP;
                let fd = (evaluate_form(&h, &up).unwrap() - evaluate_form(&h, &down).unwrap()) / (2.0 * FD_STEP);
                let err = if g[i] == 0.0 { fd.abs() } else { (fd - g[i]).abs() / g[i].abs() };
                worst = worst.max(err);
                if err > FD_REL_TOL {
                    failures += 1;
                }
            }
        }
    }
    check(failures == 0, format!("2000 vectors, {failures} components off, worst relative error {worst:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("lemma replication, n = 5..8", lemma_replication),
        ("edge thresholds, desk scale", edge_thresholds),
        ("spectral closed forms", spectral_closed_forms),
        ("Bai-Lu bound on random hypergraphs", bai_lu_suite),
        ("spectral-to-edge implication chain", implication_chain),
        ("convexity chain", convexity_chain),
        ("oracle equivalence", oracle_equivalence),
        ("tightness on r + 1 vertices", tightness),
        ("gradient against finite differences", gradient_check),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = run();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
