//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use hyperharm::cli::{self, RunConfig, RunOutcome, Suite};
use hyperharm::harmonic::ExtremalFunction;
use hyperharm::lab::sampling::{random_interior, random_unit};
use hyperharm::lab::{check_main_sharp, check_main_sharp_equality, liu_constant};
use hyperharm::CheckReport;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn sweep(suite: Suite, dims: &[usize], trials: usize) -> RunOutcome {
    let mut config = RunConfig::new(vec![suite]);
    config.dims = Some(dims.to_vec());
    config.trials = trials;
    config.seed = SEED;
    cli::run(&config).expect("suite runs")
}

fn of<'a>(run: &'a RunOutcome, check: &'a str) -> impl Iterator<Item = &'a CheckReport> + 'a {
    run.records.iter().filter(move |r| r.check == check)
}

fn failures(run: &RunOutcome) -> usize {
    run.summary.counts.failed
}

/// Every `(check, n)` pair occurs `trials` times.
fn full_coverage(run: &RunOutcome, checks: &[&str], dims: &[usize], trials: usize) -> bool {
    checks
        .iter()
        .all(|c| dims.iter().all(|&n| of(run, c).filter(|r| r.n == n).count() == trials))
}

/// Largest `|lhs - rhs|`, relative once the sides exceed one in magnitude.
fn max_residual<'a>(records: impl Iterator<Item = &'a CheckReport>) -> f64 {
    records
        .map(|r| (r.lhs - r.rhs).abs() / r.lhs.abs().max(r.rhs.abs()).max(1.0))
        .fold(0.0, f64::max)
}

fn mobius_identities() -> Outcome {
    let dims = [2, 3, 4, 8];
    let run = sweep(Suite::MobiusIdentities, &dims, 10_000);
    let checks = [
        "mobius.involution",
        "mobius.one_minus_phi_sq",
        "mobius.product_identity",
        "mobius.bracket_clifford",
        "mobius.stoll_identity",
        "mobius.clifford_form",
    ];
    let residual = max_residual(run.records.iter());
    let ok = failures(&run) == 0 && full_coverage(&run, &checks, &dims, 10_000) && residual <= 1e-11;
    outcome(ok, format!("{} records, max residual {residual:.2e}", run.records.len()))
}

fn clifford_norm() -> Outcome {
    let dims: Vec<usize> = (2..=8).collect();
    let run = sweep(Suite::CliffordNorm, &dims, 10_000);
    let rel = run
        .records
        .iter()
        .map(|r| (r.lhs - r.rhs).abs() / r.rhs)
        .fold(0.0, f64::max);
    let ok = failures(&run) == 0
        && full_coverage(&run, &["clifford.norm_left", "clifford.norm_right"], &dims, 10_000)
        && rel <= 1e-12;
    outcome(ok, format!("{} records, max relative error {rel:.2e}", run.records.len()))
}

fn main_sharp() -> Outcome {
    let dims = [2, 3, 4, 8];
    let run = sweep(Suite::MainSharp, &dims, 10_000);
    let sweep_ok = failures(&run) == 0 && of(&run, "main_sharp").count() == 2 * 4 * 10_000;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    let mut extremal_ok = true;
    for &n in &dims {
        for _ in 0..20 {
            let a = random_interior(&mut rng, n, 0.9);
            let xi = random_unit(&mut rng, n);
            let scale = 10f64.powf(rng.random_range(-1.0..=1.0));
            let f = ExtremalFunction::new(&a, &xi, scale).expect("valid extremal");
            for _ in 0..100 {
                let x = random_interior(&mut rng, n, 0.95);
                let eq = check_main_sharp_equality(&f, &x).expect("interior point");
                let le = check_main_sharp(&f, &x).expect("interior point");
                worst = worst.max((eq.lhs - eq.rhs).abs() / eq.rhs);
                extremal_ok &= eq.pass && le.pass;
            }
        }
    }
    outcome(
        sweep_ok && extremal_ok && worst <= 1e-9,
        format!(
            "{} atomic cases, {} failed, extremal worst relative gap {worst:.2e}",
            4 * 10_000,
            failures(&run)
        ),
    )
}

fn main_ball() -> Outcome {
    let dims: Vec<usize> = (2..=8).collect();
    let run = sweep(Suite::MainBall, &dims, 10_000);
    let checks = ["main_ball", "main_ball.weighted", "main_ball.chain", "main_ball.chain_bound"];
    let ok = failures(&run) == 0 && full_coverage(&run, &checks, &dims, 10_000);
    let violations = of(&run, "main_ball").filter(|r| !r.pass).count();
    outcome(ok, format!("{} records, {violations} violations", run.records.len()))
}

fn liu_constants() -> Outcome {
    let exact = liu_constant(3) == 1.5;
    let planar = (liu_constant(2) - 4.0 / PI).abs() <= 1e-14;
    let run = sweep(Suite::LiuConstants, &[2, 3, 4, 5], 100);
    let hemi: Vec<&CheckReport> = of(&run, "hemisphere_constant").collect();
    let hemi_ok = hemi.len() == 4
        && hemi.iter().all(|r| {
            let expected_tol = if r.n <= 3 { r.tol <= 1e-8 } else { r.regime == hyperharm::Regime::MonteCarlo };
            r.pass && expected_tol
        });
    let gaps: Vec<String> = hemi.iter().map(|r| format!("n={}: {:.1e}", r.n, (r.lhs - r.rhs).abs())).collect();
    outcome(
        exact && planar && hemi_ok && failures(&run) == 0,
        format!("liu(3) = 1.5: {exact}, liu(2) = 4/pi: {planar}, hemisphere gaps [{}]", gaps.join(", ")),
    )
}

fn liu_vector() -> Outcome {
    let dims = [2, 4, 5];
    let run = sweep(Suite::LiuVector, &dims, 1_000);
    let covered = dims.iter().all(|&n| {
        [2, 3].iter().all(|&m| {
            ["liu_vector", "liu_hyperbolic"]
                .iter()
                .all(|c| of(&run, c).filter(|r| r.n == n && r.m == m).count() == 1_000)
        })
    });
    let mut n3 = RunConfig::new(vec![Suite::LiuVector]);
    n3.dims = Some(vec![3]);
    let rejected = cli::run(&n3).is_err();
    outcome(
        failures(&run) == 0 && covered && rejected,
        format!("{} records, {} failed, n = 3 rejected: {rejected}", run.records.len(), failures(&run)),
    )
}

fn laplace() -> Outcome {
    let dims = [2, 3, 4];
    let run = sweep(Suite::LaplaceInvariance, &dims, 1_000);
    let ok = failures(&run) == 0
        && full_coverage(&run, &["harmonic.hua_transform"], &dims, 1_000)
        && of(&run, "harmonic.laplace_invariance").count() == 2 * 3 * 1_000;
    outcome(ok, format!("{} records, {} failed", run.records.len(), failures(&run)))
}

fn dirac() -> Outcome {
    let dims = [3, 4, 8];
    let run = sweep(Suite::Dirac, &dims, 200);
    let residual = max_residual(run.records.iter());
    let ok = failures(&run) == 0
        && full_coverage(&run, &["dirac.factorization", "dirac.monogenic"], &dims, 200)
        && of(&run, "dirac.octonion_factorization").count() == 200
        && residual <= 1e-6;
    outcome(ok, format!("{} records, max residual {residual:.2e}", run.records.len()))
}

fn zhang() -> Outcome {
    let dims = [3, 4, 8];
    let mut config = RunConfig::new(vec![Suite::Zhang]);
    config.dims = Some(dims.to_vec());
    config.trials = 20;
    config.points_per_field = 1_000;
    config.seed = SEED;
    let run = cli::run(&config).expect("suite runs");
    let points = 3 * 20 * 1_000;
    let strict = of(&run, "zhang.comparison").all(|r| r.lhs < r.rhs);
    let ok = failures(&run) == 0
        && of(&run, "zhang.improved").count() == points
        && of(&run, "wang").count() == 20 * 1_000
        && strict;
    outcome(ok, format!("{points} points, {} failed, strict improvement: {strict}", failures(&run)))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("hyperharm-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let run = |name: &str| {
        let path = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hyperharm"))
            .args(["verify", "--suite", "all", "--trials", "5", "--seed", "11", "-o"])
            .arg(&path)
            .env_remove("HYPERHARM_SEED")
            .output()
            .expect("binary runs")
            .status;
        (status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (sa, a) = run("a.json");
    let (sb, b) = run("b.json");
    let _ = std::fs::remove_dir_all(&dir);
    let ok = sa == Some(0) && sb == Some(0) && !a.is_empty() && a == b;
    outcome(ok, format!("{} bytes, identical: {}", a.len(), a == b))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Möbius identities", mobius_identities),
        ("Clifford norm multiplicativity", clifford_norm),
        ("sharp gradient estimate and extremal equality", main_sharp),
        ("hyperbolic Lipschitz bound and chain", main_ball),
        ("gradient constants and hemisphere data", liu_constants),
        ("vector-valued and hyperbolic bounds", liu_vector),
        ("Laplace invariance and Hua transform", laplace),
        ("Dirac factorization and monogenic fields", dirac),
        ("Clifford and octonion Schwarz bounds", zhang),
        ("determinism of verify --suite all", determinism),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = criterion();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {} ({:.1} s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
