//! Check suites: seeded random sweeps over the library's checks.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::config::RunConfig;
use crate::clifford::paravector_norm_check;
use crate::harmonic::{
    harmonicity_check, hua_transform, laplace_invariance_check, ExtremalFunction, Polynomial,
};
use crate::hypercomplex::{
    admissible_clifford_field, admissible_octonion_field, check_wang, check_zhang_gradient, check_zhang_improved,
    laplacian_factorization_check, monogenic_check, oct_factorization_check, oct_monogenic_check,
    random_quadratic_clifford, random_quadratic_octonion, schwarz_transform, CliffordField, OctonionField,
};
use crate::lab::sampling::{random_atomic, random_bounded_data, random_interior, random_multivector, random_unit};
use crate::lab::{
    check_chen_refines, check_geodesic_integral, check_hemisphere_constant, check_kalaj_vuorinen,
    check_liu_hyperbolic, check_liu_scalar, check_liu_vector, check_main_ball, check_main_sharp,
    check_main_sharp_equality, check_poisson_bound, counterexample_probe_conjecture, liu_constant, liu_constant_n3,
    BoundedHarmonic, KvVariant, QuadraturePair,
};
use crate::mobius::{
    bracket_clifford_check, fact_inequality_check, involution_check, main_fact_check, mobius_clifford_form,
    mobius_map, one_minus_phi_sq_check, product_identity_check, stoll_identity_check, tri_inequality_check,
    MobiusMap,
};
use crate::point::{self, norm};
use crate::report::{CheckReport, Regime};

/// Radius bound for random interior points in the identity suites.
const SAMPLE_RADIUS: f64 = 0.95;
/// Simpson panels for the geodesic integral.
const GEODESIC_STEPS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    MobiusIdentities,
    MobiusInequalities,
    CliffordNorm,
    MainSharp,
    MainBall,
    LiuConstants,
    LiuVector,
    KalajVuorinen,
    LaplaceInvariance,
    Dirac,
    Zhang,
    ConjectureProbe,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const CONCRETE: [Suite; 12] = [
        Suite::MobiusIdentities,
        Suite::MobiusInequalities,
        Suite::CliffordNorm,
        Suite::MainSharp,
        Suite::MainBall,
        Suite::LiuConstants,
        Suite::LiuVector,
        Suite::KalajVuorinen,
        Suite::LaplaceInvariance,
        Suite::Dirac,
        Suite::Zhang,
        Suite::ConjectureProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MobiusIdentities => "mobius-identities",
            Suite::MobiusInequalities => "mobius-inequalities",
            Suite::CliffordNorm => "clifford-norm",
            Suite::MainSharp => "main-sharp",
            Suite::MainBall => "main-ball",
            Suite::LiuConstants => "liu-constants",
            Suite::LiuVector => "liu-vector",
            Suite::KalajVuorinen => "kalaj-vuorinen",
            Suite::LaplaceInvariance => "laplace-invariance",
            Suite::Dirac => "dirac",
            Suite::Zhang => "zhang",
            Suite::ConjectureProbe => "conjecture-probe",
            Suite::All => "all",
        }
    }

    /// What the numbers in `--dims` mean for this suite.
    pub fn dim_meaning(self) -> &'static str {
        match self {
            Suite::CliffordNorm => "generator count m",
            Suite::Dirac | Suite::Zhang => "domain dimension n + 1",
            _ => "ball dimension n",
        }
    }

    fn dim_symbol(self) -> &'static str {
        match self {
            Suite::CliffordNorm => "m",
            Suite::Dirac | Suite::Zhang => "n + 1",
            _ => "n",
        }
    }

    pub fn default_dims(self) -> Vec<usize> {
        match self {
            Suite::MobiusIdentities | Suite::MobiusInequalities | Suite::MainSharp => vec![2, 3, 4, 8],
            Suite::CliffordNorm | Suite::MainBall => (2..=8).collect(),
            Suite::LiuConstants => vec![2, 3, 4, 5],
            Suite::LiuVector => vec![2, 4, 5],
            Suite::KalajVuorinen => vec![2],
            Suite::LaplaceInvariance => vec![2, 3, 4],
            Suite::Dirac | Suite::Zhang => vec![3, 4, 8],
            Suite::ConjectureProbe => vec![4, 5],
            Suite::All => Vec::new(),
        }
    }

    pub fn supports(self, n: usize) -> bool {
        match self {
            Suite::LiuVector => n == 2 || (4..=8).contains(&n),
            Suite::KalajVuorinen => n == 2,
            Suite::Dirac | Suite::Zhang => (3..=9).contains(&n),
            Suite::ConjectureProbe => (4..=8).contains(&n),
            Suite::All => (2..=9).contains(&n),
            _ => (2..=8).contains(&n),
        }
    }

    pub fn check_dim(self, n: usize) -> anyhow::Result<()> {
        if self.supports(n) {
            return Ok(());
        }
        let why = match (self, n) {
            (Suite::LiuVector, 3) => ": the ball-volume constant is not the sharp bound for n = 3",
            (Suite::KalajVuorinen, _) => ": the planar bound is specific to the unit disk",
            (Suite::ConjectureProbe, _) => ": the probe targets n >= 4",
            _ => "",
        };
        bail!("suite {} does not support {} = {n}{why}", self.name(), self.dim_symbol())
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(Suite::All);
        }
        Suite::CONCRETE.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::CONCRETE.iter().map(|x| x.name()).collect();
            anyhow::anyhow!("unknown suite '{s}' (expected one of: {}, all)", names.join(", "))
        })
    }
}

impl Serialize for Suite {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of one trial, independent of scheduling.
pub fn trial_seed(seed: u64, suite: Suite, n: usize, trial: u64) -> u64 {
    let mut z = splitmix64(seed ^ fnv1a(suite.name()));
    z = splitmix64(z ^ n as u64);
    splitmix64(z ^ trial)
}

/// Seed of the Monte Carlo rule shared by all trials of a suite and dimension.
fn quadrature_seed(seed: u64, suite: Suite, n: usize) -> u64 {
    trial_seed(seed, suite, n, u64::MAX)
}

/// Dimensions a suite runs on under `config`: the explicit list (filtered
/// to supported values when running `all`) or the suite's defaults.
pub fn suite_dims(suite: Suite, config: &RunConfig) -> Vec<usize> {
    match &config.dims {
        Some(d) => d.iter().copied().filter(|&n| suite.supports(n)).collect(),
        None => suite.default_dims(),
    }
}

/// The concrete suites selected by `config`, `all` expanded, duplicates removed.
pub fn selected_suites(config: &RunConfig) -> Vec<Suite> {
    let mut out: Vec<Suite> = Vec::new();
    for &s in &config.suites {
        let expanded: Vec<Suite> = if s == Suite::All { Suite::CONCRETE.to_vec() } else { vec![s] };
        for e in expanded {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out
}

/// Runs every selected suite. Records come back in generation order.
pub fn run_suites(config: &RunConfig) -> anyhow::Result<Vec<CheckReport>> {
    let mut records = Vec::new();
    for suite in selected_suites(config) {
        for n in suite_dims(suite, config) {
            suite.check_dim(n)?;
            let batch = run_suite(suite, n, config).with_context(|| format!("suite {suite}, {} = {n}", suite.dim_meaning()))?;
            records.extend(batch);
        }
    }
    for r in records.iter_mut() {
        if let Some(&tol) = config.tolerances.get(&r.check) {
            *r = r.clone().with_tolerance(tol);
        }
    }
    Ok(records)
}

type TrialResult = crate::Result<Vec<CheckReport>>;

/// Runs `trial` for indices `0..count` in parallel; each gets its own RNG
/// and its reports are stamped with the trial seed and index.
fn sweep<F>(config: &RunConfig, suite: Suite, n: usize, count: usize, trial: F) -> anyhow::Result<Vec<CheckReport>>
where
    F: Fn(&mut ChaCha8Rng, u64) -> TrialResult + Sync,
{
    let batches = (0..count as u64)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(config.seed, suite, n, t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            trial(&mut rng, t)
                .map(|reports| reports.into_iter().map(|r| r.with_trial(seed, t)).collect::<Vec<_>>())
                .with_context(|| format!("trial {t}"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(batches.into_iter().flatten().collect())
}

fn run_suite(suite: Suite, n: usize, config: &RunConfig) -> anyhow::Result<Vec<CheckReport>> {
    let trials = config.trials;
    match suite {
        Suite::MobiusIdentities => sweep(config, suite, n, trials, |rng, _| mobius_identities(rng, n)),
        Suite::MobiusInequalities => sweep(config, suite, n, trials, |rng, _| mobius_inequalities(rng, n)),
        Suite::CliffordNorm => sweep(config, suite, n, trials, |rng, _| clifford_norm(rng, n)),
        Suite::MainSharp => sweep(config, suite, n, trials, |rng, _| main_sharp(rng, n)),
        Suite::MainBall => sweep(config, suite, n, trials, |rng, _| main_ball(rng, n)),
        Suite::LiuConstants => {
            let q = QuadraturePair::standard(n, config.quad_size, quadrature_seed(config.seed, suite, n))?;
            sweep(config, suite, n, trials, |rng, t| liu_constants(rng, n, t, &q))
        }
        Suite::LiuVector => {
            let q = QuadraturePair::standard(n, config.quad_size, quadrature_seed(config.seed, suite, n))?;
            sweep(config, suite, n, trials, |rng, _| liu_vector(rng, n, &q))
        }
        Suite::KalajVuorinen => {
            let q = QuadraturePair::standard(n, config.quad_size, quadrature_seed(config.seed, suite, n))?;
            sweep(config, suite, n, trials, |rng, _| kalaj_vuorinen(rng, &q))
        }
        Suite::LaplaceInvariance => sweep(config, suite, n, trials, |rng, _| laplace_invariance(rng, n)),
        Suite::Dirac => sweep(config, suite, n, trials, |rng, t| dirac(rng, n, t)),
        Suite::Zhang => sweep(config, suite, n, trials, |rng, _| zhang(rng, n, config.points_per_field)),
        Suite::ConjectureProbe => {
            let q = QuadraturePair::standard(n, config.quad_size, quadrature_seed(config.seed, suite, n))?;
            sweep(config, suite, n, trials, |rng, _| conjecture_probe(rng, n, &q))
        }
        Suite::All => bail!("'all' must be expanded before running"),
    }
}

fn interior(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    random_interior(rng, n, SAMPLE_RADIUS)
}

pub fn mobius_identities(rng: &mut ChaCha8Rng, n: usize) -> TrialResult {
    let (a, x, y) = (interior(rng, n), interior(rng, n), interior(rng, n));
    let clifford = mobius_clifford_form(&a, &x)?;
    let residual = point::dist(&clifford, &mobius_map(&a, &x));
    let clifford_form = CheckReport::equal("mobius.clifford_form", n, residual, 0.0, 1e-11, Regime::Structural)
        .with_points(&[&a, &x]);
    Ok(vec![
        involution_check(&a, &x)?,
        one_minus_phi_sq_check(&a, &x)?,
        product_identity_check(&a, &x)?,
        bracket_clifford_check(&x, &a)?,
        stoll_identity_check(&MobiusMap::new(&a)?, &x, &y)?,
        clifford_form,
    ])
}

pub fn mobius_inequalities(rng: &mut ChaCha8Rng, n: usize) -> TrialResult {
    let (x, y, z) = (interior(rng, n), interior(rng, n), interior(rng, n));
    let mut out = vec![fact_inequality_check(&x, &y)?];
    let (big, small) = if norm(&x) >= norm(&y) { (&x, &y) } else { (&y, &x) };
    if norm(big) > norm(small) {
        out.push(main_fact_check(big, small)?);
    }
    out.extend(tri_inequality_check(&x, &y, &z)?);
    Ok(out)
}

pub fn clifford_norm(rng: &mut ChaCha8Rng, m: usize) -> TrialResult {
    let a = random_multivector(rng, m);
    let x: Vec<f64> = (0..=m).map(|_| rng.random_range(-1.0..1.0)).collect();
    Ok(paravector_norm_check(&a, &x)?.to_vec())
}

pub fn main_sharp(rng: &mut ChaCha8Rng, n: usize) -> TrialResult {
    let f = random_atomic(rng, n);
    let x = random_interior(rng, n, 0.99);
    let a = random_interior(rng, n, 0.9);
    let xi = random_unit(rng, n);
    let scale = 10f64.powf(rng.random_range(-1.0..=1.0));
    let extremal = ExtremalFunction::new(&a, &xi, scale)?;
    let y = interior(rng, n);
    Ok(vec![
        check_main_sharp(&f, &x)?,
        check_main_sharp(&extremal, &y)?,
        check_main_sharp_equality(&extremal, &y)?,
    ])
}

pub fn main_ball(rng: &mut ChaCha8Rng, n: usize) -> TrialResult {
    let f = random_atomic(rng, n);
    let (x, y) = (interior(rng, n), interior(rng, n));
    let mut out = check_main_ball(&f, &x, &y)?;
    out.extend(check_geodesic_integral(&f, &x, &y, GEODESIC_STEPS)?);
    Ok(out)
}

pub fn liu_constants(rng: &mut ChaCha8Rng, n: usize, trial: u64, q: &QuadraturePair) -> TrialResult {
    let mut out = Vec::new();
    if trial == 0 {
        out.push(check_hemisphere_constant(q.fine())?);
        match n {
            2 => out.push(CheckReport::equal("liu.closed_form", 2, liu_constant(2), 4.0 / PI, 1e-14, Regime::Structural)),
            3 => {
                out.push(CheckReport::equal("liu.closed_form", 3, liu_constant(3), 1.5, 0.0, Regime::Structural));
                out.push(CheckReport::less_than(
                    "liu.n3_override",
                    3,
                    liu_constant(3),
                    liu_constant_n3(),
                    0.0,
                    Regime::Structural,
                ));
            }
            _ => {}
        }
    }
    let g = random_bounded_data(rng, n, 1);
    let u = BoundedHarmonic::new(&g, q)?;
    let x = random_interior(rng, n, 0.9);
    out.push(check_liu_scalar(&u, &x)?);
    out.push(check_poisson_bound(&u, &x)?);
    Ok(out)
}

pub fn liu_vector(rng: &mut ChaCha8Rng, n: usize, q: &QuadraturePair) -> TrialResult {
    let mut out = Vec::new();
    for m in [2, 3] {
        let g = random_bounded_data(rng, n, m);
        let u = BoundedHarmonic::new(&g, q)?;
        let (x, y) = (random_interior(rng, n, 0.9), random_interior(rng, n, 0.9));
        let l = random_unit(rng, m);
        out.extend(check_liu_vector(&u, &x, Some(&l))?);
        out.push(check_liu_hyperbolic(&u, &x, &y)?);
        out.push(check_poisson_bound(&u, &x)?);
    }
    Ok(out)
}

pub fn kalaj_vuorinen(rng: &mut ChaCha8Rng, q: &QuadraturePair) -> TrialResult {
    let g = random_bounded_data(rng, 2, 1);
    let u = BoundedHarmonic::new(&g, q)?;
    let z = random_interior(rng, 2, 0.9);
    Ok(vec![
        check_kalaj_vuorinen(&u, &z, KvVariant::Original)?,
        check_kalaj_vuorinen(&u, &z, KvVariant::Chen)?,
        check_chen_refines(&u, &z)?,
    ])
}

pub fn laplace_invariance(rng: &mut ChaCha8Rng, n: usize) -> TrialResult {
    let poly = Polynomial::random_quartic(rng, n);
    let f = random_atomic(rng, n);
    let a = random_interior(rng, n, 0.6);
    let x = random_interior(rng, n, 0.6);
    let hua = hua_transform(&f, &a)?;
    Ok(vec![
        laplace_invariance_check(&poly, &a, &x)?,
        laplace_invariance_check(&f, &a, &x)?,
        harmonicity_check("harmonic.hua_transform", &hua, &x).with_points(&[&a]),
    ])
}

pub fn dirac(rng: &mut ChaCha8Rng, dim: usize, trial: u64) -> TrialResult {
    let f = random_quadratic_clifford(rng, dim)?;
    let x = random_interior(rng, dim, 0.9);
    let mut out = laplacian_factorization_check(&f, &x)?.to_vec();
    let i = 1 + trial as usize % (dim - 1);
    out.push(monogenic_check(&CliffordField::fueter(dim, i)?, &x)?);
    if dim == 8 {
        let o = random_quadratic_octonion(rng)?;
        out.push(oct_factorization_check(&o, &x)?);
        out.push(oct_monogenic_check(&OctonionField::fueter(1 + trial as usize % 7)?, &x)?);
    }
    Ok(out)
}

pub fn zhang(rng: &mut ChaCha8Rng, dim: usize, points: usize) -> TrialResult {
    let a = random_interior(rng, dim, 0.9);
    let f = admissible_clifford_field(rng, dim, &a)?;
    let (g, _) = schwarz_transform(&f, &a)?;
    let oct = if dim == 8 { Some(admissible_octonion_field(rng, &a)?) } else { None };
    let mut out = vec![check_zhang_gradient(&f, &a)?];
    for _ in 0..points {
        let x = random_interior(rng, dim, 0.999);
        out.extend(check_zhang_improved(&f, &a, &x)?);
        out.push(
            CheckReport::at_most("schwarz.bound", dim, g.eval(&x).norm(), 1.0, 0.0, Regime::Structural)
                .with_m(1 << (dim - 1))
                .with_points(&[&a, &x]),
        );
        if let Some(o) = &oct {
            out.push(check_wang(o, &a, &x)?);
        }
    }
    Ok(out)
}

pub fn conjecture_probe(rng: &mut ChaCha8Rng, n: usize, q: &QuadraturePair) -> TrialResult {
    let g = random_bounded_data(rng, n, 1);
    let u = BoundedHarmonic::new(&g, q)?;
    let x = random_interior(rng, n, 0.9);
    Ok(vec![counterexample_probe_conjecture(&u, &x)?])
}
