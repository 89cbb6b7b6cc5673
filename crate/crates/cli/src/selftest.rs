//! Built-in consistency checks: two independent region algorithms must
//! agree, and the numeric kernels must satisfy their defining identities.

use rand::Rng;
use serde_json::{json, Value};

use ratioci::distributions::{CellSpec, MarginalSpec};
use ratioci::fieller::{fieller_region, fieller_region_normal, geometric_region_perturbed};
use ratioci::general::{conservative_region, r_gen, GridSpec, StudentTRule};
use ratioci::region::{OneDimCI, RatioRegion, RegionKind};
use ratioci::sample::MomentEstimates;
use ratioci::seed;
use ratioci::simulator::replication_sample;
use ratioci::student::t_quantile;
use ratioci::text::format_region;

pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;
pub const R_GEN_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestOptions {
    pub seed: u64,
    pub instances: usize,
    /// Relative error injected into the tangent slopes of the geometric
    /// solver; zero in normal operation.
    pub perturbation: f64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self { seed: 1, instances: 10_000, perturbation: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<Value>,
}

impl SuiteResult {
    fn pass(name: &'static str, detail: String) -> Self {
        Self { name, passed: true, detail, counterexample: None }
    }

    fn fail(name: &'static str, detail: String, counterexample: Value) -> Self {
        Self { name, passed: false, detail, counterexample: Some(counterexample) }
    }
}

fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(floor)
}

/// Same kind, same number of pieces, endpoints equal to relative `rel`
/// (absolute below `floor`).
pub fn regions_agree(a: &RatioRegion, b: &RatioRegion, rel: f64, floor: f64) -> bool {
    a.kind() == b.kind()
        && a.intervals().len() == b.intervals().len()
        && a.intervals()
            .iter()
            .zip(b.intervals())
            .all(|(x, y)| close(x.lo, y.lo, rel, floor) && close(x.hi, y.hi, rel, floor))
}

/// A random positive definite moment estimate with condition number at
/// most `1e6`, together with the thresholds `q_exclusive` and `q_complete`.
pub fn random_moments<R: Rng>(rng: &mut R) -> (MomentEstimates, f64, f64) {
    loop {
        let mu = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
        let l1 = 10f64.powf(rng.random_range(-2.0..1.0));
        let l2 = l1 * 10f64.powf(rng.random_range(0.0..5.99));
        let (l1, l2) = if rng.random_bool(0.5) { (l1, l2) } else { (l2, l1) };
        let phi: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let (s, c) = phi.sin_cos();
        let c11 = l1 * c * c + l2 * s * s;
        let c22 = l1 * s * s + l2 * c * c;
        let c12 = (l1 - l2) * s * c;
        let Ok(m) = MomentEstimates::new(mu, c11, c12, c22, 20) else { continue };
        if m.require_positive_definite().is_err() || m.condition_number() > 1e6 {
            continue;
        }
        let q_excl = mu[0].abs() / c11.sqrt();
        let q_complete = m.origin_distance_sq().sqrt();
        return (m, q_excl, q_complete);
    }
}

fn moments_json(m: &MomentEstimates, q: f64) -> Value {
    json!({
        "mu_hat": m.mu_hat,
        "c11": m.c11,
        "c12": m.c12,
        "c22": m.c22,
        "q": q,
    })
}

/// Compares the geometric and the algebraic region on `count` random
/// instances, cycling through the bounded, exclusive and whole-line cases.
pub fn equivalence_sweep(seed_value: u64, count: usize, perturbation: f64) -> SuiteResult {
    const NAME: &str = "equivalence";
    let mut rng = seed::rng(seed::derive(seed_value, 1));
    let mut kinds = [0usize; 3];
    for i in 0..count {
        let target = i % 3;
        let (m, q) = loop {
            let (m, q_excl, q_complete) = random_moments(&mut rng);
            let (lo, hi) = match target {
                0 => (0.1, q_excl.min(10.0)),
                1 => (q_excl.max(0.1), q_complete.min(10.0)),
                _ => (q_complete.max(0.1), 10.0),
            };
            if hi > lo {
                let t: f64 = rng.random_range(0.02..0.98);
                break (m, lo + t * (hi - lo));
            }
        };
        let algebraic = fieller_region(&m, q);
        let geometric = geometric_region_perturbed(&m, q, perturbation);
        let agree = match (&algebraic, &geometric) {
            (Ok(a), Ok(g)) => regions_agree(a, g, EQUIVALENCE_TOLERANCE, 0.0),
            _ => false,
        };
        if !agree {
            let show = |r: &ratioci::Result<RatioRegion>| match r {
                Ok(r) => format_region(r),
                Err(e) => format!("error: {e}"),
            };
            let mut ce = moments_json(&m, q);
            ce["instance"] = json!(i);
            ce["fieller"] = json!(show(&algebraic));
            ce["geometric"] = json!(show(&geometric));
            return SuiteResult::fail(NAME, format!("mismatch at instance {i}"), ce);
        }
        match algebraic.map(|r| r.kind()) {
            Ok(RegionKind::Bounded) => kinds[0] += 1,
            Ok(RegionKind::ExclusiveUnbounded) => kinds[1] += 1,
            _ => kinds[2] += 1,
        }
    }
    SuiteResult::pass(
        NAME,
        format!("{count} instances: bounded {}, exclusive {}, whole-line {}", kinds[0], kinds[1], kinds[2]),
    )
}

/// Grid inversion of the Student-t interval must reproduce Fieller's region.
pub fn r_gen_sweep(seed_value: u64, count: usize) -> SuiteResult {
    const NAME: &str = "r_gen";
    for i in 0..count {
        let var = [0.5, 2.0, 8.0][i % 3];
        let m = MarginalSpec::Normal { mean: 1.0, variance: var };
        let cell = CellSpec { x: m, y: m, n: 20 };
        let sample = replication_sample(&cell, 0, i, seed::derive(seed_value, 2)).expect("finite normal sample");
        let fieller = fieller_region_normal(&sample, 0.1);
        let grid = r_gen(&sample, &StudentTRule, 0.1, GridSpec::default());
        let agree = match (&fieller, &grid) {
            (Ok(f), Ok(g)) => regions_agree(f, g, R_GEN_TOLERANCE, 1.0),
            _ => false,
        };
        if !agree {
            let show = |r: &ratioci::Result<RatioRegion>| match r {
                Ok(r) => format_region(r),
                Err(e) => format!("error: {e}"),
            };
            let ce = json!({
                "instance": i,
                "xs": sample.xs(),
                "ys": sample.ys(),
                "alpha": 0.1,
                "fieller": show(&fieller),
                "r_gen": show(&grid),
            });
            return SuiteResult::fail(NAME, format!("mismatch at sample {i}"), ce);
        }
    }
    SuiteResult::pass(NAME, format!("{count} samples"))
}

/// `r` lies in `I2 / I1` exactly when the scaled interval `r I1` meets `I2`.
/// An `I1` endpoint at zero is read as containing zero.
pub fn division_oracle(i1: OneDimCI, i2: OneDimCI, r: f64) -> bool {
    if (i1.lo == 0.0 || i1.hi == 0.0) && !i2.contains(0.0) {
        return true;
    }
    let (a, b) = (r * i1.lo, r * i1.hi);
    a.min(b).max(i2.lo) <= a.max(b).min(i2.hi)
}

fn random_interval<R: Rng>(rng: &mut R) -> OneDimCI {
    let a: f64 = rng.random_range(-5.0..5.0);
    let b: f64 = rng.random_range(-5.0..5.0);
    OneDimCI { lo: a.min(b), hi: a.max(b) }
}

pub fn corner_sweep(seed_value: u64, count: usize) -> SuiteResult {
    const NAME: &str = "corner";
    let mut rng = seed::rng(seed::derive(seed_value, 3));
    for i in 0..count {
        let i1 = random_interval(&mut rng);
        let i2 = random_interval(&mut rng);
        let region = conservative_region(i1, i2);
        for _ in 0..10 {
            let r: f64 = rng.random_range(-20.0..20.0);
            if region.contains(r) != division_oracle(i1, i2, r) {
                let ce = json!({
                    "instance": i,
                    "i1": [i1.lo, i1.hi],
                    "i2": [i2.lo, i2.hi],
                    "probe": r,
                    "region": format_region(&region),
                });
                return SuiteResult::fail(NAME, format!("membership mismatch at pair {i}"), ce);
            }
        }
    }
    SuiteResult::pass(NAME, format!("{count} interval pairs"))
}

pub fn t_round_trip() -> SuiteResult {
    const NAME: &str = "t_quantile";
    let dfs = [1.0, 2.0, 3.0, 5.0, 10.0, 19.0, 30.0, 99.0, 1000.0];
    let ps = [1e-6, 1e-3, 0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99, 0.999, 1.0 - 1e-6];
    let mut checked = 0;
    for &df in &dfs {
        for &p in &ps {
            let back = t_quantile(df, p).and_then(|x| ratioci::student::t_cdf(df, x));
            match back {
                Ok(b) if (b - p).abs() <= 1e-9 => checked += 1,
                other => {
                    let ce = json!({ "df": df, "p": p, "cdf_of_quantile": format!("{other:?}") });
                    return SuiteResult::fail(NAME, format!("round trip failed at df={df}, p={p}"), ce);
                }
            }
        }
    }
    SuiteResult::pass(NAME, format!("{checked} (df, p) pairs"))
}

pub fn run_all(opts: &SelftestOptions) -> Vec<SuiteResult> {
    vec![
        equivalence_sweep(opts.seed, opts.instances, opts.perturbation),
        r_gen_sweep(opts.seed, 30),
        corner_sweep(opts.seed, 10_000),
        t_round_trip(),
    ]
}
