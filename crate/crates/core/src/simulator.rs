//! Monte Carlo coverage engine.
//!
//! Replication `i` of cell `c` draws its sample from the stream keyed by
//! `(master_seed, c, i)`; every method sees that same sample. Method `j`
//! gets its own bootstrap stream keyed by `(replication seed, j)`. Reports
//! are therefore identical for any worker count.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bootstrap::{geometric_bootstrap_region, hwang_region, BootstrapConfig, Resampling};
use crate::distributions::{sample_marginal, true_ratio, CellSpec};
use crate::error::{Error, Result};
use crate::fieller::{fieller_region_normal, geometric_region, normal_theory_quantile};
use crate::general::{conservative_region_from_sample, r_gen, GridSpec, StudentTRule};
use crate::par::map_range;
use crate::region::{RatioRegion, RegionKind};
use crate::sample::{estimate_moments, PairedSample};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    Fieller,
    Geometric,
    Hwang,
    GeometricBootstrap,
    ConservativeT,
    RGenT,
}

impl MethodName {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::Fieller => "fieller",
            MethodName::Geometric => "geometric",
            MethodName::Hwang => "hwang",
            MethodName::GeometricBootstrap => "geometric_bootstrap",
            MethodName::ConservativeT => "conservative_t",
            MethodName::RGenT => "r_gen_t",
        }
    }

    pub fn needs_bootstrap(self) -> bool {
        matches!(self, MethodName::Hwang | MethodName::GeometricBootstrap)
    }

    pub fn parse(s: &str) -> Option<Self> {
        let all = [
            MethodName::Fieller,
            MethodName::Geometric,
            MethodName::Hwang,
            MethodName::GeometricBootstrap,
            MethodName::ConservativeT,
            MethodName::RGenT,
        ];
        let norm = s.replace('-', "_");
        all.into_iter().find(|m| m.as_str() == norm)
    }
}

/// Hall subsample size used when none is configured: 10, 40 and 400 for
/// n = 20, 100 and 1000, and `0.4 n` (at least 2) otherwise.
pub fn default_subsample_m(n: usize) -> usize {
    match n {
        20 => 10,
        100 => 40,
        1000 => 400,
        _ => ((0.4 * n as f64).round() as usize).clamp(2, n.max(2)),
    }
}

/// A ratio-region method with its bootstrap flavour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub name: MethodName,
    pub bootstrap: Option<BootstrapConfig>,
    pub rule: Option<Resampling>,
    /// Overrides the per-`n` default subsample size for Hall resampling.
    pub subsample_m: Option<usize>,
}

impl MethodSpec {
    pub fn plain(name: MethodName) -> Self {
        Self { name, bootstrap: None, rule: None, subsample_m: None }
    }

    pub fn bootstrap(name: MethodName, rule: Resampling, config: BootstrapConfig) -> Self {
        Self { name, bootstrap: Some(config), rule: Some(rule), subsample_m: None }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.name.needs_bootstrap(), &self.bootstrap) {
            (true, None) => Err(Error::Domain(format!("method {} needs a bootstrap configuration", self.name.as_str()))),
            (false, Some(_)) => Err(Error::Domain(format!("method {} takes no bootstrap configuration", self.name.as_str()))),
            (true, Some(cfg)) => cfg.validate(),
            (false, None) if self.rule.is_some() => {
                Err(Error::Domain(format!("method {} takes no resampling rule", self.name.as_str())))
            }
            _ => Ok(()),
        }
    }

    fn config_for(&self, n: usize, stream: u64) -> Option<BootstrapConfig> {
        self.bootstrap.map(|cfg| BootstrapConfig {
            subsample_m: self.subsample_m.unwrap_or_else(|| default_subsample_m(n)),
            seed: seed::derive(cfg.seed, stream),
            ..cfg
        })
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.bootstrap, self.name.needs_bootstrap()) {
            (Some(cfg), true) => write!(
                f,
                "{}:{}:{}",
                self.name.as_str(),
                cfg.side.label(),
                self.rule.unwrap_or(Resampling::BootstrapT).label()
            ),
            _ => f.write_str(self.name.as_str()),
        }
    }
}

/// Anything that turns a sample into a ratio region.
pub trait RegionMethod: Sync {
    fn label(&self) -> String;

    /// `stream` is a per-replication, per-method seed for any randomness.
    fn region(&self, sample: &PairedSample, alpha: f64, stream: u64) -> Result<RatioRegion>;
}

impl RegionMethod for MethodSpec {
    fn label(&self) -> String {
        self.to_string()
    }

    fn region(&self, sample: &PairedSample, alpha: f64, stream: u64) -> Result<RatioRegion> {
        let rule = self.rule.unwrap_or(Resampling::BootstrapT);
        match self.name {
            MethodName::Fieller => fieller_region_normal(sample, alpha),
            MethodName::Geometric => {
                let m = estimate_moments(sample)?;
                geometric_region(&m, normal_theory_quantile(sample.len(), alpha)?)
            }
            MethodName::Hwang => {
                let cfg = self.config_for(sample.len(), stream).ok_or_else(|| missing(self))?;
                hwang_region(sample, alpha, rule, &cfg).map(|h| h.region)
            }
            MethodName::GeometricBootstrap => {
                let cfg = self.config_for(sample.len(), stream).ok_or_else(|| missing(self))?;
                geometric_bootstrap_region(sample, alpha, rule, &cfg)
            }
            MethodName::ConservativeT => conservative_region_from_sample(sample, &StudentTRule, &StudentTRule, alpha),
            MethodName::RGenT => r_gen(sample, &StudentTRule, alpha, GridSpec::default()),
        }
    }
}

fn missing(m: &MethodSpec) -> Error {
    Error::Domain(format!("method {} needs a bootstrap configuration", m.name.as_str()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub alpha: f64,
    pub replications: usize,
    pub master_seed: u64,
}

impl SimOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.replications == 0 {
            return Err(Error::Domain("replications must be positive".into()));
        }
        Ok(())
    }
}

/// Coverage and shape counts of one method on one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub cell_id: usize,
    pub x_family: String,
    pub x_param: String,
    pub y_family: String,
    pub y_param: String,
    pub n: usize,
    pub method: String,
    pub alpha: f64,
    #[serde(rename = "R")]
    pub replications: usize,
    pub covered: usize,
    pub coverage: f64,
    pub mc_se: f64,
    pub bounded: usize,
    pub excl_unbounded: usize,
    pub whole_line: usize,
    pub general_union: usize,
    pub one_sided_warn: usize,
    pub errors: usize,
}

impl CoverageRow {
    pub fn bounded_fraction(&self) -> f64 {
        self.bounded as f64 / self.replications as f64
    }

    pub fn one_sided_fraction(&self) -> f64 {
        self.one_sided_warn as f64 / self.replications as f64
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
}

impl CoverageReport {
    pub fn find(&self, cell_id: usize, method: &str) -> Option<&CoverageRow> {
        self.rows.iter().find(|r| r.cell_id == cell_id && r.method == method)
    }
}

#[derive(Debug, Clone, Copy)]
enum Outcome {
    Region { kind: RegionKind, covered: bool, one_sided: bool },
    Failed,
}

/// Draws replication `i` of cell `cell_id`.
pub fn replication_sample(cell: &CellSpec, cell_id: usize, replication: usize, master_seed: u64) -> Result<PairedSample> {
    let mut rng = seed::rng(replication_seed(cell_id, replication, master_seed));
    let xs = sample_marginal(&cell.x, cell.n, &mut rng);
    let ys = sample_marginal(&cell.y, cell.n, &mut rng);
    PairedSample::new(xs, ys)
}

fn replication_seed(cell_id: usize, replication: usize, master_seed: u64) -> u64 {
    seed::derive_path(master_seed, &[cell_id as u64, replication as u64])
}

/// Runs every method on `opts.replications` samples of one cell.
pub fn run_cell<M: RegionMethod>(cell_id: usize, cell: &CellSpec, methods: &[M], opts: &SimOptions) -> Result<Vec<CoverageRow>> {
    opts.validate()?;
    cell.validate()?;
    let rho = true_ratio(cell)?;
    let outcomes: Vec<Vec<Outcome>> = map_range(opts.replications, |i| {
        let rep_seed = replication_seed(cell_id, i, opts.master_seed);
        let sample = replication_sample(cell, cell_id, i, opts.master_seed);
        methods
            .iter()
            .enumerate()
            .map(|(j, method)| {
                let Ok(sample) = &sample else { return Outcome::Failed };
                match method.region(sample, opts.alpha, seed::derive(rep_seed, j as u64)) {
                    Ok(region) => Outcome::Region {
                        kind: region.kind(),
                        covered: region.contains(rho),
                        one_sided: region.is_one_sided_unbounded(),
                    },
                    Err(_) => Outcome::Failed,
                }
            })
            .collect()
    });

    let r = opts.replications;
    let rows = methods
        .iter()
        .enumerate()
        .map(|(j, method)| {
            let mut row = CoverageRow {
                cell_id,
                x_family: cell.x.family().into(),
                x_param: cell.x.param_label(),
                y_family: cell.y.family().into(),
                y_param: cell.y.param_label(),
                n: cell.n,
                method: method.label(),
                alpha: opts.alpha,
                replications: r,
                covered: 0,
                coverage: 0.0,
                mc_se: 0.0,
                bounded: 0,
                excl_unbounded: 0,
                whole_line: 0,
                general_union: 0,
                one_sided_warn: 0,
                errors: 0,
            };
            for rep in &outcomes {
                match rep[j] {
                    Outcome::Failed => row.errors += 1,
                    Outcome::Region { kind, covered, one_sided } => {
                        row.covered += covered as usize;
                        row.one_sided_warn += one_sided as usize;
                        match kind {
                            RegionKind::Bounded => row.bounded += 1,
                            RegionKind::ExclusiveUnbounded => row.excl_unbounded += 1,
                            RegionKind::WholeLine => row.whole_line += 1,
                            RegionKind::GeneralUnion => row.general_union += 1,
                        }
                    }
                }
            }
            let p = row.covered as f64 / r as f64;
            row.coverage = p;
            row.mc_se = (p * (1.0 - p) / r as f64).sqrt();
            row
        })
        .collect();
    Ok(rows)
}

/// Runs every cell; rows come out ordered by cell, then by method order.
pub fn run_grid<M: RegionMethod>(cells: &[CellSpec], methods: &[M], opts: &SimOptions) -> Result<CoverageReport> {
    if cells.is_empty() || methods.is_empty() {
        return Err(Error::Domain("simulation needs at least one cell and one method".into()));
    }
    let per_cell = map_range(cells.len(), |c| run_cell(c, &cells[c], methods, opts));
    let mut rows = Vec::new();
    for r in per_cell {
        rows.extend(r?);
    }
    Ok(CoverageReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bootstrap::Side;
    use crate::distributions::MarginalSpec;
    use std::sync::Mutex;

    fn normal_cell(var: f64, n: usize) -> CellSpec {
        let m = MarginalSpec::Normal { mean: 1.0, variance: var };
        CellSpec::new(m, m, n).unwrap()
    }

    fn opts(r: usize) -> SimOptions {
        SimOptions { alpha: 0.1, replications: r, master_seed: 2024 }
    }

    #[test]
    fn counts_sum_to_replications() {
        let methods = [MethodSpec::plain(MethodName::Fieller), MethodSpec::plain(MethodName::ConservativeT)];
        let rows = run_cell(0, &normal_cell(0.5, 20), &methods, &opts(10)).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            let total = row.bounded + row.excl_unbounded + row.whole_line + row.general_union + row.errors;
            assert_eq!(total, 10);
            assert_eq!(row.coverage, row.covered as f64 / 10.0);
        }
    }

    #[test]
    fn zero_variance_cell_is_all_errors_for_moment_based_methods() {
        // sd = 1e-150 vanishes against the mean: every sample is constant.
        let cell = normal_cell(1e-300, 20);
        let boot = BootstrapConfig { b: 199, side: Side::Symmetric, subsample_m: 10, seed: 1 };
        let methods = [
            MethodSpec::plain(MethodName::Fieller),
            MethodSpec::bootstrap(MethodName::Hwang, Resampling::BootstrapT, boot),
        ];
        let rows = run_cell(3, &cell, &methods, &opts(25)).unwrap();
        for row in &rows {
            assert_eq!(row.errors, 25, "{row:?}");
            assert_eq!(row.covered, 0);
            assert_eq!(row.coverage, 0.0);
        }
    }

    struct Recorder {
        tag: usize,
        seen: Mutex<Vec<(usize, Vec<u64>)>>,
    }

    impl RegionMethod for Recorder {
        fn label(&self) -> String {
            format!("recorder-{}", self.tag)
        }
        fn region(&self, sample: &PairedSample, _: f64, _: u64) -> Result<RatioRegion> {
            let bits = sample.xs().iter().chain(sample.ys()).map(|v| v.to_bits()).collect();
            let id = self.seen.lock().unwrap().len();
            self.seen.lock().unwrap().push((id, bits));
            Ok(RatioRegion::whole_line())
        }
    }

    #[test]
    fn every_method_sees_the_same_sample() {
        let recorders: Vec<Recorder> = (0..3).map(|tag| Recorder { tag, seen: Mutex::new(Vec::new()) }).collect();
        run_cell(0, &normal_cell(1.0, 8), &recorders, &opts(40)).unwrap();
        let mut sets: Vec<Vec<Vec<u64>>> = recorders
            .iter()
            .map(|r| {
                let mut v: Vec<Vec<u64>> = r.seen.lock().unwrap().iter().map(|(_, b)| b.clone()).collect();
                v.sort();
                v
            })
            .collect();
        let first = sets.remove(0);
        assert_eq!(first.len(), 40);
        for other in sets {
            assert_eq!(first, other);
        }
    }

    #[test]
    fn grid_is_deterministic_and_ordered() {
        let cells = [normal_cell(0.5, 20), normal_cell(2.0, 20)];
        let boot = BootstrapConfig { b: 199, side: Side::EqualTailed, subsample_m: 10, seed: 5 };
        let methods = [
            MethodSpec::plain(MethodName::Fieller),
            MethodSpec::bootstrap(MethodName::GeometricBootstrap, Resampling::Hall, boot),
        ];
        let a = run_grid(&cells, &methods, &opts(30)).unwrap();
        let b = run_grid(&cells, &methods, &opts(30)).unwrap();
        assert_eq!(a, b);
        let order: Vec<(usize, String)> = a.rows.iter().map(|r| (r.cell_id, r.method.clone())).collect();
        assert_eq!(
            order,
            vec![
                (0, "fieller".into()),
                (0, "geometric_bootstrap:equal-tailed:hall".into()),
                (1, "fieller".into()),
                (1, "geometric_bootstrap:equal-tailed:hall".into()),
            ]
        );
        assert!(run_grid(&[], &methods, &opts(3)).is_err());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn report_independent_of_worker_count() {
        let cells = [normal_cell(0.5, 20)];
        let boot = BootstrapConfig { b: 199, side: Side::Symmetric, subsample_m: 10, seed: 8 };
        let methods = [
            MethodSpec::plain(MethodName::Geometric),
            MethodSpec::bootstrap(MethodName::Hwang, Resampling::BootstrapT, boot),
        ];
        let run = || run_grid(&cells, &methods, &opts(40)).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        let many = rayon::ThreadPoolBuilder::new().num_threads(6).build().unwrap().install(run);
        assert_eq!(one, many);
    }

    #[test]
    fn method_spec_validation_and_labels() {
        assert!(MethodSpec::plain(MethodName::Hwang).validate().is_err());
        let boot = BootstrapConfig::default();
        let mut with_boot = MethodSpec::plain(MethodName::Fieller);
        with_boot.bootstrap = Some(boot);
        assert!(with_boot.validate().is_err());
        let h = MethodSpec::bootstrap(MethodName::Hwang, Resampling::Hall, boot);
        assert!(h.validate().is_ok());
        assert_eq!(h.to_string(), "hwang:symmetric:hall");
        assert_eq!(MethodName::parse("r-gen-t"), Some(MethodName::RGenT));
        assert_eq!(MethodName::parse("nope"), None);
        assert_eq!(default_subsample_m(20), 10);
        assert_eq!(default_subsample_m(100), 40);
        assert_eq!(default_subsample_m(1000), 400);
        assert_eq!(default_subsample_m(50), 20);
    }
}
