//! Regions built from one-dimensional confidence intervals.
//!
//! [`r_gen`] scans every direction through the origin: slope `r` belongs to
//! the region when a confidence interval for the mean of the sample
//! projected onto the normal of the line `y = r x` contains zero.
//! [`conservative_region`] divides two marginal intervals, which is the
//! same as taking the wedge around the rectangle `I1 x I2`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::par::map_range;
use crate::region::{OneDimCI, RatioRegion};
use crate::sample::{mean_sd, PairedSample};
use crate::student::t_quantile;

/// A procedure producing a confidence interval for the mean of a
/// one-dimensional sample.
pub trait CIRule: Send + Sync {
    fn name(&self) -> String;

    /// Interval of confidence `level` for the mean of `data`.
    fn interval(&self, data: &[f64], level: f64) -> Result<OneDimCI>;
}

impl<R: CIRule + ?Sized> CIRule for &R {
    fn name(&self) -> String {
        (**self).name()
    }

    fn interval(&self, data: &[f64], level: f64) -> Result<OneDimCI> {
        (**self).interval(data, level)
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("confidence level must lie in (0, 1), got {level}")))
    }
}

/// The normal-theory interval `mean +- t_{n-1, (1+level)/2} sd / sqrt(n)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StudentTRule;

impl CIRule for StudentTRule {
    fn name(&self) -> String {
        "student-t".into()
    }

    fn interval(&self, data: &[f64], level: f64) -> Result<OneDimCI> {
        check_level(level)?;
        if data.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: data.len() });
        }
        let (mean, sd) = mean_sd(data);
        if sd == 0.0 {
            return Ok(OneDimCI::point(mean));
        }
        let q = t_quantile((data.len() - 1) as f64, 0.5 + level / 2.0)?;
        let half = q * sd / (data.len() as f64).sqrt();
        OneDimCI::new(mean - half, mean + half)
    }
}

/// Direction grid: `count` angles spaced uniformly over `(-pi/2, pi/2]`.
/// The last angle is `pi/2`, the vertical direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    count: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { count: 10_001 }
    }
}

impl GridSpec {
    pub fn new(count: usize) -> Result<Self> {
        if count < 3 {
            return Err(Error::Domain(format!("direction grid needs at least 3 angles, got {count}")));
        }
        Ok(Self { count })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    fn step(&self) -> f64 {
        PI / self.count as f64
    }

    /// Angle of grid point `k`, unwrapped so that any integer is valid.
    fn angle(&self, k: i64) -> f64 {
        -FRAC_PI_2 + self.step() * (k + 1) as f64
    }
}

/// Projects the sample onto the unit normal `(r, -1) / sqrt(1 + r^2)` of the
/// line `y = r x`; an infinite slope projects onto the x-axis.
pub fn project_sample(sample: &PairedSample, r: f64) -> Vec<f64> {
    if r.is_infinite() {
        return sample.xs().to_vec();
    }
    let norm = r.hypot(1.0);
    sample
        .xs()
        .iter()
        .zip(sample.ys())
        .map(|(x, y)| (r * x - y) / norm)
        .collect()
}

/// Reduces an angle to `(-pi/2, pi/2]`.
fn reduce_angle(theta: f64) -> f64 {
    let mut t = theta;
    while t > FRAC_PI_2 {
        t -= PI;
    }
    while t <= -FRAC_PI_2 {
        t += PI;
    }
    t
}

fn slope_of(theta: f64) -> f64 {
    let t = reduce_angle(theta);
    if t == FRAC_PI_2 {
        f64::INFINITY
    } else {
        t.tan()
    }
}

fn project_angle(sample: &PairedSample, theta: f64) -> Vec<f64> {
    if theta == FRAC_PI_2 {
        return sample.xs().to_vec();
    }
    let (s, c) = theta.sin_cos();
    sample.xs().iter().zip(sample.ys()).map(|(x, y)| x * s - y * c).collect()
}

/// Where `J_r` lies relative to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    Contains,
    Above,
}

impl Side {
    fn of(ci: OneDimCI) -> Self {
        if ci.hi < 0.0 {
            Side::Below
        } else if ci.lo > 0.0 {
            Side::Above
        } else {
            Side::Contains
        }
    }

    fn flipped(self, flip: bool) -> Self {
        match (self, flip) {
            (Side::Below, true) => Side::Above,
            (Side::Above, true) => Side::Below,
            (s, _) => s,
        }
    }
}

const REFINE_ITERATIONS: usize = 40;
const SLOPE_TOLERANCE: f64 = 1e-6;

/// The region `{ r : 0 in J_r }`, where `J_r` is `rule` at level `1 - alpha`
/// on the sample projected orthogonally to slope `r`.
///
/// Membership is evaluated on the angle grid and every change between
/// adjacent grid angles is refined by bisection: member/non-member changes
/// give run endpoints, and a jump of `J_r` from one side of zero to the
/// other gives the crossing in between. Runs that pass through the vertical
/// direction become the two unbounded tails.
pub fn r_gen<R: CIRule>(sample: &PairedSample, rule: &R, alpha: f64, grid: GridSpec) -> Result<RatioRegion> {
    let level = 1.0 - alpha;
    check_level(level)?;
    let canonical = |theta: f64| -> Result<Side> {
        rule.interval(&project_angle(sample, theta), level)
            .map(Side::of)
            .map_err(|e| Error::Rule { slope: slope_of(theta), source: Box::new(e) })
    };
    // Membership is always evaluated on the canonical direction in
    // (-pi/2, pi/2]; unwrapped angles a half-turn away see the projection
    // negated, so their side flips.
    let side_at = |theta: f64| -> Result<Side> {
        let t = reduce_angle(theta);
        let turns = ((theta - t) / PI).round() as i64;
        Ok(canonical(t)?.flipped(turns.rem_euclid(2) == 1))
    };

    let n = grid.count;
    let sides = map_range(n, |k| canonical(grid.angle(k as i64)))
        .into_iter()
        .collect::<Result<Vec<Side>>>()?;
    let side_of_index = |k: i64| sides[k.rem_euclid(n as i64) as usize].flipped(k.div_euclid(n as i64).rem_euclid(2) == 1);

    let Some(first_out) = sides.iter().position(|s| *s != Side::Contains) else {
        return Ok(RatioRegion::whole_line());
    };

    // Boundary between a member angle and a non-member angle.
    let refine_edge = |inside: f64, outside: f64| -> Result<f64> {
        let (mut a, mut b) = (inside, outside);
        for _ in 0..REFINE_ITERATIONS {
            if (slope_of(a) - slope_of(b)).abs() < SLOPE_TOLERANCE {
                break;
            }
            let mid = 0.5 * (a + b);
            if side_at(mid)? == Side::Contains {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(0.5 * (a + b))
    };
    // Crossing between two non-member angles on opposite sides of zero.
    let refine_crossing = |left: f64, right: f64| -> Result<(f64, f64)> {
        let left_side = side_at(left)?;
        let (mut a, mut b) = (left, right);
        for _ in 0..REFINE_ITERATIONS {
            let mid = 0.5 * (a + b);
            match side_at(mid)? {
                Side::Contains => return Ok((refine_edge(mid, left)?, refine_edge(mid, right)?)),
                s if s == left_side => a = mid,
                _ => b = mid,
            }
        }
        let mid = 0.5 * (a + b);
        Ok((mid, mid))
    };

    // Walk the projective circle once, starting at a non-member.
    let mut runs: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<f64> = None;
    let base = first_out as i64;
    for k in base + 1..=base + n as i64 {
        let (prev, cur) = (side_of_index(k - 1), side_of_index(k));
        let (theta_prev, theta_cur) = (grid.angle(k - 1), grid.angle(k));
        match (prev, cur) {
            (Side::Contains, Side::Contains) => {}
            (_, Side::Contains) => open = Some(refine_edge(theta_cur, theta_prev)?),
            (Side::Contains, _) => {
                let lo = open.take().expect("run opened before it closes");
                runs.push((lo, refine_edge(theta_prev, theta_cur)?));
            }
            (a, b) if a != b => runs.push(refine_crossing(theta_prev, theta_cur)?),
            _ => {}
        }
    }

    let mut intervals = Vec::new();
    for (lo, hi) in runs {
        // Does the angular run pass through a vertical direction pi/2 + j pi?
        let j = ((lo - FRAC_PI_2) / PI).ceil();
        let vertical = FRAC_PI_2 + j * PI;
        if vertical <= hi {
            intervals.push(OneDimCI { lo: slope_of(lo), hi: f64::INFINITY });
            intervals.push(OneDimCI { lo: f64::NEG_INFINITY, hi: slope_of(hi) });
        } else {
            let (a, b) = (slope_of(lo), slope_of(hi));
            intervals.push(OneDimCI { lo: a.min(b), hi: a.max(b) });
        }
    }
    Ok(RatioRegion::from_intervals(intervals))
}

/// The ratio set `I2 / I1 = { y / x : y in I2, x in I1 }`, evaluated by sign
/// cases.
///
/// * `0 not in I1`: bounded by the extreme corner ratios.
/// * `0 in I1`, `0 not in I2`: two tails meeting the endpoint of `I2`
///   closest to zero divided by each endpoint of `I1`.
/// * `0 in I1` and `0 in I2`: the whole line.
///
/// An endpoint of `I1` exactly at zero makes one tail reach across the whole
/// line, so that case also yields the whole line.
pub fn conservative_region(i1: OneDimCI, i2: OneDimCI) -> RatioRegion {
    let zero_in_i1 = i1.contains(0.0);
    let zero_in_i2 = i2.contains(0.0);

    if !zero_in_i1 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for x in [i1.lo, i1.hi] {
            for y in [i2.lo, i2.hi] {
                if let Some(v) = corner_ratio(y, x) {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
        }
        return RatioRegion::from_intervals(vec![OneDimCI { lo, hi }]);
    }
    if zero_in_i2 || i1.lo == 0.0 || i1.hi == 0.0 {
        return RatioRegion::whole_line();
    }
    let y0 = if i2.lo > 0.0 { i2.lo } else { i2.hi };
    let (a, b) = (y0 / i1.lo, y0 / i1.hi);
    RatioRegion::from_intervals(vec![
        OneDimCI { lo: f64::NEG_INFINITY, hi: a.min(b) },
        OneDimCI { lo: a.max(b), hi: f64::INFINITY },
    ])
}

/// `y / x` for a corner with `x != 0`; `None` for `inf / inf`, which carries
/// no information beyond the other corners.
fn corner_ratio(y: f64, x: f64) -> Option<f64> {
    match (y.is_infinite(), x.is_infinite()) {
        (true, true) => None,
        (false, true) => Some(0.0),
        _ => Some(y / x),
    }
}

/// Marginal intervals at level `1 - alpha/2` each, then [`conservative_region`];
/// the result has level at least `1 - alpha`.
pub fn conservative_region_from_sample<R1: CIRule, R2: CIRule>(
    sample: &PairedSample,
    rule1: &R1,
    rule2: &R2,
    alpha: f64,
) -> Result<RatioRegion> {
    let level = 1.0 - alpha / 2.0;
    check_level(1.0 - alpha)?;
    let i1 = rule1.interval(sample.xs(), level)?;
    let i2 = rule2.interval(sample.ys(), level)?;
    Ok(conservative_region(i1, i2))
}
