//! Extended-real intervals and ratio regions.
//!
//! Endpoints are `f64` with `f64::NEG_INFINITY` / `f64::INFINITY` as the
//! infinite sentinels. NaN is rejected at every constructor. All intervals
//! are closed; an infinite endpoint is contained in its interval.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaps narrower than this are closed when assembling a region.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// A one-dimensional interval `[lo, hi]` over the extended reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneDimCI {
    pub lo: f64,
    pub hi: f64,
}

impl OneDimCI {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::Domain("interval endpoint is NaN".into()));
        }
        if lo > hi {
            return Err(Error::Domain(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn whole_line() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `true` when `self` is a superset of `other`.
    pub fn covers(&self, other: &OneDimCI) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Shape taxonomy of a ratio region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionKind {
    /// A single finite interval `[l, u]`.
    Bounded,
    /// `(-inf, a] U [b, inf)` with `a < b`.
    ExclusiveUnbounded,
    /// `(-inf, inf)`.
    WholeLine,
    /// Anything else, including the empty set and one-sided half-lines.
    GeneralUnion,
}

/// An ordered union of disjoint closed intervals. The kind is always
/// derived from the interval list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRegion {
    intervals: Vec<OneDimCI>,
}

impl RatioRegion {
    /// Sorts and merges `intervals`. Overlapping, touching or nearly touching
    /// (gap below [`MERGE_TOLERANCE`]) intervals are fused.
    pub fn from_intervals(mut intervals: Vec<OneDimCI>) -> Self {
        intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));
        let mut merged: Vec<OneDimCI> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo - last.hi < MERGE_TOLERANCE || last.hi == f64::INFINITY => {
                    last.hi = last.hi.max(iv.hi);
                }
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    pub fn whole_line() -> Self {
        Self { intervals: vec![OneDimCI::whole_line()] }
    }

    pub fn bounded(lo: f64, hi: f64) -> Result<Self> {
        Ok(Self::from_intervals(vec![OneDimCI::new(lo, hi)?]))
    }

    /// `(-inf, a] U [b, inf)`; collapses to the whole line when `a >= b`.
    pub fn exclusive_unbounded(a: f64, b: f64) -> Result<Self> {
        Ok(Self::from_intervals(vec![
            OneDimCI::new(f64::NEG_INFINITY, a)?,
            OneDimCI::new(b, f64::INFINITY)?,
        ]))
    }

    pub fn intervals(&self) -> &[OneDimCI] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn kind(&self) -> RegionKind {
        let finite = |v: f64| v.is_finite();
        match self.intervals.as_slice() {
            [only] if finite(only.lo) && finite(only.hi) => RegionKind::Bounded,
            [only] if only.lo == f64::NEG_INFINITY && only.hi == f64::INFINITY => {
                RegionKind::WholeLine
            }
            [left, right]
                if left.lo == f64::NEG_INFINITY
                    && finite(left.hi)
                    && finite(right.lo)
                    && right.hi == f64::INFINITY =>
            {
                RegionKind::ExclusiveUnbounded
            }
            _ => RegionKind::GeneralUnion,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.kind() == RegionKind::Bounded
    }

    /// Unbounded towards exactly one of `-inf` and `+inf`.
    pub fn is_one_sided_unbounded(&self) -> bool {
        match (self.intervals.first(), self.intervals.last()) {
            (Some(first), Some(last)) => {
                (first.lo == f64::NEG_INFINITY) != (last.hi == f64::INFINITY)
            }
            _ => false,
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        if r.is_nan() {
            return false;
        }
        // Intervals are sorted and disjoint: binary search on `lo`.
        let idx = self.intervals.partition_point(|iv| iv.lo <= r);
        idx > 0 && self.intervals[idx - 1].hi >= r
    }

    pub fn union(&self, other: &RatioRegion) -> RatioRegion {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        Self::from_intervals(all)
    }

    pub fn intersection(&self, other: &RatioRegion) -> RatioRegion {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.max(b[j].lo);
            let hi = a[i].hi.min(b[j].hi);
            if lo <= hi {
                out.push(OneDimCI { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    /// Maps every endpoint through `f`, which must be increasing.
    pub fn map_endpoints(&self, f: impl Fn(f64) -> f64) -> RatioRegion {
        Self::from_intervals(
            self.intervals
                .iter()
                .map(|iv| OneDimCI { lo: f(iv.lo), hi: f(iv.hi) })
                .collect(),
        )
    }
}
