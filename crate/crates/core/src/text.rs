//! Canonical text form of ratio regions.
//!
//! ```text
//! bounded [l, u]
//! exclusive-unbounded (-inf, a] U [b, inf)
//! whole-line (-inf, inf)
//! union [l1, u1] U [l2, u2] U ...
//! union empty
//! ```
//!
//! Finite endpoints are written with six significant digits.

use crate::error::{Error, Result};
use crate::region::{OneDimCI, RatioRegion, RegionKind};

pub const SIGNIFICANT_DIGITS: usize = 6;

/// Formats `x` like C's `%.6g`, with `inf`, `-inf` and `nan` literals.
pub fn fmt_sig(x: f64) -> String {
    fmt_sig_digits(x, SIGNIFICANT_DIGITS)
}

pub fn fmt_sig_digits(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn fmt_interval(iv: &OneDimCI) -> String {
    let open = if iv.lo == f64::NEG_INFINITY { '(' } else { '[' };
    let close = if iv.hi == f64::INFINITY { ')' } else { ']' };
    format!("{open}{}, {}{close}", fmt_sig(iv.lo), fmt_sig(iv.hi))
}

pub fn format_region(region: &RatioRegion) -> String {
    let body = || region.intervals().iter().map(fmt_interval).collect::<Vec<_>>().join(" U ");
    match region.kind() {
        RegionKind::Bounded => format!("bounded {}", body()),
        RegionKind::ExclusiveUnbounded => format!("exclusive-unbounded {}", body()),
        RegionKind::WholeLine => "whole-line (-inf, inf)".into(),
        RegionKind::GeneralUnion if region.is_empty() => "union empty".into(),
        RegionKind::GeneralUnion => format!("union {}", body()),
    }
}

fn parse_endpoint(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s {
        "inf" | "+inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        _ => s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Domain(format!("bad endpoint '{s}'")))?,
    };
    Ok(v)
}

fn parse_interval(s: &str) -> Result<OneDimCI> {
    let s = s.trim();
    let bad = || Error::Domain(format!("bad interval '{s}'"));
    let open = s.chars().next().ok_or_else(bad)?;
    let close = s.chars().last().ok_or_else(bad)?;
    if s.len() < 2 || !matches!(open, '[' | '(') || !matches!(close, ']' | ')') {
        return Err(bad());
    }
    let (lo, hi) = s[1..s.len() - 1].split_once(',').ok_or_else(bad)?;
    let (lo, hi) = (parse_endpoint(lo)?, parse_endpoint(hi)?);
    if (open == '(') != (lo == f64::NEG_INFINITY) || (close == ')') != (hi == f64::INFINITY) {
        return Err(bad());
    }
    OneDimCI::new(lo, hi)
}

/// Parses the output of [`format_region`]. The stated kind must agree with
/// the intervals.
pub fn parse_region(text: &str) -> Result<RatioRegion> {
    let text = text.trim();
    let (tag, rest) = text.split_once(' ').ok_or_else(|| Error::Domain(format!("bad region '{text}'")))?;
    let rest = rest.trim();
    let expected = match tag {
        "bounded" => RegionKind::Bounded,
        "exclusive-unbounded" => RegionKind::ExclusiveUnbounded,
        "whole-line" => RegionKind::WholeLine,
        "union" => RegionKind::GeneralUnion,
        _ => return Err(Error::Domain(format!("unknown region kind '{tag}'"))),
    };
    let region = if tag == "union" && rest == "empty" {
        RatioRegion::empty()
    } else {
        let intervals = rest.split(" U ").map(parse_interval).collect::<Result<Vec<_>>>()?;
        RatioRegion::from_intervals(intervals)
    };
    if region.kind() != expected {
        return Err(Error::Domain(format!("'{text}' is not a {tag} region")));
    }
    Ok(region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sig_digit_formatting() {
        assert_eq!(fmt_sig(0.739_612_345), "0.739612");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(123_456.7), "123457");
        assert_eq!(fmt_sig(1_234_567.0), "1.23457e+06");
        assert_eq!(fmt_sig(0.000_012_345_67), "1.23457e-05");
        assert_eq!(fmt_sig(0.0001), "0.0001");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
        assert_eq!(fmt_sig(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_sig(9.999_999_9), "10");
    }

    #[test]
    fn canonical_forms() {
        let b = RatioRegion::bounded(0.739_6, 1.352).unwrap();
        assert_eq!(format_region(&b), "bounded [0.7396, 1.352]");
        let e = RatioRegion::exclusive_unbounded(-1.0, 3.0).unwrap();
        assert_eq!(format_region(&e), "exclusive-unbounded (-inf, -1] U [3, inf)");
        assert_eq!(format_region(&RatioRegion::whole_line()), "whole-line (-inf, inf)");
        assert_eq!(format_region(&RatioRegion::empty()), "union empty");
        let half = RatioRegion::from_intervals(vec![OneDimCI::new(2.0, f64::INFINITY).unwrap()]);
        assert_eq!(format_region(&half), "union [2, inf)");
    }

    #[test]
    fn parse_rejects_malformed_text() {
        for bad in [
            "",
            "bounded",
            "bounded [1, 2",
            "bounded [2, 1]",
            "bounded (-inf, 2]",
            "bounded [1, inf]",
            "exclusive-unbounded [1, 2]",
            "circle [1, 2]",
            "bounded [a, 2]",
        ] {
            assert!(parse_region(bad).is_err(), "{bad}");
        }
    }

    fn region_strategy() -> impl Strategy<Value = RatioRegion> {
        let end = prop_oneof![
            4 => -1e8f64..1e8,
            1 => Just(f64::NEG_INFINITY),
            1 => Just(f64::INFINITY),
        ];
        prop::collection::vec((end.clone(), end), 0..4).prop_map(|pairs| {
            RatioRegion::from_intervals(
                pairs
                    .into_iter()
                    .map(|(a, b)| OneDimCI::new(a.min(b), a.max(b)).unwrap())
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn round_trip(region in region_strategy()) {
            let text = format_region(&region);
            let parsed = parse_region(&text).unwrap();
            prop_assert_eq!(format_region(&parsed), text.clone());
            prop_assert_eq!(parsed.kind(), region.kind());
            prop_assert_eq!(parse_region(&format_region(&parsed)).unwrap(), parsed);
        }

        #[test]
        fn exact_for_six_digit_endpoints(m1 in -99_999i64..99_999, m2 in -99_999i64..99_999, e in -3i32..3) {
            let a: f64 = format!("{}e{e}", m1.min(m2)).parse().unwrap();
            let b: f64 = format!("{}e{e}", m1.max(m2)).parse().unwrap();
            let region = RatioRegion::bounded(a, b).unwrap();
            let parsed = parse_region(&format_region(&region)).unwrap();
            prop_assert_eq!(parsed, region);
        }
    }
}
