//! Student-t distribution function and its inverse.

use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Absolute tolerance of the quantile root search (relative beyond |x| = 1).
const QUANTILE_TOL: f64 = 1e-10;

/// Student-t distribution with real-valued degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TDist {
    df: f64,
}

impl TDist {
    pub fn new(df: f64) -> Result<Self> {
        if !(df > 0.0) || df.is_infinite() {
            return Err(Error::Domain(format!("degrees of freedom must be positive and finite, got {df}")));
        }
        Ok(Self { df })
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    /// `P(T <= x)` through the regularized incomplete beta function.
    pub fn cdf(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.5;
        }
        if x.is_infinite() {
            return if x > 0.0 { 1.0 } else { 0.0 };
        }
        let z = self.df / (self.df + x * x);
        let tail = 0.5 * beta_reg(0.5 * self.df, 0.5, z);
        if x > 0.0 {
            1.0 - tail
        } else {
            tail
        }
    }

    /// The `p`-quantile, found by bisection on [`TDist::cdf`].
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("probability must lie in (0, 1), got {p}")));
        }
        if p == 0.5 {
            return Ok(0.0);
        }
        // Solve on the upper half and reflect; the tail cdf is more accurate there.
        let upper = p > 0.5;
        let target = if upper { p } else { 1.0 - p };
        let mut hi = 1.0;
        while self.cdf(hi) < target {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Domain(format!("quantile {p} is not representable")));
            }
        }
        let mut lo = 0.0;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= QUANTILE_TOL * hi.max(1.0) {
                break;
            }
            if self.cdf(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        Ok(if upper { x } else { -x })
    }
}

/// Convenience: `P(T_df <= x)`.
pub fn t_cdf(df: f64, x: f64) -> Result<f64> {
    Ok(TDist::new(df)?.cdf(x))
}

/// Convenience: the `p`-quantile of `t_df`.
pub fn t_quantile(df: f64, p: f64) -> Result<f64> {
    TDist::new(df)?.quantile(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson quadrature, used as an independent oracle.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    /// CDF by integrating the unnormalized density after x = tan(theta).
    fn cdf_by_quadrature(df: f64, x: f64) -> f64 {
        let kernel = move |theta: f64| {
            let t = theta.tan();
            let sec2 = 1.0 + t * t;
            (1.0 + t * t / df).powf(-(df + 1.0) / 2.0) * sec2
        };
        let lo = -std::f64::consts::FRAC_PI_2 + 1e-12;
        let hi = std::f64::consts::FRAC_PI_2 - 1e-12;
        let total = simpson(&kernel, lo, hi, 1e-13);
        simpson(&kernel, lo, x.atan(), 1e-13) / total
    }

    #[test]
    fn quadrature_oracle_matches_cdf() {
        for &(df, x) in &[(19.0, 2.093), (1.0, 1.0), (5.0, -1.3), (3.5, 0.7), (30.0, 2.5)] {
            let oracle = cdf_by_quadrature(df, x);
            assert!((t_cdf(df, x).unwrap() - oracle).abs() < 1e-8, "df={df} x={x}");
        }
    }

    #[test]
    fn cdf_reference_values() {
        assert_eq!(t_cdf(7.0, 0.0).unwrap(), 0.5);
        assert!((t_cdf(1.0, 1.0).unwrap() - 0.75).abs() < 1e-14);
        // Frozen from the quadrature oracle above.
        assert!((t_cdf(19.0, 2.093).unwrap() - 0.974_999_1).abs() < 1e-6);
    }

    #[test]
    fn quantile_reference_values() {
        assert_eq!(t_quantile(4.0, 0.5).unwrap(), 0.0);
        assert!((t_quantile(1.0, 0.75).unwrap() - 1.0).abs() < 1e-9);
        // Standard tables: t_{19, 0.975} = 2.093024.
        assert!((t_quantile(19.0, 0.975).unwrap() - 2.093_024).abs() < 1e-6);
    }

    #[test]
    fn quantile_bisection_oracle_on_quadrature() {
        let df = 19.0;
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if cdf_by_quadrature(df, mid) < 0.975 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((t_quantile(df, 0.975).unwrap() - lo).abs() < 1e-7);
    }

    #[test]
    fn quantile_domain_errors() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(t_quantile(5.0, p).is_err());
        }
        assert!(TDist::new(0.0).is_err());
        assert!(TDist::new(-2.0).is_err());
    }

    #[test]
    fn round_trip_symmetry_and_df_monotonicity() {
        for df in [1.0, 2.5, 19.0, 99.0, 1e4] {
            let d = TDist::new(df).unwrap();
            for k in 1..200 {
                let p = 0.005 * k as f64;
                let x = d.quantile(p).unwrap();
                assert!((d.cdf(x) - p).abs() < 1e-9, "df={df} p={p}");
                let mirror = d.quantile(1.0 - p).unwrap();
                assert!((x + mirror).abs() < 1e-9);
                assert!((d.quantile(d.cdf(x)).unwrap() - x).abs() < 1e-8);
            }
        }
        for p in [0.6, 0.9, 0.975, 0.995] {
            let qs: Vec<f64> = [1.0, 2.0, 5.0, 19.0, 100.0, 1e4]
                .iter()
                .map(|&df| t_quantile(df, p).unwrap())
                .collect();
            assert!(qs.windows(2).all(|w| w[1] < w[0]), "p={p}: {qs:?}");
        }
    }
}
