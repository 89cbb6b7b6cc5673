//! Paired observations and their moment estimates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Condition-number ceiling above which an estimated covariance matrix is
/// treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// `n` paired observations `(X_i, Y_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PairedSample {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch { xs: xs.len(), ys: ys.len() });
        }
        if xs.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: xs.len() });
        }
        if let Some(i) = xs
            .iter()
            .zip(&ys)
            .position(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { xs, ys })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let (xs, ys) = pairs.iter().copied().unzip();
        Self::new(xs, ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Builds the sample made of the pairs at `indices` (with repetition).
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            xs: indices.iter().map(|&i| self.xs[i]).collect(),
            ys: indices.iter().map(|&i| self.ys[i]).collect(),
        }
    }
}

/// Sample means and the covariance matrix of the means.
///
/// `c11`, `c12`, `c22` are the usual unbiased covariance entries divided by
/// an extra factor `n`, so they estimate the covariance of `(mu_hat[0],
/// mu_hat[1])` rather than of a single observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimates {
    pub mu_hat: [f64; 2],
    pub c11: f64,
    pub c12: f64,
    pub c22: f64,
    pub n: usize,
}

impl MomentEstimates {
    /// Validated constructor for hand-specified estimates.
    pub fn new(mu_hat: [f64; 2], c11: f64, c12: f64, c22: f64, n: usize) -> Result<Self> {
        let all = [mu_hat[0], mu_hat[1], c11, c12, c22];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("moment estimates must be finite".into()));
        }
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        if c11 < 0.0 || c22 < 0.0 {
            return Err(Error::Domain("variances must be non-negative".into()));
        }
        // Allow rounding slack in the determinant.
        if c12 * c12 > c11 * c22 * (1.0 + 1e-12) {
            return Err(Error::Domain("covariance matrix is not positive semidefinite".into()));
        }
        Ok(Self { mu_hat, c11, c12, c22, n })
    }

    pub fn det(&self) -> f64 {
        self.c11 * self.c22 - self.c12 * self.c12
    }

    /// Eigenvalues of the covariance matrix, largest first.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_trace = 0.5 * (self.c11 + self.c22);
        let half_gap = (0.5 * (self.c11 - self.c22)).hypot(self.c12);
        (half_trace + half_gap, half_trace - half_gap)
    }

    pub fn condition_number(&self) -> f64 {
        let (big, small) = self.eigenvalues();
        if small <= 0.0 {
            f64::INFINITY
        } else {
            big / small
        }
    }

    /// Fails unless the covariance is positive definite with condition
    /// number at most [`MAX_CONDITION`].
    pub fn require_positive_definite(&self) -> Result<()> {
        if self.det() <= 0.0 || self.condition_number() > MAX_CONDITION {
            Err(Error::SingularCovariance)
        } else {
            Ok(())
        }
    }

    /// `c22 - 2 r c12 + r^2 c11`, the variance of `mu2 - r mu1`.
    pub fn directional_variance(&self, r: f64) -> f64 {
        self.c22 - 2.0 * r * self.c12 + r * r * self.c11
    }

    /// Squared Mahalanobis distance of the origin from `mu_hat`.
    pub fn origin_distance_sq(&self) -> f64 {
        let [m1, m2] = self.mu_hat;
        (m2 * m2 * self.c11 - 2.0 * m1 * m2 * self.c12 + m1 * m1 * self.c22) / self.det()
    }
}

/// Sample means and the `1/n`-rescaled unbiased covariance estimate.
pub fn estimate_moments(sample: &PairedSample) -> Result<MomentEstimates> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let nf = n as f64;
    let m1 = sample.xs.iter().sum::<f64>() / nf;
    let m2 = sample.ys.iter().sum::<f64>() / nf;
    let (mut s11, mut s12, mut s22) = (0.0, 0.0, 0.0);
    for (x, y) in sample.xs.iter().zip(&sample.ys) {
        let dx = x - m1;
        let dy = y - m2;
        s11 += dx * dx;
        s12 += dx * dy;
        s22 += dy * dy;
    }
    let scale = 1.0 / (nf * (nf - 1.0));
    let c11 = s11 * scale;
    let c22 = s22 * scale;
    // Cauchy-Schwarz can fail by an ulp for collinear data.
    let bound = (c11 * c22).sqrt();
    let mut c12 = (s12 * scale).clamp(-bound, bound);
    while c12 * c12 > c11 * c22 {
        c12 = if c12 > 0.0 { c12.next_down() } else { c12.next_up() };
    }
    Ok(MomentEstimates { mu_hat: [m1, m2], c11, c12, c22, n })
}

/// The point estimate `mu2 / mu1`.
pub fn ratio_estimate(m: &MomentEstimates) -> Result<f64> {
    if m.mu_hat[0] == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(m.mu_hat[1] / m.mu_hat[0])
}

/// Mean and unbiased standard deviation of a one-dimensional sample.
pub(crate) fn mean_sd(data: &[f64]) -> (f64, f64) {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    if data.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = data.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}
