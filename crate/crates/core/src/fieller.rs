//! Exact regions for bivariate normal data.
//!
//! Two independent routes compute the same set `{ r : |T(r)| <= q }`:
//!
//! * [`fieller_region`] solves the quadratic inequality in closed form and
//!   classifies the result with the exclusive/complete thresholds.
//! * [`geometric_region`] whitens the covariance ellipse into a unit circle,
//!   constructs the two tangents from the origin there, maps the tangent
//!   points back and intersects the enclosing wedge with the line `x = 1`.

use crate::error::{Error, Result};
use crate::region::{OneDimCI, RatioRegion};
use crate::sample::{estimate_moments, MomentEstimates, PairedSample};
use crate::student::t_quantile;

/// Negative discriminants above this are treated as tangency.
pub const DISCRIMINANT_CLAMP: f64 = 1e-12;

/// Relative window in which the origin counts as lying on the ellipse.
pub const BOUNDARY_TIE: f64 = 1e-12;

/// Studentized distance of the projection `mu2 - r mu1` from zero.
pub fn t_statistic(r: f64, m: &MomentEstimates) -> Result<f64> {
    let var = m.directional_variance(r);
    if !(var > 0.0) {
        return Err(Error::SingularDirection { slope: r });
    }
    Ok((m.mu_hat[1] - r * m.mu_hat[0]) / var.sqrt())
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("quantile q must be positive and finite, got {q}")))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Two-sided normal-theory quantile `q(t_{n-1}, 1 - alpha/2)`.
pub fn normal_theory_quantile(n: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    t_quantile((n - 1) as f64, 1.0 - alpha / 2.0)
}

/// Fieller's closed-form region for the quantile `q`.
///
/// With `a = mu1^2 - q^2 c11`, `b = mu1 mu2 - q^2 c12`, `c = mu2^2 - q^2 c22`
/// the region is `{ r : a r^2 - 2 b r + c <= 0 }`:
///
/// * whole line when `q_complete^2 <= q^2`,
/// * `(-inf, l_min] U [l_max, inf)` when `q_exclusive^2 < q^2 < q_complete^2`,
/// * `[l_min, l_max]` otherwise.
///
/// The discriminant `b^2 - a c` is evaluated through the identity
/// `b^2 - a c = q^2 det(C) (q_complete^2 - q^2)`. When `a` is exactly zero the
/// inequality is linear and the result is a half-line.
pub fn fieller_region(m: &MomentEstimates, q: f64) -> Result<RatioRegion> {
    check_q(q)?;
    let [m1, m2] = m.mu_hat;
    if m.c11 == 0.0 && m1 == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    m.require_positive_definite()?;

    let q2 = q * q;
    let q2_complete = m.origin_distance_sq();
    if q2_complete <= q2 {
        return Ok(RatioRegion::whole_line());
    }

    let a = m1 * m1 - q2 * m.c11;
    let b = m1 * m2 - q2 * m.c12;
    let c = m2 * m2 - q2 * m.c22;

    if a == 0.0 {
        return Ok(linear_solution_set(b, c));
    }

    let mut disc = q2 * m.det() * (q2_complete - q2);
    if disc < 0.0 && disc > -DISCRIMINANT_CLAMP {
        disc = 0.0;
    }
    let (l1, l2) = stable_roots(a, b, c, disc.max(0.0).sqrt());
    let (lo, hi) = (l1.min(l2), l1.max(l2));

    let q2_exclusive = m1 * m1 / m.c11;
    if q2_exclusive < q2 && a < 0.0 {
        RatioRegion::exclusive_unbounded(lo, hi)
    } else {
        RatioRegion::bounded(lo, hi)
    }
}

/// Roots of `a r^2 - 2 b r + c` given `sqrt(b^2 - a c)`, without
/// subtracting nearly equal quantities.
pub(crate) fn stable_roots(a: f64, b: f64, c: f64, sqrt_disc: f64) -> (f64, f64) {
    let big = if b >= 0.0 { b + sqrt_disc } else { b - sqrt_disc };
    let r1 = big / a;
    let r2 = if big == 0.0 { r1 } else { c / big };
    (r1, r2)
}

/// `{ r : -2 b r + c <= 0 }`.
fn linear_solution_set(b: f64, c: f64) -> RatioRegion {
    if b == 0.0 {
        return if c <= 0.0 { RatioRegion::whole_line() } else { RatioRegion::empty() };
    }
    let root = c / (2.0 * b);
    let iv = if b > 0.0 {
        OneDimCI { lo: root, hi: f64::INFINITY }
    } else {
        OneDimCI { lo: f64::NEG_INFINITY, hi: root }
    };
    RatioRegion::from_intervals(vec![iv])
}

/// Estimate moments, take `q = q(t_{n-1}, 1 - alpha/2)` and build Fieller's
/// region. Exact at level `1 - alpha` for bivariate normal samples.
pub fn fieller_region_normal(sample: &PairedSample, alpha: f64) -> Result<RatioRegion> {
    let m = estimate_moments(sample)?;
    let q = normal_theory_quantile(sample.len(), alpha)?;
    fieller_region(&m, q)
}

/// The level set `(z - center)^T shape^{-1} (z - center) = scale^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: [f64; 2],
    pub shape: [[f64; 2]; 2],
    pub scale: f64,
}

impl Ellipse {
    fn cholesky(&self) -> (f64, f64, f64) {
        let s = &self.shape;
        let l11 = s[0][0].sqrt();
        let l21 = s[0][1] / l11;
        let det = s[0][0] * s[1][1] - s[0][1] * s[0][1];
        let l22 = det.sqrt() / l11;
        (l11, l21, l22)
    }

    /// `(z - center)^T shape^{-1} (z - center)`.
    pub fn quadratic_form(&self, z: [f64; 2]) -> f64 {
        let (l11, l21, l22) = self.cholesky();
        let w0 = (z[0] - self.center[0]) / l11;
        let w1 = (z[1] - self.center[1] - l21 * w0) / l22;
        w0 * w0 + w1 * w1
    }

    /// Image of the unit-circle point at `angle` under the Cholesky map.
    pub fn boundary_point(&self, angle: f64) -> [f64; 2] {
        self.unwhiten([angle.cos(), angle.sin()])
    }

    fn unwhiten(&self, w: [f64; 2]) -> [f64; 2] {
        let (l11, l21, l22) = self.cholesky();
        [
            self.center[0] + self.scale * l11 * w[0],
            self.center[1] + self.scale * (l21 * w[0] + l22 * w[1]),
        ]
    }

    /// Semi-axis lengths `scale * sqrt(lambda_i)` with their unit directions,
    /// major axis first.
    pub fn principal_axes(&self) -> [(f64, [f64; 2]); 2] {
        let s = &self.shape;
        let half_trace = 0.5 * (s[0][0] + s[1][1]);
        let half_gap = (0.5 * (s[0][0] - s[1][1])).hypot(s[0][1]);
        let (l_big, l_small) = (half_trace + half_gap, half_trace - half_gap);
        let major = if s[0][1] == 0.0 {
            if s[0][0] >= s[1][1] {
                [1.0, 0.0]
            } else {
                [0.0, 1.0]
            }
        } else {
            let v = [l_big - s[1][1], s[0][1]];
            let norm = v[0].hypot(v[1]);
            [v[0] / norm, v[1] / norm]
        };
        let minor = [-major[1], major[0]];
        [
            (self.scale * l_big.sqrt(), major),
            (self.scale * l_small.max(0.0).sqrt(), minor),
        ]
    }
}

/// The covariance ellipse `E(C_hat, mu_hat, q)`.
pub fn covariance_ellipse(m: &MomentEstimates, q: f64) -> Result<Ellipse> {
    check_q(q)?;
    m.require_positive_definite()?;
    Ok(Ellipse {
        center: m.mu_hat,
        shape: [[m.c11, m.c12], [m.c12, m.c22]],
        scale: q,
    })
}

/// Orthogonal projection of the ellipse onto the unit direction `a`: the
/// interval centred at `a . center` with half-width `scale sqrt(a^T shape a)`.
pub fn project_ellipse(e: &Ellipse, a: [f64; 2]) -> Result<OneDimCI> {
    let norm = a[0].hypot(a[1]);
    if !((norm - 1.0).abs() <= 1e-12) {
        return Err(Error::Domain(format!("projection direction must be a unit vector, |a| = {norm}")));
    }
    let s = &e.shape;
    let spread = a[0] * a[0] * s[0][0] + 2.0 * a[0] * a[1] * s[0][1] + a[1] * a[1] * s[1][1];
    let centre = a[0] * e.center[0] + a[1] * e.center[1];
    let half = e.scale * spread.max(0.0).sqrt();
    OneDimCI::new(centre - half, centre + half)
}

/// Lines through the origin tangent to an ellipse that excludes the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wedge {
    /// Slopes of the two tangents; a vertical tangent has infinite slope.
    pub slopes: (f64, f64),
    /// Whether the vertical line `x = 0` lies inside the wedge.
    pub contains_y_axis: bool,
    /// Tangent points on the ellipse.
    pub touch_points: [[f64; 2]; 2],
}

/// The wedge enclosing `e`, or `None` when the origin lies inside (or on)
/// the ellipse.
pub fn tangent_wedge(e: &Ellipse) -> Option<Wedge> {
    let (l11, l21, l22) = e.cholesky();
    // Origin in whitened coordinates, where the ellipse is the unit circle.
    let p0 = -e.center[0] / (e.scale * l11);
    let p1 = (-e.center[1] / e.scale - l21 * p0) / l22;
    let d2 = p0 * p0 + p1 * p1;
    if d2 <= 1.0 + BOUNDARY_TIE {
        return None;
    }
    // Tangent points t satisfy |t| = 1 and t . p = 1.
    let along = 1.0 / d2;
    let across = (d2 - 1.0).sqrt() / d2;
    let t_plus = [along * p0 - across * p1, along * p1 + across * p0];
    let t_minus = [along * p0 + across * p1, along * p1 - across * p0];
    let z_plus = e.unwhiten(t_plus);
    let z_minus = e.unwhiten(t_minus);
    let slope = |z: [f64; 2]| {
        if z[0] == 0.0 {
            f64::INFINITY
        } else {
            z[1] / z[0]
        }
    };
    Some(Wedge {
        slopes: (slope(z_plus), slope(z_minus)),
        contains_y_axis: (z_plus[0] > 0.0) != (z_minus[0] > 0.0)
            && z_plus[0] != 0.0
            && z_minus[0] != 0.0,
        touch_points: [z_plus, z_minus],
    })
}

/// The geometric region: intersection of the tangent wedge with `x = 1`.
pub fn geometric_region(m: &MomentEstimates, q: f64) -> Result<RatioRegion> {
    geometric_region_perturbed(m, q, 0.0)
}

/// [`geometric_region`] with both tangent slopes multiplied by
/// `1 + perturbation`. Used by the self-test to check its own sensitivity.
#[doc(hidden)]
pub fn geometric_region_perturbed(m: &MomentEstimates, q: f64, perturbation: f64) -> Result<RatioRegion> {
    let e = covariance_ellipse(m, q)?;
    let Some(w) = tangent_wedge(&e) else {
        return Ok(RatioRegion::whole_line());
    };
    let (s1, s2) = (w.slopes.0 * (1.0 + perturbation), w.slopes.1 * (1.0 + perturbation));

    // A vertical tangent leaves a single half-line.
    let vertical = |z: [f64; 2]| z[0] == 0.0;
    let [za, zb] = w.touch_points;
    if vertical(za) || vertical(zb) {
        let (finite_slope, z_vert, z_other) = if vertical(za) { (s2, za, zb) } else { (s1, zb, za) };
        let upward = (z_vert[1] > 0.0) == (z_other[0] > 0.0);
        let iv = if upward {
            OneDimCI { lo: finite_slope, hi: f64::INFINITY }
        } else {
            OneDimCI { lo: f64::NEG_INFINITY, hi: finite_slope }
        };
        return Ok(RatioRegion::from_intervals(vec![iv]));
    }

    let (lo, hi) = (s1.min(s2), s1.max(s2));
    if w.contains_y_axis {
        RatioRegion::exclusive_unbounded(lo, hi)
    } else {
        RatioRegion::bounded(lo, hi)
    }
}
