//! Bernstein-basis algebra for piecewise quintic trajectory segments.
//!
//! A segment stores non-scaled control points `p` together with a duration
//! scaling factor `alpha`; the physical curve is `f(t) = alpha * sum_i p_i *
//! b_m^i(u)` with `u = (t - t_start) / alpha`. Derivatives are obtained from
//! the hodograph chain: the k-th derivative of the non-scaled curve is a
//! degree `m - k` Bezier curve, and the physical derivative picks up a factor
//! `alpha^(1-k)`.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::Dim;

#[derive(Debug, Error, PartialEq)]
pub enum BezierError {
    #[error("parameter {value} outside domain [{lo}, {hi}]")]
    DomainError { value: f64, lo: f64, hi: f64 },
}

/// Binomial coefficient as f64. Exact for the small degrees used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Bernstein basis polynomial `b_m^i(u) = C(m,i) u^i (1-u)^(m-i)`.
pub fn bernstein(m: usize, i: usize, u: f64) -> Result<f64, BezierError> {
    if !(0.0..=1.0).contains(&u) {
        return Err(BezierError::DomainError {
            value: u,
            lo: 0.0,
            hi: 1.0,
        });
    }
    assert!(i <= m, "basis index {i} exceeds degree {m}");
    Ok(binomial(m, i) * u.powi(i as i32) * (1.0 - u).powi((m - i) as i32))
}

/// Control points of the non-scaled curve and its first three derivatives.
///
/// `levels[k]` holds the `m - k + 1` control points of the k-th derivative;
/// the step from level k-1 to k scales differences by `m - k + 1`, so the
/// cumulative factor at level k is `m!/(m-k)!`.
#[derive(Debug, Clone, PartialEq)]
pub struct HodographChain {
    pub levels: [Vec<f64>; 4],
}

pub fn hodograph(points: &[f64], m: usize) -> HodographChain {
    assert_eq!(points.len(), m + 1, "degree-{m} curve needs {} points", m + 1);
    assert!(m >= 3, "hodograph chain to order 3 needs degree >= 3");
    let mut levels: [Vec<f64>; 4] = [points.to_vec(), vec![], vec![], vec![]];
    for k in 1..=3usize {
        let factor = (m - k + 1) as f64;
        let prev = &levels[k - 1];
        levels[k] = prev.windows(2).map(|w| factor * (w[1] - w[0])).collect();
    }
    HodographChain { levels }
}

/// One degree-`m` segment of a two-dimensional (s, l) piecewise curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierSegment {
    /// Non-scaled control points, `[s points, l points]`, each of length m+1.
    pub control: [Vec<f64>; 2],
    /// Duration scaling factor (equals the segment duration in seconds).
    pub alpha: f64,
    /// Absolute start time of the segment.
    pub t_start: f64,
}

impl BezierSegment {
    pub fn new(s_points: Vec<f64>, l_points: Vec<f64>, alpha: f64, t_start: f64) -> Self {
        assert!(alpha > 0.0, "segment scale must be positive");
        assert_eq!(s_points.len(), l_points.len());
        assert!(s_points.len() >= 4, "jerk needs degree >= 3");
        Self {
            control: [s_points, l_points],
            alpha,
            t_start,
        }
    }

    pub fn degree(&self) -> usize {
        self.control[0].len() - 1
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + self.alpha
    }

    /// Evaluate the k-th time derivative (k = 0..=3) of dimension `dim` at
    /// absolute time `t`. Times within 1e-9 of the segment ends are accepted.
    pub fn eval(&self, t: f64, k: usize, dim: Dim) -> Result<f64, BezierError> {
        assert!(k <= 3, "derivative order {k} not supported");
        let end = self.t_end();
        let slack = 1e-9 * self.alpha.max(1.0);
        if t < self.t_start - slack || t > end + slack {
            return Err(BezierError::DomainError {
                value: t,
                lo: self.t_start,
                hi: end,
            });
        }
        let u = ((t - self.t_start) / self.alpha).clamp(0.0, 1.0);
        let m = self.degree();
        let chain = hodograph(&self.control[dim as usize], m);
        let pts = &chain.levels[k];
        let sum: f64 = pts
            .iter()
            .enumerate()
            .map(|(i, &q)| q * bernstein(m - k, i, u).expect("u clamped to [0,1]"))
            .sum();
        Ok(self.alpha.powi(1 - k as i32) * sum)
    }
}

/// Scaled jerk-cost Hessian `(1/alpha^3) * Q` with
/// `Q_ab = integral_0^1 b'''_a(u) b'''_b(u) du` for the degree-`m` basis.
///
/// Computed in closed form: the third derivative of the non-scaled curve is a
/// degree `m-3` Bezier curve whose control points are the scaled third
/// differences of `p`, and products of Bernstein polynomials integrate to
/// `C(n,i) C(n,j) / ((2n+1) C(2n,i+j))`.
pub fn jerk_hessian(m: usize, alpha: f64) -> DMatrix<f64> {
    assert!(m >= 3, "jerk undefined below degree 3");
    assert!(alpha > 0.0);
    let n = m - 3;
    let rows = n + 1;
    // Cumulative difference operator p -> q^(3).
    let factor = (m * (m - 1) * (m - 2)) as f64;
    let mut diff3 = DMatrix::zeros(rows, m + 1);
    for i in 0..rows {
        diff3[(i, i)] = -factor;
        diff3[(i, i + 1)] = 3.0 * factor;
        diff3[(i, i + 2)] = -3.0 * factor;
        diff3[(i, i + 3)] = factor;
    }
    let mut gram = DMatrix::zeros(rows, rows);
    for i in 0..rows {
        for j in 0..rows {
            gram[(i, j)] =
                binomial(n, i) * binomial(n, j) / ((2 * n + 1) as f64 * binomial(2 * n, i + j));
        }
    }
    diff3.transpose() * gram * diff3 / alpha.powi(3)
}
