//! Gauss quadrature building blocks: Legendre base rules, a symmetric
//! tridiagonal eigensolver, and the Golub-Welsch conversion of a Jacobi
//! matrix into a Gauss rule for the weight e^{-2|x|^alpha}.

use crate::error::{Error, Result};
use crate::orthopoly::RecurrenceTable;
use crate::util::KahanSum;

/// The measure a quadrature rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureTag {
    /// Lebesgue measure dx on the interval [a, b].
    LebesgueInterval { a: f64, b: f64 },
    /// e^{-2|x|^alpha} dx on the real line.
    Freud { alpha: f64 },
}

/// Nodes and weights of a quadrature rule, tagged with its measure.
///
/// Nodes are strictly ascending, weights are positive, and an m-node rule
/// integrates polynomials of degree up to 2m-1 exactly against its measure.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    measure: MeasureTag,
}

impl QuadratureRule {
    fn new(nodes: Vec<f64>, weights: Vec<f64>, measure: MeasureTag) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::invalid("node and weight counts differ"));
        }
        if nodes.is_empty() {
            return Err(Error::invalid("empty quadrature rule"));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("nodes must be strictly ascending"));
        }
        // Weights of Gauss rules are positive in exact arithmetic. Weights
        // whose true value lies below the smallest subnormal are allowed to
        // flush to zero; they contribute nothing to any integral in range.
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::invalid("weights must be nonnegative and finite"));
        }
        Ok(Self {
            nodes,
            weights,
            measure,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn measure(&self) -> MeasureTag {
        self.measure
    }

    /// Sum of the weights, i.e. the rule's value for the constant 1.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().copied().collect::<KahanSum>().value()
    }

    /// Apply the rule to `f`. Nodes whose weight has flushed to zero are
    /// skipped so that `f` is never evaluated where it could overflow
    /// without affecting the sum.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
        let mut acc = KahanSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            if w == 0.0 {
                continue;
            }
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::InvalidFunction { x });
            }
            acc.add(w * fx);
        }
        Ok(acc.value())
    }
}

/// m-node Gauss-Legendre rule on [-1, 1], exact on polynomials of degree
/// at most 2m-1. Nodes are found by Newton iteration on the three-term
/// recurrence, weights from w = 2/((1-x^2) P_m'(x)^2).
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::invalid("gauss_legendre requires m >= 1"));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    // Symmetry: solve for the upper half and mirror.
    for i in 0..m.div_ceil(2) {
        // Tricomi-style initial guess for the i-th root from the top.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                let (_, d2) = legendre_with_deriv(m, x);
                dp = d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[m - 1 - i] = x;
        weights[m - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    QuadratureRule::new(
        nodes,
        weights,
        MeasureTag::LebesgueInterval { a: -1.0, b: 1.0 },
    )
}

/// Legendre polynomial P_m(x) and its derivative via the standard recurrence.
fn legendre_with_deriv(m: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = m as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Eigenvalues (ascending) of a symmetric tridiagonal matrix together with
/// the first component of each normalized eigenvector, computed in-repo by
/// the implicit-shift QL algorithm with the rotation product applied to the
/// first row only.
///
/// An off-diagonal entry is treated as deflated once
/// |e_i| <= eps * (|d_i| + |d_{i+1}|); more than 50 sweeps for a single
/// eigenvalue is reported as an internal error.
pub fn eigen_sym_tridiag(diag: &[f64], offdiag: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::invalid("eigen_sym_tridiag requires a nonempty diagonal"));
    }
    if offdiag.len() + 1 != n {
        return Err(Error::invalid(format!(
            "offdiag length {} does not match diagonal length {}",
            offdiag.len(),
            n
        )));
    }
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    // First row of the accumulated rotation product; starts as e_1^T.
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find the first deflated off-diagonal at or after l.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Internal(
                    "tridiagonal QL exceeded 50 sweeps for one eigenvalue".into(),
                ));
            }
            // Wilkinson shift.
            let g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let mut g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Rotation annihilated early; undo the shift at this row
                    // and retry the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                let mut dd = d[i + 1] - p;
                r = (d[i] - dd) * s + 2.0 * c * b;
                p = s * r;
                dd += p;
                d[i + 1] = dd;
                g = c * r - b;
                // Rotate the tracked first row.
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort ascending, carrying first components along.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let first: Vec<f64> = idx
        .iter()
        .map(|&i| if z[i] < 0.0 { -z[i] } else { z[i] })
        .collect();
    Ok((eigenvalues, first))
}

/// m-node Gauss rule for e^{-2|x|^alpha} dx from a recurrence table.
///
/// Nodes are the eigenvalues of the m-by-m Jacobi matrix (zero diagonal by
/// evenness of the weight) and the weight at node x_i is mu0 * v1(i)^2 with
/// v1 the first eigenvector component. v1 is evaluated through the
/// normalized-recurrence identity mu0 * v1^2 = 1 / sum_{k<m} P_k(x_i)^2,
/// which keeps the far-out weights relatively accurate all the way down to
/// the underflow threshold; rotation-accumulated first components carry only
/// absolute accuracy and would turn the tiny weights into noise.
pub fn golub_welsch(table: &RecurrenceTable, m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::invalid("golub_welsch requires m >= 1"));
    }
    if table.len() < m {
        return Err(Error::invalid(format!(
            "recurrence table holds {} coefficients, need at least {}",
            table.len(),
            m
        )));
    }
    let b = &table.b()[..m.saturating_sub(1)];
    let (lam, _) = eigen_sym_tridiag(&vec![0.0; m], b)?;

    // The weight is even, so the spectrum is symmetric; pair eigenvalues
    // from both ends to force exactly +/- paired nodes.
    let mut nodes = vec![0.0; m];
    for i in 0..m / 2 {
        let v = 0.5 * (lam[m - 1 - i] - lam[i]);
        nodes[m - 1 - i] = v;
        nodes[i] = -v;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }

    let mu0 = table.mu0();
    let bfull = table.b();
    let weights: Vec<f64> = {
        use rayon::prelude::*;
        crate::thread_pool().install(|| {
            nodes
                .par_iter()
                .map(|&x| christoffel_weight(mu0, bfull, m, x))
                .collect()
        })
    };
    QuadratureRule::new(
        nodes,
        weights,
        MeasureTag::Freud {
            alpha: table.alpha(),
        },
    )
}

/// 1 / sum_{k=0}^{m-1} P_k(x)^2, the Christoffel number at x.
///
/// The running polynomial pair is rescaled by powers of 2^256 whenever it
/// grows past the band, so the sum never overflows even far outside the
/// oscillatory region where P_{m-1}(x)^2 exceeds the f64 range.
fn christoffel_weight(mu0: f64, b: &[f64], m: usize, x: f64) -> f64 {
    let big = 2.0_f64.powi(256);
    let inv = 2.0_f64.powi(-256);
    let mut p_prev = 0.0_f64;
    let mut p = 1.0 / mu0.sqrt();
    let mut sum = p * p;
    let mut scalings = 0u32;
    for k in 1..m {
        let bk = b[k - 1];
        let bkm = if k >= 2 { b[k - 2] } else { 0.0 };
        let next = (x * p - bkm * p_prev) / bk;
        p_prev = p;
        p = next;
        if p.abs() > big || p_prev.abs() > big {
            p *= inv;
            p_prev *= inv;
            sum *= inv * inv;
            scalings += 1;
        }
        sum += p * p;
    }
    let mut w = 1.0 / sum;
    for _ in 0..scalings {
        w *= inv * inv;
    }
    w
}
