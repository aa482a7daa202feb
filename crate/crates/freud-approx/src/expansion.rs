//! Fourier analysis in L2(R, e^{-2|x|^alpha} dx): coefficients a_n(f),
//! best-approximation distances d(f, Pi_{n-1}), the rapid-approximation
//! seminorms q_k, and termwise-differentiated series reconstruction.

use std::io::Write;

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::orthopoly::{self, RecurrenceTable};
use crate::util::{fmt17, KahanSum};

/// Relative noise floor for distances: below `NOISE_FLOOR * ||f||` the
/// subtraction form is dominated by quadrature and cancellation noise.
pub const NOISE_FLOOR: f64 = 1e-8;

/// Convergence gate for the quadrature doubling check.
pub const COEFF_TOL: f64 = 1e-10;

/// How the coefficient integrals were discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadStrategy {
    /// Gauss rule for the weight itself; right for globally smooth f.
    GaussFreud,
    /// Composite Gauss-Legendre split at the origin; required when f has a
    /// kink or jump there, which the Gauss rule cannot resolve.
    SplitComposite,
}

/// Provenance of an expansion's quadrature.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct QuadMeta {
    pub strategy: QuadStrategy,
    /// Node count of the finest level used.
    pub nodes: usize,
    /// Max coefficient change over the final doubling.
    pub refinement_delta: f64,
}

/// Fourier coefficients a_0..a_N of f together with ||f||^2 and the
/// quadrature provenance.
#[derive(Debug, Clone)]
pub struct Expansion {
    alpha: f64,
    coeffs: Vec<f64>,
    f_norm_sq: f64,
    quad: QuadMeta,
}

/// A best-approximation distance and whether it sits below the noise floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    pub value: f64,
    pub floored: bool,
}

/// Default node count for an expansion up to degree N: the integrand
/// f P_N needs resolution beyond polynomial exactness since f is not a
/// polynomial.
pub fn default_node_count(n: usize) -> usize {
    (2 * (n + 1)).max(200)
}

/// Expansion of `f` in the orthonormal system of `table`, coefficients
/// a_0..a_N, using m nodes (Gauss route) with a mandatory doubling check:
/// the result is accepted only when doubling the discretization moves no
/// coefficient by more than `COEFF_TOL * max(1, ||f||)`.
pub fn fourier_coefficients(
    f: &FunctionSpec,
    table: &RecurrenceTable,
    n: usize,
    m: usize,
) -> Result<Expansion> {
    let alpha = table.alpha();
    if !f.compat().accepts(alpha) {
        return Err(Error::invalid(format!(
            "{} is not integrable against the weight at alpha = {alpha} (declared {})",
            f.name(),
            f.compat()
        )));
    }
    if m < n + 1 {
        return Err(Error::invalid(format!(
            "m = {m} cannot resolve an expansion of degree {n}; need m >= N + 1"
        )));
    }
    if f.needs_split_quadrature() {
        split_expansion(f, table, n)
    } else {
        gauss_expansion(f, table, n, m)
    }
}

fn gauss_expansion(
    f: &FunctionSpec,
    table: &RecurrenceTable,
    n: usize,
    m: usize,
) -> Result<Expansion> {
    let (a1, _) = gauss_pass(f, table, n, m)?;
    let (a2, norm2) = gauss_pass(f, table, n, 2 * m)?;
    let delta = max_abs_diff(&a1, &a2);
    let scale = norm2.sqrt().max(1.0);
    if delta >= COEFF_TOL * scale {
        return Err(Error::ConvergenceFailure {
            context: format!(
                "coefficients of {} not converged under node doubling {m} -> {}",
                f.name(),
                2 * m
            ),
            delta,
            last: a2,
            previous: a1,
        });
    }
    Ok(Expansion {
        alpha: table.alpha(),
        coeffs: a2,
        f_norm_sq: norm2,
        quad: QuadMeta {
            strategy: QuadStrategy::GaussFreud,
            nodes: 2 * m,
            refinement_delta: delta,
        },
    })
}

fn gauss_pass(
    f: &FunctionSpec,
    table: &RecurrenceTable,
    n: usize,
    m: usize,
) -> Result<(Vec<f64>, f64)> {
    let rule = table.gauss_freud(m)?;
    let mut acc = vec![KahanSum::new(); n + 1];
    let mut norm = KahanSum::new();
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        if w == 0.0 {
            continue;
        }
        let fx = f.eval(x);
        if !fx.is_finite() {
            return Err(Error::InvalidFunction { x });
        }
        let p = table.eval_polys(x, n)?;
        let wf = w * fx;
        for (k, pk) in p.iter().enumerate() {
            acc[k].add(wf * pk);
        }
        norm.add(wf * fx);
    }
    Ok((acc.iter().map(KahanSum::value).collect(), norm.value()))
}

fn split_expansion(f: &FunctionSpec, table: &RecurrenceTable, n: usize) -> Result<Expansion> {
    let mut outer = 64usize;
    let (mut a_prev, _) = split_pass(f, table, n, outer)?;
    loop {
        outer *= 2;
        let (a, norm2) = split_pass(f, table, n, outer)?;
        let delta = max_abs_diff(&a_prev, &a);
        if delta < COEFF_TOL * norm2.sqrt().max(1.0) {
            return Ok(Expansion {
                alpha: table.alpha(),
                coeffs: a,
                f_norm_sq: norm2,
                quad: QuadMeta {
                    strategy: QuadStrategy::SplitComposite,
                    nodes: 40 * (outer + 53),
                    refinement_delta: delta,
                },
            });
        }
        if outer >= 1024 {
            return Err(Error::ConvergenceFailure {
                context: format!(
                    "split-composite coefficients of {} not converged at panel cap",
                    f.name()
                ),
                delta,
                last: a,
                previous: a_prev,
            });
        }
        a_prev = a;
    }
}

fn split_pass(
    f: &FunctionSpec,
    table: &RecurrenceTable,
    n: usize,
    outer: usize,
) -> Result<(Vec<f64>, f64)> {
    let alpha = table.alpha();
    let r = orthopoly::truncation_radius(alpha, n);
    let (xs, wgl) = orthopoly::half_grid(r, outer);
    let mut acc = vec![KahanSum::new(); n + 1];
    let mut norm = KahanSum::new();
    for (&x, &wg) in xs.iter().zip(&wgl) {
        let w = wg * (-2.0 * x.powf(alpha)).exp();
        if w == 0.0 {
            continue;
        }
        let fp = f.eval(x);
        let fm = f.eval(-x);
        if !fp.is_finite() || !fm.is_finite() {
            return Err(Error::InvalidFunction { x });
        }
        let p = table.eval_polys(x, n)?;
        for (k, pk) in p.iter().enumerate() {
            // P_k(-x) = (-1)^k P_k(x): both half-lines in one pass.
            let fsum = if k % 2 == 0 { fp + fm } else { fp - fm };
            acc[k].add(w * fsum * pk);
        }
        norm.add(w * (fp * fp + fm * fm));
    }
    Ok((acc.iter().map(KahanSum::value).collect(), norm.value()))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

impl Expansion {
    /// Build an expansion directly from coefficients, e.g. synthetic
    /// sequences in tests or reports. `f_norm_sq` must dominate the
    /// coefficient energy.
    pub fn from_coefficients(alpha: f64, coeffs: Vec<f64>, f_norm_sq: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("an expansion needs at least a_0"));
        }
        let energy: f64 = coeffs.iter().map(|a| a * a).collect::<KahanSum>().value();
        if f_norm_sq < energy * (1.0 - 1e-9) {
            return Err(Error::invalid(
                "f_norm_sq is smaller than the coefficient energy",
            ));
        }
        Ok(Self {
            alpha,
            coeffs,
            f_norm_sq,
            quad: QuadMeta {
                strategy: QuadStrategy::GaussFreud,
                nodes: 0,
                refinement_delta: 0.0,
            },
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Highest expansion degree N.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn f_norm_sq(&self) -> f64 {
        self.f_norm_sq
    }

    pub fn f_norm(&self) -> f64 {
        self.f_norm_sq.max(0.0).sqrt()
    }

    pub fn quad_meta(&self) -> QuadMeta {
        self.quad
    }

    fn floor_level(&self) -> f64 {
        NOISE_FLOOR * self.f_norm()
    }

    /// d(f, Pi_{n-1}) by the subtraction form
    /// sqrt(max(0, ||f||^2 - sum_{k<n} a_k^2)), for 0 <= n <= N+1.
    /// n = 0 gives ||f||, the distance to the zero subspace.
    pub fn distance(&self, n: usize) -> Result<Distance> {
        if n > self.coeffs.len() {
            return Err(Error::invalid(format!(
                "distance index {n} out of range 0..={}",
                self.coeffs.len()
            )));
        }
        let mut head = KahanSum::new();
        for &a in &self.coeffs[..n] {
            head.add(a * a);
        }
        let value = (self.f_norm_sq - head.value()).max(0.0).sqrt();
        Ok(Distance {
            value,
            floored: value < self.floor_level(),
        })
    }

    /// All distances d(f, Pi_{n-1}) for n = 0..=N+1 in one pass.
    pub fn distances(&self) -> Vec<Distance> {
        let floor = self.floor_level();
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        let mut head = KahanSum::new();
        let push = |head: f64, out: &mut Vec<Distance>| {
            let value = (self.f_norm_sq - head).max(0.0).sqrt();
            out.push(Distance {
                value,
                floored: value < floor,
            });
        };
        push(0.0, &mut out);
        for &a in &self.coeffs {
            head.add(a * a);
            push(head.value(), &mut out);
        }
        out
    }

    /// d(f, Pi_{n-1}) by the ascending tail form
    /// sqrt(sum_{k=n}^{N} a_k^2), summed smallest terms first. This is the
    /// N-truncated tail: it ignores whatever of ||f||^2 lies beyond degree N.
    pub fn distance_tail(&self, n: usize) -> Result<Distance> {
        if n > self.coeffs.len() {
            return Err(Error::invalid(format!(
                "distance index {n} out of range 0..={}",
                self.coeffs.len()
            )));
        }
        let mut terms: Vec<f64> = self.coeffs[n..].iter().map(|a| a * a).collect();
        terms.sort_by(f64::total_cmp);
        let value = terms.iter().copied().collect::<KahanSum>().value().sqrt();
        Ok(Distance {
            value,
            floored: value < self.floor_level(),
        })
    }

    /// Termwise j-th derivative of the truncated series at x:
    /// sum_{n<=N} a_n P_n^{(j)}(x).
    pub fn reconstruct(&self, table: &RecurrenceTable, x: f64, j: usize) -> Result<f64> {
        let n = self.degree();
        let d = table.eval_poly_derivs(x, n, j)?;
        let mut acc = KahanSum::new();
        for (a, p) in self.coeffs.iter().zip(&d[j]) {
            acc.add(a * p);
        }
        Ok(acc.value())
    }

    /// CSV rows (n, a_n, d_n) with d_n = d(f, Pi_{n-1}).
    pub fn to_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# alpha,{}", fmt17(self.alpha))?;
        writeln!(w, "# f_norm_sq,{}", fmt17(self.f_norm_sq))?;
        writeln!(w, "# d_n is the distance to Pi_(n-1)")?;
        writeln!(w, "n,a_n,d_n,floored")?;
        let d = self.distances();
        for (n, &a) in self.coeffs.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{}",
                n,
                fmt17(a),
                fmt17(d[n].value),
                d[n].floored
            )?;
        }
        Ok(())
    }
}

/// The seminorm table q_0..q_{k_max} with q_k = sup over tabulated n of
/// n^k d(f, Pi_{n-1}), 0^0 read as 1. The sup runs over n = 0..=N+1 only;
/// `argmax` distinguishes a sup attained early from one pinned at the
/// truncation, and `argmax_floored` marks argmax rows whose distance sits
/// below the noise floor.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SeminormTable {
    pub k_max: usize,
    pub values: Vec<f64>,
    pub argmax: Vec<usize>,
    pub argmax_floored: Vec<bool>,
    pub n_used: usize,
}

/// Compute the seminorm table from an expansion.
pub fn seminorms(exp: &Expansion, k_max: usize) -> SeminormTable {
    let d = exp.distances();
    let n_used = d.len() - 1;
    let mut values = Vec::with_capacity(k_max + 1);
    let mut argmax = Vec::with_capacity(k_max + 1);
    let mut argmax_floored = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut best = f64::NEG_INFINITY;
        let mut best_n = 0usize;
        for (n, dist) in d.iter().enumerate() {
            let factor = if n == 0 {
                1.0
            } else {
                (n as f64).powi(k as i32)
            };
            let v = factor * dist.value;
            if v > best {
                best = v;
                best_n = n;
            }
        }
        values.push(best);
        argmax.push(best_n);
        argmax_floored.push(d[best_n].floored);
    }
    SeminormTable {
        k_max,
        values,
        argmax,
        argmax_floored,
        n_used,
    }
}

impl SeminormTable {
    /// CSV rows (k, q_k, argmax_n, argmax_floored).
    pub fn to_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# n_used,{}", self.n_used)?;
        writeln!(w, "k,q_k,argmax_n,argmax_floored")?;
        for k in 0..=self.k_max {
            writeln!(
                w,
                "{},{},{},{}",
                k,
                fmt17(self.values[k]),
                self.argmax[k],
                self.argmax_floored[k]
            )?;
        }
        Ok(())
    }
}
