//! The orthonormal polynomial system for the weight e^{-2|x|^alpha}:
//! closed-form recurrence at alpha = 2, the discretized Stieltjes procedure
//! for general alpha > 1, and stable evaluation of the polynomials and their
//! derivatives.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureRule};
use crate::util::{fmt17, KahanSum};

/// The weight parameter. Construction rejects alpha <= 1; the approximation
/// theory used here starts at alpha > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreudWeight {
    alpha: f64,
}

impl FreudWeight {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::invalid(format!(
                "alpha must be a finite real > 1, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// W(x) = e^{-|x|^alpha}.
    pub fn w(&self, x: f64) -> f64 {
        (-x.abs().powf(self.alpha)).exp()
    }

    /// W(x)^2 = e^{-2|x|^alpha}, the measure density.
    pub fn w_squared(&self, x: f64) -> f64 {
        (-2.0 * x.abs().powf(self.alpha)).exp()
    }
}

/// Three-term recurrence data for the orthonormal system P_0, P_1, ...:
/// x P_n = b_{n+1} P_{n+1} + b_n P_{n-1}, with zero diagonal because the
/// weight is even, plus the zeroth moment mu0 = integral of e^{-2|x|^alpha}.
///
/// The orthonormal system is fixed only up to sign; this crate pins every
/// leading coefficient positive (P_0 = 1/sqrt(mu0), all b_n > 0).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RecurrenceTable {
    alpha: f64,
    mu0: f64,
    b: Vec<f64>,
}

/// Values P_0(x)..P_N(x) in scaled form: value_n = mantissa[n] * 2^exp2.
/// Used where the plain values would overflow f64 far outside the
/// oscillatory region.
#[derive(Debug, Clone)]
pub struct ScaledPolyValues {
    pub mantissas: Vec<f64>,
    pub exp2: i64,
}

impl ScaledPolyValues {
    /// The plain value, infinite if it does not fit in f64.
    pub fn value(&self, n: usize) -> f64 {
        self.mantissas[n] * 2.0_f64.powi(self.exp2.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

impl RecurrenceTable {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    /// Off-diagonal coefficients b_1..b_N.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Number of stored off-diagonal coefficients.
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// Leading coefficient of P_n, equal to 1/(sqrt(mu0) * b_1 ... b_n).
    pub fn leading_coefficient(&self, n: usize) -> Result<f64> {
        if n > self.b.len() {
            return Err(Error::invalid("n exceeds table length"));
        }
        let mut g = 1.0 / self.mu0.sqrt();
        for &bk in &self.b[..n] {
            g /= bk;
        }
        Ok(g)
    }

    /// Values of P_0(x)..P_N(x) by the forward recurrence.
    ///
    /// Errors if N exceeds the table or if a value leaves the f64 range;
    /// use [`RecurrenceTable::eval_polys_scaled`] for far-out diagnostics.
    pub fn eval_polys(&self, x: f64, n: usize) -> Result<Vec<f64>> {
        if n > self.b.len() {
            return Err(Error::invalid(format!(
                "N = {n} exceeds table length {}",
                self.b.len()
            )));
        }
        let mut out = Vec::with_capacity(n + 1);
        let mut p_prev = 0.0_f64;
        let mut p = 1.0 / self.mu0.sqrt();
        out.push(p);
        for k in 1..=n {
            let bkm = if k >= 2 { self.b[k - 2] } else { 0.0 };
            let next = (x * p - bkm * p_prev) / self.b[k - 1];
            if !next.is_finite() {
                return Err(Error::invalid(format!(
                    "P_{k}({x}) overflows f64; use eval_polys_scaled"
                )));
            }
            p_prev = p;
            p = next;
            out.push(p);
        }
        Ok(out)
    }

    /// Overflow-guarded variant of [`RecurrenceTable::eval_polys`]: returns
    /// mantissas and one shared base-2 exponent. Values whose magnitude falls
    /// more than ~300 orders below the largest one flush to zero mantissa.
    pub fn eval_polys_scaled(&self, x: f64, n: usize) -> Result<ScaledPolyValues> {
        if n > self.b.len() {
            return Err(Error::invalid(format!(
                "N = {n} exceeds table length {}",
                self.b.len()
            )));
        }
        let big = 2.0_f64.powi(256);
        let inv = 2.0_f64.powi(-256);
        // Per-value local exponents in units of 256 bits.
        let mut vals: Vec<(f64, i64)> = Vec::with_capacity(n + 1);
        let mut shift = 0i64;
        let mut p_prev = 0.0_f64;
        let mut p = 1.0 / self.mu0.sqrt();
        vals.push((p, 0));
        for k in 1..=n {
            let bkm = if k >= 2 { self.b[k - 2] } else { 0.0 };
            let next = (x * p - bkm * p_prev) / self.b[k - 1];
            p_prev = p;
            p = next;
            if p.abs() > big || p_prev.abs() > big {
                p *= inv;
                p_prev *= inv;
                shift += 1;
            }
            vals.push((p, shift));
        }
        let max_shift = vals.iter().map(|&(_, s)| s).max().unwrap_or(0);
        let exp2 = max_shift * 256;
        let mantissas = vals
            .into_iter()
            .map(|(m, s)| m * 2.0_f64.powi((256 * (s - max_shift)) as i32))
            .collect();
        Ok(ScaledPolyValues { mantissas, exp2 })
    }

    /// Derivative table D[i][n] = P_n^{(i)}(x) for n <= N, i <= j, from the
    /// differentiated recurrence
    /// b_{n+1} P^{(i)}_{n+1} = i P^{(i-1)}_n + x P^{(i)}_n - b_n P^{(i)}_{n-1}.
    pub fn eval_poly_derivs(&self, x: f64, n: usize, j: usize) -> Result<Vec<Vec<f64>>> {
        let base = self.eval_polys(x, n)?;
        let mut d: Vec<Vec<f64>> = Vec::with_capacity(j + 1);
        d.push(base);
        for i in 1..=j {
            let mut row = vec![0.0; n + 1];
            if n >= 1 {
                row[1] = (i as f64 * d[i - 1][0] + x * row[0]) / self.b[0];
            }
            for k in 1..n {
                row[k + 1] =
                    (i as f64 * d[i - 1][k] + x * row[k] - self.b[k - 1] * row[k - 1]) / self.b[k];
            }
            d.push(row);
        }
        Ok(d)
    }

    /// m-node Gauss rule for this table's measure.
    pub fn gauss_freud(&self, m: usize) -> Result<QuadratureRule> {
        quadrature::golub_welsch(self, m)
    }

    /// Write the table as CSV: two metadata comment lines, then (n, b_n)
    /// rows at 17 significant digits.
    pub fn to_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# alpha,{}", fmt17(self.alpha))?;
        writeln!(w, "# mu0,{}", fmt17(self.mu0))?;
        writeln!(w, "n,b_n")?;
        for (i, &b) in self.b.iter().enumerate() {
            writeln!(w, "{},{}", i + 1, fmt17(b))?;
        }
        Ok(())
    }

    pub fn from_csv(r: impl BufRead) -> Result<Self> {
        let mut alpha = None;
        let mut mu0 = None;
        let mut b = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line == "n,b_n" {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# alpha,") {
                alpha = Some(parse_f64(rest)?);
            } else if let Some(rest) = line.strip_prefix("# mu0,") {
                mu0 = Some(parse_f64(rest)?);
            } else {
                let (n_str, b_str) = line
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("bad row: {line}")))?;
                let n: usize = n_str
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index: {n_str}")))?;
                if n != b.len() + 1 {
                    return Err(Error::Parse(format!("row {n} out of order")));
                }
                b.push(parse_f64(b_str)?);
            }
        }
        let alpha = alpha.ok_or_else(|| Error::Parse("missing alpha header".into()))?;
        let mu0 = mu0.ok_or_else(|| Error::Parse("missing mu0 header".into()))?;
        Ok(Self { alpha, mu0, b })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad float: {s}")))
}

/// Recurrence table at alpha = 2 from the closed form b_n = sqrt(n)/2,
/// mu0 = sqrt(pi/2). Rejects any other alpha.
pub fn closed_form_recurrence(alpha: f64, n: usize) -> Result<RecurrenceTable> {
    if alpha != 2.0 {
        return Err(Error::invalid(
            "closed-form recurrence is only available at alpha = 2",
        ));
    }
    let b = (1..=n).map(|k| 0.5 * (k as f64).sqrt()).collect();
    Ok(RecurrenceTable {
        alpha,
        mu0: (std::f64::consts::PI / 2.0).sqrt(),
        b,
    })
}

/// Composite discretization grid on [0, R]: one 40-node Gauss-Legendre panel
/// per dyadic interval near the origin (the |x|^alpha kink sits at a panel
/// boundary and every panel sees an analytic integrand), then `outer`
/// uniform panels up to R.
pub(crate) fn half_grid(r: f64, outer: usize) -> (Vec<f64>, Vec<f64>) {
    let gl = quadrature::gauss_legendre(40).expect("static rule");
    let r_in = 1.0_f64.min(r / 4.0);
    let mut edges = Vec::with_capacity(54 + outer);
    edges.push(0.0);
    for j in (0..=52).rev() {
        edges.push(r_in * 2.0_f64.powi(-j));
    }
    let w = (r - r_in) / outer as f64;
    for i in 1..=outer {
        edges.push(r_in + w * i as f64);
    }
    let mut xs = Vec::with_capacity(40 * (edges.len() - 1));
    let mut ws = Vec::with_capacity(xs.capacity());
    for pair in edges.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        let half = 0.5 * (pair[1] - pair[0]);
        for (&t, &wt) in gl.nodes().iter().zip(gl.weights()) {
            xs.push(mid + half * t);
            ws.push(half * wt);
        }
    }
    (xs, ws)
}

/// Truncation radius for the discretization: the base radius puts the bare
/// weight below 2^-75, and the degree term covers the oscillatory support of
/// the highest-degree polynomial with a 1.5x margin (the support radius for
/// degree n is (c(alpha) n)^{1/alpha} with c(alpha) < 1.6 for all alpha > 1).
pub(crate) fn truncation_radius(alpha: f64, n: usize) -> f64 {
    let base = (75.0 * 2.0_f64.ln() / 2.0).powf(1.0 / alpha);
    let deg = 1.5 * (1.6 * (n as f64 + 1.0)).powf(1.0 / alpha);
    base.max(deg)
}

/// One pass of the discretized Stieltjes procedure on a fixed grid.
///
/// Works on the weighted vectors u_n(x_i) = P_n(x_i) sqrt(w_i), each stored
/// as mantissa * 2^{256 e_i} with a per-node exponent: the raw node weights
/// underflow f64 beyond moderate |x| for alpha < 2, and the vector entries
/// there must be able to grow back to O(1) by the time the polynomial degree
/// reaches the node. Only the positive half-grid is stored; even symmetry
/// doubles every norm.
fn stieltjes_pass(alpha: f64, n: usize, r: f64, outer: usize) -> (f64, Vec<f64>) {
    let (xs, wgl) = half_grid(r, outer);
    let count = xs.len();
    let ln2 = std::f64::consts::LN_2;

    // log of the measure-weighted panel weight at each node.
    let lw: Vec<f64> = xs
        .iter()
        .zip(&wgl)
        .map(|(&x, &w)| w.ln() - 2.0 * x.powf(alpha))
        .collect();
    let mu0 = 2.0 * lw.iter().map(|&l| l.exp()).collect::<KahanSum>().value();

    let mut p: Vec<f64> = Vec::with_capacity(count);
    let mut e: Vec<i64> = Vec::with_capacity(count);
    for &l in &lw {
        let l0 = 0.5 * l - 0.5 * mu0.ln();
        let ei = (l0 / (256.0 * ln2)).floor() as i64;
        p.push((l0 - ei as f64 * 256.0 * ln2).exp());
        e.push(ei);
    }
    let mut q = vec![0.0_f64; count];

    let big = 2.0_f64.powi(256);
    let inv = 2.0_f64.powi(-256);
    let mut b = Vec::with_capacity(n);
    let mut b_prev = 0.0_f64;
    let mut v = vec![0.0_f64; count];
    for _ in 0..n {
        let e_max = e.iter().copied().max().unwrap_or(0);
        let mut norm2 = KahanSum::new();
        for i in 0..count {
            v[i] = xs[i] * p[i] - b_prev * q[i];
            let de = e[i] - e_max;
            if de > -3 {
                // 2^{512 de} underflows past de <= -3 anyway.
                let scale = 2.0_f64.powi((512 * de) as i32);
                norm2.add(v[i] * v[i] * scale);
            }
        }
        let bn = (2.0 * norm2.value()).sqrt() * 2.0_f64.powi((256 * e_max) as i32);
        for i in 0..count {
            q[i] = p[i];
            p[i] = v[i] / bn;
            if p[i].abs() > big || q[i].abs() > big {
                p[i] *= inv;
                q[i] *= inv;
                e[i] += 1;
            }
        }
        b.push(bn);
        b_prev = bn;
    }
    (mu0, b)
}

/// Recurrence coefficients b_1..b_N for e^{-2|x|^alpha} by the discretized
/// Stieltjes procedure: the grid is refined by doubling the outer panel
/// count until two successive coefficient tables agree within `tol`
/// (absolute on each b_n, relative on mu0).
pub fn stieltjes_recurrence(weight: &FreudWeight, n: usize, tol: f64) -> Result<RecurrenceTable> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol must be positive"));
    }
    let alpha = weight.alpha();
    let r = truncation_radius(alpha, n);
    const OUTER0: usize = 16;
    const OUTER_CAP: usize = 1024;

    let (mut mu_prev, mut b_prev) = stieltjes_pass(alpha, n, r, OUTER0);
    let mut outer = OUTER0 * 2;
    loop {
        let (mu, b) = stieltjes_pass(alpha, n, r, outer);
        let db = b
            .iter()
            .zip(&b_prev)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let dmu = (mu - mu_prev).abs();
        if db <= tol && dmu <= tol * mu {
            return Ok(RecurrenceTable { alpha, mu0: mu, b });
        }
        if outer >= OUTER_CAP {
            return Err(Error::ConvergenceFailure {
                context: format!(
                    "stieltjes discretization did not stabilize to {tol:.1e} \
                     at alpha = {alpha}, N = {n}"
                ),
                delta: db,
                last: b,
                previous: b_prev,
            });
        }
        mu_prev = mu;
        b_prev = b;
        outer *= 2;
    }
}
