//! The alpha = 2 theory: Hermite functions, the dilation relating the
//! orthonormal system for e^{-2x^2} to the orthonormal Hermite polynomials,
//! the coefficient correspondence between the two expansions, and the
//! Schwartz lift g -> g e^{x^2}.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expansion::{self, QuadMeta, QuadStrategy};
use crate::functions::{gaussian_deriv_poly, AlphaCompat, ClassTag, FunctionSpec, Poly};
use crate::orthopoly::{closed_form_recurrence, RecurrenceTable};
use crate::util::{fmt17, KahanSum};

/// Hermite function values h_0(x)..h_N(x), an orthonormal basis of the
/// unweighted L2(R).
#[derive(Debug, Clone)]
pub struct HermiteBasisValues {
    pub x: f64,
    pub values: Vec<f64>,
}

/// h_0 = pi^{-1/4} e^{-x^2/2}, then
/// h_{n+1} = x sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}.
pub fn hermite_functions(x: f64, n: usize) -> HermiteBasisValues {
    let mut values = Vec::with_capacity(n + 1);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    values.push(h0);
    if n >= 1 {
        values.push(x * 2.0_f64.sqrt() * h0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * values[k]
            - (kf / (kf + 1.0)).sqrt() * values[k - 1];
        values.push(next);
    }
    HermiteBasisValues { x, values }
}

/// Orthonormal Hermite polynomials Q_0(x)..Q_N(x) for the weight e^{-x^2}
/// (h_n = Q_n e^{-x^2/2}); their own recurrence, kept independent of the
/// Freud-side evaluators on purpose.
pub fn hermite_poly_values(x: f64, n: usize) -> Vec<f64> {
    let mut q = Vec::with_capacity(n + 1);
    q.push(std::f64::consts::PI.powf(-0.25));
    if n >= 1 {
        q.push(x * q[0] / 0.5_f64.sqrt());
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (x * q[k] - (kf / 2.0).sqrt() * q[k - 1]) / ((kf + 1.0) / 2.0).sqrt();
        q.push(next);
    }
    q
}

/// Gauss rule for the weight e^{-s^2}, derived from the alpha = 2 rule by
/// the substitution s = sqrt(2) x.
fn hermite_rule(table: &RecurrenceTable, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = table.gauss_freud(m)?;
    let s2 = 2.0_f64.sqrt();
    Ok((
        rule.nodes().iter().map(|&x| s2 * x).collect(),
        rule.weights().iter().map(|&w| s2 * w).collect(),
    ))
}

/// Max deviation over the grid and n <= N of
/// |h_n(x) - 2^{-1/4} P_{2,n}(x/sqrt(2)) e^{-x^2/2}|.
pub fn dilation_check(table: &RecurrenceTable, x_grid: &[f64], n: usize) -> Result<f64> {
    if table.alpha() != 2.0 {
        return Err(Error::invalid("dilation check requires an alpha = 2 table"));
    }
    let quarter = 2.0_f64.powf(-0.25);
    let mut worst = 0.0_f64;
    for &x in x_grid {
        let h = hermite_functions(x, n);
        let p = table.eval_polys(x / 2.0_f64.sqrt(), n)?;
        let damp = (-x * x / 2.0).exp();
        for k in 0..=n {
            let dev = (h.values[k] - quarter * p[k] * damp).abs();
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

/// Side-by-side coefficients of the same function through the two pipelines.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CorrespondenceReport {
    /// Freud-side coefficients (f, P_{2,n}).
    pub freud: Vec<f64>,
    /// Hermite-side coefficients of (dilate(f, 1/sqrt2)/2^{1/4}) psi.
    pub hermite: Vec<f64>,
    pub max_diff: f64,
    /// Energy sums of the two sides and the direct norm of f.
    pub parseval_freud: f64,
    pub parseval_hermite: f64,
    pub f_norm_sq: f64,
    pub quad: QuadMeta,
}

/// Compute (f, P_{2,n}) for n <= N through the weighted expansion and,
/// independently, as Hermite coefficients of (dilate(f, 1/sqrt2)/2^{1/4}) psi.
///
/// The Hermite side integrates f(s/sqrt2) Q_n(s) against e^{-s^2} with a
/// Gauss rule when f is smooth on the line; kinked or compactly supported f
/// falls back to the split composite grid, which resolves those integrands.
pub fn coefficient_correspondence(f: &FunctionSpec, n: usize) -> Result<CorrespondenceReport> {
    let table = closed_form_recurrence(2.0, (2 * expansion::default_node_count(n)).max(n + 1))?;
    let exp = expansion::fourier_coefficients(f, &table, n, expansion::default_node_count(n))?;

    let hermite = if f.needs_split_quadrature() {
        hermite_side_split(f, n)?
    } else {
        hermite_side_gauss(f, &table, n, expansion::default_node_count(n))?
    };

    let max_diff = exp
        .coeffs()
        .iter()
        .zip(&hermite)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let energy = |v: &[f64]| v.iter().map(|a| a * a).collect::<KahanSum>().value();
    Ok(CorrespondenceReport {
        parseval_freud: energy(exp.coeffs()),
        parseval_hermite: energy(&hermite),
        freud: exp.coeffs().to_vec(),
        hermite,
        max_diff,
        f_norm_sq: exp.f_norm_sq(),
        quad: exp.quad_meta(),
    })
}

/// Hermite-side coefficients via the Gauss rule for e^{-s^2}:
/// F_n = integral of f(s/sqrt2)/2^{1/4} Q_n(s) e^{-s^2} ds, with one
/// doubling check mirroring the expansion gate.
fn hermite_side_gauss(
    f: &FunctionSpec,
    table: &RecurrenceTable,
    n: usize,
    m: usize,
) -> Result<Vec<f64>> {
    let pass = |mm: usize| -> Result<Vec<f64>> {
        let (s, w) = hermite_rule(table, mm)?;
        let mut acc = vec![KahanSum::new(); n + 1];
        let quarter = 2.0_f64.powf(-0.25);
        for (&si, &wi) in s.iter().zip(&w) {
            if wi == 0.0 {
                continue;
            }
            let fv = f.eval(si / 2.0_f64.sqrt()) * quarter;
            if !fv.is_finite() {
                return Err(Error::InvalidFunction { x: si });
            }
            let q = hermite_poly_values(si, n);
            for (k, qk) in q.iter().enumerate() {
                acc[k].add(wi * fv * qk);
            }
        }
        Ok(acc.iter().map(KahanSum::value).collect())
    };
    let a1 = pass(m)?;
    let a2 = pass(2 * m)?;
    let delta = a1
        .iter()
        .zip(&a2)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    if delta >= expansion::COEFF_TOL {
        return Err(Error::ConvergenceFailure {
            context: format!("hermite-side coefficients of {} not converged", f.name()),
            delta,
            last: a2,
            previous: a1,
        });
    }
    Ok(a2)
}

/// Composite-Legendre fallback on the split grid for functions the Gauss
/// rule cannot resolve: integrates f(s/sqrt2)/2^{1/4} Q_n(s) e^{-s^2} over
/// both half-lines using Q_n(-s) = (-1)^n Q_n(s).
fn hermite_side_split(f: &FunctionSpec, n: usize) -> Result<Vec<f64>> {
    let r = crate::orthopoly::truncation_radius(2.0, n) * 2.0_f64.sqrt();
    let quarter = 2.0_f64.powf(-0.25);
    let pass = |outer: usize| -> Result<Vec<f64>> {
        let (xs, wgl) = crate::orthopoly::half_grid(r, outer);
        let mut acc = vec![KahanSum::new(); n + 1];
        for (&s, &wg) in xs.iter().zip(&wgl) {
            let w = wg * (-s * s).exp();
            if w == 0.0 {
                continue;
            }
            let fp = f.eval(s / 2.0_f64.sqrt()) * quarter;
            let fm = f.eval(-s / 2.0_f64.sqrt()) * quarter;
            if !fp.is_finite() || !fm.is_finite() {
                return Err(Error::InvalidFunction { x: s });
            }
            let q = hermite_poly_values(s, n);
            for (k, qk) in q.iter().enumerate() {
                let fsum = if k % 2 == 0 { fp + fm } else { fp - fm };
                acc[k].add(w * fsum * qk);
            }
        }
        Ok(acc.iter().map(KahanSum::value).collect())
    };
    let mut outer = 64usize;
    let mut prev = pass(outer)?;
    loop {
        outer *= 2;
        let cur = pass(outer)?;
        let delta = prev
            .iter()
            .zip(&cur)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if delta < expansion::COEFF_TOL {
            return Ok(cur);
        }
        if outer >= 1024 {
            return Err(Error::ConvergenceFailure {
                context: format!(
                    "hermite-side split coefficients of {} not converged",
                    f.name()
                ),
                delta,
                last: cur,
                previous: prev,
            });
        }
        prev = cur;
    }
}

impl CorrespondenceReport {
    pub fn to_csv(&self, mut w: impl std::io::Write) -> Result<()> {
        writeln!(w, "# max_diff,{}", fmt17(self.max_diff))?;
        writeln!(w, "n,a_n,hermite_n,diff")?;
        for (n, (a, h)) in self.freud.iter().zip(&self.hermite).enumerate() {
            writeln!(w, "{},{},{},{}", n, fmt17(*a), fmt17(*h), fmt17(a - h))?;
        }
        Ok(())
    }

    pub fn strategy(&self) -> QuadStrategy {
        self.quad.strategy
    }
}

/// The lift f(x) = g(x) e^{x^2} of a Schwartz function, with derivatives
/// composed through the product rule:
/// f^{(j)} = sum_i C(j,i) g^{(i)} A_{j-i} e^{x^2}, where A_{k+1} = A_k' + 2x A_k.
pub fn schwartz_lift(g: &FunctionSpec) -> Result<FunctionSpec> {
    if !g.has_tag(ClassTag::Schwartz) {
        return Err(Error::invalid(format!(
            "schwartz_lift requires a schwartz-tagged function, got {}",
            g.name()
        )));
    }
    let name = format!("lift({})", g.name());
    let ge = g.clone();
    let gd = g.clone();
    let max_order = g.max_order();
    Ok(FunctionSpec::new(
        name,
        Arc::new(move |x| ge.eval(x) * (x * x).exp()),
        Arc::new(move |j, x| {
            let ex = (x * x).exp();
            let mut acc = 0.0;
            let mut binom = 1.0_f64;
            for i in 0..=j {
                // binom = C(j, i)
                let a = gaussian_deriv_poly(Poly(vec![1.0]), 1.0, j - i);
                acc += binom * gd.deriv(i, x).expect("order within parent cap") * a.eval(x);
                binom = binom * (j - i) as f64 / (i + 1) as f64;
            }
            acc * ex
        }),
        max_order,
        [ClassTag::SchwartzLift],
        // The lift is only guaranteed integrable against e^{-2x^2}.
        AlphaCompat::Exactly(2.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::by_name;

    #[test]
    fn hermite_h0_at_zero() {
        let h = hermite_functions(0.0, 0);
        assert!((h.values[0] - 0.7511255444649425).abs() < 1e-15);
    }

    #[test]
    fn hermite_h1_odd() {
        let h = hermite_functions(0.0, 3);
        assert_eq!(h.values[1], 0.0);
        assert_eq!(h.values[3], 0.0);
        for &x in &[0.5, 1.3, 2.2] {
            let plus = hermite_functions(x, 5);
            let minus = hermite_functions(-x, 5);
            for n in 0..=5 {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((minus.values[n] - sign * plus.values[n]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hermite_function_normalization_by_quadrature() {
        // integral of h_5^2 dx = 1 with a 200-node rule for e^{-s^2}.
        let table = closed_form_recurrence(2.0, 200).unwrap();
        let (s, w) = hermite_rule(&table, 200).unwrap();
        let mut acc = KahanSum::new();
        for (&si, &wi) in s.iter().zip(&w) {
            if wi == 0.0 {
                continue;
            }
            let q = hermite_poly_values(si, 5);
            acc.add(wi * q[5] * q[5]);
        }
        assert!((acc.value() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hermite_orthonormality_gram() {
        let table = closed_form_recurrence(2.0, 200).unwrap();
        let (s, w) = hermite_rule(&table, 120).unwrap();
        let n = 40;
        let mut gram = vec![vec![KahanSum::new(); n + 1]; n + 1];
        for (&si, &wi) in s.iter().zip(&w) {
            if wi == 0.0 {
                continue;
            }
            let q = hermite_poly_values(si, n);
            for i in 0..=n {
                for j in i..=n {
                    gram[i][j].add(wi * q[i] * q[j]);
                }
            }
        }
        let mut worst = 0.0_f64;
        for i in 0..=n {
            for j in i..=n {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[i][j].value() - expect).abs());
            }
        }
        assert!(worst < 1e-9, "worst gram deviation {worst:.3e}");
    }

    #[test]
    fn dilation_identity_small_grid() {
        let table = closed_form_recurrence(2.0, 60).unwrap();
        let grid: Vec<f64> = (-50..=50).map(|i| i as f64 * 0.1).collect();
        let dev = dilation_check(&table, &grid, 30).unwrap();
        assert!(dev <= 1e-9, "max deviation {dev:.3e}");
    }

    #[test]
    fn dilation_constant_term_exact() {
        // 2^{-1/4} (2/pi)^{1/4} = pi^{-1/4}: the n = 0 identity in closed form.
        let lhs = 2.0_f64.powf(-0.25) * (2.0 / std::f64::consts::PI).powf(0.25);
        assert!((lhs - std::f64::consts::PI.powf(-0.25)).abs() < 1e-15);
    }

    #[test]
    fn correspondence_for_constant_function() {
        // f == 1: a_0 = (pi/2)^{1/4}, everything else zero, both sides.
        let f = by_name("x0").unwrap();
        let rep = coefficient_correspondence(&f, 10).unwrap();
        let expect = (std::f64::consts::PI / 2.0).powf(0.25);
        assert!((rep.freud[0] - expect).abs() < 1e-12);
        assert!((rep.hermite[0] - expect).abs() < 1e-12);
        for n in 1..=10 {
            assert!(rep.freud[n].abs() < 1e-12);
            assert!(rep.hermite[n].abs() < 1e-12);
        }
        assert!(rep.max_diff < 1e-12);
    }

    #[test]
    fn correspondence_of_basis_polynomial_is_unit_vector() {
        // f = P_{2,5}: both pipelines must produce delta_{n,5}.
        let t = closed_form_recurrence(2.0, 500).unwrap();
        let f = FunctionSpec::new(
            "p5",
            Arc::new(move |x| t.eval_polys(x, 5).unwrap()[5]),
            Arc::new(|_, _| unreachable!()),
            Some(0),
            [ClassTag::Polynomial],
            AlphaCompat::AllAlpha,
        );
        let rep = coefficient_correspondence(&f, 12).unwrap();
        for n in 0..=12 {
            let expect = if n == 5 { 1.0 } else { 0.0 };
            assert!((rep.freud[n] - expect).abs() < 1e-9, "freud n={n}");
            assert!((rep.hermite[n] - expect).abs() < 1e-9, "hermite n={n}");
        }
    }

    #[test]
    fn correspondence_split_route_for_kinked_function() {
        let f = by_name("abs").unwrap();
        let rep = coefficient_correspondence(&f, 30).unwrap();
        assert_eq!(rep.strategy(), QuadStrategy::SplitComposite);
        assert!(rep.max_diff < 1e-9, "max diff {:.3e}", rep.max_diff);
    }

    #[test]
    fn hermite_side_reconstructs_f_pointwise() {
        // Inverting the correspondence: f(x) = 2^{1/4} e^{x^2} times the
        // Hermite series of the damped dilation, evaluated at sqrt(2) x.
        // The e^{x^2} factor amplifies the series truncation error by e^9
        // at the interval ends, so the series needs headroom beyond the
        // coefficient count the agreement checks use.
        let f = by_name("x3gauss").unwrap();
        let rep = coefficient_correspondence(&f, 90).unwrap();
        let mut worst = 0.0_f64;
        for i in 0..=60 {
            let x = -3.0 + 6.0 * i as f64 / 60.0;
            let h = hermite_functions(2.0_f64.sqrt() * x, 90);
            let series: f64 = rep
                .hermite
                .iter()
                .zip(&h.values)
                .map(|(c, hv)| c * hv)
                .sum();
            let rec = 2.0_f64.powf(0.25) * (x * x).exp() * series;
            worst = worst.max((rec - f.eval(x)).abs());
        }
        assert!(worst <= 1e-7, "max pointwise deviation {worst:.3e}");
    }

    #[test]
    fn lift_of_full_gaussian_is_one() {
        // g = e^{-x^2} lifts to the constant 1.
        let g = FunctionSpec::new(
            "gauss1",
            Arc::new(|x: f64| (-x * x).exp()),
            Arc::new(|_, _| unreachable!()),
            Some(0),
            [ClassTag::Schwartz],
            AlphaCompat::AllAlpha,
        );
        let f = schwartz_lift(&g).unwrap();
        for &x in &[-2.0, 0.0, 0.7, 3.1] {
            assert!((f.eval(x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lift_rejects_unflagged_input() {
        let f = by_name("sin").unwrap();
        assert!(schwartz_lift(&f).is_err());
    }

    #[test]
    fn lift_matches_closed_form_family() {
        // lift(x^3 e^{-3x^2}) = x^3 e^{-2x^2}, which the corpus also carries
        // in closed form; values and first derivatives must agree.
        let g = by_name("x3gauss3").unwrap();
        let lifted = schwartz_lift(&g).unwrap();
        let direct = by_name("x3gauss").unwrap();
        for &x in &[-1.8, -0.4, 0.0, 0.9, 2.5] {
            assert!((lifted.eval(x) - direct.eval(x)).abs() < 1e-12);
            let a = lifted.deriv(1, x).unwrap();
            let b = direct.deriv(1, x).unwrap();
            assert!((a - b).abs() < 1e-11 * b.abs().max(1.0), "x={x}: {a} vs {b}");
            let a2 = lifted.deriv(2, x).unwrap();
            let b2 = direct.deriv(2, x).unwrap();
            assert!((a2 - b2).abs() < 1e-10 * b2.abs().max(1.0), "x={x}");
        }
    }
}
