//! Cross-checks of the numerical pipeline against independent oracles:
//! gamma-function moment formulas and adaptive Simpson quadrature that share
//! no code with the implementation paths they verify.

mod common;

use common::{adaptive_simpson, integrate_even_freud};
use statrs::function::gamma::gamma;

use freud_approx::alpha2;
use freud_approx::expansion::{default_node_count, fourier_coefficients};
use freud_approx::functions::by_name;
use freud_approx::orthopoly::{closed_form_recurrence, stieltjes_recurrence, FreudWeight};

const TEST_ALPHAS: [f64; 4] = [1.5, 2.0, 3.0, 4.0];

/// mu0(alpha) = 2 Gamma(1 + 1/alpha) 2^{-1/alpha}.
fn mu0_exact(alpha: f64) -> f64 {
    2.0 * gamma(1.0 + 1.0 / alpha) * 2.0_f64.powf(-1.0 / alpha)
}

/// Even monomial moment integral of x^k e^{-2|x|^alpha}:
/// 2 Gamma((k+1)/alpha) / (alpha 2^{(k+1)/alpha}).
fn moment_exact(alpha: f64, k: u32) -> f64 {
    assert!(k.is_multiple_of(2));
    let s = (k as f64 + 1.0) / alpha;
    2.0 * gamma(s) / (alpha * 2.0_f64.powf(s))
}

#[test]
fn zeroth_moment_matches_gamma_formula_and_simpson() {
    for &alpha in &TEST_ALPHAS {
        let t = if alpha == 2.0 {
            closed_form_recurrence(2.0, 4).unwrap()
        } else {
            stieltjes_recurrence(&FreudWeight::new(alpha).unwrap(), 4, 1e-11).unwrap()
        };
        let exact = mu0_exact(alpha);
        let rel = (t.mu0() - exact).abs() / exact;
        assert!(rel < 1e-10, "alpha={alpha}: mu0 rel err {rel:.3e}");
        let brute = integrate_even_freud(&|x| (-2.0 * x.powf(alpha)).exp(), alpha, 1e-13);
        assert!(
            (brute - exact).abs() / exact < 1e-10,
            "gamma formula vs simpson at alpha={alpha}"
        );
    }
}

#[test]
fn alpha_four_b1_squared_is_moment_ratio() {
    // b_1^2 = mu_2 / mu_0 with the full-line moments
    // mu_2 = Gamma(3/4) / (2 * 2^{3/4}) and mu_0 = Gamma(1/4) / (2 * 2^{1/4}).
    let mu2 = gamma(0.75) / (2.0 * 2.0_f64.powf(0.75));
    let mu0 = gamma(0.25) / (2.0 * 2.0_f64.powf(0.25));
    // Cross-check both closed forms by brute force before using them.
    let mu2_brute = integrate_even_freud(&|x| x * x * (-2.0 * x.powi(4)).exp(), 4.0, 1e-14);
    let mu0_brute = integrate_even_freud(&|x| (-2.0 * x.powi(4)).exp(), 4.0, 1e-14);
    assert!((mu2 - mu2_brute).abs() / mu2 < 1e-11);
    assert!((mu0 - mu0_brute).abs() / mu0 < 1e-11);

    let t = stieltjes_recurrence(&FreudWeight::new(4.0).unwrap(), 1, 1e-11).unwrap();
    let b1sq = t.b()[0] * t.b()[0];
    let expect = mu2 / mu0;
    assert!(
        (b1sq - expect).abs() < 1e-10,
        "b1^2 = {b1sq} vs mu2/mu0 = {expect}"
    );
}

#[test]
fn freud_rule_two_nodes_alpha_two() {
    // b_1 = 1/2: the 2x2 Jacobi matrix has eigenvalues +/- 1/2 and the
    // Golub-Welsch weights are mu0/2 each.
    let t = closed_form_recurrence(2.0, 2).unwrap();
    let rule = t.gauss_freud(2).unwrap();
    assert!((rule.nodes()[0] + 0.5).abs() < 1e-14);
    assert!((rule.nodes()[1] - 0.5).abs() < 1e-14);
    let half_mu0 = 0.5 * (std::f64::consts::PI / 2.0).sqrt();
    assert!((rule.weights()[0] - half_mu0).abs() < 1e-14);
    assert!((rule.weights()[1] - half_mu0).abs() < 1e-14);
}

#[test]
fn freud_rule_integrates_x_squared_alpha_two() {
    // integral of x^2 e^{-2x^2} = sqrt(pi/2)/4.
    let t = closed_form_recurrence(2.0, 8).unwrap();
    let rule = t.gauss_freud(8).unwrap();
    let v = rule.integrate(|x| x * x).unwrap();
    let exact = 0.25 * (std::f64::consts::PI / 2.0).sqrt();
    assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
}

#[test]
fn freud_rule_weight_sums_and_moment_exactness() {
    for &alpha in &TEST_ALPHAS {
        let t = if alpha == 2.0 {
            closed_form_recurrence(2.0, 400).unwrap()
        } else {
            stieltjes_recurrence(&FreudWeight::new(alpha).unwrap(), 400, 1e-10).unwrap()
        };
        for m in [5usize, 40, 400] {
            let rule = t.gauss_freud(m).unwrap();
            let mu0 = mu0_exact(alpha);
            assert!(
                (rule.total_weight() - mu0).abs() / mu0 < 1e-10,
                "alpha={alpha} m={m}: weight sum"
            );
        }
        // Moment exactness for a small rule across its full degree range.
        let m = 7usize;
        let rule = t.gauss_freud(m).unwrap();
        for k in (0..2 * m).step_by(2) {
            let v = rule.integrate(|x| x.powi(k as i32)).unwrap();
            let exact = moment_exact(alpha, k as u32);
            assert!(
                (v - exact).abs() / exact < 1e-10,
                "alpha={alpha} k={k}: {v} vs {exact}"
            );
        }
        // Odd moments vanish identically after the +/- node pairing.
        for k in (1..2 * m).step_by(2) {
            let v = rule.integrate(|x| x.powi(k as i32)).unwrap();
            assert!(v.abs() <= 1e-12, "alpha={alpha} k={k}: odd moment {v:.3e}");
        }
    }
}

#[test]
fn freud_rule_node_symmetry() {
    for &alpha in &[1.5, 3.0] {
        let t = stieltjes_recurrence(&FreudWeight::new(alpha).unwrap(), 120, 1e-10).unwrap();
        for m in [17usize, 64] {
            let rule = t.gauss_freud(m).unwrap();
            let nodes = rule.nodes();
            let weights = rule.weights();
            for i in 0..m / 2 {
                assert_eq!(nodes[i], -nodes[m - 1 - i], "exact +/- pairing");
                let wdiff = (weights[i] - weights[m - 1 - i]).abs();
                assert!(
                    wdiff <= 1e-12 * weights[i].abs().max(1e-300),
                    "alpha={alpha} m={m} i={i}"
                );
            }
            if m % 2 == 1 {
                assert_eq!(nodes[m / 2], 0.0);
            }
        }
    }
}

#[test]
fn sin_first_coefficient_closed_form() {
    // a_1(sin) at alpha = 2 equals (1/2) (pi/2)^{1/4} e^{-1/8}, from the
    // gaussian integral of x sin(x) e^{-2x^2}; ||sin||^2 equals
    // sqrt(pi/2)(1 - e^{-1/2})/2.
    let t = closed_form_recurrence(2.0, 400).unwrap();
    let f = by_name("sin").unwrap();
    let e = fourier_coefficients(&f, &t, 20, default_node_count(20)).unwrap();
    let a1 = 0.5 * (std::f64::consts::PI / 2.0).powf(0.25) * (-0.125_f64).exp();
    assert!((e.coeffs()[1] - a1).abs() < 1e-12, "{} vs {a1}", e.coeffs()[1]);
    let norm = (std::f64::consts::PI / 2.0).sqrt() / 2.0 * (1.0 - (-0.5_f64).exp());
    assert!((e.f_norm_sq() - norm).abs() < 1e-12);
    // Even coefficients vanish by parity.
    for n in (0..=20).step_by(2) {
        assert!(e.coeffs()[n].abs() < 1e-13);
    }
}

#[test]
fn abs_coefficients_match_adaptive_oracle() {
    // a_n(|x|) at alpha = 2 for n in {4, 16, 64}: the pipeline value against
    // adaptive Simpson of 2 x P_n(x) e^{-2x^2} on the half line, with P_n
    // evaluated through the dilated Hermite recurrence rather than the
    // Freud-side evaluator.
    let t = closed_form_recurrence(2.0, 400).unwrap();
    let f = by_name("abs").unwrap();
    let e = fourier_coefficients(&f, &t, 64, default_node_count(64)).unwrap();
    for &n in &[4usize, 16, 64] {
        let p_dilated = move |x: f64| {
            let q = alpha2::hermite_poly_values(2.0_f64.sqrt() * x, n);
            2.0_f64.powf(0.25) * q[n]
        };
        let oracle = adaptive_simpson(
            &|x| 2.0 * x * p_dilated(x) * (-2.0 * x * x).exp(),
            0.0,
            14.0,
            1e-13,
        );
        let a = e.coeffs()[n];
        assert!(
            (a - oracle).abs() < 1e-10,
            "n={n}: pipeline {a} vs oracle {oracle}"
        );
        // Polynomial, not rapid, decay.
        assert!(a.abs() > 1e-4 / (n as f64 + 1.0));
    }
    // Odd coefficients vanish by parity.
    for n in (1..=63).step_by(2) {
        assert!(e.coeffs()[n].abs() < 1e-11);
    }
}

#[test]
fn superexp_coefficients_match_adaptive_oracle() {
    // f = e^{x^2/2} at alpha = 2: f W^2 = e^{-3x^2/2}, so the coefficient
    // integrand decays and adaptive Simpson applies directly.
    let t = closed_form_recurrence(2.0, 400).unwrap();
    let f = by_name("expx2half").unwrap();
    let e = fourier_coefficients(&f, &t, 40, default_node_count(40)).unwrap();
    for &n in &[10usize, 20, 40] {
        let p_dilated = move |x: f64| {
            let q = alpha2::hermite_poly_values(2.0_f64.sqrt() * x, n);
            2.0_f64.powf(0.25) * q[n]
        };
        let oracle = adaptive_simpson(
            &|x| 2.0 * p_dilated(x) * (-1.5 * x * x).exp(),
            0.0,
            18.0,
            1e-14,
        );
        let a = e.coeffs()[n];
        assert!(
            (a - oracle).abs() < 1e-11,
            "n={n}: pipeline {a} vs oracle {oracle}"
        );
    }
}

#[test]
fn stieltjes_gram_matrix_orthonormal_at_modest_degree() {
    // Independent refinement check: Gram of P_0..P_40 under an m = 400 rule
    // for a generic alpha outside the acceptance grid.
    let t = stieltjes_recurrence(&FreudWeight::new(2.6).unwrap(), 400, 1e-10).unwrap();
    let rule = t.gauss_freud(400).unwrap();
    let n = 40usize;
    let mut worst = 0.0_f64;
    let mut gram = vec![vec![0.0_f64; n + 1]; n + 1];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        if w == 0.0 {
            continue;
        }
        let p = t.eval_polys(x, n).unwrap();
        for i in 0..=n {
            for j in i..=n {
                gram[i][j] += w * p[i] * p[j];
            }
        }
    }
    for i in 0..=n {
        for j in i..=n {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[i][j] - expect).abs());
        }
    }
    assert!(worst < 1e-9, "worst deviation {worst:.3e}");
}

#[test]
fn every_corpus_member_integrates_where_declared_compatible() {
    // The expansion pipeline must converge under its doubling gate for every
    // member at every alpha it declares; incompatible pairs must be refused.
    let alphas = [1.5_f64, 2.0, 3.0];
    let tables: Vec<_> = alphas
        .iter()
        .map(|&alpha| {
            if alpha == 2.0 {
                closed_form_recurrence(2.0, 400).unwrap()
            } else {
                stieltjes_recurrence(&FreudWeight::new(alpha).unwrap(), 400, 1e-10).unwrap()
            }
        })
        .collect();
    for f in freud_approx::functions::corpus() {
        for (&alpha, t) in alphas.iter().zip(&tables) {
            let result = fourier_coefficients(&f, t, 10, default_node_count(10));
            if f.compat().accepts(alpha) {
                let e = result.unwrap_or_else(|err| {
                    panic!("{} at alpha={alpha} should integrate: {err}", f.name())
                });
                assert!(e.f_norm_sq().is_finite() && e.f_norm_sq() >= 0.0);
            } else {
                assert!(result.is_err(), "{} must be refused at alpha={alpha}", f.name());
            }
        }
    }
}

#[test]
fn entire_members_carry_finite_jackson_constants() {
    // Tag soundness: sin and cos admit finite rate constants through order 4
    // at every compatible weight tested.
    for &alpha in &[1.5_f64, 3.0] {
        let t = stieltjes_recurrence(&FreudWeight::new(alpha).unwrap(), 400, 1e-10).unwrap();
        for name in ["sin", "cos"] {
            let f = by_name(name).unwrap();
            for r in 1..=4usize {
                let rep = freud_approx::diagnostics::jackson_table(&f, &t, r, 1..=25).unwrap();
                assert!(
                    rep.c_hat.is_finite() && rep.c_hat > 0.0,
                    "{name} alpha={alpha} r={r}"
                );
            }
        }
    }
}

#[test]
fn bump_expansion_and_jackson_are_finite() {
    // Tag soundness: the compactly supported member integrates cleanly and
    // carries a finite Jackson constant through order 4.
    let t = stieltjes_recurrence(&FreudWeight::new(1.5).unwrap(), 400, 1e-10).unwrap();
    let f = by_name("bump").unwrap();
    let e = fourier_coefficients(&f, &t, 30, default_node_count(30)).unwrap();
    let energy: f64 = e.coeffs().iter().map(|a| a * a).sum();
    assert!(energy <= e.f_norm_sq() * (1.0 + 1e-9));
    for r in 1..=4usize {
        let rep = freud_approx::diagnostics::jackson_table(&f, &t, r, 1..=25).unwrap();
        assert!(rep.c_hat.is_finite() && rep.c_hat > 0.0, "r={r}");
    }
}
