//! The alpha = 2 bridge to Hermite analysis: the weighted expansion
//! coefficients (f, P_{2,n}) coincide with the Hermite coefficients of the
//! dilated, gaussian-damped function (dilate(f, 1/sqrt2)/2^{1/4}) e^{-x^2/2},
//! and the polynomials themselves are a dilation of the Hermite system.
//!
//! ```bash
//! cargo run --release --example hermite_correspondence
//! ```

use freud_approx::alpha2::{coefficient_correspondence, dilation_check, schwartz_lift};
use freud_approx::functions::by_name;
use freud_approx::orthopoly::closed_form_recurrence;

fn main() -> freud_approx::Result<()> {
    let table = closed_form_recurrence(2.0, 60)?;
    let grid: Vec<f64> = (-100..=100).map(|i| i as f64 * 0.05).collect();
    let dev = dilation_check(&table, &grid, 30)?;
    println!("dilation identity, n <= 30 on [-5, 5]: max deviation = {dev:.3e}");

    for name in ["x3gauss", "x0", "sin"] {
        let f = by_name(name).expect("corpus");
        let rep = coefficient_correspondence(&f, 60)?;
        println!(
            "{name}: max |a_n - hermite_n| = {:.3e}, parseval freud/hermite rel = {:.2e}/{:.2e}",
            rep.max_diff,
            (rep.parseval_freud - rep.f_norm_sq).abs() / rep.f_norm_sq,
            (rep.parseval_hermite - rep.f_norm_sq).abs() / rep.f_norm_sq,
        );
    }

    // Lifting a Schwartz function by e^{x^2} lands in the rapidly
    // approximable class; the first few coefficients still decay fast.
    let g = by_name("x3gauss3").expect("corpus");
    let f = schwartz_lift(&g)?;
    let rep = coefficient_correspondence(&f, 40)?;
    println!(
        "lift(x3gauss3) = x^3 e^{{-2x^2}}: max diff = {:.3e}, |a_39| = {:.3e}",
        rep.max_diff,
        rep.freud[39].abs()
    );
    Ok(())
}
