//! Termwise differentiation of a truncated expansion: the series
//! sum a_n P_n^{(j)} of f = sin converges uniformly on compacts to the j-th
//! derivative. Errors are shown on [-2, 2] for j = 0..3.
//!
//! ```bash
//! cargo run --release --example derivative_series
//! ```

use freud_approx::expansion::{default_node_count, fourier_coefficients};
use freud_approx::functions::by_name;
use freud_approx::orthopoly::closed_form_recurrence;

fn main() -> freud_approx::Result<()> {
    let table = closed_form_recurrence(2.0, 400)?;
    let f = by_name("sin").expect("corpus");
    let exp = fourier_coefficients(&f, &table, 60, default_node_count(60))?;

    let exact = |j: usize, x: f64| match j % 4 {
        0 => x.sin(),
        1 => x.cos(),
        2 => -x.sin(),
        _ => -x.cos(),
    };
    println!("f = sin, alpha = 2, N = 60, errors of the termwise series on [-2, 2]:");
    for j in 0..=3usize {
        let mut worst = 0.0_f64;
        for i in 0..=160 {
            let x = -2.0 + 4.0 * i as f64 / 160.0;
            let rec = exp.reconstruct(&table, x, j)?;
            worst = worst.max((rec - exact(j, x)).abs());
        }
        println!("  j = {j}: max |series - sin^({j})| = {worst:.3e}");
    }
    Ok(())
}
