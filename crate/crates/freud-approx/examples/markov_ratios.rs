//! Markov derivative-norm ratios r_n = ||P_n'|| and their normalized form
//! rho_n = r_n / n^{1-1/alpha}, plus the empirical growth exponent.
//!
//! At alpha = 2 the ratio is exactly 2 sqrt(n); for other weights the table
//! shows rho_n flattening toward a constant, which is the measured stand-in
//! for the Markov inequality constant.
//!
//! ```bash
//! cargo run --release --example markov_ratios
//! ```

use freud_approx::diagnostics::markov_table;
use freud_approx::orthopoly::{closed_form_recurrence, stieltjes_recurrence, FreudWeight};

fn main() -> freud_approx::Result<()> {
    for &alpha in &[1.5, 2.0, 3.0, 4.0] {
        let table = if alpha == 2.0 {
            closed_form_recurrence(2.0, 100)?
        } else {
            stieltjes_recurrence(&FreudWeight::new(alpha)?, 100, 1e-10)?
        };
        let rule = table.gauss_freud(61)?;
        let rep = markov_table(&table, &rule, 1..=60)?;
        println!("alpha = {alpha}:");
        println!("  c_hat (max rho_n, n <= 60)     = {:.8}", rep.c_hat);
        println!(
            "  log-log slope of r_n, n in [10,60] = {:.4}  (1 - 1/alpha = {:.4})",
            rep.log_slope(10, 60),
            1.0 - 1.0 / alpha
        );
        for &n in &[1usize, 5, 10, 20, 40, 60] {
            let row = rep.rows[n - 1];
            println!(
                "  n = {n:>2}: r_n = {:>12.6}  rho_n = {:.8}",
                row.r,
                row.rho.unwrap()
            );
        }
    }
    Ok(())
}
