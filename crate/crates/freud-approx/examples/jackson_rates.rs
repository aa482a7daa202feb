//! Jackson rate tables: t_n = n^{r(1/alpha-1)} d(f, Pi_n) for f = sin,
//! bounded by a constant times ||f^{(r)}||.
//!
//! ```bash
//! cargo run --release --example jackson_rates
//! ```

use freud_approx::diagnostics::jackson_table;
use freud_approx::functions::by_name;
use freud_approx::orthopoly::{closed_form_recurrence, stieltjes_recurrence, FreudWeight};

fn main() -> freud_approx::Result<()> {
    let f = by_name("sin").expect("corpus");
    for &alpha in &[2.0, 3.0] {
        let table = if alpha == 2.0 {
            closed_form_recurrence(2.0, 420)?
        } else {
            stieltjes_recurrence(&FreudWeight::new(alpha)?, 420, 1e-10)?
        };
        for r in 1..=3usize {
            let rep = jackson_table(&f, &table, r, 1..=30)?;
            println!(
                "alpha = {alpha}, r = {r}: ||f^({r})|| = {:.8}, c_hat = {:.6}, argmax n = {}",
                rep.deriv_norm,
                rep.c_hat,
                rep.argmax()
            );
            for &n in &[1usize, 2, 4, 8, 16, 30] {
                let row = rep.rows[n - 1];
                println!(
                    "    n = {n:>2}: t_n = {:>12.6e}{}",
                    row.t,
                    if row.floored { "  (below noise floor)" } else { "" }
                );
            }
        }
    }
    Ok(())
}
