//! Rapid-approximation seminorms q_k = sup_n n^k d(f, Pi_{n-1}) for a fast
//! and a slow function, with the argmax column separating "sup attained
//! early" from "still growing at the truncation".
//!
//! ```bash
//! cargo run --release --example seminorm_tables
//! ```

use freud_approx::expansion::{default_node_count, fourier_coefficients, seminorms};
use freud_approx::functions::by_name;
use freud_approx::orthopoly::closed_form_recurrence;

fn main() -> freud_approx::Result<()> {
    let table = closed_form_recurrence(2.0, 400)?;
    for name in ["gausshalf", "abs"] {
        let f = by_name(name).expect("corpus");
        let exp = fourier_coefficients(&f, &table, 80, default_node_count(80))?;
        let s = seminorms(&exp, 6);
        println!("{name}: (n_used = {})", s.n_used);
        println!("  {:>3} {:>16} {:>9} {:>8}", "k", "q_k", "argmax n", "floored");
        for k in 0..=6usize {
            println!(
                "  {:>3} {:>16.6e} {:>9} {:>8}",
                k, s.values[k], s.argmax[k], s.argmax_floored[k]
            );
        }
        println!();
    }
    println!("an argmax pinned at n_used with a growing q_k marks the slow class;");
    println!("rows whose argmax distance is below the noise floor carry no signal.");
    Ok(())
}
