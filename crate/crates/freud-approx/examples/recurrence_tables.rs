//! Build recurrence tables for several weights and check the alpha = 2
//! discretized table against the closed form b_n = sqrt(n)/2.
//!
//! ```bash
//! cargo run --release --example recurrence_tables
//! ```

use freud_approx::orthopoly::{closed_form_recurrence, stieltjes_recurrence, FreudWeight};

fn main() -> freud_approx::Result<()> {
    let closed = closed_form_recurrence(2.0, 60)?;
    let st = stieltjes_recurrence(&FreudWeight::new(2.0)?, 60, 1e-11)?;
    let worst = closed
        .b()
        .iter()
        .zip(st.b())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("alpha = 2, N = 60: max |b_stieltjes - sqrt(n)/2| = {worst:.3e}");
    println!("mu0 closed = {:.15}, mu0 stieltjes = {:.15}", closed.mu0(), st.mu0());
    println!();

    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "n", "a=1.5", "a=2", "a=3", "a=4");
    let tables: Vec<_> = [1.5, 2.0, 3.0, 4.0]
        .iter()
        .map(|&alpha| {
            if alpha == 2.0 {
                closed_form_recurrence(2.0, 20)
            } else {
                stieltjes_recurrence(&FreudWeight::new(alpha).unwrap(), 20, 1e-10)
            }
        })
        .collect::<freud_approx::Result<_>>()?;
    for n in 1..=20 {
        print!("{n:>6}");
        for t in &tables {
            print!(" {:>12.8}", t.b()[n - 1]);
        }
        println!();
    }
    Ok(())
}
