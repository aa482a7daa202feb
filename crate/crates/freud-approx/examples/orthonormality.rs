//! Measure how close the Gram matrix of P_0..P_40 under a 400-node Gauss
//! rule is to the identity, for each test weight.
//!
//! ```bash
//! cargo run --release --example orthonormality
//! ```

use freud_approx::orthopoly::{closed_form_recurrence, stieltjes_recurrence, FreudWeight};

fn main() -> freud_approx::Result<()> {
    for &alpha in &[1.5, 2.0, 3.0, 4.0] {
        let table = if alpha == 2.0 {
            closed_form_recurrence(2.0, 400)?
        } else {
            stieltjes_recurrence(&FreudWeight::new(alpha)?, 400, 1e-10)?
        };
        let rule = table.gauss_freud(400)?;
        let n = 40usize;
        let mut worst = 0.0_f64;
        let mut gram = vec![vec![0.0_f64; n + 1]; n + 1];
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            if w == 0.0 {
                continue;
            }
            let p = table.eval_polys(x, n)?;
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
        println!("alpha = {alpha}: max |Gram - I| over P_0..P_40 = {worst:.3e}");
    }
    Ok(())
}
