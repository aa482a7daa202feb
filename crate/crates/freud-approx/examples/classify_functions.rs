//! Classify corpus members as rapidly approximable or not from the decay of
//! their Fourier coefficients at two truncation levels.
//!
//! Smooth gaussian-type functions (including the superexponentially growing
//! e^{x^2/2}) come out rapid; the kinked and discontinuous ones do not.
//!
//! ```bash
//! cargo run --release --example classify_functions
//! ```

use freud_approx::diagnostics::classify_rapid;
use freud_approx::expansion::{default_node_count, fourier_coefficients};
use freud_approx::functions::by_name;
use freud_approx::orthopoly::closed_form_recurrence;

fn main() -> freud_approx::Result<()> {
    let table = closed_form_recurrence(2.0, 400)?;
    println!(
        "{:<12} {:>12} {:>14} {:>14} {:>10}",
        "function", "verdict", "s_2(40)", "s_2(80)", "ratio"
    );
    for name in ["x3gauss", "gausshalf", "expx2half", "sin", "bump", "abs", "abs3", "sign"] {
        let f = by_name(name).expect("corpus");
        let coarse = fourier_coefficients(&f, &table, 40, default_node_count(40))?;
        let refined = fourier_coefficients(&f, &table, 80, default_node_count(80))?;
        let rep = classify_rapid(&coarse, &refined, 6)?;
        let row = &rep.rows[2];
        println!(
            "{:<12} {:>12} {:>14.6e} {:>14.6e} {:>10.4}",
            name,
            rep.verdict.to_string(),
            row.s_coarse,
            row.s_refined,
            row.s_refined / row.s_coarse
        );
    }
    Ok(())
}
