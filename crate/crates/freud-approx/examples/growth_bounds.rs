//! Pointwise growth evidence: the ratio |f(x)| e^{-|x|^alpha} over a grid.
//! Members of the rapidly approximable class stay bounded this way.
//!
//! ```bash
//! cargo run --release --example growth_bounds
//! ```

use freud_approx::diagnostics::growth_bound_check;
use freud_approx::functions::by_name;

fn main() {
    let grid: Vec<f64> = (-240..=240).map(|i| i as f64 * 0.025).collect();
    for (name, alpha) in [("x0", 2.0), ("expx2half", 2.0), ("x3gauss", 2.0), ("sin", 1.5)] {
        let f = by_name(name).expect("corpus");
        let rep = growth_bound_check(&f, alpha, &grid);
        println!(
            "{name:<10} alpha = {alpha}: c_obs = {:.6} at x = {:+.3}",
            rep.c_obs, rep.argmax_x
        );
    }
}
