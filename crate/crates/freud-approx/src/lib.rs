//! Orthonormal polynomials, Gauss quadrature and approximation diagnostics
//! for the exponential weights e^{-2|x|^alpha} (alpha > 1) on the real line.
//!
//! The crate builds the recurrence table of the orthonormal system for the
//! weight (closed form at alpha = 2, discretized Stieltjes otherwise), turns
//! it into Gauss rules, expands functions in the system, and measures the
//! quantities the weighted approximation theory is about: best-approximation
//! distances, rapid-approximation seminorms, Markov derivative-norm ratios,
//! Jackson rates, coefficient-decay classification, and the alpha = 2
//! correspondence with Hermite expansions.
//!
//! Every capability has a runnable demo under `examples/`; the `freud-approx`
//! binary exposes the same operations as subcommands emitting CSV or JSON.

pub mod alpha2;
pub mod diagnostics;
pub mod error;
pub mod expansion;
pub mod functions;
pub mod orthopoly;
pub mod quadrature;
pub mod report;
pub(crate) mod util;

pub use error::{Error, Result};

use std::sync::OnceLock;

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

/// Shared thread pool for batch work. `FREUD_APPROX_THREADS` caps the
/// parallelism; unset or unparsable values fall back to the rayon default.
pub(crate) fn thread_pool() -> &'static rayon::ThreadPool {
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(k) = std::env::var("FREUD_APPROX_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&k| k >= 1)
        {
            builder = builder.num_threads(k);
        }
        builder.build().expect("rayon pool construction cannot fail")
    })
}
