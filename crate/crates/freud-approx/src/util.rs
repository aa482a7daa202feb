//! Small numerical helpers.

/// Compensated (Kahan/Neumaier) accumulator. Used for every moment and
/// inner-product sum so that accumulation error stays near one ulp of the
/// result instead of growing with the term count.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for t in iter {
            acc.add(t);
        }
        acc
    }
}

/// Compensated sum of an iterator of terms.
pub fn ksum(iter: impl IntoIterator<Item = f64>) -> f64 {
    iter.into_iter().collect::<KahanSum>().value()
}

/// Least-squares slope of y against x.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = ksum(x.iter().copied()) / n;
    let my = ksum(y.iter().copied()) / n;
    let sxy = ksum(x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)));
    let sxx = ksum(x.iter().map(|&a| (a - mx) * (a - mx)));
    sxy / sxx
}

/// Format a float with 17 significant digits, enough for a bit-exact
/// round-trip through decimal.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}
