//! Test-function corpus: named functions with exact closed-form derivatives
//! and decay-class metadata. Derivatives are always hand-coded; finite
//! differences exist only as a test oracle, so weighted norms of derivatives
//! never inherit differentiation error.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Decay/smoothness class of a corpus member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    Polynomial,
    /// Entire with all derivatives bounded on the line (sin, cos).
    EntireBoundedDerivs,
    Schwartz,
    /// Of the form g * e^{x^2} with g Schwartz.
    SchwartzLift,
    CompactSupport,
    /// C^k but not C^{k+1}.
    FiniteSmoothness(u32),
    Discontinuous,
    SuperexpGrowth,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::Polynomial => write!(f, "polynomial"),
            ClassTag::EntireBoundedDerivs => write!(f, "entire_bounded_derivs"),
            ClassTag::Schwartz => write!(f, "schwartz"),
            ClassTag::SchwartzLift => write!(f, "schwartz_lift"),
            ClassTag::CompactSupport => write!(f, "compact_support"),
            ClassTag::FiniteSmoothness(k) => write!(f, "finite_smoothness({k})"),
            ClassTag::Discontinuous => write!(f, "discontinuous"),
            ClassTag::SuperexpGrowth => write!(f, "superexp_growth"),
        }
    }
}

/// For which alpha the function lies in L2(e^{-2|x|^alpha} dx) with all its
/// tagged derivatives.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaCompat {
    AllAlpha,
    Exactly(f64),
}

impl AlphaCompat {
    pub fn accepts(&self, alpha: f64) -> bool {
        match *self {
            AlphaCompat::AllAlpha => alpha > 1.0,
            AlphaCompat::Exactly(a) => alpha == a,
        }
    }
}

impl fmt::Display for AlphaCompat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaCompat::AllAlpha => write!(f, "alpha > 1"),
            AlphaCompat::Exactly(a) => write!(f, "alpha = {a}"),
        }
    }
}

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type DerivFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// A named test function with exact derivative evaluators.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    eval: EvalFn,
    deriv: DerivFn,
    /// Highest derivative order available; `None` means every order.
    max_order: Option<usize>,
    tags: BTreeSet<ClassTag>,
    compat: AlphaCompat,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("max_order", &self.max_order)
            .field("tags", &self.tags)
            .field("compat", &self.compat)
            .finish()
    }
}

impl FunctionSpec {
    pub fn new(
        name: impl Into<String>,
        eval: EvalFn,
        deriv: DerivFn,
        max_order: Option<usize>,
        tags: impl IntoIterator<Item = ClassTag>,
        compat: AlphaCompat,
    ) -> Self {
        Self {
            name: name.into(),
            eval,
            deriv,
            max_order,
            tags: tags.into_iter().collect(),
            compat,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// j-th derivative at x; j = 0 is exactly `eval`.
    pub fn deriv(&self, j: usize, x: f64) -> Result<f64> {
        if let Some(max) = self.max_order {
            if j > max {
                return Err(Error::invalid(format!(
                    "{} provides derivatives only up to order {max}, requested {j}",
                    self.name
                )));
            }
        }
        Ok(if j == 0 { self.eval(x) } else { (self.deriv)(j, x) })
    }

    pub fn max_order(&self) -> Option<usize> {
        self.max_order
    }

    pub fn tags(&self) -> &BTreeSet<ClassTag> {
        &self.tags
    }

    pub fn has_tag(&self, tag: ClassTag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn compat(&self) -> AlphaCompat {
        self.compat
    }

    /// A function is quadratured through the Gauss rule only if it is smooth
    /// on the whole line; a kink or jump at the origin needs the
    /// split-at-origin composite rule to converge.
    pub fn needs_split_quadrature(&self) -> bool {
        self.tags.iter().any(|t| {
            matches!(
                t,
                ClassTag::FiniteSmoothness(_) | ClassTag::Discontinuous | ClassTag::CompactSupport
            )
        })
    }

    /// Dilation x -> f(r x), with chain-rule derivatives r^j f^{(j)}(r x).
    pub fn dilate(&self, r: f64) -> FunctionSpec {
        let f = self.clone();
        let g = self.clone();
        FunctionSpec {
            name: format!("dilate({},{r})", self.name),
            eval: Arc::new(move |x| f.eval(r * x)),
            deriv: Arc::new(move |j, x| r.powi(j as i32) * (g.deriv)(j, r * x)),
            max_order: self.max_order,
            tags: self.tags.clone(),
            compat: self.compat,
        }
    }

    /// The r-th derivative as a function of its own. Smoothness tags are
    /// kept: the troublesome point of a kinked function stays at the origin.
    pub fn derivative(&self, r: usize) -> Result<FunctionSpec> {
        if let Some(max) = self.max_order {
            if r > max {
                return Err(Error::invalid(format!(
                    "{} provides derivatives only up to order {max}, requested {r}",
                    self.name
                )));
            }
        }
        if r == 0 {
            return Ok(self.clone());
        }
        let f = self.clone();
        let g = self.clone();
        Ok(FunctionSpec {
            name: format!("d{r}({})", self.name),
            eval: Arc::new(move |x| (f.deriv)(r, x)),
            deriv: Arc::new(move |j, x| (g.deriv)(r + j, x)),
            max_order: self.max_order.map(|m| m - r),
            tags: self.tags.clone(),
            compat: self.compat,
        })
    }

    /// Pointwise scaling c * f.
    pub fn scale(&self, c: f64) -> FunctionSpec {
        let f = self.clone();
        let g = self.clone();
        FunctionSpec {
            name: format!("scale({},{c})", self.name),
            eval: Arc::new(move |x| c * f.eval(x)),
            deriv: Arc::new(move |j, x| c * (g.deriv)(j, x)),
            max_order: self.max_order,
            tags: self.tags.clone(),
            compat: self.compat,
        }
    }
}

/// Dense polynomial with ascending coefficients; just enough arithmetic for
/// exact derivative bookkeeping of the gaussian and e^{x^2} families.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// self + c * x * other
    fn add_x_scaled(&self, other: &Poly, c: f64) -> Poly {
        let mut out = vec![0.0; self.0.len().max(other.0.len() + 1)];
        for (i, &v) in self.0.iter().enumerate() {
            out[i] += v;
        }
        for (i, &v) in other.0.iter().enumerate() {
            out[i + 1] += c * v;
        }
        Poly(out)
    }
}

/// Coefficient polynomials A_j with d^j/dx^j [A_0 e^{g x^2}] = A_j e^{g x^2}:
/// A_{j+1} = A_j' + 2 g x A_j.
pub(crate) fn gaussian_deriv_poly(a0: Poly, g: f64, j: usize) -> Poly {
    let mut a = a0;
    for _ in 0..j {
        a = a.derivative().add_x_scaled(&a, 2.0 * g);
    }
    a
}

/// x^k e^{g x^2} with exact derivatives for every order.
fn gaussian_family(
    name: &str,
    k: usize,
    g: f64,
    tags: impl IntoIterator<Item = ClassTag>,
    compat: AlphaCompat,
) -> FunctionSpec {
    let mut c0 = vec![0.0; k + 1];
    c0[k] = 1.0;
    let a0 = Poly(c0);
    let a0d = a0.clone();
    FunctionSpec::new(
        name,
        Arc::new(move |x| a0.eval(x) * (g * x * x).exp()),
        Arc::new(move |j, x| gaussian_deriv_poly(a0d.clone(), g, j).eval(x) * (g * x * x).exp()),
        None,
        tags,
        compat,
    )
}

fn monomial(d: usize) -> FunctionSpec {
    FunctionSpec::new(
        format!("x{d}"),
        Arc::new(move |x| x.powi(d as i32)),
        Arc::new(move |j, x| {
            if j > d {
                return 0.0;
            }
            // falling factorial d (d-1) ... (d-j+1)
            let mut c = 1.0;
            for i in 0..j {
                c *= (d - i) as f64;
            }
            c * x.powi((d - j) as i32)
        }),
        None,
        [ClassTag::Polynomial],
        AlphaCompat::AllAlpha,
    )
}

fn sin_spec() -> FunctionSpec {
    FunctionSpec::new(
        "sin",
        Arc::new(f64::sin),
        Arc::new(|j, x| match j % 4 {
            0 => x.sin(),
            1 => x.cos(),
            2 => -x.sin(),
            _ => -x.cos(),
        }),
        None,
        [ClassTag::EntireBoundedDerivs],
        AlphaCompat::AllAlpha,
    )
}

fn cos_spec() -> FunctionSpec {
    FunctionSpec::new(
        "cos",
        Arc::new(f64::cos),
        Arc::new(|j, x| match j % 4 {
            0 => x.cos(),
            1 => -x.sin(),
            2 => -x.cos(),
            _ => x.sin(),
        }),
        None,
        [ClassTag::EntireBoundedDerivs],
        AlphaCompat::AllAlpha,
    )
}

/// e^{-1/(1-x^2)} inside (-1, 1), zero outside. Derivative formulas are
/// f * p_j(x)/(1-x^2)^{2j}, hand-derived through order 4.
fn bump_spec() -> FunctionSpec {
    fn bump(x: f64) -> f64 {
        if x.abs() < 1.0 {
            (-1.0 / (1.0 - x * x)).exp()
        } else {
            0.0
        }
    }
    FunctionSpec::new(
        "bump",
        Arc::new(bump),
        Arc::new(|j, x| {
            if x.abs() >= 1.0 {
                return 0.0;
            }
            let u = 1.0 - x * x;
            let f = bump(x);
            match j {
                1 => f * (-2.0 * x) / u.powi(2),
                2 => f * (6.0 * x.powi(4) - 2.0) / u.powi(4),
                3 => {
                    f * (-24.0 * x.powi(7) - 12.0 * x.powi(5) + 40.0 * x.powi(3) - 12.0 * x)
                        / u.powi(6)
                }
                4 => {
                    f * (120.0 * x.powi(10) + 180.0 * x.powi(8) - 528.0 * x.powi(6)
                        + 232.0 * x.powi(4)
                        + 24.0 * x.powi(2)
                        - 12.0)
                        / u.powi(8)
                }
                _ => unreachable!("max_order is 4"),
            }
        }),
        Some(4),
        [ClassTag::CompactSupport],
        AlphaCompat::AllAlpha,
    )
}

fn abs_spec() -> FunctionSpec {
    FunctionSpec::new(
        "abs",
        Arc::new(f64::abs),
        Arc::new(|_, x| sign(x)),
        Some(1),
        [ClassTag::FiniteSmoothness(0)],
        AlphaCompat::AllAlpha,
    )
}

fn abs3_spec() -> FunctionSpec {
    FunctionSpec::new(
        "abs3",
        Arc::new(|x: f64| x.abs().powi(3)),
        Arc::new(|j, x| match j {
            1 => 3.0 * x * x.abs(),
            2 => 6.0 * x.abs(),
            _ => 6.0 * sign(x),
        }),
        Some(3),
        [ClassTag::FiniteSmoothness(2)],
        AlphaCompat::AllAlpha,
    )
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn sign_spec() -> FunctionSpec {
    FunctionSpec::new(
        "sign",
        Arc::new(sign),
        Arc::new(|_, _| 0.0),
        Some(0),
        [ClassTag::Discontinuous],
        AlphaCompat::AllAlpha,
    )
}

/// The full corpus. Names are stable and usable from the command line.
pub fn corpus() -> Vec<FunctionSpec> {
    let mut v = Vec::new();
    for d in 0..=8 {
        v.push(monomial(d));
    }
    v.push(sin_spec());
    v.push(cos_spec());
    v.push(bump_spec());
    v.push(abs_spec());
    v.push(abs3_spec());
    v.push(sign_spec());
    // Superexponential growth control; only integrable against e^{-2x^2}.
    v.push(gaussian_family(
        "expx2half",
        0,
        0.5,
        [ClassTag::SuperexpGrowth],
        AlphaCompat::Exactly(2.0),
    ));
    // Schwartz family x^k e^{-beta x^2}, beta > 1.
    v.push(gaussian_family(
        "x3gauss3",
        3,
        -3.0,
        [ClassTag::Schwartz],
        AlphaCompat::AllAlpha,
    ));
    v.push(gaussian_family(
        "gauss3half",
        0,
        -1.5,
        [ClassTag::Schwartz],
        AlphaCompat::AllAlpha,
    ));
    v.push(gaussian_family(
        "x1gauss2",
        1,
        -2.0,
        [ClassTag::Schwartz],
        AlphaCompat::AllAlpha,
    ));
    // Their lifts g e^{x^2}: still gaussian-type, one unit less decay.
    v.push(gaussian_family(
        "x3gauss",
        3,
        -2.0,
        [ClassTag::Schwartz, ClassTag::SchwartzLift],
        AlphaCompat::AllAlpha,
    ));
    v.push(gaussian_family(
        "gausshalf",
        0,
        -0.5,
        [ClassTag::Schwartz, ClassTag::SchwartzLift],
        AlphaCompat::AllAlpha,
    ));
    v.push(gaussian_family(
        "x1gauss1",
        1,
        -1.0,
        [ClassTag::Schwartz, ClassTag::SchwartzLift],
        AlphaCompat::AllAlpha,
    ));
    v
}

/// Look a corpus member up by name.
pub fn by_name(name: &str) -> Option<FunctionSpec> {
    corpus().into_iter().find(|f| f.name() == name)
}
