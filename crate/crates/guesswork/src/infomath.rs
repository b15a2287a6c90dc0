//! Binary information measures and the 1-D concave maximizer used by the
//! rate optimizations.
//!
//! Everything here is base-2: entropies are in bits, the KL divergence is
//! in bits, and the maximizer's objectives are bit-valued rate functions.
//! Boundary conventions are total rather than errors: `0 log 0 = 0`, and a
//! divergent KL returns `f64::INFINITY` instead of failing, so degenerate
//! channel parameters (ε ∈ {0, 1}, δ ∈ {0, 1/2}) flow through the same
//! code paths as interior ones.

use crate::{Error, Result};

/// A probability-valued scalar, validated to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prob(f64);

impl Prob {
    pub const ZERO: Prob = Prob(0.0);
    pub const HALF: Prob = Prob(0.5);
    pub const ONE: Prob = Prob(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Prob(value))
        } else {
            Err(Error::ProbabilityRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Complement `1 - p`.
    pub fn complement(self) -> Prob {
        Prob(1.0 - self.0)
    }
}

/// Order of a Rényi entropy: a positive β ≠ 1, or the explicit Shannon
/// marker for the β → 1 limit.
///
/// The marker avoids evaluating `(1/(1-β)) log(...)` near β = 1, where the
/// closed form cancels catastrophically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenyiOrder {
    Shannon,
    Order(f64),
}

impl RenyiOrder {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Renyi order must be positive, got {beta}"
            )));
        }
        if beta == 1.0 {
            return Err(Error::InvalidParameter(
                "Renyi order 1 must use the explicit Shannon marker".into(),
            ));
        }
        Ok(RenyiOrder::Order(beta))
    }
}

/// `p log2 p` with the `0 log 0 = 0` convention.
fn xlog2x(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Binary Shannon entropy `H(p)` in bits. Symmetric in `p ↔ 1-p`.
pub fn binary_shannon_entropy(p: Prob) -> f64 {
    -xlog2x(p.value()) - xlog2x(1.0 - p.value())
}

/// Binary Rényi entropy `H_β(p)` in bits.
///
/// `(1/(1-β)) log2(p^β + (1-p)^β)` for β ≠ 1; the Shannon marker returns
/// `H(p)`. Continuous in β and non-increasing in β for fixed `p`.
pub fn binary_renyi_entropy(order: RenyiOrder, p: Prob) -> f64 {
    match order {
        RenyiOrder::Shannon => binary_shannon_entropy(p),
        RenyiOrder::Order(beta) => {
            let p = p.value();
            let q = 1.0 - p;
            if p == 0.0 || q == 0.0 {
                return 0.0;
            }
            (p.powf(beta) + q.powf(beta)).log2() / (1.0 - beta)
        }
    }
}

/// One term `p log2(p/q)` of the binary KL divergence, with the
/// conventions `0 log(0/q) = 0` and `p log(p/0) = +inf` for `p > 0`.
fn kl_term(p: f64, q: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else if q == 0.0 {
        f64::INFINITY
    } else {
        p * (p / q).log2()
    }
}

/// Binary KL divergence `D(p ‖ q)` in bits.
///
/// Divergent configurations (`p > 0, q = 0` or `p < 1, q = 1`) return
/// `f64::INFINITY` rather than failing.
pub fn binary_kl_divergence(p: Prob, q: Prob) -> f64 {
    kl_term(p.value(), q.value()) + kl_term(1.0 - p.value(), 1.0 - q.value())
}

/// `base^exp` for unsigned exponents: exact repeated squaring where the
/// exponent fits `i32`, falling back to `powf` beyond that rather than
/// letting the cast wrap.
pub(crate) fn pow_u32(base: f64, exp: u32) -> f64 {
    if exp <= i32::MAX as u32 {
        base.powi(exp as i32)
    } else {
        base.powf(exp as f64)
    }
}

/// Neumaier compensated accumulator. Keeps long sums of mixed-magnitude
/// terms accurate to a few ulps independent of term order.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// A joint pmf over finite alphabets, row-indexed by `x` and
/// column-indexed by `y`. Entries must be non-negative and sum to 1
/// within `1e-12`.
#[derive(Debug, Clone)]
pub struct JointPmf {
    nx: usize,
    ny: usize,
    p: Vec<f64>,
}

impl JointPmf {
    pub fn new(nx: usize, ny: usize, p: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || p.len() != nx * ny {
            return Err(Error::InvalidPmf(format!(
                "shape {nx}x{ny} does not match {} entries",
                p.len()
            )));
        }
        let mut sum = Kahan::default();
        for &v in &p {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidPmf(format!("entry {v} is not a probability")));
            }
            sum.add(v);
        }
        let total = sum.total();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPmf(format!("entries sum to {total}, not 1")));
        }
        Ok(JointPmf { nx, ny, p })
    }

    pub fn num_x(&self) -> usize {
        self.nx
    }

    pub fn num_y(&self) -> usize {
        self.ny
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.ny + y]
    }

    fn column(&self, y: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.nx).map(move |x| self.get(x, y))
    }
}

/// Conditional Rényi entropy `H_β(X|Y)` in bits:
/// `(β/(1-β)) log2( Σ_y ( Σ_x p(x,y)^β )^{1/β} )`.
///
/// The Shannon marker returns the conditional Shannon entropy `H(X|Y)`.
pub fn conditional_renyi_entropy(joint: &JointPmf, order: RenyiOrder) -> f64 {
    match order {
        RenyiOrder::Shannon => conditional_shannon_entropy(joint),
        RenyiOrder::Order(beta) => {
            let mut outer = Kahan::default();
            for y in 0..joint.num_y() {
                let mut inner = Kahan::default();
                for p in joint.column(y) {
                    if p > 0.0 {
                        inner.add(p.powf(beta));
                    }
                }
                let s = inner.total();
                if s > 0.0 {
                    outer.add(s.powf(1.0 / beta));
                }
            }
            beta / (1.0 - beta) * outer.total().log2()
        }
    }
}

/// Conditional Shannon entropy `H(X|Y)` in bits.
pub fn conditional_shannon_entropy(joint: &JointPmf) -> f64 {
    let mut acc = Kahan::default();
    for y in 0..joint.num_y() {
        let mut marginal = Kahan::default();
        for p in joint.column(y) {
            marginal.add(p);
        }
        let py = marginal.total();
        if py <= 0.0 {
            continue;
        }
        for p in joint.column(y) {
            if p > 0.0 {
                acc.add(p * (py.log2() - p.log2()));
            }
        }
    }
    acc.total()
}

/// Result of a 1-D maximization: the maximizer and the value there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub lambda: f64,
    pub value: f64,
}

/// Default tolerance on λ for [`maximize_concave_on_unit_interval`].
/// The objectives are smooth and cheap, so a tight tolerance costs little.
pub const DEFAULT_OPT_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximize a concave function on `[0, 1]` by golden-section search.
///
/// Returns λ* within `tol` of the true argmax and the objective value at
/// λ*. The boundary points λ ∈ {0, 1} are evaluated explicitly and may be
/// `-inf` (dominated); a non-finite value at an interior probe means the
/// caller's objective is broken and is reported as an error.
pub fn maximize_concave_on_unit_interval<F>(f: F, tol: f64) -> Result<Maximum>
where
    F: Fn(f64) -> f64,
{
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let eval_interior = |lambda: f64| -> Result<f64> {
        let v = f(lambda);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteObjective { lambda })
        }
    };

    let mut a = 0.0_f64;
    let mut b = 1.0_f64;
    let mut x1 = b - (b - a) * INV_PHI;
    let mut x2 = a + (b - a) * INV_PHI;
    let mut f1 = eval_interior(x1)?;
    let mut f2 = eval_interior(x2)?;
    // Interval shrinks by INV_PHI per step; 120 steps cover any tol >= 1e-25.
    for _ in 0..120 {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * INV_PHI;
            f1 = eval_interior(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * INV_PHI;
            f2 = eval_interior(x2)?;
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = Maximum {
        lambda: mid,
        value: eval_interior(mid)?,
    };

    for boundary in [0.0, 1.0] {
        let v = f(boundary);
        if v.is_nan() || v == f64::INFINITY {
            return Err(Error::NonFiniteObjective { lambda: boundary });
        }
        // -inf at a boundary is a dominated point, never the maximum.
        if v > best.value {
            best = Maximum {
                lambda: boundary,
                value: v,
            };
        }
    }
    Ok(best)
}
