//! Analytic guesswork exponents (bits per symbol) for every scheme and
//! channel pair, plus the concatenation rate and the α → 0 limit.
//!
//! Each optimizer-backed exponent also has a redundant second route — a
//! closed log-sum identity, a single-letter conditional Rényi evaluation,
//! or a variational dual — kept as cross-checks so the optimizer path is
//! always exercised and never trusted alone.

use crate::channels::{collapse_bsc, AgentCount, ChannelSpec};
use crate::infomath::{
    binary_kl_divergence, binary_renyi_entropy, binary_shannon_entropy,
    conditional_renyi_entropy, conditional_shannon_entropy, maximize_concave_on_unit_interval,
    pow_u32, Maximum, Prob, RenyiOrder, DEFAULT_OPT_TOL,
};
use crate::{Error, Result};

/// Largest moment order accepted; larger tilts are numerically
/// meaningless in 64-bit floats.
pub const MAX_MOMENT_ORDER: f64 = 64.0;

/// The moment order α > 0 of `E[G^α]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOrder(f64);

impl MomentOrder {
    pub const ONE: MomentOrder = MomentOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > MAX_MOMENT_ORDER {
            return Err(Error::InvalidParameter(format!(
                "moment order must lie in (0, {MAX_MOMENT_ORDER}], got {alpha}"
            )));
        }
        Ok(MomentOrder(alpha))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// The Rényi order 1/(1+α) that governs single-list guesswork.
    pub fn renyi_order(self) -> RenyiOrder {
        RenyiOrder::new(1.0 / (1.0 + self.0)).expect("alpha > 0 gives order in (0, 1)")
    }
}

/// Attack scheme: one agent, or `m` agents pooling observations
/// (centralized), or `m` agents guessing independently (decentralized).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeMode {
    Single,
    Centralized,
    Decentralized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeSpec {
    mode: SchemeMode,
    m: AgentCount,
}

impl SchemeSpec {
    pub fn single() -> Self {
        SchemeSpec {
            mode: SchemeMode::Single,
            m: AgentCount::ONE,
        }
    }

    pub fn centralized(m: AgentCount) -> Self {
        SchemeSpec {
            mode: SchemeMode::Centralized,
            m,
        }
    }

    pub fn decentralized(m: AgentCount) -> Self {
        SchemeSpec {
            mode: SchemeMode::Decentralized,
            m,
        }
    }

    pub fn mode(&self) -> SchemeMode {
        self.mode
    }

    pub fn agents(&self) -> AgentCount {
        self.m
    }

    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            SchemeMode::Single => "single",
            SchemeMode::Centralized => "centralized",
            SchemeMode::Decentralized => "decentralized",
        }
    }
}

/// How an exponent value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentMethod {
    ClosedForm,
    Optimizer,
    SingleLetter,
}

impl ExponentMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ExponentMethod::ClosedForm => "closed_form",
            ExponentMethod::Optimizer => "optimizer",
            ExponentMethod::SingleLetter => "single_letter",
        }
    }
}

/// An exponent in bits per symbol with optimizer diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentResult {
    pub value: f64,
    pub lambda_star: Option<f64>,
    pub method: ExponentMethod,
}

impl ExponentResult {
    fn closed(value: f64) -> Self {
        ExponentResult {
            value,
            lambda_star: None,
            method: ExponentMethod::ClosedForm,
        }
    }

    fn optimized(m: Maximum) -> Self {
        ExponentResult {
            value: m.value,
            lambda_star: Some(m.lambda),
            method: ExponentMethod::Optimizer,
        }
    }
}

fn require_flip_prob(delta: Prob) -> Result<()> {
    if delta.value() > 0.5 {
        return Err(Error::InvalidParameter(format!(
            "flip probability must be <= 1/2, got {}",
            delta.value()
        )));
    }
    Ok(())
}

/// `sup_λ [ λ c1 + (1-λ) c0 - scale · D(λ ‖ a) ]`, solved by the concave
/// maximizer.
///
/// A degenerate reference `a ∈ {0, 1}` pins λ to the boundary where the
/// divergence vanishes; the supremum is the objective there.
fn sup_tilted(c1: f64, c0: f64, scale: f64, a: Prob) -> Result<Maximum> {
    if a.value() == 0.0 {
        return Ok(Maximum {
            lambda: 0.0,
            value: c0,
        });
    }
    if a.value() == 1.0 {
        return Ok(Maximum {
            lambda: 1.0,
            value: c1,
        });
    }
    let f = |l: f64| {
        let lp = Prob::new(l).expect("optimizer stays in [0,1]");
        l * c1 + (1.0 - l) * c0 - scale * binary_kl_divergence(lp, a)
    };
    maximize_concave_on_unit_interval(f, DEFAULT_OPT_TOL)
}

/// Closed log-sum value of the tilted supremum
/// `sup_λ [ λ c1 + (1-λ) c0 - scale · D(λ ‖ a) ]`:
/// `scale · log2( a · 2^{c1/scale} + (1-a) · 2^{c0/scale} )`.
///
/// Used as a redundant cross-check of the optimizer-backed exponents,
/// never as their implementation.
pub fn tilted_log_sum(c1: f64, c0: f64, scale: f64, a: Prob) -> f64 {
    let a = a.value();
    scale * (a * (c1 / scale).exp2() + (1.0 - a) * (c0 / scale).exp2()).log2()
}

/// Exponent of `E[G^α]` for one agent with flip side information:
/// `α H_{1/(1+α)}(δ)`.
pub fn single_bsc(alpha: MomentOrder, delta: Prob) -> Result<ExponentResult> {
    require_flip_prob(delta)?;
    Ok(ExponentResult::closed(
        alpha.get() * binary_renyi_entropy(alpha.renyi_order(), delta),
    ))
}

/// Exponent for one agent with erasure side information:
/// `sup_λ ( αλ - D(λ ‖ ε) )`, the rate of guessing the erased
/// subsequence. Equals `log2(ε 2^α + 1 - ε)`.
pub fn single_bec(alpha: MomentOrder, eps: Prob) -> Result<ExponentResult> {
    Ok(ExponentResult::optimized(sup_tilted(
        alpha.get(),
        0.0,
        1.0,
        eps,
    )?))
}

/// Centralized exponent for `m` erasure observations. Pooling erases a
/// position only when every agent did, so the reference becomes `ε^m`:
/// `max_λ ( αλ - D(λ ‖ ε^m) )`; at α = 1 this is `log2(1 + ε^m)`.
pub fn centralized_bec(alpha: MomentOrder, eps: Prob, m: AgentCount) -> Result<ExponentResult> {
    let pooled = Prob::new(pow_u32(eps.value(), m.get()))?;
    Ok(ExponentResult::optimized(sup_tilted(
        alpha.get(),
        0.0,
        1.0,
        pooled,
    )?))
}

/// Decentralized exponent for `m` erasure observations: the attack is
/// carried by the agent with the fewest erasures, so the deviation cost
/// scales with `m`: `sup_λ ( αλ - m D(λ ‖ ε) )`. An interior maximizer
/// satisfies `λ*/(1-λ*) = (ε/(1-ε)) 2^{α/m}`.
pub fn decentralized_bec(alpha: MomentOrder, eps: Prob, m: AgentCount) -> Result<ExponentResult> {
    Ok(ExponentResult::optimized(sup_tilted(
        alpha.get(),
        0.0,
        m.get() as f64,
        eps,
    )?))
}

/// The quieter flip probability seen on positions where two flip
/// observations agree: `δ² / (1 - 2δ(1-δ))`.
fn agreed_flip_prob(delta: Prob) -> Prob {
    let d = delta.value();
    if d == 0.0 {
        return Prob::ZERO;
    }
    Prob::new(d * d / (1.0 - 2.0 * d * (1.0 - d))).expect("in [0, 1/2] for d <= 1/2")
}

/// Centralized exponent for two flip observations.
///
/// Coordinates split into agreement positions (a flip channel with the
/// reduced parameter `δ̃ = δ²/(1-2δ(1-δ))` around the agreed value) and
/// disagreement positions (erasure-like, uniform). With λ the
/// disagreement fraction:
/// `sup_λ ( αλ + α(1-λ) H_{1/(1+α)}(δ̃) - D(λ ‖ 2δ(1-δ)) )`.
/// At α = 1 this equals `log2(4δ(1-δ) + 1)`.
pub fn centralized_bsc2(alpha: MomentOrder, delta: Prob) -> Result<ExponentResult> {
    require_flip_prob(delta)?;
    let disagree = Prob::new(2.0 * delta.value() * (1.0 - delta.value()))?;
    let quiet_rate =
        alpha.get() * binary_renyi_entropy(alpha.renyi_order(), agreed_flip_prob(delta));
    Ok(ExponentResult::optimized(sup_tilted(
        alpha.get(),
        quiet_rate,
        1.0,
        disagree,
    )?))
}

/// Log-sum cross-check value for [`centralized_bsc2`].
pub fn centralized_bsc2_log_sum(alpha: MomentOrder, delta: Prob) -> Result<f64> {
    require_flip_prob(delta)?;
    let disagree = Prob::new(2.0 * delta.value() * (1.0 - delta.value()))?;
    let quiet_rate =
        alpha.get() * binary_renyi_entropy(alpha.renyi_order(), agreed_flip_prob(delta));
    Ok(tilted_log_sum(alpha.get(), quiet_rate, 1.0, disagree))
}

/// Centralized exponent for `m` flip observations by direct single-letter
/// evaluation: `α H_{1/(1+α)}(X | Y_1..Y_m)` over the collapsed joint.
/// Exact for every `m` the collapse supports.
pub fn centralized_bsc_generic(
    alpha: MomentOrder,
    delta: Prob,
    m: AgentCount,
) -> Result<ExponentResult> {
    require_flip_prob(delta)?;
    let joint = collapse_bsc(delta, m)?;
    Ok(ExponentResult {
        value: alpha.get() * conditional_renyi_entropy(&joint, alpha.renyi_order()),
        lambda_star: None,
        method: ExponentMethod::SingleLetter,
    })
}

/// Decentralized exponent for `m` flip observations:
/// `α H_{m/(α+m)}(δ)`. The flip patterns are independent across agents,
/// so the minimum guesswork tilts the Rényi order toward 1 as `m` grows.
pub fn decentralized_bsc(alpha: MomentOrder, delta: Prob, m: AgentCount) -> Result<ExponentResult> {
    require_flip_prob(delta)?;
    let order = RenyiOrder::new(m.get() as f64 / (alpha.get() + m.get() as f64))?;
    Ok(ExponentResult::closed(
        alpha.get() * binary_renyi_entropy(order, delta),
    ))
}

/// Variational dual of [`decentralized_bsc`]:
/// `sup_λ ( α H(λ) - f(λ, m) )` with `f = m D(λ‖δ)` above δ (all agents
/// must deviate to a heavier flip type) and `f = D(λ‖δ)` at or below δ
/// (one agent suffices). `2^{n H(λ)}` is the size of the type-λ guessing
/// ball; for α > 0 the maximizer always lands strictly above δ.
pub fn decentralized_bsc_variational(
    alpha: MomentOrder,
    delta: Prob,
    m: AgentCount,
) -> Result<Maximum> {
    require_flip_prob(delta)?;
    let d = delta.value();
    if d == 0.0 {
        // Positive-weight types cost infinitely; only λ = 0 remains.
        return Ok(Maximum {
            lambda: 0.0,
            value: 0.0,
        });
    }
    let scale_above = m.get() as f64;
    let f = |l: f64| {
        let lp = Prob::new(l).expect("optimizer stays in [0,1]");
        let scale = if l > d { scale_above } else { 1.0 };
        alpha.get() * binary_shannon_entropy(lp) - scale * binary_kl_divergence(lp, delta)
    };
    maximize_concave_on_unit_interval(f, DEFAULT_OPT_TOL)
}

/// Exponent of a string formed by concatenating a uniform part (fraction
/// λ) with a Bernoulli(p) part: `λα + (1-λ) α H_{1/(1+α)}(p)`.
pub fn concat_exponent(alpha: MomentOrder, lambda: Prob, p: Prob) -> Result<f64> {
    require_flip_prob(p)?;
    let l = lambda.value();
    Ok(l * alpha.get() + (1.0 - l) * alpha.get() * binary_renyi_entropy(alpha.renyi_order(), p))
}

/// Exponent of `E[G^α]` for the scheme/channel pair.
pub fn exponent(
    scheme: &SchemeSpec,
    channel: &ChannelSpec,
    alpha: MomentOrder,
) -> Result<ExponentResult> {
    let m = scheme.agents();
    match (scheme.mode(), channel) {
        (SchemeMode::Single, ChannelSpec::Bec { eps }) => single_bec(alpha, *eps),
        (SchemeMode::Single, ChannelSpec::Bsc { delta }) => single_bsc(alpha, *delta),
        (SchemeMode::Centralized, ChannelSpec::Bec { eps }) => centralized_bec(alpha, *eps, m),
        (SchemeMode::Centralized, ChannelSpec::Bsc { delta }) => {
            centralized_bsc_generic(alpha, *delta, m)
        }
        (SchemeMode::Decentralized, ChannelSpec::Bec { eps }) => decentralized_bec(alpha, *eps, m),
        (SchemeMode::Decentralized, ChannelSpec::Bsc { delta }) => {
            decentralized_bsc(alpha, *delta, m)
        }
    }
}

/// The α → 0 rate `lim E_α / α`, i.e. the growth rate of `E[log G]`.
///
/// Closed β → 1 limits: the conditional Shannon entropy of the effective
/// observation for single and centralized schemes (ε, `ε^m`, or the
/// collapsed joint's `H(X|Y')`), and the plain Shannon entropy `H(δ)` or
/// `ε` for decentralized schemes, whose order `m/(α+m) → 1`.
pub fn expected_log_guesswork_rate(scheme: &SchemeSpec, channel: &ChannelSpec) -> Result<f64> {
    let m = scheme.agents();
    match (scheme.mode(), channel) {
        (SchemeMode::Single, ChannelSpec::Bec { eps })
        | (SchemeMode::Decentralized, ChannelSpec::Bec { eps }) => Ok(eps.value()),
        (SchemeMode::Single, ChannelSpec::Bsc { delta })
        | (SchemeMode::Decentralized, ChannelSpec::Bsc { delta }) => {
            require_flip_prob(*delta)?;
            Ok(binary_shannon_entropy(*delta))
        }
        (SchemeMode::Centralized, ChannelSpec::Bec { eps }) => {
            Ok(pow_u32(eps.value(), m.get()))
        }
        (SchemeMode::Centralized, ChannelSpec::Bsc { delta }) => {
            require_flip_prob(*delta)?;
            let joint = collapse_bsc(*delta, m)?;
            Ok(conditional_shannon_entropy(&joint))
        }
    }
}

/// Numeric small-α estimate of the α → 0 rate with one Richardson
/// extrapolation step: with `g(α) = E_α/α`, returns `2 g(α/2) - g(α)`,
/// cancelling the O(α) term. Cross-checks [`expected_log_guesswork_rate`].
pub fn numeric_log_guesswork_rate(
    scheme: &SchemeSpec,
    channel: &ChannelSpec,
    alpha0: f64,
) -> Result<f64> {
    let g = |a: f64| -> Result<f64> {
        Ok(exponent(scheme, channel, MomentOrder::new(a)?)?.value / a)
    };
    Ok(2.0 * g(alpha0 / 2.0)? - g(alpha0)?)
}
