//! Guesswork analysis for multi-agent brute-force attacks with noisy side
//! information.
//!
//! A secret `n`-bit string is attacked by `m` agents, each holding an
//! independent observation of the secret through a binary erasure channel
//! (`BEC`, erasure probability ε) or a binary symmetric channel (`BSC`,
//! flip probability δ). Agents either pool their observations into one
//! guessing list (centralized) or each exhaust their own list until the
//! first hit (decentralized). The guess count `G` grows exponentially in
//! `n`; this crate computes its growth rates and its finite-`n` moments:
//!
//! - [`exponents`]: closed-form and optimizer-based growth rates of
//!   `E[G^α]` for every scheme/channel pair, plus redundant second routes
//!   (log-sum identities, single-letter conditional Rényi evaluation,
//!   variational duals) used as cross-checks.
//! - [`ranks`]: the exact 1-based position of the secret in each
//!   mechanism's canonical guessing list, computed combinatorially, and a
//!   brute-force posterior-sorting oracle to validate it.
//! - [`moments`]: exact finite-`n` values of `E[G^α]` by type-class
//!   summation or joint enumeration, seeded Monte Carlo estimation with
//!   bootstrap confidence intervals, and slope reports connecting
//!   finite-`n` data to the analytic rates.
//! - [`infomath`]: binary entropies, KL divergence, conditional Rényi
//!   entropy, and the concave maximizer on `[0, 1]` behind the rate
//!   optimizations.
//! - [`channels`]: channel/agent parameter types, bit strings, seeded
//!   per-trial sampling streams, the collapsed multi-observation BSC
//!   joint, and majority-vote preprocessing.
//! - [`verify`]: the self-check suite wired into the CLI.
//!
//! All logarithms are base 2; rates are in bits per symbol. Sampling is
//! fully deterministic given a seed: every trial draws from its own
//! counter-derived stream, so results do not depend on scheduling.
//!
//! ```
//! use guesswork::channels::{AgentCount, ChannelSpec};
//! use guesswork::exponents::{exponent, MomentOrder, SchemeSpec};
//!
//! // Two agents pooling erasure observations shrink the growth rate of
//! // the expected guess count to log2(1 + eps^2).
//! let channel = ChannelSpec::bec(0.5)?;
//! let scheme = SchemeSpec::centralized(AgentCount::new(2)?);
//! let rate = exponent(&scheme, &channel, MomentOrder::ONE)?;
//! assert!((rate.value - 1.25f64.log2()).abs() < 1e-9);
//! # Ok::<(), guesswork::Error>(())
//! ```

#![forbid(unsafe_code)]

use thiserror::Error;

pub mod channels;
pub mod exponents;
pub mod infomath;
pub mod moments;
pub mod ranks;
pub mod verify;

pub use channels::{AgentCount, BitString, ChannelSpec, ErasureMask, SideInfo};
pub use exponents::{ExponentMethod, ExponentResult, MomentOrder, SchemeMode, SchemeSpec};
pub use infomath::{JointPmf, Prob, RenyiOrder};
pub use moments::{MomentMethod, MomentRecord, SlopeReport};
pub use ranks::Rank;

/// Errors reported by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {0} is not in [0, 1]")]
    ProbabilityRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} {requested} exceeds the supported limit {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("objective is not finite at interior point {lambda}")]
    NonFiniteObjective { lambda: f64 },

    #[error("invalid joint pmf: {0}")]
    InvalidPmf(String),

    #[error("mismatched moment records: {0}")]
    RecordMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
