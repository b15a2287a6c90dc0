//! Side-information channel models: parameter types, packed bit strings,
//! per-symbol sampling on named deterministic streams, the collapsed
//! multi-observation BSC joint, and majority-vote preprocessing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::infomath::{JointPmf, Prob};
use crate::{Error, Result};

/// Observations per secret bit that [`collapse_bsc`] will expand into an
/// explicit joint (output alphabet `2^m`).
pub const MAX_COLLAPSE_AGENTS: u32 = 24;

/// A side-information channel: erasures with probability ε, or bit flips
/// with probability δ. Flip probabilities are restricted to δ ≤ 1/2 so
/// that fewer flips always means a more likely noise pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    Bec { eps: Prob },
    Bsc { delta: Prob },
}

impl ChannelSpec {
    pub fn bec(eps: f64) -> Result<Self> {
        Ok(ChannelSpec::Bec { eps: Prob::new(eps)? })
    }

    pub fn bsc(delta: f64) -> Result<Self> {
        let delta = Prob::new(delta)?;
        if delta.value() > 0.5 {
            return Err(Error::InvalidParameter(format!(
                "BSC flip probability must be <= 1/2, got {}",
                delta.value()
            )));
        }
        Ok(ChannelSpec::Bsc { delta })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ChannelSpec::Bec { .. } => "bec",
            ChannelSpec::Bsc { .. } => "bsc",
        }
    }

    pub fn param(&self) -> f64 {
        match self {
            ChannelSpec::Bec { eps } => eps.value(),
            ChannelSpec::Bsc { delta } => delta.value(),
        }
    }
}

/// Number of attacking agents. Fixed independently of the string length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentCount(u32);

impl AgentCount {
    pub const ONE: AgentCount = AgentCount(1);

    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("agent count must be >= 1".into()));
        }
        Ok(AgentCount(m))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// A fixed-length binary word of up to 63 bits, packed into a `u64`.
///
/// Position 0 is the most significant bit, so the packed value orders
/// strings lexicographically and `value()` enumerates `{0,1}^n` in
/// lexicographic order as `0..2^n`. The length cap keeps every rank in
/// `[1, 2^63]` within exact integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitString {
    len: u8,
    bits: u64,
}

impl BitString {
    pub const MAX_LEN: u32 = 63;

    pub fn new(len: u32, bits: u64) -> Result<Self> {
        if len == 0 || len > Self::MAX_LEN {
            return Err(Error::Capacity {
                what: "bit string length",
                requested: len as u64,
                limit: Self::MAX_LEN as u64,
            });
        }
        if bits >> len != 0 {
            return Err(Error::InvalidParameter(format!(
                "bits {bits:#x} exceed length {len}"
            )));
        }
        Ok(BitString { len: len as u8, bits })
    }

    pub fn zero(len: u32) -> Result<Self> {
        Self::new(len, 0)
    }

    pub fn random<R: Rng + ?Sized>(len: u32, rng: &mut R) -> Result<Self> {
        let bits = rng.next_u64() & Self::mask_for(len)?;
        Self::new(len, bits)
    }

    fn mask_for(len: u32) -> Result<u64> {
        if len == 0 || len > Self::MAX_LEN {
            return Err(Error::Capacity {
                what: "bit string length",
                requested: len as u64,
                limit: Self::MAX_LEN as u64,
            });
        }
        Ok((1u64 << len) - 1)
    }

    pub fn len(&self) -> u32 {
        self.len as u32
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Packed value; equals the lexicographic index of the string.
    pub fn value(&self) -> u64 {
        self.bits
    }

    /// Bit at `position`, counting position 0 as most significant.
    pub fn bit(&self, position: u32) -> bool {
        debug_assert!(position < self.len());
        (self.bits >> (self.len() - 1 - position)) & 1 == 1
    }

    /// Hamming weight.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len, other.len, "bit string lengths differ");
        BitString {
            len: self.len,
            bits: self.bits ^ other.bits,
        }
    }
}

/// A set of erased positions within an `n`-bit string, packed like
/// [`BitString`] (position 0 at the most significant bit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ErasureMask {
    len: u8,
    mask: u64,
}

impl ErasureMask {
    pub fn new(len: u32, mask: u64) -> Result<Self> {
        if len == 0 || len > BitString::MAX_LEN {
            return Err(Error::Capacity {
                what: "erasure mask length",
                requested: len as u64,
                limit: BitString::MAX_LEN as u64,
            });
        }
        if mask >> len != 0 {
            return Err(Error::InvalidParameter(format!(
                "mask {mask:#x} exceeds length {len}"
            )));
        }
        Ok(ErasureMask { len: len as u8, mask })
    }

    pub fn empty(len: u32) -> Result<Self> {
        Self::new(len, 0)
    }

    pub fn full(len: u32) -> Result<Self> {
        Ok(ErasureMask {
            len: Self::new(len, 0)?.len,
            mask: (1u64 << len) - 1,
        })
    }

    pub fn len(&self) -> u32 {
        self.len as u32
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Packed mask bits (position 0 at the most significant bit).
    pub fn bits(&self) -> u64 {
        self.mask
    }

    /// Number of erased positions.
    pub fn count(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn contains(&self, position: u32) -> bool {
        debug_assert!(position < self.len());
        (self.mask >> (self.len() - 1 - position)) & 1 == 1
    }

    /// Positions erased in both masks. A pooled observation of several
    /// erasure channels reveals a bit unless every observation erased it.
    pub fn intersect(&self, other: &ErasureMask) -> ErasureMask {
        assert_eq!(self.len, other.len, "mask lengths differ");
        ErasureMask {
            len: self.len,
            mask: self.mask & other.mask,
        }
    }
}

/// One agent's observation of the secret string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideInfo {
    /// Erasure observation: the erased set plus the revealed bits, which
    /// are zero on erased positions by construction.
    Bec {
        mask: ErasureMask,
        revealed: BitString,
    },
    /// Flip observation.
    Bsc { observed: BitString },
}

impl SideInfo {
    pub fn bec(mask: ErasureMask, revealed: BitString) -> Result<Self> {
        if mask.len() != revealed.len() {
            return Err(Error::InvalidParameter("mask/revealed length mismatch".into()));
        }
        if revealed.value() & mask.bits() != 0 {
            return Err(Error::InvalidParameter(
                "revealed bits must be zero on erased positions".into(),
            ));
        }
        Ok(SideInfo::Bec { mask, revealed })
    }
}

/// Stream labels for [`stream_rng`], keeping independent uses of the same
/// user seed on disjoint streams.
pub mod stream {
    /// Monte Carlo trials; the index is the trial number.
    pub const MC_TRIAL: u64 = 1;
    /// Bootstrap resampling; the index is the resample number.
    pub const BOOTSTRAP: u64 = 2;
}

fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    *state = z ^ (z >> 31);
}

/// A deterministic generator for the stream named `(seed, purpose, index)`.
///
/// Streams are counter-derived, not sequentially split, so trials can run
/// in any order (or in parallel) and still reproduce bit-identical draws.
pub fn stream_rng(seed: u64, purpose: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed;
    splitmix64(&mut state);
    state ^= purpose.wrapping_mul(0xa076_1d64_78bd_642f);
    splitmix64(&mut state);
    state ^= index.wrapping_mul(0xe703_7ed1_a0b4_28db);
    splitmix64(&mut state);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        splitmix64(&mut state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Pass `x` through the channel, drawing one Bernoulli per position in
/// position order. Identical `(seed, purpose, index)` streams reproduce
/// identical observations.
pub fn sample_side_info<R: Rng + ?Sized>(
    x: BitString,
    channel: &ChannelSpec,
    rng: &mut R,
) -> SideInfo {
    let n = x.len();
    match channel {
        ChannelSpec::Bec { eps } => {
            let mut mask_bits = 0u64;
            for position in 0..n {
                if rng.random_bool(eps.value()) {
                    mask_bits |= 1 << (n - 1 - position);
                }
            }
            let mask = ErasureMask::new(n, mask_bits).expect("mask within length");
            let revealed =
                BitString::new(n, x.value() & !mask_bits).expect("revealed within length");
            SideInfo::Bec { mask, revealed }
        }
        ChannelSpec::Bsc { delta } => {
            let mut flips = 0u64;
            for position in 0..n {
                if rng.random_bool(delta.value()) {
                    flips |= 1 << (n - 1 - position);
                }
            }
            let observed = BitString::new(n, x.value() ^ flips).expect("flips within length");
            SideInfo::Bsc { observed }
        }
    }
}

/// Joint pmf of a uniform secret bit `x` and the tuple of `m` independent
/// BSC observations of it: `p(x, y) = (1/2) δ^{d} (1-δ)^{m-d}` with `d`
/// the number of observations that disagree with `x`.
///
/// The tuple `(y_1, ..., y_m)` is packed with `y_1` most significant.
pub fn collapse_bsc(delta: Prob, m: AgentCount) -> Result<JointPmf> {
    let m = m.get();
    if m > MAX_COLLAPSE_AGENTS {
        return Err(Error::Capacity {
            what: "collapsed BSC observations",
            requested: m as u64,
            limit: MAX_COLLAPSE_AGENTS as u64,
        });
    }
    let d = delta.value();
    let ny = 1usize << m;
    let mut p = vec![0.0; 2 * ny];
    for y in 0..ny {
        let ones = (y as u64).count_ones();
        let zeros = m - ones;
        // x = 0 disagrees with the 1-bits of y; x = 1 with the 0-bits.
        p[y] = 0.5 * d.powi(ones as i32) * (1.0 - d).powi(zeros as i32);
        p[ny + y] = 0.5 * d.powi(zeros as i32) * (1.0 - d).powi(ones as i32);
    }
    JointPmf::new(2, ny, p)
}

/// Tie handling when an even number of voters splits evenly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    /// Ties vote 0. The effective channel becomes asymmetric.
    TowardZero,
    /// Ties are resolved by a fair coin, preserving a symmetric channel.
    Randomized,
}

/// Effective per-bit error of majority voting over `m` observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MajorityFlip {
    /// Same error probability whichever bit was sent.
    Symmetric(f64),
    /// Error probabilities conditioned on the sent bit (toward-zero ties).
    Asymmetric { given_zero: f64, given_one: f64 },
}

/// Error probability of the per-position majority vote over `m`
/// independent BSC(δ) observations.
///
/// For odd `m` the vote errs when more than half the observations flip:
/// `δ_m = Pr[Binomial(m, δ) > m/2]`, which is symmetric and strictly
/// smaller than δ for `m >= 3`, `δ ∈ (0, 1/2)`. Even `m` needs the tie
/// rule: randomized ties stay symmetric, toward-zero ties favor the bit 0
/// and yield an asymmetric pair.
pub fn majority_flip_prob(delta: Prob, m: AgentCount, tie_rule: TieRule) -> Result<MajorityFlip> {
    if delta.value() > 0.5 {
        return Err(Error::InvalidParameter(format!(
            "majority vote expects a flip probability <= 1/2, got {}",
            delta.value()
        )));
    }
    let m = m.get() as u64;
    if m % 2 == 1 {
        return Ok(MajorityFlip::Symmetric(binomial_tail_above(m, delta.value(), m / 2)));
    }
    let above = binomial_tail_above(m, delta.value(), m / 2);
    let at_half = binomial_pmf(m, delta.value(), m / 2);
    match tie_rule {
        TieRule::Randomized => Ok(MajorityFlip::Symmetric(above + 0.5 * at_half)),
        TieRule::TowardZero => Ok(MajorityFlip::Asymmetric {
            // Sent 0: the vote errs only on a strict flip majority.
            given_zero: above,
            // Sent 1: a tie already votes 0, so the boundary term counts.
            given_one: above + at_half,
        }),
    }
}

/// Log of `C(m, k) p^k (1-p)^{m-k}`, built incrementally; used when the
/// direct recurrence's `(1-p)^m` anchor underflows.
fn log_binomial_pmf(m: u64, p: f64, k: u64) -> f64 {
    let mut log_choose = 0.0f64;
    for j in 0..k {
        log_choose += ((m - j) as f64 / (j + 1) as f64).ln();
    }
    log_choose + k as f64 * p.ln() + (m - k) as f64 * (1.0 - p).ln()
}

/// `Pr[Binomial(m, p) = k]`.
fn binomial_pmf(m: u64, p: f64, k: u64) -> f64 {
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == m { 1.0 } else { 0.0 };
    }
    let anchor = crate::infomath::pow_u32(1.0 - p, m.min(u32::MAX as u64) as u32);
    if anchor > 0.0 && m <= u32::MAX as u64 {
        let ratio = p / (1.0 - p);
        let mut term = anchor;
        for j in 0..k {
            term *= (m - j) as f64 / (j + 1) as f64 * ratio;
        }
        term
    } else {
        log_binomial_pmf(m, p, k).exp()
    }
}

/// `Pr[Binomial(m, p) > threshold]` for `threshold >= (m-1)/2`, the
/// upper-tail shape majority voting needs. Large committees anchor the
/// recurrence at the threshold in log space so the tail stays accurate
/// even when `(1-p)^m` underflows.
fn binomial_tail_above(m: u64, p: f64, threshold: u64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return if threshold < m { 1.0 } else { 0.0 };
    }
    let ratio = p / (1.0 - p);
    let mut sum = crate::infomath::Kahan::default();
    let anchor = crate::infomath::pow_u32(1.0 - p, m.min(u32::MAX as u64) as u32);
    if anchor > 0.0 && m <= u32::MAX as u64 {
        let mut term = anchor;
        for j in 0..=m {
            if j > threshold {
                sum.add(term);
            }
            if j < m {
                term *= (m - j) as f64 / (j + 1) as f64 * ratio;
            }
        }
    } else {
        let start = threshold + 1;
        if start > m {
            return 0.0;
        }
        // Terms decay going up from the threshold (it sits at or above
        // the mode for p <= 1/2).
        let mut term = log_binomial_pmf(m, p, start).exp();
        for j in start..=m {
            sum.add(term);
            if term == 0.0 {
                break;
            }
            if j < m {
                term *= (m - j) as f64 / (j + 1) as f64 * ratio;
            }
        }
    }
    sum.total()
}
