//! Exact guesswork positions: where the secret sits in each mechanism's
//! canonical guessing list, computed combinatorially without materializing
//! the list, plus a brute-force posterior-sorting oracle for validation.
//!
//! Every list orders candidates by descending posterior probability. Ties
//! (candidates with equal posterior) are broken by a fixed canonical key
//! so ranks are reproducible bit-for-bit: the flip pattern relative to the
//! most likely candidate on noisy positions, then the raw candidate bits
//! on erased or disagreement positions, both read with position 0 most
//! significant. Moments of guesswork are invariant to the tie order, since
//! tied candidates are equiprobable; the fixed key only pins the ranks.

use std::sync::OnceLock;

use crate::channels::{BitString, ErasureMask};
use crate::{Error, Result};

/// Largest string length the posterior-sorting oracle will materialize
/// (`2^n` candidates).
pub const ORACLE_MAX_LEN: u32 = 20;

/// A 1-based guesswork position in `[1, 2^n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(u64);

impl Rank {
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

/// Exact `C(n, k)` for `n <= 64`; zero when `k > n`.
pub(crate) fn binomial(n: u32, k: u32) -> u64 {
    static TABLE: OnceLock<Box<[[u64; 65]; 65]>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Box::new([[0u64; 65]; 65]);
        for n in 0..=64 {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + t[n - 1].get(k).copied().unwrap_or(0);
            }
        }
        t
    });
    if k > n {
        0
    } else {
        table[n as usize][k as usize]
    }
}

/// Lexicographic index of `bits` (a `len`-bit word, position 0 most
/// significant) among all words of the same Hamming weight.
fn class_lex_index(len: u32, bits: u64) -> u64 {
    let mut remaining = bits.count_ones();
    let mut idx = 0u64;
    for p in 0..len {
        if (bits >> (len - 1 - p)) & 1 == 1 {
            // Words that agree before p but have 0 at p place all
            // `remaining` ones in the len-1-p positions after p.
            idx += binomial(len - 1 - p, remaining);
            remaining -= 1;
        }
    }
    idx
}

/// Bits of `word` at the selected positions, packed in position order
/// (first selected position most significant).
fn compress_bits(word: u64, selector: u64, len: u32) -> u64 {
    let mut out = 0u64;
    for p in 0..len {
        let b = len - 1 - p;
        if (selector >> b) & 1 == 1 {
            out = (out << 1) | ((word >> b) & 1);
        }
    }
    out
}

fn ones(len: u32) -> u64 {
    (1u64 << len) - 1
}

/// Rank of a flip pattern `z` in the weight-then-lexicographic order, the
/// canonical list for a flip channel with δ ≤ 1/2 (fewer flips first).
///
/// `rank = Σ_{w < wt(z)} C(n, w) + lex index within the weight class + 1`;
/// a bijection from `{0,1}^n` onto `[1, 2^n]`.
pub fn bsc_rank(z: BitString) -> Rank {
    let n = z.len();
    let w = z.weight();
    let mut base = 0u64;
    for v in 0..w {
        base += binomial(n, v);
    }
    Rank(base + class_lex_index(n, z.value()) + 1)
}

/// Rank of `x` when only the erased positions are unknown: the packed
/// value of `x` on the mask (first erased position most significant),
/// plus one. Ranges over `[1, 2^k]` for `k` erasures.
pub fn bec_rank(x: BitString, mask: &ErasureMask) -> Rank {
    assert_eq!(x.len(), mask.len(), "string/mask length mismatch");
    Rank(compress_bits(x.value(), mask.bits(), x.len()) + 1)
}

/// Rank of `x` in the pooled list built from two flip observations.
///
/// Positions where the observations agree behave like a quieter flip
/// channel around the agreed value; positions where they disagree carry
/// no information and behave like erasures. With `A` agreement positions,
/// `k` of them flipped relative to the agreed value, and `v` the value of
/// `x` on the `B = n - A` disagreement positions:
/// `rank = (Σ_{w<k} C(A,w) + lex index of the flip pattern) · 2^B + v + 1`.
pub fn centralized_bsc2_rank(x: BitString, y1: BitString, y2: BitString) -> Rank {
    let n = x.len();
    assert!(y1.len() == n && y2.len() == n, "observation length mismatch");
    let disagree = y1.value() ^ y2.value();
    let agree = !disagree & ones(n);
    let flips = (x.value() ^ y1.value()) & agree;

    let a = agree.count_ones();
    let b = n - a;
    let k = flips.count_ones();

    let mut base = 0u64;
    for w in 0..k {
        base += binomial(a, w);
    }
    let flip_pattern = compress_bits(flips, agree, n);
    let idx = class_lex_index(a, flip_pattern);
    let v = compress_bits(x.value(), disagree, n);
    Rank(((base + idx) << b) + v + 1)
}

/// A conditioning observation for the posterior-sorting oracle.
#[derive(Debug, Clone, Copy)]
pub enum GuessingModel {
    /// One flip observation `y`; posterior order is by flip count for any
    /// flip probability in `(0, 1/2)`.
    SingleBsc { y: BitString },
    /// One erasure observation; consistent candidates are equiprobable.
    SingleBec {
        mask: ErasureMask,
        revealed: BitString,
    },
    /// Two pooled flip observations; posterior order is by the number of
    /// disagreements with the agreed value, for any flip probability in
    /// `(0, 1/2)`.
    CentralizedBsc2 { y1: BitString, y2: BitString },
}

impl GuessingModel {
    fn len(&self) -> u32 {
        match self {
            GuessingModel::SingleBsc { y } => y.len(),
            GuessingModel::SingleBec { mask, .. } => mask.len(),
            GuessingModel::CentralizedBsc2 { y1, .. } => y1.len(),
        }
    }

    /// Sort key for candidate `x`: posterior class first (smaller is more
    /// likely), then the canonical within-class key.
    fn sort_key(&self, x: u64) -> (u64, u64) {
        let n = self.len();
        match self {
            GuessingModel::SingleBsc { y } => {
                let z = x ^ y.value();
                (z.count_ones() as u64, z)
            }
            GuessingModel::SingleBec { mask, revealed } => {
                let consistent = x & !mask.bits() == revealed.value();
                if consistent {
                    (0, compress_bits(x, mask.bits(), n))
                } else {
                    // Zero-posterior candidates close the total order.
                    (1, x)
                }
            }
            GuessingModel::CentralizedBsc2 { y1, y2 } => {
                let disagree = y1.value() ^ y2.value();
                let agree = !disagree & ones(n);
                let flips = (x ^ y1.value()) & agree;
                let b = disagree.count_ones();
                let key = (compress_bits(flips, agree, n) << b)
                    | compress_bits(x, disagree, n);
                (flips.count_ones() as u64, key)
            }
        }
    }
}

/// Tie handling inside the oracle. `Reversed` flips the within-class
/// order; it exists as a validation hook (moments must not change, rank
/// equivalence checks must fail).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    Canonical,
    Reversed,
}

/// All `2^n` candidates ordered from most to least likely under the
/// model's posterior, ties broken per `tie`.
pub fn posterior_sorted_list(model: &GuessingModel, tie: TieBreak) -> Result<Vec<BitString>> {
    let n = model.len();
    if n > ORACLE_MAX_LEN {
        return Err(Error::Capacity {
            what: "oracle string length",
            requested: n as u64,
            limit: ORACLE_MAX_LEN as u64,
        });
    }
    let total = 1u64 << n;
    let mut keyed: Vec<((u64, u64), u64)> = (0..total)
        .map(|x| {
            let (class, key) = model.sort_key(x);
            let key = match tie {
                TieBreak::Canonical => key,
                TieBreak::Reversed => !key & ones(n),
            };
            ((class, key), x)
        })
        .collect();
    keyed.sort_unstable();
    keyed
        .into_iter()
        .map(|(_, x)| BitString::new(n, x))
        .collect()
}

/// 1-based position of `x` in the canonical posterior-sorted list.
///
/// This is the brute-force validation path: it materializes and sorts all
/// `2^n` candidates instead of using the combinatorial formulas above.
pub fn posterior_rank_oracle(x: BitString, model: &GuessingModel) -> Result<Rank> {
    posterior_rank_oracle_with_tie(x, model, TieBreak::Canonical)
}

/// [`posterior_rank_oracle`] with an explicit tie rule.
pub fn posterior_rank_oracle_with_tie(
    x: BitString,
    model: &GuessingModel,
    tie: TieBreak,
) -> Result<Rank> {
    let list = posterior_sorted_list(model, tie)?;
    let pos = list
        .iter()
        .position(|c| c.value() == x.value())
        .expect("every candidate appears in the list");
    Ok(Rank(pos as u64 + 1))
}
