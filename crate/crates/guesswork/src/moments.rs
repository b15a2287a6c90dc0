//! Exact finite-`n` guesswork moments, seeded Monte Carlo estimation, and
//! slope reports connecting finite-`n` data to the analytic exponents.
//!
//! Exact summation is the primary evidence channel: `E[G^α]` is dominated
//! by rare high-rank events that sampling undersamples, so Monte Carlo is
//! a secondary consistency check whose estimator is downward-biased for
//! heavy-tailed `G^α` at large `n`. Power sums over rank ranges are
//! accumulated term by term (no closed-form polynomial shortcuts) so
//! non-integer α works, with compensated summation throughout.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::channels::{
    sample_side_info, stream, stream_rng, AgentCount, BitString, ChannelSpec, SideInfo,
};
use crate::exponents::{ExponentResult, MomentOrder, SchemeMode, SchemeSpec};
use crate::infomath::{pow_u32, Kahan, Prob};
use crate::ranks::{bec_rank, binomial, bsc_rank, centralized_bsc2_rank, Rank};
use crate::{Error, Result};

/// Size limits for the exact operations, chosen so each call completes in
/// roughly ten seconds on one desktop core.
pub mod caps {
    /// Erasure moments sum `2^k` ranks per erasure count `k <= n`.
    pub const EXACT_SINGLE_BEC_MAX_N: u32 = 24;
    /// Flip moments sum all `2^n` ranks by weight class.
    pub const EXACT_SINGLE_BSC_MAX_N: u32 = 22;
    /// Minimum-of-agents flip moments walk the same `2^n` ranks.
    pub const EXACT_DECENTRALIZED_BSC_MAX_N: u32 = 22;
    /// Joint enumeration over all agents' masks and the secret:
    /// `n (m + 1)` bits of state.
    pub const EXACT_DECENTRALIZED_BEC_MAX_BITS: u32 = 30;
    /// Pooled-pair flip moments use prefix sums over `2^n` ranks.
    pub const EXACT_CENTRALIZED_BSC2_MAX_N: u32 = 20;
    /// Monte Carlo works on packed 63-bit strings.
    pub const MC_MAX_N: u32 = 63;
}

/// Bootstrap resamples behind every Monte Carlo confidence interval.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
/// Two-sided confidence level of the bootstrap percentile interval.
pub const CI_LEVEL: f64 = 0.95;

/// How a moment value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMethod {
    /// Joint enumeration of every noise realization.
    ExactEnum,
    /// Summation over type/weight classes or rank ranges.
    ExactTypesum,
    MonteCarlo,
}

impl MomentMethod {
    pub fn name(&self) -> &'static str {
        match self {
            MomentMethod::ExactEnum => "exact_enum",
            MomentMethod::ExactTypesum => "exact_typesum",
            MomentMethod::MonteCarlo => "monte_carlo",
        }
    }
}

/// One computed moment `E[G^α]` for a (scheme, channel, α, n) cell.
#[derive(Debug, Clone)]
pub struct MomentRecord {
    pub scheme: SchemeSpec,
    pub channel: ChannelSpec,
    pub alpha: f64,
    pub n: u32,
    pub value: f64,
    pub method: MomentMethod,
    /// Bootstrap percentile interval, Monte Carlo only.
    pub ci: Option<(f64, f64)>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

fn check_cap(what: &'static str, requested: u32, limit: u32) -> Result<()> {
    if requested == 0 {
        return Err(Error::InvalidParameter(format!("{what} must be positive")));
    }
    if requested > limit {
        return Err(Error::Capacity {
            what,
            requested: requested as u64,
            limit: limit as u64,
        });
    }
    Ok(())
}

/// `Σ_{r=lo+1}^{hi} r^α`, term by term with compensated accumulation.
fn rank_power_sum(lo: u64, hi: u64, alpha: f64, acc: &mut Kahan) {
    for r in (lo + 1)..=hi {
        acc.add((r as f64).powf(alpha));
    }
}

/// Exact `E[G^α]` for one agent with erasure side information.
///
/// Conditioned on `k` erasures the rank is uniform on `[1, 2^k]`, so
/// `E[G^α] = Σ_k C(n,k) ε^k (1-ε)^{n-k} 2^{-k} Σ_{r=1}^{2^k} r^α`.
/// At α = 1 this collapses to `((1+ε)^n + 1)/2`.
pub fn exact_moment_single_bec(alpha: MomentOrder, eps: Prob, n: u32) -> Result<MomentRecord> {
    check_cap("exact erasure moment length", n, caps::EXACT_SINGLE_BEC_MAX_N)?;
    let a = alpha.get();
    let e = eps.value();

    // Snapshot the running power sum at each 2^k; erasure-free channels
    // only ever need k = 0.
    let k_max = if e == 0.0 { 0 } else { n };
    let mut power_sums = vec![0.0f64; n as usize + 1];
    let mut running = Kahan::default();
    let mut r = 0u64;
    for (k, slot) in power_sums.iter_mut().enumerate().take(k_max as usize + 1) {
        rank_power_sum(r, 1 << k, a, &mut running);
        r = 1 << k;
        *slot = running.total();
    }

    let mut total = Kahan::default();
    for k in 0..=n {
        let weight = binomial(n, k) as f64 * e.powi(k as i32) * (1.0 - e).powi((n - k) as i32);
        if weight == 0.0 {
            continue;
        }
        total.add(weight * power_sums[k as usize] / (1u64 << k) as f64);
    }
    Ok(MomentRecord {
        scheme: SchemeSpec::single(),
        channel: ChannelSpec::Bec { eps },
        alpha: a,
        n,
        value: total.total(),
        method: MomentMethod::ExactTypesum,
        ci: None,
        trials: None,
        seed: None,
    })
}

/// Exact `E[G^α]` for one agent with flip side information, summing all
/// `2^n` ranks grouped by the weight class of the flip pattern:
/// `Σ_w δ^w (1-δ)^{n-w} Σ_{r=R_w+1}^{R_w+C(n,w)} r^α`.
pub fn exact_moment_single_bsc(alpha: MomentOrder, delta: Prob, n: u32) -> Result<MomentRecord> {
    check_cap("exact flip moment length", n, caps::EXACT_SINGLE_BSC_MAX_N)?;
    let a = alpha.get();
    let d = delta.value();

    let mut total = Kahan::default();
    let mut base = 0u64;
    for w in 0..=n {
        let count = binomial(n, w);
        let p_class = d.powi(w as i32) * (1.0 - d).powi((n - w) as i32);
        if p_class > 0.0 {
            let mut class_sum = Kahan::default();
            rank_power_sum(base, base + count, a, &mut class_sum);
            total.add(p_class * class_sum.total());
        }
        base += count;
    }
    Ok(MomentRecord {
        scheme: SchemeSpec::single(),
        channel: ChannelSpec::Bsc { delta },
        alpha: a,
        n,
        value: total.total(),
        method: MomentMethod::ExactTypesum,
        ci: None,
        trials: None,
        seed: None,
    })
}

/// Exact `E[min_i G_i^α]` for `m` agents with independent flip
/// observations. The per-agent ranks are i.i.d., so
/// `E[min^α] = Σ_r r^α (S(r-1)^m - S(r)^m)` with `S` the single-agent
/// rank survival function, assembled exactly from the weight classes.
pub fn exact_moment_decentralized_bsc(
    alpha: MomentOrder,
    delta: Prob,
    m: AgentCount,
    n: u32,
) -> Result<MomentRecord> {
    if m.get() == 1 {
        // min over one agent is that agent; reuse the single-agent sum so
        // the collapse is bit-identical.
        let mut record = exact_moment_single_bsc(alpha, delta, n)?;
        record.scheme = SchemeSpec::decentralized(m);
        return Ok(record);
    }
    check_cap(
        "exact decentralized flip moment length",
        n,
        caps::EXACT_DECENTRALIZED_BSC_MAX_N,
    )?;
    let a = alpha.get();
    let d = delta.value();
    let magents = m.get();

    // suffix[w] = probability mass of all weight classes after w.
    let mut suffix = vec![0.0f64; n as usize + 2];
    for w in (0..=n).rev() {
        let p_class = d.powi(w as i32) * (1.0 - d).powi((n - w) as i32);
        suffix[w as usize] = suffix[w as usize + 1] + binomial(n, w) as f64 * p_class;
    }

    let mut total = Kahan::default();
    let mut base = 0u64;
    for w in 0..=n {
        let count = binomial(n, w);
        let p_rank = d.powi(w as i32) * (1.0 - d).powi((n - w) as i32);
        let tail = suffix[w as usize + 1];
        let mut survive_prev = pow_u32(tail + count as f64 * p_rank, magents);
        if p_rank > 0.0 || survive_prev > 0.0 {
            for j in 1..=count {
                let survive = pow_u32(tail + (count - j) as f64 * p_rank, magents);
                let r = base + j;
                total.add((r as f64).powf(a) * (survive_prev - survive));
                survive_prev = survive;
            }
        }
        base += count;
    }
    Ok(MomentRecord {
        scheme: SchemeSpec::decentralized(m),
        channel: ChannelSpec::Bsc { delta },
        alpha: a,
        n,
        value: total.total(),
        method: MomentMethod::ExactTypesum,
        ci: None,
        trials: None,
        seed: None,
    })
}

/// Exact `E[min_i G_i^α]` for `m` agents with erasure observations, by
/// joint enumeration of every mask combination and every secret.
///
/// The per-agent guessworks share the secret's bits, so they are not
/// independent; the average runs over all `2^{nm}` mask tuples (weighted
/// per position and agent) times the `2^n` uniform secrets, with each
/// agent following its own canonical list.
pub fn exact_moment_decentralized_bec(
    alpha: MomentOrder,
    eps: Prob,
    m: AgentCount,
    n: u32,
) -> Result<MomentRecord> {
    if m.get() == 1 {
        let mut record = exact_moment_single_bec(alpha, eps, n)?;
        record.scheme = SchemeSpec::decentralized(m);
        return Ok(record);
    }
    if n == 0 {
        return Err(Error::InvalidParameter("length must be positive".into()));
    }
    let bits = n
        .checked_mul(m.get() + 1)
        .ok_or_else(|| Error::InvalidParameter("state size overflow".into()))?;
    check_cap(
        "exact decentralized erasure enumeration bits",
        bits,
        caps::EXACT_DECENTRALIZED_BEC_MAX_BITS,
    )?;

    let a = alpha.get();
    let e = eps.value();
    let size = 1usize << n;
    let mm = m.get() as usize;

    // rank_lut[mask * 2^n + x] = rank of x under that erasure mask.
    let mut rank_lut = vec![0u32; size * size];
    for mask_bits in 0..size {
        let mask = crate::channels::ErasureMask::new(n, mask_bits as u64)?;
        for x in 0..size {
            let xs = BitString::new(n, x as u64)?;
            rank_lut[mask_bits * size + x] = bec_rank(xs, &mask).get() as u32;
        }
    }
    let mask_weight: Vec<f64> = (0..size)
        .map(|mask| {
            let k = (mask as u64).count_ones() as i32;
            e.powi(k) * (1.0 - e).powi(n as i32 - k)
        })
        .collect();
    let rank_pow: Vec<f64> = (0..=size as u64).map(|r| (r as f64).powf(a)).collect();

    let tuple_count = 1u64 << (n * m.get());
    let mask_bits_mask = (size - 1) as u64;
    let mut total = Kahan::default();
    let mut rows: Vec<&[u32]> = Vec::with_capacity(mm);
    for tuple in 0..tuple_count {
        let mut weight = 1.0f64;
        rows.clear();
        for agent in 0..mm {
            let mask = ((tuple >> (agent as u32 * n)) & mask_bits_mask) as usize;
            weight *= mask_weight[mask];
            rows.push(&rank_lut[mask * size..(mask + 1) * size]);
        }
        if weight == 0.0 {
            continue;
        }
        let mut inner = 0.0f64;
        for x in 0..size {
            let mut best = rows[0][x];
            for row in &rows[1..] {
                best = best.min(row[x]);
            }
            inner += rank_pow[best as usize];
        }
        total.add(weight * inner / size as f64);
    }
    Ok(MomentRecord {
        scheme: SchemeSpec::decentralized(m),
        channel: ChannelSpec::Bec { eps },
        alpha: a,
        n,
        value: total.total(),
        method: MomentMethod::ExactEnum,
        ci: None,
        trials: None,
        seed: None,
    })
}

/// Exact `E[G^α]` for the pooled list of two flip observations.
///
/// Per position the observation pair is agree-correct with probability
/// `(1-δ)²`, agree-wrong with `δ²`, or disagreeing with `2δ(1-δ)`. For a
/// fixed agreement count `A` and flip count `k`, the ranks sweep the
/// contiguous range `(R_{A,k} 2^B, (R_{A,k}+C(A,k)) 2^B]` uniformly, so
/// one pass of prefix power sums over `[1, 2^n]` covers every class.
pub fn exact_moment_centralized_bsc2(
    alpha: MomentOrder,
    delta: Prob,
    n: u32,
) -> Result<MomentRecord> {
    check_cap(
        "exact pooled-pair moment length",
        n,
        caps::EXACT_CENTRALIZED_BSC2_MAX_N,
    )?;
    let a = alpha.get();
    let d = delta.value();
    let agree_correct = (1.0 - d) * (1.0 - d);
    let agree_wrong = d * d;
    let disagree = 2.0 * d * (1.0 - d);

    let size = 1u64 << n;
    let mut prefix = vec![0.0f64; size as usize + 1];
    let mut running = Kahan::default();
    for r in 1..=size {
        running.add((r as f64).powf(a));
        prefix[r as usize] = running.total();
    }

    let mut total = Kahan::default();
    for agree in 0..=n {
        let b = n - agree;
        let w_disagree = disagree.powi(b as i32);
        if w_disagree == 0.0 {
            continue;
        }
        let positions = binomial(n, agree) as f64;
        let mut class_base = 0u64; // R_{A,k}
        for k in 0..=agree {
            let class_count = binomial(agree, k);
            let w_flips = agree_wrong.powi(k as i32) * agree_correct.powi((agree - k) as i32);
            if w_flips > 0.0 {
                let lo = class_base << b;
                let hi = (class_base + class_count) << b;
                let class_mean =
                    (prefix[hi as usize] - prefix[lo as usize]) / (1u64 << b) as f64;
                total.add(positions * w_disagree * w_flips * class_mean);
            }
            class_base += class_count;
        }
    }
    Ok(MomentRecord {
        scheme: SchemeSpec::centralized(AgentCount::new(2)?),
        channel: ChannelSpec::Bsc { delta },
        alpha: a,
        n,
        value: total.total(),
        method: MomentMethod::ExactTypesum,
        ci: None,
        trials: None,
        seed: None,
    })
}

/// Exact moment for `m` pooled erasure observations: pooling erases a
/// position only when every agent did, which is again i.i.d. erasure with
/// probability `ε^m` at every finite `n`.
pub fn exact_moment_centralized_bec(
    alpha: MomentOrder,
    eps: Prob,
    m: AgentCount,
    n: u32,
) -> Result<MomentRecord> {
    let pooled = Prob::new(pow_u32(eps.value(), m.get()))?;
    let mut record = exact_moment_single_bec(alpha, pooled, n)?;
    record.scheme = SchemeSpec::centralized(m);
    record.channel = ChannelSpec::Bec { eps };
    Ok(record)
}

/// Exact moment for the scheme/channel pair, routed to the matching
/// summation. Pooled flip observations are only tractable for `m <= 2`.
pub fn exact_moment(
    scheme: &SchemeSpec,
    channel: &ChannelSpec,
    alpha: MomentOrder,
    n: u32,
) -> Result<MomentRecord> {
    let m = scheme.agents();
    match (scheme.mode(), channel) {
        (SchemeMode::Single, ChannelSpec::Bec { eps }) => exact_moment_single_bec(alpha, *eps, n),
        (SchemeMode::Single, ChannelSpec::Bsc { delta }) => {
            exact_moment_single_bsc(alpha, *delta, n)
        }
        (SchemeMode::Centralized, ChannelSpec::Bec { eps }) => {
            exact_moment_centralized_bec(alpha, *eps, m, n)
        }
        (SchemeMode::Centralized, ChannelSpec::Bsc { delta }) => match m.get() {
            1 => {
                let mut record = exact_moment_single_bsc(alpha, *delta, n)?;
                record.scheme = *scheme;
                Ok(record)
            }
            2 => exact_moment_centralized_bsc2(alpha, *delta, n),
            more => Err(Error::Capacity {
                what: "pooled flip observations with an exact finite-length list",
                requested: more as u64,
                limit: 2,
            }),
        },
        (SchemeMode::Decentralized, ChannelSpec::Bec { eps }) => {
            exact_moment_decentralized_bec(alpha, *eps, m, n)
        }
        (SchemeMode::Decentralized, ChannelSpec::Bsc { delta }) => {
            exact_moment_decentralized_bsc(alpha, *delta, m, n)
        }
    }
}

/// One simulated attack: draw the secret and every agent's observation,
/// and return the guess count of the mechanism.
fn simulate_trial<R: Rng + ?Sized>(
    scheme: &SchemeSpec,
    channel: &ChannelSpec,
    n: u32,
    rng: &mut R,
) -> Rank {
    let x = BitString::random(n, rng).expect("length validated by caller");
    match scheme.mode() {
        // A single agent is the one-agent minimum.
        SchemeMode::Single | SchemeMode::Decentralized => {
            let mut best: Option<Rank> = None;
            for _ in 0..scheme.agents().get() {
                let rank = match sample_side_info(x, channel, rng) {
                    SideInfo::Bsc { observed } => bsc_rank(x.xor(&observed)),
                    SideInfo::Bec { mask, .. } => bec_rank(x, &mask),
                };
                best = Some(best.map_or(rank, |b| b.min(rank)));
            }
            best.expect("at least one agent")
        }
        SchemeMode::Centralized => match channel {
            ChannelSpec::Bec { .. } => {
                let mut pooled: Option<crate::channels::ErasureMask> = None;
                for _ in 0..scheme.agents().get() {
                    if let SideInfo::Bec { mask, .. } = sample_side_info(x, channel, rng) {
                        pooled = Some(match pooled {
                            None => mask,
                            Some(p) => p.intersect(&mask),
                        });
                    }
                }
                bec_rank(x, &pooled.expect("at least one agent"))
            }
            ChannelSpec::Bsc { .. } => match scheme.agents().get() {
                1 => {
                    let SideInfo::Bsc { observed } = sample_side_info(x, channel, rng) else {
                        unreachable!()
                    };
                    bsc_rank(x.xor(&observed))
                }
                2 => {
                    let SideInfo::Bsc { observed: y1 } = sample_side_info(x, channel, rng) else {
                        unreachable!()
                    };
                    let SideInfo::Bsc { observed: y2 } = sample_side_info(x, channel, rng) else {
                        unreachable!()
                    };
                    centralized_bsc2_rank(x, y1, y2)
                }
                _ => unreachable!("validated by mc_estimate_moment"),
            },
        },
    }
}

/// Monte Carlo estimate of `E[G^α]` (or `E[min_i G_i^α]`) from seeded
/// trials, with a bootstrap percentile confidence interval.
///
/// Trial `i` draws from the stream `(seed, MC_TRIAL, i)`, so results are
/// reproducible and independent of evaluation order. The estimator is
/// downward-biased for heavy-tailed `G^α` at large `n`; prefer the exact
/// operations wherever they apply.
pub fn mc_estimate_moment(
    scheme: &SchemeSpec,
    channel: &ChannelSpec,
    alpha: MomentOrder,
    n: u32,
    trials: u64,
    seed: u64,
) -> Result<MomentRecord> {
    check_cap("Monte Carlo string length", n, caps::MC_MAX_N)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if scheme.mode() == SchemeMode::Centralized
        && matches!(channel, ChannelSpec::Bsc { .. })
        && scheme.agents().get() > 2
    {
        return Err(Error::Capacity {
            what: "pooled flip observations with an exact finite-length list",
            requested: scheme.agents().get() as u64,
            limit: 2,
        });
    }

    let a = alpha.get();
    let mut ranks = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = stream_rng(seed, stream::MC_TRIAL, trial);
        ranks.push(simulate_trial(scheme, channel, n, &mut rng));
    }

    let mut mean = Kahan::default();
    for r in &ranks {
        mean.add(r.as_f64().powf(a));
    }
    let value = mean.total() / trials as f64;
    let ci = bootstrap_mean_ci(&ranks, a, seed);

    Ok(MomentRecord {
        scheme: *scheme,
        channel: *channel,
        alpha: a,
        n,
        value,
        method: MomentMethod::MonteCarlo,
        ci: Some(ci),
        trials: Some(trials),
        seed: Some(seed),
    })
}

/// Bootstrap percentile interval for the mean of `rank^α`.
///
/// Resamples come from the empirical distribution: multinomial counts
/// over the distinct rank values when they are few, plain index
/// resampling otherwise. All draws use the dedicated bootstrap stream.
fn bootstrap_mean_ci(ranks: &[Rank], alpha: f64, seed: u64) -> (f64, f64) {
    let trials = ranks.len() as u64;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for r in ranks {
        *counts.entry(r.get()).or_insert(0) += 1;
    }
    if counts.len() <= 1 {
        let v = ranks[0].as_f64().powf(alpha);
        return (v, v);
    }

    let mut rng = stream_rng(seed, stream::BOOTSTRAP, 0);
    let mut means = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    if counts.len() <= 1 << 16 {
        let cells: Vec<(f64, u64)> = counts
            .iter()
            .map(|(&r, &c)| ((r as f64).powf(alpha), c))
            .collect();
        for _ in 0..BOOTSTRAP_RESAMPLES {
            let mut remaining_draws = trials;
            let mut remaining_mass = trials;
            let mut acc = Kahan::default();
            for (i, &(value, count)) in cells.iter().enumerate() {
                if remaining_draws == 0 {
                    break;
                }
                let drawn = if i + 1 == cells.len() {
                    remaining_draws
                } else {
                    let p = count as f64 / remaining_mass as f64;
                    Binomial::new(remaining_draws, p.min(1.0))
                        .expect("valid binomial")
                        .sample(&mut rng)
                };
                acc.add(drawn as f64 * value);
                remaining_draws -= drawn.min(remaining_draws);
                remaining_mass -= count;
            }
            means.push(acc.total() / trials as f64);
        }
    } else {
        let pows: Vec<f64> = ranks.iter().map(|r| r.as_f64().powf(alpha)).collect();
        for _ in 0..BOOTSTRAP_RESAMPLES {
            let mut acc = 0.0f64;
            for _ in 0..trials {
                acc += pows[rng.random_range(0..pows.len())];
            }
            means.push(acc / trials as f64);
        }
    }
    means.sort_unstable_by(f64::total_cmp);
    let tail = (1.0 - CI_LEVEL) / 2.0;
    let last = (means.len() - 1) as f64;
    let lo = means[(tail * last).round() as usize];
    let hi = means[((1.0 - tail) * last).round() as usize];
    (lo, hi)
}

/// One row of a slope report.
#[derive(Debug, Clone, Copy)]
pub struct SlopePoint {
    pub n: u32,
    pub log2_value: f64,
    /// Forward difference `log2 E(n+1) - log2 E(n)`; absent on the last row.
    pub slope: Option<f64>,
    /// `slope - analytic target`.
    pub gap_to_target: Option<f64>,
}

/// Finite-difference slopes of `log2 E[G^α]` against the analytic
/// exponent the sequence should approach.
#[derive(Debug, Clone)]
pub struct SlopeReport {
    pub points: Vec<SlopePoint>,
    pub target: f64,
    /// Set when the slope sequence is neither non-decreasing nor
    /// non-increasing; convergence claims should not rest on such runs.
    pub non_monotone: bool,
}

/// Build a slope report from exact or sampled records at consecutive `n`.
pub fn slope_report(records: &[MomentRecord], analytic: &ExponentResult) -> Result<SlopeReport> {
    if records.len() < 2 {
        return Err(Error::RecordMismatch("need at least two records".into()));
    }
    let first = &records[0];
    for (i, r) in records.iter().enumerate() {
        if r.scheme != first.scheme || r.channel != first.channel || r.alpha != first.alpha {
            return Err(Error::RecordMismatch(format!(
                "record {i} has different scheme/channel/alpha metadata"
            )));
        }
        if r.n != first.n + i as u32 {
            return Err(Error::RecordMismatch(format!(
                "record {i} breaks the consecutive-n requirement"
            )));
        }
        if !(r.value.is_finite() && r.value >= 1.0) {
            return Err(Error::RecordMismatch(format!(
                "record {i} has value {} outside [1, inf)",
                r.value
            )));
        }
    }

    let logs: Vec<f64> = records.iter().map(|r| r.value.log2()).collect();
    let mut points = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let slope = logs.get(i + 1).map(|next| next - logs[i]);
        points.push(SlopePoint {
            n: r.n,
            log2_value: logs[i],
            slope,
            gap_to_target: slope.map(|s| s - analytic.value),
        });
    }
    let slopes: Vec<f64> = points.iter().filter_map(|p| p.slope).collect();
    let non_decreasing = slopes.windows(2).all(|w| w[1] >= w[0]);
    let non_increasing = slopes.windows(2).all(|w| w[1] <= w[0]);
    Ok(SlopeReport {
        points,
        target: analytic.value,
        non_monotone: !(non_decreasing || non_increasing),
    })
}
