//! Cross-check suite behind the CLI's `verify` command: exhaustive
//! rank-vs-oracle equivalence, multi-route exponent agreement, and the
//! ordering/monotonicity/convexity grids. Each check reports a pass flag
//! and a short human-readable detail line.

use crate::channels::{majority_flip_prob, AgentCount, BitString, ChannelSpec, ErasureMask,
    MajorityFlip, TieRule};
use crate::exponents::{
    centralized_bec, centralized_bsc2, centralized_bsc2_log_sum, centralized_bsc_generic,
    decentralized_bec, decentralized_bsc, decentralized_bsc_variational, exponent, single_bsc,
    MomentOrder, SchemeSpec,
};
use crate::infomath::{binary_shannon_entropy, Prob};
use crate::moments::exact_moment_single_bec;
use crate::ranks::{
    bec_rank, bsc_rank, centralized_bsc2_rank, posterior_sorted_list, GuessingModel, TieBreak,
};

/// Grid density for the continuous-parameter checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridDensity {
    Normal,
    /// Four times denser parameter grids.
    Fine,
}

/// Deliberate faults for negative-control runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultInjection {
    /// Flip the oracle's tie-break; the rank-vs-oracle checks must fail.
    TieBreak,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub grid: GridDensity,
    /// Largest string length for the exhaustive rank-vs-oracle sweeps.
    pub max_rank_len: u32,
    pub fault: Option<FaultInjection>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid: GridDensity::Normal,
            max_rank_len: 10,
            fault: None,
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn counted(name: &'static str, cases: u64, failures: u64, detail: String) -> Self {
        Check {
            name,
            passed: failures == 0,
            detail: if failures == 0 {
                format!("{cases} cases; {detail}")
            } else {
                format!("{failures} of {cases} cases failed; {detail}")
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Run every check.
pub fn run(opts: &VerifyOptions) -> VerificationReport {
    let checks = vec![
        check_rank_oracle_bsc(opts),
        check_rank_oracle_bec(opts),
        check_rank_oracle_pooled_pair(opts),
        check_tie_break_moment_invariance(),
        check_pair_exponent_three_routes(opts),
        check_min_flip_exponent_dual_routes(opts),
        check_exponent_ordering(opts),
        check_exponent_monotone_in_agents(),
        check_decentralized_erasure_lower_bound(),
        check_pooled_erasure_convexity(opts),
        check_pair_bound_below_entropy(opts),
        check_majority_vote_chain(),
        check_erasure_moment_identity(),
    ];
    VerificationReport { checks }
}

fn tie_break(opts: &VerifyOptions) -> TieBreak {
    match opts.fault {
        Some(FaultInjection::TieBreak) => TieBreak::Reversed,
        None => TieBreak::Canonical,
    }
}

fn ones(n: u32) -> u64 {
    (1u64 << n) - 1
}

/// Iterate the submasks of `mask` (including 0 and `mask` itself).
fn for_each_submask(mask: u64, mut f: impl FnMut(u64)) {
    let mut sub = mask;
    loop {
        f(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
}

fn check_rank_oracle_bsc(opts: &VerifyOptions) -> Check {
    let tie = tie_break(opts);
    let mut cases = 0u64;
    let mut failures = 0u64;
    for n in 1..=opts.max_rank_len {
        for y_bits in 0..(1u64 << n) {
            let y = BitString::new(n, y_bits).expect("within cap");
            let model = GuessingModel::SingleBsc { y };
            let list = posterior_sorted_list(&model, tie).expect("within oracle cap");
            for (pos, x) in list.iter().enumerate() {
                cases += 1;
                if bsc_rank(x.xor(&y)).get() != pos as u64 + 1 {
                    failures += 1;
                }
            }
        }
    }
    Check::counted(
        "rank-oracle-flip",
        cases,
        failures,
        format!("all observations up to n={}", opts.max_rank_len),
    )
}

fn check_rank_oracle_bec(opts: &VerifyOptions) -> Check {
    let tie = tie_break(opts);
    let mut cases = 0u64;
    let mut failures = 0u64;
    for n in 1..=opts.max_rank_len {
        for mask_bits in 0..(1u64 << n) {
            let mask = ErasureMask::new(n, mask_bits).expect("within cap");
            let consistent = 1u64 << mask.count();
            for_each_submask(!mask_bits & ones(n), |revealed_bits| {
                let revealed = BitString::new(n, revealed_bits).expect("within cap");
                let model = GuessingModel::SingleBec { mask, revealed };
                let list = posterior_sorted_list(&model, tie).expect("within oracle cap");
                for (pos, x) in list.iter().take(consistent as usize).enumerate() {
                    cases += 1;
                    if x.value() & !mask_bits != revealed_bits
                        || bec_rank(*x, &mask).get() != pos as u64 + 1
                    {
                        failures += 1;
                    }
                }
            });
        }
    }
    Check::counted(
        "rank-oracle-erasure",
        cases,
        failures,
        format!("all observations up to n={}", opts.max_rank_len),
    )
}

fn check_rank_oracle_pooled_pair(opts: &VerifyOptions) -> Check {
    let tie = tie_break(opts);
    let mut cases = 0u64;
    let mut failures = 0u64;

    // The posterior given (y1, y2) depends only on the agreement set and
    // the agreed values; sweep those classes exhaustively, pinning the
    // disagreement bits to y1 = 0, y2 = 1.
    for n in 1..=opts.max_rank_len {
        for agree_mask in 0..(1u64 << n) {
            let disagree = !agree_mask & ones(n);
            for_each_submask(agree_mask, |agreed_bits| {
                let y1 = BitString::new(n, agreed_bits).expect("within cap");
                let y2 = BitString::new(n, agreed_bits | disagree).expect("within cap");
                let model = GuessingModel::CentralizedBsc2 { y1, y2 };
                let list = posterior_sorted_list(&model, tie).expect("within oracle cap");
                for (pos, x) in list.iter().enumerate() {
                    cases += 1;
                    if centralized_bsc2_rank(*x, y1, y2).get() != pos as u64 + 1 {
                        failures += 1;
                    }
                }
            });
        }
    }

    // Smaller lengths additionally sweep every raw (y1, y2) pair, which
    // also exercises arbitrary disagreement-bit assignments.
    let full_max = opts.max_rank_len.min(7);
    for n in 1..=full_max {
        for y1_bits in 0..(1u64 << n) {
            for y2_bits in 0..(1u64 << n) {
                let y1 = BitString::new(n, y1_bits).expect("within cap");
                let y2 = BitString::new(n, y2_bits).expect("within cap");
                let model = GuessingModel::CentralizedBsc2 { y1, y2 };
                let list = posterior_sorted_list(&model, tie).expect("within oracle cap");
                for (pos, x) in list.iter().enumerate() {
                    cases += 1;
                    if centralized_bsc2_rank(*x, y1, y2).get() != pos as u64 + 1 {
                        failures += 1;
                    }
                }
            }
        }
    }
    Check::counted(
        "rank-oracle-pooled-pair",
        cases,
        failures,
        format!(
            "agreement classes up to n={}, raw pairs up to n={full_max}",
            opts.max_rank_len
        ),
    )
}

/// Moments must not depend on how ties are broken: tied candidates are
/// equiprobable, so any within-class permutation leaves `E[G^α]` alone.
fn check_tie_break_moment_invariance() -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    let alpha = 1.3f64;

    // Per-observation conditional moments, canonical vs reversed ties.
    let mut compare = |model: &GuessingModel, weight_of: &dyn Fn(u64) -> f64| {
        let canonical = posterior_sorted_list(model, TieBreak::Canonical).expect("cap");
        let reversed = posterior_sorted_list(model, TieBreak::Reversed).expect("cap");
        let moment = |list: &[BitString]| -> f64 {
            list.iter()
                .enumerate()
                .map(|(pos, x)| weight_of(x.value()) * ((pos + 1) as f64).powf(alpha))
                .sum()
        };
        let a = moment(&canonical);
        let b = moment(&reversed);
        cases += 1;
        if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
            failures += 1;
        }
    };

    let n = 8u32;
    let delta = 0.3f64;
    for y_bits in [0u64, 0b1011_0010, 0b1111_1111] {
        let y = BitString::new(n, y_bits).unwrap();
        let model = GuessingModel::SingleBsc { y };
        let weight = move |x: u64| {
            let w = (x ^ y_bits).count_ones() as i32;
            delta.powi(w) * (1.0 - delta).powi(n as i32 - w)
        };
        compare(&model, &weight);
    }
    for mask_bits in [0b0110_1100u64, 0b1111_0000] {
        let mask = ErasureMask::new(n, mask_bits).unwrap();
        let revealed = BitString::new(n, 0b0001_0001 & !mask_bits).unwrap();
        let model = GuessingModel::SingleBec { mask, revealed };
        let weight = move |x: u64| {
            if x & !mask_bits == revealed.value() {
                1.0 / (1u64 << mask.count()) as f64
            } else {
                0.0
            }
        };
        compare(&model, &weight);
    }
    let n5 = 5u32;
    for (y1_bits, y2_bits) in [(0b10110u64, 0b10011u64), (0b00000, 0b11111)] {
        let y1 = BitString::new(n5, y1_bits).unwrap();
        let y2 = BitString::new(n5, y2_bits).unwrap();
        let model = GuessingModel::CentralizedBsc2 { y1, y2 };
        let weight = move |x: u64| {
            let w1 = (x ^ y1_bits).count_ones() as i32;
            let w2 = (x ^ y2_bits).count_ones() as i32;
            delta.powi(w1) * (1.0 - delta).powi(n5 as i32 - w1) * delta.powi(w2)
                * (1.0 - delta).powi(n5 as i32 - w2)
        };
        compare(&model, &weight);
    }
    Check::counted(
        "tie-break-moment-invariance",
        cases,
        failures,
        "conditional moments, canonical vs reversed ties".into(),
    )
}

fn alpha_grid() -> Vec<f64> {
    vec![0.25, 0.5, 1.0, 2.0, 4.0]
}

fn delta_grid(grid: GridDensity) -> Vec<f64> {
    let step = match grid {
        GridDensity::Normal => 0.04,
        GridDensity::Fine => 0.01,
    };
    let mut out = Vec::new();
    let mut d = 0.01;
    while d <= 0.49 + 1e-12 {
        out.push(d);
        d += step;
    }
    out
}

/// Pooled-pair exponent: optimizer route vs log-sum identity vs
/// single-letter conditional Rényi evaluation, within 1e-8.
fn check_pair_exponent_three_routes(opts: &VerifyOptions) -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    let two = AgentCount::new(2).unwrap();
    for &a in &alpha_grid() {
        for &d in &delta_grid(opts.grid) {
            let alpha = MomentOrder::new(a).unwrap();
            let delta = Prob::new(d).unwrap();
            let opt = centralized_bsc2(alpha, delta).unwrap().value;
            let log_sum = centralized_bsc2_log_sum(alpha, delta).unwrap();
            let generic = centralized_bsc_generic(alpha, delta, two).unwrap().value;
            cases += 1;
            if (opt - log_sum).abs() > 1e-8 || (opt - generic).abs() > 1e-8 {
                failures += 1;
            }
        }
    }
    Check::counted(
        "pooled-pair-exponent-three-routes",
        cases,
        failures,
        "optimizer vs log-sum vs single-letter".into(),
    )
}

/// Minimum-of-agents flip exponent: closed form vs variational dual
/// within 1e-8, and the optimal type always heavier than δ.
fn check_min_flip_exponent_dual_routes(opts: &VerifyOptions) -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    for &a in &alpha_grid() {
        for &d in &delta_grid(opts.grid) {
            for m in [1u32, 2, 3, 5, 10] {
                let alpha = MomentOrder::new(a).unwrap();
                let delta = Prob::new(d).unwrap();
                let agents = AgentCount::new(m).unwrap();
                let closed = decentralized_bsc(alpha, delta, agents).unwrap().value;
                let dual = decentralized_bsc_variational(alpha, delta, agents).unwrap();
                cases += 1;
                if (closed - dual.value).abs() > 1e-8 || dual.lambda <= d {
                    failures += 1;
                }
            }
        }
    }
    Check::counted(
        "min-flip-exponent-dual-routes",
        cases,
        failures,
        "closed form vs piecewise variational sup".into(),
    )
}

fn check_exponent_ordering(opts: &VerifyOptions) -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    let params: Vec<f64> = match opts.grid {
        GridDensity::Normal => (1..=9).map(|i| i as f64 * 0.1).collect(),
        GridDensity::Fine => (1..=39).map(|i| i as f64 * 0.025).collect(),
    };
    for &a in &alpha_grid() {
        let alpha = MomentOrder::new(a).unwrap();
        for &p in &params {
            for m in [1u32, 2, 3, 5, 8] {
                let agents = AgentCount::new(m).unwrap();
                let mut channels = vec![ChannelSpec::bec(p).unwrap()];
                if p <= 0.5 {
                    channels.push(ChannelSpec::bsc(p).unwrap());
                }
                for channel in channels {
                    let c = exponent(&SchemeSpec::centralized(agents), &channel, alpha)
                        .unwrap()
                        .value;
                    let d = exponent(&SchemeSpec::decentralized(agents), &channel, alpha)
                        .unwrap()
                        .value;
                    let s = exponent(&SchemeSpec::single(), &channel, alpha).unwrap().value;
                    cases += 1;
                    if !(c <= d + 1e-9 && d <= s + 1e-9) {
                        failures += 1;
                    }
                }
            }
        }
    }
    Check::counted(
        "exponent-ordering",
        cases,
        failures,
        "centralized <= decentralized <= single".into(),
    )
}

fn check_exponent_monotone_in_agents() -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    let channels = [ChannelSpec::bec(0.5).unwrap(), ChannelSpec::bsc(0.25).unwrap()];
    for &a in &alpha_grid() {
        let alpha = MomentOrder::new(a).unwrap();
        for channel in &channels {
            for centralized in [true, false] {
                let mut prev = f64::INFINITY;
                for m in 1..=10u32 {
                    let agents = AgentCount::new(m).unwrap();
                    let scheme = if centralized {
                        SchemeSpec::centralized(agents)
                    } else {
                        SchemeSpec::decentralized(agents)
                    };
                    let v = exponent(&scheme, channel, alpha).unwrap().value;
                    cases += 1;
                    if v > prev + 1e-9 {
                        failures += 1;
                    }
                    prev = v;
                }
            }
        }
    }
    Check::counted(
        "exponent-monotone-in-agents",
        cases,
        failures,
        "non-increasing in the agent count".into(),
    )
}

fn check_decentralized_erasure_lower_bound() -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    for &a in &alpha_grid() {
        let alpha = MomentOrder::new(a).unwrap();
        for e in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let eps = Prob::new(e).unwrap();
            let mut prev_gap = f64::INFINITY;
            for m in [1u32, 2, 4, 8, 16, 32, 64] {
                let v = decentralized_bec(alpha, eps, AgentCount::new(m).unwrap())
                    .unwrap()
                    .value;
                let gap = v - a * e;
                cases += 1;
                if gap < -1e-12 || gap > prev_gap + 1e-12 {
                    failures += 1;
                }
                prev_gap = gap;
            }
            // The bound becomes tight as agents multiply.
            cases += 1;
            if prev_gap > 0.05 * a {
                failures += 1;
            }
        }
    }
    Check::counted(
        "decentralized-erasure-lower-bound",
        cases,
        failures,
        "exponent >= alpha*eps, tight for many agents".into(),
    )
}

/// The pooled-erasure curve `ε -> log2(1 + ε^m)` is convex with the
/// analytic derivative `m ε^{m-1} / (1 + ε^m)` (natural-log curve), so it
/// starts flat for small ε.
fn check_pooled_erasure_convexity(opts: &VerifyOptions) -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    let steps: &[f64] = match opts.grid {
        GridDensity::Normal => &[1e-3],
        GridDensity::Fine => &[1e-3, 2.5e-4],
    };
    for &h in steps {
        for m in [2u32, 3, 5] {
            let f2 = |x: f64| (1.0 + x.powi(m as i32)).log2();
            let fe = |x: f64| (1.0 + x.powi(m as i32)).ln();
            let mut i = 1usize;
            while (i as f64) * h < 1.0 - h / 2.0 {
                let e = i as f64 * h;
                let second = f2(e + h) - 2.0 * f2(e) + f2(e - h);
                let central = (fe(e + h) - fe(e - h)) / (2.0 * h);
                let analytic = m as f64 * e.powi(m as i32 - 1) / (1.0 + e.powi(m as i32));
                cases += 1;
                if second < -1e-12 || (central - analytic).abs() > 1e-5 {
                    failures += 1;
                }
                i += 1;
            }
            // Verify the flat start through the pooled exponent itself.
            let near_zero = centralized_bec(
                MomentOrder::ONE,
                Prob::new(0.01).unwrap(),
                AgentCount::new(m).unwrap(),
            )
            .unwrap()
            .value;
            cases += 1;
            if near_zero / 0.01 > 0.05 {
                failures += 1;
            }
        }
    }
    Check::counted(
        "pooled-erasure-convexity-derivative",
        cases,
        failures,
        "second differences >= 0 and derivative matches".into(),
    )
}

fn check_pair_bound_below_entropy(opts: &VerifyOptions) -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    let step: f64 = match opts.grid {
        GridDensity::Normal => 0.01,
        GridDensity::Fine => 0.0025,
    };
    let mut d: f64 = 0.01;
    while d <= 0.49 + 1e-12 {
        let lhs = (4.0 * d * (1.0 - d) + 1.0).log2();
        let rhs = binary_shannon_entropy(Prob::new(d).unwrap());
        cases += 1;
        if !(lhs <= rhs && rhs - lhs > 1e-9) {
            failures += 1;
        }
        d += step;
    }
    // Equality at the endpoints.
    cases += 1;
    if ((4.0 * 0.25 + 1.0f64).log2() - 1.0).abs() > 1e-12 {
        failures += 1;
    }
    Check::counted(
        "pooled-pair-bound-below-entropy",
        cases,
        failures,
        "log2(4d(1-d)+1) <= H(d), strict inside".into(),
    )
}

/// Majority-vote preprocessing can only hurt the pooled attacker, so the
/// pooled exponent sits below the voted single-agent exponent for odd
/// committees, and both decay toward zero.
fn check_majority_vote_chain() -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    let d = Prob::new(0.25).unwrap();
    let mut prev_pooled = f64::INFINITY;
    for m in [1u32, 3, 5, 7, 9, 15, 21] {
        let agents = AgentCount::new(m).unwrap();
        let pooled = centralized_bsc_generic(MomentOrder::ONE, d, agents).unwrap().value;
        let MajorityFlip::Symmetric(dm) =
            majority_flip_prob(d, agents, TieRule::Randomized).unwrap()
        else {
            unreachable!("odd committees are symmetric")
        };
        let voted = single_bsc(MomentOrder::ONE, Prob::new(dm).unwrap()).unwrap().value;
        cases += 1;
        if pooled > voted + 1e-12 || pooled > prev_pooled {
            failures += 1;
        }
        prev_pooled = pooled;
    }
    cases += 1;
    if prev_pooled > 0.07 {
        failures += 1;
    }
    Check::counted(
        "majority-vote-chain",
        cases,
        failures,
        "pooled <= voted single agent, both decaying".into(),
    )
}

fn check_erasure_moment_identity() -> Check {
    let mut cases = 0u64;
    let mut failures = 0u64;
    for n in 1..=12u32 {
        for e in [0.25, 0.5, 0.75] {
            let r = exact_moment_single_bec(MomentOrder::ONE, Prob::new(e).unwrap(), n).unwrap();
            let expected = ((1.0 + e).powi(n as i32) + 1.0) / 2.0;
            cases += 1;
            if (r.value - expected).abs() > 1e-12 * expected {
                failures += 1;
            }
        }
    }
    Check::counted(
        "erasure-moment-identity",
        cases,
        failures,
        "exact mean vs ((1+eps)^n + 1)/2".into(),
    )
}
