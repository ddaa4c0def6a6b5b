//! Exact pattern counting, bound evaluation and code verification.
//!
//! Counts are arbitrary-precision integers so they can serve as oracles;
//! bound formulas are evaluated in double precision. Comparisons that the
//! verification suite relies on are done on exact integers.

use num_bigint::BigUint;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bitword::{self, apply_pattern, apply_pattern_prefix, ErrorPattern, ReceivedWord, Word};
use crate::decoder::{self, DecodeReport, DecodeStatus, StreamDecoder};
use crate::error::Error;
use crate::farcode::{FarCode, FarCodeParams};
use crate::vt::checksum_bits;

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut result = BigUint::from(1u32);
    for i in 0..k {
        result = result * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    result
}

/// Number of patterns with at most `t` errors over `n` positions:
/// `sum_k C(n,k) * 3^k`.
pub fn count_patterns(n: u64, t: u64) -> BigUint {
    let mut total = BigUint::ZERO;
    for k in 0..=t.min(n) {
        total += binomial(n, k) * BigUint::from(3u32).pow(k as u32);
    }
    total
}

/// Exact counts of all patterns and of the `gap`-far ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarCount {
    pub n: u64,
    pub t: u64,
    pub gap: u64,
    pub total: BigUint,
    pub far: BigUint,
}

impl FarCount {
    pub fn not_far(&self) -> BigUint {
        &self.total - &self.far
    }

    /// Exact test `not_far / total <= num / den` by cross-multiplication.
    pub fn fraction_not_far_at_most(&self, num: &BigUint, den: &BigUint) -> bool {
        self.not_far() * den <= num * &self.total
    }

    pub fn fraction_not_far_f64(&self) -> f64 {
        let scale = BigUint::from(1u64 << 53);
        let scaled = self.not_far() * &scale / &self.total;
        u64::try_from(&scaled)
            .map(|v| v as f64 / (1u64 << 53) as f64)
            .unwrap_or(1.0)
    }
}

/// Count patterns whose corrupted positions are pairwise at least `gap`
/// apart: placing k positions with gaps >= gap bijects with a plain
/// k-subset of `n - (k-1)(gap-1)` slots, so
/// `far = sum_k C(n - (k-1)(gap-1), k) * 3^k`.
pub fn count_far_patterns(n: u64, t: u64, gap: u64) -> Result<FarCount, Error> {
    if gap == 0 {
        return Err(Error::ZeroGap);
    }
    let mut far = BigUint::ZERO;
    for k in 0..=t.min(n) {
        let squeeze = k.saturating_sub(1) * (gap - 1);
        if squeeze > n || n - squeeze < k {
            continue; // no room: the binomial is zero
        }
        far += binomial(n - squeeze, k) * BigUint::from(3u32).pow(k as u32);
    }
    Ok(FarCount {
        n,
        t,
        gap,
        total: count_patterns(n, t),
        far,
    })
}

/// Evaluated bound formulas for one parameter set `(n, t, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub t: u64,
    pub d: u64,
    /// omega = 4n / (t^2 d).
    pub omega: f64,
    /// Block length P = d/4; fractional (with `p_exact = false`) when d is
    /// not divisible by 4.
    pub p: f64,
    pub p_exact: bool,
    /// delta(P) = (2P+1) / 2^(P-1).
    pub delta_p: f64,
    /// Redundancy upper bound n * 4 log2(2d) / d.
    pub redundancy_bound: f64,
    /// Rate lower bound 1 - redundancy_bound / n.
    pub rate_lower_bound: f64,
    /// Real-time error probability bound 11 t^2 d / n.
    pub error_prob_bound: f64,
    /// Far-code redundancy bound (n/P - 1) log2((2P+1)/(1-delta)) + log2 P + 2;
    /// undefined when delta(P) >= 1.
    pub far_redundancy_bound: Option<f64>,
    /// Redundancy lower bound n / (64(3P+6)) - 3.
    pub lower_bound_64: f64,
    /// Redundancy lower bound (n/(6P) - 1) log2(3P/64).
    pub lower_bound_seq: f64,
    /// Hypothesis t <= n^(1/3) / 6, checked exactly as 216 t^3 <= n.
    pub hyp_t: bool,
    /// Hypothesis 4t <= d <= 2n/(3 t^2), checked exactly.
    pub hyp_d: bool,
}

/// delta(P) = (2P+1) / 2^(P-1).
pub fn delta(p: f64) -> f64 {
    (2.0 * p + 1.0) / 2f64.powf(p - 1.0)
}

/// Evaluate every bound formula at `(n, t, d)`. Out-of-hypothesis inputs are
/// flagged, not rejected.
pub fn compute_bounds(n: u64, t: u64, d: u64) -> BoundReport {
    let nf = n as f64;
    let tf = t as f64;
    let df = d as f64;
    let omega = 4.0 * nf / (tf * tf * df);
    let p = df / 4.0;
    let p_exact = d.is_multiple_of(4);
    let delta_p = delta(p);
    let redundancy_bound = nf * 4.0 * (2.0 * df).log2() / df;
    let error_prob_bound = 11.0 * tf * tf * df / nf;
    let far_redundancy_bound = if delta_p < 1.0 {
        Some((nf / p - 1.0) * ((2.0 * p + 1.0) / (1.0 - delta_p)).log2() + p.log2() + 2.0)
    } else {
        None
    };
    let lower_bound_64 = nf / (64.0 * (3.0 * p + 6.0)) - 3.0;
    let lower_bound_seq = (nf / (6.0 * p) - 1.0) * (3.0 * p / 64.0).log2();
    let hyp_t = 216u128 * (t as u128).pow(3) <= n as u128;
    let hyp_d = 4 * t <= d && 3 * (t as u128).pow(2) * d as u128 <= 2 * n as u128;
    BoundReport {
        n,
        t,
        d,
        omega,
        p,
        p_exact,
        delta_p,
        redundancy_bound,
        rate_lower_bound: 1.0 - redundancy_bound / nf,
        error_prob_bound,
        far_redundancy_bound,
        lower_bound_64,
        lower_bound_seq,
        hyp_t,
        hyp_d,
    }
}

/// Exact comparison of the measured non-far fraction against the two bound
/// expressions, for `Q = 3P` with `P = d/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionCheck {
    pub n: u64,
    pub t: u64,
    pub d: u64,
    pub p: u64,
    pub gap: u64,
    pub count: FarCount,
    pub omega: f64,
    pub fraction_not_far: f64,
    pub bound_42_over_omega: f64,
    pub bound_eq_error_prob: f64,
    /// Exact: not_far/total <= 42/omega, i.e. not_far * 4n <= 42 t^2 d * total.
    pub pass_42: bool,
    /// Exact: not_far/total <= 11 t^2 d / n.
    pub pass_error_prob: bool,
    pub hyp_t: bool,
    pub hyp_d: bool,
}

impl FractionCheck {
    pub fn pass(&self) -> bool {
        self.pass_42 && self.pass_error_prob
    }
}

/// Compare the exact fraction of non-far patterns against `42/omega` and the
/// error-probability bound. Requires `d` divisible by 4 so `Q = 3d/4` is an
/// integer.
pub fn verify_fraction_bound(n: u64, t: u64, d: u64) -> Result<FractionCheck, Error> {
    if !d.is_multiple_of(4) {
        return Err(Error::DelayNotDivisible { d });
    }
    let p = d / 4;
    let gap = 3 * p;
    let count = count_far_patterns(n, t, gap)?;
    let not_far = count.not_far();
    let t2d = BigUint::from(t) * BigUint::from(t) * BigUint::from(d);
    // not_far/total <= 42/omega = 42 t^2 d / 4n
    let pass_42 = &not_far * BigUint::from(4 * n) <= BigUint::from(42u32) * &t2d * &count.total;
    // not_far/total <= 11 t^2 d / n
    let pass_error_prob = &not_far * BigUint::from(n) <= BigUint::from(11u32) * &t2d * &count.total;
    let bounds = compute_bounds(n, t, d);
    Ok(FractionCheck {
        n,
        t,
        d,
        p,
        gap,
        fraction_not_far: count.fraction_not_far_f64(),
        count,
        omega: bounds.omega,
        bound_42_over_omega: 42.0 / bounds.omega,
        bound_eq_error_prob: bounds.error_prob_bound,
        pass_42,
        pass_error_prob,
        hyp_t: bounds.hyp_t,
        hyp_d: bounds.hyp_d,
    })
}

/// How `verify_code` exercises the code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every codeword crossed with every far pattern.
    Exhaustive,
    /// `count` random (codeword, far pattern) trials from `seed`.
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Also run the streaming decoder over every prefix and check the
    /// committed bits against the source (the real-time delay contract).
    pub realtime: bool,
    /// Worker threads for partitioning the grid.
    pub jobs: usize,
    /// Pattern gap to test against; defaults to 3P, the guaranteed regime.
    /// Smaller gaps (down to P-far) are an experiment, not a promise.
    pub gap: Option<usize>,
    /// Cap on exhaustive pattern enumeration.
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            realtime: true,
            jobs: 1,
            gap: None,
            budget: 50_000_000,
        }
    }
}

/// A reproducible witness for one failed check.
#[derive(Debug, Clone)]
pub struct VerifyFailure {
    pub word: Word,
    pub pattern: ErrorPattern,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub decode_checks: u64,
    pub realtime_checks: u64,
    pub distinctness_checks: u64,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(&mut self, other: VerifyReport) {
        self.decode_checks += other.decode_checks;
        self.realtime_checks += other.realtime_checks;
        self.distinctness_checks += other.distinctness_checks;
        self.failures.extend(other.failures);
    }
}

/// Run one (codeword, pattern) trial: batch decode, and optionally the full
/// streaming sweep that checks the 4P-delay commitments after every prefix.
fn run_trial<F>(
    params: &FarCodeParams,
    word: &Word,
    pattern: &ErrorPattern,
    decode_fn: &F,
    realtime: bool,
    report: &mut VerifyReport,
) where
    F: Fn(&ReceivedWord, &FarCodeParams) -> DecodeReport,
{
    let received = apply_pattern(word, pattern).expect("pattern length matches word");
    report.decode_checks += 1;
    let decoded = decode_fn(&received, params);
    match (&decoded.status, &decoded.recovered) {
        (DecodeStatus::Failed, _) => report.failures.push(VerifyFailure {
            word: word.clone(),
            pattern: pattern.clone(),
            detail: format!("decode failed: {:?}", decoded.failure),
        }),
        (_, Some(got)) if got != word => report.failures.push(VerifyFailure {
            word: word.clone(),
            pattern: pattern.clone(),
            detail: format!("decoded to wrong word {got}"),
        }),
        _ => {}
    }
    if !realtime {
        return;
    }
    report.realtime_checks += 1;
    let n = params.n;
    let delay = 4 * params.p;
    let mut stream = StreamDecoder::new(*params);
    let mut emitted = Vec::new();
    // received length after corrupting the first z+delay source bits
    let mut prefix_lens = Vec::new();
    if n > delay {
        for z in 1..=n - delay {
            let plen = apply_pattern_prefix(word, pattern, z + delay)
                .expect("prefix in range")
                .len();
            prefix_lens.push((plen, z));
        }
    }
    for (fed, symbol) in received.symbols().iter().enumerate() {
        emitted.extend(stream.feed(*symbol));
        let fed = fed + 1;
        for &(plen, z) in &prefix_lens {
            if plen == fed {
                let committed = stream.committed_bits();
                if committed < z || emitted[..z] != word.bits()[..z] {
                    report.failures.push(VerifyFailure {
                        word: word.clone(),
                        pattern: pattern.clone(),
                        detail: format!(
                            "after prefix z={z} (+{delay}) committed {committed} bits, need {z} matching the source"
                        ),
                    });
                    return;
                }
            }
        }
    }
    let (tail, final_report) = stream.finish();
    emitted.extend(tail);
    if final_report.status == DecodeStatus::Failed || emitted != word.bits() {
        report.failures.push(VerifyFailure {
            word: word.clone(),
            pattern: pattern.clone(),
            detail: "stream output differs from source".into(),
        });
    }
}

fn verify_grid<F>(
    params: &FarCodeParams,
    trials: &[(Word, ErrorPattern)],
    decode_fn: &F,
    opts: &VerifyOptions,
) -> VerifyReport
where
    F: Fn(&ReceivedWord, &FarCodeParams) -> DecodeReport + Sync,
{
    let jobs = opts.jobs.max(1).min(trials.len().max(1));
    if jobs <= 1 {
        let mut report = VerifyReport::default();
        for (word, pattern) in trials {
            run_trial(params, word, pattern, decode_fn, opts.realtime, &mut report);
        }
        return report;
    }
    let chunk = trials.len().div_ceil(jobs);
    let mut merged = VerifyReport::default();
    std::thread::scope(|scope| {
        let handles: Vec<_> = trials
            .chunks(chunk)
            .map(|slice| {
                scope.spawn(move || {
                    let mut report = VerifyReport::default();
                    for (word, pattern) in slice {
                        run_trial(params, word, pattern, decode_fn, opts.realtime, &mut report);
                    }
                    report
                })
            })
            .collect();
        for h in handles {
            merged.merge(h.join().expect("verification worker panicked"));
        }
    });
    merged
}

/// All patterns with pairwise gaps at least `gap`, up to the largest error
/// count that fits.
pub fn far_patterns_with_gap(
    n: usize,
    gap: usize,
    budget: u64,
) -> Result<Vec<ErrorPattern>, Error> {
    if gap == 0 {
        return Err(Error::ZeroGap);
    }
    let t_max = (n - 1) / gap + 1;
    let mut out = Vec::new();
    for g in bitword::enumerate_patterns(n, t_max, budget)? {
        if g.is_far(gap) {
            out.push(g);
        }
    }
    Ok(out)
}

/// All far patterns for a code: gap `3P`, up to the largest error count that
/// fits.
pub fn far_patterns_for(params: &FarCodeParams, budget: u64) -> Result<Vec<ErrorPattern>, Error> {
    far_patterns_with_gap(params.n, 3 * params.p, budget)
}

/// Check a built code against far patterns, exhaustively or by sampling.
/// Exhaustive mode also cross-checks prefix distinctness on a sample of
/// trial pairs: corruptions that collide must agree on the decided prefix.
pub fn verify_code(
    code: &FarCode,
    mode: VerifyMode,
    opts: &VerifyOptions,
) -> Result<VerifyReport, Error> {
    let params = *code.params();
    let gap = opts.gap.unwrap_or(3 * params.p);
    let trials: Vec<(Word, ErrorPattern)> = match mode {
        VerifyMode::Exhaustive => {
            let patterns = far_patterns_with_gap(params.n, gap, opts.budget)?;
            code.codewords()
                .flat_map(|w| patterns.iter().map(move |g| (w.clone(), g.clone())))
                .collect()
        }
        VerifyMode::Sampled { count, seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let t_max = (params.n - 1) / gap + 1;
            let mut trials = Vec::with_capacity(count as usize);
            for _ in 0..count {
                let digits = code.capacity_bits();
                let mut msg = BigUint::ZERO;
                for _ in 0..digits.div_ceil(64) {
                    msg = (msg << 64) | BigUint::from(Rng::next_u64(&mut rng));
                }
                msg >>= (digits.div_ceil(64) * 64 - digits) as usize;
                let word = code.encode(&msg)?;
                let pattern = bitword::sample_far_pattern_with(params.n, t_max, gap, &mut rng)?;
                trials.push((word, pattern));
            }
            trials
        }
    };
    let mut report = verify_grid(&params, &trials, &decoder::decode, opts);
    if opts.realtime && params.n > 4 * params.p {
        report.distinctness_checks = distinctness_sample(&params, &trials);
    }
    Ok(report)
}

/// Direct prefix-distinctness probe: for sampled pairs of trials whose
/// corrupted prefixes collide, the decided source prefix must agree.
fn distinctness_sample(params: &FarCodeParams, trials: &[(Word, ErrorPattern)]) -> u64 {
    let delay = 4 * params.p;
    let mut checks = 0;
    let step = (trials.len() / 512).max(1);
    let picks: Vec<_> = trials.iter().step_by(step).collect();
    for (i, (w1, g1)) in picks.iter().enumerate() {
        for (w2, g2) in picks.iter().skip(i + 1) {
            for z in [1, (params.n - delay).div_ceil(2), params.n - delay] {
                let f1 = apply_pattern_prefix(w1, g1, z + delay).unwrap();
                let f2 = apply_pattern_prefix(w2, g2, z + delay).unwrap();
                checks += 1;
                if f1 == f2 {
                    assert_eq!(
                        w1.bits()[..z],
                        w2.bits()[..z],
                        "colliding corrupted prefixes decide different sources"
                    );
                }
            }
        }
    }
    checks
}

/// Sampled verification that never materializes codebooks: codewords are
/// assembled from rejection-sampled blocks, so it scales to block lengths
/// where enumeration is off the table.
pub fn verify_sampled(
    params: &FarCodeParams,
    count: u64,
    seed: u64,
    opts: &VerifyOptions,
) -> Result<VerifyReport, Error> {
    params.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let interior = params.interior_code();
    let final_code = params.final_code();
    let sample_block = |rng: &mut ChaCha12Rng, code: &crate::vt::BlockCode| -> Vec<u8> {
        loop {
            let bits: Vec<u8> = (0..code.len).map(|_| rng.random_range(0..2u8)).collect();
            if checksum_bits(&bits, code.modulus()) == code.residue
                && !(code.exclude_constant
                    && (bits.iter().all(|&b| b == 0) || bits.iter().all(|&b| b == 1)))
            {
                return bits;
            }
        }
    };
    // small pools keep the rejection cost off the per-trial path
    let pool: Vec<Vec<u8>> = (0..256)
        .map(|_| sample_block(&mut rng, &interior))
        .collect();
    let final_pool: Vec<Vec<u8>> = (0..64)
        .map(|_| sample_block(&mut rng, &final_code))
        .collect();
    let gap = opts.gap.unwrap_or(3 * params.p);
    let t_max = (params.n - 1) / gap + 1;
    let mut trials = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let mut bits = Vec::with_capacity(params.n);
        for _ in 0..params.t - 1 {
            bits.extend_from_slice(&pool[rng.random_range(0..pool.len())]);
        }
        bits.extend_from_slice(&final_pool[rng.random_range(0..final_pool.len())]);
        let word = Word::new(bits)?;
        let pattern = bitword::sample_far_pattern_with(params.n, t_max, gap, &mut rng)?;
        trials.push((word, pattern));
    }
    Ok(verify_grid(params, &trials, &decoder::decode, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(10, 5), BigUint::from(252u32));
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
        assert_eq!(binomial(4, 7), BigUint::ZERO);
        assert_eq!(binomial(1000, 2), BigUint::from(499500u32));
    }

    #[test]
    fn pattern_counts() {
        assert_eq!(count_patterns(5, 1), BigUint::from(16u32));
        assert_eq!(count_patterns(3, 3), BigUint::from(64u32));
        assert_eq!(count_patterns(2, 1), BigUint::from(7u32));
        // t beyond n saturates
        assert_eq!(count_patterns(3, 9), BigUint::from(64u32));
    }

    #[test]
    fn far_counts() {
        let c = count_far_patterns(6, 2, 3).unwrap();
        assert_eq!(c.far, BigUint::from(73u32)); // 1 + 18 + 9*C(4,2)
        assert_eq!(c.total, BigUint::from(154u32)); // 1 + 18 + 9*C(6,2)
                                                    // gap 1 puts no constraint at all
        let c = count_far_patterns(9, 3, 1).unwrap();
        assert_eq!(c.far, c.total);
        // single errors are vacuously far
        let c = count_far_patterns(9, 1, 100).unwrap();
        assert_eq!(c.far, c.total);
        // acceptance-scale spot value
        let c = count_far_patterns(30, 2, 15).unwrap();
        assert_eq!(c.far, BigUint::from(1171u32));
    }

    #[test]
    fn far_count_matches_enumeration() {
        for n in 1..=10usize {
            for t in 0..=3.min(n) {
                for gap in 1..=5usize {
                    let closed = count_far_patterns(n as u64, t as u64, gap as u64).unwrap();
                    let brute = bitword::enumerate_patterns(n, t, 1 << 24)
                        .unwrap()
                        .filter(|g| g.is_far(gap))
                        .count();
                    assert_eq!(closed.far, BigUint::from(brute), "n={n} t={t} gap={gap}");
                }
            }
        }
    }

    #[test]
    fn bounds_delta_values() {
        assert!((delta(6.0) - 0.40625).abs() < 1e-15); // 13/32
        assert!((delta(5.0) - 0.6875).abs() < 1e-15); // 11/16
        let r = compute_bounds(100, 2, 12);
        assert!(!r.p_exact || r.p == 3.0);
    }

    #[test]
    fn example_scale_bounds() {
        let r = compute_bounds(100_000_000, 10, 4000);
        assert!(r.p_exact && r.p == 1000.0);
        assert!((r.omega - 1000.0).abs() < 1e-12);
        assert!(
            r.rate_lower_bound >= 0.88,
            "rate bound {}",
            r.rate_lower_bound
        );
        assert!((r.error_prob_bound - 0.044).abs() < 1e-15);
        assert!(r.hyp_t && r.hyp_d);
        // lower bounds evaluate without drama
        assert!((r.lower_bound_64 - (1e8 / (64.0 * 3006.0) - 3.0)).abs() < 1e-9);
        assert!(r.lower_bound_seq > 0.0);
    }

    #[test]
    fn scaling_family_is_exact_at_dyadic_points() {
        // t = n^(1/4), d = 4 t log2(n) at n = 2^12 gives 11 t^2 d / n = 66,
        // which equals 44 log2(n) / n^(1-3/4) exactly.
        let n = 1u64 << 12;
        let t = 8u64;
        let d = 4 * t * 12;
        let r = compute_bounds(n, t, d);
        assert_eq!(r.error_prob_bound, 66.0);
        assert_eq!(44.0 * 12.0 / 8.0, 66.0);
        // algebraic identity 11 t^2 d / n = 44 / omega
        assert!((r.error_prob_bound - 44.0 / r.omega).abs() < 1e-12);
    }

    #[test]
    fn fraction_bound_example() {
        let check = verify_fraction_bound(3000, 2, 48).unwrap();
        assert_eq!(check.p, 12);
        assert_eq!(check.gap, 36);
        assert!((check.omega - 62.5).abs() < 1e-12);
        assert!(check.hyp_t && check.hyp_d);
        assert!(check.pass_42 && check.pass_error_prob);
        assert!(check.fraction_not_far <= 42.0 / 62.5);
        assert!(matches!(
            verify_fraction_bound(100, 2, 50),
            Err(Error::DelayNotDivisible { .. })
        ));
    }

    #[test]
    fn fraction_is_nonincreasing_in_n() {
        // Monotonicity kicks in once t-error far patterns fit at all, i.e.
        // n >= (t-1)*gap + 1. Below that threshold the fraction can grow:
        // at t=3, gap=2 it climbs from 45/64 (n=3) to 135/175 (n=4).
        let low = count_far_patterns(3, 3, 2).unwrap();
        let high = count_far_patterns(4, 3, 2).unwrap();
        assert!(low.not_far() * &high.total < high.not_far() * &low.total);
        for t in 1..=3u64 {
            for gap in 2..=6u64 {
                let mut prev: Option<FarCount> = None;
                for n in ((t - 1) * gap + 1)..40 {
                    let cur = count_far_patterns(n, t, gap).unwrap();
                    if let Some(p) = prev {
                        // p.not_far/p.total >= cur.not_far/cur.total
                        assert!(
                            p.not_far() * &cur.total >= cur.not_far() * &p.total,
                            "n={n} t={t} gap={gap}"
                        );
                    }
                    prev = Some(cur);
                }
            }
        }
    }

    #[test]
    fn exhaustive_verify_small_code() {
        let code = crate::farcode::make_code(12, 3, None, None).unwrap();
        let report = verify_code(
            &code,
            VerifyMode::Exhaustive,
            &VerifyOptions {
                realtime: true,
                jobs: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(report.pass(), "{:?}", report.failures.first());
        assert!(report.decode_checks > 0);
    }

    #[test]
    fn sampled_verify_is_deterministic() {
        let params = FarCodeParams::derive(60, 5, None, None).unwrap();
        let a = verify_sampled(&params, 40, 11, &VerifyOptions::default()).unwrap();
        let b = verify_sampled(&params, 40, 11, &VerifyOptions::default()).unwrap();
        assert_eq!(a.decode_checks, b.decode_checks);
        assert!(a.pass() && b.pass());
        assert_eq!(a.failures.len(), b.failures.len());
    }

    #[test]
    fn broken_decoder_yields_witnesses() {
        // Harness sanity: a sabotaged corrector must produce (x, g) witnesses.
        let code = crate::farcode::make_code(12, 3, None, None).unwrap();
        let params = *code.params();
        let patterns = far_patterns_for(&params, 1 << 20).unwrap();
        let trials: Vec<_> = code
            .codewords()
            .take(3)
            .flat_map(|w| patterns.iter().take(5).map(move |g| (w.clone(), g.clone())))
            .collect();
        let broken = |y: &ReceivedWord, p: &FarCodeParams| {
            let mut r = decoder::decode(y, p);
            if let Some(w) = r.recovered.take() {
                let mut bits = w.bits().to_vec();
                bits[0] ^= 1;
                r.recovered = Some(Word::new(bits).unwrap());
            }
            r
        };
        let report = verify_grid(
            &params,
            &trials,
            &broken,
            &VerifyOptions {
                realtime: false,
                jobs: 1,
                ..Default::default()
            },
        );
        assert_eq!(report.failures.len(), trials.len());
        assert!(report.failures[0].detail.contains("wrong word"));
    }
}
