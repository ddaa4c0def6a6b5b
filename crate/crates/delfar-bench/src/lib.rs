//! Benchmark-only crate; see `benches/codec.rs`. Shared helpers for setting
//! up representative decode workloads live here.

use num_bigint::BigUint;

use delfar::bitword::{apply_pattern, sample_far_pattern, ReceivedWord};
use delfar::farcode::{make_code, FarCode};

/// A code, one codeword and a batch of far corruptions of it.
pub struct Workload {
    pub code: FarCode,
    pub received: Vec<ReceivedWord>,
}

pub fn decode_workload(n: usize, p: usize, trials: u64) -> Workload {
    let code = make_code(n, p, None, None).unwrap();
    let word = code.encode(&BigUint::from(1u32)).unwrap();
    let gap = 3 * p;
    let t_max = (n - 1) / gap + 1;
    let received = (0..trials)
        .map(|seed| {
            let pattern = sample_far_pattern(n, t_max, gap, seed).unwrap();
            apply_pattern(&word, &pattern).unwrap()
        })
        .collect();
    Workload { code, received }
}
