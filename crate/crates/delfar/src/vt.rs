//! Varshamov-Tenengolts block codes with modulus 2m+1.
//!
//! A length-m block belongs to class `a` when the weighted checksum
//! `sum(i * x_i) mod (2m+1)` equals `a`. Each class corrects one deletable
//! error per block: a single deletion, erasure or substitution. Codebooks can
//! be materialized (sorted, rankable, needed for encoding) or used purely
//! through checksum membership, which is all decoding requires.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::bitword::{Symbol, Word};
use crate::error::Error;

/// Largest m for which a codebook is materialized by full enumeration.
pub const MAX_CODEBOOK_BITS: usize = 24;
/// Largest m for which class sizes are computed.
pub const MAX_CLASS_LEN: usize = 4096;

/// A block-level code identified by length, residue and whether the two
/// constant words are excluded. Membership is a checksum test; nothing is
/// materialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockCode {
    pub len: usize,
    pub residue: u64,
    pub exclude_constant: bool,
}

impl BlockCode {
    pub fn new(len: usize, residue: u64, exclude_constant: bool) -> Result<Self, Error> {
        if len == 0 || len > MAX_CLASS_LEN {
            return Err(Error::BlockLength {
                len,
                max: MAX_CLASS_LEN,
            });
        }
        let modulus = 2 * len as u64 + 1;
        if residue >= modulus {
            return Err(Error::ResidueRange { residue, modulus });
        }
        Ok(BlockCode {
            len,
            residue,
            exclude_constant,
        })
    }

    pub fn modulus(&self) -> u64 {
        2 * self.len as u64 + 1
    }

    pub fn contains_bits(&self, bits: &[u8]) -> bool {
        if bits.len() != self.len {
            return false;
        }
        if self.exclude_constant && (bits.iter().all(|&b| b == 0) || bits.iter().all(|&b| b == 1)) {
            return false;
        }
        checksum_bits(bits, self.modulus()) == self.residue
    }
}

/// Weighted checksum of a bit block: `sum((i+1) * bits[i]) mod modulus`.
pub fn checksum_bits(bits: &[u8], modulus: u64) -> u64 {
    let mut sum = 0u64;
    for (i, &b) in bits.iter().enumerate() {
        if b != 0 {
            sum += i as u64 + 1;
        }
    }
    sum % modulus
}

/// Checksum of a symbol block, skipping an erased position. At most one
/// erasure is accepted.
pub fn checksum(symbols: &[Symbol], modulus: u64) -> Result<u64, Error> {
    let mut sum = 0u64;
    let mut erasures = 0usize;
    for (i, s) in symbols.iter().enumerate() {
        match s.bit() {
            Some(0) => {}
            Some(_) => sum += i as u64 + 1,
            None => erasures += 1,
        }
    }
    if erasures > 1 {
        return Err(Error::TooManyErasures { count: erasures });
    }
    Ok(sum % modulus)
}

/// `(checksum(block) - residue) mod modulus`; zero means the block is
/// consistent with its code.
pub fn checksum_difference(block: &[Symbol], code: &BlockCode) -> Result<u64, Error> {
    let m = code.modulus();
    let cs = checksum(block, m)?;
    Ok((cs + m - code.residue) % m)
}

/// A materialized codebook: every member of one residue class, packed into
/// u32 words (first bit most significant) and kept in lexicographic order.
#[derive(Debug, Clone)]
pub struct Codebook {
    code: BlockCode,
    words: Vec<u32>,
}

impl Codebook {
    pub fn code(&self) -> &BlockCode {
        &self.code
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, index: usize) -> Word {
        Word::from_packed(self.words[index], self.code.len)
    }

    /// Index of `w` in lexicographic order, if present.
    pub fn rank(&self, w: &Word) -> Option<usize> {
        if w.len() != self.code.len {
            return None;
        }
        let mut packed = 0u32;
        for &b in w.bits() {
            packed = (packed << 1) | b as u32;
        }
        self.words.binary_search(&packed).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Word> + '_ {
        self.words
            .iter()
            .map(move |&v| Word::from_packed(v, self.code.len))
    }

    /// Dump format: header `m=<m> a=<a> modulus=<2m+1> excluded=<bool>`, then
    /// one codeword per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "m={} a={} modulus={} excluded={}",
            self.code.len,
            self.code.residue,
            self.code.modulus(),
            self.code.exclude_constant
        );
        for w in self.iter() {
            let _ = writeln!(out, "{w}");
        }
        out
    }
}

/// Enumerate the full residue class for `(m, a)`, dropping the constant words
/// when asked.
pub fn build_codebook(m: usize, a: u64, exclude_constant: bool) -> Result<Codebook, Error> {
    if m > MAX_CODEBOOK_BITS {
        return Err(Error::CodebookBudget { m });
    }
    let code = BlockCode::new(m, a, exclude_constant)?;
    let modulus = code.modulus();
    let ones = ((1u64 << m) - 1) as u32;
    let mut words = Vec::new();
    for v in 0u64..(1u64 << m) {
        let v = v as u32;
        // 1-based position i of the word is bit (m - i) of v
        let mut sum = 0u64;
        let mut rest = v;
        while rest != 0 {
            let tz = rest.trailing_zeros() as usize;
            sum += (m - tz) as u64;
            rest &= rest - 1;
        }
        if sum % modulus == a {
            if exclude_constant && (v == 0 || v == ones) {
                continue;
            }
            words.push(v);
        }
    }
    // already ascending = lexicographic under the MSB-first packing
    Ok(Codebook { code, words })
}

/// Exact sizes of all residue classes for length `m`, indexed by residue.
/// Dynamic program over positions; O(m * modulus) big-int additions.
pub fn class_sizes(m: usize) -> Result<Vec<BigUint>, Error> {
    if m == 0 || m > MAX_CLASS_LEN {
        return Err(Error::BlockLength {
            len: m,
            max: MAX_CLASS_LEN,
        });
    }
    let modulus = 2 * m + 1;
    let mut dp = vec![BigUint::ZERO; modulus];
    dp[0] = BigUint::from(1u32);
    for i in 1..=m {
        let mut next = dp.clone();
        for (r, slot) in next.iter_mut().enumerate() {
            let from = (r + modulus - (i % modulus)) % modulus;
            *slot += &dp[from];
        }
        dp = next;
    }
    Ok(dp)
}

/// Size of one class, optionally with the constant words removed.
pub fn class_size(m: usize, a: u64, exclude_constant: bool) -> Result<BigUint, Error> {
    let sizes = class_sizes(m)?;
    let modulus = 2 * m as u64 + 1;
    if a >= modulus {
        return Err(Error::ResidueRange {
            residue: a,
            modulus,
        });
    }
    let mut size = sizes[a as usize].clone();
    if exclude_constant {
        if a == 0 {
            size -= 1u32; // all-zero word
        }
        if (m as u64 * (m as u64 + 1) / 2) % modulus == a {
            size -= 1u32; // all-one word
        }
    }
    Ok(size)
}

/// The residue whose class is largest, ties broken by the smallest residue.
pub fn best_residue_size(m: usize, exclude_constant: bool) -> Result<(u64, BigUint), Error> {
    let sizes = class_sizes(m)?;
    let modulus = 2 * m as u64 + 1;
    let all_ones = (m as u64 * (m as u64 + 1) / 2) % modulus;
    let mut best: Option<(u64, BigUint)> = None;
    for (a, size) in sizes.into_iter().enumerate() {
        let mut size = size;
        if exclude_constant {
            if a == 0 {
                size -= 1u32;
            }
            if all_ones == a as u64 {
                size -= 1u32;
            }
        }
        match &best {
            Some((_, s)) if *s >= size => {}
            _ => best = Some((a as u64, size)),
        }
    }
    Ok(best.unwrap())
}

/// Best residue together with its materialized codebook.
pub fn best_residue(m: usize, exclude_constant: bool) -> Result<(u64, Codebook), Error> {
    let (a, _) = best_residue_size(m, exclude_constant)?;
    Ok((a, build_codebook(m, a, exclude_constant)?))
}

fn bits_of(block: &[Symbol]) -> Result<Vec<u8>, Error> {
    block
        .iter()
        .enumerate()
        .map(|(i, s)| s.bit().ok_or(Error::ErasurePresent { position: i + 1 }))
        .collect()
}

/// Recover the codeword a single deletion was applied to. Tries every
/// insertion and keeps the ones whose checksum lands in the class; distinct
/// survivors would contradict single-deletion correctability and are
/// reported as [`Error::AmbiguousDeletion`].
pub fn correct_deletion(block: &[Symbol], code: &BlockCode) -> Result<Word, Error> {
    if block.len() + 1 != code.len {
        return Err(Error::BlockSize {
            len: block.len(),
            expected: code.len - 1,
        });
    }
    let y = bits_of(block)?;
    let m = code.len;
    let modulus = code.modulus();
    let base = checksum_bits(&y, modulus);
    // suffix_weight[p] = number of ones in y[p..]
    let mut suffix_weight = vec![0u64; y.len() + 1];
    for i in (0..y.len()).rev() {
        suffix_weight[i] = suffix_weight[i + 1] + y[i] as u64;
    }
    let mut found: Option<Vec<u8>> = None;
    // Insert bit b before 0-based index p: the checksum gains (p+1)*b plus
    // one for every shifted 1.
    for p in 0..=y.len() {
        for b in 0..2u64 {
            let cs = (base + (p as u64 + 1) * b + suffix_weight[p]) % modulus;
            if cs != code.residue {
                continue;
            }
            let mut cand = Vec::with_capacity(m);
            cand.extend_from_slice(&y[..p]);
            cand.push(b as u8);
            cand.extend_from_slice(&y[p..]);
            if code.exclude_constant
                && (cand.iter().all(|&x| x == 0) || cand.iter().all(|&x| x == 1))
            {
                continue;
            }
            match &found {
                None => found = Some(cand),
                Some(prev) if *prev == cand => {}
                Some(_) => return Err(Error::AmbiguousDeletion),
            }
        }
    }
    match found {
        Some(bits) => Word::new(bits),
        None => Err(Error::NoDeletionCandidate),
    }
}

/// Fill in a single erased position: the erased bit was a one exactly when
/// the checksum over the surviving positions misses the residue.
pub fn correct_erasure(block: &[Symbol], code: &BlockCode) -> Result<Word, Error> {
    if block.len() != code.len {
        return Err(Error::BlockSize {
            len: block.len(),
            expected: code.len,
        });
    }
    let erased: Vec<usize> = block
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_erasure())
        .map(|(i, _)| i)
        .collect();
    if erased.len() != 1 {
        return Err(Error::ErasureCount {
            count: erased.len(),
        });
    }
    let u = erased[0];
    let modulus = code.modulus();
    let cs = checksum(block, modulus)?;
    let difference = (code.residue + modulus - cs) % modulus;
    let bit = if difference == 0 {
        0
    } else if difference == u as u64 + 1 {
        1
    } else {
        return Err(Error::InconsistentErasure { difference });
    };
    let mut bits = bits_of(&block[..u])?;
    bits.push(bit);
    bits.extend(bits_of(&block[u + 1..])?);
    Word::new(bits)
}

/// Undo a single substitution via the closed-form rule: a difference D in
/// 1..=m says position D was flipped up (received one, restore zero); a
/// difference in m+1..=2m says position 2m+1-D was flipped down.
pub fn correct_substitution(block: &[Symbol], code: &BlockCode) -> Result<Word, Error> {
    if block.len() != code.len {
        return Err(Error::BlockSize {
            len: block.len(),
            expected: code.len,
        });
    }
    let mut bits = bits_of(block)?;
    let m = code.len as u64;
    let modulus = code.modulus();
    let difference = (checksum_bits(&bits, modulus) + modulus - code.residue) % modulus;
    if difference == 0 {
        return Word::new(bits);
    }
    let (position, expect, set_to) = if difference <= m {
        (difference as usize, 1u8, 0u8)
    } else {
        ((modulus - difference) as usize, 0u8, 1u8)
    };
    if bits[position - 1] != expect {
        return Err(Error::InconsistentFlip { difference });
    }
    bits[position - 1] = set_to;
    Word::new(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitword::ReceivedWord;

    fn symbols(s: &str) -> Vec<Symbol> {
        s.parse::<ReceivedWord>().unwrap().symbols().to_vec()
    }

    fn book(m: usize, a: u64) -> Codebook {
        build_codebook(m, a, false).unwrap()
    }

    #[test]
    fn checksum_examples() {
        assert_eq!(checksum(&symbols("0111"), 9).unwrap(), 0); // 2+3+4 = 9
        assert_eq!(checksum(&symbols("0000"), 9).unwrap(), 0);
        assert_eq!(checksum(&symbols("1e01"), 9).unwrap(), 5); // skip erased index 2
        assert!(matches!(
            checksum(&symbols("1ee1"), 9),
            Err(Error::TooManyErasures { .. })
        ));
    }

    #[test]
    fn codebook_m4() {
        let b = book(4, 0);
        let words: Vec<String> = b.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["0000", "0111"]);
        let excl = build_codebook(4, 0, true).unwrap();
        let words: Vec<String> = excl.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["0111"]);
    }

    #[test]
    fn codebook_m5_class1() {
        let b = book(5, 1);
        let words: Vec<String> = b.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["00111", "10000", "11011"]);
        for (i, w) in b.iter().enumerate() {
            assert_eq!(b.rank(&w), Some(i));
        }
    }

    #[test]
    fn classes_partition_the_cube() {
        for m in 1..=10usize {
            let sizes = class_sizes(m).unwrap();
            assert_eq!(sizes.len(), 2 * m + 1);
            let total: BigUint = sizes.iter().sum();
            assert_eq!(total, BigUint::from(1u64 << m), "m={m}");
            // sizes agree with materialized books
            for a in 0..=2 * m as u64 {
                let b = build_codebook(m, a, false).unwrap();
                assert_eq!(BigUint::from(b.len()), sizes[a as usize], "m={m} a={a}");
            }
        }
    }

    #[test]
    fn pigeonhole_lower_bound() {
        // max_a #VT_a(P) >= 2^P / (2P+1)
        for m in 5..=10usize {
            let (_, size) = best_residue_size(m, false).unwrap();
            let floor = (1u64 << m) / (2 * m as u64 + 1);
            assert!(size >= BigUint::from(floor.max(1)), "m={m}");
        }
        let (a, size) = best_residue_size(5, false).unwrap();
        assert_eq!((a, size), (0, BigUint::from(3u32)));
        assert!(best_residue_size(4, false).unwrap().1 >= BigUint::from(2u32));
        let (a1, q1) = best_residue_size(5, true).unwrap();
        assert_eq!((a1, q1), (1, BigUint::from(3u32)));
    }

    #[test]
    fn best_residue_is_deterministic() {
        for m in 2..=9usize {
            let (a, b) = best_residue(m, m > 2).unwrap();
            let (a2, b2) = best_residue(m, m > 2).unwrap();
            assert_eq!(a, a2);
            assert_eq!(b.len(), b2.len());
        }
    }

    #[test]
    fn deletion_examples() {
        let b = book(4, 0);
        let got = correct_deletion(&symbols("011"), b.code()).unwrap();
        assert_eq!(got.to_string(), "0111");
        let got = correct_deletion(&symbols("111"), b.code()).unwrap();
        assert_eq!(got.to_string(), "0111");
        assert!(matches!(
            correct_deletion(&symbols("10"), b.code()),
            Err(Error::BlockSize { .. })
        ));
    }

    #[test]
    fn erasure_examples() {
        let b = book(4, 0);
        let got = correct_erasure(&symbols("0e11"), b.code()).unwrap();
        assert_eq!(got.to_string(), "0111");
        for u in 0..4 {
            let mut s = symbols("0000");
            s[u] = Symbol::Erasure;
            assert_eq!(correct_erasure(&s, b.code()).unwrap().to_string(), "0000");
        }
        assert!(matches!(
            correct_erasure(&symbols("0011"), b.code()),
            Err(Error::ErasureCount { .. })
        ));
    }

    #[test]
    fn substitution_examples() {
        let b = book(4, 0);
        // 0101 comes from 0111 with position 3 flipped; D = 6, u = 9-6 = 3.
        let got = correct_substitution(&symbols("0101"), b.code()).unwrap();
        assert_eq!(got.to_string(), "0111");
        let clean = correct_substitution(&symbols("0111"), b.code()).unwrap();
        assert_eq!(clean.to_string(), "0111");
    }

    #[test]
    fn checksum_difference_examples() {
        let code = BlockCode::new(4, 0, false).unwrap();
        assert_eq!(checksum_difference(&symbols("0111"), &code).unwrap(), 0);
        assert_eq!(checksum_difference(&symbols("0101"), &code).unwrap(), 6);
    }

    /// Brute-force flip search; independent route for the closed-form rule.
    fn substitution_by_search(block: &[u8], code: &BlockCode) -> Vec<Vec<u8>> {
        let mut hits = Vec::new();
        if checksum_bits(block, code.modulus()) == code.residue {
            hits.push(block.to_vec());
        }
        for i in 0..block.len() {
            let mut cand = block.to_vec();
            cand[i] ^= 1;
            if checksum_bits(&cand, code.modulus()) == code.residue {
                hits.push(cand);
            }
        }
        hits
    }

    #[test]
    fn single_error_recovery_small() {
        // Exhaustive over m <= 6 here; the acceptance suite pushes to m = 10.
        for m in 2..=6usize {
            for a in 0..=(2 * m as u64) {
                let b = build_codebook(m, a, false).unwrap();
                for w in b.iter() {
                    let s = w.to_symbols();
                    for u in 0..m {
                        let mut deleted = s.clone();
                        deleted.remove(u);
                        assert_eq!(correct_deletion(&deleted, b.code()).unwrap(), w);

                        let mut erased = s.clone();
                        erased[u] = Symbol::Erasure;
                        assert_eq!(correct_erasure(&erased, b.code()).unwrap(), w);

                        let mut flipped = s.clone();
                        flipped[u] = Symbol::from_bit(1 - w.bits()[u]);
                        assert_eq!(correct_substitution(&flipped, b.code()).unwrap(), w);
                        // closed form agrees with brute-force search
                        let bits: Vec<u8> = flipped.iter().map(|x| x.bit().unwrap()).collect();
                        let hits = substitution_by_search(&bits, b.code());
                        assert!(hits.contains(&w.bits().to_vec()));
                    }
                }
            }
        }
    }

    #[test]
    fn deletion_shift_never_validates() {
        // Dropping the first bit of a non-constant codeword and appending any
        // bit lands outside the class: the next-block mismatch signal.
        for m in 2..=8usize {
            for a in 0..=(2 * m as u64) {
                let b = build_codebook(m, a, true).unwrap();
                for w in b.iter() {
                    for tail in 0..2u8 {
                        let mut shifted: Vec<Symbol> = w.to_symbols()[1..].to_vec();
                        shifted.push(Symbol::from_bit(tail));
                        let d = checksum_difference(&shifted, b.code()).unwrap();
                        assert_ne!(d, 0, "m={m} a={a} w={w} tail={tail}");
                    }
                }
            }
        }
    }

    #[test]
    fn dump_format() {
        let b = book(4, 0);
        assert_eq!(b.dump(), "m=4 a=0 modulus=9 excluded=false\n0000\n0111\n");
    }

    #[test]
    fn budget_checks() {
        assert!(matches!(
            build_codebook(25, 0, false),
            Err(Error::CodebookBudget { .. })
        ));
        assert!(matches!(
            BlockCode::new(4, 9, false),
            Err(Error::ResidueRange { .. })
        ));
    }
}
