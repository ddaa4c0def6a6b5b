//! Binary words, received symbols and the deletable-error channel.
//!
//! A transmitted word is a fixed-length bit vector. The channel may delete,
//! erase or substitute individual bits; which positions are hit and how is
//! described by a sparse [`ErrorPattern`]. Applying a pattern produces a
//! [`ReceivedWord`] over `{0, 1, e}` that is at most as long as the source.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::analysis;
use crate::error::Error;

/// A fixed-length binary word. Positions are 1-based in all checksum
/// arithmetic; slices returned by [`Word::bits`] are ordinary 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: Vec<u8>,
}

impl Word {
    pub fn new(bits: Vec<u8>) -> Result<Self, Error> {
        if bits.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(i) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidBit {
                position: i + 1,
                value: bits[i],
            });
        }
        Ok(Word { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one bit
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn to_symbols(&self) -> Vec<Symbol> {
        self.bits.iter().map(|&b| Symbol::from_bit(b)).collect()
    }

    /// Unpack `len` bits from `value`, bit 1 of the word in the most
    /// significant position, so numeric order equals lexicographic order.
    pub(crate) fn from_packed(value: u32, len: usize) -> Word {
        let bits = (0..len)
            .map(|i| ((value >> (len - 1 - i)) & 1) as u8)
            .collect();
        Word { bits }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => {
                    return Err(Error::InvalidChar {
                        position: i + 1,
                        ch,
                    })
                }
            }
        }
        Word::new(bits)
    }
}

/// One received symbol: a bit or the erasure mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    Erasure,
}

impl Symbol {
    pub fn from_bit(bit: u8) -> Symbol {
        if bit == 0 {
            Symbol::Zero
        } else {
            Symbol::One
        }
    }

    /// The bit value, or `None` for an erasure.
    pub fn bit(self) -> Option<u8> {
        match self {
            Symbol::Zero => Some(0),
            Symbol::One => Some(1),
            Symbol::Erasure => None,
        }
    }

    pub fn is_erasure(self) -> bool {
        matches!(self, Symbol::Erasure)
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Erasure => 'e',
        }
    }
}

/// A word after the channel: symbols over `{0, 1, e}`, possibly shorter than
/// the source when deletions occurred. May be empty (a fully deleted prefix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivedWord {
    symbols: Vec<Symbol>,
}

impl ReceivedWord {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        ReceivedWord { symbols }
    }

    pub fn from_word(word: &Word) -> Self {
        ReceivedWord {
            symbols: word.to_symbols(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Convert back to a plain word; fails on any remaining erasure.
    pub fn to_word(&self) -> Result<Word, Error> {
        let mut bits = Vec::with_capacity(self.symbols.len());
        for (i, s) in self.symbols.iter().enumerate() {
            match s.bit() {
                Some(b) => bits.push(b),
                None => return Err(Error::ErasurePresent { position: i + 1 }),
            }
        }
        Word::new(bits)
    }
}

impl fmt::Display for ReceivedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for ReceivedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut symbols = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => symbols.push(Symbol::Zero),
                '1' => symbols.push(Symbol::One),
                'e' => symbols.push(Symbol::Erasure),
                _ => {
                    return Err(Error::InvalidChar {
                        position: i + 1,
                        ch,
                    })
                }
            }
        }
        Ok(ReceivedWord { symbols })
    }
}

/// The three deletable error kinds, written `D`, `E` and `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorType {
    Deletion,
    Erasure,
    Substitution,
}

impl ErrorType {
    pub const ALL: [ErrorType; 3] = [
        ErrorType::Deletion,
        ErrorType::Erasure,
        ErrorType::Substitution,
    ];

    pub fn letter(self) -> char {
        match self {
            ErrorType::Deletion => 'D',
            ErrorType::Erasure => 'E',
            ErrorType::Substitution => 'F',
        }
    }

    pub fn from_letter(ch: char) -> Option<ErrorType> {
        match ch {
            'D' => Some(ErrorType::Deletion),
            'E' => Some(ErrorType::Erasure),
            'F' => Some(ErrorType::Substitution),
            _ => None,
        }
    }
}

/// A sparse error pattern: the 1-based positions that are corrupted and the
/// kind of corruption at each. Positions are strictly increasing; positions
/// not listed are untouched.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErrorPattern {
    n: usize,
    entries: Vec<(usize, ErrorType)>,
}

impl ErrorPattern {
    pub fn new(n: usize, mut entries: Vec<(usize, ErrorType)>) -> Result<Self, Error> {
        entries.sort_by_key(|&(pos, _)| pos);
        for window in entries.windows(2) {
            if window[0].0 == window[1].0 {
                return Err(Error::DuplicatePosition {
                    position: window[0].0,
                });
            }
        }
        for &(pos, _) in &entries {
            if pos == 0 || pos > n {
                return Err(Error::PositionOutOfRange { position: pos, n });
            }
        }
        Ok(ErrorPattern { n, entries })
    }

    pub fn empty(n: usize) -> Self {
        ErrorPattern {
            n,
            entries: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(usize, ErrorType)] {
        &self.entries
    }

    pub fn error_count(&self) -> usize {
        self.entries.len()
    }

    pub fn deletion_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|(_, k)| *k == ErrorType::Deletion)
            .count()
    }

    /// True when every pair of corrupted positions is at least `gap` apart.
    /// Patterns with at most one entry are vacuously far.
    pub fn is_far(&self, gap: usize) -> bool {
        self.entries.windows(2).all(|w| w[1].0 - w[0].0 >= gap)
    }

    /// Parse a comma-separated list of `<pos><type>` tokens, e.g. `1F,3D,4F,5E`.
    pub fn parse(text: &str, n: usize) -> Result<Self, Error> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(ErrorPattern::empty(n));
        }
        let mut entries = Vec::new();
        for token in text.split(',') {
            let token = token.trim();
            let bad = || Error::BadPatternToken {
                token: token.to_string(),
            };
            if token.len() < 2 {
                return Err(bad());
            }
            let (digits, letter) = token.split_at(token.len() - 1);
            let pos: usize = digits.parse().map_err(|_| bad())?;
            let kind = ErrorType::from_letter(letter.chars().next().unwrap()).ok_or_else(bad)?;
            entries.push((pos, kind));
        }
        ErrorPattern::new(n, entries)
    }
}

impl fmt::Display for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(pos, kind) in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}{}", pos, kind.letter())?;
            first = false;
        }
        Ok(())
    }
}

fn apply_inner(x: &Word, g: &ErrorPattern, t: usize) -> ReceivedWord {
    let mut out = Vec::with_capacity(t);
    let mut entries = g.entries().iter().peekable();
    for pos in 1..=t {
        let bit = x.bits()[pos - 1];
        let hit = match entries.peek() {
            Some(&&(p, kind)) if p == pos => {
                entries.next();
                Some(kind)
            }
            _ => None,
        };
        match hit {
            None => out.push(Symbol::from_bit(bit)),
            Some(ErrorType::Deletion) => {}
            Some(ErrorType::Erasure) => out.push(Symbol::Erasure),
            Some(ErrorType::Substitution) => out.push(Symbol::from_bit(1 - bit)),
        }
    }
    ReceivedWord::new(out)
}

/// Corrupt `x` with the pattern `g`: copy untouched bits, flip substituted
/// bits, mark erasures and drop deleted positions.
pub fn apply_pattern(x: &Word, g: &ErrorPattern) -> Result<ReceivedWord, Error> {
    if g.n() != x.len() {
        return Err(Error::LengthMismatch {
            word: x.len(),
            pattern: g.n(),
        });
    }
    Ok(apply_inner(x, g, x.len()))
}

/// Corrupt only the first `t` bits of `x`, honoring pattern entries at
/// positions up to `t`. A deletion inside the prefix shortens the output.
pub fn apply_pattern_prefix(x: &Word, g: &ErrorPattern, t: usize) -> Result<ReceivedWord, Error> {
    if g.n() != x.len() {
        return Err(Error::LengthMismatch {
            word: x.len(),
            pattern: g.n(),
        });
    }
    if t == 0 || t > x.len() {
        return Err(Error::PrefixOutOfRange { t, n: x.len() });
    }
    Ok(apply_inner(x, g, t))
}

/// Draw a uniform value below `bound` by rejection on masked random bits.
fn uniform_biguint<R: Rng + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    debug_assert!(*bound > BigUint::ZERO);
    let bits = bound.bits();
    let nbytes = bits.div_ceil(8) as usize;
    let top_mask: u8 = if bits.is_multiple_of(8) {
        0xff
    } else {
        (1u8 << (bits % 8)) - 1
    };
    let mut buf = vec![0u8; nbytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= top_mask;
        let v = BigUint::from_bytes_be(&buf);
        if v < *bound {
            return v;
        }
    }
}

/// Floyd's algorithm: a uniform k-subset of 1..=n, returned sorted.
fn uniform_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    debug_assert!(k <= n);
    let mut chosen = BTreeSet::new();
    for j in (n - k + 1)..=n {
        let t = rng.random_range(1..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    chosen.into_iter().collect()
}

fn random_types<R: Rng + ?Sized>(rng: &mut R, positions: Vec<usize>) -> Vec<(usize, ErrorType)> {
    positions
        .into_iter()
        .map(|p| (p, ErrorType::ALL[rng.random_range(0..3)]))
        .collect()
}

/// Sample a pattern uniformly over all patterns with at most `t` errors:
/// the error count k is drawn with probability C(n,k)*3^k over the total,
/// then a uniform position subset and independent uniform types.
pub fn sample_pattern_with<R: Rng + ?Sized>(
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<ErrorPattern, Error> {
    if t > n {
        return Err(Error::TooManyErrors { t, n });
    }
    let weights: Vec<BigUint> = (0..=t)
        .map(|k| analysis::binomial(n as u64, k as u64) * BigUint::from(3u32).pow(k as u32))
        .collect();
    let total: BigUint = weights.iter().sum();
    let mut u = uniform_biguint(rng, &total);
    let mut k = 0;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            k = i;
            break;
        }
        u -= w;
    }
    let positions = uniform_subset(rng, n, k);
    ErrorPattern::new(n, random_types(rng, positions))
}

/// Seeded wrapper around [`sample_pattern_with`]; the same seed always
/// produces the same pattern.
pub fn sample_pattern(n: usize, t: usize, seed: u64) -> Result<ErrorPattern, Error> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_pattern_with(n, t, &mut rng)
}

/// Sample uniformly over the patterns with at most `t` errors whose positions
/// are pairwise at least `gap` apart. Positions with pairwise gaps >= gap
/// biject with plain subsets of a shrunken range, so the draw is exact.
pub fn sample_far_pattern_with<R: Rng + ?Sized>(
    n: usize,
    t: usize,
    gap: usize,
    rng: &mut R,
) -> Result<ErrorPattern, Error> {
    if gap == 0 {
        return Err(Error::ZeroGap);
    }
    if t > n {
        return Err(Error::TooManyErrors { t, n });
    }
    let weights: Vec<BigUint> = (0..=t)
        .map(|k| {
            let reduced = n as i64 - (k as i64 - 1).max(0) * (gap as i64 - 1);
            if reduced < k as i64 {
                BigUint::ZERO
            } else {
                analysis::binomial(reduced as u64, k as u64) * BigUint::from(3u32).pow(k as u32)
            }
        })
        .collect();
    let total: BigUint = weights.iter().sum();
    let mut u = uniform_biguint(rng, &total);
    let mut k = 0;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            k = i;
            break;
        }
        u -= w;
    }
    let reduced = n - k.saturating_sub(1) * (gap - 1);
    let base = uniform_subset(rng, reduced, k);
    let positions: Vec<usize> = base
        .iter()
        .enumerate()
        .map(|(i, &b)| b + i * (gap - 1))
        .collect();
    ErrorPattern::new(n, random_types(rng, positions))
}

/// Seeded wrapper around [`sample_far_pattern_with`].
pub fn sample_far_pattern(
    n: usize,
    t: usize,
    gap: usize,
    seed: u64,
) -> Result<ErrorPattern, Error> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_far_pattern_with(n, t, gap, &mut rng)
}

/// Iterator over every pattern with at most `t` errors, each yielded once.
pub struct PatternEnumerator {
    n: usize,
    t: usize,
    k: usize,
    positions: Vec<usize>,
    types: Vec<usize>,
    exhausted: bool,
}

impl PatternEnumerator {
    fn start_k(&mut self) {
        self.positions = (1..=self.k).collect();
        self.types = vec![0; self.k];
    }

    fn current(&self) -> ErrorPattern {
        let entries = self
            .positions
            .iter()
            .zip(&self.types)
            .map(|(&p, &ty)| (p, ErrorType::ALL[ty]))
            .collect();
        ErrorPattern { n: self.n, entries }
    }

    /// Advance the base-3 type odometer; false when it wraps.
    fn next_types(&mut self) -> bool {
        for slot in self.types.iter_mut().rev() {
            if *slot < 2 {
                *slot += 1;
                return true;
            }
            *slot = 0;
        }
        false
    }

    /// Advance to the next k-combination of 1..=n; false when exhausted.
    fn next_combination(&mut self) -> bool {
        let k = self.k;
        let n = self.n;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.positions[i] < n - (k - 1 - i) {
                self.positions[i] += 1;
                for j in i + 1..k {
                    self.positions[j] = self.positions[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for PatternEnumerator {
    type Item = ErrorPattern;

    fn next(&mut self) -> Option<ErrorPattern> {
        if self.exhausted {
            return None;
        }
        let item = self.current();
        if !self.next_types() && !self.next_combination() {
            if self.k < self.t {
                self.k += 1;
                self.start_k();
            } else {
                self.exhausted = true;
            }
        }
        Some(item)
    }
}

/// Enumerate every pattern of at most `t` errors over `n` positions, after
/// checking that the exact pattern count fits inside `budget`.
pub fn enumerate_patterns(n: usize, t: usize, budget: u64) -> Result<PatternEnumerator, Error> {
    if t > n {
        return Err(Error::TooManyErrors { t, n });
    }
    let count = analysis::count_patterns(n as u64, t as u64);
    if count > BigUint::from(budget) {
        return Err(Error::EnumerationBudget {
            count: count.to_string(),
            budget,
        });
    }
    let mut it = PatternEnumerator {
        n,
        t,
        k: 0,
        positions: Vec::new(),
        types: Vec::new(),
        exhausted: false,
    };
    it.start_k();
    Ok(it)
}
