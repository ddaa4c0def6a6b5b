//! Construction of the block code over far-apart deletable errors.
//!
//! A codeword of length n = t*P + s is t-1 interior blocks from one VT class
//! of length P (constant words removed) followed by a final block from a VT
//! class of length P + s. Messages map to codewords through a mixed-radix
//! expansion over the sorted per-block codebooks.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::bitword::Word;
use crate::error::Error;
use crate::vt::{self, BlockCode, Codebook};

/// Parameters of one code instance. `n = t*P + s` with `t = n / P` and
/// `0 <= s <= P-1`; `a1`/`a2` are the interior and final block residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FarCodeParams {
    pub n: usize,
    pub p: usize,
    pub t: usize,
    pub s: usize,
    pub a1: u64,
    pub a2: u64,
}

impl FarCodeParams {
    /// Derive parameters for `(n, P)`. Residues default to the
    /// size-maximizing classes; explicit values override.
    pub fn derive(n: usize, p: usize, a1: Option<u64>, a2: Option<u64>) -> Result<Self, Error> {
        if p < 2 {
            return Err(Error::BlockTooSmall { p });
        }
        if n < 2 * p {
            return Err(Error::CodeTooShort { n, p });
        }
        let t = n / p;
        let s = n % p;
        let a1 = match a1 {
            Some(a) => a,
            None => vt::best_residue_size(p, true)?.0,
        };
        let a2 = match a2 {
            Some(a) => a,
            None => vt::best_residue_size(p + s, false)?.0,
        };
        let params = FarCodeParams { n, p, t, s, a1, a2 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.p < 2 {
            return Err(Error::BlockTooSmall { p: self.p });
        }
        if self.n < 2 * self.p || self.t != self.n / self.p || self.s != self.n % self.p {
            return Err(Error::CodeTooShort {
                n: self.n,
                p: self.p,
            });
        }
        if self.a1 >= self.m1() {
            return Err(Error::ResidueRange {
                residue: self.a1,
                modulus: self.m1(),
            });
        }
        if self.a2 >= self.m2() {
            return Err(Error::ResidueRange {
                residue: self.a2,
                modulus: self.m2(),
            });
        }
        Ok(())
    }

    /// Interior block modulus 2P+1.
    pub fn m1(&self) -> u64 {
        2 * self.p as u64 + 1
    }

    /// Final block modulus 2(P+s)+1.
    pub fn m2(&self) -> u64 {
        2 * (self.p + self.s) as u64 + 1
    }

    pub fn final_len(&self) -> usize {
        self.p + self.s
    }

    pub fn interior_code(&self) -> BlockCode {
        BlockCode {
            len: self.p,
            residue: self.a1,
            exclude_constant: true,
        }
    }

    pub fn final_code(&self) -> BlockCode {
        BlockCode {
            len: self.final_len(),
            residue: self.a2,
            exclude_constant: false,
        }
    }

    /// Exact codebook sizes `(q1, q2)` without materializing anything.
    pub fn block_sizes(&self) -> Result<(BigUint, BigUint), Error> {
        let q1 = vt::class_size(self.p, self.a1, true)?;
        let q2 = vt::class_size(self.final_len(), self.a2, false)?;
        Ok((q1, q2))
    }

    /// Code size `q1^(t-1) * q2`.
    pub fn code_size(&self) -> Result<BigUint, Error> {
        let (q1, q2) = self.block_sizes()?;
        if q1 == BigUint::ZERO {
            return Err(Error::EmptyCodebook);
        }
        Ok(q1.pow(self.t as u32 - 1) * q2)
    }

    /// Message capacity in bits: floor(log2 of the code size).
    pub fn capacity_bits(&self) -> Result<u64, Error> {
        Ok(self.code_size()?.bits() - 1)
    }

    /// Redundancy in bits, from the exact codebook sizes.
    pub fn redundancy(&self) -> Result<f64, Error> {
        Ok(self.n as f64 - log2_biguint(&self.code_size()?))
    }

    /// Parameter file: one JSON object with the code arithmetic and sizes.
    pub fn to_file_string(&self) -> Result<String, Error> {
        let (q1, q2) = self.block_sizes()?;
        let k = self.capacity_bits()?;
        let mut out = String::new();
        let _ = write!(
            out,
            "{{\"n\": {}, \"P\": {}, \"t\": {}, \"s\": {}, \"a1\": {}, \"a2\": {}, \"q1\": {}, \"q2\": {}, \"K\": {}}}",
            self.n, self.p, self.t, self.s, self.a1, self.a2, q1, q2, k
        );
        out.push('\n');
        Ok(out)
    }

    /// Parse the parameter file format written by [`Self::to_file_string`].
    /// Only `n`, `P`, `a1` and `a2` decide the code; derived fields are
    /// checked for consistency when present.
    pub fn parse_file(text: &str) -> Result<Self, Error> {
        let body = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut n = None;
        let mut p = None;
        let mut a1 = None;
        let mut a2 = None;
        let mut t = None;
        let mut s = None;
        for field in body.split(',') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, value) = field
                .split_once(':')
                .ok_or_else(|| Error::ParamsFile(format!("malformed field '{field}'")))?;
            let key = key.trim().trim_matches('"');
            let value = value.trim();
            let parse = |v: &str| -> Result<u64, Error> {
                v.parse()
                    .map_err(|_| Error::ParamsFile(format!("bad value for '{key}': {v}")))
            };
            match key {
                "n" => n = Some(parse(value)? as usize),
                "P" => p = Some(parse(value)? as usize),
                "a1" => a1 = Some(parse(value)?),
                "a2" => a2 = Some(parse(value)?),
                "t" => t = Some(parse(value)? as usize),
                "s" => s = Some(parse(value)? as usize),
                "q1" | "q2" | "K" => {} // informational
                other => return Err(Error::ParamsFile(format!("unknown key '{other}'"))),
            }
        }
        let n = n.ok_or_else(|| Error::ParamsFile("missing 'n'".into()))?;
        let p = p.ok_or_else(|| Error::ParamsFile("missing 'P'".into()))?;
        let a1 = a1.ok_or_else(|| Error::ParamsFile("missing 'a1'".into()))?;
        let a2 = a2.ok_or_else(|| Error::ParamsFile("missing 'a2'".into()))?;
        let params = FarCodeParams::derive(n, p, Some(a1), Some(a2))?;
        if let Some(t) = t {
            if t != params.t {
                return Err(Error::ParamsFile(format!(
                    "t={t} inconsistent with n/P={}",
                    params.t
                )));
            }
        }
        if let Some(s) = s {
            if s != params.s {
                return Err(Error::ParamsFile(format!(
                    "s={s} inconsistent with n mod P={}",
                    params.s
                )));
            }
        }
        Ok(params)
    }
}

/// log2 of a positive big integer, accurate to double precision.
pub fn log2_biguint(x: &BigUint) -> f64 {
    debug_assert!(*x > BigUint::ZERO);
    let bits = x.bits();
    if bits <= 53 {
        return (u64::try_from(x).unwrap() as f64).log2();
    }
    let shift = bits - 53;
    let top = u64::try_from(&(x >> shift)).unwrap();
    (top as f64).log2() + shift as f64
}

/// A fully built code: parameters plus the two materialized block codebooks.
#[derive(Debug, Clone)]
pub struct FarCode {
    params: FarCodeParams,
    interior_book: Codebook,
    final_book: Codebook,
    size: BigUint,
    capacity_bits: u64,
}

/// Build the code for `(n, P)` with optional residue overrides.
pub fn make_code(n: usize, p: usize, a1: Option<u64>, a2: Option<u64>) -> Result<FarCode, Error> {
    FarCode::from_params(FarCodeParams::derive(n, p, a1, a2)?)
}

impl FarCode {
    pub fn from_params(params: FarCodeParams) -> Result<Self, Error> {
        params.validate()?;
        let interior_book = vt::build_codebook(params.p, params.a1, true)?;
        if interior_book.is_empty() {
            return Err(Error::EmptyCodebook);
        }
        let final_book = vt::build_codebook(params.final_len(), params.a2, false)?;
        let size = BigUint::from(interior_book.len()).pow(params.t as u32 - 1)
            * BigUint::from(final_book.len());
        let capacity_bits = size.bits() - 1;
        Ok(FarCode {
            params,
            interior_book,
            final_book,
            size,
            capacity_bits,
        })
    }

    pub fn params(&self) -> &FarCodeParams {
        &self.params
    }

    pub fn interior_book(&self) -> &Codebook {
        &self.interior_book
    }

    pub fn final_book(&self) -> &Codebook {
        &self.final_book
    }

    pub fn q1(&self) -> usize {
        self.interior_book.len()
    }

    pub fn q2(&self) -> usize {
        self.final_book.len()
    }

    pub fn size(&self) -> &BigUint {
        &self.size
    }

    pub fn capacity_bits(&self) -> u64 {
        self.capacity_bits
    }

    /// Redundancy in bits: n - log2(q1^(t-1) * q2).
    pub fn redundancy(&self) -> f64 {
        self.params.n as f64 - log2_biguint(&self.size)
    }

    /// Map a message in `[0, 2^K)` to its codeword. The first interior block
    /// carries the most significant digit.
    pub fn encode(&self, message: &BigUint) -> Result<Word, Error> {
        if message.bits() > self.capacity_bits {
            return Err(Error::MessageOutOfRange {
                message: message.to_string(),
                capacity: self.capacity_bits,
            });
        }
        let q1 = BigUint::from(self.q1());
        let q2 = BigUint::from(self.q2());
        let mut digits = vec![0usize; self.params.t];
        let mut rest = message.clone();
        let d_final = &rest % &q2;
        digits[self.params.t - 1] = usize::try_from(&d_final).unwrap();
        rest /= &q2;
        for i in (0..self.params.t - 1).rev() {
            let d = &rest % &q1;
            digits[i] = usize::try_from(&d).unwrap();
            rest /= &q1;
        }
        debug_assert_eq!(rest, BigUint::ZERO);
        let mut bits = Vec::with_capacity(self.params.n);
        for (i, &d) in digits.iter().enumerate() {
            let block = if i + 1 < self.params.t {
                self.interior_book.word(d)
            } else {
                self.final_book.word(d)
            };
            bits.extend_from_slice(block.bits());
        }
        Word::new(bits)
    }

    /// Inverse of [`Self::encode`]: rank each block in its codebook and fold
    /// the mixed-radix digits back into an integer.
    pub fn decode_message(&self, x: &Word) -> Result<BigUint, Error> {
        if x.len() != self.params.n {
            return Err(Error::LengthMismatch {
                word: x.len(),
                pattern: self.params.n,
            });
        }
        let p = self.params.p;
        let mut value = BigUint::ZERO;
        for i in 0..self.params.t - 1 {
            let block = Word::new(x.bits()[i * p..(i + 1) * p].to_vec())?;
            let rank = self
                .interior_book
                .rank(&block)
                .ok_or(Error::NotACodeword { block: i + 1 })?;
            value = value * BigUint::from(self.q1()) + BigUint::from(rank);
        }
        let block = Word::new(x.bits()[(self.params.t - 1) * p..].to_vec())?;
        let rank = self.final_book.rank(&block).ok_or(Error::NotACodeword {
            block: self.params.t,
        })?;
        Ok(value * BigUint::from(self.q2()) + BigUint::from(rank))
    }

    /// Iterate over every codeword of the code in message-digit order. This
    /// walks the full product space, not just the power-of-two message range.
    pub fn codewords(&self) -> impl Iterator<Item = Word> + '_ {
        let t = self.params.t;
        let mut digits = vec![0usize; t];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let mut bits = Vec::with_capacity(self.params.n);
            for (i, &d) in digits.iter().enumerate() {
                let block = if i + 1 < t {
                    self.interior_book.word(d)
                } else {
                    self.final_book.word(d)
                };
                bits.extend_from_slice(block.bits());
            }
            // odometer over [0,q1)^(t-1) x [0,q2)
            let mut i = t;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                let radix = if i + 1 < t { self.q1() } else { self.q2() };
                digits[i] += 1;
                if digits[i] < radix {
                    break;
                }
                digits[i] = 0;
            }
            Some(Word::new(bits).unwrap())
        })
    }
}
