//! Sequential correction of far-apart deletable errors, plus a streaming
//! front end that commits source bits in real time with bounded delay.
//!
//! The batch corrector scans P-symbol windows left to right. Blocks whose
//! checksum difference is zero are passed (erasures are fixed in place as
//! they are met). At the first mismatching block j the corrector tries, in
//! order: a deletion in block j-1 (remove the borrowed last symbol, rerun
//! single-deletion correction, accept only if the result differs from the
//! observed window), then an error in block j itself, classified through
//! block j+1's checksum when j is interior and through the received length
//! when the mismatch sits in the final region. Each accepted correction
//! splices the repaired block back and the scan resumes; with errors at
//! least 3P apart every pass eliminates the leftmost remaining error.
//!
//! The streaming wrapper runs the same scan over a growing buffer, but only
//! through windows whose correction can never be revised by later symbols.
//! Block k is emitted once block k+1 has validated; the final 3P+s symbols
//! are flushed by a batch pass at end of stream. Committed bits are never
//! rewritten, and after absorbing the corruption of the first z+4P source
//! bits at least z bits have been committed.

use std::fmt;

use crate::bitword::{ErrorType, ReceivedWord, Symbol, Word};
use crate::error::Error;
use crate::farcode::FarCodeParams;
use crate::vt::{self, BlockCode};

/// Outcome classification of a decode run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// No mismatch and no erasure: the input already was a codeword.
    Clean,
    /// At least one correction applied; recovery succeeded.
    Corrected,
    /// The input is not explainable as a far corruption of any codeword.
    Failed,
}

impl fmt::Display for DecodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DecodeStatus::Clean => "Clean",
            DecodeStatus::Corrected => "Corrected",
            DecodeStatus::Failed => "Failed",
        };
        f.write_str(s)
    }
}

/// One applied correction: which (1-based) block and which error kind was
/// inferred there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Correction {
    pub block: usize,
    pub kind: ErrorType,
}

/// Why a decode gave up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeFailure {
    TooShort { len: usize, min: usize },
    TooLong { len: usize, max: usize },
    IterationCap { cap: usize },
    NoCandidate { block: usize },
    Ambiguous { block: usize },
    Inconsistent { block: usize },
    BadLength { len: usize },
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeFailure::TooShort { len, min } => {
                write!(f, "received {len} symbols, need at least {min}")
            }
            DecodeFailure::TooLong { len, max } => {
                write!(f, "received {len} symbols, expected at most {max}")
            }
            DecodeFailure::IterationCap { cap } => write!(f, "no clean state after {cap} passes"),
            DecodeFailure::NoCandidate { block } => {
                write!(f, "no deletion repair exists for block {block}")
            }
            DecodeFailure::Ambiguous { block } => {
                write!(f, "ambiguous deletion repair in block {block}")
            }
            DecodeFailure::Inconsistent { block } => {
                write!(f, "block {block} admits no single-error repair")
            }
            DecodeFailure::BadLength { len } => {
                write!(f, "length {len} rules out a single error in the tail")
            }
        }
    }
}

/// Result of a full decode.
#[derive(Debug, Clone)]
pub struct DecodeReport {
    pub status: DecodeStatus,
    /// Number of scan passes, each ending in one structural correction or in
    /// the final clean sweep.
    pub iterations: usize,
    /// Corrections in the order they were applied (positional order).
    pub corrections: Vec<Correction>,
    /// The recovered word; present unless the decode failed.
    pub recovered: Option<Word>,
    /// The working estimate at exit, for diagnostics on failure.
    pub estimate: ReceivedWord,
    pub failure: Option<DecodeFailure>,
}

/// Split a received word into blocks of `p` symbols, the last block keeping
/// between p and 2p-1 symbols.
pub fn block_split(y: &ReceivedWord, p: usize) -> Result<Vec<ReceivedWord>, Error> {
    if p == 0 || y.len() < p {
        return Err(Error::WordTooShort { len: y.len(), p });
    }
    let count = y.len() / p;
    let mut blocks = Vec::with_capacity(count);
    for j in 0..count {
        let end = if j + 1 == count { y.len() } else { (j + 1) * p };
        blocks.push(ReceivedWord::new(y.symbols()[j * p..end].to_vec()));
    }
    Ok(blocks)
}

/// What one scan pass did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PassAction {
    /// Every window checked out; only erasure fixes (if any) were applied.
    NoMismatch,
    /// One structural correction was applied; the word needs re-splitting.
    Fixed(Correction),
    Failed(DecodeFailure),
}

/// Result of one correction pass over the full received word.
#[derive(Debug, Clone)]
pub struct PassResult {
    pub word: ReceivedWord,
    /// Erasure fixes applied during the scan plus the structural fix, if any.
    pub corrections: Vec<Correction>,
    pub action: PassAction,
}

enum ScanEvent {
    Clean,
    Mismatch { window: usize },
    Failed(DecodeFailure),
}

struct Engine {
    params: FarCodeParams,
    interior: BlockCode,
    final_code: BlockCode,
}

impl Engine {
    fn new(params: &FarCodeParams) -> Engine {
        Engine {
            params: *params,
            interior: params.interior_code(),
            final_code: params.final_code(),
        }
    }

    fn window_count(&self, len: usize) -> usize {
        len / self.params.p
    }

    fn window_bounds(&self, len: usize, j: usize) -> (usize, usize) {
        let p = self.params.p;
        let count = self.window_count(len);
        if j + 1 == count {
            (j * p, len)
        } else {
            (j * p, (j + 1) * p)
        }
    }

    /// Scan windows from `start`, fixing erasures in place. Stops at the
    /// first window whose checksum difference is nonzero (or whose final
    /// length rules the checksum out).
    fn scan(&self, buf: &mut [Symbol], start: usize, fixes: &mut Vec<Correction>) -> ScanEvent {
        let p = self.params.p;
        if buf.len() < p {
            return ScanEvent::Failed(DecodeFailure::TooShort {
                len: buf.len(),
                min: p,
            });
        }
        let count = self.window_count(buf.len());
        for j in start..count {
            let (ws, we) = self.window_bounds(buf.len(), j);
            let is_final = j + 1 == count;
            if buf[ws..we].iter().any(|s| s.is_erasure()) {
                let code = if !is_final {
                    &self.interior
                } else if we - ws == self.params.final_len() {
                    &self.final_code
                } else {
                    // erased symbol in a misaligned tail: not a far pattern
                    return ScanEvent::Mismatch { window: j };
                };
                match vt::correct_erasure(&buf[ws..we], code) {
                    Ok(word) => {
                        for (slot, &bit) in buf[ws..we].iter_mut().zip(word.bits()) {
                            *slot = Symbol::from_bit(bit);
                        }
                        fixes.push(Correction {
                            block: j + 1,
                            kind: ErrorType::Erasure,
                        });
                    }
                    Err(_) => {
                        return ScanEvent::Failed(DecodeFailure::Inconsistent { block: j + 1 })
                    }
                }
            }
            let difference = if !is_final {
                vt::checksum_difference(&buf[ws..we], &self.interior)
            } else if we - ws == self.params.final_len() {
                vt::checksum_difference(&buf[ws..we], &self.final_code)
            } else {
                // short or fused final window: force the mismatch path
                Ok(1)
            };
            match difference {
                Ok(0) => {}
                Ok(_) => return ScanEvent::Mismatch { window: j },
                Err(_) => return ScanEvent::Failed(DecodeFailure::Inconsistent { block: j + 1 }),
            }
        }
        ScanEvent::Clean
    }

    /// Deletion probe for the window at `(ws..ws+p)`: drop its last symbol,
    /// run single-deletion correction, accept only a result that differs
    /// from the observed window. Returns the repaired block on acceptance.
    fn deletion_probe(
        &self,
        buf: &[Symbol],
        ws: usize,
        code: &BlockCode,
    ) -> Result<Option<Word>, DecodeFailure> {
        let p = code.len;
        let window = &buf[ws..ws + p];
        match vt::correct_deletion(&window[..p - 1], code) {
            Ok(cand) => {
                let same = cand
                    .bits()
                    .iter()
                    .zip(window)
                    .all(|(&b, s)| s.bit() == Some(b));
                Ok(if same { None } else { Some(cand) })
            }
            Err(Error::NoDeletionCandidate) => Ok(None),
            Err(Error::AmbiguousDeletion) => Err(DecodeFailure::Ambiguous {
                block: ws / self.params.p + 1,
            }),
            Err(_) => Ok(None), // erasure in the probe window: hypothesis rejected
        }
    }

    /// Splice `block ++ [kept last symbol]` over the P-window at `ws`,
    /// lengthening the buffer by one.
    fn splice_deletion(&self, buf: &mut Vec<Symbol>, ws: usize, block: &Word) {
        let p = self.params.p;
        let kept = buf[ws + p - 1];
        let mut repl: Vec<Symbol> = block.to_symbols();
        repl.push(kept);
        buf.splice(ws..ws + p, repl);
    }

    fn write_block(&self, buf: &mut [Symbol], ws: usize, block: &Word) {
        for (slot, &bit) in buf[ws..ws + block.len()].iter_mut().zip(block.bits()) {
            *slot = Symbol::from_bit(bit);
        }
    }

    /// Resolve the first mismatch, at 0-based window `j`. Returns the
    /// correction and the window index from which to rescan.
    fn resolve(
        &self,
        buf: &mut Vec<Symbol>,
        j: usize,
    ) -> Result<(Correction, usize), DecodeFailure> {
        let p = self.params.p;
        let count = self.window_count(buf.len());
        // A mismatch at j can stem from a deletion in block j-1 whose own
        // window still summed to the residue. Probe that block first.
        if j >= 1 {
            if let Some(block) = self.deletion_probe(buf, (j - 1) * p, &self.interior)? {
                self.splice_deletion(buf, (j - 1) * p, &block);
                return Ok((
                    Correction {
                        block: j,
                        kind: ErrorType::Deletion,
                    },
                    j - 1,
                ));
            }
        }
        if j + 1 == count {
            let correction = self.final_phase(buf)?;
            return Ok((correction, correction.block - 1));
        }
        // The error sits in block j; the next block's checksum says which
        // kind: zero difference means a substitution, nonzero (or a short
        // final window) means a deletion shifted everything left.
        let next_is_final = j + 2 == count;
        let (nws, nwe) = self.window_bounds(buf.len(), j + 1);
        let next_diff = if !next_is_final {
            vt::checksum_difference(&buf[nws..nwe], &self.interior).unwrap_or(1)
        } else if nwe - nws == self.params.final_len() {
            vt::checksum_difference(&buf[nws..nwe], &self.final_code).unwrap_or(1)
        } else {
            1
        };
        if next_diff == 0 {
            match vt::correct_substitution(&buf[j * p..(j + 1) * p], &self.interior) {
                Ok(block) => {
                    self.write_block(buf, j * p, &block);
                    Ok((
                        Correction {
                            block: j + 1,
                            kind: ErrorType::Substitution,
                        },
                        j,
                    ))
                }
                Err(_) => Err(DecodeFailure::Inconsistent { block: j + 1 }),
            }
        } else {
            let window = &buf[j * p..(j + 1) * p];
            match vt::correct_deletion(&window[..p - 1], &self.interior) {
                Ok(block) => {
                    self.splice_deletion(buf, j * p, &block);
                    Ok((
                        Correction {
                            block: j + 1,
                            kind: ErrorType::Deletion,
                        },
                        j,
                    ))
                }
                Err(Error::NoDeletionCandidate) => Err(DecodeFailure::NoCandidate { block: j + 1 }),
                Err(Error::AmbiguousDeletion) => Err(DecodeFailure::Ambiguous { block: j + 1 }),
                Err(_) => Err(DecodeFailure::Inconsistent { block: j + 1 }),
            }
        }
    }

    /// Mismatch in the final region: a single error in one of the last two
    /// source blocks. Split off the t-1 fixed-size blocks and branch on the
    /// total length; n means a substitution, n-1 a deletion.
    fn final_phase(&self, buf: &mut Vec<Symbol>) -> Result<Correction, DecodeFailure> {
        let p = self.params.p;
        let t = self.params.t;
        let n = self.params.n;
        let len = buf.len();
        let prev_start = (t - 2) * p;
        let final_start = (t - 1) * p;
        if len == n {
            let prev_diff = vt::checksum_difference(&buf[prev_start..final_start], &self.interior)
                .map_err(|_| DecodeFailure::Inconsistent { block: t - 1 })?;
            if prev_diff != 0 {
                let block = vt::correct_substitution(&buf[prev_start..final_start], &self.interior)
                    .map_err(|_| DecodeFailure::Inconsistent { block: t - 1 })?;
                self.write_block(buf, prev_start, &block);
                return Ok(Correction {
                    block: t - 1,
                    kind: ErrorType::Substitution,
                });
            }
            let block = vt::correct_substitution(&buf[final_start..], &self.final_code)
                .map_err(|_| DecodeFailure::Inconsistent { block: t })?;
            self.write_block(buf, final_start, &block);
            Ok(Correction {
                block: t,
                kind: ErrorType::Substitution,
            })
        } else if len + 1 == n {
            if let Some(block) = self.deletion_probe(buf, prev_start, &self.interior)? {
                self.splice_deletion(buf, prev_start, &block);
                return Ok(Correction {
                    block: t - 1,
                    kind: ErrorType::Deletion,
                });
            }
            let tail = &buf[final_start..];
            match vt::correct_deletion(tail, &self.final_code) {
                Ok(block) => {
                    let repl = block.to_symbols();
                    buf.splice(final_start.., repl);
                    Ok(Correction {
                        block: t,
                        kind: ErrorType::Deletion,
                    })
                }
                Err(Error::NoDeletionCandidate) => Err(DecodeFailure::NoCandidate { block: t }),
                Err(Error::AmbiguousDeletion) => Err(DecodeFailure::Ambiguous { block: t }),
                Err(_) => Err(DecodeFailure::Inconsistent { block: t }),
            }
        } else {
            Err(DecodeFailure::BadLength { len })
        }
    }
}

/// Run a single correction pass: scan until the first mismatch, apply one
/// structural correction, and return the updated word for re-splitting.
/// Erasures encountered before the mismatch are fixed along the way.
pub fn correct_once(y: &ReceivedWord, params: &FarCodeParams) -> PassResult {
    let engine = Engine::new(params);
    let mut buf = y.symbols().to_vec();
    let mut corrections = Vec::new();
    let action = match engine.scan(&mut buf, 0, &mut corrections) {
        ScanEvent::Clean => PassAction::NoMismatch,
        ScanEvent::Failed(failure) => PassAction::Failed(failure),
        ScanEvent::Mismatch { window } => match engine.resolve(&mut buf, window) {
            Ok((correction, _)) => {
                corrections.push(correction);
                PassAction::Fixed(correction)
            }
            Err(failure) => PassAction::Failed(failure),
        },
    };
    PassResult {
        word: ReceivedWord::new(buf),
        corrections,
        action,
    }
}

/// Decode a received word: iterate correction passes until a pass reports no
/// mismatch, then require the estimate to be a full-length erasure-free
/// word. Inputs that are not far corruptions of a codeword end in `Failed`.
pub fn decode(y: &ReceivedWord, params: &FarCodeParams) -> DecodeReport {
    let engine = Engine::new(params);
    let n = params.n;
    let cap = n / (3 * params.p) + 2;
    let mut buf = y.symbols().to_vec();
    let mut corrections = Vec::new();
    let mut iterations = 0;
    let mut resume = 0;
    let failed = |buf: Vec<Symbol>, iterations, corrections, failure| DecodeReport {
        status: DecodeStatus::Failed,
        iterations,
        corrections,
        recovered: None,
        estimate: ReceivedWord::new(buf),
        failure: Some(failure),
    };
    if buf.len() > n {
        return failed(
            buf,
            0,
            corrections,
            DecodeFailure::TooLong {
                len: y.len(),
                max: n,
            },
        );
    }
    loop {
        if iterations == cap {
            return failed(
                buf,
                iterations,
                corrections,
                DecodeFailure::IterationCap { cap },
            );
        }
        iterations += 1;
        match engine.scan(&mut buf, resume, &mut corrections) {
            ScanEvent::Clean => {
                // all windows validated; a truncated word can still land here
                // when every remaining window happens to checksum-pass, so the
                // full-length guard below is what decides success
                let estimate = ReceivedWord::new(buf);
                return match estimate.to_word() {
                    Ok(word) if word.len() == n => DecodeReport {
                        status: if corrections.is_empty() {
                            DecodeStatus::Clean
                        } else {
                            DecodeStatus::Corrected
                        },
                        iterations,
                        corrections,
                        recovered: Some(word),
                        estimate,
                        failure: None,
                    },
                    _ => DecodeReport {
                        status: DecodeStatus::Failed,
                        iterations,
                        corrections,
                        recovered: None,
                        failure: Some(DecodeFailure::BadLength {
                            len: estimate.len(),
                        }),
                        estimate,
                    },
                };
            }
            ScanEvent::Failed(failure) => return failed(buf, iterations, corrections, failure),
            ScanEvent::Mismatch { window } => match engine.resolve(&mut buf, window) {
                Ok((correction, rescan_from)) => {
                    corrections.push(correction);
                    resume = rescan_from;
                }
                Err(failure) => return failed(buf, iterations, corrections, failure),
            },
        }
    }
}

/// Streaming decoder: feed received symbols one at a time; committed source
/// bits come back as they become final. Blocks commit once the block after
/// them validates, which the far-pattern argument makes irreversible; the
/// remaining tail (at most 3P+s symbols, within the 4P delay) flushes on
/// [`StreamDecoder::finish`].
#[derive(Debug)]
pub struct StreamDecoder {
    params: FarCodeParams,
    interior: BlockCode,
    buf: Vec<Symbol>,
    /// Windows 0..validated have zero checksum difference in `buf`.
    validated: usize,
    /// Blocks 0..committed have been emitted.
    committed: usize,
    corrections: Vec<Correction>,
    failure: Option<DecodeFailure>,
    /// Pending mismatch needs this many buffered symbols before it can be
    /// classified; skip rescans until then.
    wait_len: Option<usize>,
    finished: bool,
}

impl StreamDecoder {
    pub fn new(params: FarCodeParams) -> StreamDecoder {
        StreamDecoder {
            interior: params.interior_code(),
            buf: Vec::with_capacity(params.n + 4),
            validated: 0,
            committed: 0,
            corrections: Vec::new(),
            failure: None,
            wait_len: None,
            finished: false,
            params,
        }
    }

    pub fn params(&self) -> &FarCodeParams {
        &self.params
    }

    /// Source bits emitted so far.
    pub fn committed_bits(&self) -> usize {
        if self.finished {
            self.params.n
        } else {
            self.committed * self.params.p
        }
    }

    /// Corrected-but-uncommitted bits currently pending in the window.
    pub fn pending_bits(&self) -> usize {
        self.validated.saturating_sub(self.committed) * self.params.p
    }

    pub fn status(&self) -> DecodeStatus {
        if self.failure.is_some() {
            DecodeStatus::Failed
        } else if self.corrections.is_empty() {
            DecodeStatus::Clean
        } else {
            DecodeStatus::Corrected
        }
    }

    pub fn failure(&self) -> Option<&DecodeFailure> {
        self.failure.as_ref()
    }

    /// Absorb one symbol; returns any newly committed source bits. After a
    /// failure the stream keeps buffering (so `finish` sees the whole word)
    /// but commits nothing further.
    pub fn feed(&mut self, symbol: Symbol) -> Vec<u8> {
        if self.finished {
            return Vec::new();
        }
        self.buf.push(symbol);
        if self.failure.is_some() {
            return Vec::new();
        }
        self.advance()
    }

    fn fail(&mut self, failure: DecodeFailure) {
        self.failure = Some(failure);
    }

    fn advance(&mut self) -> Vec<u8> {
        let p = self.params.p;
        let t = self.params.t;
        // Validate only windows that are certainly interior (the last two
        // source blocks plus the remainder flush at finish) and fix errors
        // only where the next window is also certainly interior.
        let validate_cap = t.saturating_sub(2);
        let mut out = Vec::new();
        if let Some(need) = self.wait_len {
            if self.buf.len() < need {
                return out;
            }
            self.wait_len = None;
        }
        loop {
            let j = self.validated;
            if j >= validate_cap || self.buf.len() < (j + 1) * p {
                break;
            }
            let (ws, we) = (j * p, (j + 1) * p);
            if self.buf[ws..we].iter().any(|s| s.is_erasure()) {
                match vt::correct_erasure(&self.buf[ws..we], &self.interior) {
                    Ok(block) => {
                        for (slot, &bit) in self.buf[ws..we].iter_mut().zip(block.bits()) {
                            *slot = Symbol::from_bit(bit);
                        }
                        self.corrections.push(Correction {
                            block: j + 1,
                            kind: ErrorType::Erasure,
                        });
                    }
                    Err(_) => {
                        self.fail(DecodeFailure::Inconsistent { block: j + 1 });
                        return out;
                    }
                }
            }
            let diff = vt::checksum_difference(&self.buf[ws..we], &self.interior).unwrap_or(1);
            if diff == 0 {
                self.validated += 1;
                self.commit_ready(&mut out);
                continue;
            }
            // mismatch at window j
            let engine = Engine::new(&self.params);
            if j >= 1 {
                match engine.deletion_probe(&self.buf, (j - 1) * p, &self.interior) {
                    Ok(Some(block)) => {
                        engine.splice_deletion(&mut self.buf, (j - 1) * p, &block);
                        self.corrections.push(Correction {
                            block: j,
                            kind: ErrorType::Deletion,
                        });
                        self.validated = j - 1;
                        continue;
                    }
                    Ok(None) => {}
                    Err(failure) => {
                        self.fail(failure);
                        return out;
                    }
                }
            }
            // classification needs the full next window
            if self.buf.len() < (j + 2) * p {
                self.wait_len = Some((j + 2) * p);
                break;
            }
            let next_diff =
                vt::checksum_difference(&self.buf[(j + 1) * p..(j + 2) * p], &self.interior)
                    .unwrap_or(1);
            if next_diff == 0 {
                match vt::correct_substitution(&self.buf[ws..we], &self.interior) {
                    Ok(block) => {
                        for (slot, &bit) in self.buf[ws..we].iter_mut().zip(block.bits()) {
                            *slot = Symbol::from_bit(bit);
                        }
                        self.corrections.push(Correction {
                            block: j + 1,
                            kind: ErrorType::Substitution,
                        });
                    }
                    Err(_) => {
                        self.fail(DecodeFailure::Inconsistent { block: j + 1 });
                        return out;
                    }
                }
            } else {
                match vt::correct_deletion(&self.buf[ws..we - 1], &self.interior) {
                    Ok(block) => {
                        engine.splice_deletion(&mut self.buf, ws, &block);
                        self.corrections.push(Correction {
                            block: j + 1,
                            kind: ErrorType::Deletion,
                        });
                    }
                    Err(Error::NoDeletionCandidate) => {
                        self.fail(DecodeFailure::NoCandidate { block: j + 1 });
                        return out;
                    }
                    Err(Error::AmbiguousDeletion) => {
                        self.fail(DecodeFailure::Ambiguous { block: j + 1 });
                        return out;
                    }
                    Err(_) => {
                        self.fail(DecodeFailure::Inconsistent { block: j + 1 });
                        return out;
                    }
                }
            }
        }
        out
    }

    /// Emit every block whose follower has validated. Keeping one validated
    /// block in reserve is what makes commitments irrevocable: corrections
    /// never reach further back than the block before a mismatch.
    fn commit_ready(&mut self, out: &mut Vec<u8>) {
        let p = self.params.p;
        let commit_cap = self.params.t.saturating_sub(3);
        while self.committed < commit_cap && self.committed + 1 < self.validated {
            let ws = self.committed * p;
            for s in &self.buf[ws..ws + p] {
                out.push(s.bit().expect("validated windows hold no erasures"));
            }
            self.committed += 1;
        }
    }

    /// End of stream: run the batch decoder over the buffered word and emit
    /// everything past the committed prefix.
    pub fn finish(&mut self) -> (Vec<u8>, DecodeReport) {
        let already_finished = self.finished;
        let committed_bits = self.committed * self.params.p;
        let mut report = decode(&ReceivedWord::new(self.buf.clone()), &self.params);
        // the stream's incremental fixes come before the batch tail fixes
        let mut corrections = self.corrections.clone();
        corrections.extend(report.corrections.iter().copied());
        report.corrections = corrections;
        if report.status != DecodeStatus::Failed {
            report.status = if report.corrections.is_empty() {
                DecodeStatus::Clean
            } else {
                DecodeStatus::Corrected
            };
        }
        if let Some(failure) = &self.failure {
            report.status = DecodeStatus::Failed;
            report.failure = Some(failure.clone());
            report.recovered = None;
        }
        if already_finished {
            return (Vec::new(), report);
        }
        let tail = match &report.recovered {
            Some(word) => {
                let consistent = self.buf[..committed_bits]
                    .iter()
                    .zip(word.bits())
                    .all(|(s, &b)| s.bit() == Some(b));
                if consistent {
                    self.finished = true;
                    word.bits()[committed_bits..].to_vec()
                } else {
                    // cannot happen for far corruptions; refuse to rewrite
                    report.status = DecodeStatus::Failed;
                    report.failure = Some(DecodeFailure::Inconsistent {
                        block: self.committed + 1,
                    });
                    report.recovered = None;
                    Vec::new()
                }
            }
            None => Vec::new(),
        };
        if self.failure.is_none() {
            if let Some(f) = &report.failure {
                self.failure = Some(f.clone());
            }
        }
        (tail, report)
    }
}
