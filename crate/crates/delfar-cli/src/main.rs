//! Command-line front end: encode/corrupt/decode/stream workflows plus the
//! counting and bound calculators, with text-first I/O for scripting.
//!
//! Exit codes: 0 on success, 1 when decoding or verification fails, 2 on
//! usage or input errors.

use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use delfar::analysis::{self, VerifyMode, VerifyOptions};
use delfar::bitword::{self, ErrorPattern, ReceivedWord, Symbol, Word};
use delfar::decoder::{self, DecodeStatus, StreamDecoder};
use delfar::farcode::{FarCode, FarCodeParams};

#[derive(Parser)]
#[command(
    name = "delfar",
    version,
    about = "Block codes for channels with deletable errors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamsArg {
    /// Parameter file produced by gen-params.
    #[arg(long)]
    params: String,
}

#[derive(Subcommand)]
enum Command {
    /// Derive code parameters for (n, P) and write a parameter file.
    GenParams {
        #[arg(long)]
        n: usize,
        #[arg(long = "P")]
        p: usize,
        /// Interior block residue; defaults to the size-maximizing class.
        #[arg(long)]
        a1: Option<u64>,
        /// Final block residue; defaults to the size-maximizing class.
        #[arg(long)]
        a2: Option<u64>,
        /// Output path; stdout when omitted.
        #[arg(long, short)]
        out: Option<String>,
    },
    /// Encode a message into a codeword (one ASCII bit string line).
    Encode {
        #[command(flatten)]
        params: ParamsArg,
        /// Message as a decimal integer in [0, 2^K).
        #[arg(long)]
        message: String,
    },
    /// Decode a received word (stdin or --input) back to word and message.
    Decode {
        #[command(flatten)]
        params: ParamsArg,
        /// Received word over {0,1,e}; read from stdin when omitted.
        #[arg(long)]
        input: Option<String>,
    },
    /// Corrupt a word (stdin) with a fixed or sampled error pattern.
    Corrupt {
        /// Explicit pattern, e.g. 1F,3D,4F,5E.
        #[arg(long, conflicts_with_all = ["random", "far"])]
        pattern: Option<String>,
        /// Sample the pattern uniformly instead.
        #[arg(long)]
        random: bool,
        /// Restrict sampling to far patterns (gap 3P from --params or --Q).
        #[arg(long, requires = "random")]
        far: bool,
        /// Maximum number of errors for --random; defaults to the largest
        /// far-pattern size when --far, else 1.
        #[arg(long)]
        t: Option<usize>,
        /// Minimum pairwise gap for --far when no parameter file is given.
        #[arg(long = "Q")]
        q: Option<usize>,
        /// Parameter file, used to derive the far gap 3P.
        #[arg(long)]
        params: Option<String>,
        /// RNG seed; chosen from the clock and echoed to stderr when omitted.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Real-time decoding: one symbol per input line, committed blocks out.
    Stream {
        #[command(flatten)]
        params: ParamsArg,
    },
    /// Check a code against far patterns, exhaustively or by sampling.
    Verify {
        #[command(flatten)]
        params: ParamsArg,
        /// Cross every codeword with every far pattern.
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        /// Number of sampled (codeword, pattern) trials.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Skip the per-prefix real-time checks (decode only).
        #[arg(long)]
        no_realtime: bool,
        /// Pattern gap under test. Defaults to 3P, the guaranteed regime;
        /// smaller gaps (e.g. P-far) probe beyond the guarantee.
        #[arg(long = "Q")]
        gap: Option<usize>,
        /// Cap on exhaustive pattern enumeration.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Evaluate the redundancy/error-probability bound formulas at (n, t, d).
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        d: u64,
        /// Also count far patterns exactly and compare the fractions.
        #[arg(long)]
        exact_fraction: bool,
        /// Emit one CSV row (with header) instead of key=value lines.
        #[arg(long)]
        csv: bool,
    },
    /// Exact pattern counting: total and Q-far pattern counts.
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
        #[arg(long = "Q")]
        q: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match command {
        Command::GenParams { n, p, a1, a2, out } => {
            let params = FarCodeParams::derive(n, p, a1, a2)?;
            let text = params.to_file_string()?;
            match out {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Encode { params, message } => {
            let params = load_params(&params.params)?;
            let code = FarCode::from_params(params)?;
            let message: BigUint = message
                .parse()
                .map_err(|_| format!("message must be a decimal integer, got '{message}'"))?;
            let word = code.encode(&message)?;
            println!("{word}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Decode { params, input } => {
            let params = load_params(&params.params)?;
            let text = match input {
                Some(line) => line,
                None => read_stdin_line()?,
            };
            let received: ReceivedWord = text.trim().parse()?;
            let report = decoder::decode(&received, &params);
            match &report.recovered {
                Some(word) => {
                    println!("word={word}");
                    if let Ok(code) = FarCode::from_params(params) {
                        if let Ok(message) = code.decode_message(word) {
                            println!("message={message}");
                        }
                    }
                }
                None => {
                    println!("word=");
                }
            }
            println!("status={}", report.status);
            if let Some(failure) = &report.failure {
                println!("failure={failure}");
            }
            Ok(exit_for(report.status))
        }
        Command::Corrupt {
            pattern,
            random,
            far,
            t,
            q,
            params,
            seed,
        } => {
            let word: Word = read_stdin_line()?.trim().parse()?;
            let n = word.len();
            let g = if let Some(text) = pattern {
                ErrorPattern::parse(&text, n)?
            } else if random {
                let seed = seed.unwrap_or_else(clock_seed);
                eprintln!("seed={seed}");
                if far {
                    let gap = far_gap(q, params.as_deref())?;
                    let t_max = t.unwrap_or((n - 1) / gap + 1);
                    let g = bitword::sample_far_pattern(n, t_max, gap, seed)?;
                    eprintln!("pattern={g}");
                    g
                } else {
                    let t_max = t.unwrap_or(1);
                    let g = bitword::sample_pattern(n, t_max, seed)?;
                    eprintln!("pattern={g}");
                    g
                }
            } else {
                return Err("corrupt needs --pattern or --random".into());
            };
            let received = bitword::apply_pattern(&word, &g)?;
            println!("{received}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Stream { params } => {
            let params = load_params(&params.params)?;
            let code = ExitCode::from(stream_stdin(params)?);
            Ok(code)
        }
        Command::Verify {
            params,
            exhaustive,
            samples,
            seed,
            jobs,
            no_realtime,
            gap,
            budget,
        } => {
            let params = load_params(&params.params)?;
            let opts = VerifyOptions {
                realtime: !no_realtime,
                jobs,
                gap,
                budget,
            };
            let report = if exhaustive {
                let code = FarCode::from_params(params)?;
                analysis::verify_code(&code, VerifyMode::Exhaustive, &opts)?
            } else if let Some(count) = samples {
                analysis::verify_sampled(&params, count, seed, &opts)?
            } else {
                return Err("verify needs --exhaustive or --samples <count>".into());
            };
            println!(
                "decode_checks={} realtime_checks={} distinctness_checks={} failures={}",
                report.decode_checks,
                report.realtime_checks,
                report.distinctness_checks,
                report.failures.len()
            );
            for failure in report.failures.iter().take(20) {
                println!(
                    "FAIL word={} pattern={} detail={}",
                    failure.word, failure.pattern, failure.detail
                );
            }
            if report.pass() {
                println!("PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Bounds {
            n,
            t,
            d,
            exact_fraction,
            csv,
        } => {
            let report = analysis::compute_bounds(n, t, d);
            if csv {
                let check = analysis::verify_fraction_bound(n, t, d)?;
                println!("n,t,d,P,omega,exact_fraction,bound_42_over_omega,bound_eq_2_3,pass");
                println!(
                    "{},{},{},{},{},{:.9},{:.9},{:.9},{}",
                    n,
                    t,
                    d,
                    check.p,
                    check.omega,
                    check.fraction_not_far,
                    check.bound_42_over_omega,
                    check.bound_eq_error_prob,
                    check.pass()
                );
                return Ok(ExitCode::SUCCESS);
            }
            println!("n={n} t={t} d={d}");
            println!("omega={}", report.omega);
            if report.p_exact {
                println!("P={}", report.p as u64);
            } else {
                println!("P={} (warning: d not divisible by 4)", report.p);
            }
            println!("delta_P={}", report.delta_p);
            println!("redundancy_bound={}", report.redundancy_bound);
            println!("rate_lower_bound={}", report.rate_lower_bound);
            println!("error_prob_bound={}", report.error_prob_bound);
            match report.far_redundancy_bound {
                Some(v) => println!("far_redundancy_bound={v}"),
                None => println!("far_redundancy_bound=undefined (delta >= 1)"),
            }
            println!("lower_bound_64={}", report.lower_bound_64);
            println!("lower_bound_seq={}", report.lower_bound_seq);
            println!("hyp_t={} hyp_d={}", report.hyp_t, report.hyp_d);
            if exact_fraction {
                let check = analysis::verify_fraction_bound(n, t, d)?;
                println!("total={}", check.count.total);
                println!("far={}", check.count.far);
                println!("fraction_not_far={}", check.fraction_not_far);
                println!("bound_42_over_omega={}", check.bound_42_over_omega);
                println!(
                    "pass_42={} pass_error_prob={}",
                    check.pass_42, check.pass_error_prob
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Count { n, t, q } => {
            let count = analysis::count_far_patterns(n, t, q)?;
            println!("far={} total={}", count.far, count.total);
            println!("fraction_not_far={}", count.fraction_not_far_f64());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_for(status: DecodeStatus) -> ExitCode {
    match status {
        DecodeStatus::Failed => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn load_params(path: &str) -> Result<FarCodeParams, Box<dyn std::error::Error>> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read '{path}': {e}"))?;
    Ok(FarCodeParams::parse_file(&text)?)
}

fn read_stdin_line() -> Result<String, Box<dyn std::error::Error>> {
    let mut text = String::new();
    io::stdin().read_to_string(&mut text)?;
    match text.lines().next() {
        Some(line) => Ok(line.to_string()),
        None => Err("expected a word on stdin".into()),
    }
}

fn clock_seed() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0)
}

fn far_gap(q: Option<usize>, params: Option<&str>) -> Result<usize, Box<dyn std::error::Error>> {
    if let Some(q) = q {
        return Ok(q);
    }
    if let Some(path) = params {
        let p = load_params(path)?;
        return Ok(3 * p.p);
    }
    Err("--far needs --Q <gap> or --params <file>".into())
}

/// Line protocol: one symbol per line in, committed blocks out, then a
/// terminal STATUS line. Lines carrying several symbols are fed in order.
fn stream_stdin(params: FarCodeParams) -> Result<u8, Box<dyn std::error::Error>> {
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    let mut stream = StreamDecoder::new(params);
    let mut emitted: Vec<u8> = Vec::new();
    let mut printed_blocks = 0usize;
    let p = params.p;
    let flush_blocks =
        |emitted: &[u8], printed: &mut usize, out: &mut dyn Write| -> io::Result<()> {
            loop {
                let start = *printed * p;
                let remaining = emitted.len().saturating_sub(start);
                let is_last_block = *printed + 1 == params.t;
                let need = if is_last_block { params.final_len() } else { p };
                if remaining < need {
                    break;
                }
                let line: String = emitted[start..start + need]
                    .iter()
                    .map(|b| char::from(b'0' + b))
                    .collect();
                writeln!(out, "{line}")?;
                *printed += 1;
                if is_last_block {
                    break;
                }
            }
            Ok(())
        };
    for line in stdin.lock().lines() {
        let line = line?;
        for (i, ch) in line.trim().chars().enumerate() {
            let symbol = match ch {
                '0' => Symbol::Zero,
                '1' => Symbol::One,
                'e' => Symbol::Erasure,
                _ => return Err(format!("invalid symbol '{ch}' at column {}", i + 1).into()),
            };
            emitted.extend(stream.feed(symbol));
        }
        flush_blocks(&emitted, &mut printed_blocks, &mut out)?;
    }
    let (tail, report) = stream.finish();
    emitted.extend(tail);
    flush_blocks(&emitted, &mut printed_blocks, &mut out)?;
    writeln!(out, "STATUS {}", report.status)?;
    Ok(if report.status == DecodeStatus::Failed {
        1
    } else {
        0
    })
}
