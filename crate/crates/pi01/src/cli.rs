use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use pi01_core::dioph::{self, DiophSystem};
use pi01_core::dmr::{self, BoundVariant};
use pi01_core::eh;
use pi01_core::matiyasevich::{self as mat, M6Form, MatSystem};
use pi01_core::{ChebyshevTable, Outcome, Precision, PrecisionPolicy};
use serde::Serialize;
use serde_json::json;

use crate::cache;
use crate::decimal::{exact_decimal, parse_rational};
use crate::error::{Error, Result};
use crate::lab::{self, LevelParams};
use crate::scan::{scan_dmr, DmrScan, ScanOptions};
use crate::selftest;

#[derive(Parser, Debug)]
#[command(
    name = "pi01",
    version,
    about = "Certified finite-range checks of arithmetic forms of the Riemann hypothesis"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Harmonic-sum criterion
    Dmr {
        #[command(subcommand)]
        cmd: DmrCmd,
    },
    /// ψ-gap criterion and the counterexample system
    Mat {
        #[command(subcommand)]
        cmd: MatCmd,
    },
    /// Decide explog(a, b); without --b, find the least b
    Explog(ExplogArgs),
    /// Polynomial systems, Pell sequences, θ₁
    Dioph {
        #[command(subcommand)]
        cmd: DiophCmd,
    },
    /// Primes in progressions, level sums, Schoenfeld bound
    Eh {
        #[command(subcommand)]
        cmd: EhCmd,
    },
    /// Run the built-in oracle suites
    Selftest,
}

#[derive(Args, Debug)]
struct Prec {
    /// Initial working precision in bits
    #[arg(long, default_value_t = 96)]
    bits: u32,
    /// Precision ceiling for escalation
    #[arg(long, default_value_t = 4096)]
    max_bits: u32,
    /// Escalation factor, e.g. 2 or 3/2
    #[arg(long, default_value = "2")]
    growth: String,
}

impl Prec {
    fn policy(&self) -> Result<PrecisionPolicy> {
        let g = parse_rational(&self.growth)?;
        let (num, den) = match (g.numer().to_u32(), g.denom().to_u32()) {
            (Some(n), Some(d)) => (n, d),
            _ => {
                return Err(Error::usage(format!(
                    "growth {} is out of range",
                    self.growth
                )))
            }
        };
        PrecisionPolicy::new(self.bits, self.max_bits, num, den)
            .map_err(|e| Error::usage(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the report here instead of standard out
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl Output {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Args, Debug)]
struct Range {
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
}

impl Range {
    fn check(&self) -> Result<()> {
        if self.from > self.to {
            return Err(Error::usage(format!(
                "empty range {}..={}",
                self.from, self.to
            )));
        }
        Ok(())
    }
}

#[derive(Args, Debug)]
struct Workers {
    /// Worker threads; defaults to PI01_WORKERS, then the logical core count
    #[arg(long)]
    workers: Option<usize>,
}

impl Workers {
    fn resolve(&self) -> Result<usize> {
        let n = match self.workers {
            Some(n) => n,
            None => match std::env::var("PI01_WORKERS") {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::usage(format!("PI01_WORKERS={v:?} is not a count")))?,
                Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
            },
        };
        if n == 0 {
            return Err(Error::usage("at least one worker is needed"));
        }
        Ok(n)
    }
}

fn parse_variant(s: &str) -> std::result::Result<BoundVariant, String> {
    s.parse().map_err(|e: pi01_core::Error| e.to_string())
}

fn parse_big(s: &str) -> std::result::Result<BigUint, String> {
    s.parse()
        .map_err(|_| format!("not a nonnegative integer: {s:?}"))
}

fn parse_binding(s: &str) -> std::result::Result<(String, BigInt), String> {
    let (v, c) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let c = c
        .trim()
        .parse()
        .map_err(|_| format!("not an integer: {c:?}"))?;
    Ok((v.trim().to_string(), c))
}

#[derive(Subcommand, Debug)]
enum DmrCmd {
    /// Check every n of a range, with optional checkpointing
    Scan {
        #[command(flatten)]
        range: Range,
        #[arg(long, value_parser = parse_variant, default_value = "classic36")]
        variant: BoundVariant,
        #[command(flatten)]
        prec: Prec,
        #[command(flatten)]
        workers: Workers,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
        /// Binary sieve table to reuse between runs
        #[arg(long)]
        sieve_cache: Option<PathBuf>,
        /// Abort the process once this many records are checkpointed
        #[arg(long, hide = true)]
        halt_after: Option<u64>,
    },
    /// Certified verdict at one n
    Check {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_variant, default_value = "classic36")]
        variant: BoundVariant,
        #[command(flatten)]
        prec: Prec,
    },
    /// Verdict by direct summation, n ≤ 8
    Oracle {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_variant, default_value = "classic36")]
        variant: BoundVariant,
        #[arg(long, default_value_t = 96)]
        bits: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum M6Arg {
    Printed,
    Derived,
}

impl From<M6Arg> for M6Form {
    fn from(m: M6Arg) -> Self {
        match m {
            M6Arg::Printed => M6Form::Printed,
            M6Arg::Derived => M6Form::Derived,
        }
    }
}

#[derive(Subcommand, Debug)]
enum MatCmd {
    /// ψ-gap inequality over a range; with --search, the counterexample system
    Scan {
        #[command(flatten)]
        range: Range,
        #[arg(long)]
        search: bool,
        #[arg(long, value_enum, default_value_t = M6Arg::Printed)]
        m6: M6Arg,
        #[command(flatten)]
        prec: Prec,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        sieve_cache: Option<PathBuf>,
    },
    /// ψ-gap verdict at n and the condition report for (k, l, m, n)
    Check {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_big)]
        k: Option<BigUint>,
        #[arg(long, value_parser = parse_big)]
        l: Option<BigUint>,
        #[arg(long, value_parser = parse_big)]
        m: Option<BigUint>,
        #[arg(long, value_enum, default_value_t = M6Arg::Printed)]
        m6: M6Arg,
        #[command(flatten)]
        prec: Prec,
    },
    /// Same as the top-level explog
    Explog(ExplogArgs),
}

#[derive(Args, Debug)]
struct ExplogArgs {
    #[arg(long, value_parser = parse_big)]
    a: BigUint,
    #[arg(long, value_parser = parse_big)]
    b: Option<BigUint>,
}

#[derive(Subcommand, Debug)]
enum DiophCmd {
    /// Sum of squares of a system read from --input or standard in
    Combine {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Value of a polynomial at an integer point
    Eval {
        #[arg(long)]
        poly: String,
        /// name=value, repeatable
        #[arg(long = "at", value_parser = parse_binding)]
        at: Vec<(String, BigInt)>,
    },
    /// n-th solution of χ² − (a² − 1)ψ² = 1
    Pell {
        #[arg(long, value_parser = parse_big)]
        a: BigUint,
        #[arg(long)]
        n: u64,
    },
    /// Truncated θ₁, or the prime extracted from it
    Theta1 {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        extract: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct LabPrec {
    #[arg(long, default_value_t = 64)]
    bits: u32,
}

impl LabPrec {
    fn get(&self) -> Result<Precision> {
        Precision::new(self.bits).map_err(|e| Error::usage(e.to_string()))
    }
}

#[derive(Subcommand, Debug)]
enum EhCmd {
    /// π(x;q,a) and E(x;q,a), for one class or every coprime class
    Record {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: Option<u64>,
        #[command(flatten)]
        prec: LabPrec,
        #[command(flatten)]
        output: Output,
    },
    /// Σ_{q≤Q} E*(x;q) at Q = √x (ln x)^{−B}
    Bvsum {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        prec: LabPrec,
        #[command(flatten)]
        workers: Workers,
        #[command(flatten)]
        output: Output,
    },
    /// Σ_{q≤Q} E*(x;q) at Q = x^{1−ε}
    Ehsum {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        eps: String,
        #[command(flatten)]
        prec: LabPrec,
        #[command(flatten)]
        workers: Workers,
        #[command(flatten)]
        output: Output,
    },
    /// Σ_{q≤Q} E*(x;q) at the FGHM threshold
    Fghm {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        a: String,
        #[command(flatten)]
        prec: LabPrec,
        #[command(flatten)]
        workers: Workers,
        #[command(flatten)]
        output: Output,
    },
    /// Consecutive prime gaps ≤ bound up to x
    Gaps {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 16)]
        bound: u64,
    },
    /// |π(x) − Li(x)| < √x ln x/(8π) at --x or over --from..--to
    Schoenfeld {
        #[arg(long, conflicts_with_all = ["from", "to"])]
        x: Option<u64>,
        #[arg(long, requires = "to")]
        from: Option<u64>,
        #[arg(long, requires = "from")]
        to: Option<u64>,
        #[command(flatten)]
        prec: LabPrec,
    },
}

/// Parses `args` (program name first), runs one subcommand and returns the
/// exit status: 0 all holds, 1 usage or IO error, 2 a failure was found,
/// 3 undecided at the precision ceiling.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let code = match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    eprintln!("wall time {:.3}s", start.elapsed().as_secs_f64());
    code
}

fn outcome_code(o: Outcome) -> i32 {
    match o {
        Outcome::Holds => 0,
        Outcome::Fails => 2,
        Outcome::Undecided => 3,
    }
}

fn table(n: u64, cache: Option<&Path>) -> Result<ChebyshevTable> {
    cache::table_for(n, cache)
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Dmr { cmd } => run_dmr(cmd),
        Command::Mat { cmd } => run_mat(cmd),
        Command::Explog(args) => run_explog(args),
        Command::Dioph { cmd } => run_dioph(cmd),
        Command::Eh { cmd } => run_eh(cmd),
        Command::Selftest => Ok(if selftest::run_all(&mut std::io::stdout()) {
            0
        } else {
            2
        }),
    }
}

fn run_dmr(cmd: DmrCmd) -> Result<i32> {
    match cmd {
        DmrCmd::Scan {
            range,
            variant,
            prec,
            workers,
            checkpoint,
            output,
            sieve_cache,
            halt_after,
        } => {
            range.check()?;
            let scan = DmrScan::new(range.from, range.to, variant, prec.policy()?)?;
            let workers = workers.resolve()?;
            let t = table(range.to, sieve_cache.as_deref())?;
            let halt = move |done: u64| {
                if halt_after.is_some_and(|h| done >= h) {
                    std::process::abort();
                }
            };
            let report = scan_dmr(
                &scan,
                &t,
                ScanOptions {
                    workers,
                    checkpoint: checkpoint.as_deref(),
                    progress: Some(&halt),
                    ..ScanOptions::default()
                },
            )?;
            output.emit(&match output.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            })?;
            for r in report
                .records
                .iter()
                .filter(|r| r.outcome() == Some(Outcome::Fails))
            {
                eprintln!(
                    "certificate: {}",
                    serde_json::to_string(r).expect("serializes")
                );
            }
            eprintln!(
                "{} holds, {} fails, {} undecided",
                report.counts.holds, report.counts.fails, report.counts.undecided
            );
            Ok(report.exit_code())
        }
        DmrCmd::Check { n, variant, prec } => {
            let t = table(n, None)?;
            let e = dmr::DmrEngine::new(&t, prec.policy()?, n.max(1))?.evaluate(n, variant)?;
            println!("n = {n}, {variant}: {}", e.verdict.outcome);
            println!("lhs {}", e.lhs);
            println!("rhs {}", e.rhs);
            println!("bits {}", e.verdict.precision_used);
            Ok(outcome_code(e.verdict.outcome))
        }
        DmrCmd::Oracle { n, variant, bits } => {
            let t = table(n.max(2), None)?;
            let prec = Precision::new(bits).map_err(|e| Error::usage(e.to_string()))?;
            let v = dmr::dmr_oracle(n, variant, prec, &t)?;
            println!("n = {n}, {variant}: {} (direct summation)", v.outcome);
            Ok(outcome_code(v.outcome))
        }
    }
}

#[derive(Serialize)]
struct GapJson<'a> {
    from: u64,
    to: u64,
    holds: u64,
    fails: &'a [u64],
    undecided: &'a [u64],
}

fn big_json(v: &BigUint) -> serde_json::Value {
    match v.to_u64() {
        Some(u) => json!(u),
        None => json!(v.to_string()),
    }
}

fn certificate(sys: &MatSystem, report: &mat::ConditionReport) -> serde_json::Value {
    let conditions: serde_json::Map<String, serde_json::Value> = report
        .conditions
        .iter()
        .map(|(k, o)| (k.to_string(), json!(o.as_str())))
        .collect();
    json!({
        "k": big_json(&sys.k),
        "l": big_json(&sys.l),
        "m": sys.m.to_string(),
        "n": sys.n,
        "conditions": conditions,
    })
}

fn run_mat(cmd: MatCmd) -> Result<i32> {
    match cmd {
        MatCmd::Scan {
            range,
            search,
            m6,
            prec,
            output,
            sieve_cache,
        } => {
            range.check()?;
            let policy = prec.policy()?;
            let t = table(range.to, sieve_cache.as_deref())?;
            if search {
                let r = mat::counterexample_search(range.from, range.to, policy, &t, m6.into())?;
                let cert = match &r.system {
                    Some(sys) => Some(certificate(
                        sys,
                        &mat::mat_conditions_check(sys, policy, &t, m6.into())?,
                    )),
                    None => None,
                };
                let text = match output.format {
                    Format::Json => {
                        serde_json::to_string_pretty(&json!({
                            "from": range.from,
                            "to": range.to,
                            "scanned": r.scanned,
                            "counterexample": cert,
                            "s2_unverified": r.s2_unverified,
                            "s3_unverified": r.s3_unverified,
                        }))
                        .expect("serializes")
                            + "\n"
                    }
                    Format::Csv => format!(
                        "from,to,scanned,counterexample,s2_unverified,s3_unverified\n{},{},{},{},{},{}\n",
                        range.from,
                        range.to,
                        r.scanned,
                        r.system.as_ref().map_or(String::new(), |s| s.n.to_string()),
                        r.s2_unverified.len(),
                        r.s3_unverified.len()
                    ),
                };
                output.emit(&text)?;
                return Ok(if r.system.is_some() {
                    2
                } else if r.s2_unverified.is_empty() && r.s3_unverified.is_empty() {
                    0
                } else {
                    3
                });
            }
            let g = mat::psi_gap_scan(range.from, range.to, policy, &t)?;
            let text = match output.format {
                Format::Json => {
                    serde_json::to_string_pretty(&GapJson {
                        from: g.from,
                        to: g.to,
                        holds: g.holds,
                        fails: &g.fails,
                        undecided: &g.undecided,
                    })
                    .expect("serializes")
                        + "\n"
                }
                Format::Csv => format!(
                    "from,to,holds,fails,undecided\n{},{},{},{},{}\n",
                    g.from,
                    g.to,
                    g.holds,
                    g.fails.len(),
                    g.undecided.len()
                ),
            };
            output.emit(&text)?;
            Ok(if !g.fails.is_empty() {
                2
            } else if !g.undecided.is_empty() {
                3
            } else {
                0
            })
        }
        MatCmd::Check {
            n,
            k,
            l,
            m,
            m6,
            prec,
        } => {
            let policy = prec.policy()?;
            let t = table(n.max(2), None)?;
            let gap = mat::psi_gap_check(n, policy, &t)?;
            println!("n = {n}: ψ-gap inequality {}", gap.outcome);
            let m = match m {
                Some(m) => m,
                None => t.lcm_upto(n)?,
            };
            let k = k.unwrap_or_else(|| mat::explog_find_b(&BigUint::from(n - 1)));
            let l = match l {
                Some(l) => l,
                None => mat::explog_find_b(&(&m - 1u32)),
            };
            let sys = MatSystem { k, l, m, n };
            let report = mat::mat_conditions_check(&sys, policy, &t, m6.into())?;
            println!(
                "{}",
                serde_json::to_string(&certificate(&sys, &report)).expect("serializes")
            );
            Ok(outcome_code(gap.outcome))
        }
        MatCmd::Explog(args) => run_explog(args),
    }
}

fn run_explog(args: ExplogArgs) -> Result<i32> {
    let b = match args.b {
        Some(b) => b,
        None => {
            let b = mat::explog_find_b(&args.a);
            println!("least b = {b}");
            b
        }
    };
    let r = mat::explog_holds(&args.a, &b);
    match (&r.witness_x, &r.refutation) {
        (Some(x), _) => {
            println!("explog({}, {b}) holds, witness x={x}", args.a);
            Ok(0)
        }
        (None, Some(why)) => {
            println!("explog({}, {b}) does not hold: {why}", args.a);
            Ok(2)
        }
        (None, None) => unreachable!("explog always returns a witness or a refutation"),
    }
}

fn run_dioph(cmd: DiophCmd) -> Result<i32> {
    match cmd {
        DiophCmd::Combine { input } => {
            let text = match &input {
                Some(p) => std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
                None => {
                    let mut s = String::new();
                    std::io::stdin()
                        .read_to_string(&mut s)
                        .map_err(|e| Error::io("<stdin>", e))?;
                    s
                }
            };
            let sys = DiophSystem::from_equations(dioph::parse_system(&text)?);
            println!("{}", dioph::combine_sum_of_squares(&sys)?);
            Ok(0)
        }
        DiophCmd::Eval { poly, at } => {
            let p = dioph::parse_polynomial(&poly)?;
            let v = dioph::poly_eval(&p, &at.into_iter().collect())?;
            println!("{v}");
            Ok(0)
        }
        DiophCmd::Pell { a, n } => {
            let p = dioph::pell_seq(&a, n)?;
            println!("chi={} psi={}", p.chi, p.psi);
            Ok(0)
        }
        DiophCmd::Theta1 { k, extract } => {
            match extract {
                Some(n) => println!("{}", dioph::prime_from_theta1(n, k)?),
                None => {
                    let t = dioph::theta1_partial(k)?;
                    println!("{}", exact_decimal(&t).expect("θ₁ truncations are decimal"));
                }
            }
            Ok(0)
        }
    }
}

fn run_eh(cmd: EhCmd) -> Result<i32> {
    match cmd {
        EhCmd::Record {
            x,
            q,
            a,
            prec,
            output,
        } => {
            let t = table(x, None)?;
            let p = prec.get()?;
            let classes: Vec<u64> = match a {
                Some(a) => vec![a],
                None => (0..q).filter(|&a| num_integer::gcd(a, q) == 1).collect(),
            };
            let records = classes
                .into_iter()
                .map(|a| eh::error_term(x, q, a, &t, p))
                .collect::<pi01_core::Result<Vec<_>>>()?;
            output.emit(&match output.format {
                Format::Json => lab::records_json(&records),
                Format::Csv => lab::records_csv(&records),
            })?;
            Ok(0)
        }
        EhCmd::Bvsum {
            x,
            a,
            b,
            prec,
            workers,
            output,
        } => level(
            x,
            LevelParams::Bv {
                a: parse_rational(&a)?,
                b: parse_rational(&b)?,
            },
            &prec,
            &workers,
            &output,
        ),
        EhCmd::Ehsum {
            x,
            eps,
            prec,
            workers,
            output,
        } => level(
            x,
            LevelParams::Eh {
                eps: parse_rational(&eps)?,
            },
            &prec,
            &workers,
            &output,
        ),
        EhCmd::Fghm {
            x,
            a,
            prec,
            workers,
            output,
        } => level(
            x,
            LevelParams::Fghm {
                a: parse_rational(&a)?,
            },
            &prec,
            &workers,
            &output,
        ),
        EhCmd::Gaps { x, bound } => {
            let t = table(x, None)?;
            println!("{}", eh::gpy_gap_count(x, bound, &t)?);
            Ok(0)
        }
        EhCmd::Schoenfeld { x, from, to, prec } => {
            let p = prec.get()?;
            match (x, from, to) {
                (Some(x), None, None) => {
                    let v = eh::schoenfeld_check(x, &table(x, None)?, p)?;
                    println!("x = {x}: {}", v.outcome);
                    Ok(outcome_code(v.outcome))
                }
                (None, Some(from), Some(to)) => {
                    if from > to {
                        return Err(Error::usage(format!("empty range {from}..={to}")));
                    }
                    let s = eh::schoenfeld_sweep(from, to, &table(to, None)?, p)?;
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "from": s.from,
                            "to": s.to,
                            "stretches": s.stretches,
                            "pointwise": s.pointwise,
                            "fails": s.fails,
                            "undecided": s.undecided,
                        }))
                        .expect("serializes")
                    );
                    Ok(outcome_code(s.outcome()))
                }
                _ => Err(Error::usage("give --x, or both --from and --to")),
            }
        }
    }
}

fn level(
    x: u64,
    params: LevelParams,
    prec: &LabPrec,
    workers: &Workers,
    output: &Output,
) -> Result<i32> {
    let t = table(x, None)?;
    let r = lab::level_report(x, &params, &t, prec.get()?, workers.resolve()?)?;
    output.emit(&match output.format {
        Format::Json => lab::level_json(&r),
        Format::Csv => lab::levels_csv(std::slice::from_ref(&r)),
    })?;
    Ok(0)
}
