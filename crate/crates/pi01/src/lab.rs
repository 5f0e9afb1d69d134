//! Parallel level sums and CSV/JSON emission for the EH lab.

use pi01_core::dyadic::Round;
use pi01_core::eh::{self, EhRecord, LevelSumReport, LiTable, Regime};
use pi01_core::{BigRational, ChebyshevTable, Interval, Precision};
use rayon::prelude::*;
use serde::Serialize;

use crate::decimal::exact_decimal;
use crate::error::{Error, Result};

pub const RECORD_HEADER: &str = "x,q,a,pi_qa,li_over_phi_lo,li_over_phi_hi,e_lo,e_hi";
pub const LEVEL_HEADER: &str = "x,Q,regime,A,B,eps,sum_lo,sum_hi";

const DIGITS: u32 = 17;

fn lo(iv: &Interval) -> String {
    iv.lo().to_decimal(DIGITS, Round::Down)
}

fn hi(iv: &Interval) -> String {
    iv.hi().to_decimal(DIGITS, Round::Up)
}

pub fn rational_text(r: &BigRational) -> String {
    exact_decimal(r).unwrap_or_else(|| r.to_string())
}

/// Same summation order and rounding as the serial core sum, so results
/// do not depend on the worker count.
pub fn level_sum(table: &LiTable, q_max: u64, prec: Precision, workers: usize) -> Result<Interval> {
    eh::check_level(table.x(), q_max)?;
    let work = prec.plus(8);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::usage(format!("cannot start workers: {e}")))?;
    let terms: Vec<Interval> = pool.install(|| {
        (1..=q_max)
            .into_par_iter()
            .map(|q| table.e_star(q, work))
            .collect::<pi01_core::Result<_>>()
    })?;
    let sum = terms
        .iter()
        .fold(Interval::zero(), |acc, t| acc.add(t, work));
    Ok(sum.round_out(prec))
}

#[derive(Debug, Clone)]
pub enum LevelParams {
    Bv { a: BigRational, b: BigRational },
    Eh { eps: BigRational },
    Fghm { a: BigRational },
}

pub fn level_report(
    x: u64,
    params: &LevelParams,
    table: &ChebyshevTable,
    prec: Precision,
    workers: usize,
) -> Result<LevelSumReport> {
    let (q_max, regime, ps) = match params {
        LevelParams::Bv { a, b } => (
            eh::bv_level(x, b)?,
            Regime::Bv,
            [Some(a.clone()), Some(b.clone()), None],
        ),
        LevelParams::Eh { eps } => (
            eh::eh_level(x, eps)?,
            Regime::Eh,
            [None, None, Some(eps.clone())],
        ),
        LevelParams::Fghm { a } => (
            eh::fghm_level(x, a)?,
            Regime::Fghm,
            [Some(a.clone()), None, None],
        ),
    };
    eh::check_level(x, q_max)?;
    let sum = if q_max == 0 {
        Interval::zero()
    } else {
        level_sum(&LiTable::new(table, x)?, q_max, prec, workers)?
    };
    Ok(eh::level_report(x, q_max, regime, ps, sum, prec)?)
}

pub fn records_csv(records: &[EhRecord]) -> String {
    let mut s = format!("{RECORD_HEADER}\n");
    for r in records {
        s += &format!(
            "{},{},{},{},{},{},{},{}\n",
            r.x,
            r.q,
            r.a,
            r.pi_qa,
            lo(&r.li_over_phi),
            hi(&r.li_over_phi),
            lo(&r.error),
            hi(&r.error)
        );
    }
    s
}

fn opt(r: &Option<BigRational>) -> String {
    r.as_ref().map(rational_text).unwrap_or_default()
}

pub fn levels_csv(reports: &[LevelSumReport]) -> String {
    let mut s = format!("{LEVEL_HEADER}\n");
    for r in reports {
        s += &format!(
            "{},{},{},{},{},{},{},{}\n",
            r.x,
            r.q_max,
            r.regime,
            opt(&r.a),
            opt(&r.b),
            opt(&r.eps),
            lo(&r.sum),
            hi(&r.sum)
        );
    }
    s
}

#[derive(Serialize)]
struct IvJson {
    lo: String,
    hi: String,
    lo_dec: String,
    hi_dec: String,
}

fn iv_json(iv: &Interval) -> IvJson {
    IvJson {
        lo: iv.lo().to_string(),
        hi: iv.hi().to_string(),
        lo_dec: lo(iv),
        hi_dec: hi(iv),
    }
}

#[derive(Serialize)]
struct RecordJson {
    x: u64,
    q: u64,
    a: u64,
    pi_qa: u64,
    li_over_phi: IvJson,
    e: IvJson,
}

pub fn records_json(records: &[EhRecord]) -> String {
    let v: Vec<RecordJson> = records
        .iter()
        .map(|r| RecordJson {
            x: r.x,
            q: r.q,
            a: r.a,
            pi_qa: r.pi_qa,
            li_over_phi: iv_json(&r.li_over_phi),
            e: iv_json(&r.error),
        })
        .collect();
    serde_json::to_string_pretty(&v).expect("serializes") + "\n"
}

#[derive(Serialize)]
struct LevelJson {
    x: u64,
    #[serde(rename = "Q")]
    q_max: u64,
    regime: &'static str,
    #[serde(rename = "A")]
    a: Option<String>,
    #[serde(rename = "B")]
    b: Option<String>,
    eps: Option<String>,
    sum: IvJson,
    ratio: Option<IvJson>,
}

pub fn level_json(r: &LevelSumReport) -> String {
    let v = LevelJson {
        x: r.x,
        q_max: r.q_max,
        regime: r.regime.as_str(),
        a: r.a.as_ref().map(rational_text),
        b: r.b.as_ref().map(rational_text),
        eps: r.eps.as_ref().map(rational_text),
        sum: iv_json(&r.sum),
        ratio: r.ratio.as_ref().map(iv_json),
    };
    serde_json::to_string_pretty(&v).expect("serializes") + "\n"
}
