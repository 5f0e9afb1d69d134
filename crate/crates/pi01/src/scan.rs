//! Checkpointed, parallel DMR range scans.

use std::collections::BTreeMap;
use std::hash::Hasher;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};

use fnv::FnvHasher;
use pi01_core::dmr::{BoundVariant, DmrEngine, DmrEvaluation};
use pi01_core::{ChebyshevTable, Outcome, PrecisionPolicy};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checkpoint;
use crate::error::{Error, Result};

/// What a scan computes. Worker count and paths are not part of it: they
/// cannot change the records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DmrScan {
    pub from: u64,
    pub to: u64,
    pub variant: BoundVariant,
    pub policy: PrecisionPolicy,
}

#[derive(Debug, Serialize)]
pub struct ScanConfigJson {
    kind: &'static str,
    from: u64,
    to: u64,
    variant: &'static str,
    bits: u32,
    max_bits: u32,
    growth: String,
}

pub fn growth_text(policy: &PrecisionPolicy) -> String {
    match policy.growth() {
        (n, 1) => n.to_string(),
        (n, d) => format!("{n}/{d}"),
    }
}

impl DmrScan {
    pub fn new(from: u64, to: u64, variant: BoundVariant, policy: PrecisionPolicy) -> Result<Self> {
        if from == 0 {
            return Err(Error::usage("the DMR criterion starts at n = 1"));
        }
        if from > to {
            return Err(Error::usage(format!("empty range {from}..={to}")));
        }
        Ok(DmrScan {
            from,
            to,
            variant,
            policy,
        })
    }

    pub fn config_json(&self) -> ScanConfigJson {
        ScanConfigJson {
            kind: "dmr",
            from: self.from,
            to: self.to,
            variant: self.variant.as_str(),
            bits: self.policy.initial_bits(),
            max_bits: self.policy.max_bits(),
            growth: growth_text(&self.policy),
        }
    }

    pub fn config_hash(&self) -> String {
        let text = serde_json::to_string(&self.config_json()).expect("config serializes");
        let mut h = FnvHasher::default();
        h.write(text.as_bytes());
        format!("{:016x}", h.finish())
    }

    pub fn span(&self) -> u64 {
        self.to - self.from + 1
    }
}

/// One checkpoint line. Endpoints are exact dyadic strings `m*2^e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DmrRecord {
    pub n: u64,
    pub variant: String,
    pub verdict: String,
    pub lhs_lo: String,
    pub lhs_hi: String,
    pub rhs_lo: String,
    pub rhs_hi: String,
    pub bits: u32,
}

impl DmrRecord {
    pub fn from_evaluation(e: &DmrEvaluation) -> Self {
        DmrRecord {
            n: e.n,
            variant: e.variant.as_str().into(),
            verdict: e.verdict.outcome.as_str().into(),
            lhs_lo: e.lhs.lo().to_string(),
            lhs_hi: e.lhs.hi().to_string(),
            rhs_lo: e.rhs.lo().to_string(),
            rhs_hi: e.rhs.hi().to_string(),
            bits: e.verdict.precision_used,
        }
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.verdict.parse().ok()
    }

    pub(crate) fn matches(&self, scan: &DmrScan) -> bool {
        (scan.from..=scan.to).contains(&self.n)
            && self.variant == scan.variant.as_str()
            && self.outcome().is_some()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub holds: u64,
    pub fails: u64,
    pub undecided: u64,
}

/// Everything a scan produced, ordered by `n`. Independent of worker count
/// and of how often the scan was interrupted and resumed.
#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub config: ScanConfigJson,
    pub config_hash: String,
    pub complete: bool,
    pub counts: Counts,
    pub fails: Vec<u64>,
    pub undecided: Vec<u64>,
    pub records: Vec<DmrRecord>,
}

impl ScanReport {
    fn new(scan: &DmrScan, records: BTreeMap<u64, DmrRecord>) -> Self {
        let mut counts = Counts::default();
        let (mut fails, mut undecided) = (Vec::new(), Vec::new());
        for r in records.values() {
            match r.outcome() {
                Some(Outcome::Holds) => counts.holds += 1,
                Some(Outcome::Fails) => {
                    counts.fails += 1;
                    fails.push(r.n);
                }
                _ => {
                    counts.undecided += 1;
                    undecided.push(r.n);
                }
            }
        }
        ScanReport {
            config: scan.config_json(),
            config_hash: scan.config_hash(),
            complete: records.len() as u64 == scan.span(),
            counts,
            fails,
            undecided,
            records: records.into_values().collect(),
        }
    }

    /// Exit status per the CLI contract.
    pub fn exit_code(&self) -> i32 {
        if self.counts.fails > 0 {
            2
        } else if self.counts.undecided > 0 || !self.complete {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,variant,verdict,lhs_lo,lhs_hi,rhs_lo,rhs_hi,bits\n");
        for r in &self.records {
            s += &format!(
                "{},{},{},{},{},{},{},{}\n",
                r.n, r.variant, r.verdict, r.lhs_lo, r.lhs_hi, r.rhs_lo, r.rhs_hi, r.bits
            );
        }
        s
    }
}

#[derive(Default, Clone, Copy)]
pub struct ScanOptions<'a> {
    pub workers: usize,
    pub checkpoint: Option<&'a Path>,
    /// Checked between batches; once set the scan stops with what it has.
    pub cancel: Option<&'a AtomicBool>,
    /// Called after each batch with the number of records held so far.
    pub progress: Option<&'a (dyn Fn(u64) + Sync)>,
}

fn batch_size(workers: usize) -> usize {
    (workers * 8).max(32)
}

pub fn scan_dmr(
    scan: &DmrScan,
    table: &ChebyshevTable,
    opts: ScanOptions<'_>,
) -> Result<ScanReport> {
    let workers = opts.workers.max(1);
    let (mut done, mut writer) = match opts.checkpoint {
        Some(path) => {
            let (d, w) = checkpoint::open(path, scan)?;
            (d, Some(w))
        }
        None => (BTreeMap::new(), None),
    };
    let todo: Vec<u64> = (scan.from..=scan.to)
        .filter(|n| !done.contains_key(n))
        .collect();
    if !todo.is_empty() {
        let engine = DmrEngine::new(table, scan.policy, scan.to)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::usage(format!("cannot start {workers} workers: {e}")))?;
        for chunk in todo.chunks(batch_size(workers)) {
            if opts.cancel.is_some_and(|c| c.load(Ordering::SeqCst)) {
                break;
            }
            let batch: Vec<DmrRecord> = pool.install(|| {
                chunk
                    .par_iter()
                    .map(|&n| {
                        engine
                            .evaluate(n, scan.variant)
                            .map(|e| DmrRecord::from_evaluation(&e))
                    })
                    .collect::<pi01_core::Result<_>>()
            })?;
            if let Some(w) = writer.as_mut() {
                w.append(&batch)?;
            }
            done.extend(batch.into_iter().map(|r| (r.n, r)));
            if let Some(p) = opts.progress {
                p(done.len() as u64);
            }
        }
    }
    Ok(ScanReport::new(scan, done))
}
