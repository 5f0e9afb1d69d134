//! Append-only JSON-lines checkpoints for DMR scans.
//!
//! The first line identifies the run configuration by hash; every further
//! line is one [`DmrRecord`]. A torn last line (the scan was killed mid-write)
//! is dropped with a warning and its `n` recomputed on resume.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scan::{DmrRecord, DmrScan};

const KIND: &str = "pi01-dmr-checkpoint";
const VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    checkpoint: String,
    version: u32,
    config_hash: String,
    config: serde_json::Value,
}

/// Serialized single writer over an open checkpoint.
#[derive(Debug)]
pub struct CheckpointWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CheckpointWriter {
    pub fn append(&mut self, records: &[DmrRecord]) -> Result<()> {
        let io = |e| Error::io(&self.path, e);
        for r in records {
            let line = serde_json::to_string(r).expect("records serialize");
            writeln!(self.out, "{line}").map_err(io)?;
        }
        self.out.flush().map_err(io)
    }
}

fn header_line(scan: &DmrScan) -> String {
    let h = Header {
        checkpoint: KIND.into(),
        version: VERSION,
        config_hash: scan.config_hash(),
        config: serde_json::to_value(scan.config_json()).expect("config serializes"),
    };
    serde_json::to_string(&h).expect("header serializes")
}

/// Opens `path` for `scan`, returning the records already there keyed by `n`.
pub fn open(path: &Path, scan: &DmrScan) -> Result<(BTreeMap<u64, DmrRecord>, CheckpointWriter)> {
    let io = |e| Error::io(path, e);
    let text = match fs::read(path) {
        Ok(b) => String::from_utf8_lossy(&b).into_owned(),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(io(e)),
    };
    let mut done = BTreeMap::new();
    let mut keep = 0usize;
    if text.is_empty() {
        let mut f = File::create(path).map_err(io)?;
        writeln!(f, "{}", header_line(scan)).map_err(io)?;
        f.sync_all().map_err(io)?;
    } else {
        let mut lines = Vec::new();
        let mut start = 0;
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                lines.push((start, &text[start..i], true));
                start = i + 1;
            }
        }
        if start < text.len() {
            lines.push((start, &text[start..], false));
        }
        let (_, first, _) = lines[0];
        let header: Header = serde_json::from_str(first)
            .ok()
            .filter(|h: &Header| h.checkpoint == KIND)
            .ok_or_else(|| Error::format(path, "not a DMR scan checkpoint"))?;
        if header.version != VERSION {
            return Err(Error::format(
                path,
                format!("unsupported checkpoint version {}", header.version),
            ));
        }
        let expected = scan.config_hash();
        if header.config_hash != expected {
            return Err(Error::ConfigMismatch {
                path: path.into(),
                found: header.config_hash,
                expected,
            });
        }
        keep = text.len();
        let last = lines.len() - 1;
        for (i, &(off, line, terminated)) in lines.iter().enumerate().skip(1) {
            let rec = if terminated {
                serde_json::from_str::<DmrRecord>(line).ok()
            } else {
                None
            };
            match rec {
                Some(r) if r.matches(scan) => {
                    if let Some(prev) = done.insert(r.n, r.clone()) {
                        if prev != r {
                            return Err(Error::format(
                                path,
                                format!("conflicting records for n = {}", r.n),
                            ));
                        }
                    }
                }
                Some(r) => {
                    return Err(Error::format(
                        path,
                        format!("record for n = {} is outside this run", r.n),
                    ))
                }
                None if i == last => {
                    eprintln!(
                        "warning: {}: dropping a damaged trailing line",
                        path.display()
                    );
                    keep = off;
                }
                None => {
                    return Err(Error::format(
                        path,
                        format!("damaged record on line {}", i + 1),
                    ))
                }
            }
        }
    }
    if keep < text.len() {
        let f = OpenOptions::new().write(true).open(path).map_err(io)?;
        f.set_len(keep as u64).map_err(io)?;
    }
    let f = OpenOptions::new().append(true).open(path).map_err(io)?;
    Ok((
        done,
        CheckpointWriter {
            path: path.into(),
            out: BufWriter::new(f),
        },
    ))
}
