use std::fs;
use std::sync::atomic::{AtomicBool, Ordering};

use pi01::scan::{scan_dmr, DmrScan, ScanOptions};
use pi01::Error;
use pi01_core::dmr::BoundVariant;
use pi01_core::sieve::build_table;
use pi01_core::PrecisionPolicy;

fn scan(to: u64, variant: BoundVariant) -> DmrScan {
    DmrScan::new(1, to, variant, PrecisionPolicy::default()).unwrap()
}

fn lines(path: &std::path::Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(String::from)
        .collect()
}

#[test]
fn records_roundtrip_through_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let t = build_table(300).unwrap();
    let s = scan(300, BoundVariant::Rational25);
    let opts = ScanOptions {
        workers: 2,
        checkpoint: Some(&path),
        ..ScanOptions::default()
    };
    let first = scan_dmr(&s, &t, opts).unwrap();
    let written = lines(&path);
    assert_eq!(written.len(), 301);
    assert!(written[0].contains(&s.config_hash()));
    // a second pass reads everything back and computes nothing
    let again = scan_dmr(&s, &t, opts).unwrap();
    assert_eq!(first.to_json(), again.to_json());
    assert_eq!(lines(&path), written);
}

#[test]
fn resume_refuses_a_different_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let t = build_table(50).unwrap();
    let opts = ScanOptions {
        workers: 1,
        checkpoint: Some(&path),
        ..ScanOptions::default()
    };
    scan_dmr(&scan(50, BoundVariant::Classic36), &t, opts).unwrap();
    let before = fs::read(&path).unwrap();
    let err = scan_dmr(&scan(50, BoundVariant::ImprovedGamma), &t, opts).unwrap_err();
    assert!(matches!(err, Error::ConfigMismatch { .. }), "{err}");
    let other_bits = DmrScan::new(
        1,
        50,
        BoundVariant::Classic36,
        PrecisionPolicy::new(128, 4096, 2, 1).unwrap(),
    )
    .unwrap();
    assert!(matches!(
        scan_dmr(&other_bits, &t, opts),
        Err(Error::ConfigMismatch { .. })
    ));
    assert_eq!(fs::read(&path).unwrap(), before);
}

#[test]
fn torn_trailing_line_is_redone() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let t = build_table(120).unwrap();
    let s = scan(120, BoundVariant::Classic36);
    let opts = ScanOptions {
        workers: 1,
        checkpoint: Some(&path),
        ..ScanOptions::default()
    };
    let clean = scan_dmr(&s, &t, opts).unwrap().to_json();
    let full = fs::read_to_string(&path).unwrap();
    // cut the file in the middle of the 71st record
    let cut = full.match_indices('\n').nth(70).unwrap().0 + 20;
    fs::write(&path, &full[..cut]).unwrap();
    let resumed = scan_dmr(&s, &t, opts).unwrap();
    assert_eq!(resumed.to_json(), clean);
    assert!(resumed.complete);
    assert_eq!(lines(&path).len(), 121);
    // a well-formed but unterminated last line counts as torn too
    let full = fs::read_to_string(&path).unwrap();
    fs::write(&path, full.trim_end()).unwrap();
    assert_eq!(scan_dmr(&s, &t, opts).unwrap().to_json(), clean);
}

#[test]
fn damage_before_the_end_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let t = build_table(40).unwrap();
    let s = scan(40, BoundVariant::Classic36);
    let opts = ScanOptions {
        workers: 1,
        checkpoint: Some(&path),
        ..ScanOptions::default()
    };
    scan_dmr(&s, &t, opts).unwrap();
    let mut l = lines(&path);
    l[10] = "{\"n\":".into();
    fs::write(&path, l.join("\n") + "\n").unwrap();
    assert!(matches!(scan_dmr(&s, &t, opts), Err(Error::Format { .. })));
    fs::write(&path, "not a checkpoint\n").unwrap();
    assert!(matches!(scan_dmr(&s, &t, opts), Err(Error::Format { .. })));
}

#[test]
fn cancelled_scan_resumes_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let t = build_table(600).unwrap();
    let s = scan(600, BoundVariant::Classic36);
    let reference = scan_dmr(
        &s,
        &t,
        ScanOptions {
            workers: 1,
            ..ScanOptions::default()
        },
    )
    .unwrap();
    let stop = AtomicBool::new(false);
    let progress = |done: u64| {
        if done >= 300 {
            stop.store(true, Ordering::SeqCst);
        }
    };
    let partial = scan_dmr(
        &s,
        &t,
        ScanOptions {
            workers: 3,
            checkpoint: Some(&path),
            cancel: Some(&stop),
            progress: Some(&progress),
        },
    )
    .unwrap();
    assert!(!partial.complete);
    assert!(partial.records.len() >= 300 && partial.records.len() < 600);
    assert_eq!(partial.exit_code(), 3);
    let resumed = scan_dmr(
        &s,
        &t,
        ScanOptions {
            workers: 2,
            checkpoint: Some(&path),
            ..ScanOptions::default()
        },
    )
    .unwrap();
    assert_eq!(resumed.to_json(), reference.to_json());
}
