//! CSV records and JSON run manifests.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::criteria::Tolerances;
use crate::experiments::ScanRecord;
use crate::unitaries::RNG_ALGORITHM;

const PARAM_COLUMNS: [&str; 11] = [
    "theta", "p", "gamma", "phi", "alpha", "c1", "c2", "c3", "seed", "d_b", "branch",
];

const TRAILING_COLUMNS: [&str; 6] = [
    "as_lhs",
    "classification",
    "rank",
    "min_pt_eig",
    "prob_plus",
    "skipped",
];

/// 15 significant digits, locale independent.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.14e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Header for records whose states have `n_eigs` eigenvalues.
pub fn csv_header(n_eigs: usize) -> Vec<String> {
    let mut h: Vec<String> = vec!["experiment".into(), "index".into()];
    h.extend(PARAM_COLUMNS.iter().map(|s| s.to_string()));
    h.push("initial_as_lhs".into());
    h.push("initial_classification".into());
    h.extend((1..=n_eigs).map(|k| format!("eig{k}")));
    h.extend(TRAILING_COLUMNS.iter().map(|s| s.to_string()));
    h
}

pub fn csv_row(r: &ScanRecord, n_eigs: usize) -> Vec<String> {
    let d_b = r.dims.d_b;
    let p = &r.params;
    let mut row = vec![r.experiment.to_string(), r.index.to_string()];
    row.extend([
        opt_num(p.theta),
        opt_num(p.p),
        opt_num(p.gamma),
        opt_num(p.phi),
        opt_num(p.alpha),
        opt_num(p.c1),
        opt_num(p.c2),
        opt_num(p.c3),
        p.seed.map(|s| s.to_string()).unwrap_or_default(),
        d_b.to_string(),
        p.branch.map(|b| b.to_string()).unwrap_or_default(),
    ]);
    row.push(opt_num(r.initial.map(|i| i.as_lhs)));
    row.push(
        r.initial
            .map(|i| i.classification.label(d_b).to_string())
            .unwrap_or_default(),
    );
    match &r.evaluation {
        Some(e) => {
            row.extend((0..n_eigs).map(|k| opt_num(e.eigenvalues.get(k).copied())));
            row.push(fmt_num(e.as_lhs));
            row.push(e.classification.label(d_b).to_string());
            row.push(e.rank.to_string());
            row.push(fmt_num(e.min_pt_eigenvalue));
        }
        None => {
            row.extend((0..n_eigs).map(|_| String::new()));
            row.extend(["".into(), "skipped".into(), "".into(), "".into()]);
        }
    }
    row.push(opt_num(r.prob_plus));
    row.push(r.skipped.to_string());
    row
}

/// Writes records as CSV; the eigenvalue column count is the largest
/// dimension among them.
pub fn write_csv<W: Write>(out: W, records: &[ScanRecord]) -> io::Result<()> {
    let n_eigs = records.iter().map(|r| r.dims.total()).max().unwrap_or(4);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(n_eigs))
        .map_err(io::Error::other)?;
    for r in records {
        w.write_record(csv_row(r, n_eigs))
            .map_err(io::Error::other)?;
    }
    w.flush()
}

pub fn write_csv_file(path: &Path, records: &[ScanRecord]) -> io::Result<()> {
    write_csv(io::BufWriter::new(File::create(path)?), records)
}

/// Everything needed to rerun a command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub rng_algorithm: String,
    pub version: String,
    pub timestamp_unix: u64,
    pub argv: Vec<String>,
    pub tolerances: Tolerances,
    pub csv: String,
    pub records: usize,
    pub skipped: usize,
}

impl RunManifest {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        command: &str,
        parameters: serde_json::Value,
        seed: u64,
        argv: Vec<String>,
        tolerances: Tolerances,
        csv: &Path,
        records: &[ScanRecord],
    ) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: command.to_string(),
            parameters,
            seed,
            rng_algorithm: RNG_ALGORITHM.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix,
            argv,
            tolerances,
            csv: csv.display().to_string(),
            records: records.len(),
            skipped: records.iter().filter(|r| r.skipped).count(),
        }
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        std::fs::write(path, text + "\n")
    }
}
