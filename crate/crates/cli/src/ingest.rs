//! CSV ingestion and emission for the four dataset shapes.
//!
//! All readers demand the exact expected header and report validation
//! failures with the offending line number.

use std::collections::HashSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use uq_core::data::{BinaryEvalVector, ClusteredEvalData, ConfusionCounts, PairedEvalData};

fn open_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))
}

fn check_header(reader: &mut csv::Reader<std::fs::File>, path: &Path, expected: &[&str]) -> Result<()> {
    let headers = reader.headers().with_context(|| format!("{}: cannot read header", path.display()))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        bail!(
            "{}: expected header `{}`, found `{}`",
            path.display(),
            expected.join(","),
            got.join(",")
        );
    }
    Ok(())
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_outcome(field: &str, path: &Path, line: u64, column: &str) -> Result<u8> {
    match field {
        "0" => Ok(0),
        "1" => Ok(1),
        other => bail!("{} line {line}: {column} must be 0 or 1, got `{other}`", path.display()),
    }
}

/// Reads `question_id,outcome` into a binary outcome vector.
pub fn read_single(path: &Path) -> Result<BinaryEvalVector> {
    let mut reader = open_reader(path)?;
    check_header(&mut reader, path, &["question_id", "outcome"])?;
    let mut seen = HashSet::new();
    let mut outcomes = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let line = record_line(&record);
        if record.len() != 2 {
            bail!("{} line {line}: expected 2 fields, found {}", path.display(), record.len());
        }
        let id = record[0].to_string();
        if !seen.insert(id.clone()) {
            bail!("{} line {line}: duplicate question_id `{id}`", path.display());
        }
        outcomes.push(parse_outcome(&record[1], path, line, "outcome")?);
    }
    BinaryEvalVector::new(outcomes).map_err(Into::into)
}

/// Reads `question_id,outcome_a,outcome_b` into paired data.
pub fn read_paired(path: &Path) -> Result<PairedEvalData> {
    let mut reader = open_reader(path)?;
    check_header(&mut reader, path, &["question_id", "outcome_a", "outcome_b"])?;
    let mut seen = HashSet::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let line = record_line(&record);
        if record.len() != 3 {
            bail!("{} line {line}: expected 3 fields, found {}", path.display(), record.len());
        }
        let id = record[0].to_string();
        if !seen.insert(id.clone()) {
            bail!("{} line {line}: duplicate question_id `{id}`", path.display());
        }
        a.push(parse_outcome(&record[1], path, line, "outcome_a")?);
        b.push(parse_outcome(&record[2], path, line, "outcome_b")?);
    }
    PairedEvalData::from_vectors(BinaryEvalVector::new(a)?, BinaryEvalVector::new(b)?)
        .map_err(Into::into)
}

/// Reads `cluster_id,n,y` into clustered counts.
pub fn read_clustered(path: &Path) -> Result<ClusteredEvalData> {
    let mut reader = open_reader(path)?;
    check_header(&mut reader, path, &["cluster_id", "n", "y"])?;
    let mut seen = HashSet::new();
    let mut clusters = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let line = record_line(&record);
        if record.len() != 3 {
            bail!("{} line {line}: expected 3 fields, found {}", path.display(), record.len());
        }
        let id = record[0].to_string();
        if !seen.insert(id.clone()) {
            bail!("{} line {line}: duplicate cluster_id `{id}`", path.display());
        }
        let n: u64 = record[1]
            .parse()
            .with_context(|| format!("{} line {line}: n must be a nonnegative integer", path.display()))?;
        let y: u64 = record[2]
            .parse()
            .with_context(|| format!("{} line {line}: y must be a nonnegative integer", path.display()))?;
        if n == 0 {
            bail!("{} line {line}: cluster has n = 0 questions", path.display());
        }
        if y > n {
            bail!("{} line {line}: y = {y} exceeds n = {n}", path.display());
        }
        clusters.push((n, y));
    }
    ClusteredEvalData::new(clusters).map_err(Into::into)
}

/// Reads the single-row `n_tp,n_fp,n_fn,n_tn` confusion summary.
pub fn read_confusion(path: &Path) -> Result<ConfusionCounts> {
    let mut reader = open_reader(path)?;
    check_header(&mut reader, path, &["n_tp", "n_fp", "n_fn", "n_tn"])?;
    let mut rows = reader.records();
    let record = rows
        .next()
        .with_context(|| format!("{}: expected one data row after the header", path.display()))?
        .with_context(|| format!("{}: malformed CSV", path.display()))?;
    let line = record_line(&record);
    if record.len() != 4 {
        bail!("{} line {line}: expected 4 fields, found {}", path.display(), record.len());
    }
    let mut counts = [0u64; 4];
    for (i, name) in ["n_tp", "n_fp", "n_fn", "n_tn"].iter().enumerate() {
        counts[i] = record[i]
            .parse()
            .with_context(|| format!("{} line {line}: {name} must be a nonnegative integer", path.display()))?;
    }
    if let Some(extra) = rows.next() {
        let extra = extra?;
        bail!("{} line {}: expected exactly one data row", path.display(), record_line(&extra));
    }
    Ok(ConfusionCounts::new(counts[0], counts[1], counts[2], counts[3]))
}

// The emitters exist for fixture generation and the round-trip tests; the
// analysis subcommands only read.

/// Writes a binary vector back out with synthesized `q<i>` ids.
#[allow(dead_code)]
pub fn emit_single(y: &BinaryEvalVector) -> String {
    let mut out = String::from("question_id,outcome\n");
    for (i, &v) in y.outcomes().iter().enumerate() {
        out.push_str(&format!("q{},{}\n", i + 1, v));
    }
    out
}

#[allow(dead_code)]
pub fn emit_paired(data: &PairedEvalData) -> String {
    let mut out = String::from("question_id,outcome_a,outcome_b\n");
    for (i, (&a, &b)) in data.y_a().outcomes().iter().zip(data.y_b().outcomes()).enumerate() {
        out.push_str(&format!("q{},{},{}\n", i + 1, a, b));
    }
    out
}

#[allow(dead_code)]
pub fn emit_clustered(data: &ClusteredEvalData) -> String {
    let mut out = String::from("cluster_id,n,y\n");
    for (i, &(n, y)) in data.clusters().iter().enumerate() {
        out.push_str(&format!("c{},{},{}\n", i + 1, n, y));
    }
    out
}

#[allow(dead_code)]
pub fn emit_confusion(c: &ConfusionCounts) -> String {
    format!("n_tp,n_fp,n_fn,n_tn\n{},{},{},{}\n", c.n_tp, c.n_fp, c.n_fn, c.n_tn)
}
