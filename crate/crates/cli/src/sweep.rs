//! Batch sweeps over rational-integer radicands with resumable output.

use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use hopf_radical::freeness::criterion_check;
use hopf_radical::radical::tameness_test;
use hopf_radical::{BaseField, Error, RadicandContext};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{csv_field, SchemaError};

pub const CHECKPOINT_VERSION: u32 = 1;
pub const DEFAULT_CHUNK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Csv,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Text => "text",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: i64,
    pub tame: bool,
    pub verdict: String,
    pub normalized: String,
    pub generator: String,
    pub shape_hash: String,
}

const COLUMNS: [&str; 6] = ["a", "tame", "verdict", "normalized", "generator", "shape_hash"];

impl SweepRow {
    fn fields(&self) -> [String; 6] {
        [
            self.a.to_string(),
            self.tame.to_string(),
            self.verdict.clone(),
            self.normalized.clone(),
            self.generator.clone(),
            self.shape_hash.clone(),
        ]
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("serializable"),
            Format::Csv => self
                .fields()
                .iter()
                .map(|f| csv_field(f))
                .collect::<Vec<_>>()
                .join(","),
            Format::Text => self.fields().join("\t"),
        }
    }
}

pub fn header(format: Format) -> Option<String> {
    match format {
        Format::Json => None,
        Format::Csv => Some(COLUMNS.join(",")),
        Format::Text => Some(COLUMNS.join("\t")),
    }
}

/// First 16 hex digits of the SHA-256 of the generator's text form.
pub fn shape_hash(generator: &str) -> String {
    Sha256::digest(generator.as_bytes())
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// The row for `a`, or `None` when `a` is zero or a `p`-th power.
pub fn sweep_row(k: &BaseField, p: u64, a: i64) -> Result<Option<SweepRow>, Error> {
    if a == 0 {
        return Ok(None);
    }
    let elem = k.elem(a, 0);
    match RadicandContext::new(k, p, &elem) {
        Ok(_) => {}
        Err(Error::Degenerate(_)) => return Ok(None),
        Err(e) => return Err(e),
    }
    let tv = tameness_test(k, p, &elem)?;
    let Some(normalized) = tv.normalized else {
        return Ok(Some(SweepRow {
            a,
            tame: false,
            verdict: "wild".into(),
            normalized: String::new(),
            generator: String::new(),
            shape_hash: String::new(),
        }));
    };
    let ctx = RadicandContext::new(k, p, &normalized)?;
    let cert = criterion_check(&ctx)?;
    let generator = cert
        .generator
        .as_ref()
        .map(ToString::to_string)
        .unwrap_or_default();
    let hash = if generator.is_empty() {
        String::new()
    } else {
        shape_hash(&generator)
    };
    Ok(Some(SweepRow {
        a,
        tame: true,
        verdict: cert.verdict.as_str().into(),
        normalized: normalized.to_string(),
        generator,
        shape_hash: hash,
    }))
}

/// Rows for `from..=to`, computed concurrently, in increasing order of `a`.
pub fn sweep_rows(k: &BaseField, p: u64, from: i64, to: i64) -> Result<Vec<SweepRow>, Error> {
    if from > to {
        return Ok(Vec::new());
    }
    let rows: Vec<Option<SweepRow>> = (from..=to)
        .into_par_iter()
        .map(|a| sweep_row(k, p, a))
        .collect::<Result<_, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub version: u32,
    pub base: String,
    pub p: u64,
    pub from: i64,
    pub to: i64,
    pub format: String,
    /// First `a` not yet written.
    pub next: i64,
    /// Length of the output file after the last completed chunk.
    pub output_len: u64,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self, SweepError> {
        let text = fs::read_to_string(path)?;
        let ck: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| SchemaError(format!("checkpoint {}: {e}", path.display())))?;
        if ck.version != CHECKPOINT_VERSION {
            return Err(SchemaError(format!(
                "checkpoint version {} is not supported (expected {CHECKPOINT_VERSION})",
                ck.version
            ))
            .into());
        }
        Ok(ck)
    }

    /// Write-then-rename, so a reader never sees a partial checkpoint.
    pub fn store(&self, path: &Path) -> io::Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = File::create(&tmp)?;
            f.write_all(serde_json::to_string(self).expect("serializable").as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)
    }
}

#[derive(Debug)]
pub enum SweepError {
    Core(Error),
    Io(io::Error),
    Schema(SchemaError),
    Usage(String),
}

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepError::Core(e) => write!(f, "{e}"),
            SweepError::Io(e) => write!(f, "i/o error: {e}"),
            SweepError::Schema(e) => write!(f, "{e}"),
            SweepError::Usage(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for SweepError {
    fn from(e: Error) -> Self {
        SweepError::Core(e)
    }
}

impl From<io::Error> for SweepError {
    fn from(e: io::Error) -> Self {
        SweepError::Io(e)
    }
}

impl From<SchemaError> for SweepError {
    fn from(e: SchemaError) -> Self {
        SweepError::Schema(e)
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub base: BaseField,
    pub p: u64,
    pub from: i64,
    pub to: i64,
    pub format: Format,
    pub chunk: usize,
    /// Stop after this many chunks (the checkpoint then allows resuming).
    pub max_chunks: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub rows: usize,
    pub complete: bool,
}

impl SweepConfig {
    fn checkpoint_at(&self, next: i64, output_len: u64) -> Checkpoint {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            base: self.base.label(),
            p: self.p,
            from: self.from,
            to: self.to,
            format: self.format.as_str().into(),
            next,
            output_len,
        }
    }

    fn validate(&self) -> Result<(), SweepError> {
        if self.chunk == 0 {
            return Err(SweepError::Usage("chunk size must be positive".into()));
        }
        // Rejects bad p (even, composite, ramified in K) before any row.
        match RadicandContext::new(&self.base, self.p, &self.base.elem(2, 0)) {
            Ok(_) | Err(Error::Degenerate(_)) => Ok(()),
            Err(e) => Err(e.into()),
        }
    }
}

fn write_rows(out: &mut dyn Write, rows: &[SweepRow], format: Format) -> io::Result<()> {
    for row in rows {
        writeln!(out, "{}", row.render(format))?;
    }
    Ok(())
}

/// Chunks of `[next, to]`.
fn chunks(next: i64, to: i64, size: usize) -> impl Iterator<Item = (i64, i64)> {
    let size = size as i64;
    let mut start = Some(next).filter(|&n| n <= to);
    std::iter::from_fn(move || {
        let lo = start?;
        let hi = lo.saturating_add(size - 1).min(to);
        start = if hi < to { Some(hi + 1) } else { None };
        Some((lo, hi))
    })
}

/// Runs a sweep. With a checkpoint the output goes to `output` (required)
/// and an existing checkpoint resumes after the last completed chunk;
/// otherwise rows go to `output` or `stdout`.
pub fn run_sweep(
    cfg: &SweepConfig,
    output: Option<&Path>,
    checkpoint: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<SweepSummary, SweepError> {
    cfg.validate()?;
    let Some(ck_path) = checkpoint else {
        let mut file;
        let out: &mut dyn Write = match output {
            Some(path) => {
                file = io::BufWriter::new(File::create(path)?);
                &mut file
            }
            None => stdout,
        };
        if let Some(h) = header(cfg.format) {
            writeln!(out, "{h}")?;
        }
        let mut rows = 0;
        for (done, (lo, hi)) in chunks(cfg.from, cfg.to, cfg.chunk).enumerate() {
            if cfg.max_chunks.is_some_and(|m| done >= m) {
                out.flush()?;
                return Ok(SweepSummary { rows, complete: false });
            }
            let r = sweep_rows(&cfg.base, cfg.p, lo, hi)?;
            write_rows(out, &r, cfg.format)?;
            rows += r.len();
        }
        out.flush()?;
        return Ok(SweepSummary { rows, complete: true });
    };
    let Some(out_path) = output else {
        return Err(SweepError::Usage("--checkpoint requires --output".into()));
    };

    let (mut file, mut next) = if ck_path.exists() {
        let ck = Checkpoint::load(ck_path)?;
        let expected = cfg.checkpoint_at(ck.next, ck.output_len);
        if ck != expected {
            return Err(SchemaError(format!(
                "checkpoint {} belongs to a different sweep",
                ck_path.display()
            ))
            .into());
        }
        let mut file = OpenOptions::new().read(true).write(true).open(out_path)?;
        if file.metadata()?.len() < ck.output_len {
            return Err(SchemaError(format!(
                "output {} is shorter than its checkpoint records",
                out_path.display()
            ))
            .into());
        }
        // Drops any rows written after the last checkpoint.
        file.set_len(ck.output_len)?;
        file.seek(SeekFrom::End(0))?;
        (file, ck.next)
    } else {
        let mut file = File::create(out_path)?;
        if let Some(h) = header(cfg.format) {
            writeln!(file, "{h}")?;
        }
        file.sync_all()?;
        cfg.checkpoint_at(cfg.from, file.metadata()?.len())
            .store(ck_path)?;
        (file, cfg.from)
    };

    let mut rows = 0;
    for (done, (lo, hi)) in chunks(next, cfg.to, cfg.chunk).enumerate() {
        if cfg.max_chunks.is_some_and(|m| done >= m) {
            return Ok(SweepSummary { rows, complete: false });
        }
        let r = sweep_rows(&cfg.base, cfg.p, lo, hi)?;
        let mut buf = Vec::new();
        write_rows(&mut buf, &r, cfg.format)?;
        file.write_all(&buf)?;
        file.sync_data()?;
        rows += r.len();
        next = hi.saturating_add(1);
        cfg.checkpoint_at(next, file.metadata()?.len())
            .store(ck_path)?;
    }
    Ok(SweepSummary { rows, complete: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunking() {
        let c: Vec<_> = chunks(2, 10, 4).collect();
        assert_eq!(c, vec![(2, 5), (6, 9), (10, 10)]);
        assert_eq!(chunks(5, 4, 3).count(), 0);
    }

    #[test]
    fn rows_for_small_range() {
        let k = BaseField::rationals();
        let rows = sweep_rows(&k, 3, 7, 10).unwrap();
        // 8 is a cube.
        assert_eq!(rows.iter().map(|r| r.a).collect::<Vec<_>>(), vec![7, 9, 10]);
        assert!(!rows[0].tame);
        assert_eq!(rows[2].generator, "(1 + a + a^2)/3");
        assert_eq!(rows[2].shape_hash.len(), 16);
    }
}
