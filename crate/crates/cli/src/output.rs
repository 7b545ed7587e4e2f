//! File emitters. Numbers are formatted without locale, `\n` ends every line.

use std::fs;
use std::path::{Path, PathBuf};

use jumpga_core::experiments::{Figure1Series, RunRecord};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Shortest decimal text of `x` with at most 9 significant digits;
/// scientific notation outside `[1e-5, 1e15)`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let text = if (-5..15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    };
    trim_zeros(&text)
}

fn trim_zeros(text: &str) -> String {
    let (mantissa, exponent) = match text.find('e') {
        Some(i) => text.split_at(i),
        None => (text, ""),
    };
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{mantissa}{exponent}")
}

/// Directory that receives every file of one invocation.
#[derive(Debug, Clone)]
pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| CliError::io(&root, e))?;
        Ok(Self { root })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("summaries serialize");
        text.push('\n');
        self.write_text(name, &text)
    }

    pub fn write_csv<I, R>(&self, name: &str, header: &[&str], rows: I) -> Result<PathBuf>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let path = self.path(name);
        write_csv(&path, header, rows)?;
        Ok(path)
    }
}

pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let wrap = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(wrap)?;
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>())
            .map_err(wrap)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn figure1_header(k: usize) -> Vec<String> {
    std::iter::once("iteration".to_string())
        .chain((0..=k).map(|j| format!("d{}", 2 * j)))
        .collect()
}

/// `iteration,d0,d2,...,d{2k}`.
pub fn write_series_csv(series: &Figure1Series, path: &Path) -> Result<()> {
    let header = figure1_header(series.k);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..series.len()).map(|i| {
        std::iter::once(series.iterations[i].to_string())
            .chain(series.row(i).iter().map(|&v| fmt_f64(v)))
    });
    write_csv(path, &header, rows)
}

pub const RUNS_HEADER: [&str; 5] = [
    "replicate",
    "seed",
    "iterations",
    "evaluations",
    "stop_reason",
];

pub fn run_row(r: &RunRecord) -> Vec<String> {
    vec![
        r.replicate.to_string(),
        r.seed.to_string(),
        r.iterations.to_string(),
        r.evaluations.to_string(),
        r.stop_reason.as_str().to_string(),
    ]
}
