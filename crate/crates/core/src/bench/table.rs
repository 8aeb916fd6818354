use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::Method;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "method,dataset,kernel,repeat,seed,iteration,total_samples,rank_I,rank_J,theta,phi,rel_err_spectral,rel_err_frob,kernel_evals,elapsed_ns";

/// One output line: a baseline at one sample size, or one HAN iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub method: Method,
    pub dataset: String,
    pub kernel: String,
    pub repeat: usize,
    pub seed: u64,
    /// HAN iteration, or refinement rounds for `nys-r` (1 for the other baselines).
    pub iteration: usize,
    pub total_samples: usize,
    pub rank_i: usize,
    pub rank_j: usize,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub rel_err_spectral: Option<f64>,
    pub rel_err_frob: Option<f64>,
    pub kernel_evals: u64,
    pub elapsed_ns: Option<u64>,
}

impl Row {
    /// Output order: method, repeat, sample size, iteration.
    pub fn sort_key(&self) -> (Method, usize, usize, usize) {
        (self.method, self.repeat, self.total_samples, self.iteration)
    }
}

fn opt_f(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// CSV text with LF line endings; missing values are empty fields.
pub fn to_csv(rows: &[Row]) -> Result<String> {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        for label in [&r.dataset, &r.kernel] {
            if label.contains([',', '\n', '\r']) {
                return Err(Error::Config(format!("label {label:?} cannot be written to CSV")));
            }
        }
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.method,
            r.dataset,
            r.kernel,
            r.repeat,
            r.seed,
            r.iteration,
            r.total_samples,
            r.rank_i,
            r.rank_j,
            opt_f(r.theta),
            opt_f(r.phi),
            opt_f(r.rel_err_spectral),
            opt_f(r.rel_err_frob),
            r.kernel_evals,
            r.elapsed_ns.map(|t| t.to_string()).unwrap_or_default(),
        )
        .expect("writing to a String cannot fail");
    }
    Ok(s)
}

pub fn emit_csv(rows: &[Row], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_csv(rows)?)?;
    Ok(())
}

fn field<V: FromStr>(line: usize, name: &str, s: &str) -> Result<V> {
    s.parse().map_err(|_| Error::Parse { line, msg: format!("bad {name} '{s}'") })
}

fn opt_field<V: FromStr>(line: usize, name: &str, s: &str) -> Result<Option<V>> {
    if s.is_empty() {
        Ok(None)
    } else {
        field(line, name, s).map(Some)
    }
}

/// Inverse of [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(Error::Parse { line: 1, msg: "missing or unexpected header".into() }),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 15 {
            return Err(Error::Parse { line: n, msg: format!("expected 15 fields, got {}", f.len()) });
        }
        rows.push(Row {
            method: f[0].parse().map_err(|_| Error::Parse { line: n, msg: format!("bad method '{}'", f[0]) })?,
            dataset: f[1].to_string(),
            kernel: f[2].to_string(),
            repeat: field(n, "repeat", f[3])?,
            seed: field(n, "seed", f[4])?,
            iteration: field(n, "iteration", f[5])?,
            total_samples: field(n, "total_samples", f[6])?,
            rank_i: field(n, "rank_I", f[7])?,
            rank_j: field(n, "rank_J", f[8])?,
            theta: opt_field(n, "theta", f[9])?,
            phi: opt_field(n, "phi", f[10])?,
            rel_err_spectral: opt_field(n, "rel_err_spectral", f[11])?,
            rel_err_frob: opt_field(n, "rel_err_frob", f[12])?,
            kernel_evals: field(n, "kernel_evals", f[13])?,
            elapsed_ns: opt_field(n, "elapsed_ns", f[14])?,
        });
    }
    Ok(rows)
}
