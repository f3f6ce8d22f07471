//! Parameter sweeps and CSV emission: deterministic formatting, ordered
//! parallel evaluation, one schema per report kind.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Linear or logarithmic sweep spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScale {
    Linear,
    Log,
}

impl SweepScale {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(SweepScale::Linear),
            "log" => Ok(SweepScale::Log),
            other => {
                Err(Error::Config(format!("sweep.scale `{other}` is not `linear` or `log`")))
            }
        }
    }
}

/// A one-parameter sweep axis.
#[derive(Debug, Clone)]
pub struct SweepAxis {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub scale: SweepScale,
}

impl SweepAxis {
    pub fn new(
        param: impl Into<String>,
        start: f64,
        stop: f64,
        steps: usize,
        scale: SweepScale,
    ) -> Result<Self> {
        if steps < 1 {
            return Err(Error::Config("sweep.steps must be at least 1".into()));
        }
        if steps > 1 && !(start < stop) {
            return Err(Error::Config(format!(
                "sweep requires start < stop, got {start} .. {stop}"
            )));
        }
        if scale == SweepScale::Log && !(start > 0.0) {
            return Err(Error::Config("log sweep requires start > 0".into()));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::Config("sweep bounds must be finite".into()));
        }
        Ok(Self { param: param.into(), start, stop, steps, scale })
    }

    /// The sweep points, in order.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let n = self.steps as f64 - 1.0;
        (0..self.steps)
            .map(|i| {
                let f = i as f64 / n;
                match self.scale {
                    SweepScale::Linear => self.start + f * (self.stop - self.start),
                    SweepScale::Log => {
                        (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

/// Evaluate one closure per sweep point on a worker pool and return results
/// in sweep order. Points are independent, so the output is identical for
/// any thread count.
pub fn run_sweep<T, F>(values: &[f64], threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync,
{
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| values.par_iter().map(|&v| f(v)).collect())
        }
        None => values.par_iter().map(|&v| f(v)).collect(),
    }
}

/// Shortest round-trip decimal form: locale-free, bit-deterministic.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// A CSV table with a fixed header; rows render with decimal dots, no
/// quoting, `\n` line endings.
#[derive(Debug, Clone)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }
}
