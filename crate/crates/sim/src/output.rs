//! CSV and JSON emitters. Floats use Rust's shortest round-trip formatting, so
//! the same rows always produce the same bytes.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use aeris_core::units::w_to_dbm;

use crate::config::Method;
use crate::experiment::{Row, SweepResult};
use crate::stats::summarize;

pub const COLUMNS: [&str; 13] = [
    "sweep_value",
    "seed",
    "method",
    "obj_w",
    "obj_dbm",
    "sum_pm_w",
    "p_tot_a_w",
    "eta_bits_per_joule",
    "feasible_src",
    "feasible_ris",
    "partitions_l",
    "alpha_star",
    "runtime_ms",
];

pub const SUMMARY_COLUMNS: [&str; 8] = ["sweep_value", "method", "metric", "count", "mean", "median", "p5", "p95"];

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("nothing to write: the sweep produced no rows")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Emitted {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub json: Option<PathBuf>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn record(r: &Row) -> [String; 13] {
    [
        r.sweep_value.to_string(),
        r.seed.to_string(),
        r.method.to_string(),
        opt(r.obj_w),
        opt(r.obj_dbm),
        opt(r.sum_pm_w),
        opt(r.p_tot_a_w),
        opt(r.eta_bits_per_joule),
        opt(r.feasible_src),
        opt(r.feasible_ris),
        opt(r.partitions_l),
        opt(r.alpha_star),
        r.runtime_ms.to_string(),
    ]
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> OutputError + '_ {
    move |e| OutputError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

pub fn write_rows_csv(rows: &[Row], w: impl Write) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(COLUMNS)?;
    for r in rows {
        out.write_record(record(r))?;
    }
    out.flush()?;
    Ok(())
}

/// Per `(value, method)`: mean, median, p5, p95 of the main metrics.
pub fn write_summary_csv(result: &SweepResult, w: impl Write) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SUMMARY_COLUMNS)?;
    let mut values: Vec<f64> = result.rows.iter().map(|r| r.sweep_value).collect();
    values.dedup();
    let mut methods: Vec<Method> = Vec::new();
    for r in &result.rows {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    type Metric = fn(&Row) -> Option<f64>;
    let metrics: [(&str, Metric); 6] = [
        ("obj_dbm", |r| r.obj_dbm),
        ("sum_pm_dbm", |r| r.sum_pm_w.map(w_to_dbm)),
        ("p_tot_a_dbm", |r| r.p_tot_a_w.map(w_to_dbm)),
        ("eta_bits_per_joule", |r| r.eta_bits_per_joule),
        ("feasible_rate", |r| Some(f64::from(u8::from(r.feasible_src? && r.feasible_ris?)))),
        ("partitions_l", |r| r.partitions_l.map(|l| l as f64)),
    ];
    for &v in &values {
        for &m in &methods {
            let rows: Vec<&Row> = result.rows_for(v, m).collect();
            for (name, f) in metrics {
                let s = summarize(rows.iter().filter_map(|r| f(r)));
                if s.count == 0 {
                    continue;
                }
                out.write_record([
                    v.to_string(),
                    m.to_string(),
                    name.to_string(),
                    s.count.to_string(),
                    s.mean.to_string(),
                    s.median.to_string(),
                    s.p5.to_string(),
                    s.p95.to_string(),
                ])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes `results.csv`, `summary.csv` and optionally `results.json` under `dir`.
pub fn emit(result: &SweepResult, dir: &Path, json: bool) -> Result<Emitted, OutputError> {
    if result.rows.is_empty() {
        return Err(OutputError::Empty);
    }
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let csv_path = dir.join("results.csv");
    let summary_path = dir.join("summary.csv");
    let file = File::create(&csv_path).map_err(io_err(&csv_path))?;
    write_rows_csv(&result.rows, BufWriter::new(file)).map_err(csv_err(&csv_path))?;
    let file = File::create(&summary_path).map_err(io_err(&summary_path))?;
    write_summary_csv(result, BufWriter::new(file)).map_err(csv_err(&summary_path))?;
    let json_path = if json {
        let p = dir.join("results.json");
        let file = File::create(&p).map_err(io_err(&p))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, result).map_err(|e| OutputError::Io {
            path: p.clone(),
            source: e.into(),
        })?;
        w.write_all(b"\n").and_then(|_| w.flush()).map_err(io_err(&p))?;
        Some(p)
    } else {
        None
    };
    Ok(Emitted {
        csv: csv_path,
        summary: summary_path,
        json: json_path,
    })
}
