use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

pub type BoxResult<T> = Result<T, Box<dyn std::error::Error>>;

/// Full round-trip precision, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Plot layout for the gnuplot script.
pub struct Plot {
    pub x: usize,
    pub ys: Vec<usize>,
    pub logx: bool,
    pub logy: bool,
}

pub struct Sink {
    dir: PathBuf,
}

impl Sink {
    pub fn new(dir: &Path) -> BoxResult<Self> {
        fs::create_dir_all(dir).map_err(|e| format!("output directory {}: {e}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    pub fn csv(&self, name: &str, table: &Table) -> BoxResult<PathBuf> {
        let path = self.dir.join(name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(&table.header)?;
        for r in &table.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(path)
    }

    pub fn plot(&self, csv_name: &str, table: &Table, plot: &Plot) -> BoxResult<PathBuf> {
        let stem = csv_name.trim_end_matches(".csv");
        let path = self.dir.join(format!("{stem}.gp"));
        let mut s = String::new();
        s.push_str("set datafile separator ','\nset key autotitle columnhead\n");
        s.push_str(&format!("set xlabel '{}'\n", table.header[plot.x]));
        if plot.logx {
            s.push_str("set logscale x\n");
        }
        if plot.logy {
            s.push_str("set logscale y\n");
        }
        s.push_str(&format!("set terminal pngcairo size 900,600\nset output '{stem}.png'\nplot "));
        let curves: Vec<String> = plot
            .ys
            .iter()
            .map(|&y| format!("'{csv_name}' using {}:{} with linespoints", plot.x + 1, y + 1))
            .collect();
        s.push_str(&curves.join(", \\\n     "));
        s.push('\n');
        fs::write(&path, s)?;
        Ok(path)
    }

    /// Appends one JSON object to `summary.jsonl`.
    pub fn summary(&self, value: &Value) -> BoxResult<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.dir.join("summary.jsonl"))?;
        writeln!(f, "{}", serde_json::to_string(value)?)?;
        Ok(())
    }
}

/// Finite numbers as JSON numbers, the rest as strings.
pub fn jnum(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}
