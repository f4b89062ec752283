use crate::config::{config_hash, RunConfig};
use anyhow::{Context, Result};
use predissoc_core::fit::SlopeFit;
use predissoc_core::model::{ModelSpec, PotentialModel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Outcome of one numerical check recorded in a manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub criterion: u32,
    pub passed: bool,
    pub summary: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fits: Vec<SlopeFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub core_version: String,
    pub subcommand: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub model: ModelSpec,
    pub checks: BTreeMap<String, Check>,
    pub files: Vec<String>,
}

/// Output directory, model and bookkeeping shared by one subcommand run.
pub struct Run {
    pub cfg: RunConfig,
    pub model: PotentialModel,
    pub spec: ModelSpec,
    pub hash: String,
    subcommand: String,
    files: Vec<String>,
    checks: BTreeMap<String, Check>,
}

/// Row-major numeric table written as CSV.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

impl Run {
    pub fn new(cfg: RunConfig, subcommand: &str) -> Result<Self> {
        cfg.validate()?;
        let (spec, model) = cfg.build_model()?;
        let hash = config_hash(&cfg, &spec)?;
        std::fs::create_dir_all(&cfg.out)
            .with_context(|| format!("creating {}", cfg.out.display()))?;
        Ok(Self {
            cfg,
            model,
            spec,
            hash,
            subcommand: subcommand.into(),
            files: Vec::new(),
            checks: BTreeMap::new(),
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.cfg.out
    }

    fn write(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        let path = self.cfg.out.join(name);
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.into());
        }
        Ok(path)
    }

    fn header(&self) -> String {
        format!("# predissoc {} config {}\n", self.subcommand, self.hash)
    }

    fn write_csv<I, R>(&mut self, name: &str, columns: &[&str], rows: I) -> Result<PathBuf>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut w = csv::Writer::from_writer(self.header().into_bytes());
        w.write_record(columns)?;
        for row in rows {
            w.write_record(row)?;
        }
        let body = String::from_utf8(w.into_inner()?)?;
        self.write(name, &body)
    }

    pub fn write_table(&mut self, name: &str, table: &Table) -> Result<PathBuf> {
        let rows: Vec<Vec<String>> = table
            .rows
            .iter()
            .map(|r| r.iter().map(|v| format!("{v:.12e}")).collect())
            .collect();
        let columns = table.columns.clone();
        self.write_csv(name, &columns, rows)
    }

    pub fn write_records(
        &mut self,
        name: &str,
        columns: &[&str],
        rows: &[Vec<String>],
    ) -> Result<PathBuf> {
        self.write_csv(name, columns, rows)
    }

    /// Gnuplot script plotting columns of CSV files written by this run.
    pub fn write_gnuplot(
        &mut self,
        name: &str,
        title: &str,
        log_axes: bool,
        plots: &[Plot],
    ) -> Result<PathBuf> {
        let mut body = String::new();
        writeln!(body, "# predissoc {} config {}", self.subcommand, self.hash)?;
        writeln!(body, "set datafile separator ','")?;
        writeln!(body, "set datafile commentschars '#'")?;
        writeln!(body, "set key autotitle columnhead")?;
        writeln!(body, "set title '{title}'")?;
        if log_axes {
            writeln!(body, "set logscale xy")?;
        }
        let parts: Vec<String> = plots
            .iter()
            .map(|p| {
                format!(
                    "'{}' using {}:{} with {} title '{}'",
                    p.file, p.x, p.y, p.style, p.title
                )
            })
            .collect();
        writeln!(body, "plot {}", parts.join(", \\\n     "))?;
        self.write(name, &body)
    }

    pub fn record(&mut self, name: &str, check: Check) {
        self.checks.insert(name.into(), check);
    }

    /// Writes `<subcommand>.manifest.json` and returns the manifest.
    pub fn finish(mut self) -> Result<Manifest> {
        let name = format!("{}.manifest.json", self.subcommand);
        self.files.sort();
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            core_version: predissoc_core::VERSION.into(),
            subcommand: self.subcommand.clone(),
            config_hash: self.hash.clone(),
            config: self.cfg.clone(),
            model: self.spec.clone(),
            checks: std::mem::take(&mut self.checks),
            files: self.files.clone(),
        };
        let body = serde_json::to_string_pretty(&manifest)? + "\n";
        self.write(&name, &body)?;
        Ok(manifest)
    }
}

pub struct Plot {
    pub file: String,
    pub x: usize,
    pub y: usize,
    pub style: &'static str,
    pub title: String,
}

impl Plot {
    pub fn new(file: &str, x: usize, y: usize, title: &str) -> Self {
        Self {
            file: file.into(),
            x,
            y,
            style: "linespoints",
            title: title.into(),
        }
    }

    pub fn lines(mut self) -> Self {
        self.style = "lines";
        self
    }
}

pub fn describe(f: &SlopeFit) -> String {
    format!("{} slope {:.4} r2 {:.4}", f.quantity, f.slope, f.r_squared)
}
