//! Output directory, versioned CSV files and the run manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use mhd_forms::spectral::io::write_field;
use mhd_forms::spectral::PhysicalFormField;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;

/// Fields with at most this many grid points also get a CSV dump.
pub const CSV_DUMP_MAX_POINTS: usize = 4096;

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

/// SHA-256 of `"blob <len>\0" ++ content`, the object id git would give the file.
pub fn blob_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    hex(&h.finalize())
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

#[derive(Clone, Debug, Serialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub config_hash: String,
    pub seed: u64,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub exit_code: u8,
    pub status: String,
    pub artifacts: Vec<Artifact>,
}

/// Collects the files written by one command.
pub struct OutputDir {
    root: PathBuf,
    artifacts: Vec<PathBuf>,
    started: f64,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<OutputDir, CliError> {
        fs::create_dir_all(root)?;
        Ok(OutputDir { root: root.to_path_buf(), artifacts: Vec::new(), started: unix_now() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn track(&mut self, name: &str) -> PathBuf {
        let p = PathBuf::from(name);
        if !self.artifacts.contains(&p) {
            self.artifacts.push(p);
        }
        self.root.join(name)
    }

    /// CSV file whose first line is `# schema: <schema> v1`.
    pub fn csv(&mut self, name: &str, schema: &str, header: &[&str]) -> Result<CsvTable, CliError> {
        let path = self.track(name);
        let mut file = BufWriter::new(File::create(path)?);
        writeln!(file, "# schema: {schema} v1")?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(header)?;
        Ok(CsvTable { writer, columns: header.len() })
    }

    pub fn text(&mut self, name: &str, content: &str) -> Result<(), CliError> {
        fs::write(self.track(name), content)?;
        Ok(())
    }

    /// Binary snapshot, plus a CSV dump for small grids.
    pub fn field(&mut self, stem: &str, field: &PhysicalFormField) -> Result<(), CliError> {
        let mut out = BufWriter::new(File::create(self.track(&format!("{stem}.bin")))?);
        write_field(field, &mut out)?;
        out.flush()?;
        let grid = field.grid();
        if grid.len() > CSV_DUMP_MAX_POINTS {
            return Ok(());
        }
        let n = grid.dim();
        let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        header.extend(field.blades().iter().map(|b| {
            let idx: Vec<String> = b.indices().iter().map(|i| i.to_string()).collect();
            if idx.is_empty() {
                "scalar".to_string()
            } else {
                format!("e{}", idx.join("_"))
            }
        }));
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut table = self.csv(&format!("{stem}.csv"), "field-samples", &refs)?;
        let mut x = vec![0.0; n];
        for idx in 0..grid.len() {
            grid.point(idx, &mut x);
            let mut row: Vec<f64> = x.clone();
            row.extend(field.components().iter().map(|c| c[idx]));
            table.floats(&row)?;
        }
        table.finish()
    }

    /// Writes `manifest.json` listing every artifact with its hash.
    pub fn manifest(&mut self, command: &str, config: &RunConfig, exit_code: u8, status: &str) -> Result<(), CliError> {
        let mut artifacts = Vec::with_capacity(self.artifacts.len());
        for rel in &self.artifacts {
            let bytes = fs::read(self.root.join(rel))?;
            artifacts.push(Artifact {
                path: rel.to_string_lossy().into_owned(),
                sha256: sha256_hex(&bytes),
                bytes: bytes.len() as u64,
            });
        }
        let manifest = RunManifest {
            tool: "mhd-forms",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config: config.clone(),
            config_hash: blob_hash(config.canonical().as_bytes()),
            seed: config.seed,
            started_unix: self.started,
            finished_unix: unix_now(),
            exit_code,
            status: status.to_string(),
            artifacts,
        };
        let file = File::create(self.root.join("manifest.json"))?;
        serde_json::to_writer_pretty(BufWriter::new(file), &manifest)?;
        Ok(())
    }
}

/// Rows of one CSV file.
pub struct CsvTable {
    writer: csv::Writer<BufWriter<File>>,
    columns: usize,
}

impl CsvTable {
    pub fn row(&mut self, cells: &[String]) -> Result<(), CliError> {
        debug_assert_eq!(cells.len(), self.columns);
        self.writer.write_record(cells)?;
        Ok(())
    }

    pub fn floats(&mut self, values: &[f64]) -> Result<(), CliError> {
        let cells: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
        self.row(&cells)
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush()?;
        Ok(())
    }
}

/// Shortest round-trip decimal; `nan`, `inf`, `-inf` for the rest.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:?}")
    }
}
