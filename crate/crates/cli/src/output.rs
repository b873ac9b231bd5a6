//! CSV files with a `#` metadata header.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::pipeline::Artifact;
use crate::scenario::{serialize_scenario, ScenarioConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Header lines shared by every file of a run: tool version and the
/// scenario in canonical form.
pub fn run_header(cfg: &ScenarioConfig) -> Vec<String> {
    let mut h = vec![format!("polrot {VERSION}")];
    if let Some(n) = &cfg.name {
        h.push(format!("preset: {n}"));
    }
    h.extend(
        serialize_scenario(cfg)
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("param: {l}")),
    );
    h
}

pub fn render(artifact: &Artifact, header: &[String]) -> io::Result<Vec<u8>> {
    let mut out = Vec::new();
    for line in header {
        out.extend_from_slice(format!("# {line}\n").as_bytes());
    }
    for (k, v) in &artifact.notes {
        out.extend_from_slice(format!("# result: {k} = {v}\n").as_bytes());
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&artifact.columns)?;
    for row in &artifact.rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

pub fn write_all(
    dir: &Path,
    artifacts: &[Artifact],
    header: &[String],
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.file_name);
            fs::write(&path, render(a, header)?)?;
            Ok(path)
        })
        .collect()
}
