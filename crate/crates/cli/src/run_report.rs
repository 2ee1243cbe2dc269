use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::io;
use std::path::Path;
use wh_embed::EmbeddingReport;

/// Everything a run produced, in the form written by `--json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub parameters: BTreeMap<String, Value>,
    pub reports: Vec<EmbeddingReport>,
    pub outputs: Vec<String>,
    pub passed: bool,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn check_count(&self) -> usize {
        self.reports.iter().map(|r| r.checks.len()).sum()
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let ctx = |e: &dyn std::fmt::Display| io::Error::other(format!("{}: {e}", path.display()));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| ctx(&e))?;
        serde_json::to_writer_pretty(&mut tmp, self).map_err(|e| ctx(&e))?;
        tmp.persist(path).map_err(|e| ctx(&e.error))?;
        Ok(())
    }
}
