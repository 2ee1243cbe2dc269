use std::io;
use std::path::Path;
use wh_embed::DirectivityGrid;

pub const HEADER: [&str; 5] = ["theta_deg", "theta_i_deg", "re_S", "im_S", "abs_S"];

/// One parsed CSV line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub theta_deg: f64,
    pub theta_i_deg: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

fn with_path(path: &Path, e: impl std::fmt::Display) -> io::Error {
    io::Error::other(format!("{}: {e}", path.display()))
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the grid, `θi`-major, through a temporary file renamed into place.
pub fn emit_csv(grid: &DirectivityGrid, path: &Path) -> io::Result<usize> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| with_path(path, e))?;
    let mut w = csv::Writer::from_writer(tmp);
    w.write_record(HEADER).map_err(|e| with_path(path, e))?;
    let mut rows = 0;
    for (ti, row) in grid.theta_i.iter().zip(&grid.values) {
        for (t, s) in grid.theta.iter().zip(row) {
            let rec = [num(t.to_degrees()), num(ti.to_degrees()), num(s.re), num(s.im), num(s.norm())];
            w.write_record(&rec).map_err(|e| with_path(path, e))?;
            rows += 1;
        }
    }
    let tmp = w.into_inner().map_err(|e| with_path(path, e.error()))?;
    tmp.persist(path).map_err(|e| with_path(path, e.error))?;
    Ok(rows)
}

pub fn parse_csv(path: &Path) -> io::Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| with_path(path, e))?;
    let header = r.headers().map_err(|e| with_path(path, e))?.clone();
    if header.iter().ne(HEADER) {
        return Err(with_path(path, format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| with_path(path, e))?;
        let f = |j: usize| -> io::Result<f64> {
            rec.get(j)
                .ok_or_else(|| with_path(path, "short record"))?
                .parse::<f64>()
                .map_err(|e| with_path(path, e))
        };
        out.push(CsvRow { theta_deg: f(0)?, theta_i_deg: f(1)?, re: f(2)?, im: f(3)?, abs: f(4)? });
    }
    Ok(out)
}
