//! Command-line front end for `wh-embed`: argument parsing, command dispatch,
//! CSV grids and JSON run reports.
//!
//! Exit status is 0 when every check passes, 1 when a check fails or a
//! computation breaks down, and 2 on a usage error.

mod args;
mod csv_io;
mod run_report;

pub use args::{AllCmd, Cli, Group, HalfplaneCmd, StripCmd, WedgeCmd};
pub use csv_io::{emit_csv, parse_csv, CsvRow, HEADER};
pub use run_report::RunReport;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::time::Instant;
use wh_embed::strip::{self, BieOperator, StripConfig, StripSuite};
use wh_embed::{halfplane, oracles, wedge, DirectivityGrid, EmbeddingReport, WhError, C64};

pub const USAGE: &str =
    "usage: wh-embed [--json FILE] [--tol X] <halfplane|strip|wedge|all> <command> [options] (see --help)";

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<WhError> for Failure {
    fn from(e: WhError) -> Self {
        match e {
            WhError::InvalidInput(m) => Failure::Usage(m),
            e => Failure::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

#[derive(Default)]
struct Output {
    reports: Vec<EmbeddingReport>,
    params: BTreeMap<String, Value>,
    outputs: Vec<String>,
    /// Checks the `--tol` flag applies to.
    headline: Vec<&'static str>,
}

impl Output {
    fn param(&mut self, k: &str, v: Value) {
        self.params.insert(k.to_string(), v);
    }
}

fn default_modes(ka: f64, modes: Option<usize>) -> Result<usize, Failure> {
    let cfg = StripConfig::from_ka(ka)?;
    Ok(modes.unwrap_or_else(|| 40.max(cfg.min_modes() + 10)))
}

fn rad(deg: f64) -> f64 {
    deg.to_radians()
}

fn write_grid(out: &mut Output, grid: &DirectivityGrid, path: &Path) -> Result<(), Failure> {
    let rows = emit_csv(grid, path)?;
    out.outputs.push(format!("{} ({rows} rows)", path.display()));
    Ok(())
}

fn halfplane_cmd(cmd: &HalfplaneCmd, o: &mut Output) -> Result<(), Failure> {
    match cmd {
        HalfplaneCmd::Verify { grid } => {
            o.param("grid", json!(grid));
            o.reports.push(halfplane::verify_suite(*grid, 1e-12)?);
            o.headline = vec!["sommerfeld_ratio_deviation"];
        }
        HalfplaneCmd::Directivity { theta_i, out, points } => {
            o.param("theta_i_deg", json!(theta_i));
            o.param("points", json!(points));
            let h = halfplane::HalfPlaneSolution::new(halfplane::default_medium());
            let theta = oracles::angle_grid(0.0, PI, *points);
            let mut boundary = 0;
            let row = theta
                .iter()
                .map(|&t| match h.directivity(t, rad(*theta_i)) {
                    Ok(v) => Ok(v),
                    Err(WhError::OpticalBoundary) => {
                        boundary += 1;
                        Ok(C64::new(f64::NAN, f64::NAN))
                    }
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let grid = DirectivityGrid {
                theta,
                theta_i: vec![rad(*theta_i)],
                values: vec![row],
                k: h.medium.k_real,
                convention: "half-plane embedding formula".into(),
                max_boundary_residual: 0.0,
            };
            write_grid(o, &grid, out)?;
            let mut r = EmbeddingReport::new("half-plane directivity");
            if boundary > 0 {
                r.note(format!("{boundary} direction(s) on the reflection boundary written as NaN"));
            }
            o.reports.push(r);
        }
    }
    Ok(())
}

fn strip_cmd(cmd: &StripCmd, o: &mut Output) -> Result<(), Failure> {
    match cmd {
        StripCmd::Solve { ka, theta_i, modes, out, points } => {
            let n = default_modes(*ka, *modes)?;
            o.param("ka", json!(ka));
            o.param("theta_i_deg", json!(theta_i));
            o.param("modes", json!(n));
            let op = BieOperator::new(&StripConfig::from_ka(*ka)?, n)?;
            let d = op.solve(rad(*theta_i))?;
            let theta = oracles::angle_grid(0.0, PI, *points);
            let row = theta.iter().map(|&t| strip::directivity_from_density(&d, t)).collect();
            let grid = DirectivityGrid {
                theta,
                theta_i: vec![rad(*theta_i)],
                values: vec![row],
                k: 1.0,
                convention: strip::CONVENTION.into(),
                max_boundary_residual: d.boundary_residual,
            };
            write_grid(o, &grid, out)?;
            let mut r = EmbeddingReport::new("strip solve");
            r.check("bie_boundary_residual", d.boundary_residual, 1e-10)
                .check("optical_theorem_residual", strip::optical_theorem_residual(&d), 1e-6);
            o.reports.push(r);
            o.headline = vec!["bie_boundary_residual"];
        }
        StripCmd::VerifyRank2 { ka, grid, modes } => {
            let n = default_modes(*ka, *modes)?;
            o.param("ka", json!(ka));
            o.param("grid", json!(grid));
            o.param("modes", json!(n));
            let op = BieOperator::new(&StripConfig::from_ka(*ka)?, n)?;
            let g = op.directivity_grid(&strip::default_angles(*grid))?;
            let mut r = EmbeddingReport::new("strip rank 2");
            r.check("grid_boundary_residual", g.max_boundary_residual, 1e-10)
                .check("reciprocity", g.reciprocity_residual(), 1e-8);
            r.absorb(strip::rank2_embedding_check(&g)?);
            match strip::extract_edge_directivities(&g) {
                Ok(e) => {
                    r.check("edge_reconstruction_residual", e.reconstruction_residual, 1e-8)
                        .check("edge_reflection_residual", e.reflection_residual, 1e-4)
                        .note(format!("edge gauge sigma = {}", e.sigma));
                }
                Err(WhError::GaugeAmbiguous(v)) => {
                    r.check("edge_reflection_residual", v, 1e-4);
                }
                Err(e) => return Err(e.into()),
            }
            o.reports.push(r);
            o.headline = vec!["sigma3_over_sigma1"];
        }
        StripCmd::Embed { theta1, theta2, theta_star, ka, modes } => {
            let n = default_modes(*ka, *modes)?;
            o.param("ka", json!(ka));
            o.param("theta1_deg", json!(theta1));
            o.param("theta2_deg", json!(theta2));
            o.param("theta_star_deg", json!(theta_star));
            o.param("modes", json!(n));
            let op = BieOperator::new(&StripConfig::from_ka(*ka)?, n)?;
            let fine = oracles::angle_grid(0.0, PI, 721);
            let p = strip::plane_wave_predict(&op, rad(*theta1), rad(*theta2), rad(*theta_star), &fine)?;
            let mut r = EmbeddingReport::new("strip plane-wave embedding");
            r.check("plane_wave_masked_relative_error", p.masked_relative_error, 1e-5).note(format!(
                "coefficients {:.12e}, {:.12e}; {} of {} angles kept",
                p.coefficients.coefficients[0],
                p.coefficients.coefficients[1],
                p.masked_points,
                fine.len()
            ));
            o.reports.push(r);
            o.headline = vec!["plane_wave_masked_relative_error"];
        }
        StripCmd::Figure3 { ka, out, points, modes } => {
            let n = default_modes(*ka, *modes)?;
            o.param("ka", json!(ka));
            o.param("points", json!(points));
            o.param("modes", json!(n));
            o.param("theta_i_deg", json!([45.0, 90.0]));
            let grid = strip::figure3_grid(*ka, n, *points, &[rad(45.0), rad(90.0)])?;
            write_grid(o, &grid, out)?;
            let mut r = EmbeddingReport::new("strip figure 3 data");
            r.check("bie_boundary_residual", grid.max_boundary_residual, 1e-10);
            o.reports.push(r);
            o.headline = vec!["bie_boundary_residual"];
        }
    }
    Ok(())
}

fn wedge_cmd(cmd: &WedgeCmd, o: &mut Output) -> Result<(), Failure> {
    let medium = wedge::default_medium();
    match cmd {
        WedgeCmd::VerifyFactorization => {
            o.param("k", json!([medium.k_real, medium.k_loss]));
            o.reports.push(wedge::verify_factorization(medium));
            o.headline = vec!["factorization_residual", "wh_relation_residual"];
        }
        WedgeCmd::VerifyCanonical { grid } => {
            o.param("grid", json!(grid));
            o.reports.push(wedge::verify_canonical(medium, *grid)?);
            o.headline = vec!["canonical_vs_closed_form"];
        }
        WedgeCmd::VerifyMapped => {
            o.reports.push(wedge::verify_mapped()?);
            o.headline = vec!["mapped_ratio_deviation"];
        }
        WedgeCmd::Embed { theta1, theta2, theta_i, points } => {
            o.param("theta1_deg", json!(theta1));
            o.param("theta2_deg", json!(theta2));
            o.param("theta_i_deg", json!(theta_i));
            let thetas = oracles::angle_grid(0.0, 1.5 * PI, *points);
            let p = wedge::plane_wave_embed_wedge(rad(*theta1), rad(*theta2), rad(*theta_i), &thetas)?;
            o.reports.push(p.report);
            o.headline = vec!["embedding_residual"];
        }
        WedgeCmd::Directivity { theta_i, out, points } => {
            o.param("theta_i_deg", json!(theta_i));
            o.param("points", json!(points));
            let grid = wedge::directivity_grid(*points, &[rad(*theta_i)]);
            write_grid(o, &grid, out)?;
            o.reports.push(EmbeddingReport::new("wedge directivity"));
        }
    }
    Ok(())
}

fn all_verify(o: &mut Output) -> Result<(), Failure> {
    o.reports.push(halfplane::verify_suite(60, 1e-12)?);
    o.reports.push(strip::verify_suite(&StripSuite::default())?);
    o.reports.push(wedge::verify_all(wedge::default_medium())?);
    Ok(())
}

fn print_report(r: &RunReport, out: &mut dyn Write) -> std::io::Result<()> {
    for rep in &r.reports {
        writeln!(out, "# {}", rep.name)?;
        for c in &rep.checks {
            let op = if c.lower_bound { ">=" } else { "<" };
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{status} {:<36} {:.3e} {op} {:.1e}", c.name, c.residual, c.tolerance)?;
        }
        for cal in &rep.calibrations {
            writeln!(out, "calibration {} = {:.12e}{:+.12e}i ({})", cal.name, cal.re, cal.im, cal.provenance)?;
        }
        for n in &rep.notes {
            writeln!(out, "note: {n}")?;
        }
    }
    for f in &r.outputs {
        writeln!(out, "wrote {f}")?;
    }
    let status = if r.passed { "PASS" } else { "FAIL" };
    writeln!(out, "{status}: {} checks, {:.2} s", r.check_count(), r.wall_time_s)
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{first}");
            let _ = writeln!(err, "{USAGE}");
            return 2;
        }
    };
    let start = Instant::now();
    let mut o = Output::default();
    let result = match &cli.group {
        Group::Halfplane { cmd } => halfplane_cmd(cmd, &mut o),
        Group::Strip { cmd } => strip_cmd(cmd, &mut o),
        Group::Wedge { cmd } => wedge_cmd(cmd, &mut o),
        Group::All { cmd: AllCmd::Verify } => all_verify(&mut o),
    };
    match result {
        Ok(()) => {}
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            let _ = writeln!(err, "{USAGE}");
            return 2;
        }
        Err(Failure::Compute(m)) => {
            let _ = writeln!(err, "error: {m}");
            return 1;
        }
    }
    if let Some(t) = cli.tol {
        o.param("tol", json!(t));
        o.param("tol_applies_to", json!(o.headline));
        for rep in &mut o.reports {
            for c in &mut rep.checks {
                if o.headline.contains(&c.name.as_str()) && !c.lower_bound {
                    *c = c.with_tolerance(t);
                }
            }
        }
    }
    let report = RunReport {
        command: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        parameters: o.params,
        passed: o.reports.iter().all(|r| r.passed()),
        reports: o.reports,
        outputs: o.outputs,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let _ = print_report(&report, out);
    if let Some(path) = &cli.json {
        if let Err(e) = report.write_json(path) {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    }
    if report.passed {
        0
    } else {
        1
    }
}
