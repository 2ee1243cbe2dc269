use clap::{Parser, Subcommand};
use std::path::PathBuf;

fn finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match finite(s)? {
        v if v > 0.0 => Ok(v),
        v => Err(format!("expected a positive number, got {v}")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "wh-embed", version, about = "Wiener-Hopf embedding formulas: directivities and verification suites")]
pub struct Cli {
    /// Write a JSON run report to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Override the tolerance of the command's headline checks.
    #[arg(long, global = true, value_parser = positive)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub group: Group,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Half-plane: embedding against Sommerfeld, numerical Wiener-Hopf solve.
    Halfplane {
        #[command(subcommand)]
        cmd: HalfplaneCmd,
    },
    /// Finite strip: boundary-integral reference, rank-2 and plane-wave embeddings.
    Strip {
        #[command(subcommand)]
        cmd: StripCmd,
    },
    /// Right-angled wedge: factorization, canonical and mapped routes.
    Wedge {
        #[command(subcommand)]
        cmd: WedgeCmd,
    },
    /// Every suite.
    All {
        #[command(subcommand)]
        cmd: AllCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum HalfplaneCmd {
    Verify {
        #[arg(long, default_value_t = 60)]
        grid: usize,
    },
    Directivity {
        #[arg(long, value_parser = finite, value_name = "DEG")]
        theta_i: f64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, default_value_t = 181)]
        points: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum StripCmd {
    Solve {
        #[arg(long, value_parser = positive)]
        ka: f64,
        #[arg(long, value_parser = finite, value_name = "DEG")]
        theta_i: f64,
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, default_value_t = 181)]
        points: usize,
    },
    VerifyRank2 {
        #[arg(long, value_parser = positive, default_value_t = 10.0)]
        ka: f64,
        #[arg(long, default_value_t = 48)]
        grid: usize,
        #[arg(long)]
        modes: Option<usize>,
    },
    Embed {
        #[arg(long, value_parser = finite, default_value_t = 60.0, value_name = "DEG")]
        theta1: f64,
        #[arg(long, value_parser = finite, default_value_t = 120.0, value_name = "DEG")]
        theta2: f64,
        #[arg(long, value_parser = finite, default_value_t = 75.0, value_name = "DEG")]
        theta_star: f64,
        #[arg(long, value_parser = positive, default_value_t = 10.0)]
        ka: f64,
        #[arg(long)]
        modes: Option<usize>,
    },
    Figure3 {
        #[arg(long, value_parser = positive, default_value_t = 10.0)]
        ka: f64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, default_value_t = 181)]
        points: usize,
        #[arg(long)]
        modes: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum WedgeCmd {
    VerifyFactorization,
    VerifyCanonical {
        #[arg(long, default_value_t = 40)]
        grid: usize,
    },
    VerifyMapped,
    Embed {
        #[arg(long, value_parser = finite, default_value_t = 100.0, value_name = "DEG")]
        theta1: f64,
        #[arg(long, value_parser = finite, default_value_t = 150.0, value_name = "DEG")]
        theta2: f64,
        #[arg(long, value_parser = finite, default_value_t = 125.0, value_name = "DEG")]
        theta_i: f64,
        #[arg(long, default_value_t = 541)]
        points: usize,
    },
    Directivity {
        #[arg(long, value_parser = finite, value_name = "DEG")]
        theta_i: f64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, default_value_t = 271)]
        points: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum AllCmd {
    Verify,
}
