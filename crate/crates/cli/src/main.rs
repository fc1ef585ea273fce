use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use sic_core::report::Check;
use sic_core::sicpovm::{
    bundled_fiducial, fiducial_search, format_fiducial, format_vector_set, load_fiducial,
    overlap_residual, sic_from_fiducial, Fiducial, SearchOptions,
};
use sic_core::suite::{run_suite, theta3_distance, SuiteOptions, GROUPS};
use sic_core::tensors::{decode_theta3, encode_theta3, triple_products};
use sic_core::Error;

const REPORT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "sic",
    version,
    about = "SIC-POVM construction and verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the verification suite on a fiducial and write a JSON report.
    Verify(VerifyArgs),
    /// Search for a fiducial vector and write it in the text format.
    Search(SearchArgs),
    /// Rebuild a vector set from an order-3 angle tensor dump.
    Reconstruct(ReconstructArgs),
    /// Write the order-3 angle tensor of a fiducial's orbit as a binary dump.
    Theta3(Theta3Args),
}

#[derive(Args)]
struct Source {
    /// Dimension; selects the bundled fiducial when no file is given.
    #[arg(long)]
    dim: Option<usize>,
    /// Fiducial file in the text format.
    #[arg(long)]
    fiducial: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated check groups, or "all".
    #[arg(long, default_value = "all")]
    checks: String,
    /// Random sign/shift draws in the converse round trip.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    /// Target overlap residual.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Binary order-3 angle tensor dump.
    #[arg(long)]
    theta3: PathBuf,
    /// Zero-based index of the anchor vector.
    #[arg(long, default_value_t = 0)]
    anchor: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Theta3Args {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    out: PathBuf,
}

/// Exit 1 for numerical failures, 2 for bad input.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SearchFailed { .. }
            | Error::NotASic(_)
            | Error::NotReconstructible(_)
            | Error::NotAnAngleTensor(_)
            | Error::InternalInconsistency(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Metadata {
    d: usize,
    fiducial_sha256: String,
    seed: u64,
    tol: f64,
    wall_time: f64,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    version: u32,
    metadata: Metadata,
    checks: &'a [Check],
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Search(a) => search(a),
        Cmd::Reconstruct(a) => reconstruct(a),
        Cmd::Theta3(a) => theta3(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn resolve(src: &Source) -> Result<Fiducial, Failure> {
    let fid = match (&src.fiducial, src.dim) {
        (Some(path), _) => load_fiducial(path)?,
        (None, Some(d)) => bundled_fiducial(d)?,
        (None, None) => return Err(Failure::Usage("need --dim or --fiducial".into())),
    };
    if let Some(d) = src.dim {
        if d != fid.d() {
            return Err(Failure::Usage(format!(
                "--dim {d} does not match the fiducial's dimension {}",
                fid.d()
            )));
        }
    }
    Ok(fid)
}

fn fiducial_hash(fid: &Fiducial) -> String {
    hex::encode(Sha256::digest(format_fiducial(fid).as_bytes()))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let fid = resolve(&a.source)?;
    let groups = if a.checks == "all" {
        None
    } else {
        let gs: Vec<String> = a.checks.split(',').map(|s| s.trim().to_string()).collect();
        if let Some(bad) = gs.iter().find(|g| !GROUPS.contains(&g.as_str())) {
            return Err(Failure::Usage(format!(
                "unknown check group {bad:?}; known: {}",
                GROUPS.join(",")
            )));
        }
        Some(gs)
    };
    let opts = SuiteOptions {
        tol: a.tol,
        seed: a.seed,
        groups,
        converse_trials: a.trials,
    };
    let rep = run_suite(&fid, &opts)?;
    let file = ReportFile {
        version: REPORT_VERSION,
        metadata: Metadata {
            d: fid.d(),
            fiducial_sha256: fiducial_hash(&fid),
            seed: a.seed,
            tol: a.tol,
            wall_time: start.elapsed().as_secs_f64(),
        },
        checks: &rep.checks,
    };
    let mut json =
        serde_json::to_string_pretty(&file).map_err(|e| Failure::Usage(e.to_string()))?;
    json.push('\n');
    write_output(a.out.as_deref(), json.as_bytes())?;

    let skipped = rep.checks.iter().filter(|c| c.is_skipped()).count();
    let failed: Vec<&Check> = rep.failures().collect();
    for c in &failed {
        eprintln!(
            "FAIL {} error {:.3e} > {:.1e}",
            c.name, c.max_error, c.tolerance
        );
    }
    eprintln!(
        "d={}: {} checks, {} passed, {} failed, {} skipped",
        fid.d(),
        rep.len(),
        rep.len() - failed.len() - skipped,
        failed.len(),
        skipped
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} checks failed", failed.len())))
    }
}

fn search(a: SearchArgs) -> Result<(), Failure> {
    let opts = SearchOptions {
        target: a.tol,
        restarts: a.restarts,
        ..SearchOptions::default()
    };
    let fid = fiducial_search(a.dim, a.seed, &opts)?;
    eprintln!("residual {:.3e}", overlap_residual(fid.components()));
    write_output(a.out.as_deref(), format_fiducial(&fid).as_bytes())
}

fn reconstruct(a: ReconstructArgs) -> Result<(), Failure> {
    let bytes = std::fs::read(&a.theta3)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.theta3.display())))?;
    let theta = decode_theta3(&bytes)?;
    if a.anchor >= theta.n() {
        return Err(Failure::Usage(format!(
            "anchor {} out of range for {} vectors",
            a.anchor,
            theta.n()
        )));
    }
    let set = sic_core::reconstruct::sic_from_theta3(&theta, a.anchor, a.tol)?;
    let mismatch = theta3_distance(&theta, &triple_products(&set).theta3);
    write_output(a.out.as_deref(), format_vector_set(&set).as_bytes())?;
    if mismatch <= a.tol {
        eprintln!("theta3 matches input (max deviation {mismatch:.3e})");
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "theta3 of the output deviates from the input by {mismatch:.3e}"
        )))
    }
}

fn theta3(a: Theta3Args) -> Result<(), Failure> {
    let fid = resolve(&a.source)?;
    let set = sic_from_fiducial(&fid)?;
    write_output(Some(&a.out), &encode_theta3(&triple_products(&set).theta3))
}
