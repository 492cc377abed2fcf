//! The `spectral-geom` command-line tool.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage or malformed input,
//! 3 domain error (zero operator, annihilation), 4 boundary violation.

pub mod format;
pub mod io;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::composition::{
    aligned_transport_with, analyze_composition, StageSpectrum, TransportMode,
};
use crate::error::Error;
use crate::geometry::{entropy, entropy_bits, fr_distance, geodesic};
use crate::linalg::compose;
use crate::spectral::{face_of, spectral_state, FaceDescriptor, SpectralState};
use crate::validate::{run_validation, ValidationConfig};

use self::format::significant;
use self::io::{load_matrix, load_state, InputError, LoadedState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_BOUNDARY: i32 = 4;

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidMatrix(_)
        | Error::DimensionMismatch(_)
        | Error::Precondition(_)
        | Error::InvalidState(_)
        | Error::DegeneratePath
        | Error::DegenerateTriangle(_) => EXIT_USAGE,
        Error::ZeroOperator | Error::Annihilation => EXIT_DOMAIN,
        Error::BoundaryState { .. } | Error::SupportViolation(_) => EXIT_BOUNDARY,
        Error::NoConvergence { .. } => EXIT_PROPERTY_FAILURE,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spectral-geom",
    version,
    about = "Fisher-Rao geometry of normalised operator singular spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral state, face and entropy of a matrix
    State {
        matrix: PathBuf,
        /// Spectral dimension (default: min(rows, cols))
        #[arg(long)]
        n: Option<usize>,
        /// Zero tolerance for face membership
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Report entropy in bits instead of nats
        #[arg(long)]
        bits: bool,
        /// Also write the JSON result to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fisher-Rao distance between two states
    Dist { state1: PathBuf, state2: PathBuf },
    /// Sample the Fisher-Rao geodesic between two interior states as CSV
    Geodesic {
        state1: PathBuf,
        state2: PathBuf,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// CSV destination (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyse the composition BA of two matrices
    Compose {
        matrix_b: PathBuf,
        matrix_a: PathBuf,
        /// Spectral dimension (default: largest min(rows, cols) of B, A, BA)
        #[arg(long)]
        n: Option<usize>,
        /// Alignment and uniformity tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Apply the aligned re-weighting by stage gains to a state
    Transport {
        state: PathBuf,
        /// Comma-separated stage gains, one per coordinate
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        betas: Vec<f64>,
        /// Require a full-support state and positive gains
        #[arg(long)]
        strict: bool,
    },
    /// Run the seeded property suite
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// Failure of a subcommand: a message for standard error and an exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        let code = match &e {
            InputError::Invalid { source, .. } => match exit_code(source) {
                EXIT_PROPERTY_FAILURE => EXIT_USAGE,
                c => c,
            },
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::State {
            matrix,
            n,
            tol,
            bits,
            out: dest,
        } => cmd_state(&matrix, n, tol, bits, dest.as_deref(), out),
        Command::Dist { state1, state2 } => cmd_dist(&state1, &state2, out, err),
        Command::Geodesic {
            state1,
            state2,
            steps,
            out: dest,
        } => cmd_geodesic(&state1, &state2, steps, dest.as_deref(), out, err),
        Command::Compose {
            matrix_b,
            matrix_a,
            n,
            tol,
        } => cmd_compose(&matrix_b, &matrix_a, n, tol, out),
        Command::Transport {
            state,
            betas,
            strict,
        } => cmd_transport(&state, betas, strict, out, err),
        Command::Validate {
            seed,
            trials,
            inject_fault,
        } => cmd_validate(seed, trials, inject_fault, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable output")
}

#[derive(Serialize)]
struct FaceJson {
    support_size: usize,
    codimension: usize,
    interior: bool,
}

impl From<FaceDescriptor> for FaceJson {
    fn from(f: FaceDescriptor) -> Self {
        Self {
            support_size: f.support_size,
            codimension: f.codimension,
            interior: f.interior,
        }
    }
}

#[derive(Serialize)]
struct StateOutput<'a> {
    lambda: &'a [f64],
    support_size: usize,
    codimension: usize,
    interior: bool,
    entropy: f64,
    entropy_unit: &'static str,
}

fn warn_all(err: &mut dyn Write, loaded: &LoadedState, path: &Path) {
    for w in &loaded.warnings {
        let _ = writeln!(err, "warning: {}: {w}", path.display());
    }
}

fn cmd_state(
    path: &Path,
    n: Option<usize>,
    tol: f64,
    bits: bool,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let o = load_matrix(path)?;
    let n = n.unwrap_or_else(|| o.rows().min(o.cols()));
    let state = spectral_state(&o, n)?;
    let face = face_of(&state, tol)?;
    let (h, unit) = if bits {
        (entropy_bits(&state), "bits")
    } else {
        (entropy(&state), "nats")
    };
    let json = to_json(&StateOutput {
        lambda: state.as_slice(),
        support_size: face.support_size,
        codimension: face.codimension,
        interior: face.interior,
        entropy: h,
        entropy_unit: unit,
    });
    if let Some(dest) = dest {
        fs::write(dest, format!("{json}\n"))?;
    }
    writeln!(out, "{json}")?;
    Ok(EXIT_OK)
}

fn load_pair(
    p1: &Path,
    p2: &Path,
    err: &mut dyn Write,
) -> Result<(SpectralState<f64>, SpectralState<f64>), Failure> {
    let a = load_state(p1)?;
    let b = load_state(p2)?;
    warn_all(err, &a, p1);
    warn_all(err, &b, p2);
    if a.state.dim() != b.state.dim() {
        return Err(usage(format!(
            "states must share one spectral dimension, got {} and {}",
            a.state.dim(),
            b.state.dim()
        )));
    }
    Ok((a.state, b.state))
}

fn cmd_dist(p1: &Path, p2: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (a, b) = load_pair(p1, p2, err)?;
    writeln!(out, "{}", significant(fr_distance(&a, &b)?, 12))?;
    Ok(EXIT_OK)
}

fn cmd_geodesic(
    p1: &Path,
    p2: &Path,
    steps: usize,
    dest: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if steps < 2 {
        return Err(usage(format!("--steps must be at least 2, got {steps}")));
    }
    let (a, b) = load_pair(p1, p2, err)?;
    let path = geodesic(&a, &b, steps)?;
    let mut csv = String::from("t");
    for i in 1..=a.dim() {
        csv.push_str(&format!(",lambda_{i}"));
    }
    csv.push('\n');
    for (t, s) in path.samples() {
        csv.push_str(&significant(*t, 17));
        for &x in s.as_slice() {
            csv.push(',');
            csv.push_str(&significant(x, 17));
        }
        csv.push('\n');
    }
    let summary = format!(
        "path_length={} distance={}",
        significant(path.length(), 12),
        significant(fr_distance(&a, &b)?, 12)
    );
    match dest {
        Some(dest) => {
            fs::write(dest, csv)?;
            writeln!(out, "{summary}")?;
        }
        None => {
            write!(out, "{csv}")?;
            writeln!(err, "{summary}")?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ComposeOutput<'a> {
    n: usize,
    state_a: &'a [f64],
    state_b: &'a [f64],
    state_ba: &'a [f64],
    rank_a: usize,
    rank_b: usize,
    rank_ba: usize,
    face_ba: FaceJson,
    aligned: bool,
    alignment_residual: f64,
    isometric_stage: bool,
    transport_prediction: Option<&'a [f64]>,
    transport_discrepancy: Option<f64>,
}

fn cmd_compose(pb: &Path, pa: &Path, n: Option<usize>, tol: f64, out: &mut dyn Write) -> CmdResult {
    let b = load_matrix(pb)?;
    let a = load_matrix(pa)?;
    let ba = compose(&b, &a)?;
    let n = n.unwrap_or_else(|| {
        [&b, &a, &ba]
            .iter()
            .map(|m| m.rows().min(m.cols()))
            .max()
            .expect("three operators")
    });
    let r = analyze_composition(&b, &a, n, tol)?;
    let json = to_json(&ComposeOutput {
        n,
        state_a: r.state_a.as_slice(),
        state_b: r.state_b.as_slice(),
        state_ba: r.state_ba.as_slice(),
        rank_a: r.rank_a,
        rank_b: r.rank_b,
        rank_ba: r.rank_ba,
        face_ba: r.face_ba.into(),
        aligned: r.aligned,
        alignment_residual: r.alignment_residual,
        isometric_stage: r.isometric_stage,
        transport_prediction: r.transport_prediction.as_ref().map(|s| s.as_slice()),
        transport_discrepancy: r.transport_discrepancy,
    });
    writeln!(out, "{json}")?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TransportOutput<'a> {
    lambda: &'a [f64],
}

fn cmd_transport(
    path: &Path,
    betas: Vec<f64>,
    strict: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let loaded = load_state(path)?;
    warn_all(err, &loaded, path);
    let state = loaded.state;
    let stage = StageSpectrum::new(betas)?;
    let mode = if strict {
        TransportMode::Strict
    } else {
        if !state.is_interior() {
            let _ = writeln!(
                err,
                "warning: input state lacks full support; the re-weighting is applied beyond its full-support hypothesis"
            );
        }
        TransportMode::Lenient
    };
    let moved = aligned_transport_with(&state, &stage, mode)?;
    writeln!(
        out,
        "{}",
        to_json(&TransportOutput {
            lambda: moved.as_slice()
        })
    )?;
    Ok(EXIT_OK)
}

fn cmd_validate(seed: u64, trials: usize, inject_fault: bool, out: &mut dyn Write) -> CmdResult {
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let report = run_validation(&ValidationConfig {
        seed,
        trials,
        inject_fault,
    })?;
    for f in &report.families {
        writeln!(
            out,
            "{} {:<20} trials={:<5} max_residual={:<12} threshold={}",
            if f.passed { "PASS" } else { "FAIL" },
            f.name,
            f.trials,
            significant(f.max_residual, 4),
            significant(f.threshold, 4),
        )?;
    }
    let passed = report.families.iter().filter(|f| f.passed).count();
    writeln!(
        out,
        "{passed}/{} property families passed",
        report.families.len()
    )?;
    Ok(if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_PROPERTY_FAILURE
    })
}
