//! Golden CLI cases: each runs the built binary from the crate root and
//! compares stdout, stderr and the exit code with files under
//! `tests/golden/`. Set `UPDATE_GOLDEN=1` to rewrite the expectations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

const fn case(name: &'static str, args: &'static [&'static str]) -> Case {
    Case { name, args }
}

pub const CASES: &[Case] = &[
    case(
        "state_rank_one",
        &["state", "tests/fixtures/rank_one_4x4.json"],
    ),
    case(
        "state_identity",
        &["state", "tests/fixtures/identity_4x4.json"],
    ),
    case(
        "state_identity_bits",
        &["state", "tests/fixtures/identity_4x4.json", "--bits"],
    ),
    case(
        "state_padded",
        &["state", "tests/fixtures/rank_one_3x3.json", "--n", "5"],
    ),
    case(
        "state_generic",
        &["state", "tests/fixtures/generic_3x3.json"],
    ),
    case("state_zero", &["state", "tests/fixtures/zero_3x3.json"]),
    case(
        "state_malformed",
        &["state", "tests/fixtures/malformed_matrix.json"],
    ),
    case("state_garbage", &["state", "tests/fixtures/garbage.json"]),
    case(
        "state_missing",
        &["state", "tests/fixtures/does_not_exist.json"],
    ),
    case(
        "state_n_too_small",
        &["state", "tests/fixtures/identity_4x4.json", "--n", "2"],
    ),
    case(
        "dist_identical",
        &[
            "dist",
            "tests/fixtures/state_90_10.json",
            "tests/fixtures/state_90_10.json",
        ],
    ),
    case(
        "dist_two_mode",
        &[
            "dist",
            "tests/fixtures/state_90_10.json",
            "tests/fixtures/state_10_90.json",
        ],
    ),
    case(
        "dist_pair",
        &[
            "dist",
            "tests/fixtures/state_64_36.json",
            "tests/fixtures/state_36_64.json",
        ],
    ),
    case(
        "dist_boundary",
        &[
            "dist",
            "tests/fixtures/state_vertex.json",
            "tests/fixtures/state_half.json",
        ],
    ),
    case(
        "dist_renormalised",
        &[
            "dist",
            "tests/fixtures/state_renorm.json",
            "tests/fixtures/state_half.json",
        ],
    ),
    case(
        "dist_bad_sum",
        &[
            "dist",
            "tests/fixtures/state_bad_sum.json",
            "tests/fixtures/state_half.json",
        ],
    ),
    case(
        "dist_mismatch",
        &[
            "dist",
            "tests/fixtures/state_half.json",
            "tests/fixtures/state_three.json",
        ],
    ),
    case(
        "geodesic_symmetric",
        &[
            "geodesic",
            "tests/fixtures/state_90_10.json",
            "tests/fixtures/state_10_90.json",
            "--steps",
            "3",
        ],
    ),
    case(
        "geodesic_interior",
        &[
            "geodesic",
            "tests/fixtures/state_a3.json",
            "tests/fixtures/state_b3.json",
            "--steps",
            "11",
        ],
    ),
    case(
        "geodesic_steps_one",
        &[
            "geodesic",
            "tests/fixtures/state_a3.json",
            "tests/fixtures/state_b3.json",
            "--steps",
            "1",
        ],
    ),
    case(
        "geodesic_boundary",
        &[
            "geodesic",
            "tests/fixtures/state_vertex.json",
            "tests/fixtures/state_half.json",
        ],
    ),
    case(
        "geodesic_same_point",
        &[
            "geodesic",
            "tests/fixtures/state_half.json",
            "tests/fixtures/state_half.json",
        ],
    ),
    case(
        "compose_aligned_diagonal",
        &[
            "compose",
            "tests/fixtures/diag_2_1.json",
            "tests/fixtures/identity_2x2.json",
        ],
    ),
    case(
        "compose_rank_one_stage",
        &[
            "compose",
            "tests/fixtures/rank_one_3x3.json",
            "tests/fixtures/generic_3x3.json",
        ],
    ),
    case(
        "compose_generic",
        &[
            "compose",
            "tests/fixtures/generic_3x3.json",
            "tests/fixtures/generic_3x3.json",
            "--n",
            "4",
        ],
    ),
    case(
        "compose_incompatible",
        &[
            "compose",
            "tests/fixtures/diag_2_1.json",
            "tests/fixtures/generic_3x3.json",
        ],
    ),
    case(
        "compose_annihilation",
        &[
            "compose",
            "tests/fixtures/proj_e1.json",
            "tests/fixtures/proj_e2.json",
        ],
    ),
    case(
        "compose_zero_stage",
        &[
            "compose",
            "tests/fixtures/zero_3x3.json",
            "tests/fixtures/generic_3x3.json",
        ],
    ),
    case(
        "transport_uniform",
        &[
            "transport",
            "tests/fixtures/state_three.json",
            "--betas",
            "3,3,3",
        ],
    ),
    case(
        "transport_reweight",
        &[
            "transport",
            "tests/fixtures/state_half.json",
            "--betas",
            "2,1",
        ],
    ),
    case(
        "transport_annihilation",
        &[
            "transport",
            "tests/fixtures/state_vertex.json",
            "--betas",
            "0,1",
        ],
    ),
    case(
        "transport_edge_lenient",
        &[
            "transport",
            "tests/fixtures/state_edge3.json",
            "--betas",
            "2,1,1",
        ],
    ),
    case(
        "transport_edge_strict",
        &[
            "transport",
            "tests/fixtures/state_edge3.json",
            "--betas",
            "2,1,1",
            "--strict",
        ],
    ),
    case(
        "transport_length_mismatch",
        &[
            "transport",
            "tests/fixtures/state_half.json",
            "--betas",
            "1,2,3",
        ],
    ),
    case(
        "transport_negative_gain",
        &[
            "transport",
            "tests/fixtures/state_half.json",
            "--betas=-1,2",
        ],
    ),
    case("validate_default", &["validate"]),
    case(
        "validate_seeded",
        &["validate", "--seed", "3", "--trials", "10"],
    ),
    case("validate_zero_trials", &["validate", "--trials", "0"]),
    case(
        "validate_fault",
        &["validate", "--trials", "10", "--inject-fault"],
    ),
    case("usage_no_command", &[]),
    case("usage_unknown_command", &["frobnicate"]),
];

#[derive(Debug, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn crate_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn run_binary(args: &[&str]) -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_spectral-geom"))
        .args(args)
        .current_dir(crate_root())
        .output()
        .expect("binary runs");
    Outcome {
        stdout: String::from_utf8(output.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf-8 stderr"),
        code: output.status.code().expect("exit code"),
    }
}

fn golden_path(name: &str, ext: &str) -> PathBuf {
    crate_root()
        .join("tests/golden")
        .join(format!("{name}.{ext}"))
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs one case and compares it with the committed outputs.
pub fn check(case: &Case) -> Result<Outcome, String> {
    let got = run_binary(case.args);
    let parts = [("stdout", &got.stdout), ("stderr", &got.stderr)];
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        for (ext, text) in parts {
            fs::write(golden_path(case.name, ext), text).map_err(|e| e.to_string())?;
        }
        fs::write(golden_path(case.name, "code"), format!("{}\n", got.code))
            .map_err(|e| e.to_string())?;
        return Ok(got);
    }
    for (ext, text) in parts {
        let want = read(&golden_path(case.name, ext))?;
        if &want != text {
            return Err(format!(
                "{}: {ext} differs\n--- want\n{want}--- got\n{text}",
                case.name
            ));
        }
    }
    let code: i32 = read(&golden_path(case.name, "code"))?
        .trim()
        .parse()
        .map_err(|e| format!("{}: bad code file: {e}", case.name))?;
    if code != got.code {
        return Err(format!(
            "{}: exit code {} but golden says {code}",
            case.name, got.code
        ));
    }
    Ok(got)
}
