//! Command-line front end: argument definitions and command execution.
//!
//! [`run`] returns the text destined for standard output plus any warnings,
//! so the binary stays a thin wrapper and the commands are testable in-process.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fock::{self, BeamsplitterParam, FockCutoff};
use crate::gates::GateKind;
use crate::linalg::{fidelity, PureState, QuditDim};
use crate::verify::{self, MetricKind, SuiteKind, Tolerances, VerificationReport, FIDELITY_TOL};
use crate::wire::{self, StateJson};

/// Exit code for failed verification checks.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Exit code for malformed input.
pub const EXIT_BAD_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "quswap",
    version,
    about = "Qudit exchange gates and two-mode Fock-space exchange"
)]
pub struct Cli {
    /// Write the primary output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateName {
    Sigma1,
    Sigma3,
    K,
    Cshift,
    CshiftRev,
    Swap,
    SwapComposed,
}

impl From<GateName> for GateKind {
    fn from(g: GateName) -> Self {
        match g {
            GateName::Sigma1 => GateKind::Sigma1,
            GateName::Sigma3 => GateKind::Sigma3,
            GateName::K => GateKind::Reverse,
            GateName::Cshift => GateKind::ControlledShift,
            GateName::CshiftRev => GateKind::ControlledShiftReversed,
            GateName::Swap => GateKind::Swap,
            GateName::SwapComposed => GateKind::SwapComposed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Qudit,
    Fock,
    All,
}

impl From<Suite> for SuiteKind {
    fn from(s: Suite) -> Self {
        match s {
            Suite::Qudit => SuiteKind::Qudit,
            Suite::Fock => SuiteKind::Fock,
            Suite::All => SuiteKind::All,
        }
    }
}

fn complex_arg(s: &str) -> std::result::Result<C64, String> {
    wire::parse_complex(s).map_err(|e| e.to_string())
}

fn angle_arg(s: &str) -> std::result::Result<f64, String> {
    wire::parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump a gate matrix.
    Gate {
        #[arg(long, value_enum)]
        name: GateName,
        #[arg(long, value_parser = clap::value_parser!(u16).range(2..=64))]
        d: u16,
        #[arg(long, value_enum, default_value = "json")]
        format: MatrixFormat,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u16).range(2..=16))]
        d_max: u16,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u16).range(1..=64))]
        n_max: u16,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Exchange two coherent states with the fixed beamsplitter protocol.
    Exchange {
        #[arg(long, allow_hyphen_values = true, value_parser = complex_arg)]
        z1: C64,
        #[arg(long, allow_hyphen_values = true, value_parser = complex_arg)]
        z2: C64,
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = angle_arg)]
        theta: f64,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u16).range(1..=64))]
        n_max: u16,
    },
    /// Imperfect clone of a coefficient file or coherent state, with the closed-form comparison.
    Clone {
        /// JSON coefficient file: `[[re, im], ...]` or `{"amplitudes": [...]}`.
        #[arg(long, conflicts_with = "z1", required_unless_present = "z1")]
        input: Option<PathBuf>,
        /// Coherent amplitude of the input state.
        #[arg(long, alias = "z", allow_hyphen_values = true, value_parser = complex_arg)]
        z1: Option<C64>,
        #[arg(long, allow_hyphen_values = true, value_parser = angle_arg)]
        t_abs: f64,
        /// Phase of the beamsplitter parameter t.
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = angle_arg)]
        theta: f64,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u16).range(1..=64))]
        n_max: u16,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub exit_code: u8,
}

impl Outcome {
    fn from_reports(stdout: String, warnings: Vec<String>, reports: &[VerificationReport]) -> Self {
        let exit_code = if verify::all_pass(reports) {
            0
        } else {
            EXIT_CHECK_FAILED
        };
        Self {
            stdout,
            warnings,
            exit_code,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gate { name, d, format } => cmd_gate((*name).into(), *d as usize, *format),
        Command::Verify {
            suite,
            d_max,
            n_max,
            format,
        } => cmd_verify(
            (*suite).into(),
            *d_max as usize,
            *n_max as usize,
            *format,
            &Tolerances::from_env()?,
        ),
        Command::Exchange {
            z1,
            z2,
            theta,
            n_max,
        } => cmd_exchange(*z1, *z2, *theta, *n_max as usize),
        Command::Clone {
            input,
            z1,
            t_abs,
            theta,
            n_max,
        } => {
            let source = match (input, z1) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        Error::Invalid(format!("cannot read {}: {e}", path.display()))
                    })?;
                    CloneInput::Coefficients {
                        label: path.display().to_string(),
                        coeffs: wire::parse_coefficients(&text)?,
                    }
                }
                (None, Some(z)) => CloneInput::Coherent(*z),
                (None, None) => return Err(Error::Invalid("clone needs --input or --z1".into())),
            };
            cmd_clone(source, *t_abs, *theta, *n_max as usize)
        }
    }
}

pub fn cmd_gate(kind: GateKind, d: usize, format: MatrixFormat) -> Result<Outcome> {
    if !(2..=64).contains(&d) {
        return Err(Error::Invalid(format!("d must lie in 2..=64, got {d}")));
    }
    let gate = kind.build(QuditDim::new(d)?);
    let stdout = match format {
        MatrixFormat::Json => wire::matrix_to_json(gate.matrix()) + "\n",
        MatrixFormat::Csv => wire::matrix_to_csv(gate.matrix()),
    };
    Ok(Outcome {
        stdout,
        warnings: Vec::new(),
        exit_code: 0,
    })
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    suite: &'a str,
    d_max: usize,
    n_max: usize,
    analytic_tolerance: f64,
    all_passed: bool,
    reports: &'a [VerificationReport],
}

pub fn cmd_verify(
    suite: SuiteKind,
    d_max: usize,
    n_max: usize,
    format: ReportFormat,
    tol: &Tolerances,
) -> Result<Outcome> {
    let reports = verify::run_suite(suite, d_max, n_max, tol)?;
    let suite_name = match suite {
        SuiteKind::Qudit => "qudit",
        SuiteKind::Fock => "fock",
        SuiteKind::All => "all",
    };
    let stdout = match format {
        ReportFormat::Json => {
            let out = VerifyOutput {
                suite: suite_name,
                d_max,
                n_max,
                analytic_tolerance: tol.analytic,
                all_passed: verify::all_pass(&reports),
                reports: &reports,
            };
            serde_json::to_string_pretty(&out).expect("report serializes") + "\n"
        }
        ReportFormat::Text => reports.iter().map(|r| r.summary() + "\n").collect(),
    };
    let warnings = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("check failed: {}", r.summary()))
        .collect();
    Ok(Outcome::from_reports(stdout, warnings, &reports))
}

#[derive(Serialize)]
struct ExchangeOutput {
    z1: [f64; 2],
    z2: [f64; 2],
    theta: f64,
    n_max: usize,
    fidelity: f64,
    truncation_weight: TruncationWeights,
    non_discriminating: bool,
    report: VerificationReport,
}

#[derive(Serialize)]
struct TruncationWeights {
    z1: f64,
    z2: f64,
}

pub fn cmd_exchange(z1: C64, z2: C64, theta: f64, n_max: usize) -> Result<Outcome> {
    let start = std::time::Instant::now();
    let cutoff = FockCutoff::new(n_max)?;
    let mut warnings = Vec::new();
    let bound = (n_max as f64).sqrt() / 4.0;
    for (name, z) in [("z1", z1), ("z2", z2)] {
        if z.norm() > bound {
            warnings.push(format!(
                "|{name}| = {:.3} exceeds the advisory bound sqrt(n_max)/4 = {bound:.3}",
                z.norm()
            ));
        }
    }
    let s1 = fock::coherent_state(z1, cutoff)?;
    let s2 = fock::coherent_state(z2, cutoff)?;
    for (name, s) in [("z1", &s1), ("z2", &s2)] {
        if !s.is_adequate() {
            warnings.push(format!(
                "coherent state {name} loses weight {:.3e} to truncation",
                s.leaked_weight
            ));
        }
    }
    let e = fock::exchange_protocol(theta, cutoff)?;
    let out = e.apply(&s1.state.tensor(&s2.state))?;
    let f = fidelity(&out, &s2.state.tensor(&s1.state))?;
    let non_discriminating = (z1 - z2).norm() < 1e-12;

    let params = [
        ("n_max".to_string(), json!(n_max)),
        ("theta".to_string(), json!(theta)),
        ("z1".to_string(), json!(wire::complex_pair(z1))),
        ("z2".to_string(), json!(wire::complex_pair(z2))),
    ]
    .into_iter()
    .collect();
    let mut report = VerificationReport::new(
        "exchange_coherent_states",
        params,
        MetricKind::Infidelity,
        1.0 - f,
        FIDELITY_TOL,
    );
    if non_discriminating {
        report =
            report.with_note("z1 == z2: symmetric input cannot distinguish exchange from identity");
        warnings.push("z1 == z2: this input does not test the exchange".into());
    }
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let output = ExchangeOutput {
        z1: wire::complex_pair(z1),
        z2: wire::complex_pair(z2),
        theta,
        n_max,
        fidelity: f,
        truncation_weight: TruncationWeights {
            z1: s1.leaked_weight,
            z2: s2.leaked_weight,
        },
        non_discriminating,
        report: report.clone(),
    };
    let stdout = serde_json::to_string_pretty(&output).expect("serializes") + "\n";
    Ok(Outcome::from_reports(stdout, warnings, &[report]))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CloneInput {
    Coherent(C64),
    Coefficients { label: String, coeffs: Vec<C64> },
}

#[derive(Serialize)]
struct CloneOutput {
    n_max: usize,
    t_abs: f64,
    theta: f64,
    input: serde_json::Value,
    input_renormalized: bool,
    adequacy_weight: f64,
    numeric: StateJson,
    closed_form: StateJson,
    fidelity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    coherent_marginals: Option<CoherentMarginals>,
    report: VerificationReport,
}

#[derive(Serialize)]
struct CoherentMarginals {
    mode1_z: [f64; 2],
    mode2_z: [f64; 2],
    mode1_overlap: f64,
    mode2_overlap: f64,
}

pub fn cmd_clone(input: CloneInput, t_abs: f64, theta: f64, n_max: usize) -> Result<Outcome> {
    let start = std::time::Instant::now();
    let cutoff = FockCutoff::new(n_max)?;
    let t = BeamsplitterParam::from_polar(t_abs, theta)?;
    let mut warnings = Vec::new();
    let mut renormalized = false;

    let (x, input_json, coherent_z) = match &input {
        CloneInput::Coherent(z) => {
            let s = fock::coherent_state(*z, cutoff)?;
            if !s.is_adequate() {
                warnings.push(format!(
                    "coherent input loses weight {:.3e} to truncation",
                    s.leaked_weight
                ));
            }
            (
                s.state,
                json!({"kind": "coherent", "z": wire::complex_pair(*z)}),
                Some(*z),
            )
        }
        CloneInput::Coefficients { label, coeffs } => {
            if coeffs.len() > cutoff.single_dim() {
                return Err(Error::Invalid(format!(
                    "{} coefficients do not fit below n_max = {n_max}",
                    coeffs.len()
                )));
            }
            let mut padded = coeffs.clone();
            padded.resize(cutoff.single_dim(), C64::new(0.0, 0.0));
            let state = match PureState::new(padded.clone()) {
                Ok(s) => s,
                Err(Error::NotNormalized { norm_sqr }) => {
                    renormalized = true;
                    warnings.push(format!("input norm² = {norm_sqr} renormalized to 1"));
                    PureState::normalized(padded)?
                }
                Err(e) => return Err(e),
            };
            (
                state,
                json!({"kind": "coefficients", "source": label}),
                None,
            )
        }
    };

    let numeric = fock::imperfect_clone_numeric(&x, t, cutoff)?;
    if !numeric.is_adequate() {
        warnings.push(format!(
            "input carries weight {:.3e} above n_max/2; raise n_max for a trustworthy result",
            numeric.leaked_weight
        ));
    }
    let closed = fock::imperfect_clone_closed_form(x.amplitudes(), t, cutoff)?;
    let f = fidelity(&numeric.state, &closed)?;

    let coherent_marginals = match coherent_z {
        Some(z) => {
            let (z1, z2) = (z * t_abs.cos(), z * t_abs.sin());
            let rho1 = fock::reduced_first_mode(&numeric.state, cutoff)?;
            let rho2 = fock::reduced_second_mode(&numeric.state, cutoff)?;
            Some(CoherentMarginals {
                mode1_z: wire::complex_pair(z1),
                mode2_z: wire::complex_pair(z2),
                mode1_overlap: fock::expectation(&rho1, &fock::coherent_state(z1, cutoff)?.state)?,
                mode2_overlap: fock::expectation(&rho2, &fock::coherent_state(z2, cutoff)?.state)?,
            })
        }
        None => None,
    };

    let params = [
        ("n_max".to_string(), json!(n_max)),
        ("t_abs".to_string(), json!(t_abs)),
        ("theta".to_string(), json!(theta)),
    ]
    .into_iter()
    .collect();
    let mut report = VerificationReport::new(
        "clone_numeric_matches_closed_form",
        params,
        MetricKind::Infidelity,
        1.0 - f,
        FIDELITY_TOL,
    );
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let output = CloneOutput {
        n_max,
        t_abs,
        theta,
        input: input_json,
        input_renormalized: renormalized,
        adequacy_weight: numeric.leaked_weight,
        numeric: StateJson::from(&numeric.state),
        closed_form: StateJson::from(&closed),
        fidelity: f,
        coherent_marginals,
        report: report.clone(),
    };
    let stdout = serde_json::to_string_pretty(&output).expect("serializes") + "\n";
    Ok(Outcome::from_reports(stdout, warnings, &[report]))
}
