//! Command-line front end.
//!
//! Exit status: 0 on success, 1 for usage/config errors or failed audits,
//! 2 for numerical failures inside the propagator.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{build_clock, build_fourier, build_shift, check_dim, primitive_root};
use crate::config::RunConfig;
use crate::error::Error;
use crate::hamiltonian::{build_drift, build_interaction, energies_to_deltas, interaction_diagonal};
use crate::matrix::ComplexMatrix;
use crate::propagator::{evolve, Trajectory};

#[derive(Debug, Parser)]
#[command(name = "nlevel", version, about = "Generalized-Pauli Hamiltonians for driven n-level systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the clock/shift identities at dimension n.
    Algebra {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Dump Σ₁, Σ₃ and W as JSON.
    Matrices {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand energy levels into Δ-coefficients.
    Decompose {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Propagate a state and write the population trajectory as CSV.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Failed(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failed(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Failed(e.to_string())
        }
    }
}

/// One checked identity.
#[derive(Clone, Debug)]
pub struct AuditRow {
    pub identity: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub n: usize,
    pub tolerance: f64,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let width = self.rows.iter().map(|r| r.identity.chars().count()).max().unwrap_or(0);
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:<4}  {:<width$}  {:.3e}",
                if row.passed { "PASS" } else { "FAIL" },
                row.identity,
                row.residual,
            );
        }
        let passed = self.rows.iter().filter(|r| r.passed).count();
        let _ = writeln!(
            out,
            "n = {}: {passed}/{} identities within {:e}",
            self.n,
            self.rows.len(),
            self.tolerance
        );
        out
    }
}

const DRIVE_GRID: usize = 32;

/// Runs the clock/shift identity suite at dimension `n`.
pub fn cmd_algebra(n: usize, tolerance: f64) -> Result<AuditReport, CliError> {
    check_dim(n).map_err(|e| CliError::Usage(e.to_string()))?;
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(CliError::Usage(format!("tolerance must be a non-negative number, got {tolerance}")));
    }
    let sigma = primitive_root(n)?;
    let shift = build_shift(n)?;
    let clock = build_clock(n)?;
    let w = build_fourier(n)?;
    let id = ComplexMatrix::identity(n);
    let k = n as u32;
    let dist = |a: &ComplexMatrix, b: &ComplexMatrix| a.max_abs_diff(b).expect("same dimension");

    let w_adj = w.adjoint();
    let diagonalization_label = if n == 2 { "σ₁ = W σ₃ W⁻¹" } else { "Σ₁ = W Σ₃ W†" };

    let drive_residual = (0..DRIVE_GRID)
        .map(|i| {
            let phase = TAU * i as f64 / DRIVE_GRID as f64;
            let lhs = build_interaction(n, 1.0, 1.0, phase).expect("n checked");
            let d = interaction_diagonal(n, 1.0, phase).expect("n checked");
            dist(&lhs, &(&(&w * &d) * &w_adj))
        })
        .fold(0.0, f64::max);

    let root_sum: Complex64 = (0..n as i64).map(|j| sigma.pow(j)).sum();

    let checks = vec![
        ("1 + σ + … + σ^(n-1) = 0".to_string(), root_sum.norm()),
        ("Σ₁ⁿ = 𝟙".to_string(), dist(&shift.pow(k), &id)),
        ("Σ₃ⁿ = 𝟙".to_string(), dist(&clock.pow(k), &id)),
        ("Σ₃Σ₁ = σ Σ₁Σ₃".to_string(), dist(&(&clock * &shift), &(&shift * &clock).scale(sigma.value()))),
        ("Σ₁† = Σ₁^(n-1)".to_string(), dist(&shift.adjoint(), &shift.pow(k - 1))),
        ("Σ₃† = Σ₃^(n-1)".to_string(), dist(&clock.adjoint(), &clock.pow(k - 1))),
        ("W W† = 𝟙".to_string(), dist(&(&w * &w_adj), &id)),
        (diagonalization_label.to_string(), dist(&(&(&w * &clock) * &w_adj), &shift)),
        ("(e^{iωt}Σ₁ + e^{-iωt}Σ₁†)/2 = W D W⁻¹".to_string(), drive_residual),
    ];
    let rows = checks
        .into_iter()
        .map(|(identity, residual)| AuditRow { identity, residual, passed: residual <= tolerance })
        .collect();
    Ok(AuditReport { n, tolerance, rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

fn matrix_json(m: &ComplexMatrix) -> Vec<Vec<ComplexJson>> {
    m.rows().map(|row| row.iter().map(|&z| z.into()).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixDump {
    pub n: usize,
    pub sigma1: Vec<Vec<ComplexJson>>,
    pub sigma3: Vec<Vec<ComplexJson>>,
    pub w: Vec<Vec<ComplexJson>>,
}

pub fn cmd_matrices(n: usize) -> Result<MatrixDump, CliError> {
    check_dim(n).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(MatrixDump {
        n,
        sigma1: matrix_json(&build_shift(n)?),
        sigma3: matrix_json(&build_clock(n)?),
        w: matrix_json(&build_fourier(n)?),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposeReport {
    pub n: usize,
    pub energies: Vec<f64>,
    pub deltas: Vec<ComplexJson>,
    /// `max_j |Δ_{n-j} - conj(Δ_j)|`.
    pub hermitian_residual: f64,
    /// `max |Δ₀𝟙 + Σ Δ_j Σ₃^j - diag(E)|`.
    pub reconstruction_residual: f64,
}

pub fn cmd_decompose(config: &RunConfig) -> Result<DecomposeReport, CliError> {
    let mut spec = config.system_spec()?;
    let deltas = energies_to_deltas(&spec)?;
    spec.include_delta0 = true;
    let rebuilt = build_drift(&spec)?;
    let diag: Vec<_> = spec.energies.iter().map(|&e| Complex64::new(e, 0.0)).collect();
    let reconstruction_residual = rebuilt.max_abs_diff(&ComplexMatrix::from_diagonal(&diag))?;
    Ok(DecomposeReport {
        n: spec.n,
        energies: spec.energies.clone(),
        deltas: deltas.values.iter().map(|&z| z.into()).collect(),
        hermitian_residual: deltas.pairing_residual(),
        reconstruction_residual,
    })
}

pub fn cmd_evolve(config: &RunConfig) -> Result<Trajectory, CliError> {
    let (spec, evo) = config.evolution()?;
    Ok(evolve(&spec, &evo)?)
}

/// `t,p0,…,p{n-1},norm_error` with one row per sample, 17 significant digits.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.populations.first().map_or(0, Vec::len);
    let mut out = String::from("t");
    for k in 0..n {
        let _ = write!(out, ",p{k}");
    }
    out.push_str(",norm_error\n");
    for ((t, pops), err) in traj.times.iter().zip(&traj.populations).zip(&traj.norm_errors) {
        let _ = write!(out, "{t:.16e}");
        for p in pops {
            let _ = write!(out, ",{p:.16e}");
        }
        let _ = writeln!(out, ",{err:.16e}");
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Failed(format!("cannot write output: {e}"))),
    }
}

fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    Ok(RunConfig::from_path(path)?)
}

/// Executes a parsed command, writing results to `stdout` or the `--out` file.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Algebra { n, tol } => {
            let report = cmd_algebra(*n, *tol)?;
            emit(&report.render(), None, stdout)?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::Failed(format!("identity audit failed at n = {n}")))
            }
        }
        Command::Matrices { n, out } => emit(&to_json(&cmd_matrices(*n)?), out.as_deref(), stdout),
        Command::Decompose { config, out } => {
            let report = cmd_decompose(&load_config(config)?)?;
            emit(&to_json(&report), out.as_deref(), stdout)
        }
        Command::Evolve { config, out } => {
            let cfg = load_config(config)?;
            let path = out
                .clone()
                .or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
                .ok_or_else(|| CliError::Usage("evolve needs --out <path> or `output_path` in the config".into()))?;
            let traj = cmd_evolve(&cfg)?;
            emit(&trajectory_csv(&traj), Some(&path), stdout)?;
            let worst = traj.norm_errors.iter().copied().fold(0.0, f64::max);
            let summary = format!(
                "wrote {} samples to {} (max norm error {worst:.3e})\n",
                traj.times.len(),
                path.display()
            );
            emit(&summary, None, stdout)
        }
    }
}

/// Parses `args` and runs; returns the process exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("nlevel").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn algebra_passes_for_small_n() {
        for n in 2..=6 {
            let report = cmd_algebra(n, 1e-12).unwrap();
            assert!(report.all_passed(), "{}", report.render());
        }
    }

    #[test]
    fn algebra_n2_names_the_pauli_diagonalization() {
        let (code, out, _) = run_args(&["algebra", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("PASS  σ₁ = W σ₃ W⁻¹"), "{out}");
        assert!(!out.contains("FAIL"));
    }

    #[test]
    fn algebra_rejects_n1_and_bad_args() {
        let (code, _, err) = run_args(&["algebra", "--n", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("at least 2"), "{err}");
        assert_eq!(run_args(&["algebra", "--n", "-3"]).0, 1);
        assert_eq!(run_args(&["algebra"]).0, 1);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn impossible_tolerance_fails_the_audit() {
        let (code, out, _) = run_args(&["algebra", "--n", "7", "--tol", "0"]);
        assert_eq!(code, 1);
        assert!(out.contains("FAIL"));
    }

    #[test]
    fn decompose_two_level() {
        let cfg = RunConfig::from_json(r#"{"n": 2, "energies": [1, -1]}"#).unwrap();
        let report = cmd_decompose(&cfg).unwrap();
        assert!(report.deltas[0].re.abs() < 1e-15 && report.deltas[0].im.abs() < 1e-15);
        assert!((report.deltas[1].re - 1.0).abs() < 1e-15 && report.deltas[1].im.abs() < 1e-15);
    }

    #[test]
    fn decompose_flat_and_qutrit() {
        let cfg = RunConfig::from_json(r#"{"n": 4, "energies": [5, 5, 5, 5]}"#).unwrap();
        let report = cmd_decompose(&cfg).unwrap();
        assert!((report.deltas[0].re - 5.0).abs() <= 1e-12);
        assert!(report.deltas[1..].iter().all(|d| d.re.abs() <= 1e-12 && d.im.abs() <= 1e-12));

        let cfg = RunConfig::from_json(r#"{"n": 3, "energies": [1, 2, 3]}"#).unwrap();
        let report = cmd_decompose(&cfg).unwrap();
        assert!(report.reconstruction_residual <= 1e-12);
        assert!(report.hermitian_residual <= 1e-12);
        let json = to_json(&report);
        let keys = ["\"n\"", "\"energies\"", "\"deltas\"", "\"hermitian_residual\"", "\"reconstruction_residual\""];
        let positions: Vec<_> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn csv_layout() {
        let traj = Trajectory {
            times: vec![0.0, 0.5],
            populations: vec![vec![1.0, 0.0], vec![0.25, 0.75]],
            norm_errors: vec![0.0, 1e-16],
            final_state: crate::propagator::StateVector::basis(2, 0).unwrap(),
        };
        let csv = trajectory_csv(&traj);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t,p0,p1,norm_error");
        assert_eq!(lines.len(), 3);
        assert!(!csv.contains('\r'));
        assert!(lines.iter().all(|l| !l.ends_with(',')));
        let row: Vec<f64> = lines[2].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(row, vec![0.5, 0.25, 0.75, 1e-16]);
    }

    #[test]
    fn evolve_without_output_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"n": 2, "energies": [0, 1], "g": 0, "omega": 0, "drive_model": "none", "t_end": 1, "dt": 0.1, "initial_state": 0}"#).unwrap();
        let (code, _, err) = run_args(&["evolve", "--config", path.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(err.contains("--out"), "{err}");
    }

    #[test]
    fn numerical_errors_map_to_status_two() {
        let e: CliError = Error::AtTime {
            t: 1.0,
            source: Box::new(Error::NoConvergence { sweeps: 100, off_norm: 1.0 }),
        }
        .into();
        assert_eq!(e.exit_code(), 2);
        let e: CliError = Error::ZeroInitialState.into();
        assert_eq!(e.exit_code(), 1);
    }
}
