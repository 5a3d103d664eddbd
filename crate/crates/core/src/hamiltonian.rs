//! Drift and drive Hamiltonians for an n-level system (ħ = 1).
//!
//! The diagonal energy matrix `diag(E₀, …, E_{n-1})` is expanded in powers
//! of the clock matrix, `Δ₀𝟙 + Σ_{j≥1} Δ_j Σ₃^j`, where the coefficients are
//! the discrete Fourier transform of the energies,
//! `Δ_j = (1/n) Σ_k σ^{-jk} E_k`. The constant `Δ₀` only contributes a
//! global phase and is left out of the drift unless asked for.
//!
//! The periodic drive couples through the shift matrix,
//! `(g/2)(e^{iωt}Σ₁ + e^{-iωt}Σ₁†)`, which for n = 2 is `g cos(ωt) σ₁`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_clock, build_shift, check_dim, root_power};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Which time-dependent term is added to the drift.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveModel {
    /// Drift only.
    #[default]
    None,
    /// `(g/2)(e^{iωt}Σ₁ + e^{-iωt}Σ₁†)`, any n.
    Generalized,
    /// Two-level dipole drive `g cos(ωt) σ₁`.
    Cosine2,
    /// Two-level rotating-wave drive `(g/2)(e^{iωt}σ₊ + e^{-iωt}σ₋)`.
    Rwa2,
}

impl DriveModel {
    pub fn name(self) -> &'static str {
        match self {
            DriveModel::None => "none",
            DriveModel::Generalized => "generalized",
            DriveModel::Cosine2 => "cosine2",
            DriveModel::Rwa2 => "rwa2",
        }
    }

    fn two_level_only(self) -> bool {
        matches!(self, DriveModel::Cosine2 | DriveModel::Rwa2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub n: usize,
    /// Bare energy levels `E₀ … E_{n-1}`.
    pub energies: Vec<f64>,
    /// Coupling strength `g ≥ 0`.
    pub g: f64,
    /// Drive angular frequency.
    pub omega: f64,
    pub drive_model: DriveModel,
    /// Keep `Δ₀𝟙` in the drift.
    pub include_delta0: bool,
}

impl SystemSpec {
    /// An undriven system with the given levels.
    pub fn undriven(energies: Vec<f64>) -> Self {
        Self {
            n: energies.len(),
            energies,
            g: 0.0,
            omega: 0.0,
            drive_model: DriveModel::None,
            include_delta0: false,
        }
    }

    pub fn driven(energies: Vec<f64>, g: f64, omega: f64, drive_model: DriveModel) -> Self {
        Self { g, omega, drive_model, ..Self::undriven(energies) }
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.n)?;
        if self.energies.len() != self.n {
            return Err(Error::InvalidSpec(format!(
                "expected {} energies, got {}",
                self.n,
                self.energies.len()
            )));
        }
        if let Some(k) = self.energies.iter().position(|e| !e.is_finite()) {
            return Err(Error::InvalidSpec(format!("energy {k} is not finite")));
        }
        if !self.g.is_finite() || self.g < 0.0 {
            return Err(Error::InvalidSpec(format!("coupling g must be finite and >= 0, got {}", self.g)));
        }
        if !self.omega.is_finite() {
            return Err(Error::InvalidSpec("omega must be finite".into()));
        }
        if self.drive_model.two_level_only() && self.n != 2 {
            return Err(Error::ModeDimension { model: self.drive_model.name(), n: self.n });
        }
        Ok(())
    }
}

/// Expansion coefficients `Δ₀ … Δ_{n-1}` of the energy diagonal in powers of `Σ₃`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaCoefficients {
    pub values: Vec<Complex64>,
}

impl DeltaCoefficients {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `max_j |Δ_{n-j} - conj(Δ_j)|`, including `|Im Δ₀|`. Zero for
    /// coefficients that came from real energies.
    pub fn pairing_residual(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|j| (self.values[(n - j) % n] - self.values[j].conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// Fourier coefficients of the energies by the explicit sum
/// `Δ_j = (1/n) Σ_k σ^{(n-j)k} E_k`.
pub fn energies_to_deltas(spec: &SystemSpec) -> Result<DeltaCoefficients> {
    spec.validate()?;
    Ok(deltas_of(&spec.energies))
}

fn deltas_of(energies: &[f64]) -> DeltaCoefficients {
    let n = energies.len();
    let inv_n = 1.0 / n as f64;
    let values = (0..n)
        .map(|j| {
            let sum: Complex64 = energies
                .iter()
                .enumerate()
                .map(|(k, &e)| root_power(n, ((n - j) * k) as i64) * e)
                .sum();
            sum * inv_n
        })
        .collect();
    DeltaCoefficients { values }
}

/// Inverse transform `E_m = Σ_j σ^{mj} Δ_j`. Fails if any result carries an
/// imaginary part above 1e-10, which means the coefficients were not
/// conjugate-paired.
pub fn deltas_to_energies(deltas: &DeltaCoefficients) -> Result<Vec<f64>> {
    let n = deltas.n();
    check_dim(n)?;
    (0..n)
        .map(|m| {
            let e: Complex64 = deltas
                .values
                .iter()
                .enumerate()
                .map(|(j, &d)| root_power(n, (m * j) as i64) * d)
                .sum();
            if e.im.abs() > 1e-10 {
                return Err(Error::NonRealEnergy { index: m, residue: e.im.abs() });
            }
            Ok(e.re)
        })
        .collect()
}

/// `Σ_{j=1}^{n-1} Δ_j Σ₃^j`, plus `Δ₀𝟙` when `include_delta0` is set.
pub fn build_drift(spec: &SystemSpec) -> Result<ComplexMatrix> {
    let deltas = energies_to_deltas(spec)?;
    let n = spec.n;
    let clock = build_clock(n)?;
    let mut h = if spec.include_delta0 {
        ComplexMatrix::identity(n).scale(deltas.values[0])
    } else {
        ComplexMatrix::zeros(n)
    };
    for (j, &d) in deltas.values.iter().enumerate().skip(1) {
        h = &h + &clock.pow(j as u32).scale(d);
    }
    Ok(h)
}

/// `(g/2)(e^{iωt}Σ₁ + e^{-iωt}Σ₁†)`.
pub fn build_interaction(n: usize, g: f64, omega: f64, t: f64) -> Result<ComplexMatrix> {
    let shift = build_shift(n)?;
    Ok(shift_drive(&shift, g, omega * t))
}

fn shift_drive(shift: &ComplexMatrix, g: f64, phase: f64) -> ComplexMatrix {
    let forward = shift.scale(Complex64::from_polar(g / 2.0, phase));
    let backward = shift.adjoint().scale(Complex64::from_polar(g / 2.0, -phase));
    &forward + &backward
}

/// `D(t) = diag(cos(ωt), cos(ωt + 2π/n), …, cos(ωt + 2π(n-1)/n))`, the
/// eigenvalues of `(1/2)(e^{iωt}Σ₁ + e^{-iωt}Σ₁†)` in the basis given by the
/// columns of `W`.
pub fn interaction_diagonal(n: usize, omega: f64, t: f64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let phase = omega * t;
    let diag: Vec<_> = (0..n)
        .map(|k| Complex64::new((phase + TAU * k as f64 / n as f64).cos(), 0.0))
        .collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

/// `σ₊ = |1⟩⟨0|`, the part of `σ₁` that raises the level index.
pub fn sigma_plus() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(1, 0)] = Complex64::new(1.0, 0.0);
    m
}

/// `σ₋ = |0⟩⟨1| = σ₊†`.
pub fn sigma_minus() -> ComplexMatrix {
    sigma_plus().adjoint()
}

/// The full Hamiltonian `H(t)` for a system, with the time-independent parts
/// built once.
#[derive(Clone, Debug)]
pub struct DrivenHamiltonian {
    drift: ComplexMatrix,
    drive: Drive,
}

#[derive(Clone, Debug)]
enum Drive {
    None,
    Shift { shift: ComplexMatrix, g: f64, omega: f64 },
    Cosine { sigma_x: ComplexMatrix, g: f64, omega: f64 },
    Rotating { plus: ComplexMatrix, minus: ComplexMatrix, g: f64, omega: f64 },
}

impl DrivenHamiltonian {
    pub fn new(spec: &SystemSpec) -> Result<Self> {
        let drift = build_drift(spec)?;
        let (g, omega) = (spec.g, spec.omega);
        let drive = match spec.drive_model {
            DriveModel::None => Drive::None,
            DriveModel::Generalized => Drive::Shift { shift: build_shift(spec.n)?, g, omega },
            DriveModel::Cosine2 => Drive::Cosine { sigma_x: build_shift(2)?, g, omega },
            DriveModel::Rwa2 => Drive::Rotating { plus: sigma_plus(), minus: sigma_minus(), g, omega },
        };
        Ok(Self { drift, drive })
    }

    pub fn dim(&self) -> usize {
        self.drift.dim()
    }

    pub fn drift(&self) -> &ComplexMatrix {
        &self.drift
    }

    pub fn at(&self, t: f64) -> ComplexMatrix {
        match &self.drive {
            Drive::None => self.drift.clone(),
            Drive::Shift { shift, g, omega } => &self.drift + &shift_drive(shift, *g, omega * t),
            Drive::Cosine { sigma_x, g, omega } => {
                &self.drift + &sigma_x.scale(Complex64::new(g * (omega * t).cos(), 0.0))
            }
            Drive::Rotating { plus, minus, g, omega } => {
                let up = plus.scale(Complex64::from_polar(g / 2.0, omega * t));
                let down = minus.scale(Complex64::from_polar(g / 2.0, -omega * t));
                &self.drift + &(&up + &down)
            }
        }
    }
}

/// Drift plus the drive selected by `spec.drive_model`, evaluated at time `t`.
pub fn build_full_hamiltonian(spec: &SystemSpec, t: f64) -> Result<ComplexMatrix> {
    Ok(DrivenHamiltonian::new(spec)?.at(t))
}
