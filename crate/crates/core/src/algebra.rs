//! Generalized Pauli matrices for an n-level system.
//!
//! With `σ = exp(2πi/n)`:
//!
//! * the shift `Σ₁` sends basis vector `e_k` to `e_{k+1 mod n}`,
//! * the clock `Σ₃ = diag(1, σ, …, σ^{n-1})`,
//! * the generalized Walsh–Hadamard matrix `W[j][k] = σ^{-jk} / √n`.
//!
//! They satisfy `Σ₁ⁿ = Σ₃ⁿ = 𝟙`, `Σ₃Σ₁ = σΣ₁Σ₃` and `Σ₁ = WΣ₃W†`. For n = 2
//! they reduce to the Pauli matrices σ₁, σ₃ and the Hadamard matrix.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// `σ = exp(2πi/n)` together with the order `n` it was built for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimitiveRoot {
    n: usize,
    value: Complex64,
}

impl PrimitiveRoot {
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self { n, value: root_power(n, 1) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    /// `σ^k` for any integer `k`, evaluated directly from the reduced
    /// exponent `k mod n` rather than by repeated multiplication.
    pub fn pow(&self, k: i64) -> Complex64 {
        root_power(self.n, k)
    }
}

/// `exp(2πi/n)`.
pub fn primitive_root(n: usize) -> Result<PrimitiveRoot> {
    PrimitiveRoot::new(n)
}

/// `exp(2πi·k/n)` with the exponent reduced mod `n` first. Quarter turns
/// are returned exactly.
pub(crate) fn root_power(n: usize, k: i64) -> Complex64 {
    let n_i = n as i64;
    let m = k.rem_euclid(n_i);
    if (4 * m) % n_i == 0 {
        return match 4 * m / n_i {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * m as f64 / n as f64)
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    Ok(())
}

/// The shift matrix `Σ₁`: ones on the subdiagonal and in the top-right corner.
pub fn build_shift(n: usize) -> Result<ComplexMatrix> {
    check_dim(n)?;
    Ok(ComplexMatrix::from_fn(n, |r, c| {
        if r == (c + 1) % n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// The clock matrix `Σ₃ = diag(1, σ, σ², …, σ^{n-1})`.
pub fn build_clock(n: usize) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let diag: Vec<_> = (0..n as i64).map(|k| root_power(n, k)).collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

/// The generalized Walsh–Hadamard matrix `W`.
///
/// Row `j` holds the powers of `σ^{n-j}`: row 0 is all ones, row 1 is
/// `(1, σ^{n-1}, σ^{2(n-1)}, …)` and the last row is `(1, σ, …, σ^{n-1})`,
/// all scaled by `1/√n`. This is the complex conjugate of the usual forward
/// DFT matrix.
pub fn build_fourier(n: usize) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let scale = 1.0 / (n as f64).sqrt();
    Ok(ComplexMatrix::from_fn(n, |j, k| {
        root_power(n, -((j * k) as i64)) * scale
    }))
}

/// `W·Σ₃·W†`, which equals `Σ₁`.
pub fn similarity_diagonalize_shift(n: usize) -> Result<ComplexMatrix> {
    let w = build_fourier(n)?;
    let clock = build_clock(n)?;
    Ok(&(&w * &clock) * &w.adjoint())
}
