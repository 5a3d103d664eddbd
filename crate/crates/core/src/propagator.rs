//! Time evolution under `i dψ/dt = H(t) ψ`.
//!
//! Each step applies the exact exponential of the Hamiltonian at the step
//! midpoint, `ψ ← exp(-i·dt·H(t + dt/2)) ψ`, which is the second-order Magnus
//! integrator. The exponential is formed from a cyclic Jacobi
//! eigendecomposition, so every step is unitary to eigensolver precision.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{DrivenHamiltonian, SystemSpec};
use crate::matrix::ComplexMatrix;

const HERMITIAN_TOL: f64 = 1e-10;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;
const NORM_TOL: f64 = 1e-9;
const MAX_STEPS: f64 = 1e8;

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The basis state `e_k` of an n-level system.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidConfig(format!("basis index {k} out of range for n = {n}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidConfig("initial amplitudes must be finite".into()));
        }
        let norm = l2_norm(&amplitudes);
        if norm == 0.0 {
            return Err(Error::ZeroInitialState);
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// `|ψ_k|²` for each level.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Largest amplitude difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues in ascending order with the matching orthonormal
/// eigenvectors as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Cyclic Jacobi eigendecomposition of a hermitian matrix.
///
/// The input is symmetrized as `(H + H†)/2` after checking that its
/// anti-hermitian part is below 1e-10. Sweeps stop once the off-diagonal
/// Frobenius norm is below `1e-13·max(1, ‖H‖_F)`.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let residual = h.hermitian_residual();
    if residual.is_nan() || residual > HERMITIAN_TOL {
        return Err(Error::NonHermitian { residual });
    }
    let n = h.dim();
    let mut a = ComplexMatrix::from_fn(n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off < threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their diagonal position
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                sum += a[(r, c)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation `A ← G†AG`, `V ← VG` annihilating `A[p][q]`.
///
/// With `A[p][q] = r·e^{iφ}`, `G` is the identity except
/// `G_pp = G_qq = c`, `G_pq = s·e^{iφ}`, `G_qp = -s·e^{-iφ}`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
        sign / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = a.dim();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - phase.conj() * akq * s;
        a[(k, q)] = phase * akp * s + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - phase * aqk * s;
        a[(q, k)] = phase.conj() * apk * s + aqk * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - phase.conj() * vkq * s;
        v[(k, q)] = phase * vkp * s + vkq * c;
    }
}

/// `exp(-i·dt·H) ψ` via the eigendecomposition of `H`.
pub fn exp_step(h_mid: &ComplexMatrix, dt: f64, psi: &StateVector) -> Result<StateVector> {
    if h_mid.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { left: h_mid.dim(), right: psi.dim() });
    }
    let eig = hermitian_eig(h_mid)?;
    let vectors_adj = eig.vectors.adjoint();
    let mut coeffs = vectors_adj.apply(&psi.amplitudes)?;
    for (z, &lambda) in coeffs.iter_mut().zip(&eig.values) {
        *z *= Complex64::from_polar(1.0, -lambda * dt);
    }
    Ok(StateVector { amplitudes: eig.vectors.apply(&coeffs)? })
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    /// Start in basis state `e_k`.
    Basis(usize),
    /// Explicit amplitudes; normalized on intake.
    Amplitudes(Vec<Complex64>),
}

impl InitialState {
    pub fn to_state(&self, n: usize) -> Result<StateVector> {
        match self {
            InitialState::Basis(k) => StateVector::basis(n, *k),
            InitialState::Amplitudes(amps) => {
                if amps.len() != n {
                    return Err(Error::InvalidConfig(format!(
                        "initial state has {} amplitudes, expected {n}",
                        amps.len()
                    )));
                }
                StateVector::from_amplitudes(amps.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Record every k-th step; the last step is always recorded.
    pub sample_every: usize,
    pub initial_state: InitialState,
}

impl EvolutionConfig {
    pub fn new(t_end: f64, dt: f64, initial_state: InitialState) -> Self {
        Self { t_start: 0.0, t_end, dt, sample_every: 1, initial_state }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(Error::InvalidConfig("t_start and t_end must be finite".into()));
        }
        if self.t_end <= self.t_start {
            return Err(Error::InvalidConfig(format!(
                "t_end ({}) must exceed t_start ({})",
                self.t_end, self.t_start
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidConfig("sample_every must be at least 1".into()));
        }
        if (self.t_end - self.t_start) / self.dt > MAX_STEPS {
            return Err(Error::InvalidConfig(format!(
                "{} steps requested, limit is 1e8",
                (self.t_end - self.t_start) / self.dt
            )));
        }
        Ok(())
    }

    /// Number of steps; the last one is shortened so the run ends on `t_end`.
    pub fn step_count(&self) -> usize {
        let ratio = (self.t_end - self.t_start) / self.dt;
        let nearest = ratio.round();
        if nearest >= 1.0 && (ratio - nearest).abs() <= 1e-9 * nearest {
            nearest as usize
        } else {
            ratio.ceil() as usize
        }
    }

    fn time_at(&self, m: usize, steps: usize) -> f64 {
        if m == steps {
            self.t_end
        } else {
            self.t_start + m as f64 * self.dt
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `populations[i][k] = |ψ_k(times[i])|²`.
    pub populations: Vec<Vec<f64>>,
    /// `|‖ψ‖ - 1|` at each sample.
    pub norm_errors: Vec<f64>,
    pub final_state: StateVector,
}

impl Trajectory {
    fn record(&mut self, t: f64, psi: &StateVector) {
        self.times.push(t);
        self.populations.push(psi.populations());
        self.norm_errors.push((psi.norm() - 1.0).abs());
    }
}

/// Integrates the system Hamiltonian from `t_start` to `t_end` with
/// midpoint-exponential steps, sampling the populations along the way.
pub fn evolve(spec: &SystemSpec, config: &EvolutionConfig) -> Result<Trajectory> {
    spec.validate()?;
    config.validate()?;
    let hamiltonian = DrivenHamiltonian::new(spec)?;
    let mut psi = config.initial_state.to_state(spec.n)?;
    let steps = config.step_count();

    let mut traj = Trajectory {
        times: Vec::new(),
        populations: Vec::new(),
        norm_errors: Vec::new(),
        final_state: psi.clone(),
    };
    traj.record(config.t_start, &psi);

    for m in 0..steps {
        let t0 = config.time_at(m, steps);
        let t1 = config.time_at(m + 1, steps);
        let dt = t1 - t0;
        let h_mid = hamiltonian.at(t0 + 0.5 * dt);
        psi = exp_step(&h_mid, dt, &psi)
            .map_err(|e| Error::AtTime { t: t0, source: Box::new(e) })?;
        let drift = (psi.norm() - 1.0).abs();
        if drift > NORM_TOL {
            return Err(Error::NormDrift { t: t1, drift });
        }
        if (m + 1) % config.sample_every == 0 || m + 1 == steps {
            traj.record(t1, &psi);
        }
    }
    traj.final_state = psi;
    Ok(traj)
}
