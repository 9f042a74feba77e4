use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Deviation of Σ|αᵢ|² from 1 accepted by [`PureState::new`].
pub const NORM_TOL: f64 = 1e-12;

/// Deviation accepted after applying an operator that should be unitary.
pub const EVOLUTION_NORM_TOL: f64 = 1e-10;

/// Normalized amplitude vector over a computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, NORM_TOL)
    }

    pub(crate) fn with_tolerance(amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Invalid(
                "state must have at least one amplitude".into(),
            ));
        }
        if amplitudes.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sqr = norm_sqr(&amplitudes);
        if (norm_sqr - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm. Fails on the zero vector.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// Applies a (nominally unitary) operator. The resulting norm must stay
    /// within [`EVOLUTION_NORM_TOL`] of 1.
    pub fn apply(&self, op: &ComplexMatrix) -> Result<Self> {
        let out = op.matvec(&self.amplitudes)?;
        Self::with_tolerance(out, EVOLUTION_NORM_TOL)
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        Self { amplitudes }
    }

    /// Euclidean distance to another state of the same dimension.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

pub(crate) fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Qudit level count `d >= 2` with ζ = exp(2πi/d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuditDim(usize);

impl QuditDim {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidQuditDim(d));
        }
        Ok(Self(d))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn zeta(self) -> C64 {
        self.zeta_pow(1)
    }

    /// ζ^k evaluated directly as exp(2πik/d) rather than by repeated products.
    /// Quarter turns are returned exactly.
    pub fn zeta_pow(self, k: usize) -> C64 {
        let (k, d) = (k % self.0, self.0);
        if (4 * k) % d == 0 {
            return [
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, -1.0),
            ][4 * k / d];
        }
        C64::from_polar(1.0, TAU * k as f64 / d as f64)
    }

    /// Operator dimension of a two-qudit register.
    pub fn pair_dim(self) -> usize {
        self.0 * self.0
    }
}

/// `(a + b) mod d` over basis labels.
pub fn mod_add(a: usize, b: usize, d: QuditDim) -> Result<usize> {
    let n = d.get();
    for x in [a, b] {
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, dim: n });
        }
    }
    Ok((a + b) % n)
}

pub fn basis_state(j: usize, dim: usize) -> Result<PureState> {
    if j >= dim {
        return Err(Error::IndexOutOfRange { index: j, dim });
    }
    let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
    amplitudes[j] = C64::new(1.0, 0.0);
    Ok(PureState { amplitudes })
}

pub fn tensor_state(x: &PureState, y: &PureState) -> PureState {
    x.tensor(y)
}

/// |⟨x|y⟩|²
pub fn fidelity(x: &PureState, y: &PureState) -> Result<f64> {
    Ok(x.inner(y)?.norm_sqr().min(1.0))
}
