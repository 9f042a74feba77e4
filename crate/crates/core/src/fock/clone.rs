use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::{
    beamsplitter, phase_op, BeamsplitterParam, FockCutoff, Mode, ModeOperator, TruncatedState,
};
use crate::error::{Error, Result};
use crate::linalg::{basis_state, norm_sqr, ComplexMatrix, PureState};

/// V₂(θ+π) · U_J(t): sends a₁† to cos|t| a₁† + sin|t| a₂†, so that
/// |z⟩⊗|0⟩ ↦ |cos|t| z⟩⊗|sin|t| z⟩ with a positive second-mode coefficient.
pub fn clone_operator(t: BeamsplitterParam, cutoff: FockCutoff) -> Result<ModeOperator> {
    let uj = beamsplitter(t, cutoff)?;
    let v2 = phase_op(t.phase() + PI, Mode::Second, cutoff)?;
    ModeOperator::new(cutoff, v2.matrix() * uj.matrix(), "clone")
}

/// Applies [`clone_operator`] to `x ⊗ |0⟩`.
///
/// The reported `leaked_weight` is the weight of `x` on n > n_max/2, the
/// region outside the documented adequacy bound.
pub fn imperfect_clone_numeric(
    x: &PureState,
    t: BeamsplitterParam,
    cutoff: FockCutoff,
) -> Result<TruncatedState> {
    if x.dim() != cutoff.single_dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: cutoff.single_dim(),
        });
    }
    let leaked_weight = norm_sqr(&x.amplitudes()[cutoff.n_max() / 2 + 1..]);
    let input = x.tensor(&basis_state(0, cutoff.single_dim())?);
    let state = clone_operator(t, cutoff)?.apply(&input)?;
    Ok(TruncatedState {
        state,
        leaked_weight,
    })
}

/// √C(k, m) evaluated as a running product.
fn sqrt_binomial(k: usize, m: usize) -> f64 {
    (1..=m)
        .map(|i| (k - m + i) as f64 / i as f64)
        .product::<f64>()
        .sqrt()
}

/// Output amplitudes c_{n,m} = √((n+m)!/(n! m!)) cosⁿ|t| sinᵐ|t| x_{n+m}.
pub fn imperfect_clone_closed_form(
    x_coeffs: &[C64],
    t: BeamsplitterParam,
    cutoff: FockCutoff,
) -> Result<PureState> {
    if x_coeffs.len() > cutoff.single_dim() {
        return Err(Error::DimensionMismatch {
            left: x_coeffs.len(),
            right: cutoff.single_dim(),
        });
    }
    let norm = norm_sqr(x_coeffs);
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm_sqr: norm });
    }
    let (cos, sin) = (t.modulus().cos(), t.modulus().sin());
    let mut amps = vec![C64::new(0.0, 0.0); cutoff.two_mode_dim()];
    for (k, &xk) in x_coeffs.iter().enumerate() {
        for m in 0..=k {
            let n = k - m;
            let coeff = sqrt_binomial(k, m) * cos.powi(n as i32) * sin.powi(m as i32);
            amps[cutoff.pair_index(n, m)] = xk * coeff;
        }
    }
    PureState::with_tolerance(amps, 1e-10)
}

/// ρ₂ = Tr₁ |ψ⟩⟨ψ| for a two-mode state.
pub fn reduced_second_mode(state: &PureState, cutoff: FockCutoff) -> Result<ComplexMatrix> {
    if state.dim() != cutoff.two_mode_dim() {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: cutoff.two_mode_dim(),
        });
    }
    let d = cutoff.single_dim();
    let psi = state.amplitudes();
    Ok(ComplexMatrix::from_fn(d, |m, mp| {
        (0..d)
            .map(|n| psi[n * d + m] * psi[n * d + mp].conj())
            .sum()
    }))
}

/// ρ₁ = Tr₂ |ψ⟩⟨ψ| for a two-mode state.
pub fn reduced_first_mode(state: &PureState, cutoff: FockCutoff) -> Result<ComplexMatrix> {
    if state.dim() != cutoff.two_mode_dim() {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: cutoff.two_mode_dim(),
        });
    }
    let d = cutoff.single_dim();
    let psi = state.amplitudes();
    Ok(ComplexMatrix::from_fn(d, |n, np| {
        (0..d)
            .map(|m| psi[n * d + m] * psi[np * d + m].conj())
            .sum()
    }))
}

/// ⟨φ|ρ|φ⟩
pub fn expectation(rho: &ComplexMatrix, phi: &PureState) -> Result<f64> {
    let v = rho.matvec(phi.amplitudes())?;
    Ok(phi
        .amplitudes()
        .iter()
        .zip(&v)
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .re)
}
