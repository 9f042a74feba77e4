//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Degree selection and the θ thresholds follow Higham, "The Scaling and
//! Squaring Method for the Matrix Exponential Revisited" (2005): the lowest
//! degree m ∈ {3, 5, 7, 9, 13} with ‖A‖₁ ≤ θ_m is used directly, otherwise
//! A is scaled by 2⁻ˢ so that ‖A/2ˢ‖₁ ≤ θ₁₃ and the result squared s times.

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120., 60., 12., 1.];
const B5: [f64; 6] = [30240., 15120., 3360., 420., 30., 1.];
const B7: [f64; 8] = [
    17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.,
];
const B9: [f64; 10] = [
    17643225600.,
    8821612800.,
    2075673600.,
    302702400.,
    30270240.,
    2162160.,
    110880.,
    3960.,
    90.,
    1.,
];
const B13: [f64; 14] = [
    64764752532480000.,
    32382376266240000.,
    7771770303897600.,
    1187353796428800.,
    129060195264000.,
    10559470521600.,
    670442572800.,
    33522128640.,
    1323241920.,
    40840800.,
    960960.,
    16380.,
    182.,
    1.,
];

pub fn mat_exp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = a.one_norm();
    for (m, theta) in THETA {
        if norm <= theta {
            return pade_low(a, m);
        }
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a.scale(C64::new(2f64.powi(-s), 0.0));
    let mut result = pade13(&scaled)?;
    for _ in 0..s {
        result = &result * &result;
    }
    if !result.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(result)
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn axpy_identity(dim: usize, coeff: f64, terms: &[(f64, &ComplexMatrix)]) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(dim).scale(real(coeff));
    for &(c, m) in terms {
        out = &out + &m.scale(real(c));
    }
    out
}

fn pade_low(a: &ComplexMatrix, m: usize) -> Result<ComplexMatrix> {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        _ => unreachable!("unsupported Padé degree {m}"),
    };
    let n = a.dim();
    let a2 = a * a;
    // even powers A², A⁴, ..., A^{m-1}
    let mut powers = vec![a2.clone()];
    while powers.len() < (m - 1) / 2 {
        let next = powers.last().map(|p| p * &a2).expect("nonempty");
        powers.push(next);
    }
    let odd_terms: Vec<(f64, &ComplexMatrix)> = powers
        .iter()
        .enumerate()
        .map(|(k, p)| (b[2 * k + 3], p))
        .collect();
    let even_terms: Vec<(f64, &ComplexMatrix)> = powers
        .iter()
        .enumerate()
        .map(|(k, p)| (b[2 * k + 2], p))
        .collect();
    let u = a * &axpy_identity(n, b[1], &odd_terms);
    let v = axpy_identity(n, b[0], &even_terms);
    pade_solve(&u, &v)
}

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * &axpy_identity(n, 0.0, &[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let u = a * &(&inner_u + &axpy_identity(n, b[1], &[(b[7], &a6), (b[5], &a4), (b[3], &a2)]));
    let inner_v = &a6 * &axpy_identity(n, 0.0, &[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let v = &inner_v + &axpy_identity(n, b[0], &[(b[6], &a6), (b[4], &a4), (b[2], &a2)]);
    pade_solve(&u, &v)
}

/// r_m(A) = (V - U)⁻¹ (V + U)
fn pade_solve(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    (v - u).solve(&(v + u))
}
