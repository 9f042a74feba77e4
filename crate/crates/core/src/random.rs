//! Seeded random inputs for verification sweeps.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ComplexMatrix, PureState};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_in_disk<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(
        r,
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

fn complex_in_square<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn matrix<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_in_square(rng))
}

/// Random anti-Hermitian matrix rescaled to max-norm `norm`.
pub fn antihermitian<R: Rng>(rng: &mut R, dim: usize, norm: f64) -> ComplexMatrix {
    let m = matrix(rng, dim);
    let ah = &m - &m.adjoint();
    let scale = norm / ah.max_norm().max(f64::MIN_POSITIVE);
    ah.scale(C64::new(scale, 0.0))
}

/// Random unitary from Gram-Schmidt orthonormalization of a random matrix's columns.
pub fn unitary<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    loop {
        let m = matrix(rng, dim);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
        let mut degenerate = false;
        for j in 0..dim {
            let mut v: Vec<C64> = (0..dim).map(|i| m[(i, j)]).collect();
            // two passes keep the basis orthogonal to working precision
            for _ in 0..2 {
                for q in &cols {
                    let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(q) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                degenerate = true;
                break;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
        if !degenerate {
            return ComplexMatrix::from_fn(dim, |i, j| cols[j][i]);
        }
    }
}

/// Random normalized state whose amplitudes vanish beyond index `support`.
pub fn state_supported_on<R: Rng>(rng: &mut R, dim: usize, support: usize) -> PureState {
    let amps: Vec<C64> = (0..dim)
        .map(|k| {
            if k <= support {
                complex_in_square(rng)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    PureState::normalized(amps).expect("random state has nonzero norm")
}
