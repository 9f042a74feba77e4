use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use super::{annihilation, FockCutoff, Mode, ModeOperator};
use crate::error::{Error, Result};
use crate::linalg::{mat_exp, ComplexMatrix};

/// Complex beamsplitter parameter t = |t| e^{iθ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamsplitterParam {
    t: C64,
}

impl BeamsplitterParam {
    pub fn new(t: C64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { t })
    }

    pub fn from_polar(modulus: f64, phase: f64) -> Result<Self> {
        if !modulus.is_finite() || !phase.is_finite() {
            return Err(Error::NonFinite);
        }
        Self::new(C64::from_polar(modulus, phase))
    }

    pub fn t(self) -> C64 {
        self.t
    }

    pub fn modulus(self) -> f64 {
        self.t.norm()
    }

    /// θ ∈ (−π, π]
    pub fn phase(self) -> f64 {
        let arg = self.t.arg();
        if arg <= -PI {
            PI
        } else {
            arg
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Su2Generators {
    pub j_plus: ModeOperator,
    pub j_minus: ModeOperator,
    pub j3: ModeOperator,
}

/// J₊ = a₁†a₂, J₋ = a₂†a₁, J₃ = (a₁†a₁ − a₂†a₂)/2 on the two-mode space.
pub fn schwinger_su2(cutoff: FockCutoff) -> Su2Generators {
    let a = annihilation(cutoff);
    let a1 = a.on_mode(Mode::First).expect("single-mode").into_matrix();
    let a2 = a.on_mode(Mode::Second).expect("single-mode").into_matrix();
    let (a1d, a2d) = (a1.adjoint(), a2.adjoint());
    let j_plus = &a1d * &a2;
    let j_minus = &a2d * &a1;
    let j3 = (&(&a1d * &a1) - &(&a2d * &a2)).scale(C64::new(0.5, 0.0));
    let wrap = |matrix, label: &str| ModeOperator {
        cutoff,
        matrix,
        label: label.into(),
    };
    Su2Generators {
        j_plus: wrap(j_plus, "J+"),
        j_minus: wrap(j_minus, "J-"),
        j3: wrap(j3, "J3"),
    }
}

/// U_J(t) = exp(t a₁†a₂ − t̄ a₂†a₁) by dense exponentiation on the full two-mode space.
pub fn beamsplitter(t: BeamsplitterParam, cutoff: FockCutoff) -> Result<ModeOperator> {
    let j = schwinger_su2(cutoff);
    let gen = &j.j_plus.matrix.scale(t.t()) - &j.j_minus.matrix.scale(t.t().conj());
    ModeOperator::new(cutoff, mat_exp(&gen)?, "UJ")
}

/// Two-mode indices with n₁ + n₂ = `total`, ordered by decreasing n₁
/// (decreasing J₃ eigenvalue, the usual |j, m⟩ order with m = j first).
pub fn number_block(total: usize, cutoff: FockCutoff) -> Vec<usize> {
    let n_max = cutoff.n_max();
    let lo = total.saturating_sub(n_max);
    let hi = total.min(n_max);
    (lo..=hi)
        .rev()
        .map(|n1| cutoff.pair_index(n1, total - n1))
        .collect()
}

/// U_J(t) assembled block by block over total photon number.
///
/// Block `T` is the spin-T/2 representation in the basis |j, m⟩ with
/// j = T/2 and m = n₁ − j, using J₊|j,m⟩ = √((j−m)(j+m+1)) |j,m+1⟩.
/// Blocks with T ≤ n_max are complete; above that only states with both
/// occupations ≤ n_max exist, and the generator is restricted to them.
pub fn beamsplitter_blockwise(t: BeamsplitterParam, cutoff: FockCutoff) -> Result<ModeOperator> {
    let n_max = cutoff.n_max();
    let mut full = ComplexMatrix::zeros(cutoff.two_mode_dim());
    for total in 0..=2 * n_max {
        let indices = number_block(total, cutoff);
        let j = total as f64 / 2.0;
        let m_of = |k: usize| cutoff.pair_of(indices[k]).0 as f64 - j;
        let size = indices.len();
        let gen = ComplexMatrix::from_fn(size, |row, col| {
            let m = m_of(col);
            // row k holds n₁ one larger than row k+1
            if row + 1 == col {
                t.t() * ((j - m) * (j + m + 1.0)).sqrt()
            } else if row == col + 1 {
                -t.t().conj() * ((j + m) * (j - m + 1.0)).sqrt()
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let block = mat_exp(&gen)?;
        for (r, &gi) in indices.iter().enumerate() {
            for (c, &gj) in indices.iter().enumerate() {
                full[(gi, gj)] = block[(r, c)];
            }
        }
    }
    ModeOperator::new(cutoff, full, "UJ-blockwise")
}

/// V_j(θ) = exp(iθ N_j) on the two-mode space.
pub fn phase_op(theta: f64, mode: Mode, cutoff: FockCutoff) -> Result<ModeOperator> {
    if !theta.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = super::number(cutoff).on_mode(mode)?;
    let gen = n.matrix().scale(C64::new(0.0, theta));
    let label = match mode {
        Mode::First => "V1",
        Mode::Second => "V2",
    };
    ModeOperator::new(cutoff, mat_exp(&gen)?, label)
}

/// The fixed exchange unitary E = [V₁(−θ) V₂(θ+π)] · U_J(π/2 · e^{iθ}).
///
/// At |t| = π/2 the beamsplitter sends |z₁⟩⊗|z₂⟩ to |e^{iθ}z₂⟩⊗|−e^{−iθ}z₁⟩;
/// the two phase operators strip the leftover phases.
pub fn exchange_protocol(theta: f64, cutoff: FockCutoff) -> Result<ModeOperator> {
    let t = BeamsplitterParam::from_polar(FRAC_PI_2, theta)?;
    let uj = beamsplitter(t, cutoff)?;
    let v1 = phase_op(-theta, Mode::First, cutoff)?;
    let v2 = phase_op(theta + PI, Mode::Second, cutoff)?;
    let e = &(v1.matrix() * v2.matrix()) * uj.matrix();
    ModeOperator::new(cutoff, e, "E")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_state;
    use crate::linalg::{basis_state, fidelity};

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn param_phase_range() {
        let p = BeamsplitterParam::new(C64::new(-1.0, -0.0)).unwrap();
        assert_eq!(p.phase(), PI);
        let q = BeamsplitterParam::from_polar(0.3, -1.0).unwrap();
        assert!((q.modulus() - 0.3).abs() < 1e-16 && (q.phase() + 1.0).abs() < 1e-15);
        assert!(BeamsplitterParam::new(C64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn su2_relations() {
        let c = cut(6);
        let j = schwinger_su2(c);
        let sub = c.total_number_at_most(6);
        let (jp, jm, j3) = (j.j_plus.matrix(), j.j_minus.matrix(), j.j3.matrix());
        assert!(j3.commutator(jp).max_norm_diff_on(jp, &sub) < 1e-12);
        assert!(
            j3.commutator(jm)
                .max_norm_diff_on(&jm.scale(C64::new(-1.0, 0.0)), &sub)
                < 1e-12
        );
        assert!(
            jp.commutator(jm)
                .max_norm_diff_on(&j3.scale(C64::new(2.0, 0.0)), &sub)
                < 1e-12
        );

        let out = jp
            .matvec(
                basis_state(c.pair_index(0, 1), c.two_mode_dim())
                    .unwrap()
                    .amplitudes(),
            )
            .unwrap();
        assert_eq!(
            out,
            basis_state(c.pair_index(1, 0), c.two_mode_dim())
                .unwrap()
                .into_amplitudes()
        );
    }

    #[test]
    fn vacuum_is_invariant() {
        let c = cut(5);
        let vac = basis_state(0, c.two_mode_dim()).unwrap();
        let u = beamsplitter(BeamsplitterParam::new(C64::new(0.8, -1.3)).unwrap(), c).unwrap();
        assert!(u.apply(&vac).unwrap().distance(&vac).unwrap() < 1e-12);
    }

    #[test]
    fn single_photon_block_rotation() {
        let c = cut(3);
        let x = 0.7;
        let u =
            beamsplitter_blockwise(BeamsplitterParam::new(C64::new(x, 0.0)).unwrap(), c).unwrap();
        let idx = number_block(1, c);
        assert_eq!(idx, vec![c.pair_index(1, 0), c.pair_index(0, 1)]);
        let block = ComplexMatrix::from_fn(2, |r, col| u.matrix()[(idx[r], idx[col])]);
        let expected =
            ComplexMatrix::from_real_rows(&[&[x.cos(), x.sin()], &[-x.sin(), x.cos()]]).unwrap();
        assert!(block.max_norm_diff(&expected) < 1e-14);
        assert_eq!(u.matrix()[(0, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn dense_and_blockwise_agree() {
        let c = cut(6);
        for t in [
            C64::new(0.3, 0.4),
            C64::new(-1.2, 0.9),
            C64::new(FRAC_PI_2, 0.0),
        ] {
            let t = BeamsplitterParam::new(t).unwrap();
            let dense = beamsplitter(t, c).unwrap();
            let blocks = beamsplitter_blockwise(t, c).unwrap();
            assert!(dense.matrix().max_norm_diff(blocks.matrix()) < 1e-12);
        }
    }

    #[test]
    fn phase_operator_examples() {
        let c = cut(4);
        let id = ComplexMatrix::identity(c.two_mode_dim());
        assert_eq!(phase_op(0.0, Mode::First, c).unwrap().into_matrix(), id);
        assert!(
            phase_op(2.0 * PI, Mode::Second, c)
                .unwrap()
                .matrix()
                .max_norm_diff(&id)
                < 1e-12
        );

        let c = cut(24);
        let alpha = C64::new(0.8, 0.2);
        let theta = 1.1;
        let y = coherent_state(C64::new(-0.5, 0.0), c).unwrap().state;
        let input = coherent_state(alpha, c).unwrap().state.tensor(&y);
        let out = phase_op(theta, Mode::First, c)
            .unwrap()
            .apply(&input)
            .unwrap();
        let target = coherent_state(C64::from_polar(1.0, theta) * alpha, c)
            .unwrap()
            .state
            .tensor(&y);
        assert!(1.0 - fidelity(&out, &target).unwrap() < 1e-12);
    }

    #[test]
    fn exchange_swaps_basis_exactly_below_cutoff() {
        let c = cut(6);
        let e = exchange_protocol(0.4, c).unwrap();
        for n1 in 0..=6 {
            for n2 in 0..=(6 - n1) {
                let input = basis_state(c.pair_index(n1, n2), c.two_mode_dim()).unwrap();
                let target = basis_state(c.pair_index(n2, n1), c.two_mode_dim()).unwrap();
                let out = e.apply(&input).unwrap();
                assert!(out.distance(&target).unwrap() < 1e-12, "({n1}, {n2})");
            }
        }
    }
}
