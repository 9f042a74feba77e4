//! Truncated single- and two-mode Fock spaces.
//!
//! A cutoff `n_max` keeps the number states |0⟩ … |n_max⟩ of each mode. The
//! two-mode basis |n₁⟩⊗|n₂⟩ sits at index `n₁ * (n_max + 1) + n₂`. Identities
//! of the untruncated oscillator that break at the cutoff boundary are checked
//! on the subspaces returned by [`FockCutoff::interior`] and
//! [`FockCutoff::total_number_at_most`].

mod beamsplitter;
mod clone;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{mat_exp, norm_sqr, ComplexMatrix, PureState};

pub use beamsplitter::{
    beamsplitter, beamsplitter_blockwise, exchange_protocol, number_block, phase_op, schwinger_su2,
    BeamsplitterParam, Su2Generators,
};
pub use clone::{
    clone_operator, expectation, imperfect_clone_closed_form, imperfect_clone_numeric,
    reduced_first_mode, reduced_second_mode,
};

/// Truncation weight above which a state is flagged as inadequately resolved.
pub const LEAK_WARN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockCutoff(usize);

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidCutoff(n_max));
        }
        Ok(Self(n_max))
    }

    pub fn n_max(self) -> usize {
        self.0
    }

    pub fn single_dim(self) -> usize {
        self.0 + 1
    }

    pub fn two_mode_dim(self) -> usize {
        self.single_dim() * self.single_dim()
    }

    pub fn pair_index(self, n1: usize, n2: usize) -> usize {
        n1 * self.single_dim() + n2
    }

    pub fn pair_of(self, index: usize) -> (usize, usize) {
        (index / self.single_dim(), index % self.single_dim())
    }

    /// Single-mode indices 0..=max.
    pub fn interior(self, max: usize) -> Vec<usize> {
        (0..=max.min(self.0)).collect()
    }

    /// Two-mode indices with n₁ + n₂ ≤ `max_total`.
    pub fn total_number_at_most(self, max_total: usize) -> Vec<usize> {
        (0..self.two_mode_dim())
            .filter(|&i| {
                let (n1, n2) = self.pair_of(i);
                n1 + n2 <= max_total
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    First,
    Second,
}

impl Mode {
    pub fn from_number(j: u8) -> Result<Self> {
        match j {
            1 => Ok(Mode::First),
            2 => Ok(Mode::Second),
            _ => Err(Error::Invalid(format!("mode must be 1 or 2, got {j}"))),
        }
    }
}

/// An operator on a truncated single-mode or two-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    cutoff: FockCutoff,
    matrix: ComplexMatrix,
    label: String,
}

impl ModeOperator {
    pub fn new(
        cutoff: FockCutoff,
        matrix: ComplexMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        let dim = matrix.dim();
        if dim != cutoff.single_dim() && dim != cutoff.two_mode_dim() {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: cutoff.single_dim(),
            });
        }
        Ok(Self {
            cutoff,
            matrix,
            label: label.into(),
        })
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_two_mode(&self) -> bool {
        self.matrix.dim() == self.cutoff.two_mode_dim()
    }

    /// Lifts a single-mode operator to `op ⊗ 1` or `1 ⊗ op`.
    pub fn on_mode(&self, mode: Mode) -> Result<Self> {
        if self.is_two_mode() {
            return Err(Error::Invalid(format!(
                "{} is already a two-mode operator",
                self.label
            )));
        }
        let id = ComplexMatrix::identity(self.cutoff.single_dim());
        let (matrix, suffix) = match mode {
            Mode::First => (self.matrix.kron(&id), "1"),
            Mode::Second => (id.kron(&self.matrix), "2"),
        };
        Ok(Self {
            cutoff: self.cutoff,
            matrix,
            label: format!("{}{suffix}", self.label),
        })
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        state.apply(&self.matrix)
    }
}

/// A state obtained by cutting off an expansion at `n_max`, with the
/// probability mass that was dropped before renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    pub state: PureState,
    pub leaked_weight: f64,
}

impl TruncatedState {
    pub fn is_adequate(&self) -> bool {
        self.leaked_weight <= LEAK_WARN
    }
}

/// a|n⟩ = √n |n−1⟩
pub fn annihilation(cutoff: FockCutoff) -> ModeOperator {
    let dim = cutoff.single_dim();
    let m = ComplexMatrix::from_fn(dim, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    ModeOperator {
        cutoff,
        matrix: m,
        label: "a".into(),
    }
}

/// a†|n⟩ = √(n+1) |n+1⟩, with a†|n_max⟩ = 0.
pub fn creation(cutoff: FockCutoff) -> ModeOperator {
    let a = annihilation(cutoff);
    ModeOperator {
        cutoff,
        matrix: a.matrix.transpose(),
        label: "a+".into(),
    }
}

pub fn number(cutoff: FockCutoff) -> ModeOperator {
    let diag: Vec<C64> = (0..cutoff.single_dim())
        .map(|n| C64::new(n as f64, 0.0))
        .collect();
    ModeOperator {
        cutoff,
        matrix: ComplexMatrix::diagonal(&diag),
        label: "N".into(),
    }
}

/// Amplitudes e^{−|z|²/2} zⁿ/√n! for n ≤ n_max, not renormalized.
pub fn coherent_amplitudes(z: C64, cutoff: FockCutoff) -> Vec<C64> {
    let mut amps = Vec::with_capacity(cutoff.single_dim());
    let mut current = C64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(current);
    for n in 1..=cutoff.n_max() {
        current = current * z / (n as f64).sqrt();
        amps.push(current);
    }
    amps
}

/// Coherent state |z⟩ truncated at the cutoff and renormalized.
pub fn coherent_state(z: C64, cutoff: FockCutoff) -> Result<TruncatedState> {
    if !z.is_finite() {
        return Err(Error::NonFinite);
    }
    let amps = coherent_amplitudes(z, cutoff);
    let leaked_weight = (1.0 - norm_sqr(&amps)).max(0.0);
    Ok(TruncatedState {
        state: PureState::normalized(amps)?,
        leaked_weight,
    })
}

/// D(z) = exp(z a† − z̄ a)
pub fn displacement(z: C64, cutoff: FockCutoff) -> Result<ModeOperator> {
    let a = annihilation(cutoff).matrix;
    let gen = &a.transpose().scale(z) - &a.scale(z.conj());
    Ok(ModeOperator {
        cutoff,
        matrix: mat_exp(&gen)?,
        label: "D".into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Su11Generators {
    pub k_plus: ModeOperator,
    pub k_minus: ModeOperator,
    pub k3: ModeOperator,
}

/// K₊ = (a†)²/2, K₋ = a²/2, K₃ = (a†a + 1/2)/2.
pub fn su11_generators(cutoff: FockCutoff) -> Su11Generators {
    let a = annihilation(cutoff).matrix;
    let ad = a.transpose();
    let half = C64::new(0.5, 0.0);
    let k_plus = (&ad * &ad).scale(half);
    let k_minus = (&a * &a).scale(half);
    let k3 = (&(&ad * &a) + &ComplexMatrix::identity(cutoff.single_dim()).scale(half)).scale(half);
    Su11Generators {
        k_plus: ModeOperator {
            cutoff,
            matrix: k_plus,
            label: "K+".into(),
        },
        k_minus: ModeOperator {
            cutoff,
            matrix: k_minus,
            label: "K-".into(),
        },
        k3: ModeOperator {
            cutoff,
            matrix: k3,
            label: "K3".into(),
        },
    }
}

/// S(w) = exp(w K₊ − w̄ K₋)
pub fn squeeze(w: C64, cutoff: FockCutoff) -> Result<ModeOperator> {
    let k = su11_generators(cutoff);
    let gen = &k.k_plus.matrix.scale(w) - &k.k_minus.matrix.scale(w.conj());
    Ok(ModeOperator {
        cutoff,
        matrix: mat_exp(&gen)?,
        label: "S".into(),
    })
}

/// S(w) D(z) |0⟩
pub fn squeezed_coherent_state(w: C64, z: C64, cutoff: FockCutoff) -> Result<PureState> {
    let vacuum = crate::linalg::basis_state(0, cutoff.single_dim())?;
    let op = squeeze(w, cutoff)?.matrix() * displacement(z, cutoff)?.matrix();
    vacuum.apply(&op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_state, fidelity};

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::new(n).unwrap()
    }

    #[test]
    fn cutoff_validation() {
        assert_eq!(FockCutoff::new(0), Err(Error::InvalidCutoff(0)));
        let c = cut(3);
        assert_eq!((c.single_dim(), c.two_mode_dim()), (4, 16));
        assert_eq!(c.pair_of(c.pair_index(2, 3)), (2, 3));
        assert_eq!(c.total_number_at_most(1), vec![0, 1, 4]);
    }

    #[test]
    fn ladder_actions() {
        let c = cut(6);
        let vac = basis_state(0, 7).unwrap();
        let a = annihilation(c);
        assert!(a
            .matrix()
            .matvec(vac.amplitudes())
            .unwrap()
            .iter()
            .all(|z| z.norm() == 0.0));

        let ad = creation(c);
        let out = ad
            .matrix()
            .matvec(basis_state(3, 7).unwrap().amplitudes())
            .unwrap();
        let mut expected = vec![C64::new(0.0, 0.0); 7];
        expected[4] = C64::new(2.0, 0.0);
        assert_eq!(out, expected);

        let top = ad
            .matrix()
            .matvec(basis_state(6, 7).unwrap().amplitudes())
            .unwrap();
        assert!(top.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn number_is_exact_a_dagger_a() {
        let c = cut(9);
        let a = annihilation(c).into_matrix();
        assert_eq!(creation(c).matrix().adjoint(), a);
        let n = &a.transpose() * &a;
        assert!(n.max_norm_diff(number(c).matrix()) < 1e-14);
    }

    #[test]
    fn truncated_commutator_fails_only_at_boundary() {
        let c = cut(8);
        let a = annihilation(c).into_matrix();
        let comm = a.commutator(&a.transpose());
        let id = ComplexMatrix::identity(9);
        assert!(comm.max_norm_diff_on(&id, &c.interior(7)) < 1e-13);
        assert!((comm[(8, 8)] - C64::new(-8.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn creation_is_not_unitary() {
        assert!(!creation(cut(5)).matrix().is_unitary(1e-6));
    }

    #[test]
    fn coherent_state_examples() {
        let c = cut(20);
        let vac = coherent_state(C64::new(0.0, 0.0), c).unwrap();
        assert_eq!(vac.state, basis_state(0, 21).unwrap());
        assert_eq!(vac.leaked_weight, 0.0);

        let raw = coherent_amplitudes(C64::new(1.0, 0.0), c);
        assert!((raw[0].re - 0.6065306597126334).abs() < 1e-15);
    }

    #[test]
    fn coherent_state_leak_is_reported() {
        let small = coherent_state(C64::new(2.0, 0.0), cut(4)).unwrap();
        assert!(!small.is_adequate());
        // tail mass of Poisson(4) above 4
        let tail: f64 = 1.0
            - (0..=4)
                .map(|n| (-4f64).exp() * 4f64.powi(n) / (1..=n).map(f64::from).product::<f64>())
                .sum::<f64>();
        assert!((small.leaked_weight - tail).abs() < 1e-14);
    }

    #[test]
    fn coherent_state_matches_displaced_vacuum() {
        let c = cut(32);
        let vac = basis_state(0, 33).unwrap();
        for z in [C64::new(1.5, 0.0), C64::new(-0.3, 1.1), C64::new(0.9, -0.9)] {
            let via_exp = displacement(z, c).unwrap().apply(&vac).unwrap();
            let series = coherent_state(z, c).unwrap().state;
            assert!(via_exp.distance(&series).unwrap() < 1e-10, "z = {z}");
        }
    }

    #[test]
    fn displacement_examples() {
        let c = cut(16);
        assert!(
            displacement(C64::new(0.0, 0.0), c)
                .unwrap()
                .matrix()
                .max_norm_diff(&ComplexMatrix::identity(17))
                == 0.0
        );
        let z = C64::new(0.6, -0.4);
        let d = displacement(z, c).unwrap();
        assert!(d.matrix().is_unitary(1e-10));
        let prod = d.matrix() * displacement(-z, c).unwrap().matrix();
        assert!(prod.max_norm_diff(&ComplexMatrix::identity(17)) < 1e-9);
    }

    #[test]
    fn squeeze_examples() {
        let c = cut(24);
        assert_eq!(
            squeeze(C64::new(0.0, 0.0), c).unwrap().into_matrix(),
            ComplexMatrix::identity(25)
        );
        let vac = basis_state(0, 25).unwrap();
        let sq = squeeze(C64::new(0.4, 0.3), c).unwrap().apply(&vac).unwrap();
        for (n, amp) in sq.amplitudes().iter().enumerate() {
            if n % 2 == 1 {
                assert_eq!(amp.norm(), 0.0, "odd amplitude at n = {n}");
            }
        }
        let sc = squeezed_coherent_state(C64::new(0.3, 0.0), C64::new(0.5, 0.0), c).unwrap();
        let norm: f64 = sc.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-8);
    }

    #[test]
    fn su11_relations_on_interior() {
        let c = cut(16);
        let k = su11_generators(c);
        let interior = c.interior(14);
        let (kp, km, k3) = (k.k_plus.matrix(), k.k_minus.matrix(), k.k3.matrix());
        assert!(k3.commutator(kp).max_norm_diff_on(kp, &interior) < 1e-12);
        assert!(
            k3.commutator(km)
                .max_norm_diff_on(&km.scale(C64::new(-1.0, 0.0)), &interior)
                < 1e-12
        );
        assert!(
            kp.commutator(km)
                .max_norm_diff_on(&k3.scale(C64::new(-2.0, 0.0)), &interior)
                < 1e-12
        );
        assert!((k3[(0, 0)] - C64::new(0.25, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn coherent_overlap_is_gaussian() {
        let c = cut(40);
        let pts = [
            C64::new(1.5, 0.0),
            C64::new(-0.7, 0.8),
            C64::new(0.0, -1.2),
            C64::new(0.3, 0.3),
        ];
        for &z in &pts {
            for &w in &pts {
                let f = fidelity(
                    &coherent_state(z, c).unwrap().state,
                    &coherent_state(w, c).unwrap().state,
                )
                .unwrap();
                assert!((f - (-(z - w).norm_sqr()).exp()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn mode_lifting() {
        let c = cut(2);
        let a = annihilation(c);
        let a1 = a.on_mode(Mode::First).unwrap();
        let a2 = a.on_mode(Mode::Second).unwrap();
        assert_eq!(a1.matrix().dim(), 9);
        assert_eq!(a1.matrix().commutator(a2.matrix()), ComplexMatrix::zeros(9));
        assert!(a1.on_mode(Mode::First).is_err());
        assert!(Mode::from_number(3).is_err());
    }
}
