//! Qudit gates: clock and shift operators, the reverse gate K, controlled
//! shifts, and the exchange gate built two ways.
//!
//! Compositions are read right to left: in `a * b` the gate `b` acts first.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, QuditDim};

/// Unitarity tolerance for user-supplied gates.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Sigma1,
    Sigma3,
    Reverse,
    ControlledShift,
    ControlledShiftReversed,
    Swap,
    SwapComposed,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::Sigma1,
        GateKind::Sigma3,
        GateKind::Reverse,
        GateKind::ControlledShift,
        GateKind::ControlledShiftReversed,
        GateKind::Swap,
        GateKind::SwapComposed,
    ];

    /// CLI name of the gate.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Sigma1 => "sigma1",
            GateKind::Sigma3 => "sigma3",
            GateKind::Reverse => "k",
            GateKind::ControlledShift => "cshift",
            GateKind::ControlledShiftReversed => "cshift-rev",
            GateKind::Swap => "swap",
            GateKind::SwapComposed => "swap-composed",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether the gate's matrix is a 0/1 permutation matrix.
    pub fn is_permutation(self) -> bool {
        !matches!(self, GateKind::Sigma3)
    }

    pub fn build(self, d: QuditDim) -> QuditGate {
        match self {
            GateKind::Sigma1 => sigma1(d),
            GateKind::Sigma3 => sigma3(d),
            GateKind::Reverse => reverse_gate(d),
            GateKind::ControlledShift => controlled_shift(d),
            GateKind::ControlledShiftReversed => controlled_shift_reversed(d),
            GateKind::Swap => swap_direct(d),
            GateKind::SwapComposed => swap_composed(d),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuditGate {
    d: QuditDim,
    matrix: ComplexMatrix,
    label: String,
}

impl QuditGate {
    fn new(d: QuditDim, matrix: ComplexMatrix, label: impl Into<String>) -> Self {
        Self {
            d,
            matrix,
            label: label.into(),
        }
    }

    pub fn d(&self) -> QuditDim {
        self.d
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

    /// Image of the basis vector at `index` when the gate is a permutation.
    pub fn permuted_index(&self, index: usize) -> Option<usize> {
        let n = self.matrix.dim();
        if index >= n {
            return None;
        }
        let mut hit = None;
        for i in 0..n {
            let z = self.matrix[(i, index)];
            if z == C64::new(1.0, 0.0) && hit.is_none() {
                hit = Some(i);
            } else if z != C64::new(0.0, 0.0) {
                return None;
            }
        }
        hit
    }
}

/// Shift Σ₁|a⟩ = |a⊕1⟩.
pub fn sigma1(d: QuditDim) -> QuditGate {
    let n = d.get();
    QuditGate::new(d, ComplexMatrix::permutation(n, |a| (a + 1) % n), "sigma1")
}

/// Clock Σ₃|a⟩ = ζᵃ|a⟩.
pub fn sigma3(d: QuditDim) -> QuditGate {
    let diag: Vec<C64> = (0..d.get()).map(|a| d.zeta_pow(a)).collect();
    QuditGate::new(d, ComplexMatrix::diagonal(&diag), "sigma3")
}

/// K|0⟩ = |0⟩, K|a⟩ = |d−a⟩.
pub fn reverse_gate(d: QuditDim) -> QuditGate {
    let n = d.get();
    QuditGate::new(d, ComplexMatrix::permutation(n, |a| (n - a) % n), "k")
}

/// C_Σ: |a⟩⊗|b⟩ ↦ |a⟩⊗|a⊕b⟩.
pub fn controlled_shift(d: QuditDim) -> QuditGate {
    let n = d.get();
    let m = ComplexMatrix::permutation(n * n, |idx| {
        let (a, b) = (idx / n, idx % n);
        a * n + (a + b) % n
    });
    QuditGate::new(d, m, "cshift")
}

/// C̃_Σ: |a⟩⊗|b⟩ ↦ |a⊕b⟩⊗|b⟩.
pub fn controlled_shift_reversed(d: QuditDim) -> QuditGate {
    let n = d.get();
    let m = ComplexMatrix::permutation(n * n, |idx| {
        let (a, b) = (idx / n, idx % n);
        ((a + b) % n) * n + b
    });
    QuditGate::new(d, m, "cshift-rev")
}

/// S = Σ |a⟩⟨b| ⊗ |b⟩⟨a|.
pub fn swap_direct(d: QuditDim) -> QuditGate {
    let n = d.get();
    let m = ComplexMatrix::permutation(n * n, |idx| (idx % n) * n + idx / n);
    QuditGate::new(d, m, "swap")
}

/// The exchange gate assembled from controlled shifts and reverse gates:
/// C_Σ · (K⊗1) · C̃_Σ · (K⊗1) · C_Σ · (1⊗K), with 1⊗K applied first.
pub fn swap_composed(d: QuditDim) -> QuditGate {
    let id = ComplexMatrix::identity(d.get());
    let k = reverse_gate(d).into_matrix();
    let k_first = k.kron(&id);
    let k_second = id.kron(&k);
    let cs = controlled_shift(d).into_matrix();
    let csr = controlled_shift_reversed(d).into_matrix();

    let sequence = [&k_second, &cs, &k_first, &csr, &k_first, &cs];
    let m = sequence
        .iter()
        .fold(ComplexMatrix::identity(d.pair_dim()), |acc, &gate| {
            gate * &acc
        });
    QuditGate::new(d, m, "swap-composed")
}

fn check_single_qudit_unitary(u: &ComplexMatrix, d: QuditDim) -> Result<()> {
    if u.dim() != d.get() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: d.get(),
        });
    }
    let deviation = u.unitarity_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Ascending powers U⁰, U¹, ..., U^{d−1} by repeated multiplication.
fn powers(u: &ComplexMatrix, count: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(count);
    let mut acc = ComplexMatrix::identity(u.dim());
    for _ in 0..count {
        let next = &acc * u;
        out.push(acc);
        acc = next;
    }
    out
}

/// C_U: |a⟩⊗|b⟩ ↦ |a⟩⊗Uᵃ|b⟩, block diagonal with blocks U⁰ … U^{d−1}.
pub fn controlled_unitary(u: &ComplexMatrix, d: QuditDim) -> Result<QuditGate> {
    check_single_qudit_unitary(u, d)?;
    let n = d.get();
    let blocks = powers(u, n);
    let m = ComplexMatrix::from_fn(n * n, |row, col| {
        let (a, b) = (row / n, row % n);
        let (a2, b2) = (col / n, col % n);
        if a == a2 {
            blocks[a][(b, b2)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(QuditGate::new(d, m, "cu"))
}

/// C̃_U: |a⟩⊗|b⟩ ↦ Uᵇ|a⟩⊗|b⟩, built directly from the powers of U.
pub fn controlled_unitary_reversed(u: &ComplexMatrix, d: QuditDim) -> Result<QuditGate> {
    check_single_qudit_unitary(u, d)?;
    let n = d.get();
    let blocks = powers(u, n);
    let m = ComplexMatrix::from_fn(n * n, |row, col| {
        let (a, b) = (row / n, row % n);
        let (a2, b2) = (col / n, col % n);
        if b == b2 {
            blocks[b][(a, a2)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(QuditGate::new(d, m, "cu-rev"))
}

/// S · C_U · S, which acts as |a⟩⊗|b⟩ ↦ Uᵇ|a⟩⊗|b⟩.
pub fn conjugated_controlled_unitary(u: &ComplexMatrix, d: QuditDim) -> Result<QuditGate> {
    let cu = controlled_unitary(u, d)?;
    let s = swap_direct(d).into_matrix();
    let m = &(&s * cu.matrix()) * &s;
    debug_assert!(
        m.max_norm_diff(controlled_unitary_reversed(u, d)?.matrix()) <= UNITARY_TOL,
        "S C_U S disagrees with the reversed controlled unitary"
    );
    Ok(QuditGate::new(d, m, "s-cu-s"))
}

/// K computed by adding `a` to itself d−2 times under ⊕, as in its defining formula.
pub fn reverse_by_iteration(d: QuditDim) -> QuditGate {
    let n = d.get();
    let image = |a: usize| (0..n - 2).fold(a, |acc, _| (acc + a) % n);
    QuditGate::new(d, ComplexMatrix::permutation(n, image), "k-iter")
}
