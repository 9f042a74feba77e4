//! Dense complex linear algebra: operators, states, and the matrix exponential.
//!
//! Tensor products use the ordering `|a>⊗|b> ↦ a * dim(b) + b` throughout.

mod expm;
mod matrix;
mod state;

pub use expm::mat_exp;
pub use matrix::{adjoint, is_unitary, matmul, tensor_op, ComplexMatrix};
pub(crate) use state::norm_sqr;
pub use state::{
    basis_state, fidelity, mod_add, tensor_state, PureState, QuditDim, EVOLUTION_NORM_TOL, NORM_TOL,
};
