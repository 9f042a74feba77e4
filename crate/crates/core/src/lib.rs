//! Qudit exchange gates from controlled shifts, and a truncated two-mode
//! Fock-space simulator for beamsplitter-based exchange and "imperfect clone"
//! maps of bosonic states.
//!
//! - [`linalg`]: dense complex matrices, pure states, matrix exponential.
//! - [`gates`]: clock/shift operators, reverse gate, controlled shifts, and
//!   the exchange gate built directly and from its six-gate decomposition.
//! - [`fock`]: ladder operators, coherent and squeezed states, Schwinger
//!   su(2) beamsplitter, phase operators, exchange and clone protocols.
//! - [`verify`]: the verification suites behind `quswap verify`.
//! - [`wire`]: JSON/CSV formats and argument parsing shared by the CLI and FFI.

pub mod cli;
pub mod error;
pub mod fock;
pub mod gates;
pub mod linalg;
pub mod random;
pub mod verify;
pub mod wire;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
