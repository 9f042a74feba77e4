//! C ABI over `quswap-core`.
//!
//! Matrices and states cross the boundary as opaque heap handles that the
//! caller releases with [`qs_matrix_free`] / [`qs_state_free`]. Every fallible
//! call returns a [`QsStatus`]; on failure [`qs_last_error_message`] describes
//! the most recent error on the calling thread. Results are written through
//! out-pointers only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quswap_core::cli::{self, ReportFormat};
use quswap_core::fock::{self, BeamsplitterParam, FockCutoff};
use quswap_core::gates::{self, GateKind};
use quswap_core::linalg::{self, ComplexMatrix, PureState, QuditDim};
use quswap_core::verify::{SuiteKind, Tolerances};
use quswap_core::{Error, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotUnitary = 4,
    NotNormalized = 5,
    NonFinite = 6,
    Singular = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QsComplex {
    pub re: f64,
    pub im: f64,
}

impl From<QsComplex> for C64 {
    fn from(z: QsComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

impl From<C64> for QsComplex {
    fn from(z: C64) -> Self {
        QsComplex { re: z.re, im: z.im }
    }
}

/// Verification suite selector for [`qs_verify`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsSuite {
    Qudit = 0,
    Fock = 1,
    All = 2,
}

/// Opaque square complex matrix.
pub struct QsMatrix(ComplexMatrix);

/// Opaque normalized state vector.
pub struct QsState(PureState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(QsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DimensionMismatch { .. } | Error::NotSquare { .. } => {
                QsStatus::DimensionMismatch
            }
            Error::NotUnitary { .. } => QsStatus::NotUnitary,
            Error::NotNormalized { .. } => QsStatus::NotNormalized,
            Error::NonFinite => QsStatus::NonFinite,
            Error::Singular => QsStatus::Singular,
            Error::IndexOutOfRange { .. }
            | Error::InvalidQuditDim(_)
            | Error::InvalidCutoff(_)
            | Error::Invalid(_) => QsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QsStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(QsStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside quswap");
            QsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn copy_into(src: &[C64], buf: *mut QsComplex, len: usize) -> Result<(), Failure> {
    if len < src.len() {
        return Err(Failure(
            QsStatus::BufferTooSmall,
            format!("buffer holds {len}, need {}", src.len()),
        ));
    }
    if buf.is_null() {
        return Err(null("buffer"));
    }
    for (k, &z) in src.iter().enumerate() {
        buf.add(k).write(z.into());
    }
    Ok(())
}

fn boxed_matrix(m: ComplexMatrix) -> *mut QsMatrix {
    Box::into_raw(Box::new(QsMatrix(m)))
}

fn boxed_state(s: PureState) -> *mut QsState {
    Box::into_raw(Box::new(QsState(s)))
}

fn qudit(d: usize) -> Result<QuditDim, Failure> {
    Ok(QuditDim::new(d)?)
}

fn cutoff(n_max: usize) -> Result<FockCutoff, Failure> {
    Ok(FockCutoff::new(n_max)?)
}

/// Message for the most recent failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a named gate (`sigma1`, `sigma3`, `k`, `cshift`, `cshift-rev`,
/// `swap`, `swap-composed`) for qudit dimension `d`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_gate(
    name: *const c_char,
    d: usize,
    out: *mut *mut QsMatrix,
) -> QsStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("gate name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| invalid("gate name is not UTF-8"))?;
        let kind =
            GateKind::from_name(name).ok_or_else(|| invalid(format!("unknown gate '{name}'")))?;
        write_out(out, boxed_matrix(kind.build(qudit(d)?).into_matrix()))
    })
}

/// Copies `dim * dim` row-major entries into a new matrix.
///
/// # Safety
/// `entries` must point to `dim * dim` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_new(
    dim: usize,
    entries: *const QsComplex,
    out: *mut *mut QsMatrix,
) -> QsStatus {
    guard(|| {
        let len = dim
            .checked_mul(dim)
            .ok_or_else(|| invalid("dimension overflows"))?;
        let data = slice(entries, len, "entries")?
            .iter()
            .map(|&z| z.into())
            .collect();
        write_out(out, boxed_matrix(ComplexMatrix::from_row_major(dim, data)?))
    })
}

/// Returns the dimension, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_dim(m: *const QsMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// Copies row-major entries into `buf`, which must hold at least `dim * dim` values.
///
/// # Safety
/// `m` must be a live handle; `buf` must be writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_entries(
    m: *const QsMatrix,
    buf: *mut QsComplex,
    len: usize,
) -> QsStatus {
    guard(|| copy_into(deref(m, "matrix")?.0.entries(), buf, len))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_get(
    m: *const QsMatrix,
    row: usize,
    col: usize,
    out: *mut QsComplex,
) -> QsStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        let dim = m.dim();
        if row >= dim || col >= dim {
            return Err(Error::IndexOutOfRange {
                index: row.max(col),
                dim,
            }
            .into());
        }
        write_out(out, m[(row, col)].into())
    })
}

/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_free(m: *mut QsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `out = a * b`
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_mul(
    a: *const QsMatrix,
    b: *const QsMatrix,
    out: *mut *mut QsMatrix,
) -> QsStatus {
    guard(|| {
        let prod = deref(a, "a")?.0.matmul(&deref(b, "b")?.0)?;
        write_out(out, boxed_matrix(prod))
    })
}

/// `out = a ⊗ b`
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_kron(
    a: *const QsMatrix,
    b: *const QsMatrix,
    out: *mut *mut QsMatrix,
) -> QsStatus {
    guard(|| {
        let k = linalg::tensor_op(&deref(a, "a")?.0, &deref(b, "b")?.0);
        write_out(out, boxed_matrix(k))
    })
}

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_adjoint(
    a: *const QsMatrix,
    out: *mut *mut QsMatrix,
) -> QsStatus {
    guard(|| write_out(out, boxed_matrix(deref(a, "matrix")?.0.adjoint())))
}

/// Matrix exponential.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_exp(a: *const QsMatrix, out: *mut *mut QsMatrix) -> QsStatus {
    guard(|| write_out(out, boxed_matrix(linalg::mat_exp(&deref(a, "matrix")?.0)?)))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_is_unitary(
    m: *const QsMatrix,
    tol: f64,
    out: *mut bool,
) -> QsStatus {
    guard(|| write_out(out, deref(m, "matrix")?.0.is_unitary(tol)))
}

/// Largest entrywise modulus of `a − b`; infinite on dimension mismatch.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_matrix_max_norm_diff(
    a: *const QsMatrix,
    b: *const QsMatrix,
    out: *mut f64,
) -> QsStatus {
    guard(|| write_out(out, deref(a, "a")?.0.max_norm_diff(&deref(b, "b")?.0)))
}

/// Controlled-`u` on two qudits of dimension `d`. With `reversed`, the second
/// qudit is the control.
///
/// # Safety
/// `u` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_controlled_unitary(
    u: *const QsMatrix,
    d: usize,
    reversed: bool,
    out: *mut *mut QsMatrix,
) -> QsStatus {
    guard(|| {
        let u = &deref(u, "u")?.0;
        let gate = if reversed {
            gates::controlled_unitary_reversed(u, qudit(d)?)?
        } else {
            gates::controlled_unitary(u, qudit(d)?)?
        };
        write_out(out, boxed_matrix(gate.into_matrix()))
    })
}

/// Copies `len` amplitudes into a new state; they must already be normalized.
///
/// # Safety
/// `amplitudes` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_state_new(
    amplitudes: *const QsComplex,
    len: usize,
    out: *mut *mut QsState,
) -> QsStatus {
    guard(|| {
        let amps = slice(amplitudes, len, "amplitudes")?
            .iter()
            .map(|&z| z.into())
            .collect();
        write_out(out, boxed_state(PureState::new(amps)?))
    })
}

/// Returns the dimension, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qs_state_dim(s: *const QsState) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

/// # Safety
/// `s` must be a live handle; `buf` must be writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn qs_state_amplitudes(
    s: *const QsState,
    buf: *mut QsComplex,
    len: usize,
) -> QsStatus {
    guard(|| copy_into(deref(s, "state")?.0.amplitudes(), buf, len))
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qs_state_free(s: *mut QsState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `out = m |s⟩`; fails if `m` does not preserve the norm.
///
/// # Safety
/// `m`, `s` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_state_apply(
    m: *const QsMatrix,
    s: *const QsState,
    out: *mut *mut QsState,
) -> QsStatus {
    guard(|| {
        let next = deref(s, "state")?.0.apply(&deref(m, "matrix")?.0)?;
        write_out(out, boxed_state(next))
    })
}

/// `out = |a⟩ ⊗ |b⟩`
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_state_tensor(
    a: *const QsState,
    b: *const QsState,
    out: *mut *mut QsState,
) -> QsStatus {
    guard(|| write_out(out, boxed_state(deref(a, "a")?.0.tensor(&deref(b, "b")?.0))))
}

/// |⟨a|b⟩|²
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_fidelity(
    a: *const QsState,
    b: *const QsState,
    out: *mut f64,
) -> QsStatus {
    guard(|| write_out(out, linalg::fidelity(&deref(a, "a")?.0, &deref(b, "b")?.0)?))
}

/// Truncated coherent state |z⟩ on `n_max + 1` levels. The weight lost to
/// truncation is written to `leaked_weight` when it is non-null.
///
/// # Safety
/// `out` must be writable; `leaked_weight` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qs_coherent_state(
    z: QsComplex,
    n_max: usize,
    out: *mut *mut QsState,
    leaked_weight: *mut f64,
) -> QsStatus {
    guard(|| {
        let s = fock::coherent_state(z.into(), cutoff(n_max)?)?;
        if !leaked_weight.is_null() {
            leaked_weight.write(s.leaked_weight);
        }
        write_out(out, boxed_state(s.state))
    })
}

/// Two-mode beamsplitter exp(t a₁†a₂ − t̄ a₂†a₁).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_beamsplitter(
    t: QsComplex,
    n_max: usize,
    out: *mut *mut QsMatrix,
) -> QsStatus {
    guard(|| {
        let bs = fock::beamsplitter_blockwise(BeamsplitterParam::new(t.into())?, cutoff(n_max)?)?;
        write_out(out, boxed_matrix(bs.into_matrix()))
    })
}

/// Fixed two-mode exchange unitary for phase `theta`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_exchange_protocol(
    theta: f64,
    n_max: usize,
    out: *mut *mut QsMatrix,
) -> QsStatus {
    guard(|| {
        write_out(
            out,
            boxed_matrix(fock::exchange_protocol(theta, cutoff(n_max)?)?.into_matrix()),
        )
    })
}

/// Imperfect clone of a single-mode state `x` (dimension `n_max + 1`) by
/// direct simulation. `adequacy_weight` receives the weight of `x` above
/// `n_max / 2` when non-null.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable; `adequacy_weight` must
/// be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qs_clone_numeric(
    x: *const QsState,
    t: QsComplex,
    n_max: usize,
    out: *mut *mut QsState,
    adequacy_weight: *mut f64,
) -> QsStatus {
    guard(|| {
        let res = fock::imperfect_clone_numeric(
            &deref(x, "x")?.0,
            BeamsplitterParam::new(t.into())?,
            cutoff(n_max)?,
        )?;
        if !adequacy_weight.is_null() {
            adequacy_weight.write(res.leaked_weight);
        }
        write_out(out, boxed_state(res.state))
    })
}

/// Imperfect clone from the closed-form amplitudes.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_clone_closed_form(
    x: *const QsState,
    t: QsComplex,
    n_max: usize,
    out: *mut *mut QsState,
) -> QsStatus {
    guard(|| {
        let res = fock::imperfect_clone_closed_form(
            deref(x, "x")?.0.amplitudes(),
            BeamsplitterParam::new(t.into())?,
            cutoff(n_max)?,
        )?;
        write_out(out, boxed_state(res))
    })
}

/// Runs a verification suite (a [`QsSuite`] value) with the default
/// tolerances. `out_json` receives the JSON report, released with
/// [`qs_string_free`].
///
/// # Safety
/// `out_json` and `all_passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_verify(
    suite: u32,
    d_max: usize,
    n_max: usize,
    out_json: *mut *mut c_char,
    all_passed: *mut bool,
) -> QsStatus {
    guard(|| {
        if out_json.is_null() || all_passed.is_null() {
            return Err(null("output pointer"));
        }
        let kind = match suite {
            s if s == QsSuite::Qudit as u32 => SuiteKind::Qudit,
            s if s == QsSuite::Fock as u32 => SuiteKind::Fock,
            s if s == QsSuite::All as u32 => SuiteKind::All,
            other => return Err(invalid(format!("unknown suite {other}"))),
        };
        let outcome = cli::cmd_verify(
            kind,
            d_max,
            n_max,
            ReportFormat::Json,
            &Tolerances::default(),
        )?;
        let text = CString::new(outcome.stdout).map_err(|_| invalid("report contains NUL"))?;
        out_json.write(text.into_raw());
        all_passed.write(outcome.exit_code == 0);
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
