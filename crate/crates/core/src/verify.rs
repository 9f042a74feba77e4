//! Verification suites over the gate and Fock-space identities.
//!
//! Every check yields a [`VerificationReport`] whose metric is a deviation:
//! the check passes iff `metric <= tolerance`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::{self, BeamsplitterParam, FockCutoff, Mode};
use crate::gates::{self, GateKind};
use crate::linalg::{basis_state, fidelity, ComplexMatrix, PureState, QuditDim};
use crate::random;

pub const DEFAULT_ANALYTIC_TOL: f64 = 1e-10;
pub const TOL_ENV: &str = "QUSWAP_TOL";
pub const MAX_SUITE_D: usize = 16;
pub const MAX_SUITE_N: usize = 64;

/// Infidelity bound for truncation-limited state comparisons.
pub const FIDELITY_TOL: f64 = 1e-8;
/// Slack for floating-point noise when checking that fidelity is non-decreasing.
pub const MONOTONE_SLACK: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Tolerance for analytic identities; exact integer checks never use it.
    pub analytic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            analytic: DEFAULT_ANALYTIC_TOL,
        }
    }
}

impl Tolerances {
    /// Reads `QUSWAP_TOL`, falling back to the default when it is unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_ENV) {
            Ok(raw) => Self::parse(&raw),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(raw: &str) -> Result<Self> {
        let analytic: f64 = raw
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("{TOL_ENV} must be a number, got '{raw}'")))?;
        if !(analytic.is_finite() && analytic > 0.0) {
            return Err(Error::Invalid(format!(
                "{TOL_ENV} must be positive, got '{raw}'"
            )));
        }
        Ok(Self { analytic })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    MaxNormDeviation,
    Infidelity,
    NormDeviation,
    Mismatches,
    MonotonicityViolation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub metric_kind: MetricKind,
    pub metric: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub wall_time_ms: f64,
}

impl VerificationReport {
    pub fn new(
        check: impl Into<String>,
        params: BTreeMap<String, Value>,
        metric_kind: MetricKind,
        metric: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            check: check.into(),
            params,
            metric_kind,
            metric,
            tolerance,
            pass: metric <= tolerance,
            note: None,
            wall_time_ms: 0.0,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// One-line human readable summary.
    pub fn summary(&self) -> String {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "{} {} [{}] {:?}={:.3e} tol={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            params.join(" "),
            self.metric_kind,
            self.metric,
            self.tolerance
        )
    }
}

fn compare_values(a: &Value, b: &Value) -> Ordering {
    match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        _ => a.to_string().cmp(&b.to_string()),
    }
}

fn compare_reports(a: &VerificationReport, b: &VerificationReport) -> Ordering {
    a.check.cmp(&b.check).then_with(|| {
        for ((ka, va), (kb, vb)) in a.params.iter().zip(&b.params) {
            let ord = ka.cmp(kb).then_with(|| compare_values(va, vb));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        a.params.len().cmp(&b.params.len())
    })
}

/// Sorts by check name, then parameters (numbers compare numerically).
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(compare_reports);
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    Qudit,
    Fock,
    All,
}

fn params<const N: usize>(items: [(&str, Value); N]) -> BTreeMap<String, Value> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Default)]
struct Recorder {
    reports: Vec<VerificationReport>,
}

impl Recorder {
    fn check(
        &mut self,
        name: &str,
        params: BTreeMap<String, Value>,
        kind: MetricKind,
        tolerance: f64,
        f: impl FnOnce() -> Result<f64>,
    ) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let mut report = match outcome {
            Ok(metric) => VerificationReport::new(name, params, kind, metric, tolerance),
            Err(e) => VerificationReport::new(name, params, kind, f64::INFINITY, tolerance)
                .with_note(format!("error: {e}")),
        };
        if report.metric.is_nan() {
            report.pass = false;
        }
        report.wall_time_ms = elapsed;
        self.reports.push(report);
    }
}

pub fn run_suite(
    suite: SuiteKind,
    d_max: usize,
    n_max: usize,
    tol: &Tolerances,
) -> Result<Vec<VerificationReport>> {
    let mut reports = match suite {
        SuiteKind::Qudit => qudit_suite(d_max)?,
        SuiteKind::Fock => fock_suite(n_max, tol)?,
        SuiteKind::All => {
            let mut r = qudit_suite(d_max)?;
            r.extend(fock_suite(n_max, tol)?);
            r
        }
    };
    sort_reports(&mut reports);
    Ok(reports)
}

fn neg_one() -> C64 {
    C64::new(-1.0, 0.0)
}

pub fn qudit_suite(d_max: usize) -> Result<Vec<VerificationReport>> {
    if !(2..=MAX_SUITE_D).contains(&d_max) {
        return Err(Error::Invalid(format!(
            "d_max must lie in 2..={MAX_SUITE_D}, got {d_max}"
        )));
    }
    use MetricKind::*;
    let mut rec = Recorder::default();
    for d in 2..=d_max {
        let qd = QuditDim::new(d)?;
        let p = || params([("d", json!(d))]);
        let s1 = gates::sigma1(qd).into_matrix();
        let s3 = gates::sigma3(qd).into_matrix();
        let swap = gates::swap_direct(qd).into_matrix();
        let k = gates::reverse_gate(qd).into_matrix();
        let id = ComplexMatrix::identity(d);

        rec.check("gate_unitarity", p(), MaxNormDeviation, 1e-12, || {
            Ok(GateKind::ALL
                .iter()
                .map(|g| g.build(qd).matrix().unitarity_deviation())
                .fold(0.0, f64::max))
        });
        rec.check("gate_permutation_structure", p(), Mismatches, 0.0, || {
            Ok(GateKind::ALL
                .iter()
                .filter(|g| g.is_permutation() && !g.build(qd).matrix().is_permutation())
                .count() as f64)
        });
        rec.check("weyl_commutation", p(), MaxNormDeviation, 1e-13, || {
            Ok((&s3 * &s1).max_norm_diff(&(&s1 * &s3).scale(qd.zeta())))
        });
        rec.check("sigma1_adjoint_power", p(), MaxNormDeviation, 0.0, || {
            Ok(s1.adjoint().max_norm_diff(&s1.pow(d as u32 - 1)))
        });
        rec.check("sigma3_adjoint_power", p(), MaxNormDeviation, 1e-13, || {
            Ok(s3.adjoint().max_norm_diff(&s3.pow(d as u32 - 1)))
        });
        rec.check("swap_decomposition", p(), MaxNormDeviation, 0.0, || {
            Ok(gates::swap_composed(qd).matrix().max_norm_diff(&swap))
        });
        rec.check(
            "swap_conjugates_reverse_gate",
            p(),
            MaxNormDeviation,
            0.0,
            || {
                let lhs = &(&swap * &id.kron(&k)) * &swap;
                Ok(lhs.max_norm_diff(&k.kron(&id)))
            },
        );
        rec.check(
            "reverse_gate_by_iteration",
            p(),
            MaxNormDeviation,
            0.0,
            || Ok(k.max_norm_diff(gates::reverse_by_iteration(qd).matrix())),
        );
        rec.check("basis_cloning", p(), Mismatches, 0.0, || {
            let cs = gates::controlled_shift(qd);
            Ok((0..d)
                .filter(|&a| cs.permuted_index(a * d) != Some(a * d + a))
                .count() as f64)
        });
        if d <= 8 {
            rec.check(
                "controlled_unitary_conjugation",
                p(),
                MaxNormDeviation,
                1e-12,
                || {
                    let mut rng = random::seeded(0x5eed_0000 + d as u64);
                    let mut worst = gates::conjugated_controlled_unitary(&s1, qd)?
                        .matrix()
                        .max_norm_diff(gates::controlled_shift_reversed(qd).matrix());
                    for _ in 0..20 {
                        let u = random::unitary(&mut rng, d);
                        let lhs = gates::conjugated_controlled_unitary(&u, qd)?;
                        let rhs = gates::controlled_unitary_reversed(&u, qd)?;
                        worst = worst.max(lhs.matrix().max_norm_diff(rhs.matrix()));
                    }
                    Ok(worst)
                },
            );
        }
    }
    if d_max >= 2 {
        rec.check(
            "qubit_three_cnot",
            params([("d", json!(2))]),
            MaxNormDeviation,
            0.0,
            || {
                let qd = QuditDim::new(2)?;
                let cx = gates::controlled_shift(qd).into_matrix();
                let cxr = gates::controlled_shift_reversed(qd).into_matrix();
                let three = &(&cx * &cxr) * &cx;
                let k_dev = gates::reverse_gate(qd)
                    .matrix()
                    .max_norm_diff(&ComplexMatrix::identity(2));
                Ok(three
                    .max_norm_diff(gates::swap_direct(qd).matrix())
                    .max(k_dev))
            },
        );
    }
    Ok(rec.reports)
}

/// Bound on coherent amplitudes used at cutoff `n_max`, keeping the total
/// photon-number tail of a two-mode product state well below the fidelity tolerance.
pub fn coherent_amplitude_bound(n_max: usize) -> f64 {
    (n_max as f64).sqrt().min(6.0) / 6.0
}

fn coherent_grid(radius: f64) -> Vec<(C64, C64)> {
    let pts = [
        C64::new(radius, 0.0),
        C64::new(0.0, -radius),
        C64::from_polar(radius * 0.7, 2.3),
        C64::new(-0.4 * radius, 0.3 * radius),
    ];
    let mut out = Vec::new();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

fn product(x: &PureState, y: &PureState) -> PureState {
    x.tensor(y)
}

/// Infidelity between `E(|z₁⟩⊗|z₂⟩)` and `|z₂⟩⊗|z₁⟩` for a prebuilt exchange operator.
pub fn exchange_infidelity(e: &fock::ModeOperator, z1: C64, z2: C64) -> Result<f64> {
    let c = e.cutoff();
    let s1 = fock::coherent_state(z1, c)?.state;
    let s2 = fock::coherent_state(z2, c)?.state;
    let out = e.apply(&product(&s1, &s2))?;
    Ok(1.0 - fidelity(&out, &product(&s2, &s1))?)
}

fn commutator_dev_on(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    expected: &ComplexMatrix,
    idx: &[usize],
) -> f64 {
    a.commutator(b).max_norm_diff_on(expected, idx)
}

pub fn fock_suite(n_max: usize, tol: &Tolerances) -> Result<Vec<VerificationReport>> {
    if !(1..=MAX_SUITE_N).contains(&n_max) {
        return Err(Error::Invalid(format!(
            "n_max must lie in 1..={MAX_SUITE_N}, got {n_max}"
        )));
    }
    use MetricKind::*;
    let analytic = tol.analytic;
    let cutoff = FockCutoff::new(n_max)?;
    let p = || params([("n_max", json!(n_max))]);
    let mut rec = Recorder::default();

    let a = fock::annihilation(cutoff).into_matrix();
    let ad = fock::creation(cutoff).into_matrix();
    let num = fock::number(cutoff).into_matrix();
    let id1 = ComplexMatrix::identity(cutoff.single_dim());

    rec.check(
        "ladder_transpose_structure",
        p(),
        MaxNormDeviation,
        1e-14,
        || {
            let n_dev = (&ad * &a).max_norm_diff(&num);
            Ok(ad.max_norm_diff(&a.transpose()).max(n_dev))
        },
    );
    rec.check("number_commutators", p(), MaxNormDeviation, 1e-13, || {
        let with_ad = num.commutator(&ad).max_norm_diff(&ad);
        let with_a = num.commutator(&a).max_norm_diff(&a.scale(neg_one()));
        Ok(with_ad.max(with_a))
    });
    rec.check(
        "ladder_commutator_interior",
        p(),
        MaxNormDeviation,
        1e-13,
        || {
            Ok(commutator_dev_on(
                &a,
                &ad,
                &id1,
                &cutoff.interior(n_max - 1),
            ))
        },
    );
    rec.check(
        "number_basis_orthonormal_complete",
        p(),
        MaxNormDeviation,
        0.0,
        || {
            let dim = cutoff.single_dim();
            let mut completeness = ComplexMatrix::zeros(dim);
            let mut worst: f64 = 0.0;
            for m in 0..dim {
                let bm = basis_state(m, dim)?;
                let amps = bm.amplitudes();
                for i in 0..dim {
                    for j in 0..dim {
                        completeness[(i, j)] += amps[i] * amps[j].conj();
                    }
                }
                for n in 0..dim {
                    let expected = if m == n { 1.0 } else { 0.0 };
                    worst = worst.max((bm.inner(&basis_state(n, dim)?)? - expected).norm());
                }
            }
            Ok(worst.max(completeness.max_norm_diff(&id1)))
        },
    );
    rec.check("su11_relations", p(), MaxNormDeviation, 1e-12, || {
        let k = fock::su11_generators(cutoff);
        let idx = cutoff.interior(n_max.saturating_sub(2));
        let (kp, km, k3) = (k.k_plus.matrix(), k.k_minus.matrix(), k.k3.matrix());
        Ok(commutator_dev_on(k3, kp, kp, &idx)
            .max(commutator_dev_on(k3, km, &km.scale(neg_one()), &idx))
            .max(commutator_dev_on(
                kp,
                km,
                &k3.scale(C64::new(-2.0, 0.0)),
                &idx,
            )))
    });
    rec.check("su2_relations", p(), MaxNormDeviation, 1e-12, || {
        let j = fock::schwinger_su2(cutoff);
        let idx = cutoff.total_number_at_most(n_max);
        let (jp, jm, j3) = (j.j_plus.matrix(), j.j_minus.matrix(), j.j3.matrix());
        Ok(commutator_dev_on(j3, jp, jp, &idx)
            .max(commutator_dev_on(j3, jm, &jm.scale(neg_one()), &idx))
            .max(commutator_dev_on(
                jp,
                jm,
                &j3.scale(C64::new(2.0, 0.0)),
                &idx,
            )))
    });

    let radius = coherent_amplitude_bound(n_max);
    rec.check(
        "coherent_state_matches_displacement",
        p(),
        MaxNormDeviation,
        analytic,
        || {
            let vac = basis_state(0, cutoff.single_dim())?;
            let mut worst: f64 = 0.0;
            // Truncating D(z) perturbs the state by about |z|^(N+1)/sqrt((N+1)!).
            let ln_fact: f64 = (1..=n_max + 1).map(|k| (k as f64).ln()).sum();
            let r = radius.min(
                ((1e-12f64).ln() + 0.5 * ln_fact)
                    .exp()
                    .powf(1.0 / (n_max as f64 + 1.0)),
            );
            for z in [C64::new(r, 0.0), C64::from_polar(r, 2.0)] {
                let via_exp = fock::displacement(z, cutoff)?.apply(&vac)?;
                worst = worst.max(via_exp.distance(&fock::coherent_state(z, cutoff)?.state)?);
            }
            Ok(worst)
        },
    );
    rec.check("operator_unitarity", p(), MaxNormDeviation, 1e-12, || {
        let z = C64::from_polar(radius, 0.4);
        let single = [
            fock::displacement(z, cutoff)?.into_matrix(),
            fock::squeeze(C64::new(0.3, 0.1), cutoff)?.into_matrix(),
        ];
        let two = [
            fock::phase_op(1.3, Mode::First, cutoff)?.into_matrix(),
            fock::phase_op(-0.6, Mode::Second, cutoff)?.into_matrix(),
        ];
        Ok(single
            .iter()
            .chain(&two)
            .map(|m| m.unitarity_deviation())
            .fold(0.0, f64::max))
    });

    let t_gen = BeamsplitterParam::new(C64::new(0.9, -0.6))?;
    let uj = fock::beamsplitter(t_gen, cutoff)?;
    rec.check(
        "beamsplitter_unitarity",
        p(),
        MaxNormDeviation,
        1e-12,
        || Ok(uj.matrix().unitarity_deviation()),
    );
    rec.check(
        "beamsplitter_number_conservation",
        p(),
        MaxNormDeviation,
        1e-12,
        || {
            let n1 = fock::number(cutoff).on_mode(Mode::First)?.into_matrix();
            let n2 = fock::number(cutoff).on_mode(Mode::Second)?.into_matrix();
            let total = &n1 + &n2;
            Ok(uj.matrix().commutator(&total).max_norm())
        },
    );
    rec.check(
        "beamsplitter_vacuum_invariance",
        p(),
        NormDeviation,
        1e-12,
        || {
            let vac = basis_state(0, cutoff.two_mode_dim())?;
            uj.apply(&vac)?.distance(&vac)
        },
    );
    rec.check(
        "beamsplitter_blockwise_agreement",
        p(),
        MaxNormDeviation,
        analytic,
        || {
            let blocks = fock::beamsplitter_blockwise(t_gen, cutoff)?;
            Ok(uj.matrix().max_norm_diff(blocks.matrix()))
        },
    );
    rec.check(
        "beamsplitter_heisenberg_rotation",
        p(),
        MaxNormDeviation,
        analytic,
        || heisenberg_deviation(uj.matrix(), t_gen, cutoff),
    );

    let thetas = [0.0, FRAC_PI_2, -2.0];
    for &theta in &thetas {
        let e = fock::exchange_protocol(theta, cutoff)?;
        let pt = || params([("n_max", json!(n_max)), ("theta", json!(theta))]);
        rec.check(
            "exchange_coherent_states",
            pt(),
            Infidelity,
            FIDELITY_TOL,
            || {
                let mut worst: f64 = 0.0;
                for (z1, z2) in coherent_grid(radius) {
                    worst = worst.max(exchange_infidelity(&e, z1, z2)?);
                }
                Ok(worst)
            },
        );
        rec.check("exchange_vacuum", pt(), NormDeviation, 1e-12, || {
            let vac = basis_state(0, cutoff.two_mode_dim())?;
            e.apply(&vac)?.distance(&vac)
        });
        rec.check(
            "exchange_matches_swap",
            pt(),
            MaxNormDeviation,
            analytic,
            || exchange_swap_deviation(e.matrix(), cutoff, n_max / 2),
        );
        rec.check(
            "exchange_arbitrary_states",
            pt(),
            Infidelity,
            FIDELITY_TOL,
            || {
                let mut rng = random::seeded(0xe8c4 + n_max as u64);
                let mut worst: f64 = 0.0;
                for _ in 0..10 {
                    let x = random::state_supported_on(&mut rng, cutoff.single_dim(), n_max / 2);
                    let y = random::state_supported_on(&mut rng, cutoff.single_dim(), n_max / 2);
                    let out = e.apply(&product(&x, &y))?;
                    worst = worst.max(1.0 - fidelity(&out, &product(&y, &x))?);
                }
                Ok(worst)
            },
        );
    }

    let ladder: Vec<usize> = {
        let mut l: Vec<usize> = [n_max / 4, n_max / 2, n_max]
            .into_iter()
            .filter(|&n| n >= 1)
            .collect();
        l.dedup();
        l
    };
    rec.check(
        "exchange_fidelity_monotone_in_cutoff",
        params([
            ("cutoffs", json!(ladder.clone())),
            ("radius", json!(radius)),
        ]),
        MonotonicityViolation,
        MONOTONE_SLACK,
        || {
            let grid = coherent_grid(radius);
            let mut fid = vec![vec![0.0; ladder.len()]; grid.len()];
            for (ci, &n) in ladder.iter().enumerate() {
                let e = fock::exchange_protocol(0.0, FockCutoff::new(n)?)?;
                for (gi, &(z1, z2)) in grid.iter().enumerate() {
                    fid[gi][ci] = 1.0 - exchange_infidelity(&e, z1, z2)?;
                }
            }
            Ok(fid
                .iter()
                .flat_map(|row| row.windows(2).map(|w| w[0] - w[1]))
                .fold(0.0, f64::max))
        },
    );

    clone_checks(&mut rec, cutoff, analytic)?;
    Ok(rec.reports)
}

/// Max deviation of U a_j U⁻¹ from the su(2) rotation of (a₁, a₂), over the
/// two-mode states with total number ≤ n_max − 1.
pub fn heisenberg_deviation(
    u: &ComplexMatrix,
    t: BeamsplitterParam,
    cutoff: FockCutoff,
) -> Result<f64> {
    let a = fock::annihilation(cutoff);
    let a1 = a.on_mode(Mode::First)?.into_matrix();
    let a2 = a.on_mode(Mode::Second)?.into_matrix();
    let u_inv = u.adjoint();
    let modulus = t.modulus();
    let (cos, sinc_t) = if modulus == 0.0 {
        (1.0, C64::new(0.0, 0.0))
    } else {
        (modulus.cos(), t.t() * (modulus.sin() / modulus))
    };
    let rot1 = &a1.scale(C64::new(cos, 0.0)) - &a2.scale(sinc_t);
    let rot2 = &a2.scale(C64::new(cos, 0.0)) + &a1.scale(sinc_t.conj());
    let idx = cutoff.total_number_at_most(cutoff.n_max() - 1);
    let dev1 = (&(u * &a1) * &u_inv).max_norm_diff_on(&rot1, &idx);
    let dev2 = (&(u * &a2) * &u_inv).max_norm_diff_on(&rot2, &idx);
    Ok(dev1.max(dev2))
}

/// Deviation of `e` from the index-swap permutation, up to a global phase,
/// on two-mode states with total number ≤ `max_total`.
pub fn exchange_swap_deviation(
    e: &ComplexMatrix,
    cutoff: FockCutoff,
    max_total: usize,
) -> Result<f64> {
    let swap = gates::swap_direct(QuditDim::new(cutoff.single_dim())?).into_matrix();
    let corner = e[(0, 0)];
    let phase = if corner.norm() > 0.0 {
        corner / corner.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    Ok(e.max_norm_diff_on(&swap.scale(phase), &cutoff.total_number_at_most(max_total)))
}

fn clone_checks(rec: &mut Recorder, cutoff: FockCutoff, analytic: f64) -> Result<()> {
    use MetricKind::*;
    let n_max = cutoff.n_max();
    let p = || params([("n_max", json!(n_max))]);
    let radius = coherent_amplitude_bound(n_max);
    let mut rng = random::seeded(0xc1 + n_max as u64);
    let ts: Vec<BeamsplitterParam> = (0..5)
        .map(|_| {
            BeamsplitterParam::from_polar(
                rand::Rng::gen_range(&mut rng, 0.0..FRAC_PI_2),
                rand::Rng::gen_range(&mut rng, -PI..PI),
            )
        })
        .collect::<Result<_>>()?;

    rec.check(
        "clone_closed_form_norm",
        p(),
        NormDeviation,
        analytic,
        || {
            let mut worst: f64 = 0.0;
            for &t in &ts {
                for _ in 0..4 {
                    let x = random::state_supported_on(&mut rng, cutoff.single_dim(), n_max);
                    let out = fock::imperfect_clone_closed_form(x.amplitudes(), t, cutoff)?;
                    let norm: f64 = out.amplitudes().iter().map(|z| z.norm_sqr()).sum();
                    worst = worst.max((norm - 1.0).abs());
                }
            }
            Ok(worst)
        },
    );
    rec.check(
        "clone_numeric_matches_closed_form",
        p(),
        Infidelity,
        FIDELITY_TOL,
        || {
            let vac = basis_state(0, cutoff.single_dim())?;
            let mut worst: f64 = 0.0;
            for &t in &ts {
                let op = fock::clone_operator(t, cutoff)?;
                for _ in 0..20 {
                    let x = random::state_supported_on(&mut rng, cutoff.single_dim(), n_max / 2);
                    let numeric = op.apply(&x.tensor(&vac))?;
                    let closed = fock::imperfect_clone_closed_form(x.amplitudes(), t, cutoff)?;
                    worst = worst.max(1.0 - fidelity(&numeric, &closed)?);
                }
            }
            Ok(worst)
        },
    );
    rec.check(
        "clone_coherent_product",
        p(),
        Infidelity,
        FIDELITY_TOL,
        || {
            let mut worst: f64 = 0.0;
            let z = C64::from_polar(radius, -0.8);
            for &t in &ts {
                let x = fock::coherent_state(z, cutoff)?.state;
                let out = fock::imperfect_clone_numeric(&x, t, cutoff)?.state;
                let (c, s) = (t.modulus().cos(), t.modulus().sin());
                let target = product(
                    &fock::coherent_state(z * c, cutoff)?.state,
                    &fock::coherent_state(z * s, cutoff)?.state,
                );
                worst = worst.max(1.0 - fidelity(&out, &target)?);
            }
            Ok(worst)
        },
    );
    rec.check(
        "clone_second_mode_marginal",
        p(),
        Infidelity,
        FIDELITY_TOL,
        || {
            let z = C64::from_polar(radius, 0.5);
            let t = ts[0];
            let x = fock::coherent_state(z, cutoff)?.state;
            let out = fock::imperfect_clone_numeric(&x, t, cutoff)?.state;
            let rho = fock::reduced_second_mode(&out, cutoff)?;
            let target = fock::coherent_state(z * t.modulus().sin(), cutoff)?.state;
            let v = rho.matvec(target.amplitudes())?;
            let overlap: C64 = target
                .amplitudes()
                .iter()
                .zip(&v)
                .map(|(a, b)| a.conj() * b)
                .sum();
            Ok(1.0 - overlap.re)
        },
    );
    rec.check(
        "clone_balanced_specialization",
        p(),
        MaxNormDeviation,
        analytic,
        || {
            let t = BeamsplitterParam::from_polar(FRAC_PI_4, 0.0)?;
            let x = random::state_supported_on(&mut rng, cutoff.single_dim(), n_max);
            let out = fock::imperfect_clone_closed_form(x.amplitudes(), t, cutoff)?;
            let mut worst: f64 = 0.0;
            for n in 0..=n_max {
                for m in 0..=(n_max - n) {
                    let k = n + m;
                    let ln_coeff = 0.5 * (ln_factorial(k) - ln_factorial(n) - ln_factorial(m))
                        - 0.5 * k as f64 * std::f64::consts::LN_2;
                    let expected = x.amplitudes()[k] * ln_coeff.exp();
                    worst =
                        worst.max((out.amplitudes()[cutoff.pair_index(n, m)] - expected).norm());
                }
            }
            Ok(worst)
        },
    );
    Ok(())
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_pass_iff_within_tolerance() {
        let r = VerificationReport::new(
            "x",
            BTreeMap::new(),
            MetricKind::MaxNormDeviation,
            1e-11,
            1e-10,
        );
        assert!(r.pass);
        let r = VerificationReport::new(
            "x",
            BTreeMap::new(),
            MetricKind::MaxNormDeviation,
            2e-10,
            1e-10,
        );
        assert!(!r.pass);
        let r = VerificationReport::new("x", BTreeMap::new(), MetricKind::Mismatches, 0.0, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn report_field_order_is_stable() {
        let r = VerificationReport::new(
            "c",
            params([("d", json!(3))]),
            MetricKind::Infidelity,
            0.0,
            1e-8,
        );
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(
            text,
            r#"{"check":"c","params":{"d":3},"metric_kind":"infidelity","metric":0.0,"tolerance":1e-8,"pass":true,"wall_time_ms":0.0}"#
        );
    }

    #[test]
    fn sorting_is_numeric_on_params() {
        let mk = |name: &str, d: usize| {
            VerificationReport::new(
                name,
                params([("d", json!(d))]),
                MetricKind::Mismatches,
                0.0,
                0.0,
            )
        };
        let mut v = vec![mk("b", 2), mk("a", 10), mk("a", 2)];
        sort_reports(&mut v);
        let order: Vec<(String, Value)> = v
            .iter()
            .map(|r| (r.check.clone(), r.params["d"].clone()))
            .collect();
        assert_eq!(
            order,
            vec![
                ("a".into(), json!(2)),
                ("a".into(), json!(10)),
                ("b".into(), json!(2))
            ]
        );
    }

    #[test]
    fn tolerance_parsing() {
        assert_eq!(Tolerances::parse("1e-9").unwrap().analytic, 1e-9);
        assert!(Tolerances::parse("-1").is_err());
        assert!(Tolerances::parse("abc").is_err());
    }

    #[test]
    fn suite_ranges_are_enforced() {
        assert!(qudit_suite(17).is_err());
        assert!(qudit_suite(1).is_err());
        assert!(fock_suite(65, &Tolerances::default()).is_err());
    }

    #[test]
    fn qudit_suite_passes() {
        let reports = qudit_suite(6).unwrap();
        for r in &reports {
            assert!(r.pass, "{}", r.summary());
        }
        assert!(reports.iter().any(|r| r.check == "swap_decomposition"));
    }

    #[test]
    fn small_fock_suite_passes() {
        for r in fock_suite(8, &Tolerances::default()).unwrap() {
            assert!(r.pass, "{}", r.summary());
        }
    }

    #[test]
    fn failed_check_is_reported_not_propagated() {
        let mut rec = Recorder::default();
        rec.check("boom", BTreeMap::new(), MetricKind::Mismatches, 0.0, || {
            Err(Error::Singular)
        });
        assert!(!rec.reports[0].pass);
        assert!(rec.reports[0].note.as_deref().unwrap().contains("singular"));
    }
}
