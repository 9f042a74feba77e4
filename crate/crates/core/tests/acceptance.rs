//! Acceptance criteria. Runs as a plain binary so every PASS/FAIL line is
//! printed regardless of output capture; exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use quswap_core::fock::{self, BeamsplitterParam, FockCutoff};
use quswap_core::gates;
use quswap_core::linalg::{fidelity, ComplexMatrix, PureState, QuditDim};
use quswap_core::{random, Result, C64};
use rand::Rng;

const FIDELITY_TOL: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn d(n: usize) -> QuditDim {
    QuditDim::new(n).unwrap()
}

fn cutoff(n: usize) -> FockCutoff {
    FockCutoff::new(n).unwrap()
}

fn real_matrix(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows).unwrap()
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

// Independent single-mode ladder operator: a|n⟩ = √n |n−1⟩.
fn ladder(n_max: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n_max + 1, |i, j| {
        if j == i + 1 {
            c((j as f64).sqrt())
        } else {
            c(0.0)
        }
    })
}

// Coherent-state amplitudes from the Poisson weights, renormalized on the cutoff.
fn coherent_oracle(z: C64, n_max: usize) -> PureState {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut term = c(1.0);
    for n in 0..=n_max {
        if n > 0 {
            term = term * z / (n as f64).sqrt();
        }
        amps.push(term);
    }
    PureState::normalized(amps).unwrap()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn random_t<R: Rng>(rng: &mut R, max_modulus: f64) -> BeamsplitterParam {
    BeamsplitterParam::from_polar(rng.gen_range(0.0..max_modulus), rng.gen_range(-PI..PI)).unwrap()
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let mut mismatches = 0usize;
    for n in 2..=16 {
        let composed = gates::swap_composed(d(n)).into_matrix();
        let direct = gates::swap_direct(d(n)).into_matrix();
        for a in 0..n {
            for b in 0..n {
                for row in 0..n * n {
                    let expected = if row == b * n + a { 1.0 } else { 0.0 };
                    if composed[(row, a * n + b)] != c(expected) {
                        mismatches += 1;
                    }
                }
            }
        }
        if composed != direct {
            mismatches += 1;
        }
    }
    let t = start.elapsed();
    Ok(Outcome::check(
        mismatches == 0 && within(t, 1.0),
        format!(
            "d=2..16, {mismatches} mismatched entries, {:.1} ms",
            t.as_secs_f64() * 1e3
        ),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let two = d(2);
    let expected = real_matrix(&[
        &[1., 0., 0., 0.],
        &[0., 0., 1., 0.],
        &[0., 1., 0., 0.],
        &[0., 0., 0., 1.],
    ]);
    let k_is_identity = *gates::reverse_gate(two).matrix() == ComplexMatrix::identity(2);
    let cx = gates::controlled_shift(two).into_matrix();
    let cx_rev = gates::controlled_shift_reversed(two).into_matrix();
    let three_cnot = (&(&cx * &cx_rev) * &cx) == expected;
    let composed = gates::swap_composed(two).into_matrix() == expected;
    Ok(Outcome::check(
        k_is_identity && three_cnot && composed,
        format!("K=I: {k_is_identity}, C_X C~_X C_X = S: {three_cnot}, composed = S: {composed}"),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let two = d(2);
    let cnot = real_matrix(&[
        &[1., 0., 0., 0.],
        &[0., 1., 0., 0.],
        &[0., 0., 0., 1.],
        &[0., 0., 1., 0.],
    ]);
    let cnot_rev = real_matrix(&[
        &[1., 0., 0., 0.],
        &[0., 0., 0., 1.],
        &[0., 0., 1., 0.],
        &[0., 1., 0., 0.],
    ]);
    let fwd = *gates::controlled_shift(two).matrix() == cnot;
    let rev = *gates::controlled_shift_reversed(two).matrix() == cnot_rev;
    Ok(Outcome::check(
        fwd && rev,
        format!("C_X exact: {fwd}, C~_X exact: {rev}"),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = random::seeded(4);
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        let s = gates::swap_direct(d(n)).into_matrix();
        for _ in 0..20 {
            let u = random::unitary(&mut rng, n);
            let cu = gates::controlled_unitary(&u, d(n))?.into_matrix();
            let conj = &(&s * &cu) * &s;
            // C̃_U = Σ_b U^b ⊗ |b⟩⟨b|
            let mut oracle = ComplexMatrix::zeros(n * n);
            for b in 0..n {
                let proj =
                    ComplexMatrix::from_fn(
                        n,
                        |i, j| if i == b && j == b { c(1.0) } else { c(0.0) },
                    );
                oracle = &oracle + &u.pow(b as u32).kron(&proj);
            }
            let lib = gates::conjugated_controlled_unitary(&u, d(n))?.into_matrix();
            let lib_rev = gates::controlled_unitary_reversed(&u, d(n))?.into_matrix();
            worst = worst
                .max(conj.max_norm_diff(&oracle))
                .max(lib.max_norm_diff(&oracle))
                .max(lib_rev.max_norm_diff(&oracle));
        }
    }
    let t = start.elapsed();
    Ok(Outcome::check(
        worst <= 1e-12 && within(t, 5.0),
        format!(
            "d=2..8 x 20 unitaries, max deviation {worst:.2e}, {:.0} ms",
            t.as_secs_f64() * 1e3
        ),
    ))
}

fn criterion_5() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 2..=16 {
        let zeta = C64::from_polar(1.0, 2.0 * PI / n as f64);
        let shift = ComplexMatrix::permutation(n, |j| (j + 1) % n);
        let clock = ComplexMatrix::diagonal(
            &(0..n)
                .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
                .collect::<Vec<_>>(),
        );
        let s1 = gates::sigma1(d(n)).into_matrix();
        let s3 = gates::sigma3(d(n)).into_matrix();
        let weyl = (&s3 * &s1).max_norm_diff(&(&s1 * &s3).scale(zeta));
        let adj1 = s1.adjoint().max_norm_diff(&s1.pow(n as u32 - 1));
        let adj3 = s3.adjoint().max_norm_diff(&s3.pow(n as u32 - 1));
        worst = worst
            .max(weyl)
            .max(adj1)
            .max(adj3)
            .max(s1.max_norm_diff(&shift))
            .max(s3.max_norm_diff(&clock));
    }
    Ok(Outcome::check(
        worst <= 1e-13,
        format!("d=2..16, max deviation {worst:.2e}"),
    ))
}

fn criterion_6() -> Result<Outcome> {
    let n_max = 16;
    let cut = cutoff(n_max);
    let a = ladder(n_max);
    let ad = a.adjoint();
    let half = c(0.5);
    let kp = (&ad * &ad).scale(half);
    let km = (&a * &a).scale(half);
    let k3 = (&(&ad * &a) + &ComplexMatrix::identity(n_max + 1).scale(half)).scale(half);
    let lib = fock::su11_generators(cut);
    let interior: Vec<usize> = (0..=n_max - 2).collect();
    let su11 = k3
        .commutator(&kp)
        .max_norm_diff_on(&kp, &interior)
        .max(
            k3.commutator(&km)
                .max_norm_diff_on(&km.scale(c(-1.0)), &interior),
        )
        .max(
            kp.commutator(&km)
                .max_norm_diff_on(&k3.scale(c(-2.0)), &interior),
        )
        .max(lib.k_plus.matrix().max_norm_diff(&kp))
        .max(lib.k_minus.matrix().max_norm_diff(&km))
        .max(lib.k3.matrix().max_norm_diff(&k3));

    let id = ComplexMatrix::identity(n_max + 1);
    let a1 = a.kron(&id);
    let a2 = id.kron(&a);
    let jp = &a1.adjoint() * &a2;
    let jm = &a2.adjoint() * &a1;
    let j3 = (&(&a1.adjoint() * &a1) - &(&a2.adjoint() * &a2)).scale(half);
    let bounded: Vec<usize> = (0..cut.two_mode_dim())
        .filter(|&i| i / (n_max + 1) + i % (n_max + 1) <= n_max)
        .collect();
    let libj = fock::schwinger_su2(cut);
    let su2 = j3
        .commutator(&jp)
        .max_norm_diff_on(&jp, &bounded)
        .max(
            j3.commutator(&jm)
                .max_norm_diff_on(&jm.scale(c(-1.0)), &bounded),
        )
        .max(
            jp.commutator(&jm)
                .max_norm_diff_on(&j3.scale(c(2.0)), &bounded),
        )
        .max(libj.j_plus.matrix().max_norm_diff(&jp))
        .max(libj.j_minus.matrix().max_norm_diff(&jm))
        .max(libj.j3.matrix().max_norm_diff(&j3));
    Ok(Outcome::check(
        su11 <= 1e-12 && su2 <= 1e-12,
        format!("n_max=16, su(1,1) {su11:.2e}, su(2) {su2:.2e}"),
    ))
}

fn criterion_7() -> Result<Outcome> {
    let cut = cutoff(16);
    let mut rng = random::seeded(7);
    let mut vacuum = vec![c(0.0); cut.two_mode_dim()];
    vacuum[0] = c(1.0);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let t = random_t(&mut rng, 2.0 * PI);
        let out = fock::beamsplitter_blockwise(t, cut)?
            .matrix()
            .matvec(&vacuum)?;
        let dist: f64 = out
            .iter()
            .zip(&vacuum)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(dist);
    }
    Ok(Outcome::check(
        worst <= 1e-12,
        format!("20 random t, max distance {worst:.2e}"),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let n_max = 16;
    let cut = cutoff(n_max);
    let a = ladder(n_max);
    let id = ComplexMatrix::identity(n_max + 1);
    let a1 = a.kron(&id);
    let a2 = id.kron(&a);
    let idx: Vec<usize> = (0..cut.two_mode_dim())
        .filter(|&i| i / (n_max + 1) + i % (n_max + 1) < n_max)
        .collect();
    let mut rng = random::seeded(8);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let t = random_t(&mut rng, PI);
        let u = fock::beamsplitter(t, cut)?.into_matrix();
        let (r, phase) = (t.modulus(), C64::from_polar(1.0, t.phase()));
        // U a₁ U† = cos|t| a₁ − e^{iφ} sin|t| a₂,  U a₂ U† = cos|t| a₂ + e^{−iφ} sin|t| a₁
        let rot1 = &a1.scale(c(r.cos())) - &a2.scale(phase * r.sin());
        let rot2 = &a2.scale(c(r.cos())) + &a1.scale(phase.conj() * r.sin());
        let ud = u.adjoint();
        worst = worst
            .max((&(&u * &a1) * &ud).max_norm_diff_on(&rot1, &idx))
            .max((&(&u * &a2) * &ud).max_norm_diff_on(&rot2, &idx));
    }
    Ok(Outcome::check(
        worst <= 1e-10,
        format!("n_max=16, 10 random t, max deviation {worst:.2e}"),
    ))
}

fn criterion_9() -> Result<Outcome> {
    let start = Instant::now();
    let grid: Vec<C64> = vec![
        c(0.0),
        c(1.0),
        C64::new(0.0, -1.0),
        C64::new(0.7, 0.0),
        C64::new(-0.4, 0.3),
        C64::from_polar(1.0, 2.3),
        C64::from_polar(0.5, -1.1),
    ];
    let thetas = [0.0, FRAC_PI_2, -2.0];
    let ladder_cutoffs = [8, 16, 32];
    let mut worst_fid: f64 = 1.0;
    let mut monotone_violations = 0usize;
    let mut pairs = 0usize;
    for &theta in &thetas {
        let ops: Vec<_> = ladder_cutoffs
            .iter()
            .map(|&n| fock::exchange_protocol(theta, cutoff(n)))
            .collect::<Result<_>>()?;
        for (i, &z1) in grid.iter().enumerate() {
            for &z2 in &grid[i + 1..] {
                pairs += 1;
                let mut fids = Vec::new();
                for (op, &n) in ops.iter().zip(&ladder_cutoffs) {
                    let input = coherent_oracle(z1, n).tensor(&coherent_oracle(z2, n));
                    let target = coherent_oracle(z2, n).tensor(&coherent_oracle(z1, n));
                    fids.push(fidelity(&op.apply(&input)?, &target)?);
                }
                if fids.windows(2).any(|w| w[1] < w[0] - 1e-13) {
                    monotone_violations += 1;
                }
                worst_fid = worst_fid.min(fids[2]);
            }
        }
    }
    let t = start.elapsed();
    Ok(Outcome::check(
        worst_fid >= 1.0 - FIDELITY_TOL && monotone_violations == 0 && within(t, 30.0),
        format!(
            "{pairs} pair-theta cases, min fidelity at n_max=32 {worst_fid:.12}, {monotone_violations} monotonicity violations, {:.1} s",
            t.as_secs_f64()
        ),
    ))
}

fn criterion_10() -> Result<Outcome> {
    let n_max = 32;
    let cut = cutoff(n_max);
    let dim = cut.single_dim();
    let mut rng = random::seeded(10);
    let thetas = [0.0, FRAC_PI_2, -2.0];
    let ops: Vec<_> = thetas
        .iter()
        .map(|&th| fock::exchange_protocol(th, cut))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 1.0;
    for k in 0..50 {
        let x = random::state_supported_on(&mut rng, dim, 16);
        let y = random::state_supported_on(&mut rng, dim, 16);
        let out = ops[k % 3].apply(&x.tensor(&y))?;
        worst = worst.min(fidelity(&out, &y.tensor(&x))?);
    }
    Ok(Outcome::check(
        worst >= 1.0 - FIDELITY_TOL,
        format!("50 random pairs on n <= 16 at n_max=32, min fidelity {worst:.12}"),
    ))
}

fn criterion_11() -> Result<Outcome> {
    let n_max = 16;
    let cut = cutoff(n_max);
    let dim = cut.single_dim();
    let mut rng = random::seeded(11);
    let mut worst_random: f64 = 1.0;
    for _ in 0..100 {
        let t = random_t(&mut rng, FRAC_PI_2);
        let x = random::state_supported_on(&mut rng, dim, n_max / 2);
        let numeric = fock::imperfect_clone_numeric(&x, t, cut)?;
        let closed = fock::imperfect_clone_closed_form(x.amplitudes(), t, cut)?;
        worst_random = worst_random.min(fidelity(&numeric.state, &closed)?);
    }

    let big = cutoff(32);
    let mut worst_coherent: f64 = 1.0;
    for (z, r) in [
        (c(0.5), PI / 4.0),
        (C64::new(-0.6, 0.5), 0.3),
        (C64::from_polar(1.0, 2.0), 1.2),
    ] {
        let t = BeamsplitterParam::from_polar(r, 0.0)?;
        let x = coherent_oracle(z, 32);
        let numeric = fock::imperfect_clone_numeric(&x, t, big)?;
        let closed = fock::imperfect_clone_closed_form(x.amplitudes(), t, big)?;
        let product = coherent_oracle(z * r.cos(), 32).tensor(&coherent_oracle(z * r.sin(), 32));
        worst_coherent = worst_coherent
            .min(fidelity(&numeric.state, &closed)?)
            .min(fidelity(&numeric.state, &product)?);
    }

    // cos = sin = 1/√2: c_{n,m} = √((n+m)!/(n!m!)) 2^{−(n+m)/2} x_{n+m}
    let balanced = BeamsplitterParam::from_polar(PI / 4.0, 0.0)?;
    let mut worst_amp: f64 = 0.0;
    for _ in 0..10 {
        let x = random::state_supported_on(&mut rng, dim, n_max);
        let out = fock::imperfect_clone_closed_form(x.amplitudes(), balanced, cut)?;
        for n in 0..dim {
            for m in 0..dim {
                let expected = if n + m <= n_max {
                    let k = n + m;
                    let coeff = (0.5 * (ln_factorial(k) - ln_factorial(n) - ln_factorial(m))
                        - 0.5 * k as f64 * 2f64.ln())
                    .exp();
                    x.amplitudes()[k] * coeff
                } else {
                    c(0.0)
                };
                worst_amp = worst_amp.max((out.amplitudes()[n * dim + m] - expected).norm());
            }
        }
    }
    Ok(Outcome::check(
        worst_random >= 1.0 - FIDELITY_TOL && worst_coherent >= 1.0 - FIDELITY_TOL && worst_amp <= 1e-10,
        format!(
            "100 random: min fidelity {worst_random:.12}; coherent: {worst_coherent:.12}; balanced amplitudes {worst_amp:.2e}"
        ),
    ))
}

fn criterion_12() -> Result<Outcome> {
    let cut = cutoff(16);
    let mut rng = random::seeded(12);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let t = random_t(&mut rng, PI);
        let dense = fock::beamsplitter(t, cut)?;
        let block = fock::beamsplitter_blockwise(t, cut)?;
        worst = worst.max(dense.matrix().max_norm_diff(block.matrix()));
    }
    Ok(Outcome::check(
        worst <= 1e-10,
        format!("n_max=16, 5 random t, max deviation {worst:.2e}"),
    ))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("composed swap equals direct swap, d=2..16", criterion_1),
        ("qubit case reduces to three CNOTs", criterion_2),
        ("CNOT matrix regressions", criterion_3),
        ("S C_U S equals reversed controlled unitary", criterion_4),
        ("clock-shift relations", criterion_5),
        ("su(1,1) and su(2) relations at cutoff", criterion_6),
        ("beamsplitter vacuum invariance", criterion_7),
        ("beamsplitter Heisenberg rotation", criterion_8),
        (
            "coherent-state exchange and cutoff monotonicity",
            criterion_9,
        ),
        ("arbitrary-state exchange", criterion_10),
        ("imperfect clone oracle equivalence", criterion_11),
        ("dense vs blockwise beamsplitter", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run().unwrap_or_else(|e| Outcome::check(false, format!("error: {e}")));
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2}: {name} ({})", i + 1, outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
