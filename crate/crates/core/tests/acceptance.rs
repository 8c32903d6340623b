//! Acceptance gate. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use fcs::cpmap::{
    apply, choi, choi_of_superop, iterate, markov_check, stinespring_from_choi, superop_from_choi, CpMapData, Word,
    CP_TOL,
};
use fcs::kernel::{functional_matrix, kernel_basis, order_seminorm, quotient_profile, KernelBasis};
use fcs::linalg::{herm_eig, operator_norm, pauli_basis, ComplexMatrix};
use fcs::models::{aklt_model, aklt_spin_operators, product_model, random_model, LocalState};
use fcs::opprod::{embed_reduced, extend_model, gamma_n_presentation, op_product_eval};
use fcs::random;
use fcs::reconstruct::{
    correlation, fullness_dimension, invariant_functional, omega_eval, ring_expectation, shift_invariance_check,
    transfer_spectrum,
};
use fcs::Error;
use num_complex::Complex64;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn one_kron(t: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(3).kron(t)
}

fn aklt_unitality() -> Outcome {
    let cp = aklt_model().cp;
    let out = apply(&cp, &one_kron(&ComplexMatrix::identity(2))).map_err(|e| e.to_string())?;
    let res = out.max_abs_diff(&ComplexMatrix::identity(2));
    ensure(res <= 1e-12, format!("residual {res:.2e} (tol 1e-12)"))
}

fn aklt_pauli_eigenvalue() -> Outcome {
    let cp = aklt_model().cp;
    let mut worst: f64 = 0.0;
    for s in &pauli_basis()[1..] {
        let out = apply(&cp, &one_kron(s)).map_err(|e| e.to_string())?;
        worst = worst.max(out.max_abs_diff(&s.scale_re(-1.0 / 3.0)));
    }
    ensure(
        worst <= 1e-12,
        format!("max residual over k=1,2,3: {worst:.2e} (tol 1e-12)"),
    )
}

fn aklt_spectrum_and_boundary() -> Outcome {
    let cp = aklt_model().cp;
    let spec = transfer_spectrum(&cp).map_err(|e| e.to_string())?;
    let expected = [1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0];
    let spec_err = spec
        .eigenvalues
        .iter()
        .zip(expected)
        .map(|(z, e)| (z - Complex64::new(e, 0.0)).norm())
        .fold(0.0, f64::max);
    let xi = invariant_functional(&cp, 1e-10).map_err(|e| e.to_string())?;
    let rho_err = xi.rho().max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5));
    ensure(
        spec.eigenvalues.len() == 4 && spec_err <= 1e-10 && rho_err <= 1e-10,
        format!("spectrum error {spec_err:.2e}, boundary state error {rho_err:.2e} (tol 1e-10)"),
    )
}

fn aklt_correlation_decay() -> Outcome {
    let cp = aklt_model().cp;
    let xi = invariant_functional(&cp, 1e-10).map_err(|e| e.to_string())?;
    let (_, _, sz) = aklt_spin_operators();
    let corr: Vec<Complex64> = (0..=6)
        .map(|r| correlation(&cp, &xi, &sz, &sz, r).expect("valid observables"))
        .collect();
    let ratio_err = (1..=5)
        .map(|r| ((corr[r + 1] / corr[r]).norm() - 1.0 / 3.0).abs())
        .fold(0.0, f64::max);
    // infinite chain against the open-window valence-bond oracle
    let one_site = common::open_window_oracle(std::slice::from_ref(&sz));
    let mut window_err: f64 = 0.0;
    for (r, c) in corr.iter().enumerate().take(6) {
        let mut letters = vec![sz.clone()];
        letters.extend(std::iter::repeat_n(ComplexMatrix::identity(3), r));
        letters.push(sz.clone());
        let oracle = common::open_window_oracle(&letters) - one_site * one_site;
        window_err = window_err.max((oracle - c).norm());
    }
    // periodic ring of 8 sites against the ring valence-bond oracle
    let length = 8;
    let mut ring_err: f64 = 0.0;
    let mut finite_size: f64 = 0.0;
    for r in 1..=6 {
        let mut letters = vec![sz.clone()];
        letters.extend(std::iter::repeat_n(ComplexMatrix::identity(3), r - 1));
        letters.push(sz.clone());
        let oracle = common::ring_oracle(&letters, length);
        let lib = ring_expectation(&cp, &Word::new(letters), length).expect("fits the ring");
        ring_err = ring_err.max((oracle - lib).norm());
        finite_size = finite_size.max((oracle - corr[r - 1]).norm());
    }
    ensure(
        ratio_err <= 1e-6 && window_err <= 1e-8 && ring_err <= 1e-8,
        format!(
            "ratio error {ratio_err:.2e} (tol 1e-6); infinite chain vs open-window oracle {window_err:.2e}, \
             ring L=8 vs ring oracle {ring_err:.2e} (tol 1e-8); ring-vs-infinite finite-size gap {finite_size:.2e}"
        ),
    )
}

fn product_reproduction() -> Outcome {
    let mut rng = random::rng(2024);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for d in [2, 3] {
        let psi = random::random_unit_vector(d, &mut rng);
        let pm = product_model(LocalState::Pure(psi.clone())).map_err(|e| e.to_string())?;
        let xi = invariant_functional(&pm.cp, 1e-10).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let n = rng.random_range(1..=6);
            let letters: Vec<ComplexMatrix> = (0..n).map(|_| random::gaussian_matrix(d, d, &mut rng)).collect();
            let expected: Complex64 = letters
                .iter()
                .map(|a| {
                    let apsi = a.mul_vec(&psi);
                    psi.iter().zip(&apsi).map(|(x, y)| x.conj() * y).sum::<Complex64>()
                })
                .product();
            let got = omega_eval(&pm.cp, &xi, &Word::new(letters)).map_err(|e| e.to_string())?;
            worst = worst.max((got - expected).norm());
            count += 1;
        }
    }
    ensure(
        worst <= 1e-12,
        format!("{count} words, max |ω_n − Π ω₀| = {worst:.2e} (tol 1e-12)"),
    )
}

fn small_dims(k: u64) -> (usize, usize) {
    (1 + (k % 3) as usize, 1 + ((k / 3) % 3) as usize)
}

// A one-letter site algebra makes the shift map a unitary conjugation with a
// degenerate fixed space, so models that need a unique ξ start at d = 2.
fn ergodic_dims(k: u64) -> (usize, usize) {
    (2 + (k % 2) as usize, 1 + ((k / 2) % 3) as usize)
}

fn cp_certification() -> Outcome {
    let mut worst = f64::INFINITY;
    for k in 0..50 {
        let (d, r) = small_dims(k);
        worst = worst.min(choi(&random_model(d, r, 100 + k)).min_eigenvalue());
    }
    let aklt_min = choi(&aklt_model().cp).min_eigenvalue();
    // flip the sign of the top Choi eigenvalue of a valid map
    let cp = random_model(2, 2, 7);
    let c = choi(&cp);
    let eig = herm_eig(&c.matrix).map_err(|e| e.to_string())?;
    let top = eig.eigenvalues.len() - 1;
    let corrupted = eig.reconstruct_with(|l| l);
    let u = eig.eigenvector(top);
    let mut bad = corrupted.clone();
    bad.axpy(
        Complex64::new(-2.0 * eig.eigenvalues[top], 0.0),
        &ComplexMatrix::outer(&u, &u),
    );
    let mut bad_choi = choi_of_superop(cp.superop(), 2, 2);
    bad_choi.matrix = bad;
    let rejected = matches!(
        stinespring_from_choi(&superop_from_choi(&bad_choi), 2, 2, CP_TOL),
        Err(Error::NotCp { .. })
    );
    ensure(
        worst >= -1e-10 && aklt_min >= -1e-10 && rejected,
        format!("min Choi eigenvalue over 50 models {worst:.2e}, AKLT {aklt_min:.2e} (tol −1e-10); corrupted Choi rejected: {rejected}"),
    )
}

fn markov_property() -> Outcome {
    let mut models: Vec<CpMapData> = (0..20)
        .map(|k| {
            let (d, r) = small_dims(k + 1);
            random_model(d, r, 300 + k)
        })
        .collect();
    models.push(aklt_model().cp);
    let mut rng = random::rng(77);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for cp in &models {
        let (d, r) = (cp.d(), cp.r());
        for total in 0..=5 {
            for m in 0..=total {
                let x = Word::new((0..m).map(|_| common::unit_hermitian(d, &mut rng)).collect());
                let y = Word::new((0..total - m).map(|_| common::unit_hermitian(d, &mut rng)).collect());
                let t = common::unit_hermitian(r, &mut rng);
                let check = markov_check(cp, &x, &y, &t, 1e-10).map_err(|e| e.to_string())?;
                worst = worst.max(check.residual);
                checks += 1;
            }
        }
    }
    ensure(
        worst <= 1e-10,
        format!("{checks} (m,n) checks on 21 models, max residual {worst:.2e} (tol 1e-10)"),
    )
}

fn stinespring_roundtrip() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let (d, r) = small_dims(k + 2);
        let cp = random_model(d, r, 500 + k);
        let recovered = stinespring_from_choi(cp.superop(), d, r, CP_TOL).map_err(|e| e.to_string())?;
        let dil = recovered.dilation().expect("dilation attached");
        let rebuilt = CpMapData::from_dilation(dil.v.clone(), d, dil.multiplicity, r).map_err(|e| e.to_string())?;
        worst = worst.max(rebuilt.superop().max_abs_diff(cp.superop()));
    }
    ensure(
        worst <= 1e-8,
        format!("20 models, max superoperator residual {worst:.2e} (tol 1e-8)"),
    )
}

fn opprod_equivalence() -> Outcome {
    let mut rng = random::rng(9);
    let psi = random::random_unit_vector(2, &mut rng);
    let mut models = vec![
        product_model(LocalState::Pure(psi)).map_err(|e| e.to_string())?.cp,
        aklt_model().cp,
    ];
    models.extend((0..10).map(|k| {
        let (d, r) = ergodic_dims(k);
        random_model(d, r, 700 + k)
    }));
    let (mut worst, mut worst_gamma): (f64, f64) = (0.0, 0.0);
    for cp in &models {
        let em = extend_model(cp).map_err(|e| e.to_string())?;
        let xi = invariant_functional(cp, 1e-9).map_err(|e| e.to_string())?;
        let (d, r) = (cp.d(), cp.r());
        for _ in 0..50 {
            let n = rng.random_range(1..=5);
            let word = Word::new((0..n).map(|_| common::unit_hermitian(d, &mut rng)).collect());
            let t = common::unit_hermitian(r, &mut rng);
            let via = op_product_eval(&em, &word, &t).map_err(|e| e.to_string())?;
            let direct = embed_reduced(&iterate(cp, &word, &t).map_err(|e| e.to_string())?);
            worst = worst.max(via.distance(&direct));
            let g = gamma_n_presentation(&em, &xi, &word).map_err(|e| e.to_string())?;
            let w = omega_eval(cp, &xi, &word).map_err(|e| e.to_string())?;
            worst_gamma = worst_gamma.max((g - w).norm());
        }
    }
    ensure(
        worst <= 1e-9 && worst_gamma <= 1e-9,
        format!("12 models × 50 words: operator product {worst:.2e}, Γ_n presentation {worst_gamma:.2e} (tol 1e-9)"),
    )
}

fn kernel_dimensions() -> Outcome {
    let pm = product_model(LocalState::Pure(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    ]))
    .map_err(|e| e.to_string())?;
    let xi = invariant_functional(&pm.cp, 1e-10).map_err(|e| e.to_string())?;
    let mut product_dims = Vec::new();
    for m in 1..=3 {
        for n in 1..=3 {
            let f = functional_matrix(&pm.cp, &xi, m, n).map_err(|e| e.to_string())?;
            product_dims.push(kernel_basis(&f, 1e-8).quotient_dim);
        }
    }
    let start = Instant::now();
    let cp = aklt_model().cp;
    let xi = invariant_functional(&cp, 1e-10).map_err(|e| e.to_string())?;
    let profile = quotient_profile(&cp, &xi, 2, 2, 1e-8).map_err(|e| e.to_string())?;
    let f = functional_matrix(&cp, &xi, 2, 2).map_err(|e| e.to_string())?;
    let q = kernel_basis(&f, 1e-8).quotient_dim;
    let secs = start.elapsed().as_secs_f64();
    ensure(
        product_dims.iter().all(|&q| q == 1) && q == 4 && profile.stabilized && profile.quotient_dims == vec![4, 4] && secs < 300.0,
        format!(
            "product quotient dims (m,n ≤ 3) {product_dims:?}; AKLT quotient dims for m_left = 1,2 at n_right = 2: {:?}, stabilized {}, {secs:.2}s",
            profile.quotient_dims, profile.stabilized
        ),
    )
}

fn shift_invariance() -> Outcome {
    let mut rng = random::rng(11);
    let mut models = vec![
        aklt_model().cp,
        product_model(LocalState::Pure(random::random_unit_vector(3, &mut rng)))
            .map_err(|e| e.to_string())?
            .cp,
        product_model(LocalState::Mixed(ComplexMatrix::diag_real(&[0.5, 0.3, 0.2])))
            .map_err(|e| e.to_string())?
            .cp,
    ];
    models.extend((0..10).map(|k| {
        let (d, r) = ergodic_dims(k);
        random_model(d, r, 900 + k)
    }));
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for cp in &models {
        let xi = match invariant_functional(cp, 1e-9) {
            Ok(xi) => xi,
            Err(e) => {
                eprintln!("  no invariant ξ for d={} r={}: {e}", cp.d(), cp.r());
                continue;
            }
        };
        used += 1;
        for n in 1..=4 {
            let word = Word::new((0..n).map(|_| common::unit_hermitian(cp.d(), &mut rng)).collect());
            let check = shift_invariance_check(cp, &xi, &word, 1e-10).map_err(|e| e.to_string())?;
            worst = worst.max(check.residual());
        }
    }
    ensure(
        worst <= 1e-10 && used == models.len(),
        format!(
            "{used}/{} models with invariant ξ, max shift/tower residual {worst:.2e} (tol 1e-10)",
            models.len()
        ),
    )
}

fn order_seminorm_sanity() -> Outcome {
    let mut rng = random::rng(12);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let n = 2 + k % 3;
        let a = random::random_hermitian(n, &mut rng);
        let v = order_seminorm(&a, &KernelBasis::empty(n), 1e-9).map_err(|e| e.to_string())?;
        worst = worst.max((v - operator_norm(&a)).abs());
    }
    let unit = order_seminorm(&ComplexMatrix::identity(3), &KernelBasis::empty(3), 1e-9).map_err(|e| e.to_string())?;
    let cp = aklt_model().cp;
    let xi = invariant_functional(&cp, 1e-10).map_err(|e| e.to_string())?;
    let kernel = kernel_basis(&functional_matrix(&cp, &xi, 1, 1).map_err(|e| e.to_string())?, 1e-8);
    let unit_quotient = order_seminorm(&ComplexMatrix::identity(3), &kernel, 1e-9).map_err(|e| e.to_string())?;
    ensure(
        worst <= 1e-6 && unit == 1.0 && unit_quotient == 1.0,
        format!(
            "max |⟦a⟧ − ‖a‖| over 50 matrices {worst:.2e} (tol 1e-6); ⟦I⟧ = {unit} (C*-algebra), {unit_quotient} (AKLT one-site quotient)"
        ),
    )
}

fn fullness() -> Outcome {
    let cp = aklt_model().cp;
    let aklt = fullness_dimension(&cp, &pauli_basis()[3], 2).map_err(|e| e.to_string())?;
    let pm = product_model(LocalState::Pure(vec![
        Complex64::new(0.6, 0.0),
        Complex64::new(0.8, 0.0),
    ]))
    .map_err(|e| e.to_string())?;
    let product: Vec<usize> = (1..=5)
        .map(|n| fullness_dimension(&pm.cp, &ComplexMatrix::identity(1), n).expect("nonzero seed"))
        .collect();
    ensure(
        aklt == 4 && product.iter().all(|&k| k == 1),
        format!("AKLT (σ³, n=2): {aklt}; product (n = 1..5): {product:?}"),
    )
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_fcs");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let word = dir.path().join("word.json");
    let (sx, _, sz) = aklt_spin_operators();
    let rows = |m: &ComplexMatrix| {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let letters = vec![rows(&sz), rows(&ComplexMatrix::identity(3)), rows(&sx)];
    std::fs::write(&word, serde_json::to_string(&letters).unwrap()).map_err(|e| e.to_string())?;
    let word = word.to_str().unwrap().to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["verify", "aklt", "--seed", "7"],
        vec!["verify", "random:2:3:5", "--seed", "7", "--jobs", "3"],
        vec!["expect", "aklt", &word, "--seed", "7"],
        vec![
            "correlate",
            "aklt",
            "--obs",
            "Sz",
            "--rmax",
            "8",
            "--seed",
            "7",
            "--jobs",
            "2",
        ],
        vec!["spectrum", "random:3:2:1", "--seed", "7"],
        vec!["kernel", "aklt", "--mleft", "2", "--nright", "2", "--seed", "7"],
        vec!["opprod-check", "aklt", "-n", "4", "--trials", "20", "--seed", "7"],
    ];
    let mut failures = Vec::new();
    for args in &commands {
        let first = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        let second = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        if first.stdout != second.stdout || first.status != second.status || first.stdout.is_empty() {
            failures.push(args.join(" "));
        }
    }
    ensure(
        failures.is_empty(),
        format!(
            "{} commands run twice, byte-identical: {}",
            commands.len(),
            if failures.is_empty() {
                "all".to_string()
            } else {
                format!("not {failures:?}")
            }
        ),
    )
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("AKLT unitality", aklt_unitality),
        ("AKLT Pauli eigenvalue", aklt_pauli_eigenvalue),
        ("AKLT transfer spectrum and boundary state", aklt_spectrum_and_boundary),
        ("AKLT correlation decay", aklt_correlation_decay),
        ("product-state reproduction", product_reproduction),
        ("CP certification", cp_certification),
        ("Markov property", markov_property),
        ("Stinespring roundtrip", stinespring_roundtrip),
        ("operator-product equivalence", opprod_equivalence),
        ("entanglement-kernel dimensions", kernel_dimensions),
        ("shift invariance and tower consistency", shift_invariance),
        ("order seminorm sanity", order_seminorm_sanity),
        ("fullness", fullness),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} [{tag}] {name}: {detail} ({secs:.2}s)", k + 1);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
