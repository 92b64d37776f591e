//! Independent checks of the numerical kernels against hand-written oracles.

mod common;

use std::f64::consts::PI;

use abssep::criteria::{is_absolutely_separable, Verdict};
use abssep::experiments::GridSpec;
use abssep::linalg::{
    dagger, eig_hermitian_desc, kron, partial_transpose_b, rank_with_tol, ComplexMatrix, RANK_TOL,
};
use abssep::states::{
    bd_alpha_family, bd_from_correlations, bd_from_probs, correlations_to_probs, modified_werner,
    probs_to_correlations, WernerParams,
};
use abssep::switch::{
    measure_control, switch_joint, switch_unitary_closed, ControlState, KrausChannel,
};
use abssep::unitaries::{haar_random_with, RngSeed, UnitaryMatrix};
use abssep::{BipartiteDims, Branch, DensityMatrix};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Coefficients `c_0..c_n` of `det(λI - A) = Σ c_k λ^(n-k)` by Faddeev–LeVerrier.
fn char_poly(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.rows();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        let shifted = &m + &ComplexMatrix::identity(n).scale(coeffs[k - 1]);
        m = a * &shifted;
        let c = -(m.trace()) / k as f64;
        coeffs.push(c);
    }
    coeffs
}

fn eval_poly(coeffs: &[Complex64], x: f64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

#[test]
fn eigenvalues_are_roots_of_the_characteristic_polynomial() {
    let mut r = rng(1);
    for _ in 0..50 {
        let h = common::random_hermitian(4, &mut r);
        let eigs = eig_hermitian_desc(&h).unwrap();
        let poly = char_poly(&h);
        let scale = 1.0 + h.max_abs().powi(4);
        for &l in &eigs {
            assert!(eval_poly(&poly, l).norm() / scale < 1e-10, "λ = {l}");
        }
        let sum: f64 = eigs.iter().sum();
        assert!((sum - h.trace().re).abs() < 1e-12);
        assert!(eigs.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn kron_mixed_product_and_associativity() {
    let mut r = rng(2);
    for _ in 0..20 {
        let a = common::ginibre(2, 2, &mut r);
        let b = common::ginibre(3, 3, &mut r);
        let c = common::ginibre(2, 2, &mut r);
        let d = common::ginibre(3, 3, &mut r);
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        assert!(left.max_abs_diff(&right) < 1e-12);
        // bilinearity in the first factor
        let sum = kron(&(&a + &c), &b);
        let split = &kron(&a, &b) + &kron(&c, &b);
        assert!(sum.max_abs_diff(&split) < 1e-12);
    }
}

/// Entry-by-entry partial transpose from the index definition.
fn partial_transpose_oracle(m: &ComplexMatrix, d_a: usize, d_b: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d_a * d_b, d_a * d_b, |row, col| {
        let (i, k) = (row / d_b, row % d_b);
        let (j, l) = (col / d_b, col % d_b);
        m.get(i * d_b + l, j * d_b + k)
    })
}

#[test]
fn partial_transpose_matches_index_oracle() {
    let mut r = rng(3);
    for d_b in [2usize, 3, 5] {
        let dims = BipartiteDims::qubit_qudit(d_b);
        let rho = common::random_density(dims, dims.total(), &mut r);
        let pt = partial_transpose_b(rho.matrix(), dims).unwrap();
        assert!(pt.max_abs_diff(&partial_transpose_oracle(rho.matrix(), 2, d_b)) == 0.0);
        let back = partial_transpose_b(&pt, dims).unwrap();
        assert!(back.max_abs_diff(rho.matrix()) == 0.0);
        assert!((pt.trace() - rho.matrix().trace()).norm() < 1e-14);
    }
}

#[test]
fn rank_plus_nullity_is_dimension() {
    let mut r = rng(4);
    for d_b in [2usize, 3, 4] {
        let dims = BipartiteDims::qubit_qudit(d_b);
        let n = dims.total();
        for k in 1..=n {
            let rho = common::random_density(dims, k, &mut r);
            let rank = rank_with_tol(rho.matrix(), RANK_TOL).unwrap();
            let nullity = eig_hermitian_desc(rho.matrix())
                .unwrap()
                .iter()
                .filter(|l| l.abs() <= RANK_TOL)
                .count();
            assert_eq!(rank, k);
            assert_eq!(rank + nullity, n);
        }
    }
}

/// `¼ Σ_ij (K_i K_j ± K_j K_i) ρ (…)†`, the reduced state for control `|+>`
/// measured in `|±>`, written without any control-qubit tensor products.
fn switch_oracle(
    k1: &[ComplexMatrix],
    k2: &[ComplexMatrix],
    rho: &ComplexMatrix,
    sign: f64,
) -> ComplexMatrix {
    let n = rho.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for a in k1 {
        for b in k2 {
            let l = (&(a * b) + &(b * a).scale_real(sign)).scale_real(0.5);
            out = &out + &(&(&l * rho) * &dagger(&l));
        }
    }
    out
}

/// Kraus operators from a random isometry `V: C^n -> C^n ⊗ C^m`.
fn random_channel(n: usize, m: usize, r: &mut ChaCha20Rng) -> KrausChannel {
    let u = haar_random_with(n * m, r);
    let ops = (0..m)
        .map(|k| ComplexMatrix::from_fn(n, n, |i, j| u.matrix().get(i * m + k, j * m)))
        .collect();
    KrausChannel::new(ops).unwrap()
}

#[test]
fn switch_of_general_channels_matches_expansion() {
    let mut r = rng(5);
    for _ in 0..30 {
        let dims = BipartiteDims::two_qubits();
        let ch1 = random_channel(4, 2, &mut r);
        let ch2 = random_channel(4, 3, &mut r);
        let rho = common::random_density(dims, 4, &mut r);
        let joint = switch_joint(&ch1, &ch2, &rho, ControlState::plus()).unwrap();
        let total: f64 = (0..8).map(|i| joint.matrix.get(i, i).re).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mut probs = 0.0;
        for (branch, sign) in [(Branch::Plus, 1.0), (Branch::Minus, -1.0)] {
            let oracle = switch_oracle(ch1.ops(), ch2.ops(), rho.matrix(), sign);
            let p = oracle.trace().re;
            let got = measure_control(&joint, branch).unwrap();
            assert!((got.probability - p).abs() < 1e-12);
            assert!(got.state.matrix().max_abs_diff(&oracle.scale_real(1.0 / p)) < 1e-11);
            probs += p;
        }
        assert!((probs - 1.0).abs() < 1e-12);
    }
}

#[test]
fn commuting_unitaries_never_reach_the_minus_branch() {
    let mut r = rng(6);
    let dims = BipartiteDims::two_qubits();
    for _ in 0..20 {
        let u = haar_random_with(4, &mut r);
        let u2 = UnitaryMatrix::new(u.matrix() * u.matrix()).unwrap();
        let rho = common::random_density(dims, 4, &mut r);
        let plus = switch_unitary_closed(&u, &u2, &rho, Branch::Plus).unwrap();
        assert!((plus.probability - 1.0).abs() < 1e-12);
        let u3 = u.matrix() * u2.matrix();
        let expected = &(&u3 * rho.matrix()) * &dagger(&u3);
        assert!(plus.state.matrix().max_abs_diff(&expected) < 1e-12);
        assert!(switch_unitary_closed(&u, &u2, &rho, Branch::Minus).is_err());
    }
}

#[test]
fn as_report_depends_only_on_the_spectrum() {
    let mut r = rng(7);
    for d_b in [2usize, 3] {
        let dims = BipartiteDims::qubit_qudit(d_b);
        for _ in 0..20 {
            let rho = common::random_density(dims, dims.total(), &mut r);
            let v = haar_random_with(dims.total(), &mut r);
            let rotated = &(v.matrix() * rho.matrix()) * &dagger(v.matrix());
            let rotated = DensityMatrix::new(rotated.hermitian_part(), dims, 1e-10).unwrap();
            let a = is_absolutely_separable(&rho).unwrap();
            let b = is_absolutely_separable(&rotated).unwrap();
            assert!((a.as_lhs - b.as_lhs).abs() < 1e-12);
            assert_eq!(a.verdict, b.verdict);
        }
    }
}

#[test]
fn werner_spectrum_is_independent_of_the_pure_state() {
    let grid = GridSpec::new(0.0, 1.0, 21).unwrap();
    for p in grid.points() {
        for gamma in [0.0, PI / 8.0, PI / 4.0, 1.2] {
            for phi in [0.0, 0.7, PI] {
                let rho = modified_werner(WernerParams { p, gamma, phi }).unwrap();
                let eigs = eig_hermitian_desc(rho.matrix()).unwrap();
                let noise = (1.0 - p) / 4.0;
                let expected = [p + noise, noise, noise, noise];
                for (x, y) in eigs.iter().zip(expected) {
                    assert!((x - y).abs() < 1e-14, "p={p} γ={gamma} φ={phi}");
                }
            }
        }
    }
}

#[test]
fn werner_lhs_matches_spectrum_formula() {
    // λ1 - λ3 - 2 sqrt(λ2 λ4) with one large and three equal eigenvalues
    for k in 0..=100 {
        let p = k as f64 / 100.0;
        let rho = modified_werner(WernerParams::maximally_entangled(p)).unwrap();
        let lhs = is_absolutely_separable(&rho).unwrap().as_lhs;
        let noise = (1.0 - p) / 4.0;
        let expected = (p + noise) - noise - 2.0 * noise;
        assert!((lhs - expected).abs() < 1e-12);
    }
}

#[test]
fn alpha_family_crosses_the_boundary_once() {
    // starts on the boundary at α = 1/6; for α > 1/4 the lhs is 6α - 2
    let grid = GridSpec::new(1.0 / 6.0, 0.5, 2001).unwrap();
    let points = grid.points();
    let lhs: Vec<f64> = points
        .iter()
        .map(|&a| {
            is_absolutely_separable(&bd_alpha_family(a).unwrap())
                .unwrap()
                .as_lhs
        })
        .collect();
    assert!(lhs[0].abs() < 1e-12);
    let crossings: Vec<usize> = (1..lhs.len() - 1)
        .filter(|&i| (lhs[i] > 0.0) != (lhs[i + 1] > 0.0))
        .collect();
    assert_eq!(crossings.len(), 1);
    let i = crossings[0];
    assert!(points[i] <= 1.0 / 3.0 + 1e-12 && 1.0 / 3.0 <= points[i + 1] + 1e-12);
    for (&a, &l) in points.iter().zip(&lhs).filter(|(&a, _)| a > 0.25) {
        assert!((l - (6.0 * a - 2.0)).abs() < 1e-12, "α = {a}");
    }
}

#[test]
fn flat_spectra_sit_on_the_boundary() {
    for d in [2usize, 3, 4, 10] {
        let n = 2 * d;
        let mut eigs = vec![1.0 / (n as f64 - 1.0); n];
        eigs[n - 1] = 0.0;
        let report = abssep::criteria::spectrum_report(eigs, 1e-9).unwrap();
        assert_eq!(report.verdict, Verdict::AsBoundary);
    }
}

#[test]
fn haar_trace_moment_small_sample() {
    let seed = RngSeed(11);
    let n = 20_000u64;
    let mean: f64 = (0..n)
        .map(|i| {
            haar_random_with(3, &mut seed.rng_for(i))
                .matrix()
                .trace()
                .norm_sqr()
        })
        .sum::<f64>()
        / n as f64;
    assert!((mean - 1.0).abs() < 0.05, "mean {mean}");
}

proptest! {
    #[test]
    fn probs_and_correlations_round_trip(
        a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0, d in 0.0f64..1.0,
    ) {
        prop_assume!(a + b + c + d > 1e-6);
        let s = a + b + c + d;
        let p = [a / s, b / s, c / s, d / s];
        let [c1, c2, c3] = probs_to_correlations(p);
        let back = correlations_to_probs(c1, c2, c3);
        for (x, y) in p.iter().zip(back) {
            prop_assert!((x - y).abs() < 1e-14);
        }
        let from_corr = bd_from_correlations(c1, c2, c3).unwrap();
        let from_probs = bd_from_probs(p).unwrap();
        prop_assert!(from_corr.matrix().max_abs_diff(from_probs.matrix()) < 1e-14);
    }

    #[test]
    fn switch_branches_are_complete(seed in any::<u64>(), d_b in 2usize..4) {
        let mut r = rng(seed);
        let dims = BipartiteDims::qubit_qudit(d_b);
        let u1 = haar_random_with(dims.total(), &mut r);
        let u2 = haar_random_with(dims.total(), &mut r);
        let rho = common::random_density(dims, dims.total(), &mut r);
        let p: f64 = [Branch::Plus, Branch::Minus]
            .into_iter()
            .map(|b| abssep::switch::branch_probability(&u1, &u2, &rho, b))
            .sum();
        prop_assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_preserves_hermiticity_and_trace(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dims = BipartiteDims::qubit_qudit(3);
        let rho = common::random_density(dims, 6, &mut r);
        let pt = partial_transpose_b(rho.matrix(), dims).unwrap();
        prop_assert!(pt.hermiticity_defect() < 1e-15);
        prop_assert!((pt.trace().re - 1.0).abs() < 1e-12);
    }
}
