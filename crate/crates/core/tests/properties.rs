use std::f64::consts::PI;

use proptest::prelude::*;
use qwalk_core::circuit::{depth, depth_with};
use qwalk_core::coin::{
    coin_from_k_params, dyadic_coordinate, euler_factorization, euler_reconstruct, random_field, random_params,
    total_coin_matrix,
};
use qwalk_core::compile::{compile, decompose_mcu, expand_swap, is_compiled};
use qwalk_core::shift::{build_shift_id, build_shift_qft};
use qwalk_core::statevec::{apply_gate, circuit_unitary, kron, run_dense, spectral_norm_diff};
use qwalk_core::walsh::{
    build_walsh, exact_unitary, truncation_error_bound, walsh_coefficients, walsh_sign, WalshSeries,
};
use qwalk_core::{
    Circuit, ComplexMatrix, DepthConvention, Gate, Mat2, Op, RegisterMap, Sigma, SparseState, C64,
};

fn one_qubit_op() -> impl Strategy<Value = Op> {
    let angle = -PI..PI;
    prop_oneof![
        Just(Op::H),
        Just(Op::X),
        Just(Op::Z),
        angle.clone().prop_map(Op::Rx),
        angle.clone().prop_map(Op::Ry),
        angle.clone().prop_map(Op::Rz),
        angle.clone().prop_map(Op::P),
        (0usize..4, angle.clone()).prop_map(|(s, a)| Op::Rot([Sigma::I, Sigma::X, Sigma::Y, Sigma::Z][s], a)),
        (0.0..PI, 0.0..PI, -PI..PI, -PI..PI).prop_map(|(a, t, p, l)| Op::U2(coin_from_k_params(a, t, p, l))),
    ]
}

/// A gate on `q` wires: a one-qubit op with up to two controls, or a
/// (controlled) swap.
fn gate(q: usize) -> impl Strategy<Value = Gate> {
    (one_qubit_op(), Just((0..q).collect::<Vec<usize>>()).prop_shuffle(), 0usize..3, 0usize..8)
        .prop_map(move |(op, wires, controls, pick)| {
            let controls = controls.min(q - 1);
            if pick == 0 && q >= 2 {
                let c = controls.min(q - 2);
                Gate::new(Op::Swap, wires[2..2 + c].to_vec(), vec![wires[0], wires[1]])
            } else {
                Gate::new(op, wires[1..1 + controls].to_vec(), vec![wires[0]])
            }
        })
}

fn circuit(max_qubits: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_qubits).prop_flat_map(move |q| {
        (prop::collection::vec(gate(q), 0..max_gates), -PI..PI).prop_map(move |(gates, phase)| {
            let mut c = Circuit::new(RegisterMap::walk(q - 1), "random");
            for g in gates {
                c.push(g).unwrap();
            }
            c.global_phase = phase;
            c
        })
    })
}

fn random_unitary(seed: u64) -> Mat2 {
    let p = random_params(1, seed)[0];
    coin_from_k_params(p[0], p[1], p[2], p[3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn builder_unitaries_are_unitary(c in circuit(5, 12)) {
        prop_assert!(circuit_unitary(&c).unwrap().unitarity_defect() <= 1e-10);
    }

    #[test]
    fn sparse_kernels_match_unitary_columns(c in circuit(6, 10)) {
        let u = circuit_unitary(&c).unwrap();
        for j in 0..1usize << c.num_wires() {
            let mut s = SparseState::basis(c.num_wires(), j as u128).unwrap();
            s.apply_circuit(&c).unwrap();
            let col = u.column(j);
            for (i, want) in col.iter().enumerate() {
                prop_assert!((s.amplitude(i as u128) - want).norm() <= 1e-10);
            }
            let dense = run_dense(&c, j).unwrap();
            prop_assert!(dense.iter().zip(&col).all(|(a, b)| (a - b).norm() <= 1e-10));
        }
    }

    #[test]
    fn apply_gate_matches_kron(seed in any::<u64>(), target in 0usize..3) {
        let u = random_unitary(seed).to_matrix();
        let id = ComplexMatrix::identity(2);
        let full = match target {
            0 => kron(&kron(&id, &id).unwrap(), &u).unwrap(),
            1 => kron(&kron(&id, &u).unwrap(), &id).unwrap(),
            _ => kron(&kron(&u, &id).unwrap(), &id).unwrap(),
        };
        for j in 0..8 {
            let s = apply_gate(&SparseState::basis(3, j).unwrap(), &u, &[target]).unwrap();
            for i in 0..8 {
                prop_assert!((s.amplitude(i) - full[(i as usize, j as usize)]).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn kron_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (random_unitary(a).to_matrix(), random_unitary(b).to_matrix(), random_unitary(c).to_matrix());
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-12);
    }

    #[test]
    fn depth_is_monotone_and_bounded(c in circuit(5, 16), g in gate(5)) {
        for conv in [DepthConvention::Expanded, DepthConvention::SwapWeighted] {
            let d = depth_with(&c, conv);
            let mut longer = c.clone();
            if g.wires().all(|w| w < c.num_wires()) {
                longer.push(g.clone()).unwrap();
                prop_assert!(depth_with(&longer, conv) >= d);
            }
        }
        let expanded: usize = c.gates.iter().map(|g| if g.op == Op::Swap { expand_swap(g).len() } else { 1 }).sum();
        prop_assert!(depth_with(&c, DepthConvention::Expanded) <= expanded);
        prop_assert!(depth(&c) <= 3 * c.len());
        let compiled = compile(&c).unwrap();
        prop_assert!(depth_with(&compiled, DepthConvention::Expanded) <= compiled.len());
    }

    #[test]
    fn compile_preserves_semantics(c in circuit(5, 8)) {
        let compiled = compile(&c).unwrap();
        prop_assert!(is_compiled(&compiled));
        let (a, b) = (circuit_unitary(&c).unwrap(), circuit_unitary(&compiled).unwrap());
        prop_assert!(spectral_norm_diff(&a, &b).unwrap() <= 1e-8);
    }

    #[test]
    fn euler_reconstructs_unitary(a in 0.0..PI, t in 0.0..PI, p in -PI..PI, l in -PI..PI) {
        let u = coin_from_k_params(a, t, p, l);
        prop_assert!(euler_reconstruct(euler_factorization(&u)).max_abs_diff(&u) <= 1e-10);
    }

    #[test]
    fn full_walsh_series_is_exact(n in 1usize..5, values in prop::collection::vec(-10.0..10.0f64, 16), s in 0usize..4) {
        let samples = &values[..1 << n];
        let sigma = [Sigma::I, Sigma::X, Sigma::Y, Sigma::Z][s];
        let series = walsh_coefficients(samples).unwrap();
        let u = circuit_unitary(&build_walsh(&series, sigma)).unwrap();
        prop_assert!(u.max_abs_diff(&exact_unitary(samples, sigma).unwrap()).unwrap() <= 1e-9);
        let back = series.reconstruct();
        prop_assert!(back.iter().zip(samples).all(|(a, b)| (a - b).abs() <= 1e-10));
    }

    #[test]
    fn shift_moves_each_coin_component(n in 1usize..5, k in 0usize..16, a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let big = 1usize << n;
        let k = k % big;
        let norm = (a * a + b * b).sqrt().max(1e-3);
        let (alpha, beta) = (C64::new(a / norm, 0.0), C64::new(0.0, b / norm));
        for c in [build_shift_qft(n), build_shift_id(n)] {
            let u = circuit_unitary(&c).unwrap();
            let mut v = vec![C64::new(0.0, 0.0); 2 * big];
            v[2 * k] = alpha;
            v[2 * k + 1] = beta;
            let out = u.mul_vec(&v).unwrap();
            prop_assert!((out[2 * ((k + big - 1) % big)] - alpha).norm() <= 1e-9);
            prop_assert!((out[2 * ((k + 1) % big) + 1] - beta).norm() <= 1e-9);
        }
    }
}

#[test]
fn euler_reconstructs_seeded_coins() {
    let params = random_params(10, 77);
    assert_eq!(params.len(), 1024);
    let mut worst = 0.0f64;
    for p in params.iter().take(1000) {
        let u = coin_from_k_params(p[0], p[1], p[2], p[3]);
        worst = worst.max(euler_reconstruct(euler_factorization(&u)).max_abs_diff(&u));
    }
    assert!(worst <= 1e-10, "{worst}");
}

#[test]
fn total_coin_is_block_diagonal() {
    for n in 1..=4 {
        let m = total_coin_matrix(&random_field(n, 11 * n as u64)).unwrap();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if r / 2 != c / 2 {
                    assert_eq!(m[(r, c)], C64::new(0.0, 0.0));
                }
            }
        }
    }
}

#[test]
fn dyadic_coordinates_are_injective() {
    for n in 1..=10 {
        let mut xs: Vec<f64> = (0..1usize << n).map(|k| dyadic_coordinate(k, n).unwrap()).collect();
        xs.sort_by(f64::total_cmp);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert!(xs[0] >= 0.0 && *xs.last().unwrap() < 1.0);
    }
}

#[test]
fn walsh_functions_are_orthonormal() {
    for n in 1..=5 {
        let big = 1usize << n;
        for j in 0..big {
            for l in 0..big {
                let s: f64 = (0..big).map(|p| walsh_sign(j, p) * walsh_sign(l, p)).sum::<f64>() / big as f64;
                assert_eq!(s, if j == l { 1.0 } else { 0.0 });
            }
        }
    }
}

#[test]
fn sinusoidal_truncation_within_bound() {
    let n = 6;
    let amp = 3.0;
    let samples: Vec<f64> =
        (0..1 << n).map(|k| amp * (2.0 * PI * dyadic_coordinate(k, n).unwrap()).sin()).collect();
    let exact = exact_unitary(&samples, Sigma::Z).unwrap();
    let series: WalshSeries = walsh_coefficients(&samples).unwrap();
    for m in 0..=n {
        let u = circuit_unitary(&build_walsh(&series.truncate(m).unwrap(), Sigma::Z)).unwrap();
        let err = (0..u.rows()).map(|i| (u[(i, i)] - exact[(i, i)]).norm()).fold(0.0, f64::max);
        assert!(err <= truncation_error_bound(2.0 * PI * amp, m) + 1e-12, "m={m}: {err}");
    }
}

#[test]
fn mcu_cost_grows_polynomially() {
    let u = random_unitary(3);
    let count = |k: usize| decompose_mcu(&(1..=k).collect::<Vec<_>>(), 0, &u).unwrap().gates.len() as f64;
    let small: Vec<f64> = (1..=6).map(count).collect();
    assert!(small.windows(2).all(|w| w[0] < w[1]), "{small:?}");
    // Local log-log slope; cubic growth would give 3.
    let slope = |a: usize, b: usize| (count(b) / count(a)).ln() / (b as f64 / a as f64).ln();
    let (s1, s2) = (slope(8, 16), slope(16, 32));
    assert!(s2 < 2.5 && s2 < s1, "slopes {s1:.2}, {s2:.2}");
    let c = count(32) / 1024.0;
    assert!((1..=32).all(|k| count(k) <= c * (k * k) as f64 * 1.2), "c = {c}");
}

#[test]
fn shift_schemes_agree_after_compilation() {
    for n in 1..=4 {
        let a = circuit_unitary(&compile(&build_shift_qft(n)).unwrap()).unwrap();
        let b = circuit_unitary(&compile(&build_shift_id(n)).unwrap()).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() <= 1e-9, "n={n}");
    }
}
