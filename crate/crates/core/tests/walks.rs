use std::f64::consts::FRAC_1_SQRT_2;

use qwalk_core::circuit::qasm::{from_qasm, to_qasm};
use qwalk_core::coin::{random_params, CoinSpec, ExplicitCoins, ParametricCoin};
use qwalk_core::compile::compile;
use qwalk_core::scaling::{field_for, Construction};
use qwalk_core::shift::ShiftScheme;
use qwalk_core::statevec::circuit_unitary;
use qwalk_core::walk::{oracle_for, run, run_trajectory, tvd, CoinBuilder, InitialState, WalkConfig, Walker};
use qwalk_core::Mat2;

fn config(n: usize, coin: CoinSpec, builder: CoinBuilder, shift: ShiftScheme, steps: usize) -> WalkConfig {
    WalkConfig {
        n,
        coin,
        builder,
        shift,
        steps,
        initial: InitialState::Product { k: (1 << n) / 2, coin: [[FRAC_1_SQRT_2, 0.0], [0.0, FRAC_1_SQRT_2]] },
        shots: None,
        seed: None,
    }
}

fn random_coin(n: usize, seed: u64) -> CoinSpec {
    CoinSpec::Parametric(ParametricCoin::KParams { n, params: random_params(n, seed) })
}

fn builders() -> [CoinBuilder; 4] {
    [
        CoinBuilder::Naive,
        CoinBuilder::Linear { parallel: true },
        CoinBuilder::Walsh { truncation: None },
        CoinBuilder::DenseOracle,
    ]
}

#[test]
fn builders_agree_step_by_step() {
    for n in 1..=3 {
        for shift in [ShiftScheme::Qft, ShiftScheme::Id] {
            let coin = random_coin(n, 40 + n as u64);
            let reference = run_trajectory(&config(n, coin.clone(), CoinBuilder::DenseOracle, shift, 50)).unwrap();
            for b in builders() {
                let traj = run_trajectory(&config(n, coin.clone(), b.clone(), shift, 50)).unwrap();
                assert_eq!(traj.len(), 51);
                for (step, (d, r)) in traj.iter().zip(&reference).enumerate() {
                    let dev = d.probabilities.iter().zip(&r.probabilities).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    assert!(dev <= 1e-8, "n={n} {shift:?} {b:?} step {step}: {dev}");
                    assert!((d.total() - 1.0).abs() <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn norm_is_conserved_and_ancillas_stay_clean() {
    let mut w = Walker::new(&config(4, random_coin(4, 9), CoinBuilder::Linear { parallel: true }, ShiftScheme::Qft, 0)).unwrap();
    for _ in 0..30 {
        w.step().unwrap();
        assert!((w.distribution().total() - 1.0).abs() <= 1e-9);
    }
    assert!(w.max_ancilla_residual() <= 1e-10);
}

#[test]
fn identity_coin_returns_after_n_steps() {
    for n in 1..=4 {
        let big = 1usize << n;
        let coin = CoinSpec::Explicit(ExplicitCoins { n, coins: vec![Mat2::identity(); big] });
        for shift in [ShiftScheme::Qft, ShiftScheme::Id] {
            let mut c = config(n, coin.clone(), CoinBuilder::Naive, shift, big);
            c.initial = InitialState::Basis { k: 1, coin: 0 };
            let traj = run_trajectory(&c).unwrap();
            for (t, d) in traj.iter().enumerate() {
                let home = d.probabilities[1];
                if t % big == 0 {
                    assert!((home - 1.0).abs() <= 1e-10);
                } else {
                    assert!(home <= 1e-10, "n={n} t={t}");
                }
            }
        }
    }
}

#[test]
fn sampled_counts_approach_exact_distribution() {
    let mut c = config(3, CoinSpec::Parametric(ParametricCoin::Reference), CoinBuilder::Walsh { truncation: None }, ShiftScheme::Qft, 12);
    c.shots = Some(100_000);
    c.seed = Some(7);
    let out = run(&c).unwrap();
    let d = tvd(&out.distribution.empirical().unwrap(), &oracle_for(&c).unwrap()).unwrap();
    assert!(d <= 0.02, "{d}");
    assert_eq!(run(&c).unwrap(), out);
    c.seed = Some(8);
    assert_ne!(run(&c).unwrap().distribution.counts, out.distribution.counts);
}

#[test]
fn stored_circuit_drives_the_walk() {
    let n = 2;
    let coin = random_coin(n, 3);
    let circuit = Construction::Walsh.build(&coin.build().unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coin.json");
    std::fs::write(&path, circuit.to_json()).unwrap();
    let c = config(n, coin.clone(), CoinBuilder::Circuit { path }, ShiftScheme::Id, 9);
    let a = run(&c).unwrap().distribution;
    let b = oracle_for(&c).unwrap();
    assert!(tvd(&a, &b).unwrap() <= 1e-9);
}

#[test]
fn compiled_builders_survive_qasm() {
    for construction in Construction::ALL {
        let c = compile(&construction.build(&field_for(2)).unwrap()).unwrap();
        let back = from_qasm(&to_qasm(&c).unwrap()).unwrap();
        assert_eq!(back.num_wires(), c.num_wires());
        let d = circuit_unitary(&back).unwrap().max_abs_diff(&circuit_unitary(&c).unwrap()).unwrap();
        assert!(d <= 1e-9, "{construction}: {d}");
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let mut c = config(2, random_coin(3, 1), CoinBuilder::Naive, ShiftScheme::Qft, 1);
    assert_eq!(run(&c).unwrap_err().code(), "size-mismatch");
    c.coin = random_coin(2, 1);
    c.initial = InitialState::Basis { k: 4, coin: 0 };
    assert!(run(&c).is_err());
    assert!(WalkConfig::from_json(r#"{"n":2}"#).is_err());
}
