//! Coin-dependent shift: coin |0⟩ moves the walker to k − 1, coin |1⟩ to
//! k + 1, modulo N = 2^n.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, Op, RegisterMap};
use crate::error::{Error, Result};
use crate::statevec::{dense_limit, ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftScheme {
    Qft,
    Id,
}

impl FromStr for ShiftScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qft" => Ok(ShiftScheme::Qft),
            "id" => Ok(ShiftScheme::Id),
            other => Err(Error::InvalidInput(format!("unknown shift scheme `{other}`"))),
        }
    }
}

/// Schemes with published closed-form costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostScheme {
    Qft,
    Id,
    IdAncilla,
}

impl FromStr for CostScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qft" => Ok(CostScheme::Qft),
            "id" => Ok(CostScheme::Id),
            "id-ancilla" => Ok(CostScheme::IdAncilla),
            other => Err(Error::InvalidInput(format!("unknown cost scheme `{other}`"))),
        }
    }
}

/// Exact permutation on the walk layout (index `2k + c`).
pub fn shift_permutation_matrix(n: usize) -> Result<ComplexMatrix> {
    let qubits = n + 1;
    if qubits > dense_limit() {
        return Err(Error::DenseLimitExceeded { qubits, limit: dense_limit() });
    }
    let big = 1usize << n;
    let mut m = ComplexMatrix::zeros(2 * big, 2 * big);
    for k in 0..big {
        m[(2 * ((k + big - 1) % big), 2 * k)] = C64::new(1.0, 0.0);
        m[(2 * ((k + 1) % big) + 1, 2 * k + 1)] = C64::new(1.0, 0.0);
    }
    Ok(m)
}

pub fn build_shift(scheme: ShiftScheme, n: usize) -> Circuit {
    match scheme {
        ShiftScheme::Qft => build_shift_qft(n),
        ShiftScheme::Id => build_shift_id(n),
    }
}

/// QFT on the position wires without the final bit reversal: the output
/// bit `p` carries the Fourier index bit `n − 1 − p`.
fn qft_no_swap(map: RegisterMap) -> Vec<Gate> {
    let n = map.n;
    let mut gates = Vec::new();
    for t in (0..n).rev() {
        gates.push(Gate::single(Op::H, map.position(t)));
        for c in (0..t).rev() {
            let lambda = 2.0 * PI / 2f64.powi((t - c + 1) as i32);
            gates.push(Gate::controlled(Op::P(lambda), map.position(c), map.position(t)));
        }
    }
    gates
}

/// diag(e^{−2πiq/N}) in the bit-reversed Fourier basis: wire `p` holds the
/// Fourier bit of weight 2^{n−1−p}, so it needs the phase −π/2^p.
fn omega_inverse_layer(map: RegisterMap) -> Vec<Gate> {
    (0..map.n).map(|p| Gate::single(Op::P(-PI / 2f64.powi(p as i32)), map.position(p))).collect()
}

/// Complement of the position register when the coin is |1⟩.
fn controlled_exchange(map: RegisterMap) -> Vec<Gate> {
    map.positions().into_iter().map(|w| Gate::cnot(map.coin(), w)).collect()
}

/// Coin-controlled exchange, F⁻¹ Ω⁻¹ F (a left shift), exchange again.
/// Conjugating the left shift by the complement gives the right shift on
/// coin |1⟩.
pub fn build_shift_qft(n: usize) -> Circuit {
    let map = RegisterMap::walk(n);
    let mut c = Circuit::new(map, "shift-qft");
    c.set_param("n", n);
    let qft = qft_no_swap(map);
    let j = controlled_exchange(map);
    for g in j.iter().chain(&qft).chain(&omega_inverse_layer(map)) {
        c.add(g.clone());
    }
    for g in qft.iter().rev() {
        c.add(g.inverse());
    }
    for g in &j {
        c.add(g.clone());
    }
    c
}

/// k → k + 1 on the position wires: bit `p` flips when all lower bits are
/// set, highest bit first. `extra` controls are added to every gate.
fn increment(map: RegisterMap, extra: &[usize]) -> Vec<Gate> {
    (0..map.n)
        .rev()
        .map(|p| {
            let mut controls = extra.to_vec();
            controls.extend((0..p).map(|q| map.position(q)));
            Gate::new(Op::X, controls, vec![map.position(p)])
        })
        .collect()
}

/// k → k − 1: the increment cascade in reverse order.
fn decrement(map: RegisterMap, extra: &[usize]) -> Vec<Gate> {
    let mut g = increment(map, extra);
    g.reverse();
    g
}

/// Uncontrolled decrement k → k − 1 on the walk layout.
pub fn build_decrement(n: usize) -> Circuit {
    let map = RegisterMap::walk(n);
    let mut c = Circuit::new(map, "decrement");
    for g in decrement(map, &[]) {
        c.add(g);
    }
    c
}

/// Uncontrolled increment k → k + 1 on the walk layout.
pub fn build_increment(n: usize) -> Circuit {
    let map = RegisterMap::walk(n);
    let mut c = Circuit::new(map, "increment");
    for g in increment(map, &[]) {
        c.add(g);
    }
    c
}

/// Decrement controlled on coin |0⟩ (coin conjugated by X), then
/// increment controlled on coin |1⟩.
pub fn build_shift_id(n: usize) -> Circuit {
    let map = RegisterMap::walk(n);
    let coin = map.coin();
    let mut c = Circuit::new(map, "shift-id");
    c.set_param("n", n);
    c.add(Gate::x(coin));
    for g in decrement(map, &[coin]) {
        c.add(g);
    }
    c.add(Gate::x(coin));
    for g in increment(map, &[coin]) {
        c.add(g);
    }
    c
}

/// Published (size, depth) of each scheme as closed forms in n.
pub fn predicted_cost(scheme: CostScheme, n: usize) -> (usize, usize) {
    let n = n as i64;
    let (size, depth) = match scheme {
        CostScheme::Qft => (n * n + 4 * n + 1, 2 * n + 3),
        CostScheme::Id => (n * (2 * n * n - 6 * n + 7) / 3, 2 * (2 * n * n - 8 * n + 9)),
        CostScheme::IdAncilla => (10 * n * n - 50 * n + 67, 2 * (4 * n * n - 20 * n + 27)),
    };
    (size.max(0) as usize, depth.max(0) as usize)
}
