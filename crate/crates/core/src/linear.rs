//! Linear-depth construction U_lin = Q1† Q2† Q0 Q2 Q1 on the ancilla layout.
//!
//! Q1 writes the position `k` as a one-hot pattern on the ancillary
//! positions `b'`, Q2 moves the principal coin onto ancillary coin `s_k`,
//! and Q0 applies every coin in a single parallel layer.

use crate::circuit::{Circuit, Gate, Op, RegisterMap};
use crate::coin::CoinField;
use crate::statevec::{SparseState, C64};

/// `U_lin` in time order Q1, Q2, Q0, Q2†, Q1†. With `parallel` the
/// copy-tree version of Q1 is used.
pub fn build_linear(field: &CoinField, parallel: bool) -> Circuit {
    let n = field.n();
    let q1 = if parallel { build_q1_parallel(n) } else { build_q1_naive(n) };
    let q2 = build_q2(n);
    let mut c = Circuit::new(RegisterMap::linear(n), "linear");
    c.set_param("n", n);
    c.set_param("parallel_q1", parallel);
    c.extend_from(&q1);
    c.extend_from(&q2);
    c.extend_from(&build_q0(field));
    c.extend_from(&q2.inverse());
    c.extend_from(&q1.inverse());
    c
}

/// Coin `C_k` on `s_k`, controlled by `b'_k`, for every `k`.
pub fn build_q0(field: &CoinField) -> Circuit {
    let map = RegisterMap::linear(field.n());
    let mut c = Circuit::new(map, "linear-q0");
    for (k, u) in field.coins().iter().enumerate() {
        c.add(Gate::new(Op::U2(*u), vec![map.bprime(k)], vec![map.s(k)]));
    }
    c
}

/// X on `b'_0`, then for each position bit `m` the swaps
/// `b'_i ↔ b'_{i+2^m}` (i < 2^m) controlled by `b_m`.
pub fn build_q1_naive(n: usize) -> Circuit {
    let map = RegisterMap::linear(n);
    let mut c = Circuit::new(map, "linear-q1");
    c.add(Gate::x(map.bprime(0)));
    for m in 0..n {
        for i in 0..1usize << m {
            c.add(Gate::cswap(map.position(m), map.bprime(i), map.bprime(i + (1 << m))));
        }
    }
    c
}

/// First ancillary coin holding copies of position bit `m` (m ≥ 1);
/// level `m` uses `s_{l_m} … s_{l_m + 2^m − 2}`.
pub fn copy_offset(m: usize) -> usize {
    let mut l = 1;
    for j in 2..=m {
        l += (1 << (j - 1)) - 1;
    }
    l
}

/// Doubling tree of CNOTs that leaves `2^m − 1` copies of `b_m` on the
/// ancillary coins, one round per doubling.
fn q10(map: RegisterMap) -> Vec<Gate> {
    let n = map.n;
    let mut gates = Vec::new();
    for i in 0..n.saturating_sub(1) {
        for m in i + 1..n {
            let l = copy_offset(m);
            gates.push(Gate::cnot(map.position(m), map.s(l + (1 << i) - 1)));
            for lp in 0..(1usize << i) - 1 {
                gates.push(Gate::cnot(map.s(l + lp), map.s(l + lp + (1 << i))));
            }
        }
    }
    gates
}

/// Q1 with the swaps of each level run in parallel, each controlled by
/// its own copy of the position bit.
pub fn build_q1_parallel(n: usize) -> Circuit {
    let map = RegisterMap::linear(n);
    let mut c = Circuit::new(map, "linear-q1-parallel");
    let copy = q10(map);
    for g in &copy {
        c.add(g.clone());
    }
    c.add(Gate::x(map.bprime(0)));
    for m in 0..n {
        let l = copy_offset(m);
        for i in 0..1usize << m {
            let ctl = if i == 0 { map.position(m) } else { map.s(l + i - 1) };
            c.add(Gate::cswap(ctl, map.bprime(i), map.bprime(i + (1 << m))));
        }
    }
    for g in copy.iter().rev() {
        c.add(g.inverse());
    }
    c
}

#[derive(Debug, Clone, Copy)]
enum Q2Op {
    /// Swap s_a and s_b controlled by b'_c.
    Swap { c: usize, a: usize, b: usize },
    /// CNOT from b'_c onto b'_t.
    Copy { c: usize, t: usize },
}

fn q2_ops(n: usize) -> Vec<Q2Op> {
    if n == 1 {
        return vec![Q2Op::Swap { c: 1, a: 0, b: 1 }];
    }
    let half = 1usize << (n - 1);
    let v: Vec<Q2Op> = (1..half).map(|m| Q2Op::Copy { c: 2 * m, t: 2 * m + 1 }).collect();
    let dilated = q2_ops(n - 1).into_iter().map(|op| match op {
        Q2Op::Swap { c, a, b } => Q2Op::Swap { c: 2 * c + 1, a: 2 * a, b: 2 * b },
        Q2Op::Copy { c, t } => Q2Op::Copy { c: 2 * c + 1, t: 2 * t + 1 },
    });
    let mut ops = v.clone();
    ops.extend(dilated);
    ops.extend(v);
    ops.extend((0..half).map(|l| Q2Op::Swap { c: 2 * l + 1, a: 2 * l, b: 2 * l + 1 }));
    ops
}

/// Moves the principal coin onto `s_k` when `b'` is the one-hot
/// pattern of `k`. Built recursively from the n = 1 swap by dilating
/// indices (`s_i → s_{2i}`, `b'_i → b'_{2i+1}`), sandwiched by CNOTs
/// `b'_{2m} → b'_{2m+1}` and followed by the odd swaps.
pub fn build_q2(n: usize) -> Circuit {
    let map = RegisterMap::linear(n);
    let mut c = Circuit::new(map, "linear-q2");
    if n == 0 {
        return c;
    }
    for op in q2_ops(n) {
        c.add(match op {
            Q2Op::Swap { c, a, b } => Gate::cswap(map.bprime(c), map.s(a), map.s(b)),
            Q2Op::Copy { c, t } => Gate::cnot(map.bprime(c), map.bprime(t)),
        });
    }
    c
}

fn kd(n: usize) -> usize {
    usize::from(n == 1)
}

/// Upper bound 20n + 2δ_{1,n} − 7 on the depth of `U_lin`.
pub fn predicted_depth(n: usize) -> usize {
    20 * n + 2 * kd(n) - 7
}

/// Bound 5n − 2 + δ_{1,n} on the depth of the parallel Q1.
pub fn predicted_q1_depth(n: usize) -> usize {
    5 * n - 2 + kd(n)
}

/// Bound 5n − 2 on the depth of Q2.
pub fn predicted_q2_depth(n: usize) -> usize {
    5 * n - 2
}

/// Embed a walk-layout state (index `2k + c`) into the ancilla layout
/// with every ancilla in `|0⟩`.
pub fn embed_walk_state(n: usize, amps: &[C64]) -> crate::Result<SparseState> {
    let q = RegisterMap::linear(n).num_wires();
    SparseState::from_amplitudes(q, amps.iter().enumerate().map(|(i, &a)| (i as u128, a)))
}

/// Probability on basis states with some ancilla set.
pub fn ancilla_residual(state: &SparseState, n: usize) -> f64 {
    state.weight_on(!((1u128 << (n + 1)) - 1))
}
