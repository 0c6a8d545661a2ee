//! Gray-code reordering of commuting Walsh factors.
//!
//! A Walsh product is a sequence of factors e^{i a ŵ_m ⊗ σ}, each realized as a
//! CNOT ladder, a rotation, and the reverse ladder. All factors with the same
//! σ commute, so they can be visited in Gray-code order of their masks, where
//! consecutive masks differ in one bit and a single CNOT moves the parity
//! register from one factor to the next.

use std::collections::BTreeMap;

use crate::circuit::{Circuit, Gate, Op, RegisterMap, Sigma};
use crate::error::{Error, Result};

use super::su2::ANGLE_EPS;

/// Decoded content of a Walsh product.
#[derive(Debug, Clone, PartialEq)]
pub struct WalshTerms {
    pub n: usize,
    /// Angles of e^{i a ŵ_m ⊗ I}, keyed by nonzero position mask.
    pub identity: BTreeMap<usize, f64>,
    /// Axis shared by every coin-acting factor, if any.
    pub sigma: Option<Sigma>,
    /// Angles of e^{i a ŵ_m ⊗ σ}, keyed by position mask (0 allowed).
    pub coin: BTreeMap<usize, f64>,
    pub global_phase: f64,
}

fn not_walsh(msg: impl Into<String>) -> Error {
    Error::NotWalshForm(msg.into())
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Decode a circuit made of CNOT/CZ ladders and rotations into Walsh terms.
/// The ladders are followed symbolically: each position wire carries the
/// parity mask of the original bits it currently holds, and the coin keeps
/// separate masks for how its Z and X operators pull back.
pub fn parse_walsh_form(circuit: &Circuit) -> Result<WalshTerms> {
    let map = circuit.register_map;
    let n = map.n;
    let coin = map.coin();
    let pos_index = |w: usize| -> Option<usize> { (w >= 1 && w <= n).then(|| w - 1) };
    let mut parity: Vec<usize> = (0..n).map(|p| 1usize << p).collect();
    let (mut zmask, mut xmask) = (0usize, 0usize);
    let mut terms = WalshTerms {
        n,
        identity: BTreeMap::new(),
        sigma: None,
        coin: BTreeMap::new(),
        global_phase: circuit.global_phase,
    };
    let add_coin = |terms: &mut WalshTerms, s: Sigma, mask: usize, a: f64| -> Result<()> {
        match terms.sigma {
            Some(prev) if prev != s => {
                return Err(not_walsh(format!("coin rotations about both {prev} and {s}")))
            }
            _ => terms.sigma = Some(s),
        }
        *terms.coin.entry(mask).or_insert(0.0) += a;
        Ok(())
    };
    for (i, g) in circuit.gates.iter().enumerate() {
        let t = g.targets[0];
        match (g.op, g.controls.as_slice()) {
            (Op::X, [c]) => match (pos_index(*c), pos_index(t)) {
                (Some(pc), Some(pt)) => parity[pt] ^= parity[pc],
                (Some(pc), None) if t == coin => zmask ^= parity[pc],
                _ => return Err(not_walsh(format!("gate {i}: CNOT outside the ladder pattern"))),
            },
            (Op::Z, [c]) => {
                let p = match (pos_index(*c), pos_index(t)) {
                    (Some(p), None) if t == coin => p,
                    (None, Some(p)) if *c == coin => p,
                    _ => return Err(not_walsh(format!("gate {i}: CZ must join a position and the coin"))),
                };
                xmask ^= parity[p];
            }
            (op, []) => {
                let (s, a) = match op {
                    Op::Rz(th) => (Sigma::Z, -th / 2.0),
                    Op::Ry(th) => (Sigma::Y, -th / 2.0),
                    Op::Rx(th) => (Sigma::X, -th / 2.0),
                    Op::Rot(s, a) => (s, a),
                    _ => return Err(not_walsh(format!("gate {i}: {:?} is not a Walsh rotation", g.op))),
                };
                if s == Sigma::I {
                    terms.global_phase += a;
                } else if let Some(p) = pos_index(t) {
                    if s != Sigma::Z {
                        return Err(not_walsh(format!("gate {i}: position rotation about {s}")));
                    }
                    *terms.identity.entry(parity[p]).or_insert(0.0) += a;
                } else if t == coin {
                    let mask = match s {
                        Sigma::Z => zmask,
                        Sigma::X => xmask,
                        _ => xmask ^ zmask,
                    };
                    add_coin(&mut terms, s, mask, a)?;
                } else {
                    return Err(not_walsh(format!("gate {i}: rotation on an ancilla wire")));
                }
            }
            _ => return Err(not_walsh(format!("gate {i}: unsupported {:?}", g.kind()))),
        }
    }
    let restored = parity.iter().enumerate().all(|(p, &m)| m == 1 << p);
    if !restored || zmask != 0 || xmask != 0 {
        return Err(not_walsh("CNOT ladders are not closed"));
    }
    Ok(terms)
}

/// Append e^{i a ŵ_mask ⊗ σ} in unoptimized ladder form: parities collapse
/// onto the lowest participating position wire.
pub(crate) fn emit_term(c: &mut Circuit, mask: usize, a: f64, sigma: Sigma) {
    let map = c.register_map;
    let coin = map.coin();
    if mask == 0 {
        match sigma {
            Sigma::I => c.global_phase += a,
            s => c.add(Gate::single(rotation(s, a), coin)),
        }
        return;
    }
    let low = mask.trailing_zeros() as usize;
    let lw = map.position(low);
    let others: Vec<usize> = (low + 1..map.n).filter(|p| mask >> p & 1 == 1).collect();
    for &p in &others {
        c.add(Gate::cnot(map.position(p), lw));
    }
    match sigma {
        Sigma::I => c.add(Gate::single(Op::Rz(-2.0 * a), lw)),
        Sigma::Z | Sigma::Y => {
            c.add(Gate::cnot(lw, coin));
            c.add(Gate::single(rotation(sigma, a), coin));
            c.add(Gate::cnot(lw, coin));
        }
        Sigma::X => {
            c.add(Gate::controlled(Op::Z, lw, coin));
            c.add(Gate::single(rotation(sigma, a), coin));
            c.add(Gate::controlled(Op::Z, lw, coin));
        }
    }
    for &p in others.iter().rev() {
        c.add(Gate::cnot(map.position(p), lw));
    }
}

/// e^{iaσ} as a basis rotation.
fn rotation(s: Sigma, a: f64) -> Op {
    match s {
        Sigma::X => Op::Rx(-2.0 * a),
        Sigma::Y => Op::Ry(-2.0 * a),
        Sigma::Z | Sigma::I => Op::Rz(-2.0 * a),
    }
}

fn ladder_cost(mask: usize, sigma: Sigma) -> usize {
    let k = mask.count_ones() as usize;
    match (sigma, mask) {
        (_, 0) => 0,
        (Sigma::I, _) => 2 * (k - 1),
        _ => 2 * k,
    }
}

/// Visit `terms` (keyed by local mask over `bits`) in Gray order, moving the
/// parity register `acc` with one CNOT per step. Returns the CNOT cost, and
/// emits the gates when `out` is given.
fn gray_walk(
    terms: &BTreeMap<usize, f64>,
    base: usize,
    bits: usize,
    acc: usize,
    wire_of: &dyn Fn(usize) -> usize,
    mut out: Option<&mut Circuit>,
) -> usize {
    let live = |m: usize| terms.get(&(base | m)).is_some_and(|a| a.abs() > ANGLE_EPS);
    let last = (0..1usize << bits).rev().find(|&i| live(gray(i)));
    let Some(last) = last else { return 0 };
    let mut cost = 0;
    let mut cur = 0usize;
    for i in 0..=last {
        let g = gray(i);
        if i > 0 {
            let b = (g ^ cur).trailing_zeros() as usize;
            cost += 1;
            if let Some(c) = out.as_deref_mut() {
                c.add(Gate::cnot(wire_of(b), acc));
            }
            cur = g;
        }
        if live(g) {
            if let Some(c) = out.as_deref_mut() {
                c.add(Gate::single(Op::Rz(-2.0 * terms[&(base | g)]), acc));
            }
        }
    }
    for b in 0..bits {
        if cur >> b & 1 == 1 {
            cost += 1;
            if let Some(c) = out.as_deref_mut() {
                c.add(Gate::cnot(wire_of(b), acc));
            }
        }
    }
    cost
}

/// Reorder the commuting factors along Gray-code sequences. Each group is
/// re-synthesized in Gray order only when that strictly lowers its CNOT
/// count, so the result never has more two-qubit gates than the input form.
pub fn gray_code_optimize(circuit: &Circuit) -> Result<Circuit> {
    let terms = parse_walsh_form(circuit)?;
    let map: RegisterMap = circuit.register_map;
    let mut out = Circuit {
        register_map: map,
        gates: Vec::new(),
        global_phase: terms.global_phase,
        metadata: circuit.metadata.clone(),
    };
    let pos = |p: usize| map.position(p);

    // Diagonal factors, grouped by highest set bit h: inside a group the
    // parity is accumulated on position wire h.
    for h in 0..map.n {
        let group: BTreeMap<usize, f64> = terms
            .identity
            .iter()
            .filter(|(&m, a)| usize::BITS - 1 - m.leading_zeros() == h as u32 && a.abs() > ANGLE_EPS)
            .map(|(&m, &a)| (m, a))
            .collect();
        if group.is_empty() {
            continue;
        }
        let plain: usize = group.keys().map(|&m| ladder_cost(m, Sigma::I)).sum();
        let gray_cost = gray_walk(&group, 1 << h, h, pos(h), &pos, None);
        if gray_cost < plain {
            gray_walk(&group, 1 << h, h, pos(h), &pos, Some(&mut out));
        } else {
            for (&m, &a) in &group {
                emit_term(&mut out, m, a, Sigma::I);
            }
        }
    }

    // Coin factors: rotate σ onto Z, accumulate parities on the coin.
    if let Some(s) = terms.sigma {
        let live: BTreeMap<usize, f64> =
            terms.coin.iter().filter(|(_, a)| a.abs() > ANGLE_EPS).map(|(&m, &a)| (m, a)).collect();
        let plain: usize = live.keys().map(|&m| ladder_cost(m, s)).sum();
        let coin = map.coin();
        let gray_cost = gray_walk(&live, 0, map.n, coin, &pos, None);
        if gray_cost < plain {
            let (pre, post) = match s {
                Sigma::X => (Some(Op::Ry(-std::f64::consts::FRAC_PI_2)), Some(Op::Ry(std::f64::consts::FRAC_PI_2))),
                Sigma::Y => (Some(Op::Rx(std::f64::consts::FRAC_PI_2)), Some(Op::Rx(-std::f64::consts::FRAC_PI_2))),
                _ => (None, None),
            };
            if let Some(op) = pre {
                out.add(Gate::single(op, coin));
            }
            gray_walk(&live, 0, map.n, coin, &pos, Some(&mut out));
            if let Some(op) = post {
                out.add(Gate::single(op, coin));
            }
        } else {
            for (&m, &a) in &live {
                emit_term(&mut out, m, a, s);
            }
        }
    }
    out.set_param("gray_optimized", true);
    Ok(out)
}
