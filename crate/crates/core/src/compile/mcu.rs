//! Controlled and multiply-controlled gates over {Rx, Ry, Rz, P, CNOT}.

use std::f64::consts::FRAC_PI_4;

use crate::circuit::{Gate, Op};
use crate::error::Result;
use crate::statevec::Mat2;

use super::su2::{zyz, ANGLE_EPS};
use super::Fragment;

fn is_x(u: &Mat2) -> bool {
    u.max_abs_diff(&Mat2::x()) < 1e-13
}

fn is_diagonal(u: &Mat2) -> bool {
    u.0[0][1].norm() < 1e-15 && u.0[1][0].norm() < 1e-15
}

/// Controlled phase diag(1, 1, 1, e^{iλ}) on (c, t).
pub(crate) fn controlled_phase(f: &mut Fragment, c: usize, t: usize, lambda: f64) {
    f.rot(Op::P(lambda / 2.0), c);
    f.gates.push(Gate::cnot(c, t));
    f.rot(Op::P(-lambda / 2.0), t);
    f.gates.push(Gate::cnot(c, t));
    f.rot(Op::P(lambda / 2.0), t);
}

/// Singly-controlled `u` via the A·X·B·X·C construction.
pub(crate) fn controlled_u(f: &mut Fragment, c: usize, t: usize, u: &Mat2) -> Result<()> {
    if is_x(u) {
        f.gates.push(Gate::cnot(c, t));
        return Ok(());
    }
    if is_diagonal(u) {
        let a = u.0[0][0].arg();
        let b = u.0[1][1].arg();
        f.rot(Op::P(a), c);
        controlled_phase(f, c, t, b - a);
        return Ok(());
    }
    let d = zyz(u)?;
    // C
    f.rot(Op::Rz((d.delta - d.beta) / 2.0), t);
    f.gates.push(Gate::cnot(c, t));
    // B
    f.rot(Op::Rz(-(d.delta + d.beta) / 2.0), t);
    f.rot(Op::Ry(-d.gamma / 2.0), t);
    f.gates.push(Gate::cnot(c, t));
    // A
    f.rot(Op::Ry(d.gamma / 2.0), t);
    f.rot(Op::Rz(d.beta), t);
    f.rot(Op::P(d.phase), c);
    Ok(())
}

/// Toffoli with the standard six-CNOT network.
pub(crate) fn toffoli(f: &mut Fragment, a: usize, b: usize, t: usize) {
    let tg = Op::P(FRAC_PI_4);
    let tdg = Op::P(-FRAC_PI_4);
    f.lower_single(Op::H, t);
    f.gates.push(Gate::cnot(b, t));
    f.rot(tdg, t);
    f.gates.push(Gate::cnot(a, t));
    f.rot(tg, t);
    f.gates.push(Gate::cnot(b, t));
    f.rot(tdg, t);
    f.gates.push(Gate::cnot(a, t));
    f.rot(tg, b);
    f.rot(tg, t);
    f.lower_single(Op::H, t);
    f.gates.push(Gate::cnot(a, b));
    f.rot(tg, a);
    f.rot(tdg, b);
    f.gates.push(Gate::cnot(a, b));
}

/// Multi-controlled X. `dirty` wires may hold arbitrary states and are
/// returned unchanged.
pub(crate) fn mcx(f: &mut Fragment, controls: &[usize], t: usize, dirty: &[usize]) -> Result<()> {
    let m = controls.len();
    match m {
        0 => {
            f.lower_single(Op::X, t);
            Ok(())
        }
        1 => {
            f.gates.push(Gate::cnot(controls[0], t));
            Ok(())
        }
        2 => {
            toffoli(f, controls[0], controls[1], t);
            Ok(())
        }
        _ if dirty.len() >= m - 2 => {
            ladder_with_dirty(f, controls, t, &dirty[..m - 2]);
            Ok(())
        }
        _ if !dirty.is_empty() => split_with_one_dirty(f, controls, t, dirty[0]),
        _ => mcu(f, controls, t, &Mat2::x()),
    }
}

/// C^m X with m − 2 dirty ancillas: 4(m − 2) Toffolis.
fn ladder_with_dirty(f: &mut Fragment, x: &[usize], t: usize, a: &[usize]) {
    let m = x.len();
    let down_up = |f: &mut Fragment| {
        // a[j−1] ^= x[j]·a[j−2] for j = m−2 down to 2, then a[0] ^= x[0]·x[1], then back up.
        for j in (2..m - 1).rev() {
            toffoli(f, x[j], a[j - 2], a[j - 1]);
        }
        toffoli(f, x[0], x[1], a[0]);
        for j in 2..m - 1 {
            toffoli(f, x[j], a[j - 2], a[j - 1]);
        }
    };
    toffoli(f, x[m - 1], a[m - 3], t);
    down_up(f);
    toffoli(f, x[m - 1], a[m - 3], t);
    down_up(f);
}

/// C^m X with a single dirty ancilla: split the controls in two halves that
/// serve as each other's dirty ancillas.
fn split_with_one_dirty(f: &mut Fragment, x: &[usize], t: usize, a: usize) -> Result<()> {
    let m1 = x.len().div_ceil(2);
    let (g1, g2) = x.split_at(m1);
    let mut g2a: Vec<usize> = g2.to_vec();
    g2a.push(a);
    let mut spare1: Vec<usize> = g2.to_vec();
    spare1.push(t);
    for _ in 0..2 {
        mcx(f, g1, a, &spare1)?;
        mcx(f, &g2a, t, g1)?;
    }
    Ok(())
}

/// Ancilla-free multi-controlled `u` by the recursive V/V† construction
/// with V² = u.
pub(crate) fn mcu(f: &mut Fragment, controls: &[usize], t: usize, u: &Mat2) -> Result<()> {
    let k = controls.len();
    match k {
        0 => f.lower_single(Op::U2(*u), t),
        1 => return controlled_u(f, controls[0], t, u),
        2 if is_x(u) => toffoli(f, controls[0], controls[1], t),
        _ => {
            let v = u.sqrt();
            let (rest, last) = controls.split_at(k - 1);
            let ck = last[0];
            controlled_u(f, ck, t, &v)?;
            mcx(f, rest, ck, &[t])?;
            controlled_u(f, ck, t, &v.adjoint())?;
            mcx(f, rest, ck, &[t])?;
            mcu(f, rest, t, &v)?;
        }
    }
    Ok(())
}

impl Fragment {
    /// Push a basis rotation unless its angle is negligible.
    pub(crate) fn rot(&mut self, op: Op, wire: usize) {
        if let Op::Rx(a) | Op::Ry(a) | Op::Rz(a) | Op::P(a) = op {
            if a.abs() <= ANGLE_EPS {
                return;
            }
        }
        self.gates.push(Gate::single(op, wire));
    }
}
