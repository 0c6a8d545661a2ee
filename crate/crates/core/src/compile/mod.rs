//! Lowering to the basis {Rx, Ry, Rz, P, CNOT} and the Gray-code pass.

mod gray;
mod mcu;
mod su2;

pub use gray::{gray_code_optimize, parse_walsh_form, WalshTerms};
pub use su2::{decompose_su2, zyz, Zyz};

pub(crate) use gray::emit_term;

use crate::circuit::{Circuit, Gate, Op, Sigma};
use crate::error::Result;
use crate::exec::Exec;
use crate::statevec::Mat2;

/// Basis gates plus the scalar phase they leave over.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fragment {
    pub gates: Vec<Gate>,
    pub phase: f64,
}

impl Fragment {
    /// Lower an uncontrolled one-qubit operation.
    pub(crate) fn lower_single(&mut self, op: Op, wire: usize) {
        match op {
            Op::Rx(_) | Op::Ry(_) | Op::Rz(_) | Op::P(_) => self.rot(op, wire),
            Op::X => {
                self.rot(Op::Rx(std::f64::consts::PI), wire);
                self.phase += std::f64::consts::FRAC_PI_2;
            }
            Op::Z => self.rot(Op::P(std::f64::consts::PI), wire),
            Op::Rot(Sigma::I, a) => self.phase += a,
            Op::Rot(Sigma::X, a) => self.rot(Op::Rx(-2.0 * a), wire),
            Op::Rot(Sigma::Y, a) => self.rot(Op::Ry(-2.0 * a), wire),
            Op::Rot(Sigma::Z, a) => self.rot(Op::Rz(-2.0 * a), wire),
            Op::H | Op::U2(_) => {
                let m = op.mat2().expect("one-qubit op");
                let (ops, ph) = decompose_su2(&m).expect("built-in gates are unitary");
                for o in ops {
                    self.rot(o, wire);
                }
                self.phase += ph;
            }
            Op::Swap => unreachable!("swap has two targets"),
        }
    }
}

fn is_basis(g: &Gate) -> bool {
    g.kind().is_basis()
}

/// Lower a single gate to basis gates.
pub fn lower_gate(g: &Gate) -> Result<Fragment> {
    let mut f = Fragment::default();
    if is_basis(g) {
        f.gates.push(g.clone());
        return Ok(f);
    }
    let c = &g.controls;
    match (g.op, c.len()) {
        (Op::Swap, _) => {
            let (a, b) = (g.targets[0], g.targets[1]);
            f.gates.push(Gate::cnot(b, a));
            let mut ctl = c.clone();
            ctl.push(a);
            mcu::mcx(&mut f, &ctl, b, &[])?;
            f.gates.push(Gate::cnot(b, a));
        }
        (op, 0) => f.lower_single(op, g.targets[0]),
        (Op::X, _) => mcu::mcx(&mut f, c, g.targets[0], &[])?,
        (Op::Rot(Sigma::I, a), _) => {
            // A controlled scalar phase is a phase gate on the controls.
            let (rest, last) = c.split_at(c.len() - 1);
            if rest.is_empty() {
                f.rot(Op::P(a), last[0]);
            } else {
                mcu::mcu(&mut f, rest, last[0], &Mat2::phase(a))?;
            }
        }
        (Op::P(l), 1) => mcu::controlled_phase(&mut f, c[0], g.targets[0], l),
        (op, _) => {
            let m = op.mat2().expect("one-target op");
            mcu::mcu(&mut f, c, g.targets[0], &m)?;
        }
    }
    Ok(f)
}

/// Basis realization of a SWAP or controlled-SWAP gate.
pub fn expand_swap(g: &Gate) -> Vec<Gate> {
    lower_gate(g).expect("swap lowering is infallible").gates
}

/// Ancilla-free multi-controlled `u` as a basis fragment.
pub fn decompose_mcu(controls: &[usize], target: usize, u: &Mat2) -> Result<Fragment> {
    let mut f = Fragment::default();
    if controls.is_empty() {
        f.lower_single(Op::U2(*u), target);
        return Ok(f);
    }
    su2::zyz(u)?;
    mcu::mcu(&mut f, controls, target, u)?;
    Ok(f)
}

/// Lower every gate to the basis; the leftover phase is added to the
/// circuit's global phase.
pub fn compile(circuit: &Circuit) -> Result<Circuit> {
    compile_with(circuit, Exec::default())
}

pub fn compile_with(circuit: &Circuit, exec: Exec) -> Result<Circuit> {
    let frags = exec.try_map_slice(&circuit.gates, lower_gate)?;
    let mut out = Circuit {
        register_map: circuit.register_map,
        gates: Vec::with_capacity(frags.iter().map(|f| f.gates.len()).sum()),
        global_phase: circuit.global_phase,
        metadata: circuit.metadata.clone(),
    };
    for f in frags {
        out.gates.extend(f.gates);
        out.global_phase += f.phase;
    }
    out.set_param("compiled", true);
    Ok(out)
}

/// True when only {Rx, Ry, Rz, P, CNOT} occur.
pub fn is_compiled(circuit: &Circuit) -> bool {
    circuit.gates.iter().all(is_basis)
}
