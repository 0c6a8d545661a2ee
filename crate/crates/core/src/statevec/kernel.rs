use crate::circuit::{Gate, Op};
use crate::error::{Error, Result};

use super::matrix::{ComplexMatrix, Mat2};

/// A gate reduced to the form the simulators execute. Basis indices are
/// `u128` so the sparse backend can address up to 128 qubits.
#[derive(Debug, Clone)]
pub(crate) enum Kernel {
    /// Controlled bit flip.
    Flip { t: u128, cmask: u128 },
    /// Controlled exchange of two bits.
    Swap { a: u128, b: u128, cmask: u128 },
    /// Controlled 2×2 unitary on one target bit.
    One { m: Mat2, t: u128, cmask: u128 },
    /// Arbitrary 2^k × 2^k matrix on ordered targets (target j ↔ bit j of
    /// the matrix row/column index).
    General { m: ComplexMatrix, targets: Vec<u32>, cmask: u128 },
}

fn bit(q: usize) -> u128 {
    1u128 << q
}

fn mask(wires: &[usize]) -> u128 {
    wires.iter().fold(0, |m, &q| m | bit(q))
}

pub(crate) fn check_wires(num_qubits: usize, wires: impl Iterator<Item = usize>) -> Result<()> {
    let mut seen: u128 = 0;
    for q in wires {
        if q >= num_qubits {
            return Err(Error::WireOutOfRange { wire: q, num_wires: num_qubits });
        }
        if seen & bit(q) != 0 {
            return Err(Error::DuplicateQubit(q));
        }
        seen |= bit(q);
    }
    Ok(())
}

impl Kernel {
    pub(crate) fn from_gate(g: &Gate) -> Kernel {
        let cmask = mask(&g.controls);
        match g.op {
            Op::X => Kernel::Flip { t: bit(g.targets[0]), cmask },
            Op::Swap => Kernel::Swap { a: bit(g.targets[0]), b: bit(g.targets[1]), cmask },
            op => Kernel::One { m: op.mat2().expect("single-target op"), t: bit(g.targets[0]), cmask },
        }
    }

    pub(crate) fn general(m: &ComplexMatrix, targets: &[usize], num_qubits: usize) -> Result<Kernel> {
        let dim = 1usize << targets.len();
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::GateArityMismatch { dim: m.rows(), targets: targets.len() });
        }
        check_wires(num_qubits, targets.iter().copied())?;
        Ok(Kernel::General { m: m.clone(), targets: targets.iter().map(|&t| t as u32).collect(), cmask: 0 })
    }

    /// Apply to a dense amplitude vector in place.
    pub(crate) fn apply_dense(&self, amps: &mut [super::C64]) {
        let dim = amps.len();
        match self {
            Kernel::Flip { t, cmask } => {
                let (t, cm) = (*t as usize, *cmask as usize);
                for i in 0..dim {
                    if i & t == 0 && i & cm == cm {
                        amps.swap(i, i | t);
                    }
                }
            }
            Kernel::Swap { a, b, cmask } => {
                let (a, b, cm) = (*a as usize, *b as usize, *cmask as usize);
                for i in 0..dim {
                    if i & a != 0 && i & b == 0 && i & cm == cm {
                        amps.swap(i, (i & !a) | b);
                    }
                }
            }
            Kernel::One { m, t, cmask } => {
                let (t, cm) = (*t as usize, *cmask as usize);
                for i in 0..dim {
                    if i & t == 0 && i & cm == cm {
                        let (x, y) = m.apply(amps[i], amps[i | t]);
                        amps[i] = x;
                        amps[i | t] = y;
                    }
                }
            }
            Kernel::General { m, targets, cmask } => {
                let tmask: usize = targets.iter().fold(0, |acc, &q| acc | (1usize << q));
                let cm = *cmask as usize;
                let k = 1usize << targets.len();
                let mut idx = vec![0usize; k];
                let mut buf = vec![super::matrix::ZERO; k];
                for base in 0..dim {
                    if base & tmask != 0 || base & cm != cm {
                        continue;
                    }
                    for (s, slot) in idx.iter_mut().enumerate() {
                        *slot = spread(base as u128, s, targets) as usize;
                    }
                    for r in 0..k {
                        buf[r] = (0..k).map(|c| m[(r, c)] * amps[idx[c]]).sum();
                    }
                    for r in 0..k {
                        amps[idx[r]] = buf[r];
                    }
                }
            }
        }
    }
}

/// Basis index obtained from `base` by writing the bits of `sub` onto `targets`.
pub(crate) fn spread(base: u128, sub: usize, targets: &[u32]) -> u128 {
    let mut idx = base;
    for (j, &q) in targets.iter().enumerate() {
        if (sub >> j) & 1 == 1 {
            idx |= 1u128 << q;
        }
    }
    idx
}
