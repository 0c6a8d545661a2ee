use std::collections::HashMap;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::tol;

use super::kernel::{check_wires, spread, Kernel};
use super::matrix::{C64, ZERO};

/// Map-based statevector: only nonzero amplitudes are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    num_qubits: usize,
    amps: HashMap<u128, C64>,
}

impl SparseState {
    pub fn basis(num_qubits: usize, index: u128) -> Result<Self> {
        if num_qubits > 128 {
            return Err(Error::BackendInfeasible(format!(
                "{num_qubits} qubits exceed the 128-bit sparse index"
            )));
        }
        if num_qubits < 128 && index >> num_qubits != 0 {
            return Err(Error::InvalidInput(format!("basis index {index} needs more than {num_qubits} qubits")));
        }
        let mut amps = HashMap::new();
        amps.insert(index, C64::new(1.0, 0.0));
        Ok(SparseState { num_qubits, amps })
    }

    /// Build from explicit (index, amplitude) pairs; the result must be normalized.
    pub fn from_amplitudes(num_qubits: usize, entries: impl IntoIterator<Item = (u128, C64)>) -> Result<Self> {
        if num_qubits > 128 {
            return Err(Error::BackendInfeasible(format!(
                "{num_qubits} qubits exceed the 128-bit sparse index"
            )));
        }
        let mut amps = HashMap::new();
        for (i, a) in entries {
            if num_qubits < 128 && i >> num_qubits != 0 {
                return Err(Error::InvalidInput(format!("basis index {i} out of range")));
            }
            *amps.entry(i).or_insert(ZERO) += a;
        }
        let mut s = SparseState { num_qubits, amps };
        s.prune();
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::InvalidInput(format!("state norm² {norm} differs from 1")));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, index: u128) -> C64 {
        self.amps.get(&index).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u128, C64)> + '_ {
        self.amps.iter().map(|(&i, &a)| (i, a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= tol::PRUNE);
    }

    pub fn scale(&mut self, s: C64) {
        for a in self.amps.values_mut() {
            *a *= s;
        }
    }

    pub(crate) fn apply_kernel(&mut self, k: &Kernel) {
        match k {
            Kernel::Flip { t, cmask } => {
                let old = std::mem::take(&mut self.amps);
                self.amps = old
                    .into_iter()
                    .map(|(i, a)| if i & cmask == *cmask { (i ^ t, a) } else { (i, a) })
                    .collect();
            }
            Kernel::Swap { a, b, cmask } => {
                let old = std::mem::take(&mut self.amps);
                self.amps = old
                    .into_iter()
                    .map(|(i, amp)| {
                        let differ = (i & a == 0) != (i & b == 0);
                        if differ && i & cmask == *cmask {
                            (i ^ a ^ b, amp)
                        } else {
                            (i, amp)
                        }
                    })
                    .collect();
            }
            Kernel::One { m, t, cmask } => {
                let old = std::mem::take(&mut self.amps);
                let mut new: HashMap<u128, C64> = HashMap::with_capacity(old.len() * 2);
                for (i, a) in old {
                    if i & cmask != *cmask {
                        *new.entry(i).or_insert(ZERO) += a;
                        continue;
                    }
                    let base = i & !t;
                    let col = usize::from(i & t != 0);
                    *new.entry(base).or_insert(ZERO) += m.0[0][col] * a;
                    *new.entry(base | t).or_insert(ZERO) += m.0[1][col] * a;
                }
                self.amps = new;
                self.prune();
            }
            Kernel::General { m, targets, cmask } => {
                let tmask = targets.iter().fold(0u128, |acc, &q| acc | (1u128 << q));
                let k = 1usize << targets.len();
                let old = std::mem::take(&mut self.amps);
                let mut new: HashMap<u128, C64> = HashMap::with_capacity(old.len() * k);
                for (i, a) in old {
                    if i & cmask != *cmask {
                        *new.entry(i).or_insert(ZERO) += a;
                        continue;
                    }
                    let base = i & !tmask;
                    let col = (0..targets.len())
                        .filter(|&j| i & (1u128 << targets[j]) != 0)
                        .fold(0usize, |acc, j| acc | (1 << j));
                    for r in 0..k {
                        let z = m[(r, col)];
                        if z != ZERO {
                            *new.entry(spread(base, r, targets)).or_insert(ZERO) += z * a;
                        }
                    }
                }
                self.amps = new;
                self.prune();
            }
        }
    }

    /// Run a whole circuit, including its global phase.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_wires() > self.num_qubits {
            return Err(Error::SizeMismatch(format!(
                "circuit on {} wires, state on {} qubits",
                circuit.num_wires(),
                self.num_qubits
            )));
        }
        for g in &circuit.gates {
            check_wires(self.num_qubits, g.wires())?;
            self.apply_kernel(&Kernel::from_gate(g));
        }
        self.scale(circuit.phase_factor());
        Ok(())
    }

    /// Total probability on basis states where any bit of `mask` is set.
    pub fn weight_on(&self, mask: u128) -> f64 {
        self.amps.iter().filter(|(&i, _)| i & mask != 0).fold(0.0, |s, (_, a)| s + a.norm_sqr())
    }

    /// Dense copy of the amplitudes on the lowest `qubits` bits, dropping
    /// everything with higher bits set.
    pub fn project_low(&self, qubits: usize) -> Vec<C64> {
        let mut out = vec![ZERO; 1 << qubits];
        let high = !((1u128 << qubits) - 1);
        for (&i, &a) in &self.amps {
            if i & high == 0 {
                out[i as usize] = a;
            }
        }
        out
    }
}

/// Apply `gate` on `targets` (target j ↔ bit j of the gate's row/column index).
pub fn apply_gate(state: &SparseState, gate: &super::ComplexMatrix, targets: &[usize]) -> Result<SparseState> {
    let k = Kernel::general(gate, targets, state.num_qubits)?;
    let mut out = state.clone();
    out.apply_kernel(&k);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{ComplexMatrix, Mat2};

    fn cnot_matrix() -> ComplexMatrix {
        // target = bit 0, control = bit 1 of the local index.
        let one = C64::new(1.0, 0.0);
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = one;
        m[(1, 1)] = one;
        m[(3, 2)] = one;
        m[(2, 3)] = one;
        m
    }

    #[test]
    fn x_on_qubit_zero() {
        let s = SparseState::basis(2, 0).unwrap();
        let out = apply_gate(&s, &Mat2::x().to_matrix(), &[0]).unwrap();
        assert_eq!(out.amplitude(1), C64::new(1.0, 0.0));
        assert_eq!(out.support_len(), 1);
    }

    #[test]
    fn cnot_control_one() {
        let s = SparseState::basis(2, 0b10).unwrap();
        let out = apply_gate(&s, &cnot_matrix(), &[0, 1]).unwrap();
        assert_eq!(out.amplitude(0b11), C64::new(1.0, 0.0));
    }

    #[test]
    fn hadamard_involution() {
        let h = Mat2::h().to_matrix();
        for idx in 0..8u128 {
            let s = SparseState::basis(3, idx).unwrap();
            let once = apply_gate(&s, &h, &[1]).unwrap();
            assert_eq!(once.support_len(), 2);
            let twice = apply_gate(&once, &h, &[1]).unwrap();
            assert_eq!(twice.support_len(), 1);
            assert!((twice.amplitude(idx) - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn arity_and_duplicates() {
        let s = SparseState::basis(3, 0).unwrap();
        let e = apply_gate(&s, &cnot_matrix(), &[0]).unwrap_err();
        assert_eq!(e.code(), "gate-arity-mismatch");
        let e = apply_gate(&s, &cnot_matrix(), &[1, 1]).unwrap_err();
        assert_eq!(e, Error::DuplicateQubit(1));
    }

    #[test]
    fn high_qubit_indices() {
        let s = SparseState::basis(100, 1u128 << 99).unwrap();
        let out = apply_gate(&s, &Mat2::x().to_matrix(), &[99]).unwrap();
        assert_eq!(out.amplitude(0), C64::new(1.0, 0.0));
    }
}
