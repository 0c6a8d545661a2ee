use crate::circuit::Circuit;
use crate::error::{Error, Result};

use super::kernel::{check_wires, Kernel};
use super::matrix::{C64, ONE, ZERO};

/// Largest register simulated as a dense statevector.
pub const MAX_DENSE_STATE_QUBITS: usize = 26;

/// Dense statevector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl DenseState {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits > MAX_DENSE_STATE_QUBITS {
            return Err(Error::DenseLimitExceeded { qubits: num_qubits, limit: MAX_DENSE_STATE_QUBITS });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { what: "basis index", value: index, bound: dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(DenseState { num_qubits, amps })
    }

    pub fn from_vec(amps: Vec<C64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::SizeMismatch(format!("{} amplitudes is not a power of two", amps.len())));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        if num_qubits > MAX_DENSE_STATE_QUBITS {
            return Err(Error::DenseLimitExceeded { qubits: num_qubits, limit: MAX_DENSE_STATE_QUBITS });
        }
        Ok(DenseState { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn apply_kernel(&mut self, k: &Kernel) {
        k.apply_dense(&mut self.amps);
    }

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
        let ph = circuit.phase_factor();
        if ph != ONE {
            for a in &mut self.amps {
                *a *= ph;
            }
        }
        Ok(())
    }
}
