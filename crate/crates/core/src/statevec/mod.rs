//! Exact complex linear algebra and statevector simulation.

mod dense;
mod kernel;
mod matrix;
mod sparse;

pub use dense::{DenseState, MAX_DENSE_STATE_QUBITS};
pub use matrix::{cis, dense_limit, ComplexMatrix, Mat2, C64, I, ONE, ZERO};
pub use sparse::{apply_gate, SparseState};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::exec::Exec;

use kernel::Kernel;

/// Kronecker product, subject to the dense limit.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b)
}

/// Full unitary of a circuit, global phase included.
pub fn circuit_unitary(circuit: &Circuit) -> Result<ComplexMatrix> {
    circuit_unitary_with(circuit, Exec::default())
}

/// Column j of the result is the circuit applied to basis state j; columns
/// are independent and distributed according to `exec`.
pub fn circuit_unitary_with(circuit: &Circuit, exec: Exec) -> Result<ComplexMatrix> {
    let q = circuit.num_wires();
    let limit = dense_limit();
    if q > limit {
        return Err(Error::DenseLimitExceeded { qubits: q, limit });
    }
    circuit.validate()?;
    let kernels: Vec<Kernel> = circuit.gates.iter().map(Kernel::from_gate).collect();
    let phase = circuit.phase_factor();
    let dim = 1usize << q;
    let columns = exec.map_range(dim, |j| {
        let mut amps = vec![ZERO; dim];
        amps[j] = phase;
        for k in &kernels {
            k.apply_dense(&mut amps);
        }
        amps
    });
    Ok(ComplexMatrix::from_columns(&columns))
}

/// Largest singular value of `a − b` by power iteration on (a−b)†(a−b).
pub fn spectral_norm_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    const MAX_ITER: usize = 10_000;
    const REL_TOL: f64 = 1e-8;
    let d = a.sub(b)?;
    if d.data().iter().all(|z| z.norm() == 0.0) {
        return Ok(0.0);
    }
    let dh = d.adjoint();
    let n = d.cols();
    // Deterministic start vector with no vanishing components.
    let mut v: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + ((i as f64) * 0.618_033_988_75).fract(), 0.25 * ((i % 7) as f64)))
        .collect();
    normalize(&mut v);
    let mut prev = 0.0;
    for _ in 0..MAX_ITER {
        let dv = d.mul_vec(&v)?;
        let rayleigh: f64 = dv.iter().map(|z| z.norm_sqr()).sum();
        let mut w = dh.mul_vec(&dv)?;
        let wn = normalize(&mut w);
        if wn == 0.0 {
            return Ok(rayleigh.sqrt());
        }
        v = w;
        if (rayleigh - prev).abs() <= REL_TOL * rayleigh {
            return Ok(rayleigh.sqrt());
        }
        prev = rayleigh;
    }
    Err(Error::PowerIterationStall(MAX_ITER))
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// Dense statevector run of a circuit from basis state `index`.
pub fn run_dense(circuit: &Circuit, index: usize) -> Result<Vec<C64>> {
    let mut s = DenseState::basis(circuit.num_wires(), index)?;
    s.apply_circuit(circuit)?;
    Ok(s.into_amplitudes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, RegisterMap};

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(RegisterMap::walk(2), "t");
        let u = circuit_unitary(&c).unwrap();
        assert_eq!(u.max_abs_diff(&ComplexMatrix::identity(8)).unwrap(), 0.0);
    }

    #[test]
    fn three_cnots_make_a_swap() {
        let mut c = Circuit::new(RegisterMap::walk(1), "t");
        c.add(Gate::cnot(0, 1));
        c.add(Gate::cnot(1, 0));
        c.add(Gate::cnot(0, 1));
        let mut s = Circuit::new(RegisterMap::walk(1), "t");
        s.add(Gate::swap(0, 1));
        let a = circuit_unitary(&c).unwrap();
        let b = circuit_unitary(&s).unwrap();
        assert!(a.is_permutation());
        assert_eq!(a.max_abs_diff(&b).unwrap(), 0.0);
        assert_eq!(a[(2, 1)], ONE);
    }

    #[test]
    fn spectral_norms() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(spectral_norm_diff(&i2, &i2).unwrap(), 0.0);
        let m = i2.scale(-ONE);
        assert!((spectral_norm_diff(&i2, &m).unwrap() - 2.0).abs() < 1e-7);
        let th = 0.7;
        let dth = ComplexMatrix::diagonal(&[ONE, cis(th)]);
        let want = (cis(th) - ONE).norm();
        assert!((spectral_norm_diff(&i2, &dth).unwrap() - want).abs() < 1e-7);
    }

    #[test]
    fn dense_limit_enforced() {
        let c = Circuit::new(RegisterMap::linear(3), "t");
        assert_eq!(circuit_unitary(&c).unwrap_err().code(), "dense-limit-exceeded");
        let big = ComplexMatrix::identity(1 << 8);
        assert!(kron(&big, &big).is_err());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let mut c = Circuit::new(RegisterMap::walk(3), "t");
        c.add(Gate::single(crate::circuit::Op::H, 1));
        c.add(Gate::cnot(1, 2));
        c.add(Gate::single(crate::circuit::Op::Ry(0.3), 3));
        c.global_phase = 0.4;
        let a = circuit_unitary_with(&c, Exec::Sequential).unwrap();
        let b = circuit_unitary_with(&c, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.is_unitary());
    }
}
