//! Sequential circuit: one fully controlled coin per position, with X
//! "towers" moving the next position onto the all-ones control pattern.

use crate::circuit::{Circuit, Gate, Op, RegisterMap};
use crate::coin::CoinField;
use crate::error::{Error, Result};

fn check(n: usize, i: usize) -> Result<()> {
    let bound = if n == 0 { 0 } else { 1usize << (n - 1) };
    if i >= bound {
        return Err(Error::IndexOutOfRange { what: "tower index", value: i, bound });
    }
    Ok(())
}

/// Position bits flipped by tower `i`: bit `p` is set iff `2^p` divides `i`.
pub fn tower_mask(n: usize, i: usize) -> Result<usize> {
    check(n, i)?;
    Ok((0..n).filter(|&p| i.is_multiple_of(1 << p)).fold(0, |m, p| m | 1 << p))
}

/// The same mask from the recursion T_n(i) = M_i ⊗ T_{n−1}(i mod 2^{n−2}),
/// where M_i puts X on the top wire exactly when i = 0.
pub fn tower_mask_recursive(n: usize, i: usize) -> Result<usize> {
    check(n, i)?;
    fn rec(n: usize, i: usize) -> usize {
        let top = if i == 0 { 1 << (n - 1) } else { 0 };
        if n == 1 {
            return top;
        }
        top | rec(n - 1, i % (1 << (n - 2)))
    }
    Ok(rec(n, i))
}

/// X gates of tower `i` on the walk layout.
pub fn tower(n: usize, i: usize) -> Result<Vec<Gate>> {
    let mask = tower_mask(n, i)?;
    let map = RegisterMap::walk(n);
    Ok((0..n).filter(|p| mask >> p & 1 == 1).map(|p| Gate::x(map.position(p))).collect())
}

/// T(0) G(C_0) T(1) G(C_1) … T((N−1) mod 2^{n−1}) G(C_{N−1}) in time order.
/// Every position wire receives an even number of X gates, so the register
/// is restored at the end.
pub fn build_naive(field: &CoinField) -> Circuit {
    let n = field.n();
    let map = RegisterMap::walk(n);
    let mut c = Circuit::new(map, "naive");
    c.set_param("n", n);
    let controls = map.positions();
    for k in 0..field.len() {
        if n > 0 {
            for g in tower(n, k % (1 << (n - 1))).expect("index reduced into range") {
                c.add(g);
            }
        }
        c.add(Gate::new(Op::U2(*field.coin(k)), controls.clone(), vec![map.coin()]));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::coin::{random_field, reference_field, total_coin_matrix};
    use crate::statevec::{circuit_unitary, ComplexMatrix, Mat2};

    #[test]
    fn tower_examples() {
        assert_eq!(tower(1, 0).unwrap(), vec![Gate::x(1)]);
        assert_eq!(tower(3, 0).unwrap(), vec![Gate::x(1), Gate::x(2), Gate::x(3)]);
        assert_eq!(tower(3, 1).unwrap(), vec![Gate::x(1)]);
        assert_eq!(tower(3, 4).unwrap_err().code(), "index-out-of-range");
    }

    #[test]
    fn recursion_matches_bit_changes() {
        for n in 1..=6usize {
            let full = (1 << n) - 1;
            for k in 0..1usize << n {
                let i = k % (1 << (n - 1));
                let want = if k == 0 { full } else { k ^ (k - 1) };
                assert_eq!(tower_mask(n, i).unwrap(), want, "n={n} k={k}");
                assert_eq!(tower_mask_recursive(n, i).unwrap(), want, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn n1_structure() {
        let f = CoinField::new(1, vec![Mat2::h(), Mat2::rx(0.4)]).unwrap();
        let c = build_naive(&f);
        let kinds: Vec<GateKind> = c.gates.iter().map(|g| g.kind()).collect();
        assert_eq!(kinds, vec![GateKind::X, GateKind::Cu2, GateKind::X, GateKind::Cu2]);
    }

    #[test]
    fn equals_total_coin() {
        let c = build_naive(&reference_field());
        let d = circuit_unitary(&c).unwrap().max_abs_diff(&total_coin_matrix(&reference_field()).unwrap()).unwrap();
        assert!(d < 1e-10, "{d}");
        for n in 1..=3 {
            let f = random_field(n, 40 + n as u64);
            let d = circuit_unitary(&build_naive(&f)).unwrap().max_abs_diff(&total_coin_matrix(&f).unwrap()).unwrap();
            assert!(d < 1e-10);
            let id = circuit_unitary(&build_naive(&CoinField::identity(n))).unwrap();
            assert!(id.max_abs_diff(&ComplexMatrix::identity(1 << (n + 1))).unwrap() < 1e-10);
        }
    }

    #[test]
    fn even_x_parity() {
        for n in 1..=6 {
            let c = build_naive(&CoinField::identity(n));
            for p in 0..n {
                let w = c.register_map.position(p);
                let count = c.gates.iter().filter(|g| g.kind() == GateKind::X && g.targets[0] == w).count();
                assert_eq!(count % 2, 0);
            }
        }
    }
}
