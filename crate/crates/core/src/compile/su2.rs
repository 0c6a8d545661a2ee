use crate::circuit::Op;
use crate::error::{Error, Result};
use crate::statevec::{cis, Mat2};

/// Rotations with |angle| below this are dropped.
pub(crate) const ANGLE_EPS: f64 = 1e-14;

/// `u = e^{iφ}·Rz(β)·Ry(γ)·Rz(δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zyz {
    pub phase: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Zyz {
    pub fn matrix(&self) -> Mat2 {
        (Mat2::rz(self.beta) * Mat2::ry(self.gamma) * Mat2::rz(self.delta)).scale(cis(self.phase))
    }
}

fn check_unitary(u: &Mat2) -> Result<()> {
    let defect = u.unitarity_defect();
    if !u.is_finite() || defect > crate::tol::UNITARY {
        return Err(Error::NotUnitary(defect));
    }
    Ok(())
}

pub fn zyz(u: &Mat2) -> Result<Zyz> {
    check_unitary(u)?;
    let phase = u.det().arg() / 2.0;
    let v = u.scale(cis(-phase));
    let a = v.0[0][0];
    let b = v.0[1][0];
    let gamma = 2.0 * b.norm().atan2(a.norm());
    let (beta, delta) = if b.norm() < 1e-15 {
        (-a.arg(), -a.arg())
    } else if a.norm() < 1e-15 {
        (b.arg(), -b.arg())
    } else {
        let sum = -2.0 * a.arg();
        let diff = 2.0 * b.arg();
        ((sum + diff) / 2.0, (sum - diff) / 2.0)
    };
    Ok(Zyz { phase, beta, gamma, delta })
}

/// One-qubit gate sequence (time order) and global phase reproducing `u`.
pub fn decompose_su2(u: &Mat2) -> Result<(Vec<Op>, f64)> {
    let d = zyz(u)?;
    let mut ops = Vec::with_capacity(3);
    for op in [Op::Rz(d.delta), Op::Ry(d.gamma), Op::Rz(d.beta)] {
        if let Op::Rz(t) | Op::Ry(t) = op {
            if t.abs() > ANGLE_EPS {
                ops.push(op);
            }
        }
    }
    Ok((ops, d.phase))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rebuild(ops: &[Op], phase: f64) -> Mat2 {
        ops.iter().fold(Mat2::identity(), |acc, op| op.mat2().unwrap() * acc).scale(cis(phase))
    }

    #[test]
    fn identity_is_empty() {
        let (ops, ph) = decompose_su2(&Mat2::identity()).unwrap();
        assert!(ops.is_empty());
        assert_eq!(ph, 0.0);
    }

    #[test]
    fn standard_gates_reproduced() {
        for u in [Mat2::x(), Mat2::y(), Mat2::z(), Mat2::h(), Mat2::rx(0.3) * Mat2::phase(1.2)] {
            let (ops, ph) = decompose_su2(&u).unwrap();
            assert!(rebuild(&ops, ph).max_abs_diff(&u) < 1e-12, "{u:?}");
        }
        let (ops, _) = decompose_su2(&Mat2::x()).unwrap();
        assert!(ops.contains(&Op::Ry(std::f64::consts::PI)));
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Mat2::x().scale(crate::statevec::C64::new(2.0, 0.0));
        assert_eq!(decompose_su2(&m).unwrap_err().code(), "not-unitary");
    }
}
