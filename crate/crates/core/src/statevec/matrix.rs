use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::tol;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Unit-modulus complex number e^{iθ}.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Maximum number of qubits for which dense operator matrices are built.
/// Overridable through `QWALK_DENSE_LIMIT`.
pub fn dense_limit() -> usize {
    std::env::var("QWALK_DENSE_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(14)
}

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn x() -> Self {
        Mat2::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn y() -> Self {
        Mat2::new(ZERO, C64::new(0.0, -1.0), I, ZERO)
    }

    pub const fn z() -> Self {
        Mat2::new(ONE, ZERO, ZERO, C64::new(-1.0, 0.0))
    }

    pub fn h() -> Self {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Mat2::new(s, s, s, -s)
    }

    pub fn rx(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2::new(C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0))
    }

    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0))
    }

    pub fn rz(lambda: f64) -> Self {
        Mat2::new(cis(-lambda / 2.0), ZERO, ZERO, cis(lambda / 2.0))
    }

    pub fn phase(lambda: f64) -> Self {
        Mat2::new(ONE, ZERO, ZERO, cis(lambda))
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2::new(s * m[0][0], s * m[0][1], s * m[1][0], s * m[1][1])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        d
    }

    /// ‖M†M − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Mat2::identity())
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= tol::UNITARY
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Principal square root; for a unitary input the result is unitary.
    pub fn sqrt(&self) -> Self {
        let det = self.det();
        let tr = self.trace();
        let s0 = det.sqrt();
        let s = if (tr + s0 * 2.0).norm() >= (tr - s0 * 2.0).norm() { s0 } else { -s0 };
        let t = (tr + s * 2.0).sqrt();
        let m = &self.0;
        Mat2::new((m[0][0] + s) / t, m[0][1] / t, m[1][0] / t, (m[1][1] + s) / t)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows(2, 2, self.0.iter().flatten().copied().collect())
            .expect("2x2 shape")
    }

    pub fn apply(&self, a0: C64, a1: C64) -> (C64, C64) {
        let m = &self.0;
        (m[0][0] * a0 + m[0][1] * a1, m[1][0] * a0 + m[1][1] * a1)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let flat: Vec<[f64; 2]> = self.0.iter().flatten().map(|z| [z.re, z.im]).collect();
        flat.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let flat: [[f64; 2]; 4] = Deserialize::deserialize(d)?;
        let z: Vec<C64> = flat.iter().map(|p| C64::new(p[0], p[1])).collect();
        Ok(Mat2::new(z[0], z[1], z[2], z[3]))
    }
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            let row: Vec<String> = (0..self.cols.min(16))
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

fn check_dim(dim: usize) -> Result<()> {
    let limit = dense_limit();
    if dim > 1usize << limit {
        return Err(Error::DenseLimitExceeded {
            qubits: dim.next_power_of_two().trailing_zeros() as usize,
            limit,
        });
    }
    Ok(())
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Identity on `qubits` qubits, subject to the dense limit.
    pub fn identity_qubits(qubits: usize) -> Result<Self> {
        let limit = dense_limit();
        if qubits > limit {
            return Err(Error::DenseLimitExceeded { qubits, limit });
        }
        Ok(Self::identity(1 << qubits))
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::SizeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Build a square matrix from its columns.
    pub fn from_columns(columns: &[Vec<C64>]) -> Self {
        let dim = columns.len();
        let mut m = Self::zeros(dim, dim);
        for (c, col) in columns.iter().enumerate() {
            for (r, z) in col.iter().enumerate() {
                m[(r, c)] = *z;
            }
        }
        m
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, z) in diag.iter().enumerate() {
            m[(i, i)] = *z;
        }
        m
    }

    /// Block-diagonal matrix with 2×2 blocks.
    pub fn block_diag2(blocks: &[Mat2]) -> Self {
        let dim = 2 * blocks.len();
        let mut m = Self::zeros(dim, dim);
        for (k, b) in blocks.iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    m[(2 * k + r, 2 * k + c)] = b.0[r][c];
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<Self> {
        self.same_shape(other)?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, other: &ComplexMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::SizeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        self.matmul_with(other, Exec::default())
    }

    /// Matrix product, row blocks distributed according to `exec`.
    pub fn matmul_with(&self, other: &ComplexMatrix, exec: Exec) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = other.cols;
        let rows = exec.map_range(self.rows, |r| {
            let mut out = vec![ZERO; n];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in out.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
            out
        });
        Ok(ComplexMatrix { rows: self.rows, cols: n, data: rows.concat() })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::SizeMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect())
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(&self, b: &ComplexMatrix) -> Result<Self> {
        let rows = self.rows.checked_mul(b.rows);
        let cols = self.cols.checked_mul(b.cols);
        let (rows, cols) = match (rows, cols) {
            (Some(r), Some(c)) => (r, c),
            _ => {
                return Err(Error::DenseLimitExceeded { qubits: usize::MAX, limit: dense_limit() })
            }
        };
        check_dim(rows)?;
        check_dim(cols)?;
        Ok(Self::from_fn(rows, cols, |r, c| {
            self[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
        }))
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// ‖M†M − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let prod = self.adjoint().matmul(self).expect("square");
        prod.max_abs_diff(&Self::identity(self.rows)).expect("same shape")
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= tol::UNITARY
    }

    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let mut col_hits = vec![0usize; self.cols];
        for r in 0..self.rows {
            let mut hits = 0;
            for c in 0..self.cols {
                let z = self[(r, c)];
                if (z - ONE).norm() < tol::MATRIX_EQ {
                    hits += 1;
                    col_hits[c] += 1;
                } else if z.norm() > tol::MATRIX_EQ {
                    return false;
                }
            }
            if hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&h| h == 1)
    }

    /// Fix the global phase of `other` so it best matches `self`, returning the
    /// phase e^{iφ} with `self ≈ e^{iφ}·other`.
    pub fn relative_phase(&self, other: &ComplexMatrix) -> Result<C64> {
        self.same_shape(other)?;
        let inner: C64 = other.data.iter().zip(&self.data).map(|(b, a)| b.conj() * a).sum();
        if inner.norm() < 1e-300 {
            return Ok(ONE);
        }
        Ok(inner / inner.norm())
    }
}
