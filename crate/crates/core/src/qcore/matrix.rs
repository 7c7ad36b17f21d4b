//! Dense complex matrices sized for registers of at most four qubits.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest supported matrix dimension (four qubits).
pub const MAX_DIM: usize = 16;

/// Entrywise tolerance used when checking Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-12;

fn valid_dim(d: usize) -> bool {
    matches!(d, 1 | 2 | 4 | 8 | 16)
}

/// Row-major complex matrix whose sides are register sizes (1, 2, 4, 8 or 16).
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if !valid_dim(rows) || !valid_dim(cols) || data.len() != rows * cols {
            return Err(Error::InvalidDimension { rows, cols });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(valid_dim(rows) && valid_dim(cols), "invalid dimension {rows}x{cols}");
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        if !valid_dim(n) {
            return Err(Error::InvalidDimension { rows: n, cols: n });
        }
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Ok(m)
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        let mut data = Vec::with_capacity(u.len() * v.len());
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::new(u.len(), v.len(), data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.matmul(rhs)?.sub(&rhs.matmul(self)?)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks_exact(self.cols) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product of two square matrices.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    if !b.is_square() {
        return Err(Error::NotSquare { rows: b.rows, cols: b.cols });
    }
    let dim = a.rows * b.rows;
    if dim > MAX_DIM {
        return Err(Error::DimensionOverflow(dim));
    }
    let mut out = ComplexMatrix::zeros(dim, dim);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let x = a[(ai, aj)];
            for bi in 0..b.rows {
                for bj in 0..b.cols {
                    out[(ai * b.rows + bi, aj * b.cols + bj)] = x * b[(bi, bj)];
                }
            }
        }
    }
    Ok(out)
}

/// Square matrix equal to its conjugate transpose within [`HERMITIAN_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows,
                cols: matrix.cols,
            });
        }
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self(matrix))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(Self(self.0.add(&rhs.0)?))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(Self(self.0.sub(&rhs.0)?))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_real(s))
    }

    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        Ok(Self(kron(&self.0, &rhs.0)?))
    }

    /// Unitary conjugation `U A U^dagger`; the result is re-symmetrized to
    /// absorb rounding.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.matmul(&self.0)?.matmul(&u.adjoint())?;
        Ok(Self(symmetrize(m)))
    }
}

/// Replaces `m` by `(m + m^dagger) / 2`.
pub(crate) fn symmetrize(m: ComplexMatrix) -> ComplexMatrix {
    let adj = m.adjoint();
    let sum = m.add(&adj).expect("same shape");
    sum.scale_real(0.5)
}

pub fn pauli_x() -> HermitianOperator {
    HermitianOperator(ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap())
}

pub fn pauli_y() -> HermitianOperator {
    let i = C64::new(0.0, 1.0);
    let z = C64::new(0.0, 0.0);
    HermitianOperator(ComplexMatrix::new(2, 2, vec![z, -i, i, z]).unwrap())
}

pub fn pauli_z() -> HermitianOperator {
    HermitianOperator(ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap())
}

/// `I (x) ... (x) op (x) ... (x) I` with `op` on `qubit`; qubit 0 is the most
/// significant tensor factor.
pub fn embed_single(op: &HermitianOperator, qubit: usize, n: usize) -> Result<HermitianOperator> {
    embed_local(&[(op, qubit)], n)
}

/// Tensor product of single-qubit operators placed at distinct qubits, with
/// identities elsewhere.
pub fn embed_local(ops: &[(&HermitianOperator, usize)], n: usize) -> Result<HermitianOperator> {
    if n == 0 || (1usize << n) > MAX_DIM {
        return Err(Error::UnsupportedRegister(n));
    }
    let mut factors: Vec<Option<&HermitianOperator>> = vec![None; n];
    for &(op, q) in ops {
        if op.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: op.dim(),
            });
        }
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, n });
        }
        if factors[q].is_some() {
            return Err(Error::QubitCollision(q));
        }
        factors[q] = Some(op);
    }
    let id = ComplexMatrix::identity(2);
    let mut acc = ComplexMatrix::identity(1);
    for f in factors {
        acc = kron(&acc, f.map_or(&id, |op| op.matrix()))?;
    }
    Ok(HermitianOperator(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_z_identity_is_diagonal() {
        let m = kron(pauli_z().matrix(), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(m, ComplexMatrix::from_diagonal(&[1.0, 1.0, -1.0, -1.0]).unwrap());
    }

    #[test]
    fn kron_xx_fixes_triplet() {
        let xx = kron(pauli_x().matrix(), pauli_x().matrix()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let t = [0.0, r, r, 0.0].map(|x| C64::new(x, 0.0));
        let out = xx.apply(&t).unwrap();
        for (a, b) in out.iter().zip(&t) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn kron_rejects_overflow() {
        let m8 = ComplexMatrix::identity(8);
        let m4 = ComplexMatrix::identity(4);
        assert!(matches!(kron(&m8, &m4), Err(Error::DimensionOverflow(32))));
        assert!(kron(&m8, &ComplexMatrix::identity(2)).is_ok());
    }

    #[test]
    fn kron_rejects_rectangular() {
        let v = ComplexMatrix::zeros(2, 1);
        assert!(matches!(kron(&v, &v), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed_single(&pauli_z(), 0, 1).unwrap(), pauli_z());
        assert_eq!(
            embed_single(&pauli_z(), 0, 2).unwrap().matrix(),
            &ComplexMatrix::from_diagonal(&[1.0, 1.0, -1.0, -1.0]).unwrap()
        );
        let ix = ComplexMatrix::from_real(
            4,
            4,
            &[
                0., 1., 0., 0., //
                1., 0., 0., 0., //
                0., 0., 0., 1., //
                0., 0., 1., 0.,
            ],
        )
        .unwrap();
        assert_eq!(embed_single(&pauli_x(), 1, 2).unwrap().matrix(), &ix);
    }

    #[test]
    fn embed_out_of_range() {
        assert!(matches!(
            embed_single(&pauli_x(), 2, 2),
            Err(Error::QubitOutOfRange { qubit: 2, n: 2 })
        ));
        assert!(matches!(
            embed_local(&[(&pauli_x(), 1), (&pauli_z(), 1)], 3),
            Err(Error::QubitCollision(1))
        ));
    }

    #[test]
    fn rejects_non_hermitian_and_bad_shapes() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian(_))));
        assert!(ComplexMatrix::from_real(3, 3, &[0.0; 9]).is_err());
        assert!(matches!(
            ComplexMatrix::from_real(2, 2, &[f64::NAN, 0.0, 0.0, 0.0]),
            Err(Error::NonFinite)
        ));
    }
}
