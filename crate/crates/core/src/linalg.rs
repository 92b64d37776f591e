//! Dense complex-matrix primitives.
//!
//! [`ComplexMatrix`] is a thin wrapper over a dynamically sized `nalgebra`
//! matrix of `Complex64`. Everything in the crate (states, gates, Kraus
//! operators, switch outputs) is carried by it. Dimensions never exceed 64,
//! so all routines are dense and allocate freely.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum tolerated `max |H - H^dagger|` for Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default eigenvalue cutoff used when counting rank.
pub const RANK_TOL: f64 = 1e-9;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Complex matrix with at least one row and one column.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                expected: "at least 1x1".into(),
                found: format!("{rows}x{cols}"),
            });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries for {rows}x{cols}", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| re(x)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { re(diag[i]) } else { ZERO })
    }

    /// Outer product `|v><v|` of a column vector.
    pub fn projector(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.0[(i, j)] = value;
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn from_nalgebra(m: DMatrix<Complex64>) -> Self {
        assert!(m.nrows() > 0 && m.ncols() > 0, "empty matrix");
        Self(m)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(re(factor))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |H - H^dagger|` over all entries; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max |U^dagger U - I|`; infinite for non-square input.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&dagger(self) * self).max_abs_diff(&Self::identity(self.rows()))
    }

    /// `(H + H^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * re(0.5))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "incompatible shapes for product");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Qubit-qudit split `dA ⊗ dB` of a Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteDims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 1 || d_b < 1 {
            return Err(Error::DimensionMismatch {
                expected: "positive subsystem dimensions".into(),
                found: format!("{d_a}x{d_b}"),
            });
        }
        Ok(Self { d_a, d_b })
    }

    /// `2 ⊗ d`.
    pub fn qubit_qudit(d: usize) -> Self {
        assert!(d >= 2, "qudit dimension must be at least 2");
        Self { d_a: 2, d_b: d }
    }

    pub fn two_qubits() -> Self {
        Self::qubit_qudit(2)
    }

    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn check(&self, m: &ComplexMatrix) -> Result<()> {
        if m.rows() != self.total() || m.cols() != self.total() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} for {1}⊗{2}", self.total(), self.d_a, self.d_b),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        Ok(())
    }
}

impl fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.d_a, self.d_b)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Conjugate transpose.
pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.adjoint())
}

/// Eigenvalues of a Hermitian matrix in non-increasing order.
///
/// The input is symmetrized before decomposition so that round-off
/// asymmetry below [`HERMITIAN_TOL`] does not leak into the spectrum.
pub fn eig_hermitian_desc(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let defect = h.hermiticity_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian {
            defect,
            tolerance: HERMITIAN_TOL,
        });
    }
    let sym = h.hermitian_part();
    let mut eigs: Vec<f64> = sym.0.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| b.total_cmp(a));
    Ok(eigs)
}

/// Transposes every `dB x dB` block of `rho`, i.e. transposition on the
/// second factor.
pub fn partial_transpose_b(rho: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    dims.check(rho)?;
    let db = dims.d_b;
    Ok(ComplexMatrix::from_fn(rho.rows(), rho.cols(), |r, s| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (s / db, s % db);
        rho.get(i * db + l, j * db + k)
    }))
}

/// Number of eigenvalues strictly above `tol`.
pub fn rank_with_tol(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    Ok(eig_hermitian_desc(m)?.iter().filter(|&&x| x > tol).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn basis(n: usize, k: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, 1, |i, _| if i == k { ONE } else { ZERO })
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let xi = kron(&sigma_x(), &i2);
        assert_eq!(&xi * &basis(4, 0), basis(4, 2));
    }

    #[test]
    fn new_rejects_bad_shapes() {
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
        assert!(ComplexMatrix::new(2, 2, vec![ONE; 3]).is_err());
        let m = ComplexMatrix::new(2, 3, (0..6).map(|k| re(k as f64)).collect()).unwrap();
        assert_eq!(m.get(1, 0), re(3.0));
        assert_eq!(m.entries()[4], re(4.0));
    }

    #[test]
    fn dagger_of_identity() {
        assert_eq!(
            dagger(&ComplexMatrix::identity(3)),
            ComplexMatrix::identity(3)
        );
        let a = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5), c(-2.0, 0.0)],
        )
        .unwrap();
        assert_eq!(a.get(0, 1).conj(), dagger(&a).get(1, 0));
        assert_eq!(dagger(&dagger(&a)), a);
    }

    #[test]
    fn eig_of_maximally_mixed() {
        let m = ComplexMatrix::identity(4).scale_real(0.25);
        let e = eig_hermitian_desc(&m).unwrap();
        for x in e {
            assert!((x - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            eig_hermitian_desc(&m),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            rank_with_tol(&m, RANK_TOL),
            Err(Error::NotHermitian { .. })
        ));
        // drift well below the tolerance is accepted
        let mut m = ComplexMatrix::identity(2);
        m.set(0, 1, c(1e-12, 0.0));
        assert!(eig_hermitian_desc(&m).is_ok());
    }

    #[test]
    fn partial_transpose_of_phi_plus() {
        let v = [re(FRAC_1_SQRT_2), ZERO, ZERO, re(FRAC_1_SQRT_2)];
        let rho = ComplexMatrix::projector(&v);
        let pt = partial_transpose_b(&rho, BipartiteDims::two_qubits()).unwrap();
        // The PT is the swap operator / 2: eigenvalues {1/2, 1/2, 1/2, -1/2}.
        let e = eig_hermitian_desc(&pt).unwrap();
        assert!((e[3] + 0.5).abs() < 1e-14);
        assert!((e[0] - 0.5).abs() < 1e-14);
        assert!((pt.get(1, 2) - re(0.5)).norm() < 1e-15);
        assert_eq!(pt.get(0, 3), ZERO);
    }

    #[test]
    fn partial_transpose_of_product_and_identity() {
        let dims = BipartiteDims::qubit_qudit(3);
        let a =
            ComplexMatrix::new(2, 2, vec![re(0.7), c(0.1, 0.2), c(0.1, -0.2), re(0.3)]).unwrap();
        let b = ComplexMatrix::new(
            3,
            3,
            vec![
                re(0.5),
                c(0.0, 0.1),
                ZERO,
                c(0.0, -0.1),
                re(0.3),
                c(0.05, 0.0),
                ZERO,
                c(0.05, 0.0),
                re(0.2),
            ],
        )
        .unwrap();
        let pt = partial_transpose_b(&kron(&a, &b), dims).unwrap();
        assert!(pt.max_abs_diff(&kron(&a, &b.transpose())) < 1e-15);
        let e1 = eig_hermitian_desc(&kron(&a, &b)).unwrap();
        let e2 = eig_hermitian_desc(&pt).unwrap();
        for (x, y) in e1.iter().zip(&e2) {
            assert!((x - y).abs() < 1e-12);
        }
        let id = ComplexMatrix::identity(4).scale_real(0.25);
        assert_eq!(
            partial_transpose_b(&id, BipartiteDims::two_qubits()).unwrap(),
            id
        );
    }

    #[test]
    fn partial_transpose_dimension_mismatch() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_transpose_b(&m, BipartiteDims::qubit_qudit(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_examples() {
        let rank3 = ComplexMatrix::from_diagonal(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]);
        assert_eq!(rank_with_tol(&rank3, RANK_TOL).unwrap(), 3);
        assert_eq!(
            rank_with_tol(&ComplexMatrix::identity(4).scale_real(0.25), RANK_TOL).unwrap(),
            4
        );
        let tiny = ComplexMatrix::from_diagonal(&[1.0, 1e-16]);
        assert_eq!(rank_with_tol(&tiny, RANK_TOL).unwrap(), 1);
    }

    #[test]
    fn bipartite_dims_check() {
        let d = BipartiteDims::qubit_qudit(3);
        assert_eq!(d.total(), 6);
        assert!(d.check(&ComplexMatrix::identity(6)).is_ok());
        assert!(d.check(&ComplexMatrix::identity(4)).is_err());
        assert!(BipartiteDims::new(0, 2).is_err());
    }
}
