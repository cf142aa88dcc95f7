//! Small dense complex matrices.
//!
//! Everything here is sized for one or two qubits: 2x2 single-qubit
//! operators, 4x4 two-qubit operators and states, and the occasional 3x3
//! (correlation tensors). Storage is a fixed 16-entry array, so matrices are
//! `Copy` and never allocate.
//!
//! Two-qubit basis order is `|00>, |01>, |10>, |11>` with qubit 1 as the
//! left (slow) tensor factor.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);
pub(crate) const I: Complex = Complex::new(0.0, 1.0);

/// Tolerance on `max |m - m^dagger|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

const MAX_DIM: usize = 4;

/// Dense `dim x dim` complex matrix, `dim` in `{2, 3, 4}`.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex; MAX_DIM * MAX_DIM],
}

/// Which qubit of a two-qubit system an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    One,
    Two,
}

fn check_dim(dim: usize) -> Result<()> {
    if (2..=4).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidDimension {
            expected: "2, 3 or 4".into(),
            found: dim,
        })
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: [ZERO; MAX_DIM * MAX_DIM],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from rows. All rows must have the same length as the
    /// number of rows, and every entry must be finite.
    pub fn from_rows<R: AsRef<[Complex]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::InvalidDimension {
                    expected: format!("row of length {dim}"),
                    found: row.len(),
                });
            }
            for (j, &z) in row.iter().enumerate() {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(values: &[Complex]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        Ok(m)
    }

    /// Outer product `|v><v|` of a state vector with itself.
    pub fn projector(v: &[Complex]) -> Result<Self> {
        let mut m = Self::zeros(v.len())?;
        for i in 0..v.len() {
            for j in 0..v.len() {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<Complex>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)]).collect())
            .collect()
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        let mut out = *self;
        for z in out.data.iter_mut() {
            *z = f(*z);
        }
        out
    }

    pub fn scale(&self, k: Complex) -> Self {
        self.map(|z| z * k)
    }

    pub fn scale_re(&self, k: f64) -> Self {
        self.map(|z| z * k)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)];
            }
        }
        out
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = ZERO;
        for i in 0..self.dim {
            for k in 0..self.dim {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise `|a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        (*self - *other).max_abs()
    }

    /// `max |m - m^dagger|` over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_TOL
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn determinant(&self) -> Complex {
        match self.dim {
            2 => self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)],
            _ => {
                // Laplace expansion along the first row; fine for n <= 4.
                let n = self.dim;
                let mut det = ZERO;
                for c in 0..n {
                    let minor = self.minor(0, c);
                    let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                    det += self[(0, c)] * minor.determinant() * sign;
                }
                det
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.dim - 1;
        let mut out = Self {
            dim: n,
            data: [ZERO; MAX_DIM * MAX_DIM],
        };
        for (r, i) in (0..self.dim).filter(|&i| i != row).enumerate() {
            for (c, j) in (0..self.dim).filter(|&j| j != col).enumerate() {
                out[(r, c)] = self[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * MAX_DIM + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * MAX_DIM + j]
    }
}

impl Add for ComplexMatrix {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ComplexMatrix {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += *b;
        }
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a -= *b;
        }
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = Self;

    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul for ComplexMatrix {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self {
            dim: n,
            data: [ZERO; MAX_DIM * MAX_DIM],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a (x) b` of two single-qubit operators.
///
/// ```
/// use pt_entangle::matrix::{pauli, tensor_product};
/// let zz = tensor_product(&pauli::z(), &pauli::z()).unwrap();
/// assert_eq!(zz[(1, 1)].re, -1.0);
/// ```
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.dim != 2 {
            return Err(Error::InvalidDimension {
                expected: "2x2 factors".into(),
                found: m.dim,
            });
        }
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// `op (x) I`: lift a single-qubit operator onto qubit 1.
pub fn on_qubit_one(op: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_product(op, &pauli::identity())
}

/// Traces out `which` from a two-qubit operator, returning the 2x2 operator
/// on the other qubit.
pub fn partial_trace(rho: &ComplexMatrix, which: Qubit) -> Result<ComplexMatrix> {
    if rho.dim != 4 {
        return Err(Error::InvalidDimension {
            expected: "4x4".into(),
            found: rho.dim,
        });
    }
    let mut out = ComplexMatrix::zeros(2)?;
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match which {
                Qubit::One => rho[(i, j)] + rho[(2 + i, 2 + j)],
                Qubit::Two => rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)],
            };
        }
    }
    Ok(out)
}

/// Single-qubit Pauli operators and ladder operators.
pub mod pauli {
    use super::{Complex, ComplexMatrix, I, ONE, ZERO};

    fn m2(a: Complex, b: Complex, c: Complex, d: Complex) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[a, b], [c, d]]).expect("2x2 literal")
    }

    pub fn identity() -> ComplexMatrix {
        m2(ONE, ZERO, ZERO, ONE)
    }

    pub fn x() -> ComplexMatrix {
        m2(ZERO, ONE, ONE, ZERO)
    }

    pub fn y() -> ComplexMatrix {
        m2(ZERO, -I, I, ZERO)
    }

    pub fn z() -> ComplexMatrix {
        m2(ONE, ZERO, ZERO, -ONE)
    }

    /// `[x, y, z]`, in that order.
    pub fn xyz() -> [ComplexMatrix; 3] {
        [x(), y(), z()]
    }

    /// Decay operator `|1><0|`.
    ///
    /// Level `|0>` is the excited one: amplitude damping moves population
    /// from `|0>` to `|1>`.
    pub fn lowering() -> ComplexMatrix {
        m2(ZERO, ZERO, ONE, ZERO)
    }

    /// `|0><1|`, the adjoint of [`lowering`].
    pub fn raising() -> ComplexMatrix {
        lowering().adjoint()
    }
}

/// Real symmetric 3x3 matrix, symmetrized on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSymmetricMatrix3 {
    entries: [[f64; 3]; 3],
}

impl RealSymmetricMatrix3 {
    /// Builds the matrix from `(m + m^T) / 2`, so symmetry holds exactly.
    pub fn new(m: [[f64; 3]; 3]) -> Self {
        let mut entries = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                entries[i][j] = if i == j {
                    m[i][i]
                } else {
                    0.5 * (m[i][j] + m[j][i])
                };
            }
        }
        Self { entries }
    }

    /// `t^T t` for any real 3x3 `t`.
    pub fn gram(t: &[[f64; 3]; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| t[k][i] * t[k][j]).sum();
            }
        }
        Self::new(m)
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.entries
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&self.entries).expect("3x3 finite")
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        crate::eigen::hermitian_eigenvalues(&self.to_complex())
    }
}
