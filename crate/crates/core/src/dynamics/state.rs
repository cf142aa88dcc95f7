use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::matrix::{partial_trace, Complex, ComplexMatrix, Qubit};

/// Smallest eigenvalue a state may have before it counts as non-positive.
pub const PSD_TOL: f64 = 1e-9;

/// Traces at or below this are treated as a collapsed state.
pub const MIN_TRACE: f64 = 1e-12;

/// A validated two-qubit density matrix.
///
/// Hermitian to within [`crate::matrix::HERMITIAN_TOL`], positive
/// semidefinite to within [`PSD_TOL`], and with trace above [`MIN_TRACE`].
/// The trace is *not* required to be one: raw non-Hermitian evolution changes
/// it, and [`DensityMatrix::normalized`] restores it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::InvalidDimension {
                expected: "4x4".into(),
                found: mat.dim(),
            });
        }
        mat.check_finite()?;
        // hermitian_eigenvalues enforces the Hermiticity tolerance.
        let eig = hermitian_eigenvalues(&mat)?;
        let min = eig[eig.len() - 1];
        if min < -PSD_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        let trace = mat.trace().re;
        if trace <= MIN_TRACE {
            return Err(Error::TraceCollapse { trace });
        }
        Ok(Self { mat })
    }

    /// `|psi><psi| / <psi|psi>` for a four-amplitude state vector.
    pub fn from_pure(psi: &[Complex; 4]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm <= MIN_TRACE {
            return Err(Error::TraceCollapse { trace: norm });
        }
        Self::new(ComplexMatrix::projector(psi)?.scale_re(1.0 / norm))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.trace() - 1.0).abs() <= tol
    }

    /// `rho / tr(rho)`.
    pub fn normalized(&self) -> Result<Self> {
        let trace = self.trace();
        if trace <= MIN_TRACE {
            return Err(Error::TraceCollapse { trace });
        }
        Ok(Self {
            mat: self.mat.scale_re(1.0 / trace),
        })
    }

    /// Reduced state of the *other* qubit after tracing out `traced`.
    pub fn reduced(&self, traced: Qubit) -> ComplexMatrix {
        partial_trace(&self.mat, traced).expect("density matrices are 4x4")
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat).expect("validated on construction")
    }
}
