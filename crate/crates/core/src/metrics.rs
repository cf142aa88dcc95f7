//! Entanglement and nonlocality measures for two-qubit states.
//!
//! All measures expect a normalized state. Raw states coming out of
//! non-Hermitian evolution must go through
//! [`DensityMatrix::normalized`] first, so that expectation values follow
//! `<A> = tr(A rho) / tr(rho)`. [`concurrence`] can do this itself when
//! asked to.
//!
//! Measurements for the steering parameter are made on qubit 1 ("Alice",
//! the driven qubit) and conditioned expectations are taken on qubit 2
//! ("Bob").

use crate::dynamics::DensityMatrix;
use crate::eigen::{general_eigenvalues_4x4, hermitian_eigen, singular_values};
use crate::error::{Error, Result};
use crate::matrix::{pauli, tensor_product, Complex, ComplexMatrix, Qubit, RealSymmetricMatrix3};

/// Normalization tolerance required by the measures in this module.
pub const TRACE_TOL: f64 = 1e-9;

/// Largest value of the CHSH kernel any local hidden variable model reaches.
pub const CHSH_CLASSICAL_BOUND: f64 = 2.0;

/// Largest steering parameter any local hidden state model reaches.
pub const STEERING_CLASSICAL_BOUND: f64 = 1.0;

/// Imaginary parts of the concurrence spectrum below this are discarded.
pub const SPECTRUM_IMAG_TOL: f64 = 1e-8;

/// Negative concurrence eigenvalues above `-SPECTRUM_NEG_TOL` are zeroed.
pub const SPECTRUM_NEG_TOL: f64 = 1e-8;

fn require_normalized(rho: &DensityMatrix) -> Result<()> {
    if rho.is_normalized(TRACE_TOL) {
        Ok(())
    } else {
        Err(Error::NotNormalized { trace: rho.trace() })
    }
}

fn sigma_y_y() -> ComplexMatrix {
    tensor_product(&pauli::y(), &pauli::y()).expect("2x2 factors")
}

/// Spin-flipped state `(sy x sy) rho* (sy x sy)`.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = sigma_y_y();
    yy * rho.conj() * yy
}

/// Eigenvalues of `rho * spin_flip(rho)`, descending, after clamping
/// round-off: imaginary parts below [`SPECTRUM_IMAG_TOL`] are dropped and
/// negatives above `-SPECTRUM_NEG_TOL` are zeroed. Anything larger is a
/// numerical failure.
pub fn concurrence_spectrum(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_normalized(rho)?;
    let m = rho.matrix();
    let product = *m * spin_flip(m);
    let eig = general_eigenvalues_4x4(&product)?;
    let mut out = [0.0; 4];
    for (slot, z) in out.iter_mut().zip(eig) {
        if z.im.abs() >= SPECTRUM_IMAG_TOL {
            return Err(Error::Numerical(format!(
                "concurrence eigenvalue {z} has imaginary part above {SPECTRUM_IMAG_TOL:e}"
            )));
        }
        if z.re <= -SPECTRUM_NEG_TOL {
            return Err(Error::Numerical(format!(
                "concurrence eigenvalue {} is negative",
                z.re
            )));
        }
        *slot = z.re.max(0.0);
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Square roots of the concurrence spectrum, computed as the singular values
/// of `tau = W^T (sy x sy) W` where `rho = W W^dagger`. This keeps zero
/// eigenvalues at zero instead of turning `1e-16` round-off into `1e-8`
/// after the square root.
fn concurrence_roots(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let eig = hermitian_eigen(rho.matrix())?;
    let mut w = eig.vectors;
    for (col, &p) in eig.values.iter().enumerate() {
        let k = p.max(0.0).sqrt();
        for row in 0..4 {
            w[(row, col)] *= k;
        }
    }
    let tau = w.transpose() * sigma_y_y() * w;
    singular_values(&tau)
}

/// Wootters concurrence `max(0, r1 - r2 - r3 - r4)` where `r_i` are the
/// square roots of the eigenvalues of `rho (sy x sy) rho* (sy x sy)`, in
/// decreasing order.
///
/// With `auto_normalize` set, an un-normalized state is divided by its trace
/// first; otherwise it is rejected with [`Error::NotNormalized`].
pub fn concurrence(rho: &DensityMatrix, auto_normalize: bool) -> Result<f64> {
    let rho = if rho.is_normalized(TRACE_TOL) {
        *rho
    } else if auto_normalize {
        rho.normalized()?
    } else {
        return Err(Error::NotNormalized { trace: rho.trace() });
    };
    let spectrum = concurrence_spectrum(&rho)?;
    let roots = concurrence_roots(&rho)?;
    for (r, l) in roots.iter().zip(spectrum) {
        if (r * r - l).abs() > 1e-6 {
            return Err(Error::Numerical(format!(
                "concurrence spectrum mismatch: {} vs {l}",
                r * r
            )));
        }
    }
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// `2 |a00 a11 - a01 a10|` for a normalized pure state.
pub fn concurrence_pure_oracle(psi: &[Complex; 4]) -> Result<f64> {
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > TRACE_TOL {
        return Err(Error::NotNormalized { trace: norm });
    }
    Ok(2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm())
}

/// Measurement axis on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => pauli::x(),
            Axis::Y => pauli::y(),
            Axis::Z => pauli::z(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// Two-qubit correlation tensor `t_ij = tr(rho (s_i x s_j))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTensor {
    pub t: [[f64; 3]; 3],
}

impl CorrelationTensor {
    /// `T^T T`.
    pub fn gram(&self) -> RealSymmetricMatrix3 {
        RealSymmetricMatrix3::gram(&self.t)
    }
}

pub fn correlation_tensor(rho: &DensityMatrix) -> Result<CorrelationTensor> {
    require_normalized(rho)?;
    let mut t = [[0.0; 3]; 3];
    for (i, a) in Axis::ALL.iter().enumerate() {
        for (j, b) in Axis::ALL.iter().enumerate() {
            let op = tensor_product(&a.pauli(), &b.pauli())?;
            let v = rho.matrix().trace_product(&op);
            if v.im.abs() > 1e-10 {
                return Err(Error::Numerical(format!(
                    "correlation t_{}{} has imaginary part {:e}",
                    a.name(),
                    b.name(),
                    v.im
                )));
            }
            t[i][j] = v.re;
        }
    }
    Ok(CorrelationTensor { t })
}

/// Maximal CHSH kernel `2 sqrt(u1 + u2)`, with `u1 >= u2` the two largest
/// eigenvalues of `T^T T`. Exceeds [`CHSH_CLASSICAL_BOUND`] only for
/// states that violate the CHSH inequality.
pub fn bell_max(rho: &DensityMatrix) -> Result<f64> {
    let u = correlation_tensor(rho)?.gram().eigenvalues()?;
    Ok(2.0 * (u[0] + u[1]).max(0.0).sqrt())
}

/// One axis of the steering sum: outcomes `a = +1` and `a = -1` of Alice's
/// measurement, in that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisTerm {
    pub axis: Axis,
    /// `P(A = a)`.
    pub probabilities: [f64; 2],
    /// `<B>` conditioned on `A = a`; zero for an impossible outcome.
    pub conditional: [f64; 2],
    /// `sum_a P(A = a) <B>_{A=a}^2`.
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteeringBreakdown {
    pub terms: Vec<AxisTerm>,
}

/// Outcome probabilities below this are treated as impossible.
const ZERO_PROBABILITY: f64 = 1e-14;

fn axis_term(rho: &DensityMatrix, axis: Axis) -> Result<AxisTerm> {
    let sigma = axis.pauli();
    let id = pauli::identity();
    let mut probabilities = [0.0; 2];
    let mut conditional = [0.0; 2];
    let mut term = 0.0;
    for (k, a) in [1.0, -1.0].into_iter().enumerate() {
        let projector = (id + sigma.scale_re(a)).scale_re(0.5);
        let p = rho
            .matrix()
            .trace_product(&tensor_product(&projector, &id)?)
            .re;
        let joint = rho
            .matrix()
            .trace_product(&tensor_product(&projector, &sigma)?)
            .re;
        probabilities[k] = p;
        if p > ZERO_PROBABILITY {
            conditional[k] = joint / p;
            term += p * conditional[k] * conditional[k];
        }
    }
    Ok(AxisTerm {
        axis,
        probabilities,
        conditional,
        term,
    })
}

/// Steering parameter summed over an arbitrary set of axes.
pub fn steering_parameter_axes(
    rho: &DensityMatrix,
    axes: &[Axis],
) -> Result<(f64, SteeringBreakdown)> {
    require_normalized(rho)?;
    let terms = axes
        .iter()
        .map(|&a| axis_term(rho, a))
        .collect::<Result<Vec<_>>>()?;
    let total = terms.iter().map(|t| t.term).sum();
    Ok((total, SteeringBreakdown { terms }))
}

/// Axes used for `S_n`: `{x, z}` for `n = 2`, all three for `n = 3`.
pub fn steering_axes(n: usize) -> Result<&'static [Axis]> {
    match n {
        2 => Ok(&[Axis::X, Axis::Z]),
        3 => Ok(&Axis::ALL),
        _ => Err(Error::InvalidParameter {
            name: "n",
            value: n as f64,
            reason: "steering parameter is defined for 2 or 3 axes",
        }),
    }
}

/// `S_n = sum_i E[<B_i>^2_{A_i}]`. Exceeds [`STEERING_CLASSICAL_BOUND`] only
/// for steerable states.
pub fn steering_parameter(rho: &DensityMatrix, n: usize) -> Result<(f64, SteeringBreakdown)> {
    steering_parameter_axes(rho, steering_axes(n)?)
}

/// `tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> Result<f64> {
    require_normalized(rho)?;
    Ok(rho.matrix().trace_product(rho.matrix()).re)
}

/// Every measure for one state, plus both single-qubit marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct StateReport {
    pub concurrence: f64,
    pub bell_max: f64,
    pub s2: f64,
    pub s3: f64,
    pub purity: f64,
    /// State of qubit 1 (qubit 2 traced out).
    pub reduced_1: ComplexMatrix,
    /// State of qubit 2 (qubit 1 traced out).
    pub reduced_2: ComplexMatrix,
}

impl StateReport {
    pub fn violates_chsh(&self) -> bool {
        self.bell_max > CHSH_CLASSICAL_BOUND
    }

    pub fn violates_steering(&self) -> bool {
        self.s3 > STEERING_CLASSICAL_BOUND
    }
}

/// Computes a [`StateReport`], normalizing the state first if needed.
pub fn analyze(rho: &DensityMatrix) -> Result<StateReport> {
    let rho = rho.normalized()?;
    Ok(StateReport {
        concurrence: concurrence(&rho, false)?,
        bell_max: bell_max(&rho)?,
        s2: steering_parameter(&rho, 2)?.0,
        s3: steering_parameter(&rho, 3)?.0,
        purity: purity(&rho)?,
        reduced_1: rho.reduced(Qubit::Two),
        reduced_2: rho.reduced(Qubit::One),
    })
}
