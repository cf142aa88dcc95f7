use super::{DensityMatrix, EvolutionSpec, PTParams};
use crate::eigen::mat_exp_2x2_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{on_qubit_one, pauli, Complex, ComplexMatrix, I};

/// Closed-form PT propagator `exp(-i H t)` in terms of `t' = delta_e t`:
///
/// ```text
/// 1/cos a [[cos(t' - a), -i sin t'], [-i sin t', cos(t' + a)]]
/// ```
pub fn pt_propagator(p: &PTParams, t_prime: f64) -> ComplexMatrix {
    let a = p.alpha();
    let k = 1.0 / a.cos();
    let off = Complex::new(0.0, -t_prime.sin() * k);
    ComplexMatrix::from_rows(&[
        [Complex::new((t_prime - a).cos() * k, 0.0), off],
        [off, Complex::new((t_prime + a).cos() * k, 0.0)],
    ])
    .expect("finite 2x2")
}

fn sinc(z: Complex) -> Complex {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        Complex::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// `exp(-i h t)` for an arbitrary (generally non-Hermitian) 2x2 `h`.
///
/// Writes `h = m I + k` with `k` traceless, so `k^2 = lambda^2 I` and
/// `exp(-i k t) = cos(lambda t) I - i t sinc(lambda t) k`. This stays exact
/// when the two eigenvalues coalesce.
pub fn nonhermitian_propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if h.dim() != 2 {
        return Err(Error::InvalidDimension {
            expected: "2x2".into(),
            found: h.dim(),
        });
    }
    let id = pauli::identity();
    let m = h.trace() * 0.5;
    let k = *h - id.scale(m);
    let lambda = (-k.determinant()).sqrt();
    let phase = (-I * m * t).exp();
    let u = id.scale((lambda * t).cos()) - k.scale(I * t * sinc(lambda * t));
    let u = u.scale(phase);
    u.check_finite()
        .map_err(|_| Error::Numerical("propagator overflowed".into()))?;
    Ok(u)
}

/// Propagator of qubit 1 over absolute time `t`, or `None` for damping
/// (which is not a Hamiltonian evolution).
pub fn local_propagator(spec: &EvolutionSpec, t: f64) -> Result<Option<ComplexMatrix>> {
    spec.validate()?;
    Ok(match spec {
        EvolutionSpec::Rabi { g } => Some(mat_exp_2x2_hermitian(&pauli::x().scale_re(*g), t)?),
        EvolutionSpec::Pt(p) => Some(pt_propagator(p, p.delta_e() * t)),
        EvolutionSpec::NonPt { .. } => {
            let h = spec.local_hamiltonian().expect("non-PT has a Hamiltonian");
            Some(nonhermitian_propagator(&h, t)?)
        }
        EvolutionSpec::AmplitudeDamping { .. } => None,
    })
}

fn conjugate_by(u: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    *u * *rho * u.adjoint()
}

/// Raw evolution over absolute time `t` without renormalization, using
/// closed forms only: the local propagator for Hamiltonian evolutions and
/// the two Kraus operators for amplitude damping.
pub fn evolve_exact(rho0: &DensityMatrix, spec: &EvolutionSpec, t: f64) -> Result<DensityMatrix> {
    let rho = rho0.matrix();
    let out = match local_propagator(spec, t)? {
        Some(u) => conjugate_by(&on_qubit_one(&u)?, rho),
        None => {
            let EvolutionSpec::AmplitudeDamping { gamma } = *spec else {
                unreachable!("only damping lacks a propagator")
            };
            let survive = (-gamma * t).exp();
            // |0> is the excited level: K0 = |1><1| + sqrt(p)|0><0|,
            // K1 = sqrt(1 - p)|1><0|.
            let k0 = ComplexMatrix::diagonal(&[
                Complex::new(survive.sqrt(), 0.0),
                Complex::new(1.0, 0.0),
            ])?;
            let k1 = pauli::lowering().scale_re((1.0 - survive).sqrt());
            conjugate_by(&on_qubit_one(&k0)?, rho) + conjugate_by(&on_qubit_one(&k1)?, rho)
        }
    };
    DensityMatrix::new(out)
}

/// Normalized PT-evolved state
/// `(U x I) rho0 (U x I)^dagger / tr(...)` at dimensionless time `t_prime`.
pub fn evolve_closed_form(
    rho0: &DensityMatrix,
    p: &PTParams,
    t_prime: f64,
) -> Result<DensityMatrix> {
    if !rho0.is_normalized(1e-9) {
        return Err(Error::NotNormalized {
            trace: rho0.trace(),
        });
    }
    let u = on_qubit_one(&pt_propagator(p, t_prime))?;
    let raw = conjugate_by(&u, rho0.matrix());
    let trace = raw.trace().re;
    if trace <= super::MIN_TRACE {
        return Err(Error::TraceCollapse { trace });
    }
    DensityMatrix::new(raw.scale_re(1.0 / trace))
}

/// State reached from the Bell state `(|00> + |11>)/sqrt 2` after qubit 1
/// has been amplitude-damped at rate `gamma` for time `t_c`.
pub fn damped_state(t_c: f64, gamma: f64) -> Result<DensityMatrix> {
    if !(t_c.is_finite() && t_c >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_c",
            value: t_c,
            reason: "cut-off time must be finite and non-negative",
        });
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "damping rate must be finite and positive",
        });
    }
    let p = (-gamma * t_c).exp();
    let coh = (-gamma * t_c / 2.0).exp();
    DensityMatrix::new(
        ComplexMatrix::from_real_rows(&[
            [p, 0.0, 0.0, coh],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0 - p, 0.0],
            [coh, 0.0, 0.0, 1.0],
        ])?
        .scale_re(0.5),
    )
}
