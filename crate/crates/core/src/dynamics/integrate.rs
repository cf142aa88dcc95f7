use super::{split_hermitian, DensityMatrix, EvolutionSpec, MIN_TRACE};
use crate::error::{Error, Result};
use crate::matrix::{on_qubit_one, pauli, ComplexMatrix, I};

/// Default RK4 step, in the active time unit.
pub const DEFAULT_DT: f64 = 1e-3;

/// Right-hand side of the master equation, precomputed for one spec.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub(crate) enum Generator {
    /// `drho/dt = -i [H+, rho] - i {H-, rho}`.
    Hamiltonian {
        h_plus: ComplexMatrix,
        h_minus: ComplexMatrix,
    },
    /// `drho/dt = gamma/2 (2 L rho L^dagger - L^dagger L rho - rho L^dagger L)`.
    Damping {
        gamma: f64,
        l: ComplexMatrix,
        l_dag: ComplexMatrix,
        number: ComplexMatrix,
    },
}

impl Generator {
    pub(crate) fn new(spec: &EvolutionSpec) -> Result<Self> {
        spec.validate()?;
        Ok(match spec.local_hamiltonian() {
            Some(h1) => {
                let split = split_hermitian(&on_qubit_one(&h1)?);
                Self::Hamiltonian {
                    h_plus: split.h_plus,
                    h_minus: split.h_minus,
                }
            }
            None => {
                let EvolutionSpec::AmplitudeDamping { gamma } = *spec else {
                    unreachable!("only damping lacks a Hamiltonian")
                };
                let l = on_qubit_one(&pauli::lowering())?;
                let l_dag = l.adjoint();
                Self::Damping {
                    gamma,
                    l,
                    l_dag,
                    number: l_dag * l,
                }
            }
        })
    }

    pub(crate) fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Self::Hamiltonian { h_plus, h_minus } => {
                let c = h_plus.commutator(rho);
                let a = h_minus.anticommutator(rho);
                (c + a).scale(-I)
            }
            Self::Damping {
                gamma,
                l,
                l_dag,
                number,
            } => {
                let jump = (*l * *rho * *l_dag).scale_re(2.0);
                (jump - number.anticommutator(rho)).scale_re(0.5 * gamma)
            }
        }
    }

    fn rk4_step(&self, rho: &ComplexMatrix, h: f64) -> ComplexMatrix {
        let k1 = self.apply(rho);
        let k2 = self.apply(&(*rho + k1.scale_re(0.5 * h)));
        let k3 = self.apply(&(*rho + k2.scale_re(0.5 * h)));
        let k4 = self.apply(&(*rho + k3.scale_re(h)));
        *rho + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(h / 6.0)
    }
}

/// Time derivative of `rho` under `spec`.
pub fn master_rhs(rho: &DensityMatrix, spec: &EvolutionSpec) -> Result<ComplexMatrix> {
    Ok(Generator::new(spec)?.apply(rho.matrix()))
}

/// Advances a raw (possibly un-normalized) matrix by `duration` with uniform
/// RK4 steps no longer than `dt`.
pub(crate) fn propagate_raw(
    rho: &ComplexMatrix,
    generator: &Generator,
    duration: f64,
    dt: f64,
) -> Result<ComplexMatrix> {
    if duration == 0.0 {
        return Ok(*rho);
    }
    let steps = ((duration / dt) - 1e-9).ceil().max(1.0) as usize;
    let h = duration / steps as f64;
    let mut state = *rho;
    for _ in 0..steps {
        state = generator.rk4_step(&state, h);
        let trace = state.trace().re;
        if !trace.is_finite() || !state.is_finite() {
            return Err(Error::Numerical(
                "non-finite state during integration".into(),
            ));
        }
        if trace <= MIN_TRACE {
            return Err(Error::TraceCollapse { trace });
        }
    }
    Ok(state)
}

pub(crate) fn check_step(t_end: f64, dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "step must be finite and positive",
        });
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            value: t_end,
            reason: "end time must be finite and non-negative",
        });
    }
    Ok(())
}

/// Fixed-step RK4 solution of the master equation from `rho0` to absolute
/// time `t_end`. The result is raw: for non-Hermitian specs its trace drifts
/// and [`renormalize`] should be applied before computing observables.
pub fn integrate(
    rho0: &DensityMatrix,
    spec: &EvolutionSpec,
    t_end: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    check_step(t_end, dt)?;
    let generator = Generator::new(spec)?;
    let raw = propagate_raw(rho0.matrix(), &generator, t_end, dt)?;
    DensityMatrix::new(raw)
}

/// `rho / tr(rho)`.
pub fn renormalize(rho: &DensityMatrix) -> Result<DensityMatrix> {
    rho.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{damped_state, evolve_closed_form, PTParams};
    use crate::matrix::Complex;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn bell() -> DensityMatrix {
        let h = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex::new(0.0, 0.0);
        DensityMatrix::from_pure(&[h, z, z, h]).unwrap()
    }

    fn basis(i: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4).unwrap();
        m[(i, i)] = Complex::new(1.0, 0.0);
        m
    }

    #[test]
    fn rabi_derivative_is_traceless() {
        let d = master_rhs(&bell(), &EvolutionSpec::rabi(1.0).unwrap()).unwrap();
        assert!(d.trace().norm() < 1e-15);
    }

    #[test]
    fn pt_trace_rate_vanishes_on_bell_state() {
        let d = master_rhs(&bell(), &EvolutionSpec::pt(1.0, FRAC_PI_4).unwrap()).unwrap();
        assert!(d.trace().norm() < 1e-15);
    }

    #[test]
    fn damping_of_excited_product_state() {
        // |00><00| decays into |10><10| (qubit 1's |0> is the excited level).
        let gamma = 0.8;
        let rho = DensityMatrix::new(basis(0)).unwrap();
        let spec = EvolutionSpec::amplitude_damping(gamma).unwrap();
        let d = master_rhs(&rho, &spec).unwrap();
        let expected = (basis(2) - basis(0)).scale_re(gamma);
        assert!(d.max_abs_diff(&expected) < 1e-15);

        // Ground state of qubit 1 is stationary.
        let ground = DensityMatrix::new(basis(3)).unwrap();
        assert!(master_rhs(&ground, &spec).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn zero_time_is_identity() {
        for spec in [
            EvolutionSpec::rabi(1.0).unwrap(),
            EvolutionSpec::pt(1.0, 0.4).unwrap(),
            EvolutionSpec::amplitude_damping(1.0).unwrap(),
        ] {
            let out = integrate(&bell(), &spec, 0.0, 1e-3).unwrap();
            assert_eq!(out, bell());
        }
    }

    #[test]
    fn damping_reaches_tabulated_matrix() {
        let spec = EvolutionSpec::amplitude_damping(1.0).unwrap();
        let rho = integrate(&bell(), &spec, 1.0, 1e-3).unwrap();
        let m = rho.matrix();
        for (i, j, v) in [(0, 0, 0.1839), (0, 3, 0.3033), (2, 2, 0.3161), (3, 3, 0.5)] {
            assert!((m[(i, j)].re - v).abs() < 1e-4);
        }
        assert!(m.max_abs_diff(damped_state(1.0, 1.0).unwrap().matrix()) < 1e-10);
    }

    #[test]
    fn pt_integration_matches_closed_form() {
        let p = PTParams::new(1.0, FRAC_PI_4).unwrap();
        let spec = EvolutionSpec::Pt(p);
        let dt = 1e-4 / p.delta_e();
        let raw = integrate(&bell(), &spec, FRAC_PI_2 / p.delta_e(), dt).unwrap();
        assert!((raw.trace() - 3.0).abs() < 1e-9);
        let exact = evolve_closed_form(&bell(), &p, FRAC_PI_2).unwrap();
        let diff = renormalize(&raw)
            .unwrap()
            .matrix()
            .max_abs_diff(exact.matrix());
        assert!(diff < 1e-7, "{diff}");
    }

    #[test]
    fn renormalize_cases() {
        assert_eq!(renormalize(&bell()).unwrap(), bell());
        let doubled = DensityMatrix::new(bell().matrix().scale_re(2.0)).unwrap();
        assert!(
            renormalize(&doubled)
                .unwrap()
                .matrix()
                .max_abs_diff(bell().matrix())
                < 1e-16
        );
    }

    #[test]
    fn invalid_steps_rejected() {
        let spec = EvolutionSpec::rabi(1.0).unwrap();
        assert!(integrate(&bell(), &spec, 1.0, 0.0).is_err());
        assert!(integrate(&bell(), &spec, -1.0, 1e-3).is_err());
        assert!(integrate(&bell(), &spec, f64::NAN, 1e-3).is_err());
    }

    #[test]
    fn uniform_loss_collapses_trace() {
        // H- = -10 i I gives drho/dt = -20 rho: the trace passes 1e-12 near t = 1.4.
        let generator = Generator::Hamiltonian {
            h_plus: ComplexMatrix::zeros(4).unwrap(),
            h_minus: ComplexMatrix::identity(4).unwrap().scale(-I * 10.0),
        };
        let rho = bell().into_matrix();
        let early = propagate_raw(&rho, &generator, 1.0, 1e-3).unwrap();
        assert!((early.trace().re - (-20.0f64).exp()).abs() < 1e-12);
        assert!(matches!(
            propagate_raw(&rho, &generator, 2.0, 1e-3),
            Err(Error::TraceCollapse { .. })
        ));
    }
}
