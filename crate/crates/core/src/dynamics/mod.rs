//! Two-qubit dynamics with qubit 1 driven and qubit 2 idle.
//!
//! Four kinds of local evolution act on qubit 1 (see [`EvolutionSpec`]):
//!
//! * a resonant Rabi drive (Hermitian, unitary),
//! * the PT-symmetric Hamiltonian `s [[i sin a, 1], [1, -i sin a]]`,
//! * the same plus `epsilon sigma_z`, which breaks PT symmetry,
//! * Markovian amplitude damping at rate `gamma`.
//!
//! The non-Hermitian generators do not preserve the trace. Integration is
//! kept linear and raw; [`renormalize`] divides by the trace when a physical
//! state is needed. Since the Hamiltonians are time independent, this gives
//! the same states as normalizing continuously.
//!
//! Times passed to [`integrate`] are absolute (hbar = 1). The PT closed form
//! [`pt_propagator`] takes the dimensionless `t' = delta_e * t`; use
//! [`EvolutionSpec::time_unit`] to convert.

mod hamiltonian;
mod integrate;
mod propagator;
mod state;

pub use hamiltonian::{
    nonpt_hamiltonian, pt_hamiltonian, rabi_hamiltonian, split_hermitian, PTParams,
    SplitHamiltonian, EXCEPTIONAL_POINT_MARGIN,
};
pub use integrate::{integrate, master_rhs, renormalize, DEFAULT_DT};
pub(crate) use integrate::{propagate_raw, Generator};
pub use propagator::{
    damped_state, evolve_closed_form, evolve_exact, local_propagator, nonhermitian_propagator,
    pt_propagator,
};
pub use state::{DensityMatrix, MIN_TRACE, PSD_TOL};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Which local evolution qubit 1 undergoes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolutionSpec {
    Rabi { g: f64 },
    Pt(PTParams),
    NonPt { params: PTParams, epsilon: f64 },
    AmplitudeDamping { gamma: f64 },
}

impl EvolutionSpec {
    pub fn rabi(g: f64) -> Result<Self> {
        let spec = Self::Rabi { g };
        spec.validate()?;
        Ok(spec)
    }

    pub fn pt(s: f64, alpha: f64) -> Result<Self> {
        Ok(Self::Pt(PTParams::new(s, alpha)?))
    }

    pub fn non_pt(s: f64, alpha: f64, epsilon: f64) -> Result<Self> {
        let spec = Self::NonPt {
            params: PTParams::new(s, alpha)?,
            epsilon,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        let spec = Self::AmplitudeDamping { gamma };
        spec.validate()?;
        Ok(spec)
    }

    /// Re-checks parameter constraints (the variants are public, so a value
    /// may have been built without going through the constructors).
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Rabi { g } if !g.is_finite() => Err(Error::InvalidParameter {
                name: "g",
                value: g,
                reason: "coupling must be finite",
            }),
            Self::Pt(p) | Self::NonPt { params: p, .. } => {
                PTParams::new(p.s(), p.alpha())?;
                if let Self::NonPt { epsilon, .. } = *self {
                    if !epsilon.is_finite() {
                        return Err(Error::InvalidParameter {
                            name: "epsilon",
                            value: epsilon,
                            reason: "must be finite",
                        });
                    }
                }
                Ok(())
            }
            Self::AmplitudeDamping { gamma } if !(gamma.is_finite() && gamma > 0.0) => {
                Err(Error::InvalidParameter {
                    name: "gamma",
                    value: gamma,
                    reason: "damping rate must be finite and positive",
                })
            }
            _ => Ok(()),
        }
    }

    /// Energy scale that turns absolute time into the dimensionless time used
    /// for reporting: `delta_e` of the PT part for PT and non-PT runs, 1
    /// otherwise.
    pub fn time_unit(&self) -> f64 {
        match self {
            Self::Pt(p) | Self::NonPt { params: p, .. } => p.delta_e(),
            _ => 1.0,
        }
    }

    /// The single-qubit Hamiltonian, if the evolution has one.
    pub fn local_hamiltonian(&self) -> Option<ComplexMatrix> {
        match self {
            Self::Rabi { g } => Some(rabi_hamiltonian(*g)),
            Self::Pt(p) => Some(pt_hamiltonian(p)),
            Self::NonPt { params, epsilon } => Some(nonpt_hamiltonian(params, *epsilon)),
            Self::AmplitudeDamping { .. } => None,
        }
    }

    /// True when the generator does not preserve the trace, so reported
    /// states must be renormalized.
    pub fn needs_renormalization(&self) -> bool {
        matches!(self, Self::Pt(_) | Self::NonPt { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Rabi { .. } => "rabi",
            Self::Pt(_) => "pt",
            Self::NonPt { .. } => "nonpt",
            Self::AmplitudeDamping { .. } => "damping",
        }
    }
}
