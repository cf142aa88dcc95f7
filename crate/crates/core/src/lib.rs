//! Two-qubit density-matrix dynamics where only qubit 1 evolves: Rabi
//! driving, PT-symmetric and symmetry-broken non-Hermitian Hamiltonians, and
//! amplitude damping. States are scored by concurrence, the maximal CHSH
//! value and the steering parameters `S_2`, `S_3`.
//!
//! ```
//! use pt_entangle::dynamics::{evolve_closed_form, PTParams};
//! use pt_entangle::metrics::concurrence;
//! use pt_entangle::scenarios::bell_phi_plus;
//!
//! let p = PTParams::new(1.0, std::f64::consts::FRAC_PI_4)?;
//! let rho = evolve_closed_form(&bell_phi_plus(), &p, std::f64::consts::FRAC_PI_2)?;
//! assert!((concurrence(&rho, false)? - 1.0 / 3.0).abs() < 1e-12);
//! # Ok::<(), pt_entangle::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module; its code blocks run as
//! doctests of this crate.

pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod io;
pub mod matrix;
pub mod metrics;
pub mod scenarios;

pub use error::{Error, ErrorKind, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
