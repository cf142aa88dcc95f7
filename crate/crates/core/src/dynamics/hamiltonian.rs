use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::matrix::{pauli, Complex, ComplexMatrix};

/// Closest `|alpha|` may get to the exceptional point at pi/2.
pub const EXCEPTIONAL_POINT_MARGIN: f64 = 1e-6;

/// Parameters of the single-qubit PT-symmetric Hamiltonian
/// `s [[i sin a, 1], [1, -i sin a]]` in its unbroken phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTParams {
    s: f64,
    alpha: f64,
}

impl PTParams {
    pub fn new(s: f64, alpha: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParameter {
                name: "s",
                value: s,
                reason: "scale must be finite and positive",
            });
        }
        if !alpha.is_finite() || alpha.abs() >= FRAC_PI_2 - EXCEPTIONAL_POINT_MARGIN {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "|alpha| must stay below pi/2 (unbroken PT phase)",
            });
        }
        Ok(Self { s, alpha })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Half the gap between the real eigenvalues `+-s cos(alpha)`.
    pub fn delta_e(&self) -> f64 {
        self.s * self.alpha.cos()
    }
}

/// Hermitian and anti-Hermitian parts of an operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitHamiltonian {
    pub h_plus: ComplexMatrix,
    pub h_minus: ComplexMatrix,
}

/// Resonant Rabi drive `g (sigma+ + sigma-) = g sigma_x`.
pub fn rabi_hamiltonian(g: f64) -> ComplexMatrix {
    pauli::x().scale_re(g)
}

pub fn pt_hamiltonian(p: &PTParams) -> ComplexMatrix {
    let gain = Complex::new(0.0, p.alpha.sin());
    ComplexMatrix::from_rows(&[
        [gain, Complex::new(1.0, 0.0)],
        [Complex::new(1.0, 0.0), -gain],
    ])
    .expect("finite 2x2")
    .scale_re(p.s)
}

/// PT Hamiltonian plus a symmetry-breaking `epsilon sigma_z`.
pub fn nonpt_hamiltonian(p: &PTParams, epsilon: f64) -> ComplexMatrix {
    pt_hamiltonian(p) + pauli::z().scale_re(epsilon)
}

/// `h = h_plus + h_minus` with `h_plus = (h + h^dagger)/2`,
/// `h_minus = (h - h^dagger)/2`.
pub fn split_hermitian(h: &ComplexMatrix) -> SplitHamiltonian {
    let adj = h.adjoint();
    SplitHamiltonian {
        h_plus: (*h + adj).scale_re(0.5),
        h_minus: (*h - adj).scale_re(0.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::general_eigenvalues;
    use crate::matrix::on_qubit_one;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn rabi_is_scaled_sigma_x() {
        assert_eq!(rabi_hamiltonian(1.0), pauli::x());
        assert_eq!(rabi_hamiltonian(0.0), ComplexMatrix::zeros(2).unwrap());
        assert_eq!(rabi_hamiltonian(0.5), pauli::x().scale_re(0.5));
    }

    #[test]
    fn pt_hermitian_limit() {
        let p = PTParams::new(1.0, 0.0).unwrap();
        assert_eq!(pt_hamiltonian(&p), pauli::x());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn pt_at_quarter_pi() {
        let p = PTParams::new(1.0, FRAC_PI_4).unwrap();
        let h = pt_hamiltonian(&p);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h[(0, 0)] - Complex::new(0.0, r)).norm() < 1e-15);
        assert!((h[(1, 1)] - Complex::new(0.0, -r)).norm() < 1e-15);
        assert_eq!(h[(0, 1)], Complex::new(1.0, 0.0));

        let mut eig: Vec<Complex> = general_eigenvalues(&h).unwrap();
        eig.sort_by(|a, b| b.re.total_cmp(&a.re));
        assert!((eig[0] - Complex::new(0.70711, 0.0)).norm() < 1e-5);
        assert!((eig[1] + Complex::new(0.70711, 0.0)).norm() < 1e-5);
        assert!((p.delta_e() - FRAC_PI_4.cos()).abs() < 1e-15);
    }

    #[test]
    fn broken_phase_rejected() {
        assert!(PTParams::new(1.0, 1.6).is_err());
        assert!(PTParams::new(1.0, -FRAC_PI_2).is_err());
        assert!(PTParams::new(1.0, FRAC_PI_2 - 1e-7).is_err());
        assert!(PTParams::new(1.0, FRAC_PI_2 - 1e-5).is_ok());
        assert!(PTParams::new(0.0, 0.3).is_err());
        assert!(PTParams::new(-1.0, 0.3).is_err());
    }

    #[test]
    fn nonpt_reduces_and_breaks_reality() {
        let p = PTParams::new(1.0, FRAC_PI_4).unwrap();
        assert_eq!(nonpt_hamiltonian(&p, 0.0), pt_hamiltonian(&p));
        let h = nonpt_hamiltonian(&p, 0.01);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h[(0, 0)] - Complex::new(0.01, r)).norm() < 1e-15);
        assert!((h[(1, 1)] - Complex::new(-0.01, -r)).norm() < 1e-15);

        // +-sqrt(s^2 + (eps + i s sin a)^2)
        let lam = (Complex::new(1.0, 0.0) + Complex::new(0.01, r).powu(2)).sqrt();
        assert!(lam.im.abs() > 1e-3);
        let eig = general_eigenvalues(&h).unwrap();
        for z in eig {
            let d = (z - lam).norm().min((z + lam).norm());
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn split_pt_hamiltonian() {
        let p = PTParams::new(1.0, FRAC_PI_4).unwrap();
        let h = on_qubit_one(&pt_hamiltonian(&p)).unwrap();
        let split = split_hermitian(&h);
        assert!(
            split
                .h_plus
                .max_abs_diff(&on_qubit_one(&pauli::x()).unwrap())
                < 1e-15
        );
        let expected = on_qubit_one(&pauli::z())
            .unwrap()
            .scale(Complex::new(0.0, std::f64::consts::FRAC_1_SQRT_2));
        assert!(split.h_minus.max_abs_diff(&expected) < 1e-15);
        assert!((split.h_plus + split.h_minus).max_abs_diff(&h) < 1e-15);
    }

    #[test]
    fn split_pure_parts() {
        let herm = pauli::y().scale_re(0.7);
        let s = split_hermitian(&herm);
        assert_eq!(s.h_minus.max_abs(), 0.0);
        let anti = herm.scale(Complex::new(0.0, 1.0));
        let s = split_hermitian(&anti);
        assert_eq!(s.h_plus.max_abs(), 0.0);
        assert!(s.h_minus.hermiticity_deviation() > 0.0);
        assert!((s.h_minus + s.h_minus.adjoint()).max_abs() < 1e-15);
    }
}
