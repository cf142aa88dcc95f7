//! Eigenvalue and singular-value routines for small complex matrices.
//!
//! * Hermitian matrices: cyclic complex Jacobi rotations.
//! * General matrices: Householder reduction to Hessenberg form followed by
//!   single-shift complex QR iteration with Wilkinson shifts.
//! * Singular values: one-sided (Hestenes) Jacobi, which keeps small singular
//!   values accurate to absolute machine precision.

use crate::error::{Error, Result};
use crate::matrix::{Complex, ComplexMatrix, HERMITIAN_TOL, ONE, ZERO};

const JACOBI_MAX_SWEEPS: usize = 64;
const QR_MAX_ITERS_PER_EIGENVALUE: usize = 60;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

fn require_hermitian(m: &ComplexMatrix) -> Result<()> {
    m.check_finite()?;
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

fn off_diagonal_norm_sq(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn frobenius_sq(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)].norm_sqr();
        }
    }
    s
}

/// Full eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    require_hermitian(m)?;
    let n = m.dim();
    let mut a = (*m + m.adjoint()).scale_re(0.5);
    let mut v = ComplexMatrix::identity(n)?;
    let total = frobenius_sq(&a);
    // Entries below this are left alone: rotating them only churns roundoff
    // and, once subnormal, the phase division overflows.
    let negligible = f64::EPSILON * 1e-2 * total.sqrt();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm_sq(&a);
        if off <= total * 1e-32 || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= negligible {
                    continue;
                }
                // Phase out a_pq, then a real rotation annihilates it.
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let mut rot = ComplexMatrix::identity(n)?;
                rot[(p, p)] = Complex::new(c, 0.0);
                rot[(p, q)] = Complex::new(s, 0.0);
                rot[(q, p)] = -phase.conj() * s;
                rot[(q, q)] = phase.conj() * c;
                a = rot.adjoint() * a * rot;
                v = v * rot;
            }
        }
    }
    if !converged && off_diagonal_norm_sq(&a) > total * 1e-24 {
        return Err(Error::Numerical(
            "Jacobi eigenvalue iteration did not converge".into(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n)?;
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Real eigenvalues of a Hermitian matrix, in descending order.
///
/// Fails with [`Error::NotHermitian`] if `max |m - m^dagger|` exceeds
/// [`HERMITIAN_TOL`].
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Reduces `m` to upper Hessenberg form by Householder reflections. The
/// result is unitarily similar to `m`.
fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut h = *m;
    for k in 0..n.saturating_sub(2) {
        let mut x: Vec<Complex> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            ONE
        };
        x[0] += phase * norm;
        let vnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<Complex> = x.iter().map(|z| z / vnorm).collect();

        // H <- (I - 2 v v^dagger) H
        for col in 0..n {
            let dot: Complex = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, col)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, col)] -= vi * dot * 2.0;
            }
        }
        // H <- H (I - 2 v v^dagger)
        for row in 0..n {
            let dot: Complex = v
                .iter()
                .enumerate()
                .map(|(i, vi)| h[(row, k + 1 + i)] * vi)
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(row, k + 1 + i)] -= dot * vi.conj() * 2.0;
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with real `c` such that
/// `G [a; b] = [r; 0]`.
fn givens(a: Complex, b: Complex) -> (f64, Complex) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, ONE);
    }
    let norm = an.hypot(bn);
    let phase = a / an;
    (an / norm, phase * b.conj() / norm)
}

fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of a general complex matrix (any supported dimension), in no
/// particular order.
pub fn general_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex>> {
    m.check_finite()?;
    let n = m.dim();
    let mut h = hessenberg(m);
    let scale = frobenius_sq(&h).sqrt();
    let mut eig = vec![ZERO; n];
    if scale == 0.0 {
        return Ok(eig);
    }

    let negligible = |h: &ComplexMatrix, k: usize| {
        let sub = h[(k, k - 1)].norm();
        let local = h[(k, k)].norm() + h[(k - 1, k - 1)].norm();
        // Relative test, with an absolute floor so clusters of tiny
        // eigenvalues still deflate.
        sub <= f64::EPSILON * (local + 1e-3 * scale)
    };

    let mut hi = n - 1;
    let mut iters = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        if negligible(&h, hi) {
            h[(hi, hi - 1)] = ZERO;
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iters = 0;
            continue;
        }
        // Start of the unreduced block ending at `hi`.
        let mut lo = hi - 1;
        while lo > 0 && !negligible(&h, lo) {
            lo -= 1;
        }
        if lo > 0 {
            h[(lo, lo - 1)] = ZERO;
        }

        iters += 1;
        if iters > QR_MAX_ITERS_PER_EIGENVALUE {
            return Err(Error::Numerical(
                "shifted QR iteration did not converge".into(),
            ));
        }
        let mu = if iters.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for col in k..=hi {
                let x = h[(k, col)];
                let y = h[(k + 1, col)];
                h[(k, col)] = x * c + s * y;
                h[(k + 1, col)] = -s.conj() * x + y * c;
            }
            rotations.push((k, c, s));
        }
        for (k, c, s) in rotations {
            let last = (k + 2).min(hi);
            for row in lo..=last {
                let x = h[(row, k)];
                let y = h[(row, k + 1)];
                h[(row, k)] = x * c + y * s.conj();
                h[(row, k + 1)] = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(eig)
}

/// The four eigenvalues of a general 4x4 complex matrix.
pub fn general_eigenvalues_4x4(m: &ComplexMatrix) -> Result<[Complex; 4]> {
    if m.dim() != 4 {
        return Err(Error::InvalidDimension {
            expected: "4x4".into(),
            found: m.dim(),
        });
    }
    let v = general_eigenvalues(m)?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// Singular values of a square matrix, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.check_finite()?;
    let n = m.dim();
    let mut cols: Vec<Vec<Complex>> = (0..n)
        .map(|j| (0..n).map(|i| m[(i, j)]).collect())
        .collect();

    let dot = |u: &[Complex], v: &[Complex]| -> Complex {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for j in 0..n {
            for k in (j + 1)..n {
                let alpha = dot(&cols[j], &cols[j]).re;
                let beta = dot(&cols[k], &cols[k]).re;
                let gamma = dot(&cols[j], &cols[k]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(k);
                for (uj, uk) in left[j].iter_mut().zip(right[0].iter_mut()) {
                    let u = *uj;
                    let v = *uk * phase.conj();
                    *uj = u * c - v * s;
                    *uk = u * s + v * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(
            "one-sided Jacobi SVD did not converge".into(),
        ));
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// `exp(-i h t)` for a Hermitian 2x2 `h`, by spectral decomposition.
pub fn mat_exp_2x2_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if h.dim() != 2 {
        return Err(Error::InvalidDimension {
            expected: "2x2".into(),
            found: h.dim(),
        });
    }
    let HermitianEigen { values, vectors } = hermitian_eigen(h)?;
    let phases: Vec<Complex> = values
        .iter()
        .map(|&l| Complex::from_polar(1.0, -l * t))
        .collect();
    let d = ComplexMatrix::diagonal(&phases)?;
    Ok(vectors * d * vectors.adjoint())
}
