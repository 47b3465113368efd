//! Small dense complex linear algebra: the workhorse routines behind the
//! mode-unitary algebra and the truncated Fock oracle.
//!
//! Everything here operates on `ndarray::Array2<Complex64>` at dimensions of
//! a few hundred at most, so plain triple-loop kernels are fast enough and
//! keep the results bit-reproducible across platforms.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = Array2<Complex64>;

pub fn identity(n: usize) -> CMat {
    let mut m = CMat::zeros((n, n));
    for i in 0..n {
        m[(i, i)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    let mut out = m.t().to_owned();
    out.mapv_inplace(|z| z.conj());
    out
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Max entry of |U†U - I|.
pub fn unitarity_deviation(u: &CMat) -> f64 {
    let n = u.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            // (U†U)[i,j] = sum_k conj(U[k,i]) U[k,j]
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += u[(k, i)].conj() * u[(k, j)];
            }
            if i == j {
                s -= 1.0;
            }
            dev = dev.max(s.norm());
        }
    }
    dev
}

pub fn ensure_unitary(u: &CMat, tolerance: f64) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch {
            what: "unitary matrix",
            expected: u.nrows(),
            actual: u.ncols(),
        });
    }
    let deviation = unitarity_deviation(u);
    if deviation > tolerance {
        return Err(Error::NotUnitary {
            deviation,
            tolerance,
        });
    }
    Ok(())
}

/// Max entry of |M - M†| (Hermiticity residual).
pub fn hermiticity_deviation(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Max entry of |P - Pᵀ| (symmetry residual).
pub fn symmetry_deviation(p: &CMat) -> f64 {
    let n = p.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((p[(i, j)] - p[(j, i)]).norm());
        }
    }
    dev
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    a.dot(b)
}

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
///
/// The generators exponentiated in this crate are anti-Hermitian with moderate
/// norm, so after scaling to ||A/2^s||₁ ≤ 1/4 the series converges to machine
/// precision in at most `MAX_TERMS` terms without cancellation trouble.
pub fn expm(a: &CMat) -> CMat {
    const MAX_TERMS: usize = 40;
    const TARGET_NORM: f64 = 0.25;

    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return CMat::zeros((0, 0));
    }

    // 1-norm (max column sum)
    let mut norm1 = 0.0_f64;
    for j in 0..n {
        let col: f64 = (0..n).map(|i| a[(i, j)].norm()).sum();
        norm1 = norm1.max(col);
    }

    let squarings = if norm1 > TARGET_NORM {
        (norm1 / TARGET_NORM).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new(1.0 / 2f64.powi(squarings as i32), 0.0);
    let a_scaled = a.mapv(|z| z * scale);

    // exp(A) = sum A^k / k!
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=MAX_TERMS {
        term = term.dot(&a_scaled);
        term.mapv_inplace(|z| z / k as f64);
        result += &term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }

    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// QR-orthonormalization with the residual diagonal phases of R divided out,
/// mapping a Ginibre sample to an exactly Haar-distributed unitary.
///
/// Uses complex Householder reflections; `a` must be square and
/// full-rank (true with probability 1 for random input).
pub fn qr_unitary(a: &CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "qr_unitary requires a square matrix");
    let mut r = a.clone();
    let mut q = identity(n);

    for k in 0..n {
        // Householder vector for column k below the diagonal.
        let mut alpha_norm = 0.0_f64;
        for i in k..n {
            alpha_norm += r[(i, k)].norm_sqr();
        }
        let alpha_norm = alpha_norm.sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * alpha_norm;

        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for i in k..n {
            v[i] = r[(i, k)];
        }
        v[k] -= alpha;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }

        // r <- (I - 2 v v† / v†v) r ; q <- q (I - 2 v v† / v†v)
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..n {
                dot += v[i].conj() * r[(i, j)];
            }
            let f = dot * 2.0 / vnorm_sqr;
            for i in k..n {
                let vi = v[i];
                r[(i, j)] -= f * vi;
            }
        }
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k..n {
                dot += q[(i, j)] * v[j];
            }
            let f = dot * 2.0 / vnorm_sqr;
            for j in k..n {
                q[(i, j)] -= f * v[j].conj();
            }
        }
    }

    // Fold the diagonal phases of R into Q: U = Q diag(R_kk / |R_kk|).
    for k in 0..n {
        let d = r[(k, k)];
        let lambda = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, k)] *= lambda;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C;

    #[test]
    fn expm_of_zero_is_identity() {
        let z = CMat::zeros((3, 3));
        let e = expm(&z);
        assert!(max_abs(&(&e - &identity(3))) < 1e-15);
    }

    #[test]
    fn expm_matches_scalar_exponential_on_diagonal() {
        let mut a = CMat::zeros((2, 2));
        a[(0, 0)] = C::new(0.3, -1.1);
        a[(1, 1)] = C::new(-2.0, 0.7);
        let e = expm(&a);
        assert_abs_diff_eq!(e[(0, 0)].re, C::new(0.3, -1.1).exp().re, epsilon = 1e-13);
        assert_abs_diff_eq!(e[(0, 0)].im, C::new(0.3, -1.1).exp().im, epsilon = 1e-13);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn expm_rotation_generator() {
        // exp(t [[0,-1],[1,0]]) = [[cos t, -sin t],[sin t, cos t]]
        let t = 0.83;
        let mut a = CMat::zeros((2, 2));
        a[(0, 1)] = C::new(-t, 0.0);
        a[(1, 0)] = C::new(t, 0.0);
        let e = expm(&a);
        assert_abs_diff_eq!(e[(0, 0)].re, t.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(e[(1, 0)].re, t.sin(), epsilon = 1e-14);
    }

    #[test]
    fn expm_large_norm_anti_hermitian_is_unitary() {
        // scaled-and-squared path; generator norm far above the Taylor radius
        let n = 12;
        let mut a = CMat::zeros((n, n));
        for i in 0..n - 1 {
            let g = C::new(0.0, 3.0 + i as f64);
            a[(i, i + 1)] = g;
            a[(i + 1, i)] = -g.conj();
        }
        let e = expm(&a);
        assert!(unitarity_deviation(&e) < 1e-12);
    }

    #[test]
    fn qr_unitary_produces_unitary() {
        let n = 7;
        let mut a = CMat::zeros((n, n));
        // deterministic pseudo-random fill, no RNG needed here
        let mut x = 0.37_f64;
        for i in 0..n {
            for j in 0..n {
                x = (x * 997.13 + 0.71).fract();
                let re = x - 0.5;
                x = (x * 997.13 + 0.71).fract();
                a[(i, j)] = C::new(re, x - 0.5);
            }
        }
        let u = qr_unitary(&a);
        assert!(unitarity_deviation(&u) < 1e-12);
    }
}
