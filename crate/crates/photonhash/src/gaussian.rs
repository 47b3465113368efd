//! Second-moment representation of zero-mean N-mode Gaussian states and the
//! three-mode correlation observables extracted from it.
//!
//! A state is described by the pair of matrices
//! `M[i,j] = <a_i† a_j>` (Hermitian, non-negative real diagonal) and
//! `P[i,j] = <a_i a_j>` (symmetric). For the squeezing convention
//! `S(r) = exp[(r/2)(a² - a†²)]` the single-mode squeezed vacuum has
//! `M = sinh² r` and `P = -sinh r cosh r`; the sign is pinned by the
//! truncated-Fock cross-check in `fock`, not assumed.

use num_complex::Complex64;

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::wick::{wick_expectation, LadderSequence};

/// Max |U†U - I| accepted when applying a mode unitary.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Largest imaginary residue tolerated in a photon-number expectation.
pub const IMAG_TOL: f64 = 1e-9;
/// Correlations below this are a moment-engine failure, above it they clamp to zero.
pub const NEG_CORR_TOL: f64 = -1e-9;
/// Variances below this are a numerical failure, above it they clamp to zero.
pub const NEG_VAR_TOL: f64 = -1e-8;

#[derive(Debug, Clone)]
pub struct GaussianMoments {
    n_modes: usize,
    m: CMat,
    p: CMat,
}

impl GaussianMoments {
    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            n_modes,
            m: CMat::zeros((n_modes, n_modes)),
            p: CMat::zeros((n_modes, n_modes)),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// `M[i,j] = <a_i† a_j>`.
    pub fn m(&self) -> &CMat {
        &self.m
    }

    /// `P[i,j] = <a_i a_j>`.
    pub fn p(&self) -> &CMat {
        &self.p
    }

    /// Total mean photon number; invariant under passive transformations.
    pub fn trace_m(&self) -> f64 {
        (0..self.n_modes).map(|j| self.m[(j, j)].re).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        linalg::hermiticity_deviation(&self.m)
    }

    pub fn symmetry_deviation(&self) -> f64 {
        linalg::symmetry_deviation(&self.p)
    }

    /// Transforms the moments by the mode unitary `U` (defined by
    /// 𝒰† a_i† 𝒰 = Σ_j U[i,j] a_j†):
    ///
    /// `M_out = U M U†`, `P_out = conj(U) P conj(U)ᵀ`.
    pub fn apply_interferometer(&self, u: &CMat) -> Result<Self> {
        if u.nrows() != self.n_modes {
            return Err(Error::DimensionMismatch {
                what: "interferometer unitary",
                expected: self.n_modes,
                actual: u.nrows(),
            });
        }
        linalg::ensure_unitary(u, UNITARITY_TOL)?;
        let u_dag = linalg::dagger(u);
        let u_conj = u.mapv(|z| z.conj());
        let m_out = u.dot(&self.m).dot(&u_dag);
        let p_out = u_conj.dot(&self.p).dot(&u_conj.t());
        Ok(Self {
            n_modes: self.n_modes,
            m: m_out,
            p: p_out,
        })
    }
}

/// Moments of the input state: an array of squeezed vacua with per-mode
/// squeezing `r_on * b_j` (modes with bit 0 stay vacuum).
pub fn input_moments(b: &BitString, r_on: f64) -> Result<GaussianMoments> {
    if !(r_on > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "squeezing amplitude must be positive, got {r_on}"
        )));
    }
    let n = b.len();
    let mut g = GaussianMoments::vacuum(n);
    for j in 0..n {
        let r = r_on * b.get(j) as f64;
        g.m[(j, j)] = Complex64::new(r.sinh() * r.sinh(), 0.0);
        g.p[(j, j)] = Complex64::new(-r.sinh() * r.cosh(), 0.0);
    }
    Ok(g)
}

/// Expected photon-number triple products `μ_j = <n_j n_{j+1} n_{j+2}>`,
/// indices mod N.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationVector {
    values: Vec<f64>,
}

impl CorrelationVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, j: usize) -> f64 {
        self.values[j]
    }
}

fn triple_modes(j: usize, n: usize) -> [usize; 3] {
    [j % n, (j + 1) % n, (j + 2) % n]
}

/// Validates that a Wick value is real and non-negative up to tolerance,
/// returning the clamped real part.
fn real_non_negative(value: Complex64, what: &'static str) -> Result<f64> {
    if value.im.abs() > IMAG_TOL {
        return Err(Error::ToleranceExceeded {
            what,
            value: value.im,
            limit: IMAG_TOL,
        });
    }
    if value.re < NEG_CORR_TOL {
        return Err(Error::ToleranceExceeded {
            what,
            value: value.re,
            limit: -NEG_CORR_TOL,
        });
    }
    Ok(value.re.max(0.0))
}

/// All N nearest-neighbor three-mode correlations of the state.
pub fn three_mode_correlations(g: &GaussianMoments) -> Result<CorrelationVector> {
    let n = g.n_modes();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "three-mode correlations need at least 3 modes, got {n}"
        )));
    }
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let seq = LadderSequence::number_product(&triple_modes(j, n));
        let v = wick_expectation(g, &seq)?;
        values.push(real_non_negative(v, "three-mode correlation")?);
    }
    Ok(CorrelationVector::new(values))
}

/// Intrinsic quantum fluctuation `σ_j = sqrt(<C_j²> - <C_j>²)`.
///
/// `<C_j²>` is the Wick expectation of the 12-operator string (10395
/// matchings).
pub fn correlation_std(g: &GaussianMoments, j: usize) -> Result<f64> {
    let n = g.n_modes();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "three-mode correlations need at least 3 modes, got {n}"
        )));
    }
    let modes = triple_modes(j, n);
    let first = wick_expectation(g, &LadderSequence::number_product(&modes))?;
    let mu = real_non_negative(first, "three-mode correlation")?;
    let twice = [
        modes[0], modes[1], modes[2], modes[0], modes[1], modes[2],
    ];
    let second = wick_expectation(g, &LadderSequence::number_product(&twice))?;
    if second.im.abs() > IMAG_TOL {
        return Err(Error::ToleranceExceeded {
            what: "squared correlation",
            value: second.im,
            limit: IMAG_TOL,
        });
    }
    let variance = second.re - mu * mu;
    if variance < NEG_VAR_TOL {
        return Err(Error::ToleranceExceeded {
            what: "correlation variance",
            value: variance,
            limit: -NEG_VAR_TOL,
        });
    }
    Ok(variance.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::pair_transformation;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_moments_are_zero() {
        let b = BitString::zeros(4);
        let g = input_moments(&b, 1.0).unwrap();
        assert_eq!(linalg::max_abs(g.m()), 0.0);
        assert_eq!(linalg::max_abs(g.p()), 0.0);
    }

    #[test]
    fn single_squeezed_mode_moments() {
        // b with only mode 0 squeezed at r = 1
        let b = BitString::from_index(0b0001, 4);
        let g = input_moments(&b, 1.0).unwrap();
        assert_abs_diff_eq!(g.m()[(0, 0)].re, 1.0f64.sinh().powi(2), epsilon = 1e-12);
        assert_abs_diff_eq!(
            g.p()[(0, 0)].re,
            -(1.0f64.sinh() * 1.0f64.cosh()),
            epsilon = 1e-12
        );
        for j in 1..4 {
            assert_eq!(g.m()[(j, j)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn all_ones_trace() {
        let g = input_moments(&BitString::ones(4), 1.0).unwrap();
        assert_abs_diff_eq!(g.trace_m(), 4.0 * 1.0f64.sinh().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn non_positive_squeezing_rejected() {
        assert!(input_moments(&BitString::ones(2), 0.0).is_err());
        assert!(input_moments(&BitString::ones(2), -1.0).is_err());
    }

    #[test]
    fn identity_leaves_moments_unchanged() {
        let g = input_moments(&BitString::from_index(0b01, 2), 1.0).unwrap();
        let out = g.apply_interferometer(&linalg::identity(2)).unwrap();
        assert!(linalg::max_abs(&(out.m() - g.m())) < 1e-15);
        assert!(linalg::max_abs(&(out.p() - g.p())) < 1e-15);
    }

    #[test]
    fn fifty_fifty_splits_single_squeezed_mode() {
        let g = input_moments(&BitString::from_index(0b01, 2), 1.0).unwrap();
        let v = pair_transformation(std::f64::consts::FRAC_PI_4, 0.0);
        let out = g.apply_interferometer(&v).unwrap();
        let half = 1.0f64.sinh().powi(2) / 2.0;
        assert_abs_diff_eq!(out.m()[(0, 0)].re, half, epsilon = 1e-12);
        assert_abs_diff_eq!(out.m()[(1, 1)].re, half, epsilon = 1e-12);
    }

    #[test]
    fn trace_conserved_and_structure_preserved() {
        let g = input_moments(&BitString::from_index(0b1011, 4), 1.0).unwrap();
        let u = crate::haar::haar_unitary(4, 99);
        let out = g.apply_interferometer(&u).unwrap();
        assert_abs_diff_eq!(out.trace_m(), g.trace_m(), epsilon = 1e-10);
        assert!(out.hermiticity_deviation() < 1e-12);
        assert!(out.symmetry_deviation() < 1e-12);
    }

    #[test]
    fn non_unitary_rejected() {
        let g = GaussianMoments::vacuum(2);
        let mut u = linalg::identity(2);
        u[(0, 0)] = Complex64::new(1.5, 0.0);
        assert!(matches!(
            g.apply_interferometer(&u),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn vacuum_correlations_are_zero() {
        let g = GaussianMoments::vacuum(4);
        let mu = three_mode_correlations(&g).unwrap();
        assert!(mu.values().iter().all(|&v| v == 0.0));
        assert_eq!(correlation_std(&g, 0).unwrap(), 0.0);
    }

    #[test]
    fn independent_modes_factorize() {
        // modes 0..2 squeezed, mode 3 vacuum, no mixing:
        // μ_0 = sinh⁶ r, the three wrapped windows each hit the vacuum mode
        let b = BitString::from_bits(&[1, 1, 1, 0]).unwrap();
        let g = input_moments(&b, 1.0).unwrap();
        let mu = three_mode_correlations(&g).unwrap();
        assert_abs_diff_eq!(mu.get(0), 1.0f64.sinh().powi(6), epsilon = 1e-9);
        assert_abs_diff_eq!(mu.get(1), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mu.get(2), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mu.get(3), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn independent_mode_std_closed_form() {
        // same input: σ_0² = <n²>³ - <n>⁶ with <n²> = sinh⁴ + 2 sinh² cosh²
        let b = BitString::from_bits(&[1, 1, 1, 0]).unwrap();
        let g = input_moments(&b, 1.0).unwrap();
        let s2 = 1.0f64.sinh().powi(2);
        let n2 = 1.0f64.sinh().powi(4) + 2.0 * s2 * 1.0f64.cosh().powi(2);
        let expected = (n2.powi(3) - s2.powi(6)).sqrt();
        assert_abs_diff_eq!(correlation_std(&g, 0).unwrap(), expected, epsilon = 1e-8);
    }

    #[test]
    fn too_few_modes_rejected() {
        let g = GaussianMoments::vacuum(2);
        assert!(three_mode_correlations(&g).is_err());
        assert!(correlation_std(&g, 0).is_err());
    }
}
