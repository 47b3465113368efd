//! The end-to-end N-bit hash: encode the message as squeezed modes,
//! propagate through the circuit, read out the three-mode correlations, and
//! extract one bit per mode from the k-th decimal digit.
//!
//! Exact mode is a pure function of (circuit, k, r_on, message). The
//! shot-emulated mode adds an independent normal perturbation
//! `N(0, σ_j/√N_shot)` to each correlation before digit extraction,
//! modeling the statistical error of estimating expectations from a finite
//! number of measurement shots.

use serde::Serialize;

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::gaussian::{
    correlation_std, input_moments, three_mode_correlations, CorrelationVector, GaussianMoments,
};
use crate::interferometer::{compose_unitary, CircuitParams};
use crate::linalg::CMat;
use crate::rng::SeededStream;

/// Default squeezing amplitude for bit value 1.
pub const DEFAULT_R_ON: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum EvalMode {
    Exact,
    ShotEmulated { n_shot: u64, noise_seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct HashConfig {
    pub circuit: CircuitParams,
    /// Which decimal digit of μ_j becomes the output bit.
    pub k: u32,
    pub r_on: f64,
    pub mode: EvalMode,
}

impl HashConfig {
    pub fn exact(circuit: CircuitParams, k: u32) -> Self {
        Self {
            circuit,
            k,
            r_on: DEFAULT_R_ON,
            mode: EvalMode::Exact,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.circuit.validate()?;
        if !(self.r_on > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "squeezing amplitude must be positive, got {}",
                self.r_on
            )));
        }
        if let EvalMode::ShotEmulated { n_shot, .. } = self.mode {
            if n_shot == 0 {
                return Err(Error::InvalidParameter(
                    "shot count must be at least 1".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Extracts the k-th decimal digit's parity: ⌊10^k μ⌋ mod 2.
pub fn digit_extract(mu: f64, k: u32) -> Result<u8> {
    if mu < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "digit extraction requires a non-negative correlation, got {mu}"
        )));
    }
    let scaled = 10f64.powi(k as i32) * mu;
    Ok(if scaled.floor() % 2.0 == 0.0 { 0 } else { 1 })
}

/// Distance of 10^k μ to the nearest integer, the margin before the
/// extracted bit would change under a perturbation of μ.
fn digit_margin(mu: f64, k: u32) -> f64 {
    let scaled = 10f64.powi(k as i32) * mu;
    (scaled - scaled.round()).abs()
}

/// Hash output with the diagnostics channel: the raw correlations and the
/// per-mode parity-boundary margins (in digit units).
#[derive(Debug, Clone, Serialize)]
pub struct HashOutput {
    pub bits_text: String,
    #[serde(skip)]
    pub bits: BitString,
    pub correlations: Vec<f64>,
    pub margins: Vec<f64>,
    pub min_margin: f64,
    pub shot_emulated: bool,
}

/// Reusable hashing engine; composes the circuit unitary once and shares it
/// across messages (read-only, safe to use from parallel callers).
pub struct Hasher {
    config: HashConfig,
    unitary: CMat,
}

impl Hasher {
    pub fn new(config: HashConfig) -> Result<Self> {
        config.validate()?;
        if config.circuit.n_modes < 3 {
            return Err(Error::InvalidParameter(
                "hashing needs at least 3 modes for three-mode correlations".into(),
            ));
        }
        let unitary = compose_unitary(&config.circuit)?;
        Ok(Self { config, unitary })
    }

    pub fn config(&self) -> &HashConfig {
        &self.config
    }

    pub fn unitary(&self) -> &CMat {
        &self.unitary
    }

    pub fn n_modes(&self) -> usize {
        self.config.circuit.n_modes
    }

    fn output_moments(&self, b: &BitString) -> Result<GaussianMoments> {
        if b.len() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                what: "message length",
                expected: self.n_modes(),
                actual: b.len(),
            });
        }
        input_moments(b, self.config.r_on)?.apply_interferometer(&self.unitary)
    }

    /// Exact three-mode correlations of the output state for message `b`.
    pub fn correlations(&self, b: &BitString) -> Result<CorrelationVector> {
        three_mode_correlations(&self.output_moments(b)?)
    }

    /// Intrinsic fluctuations σ_j of the output state for message `b`.
    pub fn correlation_stds(&self, b: &BitString) -> Result<Vec<f64>> {
        let g = self.output_moments(b)?;
        (0..self.n_modes()).map(|j| correlation_std(&g, j)).collect()
    }

    /// The hash value of `b` under the configured mode.
    pub fn hash(&self, b: &BitString) -> Result<BitString> {
        Ok(self.hash_detailed(b)?.bits)
    }

    pub fn hash_detailed(&self, b: &BitString) -> Result<HashOutput> {
        let g = self.output_moments(b)?;
        let mu = three_mode_correlations(&g)?;
        let (values, shot_emulated) = match self.config.mode {
            EvalMode::Exact => (mu.values().to_vec(), false),
            EvalMode::ShotEmulated { n_shot, noise_seed } => {
                // One normal draw per mode, ascending j; σ_j = 0 still
                // consumes its two words so the stream layout is fixed.
                let mut stream = SeededStream::new(noise_seed);
                let scale = 1.0 / (n_shot as f64).sqrt();
                let mut perturbed = Vec::with_capacity(mu.len());
                for j in 0..mu.len() {
                    let sigma = correlation_std(&g, j)?;
                    let noisy = mu.get(j) + stream.normal(0.0, sigma * scale);
                    // a sample mean of a non-negative observable is clamped
                    // at zero before digit extraction
                    perturbed.push(noisy.max(0.0));
                }
                (perturbed, true)
            }
        };
        let k = self.config.k;
        let bits: Vec<u8> = values
            .iter()
            .map(|&v| digit_extract(v, k))
            .collect::<Result<_>>()?;
        let margins: Vec<f64> = values.iter().map(|&v| digit_margin(v, k)).collect();
        let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(HashOutput {
            bits_text: BitString::from_bits(&bits)?.to_string(),
            bits: BitString::from_bits(&bits)?,
            correlations: values,
            margins,
            min_margin,
            shot_emulated,
        })
    }
}

/// One-shot convenience wrapper around [`Hasher`].
pub fn hash_message(config: &HashConfig, b: &BitString) -> Result<BitString> {
    Hasher::new(config.clone())?.hash(b)
}

/// Shot-emulated hash; the config must carry `EvalMode::ShotEmulated`.
pub fn shot_noise_hash(config: &HashConfig, b: &BitString) -> Result<BitString> {
    if !matches!(config.mode, EvalMode::ShotEmulated { .. }) {
        return Err(Error::InvalidParameter(
            "shot_noise_hash requires a shot-emulated config".into(),
        ));
    }
    hash_message(config, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{sample_circuit, Boundary, Topology};

    fn test_config(n: usize, k: u32, seed: u64) -> HashConfig {
        let circuit =
            sample_circuit(n, n, Topology::Brickwork, Boundary::Periodic, seed).unwrap();
        HashConfig::exact(circuit, k)
    }

    #[test]
    fn digit_extract_examples() {
        assert_eq!(digit_extract(0.0, 0).unwrap(), 0);
        assert_eq!(digit_extract(0.0, 3).unwrap(), 0);
        assert_eq!(digit_extract(0.23, 1).unwrap(), 0); // ⌊2.3⌋ = 2
        assert_eq!(digit_extract(0.17, 1).unwrap(), 1); // ⌊1.7⌋ = 1
        assert_eq!(digit_extract(7.3, 0).unwrap(), 1);
        assert!(digit_extract(-0.1, 1).is_err());
    }

    #[test]
    fn digit_extract_depends_only_on_kth_digit() {
        // adding 2·10^-k leaves the bit unchanged
        let k = 2;
        let step = 2.0 * 10f64.powi(-(k as i32));
        for i in 0..200 {
            let mu = 0.001 + i as f64 * 0.0137;
            let a = digit_extract(mu, k).unwrap();
            let b = digit_extract(mu + step, k).unwrap();
            let c = digit_extract(mu + 7.0 * step, k).unwrap();
            assert_eq!(a, b, "mu = {mu}");
            assert_eq!(a, c, "mu = {mu}");
        }
    }

    #[test]
    fn all_zeros_hashes_to_all_zeros() {
        for n in [4usize, 8] {
            let cfg = test_config(n, 1, 42);
            let c = hash_message(&cfg, &BitString::zeros(n)).unwrap();
            assert_eq!(c, BitString::zeros(n), "n = {n}");
        }
    }

    #[test]
    fn exact_hash_is_deterministic() {
        let cfg = test_config(8, 1, 7);
        let b: BitString = "01101001".parse().unwrap();
        let h = Hasher::new(cfg.clone()).unwrap();
        let c1 = h.hash(&b).unwrap();
        let c2 = h.hash(&b).unwrap();
        let c3 = hash_message(&cfg, &b).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(c1, c3);
        assert_eq!(c1.len(), 8);
    }

    #[test]
    fn length_mismatch_rejected() {
        let cfg = test_config(8, 1, 7);
        let h = Hasher::new(cfg).unwrap();
        assert!(h.hash(&BitString::zeros(6)).is_err());
    }

    #[test]
    fn margins_are_half_digit_at_most() {
        let cfg = test_config(8, 1, 3);
        let h = Hasher::new(cfg).unwrap();
        let out = h.hash_detailed(&"10110010".parse().unwrap()).unwrap();
        assert_eq!(out.margins.len(), 8);
        assert!(out.margins.iter().all(|&m| (0.0..=0.5).contains(&m)));
        assert!(out.min_margin <= 0.5);
        assert!(!out.shot_emulated);
    }

    #[test]
    fn vacuum_shot_hash_is_exact_for_any_shot_count() {
        // σ_j = 0 on vacuum, so the perturbation vanishes
        let mut cfg = test_config(8, 1, 7);
        cfg.mode = EvalMode::ShotEmulated {
            n_shot: 1,
            noise_seed: 5,
        };
        let c = hash_message(&cfg, &BitString::zeros(8)).unwrap();
        assert_eq!(c, BitString::zeros(8));
    }

    #[test]
    fn shot_hash_converges_to_exact() {
        let cfg = test_config(8, 1, 7);
        let b: BitString = "01101001".parse().unwrap();
        let exact = Hasher::new(cfg.clone()).unwrap().hash(&b).unwrap();
        for noise_seed in 0..20 {
            let mut shot_cfg = cfg.clone();
            shot_cfg.mode = EvalMode::ShotEmulated {
                n_shot: 1_000_000_000_000,
                noise_seed,
            };
            let c = shot_noise_hash(&shot_cfg, &b).unwrap();
            assert_eq!(c, exact, "noise seed {noise_seed}");
        }
    }

    #[test]
    fn shot_noise_requires_shot_mode() {
        let cfg = test_config(8, 1, 7);
        assert!(shot_noise_hash(&cfg, &BitString::zeros(8)).is_err());
    }
}
