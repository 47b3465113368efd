//! Haar-random unitaries and the randomness test comparing circuit
//! ensembles against the Haar measure.
//!
//! The test pools all matrix elements over many circuit realizations,
//! histograms |U_jj'| on [0, 1] and arg U_jj' on [-π, π), and reports the
//! cosine similarity between the circuit and Haar frequency vectors (the
//! raw dot product of the normalized frequencies is reported alongside).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::interferometer::{compose_unitary, sample_circuit, Boundary, Topology};
use crate::linalg::{qr_unitary, CMat};
use crate::rng::{derive_seed, SeededStream};

/// Draws an exactly Haar-distributed N×N unitary: a Ginibre matrix of
/// i.i.d. standard complex normals, QR-orthonormalized with the residual
/// R-diagonal phases divided out. Deterministic under `seed`.
pub fn haar_unitary(n: usize, seed: u64) -> CMat {
    let mut stream = SeededStream::new(seed);
    let mut g = CMat::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let (re, im) = stream.complex_normal();
            g[(i, j)] = Complex64::new(re, im);
        }
    }
    qr_unitary(&g)
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapReport {
    pub n_modes: usize,
    pub depth: usize,
    pub topology: Topology,
    pub boundary: Boundary,
    pub realizations: usize,
    pub bins: usize,
    pub seed: u64,
    /// Cosine similarity of the circuit and Haar amplitude frequency vectors.
    pub amplitude_overlap: f64,
    /// Cosine similarity of the phase frequency vectors.
    pub phase_overlap: f64,
    /// Raw dot products of the normalized frequency vectors.
    pub amplitude_dot: f64,
    pub phase_dot: f64,
    pub circuit_amplitude_freq: Vec<f64>,
    pub haar_amplitude_freq: Vec<f64>,
    pub circuit_phase_freq: Vec<f64>,
    pub haar_phase_freq: Vec<f64>,
}

fn amplitude_bin(v: f64, bins: usize) -> usize {
    ((v * bins as f64) as usize).min(bins - 1)
}

fn phase_bin(v: f64, bins: usize) -> usize {
    // arg in (-π, π]; map onto [0, bins)
    let t = (v + PI) / (2.0 * PI);
    ((t * bins as f64) as usize).min(bins - 1)
}

fn histogram_of(u: &CMat, bins: usize) -> (Vec<u64>, Vec<u64>) {
    let mut amp = vec![0u64; bins];
    let mut phase = vec![0u64; bins];
    for z in u.iter() {
        amp[amplitude_bin(z.norm(), bins)] += 1;
        phase[phase_bin(z.arg(), bins)] += 1;
    }
    (amp, phase)
}

fn add_counts(mut a: (Vec<u64>, Vec<u64>), b: (Vec<u64>, Vec<u64>)) -> (Vec<u64>, Vec<u64>) {
    for (x, y) in a.0.iter_mut().zip(b.0) {
        *x += y;
    }
    for (x, y) in a.1.iter_mut().zip(b.1) {
        *x += y;
    }
    a
}

fn normalize(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return vec![0.0; counts.len()];
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na * nb)
}

/// Pools matrix elements of `realizations` circuit unitaries against as many
/// Haar draws and reports the histogram overlaps.
///
/// Realization `r` uses circuit seed `derive_seed(seed, r)` and Haar seed
/// `derive_seed(seed, realizations + r)`; realizations run in parallel and
/// merge by integer-count addition, so the result is seed-deterministic.
pub fn haar_overlap_test(
    n_modes: usize,
    depth: usize,
    topology: Topology,
    boundary: Boundary,
    realizations: usize,
    bins: usize,
    seed: u64,
) -> Result<OverlapReport> {
    if realizations < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 realizations, got {realizations}"
        )));
    }
    if bins < 10 {
        return Err(Error::InvalidParameter(format!(
            "need at least 10 bins, got {bins}"
        )));
    }
    // Fail fast on an invalid layout before spawning workers.
    sample_circuit(n_modes, depth, topology, boundary, seed)?;

    let zero = || (vec![0u64; bins], vec![0u64; bins]);
    let circuit_counts = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let params = sample_circuit(n_modes, depth, topology, boundary, derive_seed(seed, r as u64))
                .expect("layout validated above");
            let u = compose_unitary(&params).expect("sampled parameters are well-formed");
            histogram_of(&u, bins)
        })
        .reduce(zero, add_counts);
    let haar_counts = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let u = haar_unitary(n_modes, derive_seed(seed, (realizations + r) as u64));
            histogram_of(&u, bins)
        })
        .reduce(zero, add_counts);

    let circuit_amplitude_freq = normalize(&circuit_counts.0);
    let circuit_phase_freq = normalize(&circuit_counts.1);
    let haar_amplitude_freq = normalize(&haar_counts.0);
    let haar_phase_freq = normalize(&haar_counts.1);

    Ok(OverlapReport {
        n_modes,
        depth,
        topology,
        boundary,
        realizations,
        bins,
        seed,
        amplitude_overlap: cosine_similarity(&circuit_amplitude_freq, &haar_amplitude_freq),
        phase_overlap: cosine_similarity(&circuit_phase_freq, &haar_phase_freq),
        amplitude_dot: circuit_amplitude_freq
            .iter()
            .zip(&haar_amplitude_freq)
            .map(|(a, b)| a * b)
            .sum(),
        phase_dot: circuit_phase_freq
            .iter()
            .zip(&haar_phase_freq)
            .map(|(a, b)| a * b)
            .sum(),
        circuit_amplitude_freq,
        haar_amplitude_freq,
        circuit_phase_freq,
        haar_phase_freq,
    })
}
