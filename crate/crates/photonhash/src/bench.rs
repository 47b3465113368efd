//! Security benchmarks over the full input space: confusion, diffusion,
//! collision resistance, correlation percentiles for choosing the decimal
//! parameter k, and the measurement-shot budget.
//!
//! Benchmark sums run over all 2^N inputs including the two trivial ones
//! (all-zeros, all-ones); removing them is an application-level concern.
//! Table construction parallelizes over inputs and merges in index order,
//! so every report is deterministic given its seeds.

use rayon::prelude::*;
use serde::Serialize;

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::hash::{HashConfig, Hasher};
use crate::rng::SeededStream;

/// Default cap on the enumerated mode count (2^N rows, N·2^N Wick sums).
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

/// The exact hash of every N-bit input; row i holds the hash of the binary
/// encoding of i.
#[derive(Debug, Clone)]
pub struct HashTable {
    n_modes: usize,
    k: u32,
    outputs: Vec<u64>,
}

impl HashTable {
    /// Builds a table from precomputed outputs (for synthetic test tables).
    pub fn from_outputs(n_modes: usize, k: u32, outputs: Vec<u64>) -> Result<Self> {
        if outputs.len() != 1usize << n_modes {
            return Err(Error::DimensionMismatch {
                what: "hash table rows",
                expected: 1usize << n_modes,
                actual: outputs.len(),
            });
        }
        Ok(Self {
            n_modes,
            k,
            outputs,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    /// Packed hash of input index i (bit j of the result is output bit j).
    pub fn output(&self, input: u64) -> u64 {
        self.outputs[input as usize]
    }

    pub fn rows(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.outputs
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64, c))
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    Ok(())
}

/// Hashes all 2^N inputs in exact mode with one shared circuit unitary.
pub fn enumerate_hashes(config: &HashConfig, cap: usize) -> Result<HashTable> {
    let n = config.circuit.n_modes;
    check_cap(n, cap)?;
    let mut exact = config.clone();
    exact.mode = crate::hash::EvalMode::Exact;
    let hasher = Hasher::new(exact)?;
    let outputs: Vec<u64> = (0u64..(1u64 << n))
        .into_par_iter()
        .map(|i| {
            hasher
                .hash(&BitString::from_index(i, n))
                .map(|c| c.to_index())
        })
        .collect::<Result<_>>()?;
    HashTable::from_outputs(n, config.k, outputs)
}

/// Shared shape of the confusion and diffusion analyses: Hamming-distance
/// statistics and per-position flip counts over a set of bitstring pairs.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceStats {
    /// Normalized average Hamming distance, in [0, 2].
    pub mean_distance: f64,
    /// Population standard deviation of d/(N/2).
    pub distance_std: f64,
    /// Counts of raw Hamming distances 0..=N.
    pub hamming_histogram: Vec<u64>,
    /// L_j: how often bit position j differed.
    pub flip_counts: Vec<u64>,
    /// P_j = L_j / Σ L; all zeros if no flips occurred.
    pub flip_distribution: Vec<f64>,
    /// Normalized Shannon entropy of P_j (0 by convention when Σ L = 0).
    pub shannon_entropy: f64,
}

fn distance_stats<I>(pairs: I, n: usize) -> DistanceStats
where
    I: Iterator<Item = (u64, u64)>,
{
    let mut histogram = vec![0u64; n + 1];
    let mut flips = vec![0u64; n];
    let mut count = 0u64;
    for (a, b) in pairs {
        let x = a ^ b;
        histogram[x.count_ones() as usize] += 1;
        for (j, f) in flips.iter_mut().enumerate() {
            *f += (x >> j) & 1;
        }
        count += 1;
    }

    // Both moments from the integer histogram, so the per-row mean and the
    // histogram moment are identical by construction.
    let total: u64 = histogram
        .iter()
        .enumerate()
        .map(|(d, &c)| d as u64 * c)
        .sum();
    let total_sq: u64 = histogram
        .iter()
        .enumerate()
        .map(|(d, &c)| (d * d) as u64 * c)
        .sum();
    let half = n as f64 / 2.0;
    let mean_raw = total as f64 / count as f64;
    let var_raw = total_sq as f64 / count as f64 - mean_raw * mean_raw;
    let mean_distance = mean_raw / half;
    let distance_std = var_raw.max(0.0).sqrt() / half;

    let flip_total: u64 = flips.iter().sum();
    let (flip_distribution, shannon_entropy) = if flip_total == 0 {
        (vec![0.0; n], 0.0)
    } else {
        let dist: Vec<f64> = flips.iter().map(|&l| l as f64 / flip_total as f64).collect();
        let h: f64 = dist
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum();
        (dist, h / (n as f64).log2())
    };

    DistanceStats {
        mean_distance,
        distance_std,
        hamming_histogram: histogram,
        flip_counts: flips,
        flip_distribution,
        shannon_entropy,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfusionReport {
    pub n_modes: usize,
    pub k: u32,
    #[serde(flatten)]
    pub stats: DistanceStats,
}

/// Input-vs-output statistics over the whole table (Hamming distance between
/// each message and its hash).
pub fn confusion_report(table: &HashTable) -> ConfusionReport {
    ConfusionReport {
        n_modes: table.n_modes(),
        k: table.k(),
        stats: distance_stats(table.rows(), table.n_modes()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffusionReport {
    pub n_modes: usize,
    pub k: u32,
    pub flip_seed: u64,
    #[serde(flatten)]
    pub stats: DistanceStats,
}

/// Avalanche statistics: for every input, flip one uniformly chosen bit
/// (deterministic under `flip_seed`, one position drawn per input in index
/// order) and compare the two hashes.
pub fn diffusion_report_from_table(table: &HashTable, flip_seed: u64) -> DiffusionReport {
    let n = table.n_modes();
    let mut stream = SeededStream::new(flip_seed);
    let pairs = (0..table.len() as u64).map(|i| {
        let pos = stream.index(n);
        let flipped = i ^ (1u64 << pos);
        (table.output(i), table.output(flipped))
    });
    DiffusionReport {
        n_modes: n,
        k: table.k(),
        flip_seed,
        stats: distance_stats(pairs, n),
    }
}

pub fn diffusion_report(config: &HashConfig, flip_seed: u64, cap: usize) -> Result<DiffusionReport> {
    let table = enumerate_hashes(config, cap)?;
    Ok(diffusion_report_from_table(&table, flip_seed))
}

#[derive(Debug, Clone, Serialize)]
pub struct CollisionReport {
    pub n_modes: usize,
    pub k: u32,
    /// Normalized collision entropy H^(2) in [0, 1].
    pub collision_entropy: f64,
    pub log2_n_bound: f64,
    pub n_bound: f64,
    /// Birthday-attack cost interval (0.7·N_bound, 2·N_bound].
    pub attack_lower: f64,
    pub attack_upper: f64,
    pub distinct_values: usize,
    /// (hash value, occurrence count), ascending by value; absent values
    /// contribute zero and are not materialized.
    pub occurrence_histogram: Vec<(u64, u64)>,
}

/// Collision-entropy analysis of the output multiset.
pub fn collision_report(table: &HashTable) -> CollisionReport {
    let n = table.n_modes();
    let mut counts = std::collections::BTreeMap::<u64, u64>::new();
    for (_, c) in table.rows() {
        *counts.entry(c).or_insert(0) += 1;
    }
    let total = table.len() as f64;
    let sum_p_sq: f64 = counts.values().map(|&c| (c as f64 / total).powi(2)).sum();
    let collision_entropy = -sum_p_sq.log2() / n as f64;
    let log2_n_bound = collision_entropy * n as f64 / 2.0;
    let n_bound = log2_n_bound.exp2();
    CollisionReport {
        n_modes: n,
        k: table.k(),
        collision_entropy,
        log2_n_bound,
        n_bound,
        attack_lower: 0.7 * n_bound,
        attack_upper: 2.0 * n_bound,
        distinct_values: counts.len(),
        occurrence_histogram: counts.into_iter().collect(),
    }
}

/// Which inputs feed the percentile and shot-budget pools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "selection")]
pub enum InputSelection {
    /// All 2^N inputs.
    Exhaustive,
    /// `count` inputs drawn uniformly (with replacement) from the seeded
    /// stream. A count covering the full input space falls back to
    /// exhaustive enumeration.
    Sampled { count: u64, seed: u64 },
}

fn selected_inputs(n: usize, selection: InputSelection) -> Vec<u64> {
    match selection {
        InputSelection::Exhaustive => (0..(1u64 << n)).collect(),
        InputSelection::Sampled { count, seed } => {
            if count >= (1u64 << n) {
                return (0..(1u64 << n)).collect();
            }
            let mut stream = SeededStream::new(seed);
            (0..count).map(|_| stream.bits(n)).collect()
        }
    }
}

/// Pools μ_j(b) over all modes j and the selected inputs, in (input, mode)
/// order.
pub fn correlation_pool(
    config: &HashConfig,
    selection: InputSelection,
    cap: usize,
) -> Result<Vec<f64>> {
    let n = config.circuit.n_modes;
    check_cap(n, cap)?;
    let hasher = Hasher::new(config.clone())?;
    let inputs = selected_inputs(n, selection);
    let per_input: Vec<Vec<f64>> = inputs
        .par_iter()
        .map(|&i| {
            hasher
                .correlations(&BitString::from_index(i, n))
                .map(|mu| mu.values().to_vec())
        })
        .collect::<Result<_>>()?;
    Ok(per_input.into_iter().flatten().collect())
}

/// Pools σ_j(b) over all modes j and the selected inputs.
pub fn sigma_pool(
    config: &HashConfig,
    selection: InputSelection,
    cap: usize,
) -> Result<Vec<f64>> {
    let n = config.circuit.n_modes;
    check_cap(n, cap)?;
    let hasher = Hasher::new(config.clone())?;
    let inputs = selected_inputs(n, selection);
    let per_input: Vec<Vec<f64>> = inputs
        .par_iter()
        .map(|&i| hasher.correlation_stds(&BitString::from_index(i, n)))
        .collect::<Result<_>>()?;
    Ok(per_input.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct PercentileEntry {
    /// Confidence level x in (0, 1].
    pub x: f64,
    /// The 100x-upper percentile of the pooled correlations: the largest μ
    /// with F(μ) ≥ x, i.e. the ⌈x·pool⌉-th largest pooled value.
    pub mu_th: f64,
    /// k = ⌈-log10 μ_x⌉; absent when μ_x = 0.
    pub k_recommended: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PercentileReport {
    pub n_modes: usize,
    pub pool_size: usize,
    #[serde(flatten)]
    pub selection: InputSelection,
    pub entries: Vec<PercentileEntry>,
}

/// Percentiles of a raw pool (descending-order statistics).
pub fn percentiles_from_pool(pool: &[f64], xs: &[f64]) -> Result<Vec<PercentileEntry>> {
    if pool.is_empty() {
        return Err(Error::InvalidParameter(
            "percentile pool is empty".into(),
        ));
    }
    for &x in xs {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "confidence level must lie in (0, 1], got {x}"
            )));
        }
    }
    let mut sorted = pool.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("pool values are finite"));
    Ok(xs
        .iter()
        .map(|&x| {
            let rank = (x * sorted.len() as f64).ceil() as usize;
            let mu_th = sorted[rank.clamp(1, sorted.len()) - 1];
            let k_recommended = (mu_th > 0.0).then(|| (-mu_th.log10()).ceil() as i64);
            PercentileEntry {
                x,
                mu_th,
                k_recommended,
            }
        })
        .collect())
}

pub fn percentile_report(
    config: &HashConfig,
    xs: &[f64],
    selection: InputSelection,
    cap: usize,
) -> Result<PercentileReport> {
    let pool = correlation_pool(config, selection, cap)?;
    Ok(PercentileReport {
        n_modes: config.circuit.n_modes,
        pool_size: pool.len(),
        selection,
        entries: percentiles_from_pool(&pool, xs)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ShotBudgetReport {
    pub n_modes: usize,
    pub z: f64,
    pub k: u32,
    /// Estimation-error target ε = 10^-k.
    pub epsilon: f64,
    pub sigma_max: f64,
    pub pool_size: usize,
    #[serde(flatten)]
    pub selection: InputSelection,
    /// N_shot = ⌈z² 10^{2k} σ_max²⌉.
    pub n_shot_max: u64,
}

/// The shot count guaranteeing z·σ/√N_shot ≤ ε for every pooled (j, b).
pub fn shot_budget_from_sigma(sigma_max: f64, z: f64, k: u32) -> (f64, u64) {
    let epsilon = 10f64.powi(-(k as i32));
    let n_shot = (z * z * 10f64.powi(2 * k as i32) * sigma_max * sigma_max).ceil() as u64;
    (epsilon, n_shot)
}

pub fn shot_budget(
    config: &HashConfig,
    z: f64,
    k: u32,
    selection: InputSelection,
    cap: usize,
) -> Result<ShotBudgetReport> {
    if !(z > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence parameter z must be positive, got {z}"
        )));
    }
    let pool = sigma_pool(config, selection, cap)?;
    let sigma_max = pool.iter().copied().fold(0.0f64, f64::max);
    let (epsilon, n_shot_max) = shot_budget_from_sigma(sigma_max, z, k);
    Ok(ShotBudgetReport {
        n_modes: config.circuit.n_modes,
        z,
        k,
        epsilon,
        sigma_max,
        pool_size: pool.len(),
        selection,
        n_shot_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{sample_circuit, Boundary, Topology};
    use approx::assert_abs_diff_eq;

    fn small_config(n: usize, k: u32, seed: u64) -> HashConfig {
        let circuit =
            sample_circuit(n, n, Topology::Brickwork, Boundary::Periodic, seed).unwrap();
        HashConfig::exact(circuit, k)
    }

    fn identity_table(n: usize) -> HashTable {
        HashTable::from_outputs(n, 0, (0..(1u64 << n)).collect()).unwrap()
    }

    fn negated_table(n: usize) -> HashTable {
        let mask = (1u64 << n) - 1;
        HashTable::from_outputs(n, 0, (0..(1u64 << n)).map(|i| i ^ mask).collect()).unwrap()
    }

    #[test]
    fn table_shape_and_row_zero() {
        let cfg = small_config(4, 1, 42);
        let t = enumerate_hashes(&cfg, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(t.len(), 16);
        assert_eq!(t.output(0), 0, "all-zeros input must hash to all-zeros");
    }

    #[test]
    fn cap_is_enforced() {
        let cfg = small_config(6, 1, 42);
        assert!(matches!(
            enumerate_hashes(&cfg, 5),
            Err(Error::EnumerationCapExceeded { .. })
        ));
        assert!(enumerate_hashes(&cfg, 6).is_ok());
    }

    #[test]
    fn confusion_identity_and_negation() {
        let id = confusion_report(&identity_table(6));
        assert_eq!(id.stats.mean_distance, 0.0);
        assert_eq!(id.stats.shannon_entropy, 0.0);

        let neg = confusion_report(&negated_table(6));
        assert_abs_diff_eq!(neg.stats.mean_distance, 2.0, epsilon = 1e-14);
        assert!(neg
            .stats
            .flip_distribution
            .iter()
            .all(|&p| (p - 1.0 / 6.0).abs() < 1e-14));
        assert_abs_diff_eq!(neg.stats.shannon_entropy, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn distance_mean_matches_histogram_moment_exactly() {
        let cfg = small_config(6, 1, 9);
        let rep = confusion_report(&enumerate_hashes(&cfg, 16).unwrap());
        let n = 6.0;
        let count: u64 = rep.stats.hamming_histogram.iter().sum();
        let total: u64 = rep
            .stats
            .hamming_histogram
            .iter()
            .enumerate()
            .map(|(d, &c)| d as u64 * c)
            .sum();
        let from_hist = total as f64 / count as f64 / (n / 2.0);
        assert_eq!(rep.stats.mean_distance, from_hist);
    }

    #[test]
    fn diffusion_constant_hash_is_zero() {
        let t = HashTable::from_outputs(5, 0, vec![0b10101; 32]).unwrap();
        let rep = diffusion_report_from_table(&t, 123);
        assert_eq!(rep.stats.mean_distance, 0.0);
        assert_eq!(rep.stats.hamming_histogram[0], 32);
    }

    #[test]
    fn diffusion_is_flip_seed_deterministic() {
        let cfg = small_config(6, 1, 9);
        let t = enumerate_hashes(&cfg, 16).unwrap();
        let a = diffusion_report_from_table(&t, 5);
        let b = diffusion_report_from_table(&t, 5);
        assert_eq!(a.stats.hamming_histogram, b.stats.hamming_histogram);
    }

    #[test]
    fn collision_extremes() {
        let distinct = collision_report(&identity_table(6));
        assert_abs_diff_eq!(distinct.collision_entropy, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(distinct.n_bound, 2f64.powi(3), epsilon = 1e-10);

        let constant = collision_report(&HashTable::from_outputs(6, 0, vec![7; 64]).unwrap());
        assert_abs_diff_eq!(constant.collision_entropy, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(constant.n_bound, 1.0, epsilon = 1e-14);
        assert_eq!(constant.distinct_values, 1);
        assert_eq!(constant.occurrence_histogram, vec![(7, 64)]);
    }

    #[test]
    fn occurrence_counts_cover_all_inputs() {
        let cfg = small_config(6, 1, 9);
        let rep = collision_report(&enumerate_hashes(&cfg, 16).unwrap());
        let total: u64 = rep.occurrence_histogram.iter().map(|&(_, c)| c).sum();
        assert_eq!(total, 64);
    }

    #[test]
    fn percentile_synthetic_pool() {
        let pool = vec![0.05; 40];
        let entries = percentiles_from_pool(&pool, &[0.5, 0.9, 1.0]).unwrap();
        for e in &entries {
            assert_eq!(e.mu_th, 0.05);
            assert_eq!(e.k_recommended, Some(2)); // ⌈-log10 0.05⌉ = ⌈1.301⌉
        }
    }

    #[test]
    fn percentile_order_statistics() {
        let pool: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        let entries = percentiles_from_pool(&pool, &[0.25, 1.0]).unwrap();
        // 25th largest of 1..=100 is 76; x = 1 is the pool minimum
        assert_eq!(entries[0].mu_th, 76.0);
        assert_eq!(entries[1].mu_th, 1.0);
    }

    #[test]
    fn percentile_monotone_in_x() {
        let cfg = small_config(6, 1, 9);
        let rep = percentile_report(
            &cfg,
            &[0.5, 0.75, 0.9, 0.99, 1.0],
            InputSelection::Exhaustive,
            16,
        )
        .unwrap();
        for w in rep.entries.windows(2) {
            assert!(w[0].mu_th >= w[1].mu_th);
        }
        // the all-zeros input guarantees a zero pool minimum
        assert_eq!(rep.entries.last().unwrap().mu_th, 0.0);
        assert_eq!(rep.entries.last().unwrap().k_recommended, None);
    }

    #[test]
    fn percentile_rejects_bad_x() {
        assert!(percentiles_from_pool(&[1.0], &[0.0]).is_err());
        assert!(percentiles_from_pool(&[1.0], &[1.2]).is_err());
        assert!(percentiles_from_pool(&[], &[0.5]).is_err());
    }

    #[test]
    fn full_coverage_sample_equals_exhaustive() {
        let cfg = small_config(4, 1, 9);
        let a = correlation_pool(&cfg, InputSelection::Exhaustive, 16).unwrap();
        let b = correlation_pool(
            &cfg,
            InputSelection::Sampled {
                count: 16,
                seed: 77,
            },
            16,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shot_budget_formula() {
        let (eps, n) = shot_budget_from_sigma(1.0, 1.0, 0);
        assert_eq!((eps, n), (1.0, 1));
        let (eps, n) = shot_budget_from_sigma(23.0, 2.0, 1);
        assert_eq!(eps, 0.1);
        assert_eq!(n, 211_600);
        // k -> k+1 scales the budget by exactly 100
        let (_, n2) = shot_budget_from_sigma(23.0, 2.0, 2);
        assert_eq!(n2, 100 * n);
    }

    #[test]
    fn shot_budget_on_circuit() {
        let cfg = small_config(4, 1, 9);
        let rep = shot_budget(&cfg, 2.0, 1, InputSelection::Exhaustive, 16).unwrap();
        assert!(rep.sigma_max > 0.0);
        assert_eq!(rep.pool_size, 64);
        let (_, expected) = shot_budget_from_sigma(rep.sigma_max, 2.0, 1);
        assert_eq!(rep.n_shot_max, expected);
        assert!(shot_budget(&cfg, 0.0, 1, InputSelection::Exhaustive, 16).is_err());
    }
}
