//! Random beamsplitter circuits: brickwork (periodic or open boundary) and
//! the V-shaped sweep variant, their sampled angle parameters, and the
//! composed N×N mode unitary.
//!
//! The mode unitary U is defined through 𝒰† a_i† 𝒰 = Σ_j U[i,j] a_j†. A
//! single beamsplitter BS(θ, φ) = exp[θ(e^{iφ} a b† − e^{−iφ} a† b)]
//! contributes the 2×2 block
//!
//! ```text
//!   [ cos θ            -e^{iφ} sin θ ]
//!   [ e^{-iφ} sin θ     cos θ        ]
//! ```
//!
//! which is the exact exponential of the 2×2 adjoint generator (checked in
//! tests against the generic matrix exponential, and physically against the
//! truncated-Fock oracle). Layers act on the state in index order, layer 0
//! first; the composed matrix is U = U_{d-1} ··· U_0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::rng::SeededStream;

/// Mean of the beamsplitter mixing-angle distribution.
pub const THETA_MEAN: f64 = FRAC_PI_4;
/// Standard deviation of the mixing-angle distribution.
pub const THETA_SD: f64 = PI / 16.0;

/// Version tag of the circuit parameter file format.
pub const CIRCUIT_FILE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Brickwork,
    VShaped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Open,
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Topology::Brickwork => write!(f, "brickwork"),
            Topology::VShaped => write!(f, "v_shaped"),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Periodic => write!(f, "periodic"),
            Boundary::Open => write!(f, "open"),
        }
    }
}

impl std::str::FromStr for Topology {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brickwork" => Ok(Topology::Brickwork),
            "v_shaped" | "v-shaped" => Ok(Topology::VShaped),
            other => Err(Error::InvalidParameter(format!(
                "unknown topology '{other}' (expected brickwork or v_shaped)"
            ))),
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "open" => Ok(Boundary::Open),
            other => Err(Error::InvalidParameter(format!(
                "unknown boundary '{other}' (expected periodic or open)"
            ))),
        }
    }
}

/// One beamsplitter placement, in state-application (time) order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beamsplitter {
    pub mode_a: usize,
    pub mode_b: usize,
    pub theta: f64,
    pub phi: f64,
}

/// The public interferometer description.
///
/// `theta[l][p]` / `phi[l][p]` hold the angles of layer `l`, position `p`.
/// For the V-shaped topology the unbarred lists parameterize the ascending
/// sweep and `theta_bar` / `phi_bar` the descending return sweep; positions
/// index the coupled pair (j, j+1) in both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub n_modes: usize,
    pub depth: usize,
    pub topology: Topology,
    pub boundary: Boundary,
    pub seed: u64,
    pub theta: Vec<Vec<f64>>,
    pub phi: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_bar: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_bar: Option<Vec<Vec<f64>>>,
}

/// Serialized circuit file: the parameters plus a format version tag.
#[derive(Debug, Serialize, Deserialize)]
struct CircuitFile {
    version: u32,
    #[serde(flatten)]
    params: CircuitParams,
}

fn check_combination(n: usize, topology: Topology, boundary: Boundary) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 modes, got {n}"
        )));
    }
    match (topology, boundary) {
        (Topology::Brickwork, Boundary::Periodic) => {
            if n % 2 != 0 || n < 4 {
                return Err(Error::InvalidParameter(format!(
                    "periodic brickwork requires an even mode count of at least 4, got {n}"
                )));
            }
        }
        (Topology::Brickwork, Boundary::Open) => {}
        (Topology::VShaped, Boundary::Open) => {}
        (Topology::VShaped, Boundary::Periodic) => {
            return Err(Error::InvalidParameter(
                "the v_shaped topology has no periodic variant; use boundary = open".into(),
            ));
        }
    }
    Ok(())
}

/// Mode pairs coupled by brickwork layer `l`, in ascending position order.
fn brickwork_pairs(n: usize, layer: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    if layer % 2 == 0 {
        (0..n / 2).map(|j| (2 * j, 2 * j + 1)).collect()
    } else {
        match boundary {
            Boundary::Periodic => (0..n / 2).map(|j| (2 * j + 1, (2 * j + 2) % n)).collect(),
            Boundary::Open => (0..(n - 1) / 2).map(|j| (2 * j + 1, 2 * j + 2)).collect(),
        }
    }
}

fn layer_width(n: usize, layer: usize, topology: Topology, boundary: Boundary) -> usize {
    match topology {
        Topology::Brickwork => brickwork_pairs(n, layer, boundary).len(),
        Topology::VShaped => n - 1,
    }
}

/// Draws a fresh random circuit.
///
/// θ are i.i.d. normal(π/4, π/16) and φ i.i.d. uniform [0, 2π), from the
/// named `rng::GENERATOR_ID` stream seeded with `seed`. Draw order:
/// layer-major, then position ascending, θ before φ; for the V-shaped
/// topology a layer draws the ascending-sweep pairs first, then the barred
/// return-sweep pairs, both in ascending position order.
pub fn sample_circuit(
    n_modes: usize,
    depth: usize,
    topology: Topology,
    boundary: Boundary,
    seed: u64,
) -> Result<CircuitParams> {
    check_combination(n_modes, topology, boundary)?;
    let mut stream = SeededStream::new(seed);
    let mut draw_pairs = |count: usize| -> (Vec<f64>, Vec<f64>) {
        let mut thetas = Vec::with_capacity(count);
        let mut phis = Vec::with_capacity(count);
        for _ in 0..count {
            thetas.push(stream.normal(THETA_MEAN, THETA_SD));
            phis.push(TAU * stream.uniform());
        }
        (thetas, phis)
    };

    let mut theta = Vec::with_capacity(depth);
    let mut phi = Vec::with_capacity(depth);
    let mut theta_bar = Vec::with_capacity(depth);
    let mut phi_bar = Vec::with_capacity(depth);
    for layer in 0..depth {
        let width = layer_width(n_modes, layer, topology, boundary);
        let (t, p) = draw_pairs(width);
        theta.push(t);
        phi.push(p);
        if topology == Topology::VShaped {
            let (tb, pb) = draw_pairs(width);
            theta_bar.push(tb);
            phi_bar.push(pb);
        }
    }

    Ok(CircuitParams {
        n_modes,
        depth,
        topology,
        boundary,
        seed,
        theta,
        phi,
        theta_bar: (topology == Topology::VShaped).then_some(theta_bar),
        phi_bar: (topology == Topology::VShaped).then_some(phi_bar),
    })
}

impl CircuitParams {
    /// Checks the angle lists against the layout implied by
    /// (n_modes, depth, topology, boundary).
    pub fn validate(&self) -> Result<()> {
        check_combination(self.n_modes, self.topology, self.boundary)?;
        let expect_bars = self.topology == Topology::VShaped;
        if expect_bars != self.theta_bar.is_some() || expect_bars != self.phi_bar.is_some() {
            return Err(Error::InvalidParameter(
                "theta_bar/phi_bar must be present exactly for the v_shaped topology".into(),
            ));
        }
        let lists: &[(&str, &Vec<Vec<f64>>)] = &[("theta", &self.theta), ("phi", &self.phi)];
        for (name, list) in lists {
            if list.len() != self.depth {
                return Err(Error::InvalidParameter(format!(
                    "{name} must have one entry per layer ({} expected, {} found)",
                    self.depth,
                    list.len()
                )));
            }
        }
        for layer in 0..self.depth {
            let width = layer_width(self.n_modes, layer, self.topology, self.boundary);
            for (name, list) in lists {
                if list[layer].len() != width {
                    return Err(Error::InvalidParameter(format!(
                        "{name}[{layer}] must hold {width} angles, found {}",
                        list[layer].len()
                    )));
                }
            }
        }
        if let (Some(tb), Some(pb)) = (&self.theta_bar, &self.phi_bar) {
            for (name, list) in [("theta_bar", tb), ("phi_bar", pb)] {
                if list.len() != self.depth
                    || list.iter().any(|l| l.len() != self.n_modes - 1)
                {
                    return Err(Error::InvalidParameter(format!(
                        "{name} must hold {} angles per layer",
                        self.n_modes - 1
                    )));
                }
            }
        }
        for list in self.phi.iter().chain(self.phi_bar.iter().flatten()) {
            if list.iter().any(|&p| !(0.0..TAU).contains(&p)) {
                return Err(Error::InvalidParameter(
                    "phase angles must lie in [0, 2\u{3c0})".into(),
                ));
            }
        }
        Ok(())
    }

    /// The beamsplitters in state-application order: layer 0 first; within a
    /// brickwork layer ascending position; within a V-shaped layer the
    /// ascending sweep (0,1)..(N-2,N-1) then the barred descending sweep
    /// back down to (0,1).
    pub fn beamsplitters(&self) -> Vec<Beamsplitter> {
        let mut out = Vec::new();
        for layer in 0..self.depth {
            match self.topology {
                Topology::Brickwork => {
                    for (pos, (a, b)) in brickwork_pairs(self.n_modes, layer, self.boundary)
                        .into_iter()
                        .enumerate()
                    {
                        out.push(Beamsplitter {
                            mode_a: a,
                            mode_b: b,
                            theta: self.theta[layer][pos],
                            phi: self.phi[layer][pos],
                        });
                    }
                }
                Topology::VShaped => {
                    for j in 0..self.n_modes - 1 {
                        out.push(Beamsplitter {
                            mode_a: j,
                            mode_b: j + 1,
                            theta: self.theta[layer][j],
                            phi: self.phi[layer][j],
                        });
                    }
                    let tb = self.theta_bar.as_ref().expect("validated");
                    let pb = self.phi_bar.as_ref().expect("validated");
                    for j in (0..self.n_modes - 1).rev() {
                        out.push(Beamsplitter {
                            mode_a: j,
                            mode_b: j + 1,
                            theta: tb[layer][j],
                            phi: pb[layer][j],
                        });
                    }
                }
            }
        }
        out
    }

    /// Canonical JSON document (versioned; round-trips exactly).
    pub fn to_canonical_json(&self) -> String {
        let file = CircuitFile {
            version: CIRCUIT_FILE_VERSION,
            params: self.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("circuit serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CircuitFile = serde_json::from_str(text)?;
        if file.version != CIRCUIT_FILE_VERSION {
            return Err(Error::InvalidParameter(format!(
                "unsupported circuit file version {} (expected {})",
                file.version, CIRCUIT_FILE_VERSION
            )));
        }
        file.params.validate()?;
        Ok(file.params)
    }

    pub fn save(&self, path: &Path) -> Result<String> {
        let text = self.to_canonical_json();
        std::fs::write(path, &text)?;
        Ok(digest_hex(text.as_bytes()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// SHA-256 of the canonical file bytes, for publication and report headers.
    pub fn digest(&self) -> String {
        digest_hex(self.to_canonical_json().as_bytes())
    }
}

pub fn digest_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let hash = Sha256::digest(bytes);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// The 2×2 mode transformation of a single beamsplitter; row/column 0 is the
/// first participating mode.
pub fn pair_transformation(theta: f64, phi: f64) -> CMat {
    let (s, c) = theta.sin_cos();
    let e_pos = Complex64::from_polar(1.0, phi);
    let e_neg = Complex64::from_polar(1.0, -phi);
    let mut v = CMat::zeros((2, 2));
    v[(0, 0)] = Complex64::new(c, 0.0);
    v[(0, 1)] = -e_pos * s;
    v[(1, 0)] = e_neg * s;
    v[(1, 1)] = Complex64::new(c, 0.0);
    v
}

/// In-place left-multiplication of `u` by the embedding of `v` on rows
/// (a, b): rows a and b are replaced by their v-mixture.
fn apply_pair_rows(u: &mut CMat, a: usize, b: usize, v: &CMat) {
    let n = u.ncols();
    for col in 0..n {
        let ra = u[(a, col)];
        let rb = u[(b, col)];
        u[(a, col)] = v[(0, 0)] * ra + v[(0, 1)] * rb;
        u[(b, col)] = v[(1, 0)] * ra + v[(1, 1)] * rb;
    }
}

/// The composed N×N mode unitary of the circuit, U = U_{d-1} ··· U_0.
pub fn compose_unitary(params: &CircuitParams) -> Result<CMat> {
    params.validate()?;
    let mut u = linalg::identity(params.n_modes);
    for bs in params.beamsplitters() {
        let v = pair_transformation(bs.theta, bs.phi);
        apply_pair_rows(&mut u, bs.mode_a, bs.mode_b, &v);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm, max_abs, unitarity_deviation};
    use approx::assert_abs_diff_eq;

    #[test]
    fn pair_transformation_limits() {
        let id = pair_transformation(0.0, 1.234);
        assert!(max_abs(&(&id - &linalg::identity(2))) < 1e-15);

        let v = pair_transformation(FRAC_PI_4, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(v[(i, j)].norm(), std::f64::consts::FRAC_1_SQRT_2,
                    epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn pair_transformation_is_exact_adjoint_exponential() {
        // V = exp(-A) with A the adjoint generator of the beamsplitter
        for &(theta, phi) in &[(0.7, 0.3), (-0.4, 5.9), (1.9, 2.2)] {
            let mut gen = CMat::zeros((2, 2));
            gen[(0, 1)] = -Complex64::from_polar(theta, phi);
            gen[(1, 0)] = Complex64::from_polar(theta, -phi);
            let via_expm = expm(&gen);
            let closed = pair_transformation(theta, phi);
            assert!(max_abs(&(&via_expm - &closed)) < 1e-13);
        }
    }

    #[test]
    fn pair_transformation_unitary() {
        let v = pair_transformation(0.83, 4.1);
        assert!(unitarity_deviation(&v) < 1e-12);
    }

    #[test]
    fn depth_zero_is_identity() {
        let p = sample_circuit(4, 0, Topology::Brickwork, Boundary::Periodic, 1).unwrap();
        let u = compose_unitary(&p).unwrap();
        assert!(max_abs(&(&u - &linalg::identity(4))) < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_circuit(16, 16, Topology::Brickwork, Boundary::Periodic, 42).unwrap();
        let b = sample_circuit(16, 16, Topology::Brickwork, Boundary::Periodic, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_circuit(16, 16, Topology::Brickwork, Boundary::Periodic, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn layer_widths() {
        let p = sample_circuit(16, 4, Topology::Brickwork, Boundary::Periodic, 7).unwrap();
        assert!(p.theta.iter().all(|l| l.len() == 8));

        let q = sample_circuit(16, 4, Topology::Brickwork, Boundary::Open, 7).unwrap();
        assert_eq!(q.theta[0].len(), 8);
        assert_eq!(q.theta[1].len(), 7);

        let v = sample_circuit(16, 4, Topology::VShaped, Boundary::Open, 7).unwrap();
        assert!(v.theta.iter().all(|l| l.len() == 15));
        assert_eq!(v.beamsplitters().len(), 4 * 2 * 15);
    }

    #[test]
    fn odd_periodic_brickwork_rejected() {
        assert!(sample_circuit(15, 4, Topology::Brickwork, Boundary::Periodic, 1).is_err());
        assert!(sample_circuit(2, 4, Topology::Brickwork, Boundary::Periodic, 1).is_err());
        assert!(sample_circuit(15, 4, Topology::Brickwork, Boundary::Open, 1).is_ok());
    }

    #[test]
    fn v_shaped_periodic_rejected() {
        assert!(sample_circuit(8, 2, Topology::VShaped, Boundary::Periodic, 1).is_err());
    }

    #[test]
    fn composed_unitaries_are_unitary() {
        for (topo, bnd) in [
            (Topology::Brickwork, Boundary::Periodic),
            (Topology::Brickwork, Boundary::Open),
            (Topology::VShaped, Boundary::Open),
        ] {
            let p = sample_circuit(8, 8, topo, bnd, 5).unwrap();
            let u = compose_unitary(&p).unwrap();
            assert!(
                unitarity_deviation(&u) < 1e-10,
                "{topo} {bnd}: {}",
                unitarity_deviation(&u)
            );
        }
    }

    #[test]
    fn single_pair_embeds() {
        // depth 1, all θ = 0 except position 0 at (π/4, 0)
        let mut p = sample_circuit(4, 1, Topology::Brickwork, Boundary::Periodic, 3).unwrap();
        p.theta[0] = vec![FRAC_PI_4, 0.0];
        p.phi[0] = vec![0.0, 0.0];
        let u = compose_unitary(&p).unwrap();
        let v = pair_transformation(FRAC_PI_4, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(u[(i, j)].re, v[(i, j)].re, epsilon = 1e-15);
            }
        }
        assert_abs_diff_eq!(u[(2, 2)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u[(3, 3)].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn theta_sample_mean_matches_distribution() {
        // Monte Carlo against normal(π/4, π/16): mean within ±0.005 at 1e5 draws
        let draws = 100_000 / 8; // 8 θ per layer at N = 16
        let p = sample_circuit(16, draws, Topology::Brickwork, Boundary::Open, 1234).unwrap();
        let all: Vec<f64> = p.theta.iter().flatten().copied().collect();
        let mean = all.iter().sum::<f64>() / all.len() as f64;
        assert!(
            (mean - THETA_MEAN).abs() < 0.005,
            "sample mean {mean} vs {THETA_MEAN}"
        );
        let phis: Vec<f64> = p.phi.iter().flatten().copied().collect();
        assert!(phis.iter().all(|&x| (0.0..TAU).contains(&x)));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let p = sample_circuit(6, 5, Topology::VShaped, Boundary::Open, 99).unwrap();
        let text = p.to_canonical_json();
        let q = CircuitParams::from_json(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(text, q.to_canonical_json());
    }

    #[test]
    fn malformed_lists_rejected() {
        let mut p = sample_circuit(4, 2, Topology::Brickwork, Boundary::Periodic, 1).unwrap();
        p.theta[1].pop();
        assert!(p.validate().is_err());
        assert!(compose_unitary(&p).is_err());
    }
}
