//! Exact classical simulator and security benchmark harness for a photonic
//! hash function built on Gaussian boson sampling.
//!
//! An N-bit message selects which of N optical modes start as squeezed
//! vacuum; the state passes through a random beamsplitter circuit; the
//! nearest-neighbor three-mode photon correlations μ_j of the output are
//! computed exactly by Wick expansion of the Gaussian second moments; and
//! the parity of the k-th decimal digit of each μ_j becomes one output bit.
//!
//! The crate provides:
//!
//! - [`gaussian`]: the (M, P) second-moment state representation, the Wick
//!   engine ([`wick`]), and the correlation observables;
//! - [`fock`]: an independent truncated-Fock-space oracle used to
//!   cross-validate every convention in the moment path;
//! - [`interferometer`]: random brickwork / V-shaped circuits, their
//!   composed mode unitaries, and the circuit parameter file format;
//! - [`haar`]: Haar-random unitaries and the ensemble randomness test;
//! - [`hash`]: the end-to-end hash with exact and shot-noise-emulated
//!   evaluation;
//! - [`bench`]: confusion / diffusion / collision / percentile / shot-budget
//!   analyses over the full 2^N input space;
//! - [`report`]: canonical JSON + CSV report serialization.
//!
//! All randomness flows through the named seeded stream in [`rng`], so
//! every artifact is reproducible from its recorded seeds.

pub mod bench;
pub mod bitstring;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod haar;
pub mod hash;
pub mod interferometer;
pub mod linalg;
pub mod report;
pub mod rng;
pub mod wick;

pub use bitstring::BitString;
pub use error::{Error, Result};
pub use gaussian::{
    correlation_std, input_moments, three_mode_correlations, CorrelationVector, GaussianMoments,
};
pub use hash::{digit_extract, hash_message, shot_noise_hash, EvalMode, HashConfig, Hasher};
pub use interferometer::{
    compose_unitary, pair_transformation, sample_circuit, Boundary, CircuitParams, Topology,
};
pub use wick::{wick_expectation, LadderKind, LadderOp, LadderSequence};
