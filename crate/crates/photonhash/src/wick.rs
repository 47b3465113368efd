//! Wick expansion of ladder-operator strings in a zero-mean Gaussian state.
//!
//! The expectation of an ordered product of 2m mode operators equals the sum
//! over all (2m-1)!! perfect matchings of the positions, each contributing
//! the product of ordered two-point functions of its pairs. Matchings are
//! enumerated in lexicographic order (lowest open position paired with each
//! later position in ascending order, recursively) and summed left to right;
//! that fixed order is the bit-reproducibility contract for hash outputs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianMoments;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderOp {
    pub mode: usize,
    pub kind: LadderKind,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        Self {
            mode,
            kind: LadderKind::Create,
        }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            kind: LadderKind::Annihilate,
        }
    }
}

/// Ordered string of ladder operators, leftmost first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LadderSequence {
    ops: Vec<LadderOp>,
}

impl LadderSequence {
    pub fn new(ops: Vec<LadderOp>) -> Self {
        Self { ops }
    }

    /// The number string n_{m0} n_{m1} ... = a†_{m0} a_{m0} a†_{m1} a_{m1} ...
    pub fn number_product(modes: &[usize]) -> Self {
        let mut ops = Vec::with_capacity(2 * modes.len());
        for &m in modes {
            ops.push(LadderOp::create(m));
            ops.push(LadderOp::annihilate(m));
        }
        Self { ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[LadderOp] {
        &self.ops
    }
}

/// Ordered two-point function of operators at positions p < q.
fn contraction(g: &GaussianMoments, a: LadderOp, b: LadderOp) -> Complex64 {
    use LadderKind::*;
    match (a.kind, b.kind) {
        (Annihilate, Annihilate) => g.p()[(a.mode, b.mode)],
        (Create, Create) => g.p()[(a.mode, b.mode)].conj(),
        (Create, Annihilate) => g.m()[(a.mode, b.mode)],
        (Annihilate, Create) => {
            let delta = if a.mode == b.mode { 1.0 } else { 0.0 };
            g.m()[(b.mode, a.mode)] + delta
        }
    }
}

/// Expectation of `seq` in the state `g`.
///
/// Odd-length sequences are exactly zero. Out-of-range mode indices error.
pub fn wick_expectation(g: &GaussianMoments, seq: &LadderSequence) -> Result<Complex64> {
    let n = g.n_modes();
    for op in seq.ops() {
        if op.mode >= n {
            return Err(Error::InvalidParameter(format!(
                "ladder operator mode {} out of range for {} modes",
                op.mode, n
            )));
        }
    }
    let len = seq.len();
    if len % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if len == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }

    // Precompute the ordered pair table once per call.
    let ops = seq.ops();
    let mut table = vec![Complex64::new(0.0, 0.0); len * len];
    for p in 0..len {
        for q in (p + 1)..len {
            table[p * len + q] = contraction(g, ops[p], ops[q]);
        }
    }

    let mut used = vec![false; len];
    let mut sum = Complex64::new(0.0, 0.0);
    sum_matchings(
        &table,
        len,
        &mut used,
        Complex64::new(1.0, 0.0),
        &mut sum,
    );
    Ok(sum)
}

/// Depth-first enumeration; leaves are visited in lexicographic matching
/// order, and `sum` accumulates in exactly that order.
fn sum_matchings(
    table: &[Complex64],
    len: usize,
    used: &mut [bool],
    partial: Complex64,
    sum: &mut Complex64,
) {
    let p = match used.iter().position(|&u| !u) {
        Some(p) => p,
        None => {
            *sum += partial;
            return;
        }
    };
    used[p] = true;
    for q in (p + 1)..len {
        if used[q] {
            continue;
        }
        used[q] = true;
        sum_matchings(table, len, used, partial * table[p * len + q], sum);
        used[q] = false;
    }
    used[p] = false;
}

/// Number of perfect matchings of 2m elements, (2m-1)!!.
pub fn matching_count(len: usize) -> u64 {
    if len % 2 == 1 {
        return 0;
    }
    let mut c = 1u64;
    let mut k = len as u64;
    while k > 1 {
        c *= k - 1;
        k -= 2;
    }
    c
}
