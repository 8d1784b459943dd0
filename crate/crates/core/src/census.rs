//! Chain census up to a bound x.
//!
//! Every n ≤ x with |𝒜(n)| ≥ 3 is a member of some chain `𝔠_k` with
//! `3 ≤ k ≤ ⌊√(x+1)⌋`, and |𝒜(n)| = 2 + (number of chains containing n).
//! Enumerating all chains, sorting the members and scanning for repeated
//! values therefore decides |𝒜(n)| ≤ 3 for the whole range without
//! factoring anything. Memory is O(√x·log x).

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_integer::Roots;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::{ChainCoord, ChainIter};
use crate::error::CensusError;
use crate::report::{safe_int, safe_ratio};
use crate::unity::{self, SpfSieve};

/// Largest supported x.
pub const MAX_X: u64 = (1 << 63) - 1;

/// Upper limit on the member list (each entry is 32 bytes).
pub const MEMBER_CAP: usize = 1 << 27;

/// One chain value ≤ x, with its position and predecessor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChainMember {
    #[serde(rename = "n")]
    pub value: u64,
    pub k: u64,
    pub i: u32,
    pub predecessor: u64,
}

impl ChainMember {
    pub fn coord(&self) -> ChainCoord {
        ChainCoord { k: self.k, i: self.i }
    }
}

/// A value found in more than one chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Duplicate {
    #[serde(with = "safe_int")]
    pub value: u64,
    pub coords: Vec<ChainCoord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    #[serde(with = "safe_int")]
    pub x: u64,
    #[serde(with = "safe_int")]
    pub chains_scanned: u64,
    #[serde(with = "safe_int")]
    pub members_total: u64,
    #[serde(with = "safe_int")]
    pub members_distinct: u64,
    pub duplicates: Vec<Duplicate>,
    #[serde(with = "safe_int")]
    pub t_x: u64,
    /// |𝒜(n)| ↦ number of n ≤ x with that size, for sizes ≥ 3.
    pub histogram: BTreeMap<u32, u64>,
    pub max_size: u32,
    #[serde(with = "safe_int")]
    pub max_size_at: u64,
    #[serde(with = "safe_ratio")]
    pub average_b: Ratio<u128>,
    pub b_bound: f64,
    pub t_x_bound: f64,
    pub b_within_bound: bool,
    pub t_x_within_bound: bool,
    pub elapsed: Duration,
}

impl CensusReport {
    /// True when no value lies in two chains, i.e. |𝒜(n)| ≤ 3 for all n ≤ x.
    pub fn conjecture_holds(&self) -> bool {
        self.duplicates.is_empty() && self.max_size <= 3
    }

    /// The report with timing cleared, for comparing runs.
    pub fn without_timing(&self) -> CensusReport {
        CensusReport { elapsed: Duration::ZERO, ..self.clone() }
    }

    pub fn average(&self) -> AverageValue {
        AverageValue {
            b: self.average_b,
            b_bound: self.b_bound,
            t_x_bound: self.t_x_bound,
            b_within_bound: self.b_within_bound,
            t_x_within_bound: self.t_x_within_bound,
        }
    }
}

/// ⌊√(x+1)⌋, the largest k whose chain starts at or below x.
pub fn max_generator(x: u64) -> u64 {
    x.saturating_add(1).sqrt()
}

fn check_x(x: u64) -> Result<(), CensusError> {
    if x < 8 {
        return Err(CensusError::TooSmall(x));
    }
    if x > MAX_X {
        return Err(CensusError::TooLarge { x, max: MAX_X });
    }
    Ok(())
}

fn check_range(x: u64, lo: u64, hi: u64) -> Result<(), CensusError> {
    let max = max_generator(x);
    if lo < 3 || hi > max || lo > hi {
        return Err(CensusError::BadRange { lo, hi, max });
    }
    Ok(())
}

fn members_of_block(x: u64, lo: u64, hi: u64) -> Vec<ChainMember> {
    (lo..=hi)
        .flat_map(|k| {
            ChainIter::new(k, x).expect("k >= 3").map(|s| ChainMember {
                value: s.value,
                k: s.coord.k,
                i: s.coord.i,
                predecessor: s.predecessor,
            })
        })
        .collect()
}

/// Members ≤ x of every chain with k in `[k_lo, k_hi]`, ordered by (k, i).
pub fn enumerate_members(x: u64, k_lo: u64, k_hi: u64) -> Result<Vec<ChainMember>, CensusError> {
    check_x(x)?;
    check_range(x, k_lo, k_hi)?;
    Ok(members_of_block(x, k_lo, k_hi))
}

/// N(x, k): how many members of chain k are ≤ x.
pub fn n_x_k(x: u64, k: u64) -> Result<u64, CensusError> {
    check_range(x, k, k)?;
    Ok(ChainIter::new(k, x).expect("k >= 3").count() as u64)
}

/// Average of |𝒜(n)| over n ≤ x and the bounds it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageValue {
    #[serde(with = "safe_ratio")]
    pub b: Ratio<u128>,
    pub b_bound: f64,
    pub t_x_bound: f64,
    pub b_within_bound: bool,
    pub t_x_within_bound: bool,
}

impl AverageValue {
    pub fn holds(&self) -> bool {
        self.b_within_bound && self.t_x_within_bound
    }

    pub fn b_f64(&self) -> f64 {
        *self.b.numer() as f64 / *self.b.denom() as f64
    }
}

/// |𝒜(1)| = 0, |𝒜(2)| = 1 and |𝒜(n)| = 2 + (chains through n) for
/// 3 ≤ n ≤ x, so Σ|𝒜(n)| = 1 + 2(x−2) + members_total.
fn average_from(x: u64, members_total: u64, t_x: u64) -> AverageValue {
    let sum = 1 + 2 * (x as u128 - 2) + members_total as u128;
    let b = Ratio::new(sum, x as u128);
    let log2x = (x as f64).log2();
    let b_bound = 2.0 + (log2x - 2.0) * t_x as f64 / x as f64;
    let t_x_bound = ((x as f64 + 1.0).sqrt() - 2.0) * log2x;
    // b − 2 = (members_total − 3)/x; compare the excess over 2 directly
    let b_within_bound = (members_total as f64 - 3.0) < (log2x - 2.0) * t_x as f64;
    AverageValue {
        b,
        b_bound,
        t_x_bound,
        b_within_bound,
        t_x_within_bound: (t_x as f64) < t_x_bound,
    }
}

/// Builds the report from an arbitrary member list. Members are sorted in
/// place by value, then by coordinate.
pub fn build_report(
    x: u64,
    chains_scanned: u64,
    members: &mut [ChainMember],
    elapsed: Duration,
) -> CensusReport {
    members.sort_unstable();

    let mut duplicates = Vec::new();
    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    let mut distinct = 0u64;
    let (mut max_mult, mut max_at) = (0usize, 0u64);
    for group in members.chunk_by(|a, b| a.value == b.value) {
        distinct += 1;
        let mult = group.len();
        *histogram.entry(2 + mult as u32).or_default() += 1;
        if mult > max_mult {
            max_mult = mult;
            max_at = group[0].value;
        }
        if mult > 1 {
            duplicates.push(Duplicate {
                value: group[0].value,
                coords: group.iter().map(ChainMember::coord).collect(),
            });
        }
    }

    let members_total = members.len() as u64;
    let avg = average_from(x, members_total, distinct);
    CensusReport {
        x,
        chains_scanned,
        members_total,
        members_distinct: distinct,
        duplicates,
        t_x: distinct,
        histogram,
        max_size: 2 + max_mult as u32,
        max_size_at: max_at,
        average_b: avg.b,
        b_bound: avg.b_bound,
        t_x_bound: avg.t_x_bound,
        b_within_bound: avg.b_within_bound,
        t_x_within_bound: avg.t_x_within_bound,
        elapsed,
    }
}

/// Splits `[3, kmax]` into at most `blocks` contiguous nonempty ranges.
fn k_blocks(kmax: u64, blocks: u64) -> Vec<(u64, u64)> {
    if kmax < 3 {
        return Vec::new();
    }
    let span = kmax - 2;
    let blocks = blocks.clamp(1, span);
    let size = span.div_ceil(blocks);
    (0..blocks)
        .map(|b| (3 + b * size, (3 + (b + 1) * size - 1).min(kmax)))
        .filter(|(lo, hi)| lo <= hi)
        .collect()
}

/// Full census: enumerates every chain in parallel over `workers` threads
/// with `blocks` k-blocks, then merges. Returns the report and the member
/// list sorted by value.
pub fn run_census_blocks(
    x: u64,
    workers: usize,
    blocks: u64,
) -> Result<(CensusReport, Vec<ChainMember>), CensusError> {
    check_x(x)?;
    if workers == 0 {
        return Err(CensusError::NoWorkers);
    }
    let start = Instant::now();
    let kmax = max_generator(x);
    let chains = kmax - 2;
    if chains as usize > MEMBER_CAP {
        return Err(CensusError::MemoryCap(chains as usize));
    }
    let ranges = k_blocks(kmax, blocks);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CensusError::Pool(e.to_string()))?;
    let parts: Vec<Vec<ChainMember>> = pool.install(|| {
        ranges.par_iter().map(|&(lo, hi)| members_of_block(x, lo, hi)).collect()
    });
    let total: usize = parts.iter().map(Vec::len).sum();
    if total > MEMBER_CAP {
        return Err(CensusError::MemoryCap(total));
    }
    let mut members = Vec::with_capacity(total);
    for part in parts {
        members.extend(part);
    }
    let mut report = build_report(x, chains, &mut members, Duration::ZERO);
    report.elapsed = start.elapsed();
    Ok((report, members))
}

pub fn run_census(x: u64, workers: usize) -> Result<(CensusReport, Vec<ChainMember>), CensusError> {
    run_census_blocks(x, workers, 4 * workers as u64)
}

/// Chain-disjointness check over all n ≤ x.
pub fn verify_conjecture(x: u64, workers: usize) -> Result<CensusReport, CensusError> {
    run_census(x, workers).map(|(report, _)| report)
}

/// B, its bound, and the bound on T_x, for the range n ≤ x.
pub fn average_value(x: u64) -> Result<AverageValue, CensusError> {
    Ok(verify_conjecture(x, 1)?.average())
}

/// Histogram of |𝒜(n)| ≥ 3 over 2 ≤ n ≤ x, computed by evaluating 𝒜(n)
/// directly for every n (sieve factorization, roots of unity, divisibility
/// filter). Independent of the chain enumeration.
pub fn sweep_histogram(x: u64) -> Result<BTreeMap<u32, u64>, CensusError> {
    check_x(x)?;
    let sieve = SpfSieve::new(x).map_err(|_| CensusError::TooLarge { x, max: unity::DEFAULT_SIEVE_CAP })?;
    const CHUNK: u64 = 1 << 16;
    let chunks: Vec<u64> = (0..x.div_ceil(CHUNK)).collect();
    let partial: Vec<BTreeMap<u32, u64>> = chunks
        .par_iter()
        .map(|&c| {
            let mut h = BTreeMap::new();
            let lo = (c * CHUNK).max(2);
            let hi = ((c + 1) * CHUNK - 1).min(x);
            for n in lo..=hi {
                let size = unity::aset_fast_with(&sieve, n).expect("n within sieve").len() as u32;
                if size >= 3 {
                    *h.entry(size).or_insert(0u64) += 1;
                }
            }
            h
        })
        .collect();
    let mut out = BTreeMap::new();
    for h in partial {
        for (s, c) in h {
            *out.entry(s).or_insert(0) += c;
        }
    }
    Ok(out)
}
