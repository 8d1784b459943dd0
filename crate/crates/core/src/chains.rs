//! Chains `𝔠_k = ⟨G_i(k)⟩_{i≥2}` and the descent that recovers a chain
//! position from a nontrivial element of 𝒜(n).
//!
//! Consecutive chain values `(G_{i-1}(k), G_i(k))` satisfy
//! `G_{i-1}² + G_i² − 1 = k·G_{i-1}·G_i`. Conversely every pair (a, n) with
//! `a ∈ 𝒜(n) \ {1, n−1}` walks down to `(1, z)` under
//! `(a, n) ↦ (z·a − n, a)`, which places n at position i of chain z.

use std::fmt;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ChainError, UnityError};
use crate::polyseq;
use crate::unity::{self, ASetResult, Method};

/// Position `i` in chain `k`, i.e. the value G_i(k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChainCoord {
    pub k: u64,
    pub i: u32,
}

impl ChainCoord {
    pub fn new(k: u64, i: u32) -> Result<Self, ChainError> {
        if k < 3 {
            return Err(ChainError::BadGenerator(k));
        }
        if i < 2 {
            return Err(ChainError::BadPosition(i));
        }
        Ok(ChainCoord { k, i })
    }

    /// G_i(k), exact.
    pub fn value_big(&self) -> BigUint {
        polyseq::g_eval_big(self.i as usize, &BigUint::from(self.k))
    }

    pub fn value(&self) -> Result<u64, ChainError> {
        self.value_big().to_u64().ok_or(ChainError::Overflow)
    }
}

impl fmt::Display for ChainCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, i={})", self.k, self.i)
    }
}

/// One chain value together with its position and the value before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainStep {
    pub coord: ChainCoord,
    pub value: u64,
    pub predecessor: u64,
}

/// Walks chain `k` upward from G_2(k), stopping once a value exceeds
/// `limit`. Intermediates are 128-bit, so no value up to `u64::MAX` can
/// overflow.
#[derive(Debug, Clone)]
pub struct ChainIter {
    k: u64,
    limit: u64,
    i: u32,
    prev: u128,
    cur: u128,
}

impl ChainIter {
    pub fn new(k: u64, limit: u64) -> Result<Self, ChainError> {
        if k < 3 {
            return Err(ChainError::BadGenerator(k));
        }
        Ok(ChainIter { k, limit, i: 1, prev: 1, cur: k as u128 })
    }
}

impl Iterator for ChainIter {
    type Item = ChainStep;

    fn next(&mut self) -> Option<ChainStep> {
        if self.cur > self.limit as u128 {
            return None;
        }
        // cur ≤ u64::MAX and k ≤ u64::MAX, so the product fits in 128 bits
        let next = self.k as u128 * self.cur - self.prev;
        if next > self.limit as u128 {
            self.cur = next;
            return None;
        }
        self.prev = self.cur;
        self.cur = next;
        self.i += 1;
        Some(ChainStep {
            coord: ChainCoord { k: self.k, i: self.i },
            value: next as u64,
            predecessor: self.prev as u64,
        })
    }
}

impl std::iter::FusedIterator for ChainIter {}

/// Members of chain `k` not exceeding `limit`, as `(coord, value)`.
pub fn chain_iter(k: u64, limit: u64) -> Result<Vec<(ChainCoord, u64)>, ChainError> {
    Ok(ChainIter::new(k, limit)?.map(|s| (s.coord, s.value)).collect())
}

/// The first `count` members of chain `k`, exact.
pub fn chain_prefix(k: u64, count: usize) -> Result<Vec<(ChainCoord, BigUint)>, ChainError> {
    if k < 3 {
        return Err(ChainError::BadGenerator(k));
    }
    let kb = BigUint::from(k);
    let mut prev = kb.clone();
    let mut cur = &kb * &kb - 1u32;
    let mut out = Vec::with_capacity(count);
    for i in 2..2 + count as u32 {
        out.push((ChainCoord { k, i }, cur.clone()));
        let next = &kb * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(out)
}

/// G_{i−1}(k), which lies in 𝒜(G_i(k)).
pub fn predecessor(coord: ChainCoord) -> Result<u64, ChainError> {
    predecessor_big(coord).to_u64().ok_or(ChainError::Overflow)
}

pub fn predecessor_big(coord: ChainCoord) -> BigUint {
    polyseq::g_eval_big(coord.i as usize - 1, &BigUint::from(coord.k))
}

/// Full path of a descent from `(a, n)` to `(1, z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentTrace {
    pub start: (BigUint, BigUint),
    /// Every pair visited, starting with `start` and ending with `(1, z)`.
    pub steps: Vec<(BigUint, BigUint)>,
    pub z: u64,
    pub coord: ChainCoord,
}

impl fmt::Display for DescentTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z={}, path ", self.z)?;
        for (j, (r, a)) in self.steps.iter().enumerate() {
            if j > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "({r},{a})")?;
        }
        write!(f, ", n = G_{}({})", self.coord.i, self.z)
    }
}

fn is_member_big(a: &BigUint, n: &BigUint) -> bool {
    if a.is_zero() || a >= n {
        return false;
    }
    let one = BigUint::one();
    (a * a) % n == one && (n * n - &one) % a == BigUint::zero()
}

/// Descends from a nontrivial `a ∈ 𝒜(n)` to `(1, z)`; n then sits at
/// position `#steps` of chain z.
pub fn descend(a: impl Into<BigUint>, n: impl Into<BigUint>) -> Result<DescentTrace, ChainError> {
    let (a, n): (BigUint, BigUint) = (a.into(), n.into());
    let one = BigUint::one();
    if !is_member_big(&a, &n) {
        return Err(ChainError::NotMember { a: a.to_string(), n: n.to_string() });
    }
    if a == one || a == &n - &one {
        return Err(ChainError::Trivial { a: a.to_string(), n: n.to_string() });
    }
    debug_assert!(a.gcd(&n).is_one());

    let num = &n * &n + &a * &a - &one;
    let den = &a * &n;
    let (z, rem) = num.div_rem(&den);
    if !rem.is_zero() || z < BigUint::from(3u32) {
        return Err(ChainError::NonIntegral { r: a.to_string(), a: n.to_string(), z: z.to_string() });
    }
    let z_small = z.to_u64().ok_or(ChainError::Overflow)?;

    let mut steps = vec![(a.clone(), n.clone())];
    let (mut lo, mut hi) = (a.clone(), n.clone());
    while !(lo.is_one() && hi == z) {
        // hi = z·lo − r with 0 ≤ r < lo
        let zlo = &z * &lo;
        if zlo < hi {
            return Err(ChainError::NonIntegral { r: lo.to_string(), a: hi.to_string(), z: z.to_string() });
        }
        let r = zlo - &hi;
        if r.is_zero() || r >= lo || &r * &r + &lo * &lo - &one != &z * &r * &lo {
            return Err(ChainError::NonIntegral { r: r.to_string(), a: lo.to_string(), z: z.to_string() });
        }
        hi = std::mem::replace(&mut lo, r);
        steps.push((lo.clone(), hi.clone()));
    }

    let i = u32::try_from(steps.len()).map_err(|_| ChainError::Overflow)?;
    let coord = ChainCoord::new(z_small, i)?;
    debug_assert_eq!(coord.value_big(), n);
    Ok(DescentTrace { start: (a, n), steps, z: z_small, coord })
}

/// Every chain position holding `n`, via descent from each nontrivial
/// element of 𝒜(n). Sorted by k.
pub fn locate(n: u64) -> Result<Vec<ChainCoord>, ChainError> {
    let set = unity::aset_fast(n)?;
    locate_in(&set)
}

/// [`locate`] given 𝒜(n) already computed by any engine.
pub fn locate_in(set: &ASetResult) -> Result<Vec<ChainCoord>, ChainError> {
    let n = set.n;
    let mut coords = set
        .elements
        .iter()
        .filter(|&&a| a != 1 && a != n - 1)
        .map(|&a| descend(a, n).map(|t| t.coord))
        .collect::<Result<Vec<_>, _>>()?;
    coords.sort_unstable();
    Ok(coords)
}

/// Chain positions holding `n`, found by walking every chain with
/// `3 ≤ k ≤ ⌊√(n+1)⌋`.
pub fn locate_by_scan(n: u64) -> Vec<ChainCoord> {
    scan_hits(n).into_iter().map(|s| s.coord).collect()
}

fn scan_hits(n: u64) -> Vec<ChainStep> {
    let kmax = n.saturating_add(1).sqrt();
    (3..=kmax)
        .filter_map(|k| {
            ChainIter::new(k, n)
                .expect("k >= 3")
                .last()
                .filter(|s| s.value == n)
        })
        .collect()
}

/// 𝒜(n) assembled from chain membership alone: 1, n−1 and the predecessor
/// of n in every chain containing it.
pub fn aset_chain(n: u64) -> Result<ASetResult, ChainError> {
    if n < 2 {
        return Err(UnityError::TooSmall(n).into());
    }
    let mut elements: Vec<u64> = scan_hits(n).into_iter().map(|s| s.predecessor).collect();
    elements.push(1);
    if n >= 3 {
        elements.push(n - 1);
    }
    elements.sort_unstable();
    elements.dedup();
    Ok(ASetResult { n, elements, method: Method::Chain })
}
