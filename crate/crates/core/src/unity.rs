//! Factorization, square roots of 1 modulo n, divisor counting and the
//! direct engines for 𝒜(n) = {1 ≤ a < n : n | a²−1, a | n²−1}.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::UnityError;

/// Largest sieve a caller gets without raising the cap explicitly (4 bytes
/// per entry, so about 1 GiB).
pub const DEFAULT_SIEVE_CAP: u64 = 1 << 28;

/// Smallest-prime-factor table for `2..=limit`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Result<Self, UnityError> {
        Self::with_cap(limit, DEFAULT_SIEVE_CAP)
    }

    pub fn with_cap(limit: u64, cap: u64) -> Result<Self, UnityError> {
        if limit > cap || limit > u32::MAX as u64 {
            return Err(UnityError::SieveTooLarge { limit, cap });
        }
        let limit = limit.max(1) as usize;
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let cap_p = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > cap_p || m > limit {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(SpfSieve { spf })
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Smallest prime factor of `m`, for `2 <= m <= limit`.
    pub fn get(&self, m: u64) -> Option<u64> {
        if m < 2 || m > self.limit() {
            return None;
        }
        Some(self.spf[m as usize] as u64)
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization, UnityError> {
        if n > self.limit() {
            return Err(UnityError::BeyondSieve { n, limit: self.limit() });
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(Factorization { n: n as u128, factors })
    }
}

/// Prime factorization; `factors` is sorted by prime with exponents ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    pub n: u128,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Number of distinct prime factors, w(n).
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// σ₀(n) = ∏(e+1).
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// Factorization of the product `self.n · other.n`.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut a, mut b) = (self.factors.iter().peekable(), other.factors.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(p, e)), Some(&&(q, f))) => {
                    if p == q {
                        factors.push((p, e + f));
                        a.next();
                        b.next();
                    } else if p < q {
                        factors.push((p, e));
                        a.next();
                    } else {
                        factors.push((q, f));
                        b.next();
                    }
                }
                (Some(&&pe), None) => {
                    factors.push(pe);
                    a.next();
                }
                (None, Some(&&qf)) => {
                    factors.push(qf);
                    b.next();
                }
                (None, None) => break,
            }
        }
        let n = self.n.checked_mul(other.n).expect("product of two 64-bit values fits 128 bits");
        Factorization { n, factors }
    }

    /// ∏ p^e, or `None` on 128-bit overflow.
    pub fn value(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, &(p, e)| {
            (p as u128).checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }
}

/// Trial division up to √n.
pub fn factorize(n: u64) -> Factorization {
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |m: &mut u64, p: u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(&mut m, 2);
    push(&mut m, 3);
    let mut p = 5u64;
    // 6j±1 wheel
    while p.checked_mul(p).is_some_and(|pp| pp <= m) {
        push(&mut m, p);
        push(&mut m, p + 2);
        p += 6;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Factorization { n: n as u128, factors }
}

/// σ₀(x).
pub fn divisor_count(x: u64) -> u64 {
    factorize(x).divisor_count()
}

/// σ₀(n²−1), from the factorizations of n−1 and n+1.
pub fn divisor_count_n2m1(n: u64) -> u64 {
    assert!(n >= 2, "n^2-1 is zero or negative for n < 2");
    let hi = n.checked_add(1).expect("n + 1 overflows");
    factorize(n - 1).merge(&factorize(hi)).divisor_count()
}

/// Solutions of x² ≡ 1 modulo p^e.
fn local_roots(p: u64, e: u32) -> Vec<u64> {
    let m = p.pow(e);
    if p != 2 {
        return vec![1, m - 1];
    }
    match e {
        1 => vec![1],
        2 => vec![1, 3],
        _ => {
            let h = m / 2;
            vec![1, h - 1, h + 1, m - 1]
        }
    }
}

fn local_root_count(p: u64, e: u32) -> u64 {
    match (p, e) {
        (2, 1) => 1,
        (2, 2) => 2,
        (2, _) => 4,
        _ => 2,
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m as i128) as u64
}

/// All 1 ≤ a < n with a² ≡ 1 (mod n), sorted. Roots are solved modulo each
/// prime power and combined by CRT.
pub fn sqrt_units(n: u64) -> Result<Vec<u64>, UnityError> {
    if n < 2 {
        return Err(UnityError::TooSmall(n));
    }
    Ok(sqrt_units_of(&factorize(n)))
}

/// Same as [`sqrt_units`] for an already factored n.
pub fn sqrt_units_of(fact: &Factorization) -> Vec<u64> {
    let mut modulus = 1u64;
    let mut roots = vec![0u64];
    for &(p, e) in &fact.factors {
        let m = p.pow(e);
        let local = local_roots(p, e);
        let inv = mod_inverse(modulus % m, m) as u128;
        let mut next = Vec::with_capacity(roots.len() * local.len());
        for &r in &roots {
            for &s in &local {
                // x = r + modulus·t, t ≡ (s − r)·modulus⁻¹ (mod m)
                let diff = (s as u128 + m as u128 - (r % m) as u128) % m as u128;
                let t = diff * inv % m as u128;
                next.push((r as u128 + modulus as u128 * t) as u64);
            }
        }
        roots = next;
        modulus *= m;
    }
    if modulus == 1 {
        return Vec::new();
    }
    roots.sort_unstable();
    roots
}

/// Exact number of square roots of 1 modulo n (1, 2 or 4 local roots at
/// 2^e, two at each odd prime power).
pub fn correct_root_count(n: u64) -> Result<u64, UnityError> {
    if n < 2 {
        return Err(UnityError::TooSmall(n));
    }
    Ok(root_count_of(&factorize(n)))
}

pub fn root_count_of(fact: &Factorization) -> u64 {
    fact.factors.iter().map(|&(p, e)| local_root_count(p, e)).product()
}

/// The two-branch closed form `2^{w(n)-1}` for n = 2·odd, `2^{w(n)}`
/// otherwise. Undercounts when 8 | n; kept for side-by-side reports.
pub fn literal_root_count(n: u64) -> Result<u64, UnityError> {
    if n < 2 {
        return Err(UnityError::TooSmall(n));
    }
    let w = factorize(n).omega();
    if n.is_multiple_of(2) && (n / 2) % 2 == 1 {
        Ok(1 << (w - 1))
    } else {
        Ok(1 << w)
    }
}

/// Engine that produced an [`ASetResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Fast,
    Chain,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Fast => "fast",
            Method::Chain => "chain",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" => Ok(Method::Brute),
            "fast" => Ok(Method::Fast),
            "chain" => Ok(Method::Chain),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ASetResult {
    pub n: u64,
    pub elements: Vec<u64>,
    pub method: Method,
}

impl ASetResult {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: u64) -> bool {
        self.elements.binary_search(&a).is_ok()
    }
}

impl fmt::Display for ASetResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A({}) = {{", self.n)?;
        for (j, a) in self.elements.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}} (size {})", self.elements.len())
    }
}

/// Whether `a` belongs to 𝒜(n), checked directly.
pub fn is_member(a: u64, n: u64) -> bool {
    if a == 0 || a >= n {
        return false;
    }
    let (a, n) = (a as u128, n as u128);
    a * a % n == 1 % n && (n * n - 1) % a == 0
}

/// Linear scan over every candidate; the ground-truth oracle.
pub fn aset_brute(n: u64) -> Result<ASetResult, UnityError> {
    if n < 2 {
        return Err(UnityError::TooSmall(n));
    }
    let nn = n as u128;
    let n2m1 = nn * nn - 1;
    let mut elements = Vec::new();
    // sq = a² mod n and step = (2a+1) mod n, advanced without division
    let (mut sq, mut step) = (1 % n, 3 % n);
    for a in 1..n {
        if sq == 1 && n2m1.is_multiple_of(a as u128) {
            elements.push(a);
        }
        sq = if sq >= n - step { sq - (n - step) } else { sq + step };
        step = if step >= n - 2 { step - (n - 2) } else { step + 2 };
    }
    Ok(ASetResult { n, elements, method: Method::Brute })
}

fn filter_roots(n: u64, roots: Vec<u64>) -> ASetResult {
    let nn = n as u128;
    let n2m1 = nn * nn - 1;
    let elements = roots.into_iter().filter(|&a| n2m1.is_multiple_of(a as u128)).collect();
    ASetResult { n, elements, method: Method::Fast }
}

/// Square roots of 1 mod n filtered by `a | n²−1`, the latter tested by
/// reduction so n²−1 is never factored.
pub fn aset_fast(n: u64) -> Result<ASetResult, UnityError> {
    Ok(filter_roots(n, sqrt_units(n)?))
}

/// [`aset_fast`] with factorization taken from a sieve.
pub fn aset_fast_with(sieve: &SpfSieve, n: u64) -> Result<ASetResult, UnityError> {
    if n < 2 {
        return Err(UnityError::TooSmall(n));
    }
    let fact = sieve.factorize(n)?;
    Ok(filter_roots(n, sqrt_units_of(&fact)))
}

/// Upper bounds on |𝒜(n)|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBound {
    /// min(exact root count, σ₀(n²−1)).
    pub bound: u64,
    /// min(2^{w(n)}-style closed form, σ₀(n²−1)).
    pub literal_bound: u64,
    pub root_count: u64,
    pub literal_root_count: u64,
    pub divisor_count: u64,
}

pub fn aset_upper_bound(n: u64) -> Result<UpperBound, UnityError> {
    let root_count = correct_root_count(n)?;
    let literal_root_count = literal_root_count(n)?;
    let divisor_count = divisor_count_n2m1(n);
    Ok(UpperBound {
        bound: root_count.min(divisor_count),
        literal_bound: literal_root_count.min(divisor_count),
        root_count,
        literal_root_count,
        divisor_count,
    })
}
