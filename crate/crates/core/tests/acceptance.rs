//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use asize::census::{self, ChainMember};
use asize::chains::{self, ChainCoord};
use asize::polyseq;
use asize::report;
use asize::unity;
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Census value pinned from the first run and cross-checked by the
/// independent sweep in criterion 2.
const T_X_1E7: u64 = 3490;
const T_X_1E9: u64 = 32945;

fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

// 1. aset_fast == aset_brute for 2 ≤ n ≤ 10⁵, single-threaded, < 2 min.
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    for n in 2..=100_000u64 {
        let fast = unity::aset_fast(n).unwrap();
        let brute = unity::aset_brute(n).unwrap();
        ensure!(fast.elements == brute.elements, "n = {n}: fast {:?} vs brute {:?}", fast.elements, brute.elements);
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(120), "took {t:?}");
    Ok(format!("99999 values agree in {:.2}s", t.as_secs_f64()))
}

// 2. verify_conjecture(10⁷): no duplicates, max size 3 (hard limit 4),
// with enumeration + merge under 1 s; T_x confirmed by a direct 𝒜(n) sweep.
fn empirical_claim() -> Outcome {
    let x = 10_000_000;
    let r = census::verify_conjecture(x, 1).map_err(|e| e.to_string())?;
    ensure!(r.max_size <= 4, "max |A(n)| = {} > 4 at n = {}", r.max_size, r.max_size_at);
    ensure!(r.duplicates.is_empty(), "duplicates: {:?}", r.duplicates);
    ensure!(r.max_size == 3, "max |A(n)| = {}", r.max_size);
    ensure!(r.elapsed < Duration::from_secs(1), "census took {:?}", r.elapsed);
    ensure!(r.t_x == T_X_1E7, "T_x = {} (pinned {T_X_1E7})", r.t_x);
    let sweep = census::sweep_histogram(x).map_err(|e| e.to_string())?;
    let swept: u64 = sweep.values().sum();
    ensure!(sweep == r.histogram, "sweep histogram {sweep:?} vs census {:?}", r.histogram);
    ensure!(r.members_total == swept, "members_total {} vs sweep {swept}", r.members_total);
    Ok(format!(
        "T_x = {}, duplicates = 0, max size = 3, census {:.1} ms, sweep agrees",
        r.t_x,
        r.elapsed.as_secs_f64() * 1e3
    ))
}

// 3. verify_conjecture(10⁹) under 10 s and 256 MB.
fn scale_headroom() -> Outcome {
    let x = 1_000_000_000;
    let start = Instant::now();
    let (r, members) = census::run_census(x, workers()).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let member_bytes = members.capacity() * std::mem::size_of::<ChainMember>();
    drop(members);
    ensure!(r.duplicates.is_empty(), "duplicates: {:?}", r.duplicates);
    ensure!(t < Duration::from_secs(10), "took {t:?}");
    ensure!(r.t_x == T_X_1E9, "T_x = {} (pinned {T_X_1E9})", r.t_x);
    const CAP: u64 = 256 << 20;
    ensure!((member_bytes as u64) < CAP, "member list {member_bytes} bytes");
    // process-wide peak, an upper bound on what the census itself used
    let peak = peak_rss_bytes();
    if let Some(peak) = peak {
        ensure!(peak <= CAP, "peak RSS {peak} bytes");
    }
    Ok(format!(
        "T_x = {}, {:.1} ms, members {} KiB, peak RSS {}",
        r.t_x,
        t.as_secs_f64() * 1e3,
        member_bytes / 1024,
        peak.map_or("n/a".to_string(), |p| format!("{} MiB", p >> 20))
    ))
}

// 4. |locate(n)| == |𝒜(n)| − 2 for 4 ≤ n ≤ 10⁴, and the k-scan agrees.
fn chain_count_matches() -> Outcome {
    let mut with_chain = 0;
    for n in 4..=10_000u64 {
        let brute = unity::aset_brute(n).unwrap();
        let coords = chains::locate(n).map_err(|e| format!("n = {n}: {e}"))?;
        ensure!(coords.len() == brute.len() - 2, "n = {n}: {} chains, |A| = {}", coords.len(), brute.len());
        ensure!(coords == chains::locate_by_scan(n), "n = {n}: scan disagrees");
        with_chain += usize::from(!coords.is_empty());
    }
    Ok(format!("9997 values checked, {with_chain} lie on a chain"))
}

// 5. predecessor ∈ 𝒜(G_i(k)) and descent returns (k, i), exact arithmetic.
fn descent_roundtrip() -> Outcome {
    let one = BigUint::one();
    for k in 3..=50u64 {
        for i in 2..=20u32 {
            let coord = ChainCoord::new(k, i).unwrap();
            let n = polyseq::g_eval(i as usize, k).unwrap();
            let a = chains::predecessor_big(coord);
            ensure!((&a * &a) % &n == one, "(k={k}, i={i}): n does not divide a^2-1");
            ensure!((&n * &n - &one) % &a == BigUint::zero(), "(k={k}, i={i}): a does not divide n^2-1");
            let t = chains::descend(a, n).map_err(|e| format!("(k={k}, i={i}): {e}"))?;
            ensure!(t.coord == coord, "(k={k}, i={i}): descent gave {}", t.coord);
        }
    }
    Ok("48 x 19 coordinates round-trip".into())
}

// 6. G_{i+1}(k) > G_i(k), G_i(k+1) > G_i(k), G_i(k) > (k−1)^i for
// all 2 ≤ i, k ≤ 30.
fn growth_properties() -> Outcome {
    let g = |i: usize, k: u64| polyseq::g_eval(i, k).unwrap();
    for i in 2..=30usize {
        for k in 2..=30u64 {
            let v = g(i, k);
            ensure!(g(i + 1, k) > v, "G_{}({k}) <= G_{i}({k})", i + 1);
            ensure!(g(i, k + 1) > v, "G_{i}({}) <= G_{i}({k})", k + 1);
            ensure!(v > BigUint::from(k - 1).pow(i as u32), "G_{i}({k}) <= ({k}-1)^{i}");
        }
    }
    Ok("841 (i, k) pairs, 3 inequalities each".into())
}

// 7. chains through n < log₂ n for 2 ≤ n ≤ 10⁴; |𝒜(n)| ≤ 2 + log₂ n for
// 4 ≤ n ≤ 10⁴; |𝒜(n)| < log₂ n fails exactly at the known small n.
fn log_bound() -> Outcome {
    let mut strict_exceptions = Vec::new();
    for n in 2..=10_000u64 {
        let log2n = (n as f64).log2();
        let set = unity::aset_fast(n).unwrap();
        let count = chains::locate_in(&set).unwrap().len() as f64;
        ensure!(count < log2n, "n = {n}: {count} chains, log2 n = {log2n}");
        if n >= 4 {
            ensure!(set.len() as f64 <= 2.0 + log2n, "n = {n}: |A| = {}", set.len());
        }
        if set.len() as f64 >= log2n {
            strict_exceptions.push(n);
        }
    }
    ensure!(strict_exceptions == [2, 3, 4, 8], "|A(n)| >= log2 n at {strict_exceptions:?}");
    Ok(format!("chain bound holds; |A(n)| < log2 n except n in {strict_exceptions:?}"))
}

// 8. B(100) = 208/100; bounds at 10⁷; Σ_k N(x,k) == members_total.
fn statistics() -> Outcome {
    let avg = census::average_value(100).map_err(|e| e.to_string())?;
    ensure!(avg.b == Ratio::new(208u128, 100), "B(100) = {}", avg.b);
    let r = census::verify_conjecture(10_000_000, workers()).map_err(|e| e.to_string())?;
    let b = r.average();
    let two = Ratio::from_integer(2u128);
    ensure!(b.b > two, "B = {} not above 2", b.b);
    ensure!(b.b_within_bound && b.b_f64() < b.b_bound, "B = {} vs bound {}", b.b, b.b_bound);
    ensure!(b.t_x_within_bound && (r.t_x as f64) < b.t_x_bound, "T_x = {} vs bound {}", r.t_x, b.t_x_bound);
    for x in [100u64, 10_000, 10_000_000] {
        let r = census::verify_conjecture(x, 1).map_err(|e| e.to_string())?;
        let sum: u64 = (3..=census::max_generator(x)).map(|k| census::n_x_k(x, k).unwrap()).sum();
        ensure!(sum == r.members_total, "x = {x}: sum N(x,k) = {sum}, members_total = {}", r.members_total);
        ensure!(r.histogram.values().sum::<u64>() == r.t_x, "x = {x}: histogram does not sum to T_x");
    }
    Ok(format!("B(100) = 52/25, B(1e7) = {} < {:.6}, T_x = {} < {:.1}", b.b, b.b_bound, r.t_x, b.t_x_bound))
}

// 9. F values, G doubling identity, vanishing constant of G_{2r+1}.
fn polynomial_values() -> Outcome {
    ensure!(polyseq::f_eval(2, 4) == BigUint::from(17u32), "F_2(4)");
    ensure!(polyseq::f_eval(4, 2) == BigUint::from(29u32), "F_4(2)");
    ensure!(polyseq::f_eval(6, 6) == BigUint::from(53353u32), "F_6(6)");
    for r in 1..=12 {
        let (gr, gr1) = (polyseq::g_coeffs(r), polyseq::g_coeffs(r - 1));
        let rhs = &(&gr * &gr) - &(&gr1 * &gr1);
        ensure!(polyseq::g_coeffs(2 * r) == rhs, "G_{} identity", 2 * r);
    }
    for r in 0..=12 {
        ensure!(polyseq::g_coeffs(2 * r + 1).constant().is_zero(), "G_{} constant term", 2 * r + 1);
    }
    Ok("F_2(4)=17, F_4(2)=29, F_6(6)=53353; identities for r <= 12".into())
}

// 10. Reports byte-identical across worker counts.
fn determinism() -> Outcome {
    for x in [1_000u64, 100_000, 10_000_000] {
        let reports: Vec<String> = [1usize, 2, 8]
            .iter()
            .map(|&w| report::to_json(&census::verify_conjecture(x, w).unwrap().without_timing()))
            .collect();
        ensure!(reports.windows(2).all(|p| p[0] == p[1]), "x = {x}: reports differ");
    }
    Ok("x in {1e3, 1e5, 1e7}, workers in {1, 2, 8}".into())
}

// 11. A planted duplicate makes the CLI exit 1 and print the witness.
fn counterexample_path() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("members.csv");
    let mut members = census::enumerate_members(1000, 3, 31).unwrap();
    members.push(ChainMember { value: 55, k: 7, i: 2, predecessor: 7 });
    let mut buf = Vec::new();
    report::write_members_csv(&members, &mut buf).unwrap();
    std::fs::write(&path, buf).map_err(|e| e.to_string())?;

    let out = Command::new(env!("CARGO_BIN_EXE_asize"))
        .args(["verify", "--max", "1000", "--inject-members"])
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure!(out.status.code() == Some(1), "exit status {:?}", out.status.code());
    let witness = "n = 55 in chains (k=3, i=4), (k=7, i=2)";
    ensure!(stdout.contains(witness), "stdout lacks witness:\n{stdout}");
    ensure!(stderr.contains("n = 55"), "stderr lacks witness:\n{stderr}");
    Ok(format!("exit 1, witness `{witness}`"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("AC3 scale headroom (x = 1e9)", scale_headroom),
        ("AC1 oracle equivalence (n <= 1e5)", oracle_equivalence),
        ("AC2 empirical |A(n)| <= 3 (x = 1e7)", empirical_claim),
        ("AC4 chain count = |A(n)| - 2 (n <= 1e4)", chain_count_matches),
        ("AC5 predecessor / descent round trip", descent_roundtrip),
        ("AC6 growth of G_i(k)", growth_properties),
        ("AC7 log2 bounds (n <= 1e4)", log_bound),
        ("AC8 T_x and average value", statistics),
        ("AC9 polynomial values and identities", polynomial_values),
        ("AC10 determinism across workers", determinism),
        ("AC11 counterexample exit path", counterexample_path),
    ];
    let (mut passed, mut failed) = (0, 0);
    for (name, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let line = match result {
            Ok(detail) => {
                passed += 1;
                format!("PASS  {name}: {detail} [{secs:.2}s]")
            }
            Err(why) => {
                failed += 1;
                format!("FAIL  {name}: {why} [{secs:.2}s]")
            }
        };
        println!("{line}");
    }
    println!("acceptance: {passed} passed, {failed} failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
