//! Serialization of census output: JSON report, CSV member dump and the
//! plain-text table.
//!
//! Integers above 2⁵³ are written to JSON as decimal strings so consumers
//! that parse numbers as doubles do not lose precision; smaller values stay
//! plain numbers. Both forms are accepted when reading.

use std::fmt::Write as _;
use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};

use crate::census::{CensusReport, ChainMember};

/// Largest integer a double represents exactly.
pub const JSON_SAFE_MAX: u128 = 1 << 53;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Num(u64),
    Str(String),
}

fn to_wire(v: u128) -> NumOrStr {
    if v > JSON_SAFE_MAX {
        NumOrStr::Str(v.to_string())
    } else {
        NumOrStr::Num(v as u64)
    }
}

fn from_wire<E: serde::de::Error>(w: NumOrStr) -> Result<u128, E> {
    match w {
        NumOrStr::Num(v) => Ok(v as u128),
        NumOrStr::Str(s) => s.parse().map_err(E::custom),
    }
}

/// `#[serde(with = "safe_int")]` for `u64` fields.
pub mod safe_int {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        to_wire(*v as u128).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let v = from_wire(NumOrStr::deserialize(d)?)?;
        u64::try_from(v).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "safe_ratio")]` for `Ratio<u128>`, as `{"num", "den"}`.
pub mod safe_ratio {
    use super::*;
    use num_rational::Ratio;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wire {
        num: NumOrStr,
        den: NumOrStr,
    }

    pub fn serialize<S: Serializer>(v: &Ratio<u128>, s: S) -> Result<S::Ok, S::Error> {
        Wire { num: to_wire(*v.numer()), den: to_wire(*v.denom()) }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u128>, D::Error> {
        let w = Wire::deserialize(d)?;
        let (num, den) = (from_wire(w.num)?, from_wire(w.den)?);
        if den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Ratio::new(num, den))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub fn to_json(report: &CensusReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn from_json(s: &str) -> serde_json::Result<CensusReport> {
    serde_json::from_str(s)
}

/// CSV dump with header `n,k,i,predecessor`, rows sorted by n then k, LF
/// line endings.
pub fn write_members_csv<W: Write>(members: &[ChainMember], sink: W) -> csv::Result<()> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    for m in &sorted {
        w.serialize(m)?;
    }
    if sorted.is_empty() {
        w.write_record(["n", "k", "i", "predecessor"])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_members_csv<R: Read>(source: R) -> csv::Result<Vec<ChainMember>> {
    csv::Reader::from_reader(source).deserialize().collect()
}

fn ratio_decimal(r: &num_rational::Ratio<u128>, digits: usize) -> String {
    let (n, d) = (*r.numer(), *r.denom());
    let mut s = format!("{}.", n / d);
    let mut rem = n % d;
    for _ in 0..digits {
        rem *= 10;
        s.push(char::from(b'0' + (rem / d) as u8));
        rem %= d;
    }
    s
}

/// Human-readable report; the last line always starts with `RESULT:`.
pub fn to_table(report: &CensusReport) -> String {
    let mut s = String::new();
    let r = report;
    let rows: Vec<(&str, String)> = vec![
        ("x", r.x.to_string()),
        ("chains scanned", r.chains_scanned.to_string()),
        ("members (with multiplicity)", r.members_total.to_string()),
        ("members (distinct) = T_x", r.t_x.to_string()),
        ("duplicate values", r.duplicates.len().to_string()),
        ("max |A(n)|", format!("{} (first at n = {})", r.max_size, r.max_size_at)),
        ("average B", format!("{} = {}", r.average_b, ratio_decimal(&r.average_b, 9))),
        ("B bound", format!("{:.9} ({})", r.b_bound, if r.b_within_bound { "holds" } else { "VIOLATED" })),
        ("T_x bound", format!("{:.3} ({})", r.t_x_bound, if r.t_x_within_bound { "holds" } else { "VIOLATED" })),
        ("elapsed", format!("{:.3}s", r.elapsed.as_secs_f64())),
    ];
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<28} {v}");
    }
    for (size, count) in &r.histogram {
        let _ = writeln!(s, "{:<28} {count}", format!("  |A(n)| = {size}"));
    }
    for d in &r.duplicates {
        let coords: Vec<String> = d.coords.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "WITNESS: n = {} in chains {}", d.value, coords.join(", "));
    }
    if r.conjecture_holds() {
        let _ = writeln!(s, "RESULT: OK, |A(n)| <= 3 for all n <= {}", r.x);
    } else {
        let _ = writeln!(
            s,
            "RESULT: COUNTEREXAMPLE, {} value(s) lie in more than one chain, max |A(n)| = {}",
            r.duplicates.len(),
            r.max_size
        );
    }
    s
}

/// Serializes `report` (and, for CSV, `members`) in the given format.
pub fn emit_report<W: Write>(
    report: &CensusReport,
    members: &[ChainMember],
    format: Format,
    mut sink: W,
) -> io::Result<()> {
    match format {
        Format::Json => writeln!(sink, "{}", to_json(report)),
        Format::Table => sink.write_all(to_table(report).as_bytes()),
        Format::Csv => write_members_csv(members, sink).map_err(io::Error::other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;

    #[test]
    fn csv_dump() {
        let (_, members) = census::run_census(100, 1).unwrap();
        let mut buf = Vec::new();
        write_members_csv(&members, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], "n,k,i,predecessor");
        assert_eq!(lines[1], "8,3,2,3");
        assert_eq!(lines.len(), 1 + 11 + 1);
        assert_eq!(*lines.last().unwrap(), "");
        assert!(!text.contains('\r'));
        assert_eq!(read_members_csv(text.as_bytes()).unwrap(), members);
    }

    #[test]
    fn json_histogram_and_roundtrip() {
        let r = census::verify_conjecture(100, 1).unwrap();
        let json = to_json(&r);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["histogram"], serde_json::json!({"3": 11}));
        assert_eq!(v["average_b"], serde_json::json!({"num": 52, "den": 25}));
        assert_eq!(from_json(&json).unwrap(), r);
    }

    #[test]
    fn large_values_become_strings() {
        let mut r = census::verify_conjecture(100, 1).unwrap();
        r.x = (1 << 53) + 1;
        r.max_size_at = 1 << 53;
        let v: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(v["x"], serde_json::json!("9007199254740993"));
        assert_eq!(v["max_size_at"], serde_json::json!(9007199254740992u64));
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
    }

    #[test]
    fn table_ends_with_result() {
        let r = census::verify_conjecture(1000, 1).unwrap();
        let t = to_table(&r);
        let last = t.lines().last().unwrap();
        assert!(last.starts_with("RESULT:"));
        assert_eq!(t.lines().filter(|l| l.starts_with("RESULT:")).count(), 1);
    }

    #[test]
    fn decimal() {
        let r = num_rational::Ratio::new(208u128, 100);
        assert_eq!(ratio_decimal(&r, 3), "2.080");
    }
}
