//! Regeneration of the reference tables and comparison against golden CSVs.

use bhcount::asymptotics::{li, round_half_away};
use bhcount::bhconstant::{bh_constant_with, ck_constant, CheckpointSchedule, ConstantOptions};
use bhcount::census::{count_pairs, count_q, landau_family, PairMode};
use bhcount::polynomial::{check_family, IntPoly};
use bhcount::primes::count_primes;
use clap::ValueEnum;

use crate::output::{sig, Sheet};
use crate::CliError;

/// Prime bound used for the C_k table.
pub const CK_PRIME_BOUND: u64 = 1_000_000;
pub const PAIR_GAPS: [u64; 7] = [2, 4, 6, 8, 10, 12, 30];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableId {
    /// π(x), rounded Li(x) and x/log x at powers of ten.
    #[value(alias = "loglint")]
    Logint,
    /// Primes n^2+1 for n <= N against Li(N)/2.
    Disagree,
    /// Partial products for t^2-1 over the first 10^n primes.
    Divergezero,
    /// Prime pair constants C_k.
    Ck,
    /// π_k(p_{10^n}) for k = 2, 4, 6, 8, 10, 12, 30.
    Pis,
}

impl TableId {
    /// The published values shipped with the binary.
    pub fn golden(self) -> &'static str {
        match self {
            TableId::Logint => include_str!("../golden/logint.csv"),
            TableId::Disagree => include_str!("../golden/disagree.csv"),
            TableId::Divergezero => include_str!("../golden/divergezero.csv"),
            TableId::Ck => include_str!("../golden/ck.csv"),
            TableId::Pis => include_str!("../golden/pis.csv"),
        }
    }
}

fn decades(from: u32, max: u64) -> impl Iterator<Item = u64> {
    (from..20)
        .map(|e| 10u64.pow(e))
        .take_while(move |&x| x <= max)
}

pub fn logint(max: u64) -> Sheet {
    let mut s = Sheet::new(&["x", "pi", "li", "x_over_log_x"]);
    for x in decades(3, max) {
        let xf = x as f64;
        s.push(vec![
            x.to_string(),
            count_primes(0, x + 1).to_string(),
            round_half_away(li(xf).expect("x >= 2")).to_string(),
            round_half_away(xf / xf.ln()).to_string(),
        ]);
    }
    s
}

pub fn disagree(max: u64) -> Result<Sheet, CliError> {
    let mut s = Sheet::new(&["n", "q", "half_li", "ratio"]);
    let family = landau_family();
    for n in decades(2, max) {
        let q = count_q(&family, n)?.count;
        let half = 0.5 * li(n as f64)?;
        s.push(vec![
            n.to_string(),
            q.to_string(),
            round_half_away(half).to_string(),
            sig(q as f64 / half, 6),
        ]);
    }
    Ok(s)
}

pub fn divergezero(max_n: u32) -> Result<Sheet, CliError> {
    let mut s = Sheet::new(&["n", "value"]);
    let counts: Vec<u64> = (1..=max_n).map(|e| 10u64.pow(e)).collect();
    if counts.is_empty() {
        return Ok(s);
    }
    let family = check_family(&[IntPoly::from_i64s(&[-1, 0, 1])])?;
    let last = bhcount::primes::nth_prime(*counts.last().expect("non-empty"))?;
    let opts = ConstantOptions {
        allow_override: true,
        ..Default::default()
    };
    let est = bh_constant_with(
        &family,
        last,
        &CheckpointSchedule::PrimeCounts(counts),
        &opts,
    )?;
    for cp in est.checkpoints {
        s.push(vec![cp.at.to_string(), sig(cp.value, 6)]);
    }
    Ok(s)
}

pub fn ck(through: u64) -> Result<Sheet, CliError> {
    let mut s = Sheet::new(&["k", "value"]);
    for k in (2..=through).step_by(2) {
        s.push(vec![
            k.to_string(),
            sig(ck_constant(k, CK_PRIME_BOUND)?.value, 6),
        ]);
    }
    Ok(s)
}

pub fn pis(max_n: u32) -> Result<Sheet, CliError> {
    let mut headers = vec!["n".to_string()];
    headers.extend(PAIR_GAPS.iter().map(|k| format!("pi_{k}")));
    let mut s = Sheet {
        headers,
        rows: Vec::new(),
    };
    for n in 2..=max_n {
        let mut row = vec![n.to_string()];
        for k in PAIR_GAPS {
            row.push(
                count_pairs(k, PairMode::FirstPrimes(10u64.pow(n)))?
                    .count
                    .to_string(),
            );
        }
        s.push(row);
    }
    Ok(s)
}

/// Outcome of comparing a generated sheet with a golden CSV.
#[derive(Debug, Default)]
pub struct Comparison {
    pub rows_checked: usize,
    /// First-column keys of generated rows absent from the golden file.
    pub unmatched: Vec<String>,
    pub mismatches: Vec<String>,
}

/// Cells equal as integers, or as decimals to `sig_digits` significant digits
/// of the golden value.
fn cells_agree(ours: &str, golden: &str, sig_digits: u32) -> bool {
    if ours == golden {
        return true;
    }
    if let (Ok(a), Ok(b)) = (ours.parse::<i64>(), golden.parse::<i64>()) {
        return a == b;
    }
    match (ours.parse::<f64>(), golden.parse::<f64>()) {
        (Ok(a), Ok(b)) if b != 0.0 => {
            let unit = 10f64.powi(b.abs().log10().floor() as i32 - (sig_digits as i32 - 1));
            (a - b).abs() <= 0.5 * unit * (1.0 + 1e-9)
        }
        _ => false,
    }
}

pub fn compare(ours: &Sheet, golden_csv: &str, sig_digits: u32) -> Result<Comparison, CliError> {
    let mut reader = csv::Reader::from_reader(golden_csv.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Usage(format!("golden file: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut out = Comparison::default();
    if headers != ours.headers {
        out.mismatches.push(format!(
            "header mismatch: generated {:?}, golden {:?}",
            ours.headers, headers
        ));
        return Ok(out);
    }
    let golden: Vec<Vec<String>> = reader
        .records()
        .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("golden file: {e}")))?;
    for row in &ours.rows {
        let Some(g) = golden.iter().find(|g| g[0] == row[0]) else {
            out.unmatched.push(row[0].clone());
            continue;
        };
        out.rows_checked += 1;
        for ((h, a), b) in headers.iter().zip(row).zip(g).skip(1) {
            if !cells_agree(a, b, sig_digits) {
                out.mismatches.push(format!(
                    "{}={}: {h} generated {a}, golden {b}",
                    headers[0], row[0]
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agreement_rules() {
        assert!(cells_agree("1270", "1270", 5));
        assert!(!cells_agree("1271", "1270", 5));
        assert!(cells_agree("1.30669", "1.3067", 5));
        assert!(!cells_agree("1.30669", "1.3067", 6));
        assert!(cells_agree("0.0824772", "0.0824772", 6));
        assert!(!cells_agree("0.08248", "0.0824772", 6));
    }

    #[test]
    fn compare_reports_mismatches_and_missing_rows() {
        let mut s = Sheet::new(&["x", "pi"]);
        s.push(vec!["1000".into(), "168".into()]);
        s.push(vec!["10000".into(), "1230".into()]);
        s.push(vec!["100000".into(), "9592".into()]);
        let golden = "x,pi\n1000,168\n10000,1229\n";
        let c = compare(&s, golden, 5).unwrap();
        assert_eq!(c.rows_checked, 2);
        assert_eq!(c.unmatched, vec!["100000".to_string()]);
        assert_eq!(c.mismatches.len(), 1);
        assert!(c.mismatches[0].contains("1230"));
        let c = compare(&s, "x,count\n1000,168\n", 5).unwrap();
        assert_eq!(c.rows_checked, 0);
        assert!(c.mismatches[0].starts_with("header mismatch"));
    }
}
