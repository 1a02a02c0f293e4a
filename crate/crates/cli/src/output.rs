//! Serialization helpers shared by the subcommands.

use anyhow::Result;
use serde::Serialize;
use std::io::Write;

/// `%.12g`: twelve significant digits, trailing zeros dropped, scientific
/// notation outside `1e-5 ≤ |x| < 1e12`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One budget point of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    #[serde(rename = "C")]
    pub budget: f64,
    pub value_joint: f64,
    pub value_single: f64,
    pub theil_joint: f64,
    pub theil_single: f64,
    pub budget_on_g: f64,
    /// Upper triangle of g*, row-major.
    pub g_star_entries: Vec<f64>,
    pub a_star: Vec<f64>,
    pub converged: bool,
}

pub fn csv_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "C",
        "value_joint",
        "value_single",
        "theil_joint",
        "theil_single",
        "budget_on_g",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for i in 0..n {
        for j in i + 1..n {
            h.push(format!("g_star_{}_{}", i + 1, j + 1));
        }
    }
    h.extend((0..n).map(|i| format!("a_star_{}", i + 1)));
    h
}

impl SweepRecord {
    fn csv_row(&self) -> Vec<String> {
        [
            self.budget,
            self.value_joint,
            self.value_single,
            self.theil_joint,
            self.theil_single,
            self.budget_on_g,
        ]
        .iter()
        .chain(&self.g_star_entries)
        .chain(&self.a_star)
        .map(|&x| sig12(x))
        .collect()
    }
}

pub fn write_csv(out: &mut impl Write, n: usize, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(n))?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON; doubles print in shortest round-trip form and non-finite
/// values become `null`.
pub fn write_json(out: &mut impl Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}
