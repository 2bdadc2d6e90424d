use std::io::Write;

use arealab_core::numerics::FitResult;
use serde::{Serialize, Serializer};

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal that round-trips the 12-digit rounding of `x`.
pub fn fmt12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(x);
    let a = r.abs();
    if r != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn ser12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round12(*x))
    } else {
        s.serialize_str(&fmt12(*x))
    }
}

fn ser12_pair<S: Serializer>(x: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
    [round12(x.0), round12(x.1)].serialize(s)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt12(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(&self.columns)?;
        for r in &self.rows {
            out.write_record(r.iter().map(Cell::render))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    #[serde(serialize_with = "ser12")]
    pub slope: f64,
    #[serde(serialize_with = "ser12")]
    pub intercept: f64,
    #[serde(serialize_with = "ser12")]
    pub residual: f64,
    #[serde(serialize_with = "ser12_pair")]
    pub window: (f64, f64),
    pub points: usize,
}

impl From<&FitResult> for FitSummary {
    fn from(f: &FitResult) -> Self {
        Self { slope: f.slope, intercept: f.intercept, residual: f.residual, window: f.window, points: f.points }
    }
}

/// One pass/fail check tied to an acceptance criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    /// `C<criterion>.<check>`.
    pub id: String,
    pub criterion: u8,
    pub description: String,
    #[serde(serialize_with = "ser12")]
    pub value: f64,
    pub tolerance: String,
    pub pass: bool,
}

impl Verdict {
    pub fn new(
        criterion: u8,
        check: &str,
        description: impl Into<String>,
        value: f64,
        tolerance: impl Into<String>,
        pass: bool,
    ) -> Self {
        Self {
            id: format!("C{criterion}.{check}"),
            criterion,
            description: description.into(),
            value,
            tolerance: tolerance.into(),
            pass: pass && !value.is_nan(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub kind: String,
    pub csv: String,
    pub rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub provenance: Provenance,
}

impl ScalingReport {
    pub fn all_pass(&self) -> bool {
        self.error.is_none() && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digit_format() {
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(2.0), "2");
        assert_eq!(fmt12(-0.25), "-0.25");
        assert_eq!(fmt12(1.234567890123456e-9), "1.23456789012e-9");
        assert_eq!(fmt12(0.1 + 0.2), "0.3");
        assert_eq!(fmt12(f64::NAN), "NaN");
        assert_eq!(fmt12(123456.0), "123456");
        // the printed value parses back to the rounded value
        let x = std::f64::consts::PI * 1e7;
        assert_eq!(fmt12(x).parse::<f64>().unwrap(), round12(x));
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["n", "value", "note"]);
        t.push(vec![Cell::from(16usize), Cell::from(0.5), Cell::from("a,b")]);
        assert_eq!(t.to_csv_string(), "n,value,note\n16,0.5,\"a,b\"\n");
    }

    #[test]
    fn nan_verdict_fails() {
        assert!(!Verdict::new(3, "slope", "x", f64::NAN, "any", true).pass);
    }
}
