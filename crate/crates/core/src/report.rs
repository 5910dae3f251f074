//! The shared verification-report data contract and its serializers.
//!
//! Every check in the lab produces a `VerificationReport`; the emitters
//! guarantee a stable field order (BTreeMap keys, fixed struct order),
//! floats printed with 17 significant digits, and rationals as "num/den"
//! strings, so that equal runs emit byte-identical artifacts.

use crate::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One verified (or refuted) check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    /// All inputs, including the seed.
    pub parameters: BTreeMap<String, String>,
    /// true iff every asserted inequality held.
    pub pass: bool,
    /// Measured constants (λ̂, ĉ, β, α, δ̂, normalization factors, …).
    pub constants: BTreeMap<String, String>,
    /// Worst-case inputs with their measured values; nonempty whenever a
    /// max/min constant is reported.
    pub witnesses: Vec<BTreeMap<String, String>>,
    /// Wall-clock milliseconds; excluded from serialized artifacts so
    /// equal configurations stay byte-identical.
    #[serde(skip)]
    pub runtime_ms: u128,
}

impl VerificationReport {
    pub fn new(check_name: &str) -> Self {
        VerificationReport {
            check_name: check_name.to_string(),
            parameters: BTreeMap::new(),
            pass: true,
            constants: BTreeMap::new(),
            witnesses: Vec::new(),
            runtime_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn constant_f64(&mut self, key: &str, value: f64) -> &mut Self {
        self.constants.insert(key.to_string(), fmt_f64(value));
        self
    }

    pub fn constant_int(&mut self, key: &str, value: i64) -> &mut Self {
        self.constants.insert(key.to_string(), value.to_string());
        self
    }

    pub fn constant_rational(&mut self, key: &str, num: i64, den: i64) -> &mut Self {
        self.constants.insert(key.to_string(), fmt_rational(num, den));
        self
    }

    pub fn require(&mut self, condition: bool, label: &str) -> &mut Self {
        if !condition {
            self.pass = false;
            let mut w = BTreeMap::new();
            w.insert("failed_assertion".to_string(), label.to_string());
            self.witnesses.push(w);
        }
        self
    }
}

/// 17 significant digits, locale-free, round-trip safe.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn fmt_rational(num: i64, den: i64) -> String {
    format!("{num}/{den}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format, Error> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::ConfigError(format!("unknown format `{other}`"))),
        }
    }
}

/// Serialize reports with a stable field order.
pub fn emit(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("report serialization"),
        Format::Csv => emit_csv(reports),
        Format::Text => emit_text(reports),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per (check, parameter/constant/witness entry).
fn emit_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("check_name,pass,kind,name,value\n");
    for r in reports {
        for (k, v) in &r.parameters {
            out.push_str(&format!(
                "{},{},parameter,{},{}\n",
                csv_escape(&r.check_name),
                r.pass,
                csv_escape(k),
                csv_escape(v)
            ));
        }
        for (k, v) in &r.constants {
            out.push_str(&format!(
                "{},{},constant,{},{}\n",
                csv_escape(&r.check_name),
                r.pass,
                csv_escape(k),
                csv_escape(v)
            ));
        }
        for (i, w) in r.witnesses.iter().enumerate() {
            for (k, v) in w {
                out.push_str(&format!(
                    "{},{},witness_{i},{},{}\n",
                    csv_escape(&r.check_name),
                    r.pass,
                    csv_escape(k),
                    csv_escape(v)
                ));
            }
        }
    }
    out
}

fn emit_text(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!(
            "[{}] {}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.check_name
        ));
        for (k, v) in &r.parameters {
            out.push_str(&format!("  param    {k} = {v}\n"));
        }
        for (k, v) in &r.constants {
            out.push_str(&format!("  constant {k} = {v}\n"));
        }
        for (i, w) in r.witnesses.iter().enumerate() {
            for (k, v) in w {
                out.push_str(&format!("  witness[{i}] {k} = {v}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_list_is_empty_json_array() {
        assert_eq!(emit(&[], Format::Json), "[]");
    }

    #[test]
    fn json_round_trips() {
        let mut r = VerificationReport::new("demo");
        r.param("seed", 7);
        r.constant_f64("lambda_hat", 1.632_993_161_855_452);
        r.constant_rational("beta_sq", 3, 4);
        let mut w = BTreeMap::new();
        w.insert("d".into(), fmt_f64(12.5));
        r.witnesses.push(w);
        let s = emit(std::slice::from_ref(&r), Format::Json);
        let parsed: Vec<VerificationReport> = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed, vec![r]);
    }

    #[test]
    fn float_formatting_has_17_digits() {
        let s = fmt_f64(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn csv_one_row_per_item() {
        let mut r = VerificationReport::new("demo");
        r.param("radius", 3);
        r.constant_int("count", 14);
        let s = emit(std::slice::from_ref(&r), Format::Csv);
        let lines: Vec<&str> = s.trim_end().lines().collect();
        assert_eq!(lines.len(), 3); // header + 1 parameter + 1 constant
        assert!(lines[1].starts_with("demo,true,parameter,radius,3"));
    }

    #[test]
    fn runtime_excluded_from_serialization() {
        let mut a = VerificationReport::new("demo");
        let mut b = VerificationReport::new("demo");
        a.runtime_ms = 5;
        b.runtime_ms = 500;
        assert_eq!(
            emit(std::slice::from_ref(&a), Format::Json),
            emit(std::slice::from_ref(&b), Format::Json)
        );
    }

    #[test]
    fn bad_format_is_config_error() {
        assert!(matches!(Format::parse("yaml"), Err(Error::ConfigError(_))));
    }
}
