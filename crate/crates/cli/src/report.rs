//! Report envelope and its JSON encoding.
//!
//! Field order is fixed by the envelope struct; nested objects built as
//! `serde_json::Value` have sorted keys. Floats are written with 17
//! significant digits and non-finite floats as `null`.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

pub const TOOL_NAME: &str = "liedeform";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One pass/fail entry of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn exact(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
            value: None,
            tolerance: None,
            detail: None,
        }
    }

    /// Passes when `value <= tolerance`; NaN fails.
    pub fn bounded(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: value <= tolerance,
            value: Some(value),
            tolerance: Some(tolerance),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub findings: Vec<Check>,
    pub notes: Vec<String>,
    pub result: Value,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'a str,
    version: &'a str,
    command: &'a str,
    seed: u64,
    passed: bool,
    tolerances: &'a BTreeMap<String, f64>,
    findings: &'a [Check],
    violations: Vec<&'a str>,
    notes: &'a [String],
    result: &'a Value,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Report {
            command: command.into(),
            seed,
            result: Value::Null,
            ..Default::default()
        }
    }

    pub fn tolerance(&mut self, name: &str, value: f64) {
        self.tolerances.insert(name.to_string(), value);
    }

    pub fn check(&mut self, c: Check) {
        self.findings.push(c);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn passed(&self) -> bool {
        self.findings.iter().all(|c| c.passed)
    }

    pub fn violations(&self) -> Vec<&str> {
        self.findings
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Serializes a report deterministically.
pub fn emit_report(report: &Report) -> String {
    let env = Envelope {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        command: &report.command,
        seed: report.seed,
        passed: report.passed(),
        tolerances: &report.tolerances,
        findings: &report.findings,
        violations: report.violations(),
        notes: &report.notes,
        result: &report.result,
    };
    let mut out = to_json_string(&env);
    out.push('\n');
    out
}

/// JSON text with the report float formatting.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17::default());
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Converts to a `Value`, keeping the caller's error surface small.
pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

#[derive(Default)]
struct Sig17 {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json_string(&json!({"a": 0.1, "b": [1.0, -2.5e-300], "c": 3}));
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("-2.5000000000000000e-300"));
        assert!(s.contains("\"c\": 3"));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["a"].as_f64(), Some(0.1));
    }

    #[test]
    fn non_finite_is_null() {
        let s = to_json_string(&vec![f64::NAN, f64::INFINITY]);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v, json!([null, null]));
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new("none", 1);
        let v: Value = serde_json::from_str(&emit_report(&r)).unwrap();
        assert_eq!(v["findings"], json!([]));
        assert_eq!(v["passed"], json!(true));
        assert_eq!(v["tool"], json!(TOOL_NAME));
        assert_eq!(v["seed"], json!(1));
    }

    #[test]
    fn failing_checks_are_listed() {
        let mut r = Report::new("x", 0);
        r.check(Check::bounded("residual", 1.0, 0.5));
        r.check(Check::bounded("nan", f64::NAN, 0.5));
        r.check(Check::exact("fine", true));
        assert_eq!(r.violations(), vec!["residual", "nan"]);
        assert_eq!(r.exit_code(), 1);
    }
}
