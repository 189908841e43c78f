//! Structured reports. Every number is written as an exact string.

use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use whitehead_core::dgl::HomologyClass;
use whitehead_core::qlinalg::Scalar;
use whitehead_core::transfer::{TreeSigns, CONVENTION, CONVENTION_VERSION};

/// A number as a JSON string.
pub fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn scalar(x: &Scalar) -> Value {
    num(x)
}

pub fn class(h: &HomologyClass) -> Value {
    json!({
        "degree": num(h.degree),
        "coords": h.coords.iter().map(scalar).collect::<Vec<_>>(),
    })
}

pub fn classes(hs: &[HomologyClass]) -> Value {
    Value::Array(hs.iter().map(class).collect())
}

fn convention() -> Value {
    let signs = match CONVENTION.signs {
        TreeSigns::Suspended => "suspended",
        TreeSigns::Passage => "passage",
        TreeSigns::Plain => "plain",
    };
    json!({
        "version": CONVENTION_VERSION,
        "tree_signs": signs,
        "negate_homotopy": CONVENTION.negate_homotopy,
    })
}

/// Hex SHA-256 over the inputs, each prefixed by its length.
pub fn digest(inputs: &[(String, String)]) -> String {
    let mut h = Sha256::new();
    for (name, text) in inputs {
        h.update(format!("{}:{}:{}\n", name, name.len(), text.len()));
        h.update(text.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub cap: Option<u32>,
    pub results: Map<String, Value>,
    pub verdicts: Vec<(String, bool)>,
    pub lines: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            seed: None,
            cap: None,
            results: Map::new(),
            verdicts: Vec::new(),
            lines: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn input(&mut self, name: impl Into<String>, text: impl Into<String>) {
        self.inputs.push((name.into(), text.into()));
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn verdict(&mut self, name: &str, ok: bool) {
        self.verdicts.push((name.to_string(), ok));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|(_, ok)| *ok)
    }

    pub fn to_json(&self) -> Value {
        let verdicts: Map<String, Value> = self
            .verdicts
            .iter()
            .map(|(k, v)| (k.clone(), Value::Bool(*v)))
            .collect();
        json!({
            "command": self.command,
            "inputs": self.inputs.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            "inputs_digest": digest(&self.inputs),
            "seed": self.seed.map(num),
            "degree_cap": self.cap.map(num),
            "convention": convention(),
            "results": Value::Object(self.results.clone()),
            "verdicts": verdicts,
            "passed": self.passed(),
            "timings": { "elapsed_ms": num(self.elapsed.as_millis()) },
        })
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for (name, ok) in &self.verdicts {
            out.push_str(&format!("{} {name}\n", if *ok { "PASS" } else { "FAIL" }));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has_number(v: &Value) -> bool {
        match v {
            Value::Number(_) => true,
            Value::Array(a) => a.iter().any(has_number),
            Value::Object(m) => m.values().any(has_number),
            _ => false,
        }
    }

    #[test]
    fn report_has_no_json_numbers() {
        let mut r = Report::new(vec!["x".into()]);
        r.seed = Some(3);
        r.cap = Some(11);
        r.set("class", class(&HomologyClass::unit(2, 3, 1)));
        r.set("half", scalar(&Scalar::new(1, 2).unwrap()));
        r.verdict("ok", true);
        let v = r.to_json();
        assert!(!has_number(&v));
        assert_eq!(v["results"]["half"], "1/2");
        assert_eq!(v["seed"], "3");
    }

    #[test]
    fn digest_depends_on_names_and_text() {
        let a = digest(&[("a".into(), "x".into())]);
        assert_eq!(a.len(), 64);
        assert_ne!(a, digest(&[("b".into(), "x".into())]));
        assert_ne!(a, digest(&[("a".into(), "y".into())]));
    }
}
