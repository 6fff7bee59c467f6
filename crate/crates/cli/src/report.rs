//! Deterministic reports: a text table or a single JSON object with the
//! fields `command`, `inputs`, `verdicts` and `objects`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use rpgroup::{Carrier, Cone, Element, Morphism, RPGroup, Tri, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictEntry {
    pub name: String,
    pub value: String,
    /// Search bound behind an `unknown` value, as a decimal string.
    pub bound: Option<String>,
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub verdicts: Vec<VerdictEntry>,
    pub objects: BTreeMap<String, Value>,
    /// Set when the command's own checks failed (exit status 1).
    #[serde(skip)]
    pub failed: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ..Report::default()
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn verdict(&mut self, name: impl Into<String>, v: &Verdict) -> &mut Self {
        self.verdicts.push(VerdictEntry {
            name: name.into(),
            value: v.value.as_str().to_string(),
            bound: v.value.bound().map(|b| b.to_string()),
            witness: v.witness.iter().map(ToString::to_string).collect(),
            note: v.note.clone(),
        });
        self
    }

    pub fn tri(&mut self, name: impl Into<String>, t: Tri) -> &mut Self {
        self.verdict(name, &Verdict::new(t))
    }

    pub fn object(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        self.objects.insert(key.into(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&VerdictEntry> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k} = {v}");
        }
        let width = self.verdicts.iter().map(|v| v.name.len()).max().unwrap_or(0);
        for v in &self.verdicts {
            let mut line = format!("{:width$}  {}", v.name, v.value);
            if let Some(b) = &v.bound {
                let _ = write!(line, " (bound {b})");
            }
            if !v.witness.is_empty() {
                let _ = write!(line, "  witness: {}", v.witness.join(", "));
            }
            if let Some(n) = &v.note {
                let _ = write!(line, "  [{n}]");
            }
            let _ = writeln!(out, "{line}");
        }
        for (k, v) in &self.objects {
            let _ = writeln!(out, "{k}: {}", serde_json::to_string(v).expect("json"));
        }
        out
    }
}

fn element_label(c: &Carrier, e: &Element) -> String {
    match (c, e) {
        (Carrier::Finite(t), Element::Index(i)) => t.label(*i).to_string(),
        _ => e.to_string(),
    }
}

pub fn group_json(g: &RPGroup) -> Value {
    let c = g.carrier();
    let mut v = json!({
        "carrier": c.to_string(),
        "cone": g.cone().to_string(),
    });
    if let Some(n) = c.order() {
        v["order"] = json!(n.to_string());
    }
    if let Some(els) = g.cone().elements(c, 256) {
        v["cone_elements"] = json!(els.iter().map(|e| element_label(c, e)).collect::<Vec<_>>());
    }
    v
}

pub fn morphism_json(f: &Morphism) -> Value {
    json!({
        "source": group_json(f.source()),
        "target": group_json(f.target()),
        "map": f.map().describe(),
        "monotone": f.monotone().value.as_str(),
    })
}

pub fn cone_json(c: &Carrier, cone: &Cone) -> Value {
    json!({ "carrier": c.to_string(), "cone": cone.to_string() })
}
