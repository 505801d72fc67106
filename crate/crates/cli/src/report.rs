use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const NUMBERS: &str = "all numbers are exact rationals written \"p/q\"";
pub const COORDINATES: &str = "named forms index coordinates -n..-1,(0),1..n; other spaces use positions 0..n-1";

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub check: String,
    pub text: String,
}

/// Everything a command emits. Field order is the output order; `results`
/// is a `serde_json` map and so prints its keys sorted.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub conventions: Vec<String>,
    pub inputs_digest: String,
    pub verdict: &'static str,
    pub checks: Vec<CheckRow>,
    pub results: Value,
    pub witnesses: Vec<Witness>,
}

#[derive(Default)]
pub struct Builder {
    conventions: Vec<String>,
    checks: Vec<CheckRow>,
    witnesses: Vec<Witness>,
    results: serde_json::Map<String, Value>,
}

impl Builder {
    pub fn new() -> Self {
        Builder {
            conventions: vec![NUMBERS.into(), COORDINATES.into()],
            ..Default::default()
        }
    }

    pub fn convention(&mut self, c: impl Into<String>) {
        let c = c.into();
        if !self.conventions.contains(&c) {
            self.conventions.push(c);
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>, witness: Option<String>) {
        let name = name.into();
        if let Some(text) = witness {
            self.witnesses.push(Witness { check: name.clone(), text });
        }
        self.checks.push(CheckRow { name, passed, detail: detail.into() });
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        let v = serde_json::to_value(v).expect("report values serialize");
        self.results.insert(key.into(), v);
    }

    pub fn finish(self, command: &str, inputs_digest: String) -> Report {
        let passed = self.checks.iter().all(|c| c.passed);
        Report {
            command: command.into(),
            conventions: self.conventions,
            inputs_digest,
            verdict: if passed { "pass" } else { "fail" },
            checks: self.checks,
            results: Value::Object(self.results),
            witnesses: self.witnesses,
        }
    }
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# flagstab {}\n", self.command);
        let _ = writeln!(out, "Verdict: **{}**\n", self.verdict);
        out.push_str("## Conventions\n\n");
        for c in &self.conventions {
            let _ = writeln!(out, "- {c}");
        }
        let _ = writeln!(out, "\n## Inputs digest\n\n`{}`\n", self.inputs_digest);
        out.push_str("## Checks\n\n");
        if self.checks.is_empty() {
            out.push_str("(no checks)\n");
        } else {
            out.push_str("| check | result | detail |\n|---|---|---|\n");
            for c in &self.checks {
                let r = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "| {} | {r} | {} |", cell(&c.name), cell(&c.detail));
            }
        }
        out.push_str("\n## Results\n\n");
        if let Some(Value::String(t)) = self.results.get("twin") {
            let _ = writeln!(out, "twin: {t}\n");
        }
        let body = serde_json::to_string_pretty(&self.results).expect("reports serialize");
        let _ = writeln!(out, "```json\n{body}\n```\n");
        out.push_str("## Witnesses\n\n");
        if self.witnesses.is_empty() {
            out.push_str("(none)\n");
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "### {}\n\n```\n{}\n```\n", w.check, w.text);
        }
        out
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_and_layout() {
        let mut b = Builder::new();
        b.check("a", true, "ok", None);
        b.check("b|c", false, "bad", Some("x = 1".into()));
        b.result("z", 1);
        b.result("a", "twin");
        let r = b.finish("demo", "sha256:00".into());
        assert!(!r.passed());
        let md = r.to_markdown();
        let order = ["## Conventions", "## Inputs digest", "## Checks", "## Results", "## Witnesses"];
        let pos: Vec<usize> = order.iter().map(|h| md.find(h).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(md.contains("| b\\|c | FAIL | bad |"));
        let j = r.to_json();
        assert!(j.find("\"a\": \"twin\"").unwrap() < j.find("\"z\": 1").unwrap());
    }
}
