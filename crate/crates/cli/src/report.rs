use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const REPORT_FORMAT: &str = "procover-report/1";

/// Exit codes.
pub const OK: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const INPUT_ERROR: u8 = 2;
pub const RESOURCE_GUARD: u8 = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub version: String,
    pub command: String,
    pub verdict: String,
    pub details: Map<String, Value>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, verdict: &str) -> Self {
        Report {
            format: REPORT_FORMAT.into(),
            version: procover::VERSION.into(),
            command: command.into(),
            verdict: verdict.into(),
            details: Map::new(),
            warnings: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.set(key, value);
        self
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.details.insert(key.to_owned(), v);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Line-oriented rendering: nested objects flatten to dotted keys and
    /// array elements to indexed keys.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\nverdict: {}\n", "procover", self.version, self.command, self.verdict);
        for (k, v) in &self.details {
            flatten(k, v, &mut out);
        }
        if !self.warnings.is_empty() {
            out.push_str("warnings:\n");
            for w in &self.warnings {
                out.push_str(&format!("  - {w}\n"));
            }
        }
        out
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn flatten(key: &str, v: &Value, out: &mut String) {
    match v {
        Value::String(s) => out.push_str(&format!("{key}: {s}\n")),
        Value::Object(m) if !m.is_empty() => {
            for (k, inner) in m {
                flatten(&format!("{key}.{k}"), inner, out);
            }
        }
        Value::Array(items) if !items.iter().all(is_scalar) => {
            for (i, inner) in items.iter().enumerate() {
                flatten(&format!("{key}[{i}]"), inner, out);
            }
        }
        other => out.push_str(&format!("{key}: {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn no_warnings_section_when_empty() {
        let r = Report::new("pi1", "ok").with("rank", 2);
        let text = r.to_text();
        assert!(text.contains("rank: 2\n"));
        assert!(!text.contains("warnings"));
    }

    #[test]
    fn nested_details_flatten() {
        let mut r = Report::new("lift", "obstructed").with(
            "witness",
            json!({"loop": "x0+ x1-", "ends": [{"at": "v0.1"}], "sizes": [1, 2]}),
        );
        r.warn("careful");
        let text = r.to_text();
        assert!(text.contains("witness.loop: x0+ x1-\n"));
        assert!(text.contains("witness.ends[0].at: v0.1\n"));
        assert!(text.contains("witness.sizes: [1,2]\n"));
        assert!(text.ends_with("warnings:\n  - careful\n"));
    }

    #[test]
    fn structured_round_trip() {
        let r = Report::new("deck", "deck group")
            .with("order", 3)
            .with("table", vec![vec![0, 1], vec![1, 0]]);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
