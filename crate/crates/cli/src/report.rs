use std::fmt::Write as _;
use std::io::Write as _;

use bdspace::io::{fmt_complex, fmt_g};
use bdspace::exterior::TRIPLES;
use bdspace::{CIExpansion, Certificate, Mat6, Trivector, C64};
use serde_json::{json, Value};

/// Human section followed by the machine section.
pub struct Report {
    text: String,
    json: serde_json::Map<String, Value>,
}

impl Report {
    pub fn new() -> Self {
        Report { text: String::new(), json: serde_json::Map::new() }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn field(&mut self, label: &str, value: impl AsRef<str>) {
        let _ = writeln!(self.text, "{label:<23} {}", value.as_ref());
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.json.insert(key.to_string(), value);
    }

    pub fn print(self) {
        let body = serde_json::to_string_pretty(&Value::Object(self.json)).expect("json values serialize");
        emit(&format!("{}json:\n{body}\n", self.text));
    }
}

/// Writes to stdout, ignoring a closed pipe.
pub fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

pub fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_g(x)).collect::<Vec<_>>().join("  ")
}

pub fn complex(z: C64) -> Value {
    json!({"re": z.re, "im": z.im})
}

pub fn matrix(m: &Mat6) -> Value {
    Value::Array((0..6).map(|i| Value::Array((0..6).map(|j| complex(m[(i, j)])).collect())).collect())
}

pub fn expansion(e: &CIExpansion, t: &Trivector) -> Value {
    let terms: Vec<Value> = e
        .terms
        .iter()
        .map(|term| {
            json!({
                "label": term.label,
                "indices": term.config.map(|i| i + 1),
                "re": term.coeff.re,
                "im": term.coeff.im,
            })
        })
        .collect();
    json!({
        "shape": format!("{:?}", e.shape),
        "labels": e.basis.labels(),
        "basis": matrix(e.basis.matrix()),
        "terms": terms,
        "residual": e.residual(t),
    })
}

pub fn certificate(c: &Certificate) -> Value {
    let residuals: serde_json::Map<String, Value> = c.residuals.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json!({"residuals": residuals, "flags": c.flags})
}

pub fn certificate_lines(r: &mut Report, c: &Certificate) {
    for (name, v) in &c.residuals {
        r.field(&format!("  {name}"), fmt_g(*v));
    }
    for f in &c.flags {
        r.field("  flag", f);
    }
}

/// Nonzero amplitudes, one per line, with 1-based orbital indices.
pub fn amplitude_lines(r: &mut Report, t: &Trivector) {
    for (tr, a) in TRIPLES.iter().zip(t.amps()) {
        if *a != C64::new(0.0, 0.0) {
            r.line(format!("  {} {} {}   {}", tr[0] + 1, tr[1] + 1, tr[2] + 1, fmt_complex(*a)));
        }
    }
}
