//! Structured pass/fail reports.

use serde::{Deserialize, Serialize};

/// One verified quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Non-finite values are written as `null`.
    #[serde(with = "nullable")]
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

mod nullable {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record `value ≤ tolerance`; non-finite values fail.
    pub fn check(&mut self, name: impl Into<String>, value: f64, tolerance: f64) -> bool {
        self.check_with(name, value, tolerance, None)
    }

    pub fn check_with(&mut self, name: impl Into<String>, value: f64, tolerance: f64, detail: Option<String>) -> bool {
        let passed = value.is_finite() && value <= tolerance;
        self.checks.push(Check {
            name: name.into(),
            value,
            tolerance,
            passed,
            detail,
        });
        passed
    }

    /// Record `lo ≤ value ≤ hi` with `tolerance` reported as `hi`.
    pub fn check_range(&mut self, name: impl Into<String>, value: f64, lo: f64, hi: f64) -> bool {
        let passed = value.is_finite() && value >= lo && value <= hi;
        self.checks.push(Check {
            name: name.into(),
            value,
            tolerance: hi,
            passed,
            detail: Some(format!("range [{lo}, {hi}]")),
        });
        passed
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} value={:.6e} tol={:.3e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.tolerance
            ));
            if let Some(d) = &c.detail {
                out.push_str(&format!(" ({d})"));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_fail_and_round_trip() {
        let mut r = VerifyReport::new();
        assert!(r.check("a", 1e-12, 1e-10));
        assert!(!r.check("b", 1e-3, 1e-30));
        assert!(!r.check("c", f64::NAN, 1.0));
        assert!(r.check_range("d", 4.0, 3.5, 4.5));
        assert!(!r.all_passed());
        assert_eq!(r.failures().count(), 2);
        let back = VerifyReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back.checks.len(), 4);
        assert!(r.render_text().lines().next().unwrap().starts_with("PASS a"));
    }
}
