use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::fusion::Witness;
use crate::linalg::{CMatrix, CVector, C64};
use crate::subspace::Subspace;
use crate::tolerance::Tolerances;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

impl Check {
    pub fn flag(name: &str, passed: bool) -> Self {
        Self {
            name: name.into(),
            passed,
            value: None,
            threshold: None,
        }
    }

    /// Passes when `value <= threshold`.
    pub fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= threshold,
            value: Some(value),
            threshold: Some(threshold),
        }
    }
}

/// An outcome recorded without affecting the exit status.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub name: String,
    pub status: String,
    pub epistemic: String,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub command: String,
    pub target: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub findings: Vec<Finding>,
    pub data: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TaskReport {
    pub fn new(command: &str, target: String) -> Self {
        Self {
            command: command.into(),
            target,
            passed: true,
            checks: Vec::new(),
            findings: Vec::new(),
            data: Value::Object(Default::default()),
            error: None,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn finding(&mut self, name: &str, status: &str, epistemic: &str, detail: Value) {
        self.findings.push(Finding {
            name: name.into(),
            status: status.into(),
            epistemic: epistemic.into(),
            detail,
        });
    }

    pub fn set(&mut self, key: &str, value: Value) {
        if let Value::Object(m) = &mut self.data {
            m.insert(key.into(), value);
        }
    }

    pub fn fail(&mut self, err: impl std::fmt::Display) {
        self.passed = false;
        self.error = Some(err.to_string());
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub tasks: Vec<TaskReport>,
    pub passed: bool,
}

impl Report {
    /// One line per task plus a total.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for t in &self.tasks {
            let status = if t.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {} {}", t.command, t.target));
            let failed: Vec<&str> = t.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            if !failed.is_empty() {
                out.push_str(&format!(" (failed: {})", failed.join(", ")));
            }
            if let Some(e) = &t.error {
                out.push_str(&format!(" (error: {e})"));
            }
            out.push('\n');
        }
        let n_pass = self.tasks.iter().filter(|t| t.passed).count();
        out.push_str(&format!(
            "{} tasks, {} passed, {} failed\n",
            self.tasks.len(),
            n_pass,
            self.tasks.len() - n_pass
        ));
        out
    }

    /// Summary followed by every check and finding.
    pub fn text(&self) -> String {
        let mut out = format!(
            "{} {} command={} seed={} samples={}\n",
            self.tool, self.version, self.command, self.seed, self.samples
        );
        for t in &self.tasks {
            out.push_str(&format!(
                "[{}] {} {}\n",
                if t.passed { "PASS" } else { "FAIL" },
                t.command,
                t.target
            ));
            for c in &t.checks {
                let val = match (c.value, c.threshold) {
                    (Some(v), Some(th)) => format!(" {v:.3e} <= {th:.1e}"),
                    _ => String::new(),
                };
                out.push_str(&format!(
                    "  {} {}{val}\n",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name
                ));
            }
            for f in &t.findings {
                out.push_str(&format!("  finding {}: {} ({})\n", f.name, f.status, f.epistemic));
            }
            if let Some(e) = &t.error {
                out.push_str(&format!("  error: {e}\n"));
            }
        }
        out.push_str(&format!("overall: {}\n", if self.passed { "PASS" } else { "FAIL" }));
        out
    }
}

fn entry(z: C64) -> Value {
    // Adding zero folds -0.0 into 0.0.
    json!([z.re + 0.0, z.im + 0.0])
}

/// Raw complex vector as `[[re, im], ...]`.
pub fn vector_json(v: &CVector) -> Value {
    Value::Array(v.iter().map(|&z| entry(z)).collect())
}

/// Unit Euclidean norm with the largest entry rotated onto the positive
/// real axis.
pub fn witness_json(v: &CVector) -> Value {
    let norm = v.norm();
    if norm == 0.0 {
        return vector_json(v);
    }
    // First entry of (nearly) maximal modulus, so ties resolve stably.
    let top = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let k = v.iter().position(|z| z.norm() >= top * (1.0 - 1e-12)).unwrap_or(0);
    let phase = v[k] / v[k].norm();
    let u = v.map(|z| z / phase / norm);
    vector_json(&u)
}

pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| entry(m[(r, c)])).collect()))
            .collect(),
    )
}

/// Orthonormal basis columns, each phase-normalised.
pub fn subspace_json(w: &Subspace) -> Value {
    Value::Array(
        w.orthonormal_basis()
            .column_iter()
            .map(|c| witness_json(&c.into_owned()))
            .collect(),
    )
}

pub fn certificate_witness_json(w: &Witness) -> Value {
    match w {
        Witness::DimensionDeficit { sign, dim, required } => {
            json!({"kind": "dimension-deficit", "sign": sign, "dim": dim, "required": required})
        }
        Witness::Vector {
            sign,
            vector,
            form_value,
        } => {
            json!({"kind": "wrong-sign-vector", "sign": sign, "vector": witness_json(vector), "form_value": form_value})
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vector;

    #[test]
    fn witness_is_unit_and_phase_fixed() {
        let v = real_vector(&[-1.0, -1.0, 0.0, 0.0]);
        let w = witness_json(&v);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let got: Vec<[f64; 2]> = serde_json::from_value(w).unwrap();
        for (g, e) in got.iter().zip([[s, 0.0], [s, 0.0], [0.0, 0.0], [0.0, 0.0]]) {
            assert!((g[0] - e[0]).abs() < 1e-15 && g[1] == e[1]);
        }
    }
}
