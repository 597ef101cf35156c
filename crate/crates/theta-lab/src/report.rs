//! Machine-readable verification reports.
//!
//! Reports are deterministic: struct fields serialize in declaration order,
//! floats print through the shortest-roundtrip formatter, and suites are
//! assembled in name order, so two runs with the same configuration produce
//! byte-identical JSON apart from `runtime_seconds`.

use num_complex::Complex64;
use serde::Serialize;
use theta_core::cocycle::{ExpAffine, ExpAffineCocycle, Gen};
use theta_core::forms::ConstTwoForm;
use theta_core::l2::GramField;

use crate::config::RunConfig;

/// A scalar observation: real or complex as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ItemValue {
    Real(f64),
    Complex([f64; 2]),
}

impl From<f64> for ItemValue {
    fn from(v: f64) -> Self {
        ItemValue::Real(v)
    }
}

impl From<Complex64> for ItemValue {
    fn from(v: Complex64) -> Self {
        ItemValue::Complex([v.re, v.im])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceKind {
    Absolute,
    Relative,
}

/// One verified statement.
#[derive(Debug, Clone, Serialize)]
pub struct ReportItem {
    pub name: String,
    pub paper_anchor: String,
    pub expected: ItemValue,
    pub observed: ItemValue,
    pub tolerance: f64,
    pub tolerance_kind: ToleranceKind,
    pub pass: bool,
}

fn value_dev(expected: ItemValue, observed: ItemValue) -> f64 {
    let to_c = |v: ItemValue| match v {
        ItemValue::Real(x) => Complex64::new(x, 0.0),
        ItemValue::Complex([re, im]) => Complex64::new(re, im),
    };
    (to_c(expected) - to_c(observed)).norm()
}

impl ReportItem {
    /// `pass ⇔ |observed − expected| ≤ tolerance`.
    pub fn absolute(
        name: impl Into<String>,
        anchor: impl Into<String>,
        expected: impl Into<ItemValue>,
        observed: impl Into<ItemValue>,
        tolerance: f64,
    ) -> Self {
        let expected = expected.into();
        let observed = observed.into();
        let pass = value_dev(expected, observed) <= tolerance;
        ReportItem {
            name: name.into(),
            paper_anchor: anchor.into(),
            expected,
            observed,
            tolerance,
            tolerance_kind: ToleranceKind::Absolute,
            pass,
        }
    }

    /// `pass ⇔ |observed − expected| ≤ tolerance·|expected|`.
    pub fn relative(
        name: impl Into<String>,
        anchor: impl Into<String>,
        expected: impl Into<ItemValue>,
        observed: impl Into<ItemValue>,
        tolerance: f64,
    ) -> Self {
        let expected = expected.into();
        let observed = observed.into();
        let scale = match expected {
            ItemValue::Real(x) => x.abs(),
            ItemValue::Complex([re, im]) => Complex64::new(re, im).norm(),
        };
        let pass = value_dev(expected, observed) <= tolerance * scale;
        ReportItem {
            name: name.into(),
            paper_anchor: anchor.into(),
            expected,
            observed,
            tolerance,
            tolerance_kind: ToleranceKind::Relative,
            pass,
        }
    }
}

/// All items of one suite, plus optional JSON artifacts (serialized
/// cocycles, forms, Gram fields).
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub pass: bool,
    pub items: Vec<ReportItem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifacts: Option<serde_json::Value>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>, items: Vec<ReportItem>) -> Self {
        let pass = items.iter().all(|i| i.pass);
        SuiteReport {
            name: name.into(),
            pass,
            items,
            artifacts: None,
        }
    }

    pub fn with_artifacts(mut self, artifacts: serde_json::Value) -> Self {
        self.artifacts = Some(artifacts);
        self
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
    pub runtime_seconds: f64,
}

impl VerificationReport {
    pub fn new(config: RunConfig, mut suites: Vec<SuiteReport>, runtime_seconds: f64) -> Self {
        suites.sort_by(|a, b| a.name.cmp(&b.name));
        let total: usize = suites.iter().map(|s| s.items.len()).sum();
        let passed: usize = suites
            .iter()
            .map(|s| s.items.iter().filter(|i| i.pass).count())
            .sum();
        VerificationReport {
            config,
            suites,
            summary: Summary {
                total,
                passed,
                failed: total - passed,
            },
            runtime_seconds,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

// ---------------------------------------------------------------------------
// JSON forms of the core data types
// ---------------------------------------------------------------------------

fn complex_json(v: Complex64) -> serde_json::Value {
    serde_json::json!([v.re, v.im])
}

fn exp_affine_json(e: &ExpAffine) -> serde_json::Value {
    serde_json::json!({
        "a_z": complex_json(e.a_z),
        "a_mu": complex_json(e.a_mu),
        "c": complex_json(e.c),
    })
}

/// `{e_10, e_20, e_01, e_02}` with `{a_z, a_mu, c}` as `[re, im]` pairs.
pub fn cocycle_json(c: &ExpAffineCocycle) -> serde_json::Value {
    serde_json::json!({
        "e_10": exp_affine_json(c.multiplier(Gen::Z1)),
        "e_20": exp_affine_json(c.multiplier(Gen::Z2)),
        "e_01": exp_affine_json(c.multiplier(Gen::Mu1)),
        "e_02": exp_affine_json(c.multiplier(Gen::Mu2)),
    })
}

/// `{coords, coeffs: [[re, im], …]}` row-major.
pub fn two_form_json(f: &ConstTwoForm) -> serde_json::Value {
    let coords: Vec<String> = f.coords().iter().map(|c| c.to_string()).collect();
    let n = coords.len();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(complex_json(f.coeffs()[(i, j)]));
        }
        rows.push(serde_json::Value::Array(row));
    }
    serde_json::json!({ "coords": coords, "coeffs": rows })
}

/// One record per μ sample with the row-major Gram entries as re/im pairs.
pub fn gram_field_json(field: &GramField) -> serde_json::Value {
    let mut samples = Vec::with_capacity(field.mu_grid.len());
    for (mu, g) in field.mu_grid.iter().zip(&field.grams) {
        let n = g.n_rows();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(complex_json(g[(i, j)]));
            }
        }
        samples.push(serde_json::json!({
            "mu": complex_json(*mu),
            "gram": entries,
        }));
    }
    serde_json::json!({
        "metric": field.metric.to_string(),
        "samples": samples,
    })
}
