//! Scenarios: lists of checks run against catalog algebras, each with an
//! expected outcome, producing deterministic JSON reports.

mod builtin;
mod ops;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use builtin::{builtin, builtin_ids, builtin_suite, CLAIMS};
pub use ops::{diff_space, module_named, Op};

use crate::algebra::{catalog, FiniteAlgebra};
use crate::diffops::Relation;
use crate::error::Result;
use crate::Field;

fn default_field() -> String {
    "q".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default)]
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Identifier of the mathematical statement this check encodes; see [`CLAIMS`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<String>,
    /// Catalog expression, e.g. `matrix(2)`.
    pub algebra: String,
    pub op: Op,
    pub expect: Expect,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expect {
    /// The checked identity or equality holds.
    Holds,
    /// The checked identity fails.
    Fails,
    /// A witness must be produced.
    Witness,
    /// A witness, or an exhaustive search that found none.
    WitnessOrNegative,
    Dimension { value: usize },
    Relation { relation: Relation },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Witness,
    Negative,
}

impl Status {
    pub fn ok(self) -> bool {
        self != Status::Fail
    }
}

/// What an operation observed, before it is compared with the expectation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub holds: bool,
    pub value: Option<usize>,
    pub relation: Option<Relation>,
    pub witness: Option<Value>,
    pub negative: Option<Value>,
    pub details: Value,
}

impl Outcome {
    fn status(&self, expect: &Expect) -> Status {
        let pass = |b: bool| if b { Status::Pass } else { Status::Fail };
        match expect {
            Expect::Holds => pass(self.holds),
            Expect::Fails => pass(!self.holds),
            Expect::Witness if self.witness.is_some() => Status::Witness,
            Expect::Witness => Status::Fail,
            Expect::WitnessOrNegative => match (&self.witness, &self.negative) {
                (Some(_), _) => Status::Witness,
                (None, Some(_)) => Status::Negative,
                _ => Status::Fail,
            },
            Expect::Dimension { value } => pass(self.value == Some(*value)),
            Expect::Relation { relation } => pass(self.relation == Some(*relation)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim: Option<String>,
    pub algebra: String,
    pub op: Op,
    pub expect: Expect,
    pub status: Status,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative: Option<Value>,
    pub details: Value,
    /// Set when the operation itself returned an error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Field and size caps the results depend on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub version: String,
    pub field: String,
    pub max_order: usize,
    pub ce_cap: usize,
    pub graded_ce_cap: usize,
    pub universal_cap: usize,
    pub jet_cap: usize,
}

impl Fingerprint {
    pub fn new(field: Field) -> Fingerprint {
        Fingerprint {
            version: env!("CARGO_PKG_VERSION").into(),
            field: field.to_string(),
            max_order: crate::diffops::MAX_ORDER,
            ce_cap: crate::ce::DEFAULT_CE_CAP,
            graded_ce_cap: crate::ce::graded::GRADED_CAP,
            universal_cap: crate::universal::UNIVERSAL_CAP,
            jet_cap: crate::jets::JET_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub fingerprint: Fingerprint,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.status.ok())
    }
}

pub fn suite_json(reports: &[Report]) -> String {
    serde_json::to_string_pretty(reports).expect("report serializes")
}

impl Scenario {
    pub fn from_json(s: &str) -> Result<Scenario> {
        serde_json::from_str(s).map_err(|e| crate::Error::Parse(format!("scenario: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// Loads every algebra and module a scenario names.
fn resolve(s: &Scenario, field: Field) -> Result<BTreeMap<String, Arc<FiniteAlgebra>>> {
    let mut algebras = BTreeMap::new();
    for c in &s.checks {
        if !algebras.contains_key(&c.algebra) {
            let a = Arc::new(catalog(&c.algebra, field)?);
            if !a.validate().valid {
                return Err(crate::Error::InvalidAlgebra(format!("`{}` fails validation", c.algebra)));
            }
            algebras.insert(c.algebra.clone(), a);
        }
        let a = &algebras[&c.algebra];
        for m in c.op.module_names() {
            module_named(a, m)?;
        }
    }
    Ok(algebras)
}

/// Runs the checks in declared order. Only unreadable input is an error;
/// mathematical negatives are recorded in the report.
pub fn run_scenario(s: &Scenario) -> Result<Report> {
    let field = Field::parse(&s.field)?;
    let algebras = resolve(s, field)?;
    let mut checks = Vec::with_capacity(s.checks.len());
    for c in &s.checks {
        let a = &algebras[&c.algebra];
        let (outcome, error) = match c.op.run(a) {
            Ok(o) => (o, None),
            Err(e) => (Outcome::default(), Some(e.to_string())),
        };
        let status = if error.is_some() { Status::Fail } else { outcome.status(&c.expect) };
        checks.push(CheckReport {
            name: c.name.clone(),
            claim: c.claim.clone(),
            algebra: c.algebra.clone(),
            op: c.op.clone(),
            expect: c.expect.clone(),
            status,
            holds: outcome.holds,
            value: outcome.value,
            relation: outcome.relation,
            witness: outcome.witness,
            negative: outcome.negative,
            details: outcome.details,
            error,
        });
    }
    let passed = checks.iter().all(|c| c.status.ok());
    Ok(Report {
        scenario: s.id.clone(),
        fingerprint: Fingerprint::new(field),
        checks,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scenario_gives_empty_report() {
        let s = Scenario::from_json(r#"{"id": "empty"}"#).unwrap();
        let r = run_scenario(&s).unwrap();
        assert!(r.checks.is_empty());
        assert!(r.passed);
        assert_eq!(r.fingerprint.field, "Q");
    }

    #[test]
    fn unknown_algebra_is_a_spec_error() {
        let s = Scenario::from_json(
            r#"{"id": "bad", "checks": [{"name": "x", "algebra": "nonsense(3)",
                "op": {"kind": "duality"}, "expect": {"kind": "holds"}}]}"#,
        )
        .unwrap();
        assert!(run_scenario(&s).is_err());
    }

    #[test]
    fn unknown_module_is_a_spec_error() {
        let s = Scenario::from_json(
            r#"{"id": "bad", "checks": [{"name": "x", "algebra": "field",
                "op": {"kind": "representability", "order": 1, "source": "weird", "target": "regular"},
                "expect": {"kind": "holds"}}]}"#,
        )
        .unwrap();
        assert!(run_scenario(&s).is_err());
    }

    #[test]
    fn unmet_expectation_is_recorded_not_raised() {
        let s = Scenario::from_json(
            r#"{"id": "wrong", "checks": [{"name": "x", "algebra": "trunc_poly(3)",
                "op": {"kind": "duality"}, "expect": {"kind": "dimension", "value": 5}}]}"#,
        )
        .unwrap();
        let r = run_scenario(&s).unwrap();
        assert!(!r.passed);
        assert_eq!(r.checks[0].status, Status::Fail);
        assert_eq!(r.checks[0].value, Some(2));
    }

    #[test]
    fn scenarios_round_trip_through_json() {
        for id in builtin_ids() {
            let s = builtin(id).unwrap();
            assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
        }
    }
}
