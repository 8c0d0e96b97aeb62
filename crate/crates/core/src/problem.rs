//! Decision problem data model and its JSON document format.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "title": "...",
//!   "scale": [{"term": "AI", "mu": 1.0, "nu": 0.0}, ...],
//!   "criteria": [{"id": "A", "name": "Income level", "orientation": "cost"}, ...],
//!   "alternatives": [{"id": "R1", "name": "Marmara"}, ...],
//!   "experts": [{"id": "S1", "grade": "AI"}, ...],
//!   "evaluations": [[["VI", "AI", ...], ...], ...],
//!   "criterion_importance": [["VI", "VI", ...], ...]
//! }
//! ```
//!
//! `evaluations` is indexed expert, alternative, criterion; `criterion_importance`
//! is indexed expert, criterion. `scale` may be omitted, in which case the
//! default seven-term scale applies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffn::{Ffn, LinguisticScale};
use crate::marcos::Orientation;

pub const SCHEMA_VERSION: u64 = 1;

pub const TURKIYE_CASE: &str = "turkiye-energy-poverty";

const TURKIYE_DOCUMENT: &str = include_str!("../cases/turkiye-energy-poverty.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Criterion {
    pub id: String,
    pub name: String,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Alternative {
    pub id: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expert {
    pub id: String,
    pub grade: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    pub title: String,
    pub criteria: Vec<Criterion>,
    pub alternatives: Vec<Alternative>,
    pub experts: Vec<Expert>,
    pub scale: LinguisticScale,
    /// Term labels indexed `[expert][alternative][criterion]`.
    pub evaluations: Vec<Vec<Vec<String>>>,
    /// Term labels indexed `[expert][criterion]`.
    pub criterion_importance: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    schema_version: u64,
    title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<Vec<ScaleEntry>>,
    criteria: Vec<Criterion>,
    alternatives: Vec<Alternative>,
    experts: Vec<Expert>,
    evaluations: Vec<Vec<Vec<String>>>,
    criterion_importance: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScaleEntry {
    term: String,
    mu: f64,
    nu: f64,
}

impl DecisionProblem {
    /// Checks dimensions, id uniqueness and that every term resolves.
    pub fn validate(&self) -> Result<()> {
        let (ne, na, nc) = (
            self.experts.len(),
            self.alternatives.len(),
            self.criteria.len(),
        );
        for (path, n) in [("experts", ne), ("alternatives", na), ("criteria", nc)] {
            if n == 0 {
                return Err(Error::validation(path, "at least one entry is required"));
            }
        }
        unique_ids("criteria", self.criteria.iter().map(|c| c.id.as_str()))?;
        unique_ids(
            "alternatives",
            self.alternatives.iter().map(|a| a.id.as_str()),
        )?;
        unique_ids("experts", self.experts.iter().map(|e| e.id.as_str()))?;

        for (e, expert) in self.experts.iter().enumerate() {
            self.check_term(
                &expert.grade,
                || format!("experts[{e}].grade"),
                || format!("expert {}", expert.id),
            )?;
        }

        expect_len("evaluations", self.evaluations.len(), ne, "experts")?;
        for (e, per_expert) in self.evaluations.iter().enumerate() {
            expect_len(
                &format!("evaluations[{e}]"),
                per_expert.len(),
                na,
                "alternatives",
            )?;
            for (a, row) in per_expert.iter().enumerate() {
                expect_len(&format!("evaluations[{e}][{a}]"), row.len(), nc, "criteria")?;
                for (c, term) in row.iter().enumerate() {
                    self.check_term(
                        term,
                        || format!("evaluations[{e}][{a}][{c}]"),
                        || {
                            format!(
                                "expert {} / alternative {} / criterion {}",
                                self.experts[e].id, self.alternatives[a].id, self.criteria[c].id
                            )
                        },
                    )?;
                }
            }
        }

        expect_len(
            "criterion_importance",
            self.criterion_importance.len(),
            ne,
            "experts",
        )?;
        for (e, row) in self.criterion_importance.iter().enumerate() {
            expect_len(
                &format!("criterion_importance[{e}]"),
                row.len(),
                nc,
                "criteria",
            )?;
            for (c, term) in row.iter().enumerate() {
                self.check_term(
                    term,
                    || format!("criterion_importance[{e}][{c}]"),
                    || {
                        format!(
                            "expert {} / criterion {}",
                            self.experts[e].id, self.criteria[c].id
                        )
                    },
                )?;
            }
        }
        Ok(())
    }

    fn check_term(
        &self,
        term: &str,
        path: impl FnOnce() -> String,
        context: impl FnOnce() -> String,
    ) -> Result<()> {
        if self.scale.contains(term) {
            Ok(())
        } else {
            Err(Error::validation(
                path(),
                format!("unknown linguistic term `{term}` ({})", context()),
            ))
        }
    }

    pub fn orientations(&self) -> Vec<Orientation> {
        self.criteria.iter().map(|c| c.orientation).collect()
    }

    /// Expert judgments for one alternative and criterion, in expert order.
    pub fn judgments(&self, alternative: usize, criterion: usize) -> Result<Vec<Ffn>> {
        self.evaluations
            .iter()
            .map(|per_expert| self.scale.get(&per_expert[alternative][criterion]))
            .collect()
    }

    /// Importance grades for one criterion, in expert order.
    pub fn importance(&self, criterion: usize) -> Result<Vec<Ffn>> {
        self.criterion_importance
            .iter()
            .map(|row| self.scale.get(&row[criterion]))
            .collect()
    }

    pub fn dimensions(&self) -> (usize, usize, usize) {
        (
            self.experts.len(),
            self.alternatives.len(),
            self.criteria.len(),
        )
    }
}

fn unique_ids<'a>(path: &str, ids: impl Iterator<Item = &'a str>) -> Result<()> {
    let ids: Vec<&str> = ids.collect();
    for (i, id) in ids.iter().enumerate() {
        if id.is_empty() {
            return Err(Error::validation(format!("{path}[{i}].id"), "empty id"));
        }
        if ids[..i].contains(id) {
            return Err(Error::validation(
                format!("{path}[{i}].id"),
                format!("duplicate id `{id}`"),
            ));
        }
    }
    Ok(())
}

fn expect_len(path: &str, got: usize, expected: usize, of: &str) -> Result<()> {
    if got == expected {
        Ok(())
    } else {
        Err(Error::validation(
            path,
            format!("expected {expected} entries (one per {of}), found {got}"),
        ))
    }
}

/// Parses and validates a problem document.
pub fn load_problem(text: &str) -> Result<DecisionProblem> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    load_problem_value(value)
}

/// Like [`load_problem`] for an already parsed JSON value.
pub fn load_problem_value(value: serde_json::Value) -> Result<DecisionProblem> {
    match value.get("schema_version") {
        None => return Err(schema("schema_version", "missing field")),
        Some(v) if v.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(schema(
                "schema_version",
                format!("unsupported schema version {v} (expected {SCHEMA_VERSION})"),
            ))
        }
    }
    let doc: Document = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        schema(
            if path == "." { String::new() } else { path },
            e.inner().to_string(),
        )
    })?;

    let scale = match doc.scale {
        None => LinguisticScale::default(),
        Some(entries) => {
            let mut out = Vec::with_capacity(entries.len());
            for (i, e) in entries.into_iter().enumerate() {
                let f = Ffn::new(e.mu, e.nu)
                    .map_err(|err| Error::validation(format!("scale[{i}]"), err.to_string()))?;
                out.push((e.term, f));
            }
            LinguisticScale::new(out).map_err(|err| match err {
                Error::EmptyInput => Error::validation("scale", "scale has no terms"),
                other => other,
            })?
        }
    };
    let problem = DecisionProblem {
        title: doc.title,
        criteria: doc.criteria,
        alternatives: doc.alternatives,
        experts: doc.experts,
        scale,
        evaluations: doc.evaluations,
        criterion_importance: doc.criterion_importance,
    };
    problem.validate()?;
    Ok(problem)
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// Serializes a problem as a pretty-printed document with an explicit scale.
pub fn save_problem(p: &DecisionProblem) -> String {
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        title: p.title.clone(),
        scale: Some(
            p.scale
                .iter()
                .map(|(term, f)| ScaleEntry {
                    term: term.to_string(),
                    mu: f.mu(),
                    nu: f.nu(),
                })
                .collect(),
        ),
        criteria: p.criteria.clone(),
        alternatives: p.alternatives.clone(),
        experts: p.experts.clone(),
        evaluations: p.evaluations.clone(),
        criterion_importance: p.criterion_importance.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}

/// Names of the bundled case studies.
pub fn case_names() -> &'static [&'static str] {
    &[TURKIYE_CASE]
}

/// The bundled document text for a case.
pub fn case_document(name: &str) -> Result<&'static str> {
    match name {
        TURKIYE_CASE => Ok(TURKIYE_DOCUMENT),
        other => Err(Error::UnknownCase(other.to_string())),
    }
}

/// Seven regions of Türkiye rated on six energy-poverty factors by three
/// experts.
pub fn builtin_case(name: &str) -> Result<DecisionProblem> {
    load_problem(case_document(name)?)
}
