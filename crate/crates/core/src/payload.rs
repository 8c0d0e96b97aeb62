//! Request and response documents shared by the command line and the HTTP
//! service, so both produce the same structured output for the same input.

use serde::{Deserialize, Serialize};

use crate::entropy::{CriterionEntropies, EntropyModel, Reduction};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ffn::{Aggregator, Ffn, LinguisticScale, WeightVector};
use crate::marcos::{FfMatrix, MarcosOptions, MarcosResult};
use crate::pipeline::{EvaluateOptions, Prepared};
use crate::piprecia::{check_alpha, ExpertPanel, PipreciaTrace, WeightBundle};
use crate::problem::{
    builtin_case, case_names, load_problem_value, Alternative, Criterion, DecisionProblem,
};
use crate::robustness::{
    alpha_sweep, compare_entropies, comparison_dominance, parse_grid, perturb_weights, AlphaRow,
    EntropyComparison, ModelDominance, PerturbationRow, DEFAULT_ALPHA_GRID, DEFAULT_DELTA,
};

pub const MAX_ALTERNATIVES: usize = 64;
pub const MAX_CRITERIA: usize = 64;
pub const MAX_EXPERTS: usize = 32;

fn default_alpha() -> f64 {
    0.5
}

/// Alpha grid given either as `start:stop:step` / comma list or as numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Spec(String),
    Values(Vec<f64>),
}

/// Body of every analysis request. `alpha_grid` is read by sweeps and
/// `delta` by perturbations; other endpoints ignore them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<serde_json::Value>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub entropy_model: EntropyModel,
    #[serde(default)]
    pub reduction: Reduction,
    #[serde(default)]
    pub aggregator: Aggregator,
    #[serde(default)]
    pub standard_marcos: bool,
    #[serde(default)]
    pub intermediate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl Default for Request {
    fn default() -> Self {
        Request {
            case: None,
            problem: None,
            alpha: default_alpha(),
            entropy_model: EntropyModel::default(),
            reduction: Reduction::default(),
            aggregator: Aggregator::default(),
            standard_marcos: false,
            intermediate: false,
            alpha_grid: None,
            delta: None,
        }
    }
}

/// Parses a request body; errors carry the offending field path.
pub fn parse_request(body: &[u8]) -> Result<Request> {
    let value: serde_json::Value =
        serde_json::from_slice(body).map_err(|e| Error::Parse(e.to_string()))?;
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema {
            path: if path == "." { String::new() } else { path },
            message: e.inner().to_string(),
        }
    })
}

fn under_problem(err: Error) -> Error {
    let join = |path: String| {
        if path.is_empty() {
            "problem".to_string()
        } else {
            format!("problem.{path}")
        }
    };
    match err {
        Error::Schema { path, message } => Error::Schema {
            path: join(path),
            message,
        },
        Error::Validation { path, message } => Error::Validation {
            path: join(path),
            message,
        },
        other => other,
    }
}

/// Rejects problems above the service size limits.
pub fn check_size(problem: &DecisionProblem) -> Result<()> {
    let (ne, na, nc) = problem.dimensions();
    if na > MAX_ALTERNATIVES || nc > MAX_CRITERIA || ne > MAX_EXPERTS {
        return Err(Error::TooLarge(format!(
            "{na} alternatives x {nc} criteria x {ne} experts exceeds {MAX_ALTERNATIVES} x {MAX_CRITERIA} x {MAX_EXPERTS}"
        )));
    }
    Ok(())
}

impl Request {
    pub fn for_case(name: &str) -> Self {
        Request {
            case: Some(name.to_string()),
            ..Default::default()
        }
    }

    pub fn for_problem(problem: &DecisionProblem) -> Self {
        let doc = crate::problem::save_problem(problem);
        Request {
            problem: Some(serde_json::from_str(&doc).expect("saved document is valid JSON")),
            ..Default::default()
        }
    }

    /// The problem named by `case` or given inline as `problem`.
    pub fn problem(&self) -> Result<DecisionProblem> {
        match (&self.case, &self.problem) {
            (Some(name), None) => builtin_case(name).map_err(|e| match e {
                Error::UnknownCase(name) => {
                    Error::validation("case", format!("unknown case `{name}`"))
                }
                other => other,
            }),
            (None, Some(doc)) => load_problem_value(doc.clone()).map_err(under_problem),
            (Some(_), Some(_)) => Err(Error::validation(
                "case",
                "give either `case` or `problem`, not both",
            )),
            (None, None) => Err(Error::validation(
                "problem",
                "either `case` or `problem` is required",
            )),
        }
    }

    pub fn options(&self, exec: Exec) -> Result<EvaluateOptions> {
        check_alpha(self.alpha)?;
        Ok(EvaluateOptions {
            alpha: self.alpha,
            entropy: self.entropy_model,
            reduction: self.reduction,
            aggregator: self.aggregator,
            marcos: MarcosOptions {
                standard_marcos: self.standard_marcos,
            },
            exec,
        })
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        match &self.alpha_grid {
            None => parse_grid(DEFAULT_ALPHA_GRID),
            Some(GridSpec::Spec(s)) => parse_grid(s),
            Some(GridSpec::Values(v)) => parse_grid(
                &v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(DEFAULT_DELTA)
    }

    fn prepare(&self, exec: Exec) -> Result<(DecisionProblem, EvaluateOptions, Prepared)> {
        let problem = self.problem()?;
        check_size(&problem)?;
        let options = self.options(exec)?;
        let prepared = Prepared::new(&problem, options.aggregator)?;
        Ok((problem, options, prepared))
    }
}

/// Echo of the parameters a response was computed with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub alpha: f64,
    pub entropy_model: EntropyModel,
    pub reduction: Reduction,
    pub aggregator: Aggregator,
    pub standard_marcos: bool,
}

impl From<&EvaluateOptions> for Settings {
    fn from(o: &EvaluateOptions) -> Self {
        Settings {
            alpha: o.alpha,
            entropy_model: o.entropy,
            reduction: o.reduction,
            aggregator: o.aggregator,
            standard_marcos: o.marcos.standard_marcos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intermediate {
    pub expert_weights: ExpertPanel,
    pub importance: Vec<Ffn>,
    pub piprecia: PipreciaTrace,
    pub entropies: CriterionEntropies,
    pub aggregated: FfMatrix,
    pub normalized: FfMatrix,
    pub pis: Vec<Ffn>,
    pub nis: Vec<Ffn>,
    pub weighted: FfMatrix,
    /// Normalized score of every weighted cell, `[alternative][criterion]`.
    pub scores: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateResponse {
    pub title: String,
    pub alternatives: Vec<Alternative>,
    pub criteria: Vec<Criterion>,
    pub settings: Settings,
    pub weights: WeightBundle,
    pub marcos: MarcosResult,
    /// Alternative ids, best first.
    pub ranking: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intermediate: Option<Intermediate>,
}

pub fn evaluate_payload(req: &Request, exec: Exec) -> Result<EvaluateResponse> {
    let (problem, options, prepared) = req.prepare(exec)?;
    let ev = prepared.evaluate(&options)?;
    let ranking = ev.ranking().into_iter().map(String::from).collect();
    let intermediate = req.intermediate.then(|| {
        let w = &ev.marcos.weighted;
        Intermediate {
            expert_weights: ev.panel.clone(),
            importance: ev.importance.clone(),
            piprecia: ev.piprecia.clone(),
            entropies: ev.entropies.clone(),
            aggregated: ev.aggregated.clone(),
            normalized: ev.marcos.normalized.clone(),
            pis: ev.marcos.pis.clone(),
            nis: ev.marcos.nis.clone(),
            weighted: w.clone(),
            scores: (0..w.rows())
                .map(|i| w.row(i).iter().map(|c| c.normalized_score()).collect())
                .collect(),
        }
    });
    Ok(EvaluateResponse {
        title: problem.title,
        alternatives: problem.alternatives,
        criteria: problem.criteria,
        settings: Settings::from(&options),
        weights: ev.weights,
        marcos: ev.marcos.result,
        ranking,
        intermediate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsResponse {
    pub title: String,
    pub criteria: Vec<Criterion>,
    pub settings: Settings,
    pub expert_weights: ExpertPanel,
    pub importance: Vec<Ffn>,
    pub piprecia: PipreciaTrace,
    pub entropies: CriterionEntropies,
    pub weights: WeightBundle,
}

pub fn weights_payload(req: &Request, exec: Exec) -> Result<WeightsResponse> {
    let (problem, options, prepared) = req.prepare(exec)?;
    let (entropies, weights) =
        prepared.weights(options.entropy, options.reduction, options.alpha, exec)?;
    Ok(WeightsResponse {
        title: problem.title,
        criteria: problem.criteria,
        settings: Settings::from(&options),
        expert_weights: prepared.panel,
        importance: prepared.importance,
        piprecia: prepared.piprecia,
        entropies,
        weights,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResponse {
    pub title: String,
    pub alternatives: Vec<Alternative>,
    pub settings: Settings,
    pub rows: Vec<AlphaRow>,
}

pub fn sweep_payload(req: &Request, exec: Exec) -> Result<SweepResponse> {
    let grid = req.grid()?;
    let (problem, options, prepared) = req.prepare(exec)?;
    Ok(SweepResponse {
        rows: alpha_sweep(&prepared, &options, &grid)?,
        title: problem.title,
        alternatives: problem.alternatives,
        settings: Settings::from(&options),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbResponse {
    pub title: String,
    pub alternatives: Vec<Alternative>,
    pub criteria: Vec<Criterion>,
    pub settings: Settings,
    pub delta: f64,
    pub base_weights: WeightVector,
    pub base_order: Vec<String>,
    pub rows: Vec<PerturbationRow>,
}

pub fn perturb_payload(req: &Request, exec: Exec) -> Result<PerturbResponse> {
    let (problem, options, prepared) = req.prepare(exec)?;
    let ev = prepared.evaluate(&options)?;
    let rows = perturb_weights(
        &prepared.aggregated,
        &ev.weights.integrated,
        req.delta(),
        options.marcos,
        exec,
    )?;
    Ok(PerturbResponse {
        base_order: ev.ranking().into_iter().map(String::from).collect(),
        title: problem.title,
        alternatives: problem.alternatives,
        criteria: problem.criteria,
        settings: Settings::from(&options),
        delta: req.delta(),
        base_weights: ev.weights.integrated,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareResponse {
    pub title: String,
    pub alternatives: Vec<Alternative>,
    pub criteria: Vec<Criterion>,
    pub settings: Settings,
    pub comparison: EntropyComparison,
    pub dominance: Vec<ModelDominance>,
}

pub fn compare_payload(req: &Request, exec: Exec) -> Result<CompareResponse> {
    let (problem, options, prepared) = req.prepare(exec)?;
    let comparison = compare_entropies(&prepared, &options, &EntropyModel::ALL)?;
    let dominance = comparison_dominance(&comparison)?;
    Ok(CompareResponse {
        title: problem.title,
        alternatives: problem.alternatives,
        criteria: problem.criteria,
        settings: Settings::from(&options),
        comparison,
        dominance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseInfo {
    pub name: String,
    pub title: String,
    pub experts: usize,
    pub alternatives: usize,
    pub criteria: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasesResponse {
    pub cases: Vec<CaseInfo>,
}

pub fn cases_payload() -> Result<CasesResponse> {
    let cases = case_names()
        .iter()
        .map(|&name| {
            let p = builtin_case(name)?;
            let (experts, alternatives, criteria) = p.dimensions();
            Ok(CaseInfo {
                name: name.to_string(),
                title: p.title,
                experts,
                alternatives,
                criteria,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CasesResponse { cases })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleResponse {
    pub scale: LinguisticScale,
}

pub fn scale_payload() -> ScaleResponse {
    ScaleResponse {
        scale: LinguisticScale::default(),
    }
}

/// Pretty JSON with a trailing newline; the canonical structured output.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("payload serializes");
    s.push('\n');
    s
}
