//! End-to-end composition: expert weights, aggregation, objective and
//! subjective weights, blending, MARCOS.

use serde::{Deserialize, Serialize};

use crate::entropy::{criterion_entropies_with, CriterionEntropies, EntropyModel, Reduction};
use crate::error::Result;
use crate::exec::Exec;
use crate::ffn::{Aggregator, Ffn};
use crate::marcos::{rank_matrix, FfMatrix, MarcosOptions, MarcosRun};
use crate::piprecia::{
    check_alpha, crisp_significance, expert_weights, integrate_weights, piprecia_chain,
    ExpertPanel, PipreciaTrace, WeightBundle,
};
use crate::problem::DecisionProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluateOptions {
    pub alpha: f64,
    pub entropy: EntropyModel,
    pub reduction: Reduction,
    pub aggregator: Aggregator,
    pub marcos: MarcosOptions,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        EvaluateOptions {
            alpha: 0.5,
            entropy: EntropyModel::Cosine,
            reduction: Reduction::Mean,
            aggregator: Aggregator::Ffwa,
            marcos: MarcosOptions::default(),
            exec: Exec::default(),
        }
    }
}

/// Everything that depends only on the problem and the aggregator: expert
/// weights, the aggregated decision matrix, and the subjective weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared {
    pub panel: ExpertPanel,
    pub aggregated: FfMatrix,
    pub importance: Vec<Ffn>,
    pub piprecia: PipreciaTrace,
}

impl Prepared {
    pub fn new(problem: &DecisionProblem, aggregator: Aggregator) -> Result<Self> {
        problem.validate()?;
        let grades: Vec<&str> = problem.experts.iter().map(|e| e.grade.as_str()).collect();
        let panel = expert_weights(&grades, &problem.scale)?;
        let (_, na, nc) = problem.dimensions();

        let mut cells = Vec::with_capacity(na * nc);
        for a in 0..na {
            for c in 0..nc {
                cells.push(aggregator.apply(&problem.judgments(a, c)?, &panel.weights)?);
            }
        }
        let aggregated = FfMatrix::new(
            problem.alternatives.iter().map(|a| a.id.clone()).collect(),
            problem.criteria.iter().map(|c| c.id.clone()).collect(),
            problem.orientations(),
            cells,
        )?;

        let importance = (0..nc)
            .map(|c| aggregator.apply(&problem.importance(c)?, &panel.weights))
            .collect::<Result<Vec<_>>>()?;
        let piprecia = piprecia_chain(&crisp_significance(&importance))?;
        Ok(Prepared {
            panel,
            aggregated,
            importance,
            piprecia,
        })
    }

    pub fn entropies(
        &self,
        model: EntropyModel,
        reduction: Reduction,
        exec: Exec,
    ) -> Result<CriterionEntropies> {
        criterion_entropies_with(&self.aggregated, model, reduction, exec)
    }

    pub fn weights(
        &self,
        model: EntropyModel,
        reduction: Reduction,
        alpha: f64,
        exec: Exec,
    ) -> Result<(CriterionEntropies, WeightBundle)> {
        check_alpha(alpha)?;
        let entropies = self.entropies(model, reduction, exec)?;
        let objective = entropies.objective_weights()?;
        let bundle = integrate_weights(&objective, &self.piprecia.subjective, alpha)?;
        Ok((entropies, bundle))
    }

    pub fn evaluate(&self, options: &EvaluateOptions) -> Result<Evaluation> {
        let (entropies, weights) = self.weights(
            options.entropy,
            options.reduction,
            options.alpha,
            options.exec,
        )?;
        let marcos = rank_matrix(&self.aggregated, &weights.integrated, options.marcos)?;
        Ok(Evaluation {
            panel: self.panel.clone(),
            aggregated: self.aggregated.clone(),
            importance: self.importance.clone(),
            piprecia: self.piprecia.clone(),
            entropies,
            weights,
            marcos,
        })
    }
}

/// Full trace of one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub panel: ExpertPanel,
    pub aggregated: FfMatrix,
    pub importance: Vec<Ffn>,
    pub piprecia: PipreciaTrace,
    pub entropies: CriterionEntropies,
    pub weights: WeightBundle,
    pub marcos: MarcosRun,
}

impl Evaluation {
    /// Alternative ids, best first.
    pub fn ranking(&self) -> Vec<&str> {
        self.marcos
            .result
            .order
            .iter()
            .map(|&i| self.aggregated.alternatives()[i].as_str())
            .collect()
    }
}

pub fn evaluate(problem: &DecisionProblem, options: &EvaluateOptions) -> Result<Evaluation> {
    Prepared::new(problem, options.aggregator)?.evaluate(options)
}
