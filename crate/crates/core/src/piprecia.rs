//! Expert weighting, PIPRECIA subjective criterion weights, and the blend of
//! objective and subjective weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffn::{Ffn, LinguisticScale, WeightVector};

/// Experts with their reliability grades and derived aggregation weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertPanel {
    pub grades: Vec<String>,
    pub weights: WeightVector,
}

/// Each expert's weight is its grade's normalized score divided by the
/// panel total.
pub fn expert_weights<S: AsRef<str>>(grades: &[S], scale: &LinguisticScale) -> Result<ExpertPanel> {
    if grades.is_empty() {
        return Err(Error::EmptyInput);
    }
    let crisp = grades
        .iter()
        .map(|g| scale.get(g.as_ref()).map(Ffn::normalized_score))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpertPanel {
        grades: grades.iter().map(|g| g.as_ref().to_string()).collect(),
        weights: WeightVector::normalize(&crisp)?,
    })
}

/// Normalized score of each criterion's aggregated importance.
pub fn crisp_significance(importance: &[Ffn]) -> Vec<f64> {
    crate::ffn::crisp_values(importance)
}

/// Intermediate values of the PIPRECIA chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipreciaTrace {
    pub crisp: Vec<f64>,
    /// Relative significance; absent for the first criterion.
    pub s: Vec<Option<f64>>,
    pub kappa: Vec<f64>,
    pub q: Vec<f64>,
    pub subjective: WeightVector,
}

/// Runs the pivot chain over crisp significance values in the given order.
///
/// `s_j = 1 + (c_j - c_{j-1})`, `k_j = 2 - s_j`, `q_j = q_{j-1} / k_j`,
/// and the subjective weights are `q` normalized to unit sum.
pub fn piprecia_chain(crisp: &[f64]) -> Result<PipreciaTrace> {
    if crisp.is_empty() {
        return Err(Error::Shape("PIPRECIA needs at least one criterion".into()));
    }
    if let Some(c) = crisp.iter().find(|c| !(0.0..=1.0).contains(*c)) {
        return Err(Error::Domain {
            what: "crisp significance",
            value: *c,
            domain: "[0, 1]",
        });
    }
    let n = crisp.len();
    let mut s = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    s.push(None);
    kappa.push(1.0);
    q.push(1.0);
    for j in 1..n {
        let (prev, cur) = (crisp[j - 1], crisp[j]);
        let sj = if cur > prev {
            1.0 + (cur - prev)
        } else if cur < prev {
            1.0 - (prev - cur)
        } else {
            1.0
        };
        let kj = 2.0 - sj;
        if kj <= 0.0 {
            return Err(Error::DegenerateWeights(format!(
                "PIPRECIA coefficient for criterion {j} is {kj}"
            )));
        }
        s.push(Some(sj));
        kappa.push(kj);
        q.push(q[j - 1] / kj);
    }
    let subjective = WeightVector::normalize(&q)?;
    Ok(PipreciaTrace {
        crisp: crisp.to_vec(),
        s,
        kappa,
        q,
        subjective,
    })
}

/// Objective, subjective and blended criterion weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightBundle {
    pub objective: WeightVector,
    pub subjective: WeightVector,
    pub alpha: f64,
    pub integrated: WeightVector,
}

/// `w_j = alpha * objective_j + (1 - alpha) * subjective_j`.
pub fn integrate_weights(
    objective: &WeightVector,
    subjective: &WeightVector,
    alpha: f64,
) -> Result<WeightBundle> {
    if objective.len() != subjective.len() {
        return Err(Error::Shape(format!(
            "objective has {} weights, subjective has {}",
            objective.len(),
            subjective.len()
        )));
    }
    check_alpha(alpha)?;
    let integrated = objective
        .iter()
        .zip(subjective.iter())
        .map(|(o, s)| alpha * o + (1.0 - alpha) * s)
        .collect();
    Ok(WeightBundle {
        objective: objective.clone(),
        subjective: subjective.clone(),
        alpha,
        integrated: WeightVector::new(integrated)?,
    })
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "alpha",
            value: alpha,
            domain: "[0, 1]",
        })
    }
}
