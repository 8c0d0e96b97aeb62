//! Fuzziness measures over Fermatean fuzzy elements and the objective
//! criterion weights derived from them.
//!
//! Three per-element measures are provided:
//!
//! * [`EntropyModel::Cosine`]: `(sqrt(2) cos(pi (mu^3 - nu^3) / 4) - 1) / (sqrt(2) - 1)`,
//!   which is 0 on crisp elements, 1 on the diagonal `mu = nu`, and even in
//!   `mu^3 - nu^3`.
//! * [`EntropyModel::Shannon`]: `-(p ln p)` summed over the masses
//!   `(mu^3, nu^3, h^3)`, with `0 ln 0 = 0`.
//! * [`EntropyModel::Linear`]:
//!   `1 - (2|d| + |mu^6 - nu^6| + |2d + (h^6 - nu^6)|) / 4` with `d = mu^3 - nu^3`,
//!   clamped to `[0, 1]`.
//!
//! A list of elements is scored by the mean of the per-element values.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ffn::{cube, Ffn, WeightVector};
use crate::marcos::FfMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyModel {
    #[default]
    Cosine,
    Shannon,
    Linear,
}

impl EntropyModel {
    pub const ALL: [EntropyModel; 3] = [
        EntropyModel::Cosine,
        EntropyModel::Shannon,
        EntropyModel::Linear,
    ];

    pub fn element(self, f: Ffn) -> f64 {
        match self {
            EntropyModel::Cosine => cosine_element(f),
            EntropyModel::Shannon => shannon_element(f),
            EntropyModel::Linear => linear_element(f),
        }
    }

    pub fn of(self, elements: &[Ffn]) -> Result<f64> {
        if elements.is_empty() {
            return Err(Error::EmptyInput);
        }
        let total: f64 = elements.iter().map(|f| self.element(*f)).sum();
        Ok(total / elements.len() as f64)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EntropyModel::Cosine => "cosine",
            EntropyModel::Shannon => "shannon",
            EntropyModel::Linear => "linear",
        }
    }
}

impl fmt::Display for EntropyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntropyModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" => Ok(EntropyModel::Cosine),
            "shannon" => Ok(EntropyModel::Shannon),
            "linear" => Ok(EntropyModel::Linear),
            other => Err(Error::validation(
                "entropy_model",
                format!("unknown entropy model `{other}` (expected cosine, shannon or linear)"),
            )),
        }
    }
}

/// How per-element entropies of one criterion column are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    #[default]
    Mean,
    /// Unnormalized column total; only useful for comparing against
    /// published magnitudes above 1.
    Sum,
}

pub(crate) fn cosine_element(f: Ffn) -> f64 {
    let d = cube(f.mu()) - cube(f.nu());
    let v = (SQRT_2 * (FRAC_PI_4 * d).cos() - 1.0) / (SQRT_2 - 1.0);
    v.clamp(0.0, 1.0)
}

fn shannon_element(f: Ffn) -> f64 {
    [cube(f.mu()), cube(f.nu()), f.hesitation_cubed()]
        .into_iter()
        .filter(|p| *p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

fn linear_element(f: Ffn) -> f64 {
    let (m3, n3) = (cube(f.mu()), cube(f.nu()));
    let h3 = f.hesitation_cubed();
    let d = m3 - n3;
    let penalty = 2.0 * d.abs() + (m3 * m3 - n3 * n3).abs() + (2.0 * d + (h3 * h3 - n3 * n3)).abs();
    (1.0 - penalty / 4.0).clamp(0.0, 1.0)
}

pub fn entropy_cosine(elements: &[Ffn]) -> Result<f64> {
    EntropyModel::Cosine.of(elements)
}

pub fn entropy_shannon(elements: &[Ffn]) -> Result<f64> {
    EntropyModel::Shannon.of(elements)
}

pub fn entropy_linear(elements: &[Ffn]) -> Result<f64> {
    EntropyModel::Linear.of(elements)
}

/// One entropy value per criterion column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionEntropies {
    pub values: Vec<f64>,
    pub model: EntropyModel,
    pub reduction: Reduction,
}

impl CriterionEntropies {
    pub fn objective_weights(&self) -> Result<WeightVector> {
        objective_weights(&self.values)
    }
}

pub fn criterion_entropies(
    matrix: &FfMatrix,
    model: EntropyModel,
    reduction: Reduction,
) -> Result<CriterionEntropies> {
    criterion_entropies_with(matrix, model, reduction, Exec::default())
}

pub fn criterion_entropies_with(
    matrix: &FfMatrix,
    model: EntropyModel,
    reduction: Reduction,
    exec: Exec,
) -> Result<CriterionEntropies> {
    if matrix.rows() == 0 || matrix.cols() == 0 {
        return Err(Error::Shape(
            "entropy needs at least one row and one column".into(),
        ));
    }
    let columns: Vec<usize> = (0..matrix.cols()).collect();
    let values = exec.map(&columns, |&j| {
        let total: f64 = matrix.column(j).map(|f| model.element(f)).sum();
        match reduction {
            Reduction::Mean => total / matrix.rows() as f64,
            Reduction::Sum => total,
        }
    });
    Ok(CriterionEntropies {
        values,
        model,
        reduction,
    })
}

/// Entropy weights `w_j = (1 - E_j) / sum_k (1 - E_k)`.
///
/// Entropies above 1 are accepted as long as every numerator has the same
/// sign; a mixed-sign or zero denominator is rejected.
pub fn objective_weights(entropies: &[f64]) -> Result<WeightVector> {
    if entropies.is_empty() {
        return Err(Error::EmptyInput);
    }
    let slack: Vec<f64> = entropies.iter().map(|e| 1.0 - e).collect();
    let total: f64 = slack.iter().sum();
    if total == 0.0 || !total.is_finite() {
        return Err(Error::DegenerateWeights(format!(
            "entropy divergences sum to {total}"
        )));
    }
    let w: Vec<f64> = slack.iter().map(|s| s / total).collect();
    if let Some((j, v)) = w.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::DegenerateWeights(format!(
            "criterion {j} would receive negative weight {v}"
        )));
    }
    // renormalize away the last ulp so the unit-sum check holds
    WeightVector::normalize(&w)
}
