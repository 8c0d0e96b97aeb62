//! Rank-stability analytics: alpha sweeps, criterion-weight perturbation
//! scored with Kendall's tau, entropy-model comparison and criterion
//! dominance.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::entropy::EntropyModel;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ffn::WeightVector;
use crate::marcos::{rank_matrix, FfMatrix, MarcosOptions};
use crate::pipeline::{EvaluateOptions, Prepared};
use crate::piprecia::{check_alpha, integrate_weights};

pub const DEFAULT_ALPHA_GRID: &str = "0:1:0.1";
pub const DEFAULT_DELTA: f64 = 0.10;

/// Kendall's tau-b over paired observations, by explicit pair enumeration.
///
/// With no ties this equals tau-a. When one side is entirely tied the
/// coefficient is undefined; it is reported as 1 if both sides have the same
/// tie pattern and 0 otherwise.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let n = x.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut tied_x, mut tied_y, mut tied_both) = (0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i].total_cmp(&x[j]) as i8;
            let dy = y[i].total_cmp(&y[j]) as i8;
            match (dx, dy) {
                (0, 0) => tied_both += 1,
                (0, _) => tied_x += 1,
                (_, 0) => tied_y += 1,
                _ if dx == dy => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let untied_x = (concordant + discordant + tied_y) as f64;
    let untied_y = (concordant + discordant + tied_x) as f64;
    let denom = (untied_x * untied_y).sqrt();
    if denom == 0.0 {
        let same_ties = tied_x == 0 && tied_y == 0 && tied_both > 0;
        return Ok(if same_ties || n < 2 { 1.0 } else { 0.0 });
    }
    Ok(((concordant - discordant) as f64 / denom).clamp(-1.0, 1.0))
}

/// Kendall's tau between two best-first orders of the same items.
pub fn kendall_tau<T: Eq + Hash + std::fmt::Debug>(a: &[T], b: &[T]) -> Result<f64> {
    if a.len() < 2 {
        return Err(Error::ItemMismatch(format!(
            "need at least two items, got {}",
            a.len()
        )));
    }
    let pos_b: HashMap<&T, usize> = b.iter().enumerate().map(|(i, t)| (t, i)).collect();
    if a.len() != b.len() || pos_b.len() != b.len() {
        return Err(Error::ItemMismatch(format!(
            "rankings have {} and {} distinct items",
            a.len(),
            pos_b.len()
        )));
    }
    let mut x = Vec::with_capacity(a.len());
    let mut y = Vec::with_capacity(a.len());
    for (i, item) in a.iter().enumerate() {
        let j = pos_b.get(item).ok_or_else(|| {
            Error::ItemMismatch(format!("{item:?} is missing from the second ranking"))
        })?;
        x.push(i as f64);
        y.push(*j as f64);
    }
    if x.len() != a.iter().collect::<std::collections::HashSet<_>>().len() {
        return Err(Error::ItemMismatch("first ranking repeats an item".into()));
    }
    kendall_tau_b(&x, &y)
}

/// Parses `start:stop:step` or a comma-separated list of alpha values.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |msg: String| Error::validation("alpha_grid", msg);
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("`{}` is not a number", s.trim())))
    };
    let grid = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("expected start:stop:step, got `{spec}`")));
        }
        let (start, stop, step) = (number(parts[0])?, number(parts[1])?, number(parts[2])?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad(format!(
                "`{spec}` does not describe an increasing range"
            )));
        }
        let steps = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=steps).map(|k| snap(start + k as f64 * step)).collect()
    } else {
        spec.split(',').map(number).collect::<Result<Vec<_>>>()?
    };
    check_grid(&grid)?;
    Ok(grid)
}

fn snap(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::validation("alpha_grid", "grid is empty"));
    }
    for (i, &a) in grid.iter().enumerate() {
        check_alpha(a).map_err(|_| {
            Error::validation(format!("alpha_grid[{i}]"), format!("{a} is outside [0, 1]"))
        })?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaRow {
    pub alpha: f64,
    pub weights: WeightVector,
    pub f_u: Vec<f64>,
    /// Alternative ids, best first.
    pub order: Vec<String>,
}

fn order_ids(m: &FfMatrix, order: &[usize]) -> Vec<String> {
    order.iter().map(|&i| m.alternatives()[i].clone()).collect()
}

/// Re-ranks the alternatives for every alpha in `grid`. Objective and
/// subjective weights are computed once; only the blend changes.
pub fn alpha_sweep(
    prepared: &Prepared,
    options: &EvaluateOptions,
    grid: &[f64],
) -> Result<Vec<AlphaRow>> {
    check_grid(grid)?;
    let entropies = prepared.entropies(options.entropy, options.reduction, options.exec)?;
    let objective = entropies.objective_weights()?;
    let subjective = &prepared.piprecia.subjective;
    options.exec.try_map(grid, |&alpha| {
        let bundle = integrate_weights(&objective, subjective, alpha)?;
        let run = rank_matrix(&prepared.aggregated, &bundle.integrated, options.marcos)?;
        Ok(AlphaRow {
            alpha,
            weights: bundle.integrated,
            f_u: run.result.f_u,
            order: order_ids(&prepared.aggregated, &run.result.order),
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Up => "+",
            Direction::Down => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationRow {
    pub criterion: String,
    pub direction: Direction,
    pub weights: WeightVector,
    pub order: Vec<String>,
    pub tau: f64,
}

/// Scales each criterion weight by `1 +/- delta` in turn, renormalizes the
/// whole vector and compares the new order with the unperturbed one.
///
/// Rows are ordered by criterion, then `+` before `-`.
pub fn perturb_weights(
    aggregated: &FfMatrix,
    weights: &WeightVector,
    delta: f64,
    marcos: MarcosOptions,
    exec: Exec,
) -> Result<Vec<PerturbationRow>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain {
            what: "delta",
            value: delta,
            domain: "(0, 1)",
        });
    }
    let base = rank_matrix(aggregated, weights, marcos)?;
    let base_order = order_ids(aggregated, &base.result.order);
    let scenarios: Vec<(usize, Direction)> = (0..weights.len())
        .flat_map(|j| [(j, Direction::Up), (j, Direction::Down)])
        .collect();
    exec.try_map(&scenarios, |&(j, direction)| {
        let mut raw = weights.as_slice().to_vec();
        raw[j] *= 1.0 + direction.sign() * delta;
        let perturbed = WeightVector::normalize(&raw)?;
        let run = rank_matrix(aggregated, &perturbed, marcos)?;
        let order = order_ids(aggregated, &run.result.order);
        let tau = if order.len() < 2 {
            1.0
        } else {
            kendall_tau(&base_order, &order)?
        };
        Ok(PerturbationRow {
            criterion: aggregated.criteria()[j].clone(),
            direction,
            weights: perturbed,
            order,
            tau,
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRanking {
    pub model: EntropyModel,
    pub entropies: Vec<f64>,
    pub objective: WeightVector,
    pub integrated: WeightVector,
    pub f_u: Vec<f64>,
    pub order: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyComparison {
    pub alpha: f64,
    pub models: Vec<ModelRanking>,
    /// `tau[a][b]` between the orders of `models[a]` and `models[b]`.
    pub tau: Vec<Vec<f64>>,
}

impl EntropyComparison {
    /// Smallest pairwise tau; 1 when every model agrees.
    pub fn agreement(&self) -> f64 {
        self.tau.iter().flatten().copied().fold(1.0, f64::min)
    }
}

/// Ranks the problem once per entropy model at a fixed alpha.
pub fn compare_entropies(
    prepared: &Prepared,
    options: &EvaluateOptions,
    models: &[EntropyModel],
) -> Result<EntropyComparison> {
    let rankings = options.exec.try_map(models, |&model| {
        let (entropies, bundle) =
            prepared.weights(model, options.reduction, options.alpha, Exec::Sequential)?;
        let objective = bundle.objective.clone();
        let run = rank_matrix(&prepared.aggregated, &bundle.integrated, options.marcos)?;
        Ok(ModelRanking {
            model,
            entropies: entropies.values,
            objective,
            integrated: bundle.integrated,
            f_u: run.result.f_u,
            order: order_ids(&prepared.aggregated, &run.result.order),
        })
    })?;
    let mut tau = vec![vec![1.0; rankings.len()]; rankings.len()];
    for a in 0..rankings.len() {
        for b in a + 1..rankings.len() {
            let t = if rankings[a].order.len() < 2 {
                1.0
            } else {
                kendall_tau(&rankings[a].order, &rankings[b].order)?
            };
            tau[a][b] = t;
            tau[b][a] = t;
        }
    }
    Ok(EntropyComparison {
        alpha: options.alpha,
        models: rankings,
        tau,
    })
}

/// Each weight divided by the largest weight.
pub fn dominance(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::InvalidWeights(format!(
            "weight {w} is negative or not finite"
        )));
    }
    let max = weights.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::DegenerateWeights("all weights are zero".into()));
    }
    Ok(weights
        .iter()
        .map(|w| if *w == max { 1.0 } else { w / max })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDominance {
    pub model: EntropyModel,
    pub values: Vec<f64>,
}

/// Dominance of the integrated weights of every model in a comparison.
pub fn comparison_dominance(comparison: &EntropyComparison) -> Result<Vec<ModelDominance>> {
    comparison
        .models
        .iter()
        .map(|m| {
            Ok(ModelDominance {
                model: m.model,
                values: dominance(m.integrated.as_slice())?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub alternatives: Vec<String>,
    pub criteria: Vec<String>,
    pub alpha_table: Vec<AlphaRow>,
    pub delta: f64,
    pub base_order: Vec<String>,
    pub perturbation_table: Vec<PerturbationRow>,
    pub entropy_comparison: EntropyComparison,
    pub dominance: Vec<ModelDominance>,
}

pub fn robustness_report(
    prepared: &Prepared,
    options: &EvaluateOptions,
    grid: &[f64],
    delta: f64,
) -> Result<RobustnessReport> {
    let base = prepared.evaluate(options)?;
    let alpha_table = alpha_sweep(prepared, options, grid)?;
    let perturbation_table = perturb_weights(
        &prepared.aggregated,
        &base.weights.integrated,
        delta,
        options.marcos,
        options.exec,
    )?;
    let entropy_comparison = compare_entropies(prepared, options, &EntropyModel::ALL)?;
    let dominance = comparison_dominance(&entropy_comparison)?;
    Ok(RobustnessReport {
        alternatives: prepared.aggregated.alternatives().to_vec(),
        criteria: prepared.aggregated.criteria().to_vec(),
        alpha_table,
        delta,
        base_order: base.ranking().into_iter().map(String::from).collect(),
        perturbation_table,
        entropy_comparison,
        dominance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tau_extremes() {
        let a: Vec<u32> = (0..7).collect();
        let rev: Vec<u32> = a.iter().rev().copied().collect();
        assert_eq!(kendall_tau(&a, &a).unwrap(), 1.0);
        assert_eq!(kendall_tau(&a, &rev).unwrap(), -1.0);
        let mut swapped = a.clone();
        swapped.swap(3, 4);
        assert_abs_diff_eq!(
            kendall_tau(&a, &swapped).unwrap(),
            19.0 / 21.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn tau_rejects_mismatched_items() {
        assert!(matches!(
            kendall_tau(&["a", "b"], &["a", "c"]),
            Err(Error::ItemMismatch(_))
        ));
        assert!(matches!(
            kendall_tau(&["a", "a"], &["a", "b"]),
            Err(Error::ItemMismatch(_))
        ));
        assert!(matches!(
            kendall_tau(&["a"], &["a"]),
            Err(Error::ItemMismatch(_))
        ));
        assert!(matches!(
            kendall_tau(&["a", "b"], &["a", "b", "c"]),
            Err(Error::ItemMismatch(_))
        ));
    }

    #[test]
    fn tau_b_ties() {
        // scipy.stats.kendalltau([1,2,2,3],[1,2,3,3]) = 0.8
        let t = kendall_tau_b(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 3.0]).unwrap();
        assert_abs_diff_eq!(t, 0.8, epsilon = 1e-12);
        assert_eq!(kendall_tau_b(&[1.0, 1.0], &[2.0, 2.0]).unwrap(), 1.0);
        assert_eq!(kendall_tau_b(&[1.0, 1.0], &[1.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid(DEFAULT_ALPHA_GRID).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(g[10], 1.0);
        assert_eq!(parse_grid("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_grid("0, 0.25,1").unwrap(), vec![0.0, 0.25, 1.0]);
        let err = parse_grid("0:2:0.5").unwrap_err();
        assert_eq!(err.path(), Some("alpha_grid[3]"));
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn dominance_values() {
        let d = dominance(&[0.205, 0.195, 0.1625, 0.1595, 0.151, 0.1275]).unwrap();
        let expect = [1.0, 0.9512195, 0.7926829, 0.7780488, 0.7365854, 0.6219512];
        for (x, y) in d.iter().zip(expect) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-7);
        }
        assert_eq!(dominance(&[0.25; 4]).unwrap(), vec![1.0; 4]);
        assert_eq!(dominance(&[0.3]).unwrap(), vec![1.0]);
        assert!(matches!(
            dominance(&[0.0, 0.0]),
            Err(Error::DegenerateWeights(_))
        ));
    }

    #[test]
    fn delta_domain() {
        let m = FfMatrix::from_rows(
            vec![
                vec![crate::Ffn::new(0.7, 0.4).unwrap()],
                vec![crate::Ffn::new(0.5, 0.5).unwrap()],
            ],
            vec![crate::marcos::Orientation::Benefit],
        )
        .unwrap();
        let w = WeightVector::uniform(1).unwrap();
        for delta in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(
                perturb_weights(&m, &w, delta, MarcosOptions::default(), Exec::Sequential).is_err()
            );
        }
    }
}
