#![allow(dead_code)]

use ffdecide_core::marcos::Orientation;
use ffdecide_core::problem::{Alternative, Criterion, DecisionProblem, Expert};
use ffdecide_core::{Ffn, LinguisticScale};
use proptest::prelude::*;

pub const TERMS: [&str; 7] = ["AI", "VI", "I", "M", "L", "VL", "U"];

/// Any valid FFN: `mu` uniform, `nu` uniform below the cube-sum boundary.
pub fn ffn() -> impl Strategy<Value = Ffn> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(mu, t)| {
        let nu_max = (1.0 - mu * mu * mu).max(0.0).cbrt();
        Ffn::new(mu, t * nu_max).unwrap()
    })
}

/// Strictly positive weights normalized to unit sum.
pub fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..1.0f64, n).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    })
}

fn term() -> impl Strategy<Value = String> {
    prop::sample::select(TERMS.to_vec()).prop_map(String::from)
}

/// Random linguistic problems on the default scale.
pub fn problem(
    max_experts: usize,
    max_alts: usize,
    max_crit: usize,
) -> impl Strategy<Value = DecisionProblem> {
    (1..=max_experts, 1..=max_alts, 1..=max_crit).prop_flat_map(|(ne, na, nc)| {
        (
            prop::collection::vec(prop::bool::ANY, nc),
            prop::collection::vec(term(), ne),
            prop::collection::vec(
                prop::collection::vec(prop::collection::vec(term(), nc), na),
                ne,
            ),
            prop::collection::vec(prop::collection::vec(term(), nc), ne),
        )
            .prop_map(
                move |(cost, grades, evaluations, importance)| DecisionProblem {
                    title: format!("random {ne}x{na}x{nc}"),
                    criteria: cost
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| Criterion {
                            id: format!("C{}", j + 1),
                            name: format!("criterion {}", j + 1),
                            orientation: if c {
                                Orientation::Cost
                            } else {
                                Orientation::Benefit
                            },
                        })
                        .collect(),
                    alternatives: (0..na)
                        .map(|i| Alternative {
                            id: format!("R{}", i + 1),
                            name: format!("alternative {}", i + 1),
                        })
                        .collect(),
                    experts: grades
                        .into_iter()
                        .enumerate()
                        .map(|(k, grade)| Expert {
                            id: format!("S{}", k + 1),
                            grade,
                        })
                        .collect(),
                    scale: LinguisticScale::default(),
                    evaluations,
                    criterion_importance: importance,
                },
            )
    })
}
