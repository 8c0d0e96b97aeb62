//! Fermatean fuzzy multi-criteria decision engine.
//!
//! Expert judgments given as linguistic terms are converted to Fermatean
//! fuzzy numbers ([`ffn`]), aggregated, weighted by a blend of entropy-based
//! objective weights ([`entropy`]) and PIPRECIA subjective weights
//! ([`piprecia`]), and ranked with MARCOS ([`marcos`]). [`robustness`]
//! provides parameter sweeps, weight perturbation with Kendall's tau, entropy
//! model comparison and criterion dominance.

pub mod entropy;
pub mod error;
pub mod exec;
pub mod ffn;
pub mod marcos;
pub mod payload;
pub mod pipeline;
pub mod piprecia;
pub mod problem;
pub mod report;
pub mod robustness;

pub use error::{Error, ErrorKind, Result};
pub use exec::Exec;
pub use ffn::{Aggregator, Ffn, LinguisticScale, ScoreTriple, WeightVector};
pub use pipeline::{evaluate, EvaluateOptions, Evaluation, Prepared};
pub use problem::{builtin_case, load_problem, save_problem, DecisionProblem};
