use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{cube_sum_mean, Ffn, WeightVector};
use crate::error::{Error, Result};

/// Weighted aggregation operator used to merge expert judgments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregator {
    #[default]
    Ffwa,
    Ffwg,
}

impl Aggregator {
    pub fn apply(self, items: &[Ffn], w: &WeightVector) -> Result<Ffn> {
        match self {
            Aggregator::Ffwa => ffwa(items, w),
            Aggregator::Ffwg => ffwg(items, w),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Aggregator::Ffwa => "ffwa",
            Aggregator::Ffwg => "ffwg",
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aggregator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ffwa" => Ok(Aggregator::Ffwa),
            "ffwg" => Ok(Aggregator::Ffwg),
            other => Err(Error::validation(
                "aggregator",
                format!("unknown aggregator `{other}` (expected ffwa or ffwg)"),
            )),
        }
    }
}

fn check_shape(items: &[Ffn], w: &WeightVector) -> Result<()> {
    if items.is_empty() {
        return Err(Error::EmptyInput);
    }
    if items.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            got: items.len(),
        });
    }
    Ok(())
}

/// Fermatean fuzzy weighted average:
/// `mu = (1 - prod (1 - mu_i^3)^w_i)^(1/3)`, `nu = prod nu_i^w_i`.
pub fn ffwa(items: &[Ffn], w: &WeightVector) -> Result<Ffn> {
    check_shape(items, w)?;
    let mu = cube_sum_mean(items.iter().map(|f| f.mu()).zip(w.iter()));
    let nu = items
        .iter()
        .zip(w.iter())
        .map(|(f, wi)| f.nu().powf(wi))
        .product();
    Ok(Ffn::clamped(mu, nu))
}

/// Fermatean fuzzy weighted geometric mean, the complement dual of [`ffwa`].
pub fn ffwg(items: &[Ffn], w: &WeightVector) -> Result<Ffn> {
    check_shape(items, w)?;
    let mu = items
        .iter()
        .zip(w.iter())
        .map(|(f, wi)| f.mu().powf(wi))
        .product();
    let nu = cube_sum_mean(items.iter().map(|f| f.nu()).zip(w.iter()));
    Ok(Ffn::clamped(mu, nu))
}
