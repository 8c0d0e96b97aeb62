use serde::{Deserialize, Serialize};

use super::Ffn;
use crate::error::{Error, Result};

/// Ordered mapping from linguistic term labels to FFNs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ScaleEntry>", into = "Vec<ScaleEntry>")]
pub struct LinguisticScale {
    entries: Vec<(String, Ffn)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScaleEntry {
    term: String,
    mu: f64,
    nu: f64,
}

impl TryFrom<Vec<ScaleEntry>> for LinguisticScale {
    type Error = Error;
    fn try_from(raw: Vec<ScaleEntry>) -> Result<Self> {
        let entries = raw
            .into_iter()
            .map(|e| Ok((e.term, Ffn::new(e.mu, e.nu)?)))
            .collect::<Result<Vec<_>>>()?;
        LinguisticScale::new(entries)
    }
}

impl From<LinguisticScale> for Vec<ScaleEntry> {
    fn from(scale: LinguisticScale) -> Self {
        scale
            .entries
            .into_iter()
            .map(|(term, f)| ScaleEntry {
                term,
                mu: f.mu(),
                nu: f.nu(),
            })
            .collect()
    }
}

impl Default for LinguisticScale {
    /// The seven-term importance scale from "Absolutely Important" down to
    /// "Unimportant".
    fn default() -> Self {
        let entries = [
            ("AI", 1.00, 0.00),
            ("VI", 0.85, 0.25),
            ("I", 0.70, 0.40),
            ("M", 0.50, 0.50),
            ("L", 0.40, 0.70),
            ("VL", 0.25, 0.85),
            ("U", 0.00, 1.00),
        ]
        .into_iter()
        .map(|(t, mu, nu)| {
            (
                t.to_string(),
                Ffn::new(mu, nu).expect("default scale is valid"),
            )
        })
        .collect();
        LinguisticScale { entries }
    }
}

impl LinguisticScale {
    pub fn new(entries: Vec<(String, Ffn)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, (term, _)) in entries.iter().enumerate() {
            if term.is_empty() {
                return Err(Error::validation(
                    format!("scale[{i}].term"),
                    "empty term label",
                ));
            }
            if entries[..i].iter().any(|(t, _)| t == term) {
                return Err(Error::validation(
                    format!("scale[{i}].term"),
                    format!("duplicate term `{term}`"),
                ));
            }
        }
        Ok(LinguisticScale { entries })
    }

    pub fn get(&self, term: &str) -> Result<Ffn> {
        self.entries
            .iter()
            .find(|(t, _)| t == term)
            .map(|(_, f)| *f)
            .ok_or_else(|| Error::UnknownTerm(term.to_string()))
    }

    pub fn contains(&self, term: &str) -> bool {
        self.entries.iter().any(|(t, _)| t == term)
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(t, _)| t.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Ffn)> {
        self.entries.iter().map(|(t, f)| (t.as_str(), *f))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Looks a term up in `scale`.
pub fn from_linguistic(term: &str, scale: &LinguisticScale) -> Result<Ffn> {
    scale.get(term)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scale_terms() {
        let s = LinguisticScale::default();
        assert_eq!(s.get("AI").unwrap(), Ffn::ONE);
        assert_eq!(s.get("M").unwrap(), Ffn::new(0.5, 0.5).unwrap());
        assert_eq!(
            from_linguistic("VI", &s).unwrap(),
            Ffn::new(0.85, 0.25).unwrap()
        );
        assert_eq!(s.get("ZZ"), Err(Error::UnknownTerm("ZZ".into())));
        assert_eq!(
            s.terms().collect::<Vec<_>>(),
            ["AI", "VI", "I", "M", "L", "VL", "U"]
        );
    }

    #[test]
    fn antonyms_are_complements() {
        let s = LinguisticScale::default();
        for (a, b) in [("AI", "U"), ("VI", "VL"), ("I", "L"), ("M", "M")] {
            assert_eq!(s.get(a).unwrap().complement(), s.get(b).unwrap());
        }
    }

    #[test]
    fn rejects_duplicates() {
        let f = Ffn::new(0.5, 0.5).unwrap();
        let err = LinguisticScale::new(vec![("M".into(), f), ("M".into(), f)]).unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "scale[1].term"));
        assert_eq!(LinguisticScale::new(vec![]), Err(Error::EmptyInput));
    }
}
