//! JSON presentation files. Indices are 1-based; coefficients are scalar
//! strings (`"3"`, `"-1/2"`); unknown fields are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AlgebraPresentation, LVector, Parity};
use crate::arith::Field;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub name: String,
    pub char: u64,
    pub basis: Vec<String>,
    pub parity: Vec<FileParity>,
    pub brackets: Vec<BracketRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmap: Option<Vec<PMapRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_ids: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileParity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PMapRecord {
    pub i: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub k: usize,
    pub c: String,
}

fn one_based(i: usize, what: &str) -> Result<usize> {
    i.checked_sub(1).ok_or_else(|| Error::Parse {
        location: what.to_string(),
        message: "indices are 1-based; 0 is not allowed".into(),
    })
}

fn parse_terms(field: Field, terms: &[TermRecord], what: &str) -> Result<LVector> {
    let mut v = LVector::zero();
    for (n, t) in terms.iter().enumerate() {
        let loc = format!("{what}.terms[{n}]");
        let k = one_based(t.k, &format!("{loc}.k"))?;
        let c = field.parse(&t.c).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                location: format!("{loc}.c"),
                message,
            },
            other => other,
        })?;
        v.add_term(k, c);
    }
    Ok(v)
}

fn write_terms(v: &LVector) -> Vec<TermRecord> {
    v.iter()
        .map(|(k, c)| TermRecord {
            k: k + 1,
            c: c.to_string(),
        })
        .collect()
}

impl PresentationFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    /// Converts to a presentation without checking the axioms.
    pub fn to_presentation(&self) -> Result<AlgebraPresentation> {
        let field = Field::of_characteristic(self.char).map_err(|e| Error::Parse {
            location: "char".into(),
            message: e.to_string(),
        })?;
        let parity = self
            .parity
            .iter()
            .map(|p| match p {
                FileParity::Even => Parity::Even,
                FileParity::Odd => Parity::Odd,
            })
            .collect();
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for (n, b) in self.brackets.iter().enumerate() {
            let what = format!("brackets[{n}]");
            let i = one_based(b.i, &format!("{what}.i"))?;
            let j = one_based(b.j, &format!("{what}.j"))?;
            brackets.push(((i, j), parse_terms(field, &b.terms, &what)?));
        }
        let pmap = match &self.pmap {
            None => None,
            Some(records) => {
                let mut out = Vec::with_capacity(records.len());
                for (n, r) in records.iter().enumerate() {
                    let what = format!("pmap[{n}]");
                    let i = one_based(r.i, &format!("{what}.i"))?;
                    out.push((i, parse_terms(field, &r.terms, &what)?));
                }
                Some(out)
            }
        };
        let center_ids = match &self.center_ids {
            None => None,
            Some(ids) => Some(
                ids.iter()
                    .enumerate()
                    .map(|(n, &j)| one_based(j, &format!("center_ids[{n}]")))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        AlgebraPresentation::new(
            self.name.clone(),
            field,
            self.basis.clone(),
            parity,
            brackets,
            pmap,
            center_ids,
        )
    }

    pub fn from_presentation(p: &AlgebraPresentation) -> Self {
        PresentationFile {
            name: p.name().to_string(),
            char: p.characteristic(),
            basis: p.basis_names().to_vec(),
            parity: p
                .parities()
                .iter()
                .map(|q| match q {
                    Parity::Even => FileParity::Even,
                    Parity::Odd => FileParity::Odd,
                })
                .collect(),
            brackets: p
                .explicit_brackets()
                .iter()
                .map(|((i, j), v)| BracketRecord {
                    i: i + 1,
                    j: j + 1,
                    terms: write_terms(v),
                })
                .collect(),
            pmap: p.pmap().map(|pm| {
                pm.iter()
                    .map(|(i, v)| PMapRecord {
                        i: i + 1,
                        terms: write_terms(v),
                    })
                    .collect()
            }),
            center_ids: p
                .center_ids()
                .map(|ids| ids.iter().map(|j| j + 1).collect()),
        }
    }
}

impl AlgebraPresentation {
    /// Parses, validates and canonicalizes a presentation from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut pres = PresentationFile::from_json(text)?.to_presentation()?;
        pres.validate().into_result()?;
        pres.canonicalize();
        Ok(pres)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        PresentationFile::from_presentation(self).to_json()
    }
}
