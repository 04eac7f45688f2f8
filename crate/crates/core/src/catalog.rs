//! Built-in presentations.

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::presentation::{AlgebraPresentation, LVector, Parity};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub presentation: AlgebraPresentation,
    pub notes: &'static str,
}

pub const KEYS: [&str; 5] = ["heisenberg3", "sl2", "gl11", "abelian1", "osp12"];

struct Builder {
    field: Field,
    names: Vec<&'static str>,
    parity: Vec<Parity>,
    brackets: Vec<((usize, usize), LVector)>,
    pmap: Vec<(usize, LVector)>,
}

impl Builder {
    fn new(field: Field, basis: &[(&'static str, Parity)]) -> Self {
        Builder {
            field,
            names: basis.iter().map(|b| b.0).collect(),
            parity: basis.iter().map(|b| b.1).collect(),
            brackets: Vec::new(),
            pmap: Vec::new(),
        }
    }

    fn idx(&self, name: &str) -> usize {
        self.names
            .iter()
            .position(|n| *n == name)
            .expect("known name")
    }

    fn vec(&self, terms: &[(i64, &str)]) -> LVector {
        terms
            .iter()
            .map(|(c, n)| (self.idx(n), self.field.from_i64(*c)))
            .collect()
    }

    fn bracket(mut self, a: &str, b: &str, terms: &[(i64, &str)]) -> Self {
        let v = self.vec(terms);
        let key = (self.idx(a), self.idx(b));
        self.brackets.push((key, v));
        self
    }

    fn pmap(mut self, a: &str, terms: &[(i64, &str)]) -> Self {
        if self.field.characteristic() > 0 {
            let v = self.vec(terms);
            let i = self.idx(a);
            self.pmap.push((i, v));
        }
        self
    }

    fn build(self, key: &str, center: &[&str]) -> AlgebraPresentation {
        let center_ids = center.iter().map(|n| self.idx(n)).collect();
        let restricted = self.field.characteristic() > 0;
        let mut p = AlgebraPresentation::new(
            key,
            self.field,
            self.names.iter().map(|s| s.to_string()).collect(),
            self.parity,
            self.brackets,
            restricted.then_some(self.pmap),
            Some(center_ids),
        )
        .expect("catalog entries are well formed");
        p.canonicalize();
        p
    }
}

use Parity::{Even, Odd};

fn heisenberg3(field: Field) -> AlgebraPresentation {
    Builder::new(field, &[("X", Even), ("Y", Even), ("Z", Even)])
        .bracket("X", "Y", &[(1, "Z")])
        .pmap("X", &[])
        .pmap("Y", &[])
        .pmap("Z", &[])
        .build("heisenberg3", &["Z"])
}

fn sl2(field: Field) -> AlgebraPresentation {
    Builder::new(field, &[("e", Even), ("h", Even), ("f", Even)])
        .bracket("e", "h", &[(-2, "e")])
        .bracket("e", "f", &[(1, "h")])
        .bracket("h", "f", &[(-2, "f")])
        .pmap("e", &[])
        .pmap("h", &[(1, "h")])
        .pmap("f", &[])
        .build("sl2", &[])
}

fn gl11(field: Field) -> AlgebraPresentation {
    // Z = E11 + E22, H = E11 - E22.
    Builder::new(
        field,
        &[("Z", Even), ("H", Even), ("E12", Odd), ("E21", Odd)],
    )
    .bracket("H", "E12", &[(2, "E12")])
    .bracket("H", "E21", &[(-2, "E21")])
    .bracket("E12", "E21", &[(1, "Z")])
    .pmap("Z", &[(1, "Z")])
    .pmap("H", &[(1, "H")])
    .build("gl11", &["Z"])
}

fn abelian1(field: Field) -> AlgebraPresentation {
    Builder::new(field, &[("a", Even)])
        .pmap("a", &[])
        .build("abelian1", &["a"])
}

fn osp12(field: Field) -> AlgebraPresentation {
    Builder::new(
        field,
        &[
            ("e", Even),
            ("h", Even),
            ("f", Even),
            ("x", Odd),
            ("y", Odd),
        ],
    )
    .bracket("e", "h", &[(-2, "e")])
    .bracket("e", "f", &[(1, "h")])
    .bracket("e", "y", &[(-1, "x")])
    .bracket("h", "f", &[(-2, "f")])
    .bracket("h", "x", &[(1, "x")])
    .bracket("h", "y", &[(-1, "y")])
    .bracket("f", "x", &[(-1, "y")])
    .bracket("x", "x", &[(2, "e")])
    .bracket("x", "y", &[(1, "h")])
    .bracket("y", "y", &[(-2, "f")])
    .pmap("e", &[])
    .pmap("h", &[(1, "h")])
    .pmap("f", &[])
    .build("osp12", &[])
}

/// Looks up a catalog entry over the field of the given characteristic.
pub fn catalog_entry(key: &str, characteristic: u64) -> Result<CatalogEntry> {
    let field = Field::of_characteristic(characteristic)?;
    let unsupported = |why: &str| {
        Err(Error::MalformedInput(format!(
            "catalog entry {key} is not available in characteristic {characteristic}: {why}"
        )))
    };
    let (presentation, notes) = match key {
        "heisenberg3" => (
            heisenberg3(field),
            "3-dimensional Heisenberg algebra [X, Y] = Z; center spanned by Z",
        ),
        "sl2" => {
            if characteristic == 2 {
                return unsupported("h acts by 2 = 0");
            }
            (
                sl2(field),
                "semisimple; restricted with e^[p] = f^[p] = 0, h^[p] = h",
            )
        }
        "gl11" => {
            if characteristic == 2 {
                return unsupported("superalgebras need p != 2");
            }
            (
                gl11(field),
                "gl(1|1) in the adapted basis Z = E11 + E22, H = E11 - E22, E12, E21",
            )
        }
        "abelian1" => (abelian1(field), "one-dimensional abelian algebra; J = I"),
        "osp12" => {
            if characteristic == 2 {
                return unsupported("superalgebras need p != 2");
            }
            (osp12(field), "simple Lie superalgebra osp(1|2)")
        }
        _ => return Err(Error::UnknownKey(key.to_string())),
    };
    let key = KEYS.iter().find(|k| **k == key).copied().expect("listed");
    Ok(CatalogEntry {
        key,
        presentation,
        notes,
    })
}

pub fn catalog_get(key: &str, characteristic: u64) -> Result<AlgebraPresentation> {
    catalog_entry(key, characteristic).map(|e| e.presentation)
}
