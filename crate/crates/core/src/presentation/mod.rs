//! Finite-dimensional Lie (super)algebras given by structure constants.
//!
//! Brackets are stored as explicitly supplied entries; any pair that is not
//! supplied is derived by super skew-symmetry from its transpose. After
//! [`AlgebraPresentation::canonicalize`] only pairs `i < j` and odd diagonal
//! pairs `(i, i)` remain explicit.

mod file;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{invert_dense, Combination, Field, Scalar, SparseMatrix};
use crate::error::{Error, Result};

pub use file::{BracketRecord, PMapRecord, PresentationFile, TermRecord};
pub use validate::{Issue, ValidationReport};

/// An element of L in the basis `e_0 .. e_{n-1}` (0-based indices).
pub type LVector = Combination<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn from_bit(b: u8) -> Parity {
        if b & 1 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Koszul sign `(-1)^{|a||b|}` as `true` when it is `-1`.
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    name: String,
    field: Field,
    basis: Vec<String>,
    parity: Vec<Parity>,
    explicit: BTreeMap<(usize, usize), LVector>,
    pmap: Option<BTreeMap<usize, LVector>>,
    center_ids: Option<Vec<usize>>,
    /// Dense bracket table `n * n`, derived from `explicit`.
    table: Vec<LVector>,
}

impl AlgebraPresentation {
    /// Builds a presentation from 0-based bracket entries. Index and field
    /// errors are reported as `MalformedInput`; axioms are checked separately
    /// by [`AlgebraPresentation::validate`].
    pub fn new(
        name: impl Into<String>,
        field: Field,
        basis: Vec<String>,
        parity: Vec<Parity>,
        brackets: Vec<((usize, usize), LVector)>,
        pmap: Option<Vec<(usize, LVector)>>,
        center_ids: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = basis.len();
        let bad = |m: String| Err(Error::MalformedInput(m));
        if parity.len() != n {
            return bad(format!("{} basis names but {} parities", n, parity.len()));
        }
        for (a, name) in basis.iter().enumerate() {
            if !valid_name(name) {
                return bad(format!("invalid basis name {name:?}"));
            }
            if basis[..a].contains(name) {
                return bad(format!("duplicate basis name {name:?}"));
            }
        }
        let check_vec = |v: &LVector, what: &str| -> Result<()> {
            for (k, c) in v {
                if *k >= n {
                    return Err(Error::MalformedInput(format!(
                        "{what}: index {} out of range 1..={n}",
                        k + 1
                    )));
                }
                if c.field() != field {
                    return Err(Error::MalformedInput(format!(
                        "{what}: coefficient over {} in an algebra over {field}",
                        c.field()
                    )));
                }
            }
            Ok(())
        };
        let mut explicit = BTreeMap::new();
        for ((i, j), v) in brackets {
            if i >= n || j >= n {
                return bad(format!(
                    "bracket ({}, {}) out of range 1..={n}",
                    i + 1,
                    j + 1
                ));
            }
            check_vec(&v, &format!("bracket ({}, {})", i + 1, j + 1))?;
            if explicit.insert((i, j), v).is_some() {
                return bad(format!("duplicate bracket record ({}, {})", i + 1, j + 1));
            }
        }
        let pmap = match pmap {
            None => None,
            Some(entries) => {
                let mut m = BTreeMap::new();
                for (i, v) in entries {
                    if i >= n {
                        return bad(format!("pmap index {} out of range 1..={n}", i + 1));
                    }
                    check_vec(&v, &format!("pmap of {}", i + 1))?;
                    if m.insert(i, v).is_some() {
                        return bad(format!("duplicate pmap record {}", i + 1));
                    }
                }
                Some(m)
            }
        };
        if let Some(ids) = &center_ids {
            for (a, &j) in ids.iter().enumerate() {
                if j >= n {
                    return bad(format!("center id {} out of range 1..={n}", j + 1));
                }
                if ids[..a].contains(&j) {
                    return bad(format!("duplicate center id {}", j + 1));
                }
            }
        }
        let mut pres = AlgebraPresentation {
            name: name.into(),
            field,
            basis,
            parity,
            explicit,
            pmap,
            center_ids: center_ids.map(|mut v| {
                v.sort_unstable();
                v
            }),
            table: Vec::new(),
        };
        pres.rebuild_table();
        Ok(pres)
    }

    fn rebuild_table(&mut self) {
        let n = self.dim();
        let mut table = vec![LVector::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = if let Some(v) = self.explicit.get(&(i, j)) {
                    v.clone()
                } else if let Some(v) = self.explicit.get(&(j, i)) {
                    // [e_i, e_j] = -(-1)^{|i||j|} [e_j, e_i]
                    if self.parity[i].koszul(self.parity[j]) {
                        v.clone()
                    } else {
                        -v
                    }
                } else {
                    LVector::zero()
                };
            }
        }
        self.table = table;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.basis[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn is_super(&self) -> bool {
        self.parity.iter().any(|p| p.is_odd())
    }

    pub fn even_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(|&i| !self.parity[i].is_odd())
    }

    pub fn pmap(&self) -> Option<&BTreeMap<usize, LVector>> {
        self.pmap.as_ref()
    }

    pub fn center_ids(&self) -> Option<&[usize]> {
        self.center_ids.as_deref()
    }

    pub fn explicit_brackets(&self) -> &BTreeMap<(usize, usize), LVector> {
        &self.explicit
    }

    /// `[e_i, e_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> &LVector {
        &self.table[i * self.dim() + j]
    }

    /// Structure constant `a_{ijk}`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.bracket(i, j)
            .coeff(&k)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Bilinear extension of the bracket.
    pub fn bracket_vec(&self, x: &LVector, y: &LVector) -> LVector {
        let mut out = LVector::zero();
        for (i, a) in x {
            for (j, b) in y {
                out.add_scaled(self.bracket(*i, *j), &(a * b));
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> LVector {
        LVector::term(i, self.field.one())
    }

    /// Parity of a vector if it is homogeneous (the zero vector is even).
    pub fn vector_parity(&self, v: &LVector) -> Option<Parity> {
        let mut it = v.keys().map(|&k| self.parity[k]);
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    pub fn format_vector(&self, v: &LVector) -> String {
        format_combination(v, |k| self.basis[*k].clone())
    }

    /// Removes explicit entries that are implied by skew-symmetry and drops
    /// zero brackets, leaving only `i < j` and odd `(i, i)`.
    pub fn canonicalize(&mut self) {
        let n = self.dim();
        let mut explicit = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                if i == j && !self.parity[i].is_odd() {
                    continue;
                }
                let v = self.bracket(i, j);
                if !v.is_zero() {
                    explicit.insert((i, j), v.clone());
                }
            }
        }
        self.explicit = explicit;
        self.rebuild_table();
    }

    pub fn with_center_ids(mut self, ids: Option<Vec<usize>>) -> Self {
        self.center_ids = ids.map(|mut v| {
            v.sort_unstable();
            v
        });
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Exact basis of the center C(L), in reduced echelon form.
    pub fn center_basis(&self) -> Vec<LVector> {
        let n = self.dim();
        // x = sum x_i e_i is central iff sum_i x_i a_{ijk} = 0 for all j, k.
        let mut m = SparseMatrix::new(n * n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.bracket(i, j) {
                    m.insert(j * n + k, i, c.clone());
                }
            }
        }
        let kernel = m.kernel_basis().expect("entries share the algebra's field");
        // Present the basis with pivots leading: reorder to row echelon form.
        let mut vecs: Vec<LVector> = kernel
            .into_iter()
            .map(|v| v.into_iter().enumerate().collect())
            .collect();
        vecs.sort_by_key(|v: &LVector| v.keys().next().copied());
        vecs
    }

    /// Applies `ad(x)` as a linear map.
    pub fn ad(&self, x: &LVector, y: &LVector) -> LVector {
        self.bracket_vec(x, y)
    }

    /// The p-th power map extended from basis values by the Jacobson formula
    /// `(x+y)^[p] = x^[p] + y^[p] + sum_i s_i(x, y)` and p-semilinearity.
    pub fn p_map_of(&self, x: &LVector) -> Result<LVector> {
        let p = self.characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        let pmap = self.pmap.as_ref().ok_or(Error::MissingPMap)?;
        let mut acc = LVector::zero();
        let mut acc_p = LVector::zero();
        for (i, c) in x {
            if self.parity[*i].is_odd() {
                return Err(Error::OddGenerator(self.basis[*i].clone()));
            }
            let img = pmap.get(i).ok_or(Error::MissingPMap)?;
            let term = LVector::term(*i, c.clone());
            let term_p = img.scale(&c.pow(p));
            if !acc.is_zero() {
                let s = self.jacobson_correction(&acc, &term, p);
                acc_p = &acc_p + &s;
            }
            acc_p = &acc_p + &term_p;
            acc = &acc + &term;
        }
        Ok(acc_p)
    }

    /// `sum_{i=1}^{p-1} s_i(x, y)` where `i s_i(x, y)` is the coefficient of
    /// `t^{i-1}` in `ad(t x + y)^{p-1}(x)`.
    fn jacobson_correction(&self, x: &LVector, y: &LVector, p: u64) -> LVector {
        let p = p as usize;
        let mut poly: Vec<LVector> = vec![x.clone()];
        for _ in 0..p - 1 {
            let mut next = vec![LVector::zero(); poly.len() + 1];
            for (d, coef) in poly.iter().enumerate() {
                next[d] = &next[d] + &self.bracket_vec(y, coef);
                next[d + 1] = &next[d + 1] + &self.bracket_vec(x, coef);
            }
            poly = next;
        }
        let mut out = LVector::zero();
        for i in 1..p {
            if let Some(c) = poly.get(i - 1) {
                let inv = self.field.from_i64(i as i64).invert().expect("i < p");
                out.add_scaled(c, &inv);
            }
        }
        out
    }

    /// Returns an equivalent presentation whose first `|J|` basis vectors span
    /// the center, together with the change-of-basis matrix whose column `a`
    /// holds the new basis vector `a` in old coordinates.
    pub fn adapt_basis(&self) -> Result<(AlgebraPresentation, Vec<Vec<Scalar>>)> {
        let n = self.dim();
        let f = self.field;
        let center = self.center_basis();
        for v in &center {
            if v.keys().any(|&k| self.parity[k].is_odd()) {
                return Err(Error::OddCenter(self.name.clone()));
            }
        }
        let dense = |v: &LVector| -> Vec<Scalar> {
            (0..n)
                .map(|k| v.coeff(&k).cloned().unwrap_or_else(|| f.zero()))
                .collect()
        };
        let mut columns: Vec<Vec<Scalar>> = center.iter().map(dense).collect();

        // Complement: vectors orthogonal to the center, scaled to a leading 1.
        let mut m = SparseMatrix::new(center.len(), n, f);
        for (r, v) in center.iter().enumerate() {
            for (k, c) in v {
                m.insert(r, *k, c.clone());
            }
        }
        let mut complement: Vec<Vec<Scalar>> = m
            .kernel_basis()
            .expect("same field")
            .into_iter()
            .map(|mut v| {
                if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
                    let inv = lead.invert().expect("nonzero");
                    for x in v.iter_mut() {
                        *x *= &inv;
                    }
                }
                v
            })
            .collect();
        let mut candidate = columns.clone();
        candidate.append(&mut complement.clone());
        if invert_dense(f, &transpose(&candidate)).is_none() {
            // The orthogonal complement can meet the center over GF(p); fall
            // back to unit vectors.
            complement.clear();
            let mut e = crate::arith::Echelon::new(f, n);
            for c in &columns {
                e.push_row(&sparse(c));
            }
            for k in 0..n {
                let mut u = vec![f.zero(); n];
                u[k] = f.one();
                if e.push_row(&sparse(&u)) {
                    complement.push(u);
                }
            }
        }
        columns.extend(complement);
        let change = transpose(&columns);
        let inverse = invert_dense(f, &change).expect("adapted basis is a basis");

        let to_new = |w: &LVector| -> LVector {
            let mut out = LVector::zero();
            for (k, c) in w {
                for (a, row) in inverse.iter().enumerate() {
                    out.add_term(a, &row[*k] * c);
                }
            }
            out
        };
        let new_vecs: Vec<LVector> = columns
            .iter()
            .map(|col| col.iter().cloned().enumerate().collect())
            .collect();

        let mut names = Vec::with_capacity(n);
        let (mut zc, mut uc) = (0, 0);
        for (a, v) in new_vecs.iter().enumerate() {
            let unit = (v.len() == 1).then(|| v.iter().next().unwrap());
            let name = match unit {
                Some((k, c)) if c.is_one() => self.basis[*k].clone(),
                _ => loop {
                    let cand = if a < center.len() {
                        zc += 1;
                        format!("z{zc}")
                    } else {
                        uc += 1;
                        format!("u{uc}")
                    };
                    if !self.basis.contains(&cand) {
                        break cand;
                    }
                },
            };
            names.push(name);
        }
        let parity: Vec<Parity> = new_vecs
            .iter()
            .map(|v| self.vector_parity(v).expect("homogeneous basis vector"))
            .collect();

        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a..n {
                if a == b && !parity[a].is_odd() {
                    continue;
                }
                let w = to_new(&self.bracket_vec(&new_vecs[a], &new_vecs[b]));
                if !w.is_zero() {
                    brackets.push(((a, b), w));
                }
            }
        }
        let pmap = match (&self.pmap, self.characteristic()) {
            (Some(_), p) if p > 0 => {
                let mut entries = Vec::new();
                for a in 0..n {
                    if !parity[a].is_odd() {
                        entries.push((a, to_new(&self.p_map_of(&new_vecs[a])?)));
                    }
                }
                Some(entries)
            }
            _ => None,
        };
        let adapted = AlgebraPresentation::new(
            self.name.clone(),
            f,
            names,
            parity,
            brackets,
            pmap,
            Some((0..center.len()).collect()),
        )?;
        Ok((adapted, change))
    }
}

fn sparse(v: &[Scalar]) -> Vec<(usize, Scalar)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// `columns[a][k]` to `m[k][a]`.
fn transpose(columns: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = columns.len();
    let rows = columns.first().map_or(0, Vec::len);
    (0..rows)
        .map(|k| (0..n).map(|a| columns[a][k].clone()).collect())
        .collect()
}

/// Identifier rule shared by basis names and the element grammar.
pub fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Renders `c1 * a + c2 * b - ...` with unit coefficients elided.
pub fn format_combination<K: Ord + Clone>(
    v: &Combination<K>,
    name: impl Fn(&K) -> String,
) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (k, c)) in v.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        let body = name(k);
        let term = if body.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            body
        } else {
            format!("{mag} * {body}")
        };
        match (idx, neg) {
            (0, false) => out.push_str(&term),
            (0, true) => {
                out.push('-');
                out.push_str(&term)
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&term)
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&term)
            }
        }
    }
    out
}
