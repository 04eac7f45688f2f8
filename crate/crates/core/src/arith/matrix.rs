//! Sparse exact matrices and row reduction.
//!
//! Rows are inserted one at a time into an echelon basis. Over GF(p) pivot
//! rows are kept monic; over the rationals rows are kept as primitive integer
//! vectors and eliminated fraction-free, dividing out the content after every
//! step. Reduced row echelon form is unique, so the kernel bases produced here
//! do not depend on insertion order.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, ToPrimitive, Zero};

use super::{Field, Scalar};
use crate::error::{Error, Result};

/// Sparse row: strictly increasing columns, no zero entries.
pub type SparseRow = Vec<(usize, Scalar)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize, field: Field) -> Self {
        SparseMatrix {
            rows,
            cols,
            field,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_dense(field: Field, dense: &[Vec<Scalar>]) -> Self {
        let cols = dense.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(dense.len(), cols, field);
        for (r, row) in dense.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.insert(r, c, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Overwrites an entry. The field tag is checked by the solvers, not here.
    pub fn insert(&mut self, row: usize, col: usize, v: Scalar) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
    }

    /// Accumulates into an entry.
    pub fn add_to(&mut self, row: usize, col: usize, v: &Scalar) -> Result<()> {
        if v.field() != self.field {
            return Err(Error::FieldMismatch(format!(
                "entry in {} added to a matrix over {}",
                v.field(),
                self.field
            )));
        }
        let cur = self
            .entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(|| self.field.zero());
        self.insert(row, col, cur + v);
        Ok(())
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn check_fields(&self) -> Result<()> {
        for ((r, c), v) in &self.entries {
            if v.field() != self.field {
                return Err(Error::FieldMismatch(format!(
                    "entry ({r}, {c}) lies in {} but the matrix is over {}",
                    v.field(),
                    self.field
                )));
            }
        }
        Ok(())
    }

    pub fn sparse_rows(&self) -> Vec<SparseRow> {
        let mut rows = vec![Vec::new(); self.rows];
        for ((r, c), v) in &self.entries {
            rows[*r].push((*c, v.clone()));
        }
        rows
    }

    pub fn echelon(&self) -> Result<Echelon> {
        self.check_fields()?;
        let mut e = Echelon::new(self.field, self.cols);
        for row in self.sparse_rows() {
            e.push_row(&row);
        }
        Ok(e)
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.echelon()?.rank())
    }

    /// Exact basis of the right kernel, one vector per free column in
    /// ascending order. Each vector has a 1 at its free column and zeros at
    /// the other free columns.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Scalar>>> {
        Ok(self.echelon()?.kernel_basis())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![self.field.zero(); self.rows];
        for ((r, c), a) in &self.entries {
            out[*r] += &(a * &v[*c]);
        }
        out
    }
}

#[derive(Debug, Clone)]
enum Rows {
    /// Monic rows over GF(p), values in `[0, p)`.
    Modular(u64, BTreeMap<usize, Vec<(usize, u64)>>),
    /// Primitive integer rows with positive leading entry.
    Integer(BTreeMap<usize, Vec<(usize, BigInt)>>),
}

/// An incrementally built echelon basis of a row space.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    cols: usize,
    rows: Rows,
}

impl Echelon {
    pub fn new(field: Field, cols: usize) -> Self {
        let rows = match field {
            Field::Rationals => Rows::Integer(BTreeMap::new()),
            Field::Prime(p) => Rows::Modular(p, BTreeMap::new()),
        };
        Echelon { field, cols, rows }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            Rows::Modular(_, m) => m.len(),
            Rows::Integer(m) => m.len(),
        }
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        match &self.rows {
            Rows::Modular(_, m) => m.keys().copied().collect(),
            Rows::Integer(m) => m.keys().copied().collect(),
        }
    }

    /// Adds a row; returns `true` if it was independent of the rows so far.
    pub fn push_row(&mut self, row: &[(usize, Scalar)]) -> bool {
        match &mut self.rows {
            Rows::Modular(p, pivots) => {
                let p = *p;
                let mut r = to_modular(row);
                reduce_modular(&mut r, pivots, p);
                match r.first() {
                    None => false,
                    Some(&(lead, lv)) => {
                        let inv = inv_mod(lv, p);
                        for e in &mut r {
                            e.1 = mul_mod(e.1, inv, p);
                        }
                        pivots.insert(lead, r);
                        true
                    }
                }
            }
            Rows::Integer(pivots) => {
                let mut r = to_integer(row);
                reduce_integer(&mut r, pivots);
                match r.first() {
                    None => false,
                    Some(&(lead, _)) => {
                        pivots.insert(lead, r);
                        true
                    }
                }
            }
        }
    }

    /// Whether `row` lies in the current row space.
    pub fn contains(&self, row: &[(usize, Scalar)]) -> bool {
        match &self.rows {
            Rows::Modular(p, pivots) => {
                let mut r = to_modular(row);
                reduce_modular(&mut r, pivots, *p);
                r.is_empty()
            }
            Rows::Integer(pivots) => {
                let mut r = to_integer(row);
                reduce_integer(&mut r, pivots);
                r.is_empty()
            }
        }
    }

    /// Reduced row echelon form: monic pivot rows, zero above and below each
    /// pivot, keyed by pivot column.
    pub fn rref(&self) -> BTreeMap<usize, SparseRow> {
        match &self.rows {
            Rows::Modular(p, pivots) => {
                let p = *p;
                let mut done: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
                for (&c, row) in pivots.iter().rev() {
                    let mut r = row.clone();
                    reduce_modular_after(&mut r, &done, p, c + 1);
                    done.insert(c, r);
                }
                done.into_iter()
                    .map(|(c, r)| {
                        let row = r
                            .into_iter()
                            .map(|(j, v)| {
                                (
                                    j,
                                    Scalar::Modular {
                                        value: v,
                                        modulus: p,
                                    },
                                )
                            })
                            .collect();
                        (c, row)
                    })
                    .collect()
            }
            Rows::Integer(pivots) => {
                let mut done: BTreeMap<usize, Vec<(usize, BigInt)>> = BTreeMap::new();
                for (&c, row) in pivots.iter().rev() {
                    let mut r = row.clone();
                    reduce_integer_after(&mut r, &done, c + 1);
                    done.insert(c, r);
                }
                done.into_iter()
                    .map(|(c, r)| {
                        let lead = r[0].1.clone();
                        let row = r
                            .into_iter()
                            .map(|(j, v)| {
                                (
                                    j,
                                    Field::Rationals
                                        .from_ratio(&v, &lead)
                                        .expect("nonzero lead"),
                                )
                            })
                            .collect();
                        (c, row)
                    })
                    .collect()
            }
        }
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let rref = self.rref();
        let zero = self.field.zero();
        let one = self.field.one();
        (0..self.cols)
            .filter(|c| !rref.contains_key(c))
            .map(|free| {
                let mut v = vec![zero.clone(); self.cols];
                v[free] = one.clone();
                for (&pc, row) in &rref {
                    if let Ok(pos) = row.binary_search_by_key(&free, |e| e.0) {
                        v[pc] = -&row[pos].1;
                    }
                }
                v
            })
            .collect()
    }
}

fn to_modular(row: &[(usize, Scalar)]) -> Vec<(usize, u64)> {
    let mut r: Vec<(usize, u64)> = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| match v {
            Scalar::Modular { value, .. } => (*c, *value),
            Scalar::Rational(_) => panic!("rational entry in a modular row"),
        })
        .collect();
    r.sort_by_key(|e| e.0);
    r
}

/// Clears denominators and divides out the content.
fn to_integer(row: &[(usize, Scalar)]) -> Vec<(usize, BigInt)> {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        let (_, d) = v.as_ratio().expect("modular entry in a rational row");
        lcm = lcm.lcm(d);
    }
    let mut r: Vec<(usize, BigInt)> = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| {
            let (n, d) = v.as_ratio().unwrap();
            (*c, n * (&lcm / d))
        })
        .collect();
    r.sort_by_key(|e| e.0);
    make_primitive(&mut r);
    r
}

fn make_primitive(r: &mut [(usize, BigInt)]) {
    let Some(first) = r.first() else { return };
    let mut g = BigInt::zero();
    for (_, v) in r.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if first.1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for e in r.iter_mut() {
            e.1 = &e.1 / &g;
        }
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let s = Scalar::Modular {
        value: a,
        modulus: p,
    }
    .invert()
    .expect("nonzero");
    match s {
        Scalar::Modular { value, .. } => value,
        _ => unreachable!(),
    }
}

/// `target - f * pivot` over GF(p).
fn axpy_modular(
    target: &[(usize, u64)],
    f: u64,
    pivot: &[(usize, u64)],
    p: u64,
) -> Vec<(usize, u64)> {
    let neg = (p - f) % p;
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i]);
            i += 1;
        } else if cj < ci {
            out.push((cj, mul_mod(neg, pivot[j].1, p)));
            j += 1;
        } else {
            let v = (target[i].1 + mul_mod(neg, pivot[j].1, p)) % p;
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn reduce_modular(r: &mut Vec<(usize, u64)>, pivots: &BTreeMap<usize, Vec<(usize, u64)>>, p: u64) {
    reduce_modular_after(r, pivots, p, 0)
}

/// Eliminates every pivot column `>= from` present in `r`.
fn reduce_modular_after(
    r: &mut Vec<(usize, u64)>,
    pivots: &BTreeMap<usize, Vec<(usize, u64)>>,
    p: u64,
    from: usize,
) {
    let mut min_col = from;
    loop {
        let hit = r
            .iter()
            .find(|(c, _)| *c >= min_col && pivots.contains_key(c))
            .copied();
        let Some((c, v)) = hit else { break };
        *r = axpy_modular(r, v, &pivots[&c], p);
        min_col = c + 1;
    }
}

/// `a * target - b * pivot` over the integers.
fn combine_integer(
    target: &[(usize, BigInt)],
    a: &BigInt,
    pivot: &[(usize, BigInt)],
    b: &BigInt,
) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, a * &target[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &pivot[j].1)));
            j += 1;
        } else {
            let v = a * &target[i].1 - b * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn reduce_integer(r: &mut Vec<(usize, BigInt)>, pivots: &BTreeMap<usize, Vec<(usize, BigInt)>>) {
    reduce_integer_after(r, pivots, 0)
}

fn reduce_integer_after(
    r: &mut Vec<(usize, BigInt)>,
    pivots: &BTreeMap<usize, Vec<(usize, BigInt)>>,
    from: usize,
) {
    let mut min_col = from;
    loop {
        let hit = r
            .iter()
            .find(|(c, _)| *c >= min_col && pivots.contains_key(c))
            .map(|(c, v)| (*c, v.clone()));
        let Some((c, v)) = hit else { break };
        let pivot = &pivots[&c];
        let lead = &pivot[0].1;
        let g = lead.gcd(&v);
        let (a, b) = (lead / &g, &v / &g);
        *r = combine_integer(r, &a, pivot, &b);
        make_primitive(r);
        min_col = c + 1;
    }
}

/// Rank of a list of sparse rows.
pub fn rank_of_rows(field: Field, cols: usize, rows: &[SparseRow]) -> usize {
    let mut e = Echelon::new(field, cols);
    for r in rows {
        e.push_row(r);
    }
    e.rank()
}

/// Inverse of a square dense matrix, or `None` if it is singular.
pub fn invert_dense(field: Field, m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].invert().ok()?;
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &(&f * y);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Small helper for reporting: the integer value of a scalar if it has one.
pub fn small_integer(s: &Scalar) -> Option<i64> {
    match s {
        Scalar::Rational(q) if q.denom().is_one() => q.numer().to_i64(),
        Scalar::Modular { value, .. } => i64::try_from(*value).ok(),
        _ => None,
    }
}
