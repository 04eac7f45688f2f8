//! Reference implementations for the integration tests. Nothing here calls
//! into the library's straightening or elimination code: products are normal
//! ordered by naive adjacent-swap rewriting and ranks come from dense
//! Gaussian elimination over `BigRational`.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Integer, One, Zero};
use uea_center::arith::Scalar;
use uea_center::current::GeneratorId;
use uea_center::monomial::Monomial;
use uea_center::presentation::AlgebraPresentation;

/// `(basis index, x-degree)`.
pub type Gen = (usize, i64);
pub type Word = Vec<Gen>;
pub type Elem = BTreeMap<Word, BigRational>;

/// Ground field by characteristic; 0 means the rationals.
#[derive(Debug, Clone, Copy)]
pub struct Ground(pub u64);

impl Ground {
    pub fn norm(self, c: BigRational) -> BigRational {
        if self.0 == 0 {
            return c;
        }
        let p = BigInt::from(self.0);
        let n = c.numer().mod_floor(&p);
        let d = c.denom().mod_floor(&p);
        assert!(!d.is_zero(), "denominator divisible by p");
        let inv = d.modpow(&(&p - 2u32), &p);
        BigRational::from_integer((n * inv).mod_floor(&p))
    }

    pub fn int(self, n: i64) -> BigRational {
        self.norm(BigRational::from_integer(n.into()))
    }

    pub fn scalar(self, s: &Scalar) -> BigRational {
        match s {
            Scalar::Rational(r) => r.clone(),
            Scalar::Modular { value, .. } => BigRational::from_integer((*value).into()),
        }
    }

    pub fn inv(self, c: &BigRational) -> BigRational {
        self.norm(c.recip())
    }
}

pub struct Oracle {
    pub k: Ground,
    pub dim: usize,
    odd: Vec<bool>,
    table: Vec<Vec<Vec<(usize, BigRational)>>>,
}

fn add_into(e: &mut Elem, w: Word, c: BigRational, k: Ground) {
    let slot = e.entry(w.clone()).or_insert_with(BigRational::zero);
    *slot = k.norm(&*slot + c);
    if slot.is_zero() {
        e.remove(&w);
    }
}

fn inversions(w: &[Gen]) -> usize {
    let mut n = 0;
    for a in 0..w.len() {
        for b in a + 1..w.len() {
            if w[a] > w[b] {
                n += 1;
            }
        }
    }
    n
}

impl Oracle {
    pub fn new(pres: &AlgebraPresentation) -> Self {
        let k = Ground(pres.characteristic());
        let n = pres.dim();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        pres.bracket(i, j)
                            .iter()
                            .map(|(t, c)| (*t, k.scalar(c)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Oracle {
            k,
            dim: n,
            odd: (0..n).map(|i| pres.parity(i).is_odd()).collect(),
            table,
        }
    }

    pub fn odd(&self, g: Gen) -> bool {
        self.odd[g.0]
    }

    pub fn word_odd(&self, w: &[Gen]) -> bool {
        w.iter().filter(|g| self.odd(**g)).count() % 2 == 1
    }

    pub fn bracket(&self, a: Gen, b: Gen) -> Vec<(Gen, BigRational)> {
        self.table[a.0][b.0]
            .iter()
            .map(|(t, c)| ((*t, a.1 + b.1), c.clone()))
            .collect()
    }

    /// Normal-ordered form of a word in `U`.
    pub fn normal_form(&self, w: &[Gen]) -> Elem {
        let k = self.k;
        // Rewrites never increase (length, inversions), so popping the
        // largest key processes each word after all its contributions.
        let mut pending: BTreeMap<(usize, usize, Word), BigRational> = BTreeMap::new();
        pending.insert((w.len(), inversions(w), w.to_vec()), BigRational::one());
        let mut out = Elem::new();
        let push = |pending: &mut BTreeMap<(usize, usize, Word), BigRational>, w: Word, c| {
            let key = (w.len(), inversions(&w), w);
            let slot = pending.entry(key.clone()).or_insert_with(BigRational::zero);
            *slot = k.norm(&*slot + c);
            if slot.is_zero() {
                pending.remove(&key);
            }
        };
        while let Some(((_, _, w), c)) = pending.pop_last() {
            let bad = (0..w.len().saturating_sub(1))
                .find(|&i| w[i] > w[i + 1] || (w[i] == w[i + 1] && self.odd(w[i])));
            let Some(i) = bad else {
                add_into(&mut out, w, c, k);
                continue;
            };
            let (a, b) = (w[i], w[i + 1]);
            let splice = |g: Gen| {
                let mut v = w[..i].to_vec();
                v.push(g);
                v.extend_from_slice(&w[i + 2..]);
                v
            };
            if a == b {
                // aa = [a, a] / 2 for odd a.
                let half = k.inv(&k.int(2));
                for (g, s) in self.bracket(a, a) {
                    push(&mut pending, splice(g), k.norm(&c * &s * &half));
                }
            } else {
                // ab = (-1)^{|a||b|} ba + [a, b]
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                let sign = if self.odd(a) && self.odd(b) {
                    -c.clone()
                } else {
                    c.clone()
                };
                push(&mut pending, swapped, k.norm(sign));
                for (g, s) in self.bracket(a, b) {
                    push(&mut pending, splice(g), k.norm(&c * &s));
                }
            }
        }
        out
    }

    pub fn multiply(&self, u: &Elem, v: &Elem) -> Elem {
        let mut out = Elem::new();
        for (a, ca) in u {
            for (b, cb) in v {
                let mut w = a.clone();
                w.extend_from_slice(b);
                let c = self.k.norm(ca * cb);
                for (m, cm) in self.normal_form(&w) {
                    add_into(&mut out, m, self.k.norm(&c * &cm), self.k);
                }
            }
        }
        out
    }

    /// `[a, w]` in `U` for a normal-ordered word `w`.
    pub fn ad_word(&self, a: Gen, w: &[Gen]) -> Elem {
        let mut left = vec![a];
        left.extend_from_slice(w);
        let mut right = w.to_vec();
        right.push(a);
        let mut out = self.normal_form(&left);
        let sign = if self.odd(a) && self.word_odd(w) {
            1
        } else {
            -1
        };
        for (m, c) in self.normal_form(&right) {
            add_into(&mut out, m, self.k.norm(c * self.k.int(sign)), self.k);
        }
        out
    }

    /// Sorts a word into `S(g)`: the Koszul sign of the sort, or `None` when
    /// an odd generator repeats.
    pub fn sym_sort(&self, w: &[Gen]) -> Option<(Word, bool)> {
        let mut v = w.to_vec();
        let mut neg = false;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                if self.odd(v[j - 1]) && self.odd(v[j]) {
                    neg = !neg;
                }
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        if v.windows(2).any(|p| p[0] == p[1] && self.odd(p[0])) {
            return None;
        }
        Some((v, neg))
    }

    /// `ad a` extended to `S(g)` as a superderivation.
    pub fn sym_ad_word(&self, a: Gen, w: &[Gen]) -> Elem {
        let mut out = Elem::new();
        let mut prefix_odd = false;
        for i in 0..w.len() {
            for (g, c) in self.bracket(a, w[i]) {
                let mut v = w[..i].to_vec();
                v.push(g);
                v.extend_from_slice(&w[i + 1..]);
                if let Some((s, neg)) = self.sym_sort(&v) {
                    let flip = neg ^ (self.odd(a) && prefix_odd);
                    let c = if flip { -c } else { c };
                    add_into(&mut out, s, self.k.norm(c), self.k);
                }
            }
            prefix_odd ^= self.odd(w[i]);
        }
        out
    }

    /// Sorted words over `gens` with odd letters used at most once and
    /// total x-degree `xdeg`, subject to `keep(length, filtration)`.
    pub fn window(
        &self,
        gens: &[Gen],
        xdeg: i64,
        keep: &dyn Fn(usize, i64) -> bool,
        max_len: usize,
    ) -> Vec<Word> {
        let mut gens = gens.to_vec();
        gens.sort();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.grow(&gens, 0, xdeg, keep, max_len, &mut cur, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        &self,
        gens: &[Gen],
        from: usize,
        xdeg: i64,
        keep: &dyn Fn(usize, i64) -> bool,
        max_len: usize,
        cur: &mut Word,
        out: &mut Vec<Word>,
    ) {
        let filt: i64 = cur.iter().map(|g| g.1 + 1).sum();
        if !keep(cur.len(), filt) {
            return;
        }
        if cur.iter().map(|g| g.1).sum::<i64>() == xdeg {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        for t in from..gens.len() {
            let g = gens[t];
            let next = if self.odd(g) { t + 1 } else { t };
            cur.push(g);
            self.grow(gens, next, xdeg, keep, max_len, cur, out);
            cur.pop();
        }
    }

    /// PBW words of a current window: x-degree `xdeg`, filtration `<= filt`.
    pub fn current_window(&self, xdeg: i64, filt: i64) -> Vec<Word> {
        let gens: Vec<Gen> = (0..self.dim)
            .flat_map(|i| (0..filt).map(move |r| (i, r)))
            .collect();
        self.window(&gens, xdeg, &|_, f| f <= filt, filt as usize)
    }

    /// PBW words of a loop window: length `<= len`, degrees in `lo..=hi`.
    pub fn loop_window(&self, xdeg: i64, len: usize, lo: i64, hi: i64) -> Vec<Word> {
        let gens: Vec<Gen> = (0..self.dim)
            .flat_map(|i| (lo..=hi).map(move |r| (i, r)))
            .collect();
        self.window(&gens, xdeg, &|l, _| l <= len, len)
    }

    /// Rank of the map `basis -> (act(a, w))_a`.
    fn action_rank(
        &self,
        basis: &[Word],
        tests: &[Gen],
        act: &dyn Fn(Gen, &[Gen]) -> Elem,
    ) -> usize {
        let mut rows: BTreeMap<(Gen, Word), Vec<BigRational>> = BTreeMap::new();
        for (col, w) in basis.iter().enumerate() {
            for &a in tests {
                for (m, c) in act(a, w) {
                    rows.entry((a, m))
                        .or_insert_with(|| vec![BigRational::zero(); basis.len()])[col] = c;
                }
            }
        }
        dense_rank(self.k, rows.into_values().collect())
    }

    /// Dimension of the elements of span(`basis`) supercommuting with `tests`.
    pub fn center_dim(&self, basis: &[Word], tests: &[Gen]) -> usize {
        basis.len() - self.action_rank(basis, tests, &|a, w| self.ad_word(a, w))
    }

    /// Dimension of the `tests`-invariants in span(`basis`) inside `S(g)`.
    pub fn invariant_dim(&self, basis: &[Word], tests: &[Gen]) -> usize {
        basis.len() - self.action_rank(basis, tests, &|a, w| self.sym_ad_word(a, w))
    }

    /// `e_{is}` for every `i` and `s` in `degrees`.
    pub fn tests(&self, degrees: impl IntoIterator<Item = i64> + Clone) -> Vec<Gen> {
        (0..self.dim)
            .flat_map(|i| degrees.clone().into_iter().map(move |s| (i, s)))
            .collect()
    }
}

pub fn dense_rank(k: Ground, mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = k.inv(&rows[rank][col]);
        let pivot_row: Vec<BigRational> = rows[rank].iter().map(|x| k.norm(x * &inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = k.norm(&*x - &f * p);
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

pub fn word_of(m: &Monomial) -> Word {
    m.factors()
        .iter()
        .flat_map(|&(g, e)| std::iter::repeat_n((g.index, g.degree), e as usize))
        .collect()
}

pub fn gen_id(g: Gen) -> GeneratorId {
    GeneratorId::new(g.0, g.1)
}

/// Converts a library element to the oracle representation.
pub fn elem_of(k: Ground, u: &uea_center::arith::Combination<Monomial>) -> Elem {
    u.iter().map(|(m, c)| (word_of(m), k.scalar(c))).collect()
}
