//! Ordered monomials in current/loop generators, shared by the PBW basis of
//! `U(g)` and the monomial basis of `S(g)`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::arith::{Combination, Echelon, Field, Scalar};
use crate::current::{CurrentAlgebra, GeneratorId, GradedWindow, Variant};
use crate::error::Result;
use crate::presentation::Parity;

/// `e_{a_1}^{k_1} ... e_{a_m}^{k_m}` with `a_1 < ... < a_m` and all `k >= 1`.
/// Odd generators carry exponent 1; that is enforced by the algebra code
/// that builds monomials, not by this type.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    factors: Vec<(GeneratorId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn generator(g: GeneratorId) -> Self {
        Monomial {
            factors: vec![(g, 1)],
        }
    }

    pub fn power(g: GeneratorId, k: u32) -> Self {
        if k == 0 {
            return Self::one();
        }
        Monomial {
            factors: vec![(g, k)],
        }
    }

    /// Builds a monomial from arbitrary factors, merging repeats. Returns
    /// `None` if the factors are not strictly ascending after merging
    /// equal neighbours, i.e. if the input is not already ordered.
    pub fn from_sorted(factors: impl IntoIterator<Item = (GeneratorId, u32)>) -> Option<Self> {
        let mut out: Vec<(GeneratorId, u32)> = Vec::new();
        for (g, k) in factors {
            if k == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == g => last.1 += k,
                Some(last) if last.0 > g => return None,
                _ => out.push((g, k)),
            }
        }
        Some(Monomial { factors: out })
    }

    pub fn factors(&self) -> &[(GeneratorId, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total number of generator factors counted with multiplicity.
    pub fn len(&self) -> u32 {
        self.factors.iter().map(|f| f.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn xdeg(&self) -> i64 {
        self.factors.iter().map(|(g, k)| g.degree * *k as i64).sum()
    }

    /// `Σ (r + 1) k`.
    pub fn filt(&self) -> i64 {
        self.factors.iter().map(|(g, k)| g.filt() * *k as i64).sum()
    }

    pub fn exponent(&self, g: GeneratorId) -> u32 {
        self.factors
            .binary_search_by_key(&g, |f| f.0)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn parity(&self, alg: &CurrentAlgebra) -> Parity {
        let odd: u32 = self
            .factors
            .iter()
            .filter(|(g, _)| alg.parity(*g).is_odd())
            .map(|f| f.1)
            .sum();
        Parity::from_bit((odd % 2) as u8)
    }

    pub fn last(&self) -> Option<(GeneratorId, u32)> {
        self.factors.last().copied()
    }

    /// The monomial with one factor of its last generator removed.
    pub fn without_last(&self) -> Self {
        let mut factors = self.factors.clone();
        if let Some(last) = factors.last_mut() {
            if last.1 > 1 {
                last.1 -= 1;
            } else {
                factors.pop();
            }
        }
        Monomial { factors }
    }

    /// Appends `g`, which must be `>=` every factor.
    pub fn push(&self, g: GeneratorId) -> Self {
        let mut factors = self.factors.clone();
        match factors.last_mut() {
            Some(last) if last.0 == g => last.1 += 1,
            Some(last) => {
                debug_assert!(last.0 < g);
                factors.push((g, 1));
            }
            None => factors.push((g, 1)),
        }
        Monomial { factors }
    }

    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        self.factors
            .iter()
            .flat_map(|&(g, k)| std::iter::repeat_n(g, k as usize))
    }

    pub fn format(&self, alg: &CurrentAlgebra) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|&(g, k)| {
                if k == 1 {
                    alg.format_id(g)
                } else {
                    format!("{}^{k}", alg.format_id(g))
                }
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

/// Display order of terms: longer monomials first, then the monomial order.
pub fn display_order(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    b.len().cmp(&a.len()).then_with(|| a.cmp(b))
}

/// All monomials of the window: x-degree exactly `w.xdeg`, filtration
/// degree at most `filt_max` (current) or length at most `len_max` with
/// every degree in `r_range` (loop). Odd generators occur at most once.
/// Sorted by length, then by the monomial order.
pub fn enumerate_monomials(alg: &CurrentAlgebra, w: &GradedWindow) -> Result<Vec<Monomial>> {
    let gens = alg.enumerate_generators(w)?;
    let odd: Vec<bool> = gens.iter().map(|g| alg.parity(*g).is_odd()).collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    match w.variant {
        Variant::Current => {
            let budget = w.filt_max.unwrap_or(0);
            current_dfs(&gens, &odd, 0, w.xdeg, budget, &mut stack, &mut out);
        }
        Variant::Loop => {
            let (lo, hi) = w.r_range.unwrap_or((0, 0));
            let len = w.len_max.unwrap_or(0) as i64;
            let bounds = LoopBounds { lo, hi };
            loop_dfs(&gens, &odd, 0, w.xdeg, len, bounds, &mut stack, &mut out);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn current_dfs(
    gens: &[GeneratorId],
    odd: &[bool],
    at: usize,
    deg_left: i64,
    filt_left: i64,
    stack: &mut Vec<(GeneratorId, u32)>,
    out: &mut Vec<Monomial>,
) {
    if deg_left == 0 {
        out.push(Monomial {
            factors: stack.clone(),
        });
    }
    for idx in at..gens.len() {
        let g = gens[idx];
        let max_k = if odd[idx] { 1 } else { u32::MAX };
        let mut k = 1u32;
        while k <= max_k {
            let d = g.degree * k as i64;
            let f = g.filt() * k as i64;
            if d > deg_left || f > filt_left {
                break;
            }
            stack.push((g, k));
            current_dfs(gens, odd, idx + 1, deg_left - d, filt_left - f, stack, out);
            stack.pop();
            k += 1;
        }
    }
}

#[derive(Clone, Copy)]
struct LoopBounds {
    lo: i64,
    hi: i64,
}

impl LoopBounds {
    fn reachable(self, deg: i64, len: i64) -> bool {
        (0..=len).any(|l| l * self.lo <= deg && deg <= l * self.hi)
    }
}

#[allow(clippy::too_many_arguments)]
fn loop_dfs(
    gens: &[GeneratorId],
    odd: &[bool],
    at: usize,
    deg_left: i64,
    len_left: i64,
    bounds: LoopBounds,
    stack: &mut Vec<(GeneratorId, u32)>,
    out: &mut Vec<Monomial>,
) {
    if deg_left == 0 {
        out.push(Monomial {
            factors: stack.clone(),
        });
    }
    for idx in at..gens.len() {
        let g = gens[idx];
        let max_k = if odd[idx] { 1 } else { len_left as u32 };
        for k in 1..=max_k.min(len_left.max(0) as u32) {
            let d = deg_left - g.degree * k as i64;
            let l = len_left - k as i64;
            if !bounds.reachable(d, l) {
                continue;
            }
            stack.push((g, k));
            loop_dfs(gens, odd, idx + 1, d, l, bounds, stack, out);
            stack.pop();
        }
    }
}

/// Kernel of the linear map `v ↦ (act(t, v))_t` on the span of `basis`,
/// in reduced echelon form (one vector per free column, ascending).
///
/// Images are computed in parallel; the equations are assembled in a fixed
/// order, so the result does not depend on scheduling.
pub fn action_kernel<T, F>(
    field: Field,
    basis: &[Monomial],
    tests: &[T],
    act: F,
) -> Vec<Vec<Scalar>>
where
    T: Sync,
    F: Fn(&T, &Monomial) -> Combination<Monomial> + Sync,
{
    let images: Vec<Vec<Combination<Monomial>>> = tests
        .par_iter()
        .map(|t| basis.par_iter().map(|m| act(t, m)).collect())
        .collect();
    let mut ech = Echelon::new(field, basis.len());
    for per_test in &images {
        let mut rows: HashMap<&Monomial, Vec<(usize, Scalar)>> = HashMap::new();
        let mut order: Vec<&Monomial> = Vec::new();
        for (col, img) in per_test.iter().enumerate() {
            for (target, c) in img {
                let row = rows.entry(target).or_insert_with(|| {
                    order.push(target);
                    Vec::new()
                });
                row.push((col, c.clone()));
            }
        }
        for target in order {
            ech.push_row(&rows[target]);
            if ech.rank() == basis.len() {
                return Vec::new();
            }
        }
    }
    ech.kernel_basis()
}

/// Coordinates of `u` in `basis`; `None` if `u` has a term outside it.
pub fn coordinates(
    basis_index: &HashMap<Monomial, usize>,
    u: &Combination<Monomial>,
) -> Option<Vec<(usize, Scalar)>> {
    let mut row: Vec<(usize, Scalar)> = Vec::with_capacity(u.len());
    for (m, c) in u {
        row.push((*basis_index.get(m)?, c.clone()));
    }
    row.sort_by_key(|e| e.0);
    Some(row)
}

pub fn index_basis(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect()
}

/// `Σ v[c] basis[c]`.
pub fn from_coordinates(basis: &[Monomial], v: &[Scalar]) -> Combination<Monomial> {
    basis
        .iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;

    #[test]
    fn window_counts() {
        let sl2 = CurrentAlgebra::new(catalog_get("sl2", 0).unwrap(), Variant::Current);
        let b = enumerate_monomials(&sl2, &GradedWindow::current(0, 2)).unwrap();
        assert_eq!(b.len(), 10);
        assert!(b[0].is_one());
        let b = enumerate_monomials(&sl2, &GradedWindow::current(0, 0)).unwrap();
        assert_eq!(b, vec![Monomial::one()]);

        let h = CurrentAlgebra::new(catalog_get("heisenberg3", 0).unwrap(), Variant::Current);
        let b = enumerate_monomials(&h, &GradedWindow::current(1, 2)).unwrap();
        let names: Vec<_> = b.iter().map(|m| m.format(&h)).collect();
        assert_eq!(names, ["X[1]", "Y[1]", "Z[1]"]);
    }

    #[test]
    fn odd_exponents_bounded() {
        let gl = CurrentAlgebra::new(catalog_get("gl11", 0).unwrap(), Variant::Current);
        let b = enumerate_monomials(&gl, &GradedWindow::current(0, 2)).unwrap();
        // 1; 4 linear; quadratics: Z^2, ZH, H^2, Z E12, Z E21, H E12, H E21, E12 E21.
        assert_eq!(b.len(), 13);
        for m in &b {
            for &(g, k) in m.factors() {
                assert!(k == 1 || !gl.parity(g).is_odd());
            }
        }
    }

    #[test]
    fn loop_window() {
        let l = CurrentAlgebra::new(catalog_get("sl2", 0).unwrap(), Variant::Loop);
        let w = GradedWindow::loop_window(0, 2, Some((-1, 1)));
        let b = enumerate_monomials(&l, &w).unwrap();
        // 1, three degree-0 generators, and quadratics of total degree 0:
        // 6 from degree-0 pairs plus 9 pairs (a_{-1}, b_1).
        assert_eq!(b.len(), 1 + 3 + 6 + 9);
        assert!(b.iter().all(|m| m.xdeg() == 0 && m.len() <= 2));
    }
}
