//! The supersymmetric algebra `S(g)` with the adjoint action of `g` by
//! superderivations, and truncated computations of `S(g)^g`.

use std::fmt;

use serde::Serialize;

use crate::arith::{Combination, Echelon, Field};
use crate::current::{CurrentAlgebra, GeneratorId, GradedWindow, Variant};
use crate::error::{Error, Result};
use crate::monomial::{
    action_kernel, coordinates, enumerate_monomials, from_coordinates, index_basis, Monomial,
};
use crate::pbw::{format_element, parse_terms};
use crate::predict::{
    enumerate_patterns, fits_window, predicted_kinds, window_budget, window_cost, PredictedKind,
};

pub type SymMonomial = Monomial;
pub type SymElement = Combination<Monomial>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Test degrees `s` used to probe invariance: `0..=smax` for current
/// algebras and `-smax..=smax` for loop algebras.
pub fn test_degrees(variant: Variant, smax: i64) -> Vec<i64> {
    match variant {
        Variant::Current => (0..=smax).collect(),
        Variant::Loop => (-smax..=smax).collect(),
    }
}

/// `S(g)` over a current or loop algebra.
#[derive(Debug, Clone)]
pub struct SymAlgebra {
    alg: CurrentAlgebra,
}

impl SymAlgebra {
    pub fn new(alg: CurrentAlgebra) -> Self {
        SymAlgebra { alg }
    }

    pub fn algebra(&self) -> &CurrentAlgebra {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.presentation().field()
    }

    pub fn one(&self) -> SymElement {
        SymElement::term(Monomial::one(), self.field().one())
    }

    pub fn generator(&self, g: GeneratorId) -> SymElement {
        SymElement::term(Monomial::generator(g), self.field().one())
    }

    /// Product of monomials with its Koszul sign; `None` if an odd
    /// generator would appear twice.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let odd = |g: GeneratorId| self.alg.parity(g).is_odd();
        let mut negative = false;
        for &(y, _) in b.factors().iter().filter(|f| odd(f.0)) {
            if a.exponent(y) > 0 {
                return None;
            }
            let passes = a
                .factors()
                .iter()
                .filter(|&&(x, k)| x > y && odd(x) && k % 2 == 1)
                .count();
            negative ^= passes % 2 == 1;
        }
        let mut merged: Vec<(GeneratorId, u32)> =
            a.factors().iter().chain(b.factors()).copied().collect();
        merged.sort_by_key(|f| f.0);
        Some((Monomial::from_sorted(merged).expect("sorted"), negative))
    }

    pub fn multiply(&self, f: &SymElement, g: &SymElement) -> SymElement {
        let mut out = SymElement::zero();
        for (a, ca) in f {
            for (b, cb) in g {
                if let Some((m, neg)) = self.mul_monomials(a, b) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, f: &SymElement, k: u32) -> SymElement {
        (0..k).fold(self.one(), |acc, _| self.multiply(&acc, f))
    }

    /// `ad(e_a)` on a monomial, as the superderivation extending the bracket.
    pub fn derive_monomial(&self, a: GeneratorId, m: &Monomial) -> SymElement {
        let field = self.field();
        let a_odd = self.alg.parity(a).is_odd();
        let factors = m.factors();
        let mut out = SymElement::zero();
        let mut prefix_odd = false;
        for (t, &(y, k)) in factors.iter().enumerate() {
            let br = self.alg.bracket_unchecked(a, y);
            if !br.is_zero() {
                let pre = Monomial::from_sorted(factors[..t].iter().copied()).expect("sorted");
                let post = Monomial::from_sorted(
                    std::iter::once((y, k - 1)).chain(factors[t + 1..].iter().copied()),
                )
                .expect("sorted");
                let mut c = field.from_i64(k as i64);
                if a_odd && prefix_odd {
                    c = -c;
                }
                let pre = SymElement::term(pre, field.one());
                let post = SymElement::term(post, c);
                let mid = br.map_keys(|g| Monomial::generator(*g));
                let term = self.multiply(&self.multiply(&pre, &mid), &post);
                out.add_scaled(&term, &field.one());
            }
            if self.alg.parity(y).is_odd() && k % 2 == 1 {
                prefix_odd = !prefix_odd;
            }
        }
        out
    }

    pub fn derivation_action(&self, a: GeneratorId, f: &SymElement) -> Result<SymElement> {
        self.alg.check_id(a)?;
        let mut out = SymElement::zero();
        for (m, c) in f {
            out.add_scaled(&self.derive_monomial(a, m), c);
        }
        Ok(out)
    }

    pub fn enumerate_basis(&self, w: &GradedWindow) -> Result<Vec<Monomial>> {
        enumerate_monomials(&self.alg, w)
    }

    /// Basis of the elements of the window killed by `ad(e_{is})` for every
    /// `i` and every test degree `s`.
    pub fn invariant_kernel(&self, w: &GradedWindow, smax: i64) -> Result<Vec<SymElement>> {
        let basis = self.enumerate_basis(w)?;
        let tests = self.test_generators(smax);
        let kernel = action_kernel(self.field(), &basis, &tests, |&a, m| {
            self.derive_monomial(a, m)
        });
        Ok(kernel.iter().map(|v| from_coordinates(&basis, v)).collect())
    }

    pub fn test_generators(&self, smax: i64) -> Vec<GeneratorId> {
        let n = self.alg.presentation().dim();
        let degrees = test_degrees(self.alg.variant(), smax);
        (0..n)
            .flat_map(|i| degrees.iter().map(move |&s| GeneratorId::new(i, s)))
            .collect()
    }

    /// `e_{jr}` and, in characteristic `p`, `e_{ir}^p`, for `r` in `lo..=hi`.
    pub fn predicted_in_degrees(
        &self,
        lo: i64,
        hi: i64,
    ) -> Result<Vec<(PredictedKind, SymElement)>> {
        let p = self.alg.presentation().characteristic();
        Ok(predicted_kinds(&self.alg, lo, hi)?
            .into_iter()
            .map(|k| (k, SymElement::term(k.leading(p), self.field().one())))
            .collect())
    }

    /// The predicted generators that can occur in products inside the window.
    pub fn predicted_invariant_generators(&self, w: &GradedWindow) -> Result<Vec<SymElement>> {
        Ok(self
            .predicted_for_window(w)?
            .into_iter()
            .map(|(_, f)| f)
            .collect())
    }

    fn predicted_for_window(&self, w: &GradedWindow) -> Result<Vec<(PredictedKind, SymElement)>> {
        if w.variant != self.alg.variant() {
            return Err(Error::VariantMismatch(format!(
                "{} window over a {} algebra",
                w.variant,
                self.alg.variant()
            )));
        }
        w.check()?;
        let (lo, hi) = w.degree_range();
        Ok(self
            .predicted_in_degrees(lo, hi)?
            .into_iter()
            .filter(|(_, f)| fits_window(&self.alg, w, f.keys()))
            .collect())
    }

    /// Compares the span of products of predicted generators with the
    /// computed invariants of the window.
    pub fn compare_invariants(&self, w: &GradedWindow, smax: i64) -> Result<InvariantReport> {
        let gens = self.predicted_for_window(w)?;
        let items: Vec<(i64, i64)> = gens
            .iter()
            .map(|(k, _)| {
                let m = k.leading(self.alg.presentation().characteristic());
                (m.xdeg(), window_cost(w, &m))
            })
            .collect();
        let patterns = enumerate_patterns(&items, w.xdeg, window_budget(w));
        let basis = self.enumerate_basis(w)?;
        let index = index_basis(&basis);
        let field = self.field();

        let mut predicted = Echelon::new(field, basis.len());
        let mut outside = 0usize;
        let mut products = Vec::with_capacity(patterns.len());
        for pat in &patterns {
            let mut prod = self.one();
            for &(idx, k) in pat {
                prod = self.multiply(&prod, &self.pow(&gens[idx].1, k));
            }
            match coordinates(&index, &prod) {
                Some(row) => {
                    predicted.push_row(&row);
                    products.push(row);
                }
                None => outside += 1,
            }
        }

        let kernel = self.invariant_kernel(w, smax)?;
        let mut computed = Echelon::new(field, basis.len());
        for f in &kernel {
            computed.push_row(&coordinates(&index, f).expect("kernel lies in window"));
        }
        let contained = products.iter().all(|row| computed.contains(row));
        let predicted_dim = predicted.rank();
        let computed_dim = computed.rank();
        let verdict = if contained && outside == 0 && predicted_dim == computed_dim {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Ok(InvariantReport {
            algebra: self.alg.presentation().name().to_string(),
            field: field.to_string(),
            window: *w,
            smax,
            generators: gens.iter().map(|(_, f)| self.format(f)).collect(),
            pattern_count: patterns.len(),
            predicted_dim,
            computed_dim,
            contained,
            basis: kernel.iter().map(|f| self.format(f)).collect(),
            verdict,
        })
    }

    pub fn format(&self, f: &SymElement) -> String {
        format_element(&self.alg, f)
    }

    /// Parses the same syntax as `U(g)` elements; factors are multiplied in
    /// `S(g)`.
    pub fn parse(&self, text: &str) -> Result<SymElement> {
        let mut out = SymElement::zero();
        for (coeff, factors) in parse_terms(&self.alg, text)? {
            let mut t = SymElement::term(Monomial::one(), coeff);
            for (g, k) in factors {
                t = self.multiply(&t, &self.pow(&self.generator(g), k));
            }
            out.add_scaled(&t, &self.field().one());
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub algebra: String,
    pub field: String,
    pub window: GradedWindow,
    pub smax: i64,
    /// Predicted generators that fit the window.
    pub generators: Vec<String>,
    /// Number of exponent patterns of predicted generators in the window.
    pub pattern_count: usize,
    pub predicted_dim: usize,
    pub computed_dim: usize,
    pub contained: bool,
    /// Basis of the computed invariants.
    pub basis: Vec<String>,
    pub verdict: Verdict,
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} over {}: {}  smax={}  predicted={} (patterns {})  computed={}  contained={}  {}",
            self.algebra,
            self.field,
            self.window,
            self.smax,
            self.predicted_dim,
            self.pattern_count,
            self.computed_dim,
            self.contained,
            self.verdict
        )?;
        for b in &self.basis {
            writeln!(f, "  {b}")?;
        }
        Ok(())
    }
}
