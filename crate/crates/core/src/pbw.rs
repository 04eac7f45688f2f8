//! PBW normal-form arithmetic in `U(g)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::arith::{Combination, Field, Scalar};
use crate::current::{CurrentAlgebra, GVector, GeneratorId, GradedWindow, Variant};
use crate::error::{Error, Result};
use crate::monomial::{display_order, enumerate_monomials, Monomial};
use crate::presentation::Parity;
use crate::sym::SymElement;

pub type PbwMonomial = Monomial;
pub type UeaElement = Combination<Monomial>;

/// The enveloping algebra of a current or loop algebra, with a shared
/// memo table for the straightening of `monomial * generator`.
#[derive(Debug)]
pub struct Envelope {
    alg: CurrentAlgebra,
    half: Option<Scalar>,
    memo: RwLock<HashMap<(Monomial, GeneratorId), Arc<UeaElement>>>,
}

impl Envelope {
    pub fn new(alg: CurrentAlgebra) -> Self {
        let field = alg.presentation().field();
        let half = field.from_i64(2).invert().ok();
        Envelope {
            alg,
            half,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &CurrentAlgebra {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.presentation().field()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    pub fn one(&self) -> UeaElement {
        UeaElement::term(Monomial::one(), self.field().one())
    }

    pub fn scalar(&self, c: Scalar) -> UeaElement {
        UeaElement::term(Monomial::one(), c)
    }

    pub fn generator(&self, g: GeneratorId) -> UeaElement {
        UeaElement::term(Monomial::generator(g), self.field().one())
    }

    /// The degree-1 embedding of `g` into `U(g)`.
    pub fn lift(&self, v: &GVector) -> UeaElement {
        v.map_keys(|g| Monomial::generator(*g))
    }

    /// Checks that every generator in `u` belongs to this algebra.
    pub fn check(&self, u: &UeaElement) -> Result<()> {
        for m in u.keys() {
            for &(g, k) in m.factors() {
                if self.alg.check_id(g).is_err() {
                    return Err(Error::PresentationMismatch(format!(
                        "generator {} does not belong to {} ({})",
                        self.alg.format_id(g),
                        self.alg.presentation().name(),
                        self.alg.variant()
                    )));
                }
                if k > 1 && self.alg.parity(g).is_odd() {
                    return Err(Error::PresentationMismatch(format!(
                        "odd generator {} with exponent {k} is not a PBW monomial",
                        self.alg.format_id(g)
                    )));
                }
            }
            if let Some(c) = u.coeff(m) {
                if c.field() != self.field() {
                    return Err(Error::FieldMismatch(format!(
                        "coefficient over {} in an element over {}",
                        c.field(),
                        self.field()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Normal form of `m * g`.
    pub fn mul_mono_gen(&self, m: &Monomial, g: GeneratorId) -> Arc<UeaElement> {
        let one = self.field().one();
        let Some((y, _)) = m.last() else {
            return Arc::new(UeaElement::term(Monomial::generator(g), one));
        };
        if y < g || (y == g && !self.alg.parity(g).is_odd()) {
            return Arc::new(UeaElement::term(m.push(g), one));
        }
        let key = (m.clone(), g);
        if let Some(hit) = self.memo.read().expect("memo lock").get(&key) {
            return Arc::clone(hit);
        }
        let rest = m.without_last();
        let result = if y == g {
            // Odd y: y * y = [y, y] / 2.
            let half = self
                .half
                .as_ref()
                .expect("superalgebras need an invertible 2");
            let sq = self.alg.bracket_unchecked(y, y);
            self.mul_mono_vec(&rest, &sq).scale(half)
        } else {
            // N y g = s N g y + N [y, g], with s the Koszul sign.
            let mut out = UeaElement::zero();
            let ng = self.mul_mono_gen(&rest, g);
            let sign = if self.alg.parity(y).koszul(self.alg.parity(g)) {
                -one.clone()
            } else {
                one.clone()
            };
            for (t, c) in ng.iter() {
                out.add_scaled(&self.mul_mono_gen(t, y), &(c * &sign));
            }
            let br = self.alg.bracket_unchecked(y, g);
            out.add_scaled(&self.mul_mono_vec(&rest, &br), &one);
            out
        };
        let result = Arc::new(result);
        self.memo
            .write()
            .expect("memo lock")
            .insert(key, Arc::clone(&result));
        result
    }

    fn mul_mono_vec(&self, m: &Monomial, v: &GVector) -> UeaElement {
        let mut out = UeaElement::zero();
        for (g, c) in v {
            out.add_scaled(&self.mul_mono_gen(m, *g), c);
        }
        out
    }

    /// Normal form of `a * b` for monomials.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> UeaElement {
        let mut cur = UeaElement::term(a.clone(), self.field().one());
        for g in b.generators() {
            let mut next = UeaElement::zero();
            for (t, c) in &cur {
                next.add_scaled(&self.mul_mono_gen(t, g), c);
            }
            cur = next;
        }
        cur
    }

    fn mul_unchecked(&self, u: &UeaElement, v: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (a, ca) in u {
            for (b, cb) in v {
                out.add_scaled(&self.mul_monomials(a, b), &(ca * cb));
            }
        }
        out
    }

    pub fn multiply(&self, u: &UeaElement, v: &UeaElement) -> Result<UeaElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.mul_unchecked(u, v))
    }

    /// Splits `u` into its even and odd components.
    pub fn parity_parts(&self, u: &UeaElement) -> (UeaElement, UeaElement) {
        let even = u.filter(|m| m.parity(&self.alg) == Parity::Even);
        let odd = u.filter(|m| m.parity(&self.alg) == Parity::Odd);
        (even, odd)
    }

    /// Parity of a homogeneous element; `None` for mixed elements. Zero is even.
    pub fn parity_of(&self, u: &UeaElement) -> Option<Parity> {
        let mut ps = u.keys().map(|m| m.parity(&self.alg));
        let first = ps.next().unwrap_or(Parity::Even);
        ps.all(|p| p == first).then_some(first)
    }

    /// `uv - (-1)^{|u||v|} vu`, extended bilinearly over parity components.
    pub fn supercommutator(&self, u: &UeaElement, v: &UeaElement) -> Result<UeaElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.supercommutator_unchecked(u, v))
    }

    fn supercommutator_unchecked(&self, u: &UeaElement, v: &UeaElement) -> UeaElement {
        let (u0, u1) = self.parity_parts(u);
        let (v0, v1) = self.parity_parts(v);
        let mut out = UeaElement::zero();
        let one = self.field().one();
        for (a, pa) in [(&u0, Parity::Even), (&u1, Parity::Odd)] {
            for (b, pb) in [(&v0, Parity::Even), (&v1, Parity::Odd)] {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let ab = self.mul_unchecked(a, b);
                let ba = self.mul_unchecked(b, a);
                out.add_scaled(&ab, &one);
                let s = if pa.koszul(pb) {
                    one.clone()
                } else {
                    -one.clone()
                };
                out.add_scaled(&ba, &s);
            }
        }
        out
    }

    /// `[e_a, u]`.
    pub fn ad_generator(&self, a: GeneratorId, u: &UeaElement) -> Result<UeaElement> {
        self.alg.check_id(a)?;
        self.check(u)?;
        Ok(self.ad_generator_unchecked(a, u))
    }

    /// `[e_a, m]` for a single monomial, computed as `e_a m ∓ m e_a`.
    pub fn ad_monomial(&self, a: GeneratorId, m: &Monomial) -> UeaElement {
        let one = self.field().one();
        let mut out = self.mul_monomials(&Monomial::generator(a), m);
        let s = if self.alg.parity(a).koszul(m.parity(&self.alg)) {
            one
        } else {
            -one
        };
        out.add_scaled(&self.mul_mono_gen(m, a), &s);
        out
    }

    pub(crate) fn ad_generator_unchecked(&self, a: GeneratorId, u: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in u {
            out.add_scaled(&self.ad_monomial(a, m), c);
        }
        out
    }

    /// `u^p` in characteristic `p`.
    pub fn p_power(&self, u: &UeaElement) -> Result<UeaElement> {
        let p = self.field().characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        self.pow(u, p)
    }

    pub fn pow(&self, u: &UeaElement, mut e: u64) -> Result<UeaElement> {
        self.check(u)?;
        let mut acc = self.one();
        let mut base = u.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_unchecked(&base, &base);
            }
        }
        Ok(acc)
    }

    /// `e_a^p - (e_a^[p] ⊗ x^{rp})`.
    pub fn p_center_element(&self, a: GeneratorId) -> Result<UeaElement> {
        let lifted = self.lift(&self.alg.p_power_gen(a)?);
        let p = self.field().characteristic() as u32;
        let mut out = UeaElement::term(Monomial::power(a, p), self.field().one());
        out.add_scaled(&lifted, &-self.field().one());
        Ok(out)
    }

    fn require_current(&self) -> Result<()> {
        match self.alg.variant() {
            Variant::Current => Ok(()),
            Variant::Loop => Err(Error::LoopVariantUnsupported),
        }
    }

    /// Largest filtration degree among the terms.
    pub fn filt_degree(&self, u: &UeaElement) -> Result<i64> {
        self.require_current()?;
        u.keys().map(Monomial::filt).max().ok_or(Error::ZeroElement)
    }

    /// The image in `S(g)` of the top filtration component.
    pub fn gr_leading(&self, u: &UeaElement) -> Result<SymElement> {
        let top = self.filt_degree(u)?;
        Ok(u.filter(|m| m.filt() == top))
    }

    pub fn enumerate_pbw_basis(&self, w: &GradedWindow) -> Result<Vec<Monomial>> {
        enumerate_monomials(&self.alg, w)
    }

    pub fn format(&self, u: &UeaElement) -> String {
        format_element(&self.alg, u)
    }

    /// Parses `coeff * name[r]^k * ... ± ...`. Factors of each term are
    /// multiplied in the order written, so unordered input is straightened.
    pub fn parse(&self, text: &str) -> Result<UeaElement> {
        let terms = parse_terms(&self.alg, text)?;
        let mut out = UeaElement::zero();
        for (coeff, factors) in terms {
            let mut t = self.scalar(coeff);
            for (g, k) in factors {
                for _ in 0..k {
                    t = self.mul_unchecked(&t, &self.generator(g));
                }
            }
            out.add_scaled(&t, &self.field().one());
        }
        Ok(out)
    }
}

/// Formats a combination of monomials as `c * m + ...`, longest terms first.
pub fn format_element(alg: &CurrentAlgebra, u: &Combination<Monomial>) -> String {
    if u.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<_> = u.iter().collect();
    terms.sort_by(|a, b| display_order(a.0, b.0));
    let mut s = String::new();
    for (n, (m, c)) in terms.into_iter().enumerate() {
        let (neg, mag) = c.signed_magnitude();
        if n == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            s.push_str(&mag.to_string());
        } else if mag.is_one() {
            s.push_str(&m.format(alg));
        } else {
            s.push_str(&format!("{mag} * {}", m.format(alg)));
        }
    }
    s
}

type ParsedTerm = (Scalar, Vec<(GeneratorId, u32)>);

/// Shared parser for `U(g)` and `S(g)` element syntax.
pub(crate) fn parse_terms(alg: &CurrentAlgebra, text: &str) -> Result<Vec<ParsedTerm>> {
    let field = alg.presentation().field();
    let err = |pos: usize, msg: &str| Error::Parse {
        location: format!("column {}", pos + 1),
        message: msg.to_string(),
    };
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let mut terms = Vec::new();
    skip_ws(&mut pos);
    if pos == chars.len() {
        return Err(err(pos, "empty expression"));
    }
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        let mut negative = false;
        if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            negative = chars[pos] == '-';
            pos += 1;
        } else if !first {
            return Err(err(pos, "expected '+' or '-'"));
        }
        first = false;
        let mut coeff = if negative { -field.one() } else { field.one() };
        let mut factors = Vec::new();
        loop {
            skip_ws(&mut pos);
            let start = pos;
            if pos < chars.len() && chars[pos].is_ascii_digit() {
                while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                    pos += 1;
                }
                let lit: String = chars[start..pos].iter().collect();
                let c = field
                    .parse(&lit)
                    .map_err(|e| err(start, &format!("bad coefficient {lit:?}: {e}")))?;
                coeff = &coeff * &c;
            } else if pos < chars.len() && (chars[pos].is_alphabetic() || chars[pos] == '_') {
                while pos < chars.len() && chars[pos] != ']' {
                    pos += 1;
                }
                if pos == chars.len() {
                    return Err(err(start, "unterminated generator"));
                }
                pos += 1;
                let id: String = chars[start..pos].iter().collect();
                let g = alg.parse_id(&id).map_err(|e| match e {
                    Error::Parse { message, .. } => err(start, &message),
                    other => other,
                })?;
                let mut k = 1u32;
                skip_ws(&mut pos);
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let es = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let lit: String = chars[es..pos].iter().collect();
                    k = lit.parse().map_err(|_| err(es, "expected an exponent"))?;
                }
                factors.push((g, k));
            } else {
                return Err(err(pos, "expected a coefficient or a generator"));
            }
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
                continue;
            }
            break;
        }
        terms.push((coeff, factors));
        skip_ws(&mut pos);
        if pos == chars.len() {
            break;
        }
    }
    Ok(terms)
}
