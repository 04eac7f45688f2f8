//! Current algebras `L[x]` and loop algebras `L(x)` over a presentation of `L`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::arith::Combination;
use crate::error::{Error, Result};
use crate::presentation::{AlgebraPresentation, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Current,
    Loop,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Current => "current",
            Variant::Loop => "loop",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "current" => Ok(Variant::Current),
            "loop" => Ok(Variant::Loop),
            _ => Err(Error::MalformedInput(format!("unknown variant {s:?}"))),
        }
    }
}

/// The generator `e_i ⊗ x^r`. The derived order is by index, then degree,
/// which is the PBW order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId {
    pub index: usize,
    pub degree: i64,
}

impl GeneratorId {
    pub fn new(index: usize, degree: i64) -> Self {
        GeneratorId { index, degree }
    }

    /// Filtration degree `r + 1`.
    pub fn filt(self) -> i64 {
        self.degree + 1
    }
}

pub type GVector = Combination<GeneratorId>;

/// A finite slice of `U(g)` or `S(g)` at fixed x-degree.
///
/// Current windows bound the filtration degree `Σ (r + 1)`; loop windows
/// bound the monomial length and require an explicit range of x-degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GradedWindow {
    pub variant: Variant,
    pub xdeg: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filt_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub len_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_range: Option<(i64, i64)>,
}

impl GradedWindow {
    pub fn current(xdeg: i64, filt_max: i64) -> Self {
        GradedWindow {
            variant: Variant::Current,
            xdeg,
            filt_max: Some(filt_max),
            len_max: None,
            r_range: None,
        }
    }

    pub fn loop_window(xdeg: i64, len_max: u32, r_range: Option<(i64, i64)>) -> Self {
        GradedWindow {
            variant: Variant::Loop,
            xdeg,
            filt_max: None,
            len_max: Some(len_max),
            r_range,
        }
    }

    /// Checks that the window describes a finite set of monomials.
    pub fn check(&self) -> Result<()> {
        match self.variant {
            Variant::Current => {
                if self.filt_max.is_none() {
                    return Err(Error::InfiniteWindow(
                        "current windows need a filtration bound".into(),
                    ));
                }
                if self.r_range.is_some() || self.len_max.is_some() {
                    return Err(Error::MalformedInput(
                        "length and r-range bounds apply to loop windows only".into(),
                    ));
                }
            }
            Variant::Loop => {
                let Some((lo, hi)) = self.r_range else {
                    return Err(Error::InfiniteWindow(
                        "loop windows need an explicit r-range".into(),
                    ));
                };
                if lo > hi {
                    return Err(Error::MalformedInput(format!("empty r-range {lo}..{hi}")));
                }
                if self.len_max.is_none() {
                    return Err(Error::InfiniteWindow(
                        "loop windows need a length bound".into(),
                    ));
                }
                if self.filt_max.is_some() {
                    return Err(Error::MalformedInput(
                        "filtration bounds apply to current windows only".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Whether a generator can occur in some monomial of the window.
    pub fn admits(&self, g: GeneratorId) -> bool {
        match self.variant {
            Variant::Current => {
                let n = self.filt_max.unwrap_or(0);
                g.degree >= 0 && g.degree <= self.xdeg && g.filt() <= n
            }
            Variant::Loop => match self.r_range {
                Some((lo, hi)) => lo <= g.degree && g.degree <= hi,
                None => false,
            },
        }
    }

    /// Range of x-degrees over which generators are enumerated.
    pub fn degree_range(&self) -> (i64, i64) {
        match self.variant {
            Variant::Current => {
                let n = self.filt_max.unwrap_or(0);
                (0, self.xdeg.min(n - 1))
            }
            Variant::Loop => self.r_range.unwrap_or((0, -1)),
        }
    }
}

impl fmt::Display for GradedWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Variant::Current => write!(
                f,
                "current xdeg={} filt<={}",
                self.xdeg,
                self.filt_max.unwrap_or(0)
            ),
            Variant::Loop => {
                write!(
                    f,
                    "loop xdeg={} len<={}",
                    self.xdeg,
                    self.len_max.unwrap_or(0)
                )?;
                match self.r_range {
                    Some((lo, hi)) => write!(f, " r in [{lo}, {hi}]"),
                    None => write!(f, " r unbounded"),
                }
            }
        }
    }
}

/// `L[x]` or `L(x)` over a fixed presentation.
#[derive(Debug, Clone)]
pub struct CurrentAlgebra {
    pres: Arc<AlgebraPresentation>,
    variant: Variant,
}

impl CurrentAlgebra {
    pub fn new(pres: AlgebraPresentation, variant: Variant) -> Self {
        Self::from_shared(Arc::new(pres), variant)
    }

    pub fn from_shared(pres: Arc<AlgebraPresentation>, variant: Variant) -> Self {
        CurrentAlgebra { pres, variant }
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.pres
    }

    pub fn shared_presentation(&self) -> &Arc<AlgebraPresentation> {
        &self.pres
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn parity(&self, g: GeneratorId) -> Parity {
        self.pres.parity(g.index)
    }

    pub fn check_id(&self, g: GeneratorId) -> Result<()> {
        if g.index >= self.pres.dim() {
            return Err(Error::MalformedInput(format!(
                "basis index {} out of range 1..={}",
                g.index + 1,
                self.pres.dim()
            )));
        }
        if self.variant == Variant::Current && g.degree < 0 {
            return Err(Error::VariantMismatch(format!(
                "{} has negative x-degree in a current algebra",
                self.format_id(g)
            )));
        }
        Ok(())
    }

    /// `[e_{ir}, e_{js}] = Σ_k a_{ijk} e_{k, r+s}`.
    pub fn gen_bracket(&self, a: GeneratorId, b: GeneratorId) -> Result<GVector> {
        self.check_id(a)?;
        self.check_id(b)?;
        Ok(self.bracket_unchecked(a, b))
    }

    pub(crate) fn bracket_unchecked(&self, a: GeneratorId, b: GeneratorId) -> GVector {
        let r = a.degree + b.degree;
        self.pres
            .bracket(a.index, b.index)
            .map_keys(|&k| GeneratorId::new(k, r))
    }

    /// `(e_i ⊗ x^r)^[p] = e_i^[p] ⊗ x^{rp}`.
    pub fn p_power_gen(&self, a: GeneratorId) -> Result<GVector> {
        self.check_id(a)?;
        let p = self.pres.characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        if self.parity(a).is_odd() {
            return Err(Error::OddGenerator(self.format_id(a)));
        }
        let img = self
            .pres
            .pmap()
            .and_then(|pm| pm.get(&a.index))
            .ok_or(Error::MissingPMap)?;
        let r = a.degree * p as i64;
        Ok(img.map_keys(|&k| GeneratorId::new(k, r)))
    }

    /// Every generator usable in a monomial of the window, ascending.
    pub fn enumerate_generators(&self, w: &GradedWindow) -> Result<Vec<GeneratorId>> {
        if w.variant != self.variant {
            return Err(Error::VariantMismatch(format!(
                "{} window over a {} algebra",
                w.variant, self.variant
            )));
        }
        w.check()?;
        let (lo, hi) = w.degree_range();
        Ok((0..self.pres.dim())
            .flat_map(|i| (lo..=hi).map(move |r| GeneratorId::new(i, r)))
            .filter(|&g| w.admits(g))
            .collect())
    }

    /// `name[r]`.
    pub fn format_id(&self, g: GeneratorId) -> String {
        let name = if g.index < self.pres.dim() {
            self.pres.basis_name(g.index).to_string()
        } else {
            format!("#{}", g.index + 1)
        };
        format!("{name}[{}]", g.degree)
    }

    pub fn parse_id(&self, s: &str) -> Result<GeneratorId> {
        let bad = |msg: &str| Error::Parse {
            location: format!("generator {s:?}"),
            message: msg.to_string(),
        };
        let s = s.trim();
        let open = s.find('[').ok_or_else(|| bad("expected name[r]"))?;
        let inner = s[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| bad("missing closing bracket"))?;
        let index = self
            .pres
            .index_of(&s[..open])
            .ok_or_else(|| bad("unknown basis name"))?;
        let degree: i64 = inner
            .trim()
            .parse()
            .map_err(|_| bad("x-degree must be an integer"))?;
        let g = GeneratorId::new(index, degree);
        self.check_id(g)?;
        Ok(g)
    }

    pub fn format_gvector(&self, v: &GVector) -> String {
        crate::presentation::format_combination(v, |g| self.format_id(*g))
    }
}

/// Generator ids serialize by position; use [`CurrentAlgebra::format_id`]
/// for the named form.
impl Serialize for GeneratorId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("#{}[{}]", self.index + 1, self.degree))
    }
}
