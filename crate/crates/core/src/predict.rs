//! The predicted generating sets: `e_{jr}` for `j ∈ J`, and in
//! characteristic `p` the p-th powers of the remaining even generators.

use std::fmt;

use serde::Serialize;

use crate::current::{CurrentAlgebra, GeneratorId, GradedWindow, Variant};
use crate::error::{Error, Result};
use crate::monomial::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PredictedKind {
    /// `e_{jr}` with `j ∈ J`.
    CentralCurrent { j: usize, r: i64 },
    /// `e_{ir}^p - e_{ir}^[p]`, or `e_{ir}^p` in `S(g)`, for even `i ∉ J`.
    PCenter { i: usize, r: i64 },
}

impl PredictedKind {
    pub fn generator(self) -> GeneratorId {
        match self {
            PredictedKind::CentralCurrent { j, r } => GeneratorId::new(j, r),
            PredictedKind::PCenter { i, r } => GeneratorId::new(i, r),
        }
    }

    /// `e_{jr}` or `e_{ir}^p`: the leading monomial, which is also the
    /// image in `S(g)`.
    pub fn leading(self, p: u64) -> Monomial {
        match self {
            PredictedKind::CentralCurrent { .. } => Monomial::generator(self.generator()),
            PredictedKind::PCenter { .. } => Monomial::power(self.generator(), p as u32),
        }
    }

    pub fn describe(self, alg: &CurrentAlgebra) -> String {
        let p = alg.presentation().characteristic();
        match self {
            PredictedKind::CentralCurrent { .. } => alg.format_id(self.generator()),
            PredictedKind::PCenter { .. } => {
                let g = self.generator();
                let id = alg.format_id(g);
                format!("{id}^{p} - ({id})^[p]")
            }
        }
    }
}

impl fmt::Display for PredictedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictedKind::CentralCurrent { j, r } => write!(f, "central-current({}, {r})", j + 1),
            PredictedKind::PCenter { i, r } => write!(f, "p-center({}, {r})", i + 1),
        }
    }
}

/// Predicted generators with x-degree index `r` in `lo..=hi`, central
/// currents first, each group ordered by `(index, r)`.
pub fn predicted_kinds(alg: &CurrentAlgebra, lo: i64, hi: i64) -> Result<Vec<PredictedKind>> {
    let pres = alg.presentation();
    let j_set = pres.center_ids().ok_or(Error::MissingJ)?;
    let lo = if alg.variant() == Variant::Current {
        lo.max(0)
    } else {
        lo
    };
    let mut out: Vec<PredictedKind> = j_set
        .iter()
        .flat_map(|&j| (lo..=hi).map(move |r| PredictedKind::CentralCurrent { j, r }))
        .collect();
    if pres.characteristic() > 0 {
        for i in pres.even_indices().filter(|i| !j_set.contains(i)) {
            out.extend((lo..=hi).map(|r| PredictedKind::PCenter { i, r }));
        }
    }
    Ok(out)
}

/// Whether every monomial of an element could occur in a product that lies
/// in the window.
pub fn fits_window<'a>(
    alg: &CurrentAlgebra,
    w: &GradedWindow,
    mut monomials: impl Iterator<Item = &'a Monomial>,
) -> bool {
    monomials.all(|m| {
        m.factors()
            .iter()
            .all(|&(g, _)| w.admits(g) && alg.check_id(g).is_ok())
            && match w.variant {
                Variant::Current => m.xdeg() <= w.xdeg && m.filt() <= w.filt_max.unwrap_or(0),
                Variant::Loop => m.len() <= w.len_max.unwrap_or(0),
            }
    })
}

/// Multisets of items (with multiplicity) whose x-degrees sum to `target`
/// and whose costs sum to at most `budget`. Every cost must be positive.
/// Each pattern lists `(item index, multiplicity)` in ascending index order.
pub fn enumerate_patterns(
    items: &[(i64, i64)],
    target: i64,
    budget: i64,
) -> Vec<Vec<(usize, u32)>> {
    fn go(
        items: &[(i64, i64)],
        at: usize,
        target: i64,
        budget: i64,
        stack: &mut Vec<(usize, u32)>,
        out: &mut Vec<Vec<(usize, u32)>>,
    ) {
        if target == 0 {
            out.push(stack.clone());
        }
        for idx in at..items.len() {
            let (deg, cost) = items[idx];
            debug_assert!(cost > 0);
            let mut k = 1i64;
            while k * cost <= budget {
                stack.push((idx, k as u32));
                go(
                    items,
                    idx + 1,
                    target - k * deg,
                    budget - k * cost,
                    stack,
                    out,
                );
                stack.pop();
                k += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(items, 0, target, budget, &mut Vec::new(), &mut out);
    out
}

/// Cost of a leading monomial in the window's size measure.
pub fn window_cost(w: &GradedWindow, m: &Monomial) -> i64 {
    match w.variant {
        Variant::Current => m.filt(),
        Variant::Loop => m.len() as i64,
    }
}

pub fn window_budget(w: &GradedWindow) -> i64 {
    match w.variant {
        Variant::Current => w.filt_max.unwrap_or(0),
        Variant::Loop => w.len_max.unwrap_or(0) as i64,
    }
}
