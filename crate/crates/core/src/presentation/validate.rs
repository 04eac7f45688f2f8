use std::fmt;

use serde::Serialize;

use super::{AlgebraPresentation, LVector, Parity};
use crate::arith::{Field, Scalar};
use crate::error::{Error, Result};

/// One failed axiom. Indices are 0-based; `Display` prints them 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Issue {
    /// `a_{ijk} != -(-1)^{|i||j|} a_{jik}`.
    SkewSymmetry {
        i: usize,
        j: usize,
        k: usize,
    },
    /// `[e_i, e_i] != 0` for even `e_i`.
    Alternating {
        i: usize,
    },
    /// Super Jacobi identity fails on `(e_i, e_j, e_k)`.
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
    },
    /// `e_k` occurs in `[e_i, e_j]` with the wrong parity.
    Parity {
        i: usize,
        j: usize,
        k: usize,
    },
    /// `[[e, e], e] != 0` for odd `e` in characteristic 3.
    OddCubic {
        i: usize,
    },
    SuperInCharacteristicTwo,
    /// A declared center id is odd, not central, or the ids do not span C(L).
    CenterIds {
        detail: String,
    },
    /// p-map supplied in characteristic 0 or on an odd element.
    PMapDomain {
        i: Option<usize>,
        detail: String,
    },
    PMapMissing {
        i: usize,
    },
    PMapNotEven {
        i: usize,
    },
    /// `(ad e_i)^p != ad(e_i^[p])`, witnessed on basis vector `k`.
    PMapAdjoint {
        i: usize,
        k: usize,
    },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::SkewSymmetry { i, j, k } => {
                write!(
                    f,
                    "skew-symmetry fails at ({}, {}, {})",
                    i + 1,
                    j + 1,
                    k + 1
                )
            }
            Issue::Alternating { i } => write!(f, "alternating condition fails at {}", i + 1),
            Issue::Jacobi { i, j, k } => {
                write!(f, "super Jacobi fails at ({}, {}, {})", i + 1, j + 1, k + 1)
            }
            Issue::Parity { i, j, k } => write!(
                f,
                "parity consistency fails at ({}, {}): target {} has the wrong parity",
                i + 1,
                j + 1,
                k + 1
            ),
            Issue::OddCubic { i } => write!(f, "[[e, e], e] != 0 for odd e = {}", i + 1),
            Issue::SuperInCharacteristicTwo => {
                write!(f, "Lie superalgebras are not supported in characteristic 2")
            }
            Issue::CenterIds { detail } => write!(f, "center_ids: {detail}"),
            Issue::PMapDomain { i: Some(i), detail } => write!(f, "pmap at {}: {detail}", i + 1),
            Issue::PMapDomain { i: None, detail } => write!(f, "pmap: {detail}"),
            Issue::PMapMissing { i } => write!(f, "pmap missing for even basis vector {}", i + 1),
            Issue::PMapNotEven { i } => write!(f, "pmap value of {} is not even", i + 1),
            Issue::PMapAdjoint { i, k } => write!(
                f,
                "(ad e_{})^p != ad(e_{}^[p]) on basis vector {}",
                i + 1,
                i + 1,
                k + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub algebra: String,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::ValidationFailed(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "{}: all checks passed", self.algebra);
        }
        writeln!(f, "{}: {} failed check(s)", self.algebra, self.issues.len())?;
        for issue in &self.issues {
            writeln!(f, "  - {issue}")?;
        }
        Ok(())
    }
}

impl AlgebraPresentation {
    /// Checks the Lie (super)algebra axioms, declared center ids and the
    /// structural constraints on the p-map. The restrictedness identity
    /// itself is checked by [`AlgebraPresentation::validate_p_map`].
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let ch = self.characteristic();
        let mut issues = Vec::new();

        if ch == 2 && self.is_super() {
            issues.push(Issue::SuperInCharacteristicTwo);
        }

        for i in 0..n {
            for j in 0..i {
                let a = self.bracket(i, j);
                let b = self.bracket(j, i);
                let expected = if self.parity(i).koszul(self.parity(j)) {
                    b.clone()
                } else {
                    -b
                };
                let diff = a - &expected;
                if let Some(&k) = diff.keys().next() {
                    issues.push(Issue::SkewSymmetry { i, j, k });
                }
            }
        }

        for i in 0..n {
            if !self.parity(i).is_odd() && !self.bracket(i, i).is_zero() {
                issues.push(Issue::Alternating { i });
            }
        }

        for i in 0..n {
            for j in 0..n {
                let target = self.parity(i) + self.parity(j);
                for &k in self.bracket(i, j).keys() {
                    if self.parity(k) != target {
                        issues.push(Issue::Parity { i, j, k });
                    }
                }
            }
        }

        let e = |i: usize| self.basis_vector(i);
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    if !self.jacobi(i, j, k).is_zero() {
                        issues.push(Issue::Jacobi { i, j, k });
                    }
                }
            }
        }

        if ch == 3 {
            for i in (0..n).filter(|&i| self.parity(i).is_odd()) {
                let ee = self.bracket(i, i).clone();
                if !self.bracket_vec(&ee, &e(i)).is_zero() {
                    issues.push(Issue::OddCubic { i });
                }
            }
        }

        if let Some(ids) = self.center_ids() {
            for &j in ids {
                if self.parity(j).is_odd() {
                    issues.push(Issue::CenterIds {
                        detail: format!("{} is odd", self.basis_name(j)),
                    });
                }
                if (0..n).any(|i| !self.bracket(j, i).is_zero()) {
                    issues.push(Issue::CenterIds {
                        detail: format!("{} is not central", self.basis_name(j)),
                    });
                }
            }
            let dim_center = self.center_basis().len();
            if dim_center != ids.len() {
                issues.push(Issue::CenterIds {
                    detail: format!("{} ids declared but dim C(L) = {dim_center}", ids.len()),
                });
            }
        }

        if let Some(pm) = self.pmap() {
            if ch == 0 {
                issues.push(Issue::PMapDomain {
                    i: None,
                    detail: "p-map given in characteristic 0".into(),
                });
            }
            for (&i, v) in pm {
                if self.parity(i).is_odd() {
                    issues.push(Issue::PMapDomain {
                        i: Some(i),
                        detail: "defined on an odd basis vector".into(),
                    });
                }
                if self.vector_parity(v) != Some(Parity::Even) {
                    issues.push(Issue::PMapNotEven { i });
                }
            }
        }

        ValidationReport {
            algebra: self.name().to_string(),
            issues,
        }
    }

    /// `(-1)^{|i||k|}[e_i,[e_j,e_k]] + (-1)^{|j||i|}[e_j,[e_k,e_i]] + (-1)^{|k||j|}[e_k,[e_i,e_j]]`
    fn jacobi(&self, i: usize, j: usize, k: usize) -> LVector {
        let term = |a: usize, b: usize, c: usize| {
            let inner = self.bracket(b, c).clone();
            let v = self.bracket_vec(&self.basis_vector(a), &inner);
            if self.parity(a).koszul(self.parity(c)) {
                -&v
            } else {
                v
            }
        };
        let s = &term(i, j, k) + &term(j, k, i);
        &s + &term(k, i, j)
    }

    /// Checks `(ad e_i)^p = ad(e_i^[p])` on every basis vector, for every
    /// even `e_i`, and that each `e_i^[p]` is even.
    pub fn validate_p_map(&self) -> Result<ValidationReport> {
        let p = self.characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        let pm = self.pmap().ok_or(Error::MissingPMap)?;
        let mut issues = Vec::new();
        for i in self.even_indices() {
            let Some(img) = pm.get(&i) else {
                issues.push(Issue::PMapMissing { i });
                continue;
            };
            if self.vector_parity(img) != Some(Parity::Even) {
                issues.push(Issue::PMapNotEven { i });
            }
            if let Some(k) = self.adjoint_power_witness(i, img) {
                issues.push(Issue::PMapAdjoint { i, k });
            }
        }
        for &i in pm.keys() {
            if self.parity(i).is_odd() {
                issues.push(Issue::PMapDomain {
                    i: Some(i),
                    detail: "defined on an odd basis vector".into(),
                });
            }
        }
        Ok(ValidationReport {
            algebra: self.name().to_string(),
            issues,
        })
    }

    /// First basis vector `e_k` with `(ad e_i)^p e_k != [img, e_k]`, if any.
    pub fn adjoint_power_witness(&self, i: usize, img: &LVector) -> Option<usize> {
        let p = self.characteristic();
        let power = mat_pow(&self.ad_matrix(&self.basis_vector(i)), p, self.field());
        let target = self.ad_matrix(img);
        (0..self.dim()).find(|&k| (0..self.dim()).any(|r| power[r][k] != target[r][k]))
    }

    /// Matrix of `ad(x)`: column `k` holds `[x, e_k]`.
    pub fn ad_matrix(&self, x: &LVector) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let cols: Vec<LVector> = (0..n)
            .map(|k| self.bracket_vec(x, &self.basis_vector(k)))
            .collect();
        (0..n)
            .map(|r| {
                cols.iter()
                    .map(|col| {
                        col.coeff(&r)
                            .cloned()
                            .unwrap_or_else(|| self.field().zero())
                    })
                    .collect()
            })
            .collect()
    }
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>], f: Field) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let mut out = vec![vec![f.zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

pub(crate) fn mat_pow(m: &[Vec<Scalar>], mut e: u64, f: Field) -> Vec<Vec<Scalar>> {
    let n = m.len();
    let mut acc: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { f.one() } else { f.zero() })
                .collect()
        })
        .collect();
    let mut base = m.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base, f);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base, f);
        }
    }
    acc
}
