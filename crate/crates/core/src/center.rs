//! Predicted generators of `Z(g)`, their centrality certificates, truncated
//! center computations and per-window verification reports.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::arith::Echelon;
use crate::current::{GeneratorId, GradedWindow, Variant};
use crate::error::{Error, Result};
use crate::monomial::{action_kernel, coordinates, from_coordinates, index_basis, Monomial};
use crate::pbw::{Envelope, UeaElement};
use crate::predict::{
    enumerate_patterns, fits_window, predicted_kinds, window_budget, window_cost, PredictedKind,
};
use crate::sym::{test_degrees, SymAlgebra, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedGenerator {
    pub kind: PredictedKind,
    pub element: UeaElement,
}

/// The element a predicted generator of the given kind must be.
pub fn predicted_element(env: &Envelope, kind: PredictedKind) -> Result<UeaElement> {
    match kind {
        PredictedKind::CentralCurrent { .. } => Ok(env.generator(kind.generator())),
        PredictedKind::PCenter { .. } => env.p_center_element(kind.generator()),
    }
}

/// Predicted generators with `r` in `lo..=hi`.
pub fn predicted_center_generators(
    env: &Envelope,
    lo: i64,
    hi: i64,
) -> Result<Vec<PredictedGenerator>> {
    let pres = env.algebra().presentation();
    if pres.characteristic() > 0 && pres.pmap().is_none() {
        return Err(Error::MissingPMap);
    }
    predicted_kinds(env.algebra(), lo, hi)?
        .into_iter()
        .map(|kind| {
            Ok(PredictedGenerator {
                kind,
                element: predicted_element(env, kind)?,
            })
        })
        .collect()
}

/// Predicted generators all of whose terms can occur in the window.
pub fn predicted_for_window(env: &Envelope, w: &GradedWindow) -> Result<Vec<PredictedGenerator>> {
    if w.variant != env.algebra().variant() {
        return Err(Error::VariantMismatch(format!(
            "{} window over a {} algebra",
            w.variant,
            env.algebra().variant()
        )));
    }
    w.check()?;
    let (lo, hi) = w.degree_range();
    Ok(predicted_center_generators(env, lo, hi)?
        .into_iter()
        .filter(|g| fits_window(env.algebra(), w, g.element.keys()))
        .collect())
}

/// An exact, window-independent proof that a predicted generator is central.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub generator: String,
    #[serde(flatten)]
    pub kind: PredictedKind,
    pub check: String,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.generator, self.check)
    }
}

/// Certifies centrality from the structure constants alone.
///
/// `e_{jr}` is central when row `j` of the structure constants vanishes;
/// `e_{ir}^p - e_{ir}^[p]` is central when `(ad e_i)^p = ad(e_i^[p])` on `L`,
/// since then `ad(e_{ir})^p` and `ad(e_{ir}^[p])` agree on every generator.
pub fn certify_central(env: &Envelope, g: &PredictedGenerator) -> Result<Certificate> {
    let alg = env.algebra();
    let pres = alg.presentation();
    let name = alg.format_id(g.kind.generator());
    alg.check_id(g.kind.generator())?;
    let expected = predicted_element(env, g.kind).map_err(|e| {
        Error::NotCertifiable(format!("{} cannot be formed: {e}", g.kind.describe(alg)))
    })?;
    if g.element != expected {
        return Err(Error::NotCertifiable(format!(
            "{} is not of the predicted shape {} for {}",
            env.format(&g.element),
            env.format(&expected),
            g.kind
        )));
    }
    let j_set = pres.center_ids().ok_or(Error::MissingJ)?;
    match g.kind {
        PredictedKind::CentralCurrent { j, .. } => {
            if !j_set.contains(&j) {
                return Err(Error::NotCertifiable(format!(
                    "{} is not a marked central basis vector",
                    pres.basis_name(j)
                )));
            }
            if let Some(i) = (0..pres.dim()).find(|&i| !pres.bracket(j, i).is_zero()) {
                return Err(Error::NotCertifiable(format!(
                    "[{}, {}] = {}",
                    pres.basis_name(j),
                    pres.basis_name(i),
                    pres.format_vector(pres.bracket(j, i))
                )));
            }
            Ok(Certificate {
                generator: name,
                kind: g.kind,
                check: format!("a_({},i,k) = 0 for all i, k", pres.basis_name(j)),
            })
        }
        PredictedKind::PCenter { i, .. } => {
            if pres.parity(i).is_odd() || j_set.contains(&i) {
                return Err(Error::NotCertifiable(format!(
                    "{} is odd or marked central; p-center generators need an even i outside J",
                    pres.basis_name(i)
                )));
            }
            let img = pres
                .pmap()
                .and_then(|pm| pm.get(&i))
                .ok_or(Error::MissingPMap)?;
            if let Some(k) = pres.adjoint_power_witness(i, img) {
                return Err(Error::NotCertifiable(format!(
                    "(ad {})^p {} != [{}^[p], {}]",
                    pres.basis_name(i),
                    pres.basis_name(k),
                    pres.basis_name(i),
                    pres.basis_name(k)
                )));
            }
            Ok(Certificate {
                generator: g.kind.describe(alg),
                kind: g.kind,
                check: format!(
                    "(ad {0})^p = ad({0}^[p]) on all {1} basis vectors",
                    pres.basis_name(i),
                    pres.dim()
                ),
            })
        }
    }
}

/// Generators `e_{is}` probing centrality: every `i`, and `s` in the test
/// degrees of the variant.
pub fn test_generators(env: &Envelope, smax: i64) -> Vec<GeneratorId> {
    let alg = env.algebra();
    let degrees = test_degrees(alg.variant(), smax);
    (0..alg.presentation().dim())
        .flat_map(|i| degrees.iter().map(move |&s| GeneratorId::new(i, s)))
        .collect()
}

/// Basis of the window elements that supercommute with every test generator.
pub fn center_kernel(env: &Envelope, w: &GradedWindow, smax: i64) -> Result<Vec<UeaElement>> {
    let basis = env.enumerate_pbw_basis(w)?;
    Ok(kernel_on(env, &basis, smax)
        .iter()
        .map(|v| from_coordinates(&basis, v))
        .collect())
}

fn kernel_on(env: &Envelope, basis: &[Monomial], smax: i64) -> Vec<Vec<crate::arith::Scalar>> {
    let tests = test_generators(env, smax);
    action_kernel(env.field(), basis, &tests, |&a, m| env.ad_monomial(a, m))
}

/// How `smax` is chosen per window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "policy", content = "value")]
pub enum SmaxPolicy {
    /// `xdeg + 1` for current windows; `max(|xdeg| + 1, 2R + 1)` for loop
    /// windows with r-range within `[-R, R]`.
    Default,
    Fixed(i64),
}

impl SmaxPolicy {
    pub fn smax(self, w: &GradedWindow) -> i64 {
        match self {
            SmaxPolicy::Fixed(s) => s,
            SmaxPolicy::Default => match w.variant {
                Variant::Current => w.xdeg + 1,
                Variant::Loop => {
                    let (lo, hi) = w.r_range.unwrap_or((0, 0));
                    let r = lo.abs().max(hi.abs());
                    (w.xdeg.abs() + 1).max(2 * r + 1)
                }
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantSummary {
    pub predicted_dim: usize,
    pub computed_dim: usize,
    pub contained: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParanoidCheck {
    pub smax: i64,
    pub computed_dim: usize,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub algebra: String,
    pub field: String,
    pub window: GradedWindow,
    pub smax: i64,
    pub predicted_generators: Vec<String>,
    pub certificates: Vec<Certificate>,
    /// Problems found while certifying; empty when every certificate holds.
    pub certificate_failures: Vec<String>,
    /// Number of exponent patterns of predicted generators in the window.
    pub pattern_count: usize,
    /// Rank of the products of predicted generators.
    pub predicted_dim: usize,
    pub computed_dim: usize,
    /// Every product of predicted generators lies in the computed kernel.
    pub contained: bool,
    /// Leading terms of the kernel basis lie in the matching `S(g)` kernel.
    pub gr_check: Option<bool>,
    /// Leading terms of the predicted generators are distinct monomials.
    pub free_generation: Option<bool>,
    pub invariants: Option<InvariantSummary>,
    pub paranoid: Option<ParanoidCheck>,
    pub kernel_basis: Vec<String>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
    pub config_hash: String,
}

impl VerificationReport {
    pub fn table_header() -> String {
        format!(
            "{:<12} {:<6} {:<34} {:>4} {:>9} {:>8} {:>5} {:>4} {:>6}  {}",
            "algebra",
            "field",
            "window",
            "smax",
            "predicted",
            "computed",
            "certs",
            "gr",
            "stable",
            "verdict"
        )
    }

    pub fn table_row(&self) -> String {
        let flag = |b: Option<bool>| match b {
            Some(true) => "ok",
            Some(false) => "FAIL",
            None => "-",
        };
        let certs = if self.certificate_failures.is_empty() {
            format!("{}", self.certificates.len())
        } else {
            "FAIL".to_string()
        };
        format!(
            "{:<12} {:<6} {:<34} {:>4} {:>9} {:>8} {:>5} {:>4} {:>6}  {}",
            self.algebra,
            self.field,
            self.window.to_string(),
            self.smax,
            self.predicted_dim,
            self.computed_dim,
            certs,
            flag(self.gr_check),
            flag(self.paranoid.as_ref().map(|p| p.stable)),
            self.verdict
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.table_row())?;
        for c in &self.certificates {
            writeln!(f, "  certificate: {c}")?;
        }
        for c in &self.certificate_failures {
            writeln!(f, "  not certified: {c}")?;
        }
        for b in &self.kernel_basis {
            writeln!(f, "  kernel: {b}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub policy: SmaxPolicy,
    pub paranoid: bool,
    /// Also compare against the `S(g)` invariants of each current window.
    pub invariants: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            policy: SmaxPolicy::Default,
            paranoid: false,
            invariants: true,
        }
    }
}

/// Hash of everything that determines the reports of a run.
pub fn config_hash(env: &Envelope, windows: &[GradedWindow], opts: &VerifyOptions) -> String {
    #[derive(Serialize)]
    struct Config<'a> {
        presentation: String,
        variant: Variant,
        windows: &'a [GradedWindow],
        options: &'a VerifyOptions,
    }
    let cfg = Config {
        presentation: env.algebra().presentation().to_json(),
        variant: env.algebra().variant(),
        windows,
        options: opts,
    };
    let bytes = serde_json::to_vec(&cfg).expect("config serializes");
    hex::encode(Sha256::digest(&bytes))
}

/// Verifies the predicted description of the center on each window. Windows
/// are processed concurrently; reports come back in input order.
pub fn verify_theorem(
    env: &Envelope,
    windows: &[GradedWindow],
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>> {
    let pres = env.algebra().presentation();
    if pres.center_ids().is_none() {
        return Err(Error::MissingJ);
    }
    if pres.characteristic() > 0 {
        pres.validate_p_map()?.into_result()?;
    }
    let hash = config_hash(env, windows, opts);
    windows
        .par_iter()
        .map(|w| verify_window(env, w, opts, &hash))
        .collect()
}

fn verify_window(
    env: &Envelope,
    w: &GradedWindow,
    opts: &VerifyOptions,
    hash: &str,
) -> Result<VerificationReport> {
    let alg = env.algebra();
    let pres = alg.presentation();
    let field = env.field();
    let p = pres.characteristic();
    let smax = opts.policy.smax(w);
    let mut notes = vec![
        format!(
            "exact computation over {field}; algebraic closure of the ground field is not used"
        ),
        "PBW order: ascending basis index, then ascending x-degree".to_string(),
    ];

    let gens = predicted_for_window(env, w)?;
    let mut certificates = Vec::new();
    let mut certificate_failures = Vec::new();
    for g in &gens {
        match certify_central(env, g) {
            Ok(c) => certificates.push(c),
            Err(e) => certificate_failures.push(e.to_string()),
        }
    }

    let basis = env.enumerate_pbw_basis(w)?;
    let index = index_basis(&basis);

    // Products of predicted generators, formed in U(g).
    let items: Vec<(i64, i64)> = gens
        .iter()
        .map(|g| {
            let m = g.kind.leading(p);
            (m.xdeg(), window_cost(w, &m))
        })
        .collect();
    let patterns = enumerate_patterns(&items, w.xdeg, window_budget(w));
    let mut predicted = Echelon::new(field, basis.len());
    let mut products = Vec::with_capacity(patterns.len());
    let mut outside = 0usize;
    for pat in &patterns {
        let mut prod = env.one();
        for &(idx, k) in pat {
            let power = env.pow(&gens[idx].element, k as u64)?;
            prod = env.multiply(&prod, &power)?;
        }
        match coordinates(&index, &prod) {
            Some(row) => {
                predicted.push_row(&row);
                products.push(row);
            }
            None => outside += 1,
        }
    }
    if outside > 0 {
        notes.push(format!(
            "{outside} product(s) of predicted generators leave the window basis"
        ));
    }

    let kernel = kernel_on(env, &basis, smax);
    let mut computed = Echelon::new(field, basis.len());
    for v in &kernel {
        let row: Vec<_> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        computed.push_row(&row);
    }
    let kernel_elems: Vec<UeaElement> =
        kernel.iter().map(|v| from_coordinates(&basis, v)).collect();
    let contained = products.iter().all(|row| computed.contains(row));
    let predicted_dim = predicted.rank();
    let computed_dim = computed.rank();

    let (gr_check, free_generation, invariants) = match w.variant {
        Variant::Current => {
            let sym = SymAlgebra::new(alg.clone());
            let s_basis = sym.enumerate_basis(w)?;
            let s_index = index_basis(&s_basis);
            let mut s_kernel = Echelon::new(field, s_basis.len());
            for f in sym.invariant_kernel(w, smax)? {
                s_kernel.push_row(&coordinates(&s_index, &f).expect("kernel lies in window"));
            }
            let mut gr_ok = true;
            for z in &kernel_elems {
                let lead = env.gr_leading(z)?;
                let inside =
                    coordinates(&s_index, &lead).is_some_and(|row| s_kernel.contains(&row));
                if !inside {
                    gr_ok = false;
                    notes.push(format!("gr of {} is not invariant", env.format(z)));
                }
            }
            let mut seen = BTreeSet::new();
            let mut distinct = true;
            for g in &gens {
                let lead = env.gr_leading(&g.element)?;
                let expected = UeaElement::term(g.kind.leading(p), field.one());
                if lead != expected || !seen.insert(g.kind.leading(p)) {
                    distinct = false;
                }
            }
            let inv = if opts.invariants {
                let r = sym.compare_invariants(w, smax)?;
                Some(InvariantSummary {
                    predicted_dim: r.predicted_dim,
                    computed_dim: r.computed_dim,
                    contained: r.contained,
                    verdict: r.verdict,
                })
            } else {
                None
            };
            (Some(gr_ok), Some(distinct), inv)
        }
        Variant::Loop => {
            let (lo, hi) = w.r_range.unwrap_or((0, 0));
            notes.push(format!(
                "truncated: loop slice with generators e_(i,r), r in [{lo}, {hi}], length <= {}; \
                 x-degree slices of U(L(x)) are infinite-dimensional",
                w.len_max.unwrap_or(0)
            ));
            notes.push("gr is not defined for loop windows; gr check skipped".into());
            (None, None, None)
        }
    };

    let paranoid = if opts.paranoid {
        let doubled = (2 * smax).max(smax + 1);
        let dim = kernel_on(env, &basis, doubled).len();
        let stable = dim == computed_dim;
        if !stable {
            notes.push(format!(
                "smax policy unstable: kernel dimension {computed_dim} at smax {smax}, {dim} at smax {doubled}"
            ));
        }
        Some(ParanoidCheck {
            smax: doubled,
            computed_dim: dim,
            stable,
        })
    } else {
        None
    };

    let certified = certificate_failures.is_empty();
    let exact = certified
        && contained
        && outside == 0
        && predicted_dim == computed_dim
        && predicted_dim == patterns.len()
        && paranoid.as_ref().is_none_or(|c| c.stable);
    let verdict = match w.variant {
        Variant::Current => {
            if exact && gr_check == Some(true) && free_generation == Some(true) {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        Variant::Loop => {
            if exact {
                Verdict::Pass
            } else if certified && contained {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            }
        }
    };

    Ok(VerificationReport {
        algebra: pres.name().to_string(),
        field: field.to_string(),
        window: *w,
        smax,
        predicted_generators: gens.iter().map(|g| g.kind.describe(alg)).collect(),
        certificates,
        certificate_failures,
        pattern_count: patterns.len(),
        predicted_dim,
        computed_dim,
        contained,
        gr_check,
        free_generation,
        invariants,
        paranoid,
        kernel_basis: kernel_elems.iter().map(|z| env.format(z)).collect(),
        notes,
        verdict,
        config_hash: hash.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;
    use crate::current::CurrentAlgebra;

    fn env(key: &str, ch: u64) -> Envelope {
        Envelope::new(CurrentAlgebra::new(
            catalog_get(key, ch).unwrap(),
            Variant::Current,
        ))
    }

    fn names(env: &Envelope, v: &[UeaElement]) -> Vec<String> {
        v.iter().map(|u| env.format(u)).collect()
    }

    #[test]
    fn predicted_examples() {
        let h = env("heisenberg3", 0);
        let g = predicted_center_generators(&h, 0, 2).unwrap();
        let els: Vec<_> = g.iter().map(|g| g.element.clone()).collect();
        assert_eq!(names(&h, &els), ["Z[0]", "Z[1]", "Z[2]"]);
        assert!(predicted_center_generators(&env("sl2", 0), 0, 2)
            .unwrap()
            .is_empty());
        let s = env("sl2", 3);
        let g = predicted_center_generators(&s, 0, 1).unwrap();
        let els: Vec<_> = g.iter().map(|g| g.element.clone()).collect();
        assert_eq!(
            names(&s, &els),
            [
                "e[0]^3",
                "e[1]^3",
                "h[0]^3 - h[0]",
                "h[1]^3 - h[3]",
                "f[0]^3",
                "f[1]^3"
            ]
        );
    }

    #[test]
    fn certificates() {
        let h = env("heisenberg3", 0);
        let z5 = PredictedGenerator {
            kind: PredictedKind::CentralCurrent { j: 2, r: 5 },
            element: h.parse("Z[5]").unwrap(),
        };
        assert!(certify_central(&h, &z5).is_ok());

        let s = env("sl2", 3);
        let kind = PredictedKind::PCenter { i: 0, r: 2 };
        let g = PredictedGenerator {
            kind,
            element: s.parse("e[2]^3").unwrap(),
        };
        let c = certify_central(&s, &g).unwrap();
        assert!(c.check.contains("(ad e)^p = ad(e^[p])"), "{c}");

        let s0 = env("sl2", 0);
        let cas = PredictedGenerator {
            kind: PredictedKind::CentralCurrent { j: 1, r: 0 },
            element: s0.parse("e[0]*f[0] + f[0]*e[0] + 1/2*h[0]^2").unwrap(),
        };
        assert!(matches!(
            certify_central(&s0, &cas),
            Err(Error::NotCertifiable(_))
        ));
        let fake = PredictedGenerator {
            kind: PredictedKind::CentralCurrent { j: 1, r: 0 },
            element: s0.parse("h[0]").unwrap(),
        };
        assert!(matches!(
            certify_central(&s0, &fake),
            Err(Error::NotCertifiable(_))
        ));
    }

    #[test]
    fn kernel_examples() {
        let s = env("sl2", 0);
        let w = GradedWindow::current(0, 2);
        assert_eq!(center_kernel(&s, &w, 0).unwrap().len(), 2);
        assert_eq!(names(&s, &center_kernel(&s, &w, 1).unwrap()), ["1"]);

        let h = env("heisenberg3", 0);
        let k = center_kernel(&h, &GradedWindow::current(1, 2), 2).unwrap();
        assert_eq!(names(&h, &k), ["Z[1]"]);

        let s3 = env("sl2", 3);
        let k = center_kernel(&s3, &GradedWindow::current(0, 3), 1).unwrap();
        let mut got = names(&s3, &k);
        got.sort();
        assert_eq!(got, ["1", "e[0]^3", "f[0]^3", "h[0]^3 - h[0]"]);
    }

    #[test]
    fn verify_examples() {
        let h = env("heisenberg3", 0);
        let windows: Vec<_> = (0..=2).map(|d| GradedWindow::current(d, 3)).collect();
        let reports = verify_theorem(&h, &windows, &VerifyOptions::default()).unwrap();
        for r in &reports {
            assert_eq!(r.verdict, Verdict::Pass, "{r}");
        }
        assert_eq!(reports[1].computed_dim, 2);

        let s3 = env("sl2", 3);
        let r = verify_theorem(
            &s3,
            &[GradedWindow::current(0, 3)],
            &VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(
            (r[0].verdict, r[0].computed_dim),
            (Verdict::Pass, 4),
            "{}",
            r[0]
        );

        let g = env("gl11", 0);
        let r = verify_theorem(
            &g,
            &[GradedWindow::current(2, 3)],
            &VerifyOptions::default(),
        )
        .unwrap();
        assert_eq!(r[0].kernel_basis, ["Z[2]"]);
        assert_eq!(r[0].verdict, Verdict::Pass, "{}", r[0]);
    }
}
