mod common;

use std::sync::OnceLock;

use common::{dense_rank, elem_of, Ground, Oracle};
use proptest::prelude::*;
use uea_center::arith::{Field, Scalar, SparseMatrix};
use uea_center::catalog::catalog_get;
use uea_center::center::{certify_central, predicted_center_generators};
use uea_center::current::{CurrentAlgebra, GVector, GeneratorId, GradedWindow, Variant};
use uea_center::monomial::Monomial;
use uea_center::pbw::{Envelope, UeaElement};
use uea_center::presentation::{LVector, Parity};
use uea_center::sym::SymAlgebra;

const ALGEBRAS: [(&str, u64); 9] = [
    ("heisenberg3", 0),
    ("sl2", 0),
    ("gl11", 0),
    ("osp12", 0),
    ("abelian1", 3),
    ("heisenberg3", 3),
    ("sl2", 3),
    ("gl11", 3),
    ("osp12", 3),
];

struct Fixture {
    env: Envelope,
    sym: SymAlgebra,
    /// PBW monomials with x-degree <= 2 and filtration <= 3.
    basis: Vec<Monomial>,
    gens: Vec<GeneratorId>,
}

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        ALGEBRAS
            .iter()
            .map(|&(key, ch)| {
                let alg = CurrentAlgebra::new(catalog_get(key, ch).unwrap(), Variant::Current);
                let env = Envelope::new(alg.clone());
                let mut basis = Vec::new();
                for d in 0..=2 {
                    basis.extend(
                        env.enumerate_pbw_basis(&GradedWindow::current(d, 3))
                            .unwrap(),
                    );
                }
                let gens = (0..alg.presentation().dim())
                    .flat_map(|i| (0..=2).map(move |r| GeneratorId::new(i, r)))
                    .collect();
                Fixture {
                    env,
                    sym: SymAlgebra::new(alg),
                    basis,
                    gens,
                }
            })
            .collect()
    })
}

fn element(fx: &Fixture, picks: &[(usize, i64)]) -> UeaElement {
    let f = fx.env.field();
    picks
        .iter()
        .map(|&(i, c)| (fx.basis[i % fx.basis.len()].clone(), f.from_i64(c)))
        .collect()
}

fn monomial(fx: &Fixture, i: usize) -> Monomial {
    fx.basis[i % fx.basis.len()].clone()
}

fn gvec_bracket(alg: &CurrentAlgebra, u: &GVector, v: &GVector) -> GVector {
    let mut out = GVector::zero();
    for (a, ca) in u {
        for (b, cb) in v {
            out.add_scaled(&alg.gen_bracket(*a, *b).unwrap(), &(ca * cb));
        }
    }
    out
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    proptest::collection::vec((0usize..10_000, -3i64..=3), 1..=3)
}

fn scalar(field: Field, n: i64) -> Scalar {
    field.from_i64(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity_matches_dense_oracle(
        rows in 1usize..=50,
        cols in 1usize..=50,
        density in 0.02f64..0.4,
        pi in 0usize..4,
        seed in proptest::collection::vec((any::<u32>(), -4i64..=4), 2500),
    ) {
        let ch = [0u64, 2, 3, 7][pi];
        let field = Field::of_characteristic(ch).unwrap();
        let k = Ground(ch);
        let cutoff = (density * u32::MAX as f64) as u32;
        let dense: Vec<Vec<Scalar>> = (0..rows)
            .map(|r| {
                (0..cols)
                    .map(|c| {
                        let (roll, v) = seed[(r * 50 + c) % seed.len()];
                        if roll < cutoff { scalar(field, v) } else { field.zero() }
                    })
                    .collect()
            })
            .collect();
        let m = SparseMatrix::from_dense(field, &dense);
        let rank = m.rank().unwrap();
        let kernel = m.kernel_basis().unwrap();
        prop_assert_eq!(rank + kernel.len(), cols);
        let oracle_rows = dense.iter().map(|r| r.iter().map(|s| k.scalar(s)).collect()).collect();
        prop_assert_eq!(rank, dense_rank(k, oracle_rows));
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn bracket_vec_is_super_skew(fi in 0usize..9, xs in proptest::collection::vec(-3i64..=3, 10)) {
        let fx = &fixtures()[fi];
        let pres = fx.env.algebra().presentation();
        let f = pres.field();
        let n = pres.dim();
        // Parity-homogeneous vectors: one even and one odd combination.
        let homog = |par: Parity, off: usize| -> LVector {
            (0..n)
                .filter(|&i| pres.parity(i) == par)
                .map(|i| (i, f.from_i64(xs[(i + off) % xs.len()])))
                .collect()
        };
        for (pa, pb) in [(Parity::Even, Parity::Even), (Parity::Even, Parity::Odd), (Parity::Odd, Parity::Odd)] {
            let (x, y) = (homog(pa, 0), homog(pb, 5));
            let xy = pres.bracket_vec(&x, &y);
            let yx = pres.bracket_vec(&y, &x);
            let want = if pa.koszul(pb) { yx } else { -&yx };
            prop_assert_eq!(xy, want);
        }
    }

    #[test]
    fn associativity(fi in 0usize..9, u in picks(), v in picks(), w in picks()) {
        let fx = &fixtures()[fi];
        let (u, v, w) = (element(fx, &u), element(fx, &v), element(fx, &w));
        let e = &fx.env;
        let left = e.multiply(&e.multiply(&u, &v).unwrap(), &w).unwrap();
        let right = e.multiply(&u, &e.multiply(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn products_agree_with_word_rewriting(fi in 0usize..9, a in 0usize..10_000, b in 0usize..10_000) {
        let fx = &fixtures()[fi];
        let o = Oracle::new(fx.env.algebra().presentation());
        let (a, b) = (monomial(fx, a), monomial(fx, b));
        let mut w = common::word_of(&a);
        w.extend(common::word_of(&b));
        prop_assert_eq!(elem_of(o.k, &fx.env.mul_monomials(&a, &b)), o.normal_form(&w));
    }

    #[test]
    fn x_degree_is_additive(fi in 0usize..9, a in 0usize..10_000, b in 0usize..10_000) {
        let fx = &fixtures()[fi];
        let (a, b) = (monomial(fx, a), monomial(fx, b));
        let prod = fx.env.mul_monomials(&a, &b);
        prop_assert!(prod.keys().all(|m| m.xdeg() == a.xdeg() + b.xdeg()));
    }

    #[test]
    fn filtration_is_submultiplicative(fi in 0usize..9, u in picks(), v in picks()) {
        let fx = &fixtures()[fi];
        let e = &fx.env;
        let (u, v) = (element(fx, &u), element(fx, &v));
        prop_assume!(!u.is_zero() && !v.is_zero());
        let uv = e.multiply(&u, &v).unwrap();
        let gr_prod = fx.sym.multiply(&e.gr_leading(&u).unwrap(), &e.gr_leading(&v).unwrap());
        if uv.is_zero() {
            prop_assert!(gr_prod.is_zero());
        } else {
            let bound = e.filt_degree(&u).unwrap() + e.filt_degree(&v).unwrap();
            prop_assert!(e.filt_degree(&uv).unwrap() <= bound);
            if !gr_prod.is_zero() {
                prop_assert_eq!(e.gr_leading(&uv).unwrap(), gr_prod);
            }
        }
    }

    #[test]
    fn koszul_sign_coherence(fi in 0usize..9, a in 0usize..10_000, b in 0usize..10_000, c in -3i64..=3) {
        let fx = &fixtures()[fi];
        let e = &fx.env;
        let f = e.field();
        let u = UeaElement::term(monomial(fx, a), f.from_i64(c));
        let v = UeaElement::term(monomial(fx, b), f.one());
        let (pu, pv) = (e.parity_of(&u).unwrap(), e.parity_of(&v).unwrap());
        let vu = e.multiply(&v, &u).unwrap();
        let mut rhs = e.supercommutator(&v, &u).unwrap();
        let s = if pu.koszul(pv) { -f.one() } else { f.one() };
        rhs.add_scaled(&e.multiply(&u, &v).unwrap(), &s);
        prop_assert_eq!(vu, rhs);
    }

    #[test]
    fn superderivation(fi in 0usize..9, a in 0usize..64, x in 0usize..10_000, y in 0usize..10_000) {
        let fx = &fixtures()[fi];
        let sym = &fx.sym;
        let alg = sym.algebra();
        let g = fx.gens[a % fx.gens.len()];
        let (mf, mg) = (monomial(fx, x), monomial(fx, y));
        let f = UeaElement::term(mf.clone(), sym.field().one());
        let h = UeaElement::term(mg, sym.field().one());
        let lhs = sym.derivation_action(g, &sym.multiply(&f, &h)).unwrap();
        let mut rhs = sym.multiply(&sym.derivation_action(g, &f).unwrap(), &h);
        let sign = if alg.parity(g).koszul(mf.parity(alg)) { -sym.field().one() } else { sym.field().one() };
        rhs.add_scaled(&sym.multiply(&f, &sym.derivation_action(g, &h).unwrap()), &sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn p_th_powers_are_invariant(fi in 4usize..9, a in 0usize..64, u in picks()) {
        let fx = &fixtures()[fi];
        let sym = &fx.sym;
        let g = fx.gens[a % fx.gens.len()];
        let f = element(fx, &u);
        // Only even parts have a meaningful p-th power in S(g).
        let even = f.filter(|m| m.parity(sym.algebra()) == Parity::Even);
        let p = sym.field().characteristic() as u32;
        let fp = sym.pow(&even, p);
        prop_assert!(sym.derivation_action(g, &fp).unwrap().is_zero());
    }
}

#[test]
fn degree_one_consistency() {
    for fx in fixtures() {
        let e = &fx.env;
        let alg = e.algebra();
        for &a in &fx.gens {
            for &b in &fx.gens {
                let lhs = e.supercommutator(&e.generator(a), &e.generator(b)).unwrap();
                assert_eq!(lhs, e.lift(&alg.gen_bracket(a, b).unwrap()));
            }
        }
    }
}

#[test]
fn generator_brackets_are_skew_additive_and_jacobi() {
    for fx in fixtures() {
        let alg = fx.env.algebra();
        let f = fx.env.field();
        let unit = |g: GeneratorId| GVector::term(g, f.one());
        for &a in &fx.gens {
            for &b in &fx.gens {
                let ab = alg.gen_bracket(a, b).unwrap();
                assert!(ab.keys().all(|g| g.degree == a.degree + b.degree));
                let ba = alg.gen_bracket(b, a).unwrap();
                let koszul = alg.parity(a).koszul(alg.parity(b));
                assert_eq!(ab, if koszul { ba } else { -&ba });
                for &c in &fx.gens {
                    // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
                    let lhs = gvec_bracket(alg, &unit(a), &alg.gen_bracket(b, c).unwrap());
                    let mut rhs = gvec_bracket(alg, &ab, &unit(c));
                    let s = if koszul { -f.one() } else { f.one() };
                    rhs.add_scaled(
                        &gvec_bracket(alg, &unit(b), &alg.gen_bracket(a, c).unwrap()),
                        &s,
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn marked_center_currents_are_central() {
    for fx in fixtures() {
        let alg = fx.env.algebra();
        let Some(j) = alg.presentation().center_ids() else {
            continue;
        };
        for &jj in j {
            for r in 0..=2 {
                for &b in &fx.gens {
                    assert!(alg
                        .gen_bracket(GeneratorId::new(jj, r), b)
                        .unwrap()
                        .is_zero());
                }
            }
        }
    }
}

#[test]
fn restrictedness_on_generators() {
    for fx in fixtures()
        .iter()
        .filter(|fx| fx.env.field().characteristic() > 0)
    {
        let alg = fx.env.algebra();
        let f = fx.env.field();
        let p = f.characteristic();
        for &a in fx.gens.iter().filter(|g| alg.parity(**g) == Parity::Even) {
            let pa = alg.p_power_gen(a).unwrap();
            for &b in &fx.gens {
                let mut v = GVector::term(b, f.one());
                for _ in 0..p {
                    v = gvec_bracket(alg, &GVector::term(a, f.one()), &v);
                }
                assert_eq!(v, gvec_bracket(alg, &pa, &GVector::term(b, f.one())));
            }
        }
    }
}

#[test]
fn p_center_elements_are_central() {
    for fx in fixtures()
        .iter()
        .filter(|fx| fx.env.field().characteristic() > 0)
    {
        let e = &fx.env;
        let alg = e.algebra();
        for &a in fx.gens.iter().filter(|g| alg.parity(**g) == Parity::Even) {
            let mut z = e.p_power(&e.generator(a)).unwrap();
            z.add_scaled(&e.lift(&alg.p_power_gen(a).unwrap()), &-e.field().one());
            for &b in &fx.gens {
                assert!(e.supercommutator(&e.generator(b), &z).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn certificates_are_sound() {
    for fx in fixtures() {
        let e = &fx.env;
        let Ok(gens) = predicted_center_generators(e, 0, 2) else {
            continue;
        };
        let tests: Vec<_> = (0..e.algebra().presentation().dim())
            .flat_map(|i| (0..=4).map(move |r| GeneratorId::new(i, r)))
            .collect();
        for g in &gens {
            certify_central(e, g).unwrap();
            for &b in &tests {
                assert!(e
                    .supercommutator(&e.generator(b), &g.element)
                    .unwrap()
                    .is_zero());
            }
        }
    }
}

#[test]
fn predicted_invariants_lie_in_kernels() {
    for fx in fixtures() {
        if fx.env.algebra().presentation().center_ids().is_none() {
            continue;
        }
        for d in 0..=2 {
            let w = GradedWindow::current(d, 3);
            let r = fx.sym.compare_invariants(&w, d + 1).unwrap();
            assert!(r.contained, "{r}");
        }
    }
}
