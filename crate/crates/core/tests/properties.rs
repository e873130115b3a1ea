use hopf_radical::base::{ClassGroup, Ideal, Rat};
use hopf_radical::freeness::{change_radicand, unit_search, UnitSearch};
use hopf_radical::hopf::{act, eta_coefficients, from_eta_coefficients, HElem};
use hopf_radical::lattice::{hnf_glue, IntegerLattice};
use hopf_radical::radical::{associated_ideals, tameness_test};
use hopf_radical::{BaseElem, BaseField, Error, LElem, RadicandContext};
use num_bigint::BigInt;
use proptest::prelude::*;

const DS: [i64; 9] = [-1, -2, -3, -5, -6, -7, -11, -14, -23];

fn field(i: usize) -> BaseField {
    if i == DS.len() {
        BaseField::rationals()
    } else {
        BaseField::imaginary_quadratic(DS[i]).unwrap()
    }
}

fn any_field() -> impl Strategy<Value = BaseField> {
    (0..=DS.len()).prop_map(field)
}

fn rat() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=6).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

fn elem(k: &BaseField) -> impl Strategy<Value = BaseElem> {
    let q = k.is_rationals();
    (rat(), rat()).prop_map(move |(x, y)| BaseElem::new(x, if q { Rat::from_integer(0.into()) } else { y }))
}

fn integral(k: &BaseField, bound: i64) -> impl Strategy<Value = BaseElem> {
    let k = k.clone();
    (-bound..=bound, -bound..=bound)
        .prop_map(move |(x, y)| k.elem(x, if k.is_rationals() { 0 } else { y }))
        .prop_filter("nonzero", |e| !e.is_zero())
}

fn field_and<S: Strategy, F: Fn(&BaseField) -> S + Clone>(
    f: F,
) -> impl Strategy<Value = (BaseField, S::Value)> {
    any_field().prop_flat_map(move |k| (Just(k.clone()), f(&k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn base_field_ring_axioms((k, (a, b, c)) in field_and(|k| (elem(k), elem(k), elem(k)))) {
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
        prop_assert_eq!(k.mul(&a, &(&b + &c)), &k.mul(&a, &b) + &k.mul(&a, &c));
        prop_assert_eq!(k.norm(&k.mul(&a, &b)), k.norm(&a) * k.norm(&b));
        prop_assert_eq!(k.conj(&k.conj(&a)), a.clone());
        if !a.is_zero() {
            prop_assert!(k.mul(&a, &k.inv(&a).unwrap()).is_one());
        }
    }

    #[test]
    fn factorization_reconstructs((k, (x, y)) in field_and(|k| (integral(k, 40), integral(k, 40)))) {
        let fx = k.factor_elem(&x).unwrap();
        prop_assert_eq!(k.ideal_from_factors(&fx), Ideal::principal(&k, &x).unwrap());
        let xy = k.mul(&x, &y);
        let fy = k.factor_elem(&y).unwrap();
        for (q, _) in fx.iter().chain(&fy) {
            prop_assert_eq!(
                q.valuation_elem(&k, &xy),
                Some(q.valuation_elem(&k, &x).unwrap() + q.valuation_elem(&k, &y).unwrap())
            );
        }
    }

    #[test]
    fn principality_witnesses((k, (x, y)) in field_and(|k| (integral(k, 25), integral(k, 25)))) {
        let ideal = Ideal::from_generators(&k, &[x.clone(), y.clone()]).unwrap();
        let cl = ClassGroup::compute(&k);
        match ideal.principality(&k).generator() {
            Some(g) => {
                prop_assert_eq!(Ideal::principal(&k, g).unwrap(), ideal.clone());
                prop_assert!(cl.class_of(&ideal).is_principal_form());
            }
            None => prop_assert!(!cl.class_of(&ideal).is_principal_form()),
        }
        // I * conj(I) = (N(I)) is principal; I^h is principal.
        let ic = ideal.mul(&k, &ideal.conj(&k));
        prop_assert!(ic.principality(&k).is_principal());
        prop_assert!(ideal.pow(&k, cl.order() as i64).principality(&k).is_principal());
    }

    #[test]
    fn extension_arithmetic(
        (k, p, a, u, v, w) in field_and(|k| integral(k, 20))
            .prop_flat_map(|(k, a)| {
                let p = [3u64, 5, 7].into_iter().find(|p| k.discriminant() % *p as i64 != 0).unwrap();
                let n = p as usize;
                let coords = || proptest::collection::vec(elem(&k), n);
                (Just(k.clone()), Just(p), Just(a), coords(), coords(), coords())
            })
    ) {
        let ctx = match RadicandContext::new(&k, p, &a) {
            Ok(c) => c,
            Err(Error::Degenerate(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let (u, v, w) = (LElem::new(u), LElem::new(v), LElem::new(w));
        let uv = ctx.l_mul(&u, &v).unwrap();
        prop_assert_eq!(&uv, &ctx.l_mul(&v, &u).unwrap());
        prop_assert_eq!(ctx.l_mul(&uv, &w).unwrap(), ctx.l_mul(&u, &ctx.l_mul(&v, &w).unwrap()).unwrap());
        prop_assert_eq!(ctx.pow(&ctx.alpha(), p), ctx.from_base(&a));
        let mut x_p_minus_a = vec![BaseElem::zero(); p as usize + 1];
        x_p_minus_a[0] = -&a;
        x_p_minus_a[p as usize] = k.one();
        prop_assert_eq!(ctx.charpoly(&ctx.alpha()), x_p_minus_a);
        // p is odd, so the norm is minus the constant term of the charpoly.
        let n = |x: &LElem| -&ctx.charpoly(x)[0];
        prop_assert_eq!(n(&uv), k.mul(&n(&u), &n(&v)));
    }

    #[test]
    fn hopf_action_is_multiplicative(
        (k, c1, c2, x) in field_and(|k| integral(k, 3)).prop_flat_map(|(k, _)| {
            let p = [3u64, 5, 7].into_iter().find(|p| k.discriminant() % *p as i64 != 0).unwrap() as usize;
            (Just(k.clone()), proptest::collection::vec(elem(&k), p), proptest::collection::vec(elem(&k), p), proptest::collection::vec(elem(&k), p))
        })
    ) {
        let p = c1.len() as u64;
        let ctx = RadicandContext::new(&k, p, &k.elem(2, 0)).unwrap();
        let (h, g, x) = (HElem::new(c1), HElem::new(c2), LElem::new(x));
        let lhs = act(&ctx, &h.mul(&k, &g), &x).unwrap();
        prop_assert_eq!(lhs, act(&ctx, &h, &act(&ctx, &g, &x).unwrap()).unwrap());
        prop_assert_eq!(act(&ctx, &HElem::identity(p), &x).unwrap(), x);
        prop_assert_eq!(from_eta_coefficients(&k, &eta_coefficients(&k, &h)).unwrap(), h);
    }

    #[test]
    fn glue_of_localizations_is_identity(
        extra in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 4), 0..4),
        dens in proptest::collection::vec(prop::sample::select(vec![2i64, 3, 4, 6, 9, 12]), 4),
    ) {
        let mut rows: Vec<Vec<Rat>> = (0..4)
            .map(|i| (0..4).map(|j| Rat::from_integer(BigInt::from((i == j) as i64))).collect())
            .collect();
        for (r, d) in extra.iter().zip(&dens) {
            rows.push(r.iter().map(|&n| Rat::new(n.into(), (*d).into())).collect());
        }
        let m = IntegerLattice::from_rational_rows(&rows, 4);
        let conditions: Vec<(u64, Vec<Vec<Rat>>)> =
            [2u64, 3].iter().map(|&q| (q, m.localize(&BigInt::from(q)))).collect();
        prop_assert_eq!(hnf_glue(&conditions, 4).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `{beta^k / b_k}` and `{alpha^j / a_j}` coincide with `j = l k mod p`,
    /// and `(a_j)` is the `j`-th associated ideal of `a`.
    #[test]
    fn change_radicand_matches_powers(
        a in (2i64..400),
        ell in 1u64..7,
        c in prop::sample::select(vec![1i64, 2, -2, 3, 5, 7, 10]),
        pi in 0usize..3,
    ) {
        let p = [3u64, 5, 7][pi];
        let ell = ell % p;
        prop_assume!(ell != 0);
        let k = BaseField::rationals();
        let ctx = match RadicandContext::new(&k, p, &k.elem(a, 0)) {
            Ok(c) => c,
            Err(Error::Degenerate(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let c = k.elem(c, 0);
        let a2 = k.mul(&k.pow(ctx.a(), ell as i64).unwrap(), &k.pow(&c, p as i64).unwrap());
        let ctx2 = match ctx.with_radicand(&a2) {
            Ok(c) => c,
            Err(Error::Resource { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let b: Vec<BaseElem> = associated_ideals(&ctx2)
            .unwrap()
            .ideals
            .iter()
            .map(|i| i.principality(&k).generator().unwrap().clone())
            .collect();
        let aj = change_radicand(&ctx, ell, &c, &b).unwrap();
        let beta = ctx.scale(&c, &ctx.alpha_pow(ell as usize));
        let assoc = associated_ideals(&ctx).unwrap();
        for kk in 0..p as usize {
            let j = (ell as usize * kk) % p as usize;
            let lhs = ctx.scale(&k.inv(&b[kk]).unwrap(), &ctx.pow(&beta, kk as u64));
            let rhs = ctx.scale(&k.inv(&aj[j]).unwrap(), &ctx.alpha_pow(j));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(Ideal::principal(&k, &aj[j]).unwrap(), assoc.ideals[j].clone());
        }
    }

    /// Rescaling the associated-ideal generators by units does not change
    /// whether some unit tuple succeeds.
    #[test]
    fn unit_search_ignores_generator_choice(
        di in 0usize..2,
        x in -20i64..=20,
        y in -20i64..=20,
        picks in proptest::collection::vec(0usize..6, 7),
    ) {
        let k = BaseField::imaginary_quadratic([-1, -3][di]).unwrap();
        let p = 5;
        let a = k.elem(x, y);
        prop_assume!(!a.is_zero());
        let tv = match tameness_test(&k, p, &a) {
            Ok(t) => t,
            Err(Error::Degenerate(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let Some(an) = tv.normalized else { return Ok(()) };
        let ctx = match RadicandContext::new(&k, p, &an) {
            Ok(c) => c,
            Err(Error::Resource { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let assoc = associated_ideals(&ctx).unwrap();
        let b: Vec<BaseElem> = assoc
            .ideals
            .iter()
            .map(|i| i.principality(&k).generator().unwrap().clone())
            .collect();
        let units = k.units();
        let scaled: Vec<BaseElem> = b
            .iter()
            .zip(&picks)
            .map(|(bj, &i)| k.mul(bj, &units[i % units.len()]))
            .collect();
        let found = |s: UnitSearch| matches!(s, UnitSearch::Found { .. });
        prop_assert_eq!(
            found(unit_search(&ctx, &b).unwrap()),
            found(unit_search(&ctx, &scaled).unwrap())
        );
    }
}
