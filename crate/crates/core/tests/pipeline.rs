use hopf_radical::base::Rat;
use hopf_radical::freeness::{
    change_radicand, criterion_check, unit_search, verify_generator, Obstruction, Verdict,
};
use hopf_radical::integral::{global_integral_basis, is_integral};
use hopf_radical::radical::{associated_ideals, normalize, tameness_test};
use hopf_radical::{BaseField, Error, LElem, RadicandContext};
use num_bigint::BigInt;

fn fields() -> Vec<BaseField> {
    let mut out = vec![BaseField::rationals()];
    for d in [-1, -2, -3, -5, -6, -7, -15, -23] {
        out.push(BaseField::imaginary_quadratic(d).unwrap());
    }
    out
}

#[test]
fn verdicts_are_consistent_with_their_certificates() {
    let mut seen = [0usize; 3];
    for k in fields() {
        let p = [3u64, 5, 7].into_iter().find(|&p| k.discriminant() % p as i64 != 0).unwrap();
        for x in -9i64..=9 {
            for y in 0i64..=4 {
                let y = if k.is_rationals() { 0 } else { y };
                let a = k.elem(x, y);
                if a.is_zero() {
                    continue;
                }
                let tv = match tameness_test(&k, p, &a) {
                    Ok(t) => t,
                    Err(Error::Degenerate(_)) => continue,
                    Err(e) => panic!("{a} over {}: {e}", k.label()),
                };
                let Some(an) = tv.normalized else { continue };
                let ctx = RadicandContext::new(&k, p, &an).unwrap();
                let assoc = associated_ideals(&ctx).unwrap();
                let cert = criterion_check(&ctx).unwrap();
                match cert.verdict {
                    Verdict::Free => {
                        seen[0] += 1;
                        let g = cert.generator.as_ref().unwrap();
                        assert!(is_integral(&ctx, g).unwrap(), "{an} over {}", k.label());
                        assert!(verify_generator(&ctx, g).unwrap().passed, "{an} over {}", k.label());
                    }
                    Verdict::NotFreeClassObstruction => {
                        seen[1] += 1;
                        let Some(Obstruction::Class { j, .. }) = cert.obstruction else {
                            panic!("class verdict without class obstruction")
                        };
                        assert!(!assoc.ideals[j].principality(&k).is_principal());
                    }
                    Verdict::NotFreeCongruenceObstruction => {
                        seen[2] += 1;
                        assert!(assoc.all_principal());
                    }
                }
            }
        }
    }
    assert!(seen.iter().all(|&n| n > 0), "verdict counts {seen:?}");
}

/// Integer combinations with coefficients in `-1..=1` of an HNF basis of
/// `O_L` that pass the independent generator check.
fn small_generators(p: u64, a: i64) -> usize {
    let k = BaseField::rationals();
    let ctx = RadicandContext::new(&k, p, &k.elem(a, 0)).unwrap();
    let basis: Vec<LElem> = global_integral_basis(&ctx)
        .unwrap()
        .basis()
        .iter()
        .map(|r| ctx.unflatten(r))
        .collect();
    let n = basis.len() as u32;
    (0..3u64.pow(n))
        .filter(|&code| {
            let mut v = vec![Rat::from_integer(BigInt::from(0)); n as usize];
            let mut c = code;
            for row in &basis {
                let coef = Rat::from_integer(BigInt::from((c % 3) as i64 - 1));
                c /= 3;
                for (vi, ri) in v.iter_mut().zip(ctx.flatten(row)) {
                    *vi += &coef * ri;
                }
            }
            let x = ctx.unflatten(&v);
            !x.is_zero() && verify_generator(&ctx, &x).unwrap().passed
        })
        .count()
}

#[test]
fn brute_force_agrees_on_small_generators() {
    let k = BaseField::rationals();
    let free = RadicandContext::new(&k, 5, &k.elem(51, 0)).unwrap();
    assert_eq!(criterion_check(&free).unwrap().verdict, Verdict::Free);
    assert!(small_generators(5, 51) > 0);

    let obstructed = RadicandContext::new(&k, 5, &k.elem(76, 0)).unwrap();
    assert_eq!(
        criterion_check(&obstructed).unwrap().verdict,
        Verdict::NotFreeCongruenceObstruction
    );
    assert_eq!(small_generators(5, 76), 0);
}

#[test]
fn preconditions_are_enforced() {
    let q = BaseField::rationals();
    assert!(matches!(
        RadicandContext::new(&q, 4, &q.elem(2, 0)),
        Err(Error::Domain(_))
    ));
    assert!(RadicandContext::new(&q, 3, &q.elem(0, 0)).is_err());
    assert!(matches!(
        RadicandContext::new(&q, 3, &q.elem(8, 0)),
        Err(Error::Degenerate(_))
    ));

    // 17 is tame at 3 but not normalized.
    let ctx = RadicandContext::new(&q, 3, &q.elem(17, 0)).unwrap();
    assert!(matches!(criterion_check(&ctx), Err(Error::Precondition(_))));
    let (norm, _) = normalize(&ctx).unwrap();
    assert!(norm.is_normalized());
    assert!(matches!(
        unit_search(&norm, &[q.one()]),
        Err(Error::ContextMismatch(_))
    ));
    assert!(matches!(
        change_radicand(&norm, 3, &q.one(), &[q.one(), q.one(), q.one()]),
        Err(Error::Domain(_))
    ));

    let wild = RadicandContext::new(&q, 3, &q.elem(2, 0)).unwrap();
    assert!(matches!(normalize(&wild), Err(Error::Precondition(_))));

    let gauss = BaseField::imaginary_quadratic(-1).unwrap();
    let over_gauss = RadicandContext::new(&gauss, 3, &gauss.elem(10, 0)).unwrap();
    assert!(global_integral_basis(&over_gauss).is_err());
}
