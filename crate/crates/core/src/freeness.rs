//! Freeness of `O_L` over the associated order: the criterion check with
//! its unit search, the change of radical generator, and independent
//! verification of a claimed generator.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::base::{BaseElem, PrimeIdeal, QuadForm, Rat};
use crate::error::{domain, Error, Result};
use crate::extension::{LElem, RadicandContext};
use crate::hopf::{class_of_mol, local_span_check, orbit_basis, ClassTuple, LocalSpanCheck};
use crate::integral::{global_integral_basis, local_basis, local_coordinates, LocalIntegralBasis};
use crate::lattice::IntegerLattice;
use crate::linalg;
use crate::radical::{associated_ideals, AssociatedIdeals};

/// Upper bound on the number of unit tuples the search will enumerate.
pub const MAX_UNIT_TUPLES: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Free,
    NotFreeClassObstruction,
    NotFreeCongruenceObstruction,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Free => "free",
            Verdict::NotFreeClassObstruction => "not-free-class-obstruction",
            Verdict::NotFreeCongruenceObstruction => "not-free-congruence-obstruction",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Verdict::Free,
            Verdict::NotFreeClassObstruction,
            Verdict::NotFreeCongruenceObstruction,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Verdict::Free)
    }
}

/// One probe of the unit search: the tuple `(u_0, ..., u_(p-1))` and, when
/// it fails, the first prime above `p` and local coordinate index with
/// negative valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitProbe {
    pub units: Vec<BaseElem>,
    pub failure: Option<(PrimeIdeal, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// `b_j` is not principal; `class` is the class of `b_j^-1`.
    Class { j: usize, class: QuadForm },
    /// No unit tuple makes the candidate integral.
    Congruence { probes: Vec<UnitProbe> },
}

/// Evidence that the associated-order orbit of `x` is `O_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    pub local: Vec<LocalSpanCheck>,
    /// Over `Q`: HNF equality with the glued integral basis.
    pub hnf_equal: Option<bool>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessCertificate {
    pub verdict: Verdict,
    /// Generators of `b_j` (`None` where `b_j` is not principal).
    pub b: Vec<Option<BaseElem>>,
    pub units: Option<Vec<BaseElem>>,
    /// `(1/p) sum alpha^j / (u_j b_j)`.
    pub generator: Option<LElem>,
    pub obstruction: Option<Obstruction>,
    pub class_tuple: ClassTuple,
    pub verification: Option<VerificationReport>,
}

fn require_normalized(ctx: &RadicandContext) -> Result<()> {
    if ctx.is_normalized() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "the criterion needs a radicand = 1 mod p^2, got {}",
            ctx.a()
        )))
    }
}

/// `(1/p) sum_j alpha^j / (u_j b_j)`.
pub fn candidate(ctx: &RadicandContext, b: &[BaseElem], units: &[BaseElem]) -> LElem {
    let k = ctx.field();
    let inv_p = Rat::new(BigInt::one(), BigInt::from(ctx.p()));
    LElem::new(
        b.iter()
            .zip(units)
            .map(|(bj, uj)| {
                k.inv(&k.mul(bj, uj))
                    .expect("nonzero")
                    .scale(&inv_p)
            })
            .collect(),
    )
}

fn first_failure(
    ctx: &RadicandContext,
    bases: &[LocalIntegralBasis],
    x: &LElem,
) -> Option<(PrimeIdeal, usize)> {
    let k = ctx.field();
    for lb in bases {
        let coords = local_coordinates(ctx, lb, x).expect("nonsingular local basis");
        if let Some(i) = coords
            .iter()
            .position(|c| lb.prime.valuation_elem(k, c).is_some_and(|v| v < 0))
        {
            return Some((lb.prime.clone(), i));
        }
    }
    None
}

fn unit_tuple(units: &[BaseElem], p: usize, mut index: u64) -> Vec<BaseElem> {
    let n = units.len() as u64;
    let mut out = vec![BaseElem::from_int(1); p];
    for slot in (1..p).rev() {
        out[slot] = units[(index % n) as usize].clone();
        index /= n;
    }
    out
}

/// Decides freeness for a normalized radicand.
pub fn criterion_check(ctx: &RadicandContext) -> Result<FreenessCertificate> {
    require_normalized(ctx)?;
    let assoc = associated_ideals(ctx)?;
    criterion_check_with(ctx, &assoc)
}

pub fn criterion_check_with(
    ctx: &RadicandContext,
    assoc: &AssociatedIdeals,
) -> Result<FreenessCertificate> {
    require_normalized(ctx)?;
    let k = ctx.field();
    let class_tuple = class_of_mol(ctx, assoc);
    let b: Vec<Option<BaseElem>> = assoc
        .ideals
        .iter()
        .enumerate()
        .map(|(j, ideal)| {
            if j == 0 {
                Some(k.one())
            } else {
                ideal.principality(k).generator().cloned()
            }
        })
        .collect();
    if let Some(j) = b.iter().position(Option::is_none) {
        return Ok(FreenessCertificate {
            verdict: Verdict::NotFreeClassObstruction,
            b,
            units: None,
            generator: None,
            obstruction: Some(Obstruction::Class {
                j,
                class: class_tuple.classes[j].clone(),
            }),
            class_tuple,
            verification: None,
        });
    }
    let bj: Vec<BaseElem> = b.iter().map(|x| x.clone().expect("principal")).collect();
    match unit_search(ctx, &bj)? {
        UnitSearch::Found { units, generator } => {
            let verification = verify_generator(ctx, &generator)?;
            if !verification.passed {
                return Err(Error::Degenerate(format!(
                    "generator {generator} failed independent verification"
                )));
            }
            Ok(FreenessCertificate {
                verdict: Verdict::Free,
                b,
                units: Some(units),
                generator: Some(generator),
                obstruction: None,
                class_tuple,
                verification: Some(verification),
            })
        }
        UnitSearch::Exhausted { probes } => Ok(FreenessCertificate {
            verdict: Verdict::NotFreeCongruenceObstruction,
            b,
            units: None,
            generator: None,
            obstruction: Some(Obstruction::Congruence { probes }),
            class_tuple,
            verification: None,
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitSearch {
    Found { units: Vec<BaseElem>, generator: LElem },
    Exhausted { probes: Vec<UnitProbe> },
}

/// Searches unit tuples `(1, u_1, ..., u_(p-1))`, in lexicographic order of
/// indices into `unit_reps_mod_p`, for one making `candidate` integral above
/// `p`. Away from `p` the candidate is integral for any units.
pub fn unit_search(ctx: &RadicandContext, b: &[BaseElem]) -> Result<UnitSearch> {
    require_normalized(ctx)?;
    let p = ctx.degree();
    if b.len() != p {
        return Err(Error::ContextMismatch(format!("expected {p} generators, got {}", b.len())));
    }
    let units = ctx.field().unit_reps_mod_p(ctx.p());
    let total = (units.len() as u64)
        .checked_pow(p as u32 - 1)
        .filter(|&t| t <= MAX_UNIT_TUPLES)
        .ok_or_else(|| Error::Resource {
            what: "unit tuples".into(),
            value: format!("{}^{}", units.len(), p - 1),
            bound: MAX_UNIT_TUPLES.to_string(),
        })?;
    let bases: Vec<LocalIntegralBasis> = ctx
        .primes_above_p()
        .iter()
        .map(|q| local_basis(ctx, q))
        .collect::<Result<_>>()?;
    let probe = |i: u64| {
        let u = unit_tuple(&units, p, i);
        let x = candidate(ctx, b, &u);
        let failure = first_failure(ctx, &bases, &x);
        (u, x, failure)
    };
    let hit = (0..total)
        .into_par_iter()
        .find_first(|&i| probe(i).2.is_none());
    Ok(match hit {
        Some(i) => {
            let (units, generator, _) = probe(i);
            UnitSearch::Found { units, generator }
        }
        None => UnitSearch::Exhausted {
            probes: (0..total)
                .into_par_iter()
                .map(|i| {
                    let (units, _, failure) = probe(i);
                    UnitProbe { units, failure }
                })
                .collect(),
        },
    })
}

/// For `beta = alpha^l c` (with `alpha^p = a`) and generators `b_k` of the
/// ideals associated to `beta^p`, returns `a_j` with
/// `beta^k / b_k = alpha^j / a_j` whenever `j = l k mod p`, namely
/// `a_j = b_k c^(-k) a^(-floor(l k / p))` with `k = j t mod p`, `t = l^-1`.
pub fn change_radicand(
    ctx: &RadicandContext,
    ell: u64,
    c: &BaseElem,
    b: &[BaseElem],
) -> Result<Vec<BaseElem>> {
    let p = ctx.p();
    if ell.is_multiple_of(p) {
        return domain(format!("l = {ell} is divisible by p = {p}"));
    }
    if c.is_zero() {
        return domain("c must be nonzero");
    }
    if b.len() != ctx.degree() {
        return Err(Error::ContextMismatch(format!(
            "expected {p} generators, got {}",
            b.len()
        )));
    }
    let k = ctx.field();
    let ell = ell % p;
    let t = (1..p).find(|t| (t * ell) % p == 1).expect("p prime");
    (0..p)
        .map(|j| {
            let kk = (j * t) % p;
            let carry = ((ell * kk) / p) as i64;
            let num = k.mul(&b[kk as usize], &k.pow(c, -(kk as i64))?);
            Ok(k.mul(&num, &k.pow(ctx.a(), -carry)?))
        })
        .collect()
}

/// Checks that `{x, p e_1 . x, ..., p e_(p-1) . x}` is an `O_K`-basis of
/// `O_L` locally at every prime where it could fail, and over `Q` also by
/// HNF comparison with the glued integral basis.
pub fn verify_generator(ctx: &RadicandContext, x: &LElem) -> Result<VerificationReport> {
    require_normalized(ctx)?;
    ctx.check(x)?;
    let k = ctx.field();
    let orbit = orbit_basis(ctx, x)?;
    let rows: Vec<Vec<BaseElem>> = orbit.iter().map(|y| y.coords().to_vec()).collect();
    let det = linalg::det(k, &rows);
    if det.is_zero() {
        return Ok(VerificationReport {
            passed: false,
            local: Vec::new(),
            hnf_equal: None,
            note: Some("the orbit of x is linearly dependent".into()),
        });
    }
    let mut primes = ctx.support();
    let norm = k.abs_norm(&det);
    let mut qs: Vec<u64> = Vec::new();
    for n in [norm.numer(), norm.denom()] {
        qs.extend(k.factor_norm(n)?.into_iter().map(|(q, _)| q));
    }
    for (q, _) in k.factor_norm(&x.denominator())? {
        qs.push(q);
    }
    qs.sort_unstable();
    qs.dedup();
    for q in qs {
        for pr in k.primes_above(q) {
            if !primes.contains(&pr) {
                primes.push(pr);
            }
        }
    }
    primes.sort();
    let local: Vec<LocalSpanCheck> = primes
        .iter()
        .map(|q| local_span_check(ctx, q, x))
        .collect::<Result<_>>()?;
    let mut passed = local.iter().all(LocalSpanCheck::generates);
    let hnf_equal = if k.is_rationals() {
        let span = IntegerLattice::from_rational_rows(
            &orbit.iter().map(|y| ctx.flatten(y)).collect::<Vec<_>>(),
            ctx.degree(),
        );
        let eq = span == global_integral_basis(ctx)?;
        passed &= eq;
        Some(eq)
    } else {
        None
    };
    Ok(VerificationReport {
        passed,
        local,
        hnf_equal,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseField;

    fn q_ctx(p: u64, a: i64) -> RadicandContext {
        let k = BaseField::rationals();
        RadicandContext::new(&k, p, &k.elem(a, 0)).unwrap()
    }

    fn uniform(ctx: &RadicandContext) -> LElem {
        let inv_p = BaseElem::from_rat(Rat::new(1.into(), BigInt::from(ctx.p())));
        LElem::new(vec![inv_p; ctx.degree()])
    }

    #[test]
    fn free_examples() {
        for (p, a) in [(3u64, 10i64), (5, 51)] {
            let ctx = q_ctx(p, a);
            let cert = criterion_check(&ctx).unwrap();
            assert_eq!(cert.verdict, Verdict::Free);
            assert_eq!(cert.generator.as_ref().unwrap(), &uniform(&ctx));
            assert!(cert.b.iter().all(|b| b.as_ref().unwrap().is_one()));
            assert!(cert.verification.unwrap().passed);
        }
        let ctx = q_ctx(3, 28);
        let cert = criterion_check(&ctx).unwrap();
        assert_eq!(cert.verdict, Verdict::Free);
        assert_eq!(cert.units.unwrap()[2], BaseElem::from_int(-1));
    }

    #[test]
    fn congruence_obstruction_over_q() {
        // 76 = 4 * 19 = 1 mod 25: b = (1, 1, 1, 2, 2) and 1/2 = 3 is not +-1 mod 5.
        let ctx = q_ctx(5, 76);
        let cert = criterion_check(&ctx).unwrap();
        assert_eq!(cert.verdict, Verdict::NotFreeCongruenceObstruction);
        match cert.obstruction.unwrap() {
            Obstruction::Congruence { probes } => {
                assert_eq!(probes.len(), 16);
                assert!(probes.iter().all(|pr| pr.failure.is_some()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn class_obstruction() {
        let k = BaseField::imaginary_quadratic(-5).unwrap();
        // 190 = 2 * 5 * 19 = 1 mod 9, with v = 2 at the primes above 2 and 5.
        let a = k.elem(190, 0);
        let ctx = RadicandContext::new(&k, 3, &a).unwrap();
        assert!(ctx.is_normalized());
        let cert = criterion_check(&ctx).unwrap();
        assert_eq!(cert.verdict, Verdict::NotFreeClassObstruction);
        assert_eq!(
            cert.obstruction,
            Some(Obstruction::Class { j: 2, class: QuadForm::new(2, 2, 3) })
        );
    }

    #[test]
    fn verify_examples() {
        let ctx = q_ctx(3, 10);
        assert!(verify_generator(&ctx, &uniform(&ctx)).unwrap().passed);
        let r = verify_generator(&ctx, &ctx.alpha()).unwrap();
        assert!(!r.passed);
        assert!(!verify_generator(&ctx, &ctx.zero()).unwrap().passed);
    }

    #[test]
    fn change_radicand_examples() {
        let ctx = q_ctx(3, 28);
        let b = [BaseElem::from_int(1), BaseElem::from_int(1), BaseElem::from_int(2)];
        assert_eq!(change_radicand(&ctx, 1, &BaseElem::from_int(1), &b).unwrap(), b.to_vec());
        assert!(change_radicand(&ctx, 3, &BaseElem::from_int(1), &b).is_err());
    }
}
