//! Valuation combinatorics of the radicand: i-parts, associated ideals,
//! tameness and normalization to `a = 1 mod p^2 O_K`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::base::{BaseElem, BaseField, Ideal, PrimeIdeal, QuadForm, Rat};
use crate::error::{domain, Error, Result};
use crate::extension::RadicandContext;

/// One nontrivial i-part: the primes with `v_P = i` and their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPart {
    pub i: i64,
    pub primes: Vec<PrimeIdeal>,
    pub ideal: Ideal,
}

/// `A = prod_i A_i^i` with the `A_i` squarefree and pairwise coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPartDecomposition {
    pub parts: Vec<IPart>,
}

impl IPartDecomposition {
    pub fn part(&self, i: i64) -> Option<&IPart> {
        self.parts.iter().find(|part| part.i == i)
    }

    pub fn reconstruct(&self, k: &BaseField) -> Ideal {
        self.parts
            .iter()
            .fold(Ideal::unit(k), |acc, part| acc.mul(k, &part.ideal.pow(k, part.i)))
    }
}

pub fn i_part_decomposition(k: &BaseField, ideal: &Ideal) -> Result<IPartDecomposition> {
    if !ideal.is_integral() {
        return domain("i-part decomposition needs an integral ideal");
    }
    let mut by_exp: BTreeMap<i64, Vec<PrimeIdeal>> = BTreeMap::new();
    for (q, e) in k.factor_ideal(ideal)? {
        by_exp.entry(e).or_default().push(q);
    }
    let parts = by_exp
        .into_iter()
        .map(|(i, primes)| {
            let ideal = primes
                .iter()
                .fold(Ideal::unit(k), |acc, q| acc.mul(k, q.ideal()));
            IPart { i, primes, ideal }
        })
        .collect();
    Ok(IPartDecomposition { parts })
}

/// `r_P(a^j) = floor(j v_P(a) / p)` for one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentRow {
    pub prime: PrimeIdeal,
    pub valuation: i64,
    pub r: Vec<i64>,
}

/// The ideals `b_j = prod_P P^(r_P(a^j))`, `0 <= j < p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedIdeals {
    pub ideals: Vec<Ideal>,
    pub table: Vec<ExponentRow>,
    /// Reduced form of the class of each `b_j`.
    pub classes: Vec<QuadForm>,
}

impl AssociatedIdeals {
    pub fn all_principal(&self) -> bool {
        self.classes.iter().all(QuadForm::is_principal_form)
    }
}

/// The associated ideals computed prime by prime; the i-part formula is
/// evaluated as well and must agree.
pub fn associated_ideals(ctx: &RadicandContext) -> Result<AssociatedIdeals> {
    let k = ctx.field();
    let p = ctx.p() as i64;
    let table: Vec<ExponentRow> = ctx
        .factorization()
        .iter()
        .map(|(q, v)| ExponentRow {
            prime: q.clone(),
            valuation: *v,
            r: (0..p).map(|j| (j * v).div_euclid(p)).collect(),
        })
        .collect();
    let ideals: Vec<Ideal> = (0..p as usize)
        .map(|j| {
            let f: Vec<(PrimeIdeal, i64)> =
                table.iter().map(|row| (row.prime.clone(), row.r[j])).collect();
            k.ideal_from_factors(&f)
        })
        .collect();
    let via_parts = associated_ideals_from_i_parts(ctx)?;
    if via_parts != ideals {
        return Err(Error::Degenerate(
            "associated ideals disagree between the prime and i-part formulas".into(),
        ));
    }
    let classes = ideals.iter().map(|b| b.class_form(k)).collect();
    Ok(AssociatedIdeals {
        ideals,
        table,
        classes,
    })
}

/// `b_j = prod_i A_i^(floor(i j / p))` from the i-parts of `a O_K`.
pub fn associated_ideals_from_i_parts(ctx: &RadicandContext) -> Result<Vec<Ideal>> {
    let k = ctx.field();
    let p = ctx.p() as i64;
    let dec = i_part_decomposition(k, &ctx.radicand_ideal())?;
    Ok((0..p)
        .map(|j| {
            dec.parts.iter().fold(Ideal::unit(k), |acc, part| {
                acc.mul(k, &part.ideal.pow(k, (part.i * j).div_euclid(p)))
            })
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RamificationType {
    Unramified,
    TotallyRamified,
}

impl RamificationType {
    pub fn as_str(&self) -> &'static str {
        match self {
            RamificationType::Unramified => "unramified",
            RamificationType::TotallyRamified => "totally-ramified",
        }
    }
}

/// Ramification of a prime not above `p` in `L/K`.
pub fn ramification_type(ctx: &RadicandContext, prime: &PrimeIdeal) -> Result<RamificationType> {
    if prime.lies_above(ctx.p()) {
        return domain(format!(
            "{prime} lies above p = {}; use the tameness test there",
            ctx.p()
        ));
    }
    Ok(if ctx.valuation_of_a(prime) % ctx.p() as i64 == 0 {
        RamificationType::Unramified
    } else {
        RamificationType::TotallyRamified
    })
}

/// Divides out `p`-th powers: returns `(a', s)` with `a' = a s^p` integral
/// and `v_P(a') < p` at every prime above `p` and at every prime whose
/// relevant power is principal.
pub fn strip_pth_powers(
    k: &BaseField,
    p: u64,
    a: &BaseElem,
    factors: &[(PrimeIdeal, i64)],
) -> (BaseElem, BaseElem) {
    let pi64 = p as i64;
    let mut s = k.one();
    for (q, v) in factors {
        let m = v / pi64;
        if m == 0 {
            continue;
        }
        let factor = if q.lies_above(p) && !k.is_rationals() && q.residue_degree() == 1 {
            // Split above p: conj(pi1)/p has valuation -1 at q and 0 at its
            // conjugate when v_q(pi1) = 1 and pi1 is prime to the conjugate.
            let pe = BaseElem::from_int(pi64);
            let qbar = k
                .primes_above(p)
                .into_iter()
                .find(|r| r != q)
                .expect("p splits");
            (0..pi64)
                .map(|t| q.pi() + &pe.scale(&Rat::from_integer(t.into())))
                .find(|pi1| {
                    q.valuation_elem(k, pi1) == Some(1) && qbar.valuation_elem(k, pi1) == Some(0)
                })
                .map(|pi1| {
                    let g = k.div(&k.conj(&pi1), &pe).expect("p nonzero");
                    k.pow(&g, m).expect("nonzero")
                })
        } else {
            q.ideal()
                .pow(k, m)
                .principality(k)
                .generator()
                .map(|g| k.inv(g).expect("nonzero"))
        };
        if let Some(f) = factor {
            s = k.mul(&s, &f);
        }
    }
    let a2 = k.mul(a, &k.pow(&s, pi64).expect("nonzero"));
    (a2, s)
}

/// Why an extension is wildly ramified above `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WildWitness {
    /// `v_P(a)` is not divisible by `p` at a prime above `p`.
    Valuation { prime: PrimeIdeal, valuation: i64 },
    /// `a` is a unit at `p`, but no `a^l` (`1 <= l < p`) is a `p`-th power
    /// in `(O_K / p^2 O_K)^x`; `residue` is `a mod p^2`.
    NoPthPowerResidue { residue: BaseElem, candidates: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TamenessVerdict {
    pub tame: bool,
    /// The radicand after removing `p`-th powers, `a s^p`.
    pub stripped: BaseElem,
    pub strip_factor: BaseElem,
    /// `(l, c)` with `a' = a^l c^p` (when tame).
    pub ell: Option<u64>,
    pub c: Option<BaseElem>,
    pub normalized: Option<BaseElem>,
    pub wild: Option<WildWitness>,
}

/// Residues of `O_K / p O_K` in the order `x + y w`, `y` outer.
fn residues_mod_p(k: &BaseField, p: u64) -> Vec<BaseElem> {
    let p = p as i64;
    let ys = if k.is_rationals() { 0..1 } else { 0..p };
    let mut out = Vec::new();
    for y in ys {
        for x in 0..p {
            out.push(k.elem(x, y));
        }
    }
    out
}

/// Decides tameness of `K(a^(1/p))/K` above `p` by searching `l` and
/// residues `c mod p` with `a^l c^p = 1 mod p^2` (the class of `c^p` mod
/// `p^2` depends only on `c mod p`).
pub fn tameness_test(k: &BaseField, p: u64, a: &BaseElem) -> Result<TamenessVerdict> {
    let ctx = RadicandContext::new(k, p, a)?;
    let (a0, s) = strip_pth_powers(k, p, a, ctx.factorization());
    let ctx0 = ctx.with_radicand(&a0)?;
    for q in ctx0.primes_above_p() {
        let v = ctx0.valuation_of_a(&q);
        if v % p as i64 != 0 {
            return Ok(TamenessVerdict {
                tame: false,
                stripped: a0,
                strip_factor: s,
                ell: None,
                c: None,
                normalized: None,
                wild: Some(WildWitness::Valuation { prime: q, valuation: v }),
            });
        }
        if v != 0 {
            // Only reachable when stripping was impossible above p.
            return Err(Error::Unsupported(format!(
                "could not remove the p-th power of {q} from the radicand"
            )));
        }
    }
    let p2 = BigInt::from(p) * BigInt::from(p);
    let one = k.one();
    let residues = residues_mod_p(k, p);
    let pth: Vec<(BaseElem, BaseElem)> = residues
        .iter()
        .map(|c| (c.clone(), k.reduce_mod(&k.pow(c, p as i64).expect("ok"), &p2)))
        .collect();
    let mut al = k.one();
    for ell in 1..p {
        al = k.reduce_mod(&k.mul(&al, &a0), &p2);
        for (c, cp) in &pth {
            if k.congruent_mod(&k.mul(&al, cp), &one, &p2) {
                let normalized = k.mul(&k.pow(&a0, ell as i64)?, &k.pow(c, p as i64)?);
                let total_c = k.mul(&k.pow(&s, ell as i64)?, c);
                return Ok(TamenessVerdict {
                    tame: true,
                    stripped: a0,
                    strip_factor: s,
                    ell: Some(ell),
                    c: Some(total_c),
                    normalized: Some(normalized),
                    wild: None,
                });
            }
        }
    }
    Ok(TamenessVerdict {
        tame: false,
        stripped: a0.clone(),
        strip_factor: s,
        ell: None,
        c: None,
        normalized: None,
        wild: Some(WildWitness::NoPthPowerResidue {
            residue: k.reduce_mod(&a0, &p2),
            candidates: residues.len() * (p as usize - 1),
        }),
    })
}

/// The context of the normalized radicand of a tame extension.
pub fn normalize(ctx: &RadicandContext) -> Result<(RadicandContext, TamenessVerdict)> {
    let verdict = tameness_test(ctx.field(), ctx.p(), ctx.a())?;
    match &verdict.normalized {
        Some(a) => Ok((ctx.with_radicand(a)?, verdict)),
        None => Err(Error::Precondition(format!(
            "K({}^(1/{})) is wildly ramified above p",
            ctx.a(),
            ctx.p()
        ))),
    }
}
