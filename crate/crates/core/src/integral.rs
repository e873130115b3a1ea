//! Local integral bases of `O_L`, integrality tests, and (over `Q`) the
//! global integral basis and field discriminant.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::base::{BaseElem, BaseField, PrimeIdeal, Rat};
use crate::error::{Error, Result};
use crate::extension::{LElem, RadicandContext};
use crate::lattice::{hnf_glue, IntegerLattice};
use crate::linalg;

/// A basis of `O_{L,P}` over `O_{K,P}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalIntegralBasis {
    pub prime: PrimeIdeal,
    pub basis: Vec<LElem>,
    /// The uniformizer used in `alpha^j / pi^(r_j)` (primes dividing `a`
    /// but not `p`).
    pub uniformizer: Option<BaseElem>,
    /// `r_P(a^j)`; all zero above `p`.
    pub exponents: Vec<i64>,
}

impl LocalIntegralBasis {
    pub fn matrix(&self) -> Vec<Vec<BaseElem>> {
        self.basis.iter().map(|b| b.coords().to_vec()).collect()
    }
}

const UNIFORMIZER_SEARCH_RADIUS: i64 = 40;

/// An element with `v_P = 1` and valuation zero at every prime in `avoid`.
/// A generator when `P` is principal; otherwise the smallest-norm element
/// of `P` found by a box search over its `Z`-basis.
pub fn uniformizer(k: &BaseField, prime: &PrimeIdeal, avoid: &[PrimeIdeal]) -> Result<BaseElem> {
    if let Some(g) = prime.ideal().principality(k).generator() {
        return Ok(g.clone());
    }
    let zb = prime.ideal().z_basis();
    let ok = |x: &BaseElem| {
        prime.valuation_elem(k, x) == Some(1)
            && avoid
                .iter()
                .filter(|q| *q != prime)
                .all(|q| q.valuation_elem(k, x) == Some(0))
    };
    for radius in 1..=UNIFORMIZER_SEARCH_RADIUS {
        let mut found: Vec<(Rat, BaseElem)> = Vec::new();
        for c1 in -radius..=radius {
            for c2 in -radius..=radius {
                if c1.abs().max(c2.abs()) != radius {
                    continue;
                }
                let x = &zb[0].scale(&Rat::from_integer(c1.into()))
                    + &zb[1].scale(&Rat::from_integer(c2.into()));
                if !x.is_zero() && ok(&x) {
                    found.push((k.abs_norm(&x), x));
                }
            }
        }
        if let Some((_, x)) = found.into_iter().min() {
            return Ok(x);
        }
    }
    Err(Error::Resource {
        what: format!("uniformizer search at {prime}"),
        value: "exhausted".into(),
        bound: format!("radius {UNIFORMIZER_SEARCH_RADIUS}"),
    })
}

fn require_normalized(ctx: &RadicandContext) -> Result<()> {
    if ctx.is_normalized() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "radicand {} is not 1 mod p^2; normalize it first",
            ctx.a()
        )))
    }
}

/// `{alpha^j / pi^(r_j)}` away from `p`; `{1, ..., alpha^(p-2), (1/p) sum alpha^j}`
/// above `p` (normalized radicands only).
pub fn local_basis(ctx: &RadicandContext, prime: &PrimeIdeal) -> Result<LocalIntegralBasis> {
    let k = ctx.field();
    let n = ctx.degree();
    if prime.lies_above(ctx.p()) {
        require_normalized(ctx)?;
        let mut basis: Vec<LElem> = (0..n - 1).map(|j| ctx.alpha_pow(j)).collect();
        let inv_p = BaseElem::from_rat(Rat::new(BigInt::one(), BigInt::from(ctx.p())));
        basis.push(LElem::new(vec![inv_p; n]));
        return Ok(LocalIntegralBasis {
            prime: prime.clone(),
            basis,
            uniformizer: None,
            exponents: vec![0; n],
        });
    }
    let v = ctx.valuation_of_a(prime);
    let p = ctx.p() as i64;
    let exponents: Vec<i64> = (0..p).map(|j| (j * v).div_euclid(p)).collect();
    let uniformizer = if v > 0 {
        Some(uniformizer(k, prime, &ctx.support())?)
    } else {
        None
    };
    let basis = exponents
        .iter()
        .enumerate()
        .map(|(j, &r)| match &uniformizer {
            Some(pi) if r > 0 => {
                let scale = k.pow(pi, -r).expect("nonzero");
                ctx.scale(&scale, &ctx.alpha_pow(j))
            }
            _ => ctx.alpha_pow(j),
        })
        .collect();
    Ok(LocalIntegralBasis {
        prime: prime.clone(),
        basis,
        uniformizer,
        exponents,
    })
}

/// `v_P` of the determinant of the local basis in power-basis coordinates.
pub fn basis_det_valuation(ctx: &RadicandContext, lb: &LocalIntegralBasis) -> i64 {
    let d = linalg::det(ctx.field(), &lb.matrix());
    lb.prime.valuation_elem(ctx.field(), &d).expect("basis is nonsingular")
}

/// Coordinates of `x` in a local basis.
pub fn local_coordinates(
    ctx: &RadicandContext,
    lb: &LocalIntegralBasis,
    x: &LElem,
) -> Result<Vec<BaseElem>> {
    ctx.check(x)?;
    linalg::coordinates(ctx.field(), &lb.matrix(), x.coords())
}

fn integral_in(ctx: &RadicandContext, lb: &LocalIntegralBasis, x: &LElem) -> Result<bool> {
    let k = ctx.field();
    Ok(local_coordinates(ctx, lb, x)?
        .iter()
        .all(|c| lb.prime.valuation_elem(k, c).is_none_or(|v| v >= 0)))
}

pub fn is_integral_at(ctx: &RadicandContext, x: &LElem, prime: &PrimeIdeal) -> Result<bool> {
    integral_in(ctx, &local_basis(ctx, prime)?, x)
}

/// Primes at which `x` could fail to be integral: the support of `p a` and
/// the primes dividing coordinate denominators.
pub fn relevant_primes(ctx: &RadicandContext, x: &LElem) -> Result<Vec<PrimeIdeal>> {
    let k = ctx.field();
    let mut primes = ctx.support();
    for (q, _) in k.factor_norm(&x.denominator())? {
        for pr in k.primes_above(q) {
            if !primes.contains(&pr) {
                primes.push(pr);
            }
        }
    }
    primes.sort();
    Ok(primes)
}

/// `x in O_L`, decided prime by prime.
pub fn is_integral(ctx: &RadicandContext, x: &LElem) -> Result<bool> {
    for q in relevant_primes(ctx, x)? {
        if !is_integral_at(ctx, x, &q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_rationals(ctx: &RadicandContext) -> Result<()> {
    if ctx.field().is_rationals() {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "global integral bases are only assembled over Q".into(),
        ))
    }
}

/// `O_L` as a lattice in power-basis coordinates, glued from the local
/// bases at the primes dividing `p a`.
pub fn global_integral_basis(ctx: &RadicandContext) -> Result<IntegerLattice> {
    require_rationals(ctx)?;
    require_normalized(ctx)?;
    let mut conditions = Vec::new();
    for q in ctx.support() {
        let lb = local_basis(ctx, &q)?;
        let rows = lb.basis.iter().map(|b| ctx.flatten(b)).collect();
        conditions.push((q.q(), rows));
    }
    hnf_glue(&conditions, ctx.degree())
}

/// Trace over `Q` of an element of `L` (`K = Q`): `p` times the constant
/// coordinate.
fn trace_q(ctx: &RadicandContext, x: &LElem) -> Rat {
    &x.coord(0).x * Rat::from_integer(BigInt::from(ctx.p()))
}

/// Discriminant of a full-rank lattice in `L` (`K = Q`).
pub fn lattice_discriminant(ctx: &RadicandContext, lattice: &IntegerLattice) -> Result<BigInt> {
    require_rationals(ctx)?;
    let basis: Vec<LElem> = lattice.basis().iter().map(|r| ctx.unflatten(r)).collect();
    let n = basis.len();
    let gram: Vec<Vec<BaseElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BaseElem::from_rat(trace_q(ctx, &ctx.mul(&basis[i], &basis[j]))))
                .collect()
        })
        .collect();
    let d = linalg::det(ctx.field(), &gram).x;
    if !d.is_integer() {
        return Err(Error::Degenerate(format!("discriminant {d} is not an integer")));
    }
    Ok(d.to_integer())
}

/// `disc(x^p - a) = (-1)^(p(p-1)/2) p^p (-a)^(p-1)`.
pub fn poly_discriminant(p: u64, a: &BigInt) -> BigInt {
    let sign = if (p * (p - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    BigInt::from(sign) * BigInt::from(p).pow(p as u32) * (-a).pow((p - 1) as u32)
}

/// The field discriminant of `L` (`K = Q`).
pub fn field_discriminant(ctx: &RadicandContext) -> Result<BigInt> {
    let lattice = global_integral_basis(ctx)?;
    lattice_discriminant(ctx, &lattice)
}

/// `[O_L : Z[alpha]]` as `p * prod_(j>=1) b_j` from the associated ideals
/// (`K = Q`, positive generators).
pub fn expected_index(ctx: &RadicandContext) -> Result<BigInt> {
    require_rationals(ctx)?;
    let p = ctx.p() as i64;
    let mut index = BigInt::from(ctx.p());
    for j in 1..p {
        for (q, v) in ctx.factorization() {
            index *= BigInt::from(q.q()).pow(((j * v).div_euclid(p)) as u32);
        }
    }
    Ok(index.abs())
}

/// Index of `Z[alpha]` in a lattice containing it: `1 / covolume`.
pub fn lattice_index(lattice: &IntegerLattice) -> BigInt {
    let cov = lattice.covolume();
    debug_assert!(cov.numer().is_one() || cov.is_zero());
    cov.denom().clone()
}
