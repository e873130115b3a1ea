//! The Hopf algebra `H = K^p` in its orthogonal idempotent basis
//! `e_0, ..., e_(p-1)`, acting on `L` by `e_i . alpha^j = delta_ij alpha^j`.
//!
//! Group-like coordinates use `eta^k` with `e_i = (1/p) sum_k zeta^(-ik) eta^k`,
//! so the coefficient of `eta^k` in `sum_i c_i e_i` is
//! `(1/p) sum_i c_i zeta^(-ik)`, an element of `F = K(zeta)` written in the
//! basis `1, zeta, ..., zeta^(p-2)`.

use num_bigint::BigInt;
use num_traits::One;

use crate::base::{BaseElem, BaseField, PrimeIdeal, QuadForm, Rat};
use crate::error::{domain, Error, Result};
use crate::extension::{LElem, RadicandContext};
use crate::integral::{local_basis, local_coordinates};
use crate::linalg;
use crate::radical::AssociatedIdeals;

/// An element of `F = K(zeta_p)` in the basis `1, zeta, ..., zeta^(p-2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicElem {
    pub coords: Vec<BaseElem>,
}

impl CyclotomicElem {
    pub fn zero(p: u64) -> Self {
        CyclotomicElem {
            coords: vec![BaseElem::zero(); p as usize - 1],
        }
    }

    pub fn from_base(p: u64, c: &BaseElem) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = c.clone();
        z
    }

    fn p(&self) -> u64 {
        self.coords.len() as u64 + 1
    }

    /// `zeta^e`, using `zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))`.
    pub fn zeta_pow(p: u64, e: i64) -> Self {
        let e = e.rem_euclid(p as i64) as usize;
        let mut z = Self::zero(p);
        if e < p as usize - 1 {
            z.coords[e] = BaseElem::from_int(1);
        } else {
            for c in z.coords.iter_mut() {
                *c = BaseElem::from_int(-1);
            }
        }
        z
    }

    pub fn add(&self, o: &Self) -> Self {
        CyclotomicElem {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: &BaseField, c: &BaseElem) -> Self {
        CyclotomicElem {
            coords: self.coords.iter().map(|x| k.mul(c, x)).collect(),
        }
    }

    /// Product modulo the cyclotomic polynomial.
    pub fn mul(&self, k: &BaseField, o: &Self) -> Self {
        let p = self.p();
        let mut out = Self::zero(p);
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let term = Self::zeta_pow(p, (i + j) as i64).scale(k, &k.mul(a, b));
                out = out.add(&term);
            }
        }
        out
    }

    /// Integral in `O_F` iff every coordinate is in `O_K`.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(BaseElem::is_integral)
    }

    /// The element as a member of `K`, if it lies there.
    pub fn as_base(&self) -> Option<BaseElem> {
        if self.coords[1..].iter().all(BaseElem::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }
}

/// `sum_i c_i e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HElem {
    pub c: Vec<BaseElem>,
}

impl HElem {
    pub fn new(c: Vec<BaseElem>) -> Self {
        HElem { c }
    }

    pub fn identity(p: u64) -> Self {
        HElem {
            c: vec![BaseElem::from_int(1); p as usize],
        }
    }

    pub fn idempotent(p: u64, i: usize) -> Self {
        let mut c = vec![BaseElem::zero(); p as usize];
        c[i] = BaseElem::from_int(1);
        HElem { c }
    }

    /// `p e_i`.
    pub fn scaled_idempotent(p: u64, i: usize) -> Self {
        let mut c = vec![BaseElem::zero(); p as usize];
        c[i] = BaseElem::from_int(p as i64);
        HElem { c }
    }

    pub fn p(&self) -> u64 {
        self.c.len() as u64
    }

    pub fn mul(&self, k: &BaseField, o: &HElem) -> HElem {
        HElem {
            c: self.c.iter().zip(&o.c).map(|(a, b)| k.mul(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &HElem) -> HElem {
        HElem {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: &BaseField, s: &BaseElem) -> HElem {
        HElem {
            c: self.c.iter().map(|a| k.mul(s, a)).collect(),
        }
    }
}

/// `(h . x)_j = c_j x_j`.
pub fn act(ctx: &RadicandContext, h: &HElem, x: &LElem) -> Result<LElem> {
    ctx.check(x)?;
    if h.p() != ctx.p() {
        return Err(Error::ContextMismatch(format!(
            "Hopf element of degree {} acting in degree {}",
            h.p(),
            ctx.p()
        )));
    }
    let k = ctx.field();
    Ok(LElem::new(
        h.c.iter().zip(x.coords()).map(|(c, xj)| k.mul(c, xj)).collect(),
    ))
}

/// Coefficients of `h` on `eta^0, ..., eta^(p-1)`.
pub fn eta_coefficients(k: &BaseField, h: &HElem) -> Vec<CyclotomicElem> {
    let p = h.p();
    let inv_p = BaseElem::from_rat(Rat::new(BigInt::one(), BigInt::from(p)));
    (0..p as i64)
        .map(|kk| {
            let mut acc = CyclotomicElem::zero(p);
            for (i, ci) in h.c.iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                acc = acc.add(&CyclotomicElem::zeta_pow(p, -(i as i64) * kk).scale(k, ci));
            }
            acc.scale(k, &inv_p)
        })
        .collect()
}

/// Inverse of [`eta_coefficients`]: `c_i = sum_k d_k zeta^(ik)`, which must
/// lie in `K`.
pub fn from_eta_coefficients(k: &BaseField, d: &[CyclotomicElem]) -> Result<HElem> {
    let p = d.len() as u64;
    let mut c = Vec::with_capacity(p as usize);
    for i in 0..p as i64 {
        let mut acc = CyclotomicElem::zero(p);
        for (kk, dk) in d.iter().enumerate() {
            acc = acc.add(&dk.mul(k, &CyclotomicElem::zeta_pow(p, i * kk as i64)));
        }
        match acc.as_base() {
            Some(x) => c.push(x),
            None => return domain("eta coefficients do not define an element of H"),
        }
    }
    Ok(HElem::new(c))
}

/// Membership in the associated order by integrality of the
/// eta-coefficients in `O_F`.
pub fn in_associated_order(k: &BaseField, h: &HElem) -> bool {
    eta_coefficients(k, h).iter().all(CyclotomicElem::is_integral)
}

/// Membership in the associated order by the congruence description:
/// all `c_i` integral and pairwise congruent mod `p O_K`.
pub fn in_associated_order_by_congruence(k: &BaseField, h: &HElem) -> bool {
    let p = BigInt::from(h.p());
    h.c.iter().all(BaseElem::is_integral) && h.c.iter().all(|ci| k.congruent_mod(ci, &h.c[0], &p))
}

/// Membership in the maximal order `O_K^p`.
pub fn in_maximal_order(h: &HElem) -> bool {
    h.c.iter().all(BaseElem::is_integral)
}

/// The local generator `x_P`: `(1/p) sum alpha^j` above `p`, otherwise
/// `(1/p) sum alpha^j / pi^(r_P(a^j))` with the local basis' uniformizer.
pub fn local_generator(ctx: &RadicandContext, prime: &PrimeIdeal) -> Result<LElem> {
    let lb = local_basis(ctx, prime)?;
    let inv_p = BaseElem::from_rat(Rat::new(BigInt::one(), BigInt::from(ctx.p())));
    if prime.lies_above(ctx.p()) {
        return Ok(LElem::new(vec![inv_p; ctx.degree()]));
    }
    let sum = lb.basis.iter().fold(ctx.zero(), |acc, b| &acc + b);
    Ok(ctx.scale(&inv_p, &sum))
}

/// The `O_K`-basis `1, p e_1, ..., p e_(p-1)` of the associated order.
pub fn associated_order_basis(p: u64) -> Vec<HElem> {
    let mut out = vec![HElem::identity(p)];
    out.extend((1..p as usize).map(|i| HElem::scaled_idempotent(p, i)));
    out
}

/// `{x, p e_1 . x, ..., p e_(p-1) . x}`.
pub fn orbit_basis(ctx: &RadicandContext, x: &LElem) -> Result<Vec<LElem>> {
    associated_order_basis(ctx.p())
        .iter()
        .map(|h| act(ctx, h, x))
        .collect()
}

/// Comparison of the associated-order orbit of `x` with `O_{L,P}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSpanCheck {
    pub prime: PrimeIdeal,
    /// `v_P` of the determinant of the orbit in local-basis coordinates
    /// (`None` if the orbit is linearly dependent).
    pub det_valuation: Option<i64>,
    /// Every orbit element lies in `O_{L,P}`.
    pub contained: bool,
}

impl LocalSpanCheck {
    pub fn generates(&self) -> bool {
        self.contained && self.det_valuation == Some(0)
    }
}

pub fn local_span_check(ctx: &RadicandContext, prime: &PrimeIdeal, x: &LElem) -> Result<LocalSpanCheck> {
    let k = ctx.field();
    let lb = local_basis(ctx, prime)?;
    let mut rows = Vec::new();
    for y in orbit_basis(ctx, x)? {
        rows.push(local_coordinates(ctx, &lb, &y)?);
    }
    let contained = rows
        .iter()
        .flatten()
        .all(|c| prime.valuation_elem(k, c).is_none_or(|v| v >= 0));
    let det = linalg::det(k, &rows);
    Ok(LocalSpanCheck {
        prime: prime.clone(),
        det_valuation: prime.valuation_elem(k, &det),
        contained,
    })
}

/// Classes of `(b_0^-1, ..., b_(p-1)^-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTuple {
    pub classes: Vec<QuadForm>,
}

impl ClassTuple {
    pub fn is_trivial(&self) -> bool {
        self.classes.iter().all(QuadForm::is_principal_form)
    }

    pub fn first_nontrivial(&self) -> Option<(usize, &QuadForm)> {
        self.classes
            .iter()
            .enumerate()
            .find(|(_, f)| !f.is_principal_form())
    }
}

pub fn class_of_mol(ctx: &RadicandContext, assoc: &AssociatedIdeals) -> ClassTuple {
    let k = ctx.field();
    ClassTuple {
        classes: assoc
            .ideals
            .iter()
            .map(|b| b.inverse(k).class_form(k))
            .collect(),
    }
}
