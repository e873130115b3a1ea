//! Exact arithmetic in the base field `K`, which is either `Q` or an
//! imaginary quadratic field `Q(sqrt d)`.
//!
//! Elements are stored in the integral basis `{1, w}` where `w = (1+sqrt d)/2`
//! when `d = 1 mod 4` and `w = sqrt d` otherwise, so an element is integral
//! exactly when both coordinates are integers. Over `Q` the second
//! coordinate is always zero.

mod classgroup;
mod ideal;
mod intfactor;
mod prime;
mod units;

pub use classgroup::{ClassGroup, QuadForm};
pub use ideal::{Ideal, PrincipalityWitness};
pub use intfactor::{factor_u64, is_prime_u64};
pub use prime::PrimeIdeal;

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

pub type Rat = BigRational;

/// Default bound on the absolute norm of anything handed to the factorizer.
pub const DEFAULT_MAX_NORM: u128 = 1u128 << 64;

pub(crate) fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub(crate) fn rat_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    ImaginaryQuadratic,
}

/// The base field `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseField {
    d: Option<i64>,
    max_norm: u128,
}

/// An element `x + y*w` of `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseElem {
    pub x: Rat,
    pub y: Rat,
}

fn is_squarefree(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

impl BaseField {
    pub fn rationals() -> Self {
        BaseField {
            d: None,
            max_norm: DEFAULT_MAX_NORM,
        }
    }

    pub fn imaginary_quadratic(d: i64) -> Result<Self> {
        if d >= 0 {
            return domain(format!("d = {d} must be negative"));
        }
        if d == -1 {
            return Ok(BaseField {
                d: Some(-1),
                max_norm: DEFAULT_MAX_NORM,
            });
        }
        if !is_squarefree(d.unsigned_abs()) {
            return domain(format!("d = {d} is not squarefree"));
        }
        Ok(BaseField {
            d: Some(d),
            max_norm: DEFAULT_MAX_NORM,
        })
    }

    pub fn with_max_norm(mut self, bound: u128) -> Result<Self> {
        if !(2..=DEFAULT_MAX_NORM).contains(&bound) {
            return domain(format!("norm bound {bound} must lie in [2, 2^64]"));
        }
        self.max_norm = bound;
        Ok(self)
    }

    pub fn max_norm(&self) -> u128 {
        self.max_norm
    }

    pub fn kind(&self) -> FieldKind {
        match self.d {
            None => FieldKind::Rationals,
            Some(_) => FieldKind::ImaginaryQuadratic,
        }
    }

    pub fn is_rationals(&self) -> bool {
        self.d.is_none()
    }

    pub fn d(&self) -> Option<i64> {
        self.d
    }

    /// `[K : Q]`.
    pub fn degree(&self) -> usize {
        if self.d.is_none() {
            1
        } else {
            2
        }
    }

    pub fn discriminant(&self) -> i64 {
        match self.d {
            None => 1,
            Some(d) if d.rem_euclid(4) == 1 => d,
            Some(d) => 4 * d,
        }
    }

    /// `w = (delta + sqrt D)/2`; returns `delta` (0 or 1).
    pub(crate) fn delta(&self) -> i64 {
        self.discriminant().rem_euclid(2)
    }

    /// Trace and norm of `w`, so that `w^2 = t*w - n`.
    pub(crate) fn omega_trace_norm(&self) -> (i64, i64) {
        match self.d {
            None => (0, 0),
            Some(d) if d.rem_euclid(4) == 1 => (1, (1 - d) / 4),
            Some(d) => (0, -d),
        }
    }

    /// Short label: `Q` or `Qsqrt<d>`.
    pub fn label(&self) -> String {
        match self.d {
            None => "Q".to_string(),
            Some(d) => format!("Qsqrt{d}"),
        }
    }

    /// Parses the `--base` flag syntax: `Q` or `Qsqrt<d>`.
    pub fn parse_label(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Self::rationals());
        }
        let Some(rest) = s.strip_prefix("Qsqrt") else {
            return domain(format!("unknown base field '{s}' (expected Q or Qsqrt<d>)"));
        };
        let d: i64 = rest
            .trim_start_matches('(')
            .trim_end_matches(')')
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse d in '{s}'")))?;
        Self::imaginary_quadratic(d)
    }

    pub fn zero(&self) -> BaseElem {
        BaseElem::zero()
    }

    pub fn one(&self) -> BaseElem {
        BaseElem::from_int(1)
    }

    pub fn omega(&self) -> BaseElem {
        assert!(self.d.is_some(), "w is not defined over Q");
        BaseElem {
            x: Rat::zero(),
            y: Rat::one(),
        }
    }

    pub fn elem(&self, x: i64, y: i64) -> BaseElem {
        debug_assert!(self.d.is_some() || y == 0);
        BaseElem { x: rat(x), y: rat(y) }
    }

    /// Checks that the element belongs to this field (the `w` coordinate is
    /// zero over `Q`).
    pub fn check(&self, a: &BaseElem) -> Result<()> {
        if self.d.is_none() && !a.y.is_zero() {
            return Err(Error::ContextMismatch(format!(
                "element {a} has a nonzero w-coordinate over Q"
            )));
        }
        Ok(())
    }

    pub fn mul(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        if self.d.is_none() {
            return BaseElem {
                x: &a.x * &b.x,
                y: Rat::zero(),
            };
        }
        let (t, n) = self.omega_trace_norm();
        let yy = &a.y * &b.y;
        BaseElem {
            x: &a.x * &b.x - &yy * rat(n),
            y: &a.x * &b.y + &a.y * &b.x + yy * rat(t),
        }
    }

    pub fn conj(&self, a: &BaseElem) -> BaseElem {
        let (t, _) = self.omega_trace_norm();
        BaseElem {
            x: &a.x + &a.y * rat(t),
            y: -&a.y,
        }
    }

    pub fn norm(&self, a: &BaseElem) -> Rat {
        if self.d.is_none() {
            return a.x.clone();
        }
        let (t, n) = self.omega_trace_norm();
        &a.x * &a.x + &a.x * &a.y * rat(t) + &a.y * &a.y * rat(n)
    }

    /// `|N(a)|`; over `Q` this is `|a|`, over imaginary quadratic fields the
    /// norm is already non-negative.
    pub fn abs_norm(&self, a: &BaseElem) -> Rat {
        self.norm(a).abs()
    }

    pub fn trace(&self, a: &BaseElem) -> Rat {
        if self.d.is_none() {
            return a.x.clone();
        }
        let (t, _) = self.omega_trace_norm();
        &a.x * rat(2) + &a.y * rat(t)
    }

    pub fn inv(&self, a: &BaseElem) -> Result<BaseElem> {
        if a.is_zero() {
            return domain("inverse of zero");
        }
        if self.d.is_none() {
            return Ok(BaseElem {
                x: a.x.recip(),
                y: Rat::zero(),
            });
        }
        let n = self.norm(a);
        Ok(self.conj(a).scale(&n.recip()))
    }

    pub fn div(&self, a: &BaseElem, b: &BaseElem) -> Result<BaseElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &BaseElem, e: i64) -> Result<BaseElem> {
        if e < 0 {
            let inv = self.inv(a)?;
            return self.pow(&inv, -e);
        }
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(result)
    }

    /// `Re(a * conj(b))`, the bilinear form attached to the norm.
    pub(crate) fn norm_pairing(&self, a: &BaseElem, b: &BaseElem) -> Rat {
        self.trace(&self.mul(a, &self.conj(b))) / rat(2)
    }

    /// Congruence of two integral elements modulo the rational integer `m`.
    pub fn congruent_mod(&self, a: &BaseElem, b: &BaseElem, m: &BigInt) -> bool {
        let diff = a - b;
        diff.is_integral()
            && diff.x.numer().is_multiple_of(m)
            && diff.y.numer().is_multiple_of(m)
    }

    /// Reduces an integral element coordinatewise into `[0, m)`.
    pub fn reduce_mod(&self, a: &BaseElem, m: &BigInt) -> BaseElem {
        debug_assert!(a.is_integral());
        BaseElem {
            x: rat_int(&a.x.numer().mod_floor(m)),
            y: rat_int(&a.y.numer().mod_floor(m)),
        }
    }

    /// Parses `x+y*w` (also accepts a bare rational `x`, `y*w`, `w`, and
    /// rationals written `n/d`).
    pub fn parse_elem(&self, s: &str) -> Result<BaseElem> {
        let e = s.parse::<BaseElem>()?;
        self.check(&e)?;
        Ok(e)
    }

    /// The integer `n` with `a = n`, when `a` is a rational integer.
    pub fn as_integer(&self, a: &BaseElem) -> Option<BigInt> {
        if a.y.is_zero() && a.x.is_integer() {
            Some(a.x.numer().clone())
        } else {
            None
        }
    }
}

impl BaseElem {
    pub fn zero() -> Self {
        BaseElem {
            x: Rat::zero(),
            y: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        BaseElem {
            x: rat(n),
            y: Rat::zero(),
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        BaseElem {
            x: Rat::from_integer(n),
            y: Rat::zero(),
        }
    }

    pub fn from_rat(x: Rat) -> Self {
        BaseElem { x, y: Rat::zero() }
    }

    pub fn new(x: Rat, y: Rat) -> Self {
        BaseElem { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// Membership in the ring of integers.
    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn scale(&self, c: &Rat) -> BaseElem {
        BaseElem {
            x: &self.x * c,
            y: &self.y * c,
        }
    }

    /// Least positive integer `m` with `m * self` integral.
    pub fn denominator(&self) -> BigInt {
        self.x.denom().lcm(self.y.denom())
    }

    /// Integer coordinates, if integral.
    pub fn int_coords(&self) -> Option<(BigInt, BigInt)> {
        if self.is_integral() {
            Some((self.x.numer().clone(), self.y.numer().clone()))
        } else {
            None
        }
    }

    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        let (x, y) = self.int_coords()?;
        Some((x.to_i64()?, y.to_i64()?))
    }
}

impl Add for &BaseElem {
    type Output = BaseElem;
    fn add(self, o: &BaseElem) -> BaseElem {
        BaseElem {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
        }
    }
}

impl Sub for &BaseElem {
    type Output = BaseElem;
    fn sub(self, o: &BaseElem) -> BaseElem {
        BaseElem {
            x: &self.x - &o.x,
            y: &self.y - &o.y,
        }
    }
}

impl Neg for &BaseElem {
    type Output = BaseElem;
    fn neg(self) -> BaseElem {
        BaseElem {
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl Add for BaseElem {
    type Output = BaseElem;
    fn add(self, o: BaseElem) -> BaseElem {
        &self + &o
    }
}

impl Sub for BaseElem {
    type Output = BaseElem;
    fn sub(self, o: BaseElem) -> BaseElem {
        &self - &o
    }
}

impl Neg for BaseElem {
    type Output = BaseElem;
    fn neg(self) -> BaseElem {
        -&self
    }
}

impl fmt::Display for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let y = if self.y.is_one() {
            "w".to_string()
        } else if (-&self.y).is_one() {
            "-w".to_string()
        } else {
            format!("{}*w", self.y)
        };
        if self.x.is_zero() {
            write!(f, "{y}")
        } else if y.starts_with('-') {
            write!(f, "{}{}", self.x, y)
        } else {
            write!(f, "{}+{}", self.x, y)
        }
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Domain(format!("cannot parse rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rat::new(n, d))
    } else {
        Ok(Rat::from_integer(s.trim().parse().map_err(|_| bad())?))
    }
}

impl FromStr for BaseElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return domain("empty element");
        }
        // Split into signed terms.
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut out = BaseElem::zero();
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            if let Some(coef) = term.strip_suffix('w') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = match coef {
                    "" => Rat::one(),
                    "-" => -Rat::one(),
                    _ => parse_rat(coef)?,
                };
                out.y += c;
            } else {
                out.x += parse_rat(term)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(BaseField::rationals().discriminant(), 1);
        assert_eq!(BaseField::imaginary_quadratic(-1).unwrap().discriminant(), -4);
        assert_eq!(BaseField::imaginary_quadratic(-3).unwrap().discriminant(), -3);
        assert_eq!(BaseField::imaginary_quadratic(-5).unwrap().discriminant(), -20);
        assert_eq!(BaseField::imaginary_quadratic(-7).unwrap().discriminant(), -7);
        for d in [-1, -2, -3, -5, -6, -7, -11, -15, -23] {
            let disc = BaseField::imaginary_quadratic(d).unwrap().discriminant();
            assert!(matches!(disc.rem_euclid(4), 0 | 1));
        }
    }

    #[test]
    fn rejects_bad_d() {
        assert!(BaseField::imaginary_quadratic(-4).is_err());
        assert!(BaseField::imaginary_quadratic(-12).is_err());
        assert!(BaseField::imaginary_quadratic(5).is_err());
        assert!(BaseField::imaginary_quadratic(0).is_err());
    }

    #[test]
    fn omega_squared() {
        // w^2 = -5 in Q(sqrt -5); w^2 = w - 2 in Q(sqrt -7).
        let k = BaseField::imaginary_quadratic(-5).unwrap();
        let w = k.omega();
        assert_eq!(k.mul(&w, &w), k.elem(-5, 0));
        let k = BaseField::imaginary_quadratic(-7).unwrap();
        let w = k.omega();
        assert_eq!(k.mul(&w, &w), k.elem(-2, 1));
        assert_eq!(k.norm(&w), rat(2));
    }

    #[test]
    fn inverse_and_norm() {
        let k = BaseField::imaginary_quadratic(-5).unwrap();
        let a = k.elem(1, 1);
        assert_eq!(k.norm(&a), rat(6));
        let inv = k.inv(&a).unwrap();
        assert!(k.mul(&a, &inv).is_one());
        assert!(k.inv(&k.zero()).is_err());
    }

    #[test]
    fn parse_and_display() {
        let k = BaseField::imaginary_quadratic(-5).unwrap();
        assert_eq!(k.parse_elem("1+w").unwrap(), k.elem(1, 1));
        assert_eq!(k.parse_elem("3 - 2*w").unwrap(), k.elem(3, -2));
        assert_eq!(k.parse_elem("-w").unwrap(), k.elem(0, -1));
        assert_eq!(k.parse_elem("1/2+3/4*w").unwrap().to_string(), "1/2+3/4*w");
        assert_eq!(k.elem(3, -2).to_string(), "3-2*w");
        let q = BaseField::rationals();
        assert_eq!(q.parse_elem("28").unwrap(), q.elem(28, 0));
        assert!(q.parse_elem("1+w").is_err());
        assert_eq!(BaseField::parse_label("Qsqrt-5").unwrap().d(), Some(-5));
        assert!(BaseField::parse_label("R").is_err());
    }
}
