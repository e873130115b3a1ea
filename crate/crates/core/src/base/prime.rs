//! Prime ideals of `O_K`, valuations, and ideal factorization.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::intfactor::factor_u64;
use super::{rat_int, BaseElem, BaseField, Ideal, Rat};
use crate::error::{domain, Error, Result};

/// A prime ideal `P = (q, pi)` of `O_K` above the rational prime `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    q: u64,
    pi: BaseElem,
    f: u32,
    e: u32,
    /// An element `c` with `c * P ⊆ q O_K` and `v_P(c) = e - 1`, so that
    /// multiplying by `c / q` lowers `v_P` by exactly one.
    co: BaseElem,
    ideal: Ideal,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Square root of a quadratic residue `n` modulo an odd prime `q`
/// (Tonelli-Shanks).
fn sqrt_mod(n: u64, q: u64) -> Option<u64> {
    let n = n % q;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (q - 1) / 2, q) != 1 {
        return None;
    }
    let (mut s, mut m) = (q - 1, 0u32);
    while s % 2 == 0 {
        s /= 2;
        m += 1;
    }
    let mut z = 2;
    while pow_mod(z, (q - 1) / 2, q) != q - 1 {
        z += 1;
    }
    let mut c = pow_mod(z, s, q);
    let mut x = pow_mod(n, s.div_ceil(2), q);
    let mut t = pow_mod(n, s, q);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, q);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), q);
        x = mul_mod(x, b, q);
        c = mul_mod(b, b, q);
        t = mul_mod(t, c, q);
        m = i;
    }
    Some(x)
}

fn v_int(n: &BigInt, q: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(q) {
        n /= q;
        v += 1;
    }
    v
}

impl PrimeIdeal {
    /// Residue characteristic.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The second generator of the two-element representation.
    pub fn pi(&self) -> &BaseElem {
        &self.pi
    }

    pub fn residue_degree(&self) -> u32 {
        self.f
    }

    pub fn ramification_index(&self) -> u32 {
        self.e
    }

    pub fn is_ramified(&self) -> bool {
        self.e > 1
    }

    pub fn norm(&self) -> BigInt {
        BigInt::from(self.q).pow(self.f)
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// `v_P(x)`, or `None` for `x = 0`.
    pub fn valuation_elem(&self, k: &BaseField, x: &BaseElem) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        let q = BigInt::from(self.q);
        let den = x.denominator();
        let mut v = -(self.e as i64) * v_int(&den, &q);
        let mut num = x.scale(&rat_int(&den));
        if k.is_rationals() {
            return Some(v + v_int(num.x.numer(), &q));
        }
        let qr = rat_int(&q);
        loop {
            // Pull out whole factors of q first.
            let (a, b) = num.int_coords().expect("integral");
            if a.is_multiple_of(&q) && b.is_multiple_of(&q) {
                num = num.scale(&qr.recip());
                v += self.e as i64;
                continue;
            }
            let t = k.mul(&num, &self.co).scale(&qr.recip());
            if t.is_integral() {
                num = t;
                v += 1;
            } else {
                return Some(v);
            }
        }
    }

    /// `v_P(I)` for a nonzero fractional ideal.
    pub fn valuation(&self, k: &BaseField, ideal: &Ideal) -> i64 {
        ideal
            .z_basis()
            .iter()
            .filter_map(|g| self.valuation_elem(k, g))
            .min()
            .expect("nonzero ideal")
    }

    fn sort_key(&self) -> (BigInt, Rat, Rat) {
        (self.norm(), self.pi.x.clone(), self.pi.y.clone())
    }

    /// Whether `P` lies above the rational prime `p`.
    pub fn lies_above(&self, p: u64) -> bool {
        self.q == p
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi == BaseElem::from_int(self.q as i64) {
            write!(f, "({})", self.q)
        } else {
            write!(f, "({}, {})", self.q, self.pi)
        }
    }
}

impl BaseField {
    /// The prime ideals above the rational prime `q`, in canonical order.
    pub fn primes_above(&self, q: u64) -> Vec<PrimeIdeal> {
        let qe = BaseElem::from_int(q as i64);
        if self.is_rationals() {
            return vec![PrimeIdeal {
                q,
                pi: qe.clone(),
                f: 1,
                e: 1,
                co: self.one(),
                ideal: Ideal::principal(self, &qe).expect("nonzero"),
            }];
        }
        let (t, n) = self.omega_trace_norm();
        let disc = self.discriminant();
        // Roots of w's minimal polynomial x^2 - t x + n modulo q.
        let roots: Vec<u64> = if q == 2 {
            (0..2u64)
                .filter(|&r| ((r * r) as i64 - t * r as i64 + n).rem_euclid(2) == 0)
                .collect()
        } else {
            let dq = disc.rem_euclid(q as i64) as u64;
            match sqrt_mod(dq, q) {
                None => vec![],
                Some(s) => {
                    let inv2 = q.div_ceil(2); // (q+1)/2
                    let tq = t.rem_euclid(q as i64) as u64;
                    let r1 = mul_mod((tq + s) % q, inv2, q);
                    let r2 = mul_mod((tq + q - s) % q, inv2, q);
                    let mut r = vec![r1, r2];
                    r.sort_unstable();
                    r.dedup();
                    r
                }
            }
        };
        let ramified = (disc.unsigned_abs()).is_multiple_of(q);
        let mut out: Vec<PrimeIdeal> = match roots.len() {
            0 => vec![PrimeIdeal {
                q,
                pi: qe.clone(),
                f: 2,
                e: 1,
                co: self.one(),
                ideal: Ideal::principal(self, &qe).expect("nonzero"),
            }],
            _ => roots
                .iter()
                .map(|&r| {
                    let s = (q - r % q) % q;
                    let pi = BaseElem::new(Rat::from_integer(BigInt::from(s)), Rat::one());
                    let co = if ramified { pi.clone() } else { self.conj(&pi) };
                    let ideal = Ideal::from_generators(self, &[qe.clone(), pi.clone()])
                        .expect("nonzero");
                    PrimeIdeal {
                        q,
                        pi,
                        f: 1,
                        e: if ramified { 2 } else { 1 },
                        co,
                        ideal,
                    }
                })
                .collect(),
        };
        out.sort();
        out
    }

    /// Factors a positive integer subject to the configured norm bound.
    pub fn factor_norm(&self, n: &BigInt) -> Result<Vec<(u64, u32)>> {
        let n = n.abs();
        if n.is_zero() {
            return domain("factorization of zero");
        }
        let bound = BigInt::from(self.max_norm);
        if n > bound {
            return Err(Error::Resource {
                what: "norm to factor".into(),
                value: n.to_string(),
                bound: bound.to_string(),
            });
        }
        let mut m = n.to_u128().expect("bounded by 2^64");
        let mut twos = 0u32;
        while m.is_multiple_of(2) {
            m /= 2;
            twos += 1;
        }
        let mut out = factor_u64(m as u64);
        if twos > 0 {
            out.insert(0, (2, twos));
        }
        Ok(out)
    }

    /// Prime factorization of `x O_K` for a nonzero integral `x`.
    pub fn factor_elem(&self, x: &BaseElem) -> Result<Vec<(PrimeIdeal, i64)>> {
        if x.is_zero() {
            return domain("factorization of the zero element");
        }
        if !x.is_integral() {
            return domain(format!("{x} is not integral"));
        }
        let norm = self.abs_norm(x);
        let mut out = Vec::new();
        for (q, _) in self.factor_norm(norm.numer())? {
            for p in self.primes_above(q) {
                let v = p.valuation_elem(self, x).expect("nonzero");
                if v > 0 {
                    out.push((p, v));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Factorization of a nonzero fractional ideal, exponents may be negative.
    pub fn factor_ideal(&self, ideal: &Ideal) -> Result<Vec<(PrimeIdeal, i64)>> {
        let num_norm = ideal.numerator().norm();
        let mut qs: Vec<u64> = self
            .factor_norm(num_norm.numer())?
            .into_iter()
            .map(|(q, _)| q)
            .collect();
        qs.extend(self.factor_norm(ideal.denominator())?.into_iter().map(|(q, _)| q));
        qs.sort_unstable();
        qs.dedup();
        let mut out = Vec::new();
        for q in qs {
            for p in self.primes_above(q) {
                let v = p.valuation(self, ideal);
                if v != 0 {
                    out.push((p, v));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// `prod P^e` as an ideal.
    pub fn ideal_from_factors(&self, factors: &[(PrimeIdeal, i64)]) -> Ideal {
        factors.iter().fold(Ideal::unit(self), |acc, (p, e)| {
            acc.mul(self, &p.ideal().pow(self, *e))
        })
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::rat;

    #[test]
    fn tonelli() {
        for q in [3u64, 5, 7, 11, 13, 17, 97, 101, 1_000_003] {
            for n in 1..50u64 {
                if let Some(r) = sqrt_mod(n, q) {
                    assert_eq!(mul_mod(r, r, q), n % q);
                }
            }
        }
    }

    #[test]
    fn factor_28_over_q() {
        let k = BaseField::rationals();
        let f = k.factor_elem(&k.elem(28, 0)).unwrap();
        let got: Vec<_> = f.iter().map(|(p, e)| (p.q(), *e)).collect();
        assert_eq!(got, vec![(2, 2), (7, 1)]);
        assert!(k.factor_elem(&k.elem(1, 0)).unwrap().is_empty());
        assert!(k.factor_elem(&k.zero()).is_err());
    }

    #[test]
    fn factor_6_over_sqrt_minus_5() {
        let k = BaseField::imaginary_quadratic(-5).unwrap();
        let six = k.elem(6, 0);
        let f = k.factor_elem(&six).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f[0].0.q(), 2);
        assert_eq!(f[0].1, 2);
        assert_eq!(f[0].0.pi(), &k.elem(1, 1));
        assert!(f[0].0.is_ramified());
        assert_eq!((f[1].0.q(), f[1].1), (3, 1));
        assert_eq!((f[2].0.q(), f[2].1), (3, 1));
        assert_ne!(f[1].0, f[2].0);
        let norms: BigInt = f.iter().map(|(p, e)| p.norm().pow(*e as u32)).product();
        assert_eq!(norms, BigInt::from(36));
        assert_eq!(k.ideal_from_factors(&f), Ideal::principal(&k, &six).unwrap());
    }

    #[test]
    fn valuations() {
        let q = BaseField::rationals();
        let p2 = &q.primes_above(2)[0];
        let p3 = &q.primes_above(3)[0];
        let i28 = Ideal::principal(&q, &q.elem(28, 0)).unwrap();
        assert_eq!(p2.valuation(&q, &i28), 2);
        assert_eq!(p3.valuation(&q, &i28), 0);

        let k = BaseField::imaginary_quadratic(-5).unwrap();
        let p = &k.primes_above(2)[0];
        let two = Ideal::principal(&k, &k.elem(2, 0)).unwrap();
        assert_eq!(p.valuation(&k, &two), 2);
        assert_eq!(p.ideal().pow(&k, 2), two);
        assert_eq!(p.valuation(&k, p.ideal()), 1);
        let frac = BaseElem::new(Rat::new(1.into(), 4.into()), rat(0));
        assert_eq!(p.valuation_elem(&k, &frac), Some(-4));
    }

    #[test]
    fn splitting_types() {
        let k = BaseField::imaginary_quadratic(-1).unwrap();
        assert_eq!(k.primes_above(5).len(), 2);
        assert_eq!(k.primes_above(3).len(), 1);
        assert_eq!(k.primes_above(3)[0].residue_degree(), 2);
        assert!(k.primes_above(2)[0].is_ramified());
        let k = BaseField::imaginary_quadratic(-7).unwrap();
        // 2 splits in Q(sqrt -7)
        let p2 = k.primes_above(2);
        assert_eq!(p2.len(), 2);
        let prod = p2[0].ideal().mul(&k, p2[1].ideal());
        assert_eq!(prod, Ideal::principal(&k, &k.elem(2, 0)).unwrap());
        // 7 ramifies
        let p7 = k.primes_above(7);
        assert_eq!(p7.len(), 1);
        assert_eq!(p7[0].ideal().pow(&k, 2), Ideal::principal(&k, &k.elem(7, 0)).unwrap());
    }

    #[test]
    fn norm_bound_is_enforced() {
        let k = BaseField::rationals().with_max_norm(1000).unwrap();
        match k.factor_elem(&k.elem(1001, 0)) {
            Err(Error::Resource { bound, .. }) => assert_eq!(bound, "1000"),
            other => panic!("expected resource error, got {other:?}"),
        }
        assert!(k.factor_elem(&k.elem(1000, 0)).is_ok());
    }
}
