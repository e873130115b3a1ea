//! The Dedekind criterion for `f = x^p - a` over `Q`, used as an independent
//! check on integral bases. Polynomial arithmetic over `F_q` is implemented
//! here from scratch and shares nothing with the local-basis code.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Dense polynomial over `F_q`, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqPoly {
    pub q: u64,
    pub coeffs: Vec<u64>,
}

fn mulm(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn invm(a: u64, q: u64) -> u64 {
    // Fermat; q is prime.
    let (mut r, mut b, mut e) = (1u64, a % q, q - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, q);
        }
        b = mulm(b, b, q);
        e >>= 1;
    }
    r
}

impl FqPoly {
    pub fn new(q: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { q, coeffs }
    }

    pub fn from_int(q: u64, coeffs: &[BigInt]) -> Self {
        let qb = BigInt::from(q);
        Self::new(
            q,
            coeffs
                .iter()
                .map(|c| c.mod_floor(&qb).to_u64().expect("reduced"))
                .collect(),
        )
    }

    pub fn one(q: u64) -> Self {
        Self::new(q, vec![1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().expect("nonzero")
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invm(self.lead(), self.q);
        Self::new(self.q, self.coeffs.iter().map(|&c| mulm(c, inv, self.q)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(self.q, vec![]);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulm(a, b, self.q)) % self.q;
            }
        }
        Self::new(self.q, out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.q,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + self.q - get(&o.coeffs, i)) % self.q)
                .collect(),
        )
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let q = self.q;
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        if r.len() <= dd {
            return (Self::new(q, vec![]), self.clone());
        }
        let inv = invm(d.lead(), q);
        let mut quo = vec![0u64; r.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = mulm(r[i + dd], inv, q);
            quo[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i + j] = (r[i + j] + q - mulm(c, dc, q)) % q;
            }
        }
        (Self::new(q, quo), Self::new(q, r))
    }

    /// Monic gcd (zero when both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.q,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulm(c, (i as u64) % self.q, self.q))
                .collect(),
        )
    }

    /// For `f(x) = g(x^q)`, returns `g` (the `q`-th root over the prime field).
    fn qth_root(&self) -> Self {
        let q = self.q as usize;
        Self::new(self.q, self.coeffs.iter().step_by(q).copied().collect())
    }

    fn lcm(&self, o: &Self) -> Self {
        let g = self.gcd(o);
        self.mul(o).divrem(&g).0.monic()
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Self {
        assert!(!self.is_zero());
        if self.is_constant() {
            return Self::one(self.q);
        }
        let f = self.monic();
        let df = f.derivative();
        if df.is_zero() {
            return f.qth_root().radical();
        }
        // Musser: peel off squarefree parts of each multiplicity.
        let mut rad = Self::one(self.q);
        let mut c = f.gcd(&df);
        let mut w = f.divrem(&c).0;
        while !w.is_constant() {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            rad = rad.lcm(&z);
            w = y;
            c = c.divrem(&w).0;
        }
        if !c.is_constant() {
            rad = rad.lcm(&c.qth_root().radical());
        }
        rad.monic()
    }

    fn lift(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Transcript of the criterion at one prime `q`: with `g`, `h` lifts of
/// `rad(f mod q)` and `(f mod q)/rad`, and `F = (g h - f)/q`, the order
/// `Z[alpha]` is `q`-maximal iff `gcd(F mod q, g mod q, h mod q) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalityWitness {
    pub q: u64,
    pub p: u64,
    pub a: BigInt,
    pub f_mod_q: FqPoly,
    pub g: FqPoly,
    pub h: FqPoly,
    pub f_term: FqPoly,
    pub gcd: FqPoly,
    pub maximal: bool,
}

fn x_pow_minus(p: u64, a: &BigInt) -> Vec<BigInt> {
    let mut f = vec![BigInt::zero(); p as usize + 1];
    f[0] = -a;
    f[p as usize] = BigInt::from(1);
    f
}

/// Applies the Dedekind criterion to `x^p - a` at the prime `q`.
pub fn dedekind_maximality_oracle(q: u64, p: u64, a: &BigInt) -> MaximalityWitness {
    let f = x_pow_minus(p, a);
    let fq = FqPoly::from_int(q, &f);
    let g = fq.radical();
    let h = fq.divrem(&g).0;
    let gh = int_mul(&g.lift(), &h.lift());
    let qb = BigInt::from(q);
    let big_f: Vec<BigInt> = (0..gh.len().max(f.len()))
        .map(|i| {
            let d = gh.get(i).cloned().unwrap_or_default() - f.get(i).cloned().unwrap_or_default();
            debug_assert!(d.is_multiple_of(&qb));
            d / &qb
        })
        .collect();
    let f_term = FqPoly::from_int(q, &big_f);
    let gcd = f_term.gcd(&g).gcd(&h);
    let maximal = gcd.is_constant();
    MaximalityWitness {
        q,
        p,
        a: a.clone(),
        f_mod_q: fq,
        g,
        h,
        f_term,
        gcd,
        maximal,
    }
}

impl MaximalityWitness {
    /// Re-derives the transcript and checks every recorded polynomial.
    pub fn recheck(&self) -> bool {
        let fresh = dedekind_maximality_oracle(self.q, self.p, &self.a);
        let gh = self.g.mul(&self.h);
        fresh == *self && gh == self.f_mod_q.monic() && self.g.gcd(&self.g.derivative()).is_constant()
    }
}

/// For `gcd(a, p) = 1`: whether `p` is wildly ramified in `Q(a^(1/p))`,
/// read off from `p`-maximality of `Z[alpha]`. When `Z[alpha]` is
/// `p`-maximal, `v_p(disc L) = v_p(disc f) = p`, which exceeds the tame
/// bound `p - 1`; otherwise the index is divisible by `p` and
/// `v_p(disc L) <= p - 2`.
pub fn wild_at_p(p: u64, a: &BigInt) -> Option<bool> {
    if a.is_multiple_of(&BigInt::from(p)) {
        return None;
    }
    Some(dedekind_maximality_oracle(p, p, a).maximal)
}
