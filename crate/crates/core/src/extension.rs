//! The radical extension `L = K(alpha)`, `alpha^p = a`, with elements stored
//! as coordinate vectors in the power basis `1, alpha, ..., alpha^(p-1)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::base::{is_prime_u64, BaseElem, BaseField, Ideal, PrimeIdeal, Rat};
use crate::error::{domain, Error, Result};
use crate::linalg::KMatrix;

/// Largest prime degree accepted by [`RadicandContext::new`].
pub const MAX_DEGREE: u64 = 997;

/// An element `sum_j c_j alpha^j` of `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LElem {
    coords: Vec<BaseElem>,
}

impl LElem {
    pub fn new(coords: Vec<BaseElem>) -> Self {
        LElem { coords }
    }

    pub fn coords(&self) -> &[BaseElem] {
        &self.coords
    }

    pub fn coord(&self, j: usize) -> &BaseElem {
        &self.coords[j]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(BaseElem::is_zero)
    }

    /// Least common denominator of all rational coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, &c.denominator())
        })
    }
}

impl Add for &LElem {
    type Output = LElem;
    fn add(self, rhs: &LElem) -> LElem {
        assert_eq!(self.len(), rhs.len(), "length mismatch");
        LElem::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LElem {
    type Output = LElem;
    fn sub(self, rhs: &LElem) -> LElem {
        assert_eq!(self.len(), rhs.len(), "length mismatch");
        LElem::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LElem {
    type Output = LElem;
    fn neg(self) -> LElem {
        LElem::new(self.coords.iter().map(|a| -a).collect())
    }
}

fn fmt_coeff(c: &BaseElem) -> String {
    let s = c.to_string();
    if !c.y.is_zero() && !c.x.is_zero() {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for LElem {
    /// Writes `(t_0 + t_1 + ...)/D` over the least common denominator, with
    /// `a` standing for the radical generator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.denominator();
        let scale = Rat::from_integer(den.clone());
        let mut terms = Vec::new();
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.scale(&scale);
            let mono = match j {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{j}"),
            };
            let term = if j == 0 {
                fmt_coeff(&c)
            } else if c.is_one() {
                mono
            } else if c == BaseElem::from_int(-1) {
                format!("-{mono}")
            } else {
                format!("{}*{mono}", fmt_coeff(&c))
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut body = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => body.push_str(&format!(" - {rest}")),
                None => body.push_str(&format!(" + {t}")),
            }
        }
        if den.is_one() {
            write!(f, "{body}")
        } else if terms.len() == 1 {
            write!(f, "{body}/{den}")
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

/// The data `(K, p, a)` defining `L = K(a^(1/p))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicandContext {
    k: BaseField,
    p: u64,
    a: BaseElem,
    factors: Vec<(PrimeIdeal, i64)>,
}

/// Whether the integral element `a` is a `p`-th power in `K`, given the
/// factorization of `a O_K`.
fn is_pth_power(k: &BaseField, p: u64, a: &BaseElem, factors: &[(PrimeIdeal, i64)]) -> bool {
    if factors.iter().any(|(_, e)| e % p as i64 != 0) {
        return false;
    }
    let root: Vec<(PrimeIdeal, i64)> =
        factors.iter().map(|(q, e)| (q.clone(), e / p as i64)).collect();
    let ideal = k.ideal_from_factors(&root);
    let Some(g) = ideal.principality(k).generator().cloned() else {
        return false;
    };
    k.units().iter().any(|u| {
        let cand = k.mul(u, &g);
        k.pow(&cand, p as i64).expect("nonzero") == *a
    })
}

impl RadicandContext {
    /// Validates `p` (odd prime, unramified in `K`) and `a` (nonzero,
    /// integral, not a `p`-th power) and factors `a O_K`.
    pub fn new(k: &BaseField, p: u64, a: &BaseElem) -> Result<Self> {
        if p < 3 || !is_prime_u64(p) {
            return domain(format!("p = {p} is not an odd prime"));
        }
        if p > MAX_DEGREE {
            return Err(Error::Resource {
                what: "degree p".into(),
                value: p.to_string(),
                bound: MAX_DEGREE.to_string(),
            });
        }
        if k.discriminant().unsigned_abs().is_multiple_of(p) {
            return domain(format!("p = {p} ramifies in {}", k.label()));
        }
        k.check(a)?;
        if a.is_zero() {
            return domain("the radicand must be nonzero");
        }
        if !a.is_integral() {
            return domain(format!("the radicand {a} is not integral"));
        }
        let factors = k.factor_elem(a)?;
        if is_pth_power(k, p, a, &factors) {
            return Err(Error::Degenerate(format!(
                "{a} is a p-th power in {} (p = {p}), so the extension is trivial",
                k.label()
            )));
        }
        Ok(RadicandContext {
            k: k.clone(),
            p,
            a: a.clone(),
            factors,
        })
    }

    pub fn field(&self) -> &BaseField {
        &self.k
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.p as usize
    }

    pub fn a(&self) -> &BaseElem {
        &self.a
    }

    /// Factorization of `a O_K`, sorted.
    pub fn factorization(&self) -> &[(PrimeIdeal, i64)] {
        &self.factors
    }

    /// `v_P(a)`.
    pub fn valuation_of_a(&self, prime: &PrimeIdeal) -> i64 {
        self.factors
            .iter()
            .find(|(q, _)| q == prime)
            .map_or(0, |(_, e)| *e)
    }

    pub fn primes_above_p(&self) -> Vec<PrimeIdeal> {
        self.k.primes_above(self.p)
    }

    /// Primes dividing `p a O_K`, sorted.
    pub fn support(&self) -> Vec<PrimeIdeal> {
        let mut out: Vec<PrimeIdeal> = self.factors.iter().map(|(q, _)| q.clone()).collect();
        for q in self.primes_above_p() {
            if !out.contains(&q) {
                out.push(q);
            }
        }
        out.sort();
        out
    }

    /// `a = 1 mod p^2 O_K`.
    pub fn is_normalized(&self) -> bool {
        let p2 = BigInt::from(self.p) * BigInt::from(self.p);
        self.k.congruent_mod(&self.a, &self.k.one(), &p2)
    }

    pub fn zero(&self) -> LElem {
        LElem::new(vec![BaseElem::zero(); self.degree()])
    }

    pub fn one(&self) -> LElem {
        self.from_base(&self.k.one())
    }

    pub fn from_base(&self, c: &BaseElem) -> LElem {
        let mut v = self.zero();
        v.coords[0] = c.clone();
        v
    }

    /// `alpha^j` for `0 <= j < p`.
    pub fn alpha_pow(&self, j: usize) -> LElem {
        assert!(j < self.degree());
        let mut v = self.zero();
        v.coords[j] = self.k.one();
        v
    }

    pub fn alpha(&self) -> LElem {
        self.alpha_pow(1)
    }

    pub fn elem(&self, coords: Vec<BaseElem>) -> Result<LElem> {
        let u = LElem::new(coords);
        self.check(&u)?;
        Ok(u)
    }

    /// Checks the length and coordinate field of `u`.
    pub fn check(&self, u: &LElem) -> Result<()> {
        if u.len() != self.degree() {
            return Err(Error::ContextMismatch(format!(
                "element has {} coordinates, expected {}",
                u.len(),
                self.p
            )));
        }
        for c in &u.coords {
            self.k.check(c)?;
        }
        Ok(())
    }

    /// Product reduced with `alpha^p = a`.
    pub fn l_mul(&self, u: &LElem, v: &LElem) -> Result<LElem> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.mul(u, v))
    }

    pub(crate) fn mul(&self, u: &LElem, v: &LElem) -> LElem {
        let n = self.degree();
        let mut out = vec![BaseElem::zero(); n];
        let mut wrap = vec![BaseElem::zero(); n];
        for (i, ui) in u.coords.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.coords.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let t = self.k.mul(ui, vj);
                if i + j < n {
                    out[i + j] = &out[i + j] + &t;
                } else {
                    wrap[i + j - n] = &wrap[i + j - n] + &t;
                }
            }
        }
        for (o, w) in out.iter_mut().zip(&wrap) {
            if !w.is_zero() {
                *o = &*o + &self.k.mul(w, &self.a);
            }
        }
        LElem::new(out)
    }

    pub fn scale(&self, c: &BaseElem, u: &LElem) -> LElem {
        LElem::new(u.coords.iter().map(|x| self.k.mul(c, x)).collect())
    }

    pub fn pow(&self, u: &LElem, e: u64) -> LElem {
        let mut acc = self.one();
        let mut base = u.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `u`: column `j` holds the coordinates of
    /// `u * alpha^j`.
    pub fn mul_matrix(&self, u: &LElem) -> KMatrix {
        let n = self.degree();
        let mut m = vec![vec![BaseElem::zero(); n]; n];
        let mut col = u.coords.clone();
        for j in 0..n {
            for i in 0..n {
                m[i][j] = col[i].clone();
            }
            // col <- col * alpha
            let top = col.pop().expect("nonempty");
            col.insert(0, self.k.mul(&top, &self.a));
        }
        m
    }

    /// Characteristic polynomial of multiplication by `u`, coefficients from
    /// the constant term up (Faddeev-LeVerrier).
    pub fn charpoly(&self, u: &LElem) -> Vec<BaseElem> {
        let k = &self.k;
        let n = self.degree();
        let a = self.mul_matrix(u);
        let mut c = vec![BaseElem::zero(); n + 1];
        c[n] = k.one();
        let mut m = vec![vec![BaseElem::zero(); n]; n];
        for step in 1..=n {
            // M <- A*M + c_{n-step+1} I
            let mut am = vec![vec![BaseElem::zero(); n]; n];
            for i in 0..n {
                for l in 0..n {
                    if a[i][l].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        if !m[l][j].is_zero() {
                            am[i][j] = &am[i][j] + &k.mul(&a[i][l], &m[l][j]);
                        }
                    }
                }
            }
            for (i, row) in am.iter_mut().enumerate() {
                row[i] = &row[i] + &c[n - step + 1];
            }
            m = am;
            let mut tr = BaseElem::zero();
            for i in 0..n {
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][i].is_zero() {
                        tr = &tr + &k.mul(&a[i][l], &m[l][i]);
                    }
                }
            }
            c[n - step] = (-tr).scale(&Rat::new(BigInt::one(), BigInt::from(step)));
        }
        c
    }

    /// Integrality over `O_K` by the characteristic polynomial.
    pub fn is_integral(&self, u: &LElem) -> bool {
        self.charpoly(u).iter().all(BaseElem::is_integral)
    }

    /// `Z`-coordinates of `u` in the basis `w^e alpha^j` (`e < [K:Q]`).
    pub fn flatten(&self, u: &LElem) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.degree() * self.k.degree());
        for c in &u.coords {
            out.push(c.x.clone());
            if self.k.degree() == 2 {
                out.push(c.y.clone());
            }
        }
        out
    }

    pub fn unflatten(&self, v: &[Rat]) -> LElem {
        let d = self.k.degree();
        assert_eq!(v.len(), d * self.degree());
        LElem::new(
            v.chunks(d)
                .map(|ch| {
                    if d == 1 {
                        BaseElem::from_rat(ch[0].clone())
                    } else {
                        BaseElem::new(ch[0].clone(), ch[1].clone())
                    }
                })
                .collect(),
        )
    }

    /// The ideal `a O_K`.
    pub fn radicand_ideal(&self) -> Ideal {
        Ideal::principal(&self.k, &self.a).expect("nonzero")
    }

    /// A context for another radicand over the same `K` and `p`.
    pub fn with_radicand(&self, a: &BaseElem) -> Result<Self> {
        RadicandContext::new(&self.k, self.p, a)
    }
}

/// Renders a polynomial given by coefficients from the constant term up.
pub fn format_poly(coeffs: &[BaseElem]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        let coef = fmt_coeff(c);
        let term = if i == 0 {
            coef
        } else if c.is_one() {
            mono
        } else if *c == BaseElem::from_int(-1) {
            format!("-{mono}")
        } else {
            format!("{coef}*{mono}")
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut s = parts[0].clone();
    for t in &parts[1..] {
        match t.strip_prefix('-') {
            Some(rest) => s.push_str(&format!(" - {rest}")),
            None => s.push_str(&format!(" + {t}")),
        }
    }
    s
}
