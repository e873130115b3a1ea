//! Fractional ideals of `O_K` in Hermite normal form over the integral basis.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{rat_int, BaseElem, BaseField, QuadForm, Rat};
use crate::error::{domain, Result};
use crate::lattice::IntegerLattice;

/// A nonzero fractional ideal `(1/den) * (Z-span of rows)`; over an imaginary
/// quadratic field the numerator is `Z*A + Z*(B + C*w)` with `C | A`, `C | B`,
/// `0 <= B < A`. Over `Q` it is the single positive integer `A`.
///
/// Equality of ideals is equality of this canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    lattice: IntegerLattice,
}

/// Result of a principality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrincipalityWitness {
    Principal(BaseElem),
    /// The reduced form of the ideal's class (never the principal form).
    NonPrincipal(QuadForm),
}

impl PrincipalityWitness {
    pub fn generator(&self) -> Option<&BaseElem> {
        match self {
            PrincipalityWitness::Principal(g) => Some(g),
            PrincipalityWitness::NonPrincipal(_) => None,
        }
    }

    pub fn is_principal(&self) -> bool {
        matches!(self, PrincipalityWitness::Principal(_))
    }
}

fn elem_coords(k: &BaseField, x: &BaseElem) -> Vec<Rat> {
    if k.degree() == 1 {
        vec![x.x.clone()]
    } else {
        vec![x.x.clone(), x.y.clone()]
    }
}

impl Ideal {
    /// `O_K`.
    pub fn unit(k: &BaseField) -> Ideal {
        Ideal {
            lattice: IntegerLattice::standard(k.degree()),
        }
    }

    /// `x * O_K`.
    pub fn principal(k: &BaseField, x: &BaseElem) -> Result<Ideal> {
        Self::from_generators(k, std::slice::from_ref(x))
    }

    /// The `O_K`-module generated by `gens`.
    pub fn from_generators(k: &BaseField, gens: &[BaseElem]) -> Result<Ideal> {
        if gens.iter().all(|g| g.is_zero()) {
            return domain("zero ideal");
        }
        let mut rows = Vec::new();
        for g in gens {
            k.check(g)?;
            rows.push(elem_coords(k, g));
            if k.degree() == 2 {
                rows.push(elem_coords(k, &k.mul(g, &k.omega())));
            }
        }
        Ok(Ideal {
            lattice: IntegerLattice::from_rational_rows(&rows, k.degree()),
        })
    }

    /// `Z`-basis of the ideal as field elements.
    pub fn z_basis(&self) -> Vec<BaseElem> {
        self.lattice
            .basis()
            .into_iter()
            .map(|r| {
                if r.len() == 1 {
                    BaseElem::from_rat(r[0].clone())
                } else {
                    BaseElem::new(r[0].clone(), r[1].clone())
                }
            })
            .collect()
    }

    /// Numerator HNF rows (coordinates over `{1, w}`).
    pub fn hnf(&self) -> &[Vec<BigInt>] {
        self.lattice.int_rows()
    }

    pub fn denominator(&self) -> &BigInt {
        self.lattice.denominator()
    }

    pub fn is_integral(&self) -> bool {
        self.denominator().is_one()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.is_integral() && self.hnf().iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    /// Absolute norm.
    pub fn norm(&self) -> Rat {
        self.lattice.covolume()
    }

    /// The numerator `den * self` as an integral ideal.
    pub fn numerator(&self) -> Ideal {
        Ideal {
            lattice: IntegerLattice::from_int_rows(
                self.hnf(),
                BigInt::one(),
                self.lattice.dim(),
            ),
        }
    }

    pub fn mul(&self, k: &BaseField, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for a in self.z_basis() {
            for b in other.z_basis() {
                gens.push(k.mul(&a, &b));
            }
        }
        Self::from_generators(k, &gens).expect("product of nonzero ideals is nonzero")
    }

    /// `self + other` (the gcd of integral ideals).
    pub fn add(&self, k: &BaseField, other: &Ideal) -> Ideal {
        let mut gens = self.z_basis();
        gens.extend(other.z_basis());
        Self::from_generators(k, &gens).expect("nonzero")
    }

    pub fn scale(&self, k: &BaseField, x: &BaseElem) -> Result<Ideal> {
        if x.is_zero() {
            return domain("scaling an ideal by zero");
        }
        let gens: Vec<_> = self.z_basis().iter().map(|g| k.mul(g, x)).collect();
        Self::from_generators(k, &gens)
    }

    pub fn conj(&self, k: &BaseField) -> Ideal {
        let gens: Vec<_> = self.z_basis().iter().map(|g| k.conj(g)).collect();
        Self::from_generators(k, &gens).expect("nonzero")
    }

    pub fn inverse(&self, k: &BaseField) -> Ideal {
        let n = self.norm();
        // I * conj(I) = N(I) O_K, and I = (q) over Q.
        let c = if k.is_rationals() {
            self.clone()
        } else {
            self.conj(k)
        };
        let inv_n = BaseElem::from_rat(n.recip());
        c.scale(k, &inv_n).expect("nonzero")
    }

    pub fn pow(&self, k: &BaseField, e: i64) -> Ideal {
        let base = if e < 0 { self.inverse(k) } else { self.clone() };
        let mut result = Ideal::unit(k);
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(k, &b);
            }
            b = b.mul(k, &b);
            e >>= 1;
        }
        result
    }

    pub fn div(&self, k: &BaseField, other: &Ideal) -> Ideal {
        self.mul(k, &other.inverse(k))
    }

    pub fn contains_elem(&self, x: &BaseElem) -> bool {
        if x.is_zero() {
            return true;
        }
        let coords = if self.lattice.dim() == 1 {
            vec![x.x.clone()]
        } else {
            vec![x.x.clone(), x.y.clone()]
        };
        self.lattice.contains(&coords)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ideal) -> bool {
        self.lattice.contains_lattice(&other.lattice)
    }

    /// Over `Q`: the positive rational generator.
    pub fn rational_generator(&self) -> Option<Rat> {
        if self.lattice.dim() != 1 {
            return None;
        }
        Some(Rat::new(self.hnf()[0][0].clone(), self.denominator().clone()))
    }

    /// The reduced binary quadratic form of this ideal's class.
    pub fn class_form(&self, k: &BaseField) -> QuadForm {
        let disc = BigInt::from(k.discriminant());
        if k.is_rationals() {
            return QuadForm::principal(&disc);
        }
        let rows = self.hnf();
        let (a_big, b_big, c_big) = (&rows[0][0], &rows[1][0], &rows[1][1]);
        // Primitive part: Z*(A/C) + Z*(B/C + w), and B/C + w = (-b + sqrt D)/2.
        let a: BigInt = a_big / c_big;
        let bp: BigInt = b_big / c_big;
        let b: BigInt = -(bp * 2u32 + BigInt::from(k.delta()));
        QuadForm::from_ab(&a, &b, &disc).reduced()
    }

    /// Principality test. Over imaginary quadratic fields the numerator's
    /// `Z`-basis is Lagrange-reduced for the norm form; the ideal is principal
    /// iff its shortest vector has norm equal to the ideal norm, and that
    /// vector is then a generator.
    pub fn principality(&self, k: &BaseField) -> PrincipalityWitness {
        if k.is_rationals() {
            let g = self.rational_generator().expect("ideal over Q");
            return PrincipalityWitness::Principal(BaseElem::from_rat(g));
        }
        let num = self.numerator();
        let basis = num.z_basis();
        let (v1, _) = lagrange_reduce(k, basis[0].clone(), basis[1].clone());
        if k.norm(&v1) == num.norm() {
            let den = rat_int(self.denominator());
            PrincipalityWitness::Principal(v1.scale(&den.recip()))
        } else {
            PrincipalityWitness::NonPrincipal(self.class_form(k))
        }
    }
}

/// Gauss-Lagrange reduction of a rank-2 lattice for the norm form.
/// Returns `(v1, v2)` with `v1` a shortest nonzero vector.
pub(crate) fn lagrange_reduce(k: &BaseField, mut v1: BaseElem, mut v2: BaseElem) -> (BaseElem, BaseElem) {
    if k.norm(&v2) < k.norm(&v1) {
        std::mem::swap(&mut v1, &mut v2);
    }
    loop {
        let n1 = k.norm(&v1);
        let mu = (k.norm_pairing(&v1, &v2) / &n1).round();
        if !mu.is_zero() {
            v2 = &v2 - &v1.scale(&mu);
        }
        if k.norm(&v2) < n1 {
            std::mem::swap(&mut v1, &mut v2);
        } else {
            return (v1, v2);
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.hnf();
        let den = self.denominator();
        let body = if rows.len() == 1 {
            format!("({})", rows[0][0])
        } else {
            let g2 = BaseElem::new(rat_int(&rows[1][0]), rat_int(&rows[1][1]));
            format!("({}, {})", rows[0][0], g2)
        };
        if den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "{body}/{den}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::rat;

    fn k5() -> BaseField {
        BaseField::imaginary_quadratic(-5).unwrap()
    }

    #[test]
    fn principal_ideal_hnf() {
        let k = k5();
        let i = Ideal::principal(&k, &k.elem(2, 0)).unwrap();
        assert_eq!(i.hnf(), &[vec![2.into(), 0.into()], vec![0.into(), 2.into()]]);
        assert_eq!(i.norm(), rat(4));
        let j = Ideal::principal(&k, &k.elem(1, 1)).unwrap();
        assert_eq!(j.norm(), rat(6));
    }

    #[test]
    fn prime_above_two_squares_to_two() {
        let k = k5();
        let p2 = Ideal::from_generators(&k, &[k.elem(2, 0), k.elem(1, 1)]).unwrap();
        assert_eq!(p2.norm(), rat(2));
        let sq = p2.mul(&k, &p2);
        assert_eq!(sq, Ideal::principal(&k, &k.elem(2, 0)).unwrap());
    }

    #[test]
    fn inverse_and_norm_multiplicative() {
        let k = k5();
        let a = Ideal::from_generators(&k, &[k.elem(3, 0), k.elem(1, 1)]).unwrap();
        let b = Ideal::from_generators(&k, &[k.elem(2, 0), k.elem(1, 1)]).unwrap();
        assert_eq!(a.mul(&k, &a.inverse(&k)), Ideal::unit(&k));
        assert_eq!(a.mul(&k, &b).norm(), a.norm() * b.norm());
        let frac = a.div(&k, &b);
        assert!(!frac.is_integral());
        assert_eq!(frac.mul(&k, &b), a);
        assert_eq!(a.pow(&k, -2).mul(&k, &a.pow(&k, 2)), Ideal::unit(&k));
    }

    #[test]
    fn principality_over_q() {
        let q = BaseField::rationals();
        let i = Ideal::principal(&q, &BaseElem::from_rat(Rat::new(28.into(), 3.into()))).unwrap();
        assert_eq!(
            i.principality(&q),
            PrincipalityWitness::Principal(BaseElem::from_rat(Rat::new(28.into(), 3.into())))
        );
    }

    #[test]
    fn principality_over_sqrt_minus_5() {
        let k = k5();
        let p2 = Ideal::from_generators(&k, &[k.elem(2, 0), k.elem(1, 1)]).unwrap();
        match p2.principality(&k) {
            PrincipalityWitness::NonPrincipal(f) => {
                assert_eq!((f.a.clone(), f.b.clone(), f.c.clone()), (2.into(), 2.into(), 3.into()))
            }
            other => panic!("expected non-principal, got {other:?}"),
        }
        let j = Ideal::principal(&k, &k.elem(1, 1)).unwrap();
        let g = j.principality(&k).generator().cloned().expect("principal");
        assert_eq!(Ideal::principal(&k, &g).unwrap(), j);
        assert_eq!(k.norm(&g), rat(6));
    }

    #[test]
    fn zero_rejected() {
        let k = k5();
        assert!(Ideal::principal(&k, &k.zero()).is_err());
    }
}
