//! Ideal class groups of imaginary quadratic fields via reduced positive
//! definite binary quadratic forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{BaseElem, BaseField, Ideal, Rat};

/// The form `a x^2 + b xy + c y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// Completes `(a, b)` to the form of discriminant `disc`.
    pub fn from_ab(a: &BigInt, b: &BigInt, disc: &BigInt) -> Self {
        let num = b * b - disc;
        let four_a = a * 4;
        debug_assert!(num.is_multiple_of(&four_a), "no form ({a}, {b}, *) of discriminant {disc}");
        QuadForm {
            a: a.clone(),
            b: b.clone(),
            c: num / four_a,
        }
    }

    /// The principal form of discriminant `disc`.
    pub fn principal(disc: &BigInt) -> Self {
        let b = disc.mod_floor(&BigInt::from(2));
        Self::from_ab(&BigInt::one(), &b, disc)
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - &self.a * &self.c * 4
    }

    pub fn is_principal_form(&self) -> bool {
        self.a.is_one()
    }

    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        abs_b <= self.a
            && self.a <= self.c
            && !((abs_b == self.a || self.a == self.c) && self.b.is_negative())
    }

    /// The unique reduced form properly equivalent to `self` (positive
    /// definite forms only).
    pub fn reduced(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a.clone(), self.b.clone(), self.c.clone());
        assert!(a.is_positive(), "only positive definite forms are reduced here");
        loop {
            // Normalize b into (-a, a].
            let two_a = &a * 2;
            let mut r = b.mod_floor(&two_a);
            if r > a {
                r -= &two_a;
            }
            if r != b {
                let k = (&r - &b) / &two_a; // x -> x + k y
                c = &a * &k * &k + &b * &k + &c;
                b = r;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b.is_negative() {
                b = -b;
            }
            return QuadForm { a, b, c };
        }
    }

    /// The inverse class `(a, -b, c)`.
    pub fn inverse(&self) -> Self {
        QuadForm {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
        }
        .reduced()
    }

    /// The primitive ideal `Z*a + Z*(-b + sqrt D)/2` of this form.
    pub fn to_ideal(&self, k: &BaseField) -> Ideal {
        let delta = BigInt::from(k.delta());
        // (-b + sqrt D)/2 = (-b - delta)/2 + w
        let x = (-&self.b - delta) / 2;
        Ideal::from_generators(
            k,
            &[
                BaseElem::from_bigint(self.a.clone()),
                BaseElem::new(Rat::from_integer(x), Rat::one()),
            ],
        )
        .expect("nonzero")
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// The class group, listed by reduced forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    field: BaseField,
    disc: BigInt,
    forms: Vec<QuadForm>,
}

impl ClassGroup {
    /// Enumerates reduced primitive forms with `|b| <= a <= c`. For `Q` the
    /// group is trivial and represented by the single form `(1, 1, 0)`.
    pub fn compute(k: &BaseField) -> ClassGroup {
        let disc = BigInt::from(k.discriminant());
        if k.is_rationals() {
            return ClassGroup {
                field: k.clone(),
                forms: vec![QuadForm::principal(&disc)],
                disc,
            };
        }
        let abs_d = disc.abs();
        let a_max: BigInt = (&abs_d / 3u32).sqrt();
        let mut forms = Vec::new();
        let mut a = BigInt::one();
        while a <= a_max {
            let mut b: BigInt = -&a + 1u32;
            while b <= a {
                let num: BigInt = &b * &b - &disc;
                let four_a: BigInt = &a * 4u32;
                if num.is_multiple_of(&four_a) {
                    let c = num / four_a;
                    let f = QuadForm {
                        a: a.clone(),
                        b: b.clone(),
                        c,
                    };
                    let primitive = f.a.gcd(&f.b).gcd(&f.c).is_one();
                    if primitive && f.is_reduced() {
                        forms.push(f);
                    }
                }
                b += 1u32;
            }
            a += 1u32;
        }
        forms.sort();
        ClassGroup {
            field: k.clone(),
            disc,
            forms,
        }
    }

    pub fn order(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn identity(&self) -> QuadForm {
        QuadForm::principal(&self.disc)
    }

    /// Composition, computed by multiplying the corresponding ideals.
    pub fn compose(&self, f: &QuadForm, g: &QuadForm) -> QuadForm {
        if self.field.is_rationals() {
            return self.identity();
        }
        let i = f.to_ideal(&self.field).mul(&self.field, &g.to_ideal(&self.field));
        i.class_form(&self.field)
    }

    pub fn class_of(&self, ideal: &Ideal) -> QuadForm {
        ideal.class_form(&self.field)
    }

    /// Order of a class in the group.
    pub fn class_order(&self, f: &QuadForm) -> usize {
        let id = self.identity();
        let mut acc = f.reduced();
        let mut n = 1;
        while acc != id {
            acc = self.compose(&acc, f);
            n += 1;
            assert!(n <= self.order(), "class order exceeds group order");
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        let h = |d: i64| ClassGroup::compute(&BaseField::imaginary_quadratic(d).unwrap()).order();
        assert_eq!(ClassGroup::compute(&BaseField::rationals()).order(), 1);
        assert_eq!(h(-1), 1);
        assert_eq!(h(-2), 1);
        assert_eq!(h(-3), 1);
        assert_eq!(h(-5), 2);
        assert_eq!(h(-6), 2);
        assert_eq!(h(-14), 4);
        assert_eq!(h(-23), 3);
        assert_eq!(h(-47), 5);
        assert_eq!(h(-163), 1);
        assert_eq!(h(-71), 7);
    }

    #[test]
    fn sqrt_minus_5_forms() {
        let g = ClassGroup::compute(&BaseField::imaginary_quadratic(-5).unwrap());
        assert_eq!(g.forms(), &[QuadForm::new(1, 0, 5), QuadForm::new(2, 2, 3)]);
        assert_eq!(g.identity(), QuadForm::new(1, 0, 5));
    }

    #[test]
    fn reduction() {
        assert_eq!(QuadForm::new(3, 2, 2).reduced(), QuadForm::new(2, -2, 3).reduced());
        assert_eq!(QuadForm::new(2, -2, 3).reduced(), QuadForm::new(2, 2, 3));
        assert_eq!(QuadForm::new(6, 5, 2).reduced(), QuadForm::new(2, -1, 3).reduced());
        let f = QuadForm::new(13, 17, 7);
        assert!(f.reduced().is_reduced());
        assert_eq!(f.reduced().discriminant(), f.discriminant());
    }

    #[test]
    fn composition_group_laws() {
        for d in [-5i64, -14, -23, -47, -71] {
            let k = BaseField::imaginary_quadratic(d).unwrap();
            let g = ClassGroup::compute(&k);
            let id = g.identity();
            for f in g.forms() {
                assert_eq!(g.compose(f, &id), *f);
                assert_eq!(g.compose(f, &f.inverse()), id, "d = {d}, f = {f}");
                for h in g.forms() {
                    assert_eq!(g.compose(f, h), g.compose(h, f));
                    for e in g.forms() {
                        assert_eq!(
                            g.compose(&g.compose(f, h), e),
                            g.compose(f, &g.compose(h, e))
                        );
                    }
                }
                assert_eq!(g.order() % g.class_order(f), 0);
            }
        }
    }

    #[test]
    fn form_ideal_roundtrip() {
        for d in [-5i64, -14, -23, -47] {
            let k = BaseField::imaginary_quadratic(d).unwrap();
            let g = ClassGroup::compute(&k);
            for f in g.forms() {
                assert_eq!(f.to_ideal(&k).class_form(&k), *f);
            }
        }
    }
}
