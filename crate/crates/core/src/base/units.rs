//! The (finite) unit group of `O_K`.

use num_bigint::BigInt;

use super::{BaseElem, BaseField};

impl BaseField {
    /// All units of `O_K`, starting with `1, -1`.
    pub fn units(&self) -> Vec<BaseElem> {
        let mut out = vec![self.elem(1, 0), self.elem(-1, 0)];
        match self.d() {
            Some(-1) => {
                out.push(self.elem(0, 1));
                out.push(self.elem(0, -1));
            }
            Some(-3) => {
                // w = (1 + sqrt -3)/2 is a primitive sixth root of unity.
                out.push(self.elem(0, 1));
                out.push(self.elem(0, -1));
                out.push(self.elem(-1, 1));
                out.push(self.elem(1, -1));
            }
            _ => {}
        }
        out
    }

    /// Units of `O_K` with distinct images in `O_K / p O_K`.
    pub fn unit_reps_mod_p(&self, p: u64) -> Vec<BaseElem> {
        let m = BigInt::from(p);
        let mut out: Vec<BaseElem> = Vec::new();
        for u in self.units() {
            if !out.iter().any(|v| self.congruent_mod(v, &u, &m)) {
                out.push(u);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_groups() {
        let q = BaseField::rationals();
        assert_eq!(q.unit_reps_mod_p(3), vec![q.elem(1, 0), q.elem(-1, 0)]);
        let k = BaseField::imaginary_quadratic(-1).unwrap();
        let u = k.unit_reps_mod_p(3);
        assert_eq!(u.len(), 4);
        for x in &u {
            assert_eq!(k.pow(x, 4).unwrap(), k.one());
        }
        let k = BaseField::imaginary_quadratic(-5).unwrap();
        assert_eq!(k.unit_reps_mod_p(3).len(), 2);
        let k = BaseField::imaginary_quadratic(-3).unwrap();
        let u = k.units();
        assert_eq!(u.len(), 6);
        for x in &u {
            assert_eq!(k.pow(x, 6).unwrap(), k.one());
            assert!(k.abs_norm(x) == num_rational::BigRational::from_integer(1.into()));
        }
        assert_eq!(k.unit_reps_mod_p(5).len(), 6);
    }
}
