//! Serialized forms of the arithmetic objects. Rationals are written as
//! decimal numerator/denominator strings; ideals as HNF integer matrices.

use hopf_radical::base::{Ideal, PrimeIdeal, QuadForm, Rat};
use hopf_radical::dedekind::{FqPoly, MaximalityWitness};
use hopf_radical::{BaseElem, BaseField, LElem};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::SchemaError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

impl RatJson {
    pub fn new(r: &Rat) -> Self {
        RatJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }

    pub fn parse(&self) -> Result<Rat, SchemaError> {
        let num: BigInt = parse_int(&self.num)?;
        let den: BigInt = parse_int(&self.den)?;
        if den.is_zero() {
            return Err(SchemaError("zero denominator".into()));
        }
        let r = Rat::new(num.clone(), den.clone());
        if r.numer() != &num || r.denom() != &den {
            return Err(SchemaError(format!("{}/{} is not in lowest terms", self.num, self.den)));
        }
        Ok(r)
    }
}

pub fn parse_int(s: &str) -> Result<BigInt, SchemaError> {
    s.parse()
        .map_err(|_| SchemaError(format!("'{s}' is not a decimal integer")))
}

/// `x + y w` with the text form alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElemJson {
    pub x: RatJson,
    pub y: RatJson,
    pub text: String,
}

impl ElemJson {
    pub fn new(e: &BaseElem) -> Self {
        ElemJson {
            x: RatJson::new(&e.x),
            y: RatJson::new(&e.y),
            text: e.to_string(),
        }
    }

    pub fn parse(&self) -> Result<BaseElem, SchemaError> {
        Ok(BaseElem::new(self.x.parse()?, self.y.parse()?))
    }
}

/// An element of `L` by its power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LElemJson {
    pub coords: Vec<ElemJson>,
    pub text: String,
}

impl LElemJson {
    pub fn new(x: &LElem) -> Self {
        LElemJson {
            coords: x.coords().iter().map(ElemJson::new).collect(),
            text: x.to_string(),
        }
    }

    pub fn parse(&self) -> Result<LElem, SchemaError> {
        Ok(LElem::new(
            self.coords.iter().map(ElemJson::parse).collect::<Result<_, _>>()?,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeJson {
    pub label: String,
    pub q: u64,
    pub pi: ElemJson,
    pub residue_degree: u32,
    pub ramification_index: u32,
}

impl PrimeJson {
    pub fn new(p: &PrimeIdeal) -> Self {
        PrimeJson {
            label: p.to_string(),
            q: p.q(),
            pi: ElemJson::new(p.pi()),
            residue_degree: p.residue_degree(),
            ramification_index: p.ramification_index(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub a: String,
    pub b: String,
    pub c: String,
    pub principal: bool,
}

impl FormJson {
    pub fn new(f: &QuadForm) -> Self {
        FormJson {
            a: f.a.to_string(),
            b: f.b.to_string(),
            c: f.c.to_string(),
            principal: f.is_principal_form(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorJson {
    pub prime: PrimeJson,
    pub exponent: i64,
}

/// `(1/den) * HNF` in the basis `{1, w}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealJson {
    pub hnf: Vec<Vec<String>>,
    pub den: String,
    pub factorization: Vec<FactorJson>,
    pub class: FormJson,
    pub generator: Option<ElemJson>,
}

impl IdealJson {
    pub fn new(k: &BaseField, i: &Ideal, factors: &[(PrimeIdeal, i64)]) -> Self {
        IdealJson {
            hnf: i
                .hnf()
                .iter()
                .map(|row| row.iter().map(BigInt::to_string).collect())
                .collect(),
            den: i.denominator().to_string(),
            factorization: factors
                .iter()
                .filter(|(_, e)| *e != 0)
                .map(|(p, e)| FactorJson {
                    prime: PrimeJson::new(p),
                    exponent: *e,
                })
                .collect(),
            class: FormJson::new(&i.class_form(k)),
            generator: i.principality(k).generator().map(ElemJson::new),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub coeffs: Vec<u64>,
    pub text: String,
}

impl PolyJson {
    pub fn new(f: &FqPoly) -> Self {
        PolyJson {
            coeffs: f.coeffs.clone(),
            text: f.to_string(),
        }
    }

    fn parse(&self, q: u64) -> FqPoly {
        FqPoly::new(q, self.coeffs.clone())
    }
}

/// Dedekind criterion transcript for `x^p - a` at `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DedekindJson {
    pub q: u64,
    pub p: u64,
    pub a: String,
    pub f_mod_q: PolyJson,
    pub g: PolyJson,
    pub h: PolyJson,
    pub f_term: PolyJson,
    pub gcd: PolyJson,
    pub maximal: bool,
}

impl DedekindJson {
    pub fn new(w: &MaximalityWitness) -> Self {
        DedekindJson {
            q: w.q,
            p: w.p,
            a: w.a.to_string(),
            f_mod_q: PolyJson::new(&w.f_mod_q),
            g: PolyJson::new(&w.g),
            h: PolyJson::new(&w.h),
            f_term: PolyJson::new(&w.f_term),
            gcd: PolyJson::new(&w.gcd),
            maximal: w.maximal,
        }
    }

    pub fn parse(&self) -> Result<MaximalityWitness, SchemaError> {
        let q = self.q;
        if q < 2 {
            return Err(SchemaError(format!("q = {q} is not a prime")));
        }
        Ok(MaximalityWitness {
            q,
            p: self.p,
            a: parse_int(&self.a)?,
            f_mod_q: self.f_mod_q.parse(q),
            g: self.g.parse(q),
            h: self.h.parse(q),
            f_term: self.f_term.parse(q),
            gcd: self.gcd.parse(q),
            maximal: self.maximal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_round_trip() {
        let r = Rat::new(BigInt::from(-6), BigInt::from(4));
        let j = RatJson::new(&r);
        assert_eq!((j.num.as_str(), j.den.as_str()), ("-3", "2"));
        assert_eq!(j.parse().unwrap(), r);
        let bad = RatJson {
            num: "2".into(),
            den: "4".into(),
        };
        assert!(bad.parse().is_err());
    }

    #[test]
    fn elements_round_trip() {
        let k = BaseField::imaginary_quadratic(-5).unwrap();
        let e = k.parse_elem("1/3-2*w").unwrap();
        let j = ElemJson::new(&e);
        let s = serde_json::to_string(&j).unwrap();
        let back: ElemJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.parse().unwrap(), e);
    }
}
