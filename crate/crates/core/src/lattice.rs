//! Integer lattices in `Q^n` in Hermite normal form, and gluing of local
//! lattice data into a global lattice.
//!
//! The normal form used throughout is lower triangular on rows: the row
//! whose pivot sits in column `i` vanishes to the right of `i`, its pivot is
//! positive, and every entry of a later row in column `i` is reduced into
//! `[0, pivot_i)`. With this convention the power basis `1, x, ..., x^(n-1)`
//! reads off naturally, e.g. `{1, x, (1 + x + x^2)/3}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::base::Rat;
use crate::error::{domain, Result};

/// A row of an HNF basis together with its pivot column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct PivotRow {
    col: usize,
    row: Vec<BigInt>,
}

/// Hermite normal form of the `Z`-span of `rows`, each of length `n`.
/// Returns one row per pivot, ordered by increasing pivot column.
pub fn hnf_rows(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    hnf_pivot_rows(rows, n).into_iter().map(|r| r.row).collect()
}

fn hnf_pivot_rows(rows: &[Vec<BigInt>], n: usize) -> Vec<PivotRow> {
    let mut work: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    for r in &work {
        assert_eq!(r.len(), n, "row length mismatch");
    }
    let mut pivots: Vec<PivotRow> = Vec::new();

    for col in (0..n).rev() {
        loop {
            let mut best: Option<usize> = None;
            for (i, r) in work.iter().enumerate() {
                if r[col].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if work[b][col].abs() <= r[col].abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            let mut done = true;
            let pivot_row = work[b].clone();
            for (i, r) in work.iter_mut().enumerate() {
                if i == b || r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&pivot_row[col]);
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !r[col].is_zero() {
                    done = false;
                }
            }
            if done {
                let mut row = work.swap_remove(b);
                if row[col].is_negative() {
                    for x in row.iter_mut() {
                        *x = -&*x;
                    }
                }
                pivots.push(PivotRow { col, row });
                work.retain(|r| r.iter().any(|x| !x.is_zero()));
                break;
            }
        }
    }

    pivots.sort_by_key(|p| p.col);
    // Reduce entries left of each pivot against earlier pivots.
    for j in 0..pivots.len() {
        for i in (0..j).rev() {
            let c = pivots[i].col;
            let q = pivots[j].row[c].div_floor(&pivots[i].row[c]);
            if !q.is_zero() {
                let src = pivots[i].row.clone();
                for (x, y) in pivots[j].row.iter_mut().zip(&src) {
                    *x -= &q * y;
                }
            }
        }
    }
    pivots
}

/// Absolute determinant of a square integer matrix, computed as the product
/// of the HNF pivots (zero when singular).
pub fn abs_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let h = hnf_pivot_rows(rows, n);
    if h.len() < n {
        return BigInt::zero();
    }
    h.iter().map(|p| p.row[p.col].clone()).product()
}

/// A lattice `(1/den) * span_Z(rows)` in `Q^dim` with `rows` in HNF and
/// `den` coprime to the content of `rows`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    dim: usize,
    den: BigInt,
    rows: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    /// The standard lattice `Z^dim`.
    pub fn standard(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        IntegerLattice {
            dim,
            den: BigInt::one(),
            rows,
        }
    }

    /// The `Z`-span of the given rational vectors.
    pub fn from_rational_rows(rows: &[Vec<Rat>], dim: usize) -> Self {
        let den = rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let int_rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), dim, "row length mismatch");
                r.iter()
                    .map(|x| x.numer() * (&den / x.denom()))
                    .collect()
            })
            .collect();
        Self::from_int_rows(&int_rows, den, dim)
    }

    /// `(1/den) * span_Z(rows)`.
    pub fn from_int_rows(rows: &[Vec<BigInt>], den: BigInt, dim: usize) -> Self {
        assert!(den.is_positive());
        let mut rows = hnf_rows(rows, dim);
        let content = rows.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
        let g = content.gcd(&den);
        let den = if g.is_one() || g.is_zero() {
            if rows.is_empty() {
                BigInt::one()
            } else {
                den
            }
        } else {
            for x in rows.iter_mut().flatten() {
                *x /= &g;
            }
            den / g
        };
        IntegerLattice { dim, den, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Integer numerator rows of the HNF basis.
    pub fn int_rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// HNF basis vectors as rationals.
    pub fn basis(&self) -> Vec<Vec<Rat>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| Rat::new(x.clone(), self.den.clone()))
                    .collect()
            })
            .collect()
    }

    /// Covolume (absolute determinant of the basis), zero when not full rank.
    pub fn covolume(&self) -> Rat {
        if !self.is_full_rank() {
            return Rat::zero();
        }
        let prod: BigInt = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r[i].clone())
            .product();
        Rat::new(prod, self.den.pow(self.dim as u32))
    }

    pub fn sum(&self, other: &IntegerLattice) -> IntegerLattice {
        assert_eq!(self.dim, other.dim);
        let mut all = self.basis();
        all.extend(other.basis());
        IntegerLattice::from_rational_rows(&all, self.dim)
    }

    pub fn contains_lattice(&self, other: &IntegerLattice) -> bool {
        &self.sum(other) == self
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.contains_lattice(&IntegerLattice::from_rational_rows(&[v.to_vec()], self.dim))
    }

    /// A basis of the lattice whose denominators are powers of `q` and whose
    /// `Z_q`-span equals the `Z_q`-span of `self`.
    pub fn localize(&self, q: &BigInt) -> Vec<Vec<Rat>> {
        let mut q_part = BigInt::one();
        let mut rest = self.den.clone();
        while rest.is_multiple_of(q) {
            rest /= q;
            q_part *= q;
        }
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| Rat::new(x.clone(), q_part.clone())).collect())
            .collect()
    }
}

fn is_power_of(mut n: BigInt, q: &BigInt) -> bool {
    while n.is_multiple_of(q) && !n.is_zero() {
        n /= q;
    }
    n.is_one()
}

fn valuation(n: &BigInt, q: &BigInt) -> u32 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(q) {
        n /= q;
        v += 1;
    }
    v
}

/// Glues local lattice data into the unique lattice `L` whose `Z_q`-span
/// equals the span of the given basis at each listed prime `q`, and which
/// agrees with `Z^dim` at every other prime.
///
/// Each local basis must be square of size `dim`, nonsingular, and may only
/// have denominators that are powers of its prime.
pub fn hnf_glue(conditions: &[(u64, Vec<Vec<Rat>>)], dim: usize) -> Result<IntegerLattice> {
    let mut seen = std::collections::BTreeSet::new();
    // Per prime: generators of the lattice M_q (local condition at q,
    // standard elsewhere) and the exponent m with q^m Z^dim inside M_q.
    let mut parts: Vec<(BigInt, Vec<Vec<Rat>>, u32)> = Vec::new();
    for (q, basis) in conditions {
        if !seen.insert(*q) {
            return domain(format!("duplicate local condition at {q}"));
        }
        if basis.len() != dim || basis.iter().any(|r| r.len() != dim) {
            return domain(format!("local basis at {q} is not {dim}x{dim}"));
        }
        let qb = BigInt::from(*q);
        let den = basis
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        if !is_power_of(den.clone(), &qb) {
            return domain(format!(
                "local basis at {q} has denominator {den} supported at a foreign prime"
            ));
        }
        let int_rows: Vec<Vec<BigInt>> = basis
            .iter()
            .map(|r| r.iter().map(|x| x.numer() * (&den / x.denom())).collect())
            .collect();
        let det = abs_det(&int_rows);
        if det.is_zero() {
            return domain(format!("local basis at {q} is singular"));
        }
        let m = valuation(&det, &qb).saturating_sub(valuation(&den, &qb));
        let mut gens = basis.clone();
        let scale = Rat::from_integer(qb.pow(m));
        for i in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[i] = scale.clone();
            gens.push(e);
        }
        parts.push((qb, gens, m));
    }
    if parts.is_empty() {
        return Ok(IntegerLattice::standard(dim));
    }
    let mut all = Vec::new();
    for (i, (_, gens, _)) in parts.iter().enumerate() {
        let c: BigInt = parts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, (q, _, m))| q.pow(*m))
            .product();
        let c = Rat::from_integer(c);
        all.extend(gens.iter().map(|r| r.iter().map(|x| x * &c).collect::<Vec<_>>()));
    }
    Ok(IntegerLattice::from_rational_rows(&all, dim))
}
