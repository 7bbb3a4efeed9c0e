//! Exact linear algebra over the rationals.
//!
//! The production path is [`Echelon`]: sparse rows with integer entries,
//! reduced fraction-free and kept primitive (entries divided by their
//! content). [`dense`] is an independent Gauss-Jordan eliminator on dense
//! rational matrices, used only to cross-check ranks.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Rational, SparseVec};

/// Sparse integer vector with strictly increasing indices and no zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntVec(pub Vec<(usize, BigInt)>);

impl IntVec {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lead(&self) -> Option<&(usize, BigInt)> {
        self.0.first()
    }

    /// Clears denominators of a rational vector. The result is a positive
    /// multiple of the input.
    pub fn from_rational(v: &[(usize, Rational)]) -> Self {
        let lcm = v.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        IntVec(v.iter().map(|(i, c)| (*i, c.numer() * (&lcm / c.denom()))).collect())
    }

    pub fn to_rational(&self) -> SparseVec {
        self.0.iter().map(|(i, c)| (*i, Rational::from_integer(c.clone()))).collect()
    }

    fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
    }

    fn divide(&mut self, g: &BigInt) {
        if !g.is_one() && !g.is_zero() {
            for (_, c) in &mut self.0 {
                *c /= g;
            }
        }
    }

    /// `a*self - b*other`.
    fn combine(&self, a: &BigInt, other: &IntVec, b: &BigInt) -> IntVec {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take_left = j == other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0);
            let take_right = i == self.0.len() || (j < other.0.len() && other.0[j].0 < self.0[i].0);
            if take_left {
                let v = a * &self.0[i].1;
                if !v.is_zero() {
                    out.push((self.0[i].0, v));
                }
                i += 1;
            } else if take_right {
                let v = -(b * &other.0[j].1);
                if !v.is_zero() {
                    out.push((other.0[j].0, v));
                }
                j += 1;
            } else {
                let v = a * &self.0[i].1 - b * &other.0[j].1;
                if !v.is_zero() {
                    out.push((self.0[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        IntVec(out)
    }
}

/// Row echelon form built incrementally. Every stored row has a distinct
/// leading column. Optionally each row carries a tag vector recording which
/// combination of inserted vectors produced it.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<(IntVec, IntVec)>,
    pivots: BTreeMap<usize, usize>,
}

/// Outcome of inserting a tagged vector.
#[derive(Debug, Clone)]
pub enum Inserted {
    /// The vector was independent and is now a row.
    Independent,
    /// The vector reduced to zero; the tag is the dependency relation.
    Dependent(IntVec),
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_pair(&self, mut v: IntVec, mut tag: IntVec) -> (IntVec, IntVec) {
        while let Some((col, lead)) = v.lead().cloned() {
            let Some(&r) = self.pivots.get(&col) else { break };
            let (row, row_tag) = &self.rows[r];
            let p = &row.0[0].1;
            let g = p.gcd(&lead);
            let a = p / &g;
            let b = &lead / &g;
            v = v.combine(&a, row, &b);
            tag = tag.combine(&a, row_tag, &b);
            let c = v.content().gcd(&tag.content());
            v.divide(&c);
            tag.divide(&c);
        }
        (v, tag)
    }

    /// Inserts `v`; returns whether it was independent of the current rows.
    pub fn insert(&mut self, v: IntVec) -> bool {
        matches!(self.insert_tagged(v, IntVec::default()), Inserted::Independent)
    }

    pub fn insert_rational(&mut self, v: &[(usize, Rational)]) -> bool {
        self.insert(IntVec::from_rational(v))
    }

    pub fn insert_tagged(&mut self, v: IntVec, tag: IntVec) -> Inserted {
        let (mut v, mut tag) = self.reduce_pair(v, tag);
        if v.is_zero() {
            return Inserted::Dependent(tag);
        }
        if v.0[0].1.is_negative() {
            for (_, c) in v.0.iter_mut().chain(tag.0.iter_mut()) {
                *c = -core::mem::take(c);
            }
        }
        self.pivots.insert(v.0[0].0, self.rows.len());
        self.rows.push((v, tag));
        Inserted::Independent
    }

    /// Whether `v` lies in the row span.
    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce_pair(IntVec::from_rational(v), IntVec::default()).0.is_zero()
    }

    /// Solves `v = sum_j c_j * inserted_j` for rows inserted with tags
    /// `e_j`. Returns the coefficients when `v` lies in the span.
    pub fn solve(&self, v: &[(usize, Rational)]) -> Option<SparseVec> {
        const MARK: usize = usize::MAX;
        let scaled = IntVec::from_rational(v);
        // scaled = lambda * v with lambda = lcm of denominators
        let lambda = {
            let lcm = v.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
            Rational::from_integer(lcm)
        };
        let (rest, tag) = self.reduce_pair(scaled, IntVec(alloc::vec![(MARK, BigInt::one())]));
        if !rest.is_zero() {
            return None;
        }
        // 0 = mu * scaled - sum_j t_j inserted_j  with tag = (t_j..., mu at MARK) in the
        // convention rest = mu*scaled + sum_j tag_j * inserted_j
        let (mark, coeffs) = tag.0.split_last()?;
        debug_assert_eq!(mark.0, MARK);
        let mu = Rational::from_integer(mark.1.clone());
        Some(
            coeffs
                .iter()
                .map(|(j, t)| (*j, -Rational::from_integer(t.clone()) / (&mu * &lambda)))
                .collect(),
        )
    }
}

/// Rank of a list of sparse rational vectors.
pub fn rank(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert_rational(v);
    }
    e.rank()
}

/// Kernel of the linear map sending basis vector `j` to `images[j]`, as
/// sparse rational vectors over the source basis.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (j, v) in images.iter().enumerate() {
        let tag = IntVec(alloc::vec![(j, BigInt::one())]);
        if let Inserted::Dependent(rel) = e.insert_tagged(IntVec::from_rational(v), tag) {
            out.push(rel.to_rational());
        }
    }
    out
}

pub mod dense {
    //! Dense Gauss-Jordan elimination over the rationals. Independent of
    //! the sparse fraction-free path; used only for cross-checks.

    use alloc::vec::Vec;

    use num_traits::Zero;

    use crate::Rational;

    pub fn rank(mut m: Vec<Vec<Rational>>) -> usize {
        let rows = m.len();
        if rows == 0 {
            return 0;
        }
        let cols = m[0].len();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let pivot = m[r][c].clone();
            for x in m[r].iter_mut() {
                *x = &*x / &pivot;
            }
            for i in 0..rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in c..cols {
                        let sub = &f * &m[r][j];
                        m[i][j] -= sub;
                    }
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
        r
    }

    /// Densifies sparse rows of width `cols`.
    pub fn from_sparse(rows: &[crate::SparseVec], cols: usize) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|v| {
                let mut row = alloc::vec![Rational::zero(); cols];
                for (i, c) in v {
                    row[*i] = c.clone();
                }
                row
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use alloc::vec;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|(i, c)| (*i, rat(*c))).collect()
    }

    #[test]
    fn rank_and_dependence() {
        let vs = vec![sv(&[(0, 1), (1, 2)]), sv(&[(0, 2), (1, 4)]), sv(&[(1, 1), (2, 3)])];
        assert_eq!(rank(&vs), 2);
        let mut e = Echelon::new();
        for v in &vs {
            e.insert_rational(v);
        }
        assert!(e.contains(&sv(&[(0, 1), (1, 3), (2, 3)])));
        assert!(!e.contains(&sv(&[(2, 1)])));
    }

    #[test]
    fn kernel_of_small_map() {
        // e0 -> (1,1), e1 -> (2,2), e2 -> (0,1)
        let images = vec![sv(&[(0, 1), (1, 1)]), sv(&[(0, 2), (1, 2)]), sv(&[(1, 1)])];
        let k = kernel(&images);
        assert_eq!(k.len(), 1);
        // 2*e0 - e1 (up to scale)
        let v = &k[0];
        assert_eq!(v.len(), 2);
        assert_eq!(&v[0].1 * rat(-1), v[1].1.clone() * rat(2));
    }

    #[test]
    fn solve_recovers_combination() {
        let mut e = Echelon::new();
        let images = vec![sv(&[(0, 2), (2, 1)]), sv(&[(1, 3)]), sv(&[(0, 1), (1, 1)])];
        for (j, v) in images.iter().enumerate() {
            e.insert_tagged(IntVec::from_rational(v), IntVec(vec![(j, BigInt::one())]));
        }
        let target: SparseVec = vec![(0, Rational::new(5.into(), 2.into())), (1, rat(1)), (2, rat(1))];
        let coeffs = e.solve(&target).unwrap();
        let mut acc = vec![rat(0); 3];
        for (j, c) in &coeffs {
            for (i, x) in &images[*j] {
                acc[*i] += c * x;
            }
        }
        assert_eq!(acc, vec![Rational::new(5.into(), 2.into()), rat(1), rat(1)]);
        assert!(e.solve(&sv(&[(3, 1)])).is_none());
    }

    #[test]
    fn dense_matches_sparse() {
        let vs = vec![sv(&[(0, 1), (3, 2)]), sv(&[(1, 5)]), sv(&[(0, 2), (1, 5), (3, 4)]), sv(&[(2, 7)])];
        assert_eq!(dense::rank(dense::from_sparse(&vs, 4)), rank(&vs));
    }
}
