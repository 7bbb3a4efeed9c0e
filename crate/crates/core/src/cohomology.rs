//! Degreewise cohomology of a [`Cdga`] up to a cutoff.
//!
//! A table up to `N` needs chain bases up to `N + 1`. Each rank of
//! `d_n : C^n -> C^{n+1}` is independent of the others, so callers with
//! threads can compute [`CochainComplex::rank`] per degree concurrently and
//! assemble with [`BettiTable::from_ranks`].

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::cdga::{Cdga, CdgaElement, Term};
use crate::linalg::{self, dense, Echelon, IntVec};
use crate::SparseVec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub cutoff: u32,
    pub dims: Vec<usize>,
    /// Cocycles whose classes form a basis of `H^n`, when requested.
    pub representatives: Option<Vec<Vec<CdgaElement>>>,
}

impl BettiTable {
    pub fn new(cutoff: u32, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.len(), cutoff as usize + 1);
        Self { cutoff, dims, representatives: None }
    }

    /// `b_n = dim C^n - rank d_n - rank d_{n-1}`.
    pub fn from_ranks(cutoff: u32, chain_dims: &[usize], ranks: &[usize]) -> Self {
        let dims = (0..=cutoff as usize)
            .map(|n| chain_dims[n] - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] })
            .collect();
        Self::new(cutoff, dims)
    }

    pub fn get(&self, n: u32) -> usize {
        self.dims.get(n as usize).copied().unwrap_or(0)
    }

    /// Degrees with nonzero Betti number.
    pub fn support(&self) -> Vec<u32> {
        (0..=self.cutoff).filter(|&n| self.get(n) > 0).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(n, &b)| if n % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// Truncated convolution (the Künneth formula).
    pub fn convolve(&self, other: &BettiTable) -> BettiTable {
        let cutoff = self.cutoff.min(other.cutoff);
        let mut dims = vec![0; cutoff as usize + 1];
        for (i, a) in self.dims.iter().enumerate().take(cutoff as usize + 1) {
            for (j, b) in other.dims.iter().enumerate().take(cutoff as usize + 1 - i) {
                dims[i + j] += a * b;
            }
        }
        BettiTable::new(cutoff, dims)
    }

    pub fn truncate(&self, cutoff: u32) -> BettiTable {
        let cutoff = cutoff.min(self.cutoff);
        BettiTable {
            cutoff,
            dims: self.dims[..=cutoff as usize].to_vec(),
            representatives: self.representatives.as_ref().map(|r| r[..=cutoff as usize].to_vec()),
        }
    }
}

/// Chain bases of a [`Cdga`] in degrees `0..=top` with index lookup.
pub struct CochainComplex<'a> {
    cdga: &'a Cdga,
    bases: Vec<Vec<Term>>,
    index: Vec<BTreeMap<Term, usize>>,
}

impl<'a> CochainComplex<'a> {
    pub fn new(cdga: &'a Cdga, top: u32) -> Self {
        let bases = cdga.bases_up_to(top);
        let index = bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()).collect();
        Self { cdga, bases, index }
    }

    pub fn top(&self) -> u32 {
        self.bases.len() as u32 - 1
    }

    pub fn cdga(&self) -> &Cdga {
        self.cdga
    }

    pub fn dim(&self, n: u32) -> usize {
        self.bases.get(n as usize).map_or(0, Vec::len)
    }

    pub fn basis(&self, n: u32) -> &[Term] {
        &self.bases[n as usize]
    }

    /// Coordinates of a homogeneous degree-`n` element.
    pub fn coordinates(&self, n: u32, e: &CdgaElement) -> SparseVec {
        let idx = &self.index[n as usize];
        let mut v: SparseVec = e.terms().iter().map(|(t, c)| (idx[t], c.clone())).collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    pub fn element(&self, n: u32, v: &[(usize, crate::Rational)]) -> CdgaElement {
        CdgaElement::from_terms(v.iter().map(|(i, c)| (self.bases[n as usize][*i].clone(), c.clone())))
    }

    /// Rows of `d_n`: the image of each degree-`n` basis vector in
    /// coordinates of degree `n + 1`. Requires `n < top`.
    pub fn differential_rows(&self, n: u32) -> Vec<SparseVec> {
        self.bases[n as usize].iter().map(|t| self.coordinates(n + 1, &self.cdga.d_term(t))).collect()
    }

    pub fn rank(&self, n: u32) -> usize {
        linalg::rank(&self.differential_rows(n))
    }

    pub fn dense_rank(&self, n: u32) -> usize {
        dense::rank(dense::from_sparse(&self.differential_rows(n), self.dim(n + 1)))
    }

    /// Echelon form of the image of `d_{n-1}` inside `C^n`.
    pub fn image_echelon(&self, n: u32) -> Echelon {
        let mut e = Echelon::new();
        if n > 0 {
            for row in self.differential_rows(n - 1) {
                e.insert_rational(&row);
            }
        }
        e
    }

    /// Cocycles of degree `n` whose classes form a basis of `H^n`.
    pub fn representatives(&self, n: u32) -> Vec<CdgaElement> {
        let kernel = linalg::kernel(&self.differential_rows(n));
        let mut image = self.image_echelon(n);
        kernel.into_iter().filter(|z| image.insert_rational(z)).map(|z| self.element(n, &z)).collect()
    }

    /// Whether a degree-`n` cocycle is a coboundary.
    pub fn is_exact(&self, n: u32, e: &CdgaElement) -> bool {
        self.image_echelon(n).contains(&self.coordinates(n, e))
    }

    /// Some `b` with `d b = e`, if one exists.
    pub fn primitive(&self, n: u32, e: &CdgaElement) -> Option<CdgaElement> {
        if n == 0 {
            return e.is_zero().then(CdgaElement::zero);
        }
        let mut ech = Echelon::new();
        for (j, row) in self.differential_rows(n - 1).iter().enumerate() {
            ech.insert_tagged(IntVec::from_rational(row), IntVec(vec![(j, num_bigint::BigInt::one())]));
        }
        let coeffs = ech.solve(&self.coordinates(n, e))?;
        Some(self.element(n - 1, &coeffs))
    }
}

/// Betti numbers `b_0..=b_N` by sparse fraction-free elimination.
pub fn cohomology(cdga: &Cdga, cutoff: u32) -> BettiTable {
    let cx = CochainComplex::new(cdga, cutoff + 1);
    let dims: Vec<usize> = (0..=cutoff + 1).map(|n| cx.dim(n)).collect();
    let ranks: Vec<usize> = (0..=cutoff).map(|n| cx.rank(n)).collect();
    BettiTable::from_ranks(cutoff, &dims, &ranks)
}

/// [`cohomology`] plus representative cocycles in every degree.
pub fn cohomology_with_representatives(cdga: &Cdga, cutoff: u32) -> BettiTable {
    let cx = CochainComplex::new(cdga, cutoff + 1);
    let reps: Vec<Vec<CdgaElement>> = (0..=cutoff).map(|n| cx.representatives(n)).collect();
    let dims = reps.iter().map(Vec::len).collect();
    BettiTable { cutoff, dims, representatives: Some(reps) }
}

/// Same table through the dense Gauss-Jordan eliminator; an independent
/// oracle for [`cohomology`].
pub fn cohomology_dense(cdga: &Cdga, cutoff: u32) -> BettiTable {
    let cx = CochainComplex::new(cdga, cutoff + 1);
    let dims: Vec<usize> = (0..=cutoff + 1).map(|n| cx.dim(n)).collect();
    let ranks: Vec<usize> = (0..=cutoff).map(|n| cx.dense_rank(n)).collect();
    BettiTable::from_ranks(cutoff, &dims, &ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::FreeCdga;
    use crate::finite::FiniteCdga;

    #[test]
    fn exterior_on_one_odd_generator() {
        let c = FreeCdga::from_exprs("S3", &[("x3", 3)], &[]).unwrap();
        assert_eq!(cohomology(&c, 5).dims, vec![1, 0, 0, 1, 0, 0]);
    }

    #[test]
    fn rational_two_sphere() {
        let c = FreeCdga::from_exprs("S2", &[("e2", 2), ("x3", 3)], &[("x3", "e2^2")]).unwrap();
        let t = cohomology(&c, 6);
        assert_eq!(t.dims, vec![1, 0, 1, 0, 0, 0, 0]);
        assert_eq!(cohomology_dense(&c, 6), t);
        let r = cohomology_with_representatives(&c, 6);
        assert_eq!(r.dims, t.dims);
        let reps = r.representatives.unwrap();
        assert_eq!(c.format(&reps[2][0]).trim_start_matches('-'), "e2");
    }

    #[test]
    fn representatives_are_cocycles_not_coboundaries() {
        let c = FreeCdga::from_exprs("t", &[("a", 2), ("b", 2), ("x", 3), ("y", 5)], &[("x", "a*b"), ("y", "a^2*b")])
            .unwrap();
        let cx = CochainComplex::new(&c, 13);
        for n in 0..=12 {
            for z in cx.representatives(n) {
                assert!(c.d(&z).is_zero());
                assert!(!cx.is_exact(n, &z));
            }
        }
    }

    #[test]
    fn primitive_solves() {
        let c = FreeCdga::from_exprs("S2", &[("e2", 2), ("x3", 3)], &[("x3", "e2^2")]).unwrap();
        let cx = CochainComplex::new(&c, 7);
        let target = c.parse("3*e2^3").unwrap();
        let b = cx.primitive(6, &target).unwrap();
        assert_eq!(c.d(&b), target);
        assert!(cx.primitive(2, &c.parse("e2").unwrap()).is_none());
    }

    #[test]
    fn finite_algebra_via_engine() {
        let a = FiniteCdga::truncated_polynomial("a", 2, 3).unwrap();
        let t = cohomology(&Cdga::from(a.clone()), 8);
        assert_eq!(&t.dims[..7], &a.betti()[..]);
    }
}
