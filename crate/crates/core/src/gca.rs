//! Free graded-commutative algebras over the rationals.
//!
//! A [`GeneratorSet`] fixes an ordered list of positive-degree generators.
//! [`Monomial`]s are exponent vectors over that list; odd generators appear
//! with exponent at most one. [`Element`]s are finitely supported rational
//! combinations of monomials and carry their generator context, so that
//! mixing elements from different algebras is reported instead of silently
//! producing garbage.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, ParseError, ParseErrorKind};
use crate::parse;
use crate::{sign_rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self { name: name.into(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// An ordered, name-unique list of generators. Declaration order is the
/// canonical factor order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
}

/// Exponent vector over a [`GeneratorSet`], with its total degree cached.
///
/// The derived order compares degree first and then exponents
/// lexicographically in declaration order (graded-lex).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn unit(len: usize) -> Self {
        Self { degree: 0, exps: vec![0; len] }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn is_unit(&self) -> bool {
        self.degree == 0
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Builds a monomial from raw exponents. Callers guarantee odd
    /// generators have exponent at most one.
    pub(crate) fn from_parts(degree: u32, exps: Vec<u32>) -> Self {
        Self { degree, exps }
    }

    /// Same monomial viewed in a larger algebra whose generator list starts
    /// with `offset` new generators and ends with `total - offset - len`
    /// more.
    pub fn embed(&self, offset: usize, total: usize) -> Self {
        let mut exps = vec![0; total];
        exps[offset..offset + self.exps.len()].copy_from_slice(&self.exps);
        Self { degree: self.degree, exps }
    }
}

impl GeneratorSet {
    pub fn new(gens: Vec<Generator>) -> Result<Arc<Self>, AlgebraError> {
        for (i, g) in gens.iter().enumerate() {
            if g.degree == 0 {
                return Err(AlgebraError::ZeroDegree(g.name.clone()));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::DuplicateName(g.name.clone()));
            }
        }
        Ok(Arc::new(Self { gens }))
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(Self { gens: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.gens[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].is_odd()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial::unit(self.len())
    }

    pub fn generator_monomial(&self, i: usize) -> Monomial {
        let mut m = self.unit_monomial();
        m.exps[i] = 1;
        m.degree = self.degree(i);
        m
    }

    /// Product of two monomials with its Koszul sign. `None` when an odd
    /// generator would be squared. The boolean is `true` for a minus sign.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        debug_assert_eq!(a.exps.len(), self.len());
        debug_assert_eq!(b.exps.len(), self.len());
        let mut negative = false;
        // odd factors of `a` with index greater than the current position
        let mut odd_a_above = 0u32;
        for i in (0..self.len()).rev() {
            if self.is_odd(i) {
                if a.exps[i] + b.exps[i] > 1 {
                    return None;
                }
                if b.exps[i] == 1 && odd_a_above % 2 == 1 {
                    negative = !negative;
                }
                odd_a_above += a.exps[i];
            }
        }
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        Some((negative, Monomial { degree: a.degree + b.degree, exps }))
    }

    /// Every monomial of total degree `n`, each once, in ascending
    /// canonical order. Degree 0 yields the unit only.
    pub fn basis_of_degree(&self, n: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.len()];
        self.enumerate(0, n, &mut exps, &mut out, n);
        out.sort();
        out
    }

    fn enumerate(&self, i: usize, remaining: u32, exps: &mut [u32], out: &mut Vec<Monomial>, total: u32) {
        if i == self.len() {
            if remaining == 0 {
                out.push(Monomial { degree: total, exps: exps.to_vec() });
            }
            return;
        }
        let d = self.degree(i);
        let max = if self.is_odd(i) { 1.min(remaining / d) } else { remaining / d };
        for e in 0..=max {
            exps[i] = e;
            self.enumerate(i + 1, remaining - e * d, exps, out, total);
        }
        exps[i] = 0;
    }

    /// Monomial bases for every degree `0..=top`.
    pub fn bases_up_to(&self, top: u32) -> Vec<Vec<Monomial>> {
        let mut by_degree: Vec<Vec<Monomial>> = vec![Vec::new(); top as usize + 1];
        let mut exps = vec![0u32; self.len()];
        self.enumerate_all(0, 0, top, &mut exps, &mut by_degree);
        for b in &mut by_degree {
            b.sort();
        }
        by_degree
    }

    fn enumerate_all(&self, i: usize, deg: u32, top: u32, exps: &mut [u32], out: &mut [Vec<Monomial>]) {
        if i == self.len() {
            out[deg as usize].push(Monomial { degree: deg, exps: exps.to_vec() });
            return;
        }
        let d = self.degree(i);
        let max = if self.is_odd(i) { 1.min((top - deg) / d) } else { (top - deg) / d };
        for e in 0..=max {
            exps[i] = e;
            self.enumerate_all(i + 1, deg + e * d, top, exps, out);
        }
        exps[i] = 0;
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.gens[i].name.clone()),
                _ => parts.push(alloc::format!("{}^{}", self.gens[i].name, e)),
            }
        }
        parts.join("*")
    }
}

/// A finitely supported rational combination of monomials. Zero
/// coefficients are never stored; the zero element has no terms.
#[derive(Clone)]
pub struct Element {
    ctx: Arc<GeneratorSet>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Element {}

pub(crate) fn same_context(a: &Arc<GeneratorSet>, b: &Arc<GeneratorSet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Element {
    pub fn zero(ctx: &Arc<GeneratorSet>) -> Self {
        Self { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<GeneratorSet>) -> Self {
        Self::monomial(ctx, ctx.unit_monomial(), Rational::one())
    }

    pub fn constant(ctx: &Arc<GeneratorSet>, c: Rational) -> Self {
        Self::monomial(ctx, ctx.unit_monomial(), c)
    }

    pub fn generator(ctx: &Arc<GeneratorSet>, i: usize) -> Self {
        Self::monomial(ctx, ctx.generator_monomial(i), Rational::one())
    }

    pub fn generator_named(ctx: &Arc<GeneratorSet>, name: &str) -> Result<Self, AlgebraError> {
        let i = ctx.index_of(name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))?;
        Ok(Self::generator(ctx, i))
    }

    pub fn monomial(ctx: &Arc<GeneratorSet>, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { ctx: ctx.clone(), terms }
    }

    pub fn from_terms(ctx: &Arc<GeneratorSet>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut e = Self::zero(ctx);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn context(&self) -> &Arc<GeneratorSet> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree of a nonzero homogeneous element; `None` for zero or mixed
    /// degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree;
        it.all(|m| m.degree == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Self {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Graded-commutative product with Koszul signs.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(&self.ctx);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                if let Some((neg, p)) = self.ctx.mul_monomials(m, n) {
                    out.add_term(p, sign_rat(neg) * a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, AlgebraError> {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Applies the algebra map determined by generator images (all in a
    /// common target context).
    pub fn substitute(&self, images: &[Element], target: &Arc<GeneratorSet>) -> Result<Self, AlgebraError> {
        debug_assert_eq!(images.len(), self.ctx.len());
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut prod = Self::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    prod = prod.mul(&images[i])?;
                }
            }
            out = out.add(&prod)?;
        }
        Ok(out)
    }

    /// Parses `text` in the expression grammar over `ctx`.
    pub fn parse(text: &str, ctx: &Arc<GeneratorSet>) -> Result<Self, ParseError> {
        let terms = parse::parse_terms(text)?;
        let mut out = Self::zero(ctx);
        for t in terms {
            let mut prod = Self::constant(ctx, t.coefficient);
            for f in t.factors {
                let i = ctx
                    .index_of(&f.name)
                    .ok_or_else(|| ParseError::new(ParseErrorKind::UnknownName(f.name.clone()), f.position))?;
                if ctx.is_odd(i) && f.power >= 2 {
                    return Err(ParseError::new(ParseErrorKind::OddPower(f.name), f.position));
                }
                let g = Self::generator(ctx, i);
                for _ in 0..f.power {
                    prod = prod.mul(&g).expect("same context");
                }
            }
            out = out.add(&prod).expect("same context");
        }
        Ok(out)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(m, c)| (self.ctx.format_monomial(m), c));
        f.write_str(&format_terms(terms))
    }
}

/// Renders `(factor-string, coefficient)` pairs in the expression grammar.
/// An empty factor string denotes the unit.
pub(crate) fn format_terms<'a>(terms: impl Iterator<Item = (String, &'a Rational)>) -> String {
    let mut out = String::new();
    for (i, (factors, c)) in terms.enumerate() {
        let negative = c < &Rational::zero();
        let abs = if negative { -c.clone() } else { c.clone() };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if factors.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&factors);
        } else {
            out.push_str(&alloc::format!("{abs}*{factors}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn ctx(gens: &[(&str, u32)]) -> Arc<GeneratorSet> {
        GeneratorSet::new(gens.iter().map(|(n, d)| Generator::new(*n, *d)).collect()).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let c = ctx(&[("u", 3)]);
        let u = Element::generator(&c, 0);
        assert!(u.mul(&u).unwrap().is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let c = ctx(&[("u", 3), ("v", 3)]);
        let u = Element::generator(&c, 0);
        let v = Element::generator(&c, 1);
        assert_eq!(u.mul(&v).unwrap(), v.mul(&u).unwrap().neg());
    }

    #[test]
    fn even_generator_commutes() {
        let c = ctx(&[("a", 2)]);
        let a = Element::generator(&c, 0);
        let lhs = a.scale(&rat(2)).mul(&a.scale(&rat(3))).unwrap();
        assert_eq!(lhs, Element::parse("6*a^2", &c).unwrap());
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let c1 = ctx(&[("a", 2)]);
        let c2 = ctx(&[("b", 2)]);
        let a = Element::generator(&c1, 0);
        let b = Element::generator(&c2, 0);
        assert_eq!(a.mul(&b), Err(AlgebraError::ContextMismatch));
    }

    #[test]
    fn structurally_equal_contexts_mix() {
        let c1 = ctx(&[("a", 2)]);
        let c2 = ctx(&[("a", 2)]);
        let a1 = Element::generator(&c1, 0);
        let a2 = Element::generator(&c2, 0);
        assert!(a1.mul(&a2).is_ok());
    }

    #[test]
    fn basis_examples() {
        let c = ctx(&[("e2", 2)]);
        let b = c.basis_of_degree(6);
        assert_eq!(b.len(), 1);
        assert_eq!(c.format_monomial(&b[0]), "e2^3");

        let c = ctx(&[("x3", 3), ("e2", 2)]);
        let b = c.basis_of_degree(5);
        assert_eq!(b.len(), 1);
        assert_eq!(c.format_monomial(&b[0]), "x3*e2");

        let c = ctx(&[("x7", 7)]);
        assert!(c.basis_of_degree(14).is_empty());
        assert_eq!(c.basis_of_degree(0), vec![c.unit_monomial()]);
    }

    #[test]
    fn bases_up_to_agrees_with_single_degree() {
        let c = ctx(&[("a", 2), ("x", 3), ("b", 4), ("y", 5)]);
        let all = c.bases_up_to(16);
        for n in 0..=16 {
            assert_eq!(all[n as usize], c.basis_of_degree(n));
        }
    }

    #[test]
    fn parse_examples() {
        let c = ctx(&[("a", 2), ("e2", 2), ("x3", 3)]);
        let e = Element::parse("3/2*a^2", &c).unwrap();
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.coefficient(&Element::parse("a^2", &c).unwrap().terms().keys().next().unwrap().clone()), Rational::new(3.into(), 2.into()));
        let e = Element::parse("e2^2 + 3*a^2", &c).unwrap();
        assert_eq!(e.terms().len(), 2);
        let err = Element::parse("x3^2", &c).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::OddPower(_)));
        let err = Element::parse("q^2", &c).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnknownName(_)));
    }

    #[test]
    fn display_round_trips() {
        let c = ctx(&[("a", 2), ("e2", 2), ("x3", 3), ("y3", 3)]);
        for text in ["0", "1", "-3/2", "3/2*a^2 - e2*x3", "y3*x3 + 2*a", "-x3*y3*a^4"] {
            let e = Element::parse(text, &c).unwrap();
            let again = Element::parse(&e.to_string(), &c).unwrap();
            assert_eq!(e, again, "{text}");
        }
        let e = Element::parse("y3*x3", &c).unwrap();
        assert_eq!(e.to_string(), "-x3*y3");
    }
}
