//! CDGAs of the form `(A ⊗ ΛV, D)` with `A` finite-dimensional and `V` a
//! finite list of free generators.
//!
//! One engine covers the three shapes that occur: a free CDGA is `A = Q`,
//! a finite CDGA has no generators, and a relative model (the inclusion
//! `A -> A ⊗ ΛV`) has both. The differential is `d_A` on `A` and is given
//! on generators by arbitrary elements of `A ⊗ ΛV`; it is extended by
//!
//! ```text
//! D(u ⊗ m) = d_A(u) ⊗ m + (-1)^|u| (u ⊗ 1) · D(1 ⊗ m)
//! ```
//!
//! and products follow `(u ⊗ m)(v ⊗ n) = (-1)^{|m||v|} uv ⊗ mn`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::Deref;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, ParseError, ParseErrorKind};
use crate::finite::FiniteCdga;
use crate::gca::{format_terms, Element, Generator, GeneratorSet, Monomial};
use crate::morphism::CdgaMorphism;
use crate::parse;
use crate::{sign_rat, Rational, SparseVec};

/// A basis vector `a_u ⊗ m` of `A ⊗ ΛV`. Ordered by the free part first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub monomial: Monomial,
    pub base: usize,
}

/// A rational combination of [`Term`]s. Elements do not carry their
/// algebra; all structure-dependent operations live on [`Cdga`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CdgaElement {
    terms: BTreeMap<Term, Rational>,
}

impl CdgaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Term, Rational)>) -> Self {
        let mut e = Self::zero();
        for (t, c) in terms {
            e.add_term(t, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Term, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, t: &Term) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, t: Term, c: Rational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(t) {
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect() }
    }
}

/// A generator whose `D^2` is nonzero, with the residue rendered in the
/// expression grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub generator: String,
    pub residue: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cdga {
    label: String,
    base: Arc<FiniteCdga>,
    gens: Arc<GeneratorSet>,
    differential: Vec<CdgaElement>,
}

impl Cdga {
    /// Builds `(A ⊗ ΛV, D)` and checks degrees and `D^2 = 0` on every
    /// generator.
    pub fn new(
        label: impl Into<String>,
        base: FiniteCdga,
        gens: Arc<GeneratorSet>,
        differential: Vec<CdgaElement>,
    ) -> Result<Self, AlgebraError> {
        let c = Self::new_unchecked(label, base, gens, differential)?;
        if let Some(v) = c.check_d_squared(u32::MAX).into_iter().next() {
            return Err(AlgebraError::NotSquareZero { generator: v.generator, residue: v.residue });
        }
        Ok(c)
    }

    /// Like [`Cdga::new`] but skips the `D^2` check. Names and degrees are
    /// still validated.
    pub fn new_unchecked(
        label: impl Into<String>,
        base: FiniteCdga,
        gens: Arc<GeneratorSet>,
        differential: Vec<CdgaElement>,
    ) -> Result<Self, AlgebraError> {
        if differential.len() != gens.len() {
            return Err(AlgebraError::InvalidParameter(format!(
                "{} generators but {} differentials",
                gens.len(),
                differential.len()
            )));
        }
        for g in gens.generators() {
            if base.index_of(&g.name).is_some() {
                return Err(AlgebraError::DuplicateName(g.name.clone()));
            }
        }
        let c = Self { label: label.into(), base: Arc::new(base), gens, differential };
        for (i, d) in c.differential.iter().enumerate() {
            let g = c.gens.get(i);
            for t in d.terms().keys() {
                if t.base >= c.base.dim() || t.monomial.len() != c.gens.len() {
                    return Err(AlgebraError::InvalidParameter(format!("malformed term in D({})", g.name)));
                }
            }
            match c.degree_of(d) {
                None if d.is_zero() => {}
                None => return Err(AlgebraError::NotHomogeneous(format!("D({})", g.name))),
                Some(found) if found != g.degree + 1 => {
                    return Err(AlgebraError::DegreeMismatch {
                        name: format!("D({})", g.name),
                        expected: g.degree + 1,
                        found,
                    })
                }
                Some(_) => {}
            }
        }
        Ok(c)
    }

    pub fn from_finite(a: FiniteCdga) -> Self {
        let label = a.label().to_string();
        Self { label, base: Arc::new(a), gens: GeneratorSet::empty(), differential: Vec::new() }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn base(&self) -> &FiniteCdga {
        &self.base
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn differential(&self) -> &[CdgaElement] {
        &self.differential
    }

    /// `D` of the `i`-th generator.
    pub fn d_generator(&self, i: usize) -> &CdgaElement {
        &self.differential[i]
    }

    pub fn is_finite_dimensional(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn term_degree(&self, t: &Term) -> u32 {
        self.base.degree(t.base) + t.monomial.degree()
    }

    pub fn degree_of(&self, e: &CdgaElement) -> Option<u32> {
        let mut it = e.terms().keys();
        let d = self.term_degree(it.next()?);
        it.all(|t| self.term_degree(t) == d).then_some(d)
    }

    pub fn one(&self) -> CdgaElement {
        self.base_element(&[(0, Rational::one())])
    }

    pub fn unit_term(&self) -> Term {
        Term { base: 0, monomial: self.gens.unit_monomial() }
    }

    pub fn generator(&self, i: usize) -> CdgaElement {
        CdgaElement::from_terms([(Term { base: 0, monomial: self.gens.generator_monomial(i) }, Rational::one())])
    }

    pub fn generator_named(&self, name: &str) -> Result<CdgaElement, AlgebraError> {
        let i = self.gens.index_of(name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))?;
        Ok(self.generator(i))
    }

    /// `v ⊗ 1` for a vector `v` of `A`.
    pub fn base_element(&self, v: &[(usize, Rational)]) -> CdgaElement {
        let unit = self.gens.unit_monomial();
        CdgaElement::from_terms(v.iter().map(|(u, c)| (Term { base: *u, monomial: unit.clone() }, c.clone())))
    }

    /// `1 ⊗ e` for an element of the free part.
    pub fn lift(&self, e: &Element) -> CdgaElement {
        CdgaElement::from_terms(e.terms().iter().map(|(m, c)| (Term { base: 0, monomial: m.clone() }, c.clone())))
    }

    /// Inverse of [`Cdga::lift`]; `None` if some term has a non-unit base
    /// factor.
    pub fn lower(&self, e: &CdgaElement) -> Option<Element> {
        if e.terms().keys().any(|t| t.base != 0) {
            return None;
        }
        Some(Element::from_terms(&self.gens, e.terms().iter().map(|(t, c)| (t.monomial.clone(), c.clone()))))
    }

    /// Projection onto `A ⊗ 1`; `None` if some term involves a generator.
    pub fn base_part(&self, e: &CdgaElement) -> Option<SparseVec> {
        if e.terms().keys().any(|t| !t.monomial.is_unit()) {
            return None;
        }
        Some(e.terms().iter().map(|(t, c)| (t.base, c.clone())).collect())
    }

    fn mul_terms(&self, a: &Term, b: &Term, coeff: &Rational, out: &mut CdgaElement) {
        let Some((neg, m)) = self.gens.mul_monomials(&a.monomial, &b.monomial) else { return };
        let koszul = a.monomial.degree() % 2 == 1 && self.base.degree(b.base) % 2 == 1;
        let s = sign_rat(neg != koszul) * coeff;
        for (w, c) in self.base.product(a.base, b.base) {
            out.add_term(Term { base: *w, monomial: m.clone() }, c * &s);
        }
    }

    pub fn mul(&self, a: &CdgaElement, b: &CdgaElement) -> CdgaElement {
        let mut out = CdgaElement::zero();
        for (s, x) in a.terms() {
            for (t, y) in b.terms() {
                self.mul_terms(s, t, &(x * y), &mut out);
            }
        }
        out
    }

    pub fn pow(&self, a: &CdgaElement, e: u32) -> CdgaElement {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `D(1 ⊗ m)`, expanded as `sum_i e_i ε_i D(g_i) · m_i` where
    /// `m = ε_i g_i m_i`.
    pub fn d_monomial(&self, m: &Monomial) -> CdgaElement {
        let mut out = CdgaElement::zero();
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 || self.differential[i].is_zero() {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            let rest = Monomial::from_parts(m.degree() - self.gens.degree(i), exps);
            let (neg, check) = self.gens.mul_monomials(&self.gens.generator_monomial(i), &rest).expect("factor of a monomial");
            debug_assert_eq!(&check, m);
            let coeff = sign_rat(neg) * Rational::from_integer(e.into());
            let rest_term = Term { base: 0, monomial: rest };
            for (t, c) in self.differential[i].terms() {
                self.mul_terms(t, &rest_term, &(c * &coeff), &mut out);
            }
        }
        out
    }

    pub fn d_term(&self, t: &Term) -> CdgaElement {
        let mut out = CdgaElement::zero();
        for (w, c) in self.base.d(t.base) {
            out.add_term(Term { base: *w, monomial: t.monomial.clone() }, c.clone());
        }
        if !t.monomial.is_unit() {
            let dm = self.d_monomial(&t.monomial);
            let s = sign_rat(self.base.degree(t.base) % 2 == 1);
            let u = Term { base: t.base, monomial: self.gens.unit_monomial() };
            for (v, c) in dm.terms() {
                self.mul_terms(&u, v, &(c * &s), &mut out);
            }
        }
        out
    }

    pub fn d(&self, e: &CdgaElement) -> CdgaElement {
        let mut out = CdgaElement::zero();
        for (t, c) in e.terms() {
            out.add_assign(&self.d_term(t).scale(c));
        }
        out
    }

    /// Generators `g` with `|g| + 2 <= max_degree` and `D(D(g)) != 0`. The
    /// differential of `A` is validated when `A` is built.
    pub fn check_d_squared(&self, max_degree: u32) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, g) in self.gens.generators().iter().enumerate() {
            if g.degree.saturating_add(2) > max_degree {
                continue;
            }
            let dd = self.d(&self.differential[i]);
            if !dd.is_zero() {
                out.push(Violation { generator: g.name.clone(), residue: self.format(&dd) });
            }
        }
        out
    }

    pub fn term_name(&self, t: &Term) -> String {
        let mut parts = Vec::new();
        if t.base != 0 {
            parts.push(self.base.name(t.base).to_string());
        }
        if !t.monomial.is_unit() {
            parts.push(self.gens.format_monomial(&t.monomial));
        }
        parts.join("*")
    }

    /// Renders an element in the expression grammar.
    pub fn format(&self, e: &CdgaElement) -> String {
        format_terms(e.terms().iter().map(|(t, c)| (self.term_name(t), c)))
    }

    /// Parses an expression whose factors are generator names or names of
    /// non-unit basis elements of `A`.
    pub fn parse(&self, text: &str) -> Result<CdgaElement, ParseError> {
        let mut out = CdgaElement::zero();
        for t in parse::parse_terms(text)? {
            let mut prod = self.one().scale(&t.coefficient);
            for f in &t.factors {
                let factor = if let Some(i) = self.gens.index_of(&f.name) {
                    if self.gens.is_odd(i) && f.power >= 2 {
                        return Err(ParseError::new(ParseErrorKind::OddPower(f.name.clone()), f.position));
                    }
                    self.generator(i)
                } else if let Some(u) = self.base.index_of(&f.name).filter(|&u| u != 0) {
                    self.base_element(&[(u, Rational::one())])
                } else {
                    return Err(ParseError::new(ParseErrorKind::UnknownName(f.name.clone()), f.position));
                };
                for _ in 0..f.power {
                    prod = self.mul(&prod, &factor);
                }
            }
            out.add_assign(&prod);
        }
        Ok(out)
    }

    /// Chain basis of `A ⊗ ΛV` in degree `n`, sorted.
    pub fn basis_in_degree(&self, n: u32) -> Vec<Term> {
        let mut out = Vec::new();
        for j in 0..=n.min(self.base.top_degree()) {
            let us = self.base.basis_in_degree(j);
            if us.is_empty() {
                continue;
            }
            let ms = self.gens.basis_of_degree(n - j);
            for &u in us {
                for m in &ms {
                    out.push(Term { base: u, monomial: m.clone() });
                }
            }
        }
        out.sort();
        out
    }

    /// Chain bases for degrees `0..=top`, each sorted.
    pub fn bases_up_to(&self, top: u32) -> Vec<Vec<Term>> {
        let free = self.gens.bases_up_to(top);
        let mut out = alloc::vec![Vec::new(); top as usize + 1];
        for j in 0..=top.min(self.base.top_degree()) {
            for &u in self.base.basis_in_degree(j) {
                for (k, ms) in free.iter().enumerate().take((top - j) as usize + 1) {
                    for m in ms {
                        out[j as usize + k].push(Term { base: u, monomial: m.clone() });
                    }
                }
            }
        }
        for b in &mut out {
            b.sort();
        }
        out
    }
}

/// A free CDGA `(ΛV, d)`: a [`Cdga`] over the unit algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeCdga(Cdga);

impl FreeCdga {
    pub fn new(label: impl Into<String>, gens: Arc<GeneratorSet>, differential: Vec<Element>) -> Result<Self, AlgebraError> {
        let d = Self::lift_all(&gens, differential)?;
        Ok(Self(Cdga::new(label, FiniteCdga::unit(), gens, d)?))
    }

    /// Skips the `D^2` check; for building deliberately broken examples.
    pub fn new_unchecked(
        label: impl Into<String>,
        gens: Arc<GeneratorSet>,
        differential: Vec<Element>,
    ) -> Result<Self, AlgebraError> {
        let d = Self::lift_all(&gens, differential)?;
        Ok(Self(Cdga::new_unchecked(label, FiniteCdga::unit(), gens, d)?))
    }

    fn lift_all(gens: &Arc<GeneratorSet>, differential: Vec<Element>) -> Result<Vec<CdgaElement>, AlgebraError> {
        differential
            .into_iter()
            .map(|e| {
                if !crate::gca::same_context(e.context(), gens) {
                    return Err(AlgebraError::ContextMismatch);
                }
                Ok(CdgaElement::from_terms(
                    e.terms().iter().map(|(m, c)| (Term { base: 0, monomial: m.clone() }, c.clone())),
                ))
            })
            .collect()
    }

    /// Builds from `(name, degree)` pairs and `(name, expression)`
    /// differentials; unlisted generators are closed.
    pub fn from_exprs(label: &str, gens: &[(&str, u32)], differential: &[(&str, &str)]) -> Result<Self, AlgebraError> {
        let ctx = GeneratorSet::new(gens.iter().map(|(n, d)| Generator::new(*n, *d)).collect())?;
        let mut d = alloc::vec![Element::zero(&ctx); ctx.len()];
        for (name, expr) in differential {
            let i = ctx.index_of(name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))?;
            d[i] = Element::parse(expr, &ctx)?;
        }
        Self::new(label, ctx, d)
    }

    /// Wraps a [`Cdga`] whose base is the unit algebra.
    pub fn from_cdga(c: Cdga) -> Result<Self, AlgebraError> {
        if c.base().dim() != 1 {
            return Err(AlgebraError::InvalidParameter("base is not the unit algebra".into()));
        }
        Ok(Self(c))
    }

    /// The Leibniz extension of the generator differentials.
    pub fn extend_derivation(&self, e: &Element) -> Element {
        let d = self.0.d(&self.0.lift(e));
        self.0.lower(&d).expect("free CDGA has no base terms")
    }

    pub fn differential_of(&self, i: usize) -> Element {
        self.0.lower(self.0.d_generator(i)).expect("free CDGA has no base terms")
    }

    /// Repeatedly divides out pairs `(w, dw)` where `dw = c·v + ...` has a
    /// linear term. Returns the smaller model and the quotient map, which
    /// is a quasi-isomorphism.
    pub fn cancel_linear_pairs(&self) -> Result<(FreeCdga, CdgaMorphism), AlgebraError> {
        let mut ctx = self.generators().clone();
        let mut d: Vec<Element> = (0..ctx.len()).map(|i| self.differential_of(i)).collect();
        let mut proj: Vec<Element> = (0..ctx.len()).map(|i| Element::generator(&ctx, i)).collect();
        while let Some((w, v, c)) = find_linear_pair(&d) {
            let keep: Vec<usize> = (0..ctx.len()).filter(|&i| i != w && i != v).collect();
            let next = GeneratorSet::new(keep.iter().map(|&i| ctx.get(i).clone()).collect())?;
            let mut images: Vec<Element> = alloc::vec![Element::zero(&next); ctx.len()];
            for (j, &i) in keep.iter().enumerate() {
                images[i] = Element::generator(&next, j);
            }
            let linear = Element::generator(&ctx, v).scale(&c);
            let rest = d[w].sub(&linear)?.substitute(&images, &next)?;
            images[v] = rest.scale(&(-c.recip()));
            d = keep.iter().map(|&i| d[i].substitute(&images, &next)).collect::<Result<_, _>>()?;
            proj = proj.iter().map(|e| e.substitute(&images, &next)).collect::<Result<_, _>>()?;
            ctx = next;
        }
        let target = FreeCdga::new(format!("{} reduced", self.label()), ctx, d)?;
        let gens = proj.iter().map(|e| target.lift(e)).collect();
        let map = CdgaMorphism::new(self.0.clone(), target.0.clone(), alloc::vec![target.one()], gens)?;
        Ok((target, map))
    }

    pub fn as_cdga(&self) -> &Cdga {
        &self.0
    }

    pub fn into_cdga(self) -> Cdga {
        self.0
    }
}

/// First `(w, v, c)` with `c·v` a term of `d(w)`.
fn find_linear_pair(d: &[Element]) -> Option<(usize, usize, Rational)> {
    d.iter().enumerate().find_map(|(w, dw)| {
        dw.terms().iter().find_map(|(m, c)| {
            let exps = m.exponents();
            if exps.iter().sum::<u32>() == 1 {
                exps.iter().position(|&e| e == 1).map(|v| (w, v, c.clone()))
            } else {
                None
            }
        })
    })
}

impl Deref for FreeCdga {
    type Target = Cdga;
    fn deref(&self) -> &Cdga {
        &self.0
    }
}

/// The inclusion `(A, d_A) -> (A ⊗ ΛV, D)` of a base into a relative
/// Sullivan algebra. `D` restricted to `A` is `d_A` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeModel(Cdga);

impl RelativeModel {
    pub fn new(
        label: impl Into<String>,
        base: FiniteCdga,
        fiber: Arc<GeneratorSet>,
        differential: Vec<CdgaElement>,
    ) -> Result<Self, AlgebraError> {
        Ok(Self(Cdga::new(label, base, fiber, differential)?))
    }

    pub fn new_unchecked(
        label: impl Into<String>,
        base: FiniteCdga,
        fiber: Arc<GeneratorSet>,
        differential: Vec<CdgaElement>,
    ) -> Result<Self, AlgebraError> {
        Ok(Self(Cdga::new_unchecked(label, base, fiber, differential)?))
    }

    pub fn from_cdga(c: Cdga) -> Self {
        Self(c)
    }

    pub fn fiber_generators(&self) -> &Arc<GeneratorSet> {
        self.0.generators()
    }

    /// The fiber `(ΛV, D ⊗_A Q)`: the differential with every base class
    /// of positive degree set to zero.
    pub fn fiber(&self) -> Result<FreeCdga, AlgebraError> {
        let d = self
            .0
            .differential()
            .iter()
            .map(|e| CdgaElement::from_terms(e.terms().iter().filter(|(t, _)| t.base == 0).map(|(t, c)| (t.clone(), c.clone()))))
            .collect();
        FreeCdga::from_cdga(Cdga::new(format!("fiber of {}", self.0.label()), FiniteCdga::unit(), self.0.generators().clone(), d)?)
    }

    pub fn as_cdga(&self) -> &Cdga {
        &self.0
    }

    pub fn into_cdga(self) -> Cdga {
        self.0
    }
}

impl Deref for RelativeModel {
    type Target = Cdga;
    fn deref(&self) -> &Cdga {
        &self.0
    }
}

impl From<FiniteCdga> for Cdga {
    fn from(a: FiniteCdga) -> Self {
        Cdga::from_finite(a)
    }
}

impl From<FreeCdga> for Cdga {
    fn from(a: FreeCdga) -> Self {
        a.0
    }
}

impl From<RelativeModel> for Cdga {
    fn from(a: RelativeModel) -> Self {
        a.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FiniteCdgaBuilder;

    #[test]
    fn leibniz_examples() {
        let c = FreeCdga::from_exprs("S2", &[("e2", 2), ("x3", 3)], &[("x3", "e2^2")]).unwrap();
        let ctx = c.generators().clone();
        let x = Element::parse("x3", &ctx).unwrap();
        assert_eq!(c.extend_derivation(&x), Element::parse("e2^2", &ctx).unwrap());
        let ex = Element::parse("e2*x3", &ctx).unwrap();
        assert_eq!(c.extend_derivation(&ex), Element::parse("e2^3", &ctx).unwrap());

        let c = FreeCdga::from_exprs("S3xS3", &[("x3", 3), ("y3", 3)], &[]).unwrap();
        let xy = Element::parse("x3*y3", c.generators()).unwrap();
        assert!(c.extend_derivation(&xy).is_zero());
    }

    #[test]
    fn odd_first_factor_sign() {
        // D(x*y) = D(x) y - x D(y) for odd x
        let c = FreeCdga::from_exprs("t", &[("a", 2), ("b", 4), ("x", 3), ("y", 5)], &[("x", "a^2"), ("y", "b*a")])
            .unwrap();
        let ctx = c.generators().clone();
        let got = c.extend_derivation(&Element::parse("x*y", &ctx).unwrap());
        assert_eq!(got, Element::parse("a^2*y - x*a*b", &ctx).unwrap());
    }

    #[test]
    fn d_squared_detects_corruption() {
        let gens = GeneratorSet::new(alloc::vec![
            Generator::new("e2", 2),
            Generator::new("x3", 3),
            Generator::new("e4", 4),
            Generator::new("e5", 5),
        ])
        .unwrap();
        let d = ["0", "e2^2 + e4", "e5", "0"].iter().map(|s| Element::parse(s, &gens).unwrap()).collect();
        let bad = FreeCdga::new_unchecked("bad", gens.clone(), d).unwrap();
        let v = bad.check_d_squared(24);
        assert!(!v.is_empty());
        assert!(v.iter().any(|v| v.generator == "x3"));
        let d2 = ["0", "e2^2 + e4", "e5", "0"].iter().map(|s| Element::parse(s, &gens).unwrap()).collect();
        assert!(matches!(FreeCdga::new("bad", gens, d2), Err(AlgebraError::NotSquareZero { .. })));
    }

    #[test]
    fn relative_parse_and_product_signs() {
        let mut b = FiniteCdgaBuilder::new("S3");
        b.element("u", 3).unwrap();
        let a = b.build().unwrap();
        let gens = GeneratorSet::new(alloc::vec![Generator::new("y", 5)]).unwrap();
        let c = Cdga::new("rel", a, gens, alloc::vec![CdgaElement::zero()]).unwrap();
        let uy = c.parse("u*y").unwrap();
        let yu = c.parse("y*u").unwrap();
        assert_eq!(uy, yu.neg());
        assert_eq!(c.format(&yu), "-u*y");
        assert!(c.mul(&uy, &c.parse("u").unwrap()).is_zero());
    }

    #[test]
    fn twisted_differential_with_base_coefficient() {
        // A = Q[a]/(a^3), D(x) = a^2 with |x| = 3
        let a = FiniteCdga::truncated_polynomial("a", 2, 2).unwrap();
        let gens = GeneratorSet::new(alloc::vec![Generator::new("x", 3)]).unwrap();
        let tmp = Cdga::new_unchecked("tmp", a.clone(), gens.clone(), alloc::vec![CdgaElement::zero()]).unwrap();
        let dx = tmp.parse("a^2").unwrap();
        let c = Cdga::new("rel", a, gens, alloc::vec![dx]).unwrap();
        let ax = c.parse("a*x").unwrap();
        assert!(c.d(&ax).is_zero());
        assert_eq!(c.d(&c.parse("x").unwrap()), c.parse("a2").unwrap());
    }
}
