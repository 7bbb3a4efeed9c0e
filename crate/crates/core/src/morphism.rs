//! CDGA morphisms between [`Cdga`]s and the quasi-isomorphism test.
//!
//! A morphism is given on the basis of the source's finite part and on its
//! free generators. Construction checks that the base part is unital and
//! multiplicative, that degrees are preserved and that `f D = D f` on
//! every basis element and generator.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::cdga::{Cdga, CdgaElement, Term};
use crate::cohomology::CochainComplex;
use crate::error::AlgebraError;

#[derive(Debug, Clone, PartialEq)]
pub struct CdgaMorphism {
    source: Cdga,
    target: Cdga,
    base_images: Vec<CdgaElement>,
    generator_images: Vec<CdgaElement>,
}

impl CdgaMorphism {
    pub fn new(
        source: Cdga,
        target: Cdga,
        base_images: Vec<CdgaElement>,
        generator_images: Vec<CdgaElement>,
    ) -> Result<Self, AlgebraError> {
        let f = Self::new_unchecked(source, target, base_images, generator_images)?;
        f.validate()?;
        Ok(f)
    }

    /// Only checks arity; see [`CdgaMorphism::validate`].
    pub fn new_unchecked(
        source: Cdga,
        target: Cdga,
        base_images: Vec<CdgaElement>,
        generator_images: Vec<CdgaElement>,
    ) -> Result<Self, AlgebraError> {
        if base_images.len() != source.base().dim() || generator_images.len() != source.generators().len() {
            return Err(AlgebraError::InvalidParameter("wrong number of images".into()));
        }
        Ok(Self { source, target, base_images, generator_images })
    }

    /// Base part `A -> A'` given by the identity on basis indices, with
    /// generator images parsed in the target.
    pub fn from_exprs(source: Cdga, target: Cdga, images: &[(&str, &str)]) -> Result<Self, AlgebraError> {
        let base_images = (0..source.base().dim())
            .map(|u| {
                let name = source.base().name(u);
                if u == 0 {
                    Ok(target.one())
                } else {
                    target.parse(name).map_err(AlgebraError::from)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut gen_images = alloc::vec![CdgaElement::zero(); source.generators().len()];
        for (name, expr) in images {
            let i = source.generators().index_of(name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))?;
            gen_images[i] = target.parse(expr)?;
        }
        Self::new(source, target, base_images, gen_images)
    }

    pub fn identity(c: &Cdga) -> Self {
        let base_images = (0..c.base().dim()).map(|u| c.base_element(&[(u, crate::rat(1))])).collect();
        let gens = (0..c.generators().len()).map(|i| c.generator(i)).collect();
        Self { source: c.clone(), target: c.clone(), base_images, generator_images: gens }
    }

    pub fn source(&self) -> &Cdga {
        &self.source
    }

    pub fn target(&self) -> &Cdga {
        &self.target
    }

    pub fn base_image(&self, u: usize) -> &CdgaElement {
        &self.base_images[u]
    }

    pub fn generator_image(&self, i: usize) -> &CdgaElement {
        &self.generator_images[i]
    }

    pub fn apply_term(&self, t: &Term) -> CdgaElement {
        let mut acc = self.base_images[t.base].clone();
        for (i, &e) in t.monomial.exponents().iter().enumerate() {
            for _ in 0..e {
                acc = self.target.mul(&acc, &self.generator_images[i]);
            }
        }
        acc
    }

    pub fn apply(&self, e: &CdgaElement) -> CdgaElement {
        let mut out = CdgaElement::zero();
        for (t, c) in e.terms() {
            out.add_assign(&self.apply_term(t).scale(c));
        }
        out
    }

    fn check_degree(&self, name: &str, expected: u32, image: &CdgaElement) -> Result<(), AlgebraError> {
        match self.target.degree_of(image) {
            None if image.is_zero() => Ok(()),
            None => Err(AlgebraError::NotHomogeneous(format!("image of {name}"))),
            Some(found) if found != expected => {
                Err(AlgebraError::DegreeMismatch { name: format!("image of {name}"), expected, found })
            }
            Some(_) => Ok(()),
        }
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        let a = self.source.base();
        if self.base_images[0] != self.target.one() {
            return Err(AlgebraError::NotMultiplicative("1".into()));
        }
        for u in 0..a.dim() {
            self.check_degree(a.name(u), a.degree(u), &self.base_images[u])?;
        }
        for (i, g) in self.source.generators().generators().iter().enumerate() {
            self.check_degree(&g.name, g.degree, &self.generator_images[i])?;
        }
        for u in 1..a.dim() {
            for v in 1..a.dim() {
                let lhs = self.target.mul(&self.base_images[u], &self.base_images[v]);
                let rhs = self.apply(&self.source.base_element(a.product(u, v)));
                if lhs != rhs {
                    return Err(AlgebraError::NotMultiplicative(format!("{} * {}", a.name(u), a.name(v))));
                }
            }
        }
        let unit = self.source.generators().unit_monomial();
        let chain_check = |name: &str, x: CdgaElement| -> Result<(), AlgebraError> {
            let fdx = self.apply(&self.source.d(&x));
            let dfx = self.target.d(&self.apply(&x));
            if fdx != dfx {
                return Err(AlgebraError::NotChainMap {
                    generator: name.to_string(),
                    detail: format!("f(Dx) = {}, D(fx) = {}", self.target.format(&fdx), self.target.format(&dfx)),
                });
            }
            Ok(())
        };
        for u in 1..a.dim() {
            let x = CdgaElement::from_terms([(Term { base: u, monomial: unit.clone() }, crate::rat(1))]);
            chain_check(a.name(u), x)?;
        }
        for (i, g) in self.source.generators().generators().iter().enumerate() {
            chain_check(&g.name, self.source.generator(i))?;
        }
        Ok(())
    }
}

/// Per-degree outcome of [`is_quasi_iso`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: u32,
    pub source_betti: usize,
    pub target_betti: usize,
    /// The images of source representatives stay independent modulo
    /// coboundaries.
    pub injective: bool,
}

impl DegreeReport {
    pub fn is_iso(&self) -> bool {
        self.injective && self.source_betti == self.target_betti
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub cutoff: u32,
    pub degrees: Vec<DegreeReport>,
}

impl QuasiIsoReport {
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees.iter().all(DegreeReport::is_iso)
    }

    pub fn failing_degrees(&self) -> Vec<u32> {
        self.degrees.iter().filter(|d| !d.is_iso()).map(|d| d.degree).collect()
    }
}

/// Checks `H^n(f)` is an isomorphism for every `n <= cutoff`. The morphism
/// is validated first.
pub fn is_quasi_iso(f: &CdgaMorphism, cutoff: u32) -> Result<QuasiIsoReport, AlgebraError> {
    f.validate()?;
    let src = CochainComplex::new(&f.source, cutoff + 1);
    let tgt = CochainComplex::new(&f.target, cutoff + 1);
    let mut degrees = Vec::new();
    for n in 0..=cutoff {
        let reps = src.representatives(n);
        let target_betti = tgt.dim(n) - tgt.rank(n) - if n == 0 { 0 } else { tgt.rank(n - 1) };
        let mut image = tgt.image_echelon(n);
        let injective = reps.iter().all(|z| image.insert_rational(&tgt.coordinates(n, &f.apply(z))));
        degrees.push(DegreeReport { degree: n, source_betti: reps.len(), target_betti, injective });
    }
    Ok(QuasiIsoReport { cutoff, degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::FreeCdga;

    fn s2() -> Cdga {
        FreeCdga::from_exprs("S2", &[("e", 2), ("x", 3)], &[("x", "e^2")]).unwrap().into_cdga()
    }

    #[test]
    fn identity_is_quasi_iso() {
        let c = s2();
        let r = is_quasi_iso(&CdgaMorphism::identity(&c), 12).unwrap();
        assert!(r.is_quasi_iso());
    }

    #[test]
    fn exact_to_non_exact_is_not_quasi_iso() {
        // a^2 is a non-exact cocycle but its image e^2 is exact
        let src = FreeCdga::from_exprs("Λ(a)", &[("a", 2)], &[]).unwrap().into_cdga();
        let tgt = s2();
        let f = CdgaMorphism::from_exprs(src.clone(), tgt.clone(), &[("a", "e")]).unwrap();
        let r = is_quasi_iso(&f, 6).unwrap();
        assert!(!r.is_quasi_iso());
        assert_eq!(r.failing_degrees(), alloc::vec![4, 6]);
    }

    #[test]
    fn non_chain_map_rejected() {
        let src = FreeCdga::from_exprs("S3", &[("y", 3)], &[]).unwrap().into_cdga();
        let tgt = s2();
        let err = CdgaMorphism::from_exprs(src, tgt, &[("y", "x")]).unwrap_err();
        assert!(matches!(err, AlgebraError::NotChainMap { ref generator, .. } if generator == "y"));
    }

    #[test]
    fn dimension_match_alone_is_not_enough() {
        // Λ(a2, b2) -> Λ(a2, b2), a -> a, b -> a: ranks agree in degree 2
        // only by accident of dimension; the map is not injective there.
        let c = FreeCdga::from_exprs("Λ(a,b)", &[("a", 2), ("b", 2)], &[]).unwrap().into_cdga();
        let f = CdgaMorphism::from_exprs(c.clone(), c, &[("a", "a"), ("b", "a")]).unwrap();
        let r = is_quasi_iso(&f, 4).unwrap();
        let d2 = &r.degrees[2];
        assert_eq!(d2.source_betti, d2.target_betti);
        assert!(!d2.injective);
        assert!(!r.is_quasi_iso());
    }
}
