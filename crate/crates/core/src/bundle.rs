//! Classifying-space algebras, the Borel model of an associated bundle, and
//! the models of framed bundles and Stiefel manifolds built from them.
//!
//! Notation: `k = 2s` or `2s + 1` is the codimension, `m = 2l` or
//! `2l + 1` the dimension of the manifold, `|x_i| = 4i - 1`, `|e_k| = k`
//! and `|ebar| = m + k - 1`. Generator names are `x{i}`, `e{k}`,
//! `ebar{m+k-1}`, `p{i}` and `b{i}`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::cdga::{Cdga, CdgaElement, FreeCdga, RelativeModel};
use crate::cohomology::{cohomology, BettiTable};
use crate::error::AlgebraError;
use crate::finite::FiniteCdga;
use crate::gca::{Element, Generator, GeneratorSet};
use crate::morphism::CdgaMorphism;
use crate::{rat, SparseVec};

/// Rational model of `BSO(n)`: polynomial on Pontryagin classes (and the
/// Euler class for even `n`), zero differential.
#[derive(Debug, Clone, PartialEq)]
pub struct BsoModel {
    pub n: u32,
    pub algebra: FreeCdga,
}

fn bso_generators(n: u32, pontryagin: &str, euler: &str) -> Vec<Generator> {
    let r = (n - 1) / 2;
    let mut gens: Vec<Generator> = (1..=r).map(|i| Generator::new(format!("{pontryagin}{i}"), 4 * i)).collect();
    if n % 2 == 0 {
        gens.push(Generator::new(format!("{euler}{n}"), n));
    }
    gens
}

pub fn bso_model(n: u32) -> Result<BsoModel, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::InvalidParameter(format!("BSO({n}) needs n >= 2")));
    }
    let ctx = GeneratorSet::new(bso_generators(n, "p", "e"))?;
    let zero = vec![Element::zero(&ctx); ctx.len()];
    Ok(BsoModel { n, algebra: FreeCdga::new(format!("BSO({n})"), ctx, zero)? })
}

/// A CDGA model of a simply connected closed manifold `M^m` together with
/// cocycles representing its Pontryagin classes `p_i(τ_M)`, `4i <= m`.
/// Unlisted classes are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldModel {
    name: String,
    dimension: u32,
    model: FiniteCdga,
    pontryagin: Vec<(u32, SparseVec)>,
}

impl ManifoldModel {
    pub fn new(
        name: impl Into<String>,
        dimension: u32,
        model: FiniteCdga,
        mut pontryagin: Vec<(u32, SparseVec)>,
    ) -> Result<Self, AlgebraError> {
        if dimension == 0 {
            return Err(AlgebraError::InvalidParameter("dimension must be positive".into()));
        }
        if !model.is_simply_connected() {
            return Err(AlgebraError::NotSimplyConnected(model.label().to_string()));
        }
        pontryagin.sort_by_key(|(i, _)| *i);
        for (j, (i, v)) in pontryagin.iter().enumerate() {
            let i = *i;
            let fail = |reason: String| Err(AlgebraError::Pontryagin { index: i, reason });
            if i == 0 || 4 * i > dimension {
                return fail(format!("needs 1 <= i and 4i <= {dimension}"));
            }
            if j > 0 && pontryagin[j - 1].0 == i {
                return fail("given twice".into());
            }
            if v.iter().any(|(u, _)| model.degree(*u) != 4 * i) {
                return fail(format!("cocycle must be homogeneous of degree {}", 4 * i));
            }
            if !model.is_closed(v) {
                return fail("cocycle is not closed".into());
            }
        }
        pontryagin.retain(|(_, v)| !v.is_empty());
        Ok(Self { name: name.into(), dimension, model, pontryagin })
    }

    /// Pontryagin cocycles given as expressions in the basis names.
    pub fn from_exprs(name: &str, dimension: u32, model: FiniteCdga, pontryagin: &[(u32, &str)]) -> Result<Self, AlgebraError> {
        let p = pontryagin
            .iter()
            .map(|(i, e)| Ok((*i, model.parse(e)?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Self::new(name, dimension, model, p)
    }

    /// The round sphere `S^n` (stably parallelizable, so no Pontryagin
    /// classes).
    pub fn sphere(n: u32) -> Result<Self, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::NotSimplyConnected(format!("S^{n}")));
        }
        Self::new(format!("S^{n}"), n, FiniteCdga::sphere(n, "a")?, Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn model(&self) -> &FiniteCdga {
        &self.model
    }

    pub fn pontryagin(&self) -> &[(u32, SparseVec)] {
        &self.pontryagin
    }

    /// `p_i(τ_M)`; zero when not supplied.
    pub fn pontryagin_class(&self, i: u32) -> SparseVec {
        self.pontryagin.iter().find(|(j, _)| *j == i).map(|(_, v)| v.clone()).unwrap_or_default()
    }

    /// Whether `[p_i(τ_M)] = 0` in cohomology.
    pub fn class_vanishes(&self, i: u32) -> bool {
        let p = self.pontryagin_class(i);
        p.is_empty() || self.model.is_exact(&p)
    }

    pub fn betti(&self, cutoff: u32) -> BettiTable {
        let mut dims = self.model.betti();
        dims.resize(cutoff as usize + 1, 0);
        BettiTable::new(cutoff, dims)
    }

    /// Same data with every Pontryagin class set to zero.
    pub fn without_pontryagin(&self) -> Self {
        Self { pontryagin: Vec::new(), ..self.clone() }
    }
}

/// Builds `(A ⊗ Λ(V_K ⊕ sV_H), D)` with `D = d_A` on `A`, `D = 0` on
/// `V_K` and `D(sv) = φ((Bμ)*(v)) - (Bν)*(v)`.
///
/// `phi` goes from `ΛV_G` to `base` (as a [`Cdga`]); `bmu[j]` lives in
/// `ΛV_G` and `bnu[j]` in `ΛV_K` (generators `vk`).
pub fn borel_assoc_model(
    base: &FiniteCdga,
    phi: &CdgaMorphism,
    vk: &[Generator],
    svh: &[Generator],
    bmu: &[Element],
    bnu: &[Element],
) -> Result<RelativeModel, AlgebraError> {
    if bmu.len() != svh.len() || bnu.len() != svh.len() {
        return Err(AlgebraError::InvalidParameter("one (Bμ)* and one (Bν)* image per sV_H generator".into()));
    }
    if phi.target().base() != base || !phi.target().generators().is_empty() {
        return Err(AlgebraError::InvalidParameter("φ must land in the base algebra".into()));
    }
    let vk_ctx = GeneratorSet::new(vk.to_vec())?;
    let mut fiber: Vec<Generator> = vk.to_vec();
    fiber.extend(svh.iter().cloned());
    let ctx = GeneratorSet::new(fiber)?;
    let shell = Cdga::new_unchecked("", base.clone(), ctx.clone(), vec![CdgaElement::zero(); ctx.len()])?;

    let mut differential = vec![CdgaElement::zero(); vk.len()];
    for (j, g) in svh.iter().enumerate() {
        for (what, e) in [("(Bμ)*", &bmu[j]), ("(Bν)*", &bnu[j])] {
            if let Some(d) = e.degree() {
                if d != g.degree + 1 {
                    return Err(AlgebraError::DegreeMismatch {
                        name: format!("{what}({})", g.name),
                        expected: g.degree + 1,
                        found: d,
                    });
                }
            } else if !e.is_zero() {
                return Err(AlgebraError::NotHomogeneous(format!("{what}({})", g.name)));
            }
        }
        if !crate::gca::same_context(bnu[j].context(), &vk_ctx) && !bnu[j].is_zero() {
            return Err(AlgebraError::ContextMismatch);
        }
        let from_g = phi.apply(&phi.source().lift(&bmu[j]));
        let a = phi.target().base_part(&from_g).expect("target has no generators");
        let mut d = shell.base_element(&a);
        // ΛV_K sits at the front of the fiber generators
        let lifted = CdgaElement::from_terms(bnu[j].terms().iter().map(|(m, c)| {
            (crate::cdga::Term { base: 0, monomial: m.embed(0, ctx.len()) }, c.clone())
        }));
        d = d.sub(&lifted);
        differential.push(d);
    }
    RelativeModel::new(format!("{} ⊗ Λ(V_K, sV_H)", base.label()), base.clone(), ctx, differential)
}

fn split_k(k: u32) -> (u32, bool) {
    (k / 2, k % 2 == 0)
}

/// Fiber generators of the framed-bundle model in declaration order,
/// together with the index of `x_s` when `k` is even.
pub fn stiefel_generators(m: u32, k: u32) -> Result<Vec<Generator>, AlgebraError> {
    if m < 1 {
        return Err(AlgebraError::InvalidParameter("m >= 1 required".into()));
    }
    if k < 2 {
        return Err(AlgebraError::InvalidParameter("k >= 2 required".into()));
    }
    let (s, k_even) = split_k(k);
    let l = m / 2;
    let m_odd = m % 2 == 1;
    let (first, last) = match (k_even, m_odd) {
        (false, _) => (s + 1, l + s),
        (true, true) => (s, l + s),
        (true, false) => (s, l + s - 1),
    };
    let mut gens: Vec<Generator> = (first..=last).map(|i| Generator::new(format!("x{i}"), 4 * i - 1)).collect();
    if m_odd != k_even {
        // k odd with m odd, or k even with m even
        gens.push(Generator::new(format!("ebar{}", m + k - 1), m + k - 1));
    }
    if k_even {
        gens.push(Generator::new(format!("e{k}"), k));
    }
    Ok(gens)
}

fn x_index(name: &str) -> Option<u32> {
    name.strip_prefix('x')?.parse().ok()
}

/// Minimal model of the Stiefel manifold `V_m(R^{m+k}) = SO(m+k)/SO(k)`.
pub fn stiefel_model(m: u32, k: u32) -> Result<FreeCdga, AlgebraError> {
    let gens = stiefel_generators(m, k)?;
    let ctx = GeneratorSet::new(gens)?;
    let (s, k_even) = split_k(k);
    let d = ctx
        .generators()
        .iter()
        .map(|g| {
            if k_even && x_index(&g.name) == Some(s) {
                Element::parse(&format!("e{k}^2"), &ctx).expect("e_k is a generator")
            } else {
                Element::zero(&ctx)
            }
        })
        .collect();
    FreeCdga::new(format!("V_{m}(R^{})", m + k), ctx, d)
}

/// The model of `Framed_m(τ_M)` relative to the model of `M`: fiber
/// generators as in [`stiefel_model`], `Dx_i = p_i(τ_M)` when `4i <= m`
/// and, for `k` even, `Dx_s = e_k^2 + p_s(τ_M)`.
pub fn framed_bundle_model(manifold: &ManifoldModel, k: u32) -> Result<RelativeModel, AlgebraError> {
    let m = manifold.dimension();
    let ctx = GeneratorSet::new(stiefel_generators(m, k)?)?;
    let a = manifold.model();
    let shell = Cdga::new_unchecked("", a.clone(), ctx.clone(), vec![CdgaElement::zero(); ctx.len()])?;
    let (s, k_even) = split_k(k);
    let d = ctx
        .generators()
        .iter()
        .map(|g| {
            let Some(i) = x_index(&g.name) else { return CdgaElement::zero() };
            let mut d = if 4 * i <= m { shell.base_element(&manifold.pontryagin_class(i)) } else { CdgaElement::zero() };
            if k_even && i == s {
                let e = shell.generator_named(&format!("e{k}")).expect("e_k is a generator");
                d = d.add(&shell.mul(&e, &e));
            }
            d
        })
        .collect();
    RelativeModel::new(format!("Framed_{m}({}) in R^{}", manifold.name(), m + k), a.clone(), ctx, d)
}

/// The unreduced model of the framed bundle (before cancelling the
/// contractible pairs `(x_i, b_i)`) and the reduction quasi-isomorphism
/// `Φ` onto [`framed_bundle_model`].
///
/// It is [`borel_assoc_model`] with `G = SO(m)`, `K = SO(k)`,
/// `H = SO(m+k)`, `φ(p_i) = p_i(τ_M)`, `φ(e_m) = 0`,
/// `(Bμ)*(c_i) = p_i` (and `e_m^2` for `c_{m/2}` when `m` is even),
/// `(Bν)*(c_i) = b_i` and, for `k` even, `(Bν)*(c_s) = -e_k^2`.
///
/// `Φ` is the identity on `A`, sends `b_i` to `p_i(τ_M)`, kills the
/// `x_i` that are paired with some `b_i` and keeps everything else.
pub fn unreduced_framed_model(manifold: &ManifoldModel, k: u32) -> Result<(RelativeModel, CdgaMorphism), AlgebraError> {
    let m = manifold.dimension();
    if k < 2 {
        return Err(AlgebraError::InvalidParameter("k >= 2 required".into()));
    }
    let a = manifold.model();
    let (s, k_even) = split_k(k);

    // φ : ΛV_G -> A with V_G the generators of BSO(m)
    let g_ctx = if m >= 2 { GeneratorSet::new(bso_generators(m, "p", "e"))? } else { GeneratorSet::empty() };
    let g_zero = vec![Element::zero(&g_ctx); g_ctx.len()];
    let bso_m = FreeCdga::new(format!("BSO({m})"), g_ctx.clone(), g_zero)?.into_cdga();
    let a_cdga = Cdga::from(a.clone());
    let phi_images = g_ctx
        .generators()
        .iter()
        .map(|g| match g.name.strip_prefix('p').and_then(|i| i.parse::<u32>().ok()) {
            Some(i) => a_cdga.base_element(&manifold.pontryagin_class(i)),
            None => CdgaElement::zero(),
        })
        .collect();
    let unit = vec![a_cdga.one()];
    let phi = CdgaMorphism::new(bso_m, a_cdga, unit, phi_images)?;

    let vk = bso_generators(k, "b", "e");
    let vk_ctx = GeneratorSet::new(vk.clone())?;
    let big_l = (m + k - 1) / 2;
    let mut svh: Vec<Generator> = (1..=big_l).map(|i| Generator::new(format!("x{i}"), 4 * i - 1)).collect();
    if (m + k) % 2 == 0 {
        svh.push(Generator::new(format!("ebar{}", m + k - 1), m + k - 1));
    }
    let mut bmu = Vec::new();
    let mut bnu = Vec::new();
    for g in &svh {
        let Some(i) = x_index(&g.name) else {
            bmu.push(Element::zero(&g_ctx));
            bnu.push(Element::zero(&vk_ctx));
            continue;
        };
        let mu = if m >= 2 && i <= (m - 1) / 2 {
            Element::generator_named(&g_ctx, &format!("p{i}"))?
        } else if m % 2 == 0 && i == m / 2 {
            Element::generator_named(&g_ctx, &format!("e{m}"))?.pow(2)?
        } else {
            Element::zero(&g_ctx)
        };
        let nu = if i <= (k - 1) / 2 {
            Element::generator_named(&vk_ctx, &format!("b{i}"))?
        } else if k_even && i == s {
            Element::generator_named(&vk_ctx, &format!("e{k}"))?.pow(2)?.neg()
        } else {
            Element::zero(&vk_ctx)
        };
        bmu.push(mu);
        bnu.push(nu);
    }
    let big = borel_assoc_model(a, &phi, &vk, &svh, &bmu, &bnu)?;
    let big = RelativeModel::from_cdga(
        big.into_cdga().with_label(format!("unreduced Framed_{m}({}) in R^{}", manifold.name(), m + k)),
    );

    let small = framed_bundle_model(manifold, k)?;
    let base_images = (0..a.dim()).map(|u| small.base_element(&[(u, rat(1))])).collect();
    let generator_images = big
        .generators()
        .generators()
        .iter()
        .map(|g| {
            if let Some(i) = g.name.strip_prefix('b').and_then(|i| i.parse::<u32>().ok()) {
                return Ok(small.base_element(&manifold.pontryagin_class(i)));
            }
            if let Some(i) = x_index(&g.name) {
                let killed = if k_even { i < s } else { i <= s };
                if killed {
                    return Ok(CdgaElement::zero());
                }
            }
            small.generator_named(&g.name)
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let reduction = CdgaMorphism::new(big.as_cdga().clone(), small.as_cdga().clone(), base_images, generator_images)?;
    Ok((big, reduction))
}

/// Outcome of [`is_rationally_trivial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    NotEstablished,
}

/// The Künneth check behind a [`Triviality::Trivial`] verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KunnethCertificate {
    pub cutoff: u32,
    pub model: BettiTable,
    pub base: BettiTable,
    pub fiber: BettiTable,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityReport {
    pub verdict: Triviality,
    /// `(i, [p_i(τ_M)] = 0)` for every index the hypothesis constrains.
    pub hypothesis: Vec<(u32, bool)>,
    pub certificate: Option<KunnethCertificate>,
}

/// Indices `i` whose Pontryagin class must vanish: `i >= s + 1` for
/// `k = 2s + 1`, `i >= s` for `k = 2s`, restricted to `4i <= m`.
pub fn pontryagin_hypothesis(manifold: &ManifoldModel, k: u32) -> Vec<(u32, bool)> {
    let (s, k_even) = split_k(k);
    let first = if k_even { s.max(1) } else { s + 1 };
    (first..=manifold.dimension() / 4).map(|i| (i, manifold.class_vanishes(i))).collect()
}

/// Sufficient criterion for `Framed_m(τ_M)` to be rationally trivial:
/// the Pontryagin hypothesis plus a Künneth check of the framed model up
/// to `cutoff`. Never claims nontriviality.
pub fn is_rationally_trivial(manifold: &ManifoldModel, k: u32, cutoff: u32) -> Result<TrivialityReport, AlgebraError> {
    let hypothesis = pontryagin_hypothesis(manifold, k);
    if !hypothesis.iter().all(|(_, z)| *z) {
        return Ok(TrivialityReport { verdict: Triviality::NotEstablished, hypothesis, certificate: None });
    }
    let model = cohomology(framed_bundle_model(manifold, k)?.as_cdga(), cutoff);
    let base = manifold.betti(cutoff);
    let fiber = cohomology(stiefel_model(manifold.dimension(), k)?.as_cdga(), cutoff);
    let passes = base.convolve(&fiber).dims == model.dims;
    let verdict = if passes { Triviality::Trivial } else { Triviality::NotEstablished };
    Ok(TrivialityReport { verdict, hypothesis, certificate: Some(KunnethCertificate { cutoff, model, base, fiber, passes }) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::is_quasi_iso;

    fn cp2(p1: &str) -> ManifoldModel {
        let a = FiniteCdga::truncated_polynomial("a", 2, 2).unwrap();
        ManifoldModel::from_exprs("CP^2", 4, a, &[(1, p1)]).unwrap()
    }

    fn names(c: &Cdga) -> Vec<(String, u32)> {
        c.generators().generators().iter().map(|g| (g.name.clone(), g.degree)).collect()
    }

    #[test]
    fn bso_generators_by_parity() {
        assert_eq!(names(&bso_model(3).unwrap().algebra), vec![("p1".into(), 4)]);
        assert_eq!(names(&bso_model(2).unwrap().algebra), vec![("e2".into(), 2)]);
        assert_eq!(names(&bso_model(4).unwrap().algebra), vec![("p1".into(), 4), ("e4".into(), 4)]);
        assert!(bso_model(1).is_err());
    }

    #[test]
    fn stiefel_cases() {
        let v = stiefel_model(2, 3).unwrap();
        assert_eq!(names(&v), vec![("x2".into(), 7)]);
        let v = stiefel_model(2, 2).unwrap();
        assert_eq!(names(&v), vec![("x1".into(), 3), ("ebar3".into(), 3), ("e2".into(), 2)]);
        assert_eq!(cohomology(&v, 8).support(), vec![0, 2, 3, 5]);
        let v = stiefel_model(3, 2).unwrap();
        assert_eq!(names(&v), vec![("x1".into(), 3), ("x2".into(), 7), ("e2".into(), 2)]);
        assert_eq!(cohomology(&v, 12).support(), vec![0, 2, 7, 9]);
        assert!(stiefel_model(2, 1).is_err());
    }

    #[test]
    fn framed_model_of_cp2() {
        let f = framed_bundle_model(&cp2("3*a^2"), 2).unwrap();
        assert_eq!(f.format(&f.d(&f.parse("x1").unwrap())), "3*a2 + e2^2");
        assert!(f.d(&f.parse("x2").unwrap()).is_zero());
    }

    #[test]
    fn borel_example() {
        // D x1 = p1(ξ) - b1
        let m = cp2("3*a^2");
        let g = FreeCdga::from_exprs("BSO(3)", &[("p1", 4)], &[]).unwrap();
        let a = Cdga::from(m.model().clone());
        let phi = CdgaMorphism::new(g.as_cdga().clone(), a.clone(), vec![a.one()], vec![a.parse("3*a^2").unwrap()]).unwrap();
        let vk = [Generator::new("b1", 4)];
        let svh = [Generator::new("x1", 3)];
        let bmu = [Element::parse("p1", g.generators()).unwrap()];
        let vk_ctx = GeneratorSet::new(vk.to_vec()).unwrap();
        let bnu = [Element::parse("b1", &vk_ctx).unwrap()];
        let r = borel_assoc_model(m.model(), &phi, &vk, &svh, &bmu, &bnu).unwrap();
        assert_eq!(r.format(&r.d(&r.parse("x1").unwrap())), "3*a2 - b1");
    }

    #[test]
    fn reduction_is_quasi_iso_small_cases() {
        for (man, k) in [(ManifoldModel::sphere(2).unwrap(), 3), (cp2("3*a^2"), 2), (cp2("3*a^2"), 3), (cp2("0"), 4)] {
            let (_, phi) = unreduced_framed_model(&man, k).unwrap();
            assert!(is_quasi_iso(&phi, 12).unwrap().is_quasi_iso(), "{} k={k}", man.name());
        }
    }

    #[test]
    fn triviality_examples() {
        let r = is_rationally_trivial(&ManifoldModel::sphere(2).unwrap(), 3, 20).unwrap();
        assert_eq!(r.verdict, Triviality::Trivial);
        assert!(r.certificate.unwrap().passes);
        let r = is_rationally_trivial(&cp2("3*a^2"), 2, 14).unwrap();
        assert_eq!(r.verdict, Triviality::NotEstablished);
        assert_eq!(r.hypothesis, vec![(1, false)]);
        let r = is_rationally_trivial(&cp2("0"), 2, 14).unwrap();
        assert_eq!(r.verdict, Triviality::Trivial);
    }

    #[test]
    fn manifold_validation() {
        let a = FiniteCdga::truncated_polynomial("a", 2, 2).unwrap();
        assert!(matches!(
            ManifoldModel::from_exprs("CP^2", 4, a.clone(), &[(2, "a2")]),
            Err(AlgebraError::Pontryagin { index: 2, .. })
        ));
        assert!(matches!(
            ManifoldModel::from_exprs("CP^2", 4, a, &[(1, "a")]),
            Err(AlgebraError::Pontryagin { index: 1, .. })
        ));
        let s1 = FiniteCdga::sphere(1, "t").unwrap();
        assert!(matches!(ManifoldModel::new("S^1", 1, s1, vec![]), Err(AlgebraError::NotSimplyConnected(_))));
    }
}
