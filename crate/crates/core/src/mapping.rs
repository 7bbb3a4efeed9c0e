//! Mapping spaces out of a manifold `M`: into Eilenberg-MacLane spaces (by
//! Thom's formula) and the null component of maps into an even sphere.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cdga::{Cdga, CdgaElement, FreeCdga, Term};
use crate::cohomology::{BettiTable, CochainComplex};
use crate::error::AlgebraError;
use crate::finite::FiniteCdga;
use crate::gca::{Element, Generator, GeneratorSet};
use crate::linalg::{Echelon, Inserted, IntVec};
use crate::morphism::CdgaMorphism;
use crate::{sign_rat, Rational};

/// `K(Q^{coefficient_dim}, degree)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmFactor {
    pub coefficient_dim: usize,
    pub degree: u32,
}

fn coverage(betti: &BettiTable, n: u32) -> Result<(), AlgebraError> {
    if betti.cutoff < n {
        return Err(AlgebraError::InsufficientCoverage { needed: n as usize, have: betti.cutoff as usize });
    }
    Ok(())
}

/// Each component of `Map(M, K(Q, n))` is `∏_{1<=q<=n} K(H^{n-q}(M), q)`.
/// Factors with zero coefficient dimension are omitted.
pub fn em_mapping_space(betti: &BettiTable, n: u32) -> Result<Vec<EmFactor>, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::InvalidParameter("n >= 1 required".into()));
    }
    coverage(betti, n)?;
    Ok((1..=n)
        .map(|q| EmFactor { coefficient_dim: betti.get(n - q), degree: q })
        .filter(|f| f.coefficient_dim > 0)
        .collect())
}

/// `π_0 Map(M, K(Q, n)) = H^n(M)`; returns its dimension.
pub fn em_component_rank(betti: &BettiTable, n: u32) -> Result<usize, AlgebraError> {
    coverage(betti, n)?;
    Ok(betti.get(n))
}

/// Odd spheres are rationally `K(Q, k)`.
pub fn odd_sphere_mapping(betti: &BettiTable, k: u32) -> Result<Vec<EmFactor>, AlgebraError> {
    if k % 2 == 0 || k < 3 {
        return Err(AlgebraError::InvalidParameter(format!("odd k >= 3 required, got {k}")));
    }
    em_mapping_space(betti, k)
}

/// Result of [`sigma_normalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaNormalization {
    /// The normalized morphism; it kills both generators.
    pub normalized: CdgaMorphism,
    /// `b` with `d b = σ(x)` (zero when `σ(x) = 0`).
    pub primitive: CdgaElement,
    /// The cocycle `a = σ(y) - b σ(x)` absorbed by the change of variables
    /// `y' = y - a`.
    pub absorbed: CdgaElement,
}

fn sphere_shape(c: &Cdga) -> Result<u32, AlgebraError> {
    let g = c.generators();
    let bad = || AlgebraError::InvalidParameter("source must be Λ(x, y) with |x| = k even, |y| = 2k - 1, dy = x^2".into());
    if c.base().dim() != 1 || g.len() != 2 {
        return Err(bad());
    }
    let k = g.degree(0);
    if k % 2 == 1 || g.degree(1) != 2 * k - 1 {
        return Err(bad());
    }
    let x = c.generator(0);
    if !c.d_generator(0).is_zero() || *c.d_generator(1) != c.mul(&x, &x) {
        return Err(bad());
    }
    Ok(k)
}

/// Normalizes `σ : Λ(x, y) -> A` to the map that kills `x` and `y`.
///
/// When `σ(x) = d b`, the element `a = σ(y) - b σ(x)` is a cocycle, and
/// after substituting `y' = y - a` the map sends `x` and `y'` to zero. A
/// nonzero class `[σ(x)]` is a component obstruction.
pub fn sigma_normalize(sigma: &CdgaMorphism) -> Result<SigmaNormalization, AlgebraError> {
    let k = sphere_shape(sigma.source())?;
    let target = sigma.target();
    if !target.generators().is_empty() {
        return Err(AlgebraError::InvalidParameter("target must be finite-dimensional".into()));
    }
    sigma.validate()?;
    let sx = sigma.generator_image(0).clone();
    let sy = sigma.generator_image(1).clone();
    let primitive = if sx.is_zero() {
        CdgaElement::zero()
    } else {
        let cx = CochainComplex::new(target, k);
        cx.primitive(k, &sx).ok_or(AlgebraError::ComponentObstruction { degree: k })?
    };
    let absorbed = sy.sub(&target.mul(&primitive, &sx));
    debug_assert!(target.d(&absorbed).is_zero());
    let normalized = CdgaMorphism::new(
        sigma.source().clone(),
        target.clone(),
        vec![target.one()],
        vec![CdgaElement::zero(), CdgaElement::zero()],
    )?;
    Ok(SigmaNormalization { normalized, primitive, absorbed })
}

/// The even-sphere model `Λ(x, y)`, `|x| = k`, `dy = x^2`.
pub fn even_sphere_model(k: u32) -> Result<FreeCdga, AlgebraError> {
    if k % 2 == 1 || k == 0 {
        return Err(AlgebraError::InvalidParameter(format!("even k >= 2 required, got {k}")));
    }
    FreeCdga::from_exprs(&format!("S^{k}"), &[("x", k), ("y", 2 * k - 1)], &[("y", "x^2")])
}

/// Model of the null component `Map(M, S^k, const)` for `k` even.
///
/// For each basis element `a_u` of `A` there are generators `u_<name>` of
/// degree `k - |a_u|` and `v_<name>` of degree `2k - 1 - |a_u|` (the unit
/// is named `1`). With `φ(x) = Σ a_u ⊗ u_u` and `φ(y) = Σ a_u ⊗ v_u`,
/// `D` is determined by `(d_A ⊗ 1 + 1 ⊗ D) φ = φ d`. Generators of
/// negative degree are dropped, those of degree zero are set to zero, and
/// the resulting linear relations among degree-one generators are solved
/// by substitution. `D^2 = 0` is checked on the result.
pub fn sphere_map_null_model(a: &FiniteCdga, k: u32) -> Result<FreeCdga, AlgebraError> {
    if k % 2 == 1 {
        return Err(AlgebraError::InvalidParameter(format!(
            "k = {k} is odd; odd spheres are rationally K(Q, k), use odd_sphere_mapping"
        )));
    }
    if k < 2 {
        return Err(AlgebraError::InvalidParameter("k >= 2 required".into()));
    }
    if !a.is_simply_connected() {
        return Err(AlgebraError::NotSimplyConnected(a.label().into()));
    }
    let n = a.dim();
    let name = |prefix: &str, u: usize| format!("{prefix}_{}", a.name(u));
    // (family, basis index, degree); family 0 = x, 1 = y
    let all: Vec<(usize, usize, i64)> = (0..2)
        .flat_map(|f| (0..n).map(move |u| (f, u)))
        .map(|(f, u)| {
            let top = if f == 0 { k as i64 } else { 2 * k as i64 - 1 };
            (f, u, top - a.degree(u) as i64)
        })
        .collect();
    let positive: Vec<&(usize, usize, i64)> = all.iter().filter(|g| g.2 > 0).collect();
    let ctx = GeneratorSet::new(
        positive
            .iter()
            .map(|(f, u, d)| Generator::new(name(if *f == 0 { "u" } else { "v" }, *u), *d as u32))
            .collect(),
    )?;
    let index: BTreeMap<(usize, usize), usize> = positive.iter().enumerate().map(|(i, (f, u, _))| ((*f, *u), i)).collect();
    let shell = Cdga::new_unchecked("", a.clone(), ctx.clone(), vec![CdgaElement::zero(); ctx.len()])?;
    // φ(w) for w = x (family 0) or y (family 1)
    let phi = |f: usize| -> CdgaElement {
        CdgaElement::from_terms(
            (0..n).filter_map(|u| index.get(&(f, u)).map(|&i| (Term { base: u, monomial: ctx.generator_monomial(i) }, Rational::from_integer(1.into())))),
        )
    };
    let phi_x = phi(0);
    let phi_y = phi(1);
    let targets = [CdgaElement::zero(), shell.mul(&phi_x, &phi_x)];
    // R_f = φ(dw) - (d_A ⊗ 1) φ(w); then D(w_t) = (-1)^{|a_t|} R_f[a_t]
    let residues: Vec<CdgaElement> = (0..2)
        .map(|f| {
            let phi_w = if f == 0 { &phi_x } else { &phi_y };
            let mut dphi = CdgaElement::zero();
            for (t, c) in phi_w.terms() {
                for (w, e) in a.d(t.base) {
                    dphi.add_term(Term { base: *w, monomial: t.monomial.clone() }, c * e);
                }
            }
            targets[f].sub(&dphi)
        })
        .collect();
    let formal_d = |f: usize, t: usize| -> Element {
        let s = sign_rat(a.degree(t) % 2 == 1);
        Element::from_terms(
            &ctx,
            residues[f].terms().iter().filter(|(term, _)| term.base == t).map(|(term, c)| (term.monomial.clone(), c * &s)),
        )
    };

    // degree-zero generators are set to zero, so their differentials
    // (linear in degree-one generators) must vanish too
    let degree_one: Vec<usize> = (0..ctx.len()).filter(|&i| ctx.degree(i) == 1).collect();
    let mut relations = Echelon::new();
    let mut rows: Vec<IntVec> = Vec::new();
    for &(f, u, d) in &all {
        if d != 0 {
            continue;
        }
        let r = formal_d(f, u);
        let v: Vec<(usize, Rational)> = degree_one
            .iter()
            .map(|&i| (i, r.coefficient(&ctx.generator_monomial(i))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        debug_assert_eq!(v.len(), r.terms().len());
        let iv = IntVec::from_rational(&v);
        if let Inserted::Independent = relations.insert_tagged(iv.clone(), IntVec::default()) {
            rows.push(iv);
        }
    }
    // reduced echelon: each relation solves for its leading generator
    let solved = reduced_relations(&rows);
    let eliminated: Vec<usize> = solved.iter().map(|(p, _)| *p).collect();
    let kept: Vec<usize> = (0..ctx.len()).filter(|i| !eliminated.contains(i)).collect();
    let new_ctx = GeneratorSet::new(kept.iter().map(|&i| ctx.get(i).clone()).collect())?;
    let images: Vec<Element> = (0..ctx.len())
        .map(|i| match kept.iter().position(|&j| j == i) {
            Some(p) => Element::generator(&new_ctx, p),
            None => {
                let (_, expr) = solved.iter().find(|(p, _)| *p == i).expect("eliminated");
                Element::from_terms(
                    &new_ctx,
                    expr.iter().map(|(j, c)| {
                        let p = kept.iter().position(|x| x == j).expect("free variable is kept");
                        (new_ctx.generator_monomial(p), c.clone())
                    }),
                )
            }
        })
        .collect();
    let differential = kept
        .iter()
        .map(|&i| {
            let (f, u, _) = positive[i];
            formal_d(*f, *u).substitute(&images, &new_ctx)
        })
        .collect::<Result<Vec<_>, _>>()?;
    FreeCdga::new(format!("Map({}, S^{k}, 0)", a.label()), new_ctx, differential)
}

/// Gauss-Jordan on integer relation rows: returns `(pivot, expression)`
/// pairs meaning `g_pivot = Σ c_j g_j` over non-pivot `j`.
fn reduced_relations(rows: &[IntVec]) -> Vec<(usize, Vec<(usize, Rational)>)> {
    let mut dense: Vec<BTreeMap<usize, Rational>> = rows.iter().map(|r| r.to_rational().into_iter().collect()).collect();
    let mut pivots = Vec::new();
    for r in 0..dense.len() {
        let Some((&p, c)) = dense[r].iter().next().map(|(p, c)| (p, c.clone())) else { continue };
        for v in dense[r].values_mut() {
            *v = &*v / &c;
        }
        for o in 0..dense.len() {
            if o == r {
                continue;
            }
            let Some(f) = dense[o].get(&p).cloned() else { continue };
            let row = dense[r].clone();
            for (j, v) in row {
                let e = dense[o].entry(j).or_insert_with(Rational::zero);
                *e -= &f * v;
                if e.is_zero() {
                    dense[o].remove(&j);
                }
            }
        }
        pivots.push((r, p));
    }
    pivots
        .into_iter()
        .map(|(r, p)| (p, dense[r].iter().filter(|(j, _)| **j != p).map(|(j, c)| (*j, -c.clone())).collect()))
        .collect()
}

/// Whether the sphere factor is computed or only named.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereStatus {
    ResolvedNull,
    Symbolic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereFactor {
    pub k: u32,
    pub status: SphereStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapDescription {
    pub em_factors: Vec<EmFactor>,
    pub sphere_factor: Option<SphereFactor>,
    /// Present exactly when the sphere factor is resolved.
    pub model: Option<FreeCdga>,
}

/// `Map(M, S^k)` for any `k >= 2`: EM factors for odd `k`, the null
/// component when `k` is even and `H^k(M) = 0` (or `k > dim M`), and a
/// symbolic factor otherwise.
pub fn map_into_sphere(a: &FiniteCdga, k: u32) -> Result<MapDescription, AlgebraError> {
    if k % 2 == 1 {
        let mut dims = a.betti();
        dims.resize(k as usize + 1, 0);
        let betti = BettiTable::new(k, dims);
        return Ok(MapDescription { em_factors: odd_sphere_mapping(&betti, k)?, sphere_factor: None, model: None });
    }
    let h_k = if k <= a.top_degree() { a.betti_in_degree(k) } else { 0 };
    if h_k == 0 {
        let model = sphere_map_null_model(a, k)?;
        Ok(MapDescription {
            em_factors: Vec::new(),
            sphere_factor: Some(SphereFactor { k, status: SphereStatus::ResolvedNull }),
            model: Some(model),
        })
    } else {
        Ok(MapDescription {
            em_factors: Vec::new(),
            sphere_factor: Some(SphereFactor { k, status: SphereStatus::Symbolic }),
            model: None,
        })
    }
}

/// Display name of a factor, e.g. `K(Q^2,3)`.
pub fn factor_name(f: &EmFactor) -> String {
    if f.coefficient_dim == 1 {
        format!("K(Q,{})", f.degree)
    } else {
        format!("K(Q^{},{})", f.coefficient_dim, f.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cohomology, cohomology_dense};

    fn betti_of(a: &FiniteCdga, cutoff: u32) -> BettiTable {
        let mut d = a.betti();
        d.resize(cutoff as usize + 1, 0);
        BettiTable::new(cutoff, d)
    }

    fn point() -> FiniteCdga {
        FiniteCdga::unit()
    }

    fn f(c: usize, d: u32) -> EmFactor {
        EmFactor { coefficient_dim: c, degree: d }
    }

    #[test]
    fn thom_formula_examples() {
        assert_eq!(em_mapping_space(&betti_of(&point(), 10), 7).unwrap(), vec![f(1, 7)]);
        let s2 = FiniteCdga::sphere(2, "a").unwrap();
        assert_eq!(em_mapping_space(&betti_of(&s2, 10), 3).unwrap(), vec![f(1, 1), f(1, 3)]);
        assert_eq!(em_mapping_space(&betti_of(&s2, 10), 7).unwrap(), vec![f(1, 5), f(1, 7)]);
        assert!(matches!(
            em_mapping_space(&betti_of(&s2, 4), 7),
            Err(AlgebraError::InsufficientCoverage { .. })
        ));
    }

    #[test]
    fn odd_sphere_examples() {
        let s2 = FiniteCdga::sphere(2, "a").unwrap();
        assert_eq!(odd_sphere_mapping(&betti_of(&s2, 10), 7).unwrap(), vec![f(1, 5), f(1, 7)]);
        assert_eq!(odd_sphere_mapping(&betti_of(&point(), 10), 3).unwrap(), vec![f(1, 3)]);
        let s3 = betti_of(&FiniteCdga::sphere(3, "a").unwrap(), 10);
        assert_eq!(odd_sphere_mapping(&s3, 3).unwrap(), vec![f(1, 3)]);
        assert_eq!(em_component_rank(&s3, 3).unwrap(), 1);
        assert!(odd_sphere_mapping(&s3, 4).is_err());
    }

    #[test]
    fn null_model_of_point_is_the_sphere() {
        let m = sphere_map_null_model(&point(), 4).unwrap();
        let g: Vec<u32> = m.generators().generators().iter().map(|g| g.degree).collect();
        assert_eq!(g, vec![4, 7]);
        assert_eq!(m.format(m.d_generator(1)), "u_1^2");
    }

    #[test]
    fn null_model_of_two_sphere() {
        let s2 = FiniteCdga::sphere(2, "a").unwrap();
        let m = sphere_map_null_model(&s2, 2).unwrap();
        let mut g: Vec<u32> = m.generators().generators().iter().map(|g| g.degree).collect();
        g.sort();
        assert_eq!(g, vec![1, 2, 3]);
        let t = cohomology(&m, 10);
        assert_eq!(t.dims, vec![1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(cohomology_dense(&m, 10), t);
    }

    #[test]
    fn null_model_of_three_sphere() {
        let s3 = FiniteCdga::sphere(3, "a").unwrap();
        let m = sphere_map_null_model(&s3, 2).unwrap();
        let mut g: Vec<u32> = m.generators().generators().iter().map(|g| g.degree).collect();
        g.sort();
        assert_eq!(g, vec![2, 3]);
        assert_eq!(cohomology(&m, 10).support(), vec![0, 2]);
    }

    #[test]
    fn sigma_examples() {
        let s4 = even_sphere_model(4).unwrap().into_cdga();
        let a = Cdga::from(FiniteCdga::truncated_polynomial("a", 2, 3).unwrap());
        // σ = 0
        let zero = CdgaMorphism::from_exprs(s4.clone(), a.clone(), &[]).unwrap();
        let r = sigma_normalize(&zero).unwrap();
        assert!(r.absorbed.is_zero());
        // σ(x) = 0 and σ(y) = a cocycle
        let s3 = even_sphere_model(2).unwrap().into_cdga();
        let b = Cdga::from(FiniteCdga::sphere(3, "u").unwrap());
        let sig = CdgaMorphism::from_exprs(s3.clone(), b.clone(), &[("y", "2*u")]).unwrap();
        let r = sigma_normalize(&sig).unwrap();
        assert_eq!(b.format(&r.absorbed), "2*u");
        assert!(r.normalized.generator_image(0).is_zero() && r.normalized.generator_image(1).is_zero());
        // identity-like σ on the sphere's own cohomology: [σ(x)] ≠ 0
        let s2 = Cdga::from(FiniteCdga::sphere(2, "a").unwrap());
        let sig = CdgaMorphism::from_exprs(s3, s2, &[("x", "a")]).unwrap();
        assert_eq!(sigma_normalize(&sig).unwrap_err(), AlgebraError::ComponentObstruction { degree: 2 });
    }

    #[test]
    fn sigma_with_exact_x_image() {
        // A = {1, z (3), w (4)}, dz = w: σ(x) = w is exact with primitive z
        let mut bld = FiniteCdga::builder("pair");
        bld.element("z", 3).unwrap();
        bld.element("w", 4).unwrap();
        bld.differential_expr("z", "w").unwrap();
        let a = Cdga::from(bld.build().unwrap());
        let s4 = even_sphere_model(4).unwrap().into_cdga();
        let sig = CdgaMorphism::from_exprs(s4, a.clone(), &[("x", "w")]).unwrap();
        let r = sigma_normalize(&sig).unwrap();
        assert_eq!(a.d(&r.primitive), a.parse("w").unwrap());
        assert!(a.d(&r.absorbed).is_zero());
    }

    #[test]
    fn null_model_with_degree_zero_relations() {
        // A is quasi-isomorphic to a point; the degree-0 generator u_w forces u_z = 0
        let mut bld = FiniteCdga::builder("pair");
        bld.element("z", 3).unwrap();
        bld.element("w", 4).unwrap();
        bld.differential_expr("z", "w").unwrap();
        let a = bld.build().unwrap();
        let m = sphere_map_null_model(&a, 4).unwrap();
        assert!(m.generators().index_of("u_z").is_none());
        assert_eq!(cohomology(&m, 16).support(), vec![0, 4]);
    }

    #[test]
    fn cancelling_linear_pairs_keeps_cohomology() {
        let s3 = FiniteCdga::sphere(3, "a").unwrap();
        let mut bld = FiniteCdga::builder("pair");
        bld.element("z", 3).unwrap();
        bld.element("w", 4).unwrap();
        bld.differential_expr("z", "w").unwrap();
        let a = s3.tensor(&bld.build().unwrap());
        for k in [4u32, 6] {
            let m = sphere_map_null_model(&a, k).unwrap();
            let (r, q) = m.cancel_linear_pairs().unwrap();
            assert!(r.generators().len() < m.generators().len());
            assert!(crate::morphism::is_quasi_iso(&q, 16).unwrap().is_quasi_iso());
            assert_eq!(cohomology(&r, 16), cohomology(&m, 16));
        }
    }
}
