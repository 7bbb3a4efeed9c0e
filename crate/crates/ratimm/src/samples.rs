//! Manifolds used by the suites, the acceptance checks and the data files.

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use ratimm_core::bundle::ManifoldModel;
use ratimm_core::{FiniteCdga, Rational, SparseVec};

/// Seed of every randomized sample in the repository.
pub const SEED: u64 = 0x5eed_2024;

pub fn rng() -> StdRng {
    StdRng::seed_from_u64(SEED)
}

pub fn sphere(n: u32) -> ManifoldModel {
    ManifoldModel::sphere(n).expect("n >= 2")
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `CP^n` with `p(CP^n) = (1 + a^2)^{n+1}`; basis `a, a2, ..., an`.
pub fn complex_projective(n: u32) -> ManifoldModel {
    let model = FiniteCdga::truncated_polynomial("a", 2, n).expect("n >= 1").with_label(format!("CP^{n}"));
    let classes: Vec<(u32, SparseVec)> = (1..=n / 2)
        .map(|i| {
            let c = Rational::from_integer(BigInt::from(binomial(n as u64 + 1, i as u64)));
            let u = model.index_of(&format!("a{}", 2 * i)).expect("a^{2i} exists");
            (i, vec![(u, c)])
        })
        .collect();
    ManifoldModel::new(format!("CP^{n}"), 2 * n, model, classes).expect("valid")
}

/// `CP^2` with `p_1` given explicitly (e.g. `3*a^2`).
pub fn cp2(p1: &str) -> ManifoldModel {
    let model = FiniteCdga::truncated_polynomial("a", 2, 2).expect("valid").with_label("CP^2");
    ManifoldModel::from_exprs("CP^2", 4, model, &[(1, p1)]).expect("valid")
}

/// `M × N`, with total Pontryagin class `p(M) p(N)`.
pub fn product(a: &ManifoldModel, b: &ManifoldModel) -> ManifoldModel {
    let model = a.model().tensor(b.model());
    let nb = b.model().dim();
    let left = |v: SparseVec| -> SparseVec { v.into_iter().map(|(u, c)| (u * nb, c)).collect() };
    let class = |m: &ManifoldModel, i: u32| -> SparseVec {
        if i == 0 {
            vec![(0, Rational::from_integer(1.into()))]
        } else {
            m.pontryagin_class(i)
        }
    };
    let dimension = a.dimension() + b.dimension();
    let classes = (1..=dimension / 4)
        .map(|i| {
            let mut total = SparseVec::new();
            for j in 0..=i {
                let term = model.mul_vec(&left(class(a, j)), &class(b, i - j));
                total = add(&total, &term);
            }
            (i, total)
        })
        .collect();
    let name = format!("{}x{}", a.name(), b.name());
    ManifoldModel::new(name.clone(), dimension, model.with_label(name), classes).expect("product of valid manifolds")
}

fn add(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out: std::collections::BTreeMap<usize, Rational> = a.iter().cloned().collect();
    for (u, c) in b {
        let e = out.entry(*u).or_insert_with(|| Rational::from_integer(0.into()));
        *e += c;
    }
    out.into_iter().filter(|(_, c)| *c != Rational::from_integer(0.into())).collect()
}

/// The acyclic algebra `{1, z, w}` with `dz = w`, `|z| = 3`.
pub fn acyclic_pair() -> FiniteCdga {
    let mut b = FiniteCdga::builder("pair");
    b.element("z", 3).expect("fresh");
    b.element("w", 4).expect("fresh");
    b.differential_expr("z", "w").expect("linear");
    b.build().expect("valid")
}

/// `M` with its model tensored by [`acyclic_pair`]: same cohomology, but a
/// non-minimal model with nonzero differential.
pub fn acyclic_extension(m: &ManifoldModel) -> ManifoldModel {
    let pair = acyclic_pair();
    let nb = pair.dim();
    let model = m.model().tensor(&pair);
    let name = format!("{}+pair", m.name());
    let classes = m.pontryagin().iter().map(|(i, v)| (*i, v.iter().map(|(u, c)| (u * nb, c.clone())).collect())).collect();
    ManifoldModel::new(name.clone(), m.dimension(), model.with_label(name), classes).expect("valid")
}

/// A product of spheres and complex projective spaces of total dimension
/// `m >= 2` (a single factor only for `m < 4`), sometimes with an acyclic pair attached; Pontryagin classes
/// are zero.
pub fn random_base(m: u32, rng: &mut impl Rng) -> ManifoldModel {
    assert!(m >= 2);
    let mut parts = Vec::new();
    let mut left = m;
    while left > 0 {
        // at least two factors whenever m >= 4
        let p = if left >= 4 { rng.gen_range(2..=left - 2) } else { left };
        let factor = if p % 2 == 0 && p >= 4 && rng.gen_bool(0.5) { complex_projective(p / 2) } else { sphere(p) };
        parts.push(factor.without_pontryagin());
        left -= p;
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        out = product(&out, p);
    }
    if rng.gen_bool(0.5) {
        out = acyclic_extension(&out);
    }
    out
}

/// The same manifold with random closed Pontryagin cocycles: random
/// combinations of closed basis elements plus random exact terms.
pub fn with_random_pontryagin(m: &ManifoldModel, rng: &mut impl Rng) -> ManifoldModel {
    let a = m.model();
    let mut classes = Vec::new();
    for i in 1..=m.dimension() / 4 {
        let mut v = SparseVec::new();
        for &u in a.basis_in_degree(4 * i) {
            if a.d(u).is_empty() {
                v = add(&v, &vec![(u, Rational::from_integer(rng.gen_range(-3i64..=3).into()))]);
            }
        }
        for &w in a.basis_in_degree(4 * i - 1) {
            let c = Rational::from_integer(rng.gen_range(-2i64..=2).into());
            let dw: SparseVec = a.d(w).iter().map(|(u, x)| (*u, x * &c)).collect();
            v = add(&v, &dw);
        }
        classes.push((i, v));
    }
    ManifoldModel::new(format!("{} (random p)", m.name()), m.dimension(), a.clone(), classes).expect("closed by construction")
}

/// Bases for the sweeps: for each `m` in `2..=7`, the sphere and one
/// random base, plus `CP^2` and `CP^3`; all with zero Pontryagin classes.
pub fn sweep_bases() -> Vec<ManifoldModel> {
    let mut rng = rng();
    let mut out = Vec::new();
    for m in 2..=7 {
        out.push(sphere(m));
        out.push(random_base(m, &mut rng));
        if m == 4 || m == 6 {
            out.push(complex_projective(m / 2).without_pontryagin());
        }
    }
    out
}

/// The sweep bases with random closed Pontryagin classes (only those of
/// dimension at least 4 can carry any).
pub fn sweep_with_pontryagin() -> Vec<ManifoldModel> {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    sweep_bases().iter().filter(|m| m.dimension() >= 4).map(|m| with_random_pontryagin(m, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_spaces() {
        let cp2 = complex_projective(2);
        assert_eq!(cp2.model().format_vec(&cp2.pontryagin_class(1)), "3*a2");
        let cp3 = complex_projective(3);
        assert_eq!(cp3.model().format_vec(&cp3.pontryagin_class(1)), "4*a2");
        assert_eq!(cp3.dimension(), 6);
    }

    #[test]
    fn products_multiply_total_classes() {
        let p = product(&complex_projective(2), &complex_projective(2));
        assert_eq!(p.dimension(), 8);
        assert!(!p.class_vanishes(1));
        assert!(!p.class_vanishes(2));
        assert_eq!(p.model().format_vec(&p.pontryagin_class(2)), "9*a2_a2");
    }

    #[test]
    fn sweep_is_deterministic_and_valid() {
        let a = sweep_bases();
        assert_eq!(a, sweep_bases());
        assert_eq!(a.len(), 14);
        for m in &a {
            assert!(m.model().is_simply_connected());
            assert!(m.pontryagin().is_empty());
        }
        for m in sweep_with_pontryagin() {
            for (_, v) in m.pontryagin() {
                assert!(m.model().is_closed(v));
            }
        }
        let extended = acyclic_extension(&sphere(3));
        assert_eq!(extended.model().betti(), sphere(3).model().betti().into_iter().chain([0; 4]).collect::<Vec<_>>());
    }
}
