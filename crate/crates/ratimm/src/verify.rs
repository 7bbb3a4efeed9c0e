//! Verification suites behind `ratimm verify`.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use ratimm_core::bundle::{
    framed_bundle_model, is_rationally_trivial, stiefel_model, unreduced_framed_model, ManifoldModel, Triviality,
};
use ratimm_core::gca::Generator;
use ratimm_core::immersion::{growth_degree, immersion_components, ImmersionDescription};
use ratimm_core::mapping::{em_mapping_space, sphere_map_null_model};
use ratimm_core::series::{check_growth_bound, em_series, PoincareSeries};
use ratimm_core::tensor::tensor;
use ratimm_core::{cohomology, cohomology_dense, is_quasi_iso, Cdga, Element, FiniteCdga, FreeCdga, GeneratorSet, Rational};

use crate::parallel::cohomology_parallel;
use crate::samples;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Core,
    Models,
    Immersion,
    All,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(suite: &'static str, name: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    let t = Instant::now();
    let r = f();
    let elapsed = t.elapsed();
    match r {
        Ok(detail) => Check { suite, name, passed: true, detail, elapsed },
        Err(detail) => Check { suite, name, passed: false, detail, elapsed },
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Core => core_suite(),
        Suite::Models => models_suite(),
        Suite::Immersion => immersion_suite(),
        Suite::All => {
            let mut out = core_suite();
            out.extend(models_suite());
            out.extend(immersion_suite());
            out
        }
    }
}

/// One line per check. Timings are informational only.
pub fn render(checks: &[Check]) -> String {
    let mut out = String::new();
    let width = checks.iter().map(|c| c.suite.len() + c.name.len() + 1).max().unwrap_or(0);
    for c in checks {
        let label = format!("{}/{}", c.suite, c.name);
        let _ = writeln!(
            out,
            "{}  {label:<width$}  {:>9.3} s  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.elapsed.as_secs_f64(),
            c.detail
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {} failed (timings are not part of the canonical output)", checks.len(), failed);
    out
}

fn random_context(rng: &mut StdRng) -> std::sync::Arc<GeneratorSet> {
    let n = rng.gen_range(1..=4);
    GeneratorSet::new((0..n).map(|i| Generator::new(format!("g{i}"), rng.gen_range(1..=5))).collect()).expect("fresh names")
}

fn random_element(ctx: &std::sync::Arc<GeneratorSet>, n: u32, rng: &mut StdRng) -> Element {
    let terms: Vec<_> = ctx
        .basis_of_degree(n)
        .into_iter()
        .map(|m| (m, Rational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)))))
        .collect();
    Element::from_terms(ctx, terms)
}

/// Small algebras for the product checks.
pub fn algebra_pool() -> Vec<Cdga> {
    vec![
        FiniteCdga::sphere(2, "a").expect("valid").into(),
        FiniteCdga::sphere(3, "b").expect("valid").into(),
        FiniteCdga::truncated_polynomial("c", 2, 2).expect("valid").into(),
        FreeCdga::from_exprs("S^2", &[("e", 2), ("x", 3)], &[("x", "e^2")]).expect("valid").into(),
        FreeCdga::from_exprs("S^5", &[("y", 5)], &[]).expect("valid").into(),
        samples::acyclic_pair().into(),
        stiefel_model(2, 2).expect("valid").into(),
    ]
}

fn core_suite() -> Vec<Check> {
    const S: &str = "core";
    let mut rng = samples::rng();
    let mut out = Vec::new();
    out.push(run(S, "koszul-commutativity", || {
        for _ in 0..200 {
            let ctx = random_context(&mut rng);
            let (p, q) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
            let (a, b) = (random_element(&ctx, p, &mut rng), random_element(&ctx, q, &mut rng));
            let ab = a.mul(&b).map_err(|e| e.to_string())?;
            let ba = b.mul(&a).map_err(|e| e.to_string())?;
            let ba = if p * q % 2 == 1 { ba.neg() } else { ba };
            ensure(ab == ba, || format!("ab != ±ba for a = {a}, b = {b}"))?;
        }
        Ok("200 random pairs".into())
    }));
    out.push(run(S, "associativity", || {
        for _ in 0..200 {
            let ctx = random_context(&mut rng);
            let [a, b, c] = [0; 3].map(|_| {
                let n = rng.gen_range(0..=5);
                random_element(&ctx, n, &mut rng)
            });
            let l = a.mul(&b).and_then(|ab| ab.mul(&c)).map_err(|e| e.to_string())?;
            let r = b.mul(&c).and_then(|bc| a.mul(&bc)).map_err(|e| e.to_string())?;
            ensure(l == r, || format!("(ab)c != a(bc) for {a}, {b}, {c}"))?;
        }
        Ok("200 random triples".into())
    }));
    out.push(run(S, "basis-counts", || {
        for _ in 0..100 {
            let ctx = random_context(&mut rng);
            let top = 16;
            let series = ctx.generators().iter().fold(PoincareSeries::one(top), |acc, g| acc.product(&em_series(g.degree, 1, top)));
            for n in 0..=top {
                let count = ctx.basis_of_degree(n).len();
                ensure(series.get(n) == count.into(), || format!("degree {n}: {count} monomials"))?;
            }
        }
        Ok("100 generator sets to degree 16".into())
    }));
    out.push(run(S, "kunneth", || {
        let pool = algebra_pool();
        for a in &pool {
            for b in &pool {
                let t = tensor(a, b).map_err(|e| e.to_string())?;
                let expected = cohomology(a, 12).convolve(&cohomology(b, 12));
                ensure(cohomology(&t.cdga, 12) == expected, || format!("{} ⊗ {}", a.label(), b.label()))?;
            }
        }
        Ok(format!("{} pairs to degree 12", pool.len() * pool.len()))
    }));
    out.push(run(S, "sparse-vs-dense", || {
        let pool = algebra_pool();
        for a in &pool {
            for b in &pool {
                let t = tensor(a, b).map_err(|e| e.to_string())?;
                ensure(cohomology(&t.cdga, 10) == cohomology_dense(&t.cdga, 10), || t.cdga.label().to_string())?;
            }
        }
        Ok("all pool products to degree 10".into())
    }));
    out.push(run(S, "parallel-ranks", || {
        let threads = crate::parallel::available_threads().max(2);
        for (m, k) in [(3, 2), (4, 4), (5, 3), (6, 6)] {
            let v = stiefel_model(m, k).map_err(|e| e.to_string())?;
            ensure(cohomology_parallel(v.as_cdga(), 20, threads) == cohomology(v.as_cdga(), 20), || format!("V_{m}(R^{})", m + k))?;
        }
        Ok(format!("{threads} threads"))
    }));
    out
}

fn sweep_all() -> Vec<ManifoldModel> {
    let mut all = samples::sweep_bases();
    all.extend(samples::sweep_with_pontryagin());
    all
}

fn models_suite() -> Vec<Check> {
    const S: &str = "models";
    let mut out = Vec::new();
    out.push(run(S, "d-squared", || {
        let mut n = 0;
        for m in 2..=7 {
            for k in 2..=7 {
                let v = stiefel_model(m, k).map_err(|e| e.to_string())?;
                ensure(v.check_d_squared(24).is_empty(), || format!("stiefel m={m} k={k}"))?;
                n += 1;
            }
        }
        for manifold in sweep_all() {
            for k in 2..=7 {
                let f = framed_bundle_model(&manifold, k).map_err(|e| e.to_string())?;
                ensure(f.check_d_squared(24).is_empty(), || format!("framed {} k={k}", manifold.name()))?;
                n += 1;
            }
        }
        Ok(format!("{n} models to degree 24"))
    }));
    out.push(run(S, "stiefel-cohomology", || {
        for (m, k, support) in [(2, 2, vec![0, 2, 3, 5]), (2, 3, vec![0, 7]), (3, 2, vec![0, 2, 7, 9])] {
            let v = stiefel_model(m, k).map_err(|e| e.to_string())?;
            let sparse = cohomology(v.as_cdga(), 20);
            ensure(sparse == cohomology_dense(v.as_cdga(), 20), || format!("{}: sparse and dense differ", v.label()))?;
            ensure(sparse.support() == support, || format!("{}: support {:?}", v.label(), sparse.support()))?;
        }
        Ok("V_2(R^4), V_2(R^5), V_3(R^5)".into())
    }));
    out.push(run(S, "reduction-quasi-iso", || {
        let mut n = 0;
        for manifold in sweep_all() {
            for k in 2..=7 {
                let (_, phi) = unreduced_framed_model(&manifold, k).map_err(|e| e.to_string())?;
                let r = is_quasi_iso(&phi, 20).map_err(|e| e.to_string())?;
                ensure(r.is_quasi_iso(), || format!("{} k={k} fails in degrees {:?}", manifold.name(), r.failing_degrees()))?;
                n += 1;
            }
        }
        Ok(format!("{n} reductions to degree 20"))
    }));
    out.push(run(S, "kunneth-triviality", || {
        let mut n = 0;
        for manifold in samples::sweep_bases() {
            for k in 2..=7 {
                let r = is_rationally_trivial(&manifold, k, 20).map_err(|e| e.to_string())?;
                ensure(r.verdict == Triviality::Trivial, || format!("{} k={k}", manifold.name()))?;
                n += 1;
            }
        }
        Ok(format!("{n} bundles with zero Pontryagin classes"))
    }));
    out.push(run(S, "nontrivial-pontryagin", || {
        let cp2 = samples::cp2("3*a^2");
        let f = framed_bundle_model(&cp2, 2).map_err(|e| e.to_string())?;
        ensure(cohomology(f.as_cdga(), 14) == cohomology_dense(f.as_cdga(), 14), || "sparse and dense differ".into())?;
        let r = is_rationally_trivial(&cp2, 2, 14).map_err(|e| e.to_string())?;
        ensure(r.verdict == Triviality::NotEstablished, || "CP^2 reported trivial".into())?;
        Ok("CP^2, p1 = 3a^2, k = 2".into())
    }));
    out
}

/// Resolved descriptions for every sweep base and `k` in `2..=7`.
pub fn resolved_sweep(cutoff: u32) -> Result<Vec<ImmersionDescription>, String> {
    let mut out = Vec::new();
    for manifold in samples::sweep_bases() {
        for k in 2..=7 {
            let outcome = immersion_components(&manifold, k, cutoff).map_err(|e| format!("{} k={k}: {e}", manifold.name()))?;
            if let Some(d) = outcome.description() {
                if growth_degree(d).is_ok() {
                    out.push(d.clone());
                }
            }
        }
    }
    Ok(out)
}

/// At least 200 and eight times the degree shift coming from the exterior
/// part of the EM factors and the numerator of the sphere factor, so the
/// partial sums are past their transient.
pub fn growth_horizon(d: &ImmersionDescription) -> u32 {
    let exterior: u32 = d.em_factors().iter().filter(|f| f.degree % 2 == 1).map(|f| f.degree * f.coefficient_dim as u32).sum();
    let numerator = d.sphere_series.as_ref().map_or(0, |r| r.numerator.len() as u32);
    200.max(8 * (exterior + numerator))
}

fn immersion_suite() -> Vec<Check> {
    const S: &str = "immersion";
    let mut out = Vec::new();
    out.push(run(S, "examples", || {
        let n = 15;
        let d = immersion_components(&samples::sphere(2), 3, n).map_err(|e| e.to_string())?;
        let d = d.description().ok_or("S^2, k=3: hypotheses failed")?;
        ensure(d.series == em_series(5, 1, n).product(&em_series(7, 1, n)), || "S^2, k=3: series".into())?;
        let d = immersion_components(&samples::sphere(2), 2, 10).map_err(|e| e.to_string())?;
        ensure(d.description().is_some_and(|d| growth_degree(d).is_err()), || "S^2, k=2 should be symbolic".into())?;
        let d = immersion_components(&samples::cp2("3*a^2"), 2, 10).map_err(|e| e.to_string())?;
        ensure(d.description().is_none(), || "CP^2, k=2 should fail the hypothesis".into())?;
        Ok("S^2 (k=2,3), CP^2 (k=2)".into())
    }));
    out.push(run(S, "series-factorization", || {
        let mut rng = StdRng::seed_from_u64(samples::SEED + 2);
        let all = resolved_sweep(20)?;
        for d in &all {
            let mut factors: Vec<PoincareSeries> = d.em_factors().iter().map(|f| em_series(f.degree, f.coefficient_dim, 20)).collect();
            if let Some(model) = &d.sphere_model {
                factors.push(PoincareSeries::from_betti(&cohomology(model.as_cdga(), 20)));
            }
            factors.shuffle(&mut rng);
            let product = factors.iter().fold(PoincareSeries::one(20), |acc, s| acc.product(s));
            ensure(product == d.series, || format!("{} k={}", d.manifold, d.k))?;
        }
        Ok(format!("{} resolved descriptions", all.len()))
    }));
    out.push(run(S, "growth-bound", || {
        let all = resolved_sweep(20)?;
        for d in &all {
            let g = growth_degree(d).map_err(|e| e.to_string())?;
            let horizon = growth_horizon(d);
            let long = d.series_to(horizon).ok_or("no closed form")?;
            ensure(long.truncate(20) == d.series, || format!("{} k={}: closed form disagrees", d.manifold, d.k))?;
            ensure(check_growth_bound(&long, g, horizon), || format!("{} k={}: {g:?}", d.manifold, d.k))?;
        }
        Ok(format!("{} descriptions to degree 200", all.len()))
    }));
    out.push(run(S, "null-models", || {
        for k in [2, 4, 6] {
            let p = sphere_map_null_model(&FiniteCdga::unit(), k).map_err(|e| e.to_string())?;
            ensure(cohomology(p.as_cdga(), 3 * k).support() == vec![0, k], || format!("point, k={k}"))?;
        }
        let s2 = sphere_map_null_model(samples::sphere(2).model(), 2).map_err(|e| e.to_string())?;
        ensure(cohomology(s2.as_cdga(), 10).dims == [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0], || "Map(S^2,S^2,0)".into())?;
        let s3 = sphere_map_null_model(samples::sphere(3).model(), 2).map_err(|e| e.to_string())?;
        ensure(cohomology(s3.as_cdga(), 10).support() == vec![0, 2], || "Map(S^3,S^2,0)".into())?;
        Ok("point, S^2, S^3".into())
    }));
    out.push(run(S, "odd-k-consistency", || {
        let mut n = 0;
        for manifold in samples::sweep_bases() {
            for k in [3, 5, 7] {
                let t = is_rationally_trivial(&manifold, k, 20).map_err(|e| e.to_string())?;
                let cert = t.certificate.ok_or_else(|| format!("{} k={k}: no certificate", manifold.name()))?;
                let top = 2 * (manifold.dimension() + k);
                let base = manifold.betti(top);
                ensure(manifold.betti(20).dims == cert.base.truncate(20).dims, || format!("{}: base table", manifold.name()))?;
                let d = immersion_components(&manifold, k, 20).map_err(|e| e.to_string())?;
                let d = d.description().ok_or("hypothesis failed with zero classes")?;
                let fiber = stiefel_model(manifold.dimension(), k).map_err(|e| e.to_string())?;
                let mut expected = Vec::new();
                for g in fiber.generators().generators() {
                    expected.extend(em_mapping_space(&base, g.degree).map_err(|e| e.to_string())?);
                }
                ensure(expected == d.em_factors(), || format!("{} k={k}", manifold.name()))?;
                n += 1;
            }
        }
        Ok(format!("{n} odd-k bundles"))
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        let checks = run_suite(Suite::All);
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{}", render(&checks));
        assert!(render(&checks).contains("PASS  models/reduction-quasi-iso"));
    }
}
