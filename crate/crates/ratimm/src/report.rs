//! Machine-readable reports and their plain-text rendering.
//!
//! JSON field order is the struct field order below and never changes;
//! reports contain no timestamps, so equal inputs give equal bytes.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use ratimm_core::bundle::{pontryagin_hypothesis, ManifoldModel, Triviality, TrivialityReport};
use ratimm_core::immersion::{Connectivity, Hypotheses, ImmersionOutcome, SeriesScope};
use ratimm_core::mapping::{factor_name, MapDescription, SphereStatus};
use ratimm_core::series::{Growth, PoincareSeries};
use ratimm_core::{BettiTable, Cdga};
use serde::{Deserialize, Serialize};

/// Process exit codes.
pub mod exit {
    pub const RESOLVED: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const INPUT_ERROR: i32 = 2;
    pub const HYPOTHESIS_FAILED: i32 = 3;
    pub const SYMBOLIC: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Passed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PontryaginCheck {
    pub index: u32,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesesReport {
    pub status: Status,
    pub simply_connected: bool,
    pub pontryagin: Vec<PontryaginCheck>,
}

impl From<&Hypotheses> for HypothesesReport {
    fn from(h: &Hypotheses) -> Self {
        Self {
            status: if h.hold() { Status::Passed } else { Status::Failed },
            simply_connected: h.simply_connected,
            pontryagin: h.pontryagin.iter().map(|&(index, vanishes)| PontryaginCheck { index, vanishes }).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectivityReport {
    Connected,
    ComponentsIndexed,
}

impl From<Connectivity> for ConnectivityReport {
    fn from(c: Connectivity) -> Self {
        match c {
            Connectivity::Connected => Self::Connected,
            Connectivity::ComponentsIndexed => Self::ComponentsIndexed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    Em,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorStatus {
    Resolved,
    ResolvedNull,
    Symbolic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub kind: FactorKind,
    pub degree: u32,
    pub multiplicity: usize,
    pub status: FactorStatus,
    /// Fiber generator the factor comes from (`""` for a sphere factor).
    pub source: String,
}

impl FactorReport {
    pub fn name(&self) -> String {
        match self.kind {
            FactorKind::Em => factor_name(&ratimm_core::mapping::EmFactor { coefficient_dim: self.multiplicity, degree: self.degree }),
            FactorKind::Sphere => match self.status {
                FactorStatus::Symbolic => format!("Map(M,S^{},f)", self.degree),
                _ => format!("Map(M,S^{},0)", self.degree),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub generator: String,
    pub degree: u32,
    /// `dim H^degree(M)`.
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScopeReport {
    Total,
    EmPartOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GrowthReport {
    Finite,
    Polynomial { degree: u32 },
    Symbolic,
}

impl From<Growth> for GrowthReport {
    fn from(g: Growth) -> Self {
        match g {
            Growth::Finite => Self::Finite,
            Growth::Polynomial(degree) => Self::Polynomial { degree },
            Growth::Symbolic => Self::Symbolic,
        }
    }
}

impl std::fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GrowthReport::Finite => f.write_str("finite"),
            GrowthReport::Polynomial { degree } => write!(f, "polynomial({degree})"),
            GrowthReport::Symbolic => f.write_str("symbolic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("Betti number b_{degree} does not fit in 64 bits")]
pub struct Overflow {
    pub degree: usize,
}

pub fn series_to_u64(s: &PoincareSeries) -> Result<Vec<u64>, Overflow> {
    s.coeffs().iter().enumerate().map(|(degree, c)| c.to_u64().ok_or(Overflow { degree })).collect()
}

/// Components of `Imm(M, R^{m+k})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImmersionReport {
    pub manifold: String,
    pub m: u32,
    pub k: u32,
    pub max_degree: u32,
    pub hypotheses: HypothesesReport,
    pub connectivity: ConnectivityReport,
    pub components: Vec<ComponentReport>,
    pub factors: Vec<FactorReport>,
    /// `None` when the hypotheses fail.
    pub series: Option<Vec<u64>>,
    pub series_scope: Option<ScopeReport>,
    pub growth: Option<GrowthReport>,
}

impl ImmersionReport {
    pub fn new(manifold: &ManifoldModel, k: u32, max_degree: u32, outcome: &ImmersionOutcome) -> Result<Self, Overflow> {
        let m = manifold.dimension();
        let mut report = Self {
            manifold: manifold.name().to_string(),
            m,
            k,
            max_degree,
            hypotheses: outcome.hypotheses().into(),
            connectivity: ratimm_core::immersion::connectivity_verdict(m, k).into(),
            components: Vec::new(),
            factors: Vec::new(),
            series: None,
            series_scope: None,
            growth: None,
        };
        let Some(d) = outcome.description() else {
            return Ok(report);
        };
        for c in &d.contributions {
            report.components.push(ComponentReport { generator: c.generator.clone(), degree: c.degree, rank: c.component_rank });
            for f in &c.factors {
                report.factors.push(FactorReport {
                    kind: FactorKind::Em,
                    degree: f.degree,
                    multiplicity: f.coefficient_dim,
                    status: FactorStatus::Resolved,
                    source: c.generator.clone(),
                });
            }
        }
        if let Some(sf) = &d.sphere_factor {
            report.factors.push(FactorReport {
                kind: FactorKind::Sphere,
                degree: sf.k,
                multiplicity: 1,
                status: match sf.status {
                    SphereStatus::ResolvedNull => FactorStatus::ResolvedNull,
                    SphereStatus::Symbolic => FactorStatus::Symbolic,
                },
                source: String::new(),
            });
        }
        report.series = Some(series_to_u64(&d.series)?);
        report.series_scope = Some(match d.series_scope {
            SeriesScope::Total => ScopeReport::Total,
            SeriesScope::EmPartOnly => ScopeReport::EmPartOnly,
        });
        report.growth = Some(d.growth.into());
        Ok(report)
    }

    pub fn exit_code(&self) -> i32 {
        if self.hypotheses.status == Status::Failed {
            exit::HYPOTHESIS_FAILED
        } else if self.factors.iter().any(|f| f.status == FactorStatus::Symbolic) {
            exit::SYMBOLIC
        } else {
            exit::RESOLVED
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Imm({}, R^{})  m = {}  k = {}  max degree {}", self.manifold, self.m + self.k, self.m, self.k, self.max_degree);
        let h = &self.hypotheses;
        let checks: Vec<String> =
            h.pontryagin.iter().map(|p| format!("p{}{}", p.index, if p.vanishes { " = 0" } else { " != 0" })).collect();
        let _ = writeln!(
            out,
            "hypotheses    {}  (simply connected: {}; {})",
            if h.status == Status::Passed { "passed" } else { "failed" },
            if h.simply_connected { "yes" } else { "no" },
            if checks.is_empty() { "no Pontryagin condition".to_string() } else { checks.join(", ") }
        );
        let _ = writeln!(
            out,
            "connectivity  {}",
            match self.connectivity {
                ConnectivityReport::Connected => "connected",
                ConnectivityReport::ComponentsIndexed => "components indexed",
            }
        );
        if !self.components.is_empty() {
            let _ = writeln!(out, "components");
            for c in &self.components {
                let _ = writeln!(out, "  {:<8} degree {:<3} H^{}(M) rank {}", c.generator, c.degree, c.degree, c.rank);
            }
        }
        if !self.factors.is_empty() {
            let _ = writeln!(out, "factors");
            for f in &self.factors {
                let status = match f.status {
                    FactorStatus::Resolved => "resolved",
                    FactorStatus::ResolvedNull => "resolved (null component)",
                    FactorStatus::Symbolic => "symbolic",
                };
                let from = if f.source.is_empty() { String::new() } else { format!("  from {}", f.source) };
                let _ = writeln!(out, "  {:<16} {status}{from}", f.name());
            }
        }
        if let Some(series) = &self.series {
            let scope = match self.series_scope {
                Some(ScopeReport::EmPartOnly) => "  (EM part only)",
                _ => "",
            };
            let _ = writeln!(out, "series        {}{scope}", join(series));
        }
        if let Some(g) = &self.growth {
            let _ = writeln!(out, "growth        {g}");
        }
        out
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedDegree {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub name: String,
    pub degree: u32,
    pub differential: String,
}

/// A CDGA `A ⊗ ΛV` with its Betti numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub label: String,
    /// Basis of `A` other than `1`.
    pub base: Vec<NamedDegree>,
    pub generators: Vec<GeneratorReport>,
    pub max_degree: u32,
    pub betti: Vec<usize>,
}

impl ModelReport {
    pub fn new(cdga: &Cdga, betti: &BettiTable) -> Self {
        Self {
            label: cdga.label().to_string(),
            base: cdga.base().basis().skip(1).map(|(name, degree)| NamedDegree { name: name.to_string(), degree }).collect(),
            generators: cdga
                .generators()
                .generators()
                .iter()
                .enumerate()
                .map(|(i, g)| GeneratorReport { name: g.name.clone(), degree: g.degree, differential: cdga.format(cdga.d_generator(i)) })
                .collect(),
            max_degree: betti.cutoff,
            betti: betti.dims.clone(),
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.label);
        if !self.base.is_empty() {
            let names: Vec<String> = self.base.iter().map(|b| format!("{} ({})", b.name, b.degree)).collect();
            let _ = writeln!(out, "base basis    1, {}", names.join(", "));
        }
        if self.generators.is_empty() {
            let _ = writeln!(out, "generators    none");
        } else {
            let _ = writeln!(out, "generators");
            let width = self.generators.iter().map(|g| g.name.len()).max().unwrap_or(0);
            for g in &self.generators {
                let _ = writeln!(out, "  {:<width$}  degree {:<3} d = {}", g.name, g.degree, g.differential);
            }
        }
        let _ = writeln!(out, "betti (0..={})", self.max_degree);
        let _ = writeln!(out, "  {}", join(&self.betti));
        let support: Vec<usize> = self.betti.iter().enumerate().filter(|(_, &b)| b > 0).map(|(n, _)| n).collect();
        let _ = writeln!(out, "support       {{{}}}", support.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrivialityVerdict {
    Trivial,
    NotEstablished,
}

/// The framed-bundle model of a manifold and the triviality check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramedReport {
    pub manifold: String,
    pub m: u32,
    pub k: u32,
    pub model: ModelReport,
    pub hypothesis: Vec<PontryaginCheck>,
    pub triviality: TrivialityVerdict,
    /// Betti numbers of `M` convolved with those of the fiber, when the
    /// hypothesis holds.
    pub kunneth: Option<Vec<usize>>,
    /// Result of comparing the reduced model with the unreduced one, when
    /// requested.
    pub reduction_quasi_iso: Option<bool>,
}

impl FramedReport {
    pub fn new(manifold: &ManifoldModel, k: u32, model: ModelReport, t: &TrivialityReport, quasi_iso: Option<bool>) -> Self {
        Self {
            manifold: manifold.name().to_string(),
            m: manifold.dimension(),
            k,
            model,
            hypothesis: pontryagin_hypothesis(manifold, k).into_iter().map(|(index, vanishes)| PontryaginCheck { index, vanishes }).collect(),
            triviality: match t.verdict {
                Triviality::Trivial => TrivialityVerdict::Trivial,
                Triviality::NotEstablished => TrivialityVerdict::NotEstablished,
            },
            kunneth: t.certificate.as_ref().map(|c| c.base.convolve(&c.fiber).dims),
            reduction_quasi_iso: quasi_iso,
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = self.model.to_table();
        let checks: Vec<String> =
            self.hypothesis.iter().map(|p| format!("p{}{}", p.index, if p.vanishes { " = 0" } else { " != 0" })).collect();
        let _ = writeln!(out, "hypothesis    {}", if checks.is_empty() { "none".to_string() } else { checks.join(", ") });
        let _ = writeln!(
            out,
            "triviality    {}",
            match self.triviality {
                TrivialityVerdict::Trivial => "rationally trivial",
                TrivialityVerdict::NotEstablished => "not established",
            }
        );
        if let Some(k) = &self.kunneth {
            let _ = writeln!(out, "base x fiber  {}", join(k));
        }
        if let Some(q) = self.reduction_quasi_iso {
            let _ = writeln!(out, "reduction     {}", if q { "quasi-isomorphism" } else { "NOT a quasi-isomorphism" });
        }
        out
    }
}

/// `Map(M, S^k)` (null component for even `k`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSphereReport {
    pub manifold: String,
    pub k: u32,
    pub max_degree: u32,
    pub factors: Vec<FactorReport>,
    pub model: Option<ModelReport>,
}

impl MapSphereReport {
    pub fn new(manifold: &ManifoldModel, k: u32, max_degree: u32, d: &MapDescription, betti: Option<&BettiTable>) -> Self {
        let mut factors: Vec<FactorReport> = d
            .em_factors
            .iter()
            .map(|f| FactorReport {
                kind: FactorKind::Em,
                degree: f.degree,
                multiplicity: f.coefficient_dim,
                status: FactorStatus::Resolved,
                source: String::new(),
            })
            .collect();
        if let Some(sf) = &d.sphere_factor {
            factors.push(FactorReport {
                kind: FactorKind::Sphere,
                degree: k,
                multiplicity: 1,
                status: if sf.status == SphereStatus::Symbolic { FactorStatus::Symbolic } else { FactorStatus::ResolvedNull },
                source: String::new(),
            });
        }
        let model = d.model.as_ref().zip(betti).map(|(m, b)| ModelReport::new(m.as_cdga(), b));
        Self { manifold: manifold.name().to_string(), k, max_degree, factors, model }
    }

    pub fn exit_code(&self) -> i32 {
        if self.factors.iter().any(|f| f.status == FactorStatus::Symbolic) {
            exit::SYMBOLIC
        } else {
            exit::RESOLVED
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Map({}, S^{})  max degree {}", self.manifold, self.k, self.max_degree);
        for f in &self.factors {
            let status = match f.status {
                FactorStatus::Symbolic => "symbolic",
                FactorStatus::ResolvedNull => "null component",
                FactorStatus::Resolved => "resolved",
            };
            let _ = writeln!(out, "  {:<16} {status}", f.name());
        }
        if let Some(m) = &self.model {
            out.push_str(&m.to_table());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

/// Outcome of the invariant suites. Timings are left out so the JSON is
/// canonical; the table form shows them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckReport>,
    pub failed: usize,
}

impl VerifyReport {
    pub fn new(checks: &[crate::verify::Check]) -> Self {
        Self {
            checks: checks
                .iter()
                .map(|c| CheckReport {
                    suite: c.suite.to_string(),
                    name: c.name.to_string(),
                    status: if c.passed { Status::Passed } else { Status::Failed },
                    detail: c.detail.clone(),
                })
                .collect(),
            failed: checks.iter().filter(|c| !c.passed).count(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use ratimm_core::immersion::immersion_components;
    use ratimm_core::FiniteCdga;

    #[test]
    fn json_field_order_and_round_trip() {
        let s2 = ManifoldModel::sphere(2).unwrap();
        let outcome = immersion_components(&s2, 3, 15).unwrap();
        let r = ImmersionReport::new(&s2, 3, 15, &outcome).unwrap();
        let json = to_json(&r);
        let keys = ["\"manifold\"", "\"m\"", "\"k\"", "\"max_degree\"", "\"hypotheses\"", "\"connectivity\"", "\"components\"", "\"factors\"", "\"series\"", "\"series_scope\"", "\"growth\""];
        let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
        let back: ImmersionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.exit_code(), exit::RESOLVED);
        assert_eq!(r.growth, Some(GrowthReport::Finite));
        assert!(json.contains("\"kind\": \"em\""));
    }

    #[test]
    fn exit_codes() {
        let s2 = ManifoldModel::sphere(2).unwrap();
        let r = ImmersionReport::new(&s2, 2, 10, &immersion_components(&s2, 2, 10).unwrap()).unwrap();
        assert_eq!(r.exit_code(), exit::SYMBOLIC);
        assert_eq!(r.series_scope, Some(ScopeReport::EmPartOnly));

        let a = FiniteCdga::truncated_polynomial("a", 2, 2).unwrap();
        let cp2 = ManifoldModel::from_exprs("CP^2", 4, a, &[(1, "3*a^2")]).unwrap();
        let r = ImmersionReport::new(&cp2, 2, 10, &immersion_components(&cp2, 2, 10).unwrap()).unwrap();
        assert_eq!(r.exit_code(), exit::HYPOTHESIS_FAILED);
        assert_eq!(r.series, None);
        assert!(r.to_table().contains("p1 != 0"));
    }
}
