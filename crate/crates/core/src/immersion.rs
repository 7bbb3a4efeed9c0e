//! Components of `Imm(M, R^{m+k})` through the section space of the
//! framed bundle: a product of Eilenberg-MacLane factors, one per odd
//! generator of the Stiefel fiber, and for `k` even a factor of maps into
//! `S^k`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bundle::{pontryagin_hypothesis, stiefel_generators, ManifoldModel};
use crate::cdga::FreeCdga;
use crate::cohomology::cohomology;
use crate::error::AlgebraError;
use crate::mapping::{em_component_rank, em_mapping_space, map_into_sphere, EmFactor, SphereFactor, SphereStatus};
use crate::series::{em_series, expand, Growth, PoincareSeries, RationalSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Connected,
    /// Components are indexed by homotopy classes of bundle data.
    ComponentsIndexed,
}

/// `Imm(M^m, R^{m+k})` is connected when `k >= m + 1`.
pub fn connectivity_verdict(m: u32, k: u32) -> Connectivity {
    if k > m {
        Connectivity::Connected
    } else {
        Connectivity::ComponentsIndexed
    }
}

/// What was checked before describing the components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypotheses {
    pub simply_connected: bool,
    /// `(i, [p_i(τ_M)] = 0)` for each constrained index.
    pub pontryagin: Vec<(u32, bool)>,
}

impl Hypotheses {
    pub fn hold(&self) -> bool {
        self.simply_connected && self.pontryagin.iter().all(|(_, z)| *z)
    }
}

/// An odd fiber generator and the factors it contributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberContribution {
    pub generator: String,
    pub degree: u32,
    /// `dim H^degree(M)`; the components of this factor form that vector space.
    pub component_rank: usize,
    pub factors: Vec<EmFactor>,
}

/// Whether [`ImmersionDescription::series`] covers every factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesScope {
    Total,
    /// The sphere factor is symbolic and left out.
    EmPartOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionDescription {
    pub manifold: String,
    pub m: u32,
    pub k: u32,
    pub hypotheses: Hypotheses,
    pub connectivity: Connectivity,
    pub contributions: Vec<FiberContribution>,
    pub sphere_factor: Option<SphereFactor>,
    /// Model of the null component of `Map(M, S^k)` when resolved.
    pub sphere_model: Option<FreeCdga>,
    /// Its cohomology series in closed form.
    pub sphere_series: Option<RationalSeries>,
    pub series: PoincareSeries,
    pub series_scope: SeriesScope,
    pub growth: Growth,
}

impl ImmersionDescription {
    /// Every EM factor, in fiber-generator order.
    pub fn em_factors(&self) -> Vec<EmFactor> {
        self.contributions.iter().flat_map(|c| c.factors.iter().copied()).collect()
    }

    /// The total series up to `horizon` from series arithmetic alone (the
    /// sphere factor is expanded from its closed form). `None` when the
    /// sphere factor is symbolic.
    pub fn series_to(&self, horizon: u32) -> Option<PoincareSeries> {
        if self.series_scope == SeriesScope::EmPartOnly {
            return None;
        }
        let mut out = PoincareSeries::one(horizon);
        for f in self.em_factors() {
            out = out.product(&em_series(f.degree, f.coefficient_dim, horizon));
        }
        if let Some(r) = &self.sphere_series {
            let coeffs = expand(r, horizon).into_iter().map(|c| c.to_biguint()).collect::<Option<Vec<_>>>()?;
            out = out.product(&PoincareSeries::new(horizon, coeffs));
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImmersionOutcome {
    Described(ImmersionDescription),
    HypothesisFailed(Hypotheses),
}

impl ImmersionOutcome {
    pub fn hypotheses(&self) -> &Hypotheses {
        match self {
            ImmersionOutcome::Described(d) => &d.hypotheses,
            ImmersionOutcome::HypothesisFailed(h) => h,
        }
    }

    pub fn description(&self) -> Option<&ImmersionDescription> {
        match self {
            ImmersionOutcome::Described(d) => Some(d),
            ImmersionOutcome::HypothesisFailed(_) => None,
        }
    }
}

/// Numerator coefficients that must vanish below the horizon.
const SPHERE_TAIL: u32 = 20;

/// Cohomology series of a resolved sphere factor as a rational function,
/// recovered from a truncation against the denominator given by its even
/// generators.
fn sphere_rational_form(model: &FreeCdga) -> Result<RationalSeries, AlgebraError> {
    let gens = model.generators().generators();
    let even: Vec<u32> = gens.iter().filter(|g| g.degree % 2 == 0).map(|g| g.degree).collect();
    let total: u32 = gens.iter().map(|g| g.degree).sum();
    let horizon = total + SPHERE_TAIL;
    let series = PoincareSeries::from_betti(&cohomology(model.as_cdga(), horizon));
    RationalSeries::reconstruct(&series, &even, SPHERE_TAIL as usize)
        .ok_or_else(|| AlgebraError::GrowthUndetermined(format!("no rational form for {} up to degree {horizon}", model.label())))
}

/// Describes the components of `Imm(M, R^{m+k})` up to degree `cutoff`.
///
/// Fails outright only on invalid parameters; a violated hypothesis is
/// reported as [`ImmersionOutcome::HypothesisFailed`].
pub fn immersion_components(manifold: &ManifoldModel, k: u32, cutoff: u32) -> Result<ImmersionOutcome, AlgebraError> {
    let m = manifold.dimension();
    let gens = stiefel_generators(m, k)?;
    let hypotheses = Hypotheses {
        simply_connected: manifold.model().is_simply_connected(),
        pontryagin: pontryagin_hypothesis(manifold, k),
    };
    if !hypotheses.hold() {
        return Ok(ImmersionOutcome::HypothesisFailed(hypotheses));
    }
    let (s, k_even) = (k / 2, k % 2 == 0);
    let paired = [format!("x{s}"), format!("e{k}")];
    let top = gens.iter().map(|g| g.degree).max().unwrap_or(0);
    let betti = manifold.betti(top.max(k));

    let mut contributions = Vec::new();
    let mut series = PoincareSeries::one(cutoff);
    let mut poles = 0usize;
    for g in &gens {
        if g.degree % 2 == 0 || (k_even && paired.contains(&g.name)) {
            continue;
        }
        let factors = em_mapping_space(&betti, g.degree)?;
        for f in &factors {
            series = series.product(&em_series(f.degree, f.coefficient_dim, cutoff));
            if f.degree % 2 == 0 {
                poles += f.coefficient_dim;
            }
        }
        contributions.push(FiberContribution {
            generator: g.name.clone(),
            degree: g.degree,
            component_rank: em_component_rank(&betti, g.degree)?,
            factors,
        });
    }

    let (mut sphere_factor, mut sphere_model, mut sphere_series) = (None, None, None);
    let (mut scope, mut growth) = (SeriesScope::Total, None);
    if k_even {
        let d = map_into_sphere(manifold.model(), k)?;
        let sf = d.sphere_factor.expect("even k has a sphere factor");
        if sf.status == SphereStatus::ResolvedNull {
            let (model, _) = d.model.expect("resolved factor carries a model").cancel_linear_pairs()?;
            series = series.product(&PoincareSeries::from_betti(&cohomology(model.as_cdga(), cutoff)));
            let form = sphere_rational_form(&model)?;
            poles += form.pole_order();
            sphere_series = Some(form);
            sphere_model = Some(model);
        } else {
            scope = SeriesScope::EmPartOnly;
            growth = Some(Growth::Symbolic);
        }
        sphere_factor = Some(sf);
    }

    Ok(ImmersionOutcome::Described(ImmersionDescription {
        manifold: manifold.name().into(),
        m,
        k,
        hypotheses,
        connectivity: connectivity_verdict(m, k),
        contributions,
        sphere_factor,
        sphere_model,
        sphere_series,
        series,
        series_scope: scope,
        growth: growth.unwrap_or(Growth::from_pole_order(poles)),
    }))
}

/// Growth of the Betti numbers of a component; undefined when the sphere
/// factor is symbolic.
pub fn growth_degree(description: &ImmersionDescription) -> Result<Growth, AlgebraError> {
    match description.growth {
        Growth::Symbolic => Err(AlgebraError::GrowthUndetermined(format!(
            "Map({}, S^{}) is symbolic",
            description.manifold, description.k
        ))),
        g => Ok(g),
    }
}
