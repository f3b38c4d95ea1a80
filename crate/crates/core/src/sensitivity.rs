//! ICE baseline costs and the sensitivity sweeps over OCS cost, traffic
//! volume and ship mix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planner::{optimize, PlanSolution, Problem, SearchConfig};
use crate::ship::{is_bulk_class, ShipRegistry};
use crate::traffic::{expand_mix, generate_synthetic_traffic, ScenarioSet, SyntheticTraffic};

/// Per-class fuel and emission coefficients of the conventional fleet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IceBaselineParams {
    pub fuel_usd_per_km: BTreeMap<String, f64>,
    pub carbon_t_per_km: BTreeMap<String, f64>,
    pub carbon_tax_usd_per_t: f64,
}

impl IceBaselineParams {
    pub fn validate(&self) -> Result<()> {
        let bad = self
            .fuel_usd_per_km
            .iter()
            .chain(&self.carbon_t_per_km)
            .find(|(_, v)| !(**v >= 0.0) || !v.is_finite());
        if let Some((k, v)) = bad {
            return Err(Error::validation(format!("ICE coefficient for `{k}` must be finite and >= 0, got {v}")));
        }
        if !(self.carbon_tax_usd_per_t >= 0.0) || !self.carbon_tax_usd_per_t.is_finite() {
            return Err(Error::validation("carbon tax must be finite and >= 0"));
        }
        Ok(())
    }

    /// Cost per km of one class at the current tax.
    pub fn class_cost(&self, class_name: &str) -> Result<f64> {
        let fuel = self.fuel_usd_per_km.get(class_name);
        let carbon = self.carbon_t_per_km.get(class_name);
        match (fuel, carbon) {
            (Some(f), Some(c)) => Ok(f + self.carbon_tax_usd_per_t * c),
            _ => Err(Error::validation(format!("no ICE fuel/carbon coefficients for class `{class_name}`"))),
        }
    }

    /// Coefficients for every registry class from its propulsion energy per
    /// km (`k_adm`), a specific fuel consumption and a fuel price.
    pub fn from_registry(
        ships: &ShipRegistry,
        fuel_usd_per_t: f64,
        sfoc_g_per_kwh: f64,
        co2_t_per_t_fuel: f64,
        carbon_tax_usd_per_t: f64,
    ) -> Self {
        let mut fuel_usd_per_km = BTreeMap::new();
        let mut carbon_t_per_km = BTreeMap::new();
        for c in ships.classes() {
            let fuel_t = c.k_adm * sfoc_g_per_kwh * 1e-6;
            fuel_usd_per_km.insert(c.name.clone(), fuel_t * fuel_usd_per_t);
            carbon_t_per_km.insert(c.name.clone(), fuel_t * co2_t_per_t_fuel);
        }
        Self {
            fuel_usd_per_km,
            carbon_t_per_km,
            carbon_tax_usd_per_t,
        }
    }

    pub fn with_carbon_tax(&self, usd_per_t: f64) -> Self {
        Self {
            carbon_tax_usd_per_t: usd_per_t,
            ..self.clone()
        }
    }
}

fn check_mix(mix: &[(String, f64)]) -> Result<()> {
    let total: f64 = mix.iter().map(|(_, f)| f).sum();
    if (total - 1.0).abs() > 1e-6 || mix.iter().any(|(_, f)| !(*f >= 0.0)) {
        return Err(Error::validation(format!("mix fractions must be >= 0 and sum to 1, got {total}")));
    }
    Ok(())
}

/// Mix-weighted ICE propulsion cost, USD/km.
pub fn ice_apc(params: &IceBaselineParams, mix: &[(String, f64)]) -> Result<f64> {
    params.validate()?;
    check_mix(mix)?;
    mix.iter()
        .filter(|(_, f)| *f > 0.0)
        .map(|(name, f)| Ok(f * params.class_cost(name)?))
        .sum()
}

/// Mix-weighted carbon cost per km at the current tax.
pub fn carbon_cost_per_km(params: &IceBaselineParams, mix: &[(String, f64)]) -> Result<f64> {
    params.validate()?;
    check_mix(mix)?;
    mix.iter()
        .filter(|(_, f)| *f > 0.0)
        .map(|(name, f)| {
            let c = params.carbon_t_per_km.get(name).ok_or_else(|| {
                Error::validation(format!("no ICE carbon coefficient for class `{name}`"))
            })?;
            Ok(f * params.carbon_tax_usd_per_t * c)
        })
        .sum()
}

/// Tax (USD/t) at which the mix pays `target_usd_per_km` in carbon cost.
pub fn carbon_tax_for_cost(params: &IceBaselineParams, mix: &[(String, f64)], target_usd_per_km: f64) -> Result<f64> {
    let per_tax = carbon_cost_per_km(&params.with_carbon_tax(1.0), mix)?;
    if !(per_tax > 0.0) {
        return Err(Error::validation("mix emits no carbon"));
    }
    Ok(target_usd_per_km / per_tax)
}

/// Class fractions of scenario-weighted voyages.
pub fn traffic_mix(set: &ScenarioSet) -> Vec<(String, f64)> {
    let mut counts: BTreeMap<String, f64> = BTreeMap::new();
    for s in &set.scenarios {
        for v in &s.voyages {
            *counts.entry(v.class_name.clone()).or_insert(0.0) += s.weight;
        }
    }
    let total: f64 = counts.values().sum();
    if total <= 0.0 {
        return Vec::new();
    }
    counts.into_iter().map(|(k, c)| (k, c / total)).collect()
}

/// Share of a mix carried by container classes.
pub fn container_share(mix: &[(String, f64)]) -> f64 {
    mix.iter().filter(|(n, _)| !is_bulk_class(n)).map(|(_, f)| f).sum()
}

/// One re-optimised point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub factor: f64,
    pub plan: Option<PlanSolution>,
    /// Planner error for this point, if any.
    pub error: Option<String>,
}

impl SweepPoint {
    fn from_result(factor: f64, r: Result<PlanSolution>) -> Self {
        match r {
            Ok(p) => Self {
                factor,
                plan: Some(p),
                error: None,
            },
            Err(e) => Self {
                factor,
                plan: None,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn apc_usd_per_km(&self) -> Option<f64> {
        self.plan.as_ref().map(|p| p.breakdown.apc_usd_per_km)
    }
}

fn check_positive(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::validation(format!("no {what} given")));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::validation(format!("{what} must be positive, got {v}")));
    }
    Ok(())
}

/// Re-optimises with every OCS unit cost multiplied by each scale.
pub fn sweep_ocs_cost(problem: &Problem, scales: &[f64], search: &SearchConfig) -> Result<Vec<SweepPoint>> {
    check_positive(scales, "OCS cost scales")?;
    let base = problem.inputs();
    scales
        .iter()
        .map(|&s| {
            let scaled = problem.with_scales(base.ocs_cost_scale * s, base.traffic_volume)?;
            Ok(SweepPoint::from_result(s, optimize(&scaled, search)))
        })
        .collect()
}

/// Traffic-volume sweep with cost parity against the ICE fleet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficSweep {
    pub ice_apc_usd_per_km: f64,
    pub points: Vec<SweepPoint>,
    pub parity: Vec<bool>,
    /// Smallest factor whose APC does not exceed the ICE cost.
    pub parity_factor: Option<f64>,
}

/// Re-optimises with the weekly voyage count multiplied by each factor.
pub fn sweep_traffic(problem: &Problem, factors: &[f64], ice_apc_usd_per_km: f64, search: &SearchConfig) -> Result<TrafficSweep> {
    check_positive(factors, "traffic factors")?;
    if let Some(f) = factors.iter().find(|f| **f > 1.0) {
        return Err(Error::validation(format!("traffic factors must lie in (0, 1], got {f}")));
    }
    let base = problem.inputs();
    let points = factors
        .iter()
        .map(|&f| {
            let scaled = problem.with_scales(base.ocs_cost_scale, base.traffic_volume * f)?;
            Ok(SweepPoint::from_result(f, optimize(&scaled, search)))
        })
        .collect::<Result<Vec<_>>>()?;
    let parity: Vec<bool> = points
        .iter()
        .map(|p| p.apc_usd_per_km().is_some_and(|a| a <= ice_apc_usd_per_km))
        .collect();
    let parity_factor = points
        .iter()
        .zip(&parity)
        .filter(|(_, ok)| **ok)
        .map(|(p, _)| p.factor)
        .min_by(f64::total_cmp);
    Ok(TrafficSweep {
        ice_apc_usd_per_km,
        points,
        parity,
        parity_factor,
    })
}

/// A named fleet composition; keys are class names or `container`/`bulk`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMix {
    pub name: String,
    pub mix: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShipMixRow {
    pub name: String,
    /// Per-class fractions of the generated traffic.
    pub class_mix: Vec<(String, f64)>,
    pub container_share: f64,
    pub ice_apc_usd_per_km: f64,
    /// Pure electric operation, no stations; `None` when no ship has the range.
    pub es_no_ocs_apc_usd_per_km: Option<f64>,
    pub es_with_ocs: Option<PlanSolution>,
    pub error: Option<String>,
}

impl ShipMixRow {
    pub fn es_with_ocs_apc_usd_per_km(&self) -> Option<f64> {
        self.es_with_ocs.as_ref().map(|p| p.breakdown.apc_usd_per_km)
    }

    /// (ICE − ES with OCS) / ICE.
    pub fn ocs_advantage(&self) -> Option<f64> {
        let with = self.es_with_ocs_apc_usd_per_km()?;
        (self.ice_apc_usd_per_km > 0.0).then(|| (self.ice_apc_usd_per_km - with) / self.ice_apc_usd_per_km)
    }
}

/// Re-plans the route for each fleet composition. Traffic for every mix is
/// generated from `traffic` with its `mix` replaced.
pub fn sweep_ship_mix(
    problem: &Problem,
    mixes: &[NamedMix],
    traffic: &SyntheticTraffic,
    ice: &IceBaselineParams,
    search: &SearchConfig,
) -> Result<Vec<ShipMixRow>> {
    ice.validate()?;
    let base = problem.inputs();
    let mut rows = Vec::with_capacity(mixes.len());
    for m in mixes {
        expand_mix(&m.mix, &base.ships)?;
        let synth = SyntheticTraffic {
            mix: m.mix.clone(),
            ..traffic.clone()
        };
        let set = generate_synthetic_traffic(&synth, &base.ships)?;
        let class_mix = traffic_mix(&set);
        let ice_apc_usd_per_km = ice_apc(ice, &class_mix)?;
        let mut inputs = base.clone();
        inputs.traffic = set;
        let p = Problem::new(inputs)?;
        let es_no_ocs_apc_usd_per_km = p.evaluate(&[]).ok().map(|s| s.breakdown.apc_usd_per_km);
        let (es_with_ocs, error) = match optimize(&p, search) {
            Ok(plan) => (Some(plan), None),
            Err(e) => (None, Some(e.to_string())),
        };
        rows.push(ShipMixRow {
            name: m.name.clone(),
            container_share: container_share(&class_mix),
            class_mix,
            ice_apc_usd_per_km,
            es_no_ocs_apc_usd_per_km,
            es_with_ocs,
            error,
        });
    }
    Ok(rows)
}

/// Whether the OCS advantage grows with the container share across rows.
pub fn advantage_follows_container_share(rows: &[ShipMixRow]) -> bool {
    let mut pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| Some((r.container_share, r.ocs_advantage()?)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.windows(2).all(|w| w[0].0 == w[1].0 || w[1].1 >= w[0].1)
}
