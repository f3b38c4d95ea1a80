//! Plan evaluation and station placement search.

mod cost;
mod search;

pub use cost::{levelized_cost, CostBreakdown};
pub use search::{optimize, SearchConfig};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::dispatch::{
    evaluate_design, size_station, ChargingEvent, DispatchTrace, SizingConfig, StationDesign, StationPrices,
    StationSite,
};
use crate::error::{Error, Result};
use crate::geo::{segment_lengths, CandidateSite, GeoGrid, RoutePath};
use crate::ship::{
    cargo_revenue, es_depreciation, onshore_electricity_cost, solve_tradeoff, BatteryTech, ShipRegistry,
    TradeoffSettings, TradeoffSolution,
};
use crate::site_cost::{platform_cost, res_availability_shape, res_capacity_bound, PlatformCostParams, ResEndowmentParams};
use crate::traffic::{weekly_traffic_weight, Direction, ScenarioSet};
use crate::HOURS_PER_WEEK;

/// Knots to km/h.
const KNOT_KMH: f64 = 1.852;

/// A candidate site with everything sizing needs precomputed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteData {
    pub site: CandidateSite,
    pub res_bound_kw: f64,
    pub platform_cost_usd: f64,
    /// Available renewable output per installed kW, hour by hour.
    pub res_shape: Vec<f64>,
}

/// Evaluates platform cost, renewable bound and availability shape for each site.
pub fn prepare_sites(
    sites: &[CandidateSite],
    grid: &GeoGrid,
    platform: &PlatformCostParams,
    endowment: &ResEndowmentParams,
) -> Result<Vec<SiteData>> {
    platform.validate()?;
    endowment.validate()?;
    sites
        .iter()
        .map(|s| {
            Ok(SiteData {
                site: s.clone(),
                res_bound_kw: res_capacity_bound(s, endowment)?,
                platform_cost_usd: platform_cost(s, platform),
                res_shape: res_availability_shape(s, grid, endowment)?,
            })
        })
        .collect()
}

/// Money and charging parameters on the ship side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShipEconomics {
    /// Freight rate, USD per TEU per voyage.
    pub cargo_rate_usd_per_teu: f64,
    /// Onshore electricity price by port price key, USD/kWh.
    pub port_prices: BTreeMap<String, f64>,
    /// Ship-side charging power per kWh of battery capacity, 1/h.
    pub charge_c_rate: f64,
}

/// Everything a plan evaluation depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInputs {
    pub route: RoutePath,
    pub sites: Vec<SiteData>,
    pub station_prices: StationPrices,
    pub ships: ShipRegistry,
    pub battery: BatteryTech,
    pub traffic: ScenarioSet,
    pub economics: ShipEconomics,
    pub tradeoff: TradeoffSettings,
    pub sizing: SizingConfig,
    /// Multiplier on platform and equipment costs.
    pub ocs_cost_scale: f64,
    /// Ships represented by each voyage record.
    pub traffic_volume: f64,
}

/// The constraint that makes a plan infeasible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BindingConstraint {
    /// A ship class cannot carry enough battery for the longest leg.
    ShipRange {
        class_name: String,
        range_km: f64,
        reason: String,
    },
    /// A station cannot serve its charging demand within the site's limits.
    StationCapacity {
        site_index: usize,
        arc_km: f64,
        unmet_kwh: f64,
    },
}

impl fmt::Display for BindingConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BindingConstraint::ShipRange { reason, .. } => write!(f, "ship range: {reason}"),
            BindingConstraint::StationCapacity {
                site_index,
                arc_km,
                unmet_kwh,
            } => write!(
                f,
                "station capacity: site {site_index} at {arc_km:.1} km leaves {unmet_kwh:.1} kWh/week unserved"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfeasibilityReport {
    pub chosen_indices: Vec<usize>,
    pub chosen_arcs: Vec<f64>,
    pub max_segment_km: f64,
    pub binding: Vec<BindingConstraint>,
}

impl InfeasibilityReport {
    fn ship_failures(&self) -> usize {
        self.binding
            .iter()
            .filter(|b| matches!(b, BindingConstraint::ShipRange { .. }))
            .count()
    }

    fn unmet_kwh(&self) -> f64 {
        self.binding
            .iter()
            .map(|b| match b {
                BindingConstraint::StationCapacity { unmet_kwh, .. } => *unmet_kwh,
                _ => 0.0,
            })
            .sum()
    }
}

impl fmt::Display for InfeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stations at {:?} km (longest leg {:.1} km): ",
            self.chosen_arcs, self.max_segment_km
        )?;
        for (i, b) in self.binding.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// A feasible station plan with its costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSolution {
    pub chosen_indices: Vec<usize>,
    pub chosen_sites: Vec<CandidateSite>,
    pub designs: Vec<StationDesign>,
    pub ship_solutions: BTreeMap<String, TradeoffSolution>,
    pub breakdown: CostBreakdown,
    pub segments_km: Vec<f64>,
    pub max_segment_km: f64,
    /// Undepreciated platform and equipment cost of all stations, USD.
    pub ocs_total_cost_usd: f64,
    /// Scenario-weighted energy delivered by each station per week, kWh.
    pub station_weekly_energy_kwh: Vec<f64>,
    pub lifetime_station_energy_kwh: f64,
}

impl PlanSolution {
    pub fn chosen_arcs(&self) -> Vec<f64> {
        self.chosen_sites.iter().map(|s| s.arc_km).collect()
    }

    pub fn total_charger_kw(&self) -> f64 {
        self.designs.iter().map(|d| d.q_char_kw).sum()
    }
}

/// Total station cost divided by the energy the stations deliver.
pub fn lcoe(plan: &PlanSolution, lifetime_energy_kwh: f64) -> Result<f64> {
    levelized_cost(plan.ocs_total_cost_usd, lifetime_energy_kwh)
}

type ShipSet = std::result::Result<BTreeMap<String, TradeoffSolution>, Vec<BindingConstraint>>;

/// Validated inputs plus memoised ship and station results.
#[derive(Debug)]
pub struct Problem {
    inputs: ProblemInputs,
    ship_cache: Mutex<HashMap<u64, ShipSet>>,
    station_cache: Mutex<HashMap<(usize, u64, u64, u64), StationDesign>>,
}

impl Clone for Problem {
    fn clone(&self) -> Self {
        Problem::new(self.inputs.clone()).expect("inputs were validated")
    }
}

impl Problem {
    pub fn new(inputs: ProblemInputs) -> Result<Self> {
        let route_km = inputs.route.total_length_km();
        let mut prev = 0.0;
        for (k, s) in inputs.sites.iter().enumerate() {
            let a = s.site.arc_km;
            if !(a > prev && a < route_km) {
                return Err(Error::validation(format!(
                    "site {k} at {a} km must lie inside the route and after the previous site"
                )));
            }
            if s.res_shape.len() != HOURS_PER_WEEK {
                return Err(Error::validation(format!("site {k} renewable shape is not one week long")));
            }
            prev = a;
        }
        inputs.station_prices.validate()?;
        inputs.battery.validate()?;
        inputs.traffic.validate()?;
        if !(inputs.ocs_cost_scale > 0.0) {
            return Err(Error::validation("OCS cost scale must be positive"));
        }
        if !(inputs.traffic_volume >= 0.0) || !inputs.traffic_volume.is_finite() {
            return Err(Error::validation("traffic volume must be finite and >= 0"));
        }
        if !(inputs.economics.charge_c_rate > 0.0) || !(inputs.economics.cargo_rate_usd_per_teu >= 0.0) {
            return Err(Error::validation("charge c-rate must be > 0 and cargo rate >= 0"));
        }
        for key in [&inputs.route.port_start.price_key, &inputs.route.port_end.price_key] {
            match inputs.economics.port_prices.get(key) {
                Some(p) if *p >= 0.0 => {}
                _ => {
                    return Err(Error::validation(format!(
                        "no onshore electricity price for port key `{key}`"
                    )))
                }
            }
        }
        for name in inputs.traffic.class_names() {
            inputs.ships.get(&name)?;
        }
        Ok(Self {
            inputs,
            ship_cache: Mutex::new(HashMap::new()),
            station_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn inputs(&self) -> &ProblemInputs {
        &self.inputs
    }

    pub fn n_candidates(&self) -> usize {
        self.inputs.sites.len()
    }

    /// Scenario-weighted ships per week, counting multiplicity.
    pub fn weekly_volume(&self) -> f64 {
        self.inputs.traffic_volume * weekly_traffic_weight(&self.inputs.traffic)
    }

    fn ships_at(&self, range_km: f64) -> Result<ShipSet> {
        if let Some(hit) = self.ship_cache.lock().unwrap().get(&range_km.to_bits()) {
            return Ok(hit.clone());
        }
        let mut ok = BTreeMap::new();
        let mut failures = Vec::new();
        for name in self.inputs.traffic.class_names() {
            let class = self.inputs.ships.get(&name)?;
            match solve_tradeoff(class, &self.inputs.battery, range_km, &self.inputs.tradeoff) {
                Ok(sol) => {
                    ok.insert(name, sol);
                }
                Err(e @ (Error::InfeasibleRange { .. } | Error::TradeoffDivergence { .. })) => {
                    failures.push(BindingConstraint::ShipRange {
                        class_name: name,
                        range_km,
                        reason: e.to_string(),
                    })
                }
                Err(e) => return Err(e),
            }
        }
        let result = if failures.is_empty() { Ok(ok) } else { Err(failures) };
        self.ship_cache
            .lock()
            .unwrap()
            .insert(range_km.to_bits(), result.clone());
        Ok(result)
    }

    fn check_subset(&self, chosen: &[usize]) -> Result<()> {
        if chosen.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation("chosen site indices must be strictly increasing"));
        }
        if let Some(&i) = chosen.iter().find(|&&i| i >= self.inputs.sites.len()) {
            return Err(Error::validation(format!("site index {i} is not a candidate")));
        }
        Ok(())
    }

    /// Charging events at the `j`-th chosen station, one list per scenario.
    fn station_events(
        &self,
        arcs: &[f64],
        j: usize,
        range_km: f64,
        ships: &BTreeMap<String, TradeoffSolution>,
    ) -> Vec<Vec<ChargingEvent>> {
        let route_km = self.inputs.route.total_length_km();
        let a = arcs[j];
        let prev = if j == 0 { 0.0 } else { arcs[j - 1] };
        let next = arcs.get(j + 1).copied().unwrap_or(route_km);
        let volume = self.inputs.traffic_volume;
        self.inputs
            .traffic
            .scenarios
            .iter()
            .map(|scn| {
                scn.voyages
                    .iter()
                    .map(|v| {
                        let q = ships[&v.class_name].battery_kwh;
                        let (leg, travelled) = match v.direction {
                            Direction::Outbound => (a - prev, a),
                            Direction::Inbound => (next - a, route_km - a),
                        };
                        let t = v.departure_epoch_h + travelled / (v.speed_kn * KNOT_KMH);
                        let hour = (t.rem_euclid(HOURS_PER_WEEK as f64).floor() as usize).min(HOURS_PER_WEEK - 1);
                        ChargingEvent {
                            ship_id: v.ship_id.clone(),
                            arrival_hour: hour,
                            energy_kwh: volume * q * leg / range_km,
                            max_power_kw: volume * self.inputs.economics.charge_c_rate * q,
                        }
                    })
                    .filter(|e| e.max_power_kw > 0.0)
                    .collect()
            })
            .collect()
    }

    fn size_site(
        &self,
        site_idx: usize,
        arcs: &[f64],
        j: usize,
        range_km: f64,
        ships: &BTreeMap<String, TradeoffSolution>,
    ) -> Result<StationDesign> {
        let route_km = self.inputs.route.total_length_km();
        let prev = if j == 0 { 0.0 } else { arcs[j - 1] };
        let next = arcs.get(j + 1).copied().unwrap_or(route_km);
        let key = (site_idx, prev.to_bits(), next.to_bits(), range_km.to_bits());
        if let Some(d) = self.station_cache.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let data = &self.inputs.sites[site_idx];
        let scale = self.inputs.ocs_cost_scale;
        let site = StationSite {
            index: site_idx,
            res_bound_kw: data.res_bound_kw,
            platform_cost_usd: data.platform_cost_usd * scale,
        };
        let events = self.station_events(arcs, j, range_km, ships);
        let prices = self.inputs.station_prices.scaled(scale);
        let design = size_station(&site, &events, &data.res_shape, &prices, &self.inputs.sizing)?;
        self.station_cache.lock().unwrap().insert(key, design.clone());
        Ok(design)
    }

    /// Ship-side cost terms per voyage-km: electricity, battery wear, cargo.
    fn ship_terms(&self, range_km: f64, ships: &BTreeMap<String, TradeoffSolution>) -> Result<(f64, f64, f64)> {
        let inp = &self.inputs;
        let route_km = inp.route.total_length_km();
        let price = |d: Direction| match d {
            Direction::Outbound => inp.economics.port_prices[&inp.route.port_start.price_key],
            Direction::Inbound => inp.economics.port_prices[&inp.route.port_end.price_key],
        };
        let alpha = es_depreciation(range_km, route_km, inp.battery.cycle_life)?;
        let (mut elec, mut batt, mut cargo) = (0.0, 0.0, 0.0);
        for scn in &inp.traffic.scenarios {
            let (mut e, mut b, mut c) = (0.0, 0.0, 0.0);
            for v in &scn.voyages {
                let sol = &ships[&v.class_name];
                e += onshore_electricity_cost(sol.battery_kwh, price(v.direction));
                b += alpha * inp.battery.price_usd_per_kwh * sol.battery_kwh;
                c += cargo_revenue(sol.delta_cargo_teu, inp.economics.cargo_rate_usd_per_teu);
            }
            elec += scn.weight * e;
            batt += scn.weight * b;
            cargo += scn.weight * c;
        }
        let per = weekly_traffic_weight(&inp.traffic) * route_km;
        Ok((elec / per, batt / per, cargo / per))
    }

    fn ocs_denominator(&self) -> Result<f64> {
        let v = self.weekly_volume();
        if !(v > 0.0) {
            return Err(Error::NoTraffic);
        }
        Ok(self.inputs.traffic.weeks_lifetime * v * self.inputs.route.total_length_km())
    }

    /// APC with station equipment left out, never above the plan's true APC.
    /// `None` when a ship class cannot cover the longest leg.
    pub(crate) fn lower_bound(&self, chosen: &[usize]) -> Result<Option<f64>> {
        let arcs: Vec<f64> = chosen.iter().map(|&i| self.inputs.sites[i].site.arc_km).collect();
        let range = max_of(&segment_lengths(&self.inputs.route, &arcs)?);
        let denom = self.ocs_denominator()?;
        let Ok(ships) = self.ships_at(range)? else {
            return Ok(None);
        };
        let (elec, batt, cargo) = self.ship_terms(range, &ships)?;
        let scale = self.inputs.ocs_cost_scale;
        let ocs: f64 = chosen
            .iter()
            .map(|&i| self.inputs.sites[i].platform_cost_usd * scale)
            .sum::<f64>()
            / denom;
        Ok(Some(CostBreakdown::assemble(ocs, elec, batt, cargo).apc_usd_per_km))
    }

    /// Full evaluation of one placement.
    pub fn evaluate(&self, chosen: &[usize]) -> Result<PlanSolution> {
        self.check_subset(chosen)?;
        let denom = self.ocs_denominator()?;
        let inp = &self.inputs;
        let arcs: Vec<f64> = chosen.iter().map(|&i| inp.sites[i].site.arc_km).collect();
        let segments = segment_lengths(&inp.route, &arcs)?;
        let range = max_of(&segments);
        let infeasible = |binding| {
            Error::Infeasible(Box::new(InfeasibilityReport {
                chosen_indices: chosen.to_vec(),
                chosen_arcs: arcs.clone(),
                max_segment_km: range,
                binding,
            }))
        };
        let ships = match self.ships_at(range)? {
            Ok(s) => s,
            Err(binding) => return Err(infeasible(binding)),
        };
        let mut designs = Vec::with_capacity(chosen.len());
        let mut binding = Vec::new();
        for (j, &i) in chosen.iter().enumerate() {
            let d = self.size_site(i, &arcs, j, range, &ships)?;
            if !d.feasible {
                binding.push(BindingConstraint::StationCapacity {
                    site_index: i,
                    arc_km: arcs[j],
                    unmet_kwh: d.unmet_kwh,
                });
            }
            designs.push(d);
        }
        if !binding.is_empty() {
            return Err(infeasible(binding));
        }
        let station_weekly_energy_kwh: Vec<f64> = (0..chosen.len())
            .map(|j| {
                self.station_events(&arcs, j, range, &ships)
                    .iter()
                    .zip(&inp.traffic.scenarios)
                    .map(|(ev, s)| s.weight * ev.iter().map(|e| e.energy_kwh).sum::<f64>())
                    .sum()
            })
            .collect();
        let ocs_total = designs.iter().fold(0.0, |acc, d| acc + d.platform_cost_usd + d.equipment_cost_usd);
        let (elec, batt, cargo) = self.ship_terms(range, &ships)?;
        let breakdown = CostBreakdown::assemble(ocs_total / denom, elec, batt, cargo);
        Ok(PlanSolution {
            chosen_indices: chosen.to_vec(),
            chosen_sites: chosen.iter().map(|&i| inp.sites[i].site.clone()).collect(),
            designs,
            ship_solutions: ships,
            breakdown,
            segments_km: segments,
            max_segment_km: range,
            ocs_total_cost_usd: ocs_total,
            lifetime_station_energy_kwh: station_weekly_energy_kwh.iter().fold(0.0, |a, e| a + e) * inp.traffic.weeks_lifetime,
            station_weekly_energy_kwh,
        })
    }

    /// Dispatch traces of every station in a plan, one per scenario.
    pub fn dispatch_traces(&self, plan: &PlanSolution) -> Result<Vec<Vec<DispatchTrace>>> {
        let arcs = plan.chosen_arcs();
        plan.designs
            .iter()
            .enumerate()
            .map(|(j, d)| {
                let events = self.station_events(&arcs, j, plan.max_segment_km, &plan.ship_solutions);
                let shape = &self.inputs.sites[plan.chosen_indices[j]].res_shape;
                Ok(evaluate_design(d, &events, shape, &self.inputs.sizing)?.traces)
            })
            .collect()
    }

    /// The same problem with costs or traffic rescaled (caches start empty).
    pub fn with_scales(&self, ocs_cost_scale: f64, traffic_volume: f64) -> Result<Problem> {
        let mut inputs = self.inputs.clone();
        inputs.ocs_cost_scale = ocs_cost_scale;
        inputs.traffic_volume = traffic_volume;
        Problem::new(inputs)
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Evaluates a placement given as candidate indices.
pub fn evaluate_plan(problem: &Problem, chosen: &[usize]) -> Result<PlanSolution> {
    problem.evaluate(chosen)
}

/// Ordering key of an infeasible diagnosis: fewer ship-range failures,
/// then less unserved energy, then a shorter longest leg.
pub(crate) fn infeasibility_rank(r: &InfeasibilityReport) -> (usize, f64, f64) {
    (r.ship_failures(), r.unmet_kwh(), r.max_segment_km)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::dispatch::{HorizonMode, LoadOptions};
    use crate::ship::ShipRegistry;
    use crate::traffic::{generate_synthetic_traffic, SyntheticTraffic};

    pub(crate) fn tiny_problem(n_sites: usize, voyages: usize, seed: u64) -> Problem {
        let route = RoutePath::meridian(30.0, 122.0, 600.0).unwrap();
        let ships = ShipRegistry::default_clusters();
        let traffic = generate_synthetic_traffic(
            &SyntheticTraffic::new(seed, voyages, &[("Small Feeder", 0.5), ("Middle Feeder", 0.5)]),
            &ships,
        )
        .unwrap();
        let sites = (0..n_sites)
            .map(|k| {
                let arc = 600.0 * (k + 1) as f64 / (n_sites + 1) as f64;
                SiteData {
                    site: CandidateSite::new(k, arc, 30.0 + 10.0 * k as f64, 8.0, 1.5, 180.0),
                    res_bound_kw: 200_000.0,
                    platform_cost_usd: 20e6 + 1e6 * k as f64,
                    res_shape: (0..HOURS_PER_WEEK).map(|h| 0.3 + 0.2 * ((h % 24) as f64 / 24.0)).collect(),
                }
            })
            .collect();
        Problem::new(ProblemInputs {
            route: route.clone(),
            sites,
            station_prices: StationPrices {
                mu_res_usd_per_kw: 1500.0,
                mu_bess_usd_per_kwh: 250.0,
                mu_char_usd_per_kw: 100.0,
            },
            ships,
            battery: BatteryTech::for_year(2030).unwrap(),
            traffic,
            economics: ShipEconomics {
                cargo_rate_usd_per_teu: 260.0,
                port_prices: [("origin".to_string(), 0.087), ("destination".to_string(), 0.099)].into(),
                charge_c_rate: 1.0,
            },
            tradeoff: TradeoffSettings::default(),
            sizing: SizingConfig {
                grid_points: 6,
                refinement_passes: 1,
                load: LoadOptions {
                    horizon: HorizonMode::Cyclic,
                    dwell_slack_h: Some(1),
                },
                charge_efficiency: 1.0,
            },
            ocs_cost_scale: 1.0,
            traffic_volume: 1.0,
        })
        .unwrap()
    }

    #[test]
    fn empty_plan_is_pure_electric() {
        let p = tiny_problem(3, 10, 1);
        let plan = p.evaluate(&[]).unwrap();
        assert_eq!(plan.breakdown.ocs_usd_per_km, 0.0);
        assert_eq!(plan.max_segment_km, 600.0);
        assert!(plan.ship_solutions.values().all(|s| s.range_km == 600.0));
        assert!(plan.breakdown.is_additive(1e-9));
    }

    #[test]
    fn station_plan_is_additive_and_covers_segments() {
        let p = tiny_problem(3, 10, 2);
        let plan = p.evaluate(&[1]).unwrap();
        assert_eq!(plan.max_segment_km, 300.0);
        assert!(plan.breakdown.ocs_usd_per_km > 0.0);
        assert!(plan.breakdown.is_additive(1e-9));
        assert!(plan.designs.iter().all(|d| d.feasible));
        assert!(plan.ship_solutions.values().all(|s| s.range_km >= plan.max_segment_km));
    }

    #[test]
    fn zero_traffic_is_an_error() {
        let p = tiny_problem(2, 0, 3);
        assert!(matches!(p.evaluate(&[]), Err(Error::NoTraffic)));
    }

    #[test]
    fn mirrored_scenarios_match_single() {
        let p = tiny_problem(2, 8, 4);
        let mut inputs = p.inputs().clone();
        let scn = inputs.traffic.scenarios[0].clone();
        inputs.traffic.scenarios = vec![
            crate::traffic::Scenario { weight: 0.5, ..scn.clone() },
            crate::traffic::Scenario { weight: 0.5, ..scn },
        ];
        let twin = Problem::new(inputs).unwrap();
        let a = p.evaluate(&[0]).unwrap().breakdown.apc_usd_per_km;
        let b = twin.evaluate(&[0]).unwrap().breakdown.apc_usd_per_km;
        assert!((a - b).abs() <= 1e-9 * a.abs());
    }

    #[test]
    fn lower_bound_never_exceeds_apc() {
        let p = tiny_problem(3, 10, 5);
        for chosen in [vec![], vec![0], vec![0, 2], vec![0, 1, 2]] {
            let lb = p.lower_bound(&chosen).unwrap().unwrap();
            let apc = p.evaluate(&chosen).unwrap().breakdown.apc_usd_per_km;
            assert!(lb <= apc);
        }
    }

    #[test]
    fn infeasible_station_is_reported() {
        let p = tiny_problem(2, 10, 6);
        let mut inputs = p.inputs().clone();
        inputs.sites[0].res_bound_kw = 0.0;
        let p = Problem::new(inputs).unwrap();
        match p.evaluate(&[0]) {
            Err(Error::Infeasible(r)) => {
                assert!(matches!(r.binding[0], BindingConstraint::StationCapacity { site_index: 0, .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ship_range_infeasibility_is_reported() {
        let p = tiny_problem(1, 5, 7);
        let mut inputs = p.inputs().clone();
        inputs.battery.density_wh_per_l = 0.5;
        let p = Problem::new(inputs).unwrap();
        match p.evaluate(&[]) {
            Err(Error::Infeasible(r)) => {
                assert!(matches!(r.binding[0], BindingConstraint::ShipRange { .. }));
                assert!(r.to_string().contains("ship range"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_subsets() {
        let p = tiny_problem(3, 5, 8);
        assert!(p.evaluate(&[1, 0]).is_err());
        assert!(p.evaluate(&[7]).is_err());
    }
}
