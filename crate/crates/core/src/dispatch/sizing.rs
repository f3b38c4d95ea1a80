use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{build_load_profile, simulate_dispatch, ChargingEvent, DispatchTrace, HorizonMode, LoadOptions, LoadProfile};
use crate::error::{Error, Result};
use crate::HOURS_PER_WEEK;

/// Installed capacities of one station and whether they carry the load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationDesign {
    pub site_index: usize,
    pub q_res_kw: f64,
    pub q_bess_kwh: f64,
    /// Charger capacity, also the station's power limit towards ships.
    pub q_char_kw: f64,
    pub platform_cost_usd: f64,
    /// Cost of renewables, storage and chargers at the sizing prices.
    pub equipment_cost_usd: f64,
    pub feasible: bool,
    pub unmet_kwh: f64,
}

impl StationDesign {
    pub fn empty(site_index: usize, platform_cost_usd: f64) -> Self {
        Self {
            site_index,
            q_res_kw: 0.0,
            q_bess_kwh: 0.0,
            q_char_kw: 0.0,
            platform_cost_usd,
            equipment_cost_usd: 0.0,
            feasible: true,
            unmet_kwh: 0.0,
        }
    }

    pub fn total_cost_usd(&self) -> f64 {
        self.platform_cost_usd + self.equipment_cost_usd
    }
}

/// Unit prices of station equipment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationPrices {
    pub mu_res_usd_per_kw: f64,
    pub mu_bess_usd_per_kwh: f64,
    pub mu_char_usd_per_kw: f64,
}

impl StationPrices {
    pub fn cost(&self, q_res: f64, q_bess: f64, q_char: f64) -> f64 {
        self.mu_res_usd_per_kw * q_res + self.mu_bess_usd_per_kwh * q_bess + self.mu_char_usd_per_kw * q_char
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            mu_res_usd_per_kw: self.mu_res_usd_per_kw * factor,
            mu_bess_usd_per_kwh: self.mu_bess_usd_per_kwh * factor,
            mu_char_usd_per_kw: self.mu_char_usd_per_kw * factor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.mu_res_usd_per_kw, self.mu_bess_usd_per_kwh, self.mu_char_usd_per_kw];
        if all.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::validation("station prices must be finite and >= 0"));
        }
        Ok(())
    }
}

/// The parts of a candidate site that sizing needs.
#[derive(Debug, Clone, PartialEq)]
pub struct StationSite {
    pub index: usize,
    pub res_bound_kw: f64,
    pub platform_cost_usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SizingConfig {
    /// Points per capacity axis in each search pass.
    pub grid_points: usize,
    pub refinement_passes: usize,
    pub load: LoadOptions,
    pub charge_efficiency: f64,
}

impl Default for SizingConfig {
    fn default() -> Self {
        Self {
            grid_points: 16,
            refinement_passes: 2,
            load: LoadOptions {
                horizon: HorizonMode::Cyclic,
                dwell_slack_h: Some(1),
            },
            charge_efficiency: 1.0,
        }
    }
}

/// `n` points from `lo` to `hi` with constant ratio; both ends included.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 || !(lo > 0.0) || lo >= hi {
        return vec![hi];
    }
    let ratio = hi / lo;
    let mut g: Vec<f64> = (0..n).map(|i| lo * ratio.powf(i as f64 / (n - 1) as f64)).collect();
    g[n - 1] = hi;
    g
}

fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 || lo >= hi {
        return vec![hi];
    }
    let mut g: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    g[n - 1] = hi;
    g
}

/// Load profiles, traces and total shortfall of one design across scenarios.
#[derive(Debug, Clone)]
pub struct DesignCheck {
    pub profiles: Vec<LoadProfile>,
    pub traces: Vec<DispatchTrace>,
    pub unmet_kwh: f64,
}

impl DesignCheck {
    pub fn feasible(&self) -> bool {
        self.unmet_kwh == 0.0
    }
}

fn dispatch_week(
    design: &StationDesign,
    profile: &LoadProfile,
    shape: &[f64],
    config: &SizingConfig,
) -> Result<DispatchTrace> {
    let res: Vec<f64> = shape.iter().map(|s| s * design.q_res_kw).collect();
    let soc0 = match config.load.horizon {
        HorizonMode::Open => 0.0,
        HorizonMode::Cyclic => {
            simulate_dispatch(design, &profile.load_kw, &res, 0.0, config.charge_efficiency)?.soc_end_kwh
        }
    };
    simulate_dispatch(design, &profile.load_kw, &res, soc0, config.charge_efficiency)
}

/// Runs every scenario's week against a fixed design.
pub fn evaluate_design(
    design: &StationDesign,
    scenarios: &[Vec<ChargingEvent>],
    res_shape: &[f64],
    config: &SizingConfig,
) -> Result<DesignCheck> {
    let mut check = DesignCheck {
        profiles: Vec::with_capacity(scenarios.len()),
        traces: Vec::with_capacity(scenarios.len()),
        unmet_kwh: 0.0,
    };
    for events in scenarios {
        let profile = build_load_profile(events, design.q_char_kw, config.load)?;
        let trace = dispatch_week(design, &profile, res_shape, config)?;
        check.unmet_kwh += trace.unmet_kwh + profile.undelivered_kwh;
        check.profiles.push(profile);
        check.traces.push(trace);
    }
    Ok(check)
}

struct Search<'a> {
    site: &'a StationSite,
    scenarios: &'a [Vec<ChargingEvent>],
    shape: &'a [f64],
    prices: &'a StationPrices,
    config: &'a SizingConfig,
    profiles: HashMap<u64, Vec<LoadProfile>>,
    unmet: HashMap<(u64, u64, u64), f64>,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    cost: f64,
    q: [f64; 3],
}

impl Search<'_> {
    fn unmet(&mut self, q_res: f64, q_bess: f64, q_char: f64) -> Result<f64> {
        let key = (q_res.to_bits(), q_bess.to_bits(), q_char.to_bits());
        if let Some(&u) = self.unmet.get(&key) {
            return Ok(u);
        }
        if !self.profiles.contains_key(&q_char.to_bits()) {
            let profiles = self
                .scenarios
                .iter()
                .map(|ev| build_load_profile(ev, q_char, self.config.load))
                .collect::<Result<Vec<_>>>()?;
            self.profiles.insert(q_char.to_bits(), profiles);
        }
        let design = StationDesign {
            q_res_kw: q_res,
            q_bess_kwh: q_bess,
            q_char_kw: q_char,
            ..StationDesign::empty(self.site.index, 0.0)
        };
        let mut total = 0.0;
        for profile in &self.profiles[&q_char.to_bits()] {
            total += profile.undelivered_kwh;
            total += dispatch_week(&design, profile, self.shape, self.config)?.unmet_kwh;
        }
        self.unmet.insert(key, total);
        Ok(total)
    }

    /// Cheapest feasible point of the product grid. Feasibility is monotone
    /// in renewables and storage for a fixed charger size, so the smallest
    /// feasible renewable level is found by bisection.
    fn pass(&mut self, chars: &[f64], besses: &[f64], reses: &[f64], mut best: Option<Best>) -> Result<Option<Best>> {
        let p = self.prices;
        for &c in chars {
            let part_c = p.mu_char_usd_per_kw * c;
            if best.is_some_and(|b| part_c >= b.cost) {
                break;
            }
            for &b in besses {
                let part = part_c + p.mu_bess_usd_per_kwh * b;
                if best.is_some_and(|bb| part >= bb.cost) {
                    break;
                }
                let top = reses.len() - 1;
                if self.unmet(reses[top], b, c)? > 0.0 {
                    continue;
                }
                let (mut lo, mut hi) = (0usize, top);
                if self.unmet(reses[0], b, c)? == 0.0 {
                    hi = 0;
                }
                while hi - lo > 1 {
                    let mid = (lo + hi) / 2;
                    if self.unmet(reses[mid], b, c)? == 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let r = reses[hi];
                let cost = part + p.mu_res_usd_per_kw * r;
                if best.is_none_or(|bb| cost < bb.cost) {
                    best = Some(Best { cost, q: [r, b, c] });
                }
            }
        }
        Ok(best)
    }
}

fn neighbours(grid: &[f64], value: f64, n: usize) -> Vec<f64> {
    let i = grid.iter().position(|&g| g == value).unwrap_or(0);
    let lo = if i > 0 { grid[i - 1] } else { grid[i] };
    let hi = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] };
    let mut g = linear_grid(lo, hi, n);
    if !g.contains(&value) {
        g.push(value);
        g.sort_by(f64::total_cmp);
    }
    g
}

/// Least-cost renewables, storage and chargers that serve every scenario's
/// charging events at this site.
///
/// The search runs over geometric capacity grids and refines around the
/// incumbent. When no grid point is feasible the design with the least
/// shortfall is returned with `feasible = false`.
pub fn size_station(
    site: &StationSite,
    scenarios: &[Vec<ChargingEvent>],
    res_shape: &[f64],
    prices: &StationPrices,
    config: &SizingConfig,
) -> Result<StationDesign> {
    prices.validate()?;
    if res_shape.len() != HOURS_PER_WEEK {
        return Err(Error::validation(format!(
            "renewable shape must have {HOURS_PER_WEEK} hours, got {}",
            res_shape.len()
        )));
    }
    if res_shape.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::validation("renewable shape values must lie in [0, 1]"));
    }
    let energy = scenarios
        .iter()
        .map(|ev| ev.iter().map(|e| e.energy_kwh).sum::<f64>())
        .fold(0.0, f64::max);
    let peak = scenarios
        .iter()
        .map(|ev| ev.iter().filter(|e| e.energy_kwh > 0.0).map(|e| e.max_power_kw).sum::<f64>())
        .fold(0.0, f64::max);
    if energy <= 0.0 {
        return Ok(StationDesign::empty(site.index, site.platform_cost_usd));
    }
    let n = config.grid_points.max(2);
    let weekly_yield: f64 = res_shape.iter().sum();
    let res_hi = if weekly_yield > 0.0 {
        site.res_bound_kw.min(8.0 * peak.max(energy / weekly_yield))
    } else {
        0.0
    };
    let chars = geometric_grid((peak * 1e-3).max(energy / HOURS_PER_WEEK as f64).min(peak), peak, n);
    let mut besses = vec![0.0];
    besses.extend(geometric_grid(energy * 1e-3, energy, n));
    let mut reses = vec![0.0];
    if res_hi > 0.0 {
        reses.extend(geometric_grid(res_hi * 1e-3, res_hi, n));
    }

    let mut search = Search {
        site,
        scenarios,
        shape: res_shape,
        prices,
        config,
        profiles: HashMap::new(),
        unmet: HashMap::new(),
    };
    let mut best = search.pass(&chars, &besses, &reses, None)?;
    if let Some(first) = best {
        let mut grids = [reses.clone(), besses.clone(), chars.clone()];
        let mut centre = first.q;
        for _ in 0..config.refinement_passes {
            let refined: Vec<Vec<f64>> = (0..3).map(|a| neighbours(&grids[a], centre[a], n)).collect();
            best = search.pass(&refined[2], &refined[1], &refined[0], best)?;
            centre = best.expect("incumbent kept").q;
            grids = [refined[0].clone(), refined[1].clone(), refined[2].clone()];
        }
    }

    match best {
        Some(b) => Ok(StationDesign {
            site_index: site.index,
            q_res_kw: b.q[0],
            q_bess_kwh: b.q[1],
            q_char_kw: b.q[2],
            platform_cost_usd: site.platform_cost_usd,
            equipment_cost_usd: b.cost,
            feasible: true,
            unmet_kwh: 0.0,
        }),
        None => {
            let r = *reses.last().unwrap();
            let b = *besses.last().unwrap();
            let mut fallback: Option<(f64, f64)> = None;
            for &c in &chars {
                let u = search.unmet(r, b, c)?;
                if fallback.is_none_or(|(fu, _)| u < fu) {
                    fallback = Some((u, c));
                }
            }
            let (unmet, c) = fallback.expect("charger grid is non-empty");
            log::debug!("site {} has no feasible design; least shortfall {unmet:.1} kWh", site.index);
            Ok(StationDesign {
                site_index: site.index,
                q_res_kw: r,
                q_bess_kwh: b,
                q_char_kw: c,
                platform_cost_usd: site.platform_cost_usd,
                equipment_cost_usd: prices.cost(r, b, c),
                feasible: false,
                unmet_kwh: unmet,
            })
        }
    }
}
