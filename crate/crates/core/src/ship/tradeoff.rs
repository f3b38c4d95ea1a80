use serde::{Deserialize, Serialize};

use super::{BatteryTech, ShipClass};
use crate::error::{Error, Result};

/// Numerical and physical settings of the trade-off solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TradeoffSettings {
    /// Seawater density, kg/m³.
    pub water_density: f64,
    /// Share of freed (or consumed) powertrain space that converts into cargo.
    pub usable_fraction: f64,
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for TradeoffSettings {
    fn default() -> Self {
        Self {
            water_density: 1025.0,
            usable_fraction: 0.76,
            damping: 0.5,
            tolerance: 1e-9,
            max_iterations: 10_000,
        }
    }
}

impl TradeoffSettings {
    pub fn with_usable_fraction(mut self, fraction: f64) -> Self {
        self.usable_fraction = fraction;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.water_density > 0.0)
            || !(0.0..=1.0).contains(&self.usable_fraction)
            || !(self.damping > 0.0 && self.damping <= 1.0)
            || !(self.tolerance > 0.0)
            || self.max_iterations == 0
        {
            return Err(Error::validation(format!("invalid trade-off settings {self:?}")));
        }
        Ok(())
    }
}

/// Battery, draught and cargo configuration for one class at one range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffSolution {
    pub class_name: String,
    pub range_km: f64,
    pub density_wh_per_l: f64,
    pub battery_kwh: f64,
    pub battery_m3: f64,
    pub delta_draught_m: f64,
    /// Cargo change against the ICE configuration, TEU (signed).
    pub delta_cargo_teu: f64,
    /// Relative residuals of the propulsion, weight and volume balances.
    pub residuals: [f64; 3],
    pub iterations: usize,
}

/// Cargo change implied by a battery capacity (volume balance).
fn cargo_delta(ship: &ShipClass, q_kwh: f64, density: f64, s: &TradeoffSettings) -> f64 {
    s.usable_fraction * (ship.v_ice_m3 - ship.v_e_m3 - q_kwh / density) / ship.v_c_m3_per_teu
}

/// Draught change implied by a battery capacity and cargo change (weight balance).
fn draught_delta(ship: &ShipClass, q_kwh: f64, d_cargo: f64, s: &TradeoffSettings) -> f64 {
    (ship.rho_b_kg_per_kwh * q_kwh + ship.w_e_kg - ship.w_ice_kg + ship.rho_c_kg_per_teu * d_cargo)
        / (s.water_density * ship.s_v_m2)
}

fn relative(lhs: f64, rhs_terms: &[f64], lhs_terms: &[f64]) -> f64 {
    let rhs: f64 = rhs_terms.iter().sum();
    let scale = rhs_terms
        .iter()
        .chain(lhs_terms)
        .map(|x| x.abs())
        .fold(lhs.abs(), f64::max)
        .max(f64::MIN_POSITIVE);
    (lhs - rhs).abs() / scale
}

fn residuals(ship: &ShipClass, density: f64, range_km: f64, q: f64, dt: f64, dd: f64, s: &TradeoffSettings) -> [f64; 3] {
    let propulsion = relative(q, &[ship.k_adm * range_km * ((dt + ship.t0_m) / ship.t0_m).powf(2.0 / 3.0)], &[]);
    let weight = relative(
        s.water_density * ship.s_v_m2 * dt,
        &[
            ship.rho_b_kg_per_kwh * q,
            ship.w_e_kg,
            -ship.w_ice_kg,
            ship.rho_c_kg_per_teu * dd,
        ],
        &[],
    );
    let volume = relative(
        ship.v_c_m3_per_teu * dd,
        &[
            s.usable_fraction * ship.v_ice_m3,
            -s.usable_fraction * ship.v_e_m3,
            -s.usable_fraction * q / density,
        ],
        &[],
    );
    [propulsion, weight, volume]
}

/// Solves the coupled propulsion/weight/volume balance for a required range.
///
/// Damped fixed-point iteration on battery capacity, starting from the
/// baseline-draught energy `k_adm * range`.
pub fn solve_tradeoff(
    ship: &ShipClass,
    tech: &BatteryTech,
    range_km: f64,
    settings: &TradeoffSettings,
) -> Result<TradeoffSolution> {
    if !(range_km > 0.0) || !range_km.is_finite() {
        return Err(Error::validation(format!("range must be positive, got {range_km}")));
    }
    ship.validate()?;
    tech.validate()?;
    settings.validate()?;
    let density = tech.kwh_per_m3();
    let kl = ship.k_adm * range_km;

    let mut q = kl;
    let mut dt = 0.0;
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=settings.max_iterations {
        iterations = it;
        let dd = cargo_delta(ship, q, density, settings);
        dt = draught_delta(ship, q, dd, settings);
        let ratio = (ship.t0_m + dt) / ship.t0_m;
        if !(ratio > 0.0) || !dt.is_finite() {
            break;
        }
        let target = kl * ratio.powf(2.0 / 3.0);
        let next = (1.0 - settings.damping) * q + settings.damping * target;
        if !next.is_finite() {
            break;
        }
        let change = (next - q).abs() / next.abs().max(f64::MIN_POSITIVE);
        q = next;
        if change < settings.tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::TradeoffDivergence {
            ship: ship.name.clone(),
            range_km,
            iterations,
            last_battery_kwh: q,
            last_delta_draught_m: dt,
        });
    }
    let dd = cargo_delta(ship, q, density, settings);
    dt = draught_delta(ship, q, dd, settings);

    let battery_m3 = q / density;
    if battery_m3 > ship.v0_m3 {
        return Err(Error::InfeasibleRange {
            ship: ship.name.clone(),
            range_km,
            reason: format!(
                "battery volume {battery_m3:.1} m³ exceeds available cabin volume {:.1} m³",
                ship.v0_m3
            ),
        });
    }
    if ship.baseline_teu + dd < 0.0 {
        return Err(Error::InfeasibleRange {
            ship: ship.name.clone(),
            range_km,
            reason: format!(
                "battery displaces {:.0} TEU but the ship carries only {:.0}",
                -dd, ship.baseline_teu
            ),
        });
    }
    Ok(TradeoffSolution {
        class_name: ship.name.clone(),
        range_km,
        density_wh_per_l: tech.density_wh_per_l,
        battery_kwh: q,
        battery_m3,
        delta_draught_m: dt,
        delta_cargo_teu: dd,
        residuals: residuals(ship, density, range_km, q, dt, dd, settings),
        iterations,
    })
}

/// One point of a trade-off curve; infeasible ranges are kept as gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub range_km: f64,
    pub solution: Option<TradeoffSolution>,
    pub gap_reason: Option<String>,
}

pub fn tradeoff_curve(
    ship: &ShipClass,
    tech: &BatteryTech,
    range_grid: &[f64],
    settings: &TradeoffSettings,
) -> Result<Vec<CurvePoint>> {
    if range_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::validation("range grid must be strictly ascending"));
    }
    range_grid
        .iter()
        .map(|&range_km| match solve_tradeoff(ship, tech, range_km, settings) {
            Ok(sol) => Ok(CurvePoint {
                range_km,
                solution: Some(sol),
                gap_reason: None,
            }),
            Err(e @ (Error::InfeasibleRange { .. } | Error::TradeoffDivergence { .. })) => Ok(CurvePoint {
                range_km,
                solution: None,
                gap_reason: Some(e.to_string()),
            }),
            Err(e) => Err(e),
        })
        .collect()
}

/// Returns the `k_adm` at which `solve_tradeoff` yields `battery_m3` at
/// `range_km`.
///
/// Draught is affine in capacity, so fixing the capacity fixes the draught
/// and the propulsion balance gives `k_adm` directly.
pub fn calibrate_admiralty(
    ship: &ShipClass,
    tech: &BatteryTech,
    range_km: f64,
    battery_m3: f64,
    settings: &TradeoffSettings,
) -> Result<f64> {
    if !(range_km > 0.0) || !(battery_m3 > 0.0) {
        return Err(Error::validation("calibration anchor needs positive range and battery volume"));
    }
    if battery_m3 > ship.v0_m3 {
        return Err(Error::InfeasibleRange {
            ship: ship.name.clone(),
            range_km,
            reason: format!("anchor volume {battery_m3} m³ exceeds cabin volume {} m³", ship.v0_m3),
        });
    }
    settings.validate()?;
    let q = battery_m3 * tech.kwh_per_m3();
    let dd = cargo_delta(ship, q, tech.kwh_per_m3(), settings);
    let dt = draught_delta(ship, q, dd, settings);
    let ratio = (ship.t0_m + dt) / ship.t0_m;
    if !(ratio > 0.0) {
        return Err(Error::validation(format!(
            "anchor implies a non-positive draught for `{}`",
            ship.name
        )));
    }
    Ok(q / (range_km * ratio.powf(2.0 / 3.0)))
}
