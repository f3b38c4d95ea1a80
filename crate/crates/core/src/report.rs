//! Output files: plan JSON, cost breakdown, dispatch traces, trade-off
//! curves and sweep tables, with readers for each.

use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::config::{read_json, write_json};
use crate::dispatch::write_trace_csv;
use crate::error::{Error, Result};
use crate::planner::{CostBreakdown, InfeasibilityReport, PlanSolution, Problem};
use crate::sensitivity::{ShipMixRow, SweepPoint, TrafficSweep};
use crate::ship::{tradeoff_curve, BatteryTech, ShipClass, TradeoffSettings};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        context: format!("writing {}", path.display()),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|source| Error::Csv {
        context: format!("reading {}", path.display()),
        source,
    })?;
    r.deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Schema {
                path: path.display().to_string(),
                row: i + 1,
                column: e
                    .position()
                    .map_or_else(|| "?".to_string(), |p| format!("field at byte {}", p.byte())),
                message: e.to_string(),
            })
        })
        .collect()
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub schema_version: u32,
    pub seed: Option<u64>,
    pub route_km: f64,
    pub weekly_voyages: f64,
    pub lcoe_usd_per_kwh: Option<f64>,
    pub ice_apc_usd_per_km: Option<f64>,
    pub plan: PlanSolution,
}

pub fn write_plan_json(path: impl AsRef<Path>, report: &PlanReport) -> Result<()> {
    write_json(path.as_ref(), report)
}

pub fn read_plan_json(path: impl AsRef<Path>) -> Result<PlanReport> {
    read_json(path.as_ref(), "plan report")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfeasibilityFile {
    pub schema_version: u32,
    pub message: String,
    pub report: InfeasibilityReport,
}

pub fn write_infeasibility_json(path: impl AsRef<Path>, report: &InfeasibilityReport) -> Result<()> {
    write_json(
        path.as_ref(),
        &InfeasibilityFile {
            schema_version: SCHEMA_VERSION,
            message: report.to_string(),
            report: report.clone(),
        },
    )
}

pub fn read_infeasibility_json(path: impl AsRef<Path>) -> Result<InfeasibilityFile> {
    read_json(path.as_ref(), "infeasibility report")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct BreakdownRow {
    component: String,
    usd_per_km: f64,
}

const BREAKDOWN_COMPONENTS: [&str; 5] = ["ocs", "onshore_electricity", "battery", "cargo_revenue", "apc"];

/// One row per component: `component,usd_per_km`.
pub fn write_breakdown_csv(path: impl AsRef<Path>, b: &CostBreakdown) -> Result<()> {
    let values = [
        b.ocs_usd_per_km,
        b.elec_usd_per_km,
        b.batt_usd_per_km,
        b.cargo_usd_per_km,
        b.apc_usd_per_km,
    ];
    let rows: Vec<BreakdownRow> = BREAKDOWN_COMPONENTS
        .iter()
        .zip(values)
        .map(|(c, v)| BreakdownRow {
            component: c.to_string(),
            usd_per_km: v,
        })
        .collect();
    write_rows(path.as_ref(), &rows)
}

pub fn read_breakdown_csv(path: impl AsRef<Path>) -> Result<CostBreakdown> {
    let path = path.as_ref();
    let rows: Vec<BreakdownRow> = read_rows(path)?;
    let get = |name: &str| {
        rows.iter()
            .find(|r| r.component == name)
            .map(|r| r.usd_per_km)
            .ok_or_else(|| Error::Schema {
                path: path.display().to_string(),
                row: 0,
                column: "component".into(),
                message: format!("missing component `{name}`"),
            })
    };
    Ok(CostBreakdown {
        ocs_usd_per_km: get("ocs")?,
        elec_usd_per_km: get("onshore_electricity")?,
        batt_usd_per_km: get("battery")?,
        cargo_usd_per_km: get("cargo_revenue")?,
        apc_usd_per_km: get("apc")?,
    })
}

/// Writes `<dir>/site_<index>_scenario_<k>.csv` for every station and scenario.
pub fn write_dispatch_traces(dir: impl AsRef<Path>, problem: &Problem, plan: &PlanSolution) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    ensure_dir(dir)?;
    let mut paths = Vec::new();
    for (j, traces) in problem.dispatch_traces(plan)?.iter().enumerate() {
        for (k, t) in traces.iter().enumerate() {
            let p = dir.join(format!("site_{:03}_scenario_{k}.csv", plan.chosen_indices[j]));
            write_trace_csv(&p, t)?;
            paths.push(p);
        }
    }
    Ok(paths)
}

/// One point of a battery trade-off curve; empty solution fields mark a gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffRow {
    pub class: String,
    pub density_wh_per_l: f64,
    pub range_km: f64,
    pub battery_kwh: Option<f64>,
    pub battery_m3: Option<f64>,
    pub delta_cargo_teu: Option<f64>,
    pub delta_draught_m: Option<f64>,
    pub gap: Option<String>,
}

/// Curves for each density over a shared range grid.
pub fn tradeoff_rows(
    ship: &ShipClass,
    base_tech: &BatteryTech,
    densities: &[f64],
    ranges_km: &[f64],
    settings: &TradeoffSettings,
) -> Result<Vec<TradeoffRow>> {
    let mut rows = Vec::new();
    for &d in densities {
        let tech = BatteryTech {
            density_wh_per_l: d,
            ..base_tech.clone()
        };
        tech.validate()?;
        for pt in tradeoff_curve(ship, &tech, ranges_km, settings)? {
            let s = pt.solution.as_ref();
            rows.push(TradeoffRow {
                class: ship.name.clone(),
                density_wh_per_l: d,
                range_km: pt.range_km,
                battery_kwh: s.map(|s| s.battery_kwh),
                battery_m3: s.map(|s| s.battery_m3),
                delta_cargo_teu: s.map(|s| s.delta_cargo_teu),
                delta_draught_m: s.map(|s| s.delta_draught_m),
                gap: pt.gap_reason,
            });
        }
    }
    Ok(rows)
}

pub fn write_tradeoff_csv(path: impl AsRef<Path>, rows: &[TradeoffRow]) -> Result<()> {
    write_rows(path.as_ref(), rows)
}

pub fn read_tradeoff_csv(path: impl AsRef<Path>) -> Result<Vec<TradeoffRow>> {
    read_rows(path.as_ref())
}

/// Flat sweep row shared by all sweep kinds; unused columns stay empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kind: String,
    pub label: String,
    pub factor: Option<f64>,
    pub status: String,
    pub apc_usd_per_km: Option<f64>,
    pub ocs_usd_per_km: Option<f64>,
    pub elec_usd_per_km: Option<f64>,
    pub batt_usd_per_km: Option<f64>,
    pub cargo_usd_per_km: Option<f64>,
    pub n_stations: Option<usize>,
    /// Station positions joined with `;`.
    pub station_arcs_km: String,
    pub res_kw: Option<f64>,
    pub bess_kwh: Option<f64>,
    pub charger_kw: Option<f64>,
    pub ice_apc_usd_per_km: Option<f64>,
    pub parity: Option<bool>,
    pub es_no_ocs_apc_usd_per_km: Option<f64>,
    pub ocs_advantage: Option<f64>,
    pub container_share: Option<f64>,
    pub error: String,
}

impl SweepRow {
    fn new(kind: &str, label: String, factor: Option<f64>, plan: Option<&PlanSolution>, error: Option<&str>) -> Self {
        let b = plan.map(|p| p.breakdown);
        Self {
            kind: kind.to_string(),
            label,
            factor,
            status: if plan.is_some() { "ok" } else { "failed" }.to_string(),
            apc_usd_per_km: b.map(|b| b.apc_usd_per_km),
            ocs_usd_per_km: b.map(|b| b.ocs_usd_per_km),
            elec_usd_per_km: b.map(|b| b.elec_usd_per_km),
            batt_usd_per_km: b.map(|b| b.batt_usd_per_km),
            cargo_usd_per_km: b.map(|b| b.cargo_usd_per_km),
            n_stations: plan.map(|p| p.chosen_indices.len()),
            station_arcs_km: plan
                .map(|p| p.chosen_arcs().iter().map(|a| format!("{a}")).collect::<Vec<_>>().join(";"))
                .unwrap_or_default(),
            res_kw: plan.map(|p| p.designs.iter().map(|d| d.q_res_kw).sum()),
            bess_kwh: plan.map(|p| p.designs.iter().map(|d| d.q_bess_kwh).sum()),
            charger_kw: plan.map(|p| p.total_charger_kw()),
            ice_apc_usd_per_km: None,
            parity: None,
            es_no_ocs_apc_usd_per_km: None,
            ocs_advantage: None,
            container_share: None,
            error: error.unwrap_or_default().to_string(),
        }
    }
}

pub fn ocs_cost_rows(points: &[SweepPoint]) -> Vec<SweepRow> {
    points
        .iter()
        .map(|p| SweepRow::new("ocs-cost", format!("{}", p.factor), Some(p.factor), p.plan.as_ref(), p.error.as_deref()))
        .collect()
}

pub fn traffic_rows(sweep: &TrafficSweep) -> Vec<SweepRow> {
    sweep
        .points
        .iter()
        .zip(&sweep.parity)
        .map(|(p, &parity)| SweepRow {
            ice_apc_usd_per_km: Some(sweep.ice_apc_usd_per_km),
            parity: Some(parity),
            ..SweepRow::new("traffic", format!("{}", p.factor), Some(p.factor), p.plan.as_ref(), p.error.as_deref())
        })
        .collect()
}

pub fn ship_mix_rows(rows: &[ShipMixRow]) -> Vec<SweepRow> {
    rows.iter()
        .map(|r| SweepRow {
            ice_apc_usd_per_km: Some(r.ice_apc_usd_per_km),
            es_no_ocs_apc_usd_per_km: r.es_no_ocs_apc_usd_per_km,
            ocs_advantage: r.ocs_advantage(),
            container_share: Some(r.container_share),
            ..SweepRow::new("ship-mix", r.name.clone(), None, r.es_with_ocs.as_ref(), r.error.as_deref())
        })
        .collect()
}

pub fn write_sweep_csv(path: impl AsRef<Path>, rows: &[SweepRow]) -> Result<()> {
    write_rows(path.as_ref(), rows)
}

pub fn read_sweep_csv(path: impl AsRef<Path>) -> Result<Vec<SweepRow>> {
    read_rows(path.as_ref())
}

/// JSON companion of a sweep table with the sweep-level summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub kind: String,
    pub rows: Vec<SweepRow>,
    /// Traffic sweeps: smallest factor at cost parity with the ICE fleet.
    pub parity_factor: Option<f64>,
    /// Ship-mix sweeps: whether the OCS advantage grows with container share.
    pub advantage_follows_container_share: Option<bool>,
}

pub fn write_sweep_json(path: impl AsRef<Path>, report: &SweepReport) -> Result<()> {
    write_json(path.as_ref(), report)
}

pub fn read_sweep_json(path: impl AsRef<Path>) -> Result<SweepReport> {
    read_json(path.as_ref(), "sweep report")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub schema_version: u32,
    pub class: String,
    pub range_km: f64,
    pub battery_m3: f64,
    pub density_wh_per_l: f64,
    pub previous_k_adm: f64,
    pub k_adm: f64,
}

pub fn write_calibration_json(path: impl AsRef<Path>, report: &CalibrationReport) -> Result<()> {
    write_json(path.as_ref(), report)
}

pub fn read_calibration_json(path: impl AsRef<Path>) -> Result<CalibrationReport> {
    read_json(path.as_ref(), "calibration report")
}
