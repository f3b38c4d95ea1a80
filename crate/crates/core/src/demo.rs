//! Built-in datasets: a calibrated demonstration corridor and a tiny
//! instance for smoke tests. Both are synthetic.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use crate::config::{CostParams, RouteConfig, RunConfig, SweepDefaults, TradeoffRequest, TrafficSource, CalibrationRequest};
use crate::dispatch::{SizingConfig, StationPrices};
use crate::error::{Error, Result};
use crate::geo::{write_route_csv, GeoGrid, GridPaths, NodeSeries, PortLabel, Raster, RoutePath};
use crate::planner::{SearchConfig, ShipEconomics};
use crate::sensitivity::{IceBaselineParams, NamedMix};
use crate::ship::{BatteryTech, ShipRegistry, TradeoffSettings};
use crate::site_cost::{PlatformCostParams, ResEndowmentParams};
use crate::traffic::{SyntheticTraffic, DEFAULT_WEEKS_LIFETIME};
use crate::HOURS_PER_WEEK;

/// Polyline of the demonstration corridor, roughly 900 km.
const DEMO_WAYPOINTS: [(f64, f64); 8] = [
    (31.32, 121.55),
    (30.85, 122.70),
    (31.15, 124.10),
    (31.95, 125.50),
    (32.85, 126.55),
    (33.75, 127.95),
    (34.45, 128.55),
    (35.08, 129.05),
];

/// Box and cell size of the demo rasters.
const DEMO_BOX: (f64, f64, f64, f64) = (30.0, 121.0, 36.0, 130.0);
const DEMO_CELL: f64 = 0.25;

pub fn demo_route() -> RoutePath {
    RoutePath::from_coords(
        &DEMO_WAYPOINTS,
        PortLabel::new("Shanghai", "shanghai"),
        PortLabel::new("Busan", "busan"),
    )
    .expect("demo waypoints are valid")
}

fn demo_depth(lat: f64, lon: f64) -> f64 {
    // Shelf deepening eastward, a trough towards the strait.
    let shelf = 12.0 + 11.0 * (lon - 121.5);
    let trough = 25.0 * (-((lat - 33.5).powi(2) + (lon - 127.5).powi(2)) / 2.0).exp();
    (shelf + trough).clamp(8.0, 130.0)
}

fn demo_wind(lat: f64, lon: f64) -> f64 {
    7.2 + 0.22 * (lon - 121.0) + 0.3 * ((lat - 30.0) * 0.8).sin()
}

fn demo_wave(lat: f64, lon: f64) -> f64 {
    1.1 + 0.09 * (lon - 121.0) + 0.05 * (lat - 30.0)
}

fn demo_solar(lat: f64, _lon: f64) -> f64 {
    175.0 - 3.0 * (lat - 30.0)
}

fn raster(bbox: (f64, f64, f64, f64), cell: f64, f: impl Fn(f64, f64) -> f64) -> Raster {
    let (lat0, lon0, lat1, lon1) = bbox;
    let n_rows = ((lat1 - lat0) / cell).round() as usize + 1;
    let n_cols = ((lon1 - lon0) / cell).round() as usize + 1;
    let mut values = Vec::with_capacity(n_rows * n_cols);
    for r in 0..n_rows {
        for c in 0..n_cols {
            values.push(f(lat0 + r as f64 * cell, lon0 + c as f64 * cell));
        }
    }
    Raster::new(lat0, lon0, cell, n_rows, n_cols, values).expect("generated raster is valid")
}

/// One week of hourly wind around `mean`: a multi-day weather cycle plus a
/// weak daily cycle, phase-shifted by location.
fn wind_week(mean: f64, row: usize, col: usize) -> Vec<f64> {
    let phase = 0.37 * row as f64 + 0.23 * col as f64;
    (0..HOURS_PER_WEEK)
        .map(|h| {
            let t = h as f64;
            let v = mean * (1.0 + 0.35 * (2.0 * PI * t / 62.0 + phase).sin() + 0.08 * (2.0 * PI * t / 24.0).sin());
            (v * 1000.0).round() / 1000.0
        })
        .collect()
}

/// One week of hourly irradiance with daily mean `mean` (daylight 06–18 h).
fn solar_week(mean: f64) -> Vec<f64> {
    (0..HOURS_PER_WEEK)
        .map(|h| {
            let hod = (h % 24) as f64 + 0.5;
            let v = if (6.0..18.0).contains(&hod) {
                mean * PI * ((hod - 6.0) / 12.0 * PI).sin()
            } else {
                0.0
            };
            (v * 1000.0).round() / 1000.0
        })
        .collect()
}

/// Grid nodes nearest to points every `step_km` along the route.
fn nodes_along(route: &RoutePath, r: &Raster, step_km: f64) -> Vec<(usize, usize)> {
    let mut out = std::collections::BTreeSet::new();
    let total = route.total_length_km();
    let mut a = 0.0;
    while a <= total {
        let (lat, lon) = route.position_at(a);
        if let Some(n) = r.nearest_node(lat, lon) {
            out.insert(n);
        }
        a += step_km;
    }
    out.into_iter().collect()
}

fn build_grid(
    route: &RoutePath,
    bbox: (f64, f64, f64, f64),
    cell: f64,
    depth: impl Fn(f64, f64) -> f64,
    wind: impl Fn(f64, f64) -> f64,
    wave: impl Fn(f64, f64) -> f64,
    solar: impl Fn(f64, f64) -> f64,
) -> GeoGrid {
    let depth_m = raster(bbox, cell, depth);
    let wind_speed_mps = raster(bbox, cell, wind);
    let wave_height_m = raster(bbox, cell, wave);
    let solar_radiation_wpm2 = raster(bbox, cell, solar);
    let mut ws = NodeSeries::new();
    let mut ss = NodeSeries::new();
    for (row, col) in nodes_along(route, &wind_speed_mps, 2.0) {
        ws.insert(row, col, wind_week(wind_speed_mps.node(row, col), row, col))
            .expect("generated series is valid");
        ss.insert(row, col, solar_week(solar_radiation_wpm2.node(row, col)))
            .expect("generated series is valid");
    }
    GeoGrid {
        depth_m,
        wind_speed_mps,
        wave_height_m,
        solar_radiation_wpm2,
        wind_series: Some(ws),
        solar_series: Some(ss),
    }
}

pub fn demo_grid() -> GeoGrid {
    build_grid(
        &demo_route(),
        DEMO_BOX,
        DEMO_CELL,
        demo_depth,
        demo_wind,
        demo_wave,
        demo_solar,
    )
}

/// Fuel and carbon coefficients of the conventional fleet in the demo.
pub fn demo_ice_params() -> IceBaselineParams {
    IceBaselineParams::from_registry(&ShipRegistry::default_clusters().with_bulk_variants(), 400.0, 175.0, 3.114, 15.0)
}

pub fn demo_costs() -> CostParams {
    CostParams {
        platform: PlatformCostParams {
            c0_fixed_usd: 60e6,
            c0_float_usd: 120e6,
            mu_d_fixed: 0.7e6,
            mu_d_float: 0.24e6,
            mu_v_float: 4.0e6,
            mu_h_float: 8.0e6,
            d0_m: 30.0,
            v0_mps: 8.0,
            h0_m: 1.5,
        },
        endowment: ResEndowmentParams {
            k_w: 12.0,
            k_pv: 1.0,
            n_w_max: 120,
            n_pv_max: 400,
        },
        station_prices: StationPrices {
            mu_res_usd_per_kw: 1_400.0,
            mu_bess_usd_per_kwh: 180.0,
            mu_char_usd_per_kw: 90.0,
        },
        economics: ShipEconomics {
            cargo_rate_usd_per_teu: 120.0,
            port_prices: [("shanghai".to_string(), 0.087), ("busan".to_string(), 0.099)].into(),
            charge_c_rate: 1.0,
        },
        battery: BatteryTech::for_year(2023).expect("known year"),
        ice: Some(demo_ice_params()),
    }
}

/// Mixes of the ship-mix sweep: bulk-dominated, average and container-dominated.
pub fn demo_ship_mixes() -> Vec<NamedMix> {
    let mix = |name: &str, bulk: f64, container: f64| NamedMix {
        name: name.to_string(),
        mix: [("bulk".to_string(), bulk), ("container".to_string(), container)].into(),
    };
    vec![
        mix("bulk-dominated", 0.8, 0.2),
        mix("average", 0.18, 0.82),
        mix("container-dominated", 0.05, 0.95),
    ]
}

pub fn demo_traffic() -> SyntheticTraffic {
    SyntheticTraffic {
        seed: 2023,
        weekly_voyages: 60,
        mix: [("bulk".to_string(), 0.18), ("container".to_string(), 0.82)].into(),
        scenarios: 2,
        weeks_lifetime: DEFAULT_WEEKS_LIFETIME,
    }
}

fn grid_paths() -> GridPaths {
    GridPaths {
        depth: "grid/depth.json".into(),
        wind: "grid/wind.json".into(),
        wave: "grid/wave.json".into(),
        solar: "grid/solar.json".into(),
        wind_series: Some("grid/wind_series.csv".into()),
        solar_series: Some("grid/solar_series.csv".into()),
    }
}

/// Config of the demo corridor with paths relative to its directory.
pub fn demo_config() -> RunConfig {
    RunConfig {
        route: RouteConfig {
            csv: "route.csv".into(),
            port_start: PortLabel::new("Shanghai", "shanghai"),
            port_end: PortLabel::new("Busan", "busan"),
        },
        grid: grid_paths(),
        traffic: TrafficSource::Synthetic(demo_traffic()),
        ships: None,
        costs: "costs.json".into(),
        candidate_spacing_km: 25.0,
        tradeoff: TradeoffSettings::default(),
        sizing: SizingConfig {
            grid_points: 10,
            refinement_passes: 1,
            ..SizingConfig::default()
        },
        search: SearchConfig::default(),
        ocs_cost_scale: 1.0,
        traffic_volume: 1.0,
        sweeps: SweepDefaults {
            ocs_cost_scales: vec![1.0, 0.8, 0.6, 0.4],
            traffic_factors: (1..=10).map(|k| k as f64 / 10.0).collect(),
            ship_mixes: demo_ship_mixes(),
            ship_mix_traffic: None,
        },
        tradeoff_curves: Some(TradeoffRequest {
            class: "Small Neo-Panamax".into(),
            densities_wh_per_l: vec![300.0, 700.0, 1200.0],
            ranges_km: (1..=20).map(|k| k as f64 * 500.0).collect(),
        }),
        calibration: Some(CalibrationRequest {
            class: "Small Neo-Panamax".into(),
            range_km: 5000.0,
            battery_m3: 15_834.0,
            density_wh_per_l: 300.0,
        }),
        output_dir: "out".into(),
        seed: None,
    }
}

fn write_dataset(dir: &Path, cfg: &RunConfig, route: &RoutePath, grid: &GeoGrid, costs: &CostParams) -> Result<PathBuf> {
    let grid_dir = dir.join("grid");
    std::fs::create_dir_all(&grid_dir).map_err(|e| Error::io(&grid_dir, e))?;
    write_route_csv(dir.join(&cfg.route.csv), route)?;
    grid.depth_m.write(&grid_dir, "depth", "depth", "m")?;
    grid.wind_speed_mps.write(&grid_dir, "wind", "wind_speed", "m/s")?;
    grid.wave_height_m.write(&grid_dir, "wave", "wave_height", "m")?;
    grid.solar_radiation_wpm2.write(&grid_dir, "solar", "solar_radiation", "W/m2")?;
    if let Some(s) = &grid.wind_series {
        s.write(grid_dir.join("wind_series.csv"))?;
    }
    if let Some(s) = &grid.solar_series {
        s.write(grid_dir.join("solar_series.csv"))?;
    }
    costs.write(dir.join(&cfg.costs))?;
    let path = dir.join("run.json");
    cfg.write(&path)?;
    Ok(path)
}

/// Writes the demo dataset into `dir`; returns the config path.
pub fn write_demo(dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    write_dataset(dir, &demo_config(), &demo_route(), &demo_grid(), &demo_costs())
}

/// A 300 km meridian route with three candidates and light feeder traffic.
pub fn tiny_route() -> RoutePath {
    RoutePath::meridian(30.0, 122.0, 600.0).expect("valid")
}

pub fn tiny_grid() -> GeoGrid {
    build_grid(
        &tiny_route(),
        (29.5, 121.5, 36.0, 122.5),
        0.5,
        |lat, _| 20.0 + 15.0 * (lat - 29.5),
        |_, _| 8.0,
        |_, _| 1.5,
        |_, _| 170.0,
    )
}

pub fn tiny_costs() -> CostParams {
    let mut c = demo_costs();
    c.economics.port_prices = BTreeMap::from([("origin".to_string(), 0.087), ("destination".to_string(), 0.099)]);
    c.battery = BatteryTech::for_year(2023).expect("known year");
    c.platform = c.platform.scaled(0.2);
    c.station_prices = c.station_prices.scaled(0.3);
    c
}

pub fn tiny_config() -> RunConfig {
    let mut cfg = demo_config();
    cfg.route.port_start = PortLabel::new("origin", "origin");
    cfg.route.port_end = PortLabel::new("destination", "destination");
    cfg.traffic = TrafficSource::Synthetic(SyntheticTraffic::new(
        7,
        8,
        &[("Small Feeder", 0.5), ("Middle Feeder", 0.5)],
    ));
    cfg.candidate_spacing_km = 150.0;
    cfg.sizing = SizingConfig {
        grid_points: 6,
        refinement_passes: 1,
        ..SizingConfig::default()
    };
    cfg.sweeps.ship_mixes = vec![NamedMix {
        name: "feeders".into(),
        mix: [("Small Feeder".to_string(), 0.5), ("Middle Feeder".to_string(), 0.5)].into(),
    }];
    cfg.tradeoff_curves = Some(TradeoffRequest {
        class: "Middle Feeder".into(),
        densities_wh_per_l: vec![300.0, 700.0, 1200.0],
        ranges_km: vec![100.0, 200.0, 300.0],
    });
    cfg
}

pub fn write_tiny(dir: impl AsRef<Path>) -> Result<PathBuf> {
    write_dataset(dir.as_ref(), &tiny_config(), &tiny_route(), &tiny_grid(), &tiny_costs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_route_is_about_900_km() {
        let l = demo_route().total_length_km();
        assert!((880.0..920.0).contains(&l), "{l}");
    }

    #[test]
    fn demo_dataset_loads() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_demo(dir.path()).unwrap();
        let cfg = RunConfig::read(&path).unwrap();
        let inputs = cfg.load().unwrap();
        let p = cfg.problem(&inputs).unwrap();
        assert_eq!(p.n_candidates(), 36);
    }

    #[test]
    fn tiny_dataset_plans() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_tiny(dir.path()).unwrap();
        let cfg = RunConfig::read(&path).unwrap();
        let p = cfg.problem(&cfg.load().unwrap()).unwrap();
        assert_eq!(p.n_candidates(), 3);
        crate::planner::optimize(&p, &cfg.search).unwrap();
    }
}
