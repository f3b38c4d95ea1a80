//! Run configuration: a JSON file naming the input files and parameters of
//! a planning run. Relative paths are resolved against the config file's
//! directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dispatch::{SizingConfig, StationPrices};
use crate::error::{Error, Result};
use crate::geo::{read_route_csv, sample_candidates, GeoGrid, GridPaths, PortLabel, RoutePath};
use crate::planner::{prepare_sites, Problem, ProblemInputs, SearchConfig, ShipEconomics};
use crate::sensitivity::{IceBaselineParams, NamedMix};
use crate::ship::{BatteryTech, ShipRegistry, TradeoffSettings};
use crate::site_cost::{PlatformCostParams, ResEndowmentParams};
use crate::traffic::{generate_synthetic_traffic, load_traffic, ScenarioSet, SyntheticTraffic};

pub const DEFAULT_SPACING_KM: f64 = 25.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteConfig {
    /// Polyline CSV with columns `lat,lon`.
    pub csv: PathBuf,
    pub port_start: PortLabel,
    pub port_end: PortLabel,
}

/// Traffic either from scenario files or generated from a seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrafficSource {
    /// Path to a scenario index JSON.
    Scenarios(PathBuf),
    Synthetic(SyntheticTraffic),
}

/// Contents of the cost-parameter file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    pub platform: PlatformCostParams,
    pub endowment: ResEndowmentParams,
    pub station_prices: StationPrices,
    pub economics: ShipEconomics,
    pub battery: BatteryTech,
    #[serde(default)]
    pub ice: Option<IceBaselineParams>,
}

impl CostParams {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        read_json(path.as_ref(), "cost parameters")
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path.as_ref(), self)
    }

    pub fn validate(&self) -> Result<()> {
        self.platform.validate()?;
        self.endowment.validate()?;
        self.station_prices.validate()?;
        self.battery.validate()?;
        if let Some(ice) = &self.ice {
            ice.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepDefaults {
    pub ocs_cost_scales: Vec<f64>,
    pub traffic_factors: Vec<f64>,
    pub ship_mixes: Vec<NamedMix>,
    /// Traffic generator for ship-mix rows; defaults to the run's synthetic traffic.
    pub ship_mix_traffic: Option<SyntheticTraffic>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffRequest {
    pub class: String,
    pub densities_wh_per_l: Vec<f64>,
    pub ranges_km: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRequest {
    pub class: String,
    pub range_km: f64,
    pub battery_m3: f64,
    pub density_wh_per_l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub route: RouteConfig,
    pub grid: GridPaths,
    pub traffic: TrafficSource,
    /// Ship class table; the built-in clusters (with bulk variants) when absent.
    #[serde(default)]
    pub ships: Option<PathBuf>,
    pub costs: PathBuf,
    #[serde(default = "default_spacing")]
    pub candidate_spacing_km: f64,
    #[serde(default)]
    pub tradeoff: TradeoffSettings,
    #[serde(default)]
    pub sizing: SizingConfig,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default = "unit")]
    pub ocs_cost_scale: f64,
    #[serde(default = "unit")]
    pub traffic_volume: f64,
    #[serde(default)]
    pub sweeps: SweepDefaults,
    #[serde(default)]
    pub tradeoff_curves: Option<TradeoffRequest>,
    #[serde(default)]
    pub calibration: Option<CalibrationRequest>,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    /// Overrides the synthetic traffic seed when set.
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_spacing() -> f64 {
    DEFAULT_SPACING_KM
}

fn unit() -> f64 {
    1.0
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        context: format!("reading {what} {}", path.display()),
        source,
    })
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        context: format!("writing {}", path.display()),
        source,
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

impl RunConfig {
    /// Reads a config and makes every path absolute relative to it.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg: RunConfig = read_json(path, "run config")?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path.as_ref(), self)
    }

    fn resolve_paths(&mut self, base: &Path) {
        self.route.csv = base.join(&self.route.csv);
        self.grid = self.grid.resolve(base);
        if let TrafficSource::Scenarios(p) = &mut self.traffic {
            *p = base.join(&*p);
        }
        if let Some(p) = &mut self.ships {
            *p = base.join(&*p);
        }
        self.costs = base.join(&self.costs);
        self.output_dir = base.join(&self.output_dir);
    }

    /// Every input file the run reads.
    pub fn input_files(&self) -> Vec<&Path> {
        let mut v: Vec<&Path> = vec![&self.route.csv, &self.costs];
        v.extend(self.grid.all());
        if let TrafficSource::Scenarios(p) = &self.traffic {
            v.push(p);
        }
        v.extend(self.ships.as_deref());
        v
    }

    /// Checks existence of all files, then loads and validates every input.
    pub fn load(&self) -> Result<RunInputs> {
        for p in self.input_files() {
            if !p.is_file() {
                return Err(Error::io(
                    p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "input file not found"),
                ));
            }
        }
        if !(self.candidate_spacing_km > 0.0) {
            return Err(Error::validation("candidate spacing must be positive"));
        }
        let route = read_route_csv(&self.route.csv, self.route.port_start.clone(), self.route.port_end.clone())?;
        let grid = self.grid.load()?;
        let costs = CostParams::read(&self.costs)?;
        costs.validate()?;
        let ships = match &self.ships {
            Some(p) => ShipRegistry::read_csv(p)?,
            None => ShipRegistry::default_clusters().with_bulk_variants(),
        };
        let traffic = match &self.traffic {
            TrafficSource::Scenarios(p) => load_traffic(p, &ships)?,
            TrafficSource::Synthetic(s) => generate_synthetic_traffic(&self.synthetic_spec(s), &ships)?,
        };
        Ok(RunInputs {
            route,
            grid,
            costs,
            ships,
            traffic,
        })
    }

    fn synthetic_spec(&self, s: &SyntheticTraffic) -> SyntheticTraffic {
        SyntheticTraffic {
            seed: self.seed.unwrap_or(s.seed),
            ..s.clone()
        }
    }

    /// Generator settings for ship-mix sweeps.
    pub fn ship_mix_traffic(&self) -> Option<SyntheticTraffic> {
        match (&self.sweeps.ship_mix_traffic, &self.traffic) {
            (Some(s), _) | (None, TrafficSource::Synthetic(s)) => Some(self.synthetic_spec(s)),
            _ => None,
        }
    }

    /// Builds the planning problem from loaded inputs.
    pub fn problem(&self, inputs: &RunInputs) -> Result<Problem> {
        let candidates = sample_candidates(&inputs.route, &inputs.grid, self.candidate_spacing_km)?;
        let sites = prepare_sites(&candidates, &inputs.grid, &inputs.costs.platform, &inputs.costs.endowment)?;
        Problem::new(ProblemInputs {
            route: inputs.route.clone(),
            sites,
            station_prices: inputs.costs.station_prices.clone(),
            ships: inputs.ships.clone(),
            battery: inputs.costs.battery.clone(),
            traffic: inputs.traffic.clone(),
            economics: inputs.costs.economics.clone(),
            tradeoff: self.tradeoff.clone(),
            sizing: self.sizing.clone(),
            ocs_cost_scale: self.ocs_cost_scale,
            traffic_volume: self.traffic_volume,
        })
    }
}

/// Loaded and validated run inputs.
#[derive(Debug, Clone)]
pub struct RunInputs {
    pub route: RoutePath,
    pub grid: GeoGrid,
    pub costs: CostParams,
    pub ships: ShipRegistry,
    pub traffic: ScenarioSet,
}
