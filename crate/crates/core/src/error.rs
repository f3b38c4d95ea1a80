use std::path::PathBuf;

use thiserror::Error;

use crate::planner::InfeasibilityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("spacing exceeds route: spacing {spacing_km} km is not shorter than the {route_km} km route")]
    SpacingExceedsRoute { spacing_km: f64, route_km: f64 },

    #[error("grid coverage: route position {arc_km:.3} km ({lat:.4}, {lon:.4}) lies outside the {field} grid")]
    GridCoverage {
        field: &'static str,
        arc_km: f64,
        lat: f64,
        lon: f64,
    },

    #[error("missing {field} time series for site {site} (grid node row {row}, col {col})")]
    MissingSeries {
        site: usize,
        field: &'static str,
        row: usize,
        col: usize,
    },

    #[error("trade-off divergence for `{ship}` at {range_km} km after {iterations} iterations (last battery {last_battery_kwh} kWh, draught change {last_delta_draught_m} m)")]
    TradeoffDivergence {
        ship: String,
        range_km: f64,
        iterations: usize,
        last_battery_kwh: f64,
        last_delta_draught_m: f64,
    },

    #[error("infeasible range: `{ship}` cannot cover {range_km} km ({reason})")]
    InfeasibleRange {
        ship: String,
        range_km: f64,
        reason: String,
    },

    #[error("unknown ship class `{name}`; valid classes: {valid}")]
    UnknownClass { name: String, valid: String },

    #[error("{path}: row {row}, column `{column}`: {message}")]
    Schema {
        path: String,
        row: usize,
        column: String,
        message: String,
    },

    #[error("no traffic: the weighted weekly voyage count is zero")]
    NoTraffic,

    #[error("zero energy: LCOE needs a positive lifetime energy")]
    ZeroEnergy,

    #[error("unknown sweep kind `{0}`; expected one of: ocs-cost, traffic, ship-mix")]
    UnknownSweep(String),

    #[error("infeasible plan: {0}")]
    Infeasible(Box<InfeasibilityReport>),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("{context}: {source}")]
    Csv {
        context: String,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
