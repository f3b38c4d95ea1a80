//! Route axis, gridded geography and candidate-site sampling.

mod grid;
mod route;

pub use grid::{
    representative_week, resample_to_hourly, GeoGrid, GridPaths, NodeSeries, Raster, RasterHeader,
};
pub(crate) use grid::sibling;
pub use route::{haversine_km, read_route_csv, write_route_csv, PortLabel, RoutePath, Waypoint, EARTH_RADIUS_KM};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Depth at or below which a monopile foundation is used.
pub const MONOPILE_MAX_DEPTH_M: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlatformKind {
    Monopile,
    Floating,
}

impl PlatformKind {
    pub fn for_depth(depth_m: f64) -> Self {
        if depth_m <= MONOPILE_MAX_DEPTH_M {
            PlatformKind::Monopile
        } else {
            PlatformKind::Floating
        }
    }
}

/// A possible charging-station location on the route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSite {
    pub index: usize,
    pub arc_km: f64,
    pub lat: f64,
    pub lon: f64,
    pub depth_m: f64,
    pub wind_mps: f64,
    pub wave_m: f64,
    pub solar_wpm2: f64,
    pub platform_kind: PlatformKind,
}

impl CandidateSite {
    /// A site with explicit geography; the platform kind follows the depth rule.
    pub fn new(index: usize, arc_km: f64, depth_m: f64, wind_mps: f64, wave_m: f64, solar_wpm2: f64) -> Self {
        Self {
            index,
            arc_km,
            lat: 0.0,
            lon: 0.0,
            depth_m,
            wind_mps,
            wave_m,
            solar_wpm2,
            platform_kind: PlatformKind::for_depth(depth_m),
        }
    }
}

/// Places candidates every `spacing_km` strictly inside the route and
/// samples the grid at each one.
pub fn sample_candidates(route: &RoutePath, grid: &GeoGrid, spacing_km: f64) -> Result<Vec<CandidateSite>> {
    let total = route.total_length_km();
    if !(spacing_km > 0.0) {
        return Err(Error::validation(format!("spacing must be positive, got {spacing_km}")));
    }
    if spacing_km >= total {
        return Err(Error::SpacingExceedsRoute {
            spacing_km,
            route_km: total,
        });
    }
    let limit = total * (1.0 - 1e-12);
    let mut sites = Vec::new();
    for k in 1.. {
        let arc_km = k as f64 * spacing_km;
        if arc_km >= limit {
            break;
        }
        let (lat, lon) = route.position_at(arc_km);
        let sample = |field: &'static str, raster: &Raster| {
            raster.sample(lat, lon).ok_or(Error::GridCoverage {
                field,
                arc_km,
                lat,
                lon,
            })
        };
        let depth_m = sample("depth", &grid.depth_m)?;
        let wind_mps = sample("wind", &grid.wind_speed_mps)?;
        let wave_m = sample("wave", &grid.wave_height_m)?;
        let solar_wpm2 = sample("solar", &grid.solar_radiation_wpm2)?;
        if depth_m < 0.0 {
            return Err(Error::validation(format!(
                "negative depth {depth_m} m at route position {arc_km} km"
            )));
        }
        if wind_mps < 0.0 || wave_m < 0.0 || solar_wpm2 < 0.0 {
            return Err(Error::validation(format!(
                "negative wind/wave/solar value at route position {arc_km} km"
            )));
        }
        sites.push(CandidateSite {
            index: k - 1,
            arc_km,
            lat,
            lon,
            depth_m,
            wind_mps,
            wave_m,
            solar_wpm2,
            platform_kind: PlatformKind::for_depth(depth_m),
        });
    }
    Ok(sites)
}

/// Lengths of the legs between consecutive charging points, ports included.
pub fn segment_lengths(route: &RoutePath, chosen_arcs: &[f64]) -> Result<Vec<f64>> {
    let total = route.total_length_km();
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(chosen_arcs.len() + 1);
    for &a in chosen_arcs {
        if !(a > 0.0 && a < total) {
            return Err(Error::validation(format!(
                "station arc {a} km is outside the open interval (0, {total})"
            )));
        }
        if a <= prev {
            return Err(Error::validation(format!(
                "station arcs must be strictly increasing and distinct ({a} km after {prev} km)"
            )));
        }
        out.push(a - prev);
        prev = a;
    }
    out.push(total - prev);
    Ok(out)
}

pub fn max_segment_km(route: &RoutePath, chosen_arcs: &[f64]) -> Result<f64> {
    Ok(segment_lengths(route, chosen_arcs)?
        .into_iter()
        .fold(0.0, f64::max))
}
