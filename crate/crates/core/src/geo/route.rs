use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius used for every great-circle distance in the crate.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Great-circle distance between two (lat, lon) points in degrees.
pub fn haversine_km(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (lat1, lon1) = (a.0.to_radians(), a.1.to_radians());
    let (lat2, lon2) = (b.0.to_radians(), b.1.to_radians());
    let dlat = lat2 - lat1;
    let dlon = lon2 - lon1;
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub lat: f64,
    pub lon: f64,
    pub arc_km: f64,
}

/// A port at one end of the route. `price_key` selects the onshore
/// electricity price in the economics table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortLabel {
    pub name: String,
    pub price_key: String,
}

impl PortLabel {
    pub fn new(name: impl Into<String>, price_key: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            price_key: price_key.into(),
        }
    }
}

/// The route polyline reduced to a 1-D arc-length axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutePath {
    waypoints: Vec<Waypoint>,
    pub port_start: PortLabel,
    pub port_end: PortLabel,
}

impl RoutePath {
    /// Builds a route from explicit waypoints. Arc positions must start at
    /// zero and increase strictly.
    pub fn from_waypoints(
        waypoints: Vec<Waypoint>,
        port_start: PortLabel,
        port_end: PortLabel,
    ) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::validation("a route needs at least two waypoints"));
        }
        if waypoints[0].arc_km != 0.0 {
            return Err(Error::validation(format!(
                "first waypoint arc must be 0, got {}",
                waypoints[0].arc_km
            )));
        }
        for (i, w) in waypoints.windows(2).enumerate() {
            if !(w[1].arc_km > w[0].arc_km) || !w[1].arc_km.is_finite() {
                return Err(Error::validation(format!(
                    "waypoint arcs must increase strictly (waypoint {} at {} km after {} km)",
                    i + 1,
                    w[1].arc_km,
                    w[0].arc_km
                )));
            }
        }
        Ok(Self {
            waypoints,
            port_start,
            port_end,
        })
    }

    /// Builds a route from a (lat, lon) polyline, accumulating haversine arc length.
    pub fn from_coords(
        coords: &[(f64, f64)],
        port_start: PortLabel,
        port_end: PortLabel,
    ) -> Result<Self> {
        let mut waypoints = Vec::with_capacity(coords.len());
        let mut arc = 0.0;
        for (i, &(lat, lon)) in coords.iter().enumerate() {
            if !(-90.0..=90.0).contains(&lat) || !(-180.0..=360.0).contains(&lon) {
                return Err(Error::validation(format!(
                    "route point {i} has invalid coordinates ({lat}, {lon})"
                )));
            }
            if i > 0 {
                arc += haversine_km(coords[i - 1], (lat, lon));
            }
            waypoints.push(Waypoint {
                lat,
                lon,
                arc_km: arc,
            });
        }
        Self::from_waypoints(waypoints, port_start, port_end)
    }

    /// A straight meridian route of the given length starting at (lat, lon),
    /// heading north. Handy for synthetic instances.
    pub fn meridian(start_lat: f64, lon: f64, length_km: f64) -> Result<Self> {
        if !(length_km > 0.0) {
            return Err(Error::validation("route length must be positive"));
        }
        let dlat = (length_km / EARTH_RADIUS_KM).to_degrees();
        let waypoints = vec![
            Waypoint {
                lat: start_lat,
                lon,
                arc_km: 0.0,
            },
            Waypoint {
                lat: start_lat + dlat,
                lon,
                arc_km: length_km,
            },
        ];
        Self::from_waypoints(
            waypoints,
            PortLabel::new("origin", "origin"),
            PortLabel::new("destination", "destination"),
        )
    }

    pub fn waypoints(&self) -> &[Waypoint] {
        &self.waypoints
    }

    pub fn total_length_km(&self) -> f64 {
        self.waypoints.last().map_or(0.0, |w| w.arc_km)
    }

    /// Linear interpolation of (lat, lon) at an arc position, clamped to the ends.
    pub fn position_at(&self, arc_km: f64) -> (f64, f64) {
        let wps = &self.waypoints;
        if arc_km <= 0.0 {
            return (wps[0].lat, wps[0].lon);
        }
        let idx = wps.partition_point(|w| w.arc_km < arc_km);
        if idx >= wps.len() {
            let last = wps.last().unwrap();
            return (last.lat, last.lon);
        }
        let b = &wps[idx];
        let a = &wps[idx - 1];
        let t = (arc_km - a.arc_km) / (b.arc_km - a.arc_km);
        (a.lat + t * (b.lat - a.lat), a.lon + t * (b.lon - a.lon))
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct RouteRow {
    lat: f64,
    lon: f64,
}

/// Reads a route polyline CSV with header `lat,lon`.
pub fn read_route_csv(
    path: impl AsRef<Path>,
    port_start: PortLabel,
    port_end: PortLabel,
) -> Result<RoutePath> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|source| Error::Csv {
        context: format!("reading route {}", path.display()),
        source,
    })?;
    let mut coords = Vec::new();
    for (i, row) in reader.deserialize::<RouteRow>().enumerate() {
        let row = row.map_err(|e| Error::Schema {
            path: path.display().to_string(),
            row: i + 1,
            column: "lat/lon".into(),
            message: e.to_string(),
        })?;
        coords.push((row.lat, row.lon));
    }
    RoutePath::from_coords(&coords, port_start, port_end)
}

pub fn write_route_csv(path: impl AsRef<Path>, route: &RoutePath) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|source| Error::Csv {
        context: format!("writing route {}", path.display()),
        source,
    })?;
    for w in route.waypoints() {
        writer
            .serialize(RouteRow {
                lat: w.lat,
                lon: w.lon,
            })
            .map_err(|source| Error::Csv {
                context: format!("writing route {}", path.display()),
                source,
            })?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
