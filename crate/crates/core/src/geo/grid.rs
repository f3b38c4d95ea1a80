//! Gridded geographical fields.
//!
//! A [`Raster`] stores node values on a regular lat/lon lattice: row `r`
//! sits at `origin_lat + r * cell_deg`, column `c` at
//! `origin_lon + c * cell_deg`. Sampling between nodes is bilinear, so it
//! is exact at the nodes and never leaves the range of the four
//! surrounding node values.
//!
//! On disk every raster is a JSON header plus a headerless CSV matrix with
//! `n_rows` lines of `n_cols` values, row 0 first. Wind and solar may carry
//! an hourly companion series CSV with columns
//! `site_row,site_col,hour_index,value`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::HOURS_PER_WEEK;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterHeader {
    pub origin_lat: f64,
    pub origin_lon: f64,
    pub cell_deg: f64,
    pub n_rows: usize,
    pub n_cols: usize,
    pub field: String,
    pub units: String,
    /// Matrix file, relative to the header's directory.
    pub matrix_csv: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub origin_lat: f64,
    pub origin_lon: f64,
    pub cell_deg: f64,
    pub n_rows: usize,
    pub n_cols: usize,
    values: Vec<f64>,
}

impl Raster {
    pub fn new(
        origin_lat: f64,
        origin_lon: f64,
        cell_deg: f64,
        n_rows: usize,
        n_cols: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        if !(cell_deg > 0.0) {
            return Err(Error::validation(format!("cell size must be > 0, got {cell_deg}")));
        }
        if n_rows < 2 || n_cols < 2 {
            return Err(Error::validation("a raster needs at least 2x2 nodes"));
        }
        if values.len() != n_rows * n_cols {
            return Err(Error::validation(format!(
                "raster expects {} values ({n_rows}x{n_cols}), got {}",
                n_rows * n_cols,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("raster contains non-finite values"));
        }
        Ok(Self {
            origin_lat,
            origin_lon,
            cell_deg,
            n_rows,
            n_cols,
            values,
        })
    }

    /// A constant field covering the given box.
    pub fn uniform(lat_min: f64, lon_min: f64, lat_max: f64, lon_max: f64, value: f64) -> Self {
        let cell = 0.5;
        let n_rows = (((lat_max - lat_min) / cell).ceil() as usize + 1).max(2);
        let n_cols = (((lon_max - lon_min) / cell).ceil() as usize + 1).max(2);
        Self {
            origin_lat: lat_min,
            origin_lon: lon_min,
            cell_deg: cell,
            n_rows,
            n_cols,
            values: vec![value; n_rows * n_cols],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols + col]
    }

    pub fn node_position(&self, row: usize, col: usize) -> (f64, f64) {
        (
            self.origin_lat + row as f64 * self.cell_deg,
            self.origin_lon + col as f64 * self.cell_deg,
        )
    }

    fn fractional_index(&self, lat: f64, lon: f64) -> Option<(f64, f64)> {
        const EDGE: f64 = 1e-9;
        let fr = (lat - self.origin_lat) / self.cell_deg;
        let fc = (lon - self.origin_lon) / self.cell_deg;
        let max_r = (self.n_rows - 1) as f64;
        let max_c = (self.n_cols - 1) as f64;
        if fr < -EDGE || fc < -EDGE || fr > max_r + EDGE || fc > max_c + EDGE {
            return None;
        }
        Some((fr.clamp(0.0, max_r), fc.clamp(0.0, max_c)))
    }

    /// Bilinear sample; `None` outside the raster extent.
    pub fn sample(&self, lat: f64, lon: f64) -> Option<f64> {
        let (fr, fc) = self.fractional_index(lat, lon)?;
        let r0 = (fr.floor() as usize).min(self.n_rows - 2);
        let c0 = (fc.floor() as usize).min(self.n_cols - 2);
        let tr = fr - r0 as f64;
        let tc = fc - c0 as f64;
        let v00 = self.node(r0, c0);
        let v01 = self.node(r0, c0 + 1);
        let v10 = self.node(r0 + 1, c0);
        let v11 = self.node(r0 + 1, c0 + 1);
        let top = v00 + tc * (v01 - v00);
        let bottom = v10 + tc * (v11 - v10);
        Some(top + tr * (bottom - top))
    }

    pub fn nearest_node(&self, lat: f64, lon: f64) -> Option<(usize, usize)> {
        let (fr, fc) = self.fractional_index(lat, lon)?;
        Some((fr.round() as usize, fc.round() as usize))
    }

    pub fn read(header_path: impl AsRef<Path>) -> Result<(RasterHeader, Self)> {
        let header_path = header_path.as_ref();
        let text = std::fs::read_to_string(header_path).map_err(|e| Error::io(header_path, e))?;
        let header: RasterHeader = serde_json::from_str(&text).map_err(|source| Error::Json {
            context: format!("parsing raster header {}", header_path.display()),
            source,
        })?;
        let matrix_path = sibling(header_path, &header.matrix_csv);
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_path(&matrix_path)
            .map_err(|source| Error::Csv {
                context: format!("reading raster matrix {}", matrix_path.display()),
                source,
            })?;
        let mut values = Vec::with_capacity(header.n_rows * header.n_cols);
        for (r, record) in reader.records().enumerate() {
            let record = record.map_err(|source| Error::Csv {
                context: format!("reading raster matrix {}", matrix_path.display()),
                source,
            })?;
            if record.len() != header.n_cols {
                return Err(Error::Schema {
                    path: matrix_path.display().to_string(),
                    row: r + 1,
                    column: "*".into(),
                    message: format!("expected {} columns, found {}", header.n_cols, record.len()),
                });
            }
            for (c, cell) in record.iter().enumerate() {
                let v: f64 = cell.trim().parse().map_err(|_| Error::Schema {
                    path: matrix_path.display().to_string(),
                    row: r + 1,
                    column: c.to_string(),
                    message: format!("not a number: `{cell}`"),
                })?;
                values.push(v);
            }
        }
        let raster = Raster::new(
            header.origin_lat,
            header.origin_lon,
            header.cell_deg,
            header.n_rows,
            header.n_cols,
            values,
        )?;
        Ok((header, raster))
    }

    /// Writes `<dir>/<name>.json` and `<dir>/<name>.csv`.
    pub fn write(&self, dir: impl AsRef<Path>, name: &str, field: &str, units: &str) -> Result<PathBuf> {
        let dir = dir.as_ref();
        let header = RasterHeader {
            origin_lat: self.origin_lat,
            origin_lon: self.origin_lon,
            cell_deg: self.cell_deg,
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            field: field.to_string(),
            units: units.to_string(),
            matrix_csv: format!("{name}.csv"),
        };
        let matrix_path = dir.join(&header.matrix_csv);
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(&matrix_path)
            .map_err(|source| Error::Csv {
                context: format!("writing raster matrix {}", matrix_path.display()),
                source,
            })?;
        for row in self.values.chunks(self.n_cols) {
            writer
                .write_record(row.iter().map(|v| format!("{v}")))
                .map_err(|source| Error::Csv {
                    context: format!("writing raster matrix {}", matrix_path.display()),
                    source,
                })?;
        }
        writer.flush().map_err(|e| Error::io(&matrix_path, e))?;
        let header_path = dir.join(format!("{name}.json"));
        let text = serde_json::to_string_pretty(&header).map_err(|source| Error::Json {
            context: "serializing raster header".into(),
            source,
        })?;
        std::fs::write(&header_path, text + "\n").map_err(|e| Error::io(&header_path, e))?;
        Ok(header_path)
    }
}

pub(crate) fn sibling(anchor: &Path, relative: &str) -> PathBuf {
    let rel = Path::new(relative);
    if rel.is_absolute() {
        rel.to_path_buf()
    } else {
        anchor.parent().unwrap_or_else(|| Path::new(".")).join(rel)
    }
}

/// Hourly series attached to raster nodes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeSeries {
    series: BTreeMap<(usize, usize), Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SeriesRow {
    site_row: usize,
    site_col: usize,
    hour_index: usize,
    value: f64,
}

impl NodeSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the series for one node. Its length must be a whole number of weeks.
    pub fn insert(&mut self, row: usize, col: usize, values: Vec<f64>) -> Result<()> {
        if values.is_empty() || !values.len().is_multiple_of(HOURS_PER_WEEK) {
            return Err(Error::validation(format!(
                "series for node ({row}, {col}) has {} hours; must be a positive multiple of {HOURS_PER_WEEK}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::validation(format!(
                "series for node ({row}, {col}) contains negative or non-finite values"
            )));
        }
        self.series.insert((row, col), values);
        Ok(())
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&[f64]> {
        self.series.get(&(row, col)).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// The representative week of a node: hour-of-week mean over all weeks.
    pub fn representative_week(&self, row: usize, col: usize) -> Option<Vec<f64>> {
        self.get(row, col).map(representative_week)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::Reader::from_path(path).map_err(|source| Error::Csv {
            context: format!("reading series {}", path.display()),
            source,
        })?;
        let mut raw: BTreeMap<(usize, usize), BTreeMap<usize, f64>> = BTreeMap::new();
        for (i, row) in reader.deserialize::<SeriesRow>().enumerate() {
            let row = row.map_err(|e| Error::Schema {
                path: path.display().to_string(),
                row: i + 1,
                column: "site_row/site_col/hour_index/value".into(),
                message: e.to_string(),
            })?;
            raw.entry((row.site_row, row.site_col))
                .or_default()
                .insert(row.hour_index, row.value);
        }
        let mut out = NodeSeries::new();
        for ((r, c), hours) in raw {
            let n = hours.len();
            if hours.keys().copied().ne(0..n) {
                return Err(Error::Schema {
                    path: path.display().to_string(),
                    row: 0,
                    column: "hour_index".into(),
                    message: format!("node ({r}, {c}) has non-contiguous hour indices"),
                });
            }
            out.insert(r, c, hours.into_values().collect())?;
        }
        Ok(out)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let csv_err = |source| Error::Csv {
            context: format!("writing series {}", path.display()),
            source,
        };
        let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
        for (&(site_row, site_col), values) in &self.series {
            for (hour_index, &value) in values.iter().enumerate() {
                writer
                    .serialize(SeriesRow {
                        site_row,
                        site_col,
                        hour_index,
                        value,
                    })
                    .map_err(|source| Error::Csv {
                        context: format!("writing series {}", path.display()),
                        source,
                    })?;
            }
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }
}

/// Folds a whole number of weeks into one by hour-of-week averaging.
pub fn representative_week(values: &[f64]) -> Vec<f64> {
    let weeks = values.len() / HOURS_PER_WEEK;
    let mut week = vec![0.0; HOURS_PER_WEEK];
    for chunk in values.chunks_exact(HOURS_PER_WEEK) {
        for (acc, v) in week.iter_mut().zip(chunk) {
            *acc += v;
        }
    }
    for v in &mut week {
        *v /= weeks as f64;
    }
    week
}

/// Resamples a sub-hourly series (e.g. 10-minute readings, `per_hour = 6`)
/// to hourly means. Trailing samples that do not fill an hour are dropped.
pub fn resample_to_hourly(samples: &[f64], per_hour: usize) -> Result<Vec<f64>> {
    if per_hour == 0 {
        return Err(Error::validation("samples per hour must be positive"));
    }
    Ok(samples
        .chunks_exact(per_hour)
        .map(|c| c.iter().sum::<f64>() / per_hour as f64)
        .collect())
}

/// All geographical inputs sampled along the route.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoGrid {
    pub depth_m: Raster,
    pub wind_speed_mps: Raster,
    pub wave_height_m: Raster,
    pub solar_radiation_wpm2: Raster,
    pub wind_series: Option<NodeSeries>,
    pub solar_series: Option<NodeSeries>,
}

impl GeoGrid {
    /// Constant fields over a box, without time series.
    pub fn uniform(bbox: (f64, f64, f64, f64), depth: f64, wind: f64, wave: f64, solar: f64) -> Self {
        let (a, b, c, d) = bbox;
        Self {
            depth_m: Raster::uniform(a, b, c, d, depth),
            wind_speed_mps: Raster::uniform(a, b, c, d, wind),
            wave_height_m: Raster::uniform(a, b, c, d, wave),
            solar_radiation_wpm2: Raster::uniform(a, b, c, d, solar),
            wind_series: None,
            solar_series: None,
        }
    }
}

/// File locations of a [`GeoGrid`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPaths {
    pub depth: PathBuf,
    pub wind: PathBuf,
    pub wave: PathBuf,
    pub solar: PathBuf,
    #[serde(default)]
    pub wind_series: Option<PathBuf>,
    #[serde(default)]
    pub solar_series: Option<PathBuf>,
}

impl GridPaths {
    pub fn resolve(&self, base: &Path) -> GridPaths {
        let j = |p: &PathBuf| base.join(p);
        GridPaths {
            depth: j(&self.depth),
            wind: j(&self.wind),
            wave: j(&self.wave),
            solar: j(&self.solar),
            wind_series: self.wind_series.as_ref().map(j),
            solar_series: self.solar_series.as_ref().map(j),
        }
    }

    pub fn all(&self) -> Vec<&Path> {
        let mut v: Vec<&Path> = vec![&self.depth, &self.wind, &self.wave, &self.solar];
        v.extend(self.wind_series.as_deref());
        v.extend(self.solar_series.as_deref());
        v
    }

    pub fn load(&self) -> Result<GeoGrid> {
        for p in self.all() {
            if !p.exists() {
                return Err(Error::io(
                    p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "grid file not found"),
                ));
            }
        }
        let (_, depth_m) = Raster::read(&self.depth)?;
        let (_, wind_speed_mps) = Raster::read(&self.wind)?;
        let (_, wave_height_m) = Raster::read(&self.wave)?;
        let (_, solar_radiation_wpm2) = Raster::read(&self.solar)?;
        let wind_series = self.wind_series.as_ref().map(NodeSeries::read).transpose()?;
        let solar_series = self.solar_series.as_ref().map(NodeSeries::read).transpose()?;
        Ok(GeoGrid {
            depth_m,
            wind_speed_mps,
            wave_height_m,
            solar_radiation_wpm2,
            wind_series,
            solar_series,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> Raster {
        // 3 rows x 3 cols, value = 10*row + col
        let values = (0..3)
            .flat_map(|r| (0..3).map(move |c| (10 * r + c) as f64))
            .collect();
        Raster::new(30.0, 120.0, 1.0, 3, 3, values).unwrap()
    }

    #[test]
    fn exact_at_nodes() {
        let r = ramp();
        for row in 0..3 {
            for col in 0..3 {
                let (lat, lon) = r.node_position(row, col);
                assert_eq!(r.sample(lat, lon).unwrap(), r.node(row, col));
            }
        }
    }

    #[test]
    fn bilinear_midpoint() {
        let r = ramp();
        // corners 0,1,10,11 -> centre 5.5
        assert!((r.sample(30.5, 120.5).unwrap() - 5.5).abs() < 1e-12);
    }

    #[test]
    fn outside_extent_is_none() {
        let r = ramp();
        assert!(r.sample(29.9, 120.5).is_none());
        assert!(r.sample(31.0, 122.01).is_none());
    }

    #[test]
    fn representative_week_averages_weeks() {
        let mut v = vec![1.0; HOURS_PER_WEEK];
        v.extend(vec![3.0; HOURS_PER_WEEK]);
        assert!(representative_week(&v).iter().all(|&x| x == 2.0));
    }

    #[test]
    fn ten_minute_to_hourly() {
        let samples: Vec<f64> = (0..12).map(|i| i as f64).collect();
        assert_eq!(resample_to_hourly(&samples, 6).unwrap(), vec![2.5, 8.5]);
    }

    #[test]
    fn series_length_must_be_whole_weeks() {
        let mut s = NodeSeries::new();
        assert!(s.insert(0, 0, vec![1.0; 100]).is_err());
        assert!(s.insert(0, 0, vec![1.0; 336]).is_ok());
    }

    #[test]
    fn raster_and_series_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let r = ramp();
        let header = r.write(dir.path(), "depth", "depth_m", "m").unwrap();
        let (h, back) = Raster::read(&header).unwrap();
        assert_eq!(h.n_rows, 3);
        assert_eq!(back, r);

        let mut s = NodeSeries::new();
        s.insert(1, 2, (0..168).map(|h| h as f64 / 10.0).collect()).unwrap();
        let p = dir.path().join("wind_series.csv");
        s.write(&p).unwrap();
        assert_eq!(NodeSeries::read(&p).unwrap(), s);
    }

    proptest::proptest! {
        #[test]
        fn bilinear_bounded_by_cell_corners(
            vals in proptest::collection::vec(-50.0f64..50.0, 4),
            tr in 0.0f64..1.0, tc in 0.0f64..1.0,
        ) {
            let r = Raster::new(0.0, 0.0, 0.25, 2, 2, vals.clone()).unwrap();
            let v = r.sample(tr * 0.25, tc * 0.25).unwrap();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            proptest::prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
        }
    }
}
