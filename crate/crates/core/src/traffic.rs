//! Voyage records, weighted weekly scenarios and synthetic traffic.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::sibling;
use crate::ship::{is_bulk_class, ShipCluster, ShipRegistry, BULK_VARIANTS};
use crate::HOURS_PER_WEEK;

pub const TRAFFIC_HEADER: [&str; 7] = [
    "ship_id",
    "class_name",
    "departure_epoch_h",
    "speed_kn",
    "rated_power_kw",
    "teu",
    "direction",
];

/// Default service life in weeks (20 years).
pub const DEFAULT_WEEKS_LIFETIME: f64 = 1040.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Outbound,
    Inbound,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Outbound => "outbound",
            Direction::Inbound => "inbound",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "outbound" => Ok(Direction::Outbound),
            "inbound" => Ok(Direction::Inbound),
            other => Err(format!("expected `outbound` or `inbound`, got `{other}`")),
        }
    }
}

/// One departure along the route within a representative week.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoyageRecord {
    pub ship_id: String,
    pub class_name: String,
    pub departure_epoch_h: f64,
    pub speed_kn: f64,
    pub rated_power_kw: f64,
    pub teu: f64,
    pub direction: Direction,
}

impl VoyageRecord {
    /// Departure hour folded into the week.
    pub fn departure_hour_of_week(&self) -> f64 {
        self.departure_epoch_h.rem_euclid(HOURS_PER_WEEK as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub weight: f64,
    pub voyages: Vec<VoyageRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSet {
    pub scenarios: Vec<Scenario>,
    pub weeks_lifetime: f64,
}

impl ScenarioSet {
    pub fn single(voyages: Vec<VoyageRecord>) -> Self {
        Self {
            scenarios: vec![Scenario { weight: 1.0, voyages }],
            weeks_lifetime: DEFAULT_WEEKS_LIFETIME,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenarios.is_empty() {
            return Err(Error::validation("a scenario set needs at least one scenario"));
        }
        if !(self.weeks_lifetime >= 1.0) {
            return Err(Error::validation(format!(
                "weeks_lifetime must be >= 1, got {}",
                self.weeks_lifetime
            )));
        }
        if self.scenarios.iter().any(|s| !(s.weight > 0.0)) {
            return Err(Error::validation("scenario weights must be positive"));
        }
        let sum: f64 = self.scenarios.iter().map(|s| s.weight).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::validation(format!("scenario weights sum to {sum}, not 1")));
        }
        Ok(())
    }

    /// Distinct class names used by any voyage, sorted.
    pub fn class_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .scenarios
            .iter()
            .flat_map(|s| s.voyages.iter().map(|v| v.class_name.clone()))
            .collect();
        names.sort();
        names.dedup();
        names
    }
}

/// Scenario-weighted number of voyages per week.
pub fn weekly_traffic_weight(set: &ScenarioSet) -> f64 {
    set.scenarios.iter().map(|s| s.weight * s.voyages.len() as f64).sum()
}

fn normalize_weights(weights: &mut [f64], what: &str) -> Result<()> {
    if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::validation(format!("{what} must be positive")));
    }
    let sum: f64 = weights.iter().sum();
    let off = (sum - 1.0).abs();
    if off > 1e-6 {
        return Err(Error::validation(format!("{what} sum to {sum}; expected 1")));
    }
    if off > 0.0 {
        if off > 1e-12 {
            log::warn!("{what} sum to {sum}; normalising");
        }
        weights.iter_mut().for_each(|w| *w /= sum);
    }
    Ok(())
}

/// Reads a traffic CSV. Blank class names are assigned by TEU cluster;
/// named classes must exist in `registry`.
pub fn read_traffic_csv(path: impl AsRef<Path>, registry: &ShipRegistry) -> Result<Vec<VoyageRecord>> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| Error::Csv {
            context: format!("reading traffic {display}"),
            source,
        })?;
    let headers = reader.headers().map_err(|source| Error::Csv {
        context: format!("reading traffic {display}"),
        source,
    })?;
    let found: Vec<&str> = headers.iter().collect();
    if found != TRAFFIC_HEADER {
        return Err(Error::Schema {
            path: display,
            row: 0,
            column: "header".into(),
            message: format!("expected `{}`, found `{}`", TRAFFIC_HEADER.join(","), found.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::Schema {
            path: display.clone(),
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        let bad = |col: usize, message: String| Error::Schema {
            path: display.clone(),
            row,
            column: TRAFFIC_HEADER[col].into(),
            message,
        };
        let num = |col: usize| -> Result<f64> {
            let raw = &rec[col];
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(col, format!("`{raw}` is not a number")))
        };
        let ship_id = rec[0].to_string();
        let departure_epoch_h = num(2)?;
        let speed_kn = num(3)?;
        if !(speed_kn > 0.0) {
            return Err(bad(3, format!("speed must be positive, got {speed_kn}")));
        }
        let rated_power_kw = num(4)?;
        if rated_power_kw < 0.0 {
            return Err(bad(4, format!("rated power must be >= 0, got {rated_power_kw}")));
        }
        let teu = num(5)?;
        if !(teu > 0.0) {
            return Err(bad(5, format!("TEU must be positive, got {teu}")));
        }
        let direction = rec[6].parse::<Direction>().map_err(|m| bad(6, m))?;
        let class_name = if rec[1].is_empty() {
            ShipCluster::from_teu(teu.round().min(u32::MAX as f64) as u32).name().to_string()
        } else {
            registry
                .get(&rec[1])
                .map_err(|e| bad(1, e.to_string()))?
                .name
                .clone()
        };
        out.push(VoyageRecord {
            ship_id,
            class_name,
            departure_epoch_h,
            speed_kn,
            rated_power_kw,
            teu,
            direction,
        });
    }
    Ok(out)
}

pub fn write_traffic_csv(path: impl AsRef<Path>, voyages: &[VoyageRecord]) -> Result<()> {
    let path = path.as_ref();
    let err = |source| Error::Csv {
        context: format!("writing traffic {}", path.display()),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(TRAFFIC_HEADER).map_err(err)?;
    for v in voyages {
        w.write_record([
            v.ship_id.clone(),
            v.class_name.clone(),
            v.departure_epoch_h.to_string(),
            v.speed_kn.to_string(),
            v.rated_power_kw.to_string(),
            v.teu.to_string(),
            v.direction.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFileEntry {
    pub weight: f64,
    pub traffic_csv: String,
}

/// Scenario index file: weights plus one traffic CSV per scenario, with
/// CSV paths relative to the index file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(default = "default_weeks")]
    pub weeks_lifetime: f64,
    pub scenarios: Vec<ScenarioFileEntry>,
}

fn default_weeks() -> f64 {
    DEFAULT_WEEKS_LIFETIME
}

impl ScenarioFile {
    pub fn csv_paths(&self, index_path: &Path) -> Vec<PathBuf> {
        self.scenarios
            .iter()
            .map(|s| sibling(index_path, &s.traffic_csv))
            .collect()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            context: format!("parsing scenario file {}", path.display()),
            source,
        })
    }
}

/// Loads a scenario index file and its traffic CSVs.
pub fn load_traffic(path: impl AsRef<Path>, registry: &ShipRegistry) -> Result<ScenarioSet> {
    let path = path.as_ref();
    let file = ScenarioFile::read(path)?;
    if file.scenarios.is_empty() {
        return Err(Error::validation(format!("{}: no scenarios listed", path.display())));
    }
    let mut weights: Vec<f64> = file.scenarios.iter().map(|s| s.weight).collect();
    normalize_weights(&mut weights, "scenario weights")?;
    let mut scenarios = Vec::with_capacity(weights.len());
    for (csv_path, weight) in file.csv_paths(path).into_iter().zip(weights) {
        scenarios.push(Scenario {
            weight,
            voyages: read_traffic_csv(&csv_path, registry)?,
        });
    }
    let set = ScenarioSet {
        scenarios,
        weeks_lifetime: file.weeks_lifetime,
    };
    set.validate()?;
    Ok(set)
}

/// Writes `scenarios.json` plus `traffic_<k>.csv` files into `dir`.
pub fn write_scenarios(dir: impl AsRef<Path>, set: &ScenarioSet) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut entries = Vec::new();
    for (k, s) in set.scenarios.iter().enumerate() {
        let name = format!("traffic_{k}.csv");
        write_traffic_csv(dir.join(&name), &s.voyages)?;
        entries.push(ScenarioFileEntry {
            weight: s.weight,
            traffic_csv: name,
        });
    }
    let file = ScenarioFile {
        weeks_lifetime: set.weeks_lifetime,
        scenarios: entries,
    };
    let path = dir.join("scenarios.json");
    let text = serde_json::to_string_pretty(&file).map_err(|source| Error::Json {
        context: "serialising scenario file".into(),
        source,
    })?;
    std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Parameters of generated traffic.
///
/// `mix` maps class names, or the group names `container` and `bulk`, to
/// fractions summing to one. A group's share is split evenly across its
/// classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticTraffic {
    pub seed: u64,
    pub weekly_voyages: usize,
    pub mix: BTreeMap<String, f64>,
    #[serde(default = "one")]
    pub scenarios: usize,
    #[serde(default = "default_weeks")]
    pub weeks_lifetime: f64,
}

fn one() -> usize {
    1
}

impl SyntheticTraffic {
    pub fn new(seed: u64, weekly_voyages: usize, mix: &[(&str, f64)]) -> Self {
        Self {
            seed,
            weekly_voyages,
            mix: mix.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            scenarios: 1,
            weeks_lifetime: DEFAULT_WEEKS_LIFETIME,
        }
    }
}

/// Service speed range in knots.
fn speed_range(class_name: &str) -> (f64, f64) {
    if is_bulk_class(class_name) {
        (11.0, 14.0)
    } else {
        (14.0, 19.0)
    }
}

/// Expands a mix into per-class fractions over registry classes.
pub fn expand_mix(mix: &BTreeMap<String, f64>, registry: &ShipRegistry) -> Result<Vec<(String, f64)>> {
    let total: f64 = mix.values().sum();
    if (total - 1.0).abs() > 1e-6 || mix.values().any(|f| !(*f >= 0.0)) {
        return Err(Error::validation(format!("mix fractions must be >= 0 and sum to 1, got {total}")));
    }
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    for (key, &frac) in mix {
        let members: Vec<String> = match key.to_ascii_lowercase().as_str() {
            "container" => ShipCluster::ALL.iter().map(|c| c.name().to_string()).collect(),
            "bulk" => BULK_VARIANTS.iter().map(|(n, _)| n.to_string()).collect(),
            _ => vec![registry.get(key)?.name.clone()],
        };
        for m in &members {
            registry.get(m)?;
            *out.entry(m.clone()).or_insert(0.0) += frac / members.len() as f64;
        }
    }
    // Registry order keeps the draw sequence independent of name sorting.
    Ok(registry
        .classes()
        .iter()
        .filter_map(|c| out.get(&c.name).map(|f| (c.name.clone(), *f)))
        .filter(|(_, f)| *f > 0.0)
        .collect())
}

/// Deterministic random traffic: uniform departures over the week, class
/// drawn from the mix, speed uniform in the class range.
pub fn generate_synthetic_traffic(synth: &SyntheticTraffic, registry: &ShipRegistry) -> Result<ScenarioSet> {
    let classes = expand_mix(&synth.mix, registry)?;
    let n_scen = synth.scenarios.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(synth.seed);
    let mut scenarios = Vec::with_capacity(n_scen);
    for s in 0..n_scen {
        let mut voyages = Vec::with_capacity(synth.weekly_voyages);
        if synth.weekly_voyages > 0 {
            let dist = WeightedIndex::new(classes.iter().map(|(_, f)| *f))
                .map_err(|e| Error::validation(format!("invalid mix: {e}")))?;
            for v in 0..synth.weekly_voyages {
                let (name, _) = &classes[dist.sample(&mut rng)];
                let class = registry.get(name)?;
                let (lo, hi) = speed_range(name);
                let speed_kn: f64 = rng.random_range(lo..hi);
                let departure: f64 = rng.random_range(0.0..HOURS_PER_WEEK as f64);
                let direction = if rng.random_bool(0.5) {
                    Direction::Outbound
                } else {
                    Direction::Inbound
                };
                let teu = (class.baseline_teu * rng.random_range(0.9..1.1)).round().max(1.0);
                voyages.push(VoyageRecord {
                    ship_id: format!("S{s}-{v:05}"),
                    class_name: name.clone(),
                    departure_epoch_h: (departure * 100.0).round() / 100.0,
                    speed_kn: (speed_kn * 100.0).round() / 100.0,
                    rated_power_kw: (class.k_adm * speed_kn * 1.852).round(),
                    teu,
                    direction,
                });
            }
            voyages.sort_by(|a, b| a.departure_epoch_h.total_cmp(&b.departure_epoch_h));
        }
        scenarios.push(Scenario {
            weight: 1.0 / n_scen as f64,
            voyages,
        });
    }
    let set = ScenarioSet {
        scenarios,
        weeks_lifetime: synth.weeks_lifetime,
    };
    set.validate()?;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn registry() -> ShipRegistry {
        ShipRegistry::default_clusters().with_bulk_variants()
    }

    fn voyage(id: &str) -> VoyageRecord {
        VoyageRecord {
            ship_id: id.into(),
            class_name: "Wide-Beam".into(),
            departure_epoch_h: 5.0,
            speed_kn: 16.0,
            rated_power_kw: 20_000.0,
            teu: 4_000.0,
            direction: Direction::Outbound,
        }
    }

    fn set_of(counts: &[(usize, f64)]) -> ScenarioSet {
        ScenarioSet {
            scenarios: counts
                .iter()
                .map(|&(n, w)| Scenario {
                    weight: w,
                    voyages: (0..n).map(|i| voyage(&i.to_string())).collect(),
                })
                .collect(),
            weeks_lifetime: DEFAULT_WEEKS_LIFETIME,
        }
    }

    #[test]
    fn weekly_weight_examples() {
        assert_eq!(weekly_traffic_weight(&set_of(&[(100, 1.0)])), 100.0);
        assert_eq!(weekly_traffic_weight(&set_of(&[(50, 0.5), (150, 0.5)])), 100.0);
        assert!((weekly_traffic_weight(&set_of(&[(10, 0.9), (110, 0.1)])) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip_and_clustering() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        std::fs::write(
            &p,
            "ship_id,class_name,departure_epoch_h,speed_kn,rated_power_kw,teu,direction\n\
             a,,12.5,15,20000,4200,outbound\n\
             b,Small Feeder,200,12,5000,800,inbound\n",
        )
        .unwrap();
        let v = read_traffic_csv(&p, &registry()).unwrap();
        assert_eq!(v[0].class_name, "Wide-Beam");
        assert_eq!(v[1].departure_hour_of_week(), 32.0);
        let q = dir.path().join("u.csv");
        write_traffic_csv(&q, &v).unwrap();
        assert_eq!(read_traffic_csv(&q, &registry()).unwrap(), v);
    }

    #[test]
    fn negative_speed_reports_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        std::fs::write(
            &p,
            "ship_id,class_name,departure_epoch_h,speed_kn,rated_power_kw,teu,direction\n\
             a,,1,15,1,4200,outbound\n\
             b,,2,-3,1,4200,outbound\n",
        )
        .unwrap();
        match read_traffic_csv(&p, &registry()).unwrap_err() {
            Error::Schema { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "speed_kn");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn unknown_class_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        std::fs::write(
            &p,
            "ship_id,class_name,departure_epoch_h,speed_kn,rated_power_kw,teu,direction\n\
             a,Suezmax,1,15,1,4200,outbound\n",
        )
        .unwrap();
        assert!(read_traffic_csv(&p, &registry()).is_err());
    }

    #[test]
    fn scenario_file_normalises_tiny_drift_and_rejects_large() {
        let dir = tempfile::tempdir().unwrap();
        let mut set = set_of(&[(2, 0.5), (3, 0.5)]);
        let idx = write_scenarios(dir.path(), &set).unwrap();
        let text = std::fs::read_to_string(&idx).unwrap().replacen("0.5", "0.5000004", 1);
        std::fs::write(&idx, text).unwrap();
        let loaded = load_traffic(&idx, &registry()).unwrap();
        assert!((loaded.scenarios.iter().map(|s| s.weight).sum::<f64>() - 1.0).abs() < 1e-12);

        set.scenarios[0].weight = 0.6;
        let idx = write_scenarios(dir.path(), &set).unwrap();
        assert!(load_traffic(&idx, &registry()).is_err());
    }

    #[test]
    fn empty_scenario_is_valid() {
        let dir = tempfile::tempdir().unwrap();
        let idx = write_scenarios(dir.path(), &set_of(&[(0, 1.0)])).unwrap();
        let set = load_traffic(&idx, &registry()).unwrap();
        assert_eq!(weekly_traffic_weight(&set), 0.0);
    }

    #[test]
    fn synthetic_is_deterministic() {
        let synth = SyntheticTraffic::new(7, 40, &[("container", 0.82), ("bulk", 0.18)]);
        let a = generate_synthetic_traffic(&synth, &registry()).unwrap();
        let b = generate_synthetic_traffic(&synth, &registry()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.scenarios[0].voyages.len(), 40);
    }

    #[test]
    fn synthetic_zero_voyages() {
        let synth = SyntheticTraffic::new(1, 0, &[("container", 1.0)]);
        let set = generate_synthetic_traffic(&synth, &registry()).unwrap();
        assert!(set.scenarios[0].voyages.is_empty());
    }

    #[test]
    fn container_only_mix() {
        let synth = SyntheticTraffic::new(3, 200, &[("container", 1.0)]);
        let set = generate_synthetic_traffic(&synth, &registry()).unwrap();
        assert!(set.scenarios[0].voyages.iter().all(|v| !is_bulk_class(&v.class_name)));
    }

    #[test]
    fn mix_must_sum_to_one() {
        let synth = SyntheticTraffic::new(3, 10, &[("container", 0.5)]);
        assert!(generate_synthetic_traffic(&synth, &registry()).is_err());
    }
}
