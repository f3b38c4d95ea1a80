//! Electric-ship classes, battery technology and the range/battery/cargo
//! trade-off.

mod economics;
mod tradeoff;

pub use economics::{cargo_revenue, es_depreciation, onshore_electricity_cost};
pub use tradeoff::{
    calibrate_admiralty, solve_tradeoff, tradeoff_curve, CurvePoint, TradeoffSettings, TradeoffSolution,
};

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The eight container-ship clusters, ordered by capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ShipCluster {
    SmallFeeder,
    MiddleFeeder,
    LargeFeeder,
    WideBeam,
    ClassicPanamax,
    SmallNeoPanamax,
    MiddleNeoPanamax,
    LargeNeoPanamax,
}

impl ShipCluster {
    pub const ALL: [ShipCluster; 8] = [
        ShipCluster::SmallFeeder,
        ShipCluster::MiddleFeeder,
        ShipCluster::LargeFeeder,
        ShipCluster::WideBeam,
        ShipCluster::ClassicPanamax,
        ShipCluster::SmallNeoPanamax,
        ShipCluster::MiddleNeoPanamax,
        ShipCluster::LargeNeoPanamax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShipCluster::SmallFeeder => "Small Feeder",
            ShipCluster::MiddleFeeder => "Middle Feeder",
            ShipCluster::LargeFeeder => "Large Feeder",
            ShipCluster::WideBeam => "Wide-Beam",
            ShipCluster::ClassicPanamax => "Classic Panamax",
            ShipCluster::SmallNeoPanamax => "Small Neo-Panamax",
            ShipCluster::MiddleNeoPanamax => "Middle Neo-Panamax",
            ShipCluster::LargeNeoPanamax => "Large Neo-Panamax",
        }
    }

    /// Half-open TEU interval `[lo, hi)` of the cluster.
    pub fn teu_interval(self) -> (u32, u32) {
        match self {
            ShipCluster::SmallFeeder => (0, 1_000),
            ShipCluster::MiddleFeeder => (1_000, 2_000),
            ShipCluster::LargeFeeder => (2_000, 3_000),
            ShipCluster::WideBeam => (3_000, 5_000),
            ShipCluster::ClassicPanamax => (5_000, 5_500),
            ShipCluster::SmallNeoPanamax => (5_500, 10_000),
            ShipCluster::MiddleNeoPanamax => (10_000, 14_500),
            ShipCluster::LargeNeoPanamax => (14_500, u32::MAX),
        }
    }

    pub fn from_teu(teu: u32) -> Self {
        Self::ALL
            .into_iter()
            .find(|c| {
                let (lo, hi) = c.teu_interval();
                teu >= lo && teu < hi
            })
            .unwrap_or(ShipCluster::LargeNeoPanamax)
    }
}

impl fmt::Display for ShipCluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn normalize_name(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

impl FromStr for ShipCluster {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = normalize_name(s);
        Self::ALL
            .into_iter()
            .find(|c| normalize_name(c.name()) == key)
            .ok_or_else(|| Error::UnknownClass {
                name: s.to_string(),
                valid: Self::ALL.map(|c| c.name()).join(", "),
            })
    }
}

/// Physical and economic parameters of one ship class.
///
/// `k_adm` is the propulsion energy per km at baseline draught (kWh/km);
/// `rho_b_kg_per_kwh` the battery pack mass per kWh of capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShipClass {
    pub name: String,
    pub s_v_m2: f64,
    pub v0_m3: f64,
    pub t0_m: f64,
    pub w_ice_kg: f64,
    pub v_ice_m3: f64,
    pub w_e_kg: f64,
    pub v_e_m3: f64,
    pub k_adm: f64,
    pub rho_b_kg_per_kwh: f64,
    pub rho_c_kg_per_teu: f64,
    pub v_c_m3_per_teu: f64,
    pub baseline_teu: f64,
}

impl ShipClass {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("s_v_m2", self.s_v_m2),
            ("v0_m3", self.v0_m3),
            ("t0_m", self.t0_m),
            ("w_ice_kg", self.w_ice_kg),
            ("v_ice_m3", self.v_ice_m3),
            ("w_e_kg", self.w_e_kg),
            ("v_e_m3", self.v_e_m3),
            ("k_adm", self.k_adm),
            ("rho_b_kg_per_kwh", self.rho_b_kg_per_kwh),
            ("rho_c_kg_per_teu", self.rho_c_kg_per_teu),
            ("v_c_m3_per_teu", self.v_c_m3_per_teu),
            ("baseline_teu", self.baseline_teu),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::validation(format!(
                    "ship class `{}`: {name} must be positive, got {v}",
                    self.name
                )));
            }
        }
        if self.v_e_m3 >= self.v0_m3 {
            return Err(Error::validation(format!(
                "ship class `{}`: electric powertrain volume must be below cabin volume",
                self.name
            )));
        }
        Ok(())
    }

    /// A lower-power variant (e.g. a bulk carrier) sharing this hull.
    pub fn low_power_variant(&self, name: impl Into<String>, power_factor: f64) -> Self {
        Self {
            name: name.into(),
            k_adm: self.k_adm * power_factor,
            w_ice_kg: self.w_ice_kg * power_factor,
            v_ice_m3: self.v_ice_m3 * power_factor,
            w_e_kg: self.w_e_kg * power_factor,
            v_e_m3: self.v_e_m3 * power_factor,
            ..self.clone()
        }
    }
}

/// Battery technology: volumetric density, price and cycle life.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryTech {
    pub density_wh_per_l: f64,
    pub price_usd_per_kwh: f64,
    pub cycle_life: u32,
    #[serde(default)]
    pub year_label: Option<u16>,
}

impl BatteryTech {
    pub fn new(density_wh_per_l: f64, price_usd_per_kwh: f64, cycle_life: u32) -> Self {
        Self {
            density_wh_per_l,
            price_usd_per_kwh,
            cycle_life,
            year_label: None,
        }
    }

    /// Canonical technology for 2023, 2030 or 2050 (300/700/1200 Wh/L).
    /// Prices and cycle lives are assumed planning values.
    pub fn for_year(year: u16) -> Option<Self> {
        let (density, price, cycles) = match year {
            2023 => (300.0, 150.0, 5_000),
            2030 => (700.0, 100.0, 7_000),
            2050 => (1200.0, 70.0, 10_000),
            _ => return None,
        };
        Some(Self {
            density_wh_per_l: density,
            price_usd_per_kwh: price,
            cycle_life: cycles,
            year_label: Some(year),
        })
    }

    /// Volumetric density in kWh per m³ (numerically equal to Wh/L).
    pub fn kwh_per_m3(&self) -> f64 {
        self.density_wh_per_l
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.density_wh_per_l > 0.0) || !(self.price_usd_per_kwh >= 0.0) || self.cycle_life < 1 {
            return Err(Error::validation(
                "battery density must be > 0, price >= 0 and cycle life >= 1",
            ));
        }
        Ok(())
    }
}

/// Ship classes by name, in registry order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShipRegistry {
    classes: Vec<ShipClass>,
}

impl ShipRegistry {
    pub fn new(classes: Vec<ShipClass>) -> Result<Self> {
        let mut reg = Self::default();
        for c in classes {
            reg.insert(c)?;
        }
        Ok(reg)
    }

    /// Inserts or replaces a class by name.
    pub fn insert(&mut self, class: ShipClass) -> Result<()> {
        class.validate()?;
        match self.classes.iter_mut().find(|c| c.name == class.name) {
            Some(slot) => *slot = class,
            None => self.classes.push(class),
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&ShipClass> {
        self.classes
            .iter()
            .find(|c| c.name == name)
            .or_else(|| {
                let key = normalize_name(name);
                self.classes.iter().find(|c| normalize_name(&c.name) == key)
            })
            .ok_or_else(|| Error::UnknownClass {
                name: name.to_string(),
                valid: self.names().join(", "),
            })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_ok()
    }

    pub fn names(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn classes(&self) -> &[ShipClass] {
        &self.classes
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::Reader::from_path(path).map_err(|source| Error::Csv {
            context: format!("reading ship registry {}", path.display()),
            source,
        })?;
        let mut classes = Vec::new();
        for (i, row) in reader.deserialize::<ShipClass>().enumerate() {
            let class = row.map_err(|e| Error::Schema {
                path: path.display().to_string(),
                row: i + 1,
                column: e
                    .position()
                    .map(|_| "ship class fields".to_string())
                    .unwrap_or_default(),
                message: e.to_string(),
            })?;
            classes.push(class);
        }
        Self::new(classes)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let err = |source| Error::Csv {
            context: format!("writing ship registry {}", path.display()),
            source,
        };
        let mut writer = csv::Writer::from_path(path).map_err(err)?;
        for c in &self.classes {
            writer.serialize(c).map_err(|source| Error::Csv {
                context: format!("writing ship registry {}", path.display()),
                source,
            })?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }

    /// The eight container clusters with assumed, calibration-ready values.
    ///
    /// Hull and powertrain figures are typical for each size band; `k_adm`
    /// follows rated power over service speed. The Small Neo-Panamax entry
    /// is calibrated so that 5000 km at 300 Wh/L needs 15,834 m³ of battery.
    pub fn default_clusters() -> Self {
        const RHO_W_TEU: f64 = 12_000.0;
        const V_TEU: f64 = 38.5;
        const RHO_B: f64 = 8.2;
        // (cluster, TEU, deck area m², draught m, rated MW, k_adm kWh/km)
        let table: [(ShipCluster, f64, f64, f64, f64, f64); 8] = [
            (ShipCluster::SmallFeeder, 700.0, 1_920.0, 7.0, 6.0, 231.0),
            (ShipCluster::MiddleFeeder, 1_500.0, 3_200.0, 8.5, 11.0, 350.0),
            (ShipCluster::LargeFeeder, 2_500.0, 4_256.0, 10.0, 17.0, 485.0),
            (ShipCluster::WideBeam, 4_000.0, 6_808.0, 11.5, 25.0, 675.0),
            (ShipCluster::ClassicPanamax, 5_200.0, 7_494.0, 12.5, 32.0, 780.0),
            (ShipCluster::SmallNeoPanamax, 8_500.0, 11_520.0, 14.0, 50.0, 849.0),
            (ShipCluster::MiddleNeoPanamax, 12_000.0, 13_668.0, 15.0, 62.0, 1_050.0),
            (ShipCluster::LargeNeoPanamax, 16_000.0, 14_935.0, 15.5, 72.0, 1_200.0),
        ];
        let classes = table
            .into_iter()
            .map(|(cluster, teu, s_v, t0, mw, k)| {
                let v_ice = 280.0 * mw;
                ShipClass {
                    name: cluster.name().to_string(),
                    s_v_m2: s_v,
                    v0_m3: 0.6 * teu * V_TEU + v_ice,
                    t0_m: t0,
                    w_ice_kg: 180_000.0 * mw,
                    v_ice_m3: v_ice,
                    w_e_kg: 12_000.0 * mw,
                    v_e_m3: 30.0 * mw,
                    k_adm: k,
                    rho_b_kg_per_kwh: RHO_B,
                    rho_c_kg_per_teu: RHO_W_TEU,
                    v_c_m3_per_teu: V_TEU,
                    baseline_teu: teu,
                }
            })
            .collect();
        let mut reg = Self::new(classes).expect("default registry is valid");
        let snp = reg.get(ShipCluster::SmallNeoPanamax.name()).unwrap().clone();
        let tech = BatteryTech::for_year(2023).unwrap();
        let k = calibrate_admiralty(&snp, &tech, 5000.0, 15_834.0, &TradeoffSettings::default())
            .expect("anchor is inside the cabin volume");
        reg.insert(ShipClass { k_adm: k, ..snp }).unwrap();
        reg
    }

    /// Adds low-power bulk-carrier variants of three mid-size hulls.
    pub fn with_bulk_variants(mut self) -> Self {
        for (name, base) in BULK_VARIANTS {
            if let Ok(base) = self.get(base.name()).cloned() {
                self.insert(base.low_power_variant(name, BULK_POWER_FACTOR))
                    .expect("variant of a valid class is valid");
            }
        }
        self
    }
}

/// Propulsion-power ratio of bulk variants to their container hull.
pub const BULK_POWER_FACTOR: f64 = 0.55;

/// Bulk-carrier classes and the container hull each one is derived from.
pub const BULK_VARIANTS: [(&str, ShipCluster); 3] = [
    ("Bulk Handysize", ShipCluster::MiddleFeeder),
    ("Bulk Supramax", ShipCluster::LargeFeeder),
    ("Bulk Panamax", ShipCluster::ClassicPanamax),
];

pub fn is_bulk_class(name: &str) -> bool {
    BULK_VARIANTS.iter().any(|(n, _)| normalize_name(n) == normalize_name(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teu_clusters_are_half_open() {
        assert_eq!(ShipCluster::from_teu(0), ShipCluster::SmallFeeder);
        assert_eq!(ShipCluster::from_teu(999), ShipCluster::SmallFeeder);
        assert_eq!(ShipCluster::from_teu(1_000), ShipCluster::MiddleFeeder);
        assert_eq!(ShipCluster::from_teu(5_499), ShipCluster::ClassicPanamax);
        assert_eq!(ShipCluster::from_teu(5_500), ShipCluster::SmallNeoPanamax);
        assert_eq!(ShipCluster::from_teu(14_500), ShipCluster::LargeNeoPanamax);
        assert_eq!(ShipCluster::from_teu(u32::MAX), ShipCluster::LargeNeoPanamax);
    }

    #[test]
    fn cluster_names_parse_loosely() {
        assert_eq!("small_neo_panamax".parse::<ShipCluster>().unwrap(), ShipCluster::SmallNeoPanamax);
        assert_eq!("Wide-Beam".parse::<ShipCluster>().unwrap(), ShipCluster::WideBeam);
        let err = "Suezmax".parse::<ShipCluster>().unwrap_err();
        assert!(err.to_string().contains("Large Neo-Panamax"));
    }

    #[test]
    fn default_registry_has_eight_valid_clusters() {
        let reg = ShipRegistry::default_clusters();
        assert_eq!(reg.classes().len(), 8);
        for c in ShipCluster::ALL {
            assert!(reg.get(c.name()).is_ok());
        }
    }

    #[test]
    fn unknown_class_lists_valid_ones() {
        let reg = ShipRegistry::default_clusters();
        let err = reg.get("Suezmax").unwrap_err().to_string();
        assert!(err.contains("Small Feeder") && err.contains("Suezmax"), "{err}");
    }

    #[test]
    fn registry_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("ships.csv");
        let reg = ShipRegistry::default_clusters().with_bulk_variants();
        reg.write_csv(&p).unwrap();
        let header = std::fs::read_to_string(&p).unwrap();
        assert!(header.starts_with(
            "name,s_v_m2,v0_m3,t0_m,w_ice_kg,v_ice_m3,w_e_kg,v_e_m3,k_adm,rho_b_kg_per_kwh,rho_c_kg_per_teu,v_c_m3_per_teu,baseline_teu"
        ));
        assert_eq!(ShipRegistry::read_csv(&p).unwrap(), reg);
    }

    #[test]
    fn invalid_class_rejected() {
        let mut c = ShipRegistry::default_clusters().classes()[0].clone();
        c.v_e_m3 = c.v0_m3 + 1.0;
        assert!(c.validate().is_err());
    }
}
