use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Average propulsion cost and its parts, USD per voyage-km.
///
/// `cargo_usd_per_km` is revenue relative to the ICE ship and is subtracted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub ocs_usd_per_km: f64,
    pub elec_usd_per_km: f64,
    pub batt_usd_per_km: f64,
    pub cargo_usd_per_km: f64,
    pub apc_usd_per_km: f64,
}

impl CostBreakdown {
    pub fn assemble(ocs: f64, elec: f64, batt: f64, cargo: f64) -> Self {
        Self {
            ocs_usd_per_km: ocs,
            elec_usd_per_km: elec,
            batt_usd_per_km: batt,
            cargo_usd_per_km: cargo,
            apc_usd_per_km: ocs + elec + batt - cargo,
        }
    }

    /// Whether the total matches its parts to `rel` relative tolerance.
    pub fn is_additive(&self, rel: f64) -> bool {
        let parts = self.ocs_usd_per_km + self.elec_usd_per_km + self.batt_usd_per_km - self.cargo_usd_per_km;
        let scale = [
            self.ocs_usd_per_km,
            self.elec_usd_per_km,
            self.batt_usd_per_km,
            self.cargo_usd_per_km,
        ]
        .iter()
        .fold(1.0f64, |m, x| m.max(x.abs()));
        (parts - self.apc_usd_per_km).abs() <= rel * scale
    }
}

/// Cost per unit of delivered energy.
pub fn levelized_cost(total_cost_usd: f64, lifetime_energy_kwh: f64) -> Result<f64> {
    if !(lifetime_energy_kwh > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    Ok(total_cost_usd / lifetime_energy_kwh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakdown_adds_up() {
        let b = CostBreakdown::assemble(23.7, 32.1, 18.5, 6.2);
        assert!((b.apc_usd_per_km - 68.1).abs() < 1e-9);
        assert!(b.is_additive(1e-12));
    }

    #[test]
    fn levelized_cost_examples() {
        assert!((levelized_cost(114e6, 1.5833e9).unwrap() - 0.0720).abs() < 1e-4);
        assert_eq!(levelized_cost(0.0, 5.0).unwrap(), 0.0);
        let a = levelized_cost(10.0, 4.0).unwrap();
        let b = levelized_cost(10.0, 8.0).unwrap();
        assert_eq!(a, 2.0 * b);
        assert!(matches!(levelized_cost(1.0, 0.0), Err(Error::ZeroEnergy)));
    }
}
