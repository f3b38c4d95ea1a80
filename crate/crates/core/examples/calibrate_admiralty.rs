//! Fits a class's admiralty coefficient to a known battery size and checks
//! that the trade-off solver reproduces it.

use ocs_planner::ship::{calibrate_admiralty, solve_tradeoff, BatteryTech, ShipRegistry, TradeoffSettings};

fn main() -> ocs_planner::Result<()> {
    let registry = ShipRegistry::default_clusters();
    let settings = TradeoffSettings::default();
    let tech = BatteryTech::for_year(2023).expect("known year");
    let (range_km, battery_m3) = (5_000.0, 15_834.0);

    let mut ship = registry.get("Small Neo-Panamax")?.clone();
    let before = ship.k_adm;
    ship.k_adm = calibrate_admiralty(&ship, &tech, range_km, battery_m3, &settings)?;
    println!("k_adm {before:.3} -> {:.3} kWh/km", ship.k_adm);

    for r in [range_km, 2.0 * range_km] {
        let s = solve_tradeoff(&ship, &tech, r, &settings)?;
        println!(
            "{r:>6.0} km: {:.0} m3, {:.1} MWh, cargo {:+.0} TEU",
            s.battery_m3,
            s.battery_kwh / 1e3,
            s.delta_cargo_teu
        );
    }
    Ok(())
}
