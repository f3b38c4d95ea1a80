//! Battery size, cargo and draught against required range for one class at
//! the three reference battery densities.
//!
//! Usage: `cargo run --example tradeoff_curves -- [class]`
//! (default `Small Neo-Panamax`).

use ocs_planner::ship::{tradeoff_curve, BatteryTech, ShipRegistry, TradeoffSettings};

fn main() -> ocs_planner::Result<()> {
    let class = std::env::args().nth(1).unwrap_or_else(|| "Small Neo-Panamax".to_string());
    let registry = ShipRegistry::default_clusters().with_bulk_variants();
    let ship = registry.get(&class)?;
    let ranges: Vec<f64> = (1..=20).map(|k| 500.0 * k as f64).collect();
    for year in [2023, 2030, 2050] {
        let tech = BatteryTech::for_year(year).expect("known year");
        println!("{class}, {} Wh/L", tech.density_wh_per_l);
        println!("  range_km  battery_mwh  battery_m3  d_cargo_teu  d_draught_m");
        for p in tradeoff_curve(ship, &tech, &ranges, &TradeoffSettings::default())? {
            match (&p.solution, &p.gap_reason) {
                (Some(s), _) => println!(
                    "  {:>8.0} {:>12.1} {:>11.0} {:>12.1} {:>12.3}",
                    s.range_km,
                    s.battery_kwh / 1e3,
                    s.battery_m3,
                    s.delta_cargo_teu,
                    s.delta_draught_m
                ),
                (None, reason) => println!("  {:>8.0}  gap: {}", p.range_km, reason.as_deref().unwrap_or("")),
            }
        }
    }
    Ok(())
}
