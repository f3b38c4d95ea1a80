//! Generates a week of synthetic voyages, writes it as scenario files and
//! reads it back.
//!
//! Usage: `cargo run --example synthetic_traffic -- [dir]` (default `traffic`).

use ocs_planner::demo::demo_traffic;
use ocs_planner::sensitivity::traffic_mix;
use ocs_planner::ship::ShipRegistry;
use ocs_planner::traffic::{generate_synthetic_traffic, load_traffic, weekly_traffic_weight, write_scenarios};

fn main() -> ocs_planner::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "traffic".to_string());
    let registry = ShipRegistry::default_clusters().with_bulk_variants();
    let set = generate_synthetic_traffic(&demo_traffic(), &registry)?;
    println!("{} scenarios, {:.1} voyages per week", set.scenarios.len(), weekly_traffic_weight(&set));
    for (class, share) in traffic_mix(&set) {
        println!("  {class:<20} {:>5.1}%", share * 100.0);
    }
    let index = write_scenarios(&dir, &set)?;
    let back = load_traffic(&index, &registry)?;
    assert_eq!(back.scenarios.len(), set.scenarios.len());
    println!("wrote {}", index.display());
    Ok(())
}
