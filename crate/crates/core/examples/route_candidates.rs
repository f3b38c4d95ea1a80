//! Samples candidate sites along the demo route and prints what the grid
//! says about each one.

use ocs_planner::demo::{demo_grid, demo_route};
use ocs_planner::geo::sample_candidates;

fn main() -> ocs_planner::Result<()> {
    let route = demo_route();
    let grid = demo_grid();
    let sites = sample_candidates(&route, &grid, 25.0)?;
    println!(
        "{} -> {}: {:.1} km, {} candidates",
        route.port_start.name,
        route.port_end.name,
        route.total_length_km(),
        sites.len()
    );
    println!("  idx   arc_km     lat      lon  depth_m  wind  wave  solar  platform");
    for s in &sites {
        println!(
            "{:>5} {:>8.1} {:>7.3} {:>8.3} {:>8.1} {:>5.2} {:>5.2} {:>6.1}  {:?}",
            s.index, s.arc_km, s.lat, s.lon, s.depth_m, s.wind_mps, s.wave_m, s.solar_wpm2, s.platform_kind
        );
    }
    Ok(())
}
