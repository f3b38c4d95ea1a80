//! Platform cost, renewable capacity bound and mean availability for each
//! demo candidate.

use ocs_planner::demo::{demo_costs, demo_grid, demo_route};
use ocs_planner::geo::sample_candidates;
use ocs_planner::site_cost::{platform_cost, res_availability_shape, res_capacity_bound};

fn main() -> ocs_planner::Result<()> {
    let grid = demo_grid();
    let costs = demo_costs();
    let sites = sample_candidates(&demo_route(), &grid, 25.0)?;
    println!("arc_km  platform      cost_musd  res_bound_mw  mean_avail");
    for s in &sites {
        let cost = platform_cost(s, &costs.platform);
        let bound = res_capacity_bound(s, &costs.endowment)?;
        let shape = res_availability_shape(s, &grid, &costs.endowment)?;
        let mean = shape.iter().sum::<f64>() / shape.len() as f64;
        println!(
            "{:>6.1}  {:<12} {:>9.2} {:>13.1} {:>11.3}",
            s.arc_km,
            format!("{:?}", s.platform_kind),
            cost / 1e6,
            bound / 1e3,
            mean
        );
    }
    Ok(())
}
