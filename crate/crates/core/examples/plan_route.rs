//! Plans stations on the bundled demo corridor and prints the placement,
//! station sizes and cost breakdown.

use std::path::Path;

use ocs_planner::config::RunConfig;
use ocs_planner::planner::{lcoe, optimize};
use ocs_planner::sensitivity::{ice_apc, traffic_mix};

fn main() -> ocs_planner::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/run.json");
    let cfg = RunConfig::read(&path)?;
    let inputs = cfg.load()?;
    let problem = cfg.problem(&inputs)?;
    println!(
        "{:.1} km route, {} candidates, {:.0} voyages per week",
        inputs.route.total_length_km(),
        problem.n_candidates(),
        problem.weekly_volume()
    );

    let plan = optimize(&problem, &cfg.search)?;
    for (arc, d) in plan.chosen_arcs().iter().zip(&plan.designs) {
        println!(
            "station at {arc:>6.1} km: renewables {:.1} MW, storage {:.1} MWh, chargers {:.1} MW",
            d.q_res_kw / 1e3,
            d.q_bess_kwh / 1e3,
            d.q_char_kw / 1e3
        );
    }
    let b = &plan.breakdown;
    println!("longest leg {:.1} km", plan.max_segment_km);
    println!(
        "APC {:.2} USD/km = ocs {:.2} + electricity {:.2} + battery {:.2} - cargo {:.2}",
        b.apc_usd_per_km, b.ocs_usd_per_km, b.elec_usd_per_km, b.batt_usd_per_km, b.cargo_usd_per_km
    );
    if !plan.designs.is_empty() {
        println!("station LCOE {:.4} USD/kWh", lcoe(&plan, plan.lifetime_station_energy_kwh)?);
    }
    if let Some(ice) = &inputs.costs.ice {
        println!("conventional fleet {:.2} USD/km", ice_apc(ice, &traffic_mix(&inputs.traffic))?);
    }
    Ok(())
}
