//! Re-plans the demo corridor under cheaper stations, thinner traffic and
//! different fleet compositions.
//!
//! Each point is a full optimisation, so this takes a few minutes.

use std::path::Path;

use ocs_planner::config::RunConfig;
use ocs_planner::sensitivity::{
    advantage_follows_container_share, ice_apc, sweep_ocs_cost, sweep_ship_mix, sweep_traffic, traffic_mix,
};

fn arcs(p: &Option<ocs_planner::planner::PlanSolution>) -> String {
    p.as_ref().map_or("-".into(), |p| format!("{:?}", p.chosen_arcs()))
}

fn main() -> ocs_planner::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo/run.json");
    let cfg = RunConfig::read(&path)?;
    let inputs = cfg.load()?;
    let problem = cfg.problem(&inputs)?;
    let ice_params = inputs.costs.ice.clone().expect("demo costs carry ICE parameters");
    let ice = ice_apc(&ice_params, &traffic_mix(&inputs.traffic))?;
    println!("conventional fleet {ice:.2} USD/km");

    println!("\nOCS cost scale");
    for p in sweep_ocs_cost(&problem, &cfg.sweeps.ocs_cost_scales, &cfg.search)? {
        println!("  {:>4.1}  APC {:>6.2}  stations {}", p.factor, p.apc_usd_per_km().unwrap_or(f64::NAN), arcs(&p.plan));
    }

    println!("\ntraffic volume");
    let t = sweep_traffic(&problem, &cfg.sweeps.traffic_factors, ice, &cfg.search)?;
    for (p, parity) in t.points.iter().zip(&t.parity) {
        println!(
            "  {:>4.1}  APC {:>6.2}  parity {:<5}  stations {}",
            p.factor,
            p.apc_usd_per_km().unwrap_or(f64::NAN),
            parity,
            arcs(&p.plan)
        );
    }
    match t.parity_factor {
        Some(f) => println!("  cost parity from {:.0}% of current traffic", f * 100.0),
        None => println!("  no cost parity in the swept range"),
    }

    println!("\nship mix");
    let synthetic = cfg.ship_mix_traffic().expect("demo traffic is synthetic");
    let rows = sweep_ship_mix(&problem, &cfg.sweeps.ship_mixes, &synthetic, &ice_params, &cfg.search)?;
    for r in &rows {
        println!(
            "  {:<20} container {:>4.0}%  ICE {:>6.2}  no OCS {:>6.2}  with OCS {:>6.2}  advantage {:>5.1}%",
            r.name,
            r.container_share * 100.0,
            r.ice_apc_usd_per_km,
            r.es_no_ocs_apc_usd_per_km.unwrap_or(f64::NAN),
            r.es_with_ocs_apc_usd_per_km().unwrap_or(f64::NAN),
            r.ocs_advantage().unwrap_or(f64::NAN) * 100.0
        );
    }
    println!("  advantage rises with container share: {}", advantage_follows_container_share(&rows));
    Ok(())
}
