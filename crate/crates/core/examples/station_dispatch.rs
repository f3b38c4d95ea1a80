//! Sizes one station for a handful of charging ships and replays the week
//! hour by hour.

use ocs_planner::dispatch::{
    build_load_profile, evaluate_design, size_station, ChargingEvent, SizingConfig, StationPrices, StationSite,
};
use ocs_planner::HOURS_PER_WEEK;

fn main() -> ocs_planner::Result<()> {
    // Eight ships a week, each needing 40 MWh at up to 20 MW.
    let events: Vec<ChargingEvent> = (0..8)
        .map(|k| ChargingEvent::new(format!("ship{k}"), 10 + 20 * k, 40_000.0, 20_000.0))
        .collect();
    // Wind-like availability with a daily swing.
    let shape: Vec<f64> = (0..HOURS_PER_WEEK)
        .map(|h| 0.45 + 0.3 * (h as f64 / 24.0 * std::f64::consts::TAU).sin())
        .collect();
    let site = StationSite {
        index: 0,
        res_bound_kw: 200_000.0,
        platform_cost_usd: 40e6,
    };
    let prices = StationPrices {
        mu_res_usd_per_kw: 1_400.0,
        mu_bess_usd_per_kwh: 180.0,
        mu_char_usd_per_kw: 90.0,
    };
    let config = SizingConfig::default();
    let scenarios = vec![events];
    let design = size_station(&site, &scenarios, &shape, &prices, &config)?;
    println!(
        "renewables {:.1} MW, storage {:.1} MWh, chargers {:.1} MW, equipment {:.1} M USD",
        design.q_res_kw / 1e3,
        design.q_bess_kwh / 1e3,
        design.q_char_kw / 1e3,
        design.equipment_cost_usd / 1e6
    );

    let profile = build_load_profile(&scenarios[0], design.q_char_kw, config.load)?;
    println!("{} of {} ships finished charging", scenarios[0].len() - profile.incomplete_count(), scenarios[0].len());
    let check = evaluate_design(&design, &scenarios, &shape, &config)?;
    let trace = &check.traces[0];
    println!("hour  load_mw  res_mw  bess_mw  soc_mwh");
    for t in (0..48).step_by(3) {
        println!(
            "{t:>4} {:>8.2} {:>7.2} {:>8.2} {:>8.2}",
            trace.p_load_kw[t] / 1e3,
            trace.p_res_kw[t] / 1e3,
            trace.p_bess_kw[t] / 1e3,
            trace.soc_kwh[t] / 1e3
        );
    }
    println!("curtailed {:.1} MWh, unmet {:.3} MWh", trace.curtailed_kwh / 1e3, trace.unmet_kwh / 1e3);
    Ok(())
}
