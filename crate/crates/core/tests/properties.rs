use ocs_planner::dispatch::{
    build_load_profile, evaluate_design, size_station, ChargingEvent, HorizonMode, LoadOptions, SizingConfig,
    StationPrices, StationSite,
};
use ocs_planner::ship::{calibrate_admiralty, solve_tradeoff, BatteryTech, ShipRegistry, TradeoffSettings};
use ocs_planner::HOURS_PER_WEEK;
use proptest::prelude::*;

fn events() -> impl Strategy<Value = Vec<ChargingEvent>> {
    prop::collection::vec((0..HOURS_PER_WEEK, 0.0..60_000.0f64, 1_000.0..30_000.0f64), 0..12).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(k, (h, e, p))| ChargingEvent::new(format!("s{k}"), h, e, p))
            .collect()
    })
}

fn horizon() -> impl Strategy<Value = LoadOptions> {
    (prop::bool::ANY, prop::option::of(0usize..4)).prop_map(|(cyclic, slack)| LoadOptions {
        horizon: if cyclic { HorizonMode::Cyclic } else { HorizonMode::Open },
        dwell_slack_h: slack,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn load_respects_chargers_and_conserves_energy(ev in events(), q_char in 0.0..50_000.0f64, opts in horizon()) {
        let p = build_load_profile(&ev, q_char, opts).unwrap();
        prop_assert_eq!(p.load_kw.len(), HOURS_PER_WEEK);
        prop_assert!(p.load_kw.iter().all(|&l| l >= 0.0 && l <= q_char * (1.0 + 1e-12) + 1e-9));
        let demand: f64 = ev.iter().map(|e| e.energy_kwh).sum();
        let served: f64 = p.load_kw.iter().sum();
        prop_assert!((served + p.undelivered_kwh - demand).abs() <= 1e-6 * (1.0 + demand));
        prop_assert_eq!(p.completion_hour.len(), ev.len());
    }

    #[test]
    fn unlimited_cyclic_charging_completes_everything(ev in events()) {
        let opts = LoadOptions { horizon: HorizonMode::Cyclic, dwell_slack_h: None };
        let p = build_load_profile(&ev, 1e9, opts).unwrap();
        prop_assert!(p.all_complete());
        prop_assert!(p.undelivered_kwh.abs() < 1e-6);
    }

    #[test]
    fn sized_stations_are_feasible_and_priced(ev in events(), base in 0.15..0.6f64) {
        let shape: Vec<f64> = (0..HOURS_PER_WEEK)
            .map(|h| (base + 0.3 * (h as f64 / 24.0 * std::f64::consts::TAU).cos()).clamp(0.0, 1.0))
            .collect();
        let site = StationSite { index: 0, res_bound_kw: 1e7, platform_cost_usd: 1e7 };
        let prices = StationPrices { mu_res_usd_per_kw: 1400.0, mu_bess_usd_per_kwh: 180.0, mu_char_usd_per_kw: 90.0 };
        let cfg = SizingConfig { grid_points: 6, refinement_passes: 1, ..SizingConfig::default() };
        let scenarios = vec![ev];
        let d = size_station(&site, &scenarios, &shape, &prices, &cfg).unwrap();
        prop_assert!(d.feasible);
        let check = evaluate_design(&d, &scenarios, &shape, &cfg).unwrap();
        prop_assert!(check.feasible());
        let cost = prices.cost(d.q_res_kw, d.q_bess_kwh, d.q_char_kw);
        prop_assert!((cost - d.equipment_cost_usd).abs() <= 1e-9 * (1.0 + cost));
    }

    #[test]
    fn battery_grows_with_range(k in 0usize..11, density in 200.0..1500.0f64, a in 50.0..6000.0f64, b in 50.0..6000.0f64) {
        let reg = ShipRegistry::default_clusters().with_bulk_variants();
        let ship = &reg.classes()[k];
        let tech = BatteryTech::new(density, 100.0, 5000);
        let s = TradeoffSettings::default();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1.0);
        if let (Ok(x), Ok(y)) = (solve_tradeoff(ship, &tech, lo, &s), solve_tradeoff(ship, &tech, hi, &s)) {
            prop_assert!(x.battery_kwh < y.battery_kwh);
            prop_assert!(x.delta_cargo_teu > y.delta_cargo_teu);
        }
    }

    #[test]
    fn calibration_reproduces_its_anchor(k in 0usize..11, density in 200.0..1500.0f64, range in 200.0..8000.0f64, frac in 0.01..0.3f64) {
        let reg = ShipRegistry::default_clusters().with_bulk_variants();
        let mut ship = reg.classes()[k].clone();
        let tech = BatteryTech::new(density, 100.0, 5000);
        let s = TradeoffSettings::default();
        let m3 = frac * ship.v0_m3;
        ship.k_adm = calibrate_admiralty(&ship, &tech, range, m3, &s).unwrap();
        if let Ok(sol) = solve_tradeoff(&ship, &tech, range, &s) {
            prop_assert!((sol.battery_m3 - m3).abs() <= 1e-6 * m3);
        }
    }
}
