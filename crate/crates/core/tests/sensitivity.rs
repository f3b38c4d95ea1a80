mod common;

use ocs_planner::planner::SearchConfig;
use ocs_planner::sensitivity::{ice_apc, sweep_ship_mix, traffic_mix, IceBaselineParams, NamedMix};
use ocs_planner::ship::ShipRegistry;
use ocs_planner::traffic::SyntheticTraffic;

fn mix(name: &str, small: f64) -> NamedMix {
    NamedMix {
        name: name.into(),
        mix: [("Small Feeder".to_string(), small), ("Middle Feeder".to_string(), 1.0 - small)].into(),
    }
}

#[test]
fn ship_mix_rows_compare_against_the_right_baselines() {
    let p = common::random_problem(42, 4);
    let ice = IceBaselineParams::from_registry(&ShipRegistry::default_clusters(), 500.0, 175.0, 3.114, 20.0);
    let traffic = SyntheticTraffic::new(3, 10, &[("Small Feeder", 0.5), ("Middle Feeder", 0.5)]);
    let mixes = [mix("small", 0.9), mix("even", 0.5), mix("middle", 0.1)];
    let rows = sweep_ship_mix(&p, &mixes, &traffic, &ice, &SearchConfig::default()).unwrap();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r.container_share, 1.0);
        assert_eq!(r.ice_apc_usd_per_km, ice_apc(&ice, &r.class_mix).unwrap());
        let with = r.es_with_ocs_apc_usd_per_km().unwrap();
        if let Some(without) = r.es_no_ocs_apc_usd_per_km {
            assert!(with <= without);
        }
        let adv = r.ocs_advantage().unwrap();
        assert!((adv - (r.ice_apc_usd_per_km - with) / r.ice_apc_usd_per_km).abs() < 1e-12);
    }
    // More middle feeders cost more fuel per voyage.
    assert!(rows[2].ice_apc_usd_per_km > rows[0].ice_apc_usd_per_km);
}

#[test]
fn ice_cost_of_generated_traffic_matches_its_mix() {
    let reg = ShipRegistry::default_clusters().with_bulk_variants();
    let ice = IceBaselineParams::from_registry(&reg, 500.0, 175.0, 3.114, 20.0);
    let set = ocs_planner::traffic::generate_synthetic_traffic(&ocs_planner::demo::demo_traffic(), &reg).unwrap();
    let m = traffic_mix(&set);
    let direct: f64 = m.iter().map(|(c, f)| f * ice.class_cost(c).unwrap()).sum();
    assert!((ice_apc(&ice, &m).unwrap() - direct).abs() < 1e-9 * direct);
}
