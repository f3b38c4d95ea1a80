use ocs_planner::config::{CostParams, RunConfig};
use ocs_planner::demo::{demo_costs, demo_grid, demo_route, demo_traffic, write_demo};
use ocs_planner::dispatch::{read_trace_csv, write_trace_csv};
use ocs_planner::ship::ShipRegistry;
use ocs_planner::traffic::{generate_synthetic_traffic, load_traffic, write_scenarios};

#[test]
fn demo_dataset_loads_back_as_built() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_demo(dir.path()).unwrap();
    let cfg = RunConfig::read(&path).unwrap();
    let inputs = cfg.load().unwrap();
    let route = demo_route();
    assert!((inputs.route.total_length_km() - route.total_length_km()).abs() < 1e-6);
    assert_eq!(inputs.costs, demo_costs());
    let grid = demo_grid();
    for arc in [50.0, 300.0, 650.0] {
        let (lat, lon) = route.position_at(arc);
        let a = grid.depth_m.sample(lat, lon).unwrap();
        let b = inputs.grid.depth_m.sample(lat, lon).unwrap();
        assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn bundled_demo_data_matches_the_builders() {
    let bundled = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo");
    let fresh = tempfile::tempdir().unwrap();
    write_demo(fresh.path()).unwrap();
    for name in ["costs.json", "route.csv", "grid/depth.csv", "grid/wind_series.csv"] {
        let a = std::fs::read(bundled.join(name)).unwrap();
        let b = std::fs::read(fresh.path().join(name)).unwrap();
        assert!(a == b, "{name} differs from the generated demo data");
    }
    assert_eq!(CostParams::read(bundled.join("costs.json")).unwrap(), demo_costs());
}

#[test]
fn traffic_scenarios_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let reg = ShipRegistry::default_clusters().with_bulk_variants();
    let set = generate_synthetic_traffic(&demo_traffic(), &reg).unwrap();
    let index = write_scenarios(dir.path(), &set).unwrap();
    let back = load_traffic(&index, &reg).unwrap();
    assert_eq!(back, set);
}

#[test]
fn ship_registry_and_dispatch_traces_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let reg = ShipRegistry::default_clusters().with_bulk_variants();
    reg.write_csv(dir.path().join("ships.csv")).unwrap();
    assert_eq!(ShipRegistry::read_csv(dir.path().join("ships.csv")).unwrap(), reg);

    let tiny = ocs_planner::demo::write_tiny(dir.path().join("tiny")).unwrap();
    let cfg = RunConfig::read(tiny).unwrap();
    let inputs = cfg.load().unwrap();
    let problem = cfg.problem(&inputs).unwrap();
    let plan = ocs_planner::planner::optimize(&problem, &cfg.search).unwrap();
    let traces = problem.dispatch_traces(&plan).unwrap();
    let trace = &traces[0][0];
    let p = dir.path().join("trace.csv");
    write_trace_csv(&p, trace).unwrap();
    let back = read_trace_csv(&p).unwrap();
    assert_eq!(back.p_load_kw, trace.p_load_kw);
    assert_eq!(back.soc_kwh, trace.soc_kwh);
    assert!((back.soc_end_kwh - trace.soc_end_kwh).abs() < 1e-6 * (1.0 + trace.soc_end_kwh));
}
