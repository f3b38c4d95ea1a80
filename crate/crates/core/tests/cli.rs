use std::path::{Path, PathBuf};

use clap::Parser;
use ocs_planner::cli::{execute, run, Cli, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK};
use ocs_planner::config::CostParams;
use ocs_planner::report::{read_breakdown_csv, read_infeasibility_json, read_plan_json, read_sweep_csv, read_tradeoff_csv};

fn tiny() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ocs_planner::demo::write_tiny(dir.path().join("data")).unwrap();
    (dir, cfg)
}

fn args(cfg: &Path, out: &Path, rest: &[&str]) -> Vec<String> {
    let mut v = vec![
        "ocs-plan".to_string(),
        "--config".into(),
        cfg.display().to_string(),
        "--out".into(),
        out.display().to_string(),
    ];
    v.extend(rest.iter().map(|s| s.to_string()));
    v
}

#[test]
fn plan_writes_report_breakdown_and_traces() {
    let (dir, cfg) = tiny();
    let out = dir.path().join("out");
    assert_eq!(run(args(&cfg, &out, &["plan"])), EXIT_OK);
    let report = read_plan_json(out.join("plan.json")).unwrap();
    let b = read_breakdown_csv(out.join("breakdown.csv")).unwrap();
    assert_eq!(b, report.plan.breakdown);
    assert!(!report.plan.chosen_indices.is_empty());
    let traces = std::fs::read_dir(out.join("dispatch")).unwrap().count();
    assert!(traces >= report.plan.chosen_indices.len());
    assert!(report.lcoe_usd_per_kwh.is_some());
}

#[test]
fn missing_grid_file_is_an_input_error_naming_the_file() {
    let (dir, cfg) = tiny();
    std::fs::remove_file(dir.path().join("data/grid/wind.json")).unwrap();
    let out = dir.path().join("out");
    assert_eq!(run(args(&cfg, &out, &["plan"])), EXIT_INPUT);
    let cli = Cli::try_parse_from(args(&cfg, &out, &["plan"])).unwrap();
    let err = execute(&cli).unwrap_err().to_string();
    assert!(err.contains("wind.json"), "{err}");
}

#[test]
fn infeasible_plan_exits_with_code_two_and_a_diagnosis() {
    let (dir, cfg) = tiny();
    let costs_path = dir.path().join("data/costs.json");
    let mut costs = CostParams::read(&costs_path).unwrap();
    costs.battery.density_wh_per_l = 0.01;
    costs.write(&costs_path).unwrap();
    let out = dir.path().join("out");
    assert_eq!(run(args(&cfg, &out, &["plan"])), EXIT_INFEASIBLE);
    let diag = read_infeasibility_json(out.join("infeasibility.json")).unwrap();
    assert!(!diag.report.binding.is_empty());
    assert!(!out.join("plan.json").exists());
}

#[test]
fn tradeoff_writes_one_row_per_density_and_range() {
    let (dir, cfg) = tiny();
    let out = dir.path().join("out");
    let code = run(args(
        &cfg,
        &out,
        &["tradeoff", "--class", "Small Neo-Panamax", "--densities", "300,700,1200", "--ranges", "1000..5000:1000"],
    ));
    assert_eq!(code, EXIT_OK);
    let rows = read_tradeoff_csv(out.join("tradeoff.csv")).unwrap();
    assert_eq!(rows.len(), 15);
}

#[test]
fn unknown_class_lists_the_known_ones() {
    let (dir, cfg) = tiny();
    let out = dir.path().join("out");
    assert_eq!(run(args(&cfg, &out, &["tradeoff", "--class", "Suezmax"])), EXIT_INPUT);
    let cli = Cli::try_parse_from(args(&cfg, &out, &["tradeoff", "--class", "Suezmax"])).unwrap();
    let err = execute(&cli).unwrap_err().to_string();
    assert!(err.contains("Suezmax") && err.contains("Small Feeder") && err.contains("Large Neo-Panamax"), "{err}");
}

#[test]
fn sweeps_write_one_row_per_value() {
    let (dir, cfg) = tiny();
    let out = dir.path().join("out");
    assert_eq!(run(args(&cfg, &out, &["sweep", "--kind", "ocs-cost", "--values", "1.0,0.4"])), EXIT_OK);
    assert_eq!(read_sweep_csv(out.join("sweep_ocs_cost.csv")).unwrap().len(), 2);
    assert_eq!(run(args(&cfg, &out, &["sweep", "--kind", "traffic", "--values", "0.1..1.0:0.1"])), EXIT_OK);
    let rows = read_sweep_csv(out.join("sweep_traffic.csv")).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(out.join("sweep_traffic.json").is_file());
}

#[test]
fn unknown_sweep_kind_is_rejected() {
    let (dir, cfg) = tiny();
    let out = dir.path().join("out");
    assert_eq!(run(args(&cfg, &out, &["sweep", "--kind", "bogus"])), EXIT_INPUT);
}

#[test]
fn calibrate_writes_registry_and_report() {
    let (dir, cfg) = tiny();
    let out = dir.path().join("out");
    let code = run(args(
        &cfg,
        &out,
        &["calibrate", "--class", "Middle Feeder", "--range-km", "800", "--battery-m3", "2000", "--density", "300"],
    ));
    assert_eq!(code, EXIT_OK);
    let ships = ocs_planner::ship::ShipRegistry::read_csv(out.join("ships.csv")).unwrap();
    let tech = ocs_planner::ship::BatteryTech::new(300.0, 100.0, 5000);
    let sol = ocs_planner::ship::solve_tradeoff(
        ships.get("Middle Feeder").unwrap(),
        &tech,
        800.0,
        &ocs_planner::ship::TradeoffSettings::default(),
    )
    .unwrap();
    assert!((sol.battery_m3 - 2000.0).abs() < 1e-3);
}

#[test]
fn parse_failures_and_missing_config() {
    assert_eq!(run(["ocs-plan", "bogus"]), EXIT_INPUT);
    assert_eq!(run(["ocs-plan", "--config", "/nonexistent/run.json", "plan"]), EXIT_INPUT);
    assert_eq!(run(["ocs-plan", "--version"]), EXIT_OK);
}
