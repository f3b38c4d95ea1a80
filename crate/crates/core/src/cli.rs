//! The `ocs-plan` command line.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when no feasible plan
//! exists. Logs go to standard error; results go to files only.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use crate::config::{RunConfig, RunInputs};
use crate::error::{Error, Result};
use crate::planner::{lcoe, optimize, Problem};
use crate::report::{
    ocs_cost_rows, ship_mix_rows, traffic_rows, tradeoff_rows, write_breakdown_csv, write_calibration_json,
    write_dispatch_traces, write_infeasibility_json, write_plan_json, write_sweep_csv, write_sweep_json,
    write_tradeoff_csv, CalibrationReport, PlanReport, SweepReport, SCHEMA_VERSION,
};
use crate::sensitivity::{
    advantage_follows_container_share, ice_apc, sweep_ocs_cost, sweep_ship_mix, sweep_traffic, traffic_mix,
};
use crate::ship::{calibrate_admiralty, BatteryTech, ShipClass};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ocs-plan", version, about = "Offshore charging station planning for electric ships")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for synthetic traffic; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub parallelism: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimise station placement and sizing.
    Plan,
    /// Battery size and cargo capacity against range for several densities.
    Tradeoff {
        /// Ship class name from the registry.
        #[arg(long)]
        class: Option<String>,
        /// Comma-separated energy densities in Wh/L.
        #[arg(long, value_delimiter = ',')]
        densities: Option<Vec<f64>>,
        /// Range grid in km: `a,b,c` or `start..end:step`.
        #[arg(long)]
        ranges: Option<String>,
    },
    /// Re-optimise over OCS cost scales, traffic factors or ship mixes.
    Sweep {
        /// One of `ocs-cost`, `traffic`, `ship-mix`.
        #[arg(long)]
        kind: String,
        /// Sweep values: `a,b,c` or `start..end:step`.
        #[arg(long)]
        values: Option<String>,
    },
    /// Fit a class's admiralty coefficient to a known battery size.
    Calibrate {
        /// Ship class name from the registry.
        #[arg(long)]
        class: Option<String>,
        /// Anchor range in km.
        #[arg(long)]
        range_km: Option<f64>,
        /// Battery volume in m³ the class should need at that range.
        #[arg(long)]
        battery_m3: Option<f64>,
        /// Energy density of the anchor battery in Wh/L.
        #[arg(long)]
        density: Option<f64>,
    },
}

/// Parses `a,b,c` or `start..end:step` (both ends included).
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::validation(format!("cannot parse values `{text}`"));
    if let Some((range, step)) = text.split_once(':') {
        let (a, b) = range.split_once("..").ok_or_else(bad)?;
        let (a, b, step): (f64, f64, f64) = (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
            step.trim().parse().map_err(|_| bad())?,
        );
        if !(step > 0.0) || b < a {
            return Err(bad());
        }
        let n = ((b - a) / step + 1e-9).floor() as usize + 1;
        return Ok((0..n).map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}

/// Runs the CLI on the given arguments and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(Error::Infeasible(r)) => {
            log::error!("no feasible plan: {r}");
            EXIT_INFEASIBLE
        }
        Err(e) => {
            log::error!("{e}");
            EXIT_INPUT
        }
    }
}

struct Session {
    cfg: RunConfig,
    inputs: RunInputs,
    out: PathBuf,
}

fn open(common: &CommonArgs) -> Result<Session> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::validation("--config <path> is required"))?;
    let mut cfg = RunConfig::read(path)?;
    if common.seed.is_some() {
        cfg.seed = common.seed;
    }
    if common.parallelism.is_some() {
        cfg.search.parallelism = common.parallelism;
    }
    let inputs = cfg.load()?;
    let out = common.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    Ok(Session { cfg, inputs, out })
}

pub fn execute(cli: &Cli) -> Result<()> {
    let s = open(&cli.common)?;
    match &cli.command {
        Command::Plan => cmd_plan(&s),
        Command::Tradeoff {
            class,
            densities,
            ranges,
        } => cmd_tradeoff(&s, class.as_deref(), densities.as_deref(), ranges.as_deref()),
        Command::Sweep { kind, values } => cmd_sweep(&s, kind, values.as_deref()),
        Command::Calibrate {
            class,
            range_km,
            battery_m3,
            density,
        } => cmd_calibrate(&s, class.as_deref(), *range_km, *battery_m3, *density),
    }
}

fn ice_reference(s: &Session) -> Result<Option<f64>> {
    match &s.inputs.costs.ice {
        Some(ice) => Ok(Some(ice_apc(ice, &traffic_mix(&s.inputs.traffic))?)),
        None => Ok(None),
    }
}

fn cmd_plan(s: &Session) -> Result<()> {
    let problem = s.cfg.problem(&s.inputs)?;
    info!(
        "planning over {} candidate sites, {:.1} km route",
        problem.n_candidates(),
        s.inputs.route.total_length_km()
    );
    let plan = match optimize(&problem, &s.cfg.search) {
        Ok(p) => p,
        Err(Error::Infeasible(r)) => {
            let path = s.out.join("infeasibility.json");
            write_infeasibility_json(&path, &r)?;
            info!("wrote {}", path.display());
            return Err(Error::Infeasible(r));
        }
        Err(e) => return Err(e),
    };
    if plan.chosen_indices.is_empty() {
        warn!("the cheapest plan builds no stations: ships carry the whole route on board");
    }
    let energy = plan.lifetime_station_energy_kwh;
    let report = PlanReport {
        schema_version: SCHEMA_VERSION,
        seed: s.cfg.seed,
        route_km: s.inputs.route.total_length_km(),
        weekly_voyages: problem.weekly_volume(),
        lcoe_usd_per_kwh: (energy > 0.0).then(|| lcoe(&plan, energy)).transpose()?,
        ice_apc_usd_per_km: ice_reference(s)?,
        plan,
    };
    write_plan_json(s.out.join("plan.json"), &report)?;
    write_breakdown_csv(s.out.join("breakdown.csv"), &report.plan.breakdown)?;
    write_dispatch_traces(s.out.join("dispatch"), &problem, &report.plan)?;
    info!(
        "APC {:.3} USD/km with stations at {:?} km",
        report.plan.breakdown.apc_usd_per_km,
        report.plan.chosen_arcs()
    );
    Ok(())
}

fn find_class<'a>(s: &'a Session, name: Option<&str>, fallback: Option<&'a str>) -> Result<&'a ShipClass> {
    let name = name
        .or(fallback)
        .ok_or_else(|| Error::validation("no ship class given (--class or config)"))?;
    s.inputs.ships.get(name)
}

fn cmd_tradeoff(s: &Session, class: Option<&str>, densities: Option<&[f64]>, ranges: Option<&str>) -> Result<()> {
    let req = s.cfg.tradeoff_curves.as_ref();
    let ship = find_class(s, class, req.map(|r| r.class.as_str()))?;
    let densities = match densities {
        Some(d) => d.to_vec(),
        None => req.map(|r| r.densities_wh_per_l.clone()).unwrap_or_default(),
    };
    let ranges = match ranges {
        Some(r) => parse_values(r)?,
        None => req.map(|r| r.ranges_km.clone()).unwrap_or_default(),
    };
    if densities.is_empty() || ranges.is_empty() {
        return Err(Error::validation("trade-off needs at least one density and one range"));
    }
    let rows = tradeoff_rows(ship, &s.inputs.costs.battery, &densities, &ranges, &s.cfg.tradeoff)?;
    let path = s.out.join("tradeoff.csv");
    write_tradeoff_csv(&path, &rows)?;
    info!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn sweep_values(values: Option<&str>, default: &[f64]) -> Result<Vec<f64>> {
    match values {
        Some(v) => parse_values(v),
        None if !default.is_empty() => Ok(default.to_vec()),
        None => Err(Error::validation("no sweep values given (--values or config)")),
    }
}

fn cmd_sweep(s: &Session, kind: &str, values: Option<&str>) -> Result<()> {
    let problem: Problem = s.cfg.problem(&s.inputs)?;
    let search = &s.cfg.search;
    let sweeps = &s.cfg.sweeps;
    let report = match kind {
        "ocs-cost" => {
            let scales = sweep_values(values, &sweeps.ocs_cost_scales)?;
            SweepReport {
                schema_version: SCHEMA_VERSION,
                kind: kind.into(),
                rows: ocs_cost_rows(&sweep_ocs_cost(&problem, &scales, search)?),
                parity_factor: None,
                advantage_follows_container_share: None,
            }
        }
        "traffic" => {
            let factors = sweep_values(values, &sweeps.traffic_factors)?;
            let ice = ice_reference(s)?
                .ok_or_else(|| Error::validation("traffic sweep needs ICE baseline parameters in the cost file"))?;
            let sweep = sweep_traffic(&problem, &factors, ice, search)?;
            SweepReport {
                schema_version: SCHEMA_VERSION,
                kind: kind.into(),
                rows: traffic_rows(&sweep),
                parity_factor: sweep.parity_factor,
                advantage_follows_container_share: None,
            }
        }
        "ship-mix" => {
            if values.is_some() {
                return Err(Error::validation("ship-mix sweeps take their mixes from the config, not --values"));
            }
            let ice = s
                .inputs
                .costs
                .ice
                .as_ref()
                .ok_or_else(|| Error::validation("ship-mix sweep needs ICE baseline parameters in the cost file"))?;
            let traffic = s
                .cfg
                .ship_mix_traffic()
                .ok_or_else(|| Error::validation("ship-mix sweep needs synthetic traffic settings"))?;
            if sweeps.ship_mixes.is_empty() {
                return Err(Error::validation("no ship mixes configured"));
            }
            let rows = sweep_ship_mix(&problem, &sweeps.ship_mixes, &traffic, ice, search)?;
            SweepReport {
                schema_version: SCHEMA_VERSION,
                kind: kind.into(),
                rows: ship_mix_rows(&rows),
                parity_factor: None,
                advantage_follows_container_share: Some(advantage_follows_container_share(&rows)),
            }
        }
        other => return Err(Error::UnknownSweep(other.to_string())),
    };
    let stem = format!("sweep_{}", kind.replace('-', "_"));
    write_sweep_csv(s.out.join(format!("{stem}.csv")), &report.rows)?;
    write_sweep_json(s.out.join(format!("{stem}.json")), &report)?;
    info!("wrote {} sweep rows to {}", report.rows.len(), s.out.display());
    Ok(())
}

fn cmd_calibrate(
    s: &Session,
    class: Option<&str>,
    range_km: Option<f64>,
    battery_m3: Option<f64>,
    density: Option<f64>,
) -> Result<()> {
    let req = s.cfg.calibration.as_ref();
    let ship = find_class(s, class, req.map(|r| r.class.as_str()))?;
    let pick = |flag: Option<f64>, from: fn(&crate::config::CalibrationRequest) -> f64, what: &str| {
        flag.or(req.map(from))
            .ok_or_else(|| Error::validation(format!("calibration needs {what}")))
    };
    let range_km = pick(range_km, |r| r.range_km, "--range-km")?;
    let battery_m3 = pick(battery_m3, |r| r.battery_m3, "--battery-m3")?;
    let density = pick(density, |r| r.density_wh_per_l, "--density")?;
    let tech = BatteryTech {
        density_wh_per_l: density,
        ..s.inputs.costs.battery.clone()
    };
    tech.validate()?;
    let k = calibrate_admiralty(ship, &tech, range_km, battery_m3, &s.cfg.tradeoff)?;
    let mut ships = s.inputs.ships.clone();
    ships.insert(ShipClass {
        k_adm: k,
        ..ship.clone()
    })?;
    ships.write_csv(s.out.join("ships.csv"))?;
    write_calibration_json(
        s.out.join("calibration.json"),
        &CalibrationReport {
            schema_version: SCHEMA_VERSION,
            class: ship.name.clone(),
            range_km,
            battery_m3,
            density_wh_per_l: density,
            previous_k_adm: ship.k_adm,
            k_adm: k,
        },
    )?;
    info!("{}: k_adm {} -> {k}", ship.name, ship.k_adm);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_lists_and_ranges() {
        assert_eq!(parse_values("1.0,0.4").unwrap(), vec![1.0, 0.4]);
        let r = parse_values("0.1..1.0:0.1").unwrap();
        assert_eq!(r.len(), 10);
        assert_eq!(r[0], 0.1);
        assert_eq!(r[9], 1.0);
        assert!(parse_values("x").is_err());
        assert!(parse_values("1..0:0.1").is_err());
    }

    #[test]
    fn parse_errors_exit_with_input_code() {
        assert_eq!(run(["ocs-plan", "bogus"]), EXIT_INPUT);
        assert_eq!(run(["ocs-plan", "plan"]), EXIT_INPUT);
        assert_eq!(run(["ocs-plan", "--help"]), EXIT_OK);
    }
}
