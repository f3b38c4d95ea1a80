#![allow(dead_code)]

use ocs_planner::dispatch::{HorizonMode, LoadOptions, SizingConfig, StationPrices};
use ocs_planner::geo::{CandidateSite, RoutePath};
use ocs_planner::planner::{Problem, ProblemInputs, ShipEconomics, SiteData};
use ocs_planner::ship::{BatteryTech, ShipRegistry, TradeoffSettings};
use ocs_planner::traffic::{generate_synthetic_traffic, SyntheticTraffic};
use ocs_planner::HOURS_PER_WEEK;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random placement instance on a straight route with `n_sites` candidates.
///
/// Renewable bounds are generous so station sizing never saturates.
pub fn random_problem(seed: u64, n_sites: usize) -> Problem {
    let mut r = rng(seed);
    let length = r.random_range(350.0..750.0);
    let route = RoutePath::meridian(28.0, 123.0, length).unwrap();
    let mut arcs: Vec<f64> = (0..n_sites).map(|_| r.random_range(10.0..length - 10.0)).collect();
    arcs.sort_by(f64::total_cmp);
    for k in 1..arcs.len() {
        if arcs[k] <= arcs[k - 1] + 1.0 {
            arcs[k] = arcs[k - 1] + 1.0;
        }
    }
    arcs.retain(|&a| a < length);
    let sites = arcs
        .iter()
        .enumerate()
        .map(|(k, &arc)| {
            let phase = r.random_range(0.0..24.0);
            let base = r.random_range(0.2..0.5);
            SiteData {
                site: CandidateSite::new(k, arc, r.random_range(20.0..90.0), 8.0, 1.5, 180.0),
                res_bound_kw: 1e7,
                platform_cost_usd: r.random_range(10e6..60e6),
                res_shape: (0..HOURS_PER_WEEK)
                    .map(|h| (base + 0.3 * ((h as f64 + phase) / 24.0 * std::f64::consts::TAU).sin()).clamp(0.05, 1.0))
                    .collect(),
            }
        })
        .collect();
    let small = r.random_range(0.2..0.8);
    let voyages = r.random_range(6..14);
    let ships = ShipRegistry::default_clusters();
    let traffic = generate_synthetic_traffic(
        &SyntheticTraffic::new(seed, voyages, &[("Small Feeder", small), ("Middle Feeder", 1.0 - small)]),
        &ships,
    )
    .unwrap();
    Problem::new(ProblemInputs {
        route,
        sites,
        station_prices: StationPrices {
            mu_res_usd_per_kw: r.random_range(1000.0..2000.0),
            mu_bess_usd_per_kwh: r.random_range(150.0..300.0),
            mu_char_usd_per_kw: r.random_range(60.0..120.0),
        },
        ships,
        battery: BatteryTech::for_year(2030).unwrap(),
        traffic,
        economics: ShipEconomics {
            cargo_rate_usd_per_teu: r.random_range(100.0..300.0),
            port_prices: [("origin".to_string(), 0.087), ("destination".to_string(), 0.099)].into(),
            charge_c_rate: 1.0,
        },
        tradeoff: TradeoffSettings::default(),
        sizing: SizingConfig {
            grid_points: 5,
            refinement_passes: 1,
            load: LoadOptions {
                horizon: HorizonMode::Cyclic,
                dwell_slack_h: Some(1),
            },
            charge_efficiency: 1.0,
        },
        ocs_cost_scale: 1.0,
        traffic_volume: 1.0,
    })
    .unwrap()
}

/// Plain enumeration of every subset; ties go to fewer stations, then the
/// lexicographically smaller index list.
pub fn brute_force(problem: &Problem) -> Option<(f64, Vec<usize>)> {
    let n = problem.n_candidates();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for m in 0u64..1 << n {
        let s: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
        let Ok(plan) = problem.evaluate(&s) else { continue };
        let apc = plan.breakdown.apc_usd_per_km;
        let better = match &best {
            None => true,
            Some((b, bs)) => apc < *b || (apc == *b && (s.len(), &s) < (bs.len(), bs)),
        };
        if better {
            best = Some((apc, s));
        }
    }
    best
}
