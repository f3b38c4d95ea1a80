//! Joint planning of offshore charging stations and electric-ship
//! batteries along a shipping route.
//!
//! The pipeline runs from geography to an optimised plan:
//!
//! - [`geo`]: route polyline, gridded depth/wind/wave/solar fields and
//!   candidate sites along the route.
//! - [`site_cost`]: platform capital cost and renewable endowment per site.
//! - [`ship`]: ship classes and the battery/draught/cargo trade-off.
//! - [`traffic`]: weekly voyage scenarios, from files or generated.
//! - [`dispatch`]: charging load, hourly station dispatch and sizing.
//! - [`planner`]: plan evaluation and the placement search.
//! - [`sensitivity`]: ICE baseline and the cost, traffic and mix sweeps.
//! - [`config`], [`report`], [`cli`]: file-driven runs and their outputs.
//!
//! ```
//! use ocs_planner::ship::{solve_tradeoff, BatteryTech, ShipRegistry, TradeoffSettings};
//!
//! let ships = ShipRegistry::default_clusters();
//! let snp = ships.get("Small Neo-Panamax").unwrap();
//! let tech = BatteryTech::for_year(2023).unwrap();
//! let sol = solve_tradeoff(snp, &tech, 5000.0, &TradeoffSettings::default()).unwrap();
//! assert!((sol.battery_m3 - 15_834.0).abs() < 1.0);
//! ```

// `!(a > b)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod demo;
pub mod dispatch;
pub mod error;
pub mod geo;
pub mod planner;
pub mod report;
pub mod sensitivity;
pub mod ship;
pub mod site_cost;
pub mod traffic;

pub use error::{Error, Result};

/// Hours in the weekly planning horizon.
pub const HOURS_PER_WEEK: usize = 168;
