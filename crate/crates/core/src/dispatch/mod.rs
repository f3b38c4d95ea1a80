//! Hour-by-hour power balance of one charging station and its sizing.

mod load;
mod simulate;
mod sizing;

pub use load::{build_load_profile, ChargingEvent, HorizonMode, LoadOptions, LoadProfile};
pub use simulate::{read_trace_csv, simulate_dispatch, write_trace_csv, DispatchTrace};
pub use sizing::{
    evaluate_design, geometric_grid, size_station, DesignCheck, SizingConfig, StationDesign, StationPrices, StationSite,
};
