//! Writes the demonstration dataset (route, grids, costs, run config).
//!
//! Usage: `cargo run --example write_demo_data -- [dir]` (default `demo`).

fn main() -> ocs_planner::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "demo".to_string());
    let config = ocs_planner::demo::write_demo(&dir)?;
    println!("wrote {}", config.display());
    Ok(())
}
