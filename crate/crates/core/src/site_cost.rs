//! Platform capital cost and renewable endowment of candidate sites.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{CandidateSite, GeoGrid, PlatformKind};
use crate::HOURS_PER_WEEK;

/// Linear platform cost model around a benchmark site. All money in USD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformCostParams {
    pub c0_fixed_usd: f64,
    pub c0_float_usd: f64,
    /// USD per metre of depth above the benchmark (monopile).
    pub mu_d_fixed: f64,
    /// USD per metre of depth above the benchmark (floating).
    pub mu_d_float: f64,
    /// USD per m/s of wind above the benchmark (floating).
    pub mu_v_float: f64,
    /// USD per metre of wave height above the benchmark (floating).
    pub mu_h_float: f64,
    pub d0_m: f64,
    pub v0_mps: f64,
    pub h0_m: f64,
}

impl PlatformCostParams {
    pub fn validate(&self) -> Result<()> {
        let costs = [
            self.c0_fixed_usd,
            self.c0_float_usd,
            self.mu_d_fixed,
            self.mu_d_float,
            self.mu_v_float,
            self.mu_h_float,
        ];
        let benchmarks = [self.d0_m, self.v0_mps, self.h0_m];
        if costs.iter().chain(&benchmarks).any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::validation(
                "platform cost coefficients and benchmarks must be finite and >= 0",
            ));
        }
        Ok(())
    }

    /// Same model with every cost term multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            c0_fixed_usd: self.c0_fixed_usd * factor,
            c0_float_usd: self.c0_float_usd * factor,
            mu_d_fixed: self.mu_d_fixed * factor,
            mu_d_float: self.mu_d_float * factor,
            mu_v_float: self.mu_v_float * factor,
            mu_h_float: self.mu_h_float * factor,
            ..self.clone()
        }
    }
}

/// Per-platform renewable capacity: `n_w_max` turbines producing
/// `k_w * v^3` kW each and `n_pv_max` PV units producing `k_pv * R` kW each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResEndowmentParams {
    pub k_w: f64,
    pub k_pv: f64,
    pub n_w_max: u32,
    pub n_pv_max: u32,
}

impl ResEndowmentParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_w > 0.0) || !(self.k_pv > 0.0) {
            return Err(Error::validation("k_w and k_pv must be positive"));
        }
        Ok(())
    }
}

pub fn platform_cost(site: &CandidateSite, params: &PlatformCostParams) -> f64 {
    let raw = match site.platform_kind {
        PlatformKind::Monopile => params.c0_fixed_usd + params.mu_d_fixed * (site.depth_m - params.d0_m),
        PlatformKind::Floating => {
            params.c0_float_usd
                + params.mu_d_float * (site.depth_m - params.d0_m)
                + params.mu_v_float * (site.wind_mps - params.v0_mps)
                + params.mu_h_float * (site.wave_m - params.h0_m)
        }
    };
    if raw < 0.0 {
        log::warn!(
            "platform cost at site {} ({} km) evaluates to {raw:.0} USD; clamped to 0",
            site.index,
            site.arc_km
        );
        0.0
    } else {
        raw
    }
}

fn endowment_terms(wind_mps: f64, solar_wpm2: f64, params: &ResEndowmentParams) -> Result<(f64, f64)> {
    if wind_mps < 0.0 || solar_wpm2 < 0.0 || !wind_mps.is_finite() || !solar_wpm2.is_finite() {
        return Err(Error::validation(format!(
            "wind ({wind_mps}) and solar ({solar_wpm2}) endowment must be finite and >= 0"
        )));
    }
    let wind = params.n_w_max as f64 * params.k_w * wind_mps.powi(3);
    let solar = params.n_pv_max as f64 * params.k_pv * solar_wpm2;
    Ok((wind, solar))
}

/// Upper bound on installable renewable capacity at a site, in kW.
pub fn res_capacity_bound(site: &CandidateSite, params: &ResEndowmentParams) -> Result<f64> {
    let (wind, solar) = endowment_terms(site.wind_mps, site.solar_wpm2, params)?;
    Ok(wind + solar)
}

/// Hourly available renewable output from explicit wind/solar weeks.
///
/// Installed capacity is split between wind and PV in proportion to the
/// site's endowment bound. Each part follows its resource relative to the
/// site's rated value (cubic for wind, linear for PV), capped at rated.
pub fn res_output_from_series(
    rated_wind_mps: f64,
    rated_solar_wpm2: f64,
    wind_week: Option<&[f64]>,
    solar_week: Option<&[f64]>,
    installed_kw: f64,
    params: &ResEndowmentParams,
) -> Result<Vec<f64>> {
    let (wind_cap, solar_cap) = endowment_terms(rated_wind_mps, rated_solar_wpm2, params)?;
    let bound = wind_cap + solar_cap;
    if installed_kw < 0.0 || installed_kw > bound * (1.0 + 1e-12) {
        return Err(Error::validation(format!(
            "installed RES {installed_kw} kW outside [0, {bound}] kW"
        )));
    }
    if installed_kw == 0.0 || bound == 0.0 {
        return Ok(vec![0.0; HOURS_PER_WEEK]);
    }
    let wind_share = wind_cap / bound;
    let solar_share = solar_cap / bound;
    let check = |week: Option<&[f64]>, name: &str| -> Result<()> {
        match week {
            Some(w) if w.len() != HOURS_PER_WEEK => Err(Error::validation(format!(
                "{name} week has {} hours, expected {HOURS_PER_WEEK}",
                w.len()
            ))),
            _ => Ok(()),
        }
    };
    check(wind_week, "wind")?;
    check(solar_week, "solar")?;
    let mut out = Vec::with_capacity(HOURS_PER_WEEK);
    for h in 0..HOURS_PER_WEEK {
        let wind_frac = match wind_week {
            Some(w) if wind_share > 0.0 => (w[h] / rated_wind_mps).powi(3).min(1.0),
            _ => 0.0,
        };
        let solar_frac = match solar_week {
            Some(s) if solar_share > 0.0 => (s[h] / rated_solar_wpm2).min(1.0),
            _ => 0.0,
        };
        let v = installed_kw * (wind_share * wind_frac + solar_share * solar_frac);
        out.push(v.clamp(0.0, installed_kw));
    }
    Ok(out)
}

/// Hourly available renewable output of `installed_kw` at a site, using
/// the representative week of the grid node nearest to it.
pub fn res_output_profile(
    site: &CandidateSite,
    grid: &GeoGrid,
    installed_kw: f64,
    params: &ResEndowmentParams,
) -> Result<Vec<f64>> {
    let (wind_cap, solar_cap) = endowment_terms(site.wind_mps, site.solar_wpm2, params)?;
    let node_week = |field: &'static str,
                     raster: &crate::geo::Raster,
                     series: Option<&crate::geo::NodeSeries>|
     -> Result<Vec<f64>> {
        let (row, col) = raster.nearest_node(site.lat, site.lon).ok_or(Error::GridCoverage {
            field,
            arc_km: site.arc_km,
            lat: site.lat,
            lon: site.lon,
        })?;
        series
            .and_then(|s| s.representative_week(row, col))
            .ok_or(Error::MissingSeries {
                site: site.index,
                field,
                row,
                col,
            })
    };
    let wind_week = if wind_cap > 0.0 && installed_kw > 0.0 {
        Some(node_week("wind", &grid.wind_speed_mps, grid.wind_series.as_ref())?)
    } else {
        None
    };
    let solar_week = if solar_cap > 0.0 && installed_kw > 0.0 {
        Some(node_week("solar", &grid.solar_radiation_wpm2, grid.solar_series.as_ref())?)
    } else {
        None
    };
    res_output_from_series(
        site.wind_mps,
        site.solar_wpm2,
        wind_week.as_deref(),
        solar_week.as_deref(),
        installed_kw,
        params,
    )
}

/// Per-unit availability (fraction of installed capacity) at each hour.
pub fn res_availability_shape(site: &CandidateSite, grid: &GeoGrid, params: &ResEndowmentParams) -> Result<Vec<f64>> {
    let bound = res_capacity_bound(site, params)?;
    if bound == 0.0 {
        return Ok(vec![0.0; HOURS_PER_WEEK]);
    }
    Ok(res_output_profile(site, grid, bound, params)?
        .into_iter()
        .map(|v| (v / bound).clamp(0.0, 1.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PlatformCostParams {
        PlatformCostParams {
            c0_fixed_usd: 40e6,
            c0_float_usd: 90e6,
            mu_d_fixed: 1.0e6,
            mu_d_float: 0.4e6,
            mu_v_float: 2.0e6,
            mu_h_float: 3.0e6,
            d0_m: 20.0,
            v0_mps: 8.0,
            h0_m: 1.5,
        }
    }

    #[test]
    fn monopile_at_benchmark_depth() {
        let site = CandidateSite::new(0, 10.0, 20.0, 7.0, 1.0, 150.0);
        assert_eq!(platform_cost(&site, &params()), 40e6);
    }

    #[test]
    fn monopile_linear_in_depth() {
        let site = CandidateSite::new(0, 10.0, 30.0, 7.0, 1.0, 150.0);
        assert_eq!(platform_cost(&site, &params()), 50e6);
    }

    #[test]
    fn floating_at_all_benchmarks() {
        let mut p = params();
        p.d0_m = 80.0;
        let site = CandidateSite::new(0, 10.0, 80.0, 8.0, 1.5, 150.0);
        assert_eq!(site.platform_kind, PlatformKind::Floating);
        assert_eq!(platform_cost(&site, &p), 90e6);
    }

    #[test]
    fn negative_cost_is_clamped() {
        let mut p = params();
        p.d0_m = 100.0;
        let site = CandidateSite::new(0, 10.0, 5.0, 8.0, 1.5, 150.0);
        assert_eq!(platform_cost(&site, &p), 0.0);
    }

    #[test]
    fn cost_monotone_in_depth_wind_wave() {
        let p = params();
        for depth in [10.0, 30.0, 59.0, 61.0, 90.0] {
            let a = CandidateSite::new(0, 1.0, depth, 8.0, 1.5, 100.0);
            let b = CandidateSite::new(0, 1.0, depth + 0.5, 8.0, 1.5, 100.0);
            if a.platform_kind == b.platform_kind {
                assert!(platform_cost(&b, &p) >= platform_cost(&a, &p));
            }
        }
        let a = CandidateSite::new(0, 1.0, 80.0, 8.0, 1.5, 100.0);
        let windier = CandidateSite::new(0, 1.0, 80.0, 9.0, 1.5, 100.0);
        let wavier = CandidateSite::new(0, 1.0, 80.0, 8.0, 2.5, 100.0);
        assert!(platform_cost(&windier, &p) >= platform_cost(&a, &p));
        assert!(platform_cost(&wavier, &p) >= platform_cost(&a, &p));
    }

    fn endowment(n_w: u32, k_w: f64, n_pv: u32, k_pv: f64) -> ResEndowmentParams {
        ResEndowmentParams { k_w, k_pv, n_w_max: n_w, n_pv_max: n_pv }
    }

    #[test]
    fn zero_endowment_zero_bound() {
        let site = CandidateSite::new(0, 1.0, 30.0, 0.0, 1.0, 0.0);
        assert_eq!(res_capacity_bound(&site, &endowment(3, 1.0, 3, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn cubic_wind_bound() {
        let site = CandidateSite::new(0, 1.0, 30.0, 2.0, 1.0, 500.0);
        assert_eq!(res_capacity_bound(&site, &endowment(2, 0.5, 0, 1.0)).unwrap(), 8.0);
        let doubled = CandidateSite::new(0, 1.0, 30.0, 4.0, 1.0, 500.0);
        assert_eq!(res_capacity_bound(&doubled, &endowment(2, 0.5, 0, 1.0)).unwrap(), 64.0);
    }

    #[test]
    fn negative_endowment_rejected() {
        let site = CandidateSite::new(0, 1.0, 30.0, -1.0, 1.0, 0.0);
        assert!(res_capacity_bound(&site, &endowment(1, 1.0, 1, 1.0)).is_err());
    }

    #[test]
    fn zero_installed_is_zero_series() {
        let p = endowment(1, 1.0, 1, 0.01);
        let out = res_output_from_series(2.0, 800.0, None, None, 0.0, &p).unwrap();
        assert_eq!(out, vec![0.0; HOURS_PER_WEEK]);
    }

    #[test]
    fn rated_endowment_saturates() {
        let p = endowment(1, 1.0, 1, 0.01);
        let wind = vec![2.0; HOURS_PER_WEEK];
        let solar = vec![800.0; HOURS_PER_WEEK];
        let out = res_output_from_series(2.0, 800.0, Some(&wind), Some(&solar), 12.0, &p).unwrap();
        assert!(out.iter().all(|&v| (v - 12.0).abs() < 1e-12));
    }

    #[test]
    fn hand_traced_three_hours() {
        // wind cap 1*1*2^3 = 8 kW, PV cap 1*0.01*800 = 8 kW -> 50/50 split.
        // hour 0: both rated            -> 10 * (0.5*1 + 0.5*1)        = 10
        // hour 1: v = 1 (1/8), R = 400  -> 10 * (0.5/8 + 0.5*0.5)      = 3.125
        // hour 2: v = 4 (capped), R = 0 -> 10 * (0.5*1 + 0)            = 5
        let p = endowment(1, 1.0, 1, 0.01);
        let mut wind = vec![2.0; HOURS_PER_WEEK];
        let mut solar = vec![800.0; HOURS_PER_WEEK];
        wind[1] = 1.0;
        solar[1] = 400.0;
        wind[2] = 4.0;
        solar[2] = 0.0;
        let out = res_output_from_series(2.0, 800.0, Some(&wind), Some(&solar), 10.0, &p).unwrap();
        assert!((out[0] - 10.0).abs() < 1e-12);
        assert!((out[1] - 3.125).abs() < 1e-12);
        assert!((out[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn installed_above_bound_rejected() {
        let p = endowment(1, 1.0, 0, 0.01);
        assert!(res_output_from_series(2.0, 0.0, None, None, 9.0, &p).is_err());
    }

    #[test]
    fn profile_needs_series_for_site() {
        let grid = GeoGrid::uniform((29.0, 121.0, 33.0, 123.0), 30.0, 8.0, 1.5, 180.0);
        let mut site = CandidateSite::new(4, 100.0, 30.0, 8.0, 1.5, 180.0);
        site.lat = 30.0;
        site.lon = 122.0;
        let err = res_output_profile(&site, &grid, 1.0, &endowment(1, 1.0, 1, 0.01)).unwrap_err();
        assert!(matches!(err, Error::MissingSeries { site: 4, .. }), "{err}");
    }

    proptest::proptest! {
        #[test]
        fn output_never_exceeds_installed(
            wind in proptest::collection::vec(0.0f64..30.0, HOURS_PER_WEEK),
            solar in proptest::collection::vec(0.0f64..1200.0, HOURS_PER_WEEK),
            frac in 0.0f64..=1.0,
        ) {
            let p = endowment(3, 0.8, 5, 0.02);
            let bound = 3.0 * 0.8 * 8.0f64.powi(3) + 5.0 * 0.02 * 200.0;
            let installed = frac * bound;
            let out = res_output_from_series(8.0, 200.0, Some(&wind), Some(&solar), installed, &p).unwrap();
            proptest::prop_assert!(out.iter().all(|&v| v >= 0.0 && v <= installed));
        }
    }
}
