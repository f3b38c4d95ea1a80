use crate::error::{Error, Result};

/// Share of battery life consumed by one voyage: `ceil(route / range) / N`.
///
/// Ratios within 1e-9 of an integer are snapped to it, so an exact halving
/// of the route is not pushed to the next charge count by rounding noise.
pub fn es_depreciation(range_km: f64, route_km: f64, cycle_life: u32) -> Result<f64> {
    if !(range_km > 0.0) || !(route_km > 0.0) || cycle_life == 0 {
        return Err(Error::validation(format!(
            "depreciation needs positive inputs (range {range_km}, route {route_km}, cycles {cycle_life})"
        )));
    }
    let ratio = route_km / range_km;
    let nearest = ratio.round();
    let ratio = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        ratio
    };
    Ok(ratio.ceil().max(1.0) / f64::from(cycle_life))
}

/// Cost of one full onshore charge, USD per voyage.
pub fn onshore_electricity_cost(battery_kwh: f64, price_usd_per_kwh: f64) -> f64 {
    battery_kwh * price_usd_per_kwh
}

/// Freight revenue from the cargo change against the ICE ship, USD per voyage.
pub fn cargo_revenue(delta_teu: f64, rate_usd_per_teu: f64) -> f64 {
    delta_teu * rate_usd_per_teu
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_charge_when_range_covers_route() {
        assert_eq!(es_depreciation(1200.0, 900.0, 5000).unwrap(), 1.0 / 5000.0);
        assert_eq!(es_depreciation(900.0, 900.0, 5000).unwrap(), 1.0 / 5000.0);
    }

    #[test]
    fn ceiling_arithmetic() {
        assert_eq!(es_depreciation(300.0, 1000.0, 5000).unwrap(), 4.0 / 5000.0);
        assert_eq!(es_depreciation(500.0, 1000.0, 5000).unwrap(), 2.0 / 5000.0);
        assert_eq!(es_depreciation(499.999, 1000.0, 5000).unwrap(), 3.0 / 5000.0);
    }

    #[test]
    fn float_noise_does_not_bump_ceiling() {
        let route = 0.3 * 3.0;
        assert_eq!(es_depreciation(0.3, route, 10).unwrap(), 0.3);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(es_depreciation(0.0, 1.0, 1).is_err());
        assert!(es_depreciation(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn price_examples() {
        assert_eq!(onshore_electricity_cost(0.0, 0.087), 0.0);
        assert!((onshore_electricity_cost(1000.0, 0.087) - 87.0).abs() < 1e-9);
        assert!((onshore_electricity_cost(1000.0, 0.099) - 99.0).abs() < 1e-9);
    }

    #[test]
    fn cargo_sign_follows_delta() {
        assert_eq!(cargo_revenue(0.0, 260.0), 0.0);
        assert!(cargo_revenue(25.0, 260.0) > 0.0);
        assert!(cargo_revenue(-3.0, 260.0) < 0.0);
    }
}
