use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::HOURS_PER_WEEK;

/// One ship stopping at a station to charge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargingEvent {
    pub ship_id: String,
    pub arrival_hour: usize,
    pub energy_kwh: f64,
    pub max_power_kw: f64,
}

impl ChargingEvent {
    pub fn new(ship_id: impl Into<String>, arrival_hour: usize, energy_kwh: f64, max_power_kw: f64) -> Self {
        Self {
            ship_id: ship_id.into(),
            arrival_hour,
            energy_kwh,
            max_power_kw,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.arrival_hour >= HOURS_PER_WEEK {
            return Err(Error::validation(format!(
                "event `{}` arrives at hour {}, outside the week",
                self.ship_id, self.arrival_hour
            )));
        }
        if !(self.energy_kwh >= 0.0) || !self.energy_kwh.is_finite() || !(self.max_power_kw > 0.0) {
            return Err(Error::validation(format!(
                "event `{}` needs energy >= 0 and max power > 0",
                self.ship_id
            )));
        }
        Ok(())
    }

    /// Whole hours needed at full ship-side power.
    pub fn min_hours(&self) -> usize {
        (self.energy_kwh / self.max_power_kw - 1e-9).ceil().max(0.0) as usize
    }
}

const MAX_CYCLIC_COPIES: usize = 64;

/// How the weekly horizon treats charging that runs past hour 167.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonMode {
    /// Charging stops at the end of the week; unfinished events are incomplete.
    Open,
    /// The week repeats: charging that spills past hour 167 wraps onto the
    /// start of the following (identical) week.
    #[default]
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct LoadOptions {
    pub horizon: HorizonMode,
    /// When set, a ship leaves after its full-power charging time plus this
    /// many hours; energy not delivered by then is undelivered.
    pub dwell_slack_h: Option<usize>,
}

impl LoadOptions {
    pub fn open() -> Self {
        Self {
            horizon: HorizonMode::Open,
            dwell_slack_h: None,
        }
    }
}

/// Aggregate station load and per-event outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadProfile {
    pub load_kw: Vec<f64>,
    /// Hour (exclusive) at which each event finished, counted from the start
    /// of its arrival week; `None` when incomplete.
    pub completion_hour: Vec<Option<usize>>,
    pub undelivered_kwh: f64,
}

impl LoadProfile {
    pub fn all_complete(&self) -> bool {
        self.completion_hour.iter().all(Option::is_some)
    }

    pub fn incomplete_count(&self) -> usize {
        self.completion_hour.iter().filter(|c| c.is_none()).count()
    }
}

struct Active {
    event: usize,
    deadline: usize,
    remaining: f64,
    weight: f64,
}

/// Proportional water-filling of `capacity` across active events, each
/// capped by its own limit.
fn share(capacity: f64, caps: &[f64], weights: &[f64]) -> Vec<f64> {
    let mut alloc = vec![0.0; caps.len()];
    let mut open: Vec<usize> = (0..caps.len()).filter(|&i| caps[i] > 0.0).collect();
    let mut budget = capacity;
    while !open.is_empty() && budget > 0.0 {
        let total: f64 = open.iter().map(|&i| weights[i]).sum();
        let saturated: Vec<usize> = open
            .iter()
            .copied()
            .filter(|&i| budget * weights[i] / total >= caps[i])
            .collect();
        if saturated.is_empty() {
            for &i in &open {
                alloc[i] = budget * weights[i] / total;
            }
            break;
        }
        for &i in &saturated {
            alloc[i] = caps[i];
            budget -= caps[i];
        }
        open.retain(|i| !saturated.contains(i));
    }
    alloc
}

/// Runs the sharing rule over `horizon` hours for events starting at the
/// given absolute hours. Returns load per hour and finish hour per entry.
fn run(
    events: &[ChargingEvent],
    starts: &[(usize, usize)],
    horizon: usize,
    q_char_kw: f64,
    dwell_slack_h: Option<usize>,
    max_stay: usize,
) -> (Vec<f64>, Vec<Option<usize>>, Vec<f64>) {
    let mut order: Vec<usize> = (0..starts.len()).collect();
    order.sort_by_key(|&k| starts[k].1);
    let mut load = vec![0.0; horizon];
    let mut finish = vec![None; starts.len()];
    let mut left = vec![0.0; starts.len()];
    let mut active: Vec<(usize, Active)> = Vec::new();
    let mut next = 0;
    for t in 0..horizon {
        while next < order.len() && starts[order[next]].1 <= t {
            let k = order[next];
            let (e, start) = starts[k];
            let ev = &events[e];
            if ev.energy_kwh <= 0.0 {
                finish[k] = Some(start);
            } else {
                let dwell = dwell_slack_h.map_or(usize::MAX, |s| ev.min_hours() + s);
                let deadline = start.saturating_add(dwell.min(max_stay));
                active.push((
                    k,
                    Active {
                        event: e,
                        deadline,
                        remaining: ev.energy_kwh,
                        weight: ev.max_power_kw,
                    },
                ));
            }
            next += 1;
        }
        active.retain(|(k, a)| {
            if t >= a.deadline {
                left[*k] = a.remaining;
                false
            } else {
                true
            }
        });
        if active.is_empty() {
            continue;
        }
        let caps: Vec<f64> = active
            .iter()
            .map(|(_, a)| events[a.event].max_power_kw.min(a.remaining))
            .collect();
        let weights: Vec<f64> = active.iter().map(|(_, a)| a.weight).collect();
        let alloc = share(q_char_kw, &caps, &weights);
        for ((k, a), p) in active.iter_mut().zip(alloc) {
            load[t] += p;
            a.remaining -= p;
            if a.remaining <= 1e-9 * events[a.event].energy_kwh.max(1.0) {
                a.remaining = 0.0;
                finish[*k] = Some(t + 1);
            }
        }
        active.retain(|(_, a)| a.remaining > 0.0);
    }
    for (k, a) in active {
        left[k] = a.remaining;
    }
    (load, finish, left)
}

/// Hourly charging load of a station with `q_char_kw` of charger capacity.
///
/// Each event draws at most its ship-side limit (and no more than it still
/// needs); when the station cannot serve everyone, capacity is shared in
/// proportion to ship-side limits.
pub fn build_load_profile(events: &[ChargingEvent], q_char_kw: f64, options: LoadOptions) -> Result<LoadProfile> {
    if !(q_char_kw >= 0.0) {
        return Err(Error::validation(format!("charger capacity must be >= 0, got {q_char_kw}")));
    }
    for e in events {
        e.validate()?;
    }
    let w = HOURS_PER_WEEK;
    match options.horizon {
        HorizonMode::Open => {
            let starts: Vec<(usize, usize)> = events.iter().enumerate().map(|(i, e)| (i, e.arrival_hour)).collect();
            let (load, finish, left) = run(events, &starts, w, q_char_kw, options.dwell_slack_h, usize::MAX);
            Ok(LoadProfile {
                load_kw: load,
                completion_hour: finish,
                undelivered_kwh: left.iter().sum(),
            })
        }
        HorizonMode::Cyclic => Ok(cyclic_profile(events, q_char_kw, options.dwell_slack_h)),
    }
}

/// Repeats the week until the reported copy's load matches the copy
/// before it. Ships stay at most a week, so only congested stations need
/// more than the first few copies. The reported copy is never the last,
/// so its own spill-over still competes with later arrivals.
fn cyclic_profile(events: &[ChargingEvent], q_char_kw: f64, dwell_slack_h: Option<usize>) -> LoadProfile {
    let w = HOURS_PER_WEEK;
    let n = events.len();
    let demand: f64 = events.iter().map(|e| e.energy_kwh).sum();
    let mut copies = 4;
    loop {
        let starts: Vec<(usize, usize)> = (0..copies)
            .flat_map(|k| events.iter().enumerate().map(move |(i, e)| (i, e.arrival_hour + k * w)))
            .collect();
        let (load, finish, left) = run(events, &starts, (copies + 1) * w, q_char_kw, dwell_slack_h, w);
        let r = copies - 2;
        let week = &load[r * w..(r + 1) * w];
        let served: f64 = week.iter().sum();
        let left_r: f64 = (0..n).map(|i| left[r * n + i]).sum();
        // Settled when the week repeats and its energy balances; a full
        // charger with a growing backlog repeats the load but not the balance.
        let scale = week.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let settled = week
            .iter()
            .zip(&load[(r - 1) * w..r * w])
            .all(|(a, b)| (a - b).abs() <= 1e-12 * scale)
            && (served + left_r - demand).abs() <= 1e-9 * (1.0 + demand);
        if settled || copies >= MAX_CYCLIC_COPIES {
            return LoadProfile {
                load_kw: week.to_vec(),
                completion_hour: (0..n).map(|i| finish[r * n + i].map(|f| f - r * w)).collect(),
                // An unsettled backlog loses what the week cannot serve.
                undelivered_kwh: if settled { left_r } else { left_r.max(demand - served) },
            };
        }
        copies *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn no_events_zero_profile() {
        let p = build_load_profile(&[], 100.0, LoadOptions::open()).unwrap();
        assert_eq!(p.load_kw, vec![0.0; HOURS_PER_WEEK]);
    }

    #[test]
    fn single_event_forced_schedule() {
        let ev = [ChargingEvent::new("a", 0, 100.0, 50.0)];
        let p = build_load_profile(&ev, 100.0, LoadOptions::open()).unwrap();
        assert_eq!(&p.load_kw[..3], &[50.0, 50.0, 0.0]);
        assert_eq!(p.completion_hour, vec![Some(2)]);
    }

    #[test]
    fn simultaneous_events_share_capacity() {
        let ev = [
            ChargingEvent::new("a", 0, 60.0, 50.0),
            ChargingEvent::new("b", 0, 60.0, 50.0),
        ];
        let p = build_load_profile(&ev, 60.0, LoadOptions::open()).unwrap();
        // 30 + 30 in hours 0 and 1, then the last 0 kWh each: done at hour 2.
        assert!(close(p.load_kw[0], 60.0) && close(p.load_kw[1], 60.0));
        assert!(close(p.load_kw[2], 0.0));
        assert_eq!(p.completion_hour, vec![Some(2), Some(2)]);
    }

    #[test]
    fn sharing_is_proportional_to_ship_limits() {
        let alloc = share(60.0, &[50.0, 25.0], &[50.0, 25.0]);
        assert!(close(alloc[0], 40.0) && close(alloc[1], 20.0));
        // A nearly finished event frees its share for the other.
        let alloc = share(60.0, &[5.0, 50.0], &[50.0, 50.0]);
        assert!(close(alloc[0], 5.0) && close(alloc[1], 50.0));
    }

    #[test]
    fn open_horizon_marks_late_event_incomplete() {
        let ev = [ChargingEvent::new("a", 167, 100.0, 50.0)];
        let p = build_load_profile(&ev, 100.0, LoadOptions::open()).unwrap();
        assert_eq!(p.completion_hour, vec![None]);
        assert!(close(p.undelivered_kwh, 50.0));
    }

    #[test]
    fn cyclic_horizon_wraps_spill() {
        let ev = [ChargingEvent::new("a", 167, 100.0, 50.0)];
        let p = build_load_profile(&ev, 100.0, LoadOptions::default()).unwrap();
        assert_eq!(p.completion_hour, vec![Some(169)]);
        assert!(close(p.load_kw[167], 50.0) && close(p.load_kw[0], 50.0));
        assert!(close(p.load_kw.iter().sum::<f64>(), 100.0));
    }

    #[test]
    fn dwell_slack_limits_waiting() {
        let ev = [ChargingEvent::new("a", 0, 100.0, 50.0)];
        let opts = LoadOptions {
            horizon: HorizonMode::Open,
            dwell_slack_h: Some(0),
        };
        let p = build_load_profile(&ev, 25.0, opts).unwrap();
        assert_eq!(p.completion_hour, vec![None]);
        assert!(close(p.undelivered_kwh, 50.0));
        let p = build_load_profile(&ev, 50.0, opts).unwrap();
        assert_eq!(p.completion_hour, vec![Some(2)]);
    }

    #[test]
    fn zero_energy_event_completes_on_arrival() {
        let ev = [ChargingEvent::new("a", 5, 0.0, 50.0)];
        let p = build_load_profile(&ev, 0.0, LoadOptions::open()).unwrap();
        assert_eq!(p.completion_hour, vec![Some(5)]);
    }

    #[test]
    fn load_never_exceeds_charger() {
        let ev: Vec<_> = (0..20).map(|i| ChargingEvent::new(format!("s{i}"), i % 7, 300.0, 80.0)).collect();
        let p = build_load_profile(&ev, 150.0, LoadOptions::default()).unwrap();
        assert!(p.load_kw.iter().all(|&l| l <= 150.0 + 1e-9));
    }
}
