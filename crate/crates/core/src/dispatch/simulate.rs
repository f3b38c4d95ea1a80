use std::path::Path;

use serde::{Deserialize, Serialize};

use super::StationDesign;
use crate::error::{Error, Result};
use crate::HOURS_PER_WEEK;

/// Hourly record of one dispatch run. `soc_kwh[t]` is the storage level at
/// the start of hour `t`; `soc_end_kwh` the level after the last hour.
///
/// `p_res_kw` is renewable output actually used (curtailment excluded) and
/// `p_bess_kw = p_load_kw - p_res_kw` (positive when discharging).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispatchTrace {
    pub demand_kw: Vec<f64>,
    pub p_load_kw: Vec<f64>,
    pub p_res_kw: Vec<f64>,
    pub p_bess_kw: Vec<f64>,
    pub soc_kwh: Vec<f64>,
    pub soc_end_kwh: f64,
    pub curtailed_kwh: f64,
    pub unmet_kwh: f64,
}

impl DispatchTrace {
    pub fn feasible(&self) -> bool {
        self.unmet_kwh == 0.0
    }

    pub fn soc_after(&self, t: usize) -> f64 {
        self.soc_kwh.get(t + 1).copied().unwrap_or(self.soc_end_kwh)
    }
}

/// Greedy dispatch: renewables serve the load first, surplus charges the
/// battery (the rest is curtailed), and any deficit is drawn from the battery.
///
/// `charge_efficiency` scales energy entering the battery; 1.0 is lossless.
pub fn simulate_dispatch(
    design: &StationDesign,
    load_kw: &[f64],
    res_avail_kw: &[f64],
    soc0_kwh: f64,
    charge_efficiency: f64,
) -> Result<DispatchTrace> {
    if load_kw.len() != HOURS_PER_WEEK || res_avail_kw.len() != HOURS_PER_WEEK {
        return Err(Error::validation(format!(
            "dispatch series must have {HOURS_PER_WEEK} hours (load {}, res {})",
            load_kw.len(),
            res_avail_kw.len()
        )));
    }
    let cap = design.q_bess_kwh;
    if !(soc0_kwh >= 0.0 && soc0_kwh <= cap * (1.0 + 1e-12)) {
        return Err(Error::validation(format!("initial soc {soc0_kwh} outside [0, {cap}]")));
    }
    if !(charge_efficiency > 0.0 && charge_efficiency <= 1.0) {
        return Err(Error::validation("charge efficiency must be in (0, 1]"));
    }
    let n = HOURS_PER_WEEK;
    let mut tr = DispatchTrace {
        demand_kw: load_kw.to_vec(),
        p_load_kw: Vec::with_capacity(n),
        p_res_kw: Vec::with_capacity(n),
        p_bess_kw: Vec::with_capacity(n),
        soc_kwh: Vec::with_capacity(n),
        soc_end_kwh: 0.0,
        curtailed_kwh: 0.0,
        unmet_kwh: 0.0,
    };
    let mut soc = soc0_kwh.min(cap);
    for t in 0..n {
        tr.soc_kwh.push(soc);
        let demand = load_kw[t].max(0.0);
        let avail = res_avail_kw[t].clamp(0.0, design.q_res_kw);
        let target = demand.min(design.q_char_kw);
        let direct = avail.min(target);
        let surplus = avail - direct;
        let stored = (surplus * charge_efficiency).min(cap - soc).max(0.0);
        let drawn_for_storage = stored / charge_efficiency;
        let discharge = (target - direct).min(soc);
        soc = (soc + stored - discharge).clamp(0.0, cap);
        let served = direct + discharge;
        let used_res = direct + drawn_for_storage;
        tr.curtailed_kwh += surplus - drawn_for_storage;
        let short = demand - served;
        if short > 1e-9 * (1.0 + demand) {
            tr.unmet_kwh += short;
        }
        tr.p_load_kw.push(served);
        tr.p_res_kw.push(used_res);
        tr.p_bess_kw.push(served - used_res);
    }
    tr.soc_end_kwh = soc;
    Ok(tr)
}

#[derive(Debug, Serialize, Deserialize)]
struct TraceRow {
    hour: usize,
    p_load: f64,
    p_res: f64,
    p_bess: f64,
    soc: f64,
}

/// Writes `hour,p_load,p_res,p_bess,soc` rows (soc at the start of the hour).
pub fn write_trace_csv(path: impl AsRef<Path>, trace: &DispatchTrace) -> Result<()> {
    let path = path.as_ref();
    let csv_err = |source| Error::Csv {
        context: format!("writing dispatch trace {}", path.display()),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for t in 0..trace.p_load_kw.len() {
        w.serialize(TraceRow {
            hour: t,
            p_load: trace.p_load_kw[t],
            p_res: trace.p_res_kw[t],
            p_bess: trace.p_bess_kw[t],
            soc: trace.soc_kwh[t],
        })
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a trace written by [`write_trace_csv`]. Demand is taken equal to
/// the served load and the final level is recovered from the recurrence.
pub fn read_trace_csv(path: impl AsRef<Path>) -> Result<DispatchTrace> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|source| Error::Csv {
        context: format!("reading dispatch trace {}", path.display()),
        source,
    })?;
    let mut tr = DispatchTrace {
        demand_kw: vec![],
        p_load_kw: vec![],
        p_res_kw: vec![],
        p_bess_kw: vec![],
        soc_kwh: vec![],
        soc_end_kwh: 0.0,
        curtailed_kwh: 0.0,
        unmet_kwh: 0.0,
    };
    for (i, row) in r.deserialize::<TraceRow>().enumerate() {
        let row = row.map_err(|e| Error::Schema {
            path: path.display().to_string(),
            row: i + 1,
            column: "hour,p_load,p_res,p_bess,soc".into(),
            message: e.to_string(),
        })?;
        tr.demand_kw.push(row.p_load);
        tr.p_load_kw.push(row.p_load);
        tr.p_res_kw.push(row.p_res);
        tr.p_bess_kw.push(row.p_bess);
        tr.soc_kwh.push(row.soc);
    }
    if let (Some(&s), Some(&l), Some(&p)) = (tr.soc_kwh.last(), tr.p_load_kw.last(), tr.p_res_kw.last()) {
        tr.soc_end_kwh = s - l + p;
    }
    Ok(tr)
}
