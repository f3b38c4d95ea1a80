use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{infeasibility_rank, InfeasibilityReport, PlanSolution, Problem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Largest candidate count searched by full subset enumeration.
    pub exhaustive_limit: usize,
    pub allow_empty: bool,
    /// Worker threads; `None` uses the available parallelism.
    pub parallelism: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            exhaustive_limit: 14,
            allow_empty: true,
            parallelism: None,
        }
    }
}

/// Total order over evaluated plans: feasible before infeasible, then by
/// cost (or diagnosis rank), fewer stations, smaller index tuple.
#[derive(Debug, Clone)]
struct Score {
    tier: u8,
    key: [f64; 3],
    chosen: Vec<usize>,
}

impl Score {
    fn feasible(apc: f64, chosen: &[usize]) -> Self {
        Self {
            tier: 0,
            key: [apc, 0.0, 0.0],
            chosen: chosen.to_vec(),
        }
    }

    fn infeasible(r: &InfeasibilityReport) -> Self {
        let (ships, unmet, seg) = infeasibility_rank(r);
        Self {
            tier: 1,
            key: [ships as f64, unmet, seg],
            chosen: r.chosen_indices.clone(),
        }
    }

    fn cmp(&self, other: &Self) -> Ordering {
        self.tier
            .cmp(&other.tier)
            .then_with(|| self.key[0].total_cmp(&other.key[0]))
            .then_with(|| self.key[1].total_cmp(&other.key[1]))
            .then_with(|| self.key[2].total_cmp(&other.key[2]))
            .then_with(|| self.chosen.len().cmp(&other.chosen.len()))
            .then_with(|| self.chosen.cmp(&other.chosen))
    }
}

enum Outcome {
    Plan(Box<PlanSolution>),
    Infeasible(Box<InfeasibilityReport>),
}

impl Outcome {
    fn score(&self) -> Score {
        match self {
            Outcome::Plan(p) => Score::feasible(p.breakdown.apc_usd_per_km, &p.chosen_indices),
            Outcome::Infeasible(r) => Score::infeasible(r),
        }
    }
}

fn evaluate(problem: &Problem, chosen: &[usize]) -> Result<Outcome> {
    match problem.evaluate(chosen) {
        Ok(p) => Ok(Outcome::Plan(Box::new(p))),
        Err(Error::Infeasible(r)) => Ok(Outcome::Infeasible(r)),
        Err(e) => Err(e),
    }
}

#[derive(Default)]
struct Incumbent {
    best: Option<(Score, Outcome)>,
}

impl Incumbent {
    fn offer(&mut self, outcome: Outcome) {
        let score = outcome.score();
        if self.best.as_ref().is_none_or(|(s, _)| score.cmp(s) == Ordering::Less) {
            self.best = Some((score, outcome));
        }
    }

    fn feasible_apc(&self) -> Option<f64> {
        match &self.best {
            Some((s, _)) if s.tier == 0 => Some(s.key[0]),
            _ => None,
        }
    }

    fn finish(self) -> Result<PlanSolution> {
        match self.best {
            Some((_, Outcome::Plan(p))) => Ok(*p),
            Some((_, Outcome::Infeasible(r))) => Err(Error::Infeasible(r)),
            None => Err(Error::validation("no placement was evaluated")),
        }
    }
}

/// Minimum-APC station placement.
///
/// Up to `exhaustive_limit` candidates every subset is considered, visited
/// in order of a cost lower bound so that subsets which cannot beat the
/// incumbent are skipped. Larger instances use local search from a greedy
/// start and from evenly spaced starts. When no placement is feasible
/// the best-ranked infeasibility report is returned as the error.
pub fn optimize(problem: &Problem, config: &SearchConfig) -> Result<PlanSolution> {
    let n = problem.n_candidates();
    if n == 0 && !config.allow_empty {
        return Err(Error::validation("no candidate sites and the empty plan is not allowed"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism.unwrap_or(0))
        .build()
        .map_err(|e| Error::validation(format!("cannot start worker threads: {e}")))?;
    pool.install(|| {
        if n <= config.exhaustive_limit {
            exhaustive(problem, config)
        } else {
            local_search(problem, config)
        }
    })
}

fn exhaustive(problem: &Problem, config: &SearchConfig) -> Result<PlanSolution> {
    let n = problem.n_candidates();
    let subsets: Vec<Vec<usize>> = (0u64..1 << n)
        .filter(|&m| config.allow_empty || m != 0)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    let bounds: Vec<Option<f64>> = subsets
        .par_iter()
        .map(|s| problem.lower_bound(s))
        .collect::<Result<_>>()?;
    let mut ranked: Vec<(f64, &Vec<usize>)> = Vec::new();
    let mut unbounded: Vec<&Vec<usize>> = Vec::new();
    for (s, b) in subsets.iter().zip(bounds) {
        match b {
            Some(lb) => ranked.push((lb, s)),
            None => unbounded.push(s),
        }
    }
    ranked.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| a.1.len().cmp(&b.1.len()))
            .then_with(|| a.1.cmp(b.1))
    });

    let mut inc = Incumbent::default();
    let chunk = (rayon::current_num_threads() * 2).max(8);
    for batch in ranked.chunks(chunk) {
        if inc.feasible_apc().is_some_and(|apc| batch[0].0 > apc) {
            break;
        }
        let outcomes: Vec<Outcome> = batch
            .par_iter()
            .map(|(_, s)| evaluate(problem, s))
            .collect::<Result<_>>()?;
        for o in outcomes {
            inc.offer(o);
        }
    }
    if inc.feasible_apc().is_none() {
        let outcomes: Vec<Outcome> = unbounded
            .par_iter()
            .map(|s| evaluate(problem, s))
            .collect::<Result<_>>()?;
        for o in outcomes {
            inc.offer(o);
        }
    }
    inc.finish()
}

fn best_of(problem: &Problem, candidates: Vec<Vec<usize>>) -> Result<Option<Outcome>> {
    let outcomes: Vec<Outcome> = candidates
        .par_iter()
        .map(|s| evaluate(problem, s))
        .collect::<Result<_>>()?;
    let mut inc = Incumbent::default();
    for o in outcomes {
        inc.offer(o);
    }
    Ok(inc.best.map(|(_, o)| o))
}

fn with(chosen: &[usize], add: usize) -> Vec<usize> {
    let mut v = chosen.to_vec();
    v.push(add);
    v.sort_unstable();
    v
}

/// Candidates nearest to `k` evenly spaced points along the route.
fn evenly_spaced(problem: &Problem, k: usize) -> Vec<usize> {
    let inp = problem.inputs();
    let total = inp.route.total_length_km();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for j in 1..=k {
        let target = total * j as f64 / (k + 1) as f64;
        let nearest = (0..inp.sites.len())
            .filter(|i| !chosen.contains(i))
            .min_by(|&a, &b| {
                let da = (inp.sites[a].site.arc_km - target).abs();
                let db = (inp.sites[b].site.arc_km - target).abs();
                da.total_cmp(&db).then(a.cmp(&b))
            });
        chosen.extend(nearest);
    }
    chosen.sort_unstable();
    chosen
}

/// Add, drop or swap one site while that helps.
fn improve(problem: &Problem, config: &SearchConfig, mut current: Outcome) -> Result<Outcome> {
    let n = problem.n_candidates();
    loop {
        let chosen = current.score().chosen;
        let mut moves: Vec<Vec<usize>> = (0..n).filter(|i| !chosen.contains(i)).map(|i| with(&chosen, i)).collect();
        for k in 0..chosen.len() {
            let mut dropped = chosen.clone();
            dropped.remove(k);
            if config.allow_empty || !dropped.is_empty() {
                moves.push(dropped.clone());
            }
            for i in (0..n).filter(|i| !chosen.contains(i)) {
                moves.push(with(&dropped, i));
            }
        }
        match best_of(problem, moves)? {
            Some(o) if o.score().cmp(&current.score()) == Ordering::Less => current = o,
            _ => return Ok(current),
        }
    }
}

/// Greedy construction plus restarts from evenly spaced placements of
/// growing size, each refined by [`improve`]. Restarts stop once two sizes
/// in a row fail to beat the incumbent.
fn local_search(problem: &Problem, config: &SearchConfig) -> Result<PlanSolution> {
    let n = problem.n_candidates();
    let mut current = if config.allow_empty {
        evaluate(problem, &[])?
    } else {
        best_of(problem, (0..n).map(|i| vec![i]).collect())?.expect("n > 0")
    };
    loop {
        let chosen = current.score().chosen;
        let adds: Vec<Vec<usize>> = (0..n).filter(|i| !chosen.contains(i)).map(|i| with(&chosen, i)).collect();
        match best_of(problem, adds)? {
            Some(o) if o.score().cmp(&current.score()) == Ordering::Less => current = o,
            _ => break,
        }
    }
    let mut inc = Incumbent::default();
    inc.offer(improve(problem, config, current)?);

    let mut misses = 0;
    for k in 1..=n {
        let before = inc.feasible_apc();
        inc.offer(improve(problem, config, evaluate(problem, &evenly_spaced(problem, k))?)?);
        let gained = match (before, inc.feasible_apc()) {
            (Some(b), Some(a)) => a < b,
            (None, Some(_)) => true,
            _ => false,
        };
        misses = if gained { 0 } else { misses + 1 };
        if misses == 2 {
            break;
        }
    }
    inc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::tests::tiny_problem;

    fn brute_force(problem: &Problem) -> Option<(f64, Vec<usize>)> {
        let n = problem.n_candidates();
        let mut best: Option<(f64, Vec<usize>)> = None;
        for m in 0u64..1 << n {
            let s: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            if let Ok(p) = problem.evaluate(&s) {
                let apc = p.breakdown.apc_usd_per_km;
                let better = match &best {
                    None => true,
                    Some((b, bs)) => apc < *b || (apc == *b && (s.len(), &s) < (bs.len(), bs)),
                };
                if better {
                    best = Some((apc, s));
                }
            }
        }
        best
    }

    #[test]
    fn exhaustive_matches_brute_force() {
        for seed in 0..3 {
            let p = tiny_problem(5, 12, seed);
            let plan = optimize(&p, &SearchConfig::default()).unwrap();
            let (apc, chosen) = brute_force(&p).unwrap();
            assert_eq!(plan.breakdown.apc_usd_per_km, apc);
            assert_eq!(plan.chosen_indices, chosen);
        }
    }

    #[test]
    fn local_search_is_at_least_as_good_as_seed_moves() {
        let p = tiny_problem(6, 10, 9);
        let exact = optimize(&p, &SearchConfig::default()).unwrap();
        let cfg = SearchConfig {
            exhaustive_limit: 2,
            ..SearchConfig::default()
        };
        let heuristic = optimize(&p, &cfg).unwrap();
        assert!(heuristic.breakdown.apc_usd_per_km >= exact.breakdown.apc_usd_per_km);
        assert!(heuristic.breakdown.apc_usd_per_km <= p.evaluate(&[]).map_or(f64::INFINITY, |e| e.breakdown.apc_usd_per_km));
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let p = tiny_problem(5, 12, 11);
        let one = optimize(&p, &SearchConfig { parallelism: Some(1), ..SearchConfig::default() }).unwrap();
        let four = optimize(&p, &SearchConfig { parallelism: Some(4), ..SearchConfig::default() }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn empty_candidate_set_returns_pure_electric_plan() {
        let p = tiny_problem(0, 6, 12);
        let plan = optimize(&p, &SearchConfig::default()).unwrap();
        assert!(plan.chosen_indices.is_empty());
        let strict = SearchConfig {
            allow_empty: false,
            ..SearchConfig::default()
        };
        assert!(optimize(&p, &strict).is_err());
    }
}
