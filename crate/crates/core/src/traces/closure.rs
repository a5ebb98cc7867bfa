use std::collections::{BTreeMap, BTreeSet};

use rustc_hash::FxHashSet;

use crate::kernel::{Name, Sort};
use crate::store::{Locations, Store};
use crate::traces::trace::{successor_steps, Discipline, Steps, Trace};
use crate::traces::TraceError;

/// Environment variable overriding [`OracleConfig::cap`].
pub const CAP_VAR: &str = "BROOKES_ORACLE_CAP";

const DEFAULT_CAP: usize = 1_000_000;

/// Bounds for the brute-force closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Most traces the saturation may hold before giving up.
    pub cap: usize,
    /// Extra length the saturation may pass through above the requested bound.
    pub margin: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        let cap = std::env::var(CAP_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_CAP);
        OracleConfig { cap, margin: 2 }
    }
}

/// Saturates `seeds` under stutter and mumble, never exceeding `limit`
/// transitions. Fails with the running count once more than `cap` sequences
/// have been found.
pub fn saturate_steps(
    seeds: impl IntoIterator<Item = Steps>,
    stores: &[Store],
    front_open: bool,
    back_open: bool,
    limit: usize,
    cap: usize,
) -> Result<FxHashSet<Steps>, usize> {
    let mut seen: FxHashSet<Steps> = FxHashSet::default();
    let mut frontier: Vec<Steps> = Vec::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            frontier.push(s);
        }
    }
    while let Some(cur) = frontier.pop() {
        let grow = cur.len() < limit;
        for next in successor_steps(&cur, stores, front_open && grow, back_open && grow) {
            if next.len() > limit {
                continue;
            }
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(seen.len());
                }
                seen.insert(next.clone());
                frontier.push(next);
            }
        }
    }
    Ok(seen)
}

/// Every trace of length at most `max_len` in the closure of `gens`, by
/// exhaustive saturation.
///
/// Saturation runs up to `max_len + margin`, or past the longest generator if
/// that is longer.
pub fn closure_bounded<'a>(
    gens: impl IntoIterator<Item = &'a Trace>,
    discipline: Discipline,
    max_len: usize,
    locs: &Locations,
    cfg: OracleConfig,
) -> Result<BTreeSet<Trace>, TraceError> {
    let stores: Vec<Store> = locs.stores().collect();
    let mut groups: BTreeMap<(Sort, Sort, Name), Vec<Steps>> = BTreeMap::new();
    for g in gens {
        if discipline == Discipline::Brookes && g.discipline() != Discipline::Brookes {
            return Err(TraceError::DisciplineMismatch {
                expected: Discipline::Brookes,
                found: g.discipline(),
            });
        }
        groups
            .entry((g.start(), g.value_sort(), g.value().clone()))
            .or_default()
            .push(g.steps().iter().copied().collect());
    }
    let mut out = BTreeSet::new();
    let mut budget = cfg.cap;
    for ((start, value_sort, value), seeds) in groups {
        let longest = seeds.iter().map(|s| s.len()).max().unwrap_or(0);
        let limit = max_len.max(longest) + cfg.margin;
        let (front, back) = discipline.open_ends(start, value_sort);
        let found = saturate_steps(seeds, &stores, front, back, limit, budget)
            .map_err(|_| TraceError::BudgetExceeded { cap: cfg.cap })?;
        budget = budget.saturating_sub(found.len());
        for steps in found {
            if steps.len() <= max_len {
                out.insert(Trace::new(start, steps, value_sort, value.clone())?);
            }
        }
    }
    Ok(out)
}
