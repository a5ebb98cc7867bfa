use std::collections::BTreeSet;

use crate::kernel::Sort;
use crate::store::{Locations, Transition};
use crate::traces::closure::{closure_bounded, OracleConfig};
use crate::traces::trace::{Discipline, Steps, Trace};
use crate::traces::{brookes_join, TraceError, TraceSet};

fn expect_brookes(k: &TraceSet) -> Result<(), TraceError> {
    if k.discipline() != Discipline::Brookes {
        return Err(TraceError::DisciplineMismatch {
            expected: Discipline::Brookes,
            found: k.discipline(),
        });
    }
    Ok(())
}

/// `{⟨σ,σ⟩τ | τ ∈ K}`, read as a closed set.
pub fn yield1(locs: &Locations, k: &TraceSet) -> Result<TraceSet, TraceError> {
    expect_brookes(k)?;
    let mut gens = BTreeSet::new();
    for g in k.generators() {
        for s in locs.stores() {
            let mut steps: Steps = Steps::with_capacity(g.len() + 1);
            steps.push(Transition::stutter(s));
            steps.extend_from_slice(g.steps());
            gens.insert(g.with_steps(steps));
        }
    }
    Ok(TraceSet::raw(Discipline::Brookes, Sort::Star, gens).canonicalize())
}

/// `K ∪ yield1(K)`.
pub fn yield2(locs: &Locations, k: &TraceSet) -> Result<TraceSet, TraceError> {
    brookes_join(&[k.clone(), yield1(locs, k)?])
}

fn single_cell(t: &Trace) -> bool {
    t.steps().iter().all(|tr| tr.changed_cells() <= 1)
}

/// Whether `K` holds a trace in which every transition changes at most one
/// cell, searching traces up to `max_len`.
pub fn single_cell_witness(
    locs: &Locations,
    k: &TraceSet,
    max_len: usize,
    cfg: OracleConfig,
) -> Result<bool, TraceError> {
    if k.generators().any(single_cell) {
        return Ok(true);
    }
    let cl = closure_bounded(k.generators(), k.discipline(), max_len, locs, cfg)?;
    Ok(cl.iter().any(single_cell))
}

/// Conclusions of the hush rule over the closure of `K` up to `max_len`: a
/// stutter is dropped when the trace is in `K` with that stutter at every
/// store, and something remains.
pub fn hush_step(
    locs: &Locations,
    k: &TraceSet,
    max_len: usize,
    cfg: OracleConfig,
) -> Result<BTreeSet<Trace>, TraceError> {
    expect_brookes(k)?;
    let cl = closure_bounded(k.generators(), k.discipline(), max_len, locs, cfg)?;
    let mut out = BTreeSet::new();
    for t in &cl {
        if t.len() < 2 {
            continue;
        }
        for i in 0..t.len() {
            if !t.steps()[i].is_stutter() {
                continue;
            }
            let every = locs.stores().all(|s| {
                let mut steps: Steps = t.steps().iter().copied().collect();
                steps[i] = Transition::stutter(s);
                k.contains(&t.with_steps(steps))
            });
            if every {
                let mut steps: Steps = t.steps().iter().copied().collect();
                steps.remove(i);
                out.insert(t.with_steps(steps));
            }
        }
    }
    Ok(out)
}
