use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::kernel::{Name, Sort};
use crate::store::{Locations, ShowTransition, Store, Transition};
use crate::traces::TraceError;

/// A transition sequence. Most traces are short, so they live inline.
pub type Steps = SmallVec<[Transition; 8]>;

/// Which deduction rules a trace set is closed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Discipline {
    /// Sort-respecting stutter: no stutter at a `•` end.
    Sorted,
    /// Brookes's rules: stutter anywhere.
    Brookes,
}

impl Discipline {
    /// Whether a stutter may be inserted before the first and after the last
    /// transition of a trace with the given end sorts.
    pub fn open_ends(self, start: Sort, value_sort: Sort) -> (bool, bool) {
        match self {
            Discipline::Brookes => (true, true),
            Discipline::Sorted => (start.cedes(), value_sort.cedes()),
        }
    }

    /// The discipline a trace with these end sorts belongs to.
    pub fn of_sorts(start: Sort, value_sort: Sort) -> Discipline {
        if start == Sort::Star || value_sort == Sort::Star {
            Discipline::Brookes
        } else {
            Discipline::Sorted
        }
    }
}

impl fmt::Display for Discipline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Discipline::Sorted => "sorted",
            Discipline::Brookes => "brookes",
        })
    }
}

/// A trace `□ξ◇x`: start sort, non-empty transition sequence, sorted value.
///
/// Brookes traces use `⋆` at both ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trace {
    start: Sort,
    steps: Steps,
    value_sort: Sort,
    value: Name,
}

impl Trace {
    pub fn new(
        start: Sort,
        steps: impl IntoIterator<Item = Transition>,
        value_sort: Sort,
        value: impl Into<Name>,
    ) -> Result<Trace, TraceError> {
        let steps: Steps = steps.into_iter().collect();
        if steps.is_empty() {
            return Err(TraceError::EmptyTrace);
        }
        if (start == Sort::Star) != (value_sort == Sort::Star) {
            return Err(TraceError::SortMismatch {
                expected: start,
                found: value_sort,
            });
        }
        Ok(Trace {
            start,
            steps,
            value_sort,
            value: value.into(),
        })
    }

    /// Replaces the transitions, keeping the ends. `steps` must be non-empty.
    pub(crate) fn with_steps(&self, steps: Steps) -> Trace {
        debug_assert!(!steps.is_empty());
        Trace {
            start: self.start,
            steps,
            value_sort: self.value_sort,
            value: self.value.clone(),
        }
    }

    pub(crate) fn relabel(&self, start: Sort, value_sort: Sort) -> Trace {
        Trace {
            start,
            steps: self.steps.clone(),
            value_sort,
            value: self.value.clone(),
        }
    }

    pub fn start(&self) -> Sort {
        self.start
    }

    pub fn steps(&self) -> &[Transition] {
        &self.steps
    }

    pub fn value_sort(&self) -> Sort {
        self.value_sort
    }

    pub fn value(&self) -> &Name {
        &self.value
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> Transition {
        self.steps[0]
    }

    pub fn last(&self) -> Transition {
        self.steps[self.steps.len() - 1]
    }

    pub fn discipline(&self) -> Discipline {
        Discipline::of_sorts(self.start, self.value_sort)
    }

    /// Number of transitions that change the store.
    pub fn state_changes(&self) -> usize {
        self.steps.iter().filter(|t| !t.is_stutter()).count()
    }

    pub fn show<'a>(&'a self, locs: &'a Locations) -> ShowTrace<'a> {
        ShowTrace { trace: self, locs }
    }
}

impl Ord for Trace {
    /// Length first, then start sort, transitions, value sort and value.
    fn cmp(&self, other: &Self) -> Ordering {
        self.steps
            .len()
            .cmp(&other.steps.len())
            .then(self.start.cmp(&other.start))
            .then_with(|| self.steps.cmp(&other.steps))
            .then(self.value_sort.cmp(&other.value_sort))
            .then_with(|| self.value.cmp(&other.value))
    }
}

impl PartialOrd for Trace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `SORT [ (σ,ρ) ... ] SORT value`.
pub struct ShowTrace<'a> {
    trace: &'a Trace,
    locs: &'a Locations,
}

impl fmt::Display for ShowTrace<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.trace.start)?;
        for &t in self.trace.steps() {
            write!(f, " {}", ShowTransition(self.locs, t))?;
        }
        write!(f, " ] {} {}", self.trace.value_sort, self.trace.value)
    }
}

/// One-step stutter and mumble successors of a transition sequence.
///
/// Stutters go in every gap; the gap before the first transition only when
/// `front_open`, the gap after the last only when `back_open`.
pub fn successor_steps(
    steps: &[Transition],
    stores: &[Store],
    front_open: bool,
    back_open: bool,
) -> Vec<Steps> {
    let n = steps.len();
    let mut out = Vec::with_capacity((n + 1) * stores.len() + n);
    for gap in 0..=n {
        if (gap == 0 && !front_open) || (gap == n && !back_open) {
            continue;
        }
        for &s in stores {
            let mut next: Steps = SmallVec::with_capacity(n + 1);
            next.extend_from_slice(&steps[..gap]);
            next.push(Transition::stutter(s));
            next.extend_from_slice(&steps[gap..]);
            out.push(next);
        }
    }
    for i in 1..n {
        if steps[i - 1].to == steps[i].from {
            let mut next: Steps = SmallVec::with_capacity(n - 1);
            next.extend_from_slice(&steps[..i - 1]);
            next.push(Transition::new(steps[i - 1].from, steps[i].to));
            next.extend_from_slice(&steps[i + 1..]);
            out.push(next);
        }
    }
    out
}

/// All one-step stutter and mumble successors of `trace`.
pub fn step_deductions(trace: &Trace, discipline: Discipline, locs: &Locations) -> Vec<Trace> {
    let stores: Vec<Store> = locs.stores().collect();
    let (front, back) = discipline.open_ends(trace.start, trace.value_sort);
    let mut out: Vec<Trace> = successor_steps(&trace.steps, &stores, front, back)
        .into_iter()
        .map(|s| trace.with_steps(s))
        .collect();
    out.sort();
    out.dedup();
    out
}
