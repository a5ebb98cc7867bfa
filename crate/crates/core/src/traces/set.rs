use std::collections::BTreeSet;
use std::fmt;

use crate::kernel::Sort;
use crate::store::{Locations, Transition};
use crate::traces::matcher::Matcher;
use crate::traces::trace::{Discipline, Steps, Trace};
use crate::traces::TraceError;

/// A closed trace set, represented by finitely many generators.
///
/// The set denoted is the closure of the generators under the discipline's
/// deduction rules. Every generator starts with `sort`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceSet {
    discipline: Discipline,
    sort: Sort,
    gens: BTreeSet<Trace>,
}

impl TraceSet {
    pub fn empty(discipline: Discipline, sort: Sort) -> TraceSet {
        TraceSet {
            discipline,
            sort,
            gens: BTreeSet::new(),
        }
    }

    /// The closure of `gens`, kept in canonical form.
    pub fn from_generators(
        discipline: Discipline,
        sort: Sort,
        gens: impl IntoIterator<Item = Trace>,
    ) -> Result<TraceSet, TraceError> {
        let mut set = TraceSet::empty(discipline, sort);
        for g in gens {
            set.check_trace(&g)?;
            set.gens.insert(g);
        }
        Ok(set.canonicalize())
    }

    /// Builds without validation or canonicalisation.
    pub(crate) fn raw(discipline: Discipline, sort: Sort, gens: BTreeSet<Trace>) -> TraceSet {
        TraceSet {
            discipline,
            sort,
            gens,
        }
    }

    fn check_trace(&self, t: &Trace) -> Result<(), TraceError> {
        if t.discipline() != self.discipline && self.discipline == Discipline::Brookes {
            return Err(TraceError::DisciplineMismatch {
                expected: self.discipline,
                found: t.discipline(),
            });
        }
        if t.start() != self.sort {
            return Err(TraceError::SortMismatch {
                expected: self.sort,
                found: t.start(),
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &TraceSet) -> Result<(), TraceError> {
        if self.discipline != other.discipline {
            return Err(TraceError::DisciplineMismatch {
                expected: self.discipline,
                found: other.discipline,
            });
        }
        if self.sort != other.sort {
            return Err(TraceError::SortMismatch {
                expected: self.sort,
                found: other.sort,
            });
        }
        Ok(())
    }

    pub fn discipline(&self) -> Discipline {
        self.discipline
    }

    pub fn sort(&self) -> Sort {
        self.sort
    }

    pub fn generators(&self) -> impl ExactSizeIterator<Item = &Trace> + Clone {
        self.gens.iter()
    }

    pub fn generator_set(&self) -> &BTreeSet<Trace> {
        &self.gens
    }

    pub fn into_generators(self) -> BTreeSet<Trace> {
        self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn matchers(&self) -> Vec<Matcher> {
        self.gens
            .iter()
            .map(|g| Matcher::for_trace(g, self.discipline))
            .collect()
    }

    /// Whether `t` is in the closed set.
    pub fn member(&self, t: &Trace) -> Result<bool, TraceError> {
        self.check_trace(t)?;
        Ok(self.contains(t))
    }

    /// [`TraceSet::member`] for a trace already known to fit.
    pub fn contains(&self, t: &Trace) -> bool {
        self.gens
            .iter()
            .any(|g| Matcher::for_trace(g, self.discipline).member(g, t))
    }

    /// Closed-set inclusion.
    pub fn subset(&self, other: &TraceSet) -> Result<bool, TraceError> {
        self.check_compatible(other)?;
        let ms = other.matchers();
        let gens: Vec<&Trace> = other.gens.iter().collect();
        Ok(self
            .gens
            .iter()
            .all(|t| gens.iter().zip(&ms).any(|(g, m)| m.member(g, t))))
    }

    /// Closed-set equality.
    pub fn equal(&self, other: &TraceSet) -> Result<bool, TraceError> {
        Ok(self.subset(other)? && other.subset(self)?)
    }

    /// Shortens each generator as far as possible without changing its
    /// closure, then drops generators that are in the closure of the others.
    ///
    /// Generators are visited from greatest to least, so of two that generate
    /// each other the smaller one survives.
    pub fn canonicalize(mut self) -> TraceSet {
        let discipline = self.discipline;
        let gens: BTreeSet<Trace> = std::mem::take(&mut self.gens)
            .into_iter()
            .map(|g| shorten(g, discipline))
            .collect();
        let gens: Vec<Trace> = gens.into_iter().collect();
        let ms: Vec<Matcher> = gens
            .iter()
            .map(|g| Matcher::for_trace(g, self.discipline))
            .collect();
        let mut alive = vec![true; gens.len()];
        for i in (0..gens.len()).rev() {
            let covered = (0..gens.len())
                .any(|j| j != i && alive[j] && ms[j].member(&gens[j], &gens[i]));
            if covered {
                alive[i] = false;
            }
        }
        self.gens = gens
            .into_iter()
            .zip(alive)
            .filter_map(|(g, keep)| keep.then_some(g))
            .collect();
        self
    }

    pub fn is_canonical(&self) -> bool {
        self.clone().canonicalize().gens == self.gens
    }

    /// The union of closed sets.
    pub fn union(&self, other: &TraceSet) -> Result<TraceSet, TraceError> {
        self.check_compatible(other)?;
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        Ok(TraceSet::raw(self.discipline, self.sort, gens).canonicalize())
    }

    pub fn show<'a>(&'a self, locs: &'a Locations) -> ShowTraceSet<'a> {
        ShowTraceSet { set: self, locs }
    }
}

/// Repeatedly fuses an adjacent pair when the fused trace still derives the
/// original, i.e. when one half is a stutter that could be reinserted.
fn shorten(mut g: Trace, discipline: Discipline) -> Trace {
    'outer: loop {
        let steps = g.steps();
        for i in 1..steps.len() {
            let (a, b) = (steps[i - 1], steps[i]);
            if a.to != b.from || !(a.is_stutter() || b.is_stutter()) {
                continue;
            }
            let mut fused: Steps = steps.iter().copied().collect();
            fused[i - 1] = Transition::new(a.from, b.to);
            fused.remove(i);
            let cand = g.with_steps(fused);
            if Matcher::for_trace(&cand, discipline).matches(g.steps()) {
                g = cand;
                continue 'outer;
            }
        }
        return g;
    }
}

/// One generator per line.
pub struct ShowTraceSet<'a> {
    set: &'a TraceSet,
    locs: &'a Locations,
}

impl fmt::Display for ShowTraceSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.set.gens.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", g.show(self.locs))?;
        }
        Ok(())
    }
}
