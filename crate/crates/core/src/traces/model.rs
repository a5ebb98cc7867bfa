use std::collections::BTreeSet;

use crate::kernel::{Algebra, KernelError, Name, NodePath, Op, Sort};
use crate::store::{Loc, Locations, Store, Transition};
use crate::traces::trace::{Discipline, Steps, Trace};
use crate::traces::{TraceError, TraceSet};

fn expect_sort(k: &TraceSet, sort: Sort) -> Result<(), TraceError> {
    if k.discipline() != Discipline::Sorted {
        return Err(TraceError::DisciplineMismatch {
            expected: Discipline::Sorted,
            found: k.discipline(),
        });
    }
    if k.sort() != sort {
        return Err(TraceError::SortMismatch {
            expected: sort,
            found: k.sort(),
        });
    }
    Ok(())
}

fn gens_at(sort: Sort, gens: BTreeSet<Trace>) -> TraceSet {
    TraceSet::raw(Discipline::Sorted, sort, gens).canonicalize()
}

/// `(σ,ρ)K`: replaces a leading `⟨ρ,θ⟩` by `⟨σ,θ⟩`, dropping traces that
/// start elsewhere.
///
/// The first store of a `•`-sorted trace is invariant under deduction, so the
/// generators suffice.
pub fn prefix(sigma: Store, rho: Store, k: &TraceSet) -> Result<TraceSet, TraceError> {
    expect_sort(k, Sort::Hold)?;
    let gens = k
        .generators()
        .filter(|g| g.first().from == rho)
        .map(|g| {
            let mut steps: Steps = g.steps().iter().copied().collect();
            steps[0] = Transition::new(sigma, steps[0].to);
            g.with_steps(steps)
        })
        .collect();
    Ok(gens_at(Sort::Hold, gens))
}

/// `return□ x`: one stutter per store.
pub fn unit(locs: &Locations, sort: Sort, x: impl Into<Name>) -> TraceSet {
    let x: Name = x.into();
    let gens = locs
        .stores()
        .map(|s| Trace::new(sort, [Transition::stutter(s)], sort, x.clone()).expect("non-empty"))
        .collect();
    let discipline = Discipline::of_sorts(sort, sort);
    TraceSet::raw(discipline, sort, gens).canonicalize()
}

/// The free model of the shared-state theory, on closed sorted trace sets.
///
/// Transition operators at `•` are interpreted as open transitions, which
/// makes this a model of the transitions variant as well.
#[derive(Debug, Clone, Default)]
pub struct TraceModel {
    locs: Locations,
}

impl TraceModel {
    pub fn new(locs: Locations) -> TraceModel {
        TraceModel { locs }
    }

    pub fn locations(&self) -> &Locations {
        &self.locs
    }

    pub fn unit(&self, sort: Sort, x: impl Into<Name>) -> TraceSet {
        unit(&self.locs, sort, x)
    }

    pub fn update(&self, loc: Loc, bit: bool, k: &TraceSet) -> Result<TraceSet, TraceError> {
        expect_sort(k, Sort::Hold)?;
        let mut gens = BTreeSet::new();
        for sigma in self.locs.stores() {
            gens.extend(prefix(sigma, sigma.set(loc, bit), k)?.into_generators());
        }
        Ok(gens_at(Sort::Hold, gens))
    }

    pub fn lookup(&self, loc: Loc, k0: &TraceSet, k1: &TraceSet) -> Result<TraceSet, TraceError> {
        expect_sort(k0, Sort::Hold)?;
        expect_sort(k1, Sort::Hold)?;
        let gens = k0
            .generators()
            .filter(|g| !g.first().from.get(loc))
            .chain(k1.generators().filter(|g| g.first().from.get(loc)))
            .cloned()
            .collect();
        Ok(gens_at(Sort::Hold, gens))
    }

    pub fn join(&self, sort: Sort, ks: &[TraceSet]) -> Result<TraceSet, TraceError> {
        let mut gens = BTreeSet::new();
        for k in ks {
            expect_sort(k, sort)?;
            gens.extend(k.generators().cloned());
        }
        Ok(gens_at(sort, gens))
    }

    /// `◁`: the same traces, now ceding at the start.
    pub fn acquire(&self, k: &TraceSet) -> Result<TraceSet, TraceError> {
        expect_sort(k, Sort::Hold)?;
        let gens = k
            .generators()
            .map(|g| g.relabel(Sort::Cede, g.value_sort()))
            .collect();
        Ok(gens_at(Sort::Cede, gens))
    }

    /// `▷`: the same traces held at the start, plus one leading stutter.
    pub fn release(&self, k: &TraceSet) -> Result<TraceSet, TraceError> {
        expect_sort(k, Sort::Cede)?;
        let mut gens = BTreeSet::new();
        for g in k.generators() {
            let held = g.relabel(Sort::Hold, g.value_sort());
            for s in self.locs.stores() {
                let mut steps: Steps = Steps::with_capacity(g.len() + 1);
                steps.push(Transition::stutter(s));
                steps.extend_from_slice(g.steps());
                gens.insert(held.with_steps(steps));
            }
            gens.insert(held);
        }
        Ok(gens_at(Sort::Hold, gens))
    }

    /// Kleisli extension of `e` applied to `k`.
    ///
    /// A `∘`-valued trace is continued by splicing; a `•`-valued trace fuses
    /// its last transition with the continuation's first.
    pub fn kleisli<F>(&self, e: &F, k: &TraceSet) -> Result<TraceSet, TraceError>
    where
        F: Fn(&Name, Sort) -> Option<TraceSet>,
    {
        if k.discipline() != Discipline::Sorted {
            return Err(TraceError::DisciplineMismatch {
                expected: Discipline::Sorted,
                found: k.discipline(),
            });
        }
        let mut gens = BTreeSet::new();
        for g in k.generators() {
            let next = e(g.value(), g.value_sort())
                .ok_or_else(|| TraceError::MissingBinding(g.value().clone()))?;
            expect_sort(&next, g.value_sort())?;
            for h in next.generators() {
                let mut steps: Steps = Steps::with_capacity(g.len() + h.len());
                match g.value_sort() {
                    Sort::Hold => {
                        if g.last().to != h.first().from {
                            continue;
                        }
                        steps.extend_from_slice(&g.steps()[..g.len() - 1]);
                        steps.push(Transition::new(g.last().from, h.first().to));
                        steps.extend_from_slice(&h.steps()[1..]);
                    }
                    _ => {
                        steps.extend_from_slice(g.steps());
                        steps.extend_from_slice(h.steps());
                    }
                }
                gens.insert(
                    Trace::new(k.sort(), steps, h.value_sort(), h.value().clone())?,
                );
            }
        }
        Ok(gens_at(k.sort(), gens))
    }
}

impl Algebra for TraceModel {
    type Carrier = TraceSet;
    type Error = TraceError;

    fn operate(&self, op: &Op, sort: Sort, args: Vec<TraceSet>) -> Result<TraceSet, TraceError> {
        if sort == Sort::Star {
            return Err(TraceError::SortMismatch {
                expected: Sort::Cede,
                found: sort,
            });
        }
        match *op {
            Op::Join(_) => self.join(sort, &args),
            Op::Update { loc, bit } if sort == Sort::Hold => self.update(loc, bit, &args[0]),
            Op::Lookup { loc } if sort == Sort::Hold => self.lookup(loc, &args[0], &args[1]),
            Op::Transition(t) if sort == Sort::Hold => prefix(t.from, t.to, &args[0]),
            Op::Acquire => self.acquire(&args[0]),
            Op::Release => self.release(&args[0]),
            _ => Err(KernelError::UnknownOperator {
                op: format!("{op:?} at sort {sort}"),
                path: NodePath::default(),
            }
            .into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traces::closure::{closure_bounded, OracleConfig};

    fn locs() -> Locations {
        Locations::default()
    }

    fn st(s: &str) -> Store {
        locs().parse_store(s).unwrap()
    }

    fn tr(a: &str, b: &str) -> Transition {
        Transition::new(st(a), st(b))
    }

    fn trace(start: Sort, steps: &[(&str, &str)], vs: Sort, x: &str) -> Trace {
        Trace::new(start, steps.iter().map(|(a, b)| tr(a, b)), vs, x).unwrap()
    }

    fn set(sort: Sort, gens: Vec<Trace>) -> TraceSet {
        TraceSet::from_generators(Discipline::Sorted, sort, gens).unwrap()
    }

    #[test]
    fn prefix_composes_first_transition() {
        let k = set(Sort::Hold, vec![trace(Sort::Hold, &[("10", "00")], Sort::Hold, "x")]);
        let p = prefix(st("11"), st("10"), &k).unwrap();
        let want = set(Sort::Hold, vec![trace(Sort::Hold, &[("11", "00")], Sort::Hold, "x")]);
        assert_eq!(p, want);
        assert!(prefix(st("11"), st("01"), &k).unwrap().is_empty());
        let cede = set(Sort::Cede, vec![]);
        assert!(prefix(st("11"), st("01"), &cede).is_err());
    }

    #[test]
    fn unit_and_strictness() {
        let m = TraceModel::default();
        let u = m.unit(Sort::Hold, "x");
        assert_eq!(u.len(), 4);
        assert!(u.is_canonical());
        let e = TraceSet::empty(Discipline::Sorted, Sort::Hold);
        assert!(m.update(Loc(0), true, &e).unwrap().is_empty());
        assert!(m.join(Sort::Hold, &[]).unwrap().is_empty());
        let cu = m.unit(Sort::Cede, "x");
        let two = trace(Sort::Cede, &[("01", "01"), ("10", "10")], Sort::Cede, "x");
        assert!(cu.member(&two).unwrap());
        let moved = trace(Sort::Hold, &[("01", "10")], Sort::Hold, "x");
        assert!(!u.member(&moved).unwrap());
    }

    #[test]
    fn empty_law_and_fuse_law() {
        let m = TraceModel::default();
        let k = set(
            Sort::Cede,
            vec![
                trace(Sort::Cede, &[("01", "11"), ("00", "10")], Sort::Cede, "x"),
                trace(Sort::Cede, &[("11", "11")], Sort::Hold, "y"),
            ],
        );
        let back = m.acquire(&m.release(&k).unwrap()).unwrap();
        assert!(back.equal(&k).unwrap());
        let h = set(Sort::Hold, vec![trace(Sort::Hold, &[("01", "11")], Sort::Hold, "y")]);
        let fused = m.release(&m.acquire(&h).unwrap()).unwrap();
        assert!(h.subset(&fused).unwrap());
        assert!(!fused.subset(&h).unwrap());
    }

    // Generator-level ◁ and ▷ against relabelling the oracle closure.
    #[test]
    fn delimiters_match_literal_definitions() {
        let m = TraceModel::default();
        let l = locs();
        let cfg = OracleConfig { cap: 1_000_000, margin: 1 };
        let k = set(
            Sort::Cede,
            vec![
                trace(Sort::Cede, &[("01", "11")], Sort::Cede, "x"),
                trace(Sort::Cede, &[("00", "10"), ("10", "11")], Sort::Hold, "y"),
            ],
        );
        let released = m.release(&k).unwrap();
        let lit: BTreeSet<Trace> = closure_bounded(k.generators(), Discipline::Sorted, 3, &l, cfg)
            .unwrap()
            .into_iter()
            .map(|t| t.relabel(Sort::Hold, t.value_sort()))
            .collect();
        let ours = closure_bounded(released.generators(), Discipline::Sorted, 3, &l, cfg).unwrap();
        assert_eq!(lit, ours);

        let h = m.release(&k).unwrap();
        let acq = m.acquire(&h).unwrap();
        let lit: BTreeSet<Trace> = closure_bounded(
            closure_bounded(h.generators(), Discipline::Sorted, 3, &l, cfg)
                .unwrap()
                .iter()
                .map(|t| t.relabel(Sort::Cede, t.value_sort()))
                .collect::<Vec<_>>()
                .iter(),
            Discipline::Sorted,
            3,
            &l,
            cfg,
        )
        .unwrap();
        let ours = closure_bounded(acq.generators(), Discipline::Sorted, 3, &l, cfg).unwrap();
        assert_eq!(lit, ours);
    }

    #[test]
    fn kleisli_units() {
        let m = TraceModel::default();
        let k = set(
            Sort::Hold,
            vec![
                trace(Sort::Hold, &[("01", "11"), ("00", "00")], Sort::Hold, "x"),
                trace(Sort::Hold, &[("11", "10")], Sort::Cede, "y"),
            ],
        );
        let ret = |n: &Name, s: Sort| Some(unit(&locs(), s, n.clone()));
        assert!(m.kleisli(&ret, &k).unwrap().equal(&k).unwrap());
        let e = |n: &Name, s: Sort| {
            (&**n == "x").then(|| set(s, vec![trace(s, &[("00", "01")], Sort::Cede, "z")]))
        };
        let u = m.unit(Sort::Hold, "x");
        assert_eq!(m.kleisli(&e, &u).unwrap(), e(&Name::from("x"), Sort::Hold).unwrap());
        assert!(matches!(m.kleisli(&e, &k), Err(TraceError::MissingBinding(_))));
    }
}
