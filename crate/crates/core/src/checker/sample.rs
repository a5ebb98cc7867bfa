use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::kernel::{Name, Op, Sort, Term, VarContext};
use crate::presentations::Theory;
use crate::store::{Locations, Store, Transition};
use crate::traces::{Discipline, GTable, Steps, Trace, TraceSet};

/// Bounds for random sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    /// Generators per sampled set; may include 0.
    pub generators: RangeInclusive<usize>,
    /// Transitions per sampled generator.
    pub trace_len: RangeInclusive<usize>,
    /// Variables in sampled contexts.
    pub context_size: usize,
    /// Samples per property.
    pub samples: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0x5eed,
            generators: 0..=3,
            trace_len: 1..=2,
            context_size: 2,
            samples: 100,
        }
    }
}

impl SampleConfig {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn random_store(rng: &mut ChaCha8Rng, locs: &Locations) -> Store {
    Store(rng.gen_range(0..locs.store_count() as u16))
}

/// A random transition sequence; about half the transitions continue from
/// the previous one's target, so mumbling has something to do.
pub fn random_steps(rng: &mut ChaCha8Rng, locs: &Locations, len: usize) -> Steps {
    let mut steps = Steps::new();
    for i in 0..len {
        let from = if i > 0 && rng.gen_bool(0.5) {
            steps[i - 1].to
        } else {
            random_store(rng, locs)
        };
        let to = if rng.gen_bool(0.3) { from } else { random_store(rng, locs) };
        steps.push(Transition::new(from, to));
    }
    steps
}

/// A random closed set whose generators start at `sort` and return
/// variables of `values`.
pub fn random_closed_set(
    rng: &mut ChaCha8Rng,
    locs: &Locations,
    discipline: Discipline,
    sort: Sort,
    values: &VarContext,
    cfg: &SampleConfig,
) -> TraceSet {
    let vals: Vec<(Name, Sort)> = values.iter().map(|(n, s)| (n.clone(), s)).collect();
    let count = if vals.is_empty() { 0 } else { rng.gen_range(cfg.generators.clone()) };
    let mut gens = Vec::with_capacity(count);
    for _ in 0..count {
        let len = rng.gen_range(cfg.trace_len.clone());
        let (value, value_sort) = vals.choose(rng).expect("non-empty").clone();
        let value_sort = if discipline == Discipline::Brookes { Sort::Star } else { value_sort };
        let steps = random_steps(rng, locs, len);
        gens.push(Trace::new(sort, steps, value_sort, value).expect("non-empty, matching ends"));
    }
    TraceSet::from_generators(discipline, sort, gens).expect("uniform start sort")
}

pub fn random_gtable(rng: &mut ChaCha8Rng, locs: &Locations, values: &VarContext) -> GTable {
    let vals: Vec<Name> = values.iter().map(|(n, _)| n.clone()).collect();
    if vals.is_empty() {
        return GTable::empty(locs);
    }
    let mut rows = Vec::new();
    for _ in locs.stores() {
        let n = rng.gen_range(0..=2);
        let row: BTreeSet<(Name, Store)> = (0..n)
            .map(|_| (vals.choose(rng).expect("non-empty").clone(), random_store(rng, locs)))
            .collect();
        rows.push(row);
    }
    GTable::from_rows(rows)
}

pub fn random_values(rng: &mut ChaCha8Rng, values: &VarContext) -> BTreeSet<Name> {
    values
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|(n, _)| n.clone())
        .collect()
}

/// The variables sampled environments return.
pub fn value_context(theory: Theory) -> VarContext {
    let pairs = match theory {
        Theory::S | Theory::Tr => [("p", Sort::Hold), ("q", Sort::Cede)],
        Theory::G | Theory::Tgs => [("p", Sort::Hold), ("q", Sort::Hold)],
        Theory::J | Theory::V | Theory::B => [("p", Sort::Star), ("q", Sort::Star)],
    };
    VarContext::from_pairs(pairs).expect("distinct")
}

/// A random context with `cfg.context_size` variables per sort of `theory`.
pub fn random_context(theory: Theory, cfg: &SampleConfig) -> VarContext {
    let mut ctx = VarContext::new();
    for s in theory.sorts() {
        for i in 0..cfg.context_size {
            let name = match s {
                Sort::Hold => format!("h{i}"),
                Sort::Cede => format!("c{i}"),
                Sort::Star => format!("s{i}"),
            };
            ctx.declare(name, s).expect("distinct");
        }
    }
    ctx
}

#[derive(Clone, Copy)]
enum Shape {
    Join(usize),
    Update,
    Lookup,
    Acquire,
    Release,
    Transition,
}

fn shapes(theory: Theory, sort: Sort) -> &'static [Shape] {
    use Shape::*;
    match (theory, sort) {
        (Theory::J, _) => &[Join(2)],
        (Theory::V, _) => &[Join(2), Join(2), Join(3), Join(0), Join(1)],
        (Theory::G, _) => &[Join(2), Update, Update, Lookup],
        (Theory::Tgs, _) | (Theory::B, _) => &[Join(2), Transition, Transition, Transition],
        (Theory::S, Sort::Hold) => &[Join(2), Update, Update, Lookup, Release, Release],
        (Theory::Tr, Sort::Hold) => &[Join(2), Transition, Transition, Release, Release],
        (Theory::S | Theory::Tr, _) => &[Join(2), Acquire, Acquire],
    }
}

/// A random well-sorted term of `theory` at `sort`, of depth at most `depth`.
pub fn random_term(
    rng: &mut ChaCha8Rng,
    theory: Theory,
    locs: &Locations,
    ctx: &VarContext,
    sort: Sort,
    depth: usize,
) -> Term {
    let vars: Vec<&Name> = ctx.of_sort(sort).collect();
    if depth <= 1 || rng.gen_bool(0.2) {
        return match vars.choose(rng) {
            Some(v) if rng.gen_bool(0.92) => Term::var((*v).clone(), sort),
            _ => Term::bot(sort),
        };
    }
    let sub = |rng: &mut ChaCha8Rng, s: Sort| random_term(rng, theory, locs, ctx, s, depth - 1);
    let loc = crate::store::Loc(rng.gen_range(0..locs.len() as u8));
    match *shapes(theory, sort).choose(rng).expect("non-empty") {
        Shape::Join(n) => {
            let args = (0..n).map(|_| sub(rng, sort)).collect();
            Term::join(sort, args).expect("same sort")
        }
        Shape::Update => Term::update(loc, rng.gen_bool(0.5), sub(rng, sort)),
        Shape::Lookup => {
            let (a, b) = (sub(rng, sort), sub(rng, sort));
            Term::lookup(loc, a, b).expect("same sort")
        }
        Shape::Acquire => Term::acquire(sub(rng, Sort::Hold)).expect("hold"),
        Shape::Release => Term::release(sub(rng, Sort::Cede)).expect("cede"),
        Shape::Transition => {
            let steps = random_steps(rng, locs, 1);
            Term::app(Op::Transition(steps[0]), sort, vec![sub(rng, sort)]).expect("unary")
        }
    }
}

/// One random carrier per variable of `ctx`.
pub fn random_trace_env(
    rng: &mut ChaCha8Rng,
    locs: &Locations,
    discipline: Discipline,
    ctx: &VarContext,
    values: &VarContext,
    cfg: &SampleConfig,
) -> BTreeMap<Name, TraceSet> {
    ctx.iter()
        .map(|(n, s)| (n.clone(), random_closed_set(rng, locs, discipline, s, values, cfg)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_well_formed() {
        let locs = Locations::default();
        let cfg = SampleConfig::default();
        let values = value_context(Theory::S);
        let a = random_closed_set(&mut cfg.rng(), &locs, Discipline::Sorted, Sort::Cede, &values, &cfg);
        let b = random_closed_set(&mut cfg.rng(), &locs, Discipline::Sorted, Sort::Cede, &values, &cfg);
        assert_eq!(a, b);
        let none = SampleConfig { generators: 0..=0, ..cfg.clone() };
        assert!(random_closed_set(&mut cfg.rng(), &locs, Discipline::Sorted, Sort::Hold, &values, &none).is_empty());
        let mut rng = cfg.rng();
        for _ in 0..50 {
            let k = random_closed_set(&mut rng, &locs, Discipline::Sorted, Sort::Hold, &values, &cfg);
            assert!(k.generators().all(|g| g.start() == Sort::Hold && !g.steps().is_empty()));
        }
        let ctx = random_context(Theory::S, &cfg);
        for t in Theory::ALL {
            let ctx = random_context(t, &cfg);
            let sig = crate::presentations::build(t, &locs);
            for _ in 0..50 {
                let s = t.sorts()[rng.gen_range(0..t.sorts().len())];
                let term = random_term(&mut rng, t, &locs, &ctx, s, 5);
                sig.signature().check(&term).unwrap();
                assert!(term.depth() <= 5);
            }
        }
        assert_eq!(ctx.len(), 4);
    }
}
