use crate::kernel::{Sort, Term};
use crate::store::{Loc, Locations, Store};
use crate::traces::{Trace, TraceSet};

/// `A_{ℓ,b}x`: continues with `x` only when `ℓ` holds `b`.
pub fn cell_assert(loc: Loc, bit: bool, x: Term) -> Term {
    let bot = Term::bot(x.sort());
    let (t0, t1) = if bit { (bot, x) } else { (x, bot) };
    Term::lookup(loc, t0, t1).expect("arguments share a sort")
}

/// `{σ,ρ}x`: asserts every cell of `σ`, then writes every cell of `ρ`.
pub fn open_transition(locs: &Locations, sigma: Store, rho: Store, x: Term) -> Term {
    let ls: Vec<Loc> = locs.locs().collect();
    let mut t = x;
    for &l in ls.iter().rev() {
        t = Term::update(l, rho.get(l), t);
    }
    for &l in ls.iter().rev() {
        t = cell_assert(l, sigma.get(l), t);
    }
    t
}

/// A term denoting the closure of a single trace.
pub fn reify_trace(locs: &Locations, trace: &Trace) -> Term {
    let mut t = Term::var(trace.value().clone(), trace.value_sort());
    if trace.value_sort() == Sort::Cede {
        t = Term::release(t).expect("cede-sorted");
    }
    for (i, tr) in trace.steps().iter().enumerate().rev() {
        t = open_transition(locs, tr.from, tr.to, t);
        if i > 0 {
            t = Term::release(Term::acquire(t).expect("hold-sorted")).expect("cede-sorted");
        }
    }
    if trace.start() == Sort::Cede {
        t = Term::acquire(t).expect("hold-sorted");
    }
    t
}

/// The join of the reified generators, in canonical order.
pub fn reify(locs: &Locations, k: &TraceSet) -> Term {
    let mut ts: Vec<Term> = k.generators().map(|g| reify_trace(locs, g)).collect();
    if ts.len() == 1 {
        return ts.pop().expect("one term");
    }
    Term::join(k.sort(), ts).expect("generators share the start sort")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::Transition;

    #[test]
    fn reifies_example_trace() {
        let locs = Locations::default();
        let s = |t: &str| locs.parse_store(t).unwrap();
        let tau = Trace::new(
            Sort::Hold,
            [Transition::new(s("11"), s("10")), Transition::new(s("01"), s("00"))],
            Sort::Cede,
            "x",
        )
        .unwrap();
        let x = Term::release(Term::var("x", Sort::Cede)).unwrap();
        let second = open_transition(&locs, s("01"), s("00"), x);
        let sep = Term::release(Term::acquire(second).unwrap()).unwrap();
        let want = open_transition(&locs, s("11"), s("10"), sep);
        assert_eq!(reify_trace(&locs, &tau), want);
    }

    #[test]
    fn open_transition_shape() {
        let locs = Locations::default();
        let s = |t: &str| locs.parse_store(t).unwrap();
        let t = open_transition(&locs, s("11"), s("10"), Term::var("x", Sort::Hold));
        assert_eq!(
            t.show(&locs).to_string(),
            "L_x(⊥, L_y(⊥, U_{x,1}U_{y,0}x))"
        );
        let a = cell_assert(Loc(1), false, Term::var("x", Sort::Hold));
        assert_eq!(a.show(&locs).to_string(), "L_y(x, ⊥)");
    }
}
