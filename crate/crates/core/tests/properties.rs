use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shared_state::checker::{
    all_steps, random_closed_set, random_context, random_term, translation_soundness,
    validate_axioms, value_context, SampleConfig,
};
use shared_state::kernel::{evaluate, substitute, Sort, Substitution, Term, VarContext};
use shared_state::presentations::{Bounds, Theory};
use shared_state::store::Locations;
use shared_state::traces::{
    closure_bounded, open_transition, prefix, unit, Discipline, OracleConfig, Trace, TraceModel,
    TraceSet,
};

fn small() -> SampleConfig {
    SampleConfig { samples: 25, ..SampleConfig::default() }
}

fn random_subst(rng: &mut ChaCha8Rng, theory: Theory, locs: &Locations, ctx: &VarContext) -> Substitution {
    ctx.iter()
        .map(|(n, s)| (n.clone(), random_term(rng, theory, locs, ctx, s, 3)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn substitution_composes(seed in any::<u64>(), theory in prop::sample::select(vec![Theory::S, Theory::G, Theory::B])) {
        let locs = Locations::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = random_context(theory, &SampleConfig::default());
        let sort = theory.sorts()[0];
        let t = random_term(&mut rng, theory, &locs, &ctx, sort, 4);
        let a = random_subst(&mut rng, theory, &locs, &ctx);
        let b = random_subst(&mut rng, theory, &locs, &ctx);
        let stepwise = substitute(&substitute(&t, &a).unwrap(), &b).unwrap();
        let composed = substitute(&t, &a.then(&b).unwrap()).unwrap();
        prop_assert_eq!(stepwise, composed);
        prop_assert_eq!(substitute(&t, &Substitution::identity_on(&t)).unwrap(), t);
    }

    #[test]
    fn delimiters_cancel_on_random_sets(seed in any::<u64>()) {
        let locs = Locations::default();
        let m = TraceModel::new(locs.clone());
        let cfg = SampleConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = value_context(Theory::S);
        let k = random_closed_set(&mut rng, &locs, Discipline::Sorted, Sort::Hold, &values, &cfg);
        prop_assert!(m.acquire(&m.release(&m.acquire(&k).unwrap()).unwrap()).unwrap().equal(&m.acquire(&k).unwrap()).unwrap());
        prop_assert!(k.subset(&m.release(&m.acquire(&k).unwrap()).unwrap()).unwrap());
        let c = random_closed_set(&mut rng, &locs, Discipline::Sorted, Sort::Cede, &values, &cfg);
        prop_assert!(m.acquire(&m.release(&c).unwrap()).unwrap().equal(&c).unwrap());
    }

    #[test]
    fn margin_does_not_change_bounded_closure(seed in any::<u64>(), brookes in any::<bool>()) {
        let locs = Locations::default();
        let cfg = SampleConfig { generators: 1..=2, trace_len: 1..=3, ..SampleConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (discipline, sort, values) = if brookes {
            (Discipline::Brookes, Sort::Star, value_context(Theory::B))
        } else {
            (Discipline::Sorted, Sort::Cede, value_context(Theory::S))
        };
        let k = random_closed_set(&mut rng, &locs, discipline, sort, &values, &cfg);
        let tight = closure_bounded(k.generators(), discipline, 3, &locs, OracleConfig { margin: 0, ..OracleConfig::default() }).unwrap();
        let loose = closure_bounded(k.generators(), discipline, 3, &locs, OracleConfig::default()).unwrap();
        prop_assert_eq!(&tight, &loose);
        for t in &loose {
            prop_assert!(k.member(t).unwrap());
        }
    }
}

#[test]
fn prefix_commutes_with_closure() {
    let locs = Locations::default();
    let cfg = OracleConfig::default();
    let stores: Vec<_> = locs.stores().collect();
    for steps in all_steps(&locs, 3) {
        for value_sort in [Sort::Hold, Sort::Cede] {
            let g = Trace::new(Sort::Hold, steps.iter().copied(), value_sort, "x").unwrap();
            let k = TraceSet::from_generators(Discipline::Sorted, Sort::Hold, [g.clone()]).unwrap();
            let closed = closure_bounded([&g], Discipline::Sorted, 3, &locs, cfg).unwrap();
            for &sigma in &stores {
                for &rho in &stores {
                    let p = prefix(sigma, rho, &k).unwrap();
                    let lhs = closure_bounded(p.generators(), Discipline::Sorted, 3, &locs, cfg).unwrap();
                    let rhs: BTreeSet<Trace> = closed
                        .iter()
                        .filter(|t| t.steps()[0].from == rho)
                        .map(|t| {
                            let mut s: Vec<_> = t.steps().to_vec();
                            s[0].from = sigma;
                            Trace::new(Sort::Hold, s, t.value_sort(), t.value().clone()).unwrap()
                        })
                        .collect();
                    assert_eq!(lhs, rhs, "prefix({sigma:?},{rho:?}) of {}", g.show(&locs));
                }
            }
        }
    }
}

#[test]
fn stutter_joins_evaluate_to_units() {
    let locs = Locations::default();
    let m = TraceModel::new(locs.clone());
    let x = |s| Term::var("x", s);
    let holds = locs.stores().map(|s| open_transition(&locs, s, s, x(Sort::Hold))).collect();
    let cedes = locs
        .stores()
        .map(|s| {
            let inner = open_transition(&locs, s, s, Term::release(x(Sort::Cede)).unwrap());
            Term::acquire(inner).unwrap()
        })
        .collect();
    let env = |n: &shared_state::kernel::Name, s: Sort| Some(unit(&locs, s, n.clone()));
    let h = evaluate(&m, &env, &Term::join(Sort::Hold, holds).unwrap()).unwrap();
    let c = evaluate(&m, &env, &Term::join(Sort::Cede, cedes).unwrap()).unwrap();
    assert!(h.equal(&unit(&locs, Sort::Hold, "x")).unwrap());
    assert!(c.equal(&unit(&locs, Sort::Cede, "x")).unwrap());
}

#[test]
fn every_theory_validates() {
    let locs = Locations::default();
    for theory in [Theory::S, Theory::Tr, Theory::G, Theory::Tgs, Theory::J, Theory::V, Theory::B] {
        let report = validate_axioms(theory, &locs, &small()).unwrap();
        assert!(report.passed(), "{theory}:\n{report}");
        assert!(report.checked() > 0);
    }
}

#[test]
fn translations_are_sound() {
    let locs = Locations::default();
    let bounds = Bounds { max_join_arity: 2, squash_arity: 2 };
    let report = translation_soundness(&locs, bounds).unwrap();
    assert!(report.passed(), "{report}");
    assert!(report.entries.len() >= 6);
}
