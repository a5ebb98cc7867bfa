use shared_state::checker::{
    check_equal, check_refines, check_representation, cross_check_g, denote, denote_b, denote_g,
    Witness, WitnessSide,
};
use shared_state::kernel::{Sort, Term, VarContext};
use shared_state::presentations::Theory;
use shared_state::store::{Locations, Store, Transition};
use shared_state::traces::{
    brookes_unit, brookes_write, closure_bounded, embed_cede, par, prefix, step_deductions,
    strip_cede, unit, Discipline, OracleConfig, Trace, TraceModel, TraceSet,
};

fn locs() -> Locations {
    Locations::default()
}

fn st(s: &str) -> Store {
    locs().parse_store(s).unwrap()
}

fn tr(a: &str, b: &str) -> Transition {
    Transition::new(st(a), st(b))
}

fn trace(start: Sort, steps: &[(&str, &str)], value_sort: Sort, x: &str) -> Trace {
    Trace::new(start, steps.iter().map(|(a, b)| tr(a, b)), value_sort, x).unwrap()
}

fn set(discipline: Discipline, sort: Sort, gens: Vec<Trace>) -> TraceSet {
    TraceSet::from_generators(discipline, sort, gens).unwrap()
}

fn ctx(pairs: &[(&str, Sort)]) -> VarContext {
    VarContext::from_pairs(pairs.iter().copied()).unwrap()
}

fn v(name: &str, s: Sort) -> Term {
    Term::var(name, s)
}

fn acq(t: Term) -> Term {
    Term::acquire(t).unwrap()
}

fn rel(t: Term) -> Term {
    Term::release(t).unwrap()
}

fn loc(name: &str) -> shared_state::store::Loc {
    locs().lookup(name).unwrap()
}

fn example_trace() -> Trace {
    trace(Sort::Hold, &[("11", "10"), ("11", "00")], Sort::Cede, "7")
}

#[test]
fn example_trace_deductions() {
    let l = locs();
    let chained = trace(Sort::Hold, &[("11", "10"), ("10", "00")], Sort::Cede, "7");
    let fused = trace(Sort::Hold, &[("11", "00")], Sort::Cede, "7");
    assert!(step_deductions(&chained, Discipline::Sorted, &l).contains(&fused));

    let succ = step_deductions(&example_trace(), Discipline::Sorted, &l);
    let back = trace(Sort::Hold, &[("11", "10"), ("11", "00"), ("01", "01")], Sort::Cede, "7");
    assert!(succ.contains(&back));
    let front = trace(Sort::Hold, &[("01", "01"), ("11", "10"), ("11", "00")], Sort::Cede, "7");
    assert!(!succ.contains(&front));

    let k = set(Discipline::Sorted, Sort::Hold, vec![chained.clone()]);
    assert!(k.member(&fused).unwrap());
    let k = set(Discipline::Sorted, Sort::Hold, vec![example_trace()]);
    assert!(!k.member(&front).unwrap());
}

#[test]
fn bounded_closure_counts() {
    let l = locs();
    let cfg = OracleConfig::default();
    for s in l.stores() {
        let g = Trace::new(Sort::Hold, [Transition::stutter(s)], Sort::Hold, "x").unwrap();
        let cl = closure_bounded([&g], Discipline::Sorted, 2, &l, cfg).unwrap();
        assert_eq!(cl.into_iter().collect::<Vec<_>>(), vec![g]);
    }
    let none: [&Trace; 0] = [];
    assert!(closure_bounded(none, Discipline::Sorted, 3, &l, cfg).unwrap().is_empty());
    // The generator, four front and four back stutters; mumbling adds nothing.
    let g = trace(Sort::Cede, &[("11", "00")], Sort::Cede, "x");
    let cl = closure_bounded([&g], Discipline::Sorted, 2, &l, cfg).unwrap();
    assert_eq!(cl.len(), 9);
    assert_eq!(cl.iter().filter(|t| t.len() == 2).count(), 8);
}

#[test]
fn subset_and_canonical_forms() {
    let k1 = set(Discipline::Sorted, Sort::Hold, vec![trace(Sort::Hold, &[("11", "00")], Sort::Cede, "7")]);
    let k2 = set(
        Discipline::Sorted,
        Sort::Hold,
        vec![trace(Sort::Hold, &[("11", "10"), ("10", "00")], Sort::Cede, "7")],
    );
    assert!(k1.subset(&k2).unwrap());
    assert!(!k2.subset(&k1).unwrap());
    assert!(TraceSet::empty(Discipline::Sorted, Sort::Hold).subset(&k1).unwrap());
    let both = k1.union(&k2).unwrap();
    assert!(both.equal(&both.clone().canonicalize()).unwrap());
    assert_eq!(both.len(), 1);
}

#[test]
fn prefix_examples() {
    let k = set(Discipline::Sorted, Sort::Hold, vec![trace(Sort::Hold, &[("10", "00")], Sort::Hold, "x")]);
    let p = prefix(st("11"), st("10"), &k).unwrap();
    let expected = set(Discipline::Sorted, Sort::Hold, vec![trace(Sort::Hold, &[("11", "00")], Sort::Hold, "x")]);
    assert_eq!(p, expected);
    let all_at = set(
        Discipline::Sorted,
        Sort::Hold,
        vec![
            trace(Sort::Hold, &[("01", "11")], Sort::Cede, "x"),
            trace(Sort::Hold, &[("01", "00"), ("10", "10")], Sort::Hold, "y"),
        ],
    );
    assert!(prefix(st("01"), st("01"), &all_at).unwrap().equal(&all_at).unwrap());
}

#[test]
fn locked_read_term() {
    let l = locs();
    let c = ctx(&[("3", Sort::Hold), ("7", Sort::Cede)]);
    let inner = Term::update(loc("x"), true, Term::update(loc("y"), true, rel(v("7", Sort::Cede))));
    let t = Term::update(
        loc("y"),
        false,
        rel(acq(Term::lookup(loc("y"), v("3", Sort::Hold), inner).unwrap())),
    );
    assert_eq!(t.show(&l).to_string(), "U_{y,0}▷◁L_y(3, U_{x,1}U_{y,1}▷7)");
    let k = denote(Theory::S, &l, &c, &t).unwrap();
    let expected = trace(Sort::Hold, &[("11", "10"), ("11", "11")], Sort::Cede, "7");
    assert!(k.member(&expected).unwrap());
    assert!(k.contains(&expected));
    assert!(k.generators().any(|g| g.show(&l).to_string() == "• [ (11,10) (11,11) ] ∘ 7"));
}

#[test]
fn trace_model_operations() {
    let l = locs();
    let m = TraceModel::new(l.clone());
    let c = ctx(&[("x", Sort::Cede)]);
    let x = v("x", Sort::Cede);
    assert_eq!(denote(Theory::S, &l, &c, &acq(rel(x.clone()))).unwrap(), unit(&l, Sort::Cede, "x"));
    assert!(denote(Theory::S, &l, &c, &Term::bot(Sort::Cede)).unwrap().is_empty());
    assert!(m.join(Sort::Hold, &[]).unwrap().is_empty());
    let empty = TraceSet::empty(Discipline::Sorted, Sort::Hold);
    assert!(m.update(loc("x"), true, &empty).unwrap().is_empty());

    let u = unit(&l, Sort::Hold, "x");
    assert_eq!(u.len(), 4);
    assert!(u.is_canonical());
    let cu = unit(&l, Sort::Cede, "x");
    for s in l.stores() {
        for r in l.stores() {
            let two = Trace::new(Sort::Cede, [Transition::stutter(s), Transition::stutter(r)], Sort::Cede, "x").unwrap();
            assert!(cu.member(&two).unwrap());
            if s != r {
                let moved = Trace::new(Sort::Hold, [Transition::new(s, r)], Sort::Hold, "x").unwrap();
                assert!(!u.member(&moved).unwrap());
            }
        }
    }
}

#[test]
fn brookes_examples() {
    let l = locs();
    let u = brookes_unit(&l, "★");
    let w = brookes_write(&l, loc("x"), true, &u).unwrap();
    let expected: Vec<String> = l
        .stores()
        .map(|s| {
            Trace::new(Sort::Star, [Transition::new(s, s.set(loc("x"), true))], Sort::Star, "★")
                .unwrap()
                .show(&l)
                .to_string()
        })
        .collect();
    let mut got: Vec<String> = w.generators().map(|g| g.show(&l).to_string()).collect();
    let mut want = expected.clone();
    got.sort();
    want.sort();
    assert_eq!(got, want);

    assert_eq!(strip_cede(&unit(&l, Sort::Cede, "x")).unwrap(), brookes_unit(&l, "x"));
    let back = embed_cede(&strip_cede(&unit(&l, Sort::Cede, "x")).unwrap()).unwrap();
    assert!(back.equal(&unit(&l, Sort::Cede, "x")).unwrap());

    let c = ctx(&[("x", Sort::Star)]);
    for s in l.stores() {
        let t = Term::transition(Transition::stutter(s), v("x", Sort::Star));
        let k = denote_b(&l, &c, &t).unwrap();
        let single = set(Discipline::Brookes, Sort::Star, vec![Trace::new(Sort::Star, [Transition::stutter(s)], Sort::Star, "x").unwrap()]);
        assert!(k.equal(&single).unwrap());
        // x ≥ ⟨σ,σ⟩x
        assert!(k.subset(&brookes_unit(&l, "x")).unwrap());
    }
}

#[test]
fn par_examples() {
    let l = locs();
    let pair = |a: &shared_state::kernel::Name, b: &shared_state::kernel::Name| -> shared_state::kernel::Name {
        format!("({a},{b})").into()
    };
    let (ux, uy) = (brookes_unit(&l, "x"), brookes_unit(&l, "y"));
    let both = par(&ux, &uy, pair).unwrap();
    assert!(brookes_unit(&l, "(x,y)").subset(&both).unwrap());
    let empty = TraceSet::empty(Discipline::Brookes, Sort::Star);
    assert!(par(&empty, &ux, pair).unwrap().is_empty());

    let wx = brookes_write(&l, loc("x"), true, &ux).unwrap();
    let wy = brookes_write(&l, loc("y"), false, &uy).unwrap();
    let ab = par(&wx, &wy, |a, b| format!("({a},{b})").into()).unwrap();
    let ba = par(&wy, &wx, |b, a| format!("({a},{b})").into()).unwrap();
    assert!(ab.equal(&ba).unwrap());
}

#[test]
fn global_state_examples() {
    let l = locs();
    let c = ctx(&[("x0", Sort::Hold), ("x1", Sort::Hold), ("y", Sort::Hold)]);
    let (x0, x1, y) = (v("x0", Sort::Hold), v("x1", Sort::Hold), v("y", Sort::Hold));
    let ul = Term::update(loc("y"), false, Term::lookup(loc("y"), x0.clone(), x1.clone()).unwrap());
    let u = Term::update(loc("y"), false, x0.clone());
    assert_eq!(denote_g(Theory::G, &l, &c, &ul).unwrap(), denote_g(Theory::G, &l, &c, &u).unwrap());
    let merged = Term::lookup(loc("x"), Term::lookup(loc("x"), x0.clone(), x1).unwrap(), y.clone()).unwrap();
    let once = Term::lookup(loc("x"), x0.clone(), y).unwrap();
    assert_eq!(denote_g(Theory::G, &l, &c, &merged).unwrap(), denote_g(Theory::G, &l, &c, &once).unwrap());
    assert!(check_equal(Theory::G, &l, &c, &merged, &once).unwrap().holds);
    assert!(check_equal(Theory::S, &l, &c, &merged, &once).unwrap().holds);
    for b in [false, true] {
        for b2 in [false, true] {
            let xy = Term::update(loc("x"), b, Term::update(loc("y"), b2, x0.clone()));
            let yx = Term::update(loc("y"), b2, Term::update(loc("x"), b, x0.clone()));
            assert!(check_equal(Theory::S, &l, &c, &xy, &yx).unwrap().holds);
        }
    }
    assert!(check_equal(Theory::S, &l, &c, &ul, &u).unwrap().holds);
    assert!(cross_check_g(&l, &c, &ul).unwrap());
}

#[test]
fn write_elim_and_intro() {
    let l = locs();
    let c = ctx(&[("x", Sort::Cede)]);
    let x = v("x", Sort::Cede);
    for name in ["x", "y"] {
        let read = acq(Term::lookup(loc(name), rel(x.clone()), rel(x.clone())).unwrap());
        assert!(check_equal(Theory::S, &l, &c, &read, &x).unwrap().holds);
        for b1 in [false, true] {
            for b2 in [false, true] {
                let single = acq(Term::update(loc(name), b2, rel(x.clone())));
                let double =
                    acq(Term::update(loc(name), b1, rel(acq(Term::update(loc(name), b2, rel(x.clone()))))));
                assert!(check_refines(Theory::S, &l, &c, &single, &double).unwrap().holds);
                let intro = check_refines(Theory::S, &l, &c, &double, &single).unwrap();
                assert!(!intro.holds);
                assert_eq!(intro.direction, Some(WitnessSide::LeftOnly));
                let Some(Witness::Trace(w)) = intro.witness else { panic!("trace witness") };
                assert_eq!(w.state_changes(), 2);
                let lhs = denote(Theory::S, &l, &c, &double).unwrap();
                let rhs = denote(Theory::S, &l, &c, &single).unwrap();
                assert!(lhs.member(&w).unwrap());
                assert!(!rhs.member(&w).unwrap());
                let eq = check_equal(Theory::S, &l, &c, &double, &single).unwrap();
                assert!(!eq.holds);
            }
        }
    }
}

#[test]
fn same_read_intro_is_refuted() {
    let l = locs();
    let names = ["x00", "x01", "x10", "x11"];
    let c = ctx(&names.map(|n| (n, Sort::Cede)));
    let read = |a: Term, b: Term| acq(Term::lookup(loc("x"), rel(a), rel(b)).unwrap());
    let [a, b, cc, d] = names.map(|n| v(n, Sort::Cede));
    let twice = read(read(a.clone(), b), read(cc, d.clone()));
    let once = read(a, d);
    let verdict = check_refines(Theory::S, &l, &c, &twice, &once).unwrap();
    assert!(!verdict.holds);
    let Some(Witness::Trace(w)) = verdict.witness else { panic!("trace witness") };
    assert!(denote(Theory::S, &l, &c, &twice).unwrap().member(&w).unwrap());
}

#[test]
fn representation_and_cross_check_examples() {
    let l = locs();
    let c = ctx(&[("x", Sort::Cede)]);
    let x = v("x", Sort::Cede);
    let t = acq(Term::update(loc("y"), false, rel(acq(Term::update(loc("x"), true, rel(x))))));
    assert!(check_representation(&l, &c, &t).unwrap());

    let h = ctx(&[("x", Sort::Hold)]);
    for name in ["x", "y"] {
        for b in [false, true] {
            let u = Term::update(loc(name), b, v("x", Sort::Hold));
            assert!(cross_check_g(&l, &h, &u).unwrap());
            assert_eq!(denote(Theory::S, &l, &h, &u).unwrap().len(), 4);
        }
    }
    assert!(cross_check_g(&l, &h, &Term::bot(Sort::Hold)).unwrap());
}

#[test]
fn errors_propagate() {
    let l = locs();
    let c = ctx(&[("x", Sort::Cede)]);
    let bad = Term::var("z", Sort::Cede);
    assert!(denote(Theory::S, &l, &c, &bad).is_err());
    assert!(denote(Theory::G, &l, &c, &v("x", Sort::Cede)).is_err());
    assert!(check_equal(Theory::S, &l, &c, &v("x", Sort::Cede), &Term::bot(Sort::Hold)).is_err());
    let wrong = Term::var("x", Sort::Hold);
    assert!(denote(Theory::S, &l, &c, &wrong).is_err());
}
