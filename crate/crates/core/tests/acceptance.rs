//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use shared_state::checker::{
    all_steps, brookes_recovery, check_equal, check_refines, check_roundtrip, cross_check_g_suite,
    deduction_soundness, hush_redundancy, kleisli_suite, monad_laws, representation_suite,
    run_nogo2, run_nogo3, validate_axioms, validate_distributivity, validate_instances,
    CheckError, Equivalence, Report, SampleConfig, Witness, TRACE_SHAPES,
};
use shared_state::kernel::{Sort, Term, VarContext};
use shared_state::presentations::{build, Bounds, SchemeKind, Theory};
use shared_state::store::{Locations, Transition};
use shared_state::traces::{saturate_steps, Matcher, OracleConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Locations) -> Outcome);

fn from_reports(reports: &[Report]) -> Outcome {
    let mut checked = 0;
    for r in reports {
        if let Some(e) = r.failures().next() {
            return Err(format!("{}: {}", e.name, e.failure.as_deref().unwrap_or("")));
        }
        checked += r.checked();
    }
    Ok(format!("{checked} checks"))
}

fn cede_ctx() -> VarContext {
    VarContext::from_pairs([("x", Sort::Cede)]).unwrap()
}

fn acq(t: Term) -> Term {
    Term::acquire(t).unwrap()
}

fn rel(t: Term) -> Term {
    Term::release(t).unwrap()
}

fn write_pair(locs: &Locations, l: &str, b1: bool, b2: bool) -> (Term, Term) {
    let loc = locs.lookup(l).unwrap();
    let x = Term::var("x", Sort::Cede);
    let single = acq(Term::update(loc, b2, rel(x.clone())));
    let double = acq(Term::update(loc, b1, rel(acq(Term::update(loc, b2, rel(x))))));
    (single, double)
}

fn criterion1(locs: &Locations) -> Outcome {
    let ctx = cede_ctx();
    let x = Term::var("x", Sort::Cede);
    let mut shown = String::new();
    for l in ["x", "y"] {
        let loc = locs.lookup(l).unwrap();
        let read = acq(Term::lookup(loc, rel(x.clone()), rel(x.clone())).unwrap());
        if !check_equal(Theory::S, locs, &ctx, &read, &x).map_err(|e| e.to_string())?.holds {
            return Err(format!("irrelevant read at {l} refuted"));
        }
        for b1 in [false, true] {
            for b2 in [false, true] {
                let (single, double) = write_pair(locs, l, b1, b2);
                let elim = check_refines(Theory::S, locs, &ctx, &single, &double).map_err(|e| e.to_string())?;
                if !elim.holds {
                    return Err(format!("write elim refuted at {l} {b1} {b2}"));
                }
                let intro = check_refines(Theory::S, locs, &ctx, &double, &single).map_err(|e| e.to_string())?;
                let Some(Witness::Trace(w)) = &intro.witness else {
                    return Err(format!("write intro at {l} {b1} {b2} not refuted with a trace"));
                };
                if intro.holds || w.state_changes() != 2 {
                    return Err(format!("write intro witness {} has {} state changes", w.show(locs), w.state_changes()));
                }
                if shown.is_empty() && b1 != b2 {
                    shown = format!("write intro witness {}", w.show(locs));
                }
            }
        }
    }
    Ok(shown)
}

// Position of a sequence in `all_steps` order; `pos` maps a store's bits to
// its place in enumeration order.
fn index(steps: &[Transition], offsets: &[usize], pos: &[usize]) -> usize {
    let n = pos.len();
    offsets[steps.len()]
        + steps
            .iter()
            .fold(0, |acc, t| acc * n * n + pos[t.from.0 as usize] * n + pos[t.to.0 as usize])
}

fn criterion2(locs: &Locations) -> Outcome {
    let cfg = OracleConfig::default();
    let stores: Vec<_> = locs.stores().collect();
    let n = stores.len();
    let mut pos = vec![0; n];
    for (i, s) in stores.iter().enumerate() {
        pos[s.0 as usize] = i;
    }
    let gens = all_steps(locs, 3);
    let cands = all_steps(locs, 4);
    let mut offsets = vec![0usize; 6];
    for len in 1..=5 {
        offsets[len] = offsets[len - 1] + if len == 1 { 0 } else { (n * n).pow(len as u32 - 1) };
    }
    let mut pairs = 0u64;
    let mut member = vec![false; cands.len()];
    for (_, start, value_sort) in TRACE_SHAPES {
        let discipline = TRACE_SHAPES
            .iter()
            .find(|s| s.1 == start && s.2 == value_sort)
            .unwrap()
            .0;
        let (front, back) = discipline.open_ends(start, value_sort);
        for g in &gens {
            let cl = saturate_steps([g.clone()], &stores, front, back, 4 + cfg.margin, cfg.cap)
                .map_err(|c| format!("saturation cap exceeded at {c}"))?;
            member.iter_mut().for_each(|m| *m = false);
            for s in cl.iter().filter(|s| s.len() <= 4) {
                member[index(s, &offsets, &pos)] = true;
            }
            let m = Matcher::new(g, front, back);
            for (c, &expected) in cands.iter().zip(&member) {
                if m.matches(c) != expected {
                    return Err(format!("{start}…{value_sort}: generator {g:?} candidate {c:?}"));
                }
            }
            pairs += cands.len() as u64;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn samples(n: usize) -> SampleConfig {
    SampleConfig { samples: n, ..SampleConfig::default() }
}

fn run(reports: Vec<Result<Report, CheckError>>) -> Outcome {
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    from_reports(&reports)
}

fn criterion3(locs: &Locations) -> Outcome {
    let cfg = samples(100);
    let b = build(Theory::B, locs);
    let brookes: Vec<_> = b
        .schemes()
        .iter()
        .filter(|s| matches!(s.kind(), SchemeKind::M | SchemeKind::S | SchemeKind::H | SchemeKind::NdB))
        .flat_map(|s| s.instances(locs, Bounds::default()))
        .collect();
    if !brookes.iter().any(|i| i.scheme == "H") {
        return Err("no instances of H".into());
    }
    run(vec![
        validate_axioms(Theory::S, locs, &cfg),
        validate_instances(Theory::B, locs, &brookes, &cfg),
        validate_distributivity(locs, &cfg),
    ])
}

fn criterion4(locs: &Locations) -> Outcome {
    run(vec![representation_suite(locs, &samples(500)), kleisli_suite(locs, &samples(200))])
}

fn criterion5(locs: &Locations) -> Outcome {
    run(vec![monad_laws(locs, &samples(200))])
}

fn criterion6(locs: &Locations) -> Outcome {
    run(vec![brookes_recovery(locs, &samples(300))])
}

fn criterion7(locs: &Locations) -> Outcome {
    let cfg = samples(200);
    run(vec![
        check_roundtrip(Equivalence::TgsG, locs, &cfg),
        check_roundtrip(Equivalence::TrS, locs, &cfg),
        cross_check_g_suite(locs, &cfg),
    ])
}

fn criterion8(locs: &Locations) -> Outcome {
    let cfg = samples(200);
    run(vec![run_nogo3(locs, &cfg), run_nogo2(locs, 3), hush_redundancy(locs, &cfg, 3)])
}

fn criterion9(locs: &Locations) -> Outcome {
    run(vec![deduction_soundness(locs, 3)])
}

fn main() -> ExitCode {
    let locs = Locations::default();
    let mut all_ok = true;
    let criteria: [Criterion; 9] = [
        ("1 example regression", criterion1),
        ("2 oracle equivalence", criterion2),
        ("3 axiom validation", criterion3),
        ("4 representation round trip", criterion4),
        ("5 monad laws", criterion5),
        ("6 Brookes recovery", criterion6),
        ("7 theory equivalences", criterion7),
        ("8 no-go experiments", criterion8),
        ("9 deduction soundness", criterion9),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    for (name, run) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(o.as_str())) {
            continue;
        }
        let t = Instant::now();
        let out = run(&locs);
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                all_ok = false;
                println!("FAIL criterion {name}: {msg} ({secs:.1}s)");
            }
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
