use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::checker::denote::{denote, denote_b, denote_tr_direct};
use crate::checker::sample::{random_closed_set, random_context, random_gtable, random_term, random_values, value_context};
use crate::checker::verdict::check_equal;
use crate::checker::{denote_g, CheckError, Report, SampleConfig};
use crate::kernel::{evaluate, evaluate_in, Algebra, Name, Op, PowersetAlgebra, Sort, Term, VarContext};
use crate::presentations::{
    apply_translation, build, builtin_translations, compose, AxiomInstance, Bounds, Relation, Theory,
    Translation,
};
use crate::store::{Locations, Store, Transition};
use crate::traces::{
    brookes_join, brookes_kleisli, brookes_read, brookes_transition, brookes_unit, brookes_write,
    closure_bounded, embed_cede, hush_step, member_of, reify, reify_brookes, reify_trace,
    single_cell_witness, step_deductions, strip_cede, unit, yield1, yield2, BrookesModel,
    Discipline, GTable, OracleConfig, StateModel, Steps, Trace, TraceModel, TraceSet,
};

const TERM_DEPTH: usize = 4;
const REPRESENTATION_DEPTH: usize = 5;

fn translation(locs: &Locations, name: &str) -> Translation {
    builtin_translations(locs)
        .into_iter()
        .find(|e| e.name() == name)
        .expect("built in")
}

fn show_instance(inst: &AxiomInstance, locs: &Locations) -> String {
    format!(
        "{} {}: {} = {}",
        inst.scheme,
        inst.params,
        inst.lhs.show(locs),
        inst.rhs.show(locs)
    )
}

/// One model to evaluate axiom instances in, with its environment sampler.
trait Sampled: Algebra {
    fn sample(&self, rng: &mut ChaCha8Rng, sort: Sort, cfg: &SampleConfig) -> Self::Carrier;
    fn same(&self, a: &Self::Carrier, b: &Self::Carrier) -> Result<bool, CheckError>;
    fn render(&self, c: &Self::Carrier) -> String;
}

impl Sampled for TraceModel {
    fn sample(&self, rng: &mut ChaCha8Rng, sort: Sort, cfg: &SampleConfig) -> TraceSet {
        random_closed_set(rng, self.locations(), Discipline::Sorted, sort, &value_context(Theory::S), cfg)
    }

    fn same(&self, a: &TraceSet, b: &TraceSet) -> Result<bool, CheckError> {
        Ok(a.equal(b)?)
    }

    fn render(&self, c: &TraceSet) -> String {
        format!("{{{}}}", c.show(self.locations()).to_string().trim_end().replace('\n', "; "))
    }
}

impl Sampled for BrookesModel {
    fn sample(&self, rng: &mut ChaCha8Rng, _: Sort, cfg: &SampleConfig) -> TraceSet {
        random_closed_set(rng, self.locations(), Discipline::Brookes, Sort::Star, &value_context(Theory::B), cfg)
    }

    fn same(&self, a: &TraceSet, b: &TraceSet) -> Result<bool, CheckError> {
        Ok(a.equal(b)?)
    }

    fn render(&self, c: &TraceSet) -> String {
        format!("{{{}}}", c.show(self.locations()).to_string().trim_end().replace('\n', "; "))
    }
}

impl Sampled for StateModel {
    fn sample(&self, rng: &mut ChaCha8Rng, _: Sort, _: &SampleConfig) -> GTable {
        random_gtable(rng, self.locations(), &value_context(Theory::G))
    }

    fn same(&self, a: &GTable, b: &GTable) -> Result<bool, CheckError> {
        Ok(a == b)
    }

    fn render(&self, c: &GTable) -> String {
        let rows: Vec<String> = c
            .rows()
            .map(|(s, row)| {
                let outs: Vec<String> = row
                    .iter()
                    .map(|(x, r)| format!("({x},{})", self.locations().render(*r)))
                    .collect();
                format!("{}↦{{{}}}", self.locations().render(s), outs.join(","))
            })
            .collect();
        rows.join(" ")
    }
}

impl Sampled for PowersetAlgebra<Name> {
    fn sample(&self, rng: &mut ChaCha8Rng, _: Sort, _: &SampleConfig) -> BTreeSet<Name> {
        random_values(rng, &value_context(Theory::V))
    }

    fn same(&self, a: &BTreeSet<Name>, b: &BTreeSet<Name>) -> Result<bool, CheckError> {
        Ok(a == b)
    }

    fn render(&self, c: &BTreeSet<Name>) -> String {
        let names: Vec<String> = c.iter().map(|n| n.to_string()).collect();
        format!("{{{}}}", names.join(","))
    }
}

fn validate_in<A>(
    alg: &A,
    locs: &Locations,
    instances: &[AxiomInstance],
    cfg: &SampleConfig,
) -> Result<Report, CheckError>
where
    A: Sampled,
    CheckError: From<A::Error>,
{
    let mut rng = cfg.rng();
    let mut by_scheme: BTreeMap<&str, (usize, Option<String>)> = BTreeMap::new();
    for inst in instances {
        let entry = by_scheme.entry(inst.scheme).or_default();
        for _ in 0..cfg.samples {
            let env: BTreeMap<Name, A::Carrier> = inst
                .ctx
                .iter()
                .map(|(n, s)| (n.clone(), alg.sample(&mut rng, s, cfg)))
                .collect();
            let l = evaluate_in(alg, &env, &inst.lhs)?;
            let r = evaluate_in(alg, &env, &inst.rhs)?;
            entry.0 += 1;
            if entry.1.is_none() && !alg.same(&l, &r)? {
                let shown: Vec<String> = env.iter().map(|(n, c)| format!("{n} := {}", alg.render(c))).collect();
                entry.1 = Some(format!(
                    "{} under {}: lhs {} rhs {}",
                    show_instance(inst, locs),
                    shown.join(", "),
                    alg.render(&l),
                    alg.render(&r)
                ));
            }
        }
    }
    let mut report = Report::new();
    for (scheme, (checked, failure)) in by_scheme {
        report.record(scheme, checked, failure);
    }
    Ok(report)
}

/// Evaluates both sides of the given instances of `theory`'s axioms in the
/// theory's model, under `cfg.samples` random environments each.
pub fn validate_instances(
    theory: Theory,
    locs: &Locations,
    instances: &[AxiomInstance],
    cfg: &SampleConfig,
) -> Result<Report, CheckError> {
    match theory {
        Theory::S | Theory::Tr => validate_in(&TraceModel::new(locs.clone()), locs, instances, cfg),
        Theory::B => validate_in(&BrookesModel::new(locs.clone()), locs, instances, cfg),
        Theory::G | Theory::Tgs => validate_in(&StateModel::new(locs.clone()), locs, instances, cfg),
        Theory::J | Theory::V => validate_in(&PowersetAlgebra::<Name>::new(), locs, instances, cfg),
    }
}

/// Every axiom instance of `theory` within the default bounds.
pub fn validate_axioms(theory: Theory, locs: &Locations, cfg: &SampleConfig) -> Result<Report, CheckError> {
    let instances = build(theory, locs).instantiate_axioms(Bounds::default());
    validate_instances(theory, locs, &instances, cfg)
}

/// `Fuse` with its inequation turned around: `x ∨ ▷◁x = x`.
pub fn corrupted_fuse() -> AxiomInstance {
    let x = Term::var("x0", Sort::Hold);
    let fused = Term::release(Term::acquire(x.clone()).expect("hold")).expect("cede");
    AxiomInstance {
        scheme: "Fuse (flipped)",
        params: String::new(),
        relation: Relation::Ge,
        ctx: VarContext::from_pairs([("x0", Sort::Hold)]).expect("one variable"),
        lhs: Term::or(fused, x.clone()).expect("same sort"),
        rhs: x,
    }
}

fn args_of(shape: &[Sort], prefix: &str) -> Vec<Term> {
    shape
        .iter()
        .enumerate()
        .map(|(i, &s)| Term::var(format!("{prefix}{i}"), s))
        .collect()
}

fn context_of(terms: &[&Term]) -> VarContext {
    let mut ctx = VarContext::new();
    for t in terms {
        for (n, s) in t.free_vars() {
            if ctx.get(&n).is_none() {
                ctx.declare(n, s).expect("fresh");
            }
        }
    }
    ctx
}

fn instance(scheme: &'static str, params: String, lhs: Term, rhs: Term) -> AxiomInstance {
    AxiomInstance {
        scheme,
        params,
        relation: Relation::Eq,
        ctx: context_of(&[&lhs, &rhs]),
        lhs,
        rhs,
    }
}

/// Binary-join distributivity of every shared-state operator in every
/// argument position, joins of arity 1 to 4 included, and strictness of the
/// unary ones.
pub fn distributivity_instances(locs: &Locations) -> Vec<AxiomInstance> {
    let sig = build(Theory::S, locs);
    let mut ops: Vec<(Op, Sort)> = sig.signature().operators().collect();
    for s in [Sort::Hold, Sort::Cede] {
        ops.extend((1..=4).map(|n| (Op::Join(n), s)));
    }
    let mut out = Vec::new();
    for (op, sort) in ops {
        let shape = op.shape(sort).expect("declared operator");
        for (i, &arg_sort) in shape.iter().enumerate() {
            let params = format!("{} #{i}", op.show(locs));
            let base = args_of(&shape, "x");
            let with = |t: Term| {
                let mut args = base.clone();
                args[i] = t;
                Term::app(op, sort, args).expect("shape")
            };
            let (a, b) = (Term::var("a", arg_sort), Term::var("b", arg_sort));
            let lhs = with(Term::or(a.clone(), b.clone()).expect("same sort"));
            let rhs = Term::or(with(a), with(b)).expect("same sort");
            out.push(instance("Distributivity", params.clone(), lhs, rhs));
            if shape.len() == 1 && !matches!(op, Op::Join(_)) {
                out.push(instance("Strictness", params, with(Term::bot(arg_sort)), Term::bot(sort)));
            }
        }
    }
    out
}

pub fn validate_distributivity(locs: &Locations, cfg: &SampleConfig) -> Result<Report, CheckError> {
    validate_instances(Theory::S, locs, &distributivity_instances(locs), cfg)
}

fn translate_context(e: &Translation, ctx: &VarContext) -> Result<VarContext, CheckError> {
    let mut out = VarContext::new();
    for (n, s) in ctx.iter() {
        out.declare(n.clone(), e.map_sort(s)?)?;
    }
    Ok(out)
}

/// Every source axiom instance, translated, is an equation of the target.
pub fn translation_soundness(locs: &Locations, bounds: Bounds) -> Result<Report, CheckError> {
    let mut report = Report::new();
    let mut all = builtin_translations(locs);
    all.sort_by(|a, b| a.name().cmp(b.name()));
    for e in all {
        let instances = build(e.source(), locs).instantiate_axioms(bounds);
        let mut failure = None;
        for inst in &instances {
            let ctx = translate_context(&e, &inst.ctx)?;
            let l = apply_translation(&e, &inst.lhs)?;
            let r = apply_translation(&e, &inst.rhs)?;
            let v = check_equal(e.target(), locs, &ctx, &l, &r)?;
            if !v.holds && failure.is_none() {
                failure = Some(format!(
                    "{} ↦ {} = {}",
                    show_instance(inst, locs),
                    l.show(locs),
                    r.show(locs)
                ));
            }
        }
        report.record(format!("{} soundness", e.name()), instances.len(), failure);
    }
    Ok(report)
}

/// `{•⟨σ,ρ⟩•x | (x,ρ) ∈ table(σ)}`.
pub fn table_traces(table: &GTable) -> Result<TraceSet, CheckError> {
    let mut gens = Vec::new();
    for (sigma, row) in table.rows() {
        for (x, rho) in row {
            gens.push(Trace::new(Sort::Hold, [Transition::new(sigma, *rho)], Sort::Hold, x.clone())?);
        }
    }
    Ok(TraceSet::from_generators(Discipline::Sorted, Sort::Hold, gens)?)
}

/// Whether a global-state term denotes the same state function in both
/// models, with the traces read off the table.
pub fn cross_check_g(locs: &Locations, ctx: &VarContext, t: &Term) -> Result<bool, CheckError> {
    let table = denote_g(Theory::G, locs, ctx, t)?;
    let embedded = apply_translation(&translation(locs, "E"), t)?;
    let traces = denote(Theory::S, locs, ctx, &embedded)?;
    Ok(table_traces(&table)?.equal(&traces)?)
}

pub fn cross_check_g_suite(locs: &Locations, cfg: &SampleConfig) -> Result<Report, CheckError> {
    let mut rng = cfg.rng();
    let ctx = random_context(Theory::G, cfg);
    let mut failure = None;
    for _ in 0..cfg.samples {
        let t = random_term(&mut rng, Theory::G, locs, &ctx, Sort::Hold, TERM_DEPTH);
        if !cross_check_g(locs, &ctx, &t)? && failure.is_none() {
            failure = Some(t.show(locs).to_string());
        }
    }
    let mut report = Report::new();
    report.record("G state functions = E-embedded traces", cfg.samples, failure);
    Ok(report)
}

/// The pairs of theories shown equivalent by translations both ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    /// Open transitions and global state.
    TgsG,
    /// Shared state over open transitions and shared state.
    TrS,
}

impl Equivalence {
    fn theories(self) -> (Theory, Theory) {
        match self {
            Equivalence::TgsG => (Theory::Tgs, Theory::G),
            Equivalence::TrS => (Theory::Tr, Theory::S),
        }
    }

    fn names(self) -> (&'static str, &'static str) {
        match self {
            Equivalence::TgsG => ("E_G", "E_Tgs"),
            Equivalence::TrS => ("E_TrS", "E_STr"),
        }
    }
}

fn roundtrip_one(
    theory: Theory,
    composite: &Translation,
    locs: &Locations,
    cfg: &SampleConfig,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<(), CheckError> {
    let sig = build(theory, locs);
    let mut ops: Vec<(Op, Sort)> = sig.signature().operators().collect();
    for s in theory.sorts() {
        ops.extend((0..=3).map(|n| (Op::Join(n), s)));
    }
    let mut failure = None;
    for &(op, sort) in &ops {
        let image = composite.image(&op, sort)?;
        let shape = op.shape(sort).expect("declared operator");
        let direct = Term::app(op, sort, args_of(&shape, "x"))?;
        let ctx = context_of(&[&image, &direct]);
        if !check_equal(theory, locs, &ctx, &image, &direct)?.holds && failure.is_none() {
            failure = Some(format!("{} ↦ {}", direct.show(locs), image.show(locs)));
        }
    }
    report.record(format!("{} on operators of {theory}", composite.name()), ops.len(), failure);

    let ctx = random_context(theory, cfg);
    let mut failure = None;
    for _ in 0..cfg.samples {
        let sort = theory.sorts()[rng.gen_range(0..theory.sorts().len())];
        let t = random_term(rng, theory, locs, &ctx, sort, TERM_DEPTH);
        let back = apply_translation(composite, &t)?;
        if !check_equal(theory, locs, &ctx, &t, &back)?.holds && failure.is_none() {
            failure = Some(format!("{} ↦ {}", t.show(locs), back.show(locs)));
        }
    }
    report.record(format!("{} on random {theory}-terms", composite.name()), cfg.samples, failure);
    Ok(())
}

/// Both composites of the equivalence are the identity up to equality, on
/// every operator and on random terms.
pub fn check_roundtrip(pair: Equivalence, locs: &Locations, cfg: &SampleConfig) -> Result<Report, CheckError> {
    let (a, b) = pair.theories();
    let (ab, ba) = pair.names();
    let (ab, ba) = (translation(locs, ab), translation(locs, ba));
    let mut rng = cfg.rng();
    let mut report = Report::new();
    roundtrip_one(a, &compose(&ab, &ba)?, locs, cfg, &mut rng, &mut report)?;
    roundtrip_one(b, &compose(&ba, &ab)?, locs, cfg, &mut rng, &mut report)?;
    if pair == Equivalence::TrS {
        let ctx = random_context(Theory::Tr, cfg);
        let mut failure = None;
        for _ in 0..cfg.samples {
            let sort = if rng.gen_bool(0.5) { Sort::Hold } else { Sort::Cede };
            let t = random_term(&mut rng, Theory::Tr, locs, &ctx, sort, TERM_DEPTH);
            let direct = denote_tr_direct(locs, &ctx, &t)?;
            if !direct.equal(&denote(Theory::Tr, locs, &ctx, &t)?)? && failure.is_none() {
                failure = Some(t.show(locs).to_string());
            }
        }
        report.record("transitions as prefixes = open transitions", cfg.samples, failure);
    }
    Ok(report)
}

/// Sets built from `return ★` by reads, writes and unions, to `depth`
/// nested constructors, without repeats.
pub fn read_write_sets(locs: &Locations, depth: usize) -> Result<Vec<TraceSet>, CheckError> {
    let mut seen: BTreeSet<BTreeSet<Trace>> = BTreeSet::new();
    let mut all = vec![brookes_unit(locs, "★")];
    seen.insert(all[0].generator_set().clone());
    let mut frontier_start = 0;
    for _ in 0..depth {
        let old = all.len();
        let mut fresh = Vec::new();
        let mut add = |k: TraceSet, fresh: &mut Vec<TraceSet>| {
            if seen.insert(k.generator_set().clone()) {
                fresh.push(k);
            }
        };
        for i in 0..old {
            for j in 0..old {
                if i < frontier_start && j < frontier_start {
                    continue;
                }
                for loc in locs.locs() {
                    add(brookes_read(locs, loc, &all[i], &all[j])?, &mut fresh);
                }
                if i < j {
                    add(brookes_join(&[all[i].clone(), all[j].clone()])?, &mut fresh);
                }
            }
            if i >= frontier_start {
                for loc in locs.locs() {
                    for bit in [false, true] {
                        add(brookes_write(locs, loc, bit, &all[i])?, &mut fresh);
                    }
                }
            }
        }
        frontier_start = old;
        all.extend(fresh);
    }
    Ok(all)
}

/// Every read/write/union-definable set holds a single-cell trace; the
/// definable `⟨00,11⟩★` does not.
pub fn run_nogo2(locs: &Locations, depth: usize) -> Result<Report, CheckError> {
    let cfg = OracleConfig::default();
    let sets = read_write_sets(locs, depth)?;
    let mut failure = None;
    for k in &sets {
        if !single_cell_witness(locs, k, depth.max(1), cfg)? && failure.is_none() {
            failure = Some(k.show(locs).to_string());
        }
    }
    let mut report = Report::new();
    report.record(format!("single-cell witness, depth {depth}"), sets.len(), failure);

    let all_ones = Store((1 << locs.len()) - 1);
    let diagonal = Term::transition(Transition::new(Store(0), all_ones), Term::var("★", Sort::Star));
    let ctx = VarContext::from_pairs([("★", Sort::Star)]).expect("one variable");
    let k = denote_b(locs, &ctx, &diagonal)?;
    let expected = TraceSet::from_generators(
        Discipline::Brookes,
        Sort::Star,
        [Trace::new(Sort::Star, [Transition::new(Store(0), all_ones)], Sort::Star, "★")?],
    )?;
    let failure = if !k.equal(&expected)? {
        Some(format!("denotation is {}", k.show(locs)))
    } else if single_cell_witness(locs, &k, 3, cfg)? {
        Some("a single-cell trace was found".to_string())
    } else {
        None
    };
    report.record(
        format!("{} has no single-cell witness", diagonal.show(locs)),
        1,
        failure,
    );
    Ok(report)
}

/// `yield1(K) = yield2(K) = K` on sampled closed Brookes sets.
pub fn run_nogo3(locs: &Locations, cfg: &SampleConfig) -> Result<Report, CheckError> {
    let mut rng = cfg.rng();
    let values = value_context(Theory::B);
    let mut failure = None;
    for _ in 0..cfg.samples {
        let k = random_closed_set(&mut rng, locs, Discipline::Brookes, Sort::Star, &values, cfg);
        let ok = yield1(locs, &k)?.equal(&k)? && yield2(locs, &k)?.equal(&k)?;
        if !ok && failure.is_none() {
            failure = Some(k.show(locs).to_string());
        }
    }
    let mut report = Report::new();
    report.record("yield fixes closed sets", cfg.samples, failure);
    Ok(report)
}

/// Hush derives nothing new from non-empty traces of sampled closed sets.
pub fn hush_redundancy(locs: &Locations, cfg: &SampleConfig, max_len: usize) -> Result<Report, CheckError> {
    let mut rng = cfg.rng();
    let values = value_context(Theory::B);
    let mut failure = None;
    for _ in 0..cfg.samples {
        let k = random_closed_set(&mut rng, locs, Discipline::Brookes, Sort::Star, &values, cfg);
        for t in hush_step(locs, &k, max_len, OracleConfig::default())? {
            if !k.contains(&t) && failure.is_none() {
                failure = Some(format!("{} from {}", t.show(locs), k.show(locs)));
            }
        }
    }
    let mut report = Report::new();
    report.record("hush is redundant", cfg.samples, failure);
    Ok(report)
}

/// Whether `t` equals the reification of its denotation.
pub fn check_representation(locs: &Locations, ctx: &VarContext, t: &Term) -> Result<bool, CheckError> {
    let k = denote(Theory::S, locs, ctx, t)?;
    let back = reify(locs, &k);
    let ctx = if back.free_vars().keys().all(|n| ctx.get(n).is_some()) {
        ctx.clone()
    } else {
        context_of(&[t, &back])
    };
    Ok(check_equal(Theory::S, locs, &ctx, t, &back)?.holds)
}

pub fn representation_suite(locs: &Locations, cfg: &SampleConfig) -> Result<Report, CheckError> {
    let mut rng = cfg.rng();
    let ctx = random_context(Theory::S, cfg);
    let mut failure = None;
    for _ in 0..cfg.samples {
        let sort = if rng.gen_bool(0.5) { Sort::Hold } else { Sort::Cede };
        let t = random_term(&mut rng, Theory::S, locs, &ctx, sort, REPRESENTATION_DEPTH);
        if !check_representation(locs, &ctx, &t)? && failure.is_none() {
            failure = Some(t.show(locs).to_string());
        }
    }
    let mut report = Report::new();
    report.record("reify ∘ denote = id", cfg.samples, failure);
    Ok(report)
}

fn continuation_context(values: &VarContext) -> VarContext {
    let pairs: Vec<(String, Sort)> = values.iter().map(|(n, s)| (format!("{n}′"), s)).collect();
    VarContext::from_pairs(pairs).expect("distinct")
}

fn random_sorted_env(
    rng: &mut ChaCha8Rng,
    locs: &Locations,
    from: &VarContext,
    into: &VarContext,
    cfg: &SampleConfig,
) -> BTreeMap<Name, TraceSet> {
    from.iter()
        .map(|(n, s)| (n.clone(), random_closed_set(rng, locs, Discipline::Sorted, s, into, cfg)))
        .collect()
}

fn random_brookes_env(
    rng: &mut ChaCha8Rng,
    locs: &Locations,
    from: &VarContext,
    into: &VarContext,
    cfg: &SampleConfig,
) -> BTreeMap<Name, TraceSet> {
    from.iter()
        .map(|(n, _)| (n.clone(), random_closed_set(rng, locs, Discipline::Brookes, Sort::Star, into, cfg)))
        .collect()
}

/// Kleisli extension by the splice formula agrees with evaluating the
/// reified set, in both monads.
pub fn kleisli_suite(locs: &Locations, cfg: &SampleConfig) -> Result<Report, CheckError> {
    let mut rng = cfg.rng();
    let mut report = Report::new();
    let model = TraceModel::new(locs.clone());
    let values = value_context(Theory::S);
    let next = continuation_context(&values);
    let mut failure = None;
    for _ in 0..cfg.samples {
        let sort = if rng.gen_bool(0.5) { Sort::Hold } else { Sort::Cede };
        let k = random_closed_set(&mut rng, locs, Discipline::Sorted, sort, &values, cfg);
        let env = random_sorted_env(&mut rng, locs, &values, &next, cfg);
        let e = |n: &Name, _: Sort| env.get(n).cloned();
        let formula = model.kleisli(&e, &k)?;
        let via_terms = evaluate_in(&model, &env, &reify(locs, &k))?;
        if !formula.equal(&via_terms)? && failure.is_none() {
            failure = Some(k.show(locs).to_string());
        }
    }
    report.record("sorted kleisli = evaluate ∘ reify", cfg.samples, failure);

    let bmodel = BrookesModel::new(locs.clone());
    let values = value_context(Theory::B);
    let next = continuation_context(&values);
    let mut failure = None;
    for _ in 0..cfg.samples {
        let k = random_closed_set(&mut rng, locs, Discipline::Brookes, Sort::Star, &values, cfg);
        let env = random_brookes_env(&mut rng, locs, &values, &next, cfg);
        let formula = brookes_kleisli(&|n: &Name| env.get(n).cloned(), &k)?;
        let via_terms = evaluate_in(&bmodel, &env, &reify_brookes(&k))?;
        if !formula.equal(&via_terms)? && failure.is_none() {
            failure = Some(k.show(locs).to_string());
        }
    }
    report.record("Brookes kleisli = evaluate ∘ reify", cfg.samples, failure);
    Ok(report)
}

struct Laws {
    left: Option<String>,
    right: Option<String>,
    assoc: Option<String>,
}

fn first(slot: &mut Option<String>, ok: bool, why: impl FnOnce() -> String) {
    if !ok && slot.is_none() {
        *slot = Some(why());
    }
}

/// Left unit, right unit and associativity of both monads.
pub fn monad_laws(locs: &Locations, cfg: &SampleConfig) -> Result<Report, CheckError> {
    let mut rng = cfg.rng();
    let mut report = Report::new();
    let model = TraceModel::new(locs.clone());
    let values = value_context(Theory::S);
    let next = continuation_context(&values);
    let mut laws = Laws { left: None, right: None, assoc: None };
    for _ in 0..cfg.samples {
        let sort = if rng.gen_bool(0.5) { Sort::Hold } else { Sort::Cede };
        let k = random_closed_set(&mut rng, locs, Discipline::Sorted, sort, &values, cfg);
        let e = random_sorted_env(&mut rng, locs, &values, &next, cfg);
        let f = random_sorted_env(&mut rng, locs, &next, &values, cfg);
        let ef = |n: &Name, _: Sort| e.get(n).cloned();
        let ff = |n: &Name, _: Sort| f.get(n).cloned();
        for (x, s) in values.iter() {
            let lhs = model.kleisli(&ef, &unit(locs, s, x.clone()))?;
            first(&mut laws.left, lhs.equal(&e[x])?, || format!("at {x}: {}", e[x].show(locs)));
        }
        let ret = |n: &Name, s: Sort| Some(unit(locs, s, n.clone()));
        first(&mut laws.right, model.kleisli(&ret, &k)?.equal(&k)?, || k.show(locs).to_string());
        let lhs = model.kleisli(&ff, &model.kleisli(&ef, &k)?)?;
        let composed: BTreeMap<Name, TraceSet> = e
            .iter()
            .map(|(n, m)| Ok((n.clone(), model.kleisli(&ff, m)?)))
            .collect::<Result<_, CheckError>>()?;
        let rhs = model.kleisli(&|n: &Name, _: Sort| composed.get(n).cloned(), &k)?;
        first(&mut laws.assoc, lhs.equal(&rhs)?, || k.show(locs).to_string());
    }
    report.record("sorted left unit", cfg.samples, laws.left);
    report.record("sorted right unit", cfg.samples, laws.right);
    report.record("sorted associativity", cfg.samples, laws.assoc);

    let values = value_context(Theory::B);
    let next = continuation_context(&values);
    let mut laws = Laws { left: None, right: None, assoc: None };
    for _ in 0..cfg.samples {
        let k = random_closed_set(&mut rng, locs, Discipline::Brookes, Sort::Star, &values, cfg);
        let e = random_brookes_env(&mut rng, locs, &values, &next, cfg);
        let f = random_brookes_env(&mut rng, locs, &next, &values, cfg);
        let ef = |n: &Name| e.get(n).cloned();
        let ff = |n: &Name| f.get(n).cloned();
        for (x, _) in values.iter() {
            let lhs = brookes_kleisli(&ef, &brookes_unit(locs, x.clone()))?;
            first(&mut laws.left, lhs.equal(&e[x])?, || format!("at {x}: {}", e[x].show(locs)));
        }
        let ret = |n: &Name| Some(brookes_unit(locs, n.clone()));
        first(&mut laws.right, brookes_kleisli(&ret, &k)?.equal(&k)?, || k.show(locs).to_string());
        let lhs = brookes_kleisli(&ff, &brookes_kleisli(&ef, &k)?)?;
        let composed: BTreeMap<Name, TraceSet> = e
            .iter()
            .map(|(n, m)| Ok((n.clone(), brookes_kleisli(&ff, m)?)))
            .collect::<Result<_, CheckError>>()?;
        let rhs = brookes_kleisli(&|n: &Name| composed.get(n).cloned(), &k)?;
        first(&mut laws.assoc, lhs.equal(&rhs)?, || k.show(locs).to_string());
    }
    report.record("Brookes left unit", cfg.samples, laws.left);
    report.record("Brookes right unit", cfg.samples, laws.right);
    report.record("Brookes associativity", cfg.samples, laws.assoc);
    Ok(report)
}

/// Brookes's model is the cede fragment of shared state: stripping the
/// delimiters off the embedded term's denotation gives the Brookes
/// denotation; stripping and embedding are inverse.
pub fn brookes_recovery(locs: &Locations, cfg: &SampleConfig) -> Result<Report, CheckError> {
    let mut rng = cfg.rng();
    let mut report = Report::new();
    let e_bs = translation(locs, "E_BS");
    let ctx = random_context(Theory::B, cfg);
    let sctx = translate_context(&e_bs, &ctx)?;
    let mut failure = None;
    for _ in 0..cfg.samples {
        let t = random_term(&mut rng, Theory::B, locs, &ctx, Sort::Star, TERM_DEPTH);
        let embedded = apply_translation(&e_bs, &t)?;
        let stripped = strip_cede(&denote(Theory::S, locs, &sctx, &embedded)?)?;
        first(&mut failure, stripped.equal(&denote_b(locs, &ctx, &t)?)?, || t.show(locs).to_string());
    }
    report.record("strip ∘ ⟦E_BS −⟧ = Brookes denotation", cfg.samples, failure);

    let bvalues = value_context(Theory::B);
    let svalues = VarContext::from_pairs([("q", Sort::Cede), ("r", Sort::Cede)]).expect("distinct");
    let mut failure = None;
    for _ in 0..cfg.samples {
        let k = random_closed_set(&mut rng, locs, Discipline::Brookes, Sort::Star, &bvalues, cfg);
        first(&mut failure, strip_cede(&embed_cede(&k)?)?.equal(&k)?, || k.show(locs).to_string());
        let k = random_closed_set(&mut rng, locs, Discipline::Sorted, Sort::Cede, &svalues, cfg);
        first(&mut failure, embed_cede(&strip_cede(&k)?)?.equal(&k)?, || k.show(locs).to_string());
    }
    report.record("strip and embed are inverse", 2 * cfg.samples, failure);
    Ok(report)
}

/// Every sequence of at most `max_len` transitions, shortest first.
pub fn all_steps(locs: &Locations, max_len: usize) -> Vec<Steps> {
    let transitions: Vec<Transition> = locs
        .stores()
        .flat_map(|a| locs.stores().map(move |b| Transition::new(a, b)))
        .collect();
    let mut out: Vec<Steps> = Vec::new();
    let mut layer: Vec<Steps> = vec![Steps::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * transitions.len());
        for s in &layer {
            for &t in &transitions {
                let mut longer = s.clone();
                longer.push(t);
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The sort and discipline combinations a single trace may have.
pub const TRACE_SHAPES: [(Discipline, Sort, Sort); 5] = [
    (Discipline::Sorted, Sort::Hold, Sort::Hold),
    (Discipline::Sorted, Sort::Hold, Sort::Cede),
    (Discipline::Sorted, Sort::Cede, Sort::Hold),
    (Discipline::Sorted, Sort::Cede, Sort::Cede),
    (Discipline::Brookes, Sort::Star, Sort::Star),
];

/// Every one-step deduction from a trace of length at most `max_len` is in
/// the denotation of the premise's reification, and in its closure.
pub fn deduction_soundness(locs: &Locations, max_len: usize) -> Result<Report, CheckError> {
    let model = TraceModel::new(locs.clone());
    let bmodel = BrookesModel::new(locs.clone());
    let mut report = Report::new();
    for (discipline, start, value_sort) in TRACE_SHAPES {
        let mut failure = None;
        let mut checked = 0;
        for steps in all_steps(locs, max_len) {
            let premise = Trace::new(start, steps, value_sort, "x")?;
            let den = match discipline {
                Discipline::Sorted => {
                    let env = |n: &Name, s: Sort| Some(unit(locs, s, n.clone()));
                    evaluate(&model, &env, &reify_trace(locs, &premise))?
                }
                Discipline::Brookes => {
                    let env = |n: &Name, _: Sort| Some(brookes_unit(locs, n.clone()));
                    let single = TraceSet::from_generators(discipline, start, [premise.clone()])?;
                    evaluate(&bmodel, &env, &reify_brookes(&single))?
                }
            };
            for conclusion in step_deductions(&premise, discipline, locs) {
                checked += 1;
                let ok = den.member(&conclusion)? && member_of(&premise, &conclusion, discipline);
                first(&mut failure, ok, || {
                    format!("{} ⊢ {}", premise.show(locs), conclusion.show(locs))
                });
            }
        }
        report.record(format!("deductions {start}…{value_sort} ({discipline:?})"), checked, failure);
    }
    Ok(report)
}

/// The delimited reads and writes of shared state denote Brookes's read and
/// write, and transitions at the hold sort agree with the bounded closure.
pub fn encodings(locs: &Locations) -> Result<Report, CheckError> {
    let mut report = Report::new();
    let ctx = VarContext::from_pairs([("x0", Sort::Cede), ("x1", Sort::Cede)]).expect("distinct");
    let bu = |x: &str| brookes_unit(locs, x);
    let delimited = |t: Term| -> Term {
        Term::acquire(t).expect("hold")
    };
    let rel = |x: &str| Term::release(Term::var(x, Sort::Cede)).expect("cede");
    let mut failure = None;
    let mut checked = 0;
    for loc in locs.locs() {
        checked += 1;
        let read = delimited(Term::lookup(loc, rel("x0"), rel("x1"))?);
        let expected = embed_cede(&brookes_read(locs, loc, &bu("x0"), &bu("x1"))?)?;
        first(&mut failure, denote(Theory::S, locs, &ctx, &read)?.equal(&expected)?, || {
            read.show(locs).to_string()
        });
        for bit in [false, true] {
            checked += 1;
            let write = delimited(Term::update(loc, bit, rel("x0")));
            let expected = embed_cede(&brookes_write(locs, loc, bit, &bu("x0"))?)?;
            first(&mut failure, denote(Theory::S, locs, &ctx, &write)?.equal(&expected)?, || {
                write.show(locs).to_string()
            });
        }
    }
    report.record("read and write encodings", checked, failure);

    let mut failure = None;
    let mut checked = 0;
    let cfg = OracleConfig::default();
    for a in locs.stores() {
        for b in locs.stores() {
            checked += 1;
            let k = brookes_transition(a, b, &bu("x0"))?;
            let cl = closure_bounded(k.generators(), Discipline::Brookes, 2, locs, cfg)?;
            let direct = Trace::new(Sort::Star, [Transition::new(a, b)], Sort::Star, "x0")?;
            first(&mut failure, cl.contains(&direct), || {
                format!("⟨{},{}⟩", locs.render(a), locs.render(b))
            });
        }
    }
    report.record("Brookes transitions reach their single step", checked, failure);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SampleConfig {
        SampleConfig { samples: 10, ..SampleConfig::default() }
    }

    #[test]
    fn corrupted_fuse_fails() {
        let locs = Locations::default();
        let r = validate_instances(Theory::S, &locs, &[corrupted_fuse()], &small()).unwrap();
        assert!(!r.passed());
        let inst = corrupted_fuse();
        let v = check_equal(Theory::S, &locs, &inst.ctx, &inst.lhs, &inst.rhs).unwrap();
        assert!(!v.holds);
        assert!(v.witness.is_some());
    }

    #[test]
    fn small_suites_pass() {
        let locs = Locations::default();
        let cfg = small();
        for r in [
            validate_axioms(Theory::G, &locs, &cfg).unwrap(),
            validate_axioms(Theory::J, &locs, &cfg).unwrap(),
            cross_check_g_suite(&locs, &cfg).unwrap(),
            run_nogo3(&locs, &cfg).unwrap(),
            monad_laws(&locs, &cfg).unwrap(),
            kleisli_suite(&locs, &cfg).unwrap(),
            encodings(&locs).unwrap(),
        ] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn cross_check_examples() {
        let locs = Locations::default();
        let ctx = VarContext::from_pairs([("x", Sort::Hold)]).unwrap();
        let x = Term::var("x", Sort::Hold);
        let y = locs.lookup("y").unwrap();
        assert!(cross_check_g(&locs, &ctx, &Term::update(y, true, x)).unwrap());
        assert!(cross_check_g(&locs, &ctx, &Term::bot(Sort::Hold)).unwrap());
    }

    #[test]
    fn depth_one_sets() {
        let locs = Locations::default();
        // unit, two reads of unit (equal to unit), four writes, no new unions
        let sets = read_write_sets(&locs, 1).unwrap();
        assert!(sets.len() >= 5);
        assert!(run_nogo2(&locs, 1).unwrap().passed());
    }
}
