use std::collections::BTreeSet;

use crate::kernel::{Algebra, KernelError, Name, NodePath, Op, Sort, Term};
use crate::store::{Loc, Locations, Store, Transition};
use crate::traces::trace::{Discipline, Steps, Trace};
use crate::traces::{TraceError, TraceSet};

fn expect_brookes(k: &TraceSet) -> Result<(), TraceError> {
    if k.discipline() != Discipline::Brookes {
        return Err(TraceError::DisciplineMismatch {
            expected: Discipline::Brookes,
            found: k.discipline(),
        });
    }
    Ok(())
}

fn brookes_set(gens: BTreeSet<Trace>) -> TraceSet {
    TraceSet::raw(Discipline::Brookes, Sort::Star, gens).canonicalize()
}

fn prepend(t: Transition, g: &Trace) -> Trace {
    let mut steps: Steps = Steps::with_capacity(g.len() + 1);
    steps.push(t);
    steps.extend_from_slice(g.steps());
    g.with_steps(steps)
}

/// `{⟨σ,σ⟩x | σ ∈ 𝕊}`.
pub fn brookes_unit(locs: &Locations, x: impl Into<Name>) -> TraceSet {
    crate::traces::unit(locs, Sort::Star, x)
}

/// `⟨σ,ρ⟩K`.
pub fn brookes_transition(sigma: Store, rho: Store, k: &TraceSet) -> Result<TraceSet, TraceError> {
    expect_brookes(k)?;
    let t = Transition::new(sigma, rho);
    Ok(brookes_set(k.generators().map(|g| prepend(t, g)).collect()))
}

pub fn brookes_join(ks: &[TraceSet]) -> Result<TraceSet, TraceError> {
    let mut gens = BTreeSet::new();
    for k in ks {
        expect_brookes(k)?;
        gens.extend(k.generators().cloned());
    }
    Ok(brookes_set(gens))
}

/// Reads `ℓ` and continues with `K_b` for the value `b` read.
pub fn brookes_read(
    locs: &Locations,
    loc: Loc,
    k0: &TraceSet,
    k1: &TraceSet,
) -> Result<TraceSet, TraceError> {
    expect_brookes(k0)?;
    expect_brookes(k1)?;
    let mut gens = BTreeSet::new();
    for sigma in locs.stores() {
        let k = if sigma.get(loc) { k1 } else { k0 };
        gens.extend(k.generators().map(|g| prepend(Transition::stutter(sigma), g)));
    }
    Ok(brookes_set(gens))
}

/// Writes `b` to `ℓ`, then continues with `K`.
pub fn brookes_write(
    locs: &Locations,
    loc: Loc,
    bit: bool,
    k: &TraceSet,
) -> Result<TraceSet, TraceError> {
    expect_brookes(k)?;
    let mut gens = BTreeSet::new();
    for sigma in locs.stores() {
        let t = Transition::new(sigma, sigma.set(loc, bit));
        gens.extend(k.generators().map(|g| prepend(t, g)));
    }
    Ok(brookes_set(gens))
}

/// Splices every trace of `K` with every trace of its value's continuation.
pub fn brookes_kleisli<F>(e: &F, k: &TraceSet) -> Result<TraceSet, TraceError>
where
    F: Fn(&Name) -> Option<TraceSet>,
{
    expect_brookes(k)?;
    let mut gens = BTreeSet::new();
    for g in k.generators() {
        let next = e(g.value()).ok_or_else(|| TraceError::MissingBinding(g.value().clone()))?;
        expect_brookes(&next)?;
        for h in next.generators() {
            let mut steps: Steps = Steps::with_capacity(g.len() + h.len());
            steps.extend_from_slice(g.steps());
            steps.extend_from_slice(h.steps());
            gens.insert(h.with_steps(steps));
        }
    }
    Ok(brookes_set(gens))
}

/// Removes the `∘` delimiters: a `∘`-sorted, `∘`-valued set as a Brookes set.
pub fn strip_cede(k: &TraceSet) -> Result<TraceSet, TraceError> {
    if k.discipline() != Discipline::Sorted {
        return Err(TraceError::DisciplineMismatch {
            expected: Discipline::Sorted,
            found: k.discipline(),
        });
    }
    if k.sort() != Sort::Cede {
        return Err(TraceError::SortMismatch {
            expected: Sort::Cede,
            found: k.sort(),
        });
    }
    let mut gens = BTreeSet::new();
    for g in k.generators() {
        if g.value_sort() != Sort::Cede {
            return Err(TraceError::SortMismatch {
                expected: Sort::Cede,
                found: g.value_sort(),
            });
        }
        gens.insert(g.relabel(Sort::Star, Sort::Star));
    }
    Ok(TraceSet::raw(Discipline::Brookes, Sort::Star, gens))
}

/// The inverse of [`strip_cede`].
pub fn embed_cede(k: &TraceSet) -> Result<TraceSet, TraceError> {
    expect_brookes(k)?;
    let gens = k
        .generators()
        .map(|g| g.relabel(Sort::Cede, Sort::Cede))
        .collect();
    Ok(TraceSet::raw(Discipline::Sorted, Sort::Cede, gens))
}

fn interleave(a: &[Transition], b: &[Transition], acc: &mut Steps, out: &mut Vec<Steps>) {
    if a.is_empty() || b.is_empty() {
        let mut done = acc.clone();
        done.extend_from_slice(a);
        done.extend_from_slice(b);
        out.push(done);
        return;
    }
    acc.push(a[0]);
    interleave(&a[1..], b, acc, out);
    acc.pop();
    acc.push(b[0]);
    interleave(a, &b[1..], acc, out);
    acc.pop();
}

/// Parallel composition by interleaving generators, valued by `pairing`.
pub fn par<F>(k1: &TraceSet, k2: &TraceSet, pairing: F) -> Result<TraceSet, TraceError>
where
    F: Fn(&Name, &Name) -> Name,
{
    expect_brookes(k1)?;
    expect_brookes(k2)?;
    let mut gens = BTreeSet::new();
    for g in k1.generators() {
        for h in k2.generators() {
            let value = pairing(g.value(), h.value());
            let mut out = Vec::new();
            interleave(g.steps(), h.steps(), &mut Steps::new(), &mut out);
            for steps in out {
                gens.insert(Trace::new(Sort::Star, steps, Sort::Star, value.clone())?);
            }
        }
    }
    Ok(brookes_set(gens))
}

/// `⋁ ⟨σ₁,ρ₁⟩…⟨σₙ,ρₙ⟩x` over the generators.
pub fn reify_brookes(k: &TraceSet) -> Term {
    let mut ts: Vec<Term> = k
        .generators()
        .map(|g| {
            g.steps()
                .iter()
                .rev()
                .fold(Term::var(g.value().clone(), Sort::Star), |t, &tr| {
                    Term::transition(tr, t)
                })
        })
        .collect();
    if ts.len() == 1 {
        return ts.pop().expect("one term");
    }
    Term::join(Sort::Star, ts).expect("star-sorted")
}

/// Brookes's model as an algebra for the transitions theory.
#[derive(Debug, Clone, Default)]
pub struct BrookesModel {
    locs: Locations,
}

impl BrookesModel {
    pub fn new(locs: Locations) -> BrookesModel {
        BrookesModel { locs }
    }

    pub fn locations(&self) -> &Locations {
        &self.locs
    }

    pub fn unit(&self, x: impl Into<Name>) -> TraceSet {
        brookes_unit(&self.locs, x)
    }
}

impl Algebra for BrookesModel {
    type Carrier = TraceSet;
    type Error = TraceError;

    fn operate(&self, op: &Op, sort: Sort, args: Vec<TraceSet>) -> Result<TraceSet, TraceError> {
        if sort != Sort::Star {
            return Err(TraceError::SortMismatch {
                expected: Sort::Star,
                found: sort,
            });
        }
        match *op {
            Op::Join(_) => brookes_join(&args),
            Op::Transition(t) => brookes_transition(t.from, t.to, &args[0]),
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
    use crate::traces::TraceModel;

    #[test]
    fn write_is_generic_effect() {
        let locs = Locations::default();
        let w = brookes_write(&locs, Loc(0), true, &brookes_unit(&locs, "★")).unwrap();
        // ⟨σ, σ[x↦1]⟩⟨τ,τ⟩★ fuses to ⟨σ, σ[x↦1]⟩★ whenever τ = σ[x↦1].
        let direct: BTreeSet<Trace> = locs
            .stores()
            .map(|s| {
                Trace::new(Sort::Star, [Transition::new(s, s.set(Loc(0), true))], Sort::Star, "★")
                    .unwrap()
            })
            .collect();
        assert_eq!(w.generator_set(), &direct);
    }

    #[test]
    fn strip_embed_round_trip() {
        let locs = Locations::default();
        let m = TraceModel::new(locs.clone());
        let u = m.unit(Sort::Cede, "x");
        assert_eq!(strip_cede(&u).unwrap(), brookes_unit(&locs, "x"));
        assert_eq!(embed_cede(&strip_cede(&u).unwrap()).unwrap(), u);
        let held = m.unit(Sort::Hold, "x");
        assert!(strip_cede(&held).is_err());
    }

    #[test]
    fn par_with_empty_is_empty() {
        let locs = Locations::default();
        let e = TraceSet::empty(Discipline::Brookes, Sort::Star);
        let u = brookes_unit(&locs, "x");
        let pair = |a: &Name, b: &Name| Name::from(format!("({a},{b})"));
        assert!(par(&e, &u, pair).unwrap().is_empty());
        let both = par(&u, &brookes_unit(&locs, "y"), pair).unwrap();
        assert!(brookes_unit(&locs, "(x,y)").subset(&both).unwrap());
    }
}
