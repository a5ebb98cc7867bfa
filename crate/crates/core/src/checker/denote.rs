use std::collections::BTreeSet;

use crate::checker::CheckError;
use crate::kernel::{evaluate, KernelError, Name, PowersetAlgebra, Sort, Term, VarContext};
use crate::presentations::{apply_translation, build, builtin_translations, Theory};
use crate::store::Locations;
use crate::traces::{brookes_unit, unit, BrookesModel, GTable, StateModel, TraceModel, TraceSet};

/// The denotation of a term in its theory's free model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Denotation {
    /// Closed trace sets, for S, Tr and B.
    Traces(TraceSet),
    /// State functions, for G and Tgs.
    Table(GTable),
    /// Finite sets of variables, for J and V.
    Values(BTreeSet<Name>),
}

fn check_context(ctx: &VarContext, t: &Term) -> Result<(), CheckError> {
    for (n, s) in t.free_vars() {
        match ctx.get(&n) {
            None => {
                return Err(KernelError::UnknownVariable {
                    name: n.to_string(),
                    path: Default::default(),
                }
                .into())
            }
            Some(declared) if declared != s => {
                return Err(KernelError::SortMismatch {
                    expected: declared,
                    found: s,
                    path: Default::default(),
                }
                .into())
            }
            _ => {}
        }
    }
    Ok(())
}

fn well_sorted(theory: Theory, locs: &Locations, ctx: &VarContext, t: &Term) -> Result<(), CheckError> {
    build(theory, locs).signature().check(t)?;
    check_context(ctx, t)
}

/// Evaluates an S or Tr term in the trace model with `return` as environment.
///
/// Tr terms are first translated into S.
pub fn denote(theory: Theory, locs: &Locations, ctx: &VarContext, t: &Term) -> Result<TraceSet, CheckError> {
    well_sorted(theory, locs, ctx, t)?;
    let t = match theory {
        Theory::S => t.clone(),
        Theory::Tr => {
            let e = builtin_translations(locs)
                .into_iter()
                .find(|e| e.name() == "E_TrS")
                .expect("built in");
            apply_translation(&e, t)?
        }
        other => return Err(CheckError::Unsupported { theory: other, what: "trace denotation" }),
    };
    denote_traces(locs, &t)
}

/// Evaluates a Tr term directly, with transitions as prefixing.
pub fn denote_tr_direct(locs: &Locations, ctx: &VarContext, t: &Term) -> Result<TraceSet, CheckError> {
    well_sorted(Theory::Tr, locs, ctx, t)?;
    denote_traces(locs, t)
}

fn denote_traces(locs: &Locations, t: &Term) -> Result<TraceSet, CheckError> {
    let model = TraceModel::new(locs.clone());
    let env = |n: &Name, s: Sort| Some(unit(locs, s, n.clone()));
    Ok(evaluate(&model, &env, t)?)
}

/// Brookes's model.
pub fn denote_b(locs: &Locations, ctx: &VarContext, t: &Term) -> Result<TraceSet, CheckError> {
    well_sorted(Theory::B, locs, ctx, t)?;
    let model = BrookesModel::new(locs.clone());
    let env = |n: &Name, _| Some(brookes_unit(locs, n.clone()));
    Ok(evaluate(&model, &env, t)?)
}

/// The state-function model, for G and Tgs.
pub fn denote_g(theory: Theory, locs: &Locations, ctx: &VarContext, t: &Term) -> Result<GTable, CheckError> {
    if !matches!(theory, Theory::G | Theory::Tgs) {
        return Err(CheckError::Unsupported { theory, what: "state-function denotation" });
    }
    well_sorted(theory, locs, ctx, t)?;
    let model = StateModel::new(locs.clone());
    let env = |n: &Name, _| Some(GTable::unit(locs, n));
    Ok(evaluate(&model, &env, t)?)
}

/// Denotation in whichever free model decides `theory`.
pub fn denote_any(theory: Theory, locs: &Locations, ctx: &VarContext, t: &Term) -> Result<Denotation, CheckError> {
    Ok(match theory {
        Theory::S | Theory::Tr => Denotation::Traces(denote(theory, locs, ctx, t)?),
        Theory::B => Denotation::Traces(denote_b(locs, ctx, t)?),
        Theory::G | Theory::Tgs => Denotation::Table(denote_g(theory, locs, ctx, t)?),
        Theory::J | Theory::V => {
            well_sorted(theory, locs, ctx, t)?;
            let alg = PowersetAlgebra::<Name>::new();
            let env = |n: &Name, _| Some(BTreeSet::from([n.clone()]));
            Denotation::Values(evaluate(&alg, &env, t)?)
        }
    })
}
