use std::fmt;

use crate::checker::denote::{denote_any, Denotation};
use crate::checker::CheckError;
use crate::kernel::{Name, Term, VarContext};
use crate::presentations::Theory;
use crate::store::{Locations, Store};
use crate::traces::{closure_bounded, OracleConfig, Trace, TraceError, TraceSet};

/// Which side of a failed check the witness belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSide {
    /// In the left denotation, missing from the right.
    LeftOnly,
    /// In the right denotation, missing from the left.
    RightOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Trace(Trace),
    /// A state-function outcome: from `from`, return `value` in `to`.
    Outcome { from: Store, value: Name, to: Store },
    Value(Name),
}

impl Witness {
    pub fn show<'a>(&'a self, locs: &'a Locations) -> ShowWitness<'a> {
        ShowWitness { w: self, locs }
    }
}

pub struct ShowWitness<'a> {
    w: &'a Witness,
    locs: &'a Locations,
}

impl fmt::Display for ShowWitness<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.w {
            Witness::Trace(t) => write!(f, "{}", t.show(self.locs)),
            Witness::Outcome { from, value, to } => write!(
                f,
                "{} ↦ ({value}, {})",
                self.locs.render(*from),
                self.locs.render(*to)
            ),
            Witness::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub direction: Option<WitnessSide>,
}

impl Verdict {
    fn holds() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
            direction: None,
        }
    }

    fn refuted(w: Witness, side: WitnessSide) -> Verdict {
        Verdict {
            holds: false,
            witness: Some(w),
            direction: Some(side),
        }
    }
}

/// A shortest trace in the closure of `a` but not of `b`.
///
/// Among the shortest, traces with more state-changing transitions come
/// first, then the canonical order.
pub fn trace_witness(
    locs: &Locations,
    a: &TraceSet,
    b: &TraceSet,
    cfg: OracleConfig,
) -> Result<Option<Trace>, TraceError> {
    let bad: Vec<&Trace> = a.generators().filter(|g| !b.contains(g)).collect();
    let Some(longest) = bad.iter().map(|g| g.len()).max() else {
        return Ok(None);
    };
    for len in 1..=longest {
        let cl = match closure_bounded(bad.iter().copied(), a.discipline(), len, locs, cfg) {
            Ok(cl) => cl,
            Err(TraceError::BudgetExceeded { .. }) => return Ok(Some(bad[0].clone())),
            Err(e) => return Err(e),
        };
        let best = cl
            .into_iter()
            .filter(|t| t.len() == len && !b.contains(t))
            .min_by(|x, y| y.state_changes().cmp(&x.state_changes()).then(x.cmp(y)));
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(Some(bad[0].clone()))
}

fn one_way(locs: &Locations, a: &Denotation, b: &Denotation) -> Result<Option<Witness>, CheckError> {
    Ok(match (a, b) {
        (Denotation::Traces(a), Denotation::Traces(b)) => {
            if a.subset(b)? {
                None
            } else {
                trace_witness(locs, a, b, OracleConfig::default())?.map(Witness::Trace)
            }
        }
        (Denotation::Table(a), Denotation::Table(b)) => a.rows().find_map(|(from, row)| {
            row.iter()
                .find(|o| !b.row(from).contains(o))
                .map(|(value, to)| Witness::Outcome {
                    from,
                    value: value.clone(),
                    to: *to,
                })
        }),
        (Denotation::Values(a), Denotation::Values(b)) => {
            a.difference(b).next().map(|v| Witness::Value(v.clone()))
        }
        _ => unreachable!("both sides come from the same theory"),
    })
}

fn sides(
    theory: Theory,
    locs: &Locations,
    ctx: &VarContext,
    t1: &Term,
    t2: &Term,
) -> Result<(Denotation, Denotation), CheckError> {
    if t1.sort() != t2.sort() {
        return Err(CheckError::Trace(TraceError::SortMismatch {
            expected: t1.sort(),
            found: t2.sort(),
        }));
    }
    Ok((denote_any(theory, locs, ctx, t1)?, denote_any(theory, locs, ctx, t2)?))
}

/// Whether `t₁ = t₂` is provable, by comparing denotations.
pub fn check_equal(
    theory: Theory,
    locs: &Locations,
    ctx: &VarContext,
    t1: &Term,
    t2: &Term,
) -> Result<Verdict, CheckError> {
    let (d1, d2) = sides(theory, locs, ctx, t1, t2)?;
    if let Some(w) = one_way(locs, &d1, &d2)? {
        return Ok(Verdict::refuted(w, WitnessSide::LeftOnly));
    }
    if let Some(w) = one_way(locs, &d2, &d1)? {
        return Ok(Verdict::refuted(w, WitnessSide::RightOnly));
    }
    Ok(Verdict::holds())
}

/// Whether `t₁ ≤ t₂` is provable: every behaviour of `t₁` is one of `t₂`.
pub fn check_refines(
    theory: Theory,
    locs: &Locations,
    ctx: &VarContext,
    t1: &Term,
    t2: &Term,
) -> Result<Verdict, CheckError> {
    let (d1, d2) = sides(theory, locs, ctx, t1, t2)?;
    Ok(match one_way(locs, &d1, &d2)? {
        Some(w) => Verdict::refuted(w, WitnessSide::LeftOnly),
        None => Verdict::holds(),
    })
}
