//! The built-in theories as data, and translations between them.

mod axioms;
mod translations;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kernel::{JoinArities, KernelError, Op, Signature, Sort, Term};
use crate::store::{Locations, Transition};

pub use axioms::{AxiomInstance, AxiomScheme, Bounds, Relation, SchemeKind};
pub use translations::{
    apply_translation, builtin_translations, compose, find_translation, Translation,
    TranslationRule,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unknown theory `{0}` (expected one of J, V, G, S, B, Tgs, Tr)")]
    UnknownTheory(String),
    #[error("sort {0} has no binary join")]
    SortLacksJoin(Sort),
    #[error("expected sort {expected}, found {found}")]
    SortMismatch { expected: Sort, found: Sort },
    #[error("cannot compose: the first translation targets {first_target}, the second starts at {second_source}")]
    Mismatch {
        first_target: Theory,
        second_source: Theory,
    },
    #[error("{translation} does not translate {op}")]
    UnknownOperator { translation: String, op: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// The built-in theories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theory {
    /// Join semilattices.
    J,
    /// Countable-join semilattices (finite joins here).
    V,
    /// Nondeterministic global state.
    G,
    /// Shared state.
    S,
    /// Brookes's transitions.
    B,
    /// Open transitions.
    Tgs,
    /// Shared state over open transitions.
    Tr,
}

impl Theory {
    pub const ALL: [Theory; 7] = [
        Theory::J,
        Theory::V,
        Theory::G,
        Theory::S,
        Theory::B,
        Theory::Tgs,
        Theory::Tr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theory::J => "J",
            Theory::V => "V",
            Theory::G => "G",
            Theory::S => "S",
            Theory::B => "B",
            Theory::Tgs => "Tgs",
            Theory::Tr => "Tr",
        }
    }

    pub fn sorts(self) -> Vec<Sort> {
        match self {
            Theory::J | Theory::V | Theory::B => vec![Sort::Star],
            Theory::G | Theory::Tgs => vec![Sort::Hold],
            Theory::S | Theory::Tr => vec![Sort::Hold, Sort::Cede],
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theory {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theory::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PresentationError::UnknownTheory(s.to_string()))
    }
}

/// A named theory: signature plus axiom schemes.
#[derive(Debug, Clone)]
pub struct Presentation {
    theory: Theory,
    locs: Locations,
    signature: Signature,
    schemes: Vec<AxiomScheme>,
}

fn with_state_ops(mut sig: Signature, locs: &Locations) -> Signature {
    for loc in locs.locs() {
        sig = sig.with_op(Op::Lookup { loc }, Sort::Hold);
        for bit in [false, true] {
            sig = sig.with_op(Op::Update { loc, bit }, Sort::Hold);
        }
    }
    sig
}

fn with_transitions(mut sig: Signature, locs: &Locations, sort: Sort) -> Signature {
    for from in locs.stores() {
        for to in locs.stores() {
            sig = sig.with_op(Op::Transition(Transition::new(from, to)), sort);
        }
    }
    sig
}

fn signature(theory: Theory, locs: &Locations) -> Signature {
    let base = Signature::new(theory.name(), theory.sorts());
    match theory {
        Theory::J => base.with_joins(Sort::Star, JoinArities::Only(vec![0, 2])),
        Theory::V => base.with_joins(Sort::Star, JoinArities::All),
        Theory::G => with_state_ops(base.with_joins(Sort::Hold, JoinArities::All), locs),
        Theory::Tgs => with_transitions(base.with_joins(Sort::Hold, JoinArities::All), locs, Sort::Hold),
        Theory::B => with_transitions(base.with_joins(Sort::Star, JoinArities::All), locs, Sort::Star),
        Theory::S | Theory::Tr => {
            let sig = base
                .with_joins(Sort::Hold, JoinArities::All)
                .with_joins(Sort::Cede, JoinArities::All)
                .with_op(Op::Acquire, Sort::Cede)
                .with_op(Op::Release, Sort::Hold);
            if theory == Theory::S {
                with_state_ops(sig, locs)
            } else {
                with_transitions(sig, locs, Sort::Hold)
            }
        }
    }
}

fn lattice(sort: Sort) -> Vec<AxiomScheme> {
    vec![
        AxiomScheme::new(SchemeKind::NdReturn, sort),
        AxiomScheme::new(SchemeKind::NdSquash, sort),
    ]
}

fn schemes(theory: Theory) -> Vec<AxiomScheme> {
    use SchemeKind::*;
    let at = |kinds: &[SchemeKind], sort| -> Vec<AxiomScheme> {
        kinds.iter().map(|&k| AxiomScheme::new(k, sort)).collect()
    };
    let mut out = Vec::new();
    match theory {
        Theory::J => out.extend(at(&[Associativity, Commutativity, Idempotency, Neutrality], Sort::Star)),
        Theory::V => out.extend(lattice(Sort::Star)),
        Theory::G => {
            out.extend(lattice(Sort::Hold));
            out.extend(at(&[UL, UU, UUC, LU, NdU], Sort::Hold));
        }
        Theory::Tgs => {
            out.extend(lattice(Sort::Hold));
            out.extend(at(&[NdT, SeqEq, SeqNe, HS], Sort::Hold));
        }
        Theory::B => {
            out.extend(lattice(Sort::Star));
            out.extend(at(&[NdB, M, S, H], Sort::Star));
        }
        Theory::S | Theory::Tr => {
            out.extend(lattice(Sort::Hold));
            if theory == Theory::S {
                out.extend(at(&[UL, UU, UUC, LU, NdU], Sort::Hold));
            } else {
                out.extend(at(&[NdT, SeqEq, SeqNe, HS], Sort::Hold));
            }
            out.extend(lattice(Sort::Cede));
            out.push(AxiomScheme::new(NdAcquire, Sort::Cede));
            out.push(AxiomScheme::new(NdRelease, Sort::Hold));
            out.push(AxiomScheme::new(Empty, Sort::Cede));
            out.push(AxiomScheme::new(Fuse, Sort::Hold));
        }
    }
    out
}

/// The presentation of `theory` over the given locations.
pub fn build(theory: Theory, locs: &Locations) -> Presentation {
    Presentation {
        theory,
        locs: locs.clone(),
        signature: signature(theory, locs),
        schemes: schemes(theory),
    }
}

impl Presentation {
    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn name(&self) -> &'static str {
        self.theory.name()
    }

    pub fn locations(&self) -> &Locations {
        &self.locs
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn schemes(&self) -> &[AxiomScheme] {
        &self.schemes
    }

    pub fn scheme(&self, tag: &str) -> Option<&AxiomScheme> {
        self.schemes.iter().find(|s| s.tag() == tag)
    }

    /// Every ground instance of every scheme within `bounds`.
    pub fn instantiate_axioms(&self, bounds: Bounds) -> Vec<AxiomInstance> {
        self.schemes
            .iter()
            .flat_map(|s| s.instances(&self.locs, bounds))
            .collect()
    }
}

/// Whether the inequation reads `l ≤ r` or `l ≥ r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Le,
    Ge,
}

/// `l ≤ r` as `l ∨ r = r`; `l ≥ r` as `l = l ∨ r`.
pub fn encode_inequation(
    sig: &Signature,
    l: Term,
    r: Term,
    direction: Direction,
) -> Result<(Term, Term), PresentationError> {
    if l.sort() != r.sort() {
        return Err(PresentationError::SortMismatch {
            expected: l.sort(),
            found: r.sort(),
        });
    }
    if !sig.joins_at(l.sort()).is_some_and(|j| j.admits(2)) {
        return Err(PresentationError::SortLacksJoin(l.sort()));
    }
    let joined = Term::or(l.clone(), r.clone())?;
    Ok(match direction {
        Direction::Le => (joined, r),
        Direction::Ge => (l, joined),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::Loc;

    #[test]
    fn signatures() {
        let locs = Locations::default();
        let s = build(Theory::S, &locs);
        assert_eq!(s.signature().arity(&Op::Acquire, Sort::Cede).unwrap().args, vec![Sort::Hold]);
        assert_eq!(s.signature().arity(&Op::Release, Sort::Hold).unwrap().args, vec![Sort::Cede]);
        let b = build(Theory::B, &locs);
        let transitions = b
            .signature()
            .operators()
            .filter(|(op, _)| matches!(op, Op::Transition(_)))
            .count();
        assert_eq!(transitions, 16);
        let j = build(Theory::J, &locs);
        let tags: Vec<&str> = j.schemes().iter().map(|s| s.tag()).collect();
        assert_eq!(tags, ["Associativity", "Commutativity", "Idempotency", "Neutrality"]);
        assert!(matches!("Q".parse::<Theory>(), Err(PresentationError::UnknownTheory(_))));
        assert_eq!("tgs".parse::<Theory>().unwrap(), Theory::Tgs);
    }

    #[test]
    fn inequations() {
        let locs = Locations::default();
        let s = build(Theory::S, &locs);
        let x = Term::var("x", Sort::Hold);
        let fused = Term::release(Term::acquire(x.clone()).unwrap()).unwrap();
        let (l, r) = encode_inequation(s.signature(), fused.clone(), x.clone(), Direction::Ge).unwrap();
        assert_eq!(l, fused);
        assert_eq!(r, Term::or(fused, x.clone()).unwrap());
        let (l, r) = encode_inequation(s.signature(), x.clone(), x.clone(), Direction::Le).unwrap();
        assert_eq!((l, r), (Term::or(x.clone(), x.clone()).unwrap(), x.clone()));
        let bare = Signature::new("bare", vec![Sort::Hold]);
        assert!(matches!(
            encode_inequation(&bare, x.clone(), x.clone(), Direction::Le),
            Err(PresentationError::SortLacksJoin(Sort::Hold))
        ));
        let u = Term::update(Loc(0), true, x);
        assert!(encode_inequation(s.signature(), u, Term::var("c", Sort::Cede), Direction::Le).is_err());
    }
}
