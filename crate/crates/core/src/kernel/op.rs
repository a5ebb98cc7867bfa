use std::fmt;

use crate::kernel::Sort;
use crate::store::{Loc, Locations, Transition};

/// Operator symbols shared by every built-in signature.
///
/// An operator's result sort is not part of the symbol: the join family and the
/// transition operators exist at several sorts, and a term node carries its sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    /// `n`-ary non-deterministic choice; `Join(0)` is `⊥`, `Join(2)` is `∨`.
    Join(usize),
    /// `U_{ℓ,b}`.
    Update { loc: Loc, bit: bool },
    /// `L_ℓ(x₀, x₁)`, continuing with `x_b` when `ℓ` holds `b`.
    Lookup { loc: Loc },
    /// `◁ : ∘⟨•⟩`.
    Acquire,
    /// `▷ : •⟨∘⟩`.
    Release,
    /// A transition operator `⟨σ,ρ⟩` (plain in the transitions theory, open in
    /// the open-transition theories).
    Transition(Transition),
}

impl Op {
    /// Argument sorts of this operator when it produces `result`, or `None` if
    /// the operator cannot produce that sort at all.
    pub fn shape(&self, result: Sort) -> Option<Vec<Sort>> {
        match *self {
            Op::Join(n) => Some(vec![result; n]),
            Op::Update { .. } | Op::Transition(_) => Some(vec![result]),
            Op::Lookup { .. } => Some(vec![result, result]),
            Op::Acquire => (result == Sort::Cede).then(|| vec![Sort::Hold]),
            Op::Release => (result == Sort::Hold).then(|| vec![Sort::Cede]),
        }
    }

    pub fn arg_count(&self) -> usize {
        match *self {
            Op::Join(n) => n,
            Op::Lookup { .. } => 2,
            _ => 1,
        }
    }

    pub fn is_join(&self) -> bool {
        matches!(self, Op::Join(_))
    }

    pub fn show<'a>(&'a self, locs: &'a Locations) -> ShowOp<'a> {
        ShowOp { op: self, locs }
    }
}

pub struct ShowOp<'a> {
    op: &'a Op,
    locs: &'a Locations,
}

impl fmt::Display for ShowOp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let locs = self.locs;
        match *self.op {
            Op::Join(0) => f.write_str("⊥"),
            Op::Join(2) => f.write_str("∨"),
            Op::Join(n) => write!(f, "⋁{n}"),
            Op::Update { loc, bit } => write!(f, "U_{{{},{}}}", locs.name(loc), bit as u8),
            Op::Lookup { loc } => write!(f, "L_{}", locs.name(loc)),
            Op::Acquire => f.write_str("◁"),
            Op::Release => f.write_str("▷"),
            Op::Transition(t) => {
                write!(f, "⟨{},{}⟩", locs.render(t.from), locs.render(t.to))
            }
        }
    }
}
