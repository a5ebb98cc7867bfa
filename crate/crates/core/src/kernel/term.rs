use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::kernel::{KernelError, NodePath, Op, Sort};
use crate::store::{Loc, Locations, Transition};

/// Variable and value names.
pub type Name = Arc<str>;

/// An immutable, sort-annotated term. Cloning is cheap; equality is structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(Arc<Node>);

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Node {
    sort: Sort,
    kind: TermKind,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Var(Name),
    App(Op, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<Name>, sort: Sort) -> Term {
        Term(Arc::new(Node {
            sort,
            kind: TermKind::Var(name.into()),
        }))
    }

    /// Builds `op(args)` at `sort`, checking the operator's intrinsic shape.
    ///
    /// Whether the operator belongs to a particular signature is checked by
    /// [`Signature::check`](crate::kernel::Signature::check).
    pub fn app(op: Op, sort: Sort, args: Vec<Term>) -> Result<Term, KernelError> {
        let shape = op.shape(sort).ok_or_else(|| KernelError::UnknownOperator {
            op: format!("{op:?} at sort {sort}"),
            path: NodePath::default(),
        })?;
        if shape.len() != args.len() {
            return Err(KernelError::ArityMismatch {
                op: format!("{op:?}"),
                expected: shape.len(),
                found: args.len(),
                path: NodePath::default(),
            });
        }
        for (i, (want, arg)) in shape.iter().zip(&args).enumerate() {
            if *want != arg.sort() {
                return Err(KernelError::SortMismatch {
                    expected: *want,
                    found: arg.sort(),
                    path: NodePath(vec![i]),
                });
            }
        }
        Ok(Term(Arc::new(Node {
            sort,
            kind: TermKind::App(op, args),
        })))
    }

    pub fn join(sort: Sort, args: Vec<Term>) -> Result<Term, KernelError> {
        Term::app(Op::Join(args.len()), sort, args)
    }

    pub fn bot(sort: Sort) -> Term {
        Term::app(Op::Join(0), sort, vec![]).expect("⊥ exists at every sort")
    }

    pub fn or(a: Term, b: Term) -> Result<Term, KernelError> {
        let sort = a.sort();
        Term::join(sort, vec![a, b])
    }

    pub fn update(loc: Loc, bit: bool, t: Term) -> Term {
        let sort = t.sort();
        Term::app(Op::Update { loc, bit }, sort, vec![t]).expect("update preserves the sort")
    }

    pub fn lookup(loc: Loc, t0: Term, t1: Term) -> Result<Term, KernelError> {
        let sort = t0.sort();
        Term::app(Op::Lookup { loc }, sort, vec![t0, t1])
    }

    pub fn acquire(t: Term) -> Result<Term, KernelError> {
        Term::app(Op::Acquire, Sort::Cede, vec![t])
    }

    pub fn release(t: Term) -> Result<Term, KernelError> {
        Term::app(Op::Release, Sort::Hold, vec![t])
    }

    pub fn transition(tr: Transition, t: Term) -> Term {
        let sort = t.sort();
        Term::app(Op::Transition(tr), sort, vec![t]).expect("transitions preserve the sort")
    }

    pub fn sort(&self) -> Sort {
        self.0.sort
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn as_var(&self) -> Option<&Name> {
        match &self.0.kind {
            TermKind::Var(n) => Some(n),
            TermKind::App(..) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match &self.0.kind {
            TermKind::Var(_) => &[],
            TermKind::App(_, args) => args,
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    /// Free variables with their sorts.
    pub fn free_vars(&self) -> BTreeMap<Name, Sort> {
        let mut out = BTreeMap::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeMap<Name, Sort>) {
        match &self.0.kind {
            TermKind::Var(n) => {
                out.insert(n.clone(), self.sort());
            }
            TermKind::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Conventional mathematical rendering, e.g. `◁L_y(▷x, ▷x)`.
    pub fn show<'a>(&'a self, locs: &'a Locations) -> ShowTerm<'a> {
        ShowTerm { term: self, locs }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            TermKind::Var(n) => write!(f, "{n}:{}", self.sort()),
            TermKind::App(op, args) => {
                write!(f, "{op:?}@{}", self.sort())?;
                f.debug_list().entries(args).finish()
            }
        }
    }
}

pub struct ShowTerm<'a> {
    term: &'a Term,
    locs: &'a Locations,
}

impl fmt::Display for ShowTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let locs = self.locs;
        let sub = |t: &'_ Term| ShowTerm { term: t, locs }.to_string();
        match self.term.kind() {
            TermKind::Var(n) => f.write_str(n),
            TermKind::App(op, args) => match op {
                Op::Join(0) => f.write_str("⊥"),
                Op::Join(2) => write!(f, "({} ∨ {})", sub(&args[0]), sub(&args[1])),
                Op::Join(_) => {
                    let inner: Vec<String> = args.iter().map(sub).collect();
                    write!(f, "⋁({})", inner.join(", "))
                }
                Op::Lookup { .. } => write!(
                    f,
                    "{}({}, {})",
                    op.show(locs),
                    sub(&args[0]),
                    sub(&args[1])
                ),
                _ => write!(f, "{}{}", op.show(locs), sub(&args[0])),
            },
        }
    }
}
