use std::collections::BTreeMap;

use crate::kernel::{KernelError, Name, NodePath, Op, Sort, Term, TermKind};

/// Which finite arities of the join family a sort carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JoinArities {
    /// Every finite arity `⋁ₙ`.
    All,
    /// Only the listed arities (the plain semilattice signature has `0` and `2`).
    Only(Vec<usize>),
}

impl JoinArities {
    pub fn admits(&self, n: usize) -> bool {
        match self {
            JoinArities::All => true,
            JoinArities::Only(ns) => ns.contains(&n),
        }
    }
}

/// Argument scheme and result sort of an operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arity {
    pub result: Sort,
    pub args: Vec<Sort>,
}

/// A multi-sorted signature. Non-join operators have exactly one result sort;
/// the join family is overloaded by sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    name: String,
    sorts: Vec<Sort>,
    joins: BTreeMap<Sort, JoinArities>,
    ops: BTreeMap<Op, Sort>,
}

impl Signature {
    pub fn new(name: impl Into<String>, sorts: Vec<Sort>) -> Self {
        Signature {
            name: name.into(),
            sorts,
            joins: BTreeMap::new(),
            ops: BTreeMap::new(),
        }
    }

    pub fn with_joins(mut self, sort: Sort, arities: JoinArities) -> Self {
        debug_assert!(self.sorts.contains(&sort));
        self.joins.insert(sort, arities);
        self
    }

    pub fn with_op(mut self, op: Op, result: Sort) -> Self {
        debug_assert!(!op.is_join());
        debug_assert!(op
            .shape(result)
            .is_some_and(|s| s.iter().all(|a| self.sorts.contains(a))));
        self.ops.insert(op, result);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn join_sorts(&self) -> impl Iterator<Item = Sort> + '_ {
        self.joins.keys().copied()
    }

    pub fn joins_at(&self, sort: Sort) -> Option<&JoinArities> {
        self.joins.get(&sort)
    }

    /// Non-join operators with their result sorts.
    pub fn operators(&self) -> impl Iterator<Item = (Op, Sort)> + '_ {
        self.ops.iter().map(|(o, s)| (*o, *s))
    }

    pub fn arity(&self, op: &Op, result: Sort) -> Option<Arity> {
        let present = match op {
            Op::Join(n) => self.joins.get(&result).is_some_and(|a| a.admits(*n)),
            _ => self.ops.get(op) == Some(&result),
        };
        if !present {
            return None;
        }
        op.shape(result).map(|args| Arity { result, args })
    }

    /// Checks that every node of `t` is an operator of this signature.
    pub fn check(&self, t: &Term) -> Result<(), KernelError> {
        self.check_at(t, &NodePath::default())
    }

    fn check_at(&self, t: &Term, path: &NodePath) -> Result<(), KernelError> {
        match t.kind() {
            TermKind::Var(_) => Ok(()),
            TermKind::App(op, args) => {
                if self.arity(op, t.sort()).is_none() {
                    return Err(KernelError::UnknownOperator {
                        op: format!("{op:?} at sort {}", t.sort()),
                        path: path.clone(),
                    });
                }
                args.iter()
                    .enumerate()
                    .try_for_each(|(i, a)| self.check_at(a, &path.child(i)))
            }
        }
    }
}

/// Variable declarations: a finite map from names to sorts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarContext {
    bindings: BTreeMap<Name, Sort>,
}

impl VarContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, N>(pairs: I) -> Result<Self, KernelError>
    where
        I: IntoIterator<Item = (N, Sort)>,
        N: Into<Name>,
    {
        let mut ctx = VarContext::new();
        for (n, s) in pairs {
            ctx.declare(n, s)?;
        }
        Ok(ctx)
    }

    pub fn declare(&mut self, name: impl Into<Name>, sort: Sort) -> Result<(), KernelError> {
        let name = name.into();
        if self.bindings.contains_key(&name) {
            return Err(KernelError::DuplicateVariable(name));
        }
        self.bindings.insert(name, sort);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<Sort> {
        self.bindings.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, Sort)> {
        self.bindings.iter().map(|(n, s)| (n, *s))
    }

    pub fn of_sort(&self, sort: Sort) -> impl Iterator<Item = &Name> {
        self.bindings
            .iter()
            .filter(move |(_, s)| **s == sort)
            .map(|(n, _)| n)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// The same names with every sort passed through `f`.
    pub fn map_sorts(&self, f: impl Fn(Sort) -> Sort) -> VarContext {
        VarContext {
            bindings: self.bindings.iter().map(|(n, s)| (n.clone(), f(*s))).collect(),
        }
    }
}

/// An untyped term tree: operators are resolved, sorts are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawTerm {
    Var(String),
    App(Op, Vec<RawTerm>),
}

/// Sort-checks a raw tree against a signature and context.
///
/// `expected` constrains the root; joins take their sort from the expectation,
/// from the signature's unique join sort, or from their first argument.
pub fn check_sort(
    sig: &Signature,
    ctx: &VarContext,
    raw: &RawTerm,
    expected: Option<Sort>,
) -> Result<Term, KernelError> {
    check_node(sig, ctx, raw, expected, &NodePath::default())
}

fn check_node(
    sig: &Signature,
    ctx: &VarContext,
    raw: &RawTerm,
    expected: Option<Sort>,
    path: &NodePath,
) -> Result<Term, KernelError> {
    let mismatch = |want: Sort, found: Sort| KernelError::SortMismatch {
        expected: want,
        found,
        path: path.clone(),
    };
    match raw {
        RawTerm::Var(name) => {
            let sort = ctx.get(name).ok_or_else(|| KernelError::UnknownVariable {
                name: name.clone(),
                path: path.clone(),
            })?;
            match expected {
                Some(want) if want != sort => Err(mismatch(want, sort)),
                _ => Ok(Term::var(name.as_str(), sort)),
            }
        }
        RawTerm::App(op, args) => {
            let unknown = || KernelError::UnknownOperator {
                op: format!("{op:?}"),
                path: path.clone(),
            };
            let result = match op {
                Op::Join(_) => {
                    let mut candidates: Vec<Sort> = sig.join_sorts().collect();
                    if candidates.is_empty() {
                        return Err(unknown());
                    }
                    if let Some(want) = expected {
                        if !candidates.contains(&want) {
                            return Err(unknown());
                        }
                        candidates = vec![want];
                    }
                    if candidates.len() == 1 {
                        candidates[0]
                    } else if let Some(first) = args.first() {
                        check_node(sig, ctx, first, None, &path.child(0))?.sort()
                    } else {
                        return Err(KernelError::AmbiguousSort { path: path.clone() });
                    }
                }
                _ => {
                    let result = sig.operators().find(|(o, _)| o == op).ok_or_else(unknown)?.1;
                    if let Some(want) = expected {
                        if want != result {
                            return Err(mismatch(want, result));
                        }
                    }
                    result
                }
            };
            let arity = sig.arity(op, result).ok_or_else(unknown)?;
            if arity.args.len() != args.len() {
                return Err(KernelError::ArityMismatch {
                    op: format!("{op:?}"),
                    expected: arity.args.len(),
                    found: args.len(),
                    path: path.clone(),
                });
            }
            let children = args
                .iter()
                .zip(&arity.args)
                .enumerate()
                .map(|(i, (a, s))| check_node(sig, ctx, a, Some(*s), &path.child(i)))
                .collect::<Result<Vec<_>, _>>()?;
            Term::app(*op, result, children)
        }
    }
}
