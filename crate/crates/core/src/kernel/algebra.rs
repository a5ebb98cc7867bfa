use std::collections::{BTreeMap, BTreeSet};
use std::marker::PhantomData;

use crate::kernel::{KernelError, Name, NodePath, Op, Signature, Sort, Term, TermKind};

/// An algebra over the built-in operator symbols: a carrier and one operation
/// per operator. `sort` is the result sort of the node being interpreted.
pub trait Algebra {
    type Carrier: Clone;
    type Error: From<KernelError>;

    fn operate(
        &self,
        op: &Op,
        sort: Sort,
        args: Vec<Self::Carrier>,
    ) -> Result<Self::Carrier, Self::Error>;
}

/// Interprets `t` by structural recursion, reading variables from `env`.
pub fn evaluate<A, F>(alg: &A, env: &F, t: &Term) -> Result<A::Carrier, A::Error>
where
    A: Algebra + ?Sized,
    F: Fn(&Name, Sort) -> Option<A::Carrier>,
{
    match t.kind() {
        TermKind::Var(n) => env(n, t.sort()).ok_or_else(|| KernelError::MissingBinding(n.clone()).into()),
        TermKind::App(op, args) => {
            let vals = args
                .iter()
                .map(|a| evaluate(alg, env, a))
                .collect::<Result<Vec<_>, _>>()?;
            alg.operate(op, t.sort(), vals)
        }
    }
}

/// [`evaluate`] with an environment given as a finite map.
pub fn evaluate_in<A>(
    alg: &A,
    env: &BTreeMap<Name, A::Carrier>,
    t: &Term,
) -> Result<A::Carrier, A::Error>
where
    A: Algebra + ?Sized,
{
    evaluate(alg, &|n: &Name, _| env.get(n).cloned(), t)
}

/// The term algebra: terms as carrier, constructors as operations.
/// Evaluating in it with a substitution as environment is substitution.
pub struct TermAlgebra<'a> {
    sig: &'a Signature,
}

impl<'a> TermAlgebra<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        TermAlgebra { sig }
    }
}

impl Algebra for TermAlgebra<'_> {
    type Carrier = Term;
    type Error = KernelError;

    fn operate(&self, op: &Op, sort: Sort, args: Vec<Term>) -> Result<Term, KernelError> {
        if self.sig.arity(op, sort).is_none() {
            return Err(KernelError::UnknownOperator {
                op: format!("{op:?} at sort {sort}"),
                path: NodePath::default(),
            });
        }
        Term::app(*op, sort, args)
    }
}

/// Finite powersets with choice as union: the free join-semilattice model.
pub struct PowersetAlgebra<T>(PhantomData<T>);

impl<T> PowersetAlgebra<T> {
    pub fn new() -> Self {
        PowersetAlgebra(PhantomData)
    }
}

impl<T> Default for PowersetAlgebra<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Ord + Clone> Algebra for PowersetAlgebra<T> {
    type Carrier = BTreeSet<T>;
    type Error = KernelError;

    fn operate(&self, op: &Op, sort: Sort, args: Vec<BTreeSet<T>>) -> Result<BTreeSet<T>, KernelError> {
        match op {
            Op::Join(_) => Ok(args.into_iter().flatten().collect()),
            _ => Err(KernelError::UnknownOperator {
                op: format!("{op:?} at sort {sort}"),
                path: NodePath::default(),
            }),
        }
    }
}
