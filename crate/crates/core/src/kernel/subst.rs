use std::collections::BTreeMap;

use crate::kernel::{KernelError, Name, Term, TermKind};

/// A simultaneous substitution, mapping variable names to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, name: impl Into<Name>, t: Term) -> Self {
        self.map.insert(name.into(), t);
        self
    }

    pub fn insert(&mut self, name: impl Into<Name>, t: Term) {
        self.map.insert(name.into(), t);
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.map.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.map.iter()
    }

    /// The identity substitution on the free variables of `t`.
    pub fn identity_on(t: &Term) -> Self {
        Substitution {
            map: t
                .free_vars()
                .into_iter()
                .map(|(n, s)| (n.clone(), Term::var(n, s)))
                .collect(),
        }
    }

    /// `self ; then`: maps `y ↦ (self y)[then]`.
    pub fn then(&self, then: &Substitution) -> Result<Substitution, KernelError> {
        let map = self
            .map
            .iter()
            .map(|(n, t)| Ok((n.clone(), substitute(t, then)?)))
            .collect::<Result<_, KernelError>>()?;
        Ok(Substitution { map })
    }
}

impl FromIterator<(Name, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Name, Term)>>(iter: I) -> Self {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

/// Homomorphic replacement of variables.
pub fn substitute(t: &Term, theta: &Substitution) -> Result<Term, KernelError> {
    match t.kind() {
        TermKind::Var(n) => {
            let image = theta
                .get(n)
                .ok_or_else(|| KernelError::MissingBinding(n.clone()))?;
            if image.sort() != t.sort() {
                return Err(KernelError::sort_mismatch(t.sort(), image.sort()));
            }
            Ok(image.clone())
        }
        TermKind::App(op, args) => {
            let args = args
                .iter()
                .map(|a| substitute(a, theta))
                .collect::<Result<Vec<_>, _>>()?;
            Term::app(*op, t.sort(), args)
        }
    }
}
