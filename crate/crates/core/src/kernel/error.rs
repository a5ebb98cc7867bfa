use std::fmt;

use thiserror::Error;

use crate::kernel::{Name, Sort};

/// Position of a node inside a term: the argument indices taken from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn child(&self, i: usize) -> NodePath {
        let mut p = self.0.clone();
        p.push(i);
        NodePath(p)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unknown operator {op} at {path}")]
    UnknownOperator { op: String, path: NodePath },
    #[error("unknown variable `{name}` at {path}")]
    UnknownVariable { name: String, path: NodePath },
    #[error("{op} expects {expected} arguments, found {found} at {path}")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
        path: NodePath,
    },
    #[error("expected sort {expected}, found {found} at {path}")]
    SortMismatch {
        expected: Sort,
        found: Sort,
        path: NodePath,
    },
    #[error("cannot infer the sort of the join at {path}")]
    AmbiguousSort { path: NodePath },
    #[error("no binding for variable `{0}`")]
    MissingBinding(Name),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(Name),
}

impl KernelError {
    pub(crate) fn sort_mismatch(expected: Sort, found: Sort) -> Self {
        KernelError::SortMismatch {
            expected,
            found,
            path: NodePath::default(),
        }
    }
}
