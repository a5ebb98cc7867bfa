//! Deciding equations by denotation, and the property suites behind it.

mod denote;
mod report;
mod sample;
mod suites;
mod verdict;

use thiserror::Error;

use crate::kernel::KernelError;
use crate::presentations::{PresentationError, Theory};
use crate::traces::TraceError;

pub use denote::{denote, denote_any, denote_b, denote_g, denote_tr_direct, Denotation};
pub use report::{Entry, Report};
pub use sample::{
    random_closed_set, random_context, random_gtable, random_steps, random_term,
    random_trace_env, random_values, value_context, SampleConfig,
};
pub use suites::*;
pub use verdict::{check_equal, check_refines, trace_witness, Verdict, Witness, WitnessSide};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("theory {theory} has no {what}")]
    Unsupported { theory: Theory, what: &'static str },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}
