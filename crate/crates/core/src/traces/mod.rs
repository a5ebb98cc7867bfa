//! Sorted and Brookes traces, closed trace sets and the trace models.

mod brookes;
mod closure;
mod global;
mod matcher;
mod model;
mod nogo;
mod reify;
mod set;
mod trace;

use thiserror::Error;

use crate::kernel::{KernelError, Name, Sort};

pub use brookes::{
    brookes_join, brookes_kleisli, brookes_read, brookes_transition, brookes_unit, brookes_write,
    embed_cede, par, reify_brookes, BrookesModel,
};
pub use closure::{closure_bounded, saturate_steps, OracleConfig, CAP_VAR};
pub use global::{GTable, StateModel};
pub use matcher::{member_of, Matcher};
pub use model::{prefix, unit, TraceModel};
pub use nogo::{hush_step, single_cell_witness, yield1, yield2};
pub use reify::{cell_assert, open_transition, reify, reify_trace};
pub use set::{ShowTraceSet, TraceSet};
pub use trace::{step_deductions, successor_steps, Discipline, ShowTrace, Steps, Trace};

pub use brookes::strip_cede;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("traces need at least one transition")]
    EmptyTrace,
    #[error("expected a {expected} trace set, found {found}")]
    DisciplineMismatch {
        expected: Discipline,
        found: Discipline,
    },
    #[error("expected sort {expected}, found {found}")]
    SortMismatch { expected: Sort, found: Sort },
    #[error("no trace set bound to `{0}`")]
    MissingBinding(Name),
    #[error("closure saturation exceeded the cap of {cap} traces (set {var} to raise it)", var = CAP_VAR)]
    BudgetExceeded { cap: usize },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
