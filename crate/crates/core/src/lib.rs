//! Shared-state concurrency as a two-sorted algebraic theory.

pub mod checker;
pub mod kernel;
pub mod presentations;
pub mod store;
pub mod traces;
