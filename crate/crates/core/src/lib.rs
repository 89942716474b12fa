//! Workbench for relevant modal logics and their classicized counterparts:
//! formulas, finite relational models, frame conditions, Hilbert proofs and
//! desk-scale countermodel search.

pub mod conditions;
pub mod formula;
pub mod proofs;
pub mod registry;
pub mod report;
pub mod search;
pub mod semantics;
pub mod structures;
pub mod transform;

pub use formula::{parse, render, Formula, Substitution};
pub use report::{Report, Violation};
pub use semantics::{fuse, interpret, satisfies, valid, StateSet};
pub use structures::{load_model_str, Designation, Model, Structure};
