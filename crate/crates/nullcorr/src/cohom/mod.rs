//! Cohomology of bundles built from the monad: expressions, split complexes, the engine,
//! Koszul-type resolutions and the claim suites.

mod complex;
mod engine;
mod expr;
pub mod resolutions;
pub mod suite;

pub use complex::{FormEntry, SplitComplex, Summand};
pub use engine::{
    cohom, cohom_table, ChaseOutcome, CohomDim, CohomError, CohomGroup, DualStrategy, GroupPiece,
    Row, Session, Table, TableRow,
};
pub use expr::{normalize, ExprError, SheafExpr, MAX_NONSPLIT_EXTPOW, MAX_NONSPLIT_FACTORS};
