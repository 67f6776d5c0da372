//! Satisfiability toolkit for bundled first-order modal logic (BFOML).
//!
//! * [`formula`]: syntax, parsing, negation normal form, cleansing.
//! * [`kripke`]: increasing/constant-domain Kripke models, the satisfaction
//!   relation, and a bounded model finder used as an independent oracle.
//! * [`tableau`]: terminating tableau procedures for the full fragment over
//!   increasing domains and for the `E x []` fragment over constant domains.
//! * [`reduction`]: the translation of FO sentences over one binary relation
//!   into the `E x <>` fragment, with the path-plus-fan witness model.
//! * [`gen`]: seeded random formula generation for differential testing.

pub mod formula;
pub mod gen;
pub mod kripke;
pub mod reduction;
pub mod tableau;

pub use formula::{Formula, Fragment, Modality, Predicate, Quantifier, Var};
pub use kripke::{Assignment, KripkeModel, Semantics};
pub use tableau::Verdict;
