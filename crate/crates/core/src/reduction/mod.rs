//! Reduction from FO sentences over one binary relation `R` to sentences of
//! the `E x <>` fragment that are satisfiable over constant domains exactly
//! when the FO sentence is satisfiable.
//!
//! `R(x,y)` is encoded as "some successor makes `P(x)` and `Q(y)` true"; the
//! remaining conjuncts force a model shape in which that reading is the same
//! at every relevant world.

mod fo;
mod translate;

pub use fo::{
    fo_check, fo_enumerate_sat, fo_models_of_size, parse_fo, FoModel, FoModelError, FoParseError, FoQuantifier,
    FoSentence, Matrix,
};
pub use translate::{
    build_witness_model, psi1, psi2, psi3, translate_qf, translate_sentence, witness_world, FIRST, SECOND,
};
