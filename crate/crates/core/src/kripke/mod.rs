//! Kripke models with increasing local domains, the satisfaction relation,
//! and a bounded model finder.

mod enumerate;
mod eval;
mod model;

pub use enumerate::{
    element_name, enumerate_exhaustive, enumerate_sat, world_name, FoundModel, OracleError, DEFAULT_ORACLE_BUDGET,
};
pub use eval::{check, Assignment, CheckError, Evaluator};
pub use model::{KripkeModel, Tuple, Violation};

/// Which class of models quantifiers are interpreted over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// `wRv` implies `δ(w) ⊆ δ(v)`.
    Increasing,
    /// `δ(w) = D` at every world.
    Constant,
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "increasing" => Ok(Semantics::Increasing),
            "constant" => Ok(Semantics::Constant),
            other => Err(format!("unknown semantics `{other}` (expected increasing or constant)")),
        }
    }
}

impl std::fmt::Display for Semantics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Semantics::Increasing => "increasing",
            Semantics::Constant => "constant",
        })
    }
}
