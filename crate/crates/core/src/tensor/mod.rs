//! Operator-space tensor norms on `E ⊗ F`: representations, generators of
//! upper bounds, and certified brackets.

mod bracket;
pub mod examples;
pub mod generators;
mod representation;

pub use bracket::{
    compare_pl_l, l_norm_bracket, l_norm_bracket_with, pl_norm_bracket, pl_norm_bracket_with,
    BracketOptions, Comparison, LowerWitness, NormBracket, Representation, TensorNorm,
    UpperWitness,
};
pub use representation::{orthogonalize_representation, LRepresentation, PLRepresentation, PlTerm};
