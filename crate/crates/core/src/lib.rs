//! Norm brackets for proto-Lambert and Lambert tensor products of quantized
//! spaces, computed on finite truncations `H_d = C^d` of a separable Hilbert space.

// Index loops mirror the coordinate formulas of the numerical kernels.
#![allow(clippy::needless_range_loop)]

pub mod certificates;
pub mod cli;
pub mod element;
pub mod error;
pub mod hilbert;
pub mod maps;
pub mod quant;
pub mod rng;
pub mod tensor;

pub use element::{diamond, flip_factors, module_action, AmplifiedElement};
pub use error::{Error, Result};
pub use hilbert::{GradedVector, OperatorBlock, PairingMap, C64};
pub use nalgebra;
pub use quant::{BaseNorm, EvalOptions, Exponent, Field, NormValue, Quantization};
