//! Exact symbolic calculus for tensor fields built from one radial function.

mod tensor;
mod termsum;

pub use tensor::{gradient_tensor, AxisNorm, CompiledNorm, SymbolicLimits, TensorField};
pub use termsum::{AxisForm, BaseKind, TermKey, TermSum};
