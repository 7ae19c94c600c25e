//! Numeric operations on encrypted values: MSB index, division and
//! logarithm by series expansion, arithmetic with public constants, and
//! trigonometric functions.

pub mod fixed;
pub mod msb;
pub mod public;
pub mod taylor;
pub mod trig;

pub use fixed::FixedPoint;
pub use msb::{index_msb, MsbIndex};
pub use public::{div_by_public, div_by_public_with_key, mul_by_public};
pub use taylor::{division_and_log, DivisionLog, TaylorConfig};
pub use trig::{cosine, sine, tangent, TangentConfig, TangentOutput, TrigConfig};
