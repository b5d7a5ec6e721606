pub mod error;
pub mod padic;

pub use error::{Error, Result};
pub use padic::{ExtScalar, FieldConfig, MuKind, NormValue, Qp};
pub mod linalg;
pub mod spaces;
pub mod operators;
pub mod tensor;
pub mod sample;
pub mod hsiso;
pub mod subspaces;
pub mod wire;
pub mod selftest;
