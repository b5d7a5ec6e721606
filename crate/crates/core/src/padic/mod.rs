//! Scalars: Q_p, the quadratic extension Q_p(√μ), absolute values and square roots.

mod ext;
mod field;
mod norm;
mod qp;
mod residue;
mod sqrt;

pub use ext::ExtScalar;
pub use field::{FieldConfig, MuKind};
pub use norm::NormValue;
pub use qp::{Qp, Valuation};
pub use residue::{residue_rank, Residue, ResidueField};
pub use sqrt::{is_square, solve_norm_equation, sqrt_ext, sqrt_qp};
