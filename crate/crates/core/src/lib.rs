//! Local quantum uncertainty (LQU) of SU(2)-invariant bipartite spin states.
//!
//! The crate builds rotationally invariant density matrices of a spin-j particle
//! coupled to a spin-1/2 or spin-1 partner and evaluates their LQU, with the
//! local observable acting on the partner, by three independent routes:
//!
//! - closed-form expressions in the state parameters (`lqu::lqu_formula_spin_half`,
//!   `lqu::lqu_formula_spin_one`),
//! - the largest eigenvalue of the 3×3 W matrix when the partner is a qubit
//!   (`lqu::lqu_w_matrix`),
//! - direct multi-start minimization of Wigner–Yanase skew information over
//!   unit-norm generator combinations (`lqu::lqu_numeric`).
//!
//! Product-basis ordering is `|j1, m⟩ ⊗ |j2, m'⟩` with `m` descending from `j1`
//! and `m'` descending from `j2`, row-major (partner index fastest).

#![forbid(unsafe_code)]

pub mod angular_momentum;
pub mod cli;
mod error;
pub mod linalg;
pub mod lqu;
pub mod states;

pub use angular_momentum::{MagneticIndex, Spin};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition, HermitianMatrix};
pub use lqu::{GeneratorBasis, LquMethod, LquResult, ObservableDirection, WMatrix};
pub use states::Su2InvariantState;
