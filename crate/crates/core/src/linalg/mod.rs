//! Numerical kernels shared by the counting modules.
//!
//! Everything here is pure: values are immutable after construction and all
//! functions are safe to call concurrently on shared inputs.

mod block;
mod fit;
mod ode;
mod roots;
mod tridiag;

pub use block::{ldlt_inertia, BlockTridiag, Inertia, ZERO_PIVOT_REL_TOL};
pub use fit::{linfit, LineFit};
pub use ode::{integrate_ode, OdeSystem, MAX_REL_TOL, MIN_REL_TOL};
pub use roots::{bisect_root, brent_root};
pub use tridiag::{eigen_tridiag, sturm_count, SymTridiag, EIGEN_ABS_TOL, STURM_PIVOT_GUARD};
