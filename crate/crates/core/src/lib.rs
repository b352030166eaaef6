//! Bound-state counting near the edges of the spectral gap of the
//! two-dimensional massive Dirac operator with dipole and subcritical
//! Coulomb potentials.
//!
//! The number of eigenvalues in `(-E, E)` grows like `|log(m - E)|` with
//! slope `(1/pi) tr sqrt((M_{2m|d|})_-)`, where `M_p = -d^2 - p cos` is the
//! rescaled Mathieu operator on the circle. The crate checks this law along
//! two independent routes:
//!
//! - [`dipole`]: exact separation of the exterior dipole Schrödinger operator
//!   into Mathieu angular channels ([`mathieu`]) and inverse-square radial
//!   channels ([`radial`]), counted by Prüfer phases.
//! - [`dirac2d`]: a staggered coupled-channel discretization of the full
//!   Dirac operator, counted by block `LDLᵀ` inertia.
//!
//! [`dirac_channel`] covers the radial Dirac–Coulomb channels with the
//! distinguished boundary behaviour at the Coulomb centre, and
//! [`charge_model`] turns charge distributions into the dipole moment,
//! radius and rest potential that feed the theorem's hypotheses.
//!
//! Units: `ħ = v_F = 1`; couplings are dimensionless and lengths are in
//! units of `1/m` whenever a mass is present.

pub mod charge_model;
pub mod cli;
pub mod dipole;
pub mod dirac2d;
pub mod dirac_channel;
pub mod error;
pub mod linalg;
pub mod mathieu;
pub mod radial;

pub use error::{Error, Result};
