//! Exact Dirac four-spinor eigenstates of an electron in a two-dimensional
//! infinite quantum well, with the quantities that follow from them:
//!
//! * charge, current and momentum densities, including the split of the
//!   current into a spin-curl part and a translation part ([`density`]);
//! * the vortex pattern of the current ([`topology`]);
//! * first-order energy shifts from coupling the current to a vector
//!   potential, the up/down Zeeman splitting, and patch-potential scans
//!   ([`interaction`]).
//!
//! Densities and currents are dimensionless (ρ/e and j/(ec)), lengths are in
//! meters and energy shifts are reported in units of μ_B·B.

pub mod constants;
pub mod density;
pub mod error;
pub mod geometry;
pub mod interaction;
pub mod potential;
pub mod quadrature;
pub mod spinor;
pub mod topology;

pub use constants::PhysicalConstants;
pub use density::{FieldGrid, FieldKind, GordonTerms, Quantity};
pub use error::{Error, Result};
pub use geometry::{derive_params, grid_points, DerivedStateParams, GridSpec, Point, Spin, StateIndex, WellGeometry};
pub use interaction::{InteractionResult, ScanResult, ZeemanResult};
pub use potential::{PotentialVariant, VectorPotentialSpec};
pub use quadrature::{QuadratureRule, QuadratureSpec};
pub use spinor::{DiracMatrices, SpinorValue, TwoSpinorPair};
pub use topology::{Vortex, VortexReport};
