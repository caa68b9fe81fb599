//! Vector-valued Siegel theta functions of even lattices, Weil representations
//! and the seesaw and contraction identities relating them.
//!
//! Conventions: vectors are columns of coordinates in a fixed lattice basis;
//! `e(x) = exp(2πix)`; discriminant-group values live in `[0, 1)` as exact
//! rationals. The dual representation `ρ_L*` is realised as `ρ_{L(-1)}`, whose
//! matrices are the complex conjugates of those of `ρ_L`.

pub mod contraction;
pub mod disc;
pub mod enumerate;
pub mod error;
pub mod grassmann;
pub mod lattice;
pub mod linalg;
pub mod metaplectic;
pub mod poly;
pub mod repvec;
pub mod seesaw;
pub mod theta;
pub mod weil;

pub use disc::{DiscElement, DiscriminantGroup, IsotropicSubgroup};
pub use error::{Error, Result};
pub use grassmann::GrassmannPoint;
pub use lattice::{Lattice, OverlatticeEmbedding, Sublattice};
pub use poly::{HomogeneousPolynomial, Polynomial};
pub use theta::{ThetaSeries, ThetaValue, VectorPair};
