//! Numerical toolkit for conformal immersions and the Willmore conservation
//! laws: multivector algebra, frames and energies on structured grids,
//! contour residues and their potentials, elastica and Hopf tori, Lorentz
//! norms, and hyperbolic collar charts.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod catalogue;
pub mod collar;
pub mod elastica;
pub mod error;
pub mod fd;
pub mod grid;
pub mod immersion;
pub mod lorentz;
pub mod multivec;
pub mod residues;

pub use error::{Error, Result};
pub use grid::{ChartDomain, ChartKind, EdgeKind, ImmersionGrid};
pub use multivec::{MultiVector, SimpleUnitNormal};
