//! Toy-model skew products over a Cantor base.
//!
//! A toy model is a map `F(x, y) = (f(y)(x), K_sign(x)(y))` where every
//! fiber map `f(y)` is unimodal on `[-1, 1]` with turning point `0`, and
//! `K_±` are the inverse branches of an expanding two-branch Cantor map on
//! the base. The turning point is doubled into the signed copies `0⁻`, `0⁺`
//! so that `F` is defined on the whole domain.
//!
//! The crate is `no_std` (it only needs `alloc`) and covers:
//!
//! * [`model`]: fiber families, Cantor maps, one-step evaluation and branch
//!   inverses,
//! * [`symbolic`]: addresses, itineraries and kneading sequences,
//! * [`cantor`]: binary coding of the base and the base conjugacy `ψ`,
//! * [`equivalence`]: labeled turning-point preimages, the depth-`n`
//!   combinatorial equivalence and its piecewise-linear extension,
//! * [`analysis`]: the derivative cocycle, Schwarzian derivative, periodic
//!   orbits and the basin check for attracting orbits.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod cantor;
pub mod coord;
pub mod equivalence;
mod error;
pub mod fixtures;
pub mod grid;
mod hausdorff;
pub mod model;
pub mod symbolic;

pub use coord::{Branch, Point, SignedCoordinate};
pub use error::Error;
pub use hausdorff::hausdorff_distance;
pub use model::{CantorMap, Family, ToyModel, Tolerances, UnimodalFamily};

pub type Result<T> = core::result::Result<T, Error>;
