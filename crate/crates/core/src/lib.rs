//! Exact combinatorial Hodge theory for spherical cell complexes and the
//! local Euler cocycle of PL spherical fiber bundles.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is computed over the
//! integers or the rationals; there is no floating point on any
//! computational path.
//!
//! Layout:
//!
//! * [`ratlin`]: sparse exact matrices, fraction-free elimination, Smith
//!   normal form and Moore–Penrose inverses.
//! * [`simplicial`]: finite simplicial complexes with a global vertex order,
//!   boundary matrices and homology.
//! * [`cellx`]: face posets of regular cell spheres, their orientation into
//!   based chain complexes, and duality.
//! * [`build`]: generators for standard spheres and subdivisions.
//! * [`aggmap`]: aggregations and their subdivision chain maps.
//! * [`hodge`]: Green operators, Hodge retractions onto homology and the
//!   basic perturbation lemma.
//! * [`locsys`]: local systems over a simplicial base and their total complex.
//! * [`euler`]: the Euler twisting cochain, periods and the twisted complex.
//! * [`trigest`]: from a triangulated sphere bundle to a local system of
//!   aggregations on the barycentric subdivision of the base.

#![no_std]
#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of, clippy::type_complexity)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod aggmap;
pub mod build;
pub mod cellx;
pub mod euler;
pub mod hodge;
pub mod locsys;
pub mod ratlin;
pub mod report;
pub mod simplicial;
pub mod trigest;

pub use ratlin::{BigInt, BigRational, IntMatrix, RatMatrix};
pub use report::Report;
