//! Exact symbolic computation in the rank-one formal symplectic reflection
//! algebra `R = C<x,y>((h1))((h2)) x| Z2` with relation
//! `[z, zb] = i*h1*(1 + 2*h2*g)`, its spherical subalgebra `eRe`, the
//! closed-form trace on it, constructive degree-0 Hochschild certificates,
//! and the characteristic-class generating functions built on top.
//!
//! The crate is `no_std` and only needs `alloc`. IO, JSON and the command
//! line live in the `dunkl` crate.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod expr;
pub mod hochschild;
pub mod index;
pub mod linear;
pub mod scalars;
pub mod spherical;
pub mod trace;

pub use algebra::{Monomial, SrcElement};
pub use error::Error;
pub use hochschild::{Certificate, Hh0Entry, Hh0Report, Witness};
pub use index::{BasePoly, FormPoly, LocalElement, LocalMonomial};
pub use scalars::{GaussianRational, ScalarPoly, TruncSeries};
pub use spherical::InvariantPoly;
pub use trace::TraceValue;
