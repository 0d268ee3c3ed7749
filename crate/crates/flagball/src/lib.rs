//! Exact harmonic analysis on the three-dimensional ball.
//!
//! The ball `B^3 = R^+ x S^2` is treated separably: a spherical Laguerre
//! basis with an exact Gauss-Laguerre quadrature handles the radial line
//! ([`radial`]), an exact spherical harmonic transform handles the sphere
//! ([`sphere`]), and their product gives the Fourier-Laguerre transform on
//! the ball ([`ball`]).  On top of the ball transform sits an exact
//! axisymmetric wavelet (flaglet) transform with verified admissibility and
//! tight-frame energy conservation ([`flaglet`]).  Binary and CSV
//! serialization plus the CLI plumbing live in [`io`].

pub mod ball;
pub mod error;
pub mod flaglet;
pub mod io;
pub mod radial;
pub mod sphere;

mod gauss;

pub use error::{Error, Result};
