//! Exact computation of Lie brackets on the Lie algebra of physical states
//! of a lattice vertex operator algebra of central charge 24.
//!
//! Brackets are computed two ways: by an explicit formula evaluated inside
//! `V` ([`bracket`]), and by brute-force covariant quantisation in
//! `V (x) V_{II_{1,1}}` ([`oracle`]). Everything is exact over `Q`.

pub mod bracket;
pub mod combinatorics;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod lincomb;
pub mod noghost;
pub mod oracle;
pub mod rational;
pub mod sample;
pub mod voa;

pub use error::{Error, Result};
pub use lattice::{Cocycle, HVector, Lattice, LatticeVector};
pub use lincomb::LinComb;
pub use noghost::{TensorElement, TensorSpace, VoaBackend};
pub use rational::Q;
pub use voa::{FockBasisState, FockElement, LatticeVoa};
