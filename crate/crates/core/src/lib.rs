//! Exact computations with free differential graded Lie algebras over the
//! rationals: homology, homotopy retracts, transferred L-infinity brackets
//! and higher Whitehead brackets.

pub mod coalgebra;
pub mod dgl;
pub mod error;
pub mod fixtures;
pub mod investigation;
pub mod lie;
pub mod qlinalg;
pub mod retract;
pub mod signs;
pub mod syntax;
pub mod transfer;
pub mod trees;
pub mod whitehead;

pub use error::{Error, Result};
