//! Dynamic mode decomposition for arbitrary snapshot pairs.
//!
//! Snapshot data are stored as columns. [`data`] builds pairs `(X, Y)` from
//! sequences, strided samples, several trajectories or delay embeddings;
//! [`dmd`] computes eigenvalues and modes with several algorithms;
//! [`scaling`] normalizes modes; [`era`] and [`lim`] relate DMD to the
//! eigensystem realization algorithm and to linear inverse modeling.

pub mod cli;
pub mod data;
pub mod dmd;
pub mod era;
pub mod error;
pub mod generators;
pub mod io;
pub mod linalg;
pub mod lim;
pub mod scaling;

pub use error::{DmdError, Result};
