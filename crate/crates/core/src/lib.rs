pub mod coeffs;
pub mod compositions;
pub mod diffsys;
pub mod error;
pub mod form;
pub mod kernel;
pub mod laurent;
pub mod matrix;
pub mod perm;
pub mod scalars;
pub mod tableaux;
pub mod verify;
pub mod ybgraph;
