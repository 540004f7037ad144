//! Exact computation of Lie algebra cohomology of graded nilpotent
//! algebras, with the decompositions and cross-checks used to tabulate
//! nonholonomic Riemann and Weyl tensors.

pub mod linalg;
pub mod rootsys;
pub mod error;
pub mod gmod;
pub mod liealg;
pub mod cohom;
pub mod decomp;
pub mod prolong;
pub mod verify;
pub mod cli;
