//! Perturbative solutions indexed by labelled planar trees, the hierarchy of
//! invariant on-shell functions they produce, and three geometric invariants:
//! a discrete configuration-space action on the line, Gauss linking numbers of
//! polygonal links, and the winding-area invariant of planar curves.

pub mod bf_config;
pub mod charges;
pub mod exec;
pub mod formats;
pub mod geom2d;
pub mod geom3d;
pub mod hodge;
pub mod linalg;
pub mod rational;
pub mod series;
pub mod solver;
pub mod trees;

pub use exec::Exec;
pub use linalg::QMatrix;
pub use rational::{QVec, Q};
