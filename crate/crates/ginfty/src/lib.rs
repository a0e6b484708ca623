//! Exact-arithmetic engine for transferring strong homotopy structures onto
//! finite-dimensional multigraded complexes, with a free-field vertex algebra
//! backend and a handful of worked fixtures.

pub mod fixtures;
pub mod freealg;
pub mod graded;
pub mod homotopy;
pub mod linalg;
pub mod scalar;
pub mod solver;
pub mod sparse;
