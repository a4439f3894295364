//! Exact symbolic computation for categorified quantum groups with general
//! parameters: Cartan data, compatible parameter families, KLR algebras, the
//! bubble calculus of the 2-category, and rescaling 2-functors together with a
//! harness that checks they preserve every defining relation.

pub mod cartan;
pub mod field;
pub mod params;
pub mod klr;
pub mod ucat;
pub mod functors;
pub mod verify;
pub mod cli;
