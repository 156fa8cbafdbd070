//! 3-colorability of triangulated rings and holed planar triangulations.
//!
//! A triangulated ring is decided by the cyclic parity sequence of its fans: the
//! ring is 3-colorable exactly when that sequence reduces, by e-collapses, to `ee`
//! or to `o^{6m}`. Holed triangulations are handled ring by ring. Every verdict can
//! be cross-checked against an exact backtracking oracle.

pub mod graph;
pub mod parity;
pub mod ring;
pub mod holes;
pub mod harness;
