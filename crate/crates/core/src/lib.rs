//! Simulators, exhaustive searches, and certificate checkers for the six
//! problems of the 2021 USA Mathematical Olympiad.
//!
//! Each module owns one problem family:
//!
//! * [`park_walk`]: alternating left/right walks on cubic maps.
//! * [`tromino`] and [`algebra`]: the tromino clearing game and its
//!   roots-of-unity certificates.
//! * [`gcd_sets`]: sets with the gcd-divisor bijection property.
//! * [`cyclic_system`]: the cyclic `2n`-equation system and a Newton solver.
//! * [`geometry`]: numerical checks of the two concurrency/collinearity
//!   theorems.

pub mod algebra;
pub mod cyclic_system;
pub mod gcd_sets;
pub mod geometry;
pub mod park_walk;
pub mod seed;
pub mod tromino;
