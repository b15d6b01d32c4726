//! Exact scalars, graded bases, sparse linear maps, Koszul signs and
//! elimination over the rationals. Degrees are homological throughout.

mod basis;
mod koszul;
pub mod linalg;
mod linmap;
mod rational;

pub use basis::{BasisError, Generator, GradedBasis};
pub use koszul::{koszul_sign, parity_sign, sort_sign, KoszulError};
pub use linalg::{Matrix, SVec};
pub use linmap::{compose, DegreeBlock, LinearMap, LinearMapError};
pub use rational::{ParseRationalError, Rational};
