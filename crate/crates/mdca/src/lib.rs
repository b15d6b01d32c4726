//! Differential graded commutative algebras, sh Lie-Rinehart data and their
//! multi derivation Maurer-Cartan algebras, with exact verification of every
//! defining identity up to a word-length bound.

pub mod graded_core;
pub mod cdga;
pub mod sym_coalgebra;
pub mod convolution;
pub mod structures;
pub mod cli_io;
