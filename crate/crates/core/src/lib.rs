//! Trivial-core infection diagrams, the little intervals operads they contain,
//! and their action on a combinatorial model of the 2-string link monoid.

pub mod action;
pub mod cli;
pub mod cubes;
pub mod diagrams;
pub mod diskforest;
pub mod dsl;
pub mod fuzz;
pub mod linkmonoid;
pub mod order;
pub mod overlap;
pub mod perm;
pub mod rational;
pub mod render;
