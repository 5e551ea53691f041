//! Exact computations with diagonal p-permutation functors of small finite groups:
//! pairs `(P, s)` and their classes `(L, u)`, the two multiplicity formulas for simple
//! functors `S_{L,u,V}`, the fusion-side orbit bijection, and equivalence verdicts.

pub mod arith;
pub mod chartab;
pub mod cli;
pub mod ddelta;
pub mod error;
pub mod fixtures;
pub mod frobenius;
pub mod fusion;
pub mod group;
pub mod groupfile;
pub mod hom;
pub mod iso;
pub mod multiplicity;
pub mod perm;
pub mod report;
pub mod subgroups;

pub use error::{Error, Result};
pub use group::PermGroup;
pub use perm::Permutation;
