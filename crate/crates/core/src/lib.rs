//! Exact ECH combinatorics for four-dimensional toric domains.
//!
//! Convex generators and their indices, symplectic actions of polydisks,
//! ellipsoids and convex PL domains, ECH capacities, an exhaustive search
//! engine for the Hutchings criterion on `P(a,1) → E(bc,c)`, and explicit
//! generators showing when that criterion cannot obstruct.

pub mod capacities;
pub mod criterion;
pub mod domains;
pub mod error;
pub mod generators;
pub mod rational;
pub mod render;
pub mod witness;

pub use domains::{trivial_inclusion, ConvexPath, ToricDomain};
pub use error::{Error, Result};
pub use generators::{
    decompositions, enumerate_generators, parse_generator, ConvexGenerator, Direction, EdgeFactor, IndexFamily, Label,
    LabelMode, PathProfile,
};
pub use rational::Rational;
