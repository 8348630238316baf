//! Exact machinery for the same-type property of finite point families.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: exact rational points, hyperplanes, orientation and side
//!   predicates, hulls and general-position certification.
//! - [`sametype`]: two independent same-type checkers (orientation scan and
//!   transversal-hyperplane search) and the exact same-type constant of small
//!   families.
//! - [`partition`]: multivariate polynomials, Veronese lifting, polynomial
//!   ham-sandwich bisection and iterated polynomial partitioning.
//! - [`extraction`]: the partition / heavy-cell / piercing-hypergraph /
//!   Moser–Tardos pipeline that extracts large same-type subfamilies.
//! - [`constructions`]: grid sets, perturbations, blow-ups and the upper-bound
//!   audit chain.
//! - [`approx`]: ε-approximants for polytope ranges.
//! - [`io`]: the JSON file schemas shared by the library and the CLI.
//! - [`cli`]: the experiment driver behind the `sametype` binary.
//!
//! Everything that decides a sign is exact; floats appear only in search
//! heuristics whose output is verified exactly, and in display columns.

pub mod approx;
pub mod cli;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod extraction;
pub mod geometry;
pub mod io;
pub mod partition;
pub mod rng;
pub mod sametype;

pub use error::{Error, Result};
pub use geometry::{
    hull_meets_hyperplane, orient, side, span_hyperplane, verify_general_position, Family, GeneralPosition,
    Hyperplane, Point, PointSet, Scalar, Sign,
};
