//! Exact combinatorial and representation-theoretic invariants of Segre
//! powers of Boolean and subspace lattices.
//!
//! The crate is organised bottom-up: permutation and tableau combinatorics
//! ([`perm`]), integer q-polynomials ([`qpoly`]), symmetric functions in one
//! alphabet ([`symfunc`]) and in `t` alphabets ([`multisym`]), the invariant
//! formulas built on top of them ([`invariants`]), and finite labelled posets
//! used as a brute-force cross-check ([`poset`]).

pub mod budget;
pub mod error;
pub mod invariants;
pub mod multisym;
pub mod perm;
pub mod poset;
pub mod qpoly;
pub mod symfunc;

pub use budget::Budget;
pub use error::{Error, Result};
pub use multisym::{Basis, MultiSymFunc};
pub use perm::{Partition, Permutation, RankSet};
pub use poset::{Label, LabeledPoset};
pub use qpoly::{QPoly, QRatNF};
pub use symfunc::{Coeff, SymFunc};
