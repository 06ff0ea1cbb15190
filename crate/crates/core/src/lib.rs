//! Exact combinatorics engine for finite Coxeter weak orders, polygonal-lattice
//! quotients, and partial orders on square-equivalence classes of maximal chains.
//!
//! Everything is computed over exact integer/rational arithmetic and verified
//! rather than assumed: congruences are checked against the lattice-congruence
//! law, quotient edge labellings are checked for representative constancy, and
//! the chain-class orders are built twice (polygon moves vs. inversion keys)
//! and compared.

pub mod bits;
pub mod bruhat;
pub mod cambrian;
pub mod cartan;
pub mod chain_orders;
pub mod chain_poset;
pub mod error;
pub mod export;
pub mod forcing;
pub mod lattice;
pub mod roots;
pub mod verify;
pub mod weak_order;

pub use cartan::{CoxeterSystem, CoxeterType, CoxeterWord, Rat, Scalar};
pub use error::Error;

/// Index of a positive root inside a [`roots::RootSystem`].
pub type PosIdx = u32;
/// Index of an element inside a finite poset or lattice.
pub type ElemId = u32;
/// Index of a rank-two subsystem inside a [`roots::RootSystem`].
pub type SubsysId = u32;

pub type Result<T> = std::result::Result<T, Error>;
