//! Partition functions of δ-bounded weighted complete graphs.
//!
//! Everything here operates on `n × n` weight matrices whose entries carry a
//! certified two-sided bound `δ ≤ a_ij ≤ 1`. Three families of partition
//! functions are supported, together with the machinery that relates them:
//!
//! * **Exact oracles** ([`oracles`]): ground-truth values of permanents,
//!   Hamiltonian permanents, closed-walk sums and spanning-tree sums by
//!   exhaustive enumeration or exact dynamic programming at desk scale.
//! * **Scalable computations** ([`scalable`]): trace powers, the weighted
//!   matrix-tree determinant, Sinkhorn scaling and a certified permanent
//!   bracket, all polynomial time.
//! * **Concentration machinery** ([`concentration`]): degree-profile measures
//!   on compositions, their generating polynomials, exponential-moment and
//!   tail bounds, and the local rewiring moves behind them.
//! * **Separation** ([`separator`]): the decision procedure distinguishing
//!   graphs with many Hamiltonian cycles from graphs far from Hamiltonian,
//!   with certified log-domain bounds.
//!
//! The crate is `no_std` (requires `alloc`); IO, file formats and the CLI
//! live in the companion `densepf-cli` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod concentration;
pub mod logdomain;
pub mod matrix;
pub mod oracles;
pub mod scalable;
pub mod separator;
pub mod tol;
pub mod verify;

mod num;

pub use logdomain::LogValue;
pub use matrix::{DirectedGraph, SymmetricWeightMatrix, WeightMatrix};
