//! A laboratory for the backtracking (BT) model on simple knapsack.
//!
//! - [`knapsack`]: exact instances and brute-force oracles.
//! - [`bt`]: BT algorithms, computation trees and their width.
//! - [`adversary`]: the Solver/Adversary game and certified hard instances.
//! - [`bounds`]: the entropy exponent behind the `C(βn, γn)` width bound.
//! - [`format`]: JSON documents shared with the command-line tool.

pub mod adversary;
pub mod bounds;
pub mod bt;
pub mod error;
pub mod format;
pub mod knapsack;

pub use error::{Error, Result};
