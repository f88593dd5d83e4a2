//! Permutation and GF(4) matrix group algorithms for studying quotients of
//! subdirect products of perfect groups.

pub mod cache;
pub mod chain;
pub mod element;
pub mod error;
pub mod families;
pub mod gamma;
pub mod gf4;
pub mod group;
pub mod matrix;
pub mod rng;
pub mod series;
pub mod subset;

pub use chain::{ChainConfig, StabilizerChain};
pub use element::{GroupElement, Permutation, ProductElement};
pub use error::{Error, Result};
pub use gf4::{Gf4, Mat2};
pub use group::GroupHandle;
pub use matrix::Matrix;
