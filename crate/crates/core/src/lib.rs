//! Transfer systems on subgroup lattices of finite groups.

pub mod cli;
pub mod error;
pub mod groups;
pub mod lattice;
pub mod rainbow;
pub mod transfer;

pub use error::{Error, Result};
