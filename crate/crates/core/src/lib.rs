pub mod codes;
pub mod error;
pub mod fock;
pub mod group_actions;
pub mod lattice;
pub mod moonshine;
pub mod qseries;
pub mod verify;

pub use error::{Error, Result};
