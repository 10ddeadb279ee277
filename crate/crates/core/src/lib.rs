//! Semantic units: identified statement and compound units, crosswalks
//! between content forms, FDO serializations and granular FAIRness.

pub mod error;
pub mod facade;
pub mod fairness;
pub mod fixtures;
pub mod granularity;
pub mod gupri;
pub mod model;
pub mod par;
pub mod partition;
pub mod registry;
pub mod rosetta;
pub mod serial;
pub mod store;
mod syntax;
pub mod views;
pub mod vocab;
pub mod workflow;

pub use error::{Error, Result};
pub use gupri::{Gupri, MintMode};
pub use store::UnitStore;
