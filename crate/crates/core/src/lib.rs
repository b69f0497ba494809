//! Techno-economic evaluation of network access technologies.
//!
//! An access is described as a chain of elements (or several chains in
//! parallel). The engine reduces it to one characterization vector,
//! sizes the redundancy needed to satisfy a requirements profile, and
//! scores it with two figures of merit: F1 (weighted normalized
//! performance) and F2 (F1 per unit of cost).
//!
//! ```
//! use utem_core::finance::npv;
//!
//! let arpu = [100.0, 100.0];
//! let capex = [150.0, 0.0];
//! let opex = [0.0, 0.0];
//! let v = npv(&arpu, &capex, &opex, 0.0).unwrap();
//! assert_eq!(v, 50.0);
//! ```

pub mod characterization;
pub mod engine;
pub mod error;
pub mod finance;
pub mod forecast;
pub mod io;
pub mod merit;
pub mod model;
pub mod redundancy;

/// Engine version reported by front-ends.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use engine::{compare_scenarios, evaluate, evaluate_vector, CompareReport};
pub use error::{EngineError, ParseError};
pub use model::*;
