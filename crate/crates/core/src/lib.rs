//! Two qubits driven by classical static noise.
//!
//! Averaged density matrices under common (ccm) and distinct (dcm) coupling
//! of the two qubits to the noise, their decoherence, purity and concurrence,
//! and the tooling around them: time scans, sudden-death detection, a
//! configuration format and CSV / SVG output.

pub mod config;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod model;
pub mod noise;
pub mod output;
pub mod quadrature;
pub mod reconcile;
pub mod run;
pub mod scan;

pub use config::{parse_config, RunConfig};
pub use error::{Error, Result};
pub use run::run;
