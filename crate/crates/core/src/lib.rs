//! Exact q-series algebra for quasi-modular forms, polarized Hodge
//! structures on period matrices, and the mirror-quintic period pipeline.

pub mod eisenstein;
pub mod elliptic;
pub mod error;
pub mod exact;
pub mod group;
pub mod hodge;
pub mod mirror;
pub mod numeric;
pub mod paths;
pub mod rational;
pub mod report;
pub mod series;
pub mod siegel;

pub use error::{Error, Result};
pub use rational::Rational;
pub use series::{ComplexValue, QSeries};
