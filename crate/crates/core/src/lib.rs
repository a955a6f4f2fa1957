pub mod bump;
pub mod calculus;
pub mod constants;
pub mod error;
pub mod exact;
pub mod extremizer;
pub mod jet;
pub mod potentials;
pub mod profile;
pub mod quadrature;
pub mod report;
pub mod symbolic;

pub use error::{Error, Result};
pub use exact::ExactReal;
pub use extremizer::ExtremizerFamily;
pub use profile::{RadialProfile, Variable};
pub use report::ExperimentReport;
