pub mod error;
pub mod exec;
pub mod ladder;
pub mod poly;
pub mod quadrature;
pub mod report;
pub mod serde_exact;
pub mod superintegrable;
pub mod susy;
pub mod wavefunction;

pub use error::{Error, Result, VerificationFailure, VerificationReport};
pub use exec::Execution;
