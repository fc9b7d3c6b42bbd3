//! Command-line surface over `cvrisk-core`: price-table ingestion and
//! the four report commands (analyze, frontier, riskcurve, density).

pub mod error;
pub mod ingest;
pub mod report;

pub use error::CliError;
