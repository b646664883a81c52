//! Library side of the `u35` command: cache handling, verification targets
//! and run manifests.

pub mod cache;
pub mod report;
pub mod targets;

pub use cache::{CacheFile, CacheProblem, CacheStatus};
pub use report::{ManifestBuilder, RunManifest, SCHEMA};
pub use targets::Target;
