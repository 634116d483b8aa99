//! Workbench for Laakso and diamond graphs: recursive construction with
//! exact integer metrics, two exact low-distortion embeddings (support
//! sets realizing the summing-basis construction, and rational interval
//! sets realizing the L1 construction), negative-type/hypermetric
//! certificate verification and search, and exact minimum-L1-distortion
//! computation over the cut cone.
//!
//! All arithmetic that feeds a verified bound is exact (integers and
//! rationals); no tolerance knobs exist anywhere.

pub mod cert;
pub mod cutcone;
pub mod embed;
pub mod error;
pub mod graph;
pub mod manifest;
pub mod report;

pub use error::{Error, Result};
