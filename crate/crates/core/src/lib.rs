//! 5G NR polar codes with a sequence-repetition node list decoder.
//!
//! The crate covers code construction and rate matching, reference SC and
//! SCL decoders, node analysis and decode scheduling, the SR-List decoder,
//! rank-order path selection, a behavioral cycle model and a Monte-Carlo
//! FER harness.

pub mod construction;
pub mod error;
pub mod exec;
pub mod kernel;
pub mod latency;
pub mod nodes;
pub mod params;
pub mod sorter;
pub mod sim;
pub mod sr;

pub use construction::{BitRole, BitRoles, Channel, CodeConfig, CrcKind, RateMatching};
pub use error::{Error, Result};
pub use exec::Execution;
pub use kernel::Arithmetic;
pub use params::{ArchParams, DecoderParams, ForkLimits, NodeSet};
pub use sr::{decode, DecodeResult, SrListDecoder};
