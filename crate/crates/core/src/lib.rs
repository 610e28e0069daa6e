//! Reed-Muller codes decoded by successive cancellation with a
//! bit-flipping tree search that reaches maximum-likelihood performance.

// `!(a < b)` is deliberate throughout: NaN must take the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod code;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod sc;
pub mod search;

pub use channel::{LlrDomain, LlrVector};
pub use code::CodeSpec;
pub use error::{Error, Result};
pub use sc::{FlipSet, LlrMode, PmMode, ScDecoder, ScOutput};
pub use search::{DecodeResult, SearchConfig, Strategy, TreeSearchDecoder};
pub use harness::{DecoderKind, SimConfig, SimResult};
