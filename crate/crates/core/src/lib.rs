//! Exact computation and classification of subsum sets (achievement sets) of
//! null sequences.

pub mod classify;
pub mod cn;
pub mod error;
pub mod greedy;
pub mod interval;
pub mod oracle;
pub mod rational;
pub mod render;
pub mod sequence;
pub mod spec_format;

pub use classify::{classify, classify_spec, Verdict, VerdictKind};
pub use cn::{build_cn, CnResult, DEFAULT_CAP};
pub use error::{Error, Result};
pub use interval::{ClosedInterval, IntervalUnion};
pub use rational::Rational;
pub use sequence::{MergedSpec, SequenceSpec, TailEnclosure, TailKind};
