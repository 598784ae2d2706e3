//! Map-metaphor layout engine for timestamped music comments.
//!
//! Comments are split into time periods ("countries"), each period into
//! topics ("counties"), and every comment becomes one sentiment-colored hex
//! cell. The crate also produces per-song preview tags.

pub mod corpus;
pub mod exec;
pub mod fixture;
pub mod map;
pub mod nlp;
pub mod pipeline;
pub mod segment;
pub mod tags;
pub mod topics;

pub use exec::Execution;
