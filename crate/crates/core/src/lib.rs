//! Minimum-weight routing under the channel discontinuity constraint (CDC) in
//! multi-channel wireless networks.
//!
//! A CDC path assigns a channel to every link it uses such that no two
//! consecutive links share a channel. The crate finds minimum-weight CDC paths
//! by expanding every relay node into a matching gadget and searching for a
//! minimum-weight alternating path, runs the same search as a simulated
//! message-passing protocol, and builds sparse Yao-style spanners that keep
//! CDC path costs within a constant factor.
//!
//! * [`network`] and [`format`]: the geometric multi-channel network model and
//!   its text format.
//! * [`expand`]: node expansion and path contraction.
//! * [`search`]: the centralized alternating-path search and its dual
//!   certificate.
//! * [`dist`]: the message-passing simulation and message accounting.
//! * [`spanner`]: sector spanners, link replacement and untangling.
//! * [`oracle`] and [`experiment`]: brute-force solvers and the experiment
//!   harness.

pub mod channels;
pub mod error;
pub mod experiment;
pub mod dist;
pub mod expand;
pub mod format;
pub mod network;
pub mod oracle;
pub mod path;
pub mod search;
pub mod spanner;

pub use channels::{Channel, ChannelSet};
pub use network::{Network, Node, NodeId, Weight, WeightMode};
pub use path::{CdcPath, Hop};
pub use search::{shortest_cdc, SearchOptions, SearchOutcome};
