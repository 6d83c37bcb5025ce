//! Embedding chain-transitive zero-dimensional systems, given as graph
//! coverings, into systems with a dense uniformly chaotic invariant set.
//!
//! Small levels are built explicitly ([`embed`]); deep levels are handled
//! arithmetically through addresses ([`address::Tower`]).

pub mod address;
pub mod covering;
pub mod embed;
pub mod error;
pub mod fault;
pub mod generators;
pub mod graph;
pub mod provider;
pub mod verify;

pub use address::{Address, AddressKind, PathId, ScheduleMode, SchedulePair, ThreadPrefix, Tower};
pub use covering::{compose, validate_covering, CoverError, CoveringReport, CoveringSequence, GraphHom, HomFlags};
pub use embed::{build_embedding, build_embedding_with, verify_construction, verify_outside_bidirectional, EmbedConfig, Embedding};
pub use error::{Error, Result};
pub use fault::Fault;
pub use generators::CyclicOdometer;
pub use graph::{DirectedGraph, GraphError, VertexId, Walk};
pub use provider::{ExplicitProvider, LevelProvider};
pub use verify::{Claim, Verdict, WitnessReport};
