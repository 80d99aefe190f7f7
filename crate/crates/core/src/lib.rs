//! Citation-network analysis of a corpus of legal codes: extraction,
//! structural metrics, rich-club detection, community partitioning and
//! comparison against random-graph baselines.

pub mod communities;
pub mod config;
pub mod extract;
pub mod fixture;
pub mod graph;
pub mod metrics;
pub mod null_models;
pub mod pipeline;
pub mod report;

pub use graph::{DiGraph, GraphError, NodeId, NodeLabel, UGraph};
