//! Random bigraph generation and analysis.
//!
//! * [`placegen`] builds place graphs by preferential attachment.
//! * [`linkgen`] wires link graphs, either as disjoint port pairs ([`linkgen::mppl`])
//!   or by degree-correlated saturation ([`linkgen::mdc`]).
//! * [`metrics`] computes degree histograms, positive-arity statistics with
//!   distribution fits, and per-node assortativity.
//! * [`io`] reads and writes bigraph documents, DOT, and CSV reports.

pub mod io;
pub mod linkgen;
pub mod metrics;
pub mod model;
pub mod placegen;
pub mod rng;

pub use model::{
    validate, Bigraph, Control, EdgeId, Link, LinkGraph, ModelError, NameId, NodeId, Place,
    PlaceGraph, Port, Rule, Signature, ValidationReport, Violation,
};
