//! Random place-graph generation with preferential attachment.
//!
//! Roots are created first. Every subsequent node picks its parent by a
//! uniform draw from a reference list in which each place appears once per
//! child acquired, plus once for itself. That realizes attachment
//! probability proportional to (children + 1) without computing weights.

use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use thiserror::Error;

use crate::model::{Place, PlaceGraph, Signature};
use crate::rng::{rng_from_seed, GenRng};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlaceGenError {
    #[error("root count t must be at least 1")]
    NoRoots,
    #[error("n < t: place count {places} is smaller than root count {roots}")]
    TooFewPlaces { roots: usize, places: usize },
    #[error("signature has no controls")]
    EmptySignature,
    #[error("control weights: {0}")]
    BadWeights(String),
    #[error("reference list is empty")]
    EmptyReferenceList,
}

#[derive(Debug, Clone)]
pub struct PlaceGenParams {
    /// Number of roots `t`.
    pub roots: usize,
    /// Total number of places `n` (roots plus nodes).
    pub places: usize,
    pub signature: Arc<Signature>,
    /// Optional per-control selection weights. Uniform when `None`.
    pub control_weights: Option<Vec<f64>>,
    pub seed: u64,
}

impl PlaceGenParams {
    pub fn new(roots: usize, places: usize, signature: Arc<Signature>, seed: u64) -> Self {
        PlaceGenParams {
            roots,
            places,
            signature,
            control_weights: None,
            seed,
        }
    }

    pub fn node_count(&self) -> usize {
        self.places.saturating_sub(self.roots)
    }

    pub fn check(&self) -> Result<(), PlaceGenError> {
        if self.roots < 1 {
            return Err(PlaceGenError::NoRoots);
        }
        if self.places < self.roots {
            return Err(PlaceGenError::TooFewPlaces {
                roots: self.roots,
                places: self.places,
            });
        }
        if self.signature.is_empty() {
            return Err(PlaceGenError::EmptySignature);
        }
        if let Some(w) = &self.control_weights {
            if w.len() != self.signature.len() {
                return Err(PlaceGenError::BadWeights(format!(
                    "{} weights for {} controls",
                    w.len(),
                    self.signature.len()
                )));
            }
        }
        Ok(())
    }
}

/// Multiset of places; a place's multiplicity is its selection weight.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferenceList {
    entries: Vec<Place>,
}

impl ReferenceList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<Place>) -> Self {
        ReferenceList { entries }
    }

    pub fn push(&mut self, place: Place) {
        self.entries.push(place);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Place] {
        &self.entries
    }

    pub fn multiplicity(&self, place: Place) -> usize {
        self.entries.iter().filter(|p| **p == place).count()
    }
}

/// Uniform draw over the list entries.
pub fn preferential_pick<R: Rng + ?Sized>(
    list: &ReferenceList,
    rng: &mut R,
) -> Result<Place, PlaceGenError> {
    if list.is_empty() {
        return Err(PlaceGenError::EmptyReferenceList);
    }
    Ok(list.entries[rng.random_range(0..list.entries.len())])
}

enum ControlPicker {
    Uniform(usize),
    Weighted(WeightedIndex<f64>),
}

impl ControlPicker {
    fn new(params: &PlaceGenParams) -> Result<Self, PlaceGenError> {
        match &params.control_weights {
            None => Ok(ControlPicker::Uniform(params.signature.len())),
            Some(w) => WeightedIndex::new(w)
                .map(ControlPicker::Weighted)
                .map_err(|e| PlaceGenError::BadWeights(e.to_string())),
        }
    }

    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self {
            ControlPicker::Uniform(n) => rng.random_range(0..*n),
            ControlPicker::Weighted(w) => w.sample(rng),
        }
    }
}

/// Generates a place graph from `params.seed`.
pub fn generate_place_graph(params: &PlaceGenParams) -> Result<PlaceGraph, PlaceGenError> {
    let mut rng = rng_from_seed(params.seed);
    generate_place_graph_with(params, &mut rng)
}

/// Generates a place graph drawing from `rng`; `params.seed` is ignored.
pub fn generate_place_graph_with(
    params: &PlaceGenParams,
    rng: &mut GenRng,
) -> Result<PlaceGraph, PlaceGenError> {
    params.check()?;
    let picker = ControlPicker::new(params)?;

    let mut graph = PlaceGraph::new(params.signature.clone(), params.roots);
    let mut list = ReferenceList::new();
    for r in 0..params.roots {
        list.push(Place::Root(r));
    }

    for i in params.roots..params.places {
        let parent = preferential_pick(&list, rng)?;
        let control = picker.pick(rng);
        let v = graph.add_node(control, parent);
        list.push(Place::Node(v));
        // The parent gains a reference from the second node-insertion step
        // on (counting i from 0 over all places, as roots do).
        if i > 1 {
            list.push(parent);
        }
    }
    Ok(graph)
}
