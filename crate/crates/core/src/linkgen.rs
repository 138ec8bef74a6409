//! Link-graph wiring strategies.
//!
//! Both strategies take an unlinked (or partially linked) [`LinkGraph`]
//! skeleton plus a pool of candidate nodes, all of positive arity, and
//! return a new link graph with links added.
//!
//! * [`mppl`] links `floor(p*m/2)` disjoint node pairs on port 0, each
//!   through a fresh edge or outer name.
//! * [`mdc`] repeatedly samples four nodes with free ports and joins them
//!   pairwise by rank, saturating ports until fewer than four candidates
//!   remain.

use std::fmt;

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use crate::model::{Link, LinkGraph, ModelError, NodeId, Port};
use crate::rng::{rng_from_seed, GenRng};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkGenError {
    #[error("link fraction p = {0} outside [0, 1]")]
    BadFraction(f64),
    #[error(
        "link kind weights must be finite, non-negative and not both zero (p_o = {0}, p_e = {1})"
    )]
    BadWeights(f64, f64),
    #[error("probability p is too small or too few nodes for creating links (p = {p}, m = {m})")]
    TooFewLinks { p: f64, m: usize },
    #[error("node {0} has arity 0 and cannot be linked")]
    ZeroArity(NodeId),
    #[error("node {0} appears twice in the pool")]
    DuplicateNode(NodeId),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `floor(p*m/2)`, the number of disjoint pairs linked by [`mppl`].
pub fn max_pairwise_links(p: f64, m: usize) -> usize {
    // p*m can land just below an integer (p = 2/m); absorb the rounding.
    (p * m as f64 / 2.0 + 1e-9).floor().max(0.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    OuterName,
    Edge,
}

fn check_weights(p_o: f64, p_e: f64) -> Result<(), LinkGenError> {
    let ok = p_o.is_finite() && p_e.is_finite() && p_o >= 0.0 && p_e >= 0.0 && p_o + p_e > 0.0;
    if ok {
        Ok(())
    } else {
        Err(LinkGenError::BadWeights(p_o, p_e))
    }
}

/// Outer name with probability `p_o / (p_o + p_e)`, edge otherwise.
pub fn weighted_link_kind<R: Rng + ?Sized>(
    p_o: f64,
    p_e: f64,
    rng: &mut R,
) -> Result<LinkKind, LinkGenError> {
    check_weights(p_o, p_e)?;
    let u: f64 = rng.random();
    Ok(if u * (p_o + p_e) < p_o {
        LinkKind::OuterName
    } else {
        LinkKind::Edge
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpplParams {
    /// Fraction of the pool to link.
    pub p: f64,
    /// Outer-name weight.
    pub p_o: f64,
    /// Edge weight.
    pub p_e: f64,
    pub seed: u64,
}

fn check_pool(lg: &LinkGraph, pool: &[NodeId]) -> Result<(), LinkGenError> {
    let mut seen = vec![false; lg.node_count()];
    for v in pool {
        if lg.arity(*v)? == 0 {
            return Err(LinkGenError::ZeroArity(*v));
        }
        if std::mem::replace(&mut seen[v.0], true) {
            return Err(LinkGenError::DuplicateNode(*v));
        }
    }
    Ok(())
}

/// Nodes of `lg` whose control has arity at least one.
pub fn positive_arity_nodes(lg: &LinkGraph) -> Vec<NodeId> {
    lg.node_ids()
        .filter(|v| lg.arity(*v).map(|a| a > 0).unwrap_or(false))
        .collect()
}

/// Minimal pairwise port linkage with a generator seeded from `params.seed`.
pub fn mppl(
    skeleton: &LinkGraph,
    pool: &[NodeId],
    params: &MpplParams,
) -> Result<LinkGraph, LinkGenError> {
    mppl_with(skeleton, pool, params, &mut rng_from_seed(params.seed))
}

pub fn mppl_with(
    skeleton: &LinkGraph,
    pool: &[NodeId],
    params: &MpplParams,
    rng: &mut GenRng,
) -> Result<LinkGraph, LinkGenError> {
    if !(0.0..=1.0).contains(&params.p) {
        return Err(LinkGenError::BadFraction(params.p));
    }
    check_weights(params.p_o, params.p_e)?;
    check_pool(skeleton, pool)?;

    let links = max_pairwise_links(params.p, pool.len());
    if links < 1 {
        return Err(LinkGenError::TooFewLinks {
            p: params.p,
            m: pool.len(),
        });
    }

    let mut lg = skeleton.clone();
    let mut available = pool.to_vec();
    for _ in 0..links {
        let i = rng.random_range(0..available.len());
        let j = loop {
            let j = rng.random_range(0..available.len());
            if j != i {
                break j;
            }
        };
        let link = match weighted_link_kind(params.p_o, params.p_e, rng)? {
            LinkKind::OuterName => Link::Outer(lg.add_outer_name()),
            LinkKind::Edge => Link::Edge(lg.add_edge()),
        };
        lg.connect(Port::new(available[i], 0), link);
        lg.connect(Port::new(available[j], 0), link);
        // Remove the higher index first so the lower one stays valid.
        available.swap_remove(i.max(j));
        available.swap_remove(i.min(j));
    }
    Ok(lg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mixing {
    Assortative,
    Disassortative,
}

impl fmt::Display for Mixing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mixing::Assortative => "assortative",
            Mixing::Disassortative => "disassortative",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MdcParams {
    pub mode: Mixing,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MdcOutcome {
    pub graph: LinkGraph,
    pub iterations: usize,
    /// Set when the pool started with fewer than four nodes with free ports.
    pub diagnostic: Option<String>,
}

/// Maximal degree correlation wiring with a generator seeded from
/// `params.seed`.
pub fn mdc(
    skeleton: &LinkGraph,
    pool: &[NodeId],
    params: &MdcParams,
) -> Result<MdcOutcome, LinkGenError> {
    mdc_with(skeleton, pool, params.mode, &mut rng_from_seed(params.seed))
}

pub fn mdc_with(
    skeleton: &LinkGraph,
    pool: &[NodeId],
    mode: Mixing,
    rng: &mut GenRng,
) -> Result<MdcOutcome, LinkGenError> {
    check_pool(skeleton, pool)?;
    let mut lg = skeleton.clone();
    let mut queue: Vec<NodeId> = Vec::with_capacity(pool.len());
    for v in pool {
        if lg.free_port_count(*v)? > 0 {
            queue.push(*v);
        }
    }
    if queue.len() < 4 {
        let diagnostic = format!(
            "only {} node(s) with free ports; at least 4 are needed, no links created",
            queue.len()
        );
        return Ok(MdcOutcome {
            graph: lg,
            iterations: 0,
            diagnostic: Some(diagnostic),
        });
    }

    let mut iterations = 0;
    while queue.len() >= 4 {
        iterations += 1;
        let picked = index::sample(rng, queue.len(), 4);
        let mut ranked: Vec<NodeId> = picked.iter().map(|i| queue[i]).collect();
        // Highest rank first: arity, then free ports, then lower id.
        let mut keys = Vec::with_capacity(4);
        for v in &ranked {
            keys.push((*v, lg.arity(*v)?, lg.free_port_count(*v)?));
        }
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(b.2.cmp(&a.2)).then(a.0.cmp(&b.0)));
        ranked.clear();
        ranked.extend(keys.iter().map(|k| k.0));

        let pairs = match mode {
            Mixing::Assortative => [(ranked[0], ranked[1]), (ranked[2], ranked[3])],
            Mixing::Disassortative => [(ranked[0], ranked[3]), (ranked[1], ranked[2])],
        };
        for (a, b) in pairs {
            wire(&mut lg, a, b)?;
        }

        // Only the four wired nodes can have become saturated. Remove them
        // from the highest position down so swap_remove keeps the rest valid.
        let mut positions = picked.into_vec();
        positions.sort_unstable_by(|a, b| b.cmp(a));
        for i in positions {
            if lg.free_port_count(queue[i])? == 0 {
                queue.swap_remove(i);
            }
        }
    }
    Ok(MdcOutcome {
        graph: lg,
        iterations,
        diagnostic: None,
    })
}

fn wire(lg: &mut LinkGraph, a: NodeId, b: NodeId) -> Result<(), LinkGenError> {
    let pa = lg.lowest_free_port(a)?;
    let pb = lg.lowest_free_port(b)?;
    let (Some(pa), Some(pb)) = (pa, pb) else {
        unreachable!("queued nodes always have a free port");
    };
    let e = Link::Edge(lg.add_edge());
    lg.connect(pa, e);
    lg.connect(pb, e);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, Bigraph, Control, Place, PlaceGraph, Signature};
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn flat(arities: &[usize]) -> (PlaceGraph, LinkGraph) {
        let mut labels: Vec<usize> = arities.to_vec();
        labels.sort_unstable();
        labels.dedup();
        let sig = Signature::new(
            labels
                .iter()
                .map(|a| Control::new(format!("A{a}"), *a))
                .collect(),
        )
        .unwrap();
        let controls = arities
            .iter()
            .map(|a| labels.iter().position(|x| x == a).unwrap())
            .collect::<Vec<_>>();
        let n = controls.len();
        let pg = PlaceGraph::from_parts(Arc::new(sig), 1, controls, vec![Place::Root(0); n]);
        let lg = LinkGraph::over(&pg);
        (pg, lg)
    }

    #[test]
    fn pairwise_link_counts() {
        assert_eq!(max_pairwise_links(1.0, 2), 1);
        assert_eq!(max_pairwise_links(0.5, 7), 1);
        assert_eq!(max_pairwise_links(1.0, 10), 5);
        assert_eq!(max_pairwise_links(0.6, 10), 3);
        assert_eq!(max_pairwise_links(0.0, 10), 0);
        for m in 2..5000 {
            assert_eq!(max_pairwise_links(2.0 / m as f64, m), 1, "m = {m}");
        }
    }

    #[test]
    fn degenerate_kind_weights() {
        let mut rng = rng_from_seed(3);
        for _ in 0..1000 {
            assert_eq!(
                weighted_link_kind(1.0, 0.0, &mut rng).unwrap(),
                LinkKind::OuterName
            );
            assert_eq!(
                weighted_link_kind(0.0, 1.0, &mut rng).unwrap(),
                LinkKind::Edge
            );
        }
        assert!(weighted_link_kind(0.0, 0.0, &mut rng).is_err());
        assert!(weighted_link_kind(-1.0, 2.0, &mut rng).is_err());
        assert!(weighted_link_kind(f64::NAN, 1.0, &mut rng).is_err());
    }

    #[test]
    fn kind_weights_are_normalized() {
        let mut rng = rng_from_seed(17);
        let draws = 100_000;
        let outer = (0..draws)
            .filter(|_| weighted_link_kind(0.3, 0.8, &mut rng).unwrap() == LinkKind::OuterName)
            .count();
        let freq = outer as f64 / draws as f64;
        assert!((freq - 0.3 / 1.1).abs() < 0.01, "{freq}");
    }

    #[test]
    fn two_nodes_one_edge() {
        let (pg, lg) = flat(&[1, 3]);
        let pool = positive_arity_nodes(&lg);
        let params = MpplParams {
            p: 1.0,
            p_o: 0.0,
            p_e: 1.0,
            seed: 0,
        };
        let out = mppl(&lg, &pool, &params).unwrap();
        assert_eq!(out.edge_count(), 1);
        assert!(out.outer_names().is_empty());
        assert_eq!(
            out.link_of(Port::new(NodeId(0), 0)),
            Some(Link::Edge(crate::EdgeId(0)))
        );
        assert_eq!(
            out.link_of(Port::new(NodeId(1), 0)),
            Some(Link::Edge(crate::EdgeId(0)))
        );
        assert_eq!(out.link_map().len(), 2);
        assert!(validate(&Bigraph::new(pg, out)).is_empty());
    }

    #[test]
    fn ten_nodes_full_pairing() {
        let (pg, lg) = flat(&[1, 2, 3, 1, 2, 3, 1, 2, 3, 4]);
        let pool = positive_arity_nodes(&lg);
        for seed in 0..50 {
            let params = MpplParams {
                p: 1.0,
                p_o: 0.5,
                p_e: 0.5,
                seed,
            };
            let out = mppl(&lg, &pool, &params).unwrap();
            assert_eq!(out.edge_count() + out.outer_names().len(), 5);
            for v in out.node_ids() {
                assert_eq!(
                    out.connected_ports(v).unwrap(),
                    BTreeSet::from([Port::new(v, 0)])
                );
            }
            assert!(validate(&Bigraph::new(pg.clone(), out)).is_empty());
        }
    }

    #[test]
    fn mppl_errors() {
        let (_, lg) = flat(&[0, 1, 1]);
        let params = MpplParams {
            p: 1.0,
            p_o: 1.0,
            p_e: 1.0,
            seed: 0,
        };
        assert_eq!(
            mppl(&lg, &[NodeId(0), NodeId(1)], &params),
            Err(LinkGenError::ZeroArity(NodeId(0)))
        );
        assert_eq!(
            mppl(&lg, &[NodeId(1)], &params),
            Err(LinkGenError::TooFewLinks { p: 1.0, m: 1 })
        );
        assert_eq!(
            mppl(&lg, &[NodeId(1), NodeId(1)], &params),
            Err(LinkGenError::DuplicateNode(NodeId(1)))
        );
        let bad = MpplParams { p: 1.5, ..params };
        assert_eq!(
            mppl(&lg, &[NodeId(1), NodeId(2)], &bad),
            Err(LinkGenError::BadFraction(1.5))
        );
        let bad = MpplParams {
            p_o: 0.0,
            p_e: 0.0,
            ..params
        };
        assert!(matches!(
            mppl(&lg, &[NodeId(1), NodeId(2)], &bad),
            Err(LinkGenError::BadWeights(..))
        ));
    }

    #[test]
    fn mdc_needs_four_nodes() {
        let (_, lg) = flat(&[3, 3, 3]);
        let pool = positive_arity_nodes(&lg);
        let out = mdc(
            &lg,
            &pool,
            &MdcParams {
                mode: Mixing::Assortative,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(out.graph.edge_count(), 0);
        assert_eq!(out.iterations, 0);
        assert!(out.diagnostic.is_some());
    }

    fn partners(lg: &LinkGraph) -> BTreeSet<(usize, usize)> {
        lg.points_by_link()
            .values()
            .map(|ports| {
                let a = ports[0].node.0;
                let b = ports[1].node.0;
                (a.min(b), a.max(b))
            })
            .collect()
    }

    #[test]
    fn mdc_first_iteration_wiring() {
        // Arities 4, 3, 2, 1 on nodes 0..4.
        let (_, lg) = flat(&[4, 3, 2, 1]);
        let pool = positive_arity_nodes(&lg);
        let mut rng = rng_from_seed(0);
        let assort = mdc_with(&lg, &pool, Mixing::Assortative, &mut rng).unwrap();
        // Node 3 saturates after one iteration, leaving three candidates.
        assert_eq!(assort.iterations, 1);
        assert_eq!(partners(&assort.graph), BTreeSet::from([(0, 1), (2, 3)]));

        let dis = mdc_with(&lg, &pool, Mixing::Disassortative, &mut rng).unwrap();
        assert_eq!(dis.iterations, 1);
        assert_eq!(partners(&dis.graph), BTreeSet::from([(0, 3), (1, 2)]));
    }

    #[test]
    fn mdc_uses_lowest_free_ports() {
        let (pg, lg) = flat(&[2, 2, 2, 2]);
        let pool = positive_arity_nodes(&lg);
        let out = mdc(
            &lg,
            &pool,
            &MdcParams {
                mode: Mixing::Assortative,
                seed: 9,
            },
        )
        .unwrap();
        assert_eq!(out.iterations, 2);
        assert_eq!(out.graph.saturation(), 1.0);
        for ports in out.graph.points_by_link().values() {
            assert_eq!(ports.len(), 2);
            assert_ne!(ports[0].node, ports[1].node);
        }
        assert!(validate(&Bigraph::new(pg, out.graph)).is_empty());
    }

    #[test]
    fn mdc_saturates_large_pools() {
        let arities: Vec<usize> = (0..1000).map(|i| 1 + (i * 7919) % 40).collect();
        let (pg, lg) = flat(&arities);
        let pool = positive_arity_nodes(&lg);
        let total: usize = arities.iter().sum();
        for mode in [Mixing::Assortative, Mixing::Disassortative] {
            let out = mdc(&lg, &pool, &MdcParams { mode, seed: 4 }).unwrap();
            assert!(out.graph.saturation() >= 0.95);
            assert!(out.iterations <= total.div_ceil(2));
            assert!(validate(&Bigraph::new(pg.clone(), out.graph)).is_empty());
        }
    }
}
