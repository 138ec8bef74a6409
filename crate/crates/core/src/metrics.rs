//! Statistics over generated bigraphs.
//!
//! Place-graph side: degree histograms and positive-arity counts, with
//! sample moments and maximum-likelihood fits of binomial, Poisson and
//! geometric models ranked by AIC.
//!
//! Link-graph side: link degree `d_v` (distinct links touched by `v`), the
//! average neighbor difference `delta_v = sum |d_u - d_v| / d_v` over link
//! neighbors `u`, and node assortativity `alpha_v = lambda - delta_v / S`
//! with `S = sum delta_v` and `lambda = (1 + r) / N`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use statrs::function::factorial::{ln_binomial, ln_factorial};
use thiserror::Error;

use crate::model::{Link, LinkGraph, ModelError, NodeId, PlaceGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample {value} outside 0..={trials}")]
    SampleOutOfRange { value: u64, trials: u64 },
    #[error("node {0} has no links; its neighbor difference is undefined")]
    IsolatedNode(NodeId),
    #[error("link graph has no linked nodes")]
    NoLinkedNodes,
    #[error("correlation coefficient r = {0} outside [-1, 1]")]
    BadCoefficient(f64),
    #[error("parameter count k must be at least 1")]
    NoParameters,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Degree counts over all places (roots and nodes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHistogram {
    pub bins: BTreeMap<usize, usize>,
    pub total_places: usize,
}

impl DegreeHistogram {
    pub fn fractions(&self) -> BTreeMap<usize, f64> {
        let total = self.total_places as f64;
        self.bins
            .iter()
            .map(|(d, c)| (*d, *c as f64 / total))
            .collect()
    }

    pub fn average_degree(&self) -> f64 {
        if self.total_places == 0 {
            return 0.0;
        }
        let sum: usize = self.bins.iter().map(|(d, c)| d * c).sum();
        sum as f64 / self.total_places as f64
    }

    pub fn max_degree(&self) -> usize {
        self.bins.keys().next_back().copied().unwrap_or(0)
    }
}

pub fn degree_distribution(pg: &PlaceGraph) -> DegreeHistogram {
    let mut bins = BTreeMap::new();
    for d in pg.place_degrees() {
        *bins.entry(d).or_insert(0) += 1;
    }
    DegreeHistogram {
        bins,
        total_places: pg.place_count(),
    }
}

/// Bin fractions averaged over several histograms; a bin missing from a
/// histogram counts as zero there.
pub fn mean_fractions(histograms: &[DegreeHistogram]) -> BTreeMap<usize, f64> {
    let mut out: BTreeMap<usize, f64> = BTreeMap::new();
    if histograms.is_empty() {
        return out;
    }
    for h in histograms {
        for (d, f) in h.fractions() {
            *out.entry(d).or_insert(0.0) += f;
        }
    }
    let runs = histograms.len() as f64;
    for f in out.values_mut() {
        *f /= runs;
    }
    out
}

/// Number of nodes (roots excluded) whose control has positive arity.
pub fn positive_arity_count(pg: &PlaceGraph) -> usize {
    pg.control_indices()
        .iter()
        .filter(|k| pg.signature().get(**k).is_some_and(|c| c.arity >= 1))
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMoments {
    pub count: usize,
    pub mean: f64,
    /// Unbiased (n - 1) sample variance.
    pub variance: f64,
    pub sd: f64,
    /// `m3 / m2^1.5` from central moments.
    pub skewness: f64,
    /// Excess kurtosis `m4 / m2^2 - 3`.
    pub kurtosis: f64,
}

pub fn sample_moments(samples: &[f64]) -> Result<SampleMoments, MetricsError> {
    let n = samples.len();
    if n < 2 {
        return Err(MetricsError::TooFewSamples { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let variance = m2 / (nf - 1.0);
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };
    Ok(SampleMoments {
        count: n,
        mean,
        variance,
        sd: variance.sqrt(),
        skewness,
        kurtosis,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FitModel {
    Binomial,
    Poisson,
    Geometric,
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitModel::Binomial => "binomial",
            FitModel::Poisson => "poisson",
            FitModel::Geometric => "geometric",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    pub estimate: f64,
    pub standard_error: f64,
    pub log_likelihood: f64,
    pub aic: f64,
}

impl FitResult {
    fn new(model: FitModel, estimate: f64, standard_error: f64, log_likelihood: f64) -> Self {
        FitResult {
            model,
            estimate,
            standard_error,
            log_likelihood,
            aic: 2.0 - 2.0 * log_likelihood,
        }
    }
}

/// `2k - 2 ln L`.
pub fn aic(log_likelihood: f64, k: usize) -> Result<f64, MetricsError> {
    if k < 1 {
        return Err(MetricsError::NoParameters);
    }
    Ok(2.0 * k as f64 - 2.0 * log_likelihood)
}

/// `x * ln(y)` with `0 * ln(0) = 0`.
fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

fn mean_of(samples: &[u64]) -> Result<f64, MetricsError> {
    if samples.is_empty() {
        return Err(MetricsError::TooFewSamples { needed: 1, got: 0 });
    }
    Ok(samples.iter().map(|x| *x as f64).sum::<f64>() / samples.len() as f64)
}

/// Binomial MLE with known trial count `trials`: `p = mean / trials`.
pub fn fit_binomial(samples: &[u64], trials: u64) -> Result<FitResult, MetricsError> {
    let mean = mean_of(samples)?;
    if let Some(x) = samples.iter().find(|x| **x > trials) {
        return Err(MetricsError::SampleOutOfRange { value: *x, trials });
    }
    let count = samples.len() as f64;
    if trials == 0 {
        return Ok(FitResult::new(FitModel::Binomial, 0.0, 0.0, 0.0));
    }
    let nt = trials as f64;
    let p = mean / nt;
    let se = (p * (1.0 - p) / (nt * count)).sqrt();
    let ll = samples
        .iter()
        .map(|k| {
            let k = *k;
            ln_binomial(trials, k) + xlny(k as f64, p) + xlny((trials - k) as f64, 1.0 - p)
        })
        .sum();
    Ok(FitResult::new(FitModel::Binomial, p, se, ll))
}

/// Poisson MLE: `mu = mean`.
pub fn fit_poisson(samples: &[u64]) -> Result<FitResult, MetricsError> {
    let mu = mean_of(samples)?;
    let count = samples.len() as f64;
    let se = (mu / count).sqrt();
    let ll = samples
        .iter()
        .map(|k| xlny(*k as f64, mu) - mu - ln_factorial(*k))
        .sum();
    Ok(FitResult::new(FitModel::Poisson, mu, se, ll))
}

/// Geometric MLE on the failure-count support {0, 1, 2, ...}:
/// `p = 1 / (1 + mean)`.
pub fn fit_geometric(samples: &[u64]) -> Result<FitResult, MetricsError> {
    let mean = mean_of(samples)?;
    let count = samples.len() as f64;
    let p = 1.0 / (1.0 + mean);
    let se = (p * p * (1.0 - p) / count).sqrt();
    let ll = count * (p.ln() + xlny(mean, 1.0 - p));
    Ok(FitResult::new(FitModel::Geometric, p, se, ll))
}

/// All three fits, in binomial, Poisson, geometric order.
pub fn fit_all(samples: &[u64], trials: u64) -> Result<[FitResult; 3], MetricsError> {
    Ok([
        fit_binomial(samples, trials)?,
        fit_poisson(samples)?,
        fit_geometric(samples)?,
    ])
}

/// Number of distinct links touched by `v`'s connected ports.
pub fn link_degree(lg: &LinkGraph, v: NodeId) -> Result<usize, MetricsError> {
    Ok(lg.links_of(v)?.len())
}

/// Nodes other than `v` sharing at least one link with `v`.
pub fn link_neighbors(lg: &LinkGraph, v: NodeId) -> Result<BTreeSet<NodeId>, MetricsError> {
    let links = lg.links_of(v)?;
    Ok(lg
        .link_map()
        .iter()
        .filter(|(p, l)| p.node != v && links.contains(l))
        .map(|(p, _)| p.node)
        .collect())
}

/// Precomputed link degrees and neighbor sets for a whole link graph.
struct LinkIndex {
    degree: Vec<usize>,
    neighbors: Vec<BTreeSet<NodeId>>,
}

impl LinkIndex {
    fn build(lg: &LinkGraph) -> Self {
        let n = lg.node_count();
        let mut links: Vec<BTreeSet<Link>> = vec![BTreeSet::new(); n];
        for (port, link) in lg.link_map() {
            if let Some(s) = links.get_mut(port.node.0) {
                s.insert(*link);
            }
        }
        let mut neighbors = vec![BTreeSet::new(); n];
        for ports in lg.points_by_link().values() {
            for a in ports {
                for b in ports {
                    if a.node != b.node && a.node.0 < n {
                        neighbors[a.node.0].insert(b.node);
                    }
                }
            }
        }
        LinkIndex {
            degree: links.iter().map(BTreeSet::len).collect(),
            neighbors,
        }
    }

    fn difference(&self, v: NodeId) -> Option<f64> {
        let dv = self.degree[v.0];
        if dv == 0 {
            return None;
        }
        let sum: usize = self.neighbors[v.0]
            .iter()
            .map(|u| self.degree[u.0].abs_diff(dv))
            .sum();
        Some(sum as f64 / dv as f64)
    }
}

/// `delta_v = (1/d_v) * sum over link neighbors u of |d_u - d_v|`.
pub fn avg_neighbor_difference(lg: &LinkGraph, v: NodeId) -> Result<f64, MetricsError> {
    let dv = link_degree(lg, v)?;
    if dv == 0 {
        return Err(MetricsError::IsolatedNode(v));
    }
    let sum: usize = link_neighbors(lg, v)?
        .into_iter()
        .map(|u| link_degree(lg, u).map(|du| du.abs_diff(dv)))
        .sum::<Result<usize, _>>()?;
    Ok(sum as f64 / dv as f64)
}

/// `lambda = (1 + r) / N`.
pub fn scaling_factor(r: f64, nodes: usize) -> f64 {
    (1.0 + r) / nodes as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeDifference {
    pub node: NodeId,
    pub arity: usize,
    pub connected_ports: usize,
    pub link_degree: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeScore {
    pub node: NodeId,
    pub arity: usize,
    pub connected_ports: usize,
    pub link_degree: usize,
    pub delta: f64,
    pub scaled_delta: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassFractions {
    /// alpha in (mu, mu + 3 sigma].
    pub slightly_assortative: f64,
    /// alpha in [mu - 3 sigma, mu].
    pub slightly_disassortative: f64,
    /// alpha outside [mu - 3 sigma, mu + 3 sigma].
    pub strong_outlier: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssortativityReport {
    pub per_node: Vec<NodeScore>,
    pub r: f64,
    pub lambda: f64,
    /// Sum of the unscaled differences.
    pub difference_sum: f64,
    pub mean_alpha: f64,
    /// Population standard deviation of alpha.
    pub sd_alpha: f64,
    pub classes: ClassFractions,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Assortativity {
    Scored(AssortativityReport),
    /// Every linked node has delta = 0, so the scaling is undefined.
    Degenerate(Vec<NodeDifference>),
}

impl Assortativity {
    pub fn scored(&self) -> Option<&AssortativityReport> {
        match self {
            Assortativity::Scored(r) => Some(r),
            Assortativity::Degenerate(_) => None,
        }
    }
}

/// Per-node differences for every node with at least one link.
pub fn neighbor_differences(lg: &LinkGraph) -> Result<Vec<NodeDifference>, MetricsError> {
    let index = LinkIndex::build(lg);
    let mut out = Vec::new();
    for v in lg.node_ids() {
        if let Some(delta) = index.difference(v) {
            out.push(NodeDifference {
                node: v,
                arity: lg.arity(v)?,
                connected_ports: lg.connected_port_count(v)?,
                link_degree: index.degree[v.0],
                delta,
            });
        }
    }
    Ok(out)
}

/// Node assortativity for an assumed coefficient `r`. Isolated nodes are
/// skipped, so `N` counts linked nodes only.
pub fn node_assortativity(lg: &LinkGraph, r: f64) -> Result<Assortativity, MetricsError> {
    if !(-1.0..=1.0).contains(&r) {
        return Err(MetricsError::BadCoefficient(r));
    }
    let diffs = neighbor_differences(lg)?;
    if diffs.is_empty() {
        return Err(MetricsError::NoLinkedNodes);
    }
    let sum: f64 = diffs.iter().map(|d| d.delta).sum();
    if sum == 0.0 {
        return Ok(Assortativity::Degenerate(diffs));
    }
    let n = diffs.len();
    let lambda = scaling_factor(r, n);
    let per_node: Vec<NodeScore> = diffs
        .iter()
        .map(|d| {
            let scaled = d.delta / sum;
            NodeScore {
                node: d.node,
                arity: d.arity,
                connected_ports: d.connected_ports,
                link_degree: d.link_degree,
                delta: d.delta,
                scaled_delta: scaled,
                alpha: lambda - scaled,
            }
        })
        .collect();

    let nf = n as f64;
    let mean = per_node.iter().map(|s| s.alpha).sum::<f64>() / nf;
    let sd = (per_node
        .iter()
        .map(|s| (s.alpha - mean).powi(2))
        .sum::<f64>()
        / nf)
        .sqrt();
    let (mut up, mut down, mut out) = (0usize, 0usize, 0usize);
    for s in &per_node {
        let a = s.alpha;
        if a > mean && a <= mean + 3.0 * sd {
            up += 1;
        } else if a <= mean && a >= mean - 3.0 * sd {
            down += 1;
        } else {
            out += 1;
        }
    }
    Ok(Assortativity::Scored(AssortativityReport {
        per_node,
        r,
        lambda,
        difference_sum: sum,
        mean_alpha: mean,
        sd_alpha: sd,
        classes: ClassFractions {
            slightly_assortative: up as f64 / nf,
            slightly_disassortative: down as f64 / nf,
            strong_outlier: out as f64 / nf,
        },
    }))
}

/// Ranks starting at 1, ties sharing their average rank.
fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|a, b| xs[*a].total_cmp(&xs[*b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for k in &order[i..=j] {
            ranks[*k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation; `None` for mismatched lengths, fewer than
/// two points, or a constant input.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Spearman correlation of endpoint arities over two-point links, each link
/// counted in both orientations.
pub fn endpoint_arity_correlation(lg: &LinkGraph) -> Result<Option<f64>, MetricsError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for ports in lg.points_by_link().values() {
        if let [a, b] = ports.as_slice() {
            let (x, y) = (lg.arity(a.node)? as f64, lg.arity(b.node)? as f64);
            xs.extend([x, y]);
            ys.extend([y, x]);
        }
    }
    Ok(spearman(&xs, &ys))
}
