//! Concrete bigraph data model for ground agents.
//!
//! A [`Bigraph`] pairs a [`PlaceGraph`] (a forest of roots and nodes) with a
//! [`LinkGraph`] (a hypergraph connecting node ports to edges or outer
//! names). Both halves share one node set, indexed densely by [`NodeId`],
//! and one [`Signature`].
//!
//! The types are deliberately permissive: they can represent malformed
//! structures (cycles, out-of-range ports, sites) so that [`validate`] can
//! report on them. Generators in this crate only ever produce values for
//! which [`validate`] returns an empty report.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate control label `{0}`")]
    DuplicateControl(String),
    #[error("control label must not be empty")]
    EmptyLabel,
    #[error("unknown node v{0}")]
    UnknownNode(usize),
    #[error("unknown root r{0}")]
    UnknownRoot(usize),
    #[error("unknown control index {0}")]
    UnknownControl(usize),
}

/// A kind of node together with its port count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub label: String,
    pub arity: usize,
}

impl Control {
    pub fn new(label: impl Into<String>, arity: usize) -> Self {
        Control {
            label: label.into(),
            arity,
        }
    }
}

/// Ordered set of controls with unique labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    controls: Vec<Control>,
}

impl Signature {
    pub fn new(controls: Vec<Control>) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        for c in &controls {
            if c.label.is_empty() {
                return Err(ModelError::EmptyLabel);
            }
            if !seen.insert(c.label.as_str()) {
                return Err(ModelError::DuplicateControl(c.label.clone()));
            }
        }
        Ok(Signature { controls })
    }

    /// Builds a signature of `total` controls of which `round(fraction * total)`
    /// have arity 1 and the rest arity 0. Labels are `C0`, `C1`, ...
    pub fn with_positive_fraction(total: usize, fraction: f64) -> Self {
        let positive = positive_control_count(total, fraction);
        let controls = (0..total)
            .map(|i| Control::new(format!("C{i}"), usize::from(i < positive)))
            .collect();
        Signature { controls }
    }

    /// One control per arity in `lo..=hi`, labelled `A<arity>`. Uniform
    /// control selection then yields node arities uniform on `lo..=hi`.
    pub fn arity_range(lo: usize, hi: usize) -> Self {
        let controls = (lo..=hi)
            .map(|a| Control::new(format!("A{a}"), a))
            .collect();
        Signature { controls }
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn len(&self) -> usize {
        self.controls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.controls.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Control> {
        self.controls.get(index)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.controls.iter().position(|c| c.label == label)
    }

    /// Fraction of controls with arity at least one.
    pub fn positive_arity_fraction(&self) -> f64 {
        if self.controls.is_empty() {
            return 0.0;
        }
        let k = self.controls.iter().filter(|c| c.arity >= 1).count();
        k as f64 / self.controls.len() as f64
    }
}

/// Number of positive-arity controls used to realize `fraction` in a
/// signature of `total` controls.
pub fn positive_control_count(total: usize, fraction: f64) -> usize {
    let k = (fraction.clamp(0.0, 1.0) * total as f64).round() as usize;
    k.min(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NameId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A position in the place graph: either a root (by index) or a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Root(usize),
    Node(NodeId),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Root(i) => write!(f, "r{i}"),
            Place::Node(v) => write!(f, "{v}"),
        }
    }
}

/// Port `index` of `node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub node: NodeId,
    pub index: usize,
}

impl Port {
    pub fn new(node: NodeId, index: usize) -> Self {
        Port { node, index }
    }
}

/// Target of a connected port: a closed edge or an open outer name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Link {
    Edge(EdgeId),
    Outer(NameId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaceGraph {
    signature: Arc<Signature>,
    root_count: usize,
    site_count: usize,
    controls: Vec<usize>,
    parents: Vec<Place>,
}

impl PlaceGraph {
    /// A place graph with `root_count` roots and no nodes.
    pub fn new(signature: Arc<Signature>, root_count: usize) -> Self {
        PlaceGraph {
            signature,
            root_count,
            site_count: 0,
            controls: Vec::new(),
            parents: Vec::new(),
        }
    }

    /// Assembles a place graph from raw parts without checking them.
    pub fn from_parts(
        signature: Arc<Signature>,
        root_count: usize,
        controls: Vec<usize>,
        parents: Vec<Place>,
    ) -> Self {
        assert_eq!(controls.len(), parents.len(), "one parent per node");
        PlaceGraph {
            signature,
            root_count,
            site_count: 0,
            controls,
            parents,
        }
    }

    /// Appends a node and returns its id. The parent is not checked.
    pub fn add_node(&mut self, control: usize, parent: Place) -> NodeId {
        self.controls.push(control);
        self.parents.push(parent);
        NodeId(self.controls.len() - 1)
    }

    pub(crate) fn set_site_count(&mut self, sites: usize) {
        self.site_count = sites;
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn root_count(&self) -> usize {
        self.root_count
    }

    /// Inner face width. Zero for agents.
    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn node_count(&self) -> usize {
        self.controls.len()
    }

    /// Roots plus nodes.
    pub fn place_count(&self) -> usize {
        self.root_count + self.controls.len()
    }

    pub fn node_ids(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.controls.len()).map(NodeId)
    }

    /// All places, roots first.
    pub fn places(&self) -> impl Iterator<Item = Place> + '_ {
        (0..self.root_count)
            .map(Place::Root)
            .chain(self.node_ids().map(Place::Node))
    }

    pub fn control_index(&self, v: NodeId) -> Result<usize, ModelError> {
        self.controls
            .get(v.0)
            .copied()
            .ok_or(ModelError::UnknownNode(v.0))
    }

    pub fn control(&self, v: NodeId) -> Result<&Control, ModelError> {
        let k = self.control_index(v)?;
        self.signature.get(k).ok_or(ModelError::UnknownControl(k))
    }

    pub fn control_indices(&self) -> &[usize] {
        &self.controls
    }

    pub fn parent(&self, v: NodeId) -> Result<Place, ModelError> {
        self.parents
            .get(v.0)
            .copied()
            .ok_or(ModelError::UnknownNode(v.0))
    }

    pub fn parents(&self) -> &[Place] {
        &self.parents
    }

    fn check_place(&self, place: Place) -> Result<(), ModelError> {
        match place {
            Place::Root(i) if i >= self.root_count => Err(ModelError::UnknownRoot(i)),
            Place::Node(v) if v.0 >= self.controls.len() => Err(ModelError::UnknownNode(v.0)),
            _ => Ok(()),
        }
    }

    /// Inverse image of the parent map at `place`.
    pub fn children(&self, place: Place) -> Result<BTreeSet<NodeId>, ModelError> {
        self.check_place(place)?;
        Ok(self
            .parents
            .iter()
            .enumerate()
            .filter(|(_, p)| **p == place)
            .map(|(i, _)| NodeId(i))
            .collect())
    }

    /// Number of children of every place, indexed roots first then nodes.
    pub fn child_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.place_count()];
        for p in &self.parents {
            if let Some(slot) = self.slot(*p) {
                counts[slot] += 1;
            }
        }
        counts
    }

    fn slot(&self, place: Place) -> Option<usize> {
        match place {
            Place::Root(i) if i < self.root_count => Some(i),
            Place::Node(v) if v.0 < self.controls.len() => Some(self.root_count + v.0),
            _ => None,
        }
    }

    /// `|parent(place)| + |children(place)|`: children plus one for nodes.
    pub fn place_degree(&self, place: Place) -> Result<usize, ModelError> {
        let children = self.children(place)?.len();
        Ok(match place {
            Place::Root(_) => children,
            Place::Node(_) => children + 1,
        })
    }

    /// Degrees of all places in one pass, roots first then nodes.
    pub fn place_degrees(&self) -> Vec<usize> {
        let mut degrees = self.child_counts();
        for d in &mut degrees[self.root_count..] {
            *d += 1;
        }
        degrees
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkGraph {
    signature: Arc<Signature>,
    controls: Vec<usize>,
    edge_count: usize,
    outer_names: Vec<String>,
    inner_names: Vec<String>,
    links: BTreeMap<Port, Link>,
    connected: Vec<usize>,
}

impl LinkGraph {
    /// A link graph over the given nodes with no links.
    pub fn unlinked(signature: Arc<Signature>, controls: Vec<usize>) -> Self {
        let connected = vec![0; controls.len()];
        LinkGraph {
            signature,
            controls,
            edge_count: 0,
            outer_names: Vec::new(),
            inner_names: Vec::new(),
            links: BTreeMap::new(),
            connected,
        }
    }

    /// The unlinked link graph sharing `place`'s nodes and controls.
    pub fn over(place: &PlaceGraph) -> Self {
        Self::unlinked(place.signature().clone(), place.control_indices().to_vec())
    }

    pub fn add_edge(&mut self) -> EdgeId {
        self.edge_count += 1;
        EdgeId(self.edge_count - 1)
    }

    /// Adds an outer name labelled `y<id>`.
    pub fn add_outer_name(&mut self) -> NameId {
        let id = NameId(self.outer_names.len());
        self.outer_names.push(format!("y{}", id.0));
        id
    }

    /// Adds an outer name with an explicit label. Uniqueness is not checked.
    pub fn add_named_outer(&mut self, label: impl Into<String>) -> NameId {
        self.outer_names.push(label.into());
        NameId(self.outer_names.len() - 1)
    }

    pub(crate) fn set_inner_names(&mut self, names: Vec<String>) {
        self.inner_names = names;
    }

    /// Connects `port` to `link`, replacing any previous target. Returns the
    /// previous target. Port range is not checked.
    pub fn connect(&mut self, port: Port, link: Link) -> Option<Link> {
        let previous = self.links.insert(port, link);
        if previous.is_none() {
            if let Some(c) = self.connected.get_mut(port.node.0) {
                *c += 1;
            }
        }
        previous
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn node_count(&self) -> usize {
        self.controls.len()
    }

    pub fn node_ids(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.controls.len()).map(NodeId)
    }

    pub fn control_indices(&self) -> &[usize] {
        &self.controls
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn outer_names(&self) -> &[String] {
        &self.outer_names
    }

    /// Inner names. Always empty for agents.
    pub fn inner_names(&self) -> &[String] {
        &self.inner_names
    }

    /// The link map, ordered by port.
    pub fn link_map(&self) -> &BTreeMap<Port, Link> {
        &self.links
    }

    pub fn link_of(&self, port: Port) -> Option<Link> {
        self.links.get(&port).copied()
    }

    fn check_node(&self, v: NodeId) -> Result<(), ModelError> {
        if v.0 < self.controls.len() {
            Ok(())
        } else {
            Err(ModelError::UnknownNode(v.0))
        }
    }

    pub fn arity(&self, v: NodeId) -> Result<usize, ModelError> {
        self.check_node(v)?;
        let k = self.controls[v.0];
        self.signature
            .get(k)
            .map(|c| c.arity)
            .ok_or(ModelError::UnknownControl(k))
    }

    fn node_ports(&self, v: NodeId) -> impl Iterator<Item = (&Port, &Link)> {
        self.links.range(Port::new(v, 0)..=Port::new(v, usize::MAX))
    }

    /// Ports of `v` present in the link map.
    pub fn connected_ports(&self, v: NodeId) -> Result<BTreeSet<Port>, ModelError> {
        self.check_node(v)?;
        Ok(self.node_ports(v).map(|(p, _)| *p).collect())
    }

    pub fn connected_port_count(&self, v: NodeId) -> Result<usize, ModelError> {
        self.check_node(v)?;
        Ok(self.connected[v.0])
    }

    pub fn free_port_count(&self, v: NodeId) -> Result<usize, ModelError> {
        Ok(self.arity(v)?.saturating_sub(self.connected[v.0]))
    }

    /// Lowest-indexed port of `v` below its arity that is not connected.
    pub fn lowest_free_port(&self, v: NodeId) -> Result<Option<Port>, ModelError> {
        let arity = self.arity(v)?;
        let mut next = 0;
        for (p, _) in self.node_ports(v) {
            if p.index != next {
                break;
            }
            next += 1;
        }
        Ok((next < arity).then(|| Port::new(v, next)))
    }

    /// Distinct links touched by `v`'s connected ports.
    pub fn links_of(&self, v: NodeId) -> Result<BTreeSet<Link>, ModelError> {
        self.check_node(v)?;
        Ok(self.node_ports(v).map(|(_, l)| *l).collect())
    }

    /// Inverse of the link map: the ports attached to each link.
    pub fn points_by_link(&self) -> BTreeMap<Link, Vec<Port>> {
        let mut out: BTreeMap<Link, Vec<Port>> = BTreeMap::new();
        for (port, link) in &self.links {
            out.entry(*link).or_default().push(*port);
        }
        out
    }

    /// Number of linked ports over total ports.
    pub fn saturation(&self) -> f64 {
        let total: usize = self
            .controls
            .iter()
            .filter_map(|k| self.signature.get(*k))
            .map(|c| c.arity)
            .sum();
        if total == 0 {
            return 0.0;
        }
        self.links.len() as f64 / total as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bigraph {
    pub place: PlaceGraph,
    pub link: LinkGraph,
}

impl Bigraph {
    pub fn new(place: PlaceGraph, link: LinkGraph) -> Self {
        Bigraph { place, link }
    }

    /// A bigraph with `place` and no links.
    pub fn unlinked(place: PlaceGraph) -> Self {
        let link = LinkGraph::over(&place);
        Bigraph { place, link }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.place.signature()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    PlaceRootIndex,
    PlaceParentUnknown,
    PlaceAcyclic,
    UnknownControl,
    PortIndex,
    UnknownLink,
    IdleLink,
    OuterNameUnique,
    NodeSetMismatch,
    ControlMismatch,
    SignatureMismatch,
    AgentSites,
    AgentInnerNames,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::PlaceRootIndex => "place.root-index",
            Rule::PlaceParentUnknown => "place.parent-unknown",
            Rule::PlaceAcyclic => "place.acyclic",
            Rule::UnknownControl => "node.unknown-control",
            Rule::PortIndex => "link.port-index",
            Rule::UnknownLink => "link.unknown-link",
            Rule::IdleLink => "link.idle",
            Rule::OuterNameUnique => "link.outer-name-unique",
            Rule::NodeSetMismatch => "bigraph.node-set",
            Rule::ControlMismatch => "bigraph.control-map",
            Rule::SignatureMismatch => "bigraph.signature",
            Rule::AgentSites => "agent.sites",
            Rule::AgentInnerNames => "agent.inner-names",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub description: String,
    /// Offending element, rendered with the `r`/`v`/`e`/`y` label scheme.
    pub element: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn contains(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, rule: Rule, element: impl Into<String>, description: impl Into<String>) {
        self.violations.push(Violation {
            rule,
            description: description.into(),
            element: element.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok: no violations");
        }
        for v in &self.violations {
            writeln!(f, "{}\t{}\t{}", v.rule, v.element, v.description)?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of a ground bigraph and lists the
/// violations found. An empty report means the bigraph is a well-formed
/// agent.
pub fn validate(b: &Bigraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    validate_place(&b.place, &mut report);
    validate_link(&b.link, &mut report);

    if b.place.signature() != b.link.signature() {
        report.push(
            Rule::SignatureMismatch,
            "signature",
            "place and link graph use different signatures",
        );
    }
    if b.place.node_count() != b.link.node_count() {
        report.push(
            Rule::NodeSetMismatch,
            "nodes",
            format!(
                "place graph has {} nodes, link graph has {}",
                b.place.node_count(),
                b.link.node_count()
            ),
        );
    }
    for (i, (a, c)) in b
        .place
        .control_indices()
        .iter()
        .zip(b.link.control_indices())
        .enumerate()
    {
        if a != c {
            report.push(
                Rule::ControlMismatch,
                NodeId(i).to_string(),
                format!("control {a} in place graph, {c} in link graph"),
            );
        }
    }
    report
}

fn validate_place(pg: &PlaceGraph, report: &mut ValidationReport) {
    if pg.site_count() > 0 {
        report.push(
            Rule::AgentSites,
            "sites",
            format!("agent must have no sites, found {}", pg.site_count()),
        );
    }
    for (i, k) in pg.control_indices().iter().enumerate() {
        if pg.signature().get(*k).is_none() {
            report.push(
                Rule::UnknownControl,
                NodeId(i).to_string(),
                format!("control index {k} not in signature"),
            );
        }
    }

    let n = pg.node_count();
    let mut dangling = vec![false; n];
    for (i, parent) in pg.parents().iter().enumerate() {
        match *parent {
            Place::Root(r) if r >= pg.root_count() => {
                dangling[i] = true;
                report.push(
                    Rule::PlaceRootIndex,
                    NodeId(i).to_string(),
                    format!("parent root r{r} outside 0..{}", pg.root_count()),
                );
            }
            Place::Node(p) if p.0 >= n => {
                dangling[i] = true;
                report.push(
                    Rule::PlaceParentUnknown,
                    NodeId(i).to_string(),
                    format!("parent {p} does not exist"),
                );
            }
            _ => {}
        }
    }

    // 0 = unvisited, 1 = on current path, 2 = reaches a root (or a dangling
    // parent already reported), 3 = on or below a cycle.
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        let outcome = loop {
            match state[cur] {
                1 => break 3,
                2 | 3 => break state[cur],
                _ => {}
            }
            state[cur] = 1;
            path.push(cur);
            if dangling[cur] {
                break 2;
            }
            match pg.parents()[cur] {
                Place::Root(_) => break 2,
                Place::Node(p) => cur = p.0,
            }
        };
        if outcome == 3 && state[cur] == 1 {
            // `cur` closes a fresh cycle; report it once, at its entry point.
            let pos = path.iter().position(|x| *x == cur).unwrap_or(0);
            let members: Vec<String> = path[pos..].iter().map(|x| NodeId(*x).to_string()).collect();
            report.push(
                Rule::PlaceAcyclic,
                NodeId(cur).to_string(),
                format!("parent map has a cycle: {}", members.join(" -> ")),
            );
        }
        for x in path {
            state[x] = outcome;
        }
    }
}

fn validate_link(lg: &LinkGraph, report: &mut ValidationReport) {
    if !lg.inner_names().is_empty() {
        report.push(
            Rule::AgentInnerNames,
            lg.inner_names().join(","),
            format!(
                "agent must have no inner names, found {}",
                lg.inner_names().len()
            ),
        );
    }
    for (i, k) in lg.control_indices().iter().enumerate() {
        if lg.signature().get(*k).is_none() {
            report.push(
                Rule::UnknownControl,
                NodeId(i).to_string(),
                format!("control index {k} not in signature"),
            );
        }
    }

    let mut used_edges = vec![false; lg.edge_count()];
    let mut used_names = vec![false; lg.outer_names().len()];
    for (port, link) in lg.link_map() {
        let element = format!("({}, {})", port.node, port.index);
        match lg.arity(port.node) {
            Err(ModelError::UnknownNode(_)) => report.push(
                Rule::NodeSetMismatch,
                element.clone(),
                "port belongs to a node outside the link graph",
            ),
            Ok(arity) if port.index >= arity => report.push(
                Rule::PortIndex,
                element.clone(),
                format!("port index {} not below arity {arity}", port.index),
            ),
            _ => {}
        }
        match link {
            Link::Edge(e) => match used_edges.get_mut(e.0) {
                Some(u) => *u = true,
                None => report.push(
                    Rule::UnknownLink,
                    element,
                    format!("edge {e} does not exist"),
                ),
            },
            Link::Outer(y) => match used_names.get_mut(y.0) {
                Some(u) => *u = true,
                None => report.push(
                    Rule::UnknownLink,
                    element,
                    format!("outer name #{} does not exist", y.0),
                ),
            },
        }
    }
    for (e, used) in used_edges.iter().enumerate() {
        if !used {
            report.push(Rule::IdleLink, EdgeId(e).to_string(), "edge has no points");
        }
    }
    for (y, used) in used_names.iter().enumerate() {
        if !used {
            report.push(
                Rule::IdleLink,
                lg.outer_names()[y].clone(),
                "outer name has no points",
            );
        }
    }
    let mut seen = HashSet::new();
    for name in lg.outer_names() {
        if !seen.insert(name.as_str()) {
            report.push(
                Rule::OuterNameUnique,
                name.clone(),
                "duplicate outer name label",
            );
        }
    }
}
