//! Bigraph documents, DOT export, signature files and CSV reports.
//!
//! A bigraph document is canonical pretty-printed JSON:
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "signature": [{ "label": "Room", "arity": 0 }, ...],
//!   "roots": 1,
//!   "nodes": [{ "id": "v0", "control": "Room", "parent": "r0" }, ...],
//!   "edges": [{ "id": "e0", "ports": [["v1", 0], ["v3", 0]] }, ...],
//!   "outer_names": [{ "name": "y0", "ports": [["v2", 0]] }, ...],
//!   "meta": { "algorithm": "...", "parameters": { ... }, "seed": 7 }
//! }
//! ```
//!
//! Nodes, edges and outer names appear in id order and ports in
//! (node, index) order, so identical bigraphs serialize to identical bytes.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{Assortativity, DegreeHistogram, FitResult, SampleMoments};
use crate::model::{
    validate, Bigraph, Control, Link, LinkGraph, NodeId, Place, PlaceGraph, Port, Signature,
    ValidationReport,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("document is not a valid agent:\n{0}")]
    Invalid(ValidationReport),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Field {
        field: field.into(),
        message: message.into(),
    }
}

/// Generation provenance embedded in a document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationMeta {
    #[serde(default)]
    pub algorithm: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeEntry {
    id: String,
    control: String,
    parent: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeEntry {
    id: String,
    ports: Vec<(String, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NameEntry {
    name: String,
    ports: Vec<(String, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    format_version: u32,
    signature: Vec<Control>,
    roots: usize,
    nodes: Vec<NodeEntry>,
    edges: Vec<EdgeEntry>,
    outer_names: Vec<NameEntry>,
    // Agents have neither; accepted on read so validation can flag them.
    #[serde(default, skip_serializing_if = "is_zero")]
    sites: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    inner_names: Vec<String>,
    #[serde(default)]
    meta: GenerationMeta,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

fn port_entry(p: &Port) -> (String, usize) {
    (p.node.to_string(), p.index)
}

/// Canonical document text for `b`.
pub fn serialize(b: &Bigraph, meta: &GenerationMeta) -> String {
    let sig = b.signature();
    let nodes = b
        .place
        .node_ids()
        .map(|v| {
            let k = b.place.control_indices()[v.0];
            NodeEntry {
                id: v.to_string(),
                control: sig.get(k).map(|c| c.label.clone()).unwrap_or_default(),
                parent: b.place.parents()[v.0].to_string(),
            }
        })
        .collect();

    let points = b.link.points_by_link();
    let ports_of = |l: Link| -> Vec<(String, usize)> {
        points
            .get(&l)
            .map(|ps| ps.iter().map(port_entry).collect())
            .unwrap_or_default()
    };
    let edges = (0..b.link.edge_count())
        .map(|e| EdgeEntry {
            id: format!("e{e}"),
            ports: ports_of(Link::Edge(crate::EdgeId(e))),
        })
        .collect();
    let outer_names = b
        .link
        .outer_names()
        .iter()
        .enumerate()
        .map(|(y, name)| NameEntry {
            name: name.clone(),
            ports: ports_of(Link::Outer(crate::NameId(y))),
        })
        .collect();

    let doc = Document {
        format_version: FORMAT_VERSION,
        signature: sig.controls().to_vec(),
        roots: b.place.root_count(),
        nodes,
        edges,
        outer_names,
        sites: b.place.site_count(),
        inner_names: b.link.inner_names().to_vec(),
        meta: meta.clone(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

/// Parses a document without structural validation. Fails only when the
/// text cannot be read as a document or references something undefined.
pub fn decode(text: &str) -> Result<(Bigraph, GenerationMeta), IoError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.format_version != FORMAT_VERSION {
        return Err(IoError::Version(doc.format_version));
    }
    let signature =
        Arc::new(Signature::new(doc.signature).map_err(|e| field_err("signature", e.to_string()))?);

    let mut node_ids: HashMap<&str, NodeId> = HashMap::new();
    for (i, n) in doc.nodes.iter().enumerate() {
        if node_ids.insert(n.id.as_str(), NodeId(i)).is_some() {
            return Err(field_err(
                format!("nodes[{i}].id"),
                format!("duplicate node id `{}`", n.id),
            ));
        }
    }
    let mut controls = Vec::with_capacity(doc.nodes.len());
    let mut parents = Vec::with_capacity(doc.nodes.len());
    for (i, n) in doc.nodes.iter().enumerate() {
        let k = signature.index_of(&n.control).ok_or_else(|| {
            field_err(
                format!("nodes[{i}].control"),
                format!("control `{}` not in signature", n.control),
            )
        })?;
        controls.push(k);
        let parent = if let Some(p) = node_ids.get(n.parent.as_str()) {
            Place::Node(*p)
        } else if let Some(r) = n.parent.strip_prefix('r').and_then(|s| s.parse().ok()) {
            Place::Root(r)
        } else {
            return Err(field_err(
                format!("nodes[{i}].parent"),
                format!("parent `{}` is neither a node nor a root", n.parent),
            ));
        };
        parents.push(parent);
    }
    let mut place = PlaceGraph::from_parts(signature.clone(), doc.roots, controls.clone(), parents);
    place.set_site_count(doc.sites);

    let mut link = LinkGraph::unlinked(signature, controls);
    link.set_inner_names(doc.inner_names);
    let mut edge_labels = HashMap::new();
    for (i, e) in doc.edges.iter().enumerate() {
        if edge_labels.insert(e.id.as_str(), i).is_some() {
            return Err(field_err(
                format!("edges[{i}].id"),
                format!("duplicate edge id `{}`", e.id),
            ));
        }
        link.add_edge();
    }
    for y in &doc.outer_names {
        link.add_named_outer(y.name.clone());
    }

    let targets = doc
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            (
                format!("edges[{i}]"),
                &e.ports,
                Link::Edge(crate::EdgeId(i)),
            )
        })
        .chain(doc.outer_names.iter().enumerate().map(|(i, y)| {
            (
                format!("outer_names[{i}]"),
                &y.ports,
                Link::Outer(crate::NameId(i)),
            )
        }));
    for (field, ports, target) in targets {
        for (j, (node, index)) in ports.iter().enumerate() {
            let v = node_ids.get(node.as_str()).ok_or_else(|| {
                field_err(
                    format!("{field}.ports[{j}]"),
                    format!("unknown node `{node}`"),
                )
            })?;
            if link.connect(Port::new(*v, *index), target).is_some() {
                return Err(field_err(
                    format!("{field}.ports[{j}]"),
                    format!("port ({node}, {index}) is linked twice"),
                ));
            }
        }
    }
    Ok((Bigraph::new(place, link), doc.meta))
}

/// Parses and validates a document.
pub fn deserialize(text: &str) -> Result<(Bigraph, GenerationMeta), IoError> {
    let (b, meta) = decode(text)?;
    let report = validate(&b);
    if report.is_empty() {
        Ok((b, meta))
    } else {
        Err(IoError::Invalid(report))
    }
}

/// Parses a signature file: one `label arity` pair per line; blank lines
/// and `#` comments are ignored.
pub fn parse_signature(text: &str) -> Result<Signature, IoError> {
    let mut controls = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| IoError::Parse {
            line: i + 1,
            column: 1,
            message,
        };
        let mut parts = line.split_whitespace();
        let (Some(label), Some(arity), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad(format!("expected `label arity`, got `{line}`")));
        };
        let arity = arity
            .parse()
            .map_err(|_| bad(format!("arity `{arity}` is not a non-negative integer")))?;
        controls.push(Control::new(label, arity));
    }
    Signature::new(controls).map_err(|e| field_err("signature", e.to_string()))
}

pub fn format_signature(sig: &Signature) -> String {
    sig.controls()
        .iter()
        .map(|c| format!("{} {}\n", c.label, c.arity))
        .collect()
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: the place forest as directed tree edges, every link
/// as an auxiliary vertex joined to its points by undirected lines.
pub fn export_dot(b: &Bigraph) -> String {
    let mut out = String::from("digraph bigraph {\n");
    let sig = b.signature();
    for r in 0..b.place.root_count() {
        let _ = writeln!(out, "  \"r{r}\" [shape=box, style=dashed];");
    }
    for v in b.place.node_ids() {
        let label = sig
            .get(b.place.control_indices()[v.0])
            .map(|c| c.label.as_str())
            .unwrap_or("?");
        let _ = writeln!(
            out,
            "  \"{v}\" [shape=ellipse, label=\"{v}:{}\"];",
            dot_escape(label)
        );
    }
    for v in b.place.node_ids() {
        let _ = writeln!(out, "  \"{}\" -> \"{v}\";", b.place.parents()[v.0]);
    }
    let points = b.link.points_by_link();
    let link_vertex = |l: &Link| match l {
        Link::Edge(e) => format!("{e}"),
        Link::Outer(y) => format!("name{}", y.0),
    };
    for e in 0..b.link.edge_count() {
        let _ = writeln!(out, "  \"e{e}\" [shape=point, xlabel=\"e{e}\"];");
    }
    for (y, name) in b.link.outer_names().iter().enumerate() {
        let _ = writeln!(
            out,
            "  \"name{y}\" [shape=plaintext, label=\"{}\"];",
            dot_escape(name)
        );
    }
    for (l, ports) in &points {
        for p in ports {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [dir=none, style=dotted, taillabel=\"{}\"];",
                p.node,
                link_vertex(l),
                p.index
            );
        }
    }
    out.push_str("}\n");
    out
}

/// `x` rounded to 9 significant digits, printed in shortest form.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    format!("{rounded}")
}

fn csv_text(headers: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn with_keys<'a>(keys: &[&'a str], rest: &[&'a str]) -> Vec<&'a str> {
    keys.iter().chain(rest).copied().collect()
}

/// `degree,count,fraction`, one row per occupied bin.
pub fn write_histogram_csv(h: &DegreeHistogram) -> String {
    let fractions = h.fractions();
    csv_text(
        &["degree", "count", "fraction"],
        h.bins
            .iter()
            .map(|(d, c)| vec![d.to_string(), c.to_string(), fmt_float(fractions[d])]),
    )
}

/// `degree,mean_fraction`, for bin fractions averaged over runs.
pub fn write_mean_histogram_csv(fractions: &BTreeMap<usize, f64>) -> String {
    csv_text(
        &["degree", "mean_fraction"],
        fractions
            .iter()
            .map(|(d, f)| vec![d.to_string(), fmt_float(*f)]),
    )
}

const FIT_COLUMNS: [&str; 5] = [
    "model",
    "estimate",
    "standard_error",
    "log_likelihood",
    "aic",
];
const MOMENT_COLUMNS: [&str; 6] = ["samples", "mean", "sd", "variance", "skewness", "kurtosis"];

/// `model,estimate,standard_error,log_likelihood,aic`.
pub fn write_fits_csv(fits: &[FitResult]) -> String {
    write_keyed_fits_csv(&[], fits.iter().map(|f| (Vec::new(), *f)))
}

/// Fit rows prefixed by caller-supplied key columns.
pub fn write_keyed_fits_csv(
    keys: &[&str],
    rows: impl IntoIterator<Item = (Vec<String>, FitResult)>,
) -> String {
    csv_text(
        &with_keys(keys, &FIT_COLUMNS),
        rows.into_iter().map(|(mut k, f)| {
            k.extend([
                f.model.to_string(),
                fmt_float(f.estimate),
                fmt_float(f.standard_error),
                fmt_float(f.log_likelihood),
                fmt_float(f.aic),
            ]);
            k
        }),
    )
}

/// `samples,mean,sd,variance,skewness,kurtosis` prefixed by key columns.
pub fn write_keyed_moments_csv(
    keys: &[&str],
    rows: impl IntoIterator<Item = (Vec<String>, SampleMoments)>,
) -> String {
    csv_text(
        &with_keys(keys, &MOMENT_COLUMNS),
        rows.into_iter().map(|(mut k, m)| {
            k.extend([
                m.count.to_string(),
                fmt_float(m.mean),
                fmt_float(m.sd),
                fmt_float(m.variance),
                fmt_float(m.skewness),
                fmt_float(m.kurtosis),
            ]);
            k
        }),
    )
}

/// `node,arity,connected_ports,link_degree,delta,alpha`, one row per linked
/// node. `alpha` is empty for a degenerate report.
pub fn write_assortativity_csv(a: &Assortativity) -> String {
    let headers = [
        "node",
        "arity",
        "connected_ports",
        "link_degree",
        "delta",
        "alpha",
    ];
    match a {
        Assortativity::Scored(rep) => csv_text(
            &headers,
            rep.per_node.iter().map(|s| {
                vec![
                    s.node.to_string(),
                    s.arity.to_string(),
                    s.connected_ports.to_string(),
                    s.link_degree.to_string(),
                    fmt_float(s.delta),
                    fmt_float(s.alpha),
                ]
            }),
        ),
        Assortativity::Degenerate(diffs) => csv_text(
            &headers,
            diffs.iter().map(|d| {
                vec![
                    d.node.to_string(),
                    d.arity.to_string(),
                    d.connected_ports.to_string(),
                    d.link_degree.to_string(),
                    fmt_float(d.delta),
                    String::new(),
                ]
            }),
        ),
    }
}

pub const ASSORTATIVITY_SUMMARY_COLUMNS: [&str; 10] = [
    "status",
    "nodes",
    "r",
    "lambda",
    "difference_sum",
    "mean_alpha",
    "sd_alpha",
    "slightly_assortative",
    "slightly_disassortative",
    "strong_outlier",
];

/// Summary fields of an assortativity result, in
/// [`ASSORTATIVITY_SUMMARY_COLUMNS`] order.
pub fn assortativity_summary_fields(a: &Assortativity) -> Vec<String> {
    match a {
        Assortativity::Scored(rep) => vec![
            "scored".into(),
            rep.per_node.len().to_string(),
            fmt_float(rep.r),
            fmt_float(rep.lambda),
            fmt_float(rep.difference_sum),
            fmt_float(rep.mean_alpha),
            fmt_float(rep.sd_alpha),
            fmt_float(rep.classes.slightly_assortative),
            fmt_float(rep.classes.slightly_disassortative),
            fmt_float(rep.classes.strong_outlier),
        ],
        Assortativity::Degenerate(diffs) => {
            let mut row = vec!["degenerate".into(), diffs.len().to_string()];
            row.resize(ASSORTATIVITY_SUMMARY_COLUMNS.len(), String::new());
            row
        }
    }
}

pub fn write_keyed_assortativity_summary_csv(
    keys: &[&str],
    rows: impl IntoIterator<Item = (Vec<String>, Vec<String>)>,
) -> String {
    csv_text(
        &with_keys(keys, &ASSORTATIVITY_SUMMARY_COLUMNS),
        rows.into_iter().map(|(mut k, fields)| {
            k.extend(fields);
            k
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{fit_all, node_assortativity};
    use crate::model::Rule;

    fn room() -> Bigraph {
        let sig = Arc::new(
            Signature::new(vec![
                Control::new("Room", 0),
                Control::new("Computer", 1),
                Control::new("User", 0),
                Control::new("Phone", 1),
                Control::new("Data", 0),
            ])
            .unwrap(),
        );
        // Room contains a user (holding a phone with data) and a computer;
        // phone and computer share the outer name `network`.
        let mut pg = PlaceGraph::new(sig, 1);
        let room = pg.add_node(0, Place::Root(0));
        let user = pg.add_node(2, Place::Node(room));
        let phone = pg.add_node(3, Place::Node(user));
        pg.add_node(4, Place::Node(phone));
        let computer = pg.add_node(1, Place::Node(room));
        let mut lg = LinkGraph::over(&pg);
        let net = Link::Outer(lg.add_named_outer("network"));
        lg.connect(Port::new(phone, 0), net);
        lg.connect(Port::new(computer, 0), net);
        Bigraph::new(pg, lg)
    }

    #[test]
    fn room_round_trip() {
        let b = room();
        assert!(validate(&b).is_empty());
        let text = serialize(&b, &GenerationMeta::default());
        let (back, meta) = deserialize(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.place.node_count(), 5);
        assert_eq!(meta, GenerationMeta::default());
        assert_eq!(serialize(&back, &meta), text);
        assert!(text.contains("\"label\": \"Computer\""));
    }

    #[test]
    fn empty_agent_document() {
        let sig = Arc::new(Signature::new(vec![Control::new("A", 1)]).unwrap());
        let b = Bigraph::unlinked(PlaceGraph::new(sig, 1));
        let text = serialize(&b, &GenerationMeta::default());
        assert!(text.contains("\"roots\": 1"));
        assert!(text.contains("\"nodes\": []"));
        assert!(text.contains("\"edges\": []"));
        let (back, _) = deserialize(&text).unwrap();
        assert_eq!(back.place.root_count(), 1);
        assert_eq!(back.place.node_count(), 0);
    }

    #[test]
    fn truncated_document_is_a_parse_error() {
        let text = serialize(&room(), &GenerationMeta::default());
        let cut = &text[..text.len() / 2];
        match deserialize(cut) {
            Err(IoError::Parse { line, .. }) => assert!(line > 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_port_surfaces_violation() {
        let text = r#"{
          "format_version": 1,
          "signature": [{"label": "A", "arity": 1}],
          "roots": 1,
          "nodes": [
            {"id": "v0", "control": "A", "parent": "r0"},
            {"id": "v1", "control": "A", "parent": "r0"}
          ],
          "edges": [{"id": "e0", "ports": [["v0", 1], ["v1", 0]]}],
          "outer_names": []
        }"#;
        match deserialize(text) {
            Err(IoError::Invalid(report)) => {
                assert!(report.contains(Rule::PortIndex));
                assert_eq!(report.len(), 1);
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
        // decode alone still yields the structure for triage.
        let (b, _) = decode(text).unwrap();
        assert!(validate(&b).contains(Rule::PortIndex));
    }

    #[test]
    fn sites_and_inner_names_are_violations() {
        let text = r#"{
          "format_version": 1,
          "signature": [{"label": "A", "arity": 0}],
          "roots": 1, "sites": 2, "inner_names": ["x"],
          "nodes": [], "edges": [], "outer_names": []
        }"#;
        match deserialize(text) {
            Err(IoError::Invalid(report)) => {
                assert!(report.contains(Rule::AgentSites));
                assert!(report.contains(Rule::AgentInnerNames));
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn reference_errors() {
        let base = |nodes: &str, edges: &str| {
            format!(
                r#"{{"format_version": 1, "signature": [{{"label": "A", "arity": 2}}], "roots": 1,
                "nodes": {nodes}, "edges": {edges}, "outer_names": []}}"#
            )
        };
        let unknown_control = base(r#"[{"id":"v0","control":"B","parent":"r0"}]"#, "[]");
        assert!(matches!(
            decode(&unknown_control),
            Err(IoError::Field { .. })
        ));
        let unknown_parent = base(r#"[{"id":"v0","control":"A","parent":"v9"}]"#, "[]");
        assert!(matches!(
            decode(&unknown_parent),
            Err(IoError::Field { .. })
        ));
        let twice = base(
            r#"[{"id":"v0","control":"A","parent":"r0"}]"#,
            r#"[{"id":"e0","ports":[["v0",0]]},{"id":"e1","ports":[["v0",0]]}]"#,
        );
        assert!(matches!(decode(&twice), Err(IoError::Field { .. })));
        let bad_version =
            base("[]", "[]").replace("\"format_version\": 1", "\"format_version\": 9");
        assert!(matches!(decode(&bad_version), Err(IoError::Version(9))));
        // A parent root past the root count is representable and reported.
        let root = base(r#"[{"id":"v0","control":"A","parent":"r3"}]"#, "[]");
        assert!(matches!(deserialize(&root), Err(IoError::Invalid(_))));
    }

    #[test]
    fn signature_file() {
        let sig = parse_signature("# demo\nRoom 0\nComputer 1\n\nPhone 1 # handheld\n").unwrap();
        assert_eq!(sig.len(), 3);
        assert_eq!(sig.get(1), Some(&Control::new("Computer", 1)));
        assert_eq!(parse_signature(&format_signature(&sig)).unwrap(), sig);
        match parse_signature("A 1\nB x\n") {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_signature("A 1\nA 2\n").is_err());
        assert!(parse_signature("A\n").is_err());
    }

    #[test]
    fn dot_shapes() {
        let sig = Arc::new(Signature::new(vec![Control::new("A", 1)]).unwrap());
        let single = Bigraph::unlinked(PlaceGraph::new(sig.clone(), 1));
        let dot = export_dot(&single);
        assert_eq!(
            dot,
            "digraph bigraph {\n  \"r0\" [shape=box, style=dashed];\n}\n"
        );

        let mut pg = PlaceGraph::new(sig, 1);
        let a = pg.add_node(0, Place::Root(0));
        let b = pg.add_node(0, Place::Root(0));
        let tree = export_dot(&Bigraph::unlinked(pg.clone()));
        assert_eq!(tree.matches(" -> ").count(), 2);

        let mut lg = LinkGraph::over(&pg);
        let e = Link::Edge(lg.add_edge());
        lg.connect(Port::new(a, 0), e);
        lg.connect(Port::new(b, 0), e);
        let dot = export_dot(&Bigraph::new(pg, lg));
        let expected = "digraph bigraph {\n  \"r0\" [shape=box, style=dashed];\n  \
            \"v0\" [shape=ellipse, label=\"v0:A\"];\n  \"v1\" [shape=ellipse, label=\"v1:A\"];\n  \
            \"r0\" -> \"v0\";\n  \"r0\" -> \"v1\";\n  \"e0\" [shape=point, xlabel=\"e0\"];\n  \
            \"v0\" -> \"e0\" [dir=none, style=dotted, taillabel=\"0\"];\n  \
            \"v1\" -> \"e0\" [dir=none, style=dotted, taillabel=\"0\"];\n}\n";
        assert_eq!(dot, expected);
        assert_eq!(dot.matches("-> \"e0\"").count(), 2);
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_float(74562.24), "74562.24");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(2.0), "2");
        assert_eq!(fmt_float(123456789012.0), "123456789000");
        assert_eq!(fmt_float(-8.444783e-5), "-0.00008444783");
    }

    #[test]
    fn csv_outputs() {
        let empty = DegreeHistogram {
            bins: BTreeMap::new(),
            total_places: 0,
        };
        assert_eq!(write_histogram_csv(&empty), "degree,count,fraction\n");

        let fits = fit_all(&[3, 4, 5, 4], 10).unwrap();
        let text = write_fits_csv(&fits);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "model,estimate,standard_error,log_likelihood,aic");
        assert!(lines[1].starts_with("binomial,0.4,"));
        assert!(lines[2].starts_with("poisson,4,"));
        assert!(lines[3].starts_with("geometric,0.2,"));

        let b = room();
        let a = node_assortativity(&b.link, 1.0).unwrap();
        let text = write_assortativity_csv(&a);
        // Only the two linked nodes appear.
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().all(|l| l.split(',').count() == 6));
    }
}
