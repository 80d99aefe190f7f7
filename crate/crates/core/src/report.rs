//! Serialization: edge-list interchange, DOT and GraphML export, and the
//! canonical JSON analysis report.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::config::PipelineConfig;
use crate::graph::{DiGraph, GraphError, NodeId, NodeLabel};
use crate::metrics::Role;
use crate::null_models::Assessment;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: `{slug}` cites itself")]
    SelfLoopLine { line: usize, slug: String },
    #[error("edge list and node list are both empty")]
    EmptyInput,
    #[error("inconsistent export inputs: {0}")]
    InconsistentInputs(String),
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("GraphML: {0}")]
    GraphMl(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, ReportError>;

// ---------------------------------------------------------------------------
// Edge lists

#[derive(Debug, Clone)]
pub struct ParsedEdges {
    pub graph: DiGraph,
    /// Non-fatal findings such as duplicate records.
    pub warnings: Vec<String>,
}

fn check_slug(slug: &str, line: usize) -> Result<()> {
    if slug.is_empty() || slug.chars().any(char::is_whitespace) {
        return Err(ReportError::MalformedLine {
            line,
            reason: format!("invalid slug `{slug}`"),
        });
    }
    Ok(())
}

/// Parses `citing<TAB>cited<TAB>count` records plus an optional node sidecar
/// (one slug per line). Nodes are the union of both, in slug order, so that
/// isolated vertices survive the round trip.
pub fn parse_edge_list(content: &str, sidecar: Option<&str>) -> Result<ParsedEdges> {
    let mut warnings = Vec::new();
    let mut records: BTreeMap<(String, String), (u64, usize)> = BTreeMap::new();
    let mut slugs = BTreeSet::new();
    for (i, raw) in content.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 3 {
            return Err(ReportError::MalformedLine {
                line,
                reason: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        }
        let (citing, cited) = (fields[0], fields[1]);
        check_slug(citing, line)?;
        check_slug(cited, line)?;
        let count: u64 = match fields[2].trim().parse() {
            Ok(c) if c > 0 => c,
            _ => {
                return Err(ReportError::MalformedLine {
                    line,
                    reason: format!("count `{}` is not a positive integer", fields[2]),
                })
            }
        };
        if citing == cited {
            return Err(ReportError::SelfLoopLine {
                line,
                slug: citing.to_string(),
            });
        }
        slugs.insert(citing.to_string());
        slugs.insert(cited.to_string());
        match records.entry((citing.to_string(), cited.to_string())) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                warnings.push(format!(
                    "line {line}: duplicate record {citing} -> {cited} (first on line {}), counts summed",
                    e.get().1
                ));
                e.get_mut().0 += count;
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((count, line));
            }
        }
    }
    if let Some(nodes) = sidecar {
        for (i, raw) in nodes.lines().enumerate() {
            let slug = raw.trim();
            if slug.is_empty() {
                continue;
            }
            check_slug(slug, i + 1)?;
            slugs.insert(slug.to_string());
        }
    }
    if slugs.is_empty() {
        return Err(ReportError::EmptyInput);
    }
    let index: HashMap<&str, usize> = slugs.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut graph = DiGraph::new(slugs.iter().map(|s| NodeLabel::bare(s.clone())).collect())?;
    for ((citing, cited), (count, _)) in &records {
        graph.add_edge(NodeId(index[citing.as_str()]), NodeId(index[cited.as_str()]), *count)?;
    }
    Ok(ParsedEdges { graph, warnings })
}

/// Edge list and node sidecar for `g`, both sorted by slug.
pub fn write_edge_list(g: &DiGraph) -> (String, String) {
    let mut arcs: Vec<(&str, &str, u64)> = g.edges().map(|(u, v, w)| (g.slug(u), g.slug(v), w)).collect();
    arcs.sort_unstable();
    let mut tsv = String::new();
    for (u, v, w) in arcs {
        let _ = writeln!(tsv, "{u}\t{v}\t{w}");
    }
    let mut slugs: Vec<&str> = g.labels().iter().map(|l| l.slug.as_str()).collect();
    slugs.sort_unstable();
    let mut nodes = String::new();
    for s in slugs {
        let _ = writeln!(nodes, "{s}");
    }
    (tsv, nodes)
}

// ---------------------------------------------------------------------------
// Export

/// Per-node annotations for DOT and GraphML export.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotations {
    pub roles: Vec<Role>,
    pub top_citing: Vec<bool>,
    pub top_cited: Vec<bool>,
    pub community: Vec<Option<usize>>,
}

impl Annotations {
    fn check(&self, g: &DiGraph) -> Result<()> {
        let n = g.node_count();
        let lens = [self.roles.len(), self.top_citing.len(), self.top_cited.len(), self.community.len()];
        if lens.iter().any(|&l| l != n) {
            return Err(ReportError::InconsistentInputs(format!(
                "graph has {n} nodes, annotations have {lens:?}"
            )));
        }
        for v in g.nodes() {
            let expect = Role::classify(g.predecessors(v).count(), g.successors(v).count());
            if self.roles[v.index()] != expect {
                return Err(ReportError::InconsistentInputs(format!(
                    "role of `{}` is {:?} but the graph says {:?}",
                    g.slug(v),
                    self.roles[v.index()],
                    expect
                )));
            }
        }
        Ok(())
    }

    fn in_club(&self, v: usize) -> bool {
        self.top_citing[v] || self.top_cited[v]
    }

    /// Rebuilds annotations for `g` from a stored report.
    pub fn from_report(g: &DiGraph, report: &AnalysisReport) -> Result<Self> {
        let n = g.node_count();
        let mut a = Annotations {
            roles: vec![Role::Ordinary; n],
            top_citing: vec![false; n],
            top_cited: vec![false; n],
            community: vec![None; n],
        };
        let find = |slug: &str| {
            g.find(slug).ok_or_else(|| {
                ReportError::InconsistentInputs(format!("report names `{slug}`, absent from the graph"))
            })
        };
        if report.roles.len() != n {
            return Err(ReportError::InconsistentInputs(format!(
                "report has {} roles, graph has {n} nodes",
                report.roles.len()
            )));
        }
        for r in &report.roles {
            a.roles[find(&r.slug)?.index()] = r.role;
        }
        for s in &report.rich_club.top_citing {
            a.top_citing[find(s)?.index()] = true;
        }
        for s in &report.rich_club.top_cited {
            a.top_cited[find(s)?.index()] = true;
        }
        for (s, &c) in &report.communities.assignment {
            a.community[find(s)?.index()] = Some(c);
        }
        Ok(a)
    }
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn by_slug(g: &DiGraph) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = g.nodes().collect();
    order.sort_by(|a, b| g.slug(*a).cmp(g.slug(*b)));
    order
}

fn role_name(role: Role) -> &'static str {
    match role {
        Role::Isolated => "isolated",
        Role::Pendant => "pendant",
        Role::SourceOnly => "source_only",
        Role::SinkOnly => "sink_only",
        Role::Ordinary => "ordinary",
    }
}

/// DOT description. Shapes follow the figure convention: square = most
/// citing only, circle = most cited only, hexagon = both, diamond = rest.
/// Main communities become `cluster_<index>` subgraphs.
pub fn write_dot(g: &DiGraph, ann: &Annotations) -> Result<String> {
    ann.check(g)?;
    let order = by_slug(g);
    let mut out = String::from("digraph citations {\n  node [style=filled];\n");
    for &v in &order {
        let i = v.index();
        let (shape, color) = match (ann.top_citing[i], ann.top_cited[i]) {
            (true, true) => ("hexagon", "cyan"),
            (true, false) => ("square", "yellow"),
            (false, true) => ("circle", "green"),
            (false, false) => ("diamond", "lightblue"),
        };
        let label = &g.labels()[i].display_name;
        let _ = write!(
            out,
            "  {} [label={}, shape={shape}, fillcolor={color}, role={}",
            dot_id(g.slug(v)),
            dot_id(label),
            role_name(ann.roles[i])
        );
        if let Some(c) = ann.community[i] {
            let _ = write!(out, ", community={c}");
        }
        out.push_str("];\n");
    }
    let mut clusters: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for &v in &order {
        if let Some(c) = ann.community[v.index()] {
            clusters.entry(c).or_default().push(v);
        }
    }
    for (c, members) in clusters.iter().filter(|(_, m)| m.len() > 1) {
        let _ = writeln!(out, "  subgraph cluster_{c} {{\n    label=\"community {c}\";");
        for &v in members {
            let _ = writeln!(out, "    {};", dot_id(g.slug(v)));
        }
        out.push_str("  }\n");
    }
    let mut arcs: Vec<(&str, &str, u64)> = g.edges().map(|(u, v, w)| (g.slug(u), g.slug(v), w)).collect();
    arcs.sort_unstable();
    for (u, v, w) in arcs {
        let _ = writeln!(out, "  {} -> {} [count={w}];", dot_id(u), dot_id(v));
    }
    out.push_str("}\n");
    Ok(out)
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const GRAPHML_KEYS: [(&str, &str, &str, &str); 8] = [
    ("d0", "node", "label", "string"),
    ("d1", "node", "role", "string"),
    ("d2", "node", "community", "int"),
    ("d3", "node", "in_degree", "int"),
    ("d4", "node", "out_degree", "int"),
    ("d5", "node", "total_degree", "int"),
    ("d6", "node", "rich_club", "boolean"),
    ("d7", "edge", "count", "int"),
];

pub fn write_graphml(g: &DiGraph, ann: &Annotations) -> Result<String> {
    ann.check(g)?;
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    for (id, domain, name, ty) in GRAPHML_KEYS {
        let _ = writeln!(
            out,
            "  <key id=\"{id}\" for=\"{domain}\" attr.name=\"{name}\" attr.type=\"{ty}\"/>"
        );
    }
    out.push_str("  <graph id=\"citations\" edgedefault=\"directed\">\n");
    for v in by_slug(g) {
        let i = v.index();
        let (din, dout) = (g.predecessors(v).count(), g.successors(v).count());
        let _ = writeln!(out, "    <node id=\"{}\">", xml_escape(g.slug(v)));
        let _ = writeln!(out, "      <data key=\"d0\">{}</data>", xml_escape(&g.labels()[i].display_name));
        let _ = writeln!(out, "      <data key=\"d1\">{}</data>", role_name(ann.roles[i]));
        if let Some(c) = ann.community[i] {
            let _ = writeln!(out, "      <data key=\"d2\">{c}</data>");
        }
        let _ = writeln!(out, "      <data key=\"d3\">{din}</data>");
        let _ = writeln!(out, "      <data key=\"d4\">{dout}</data>");
        let _ = writeln!(out, "      <data key=\"d5\">{}</data>", din + dout);
        let _ = writeln!(out, "      <data key=\"d6\">{}</data>", ann.in_club(i));
        out.push_str("    </node>\n");
    }
    let mut arcs: Vec<(&str, &str, u64)> = g.edges().map(|(u, v, w)| (g.slug(u), g.slug(v), w)).collect();
    arcs.sort_unstable();
    for (u, v, w) in arcs {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\">\n      <data key=\"d7\">{w}</data>\n    </edge>",
            xml_escape(u),
            xml_escape(v)
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    Ok(out)
}

/// Reads back the graph written by [`write_graphml`]: node slugs and labels,
/// arcs and their counts. Unknown data keys are ignored.
pub fn read_graphml(text: &str) -> Result<DiGraph> {
    let doc = roxmltree::Document::parse(text).map_err(|e| ReportError::GraphMl(e.to_string()))?;
    let graph = doc
        .descendants()
        .find(|n| n.has_tag_name("graph"))
        .ok_or_else(|| ReportError::GraphMl("no <graph> element".into()))?;
    let key_for = |name: &str| {
        doc.descendants()
            .filter(|n| n.has_tag_name("key"))
            .find(|n| n.attribute("attr.name") == Some(name))
            .and_then(|n| n.attribute("id"))
    };
    let (label_key, count_key) = (key_for("label"), key_for("count"));
    let data = |node: roxmltree::Node, key: Option<&str>| -> Option<String> {
        let key = key?;
        node.children()
            .find(|c| c.has_tag_name("data") && c.attribute("key") == Some(key))
            .map(|c| c.text().unwrap_or("").to_string())
    };
    let mut labels = Vec::new();
    for node in graph.children().filter(|n| n.has_tag_name("node")) {
        let id = node
            .attribute("id")
            .ok_or_else(|| ReportError::GraphMl("node without id".into()))?;
        let name = data(node, label_key).unwrap_or_else(|| id.to_string());
        labels.push(NodeLabel::new(id, name));
    }
    let mut g = DiGraph::new(labels)?;
    for edge in graph.children().filter(|n| n.has_tag_name("edge")) {
        let end = |attr: &str| {
            edge.attribute(attr)
                .and_then(|s| g.find(s))
                .ok_or_else(|| ReportError::GraphMl(format!("edge with unknown {attr}")))
        };
        let (u, v) = (end("source")?, end("target")?);
        let count = match data(edge, count_key) {
            Some(c) => c.trim().parse().map_err(|_| ReportError::GraphMl(format!("bad count `{c}`")))?,
            None => 1,
        };
        g.add_edge(u, v, count)?;
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// Report

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool_version: String,
    pub run_id: Option<String>,
    pub inputs: Vec<String>,
    pub config: PipelineConfig,
    pub config_digest: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSummary {
    pub slug: String,
    pub display_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSummary {
    pub nodes: Vec<NodeSummary>,
    pub n: usize,
    pub arcs: usize,
    pub undirected_edges: usize,
    pub density: f64,
    pub total_citations: u64,
    pub weakly_connected_components: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleEntry {
    pub slug: String,
    pub in_degree: usize,
    pub out_degree: usize,
    pub total_degree: usize,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankedEntry {
    pub slug: String,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankingSection {
    pub k: usize,
    pub entries: Vec<RankedEntry>,
    pub truncated_tie: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rankings {
    pub top_citing: RankingSection,
    pub top_cited: RankingSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohesionSection {
    pub internal_density: f64,
    pub internal_arcs: usize,
    pub quotation_capture: f64,
    pub weighted_quotation_capture: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiEntry {
    pub k: usize,
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizationSection {
    pub k: usize,
    pub phi: f64,
    pub null_mean: f64,
    pub phi_norm: f64,
    pub null_stddev: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RichClubSection {
    pub members: Vec<String>,
    pub top_citing: Vec<String>,
    pub top_cited: Vec<String>,
    pub overlap: usize,
    pub cohesion: CohesionSection,
    pub graph_density: f64,
    /// k at which the coefficient is normalized: smallest member degree in
    /// the undirected projection.
    pub normalization_k: usize,
    pub normalization: Option<NormalizationSection>,
    pub phi_table: Vec<PhiEntry>,
    pub validated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentralityEntry {
    pub slug: String,
    pub degree: f64,
    pub betweenness: f64,
    pub closeness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MainCommunitySection {
    pub index: usize,
    pub size: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommunitySection {
    /// Nodes removed before partitioning (the rich club).
    pub removed: Vec<String>,
    pub min_size: usize,
    pub q: f64,
    pub community_count: usize,
    pub assignment: BTreeMap<String, usize>,
    pub main: Vec<MainCommunitySection>,
    /// Reduced-network nodes outside every main community.
    pub residual: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub graph_summary: GraphSummary,
    pub roles: Vec<RoleEntry>,
    pub rankings: Rankings,
    pub rich_club: RichClubSection,
    pub centrality: Vec<CentralityEntry>,
    pub communities: CommunitySection,
    pub assessment: Assessment,
}

/// Output of the single-analysis subcommands: the sections that analysis
/// produces, laid out exactly as in [`AnalysisReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialReport {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub graph_summary: GraphSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rankings: Option<Rankings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rich_club: Option<RichClubSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub communities: Option<CommunitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assessment: Option<Assessment>,
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(num) => match num.as_f64() {
            Some(f) if num.is_f64() => {
                let _ = write!(out, "{f:.16e}");
            }
            _ => out.push_str(&num.to_string()),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, item, indent + 2);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            // serde_json's default map is ordered by key
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&serde_json::to_string(k).expect("string serializes"));
                out.push_str(": ");
                write_value(out, item, indent + 2);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Canonical JSON: sorted keys, two-space indentation, floats in scientific
/// notation with 17 significant digits, trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

pub fn to_canonical<T: Serialize>(value: &T) -> String {
    canonical_json(&serde_json::to_value(value).expect("report types serialize"))
}

pub fn write_report(report: &AnalysisReport) -> String {
    to_canonical(report)
}

fn parse_with_path<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ReportError::SchemaViolation {
            path: if path == "." { "$".into() } else { format!("$.{path}") },
            message: e.into_inner().to_string(),
        }
    })
}

fn check_version(version: u32) -> Result<()> {
    if version != SCHEMA_VERSION {
        return Err(ReportError::SchemaViolation {
            path: "$.schema_version".into(),
            message: format!("unsupported version {version}, expected {SCHEMA_VERSION}"),
        });
    }
    Ok(())
}

pub fn read_report(text: &str) -> Result<AnalysisReport> {
    let report: AnalysisReport = parse_with_path(text)?;
    check_version(report.schema_version)?;
    check_slugs(&report)?;
    Ok(report)
}

pub fn read_partial_report(text: &str) -> Result<PartialReport> {
    let report: PartialReport = parse_with_path(text)?;
    check_version(report.schema_version)?;
    Ok(report)
}

/// Every slug named anywhere in the report must be a graph node.
fn check_slugs(r: &AnalysisReport) -> Result<()> {
    let known: BTreeSet<&str> = r.graph_summary.nodes.iter().map(|n| n.slug.as_str()).collect();
    let check = |path: String, slug: &str| {
        if known.contains(slug) {
            Ok(())
        } else {
            Err(ReportError::SchemaViolation {
                path,
                message: format!("unknown slug `{slug}`"),
            })
        }
    };
    for (i, e) in r.roles.iter().enumerate() {
        check(format!("$.roles[{i}].slug"), &e.slug)?;
    }
    for (name, sec) in [("top_citing", &r.rankings.top_citing), ("top_cited", &r.rankings.top_cited)] {
        for (i, e) in sec.entries.iter().enumerate() {
            check(format!("$.rankings.{name}.entries[{i}].slug"), &e.slug)?;
        }
    }
    let rc = &r.rich_club;
    for (name, list) in [("members", &rc.members), ("top_citing", &rc.top_citing), ("top_cited", &rc.top_cited)] {
        for (i, s) in list.iter().enumerate() {
            check(format!("$.rich_club.{name}[{i}]"), s)?;
        }
    }
    for (i, e) in r.centrality.iter().enumerate() {
        check(format!("$.centrality[{i}].slug"), &e.slug)?;
    }
    let c = &r.communities;
    for (i, s) in c.removed.iter().enumerate() {
        check(format!("$.communities.removed[{i}]"), s)?;
    }
    for s in c.assignment.keys() {
        check(format!("$.communities.assignment.{s}"), s)?;
    }
    for (i, m) in c.main.iter().enumerate() {
        for (j, s) in m.members.iter().enumerate() {
            check(format!("$.communities.main[{i}].members[{j}]"), s)?;
        }
    }
    for (i, s) in c.residual.iter().enumerate() {
        check(format!("$.communities.residual[{i}]"), s)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let p = parse_edge_list("a\tb\t1\nb\ta\t2\n", None).unwrap();
        assert_eq!((p.graph.node_count(), p.graph.arc_count()), (2, 2));
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_edge_list("a\ta\t1\n", None).unwrap_err(),
            ReportError::SelfLoopLine { line: 1, slug: "a".into() }
        );
        assert!(matches!(
            parse_edge_list("a\tb\t1\nb\tc\n", None).unwrap_err(),
            ReportError::MalformedLine { line: 2, .. }
        ));
        assert!(matches!(
            parse_edge_list("a\tb\t0\n", None).unwrap_err(),
            ReportError::MalformedLine { line: 1, .. }
        ));
        assert!(matches!(
            parse_edge_list("a\tb\tx\n", None).unwrap_err(),
            ReportError::MalformedLine { line: 1, .. }
        ));
        assert_eq!(parse_edge_list("", None).unwrap_err(), ReportError::EmptyInput);
        assert_eq!(parse_edge_list("\n", Some("\n")).unwrap_err(), ReportError::EmptyInput);
    }

    #[test]
    fn duplicates_are_summed_with_warning() {
        let p = parse_edge_list("a\tb\t1\na\tb\t4\n", None).unwrap();
        assert_eq!(p.graph.weight(NodeId(0), NodeId(1)), 5);
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn sidecar_keeps_isolated_nodes() {
        let nodes: String = (0..52).map(|i| format!("c{i:02}\n")).collect();
        let edges: String = (1..51).map(|i| format!("c{:02}\tc{:02}\t1\n", i, i + 1)).collect();
        let p = parse_edge_list(&edges, Some(&nodes)).unwrap();
        assert_eq!(p.graph.node_count(), 52);
        let isolated = p
            .graph
            .nodes()
            .filter(|&v| p.graph.in_degree(v).unwrap() + p.graph.out_degree(v).unwrap() == 0)
            .count();
        assert_eq!(isolated, 1);
    }

    #[test]
    fn edge_list_round_trip() {
        let p = parse_edge_list("b\tc\t2\na\tb\t1\n", Some("a\nb\nc\nd\n")).unwrap();
        let (tsv, nodes) = write_edge_list(&p.graph);
        assert_eq!(tsv, "a\tb\t1\nb\tc\t2\n");
        assert_eq!(nodes, "a\nb\nc\nd\n");
        assert_eq!(parse_edge_list(&tsv, Some(&nodes)).unwrap().graph, p.graph);
    }

    #[test]
    fn canonical_floats_and_ordering() {
        let v = serde_json::json!({"b": 0.5, "a": [1, 2.0], "c": null});
        assert_eq!(
            canonical_json(&v),
            "{\n  \"a\": [\n    1,\n    2.0000000000000000e0\n  ],\n  \"b\": 5.0000000000000000e-1,\n  \"c\": null\n}\n"
        );
        let x = 0.1 + 0.2;
        let text = canonical_json(&serde_json::json!({ "x": x }));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64(), Some(x));
    }

    fn tiny() -> (DiGraph, Annotations) {
        let mut g = DiGraph::new(vec![
            NodeLabel::new("b", "Code \"B\""),
            NodeLabel::new("a", "Code A & co"),
            NodeLabel::new("c", "Code C"),
        ])
        .unwrap();
        g.add_edge(NodeId(1), NodeId(0), 3).unwrap();
        let ann = Annotations {
            roles: vec![Role::Pendant, Role::Pendant, Role::Isolated],
            top_citing: vec![false, true, false],
            top_cited: vec![true, true, false],
            community: vec![Some(0), Some(0), Some(1)],
        };
        (g, ann)
    }

    #[test]
    fn dot_shapes_and_determinism() {
        let (g, ann) = tiny();
        let dot = write_dot(&g, &ann).unwrap();
        assert!(dot.contains("\"a\" [label=\"Code A & co\", shape=hexagon"));
        assert!(dot.contains("\"b\" [label=\"Code \\\"B\\\"\", shape=circle"));
        assert!(dot.contains("\"c\" [label=\"Code C\", shape=diamond"));
        assert!(dot.contains("subgraph cluster_0"));
        assert!(dot.contains("\"a\" -> \"b\" [count=3];"));
        assert!(dot.find("\"a\" [").unwrap() < dot.find("\"b\" [").unwrap());
        assert_eq!(dot, write_dot(&g, &ann).unwrap());

        let mut bad = ann.clone();
        bad.roles.pop();
        assert!(matches!(write_dot(&g, &bad), Err(ReportError::InconsistentInputs(_))));
        let mut bad = ann;
        bad.roles[2] = Role::Ordinary;
        assert!(matches!(write_dot(&g, &bad), Err(ReportError::InconsistentInputs(_))));
    }

    #[test]
    fn graphml_round_trip() {
        let (g, ann) = tiny();
        let xml = write_graphml(&g, &ann).unwrap();
        assert_eq!(xml.matches("<node ").count(), 3);
        assert_eq!(xml.matches("<edge ").count(), 1);
        assert!(xml.contains("<data key=\"d7\">3</data>"));
        assert!(xml.contains("Code A &amp; co"));
        let back = read_graphml(&xml).unwrap();
        assert_eq!(back.node_count(), 3);
        assert_eq!(back.arc_count(), 1);
        let (a, b) = (back.find("a").unwrap(), back.find("b").unwrap());
        assert_eq!(back.weight(a, b), 3);
        assert_eq!(back.label(b).unwrap().display_name, "Code \"B\"");
    }

    #[test]
    fn schema_violation_paths() {
        let err = read_report("{\"schema_version\": 1}").unwrap_err();
        assert!(matches!(err, ReportError::SchemaViolation { .. }));
        let err = read_report("[]").unwrap_err();
        assert!(matches!(err, ReportError::SchemaViolation { .. }));
    }
}
