//! Directed citation graph and its undirected projection.
//!
//! Node ids are dense indices `0..n`. Every analysis in this crate treats the
//! arc relation as unweighted (a link exists once a code cites another at
//! least one time); arc weights carry citation multiplicity only for
//! reporting.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node set is empty")]
    EmptyNodeSet,
    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),
    #[error("node label has an empty slug")]
    EmptySlug,
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("arc count must be positive")]
    ZeroCount,
}

pub type Result<T> = std::result::Result<T, GraphError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeLabel {
    pub slug: String,
    pub display_name: String,
}

impl NodeLabel {
    pub fn new(slug: impl Into<String>, display_name: impl Into<String>) -> Self {
        Self {
            slug: slug.into(),
            display_name: display_name.into(),
        }
    }

    /// Label whose display name is the slug itself.
    pub fn bare(slug: impl Into<String>) -> Self {
        let slug = slug.into();
        Self {
            display_name: slug.clone(),
            slug,
        }
    }
}

/// Synthetic labels `v00`, `v01`, ... zero-padded so that lexicographic and
/// numeric order agree.
pub fn numbered_labels(n: usize) -> Vec<NodeLabel> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n)
        .map(|i| NodeLabel::bare(format!("v{i:0width$}")))
        .collect()
}

fn check_labels(labels: &[NodeLabel]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for label in labels {
        if label.slug.is_empty() {
            return Err(GraphError::EmptySlug);
        }
        if !seen.insert(label.slug.as_str()) {
            return Err(GraphError::DuplicateLabel(label.slug.clone()));
        }
    }
    Ok(())
}

/// Old-to-new id mapping returned by the subgraph operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMap {
    forward: Vec<Option<NodeId>>,
    backward: Vec<NodeId>,
}

impl NodeMap {
    pub fn new_id(&self, old: NodeId) -> Option<NodeId> {
        self.forward.get(old.0).copied().flatten()
    }

    pub fn old_id(&self, new: NodeId) -> NodeId {
        self.backward[new.0]
    }

    pub fn kept(&self) -> &[NodeId] {
        &self.backward
    }
}

/// Directed graph without self-loops. Repeated arcs accumulate weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    labels: Vec<NodeLabel>,
    succ: Vec<BTreeMap<usize, u64>>,
    pred: Vec<BTreeSet<usize>>,
    arcs: usize,
}

impl DiGraph {
    pub fn new(labels: Vec<NodeLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(GraphError::EmptyNodeSet);
        }
        Self::with_labels(labels)
    }

    /// Like [`DiGraph::new`] but accepts an empty node set; subgraph
    /// operations can legitimately remove every node.
    fn with_labels(labels: Vec<NodeLabel>) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        Ok(Self {
            labels,
            succ: vec![BTreeMap::new(); n],
            pred: vec![BTreeSet::new(); n],
            arcs: 0,
        })
    }

    /// One arc `u -> v` for every undirected edge `{u, v}` with `u < v`.
    pub fn from_undirected(ug: &UGraph) -> Self {
        let mut g = Self::with_labels(ug.labels.clone()).expect("UGraph labels are valid");
        for (u, v) in ug.edges() {
            g.add_edge(u, v, 1).expect("UGraph edges are valid arcs");
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of distinct arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs
    }

    /// Sum of all arc weights.
    pub fn total_weight(&self) -> u64 {
        self.succ.iter().flat_map(|m| m.values()).sum()
    }

    pub fn labels(&self) -> &[NodeLabel] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> Result<&NodeLabel> {
        self.check(v)?;
        Ok(&self.labels[v.0])
    }

    pub fn set_display_name(&mut self, v: NodeId, name: impl Into<String>) -> Result<()> {
        self.check(v)?;
        self.labels[v.0].display_name = name.into();
        Ok(())
    }

    pub fn slug(&self, v: NodeId) -> &str {
        &self.labels[v.0].slug
    }

    pub fn find(&self, slug: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l.slug == slug).map(NodeId)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len()).map(NodeId)
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if v.0 < self.labels.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(v))
        }
    }

    pub fn add_edge(&mut self, source: NodeId, target: NodeId, count: u64) -> Result<()> {
        self.check(source)?;
        self.check(target)?;
        if source == target {
            return Err(GraphError::SelfLoop(source));
        }
        if count == 0 {
            return Err(GraphError::ZeroCount);
        }
        let w = self.succ[source.0].entry(target.0).or_insert(0);
        if *w == 0 {
            self.arcs += 1;
            self.pred[target.0].insert(source.0);
        }
        *w += count;
        Ok(())
    }

    pub fn has_edge(&self, source: NodeId, target: NodeId) -> bool {
        self.succ
            .get(source.0)
            .is_some_and(|m| m.contains_key(&target.0))
    }

    pub fn weight(&self, source: NodeId, target: NodeId) -> u64 {
        self.succ
            .get(source.0)
            .and_then(|m| m.get(&target.0))
            .copied()
            .unwrap_or(0)
    }

    /// All arcs `(source, target, weight)` in (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u64)> + '_ {
        self.succ.iter().enumerate().flat_map(|(u, m)| {
            m.iter().map(move |(&v, &w)| (NodeId(u), NodeId(v), w))
        })
    }

    pub fn successors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.succ[v.0].keys().map(|&u| NodeId(u))
    }

    pub fn predecessors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.pred[v.0].iter().map(|&u| NodeId(u))
    }

    pub fn in_degree(&self, v: NodeId) -> Result<usize> {
        self.check(v)?;
        Ok(self.pred[v.0].len())
    }

    pub fn out_degree(&self, v: NodeId) -> Result<usize> {
        self.check(v)?;
        Ok(self.succ[v.0].len())
    }

    /// Graph over the nodes not in `victims`, ids re-densified in their
    /// original order.
    pub fn remove_nodes(&self, victims: &BTreeSet<NodeId>) -> Result<(DiGraph, NodeMap)> {
        for &v in victims {
            self.check(v)?;
        }
        let keep: BTreeSet<NodeId> = self.nodes().filter(|v| !victims.contains(v)).collect();
        self.induced_subgraph(&keep)
    }

    /// Graph over `keep`; an arc survives iff both endpoints are kept.
    pub fn induced_subgraph(&self, keep: &BTreeSet<NodeId>) -> Result<(DiGraph, NodeMap)> {
        for &v in keep {
            self.check(v)?;
        }
        let mut forward = vec![None; self.node_count()];
        let mut backward = Vec::with_capacity(keep.len());
        for (new, &old) in keep.iter().enumerate() {
            forward[old.0] = Some(NodeId(new));
            backward.push(old);
        }
        let labels = backward.iter().map(|v| self.labels[v.0].clone()).collect();
        let mut sub = DiGraph::with_labels(labels)?;
        for (u, v, w) in self.edges() {
            if let (Some(nu), Some(nv)) = (forward[u.0], forward[v.0]) {
                sub.add_edge(nu, nv, w)?;
            }
        }
        Ok((sub, NodeMap { forward, backward }))
    }

    pub fn undirected_projection(&self) -> UGraph {
        let mut ug = UGraph::with_labels(self.labels.clone());
        for (u, v, _) in self.edges() {
            ug.insert(u.0, v.0);
        }
        ug
    }

    /// Components ignoring arc direction, each sorted, ordered by smallest member.
    pub fn weakly_connected_components(&self) -> Vec<Vec<NodeId>> {
        self.undirected_projection().connected_components()
    }
}

/// Simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UGraph {
    labels: Vec<NodeLabel>,
    adj: Vec<BTreeSet<usize>>,
    edges: usize,
}

impl UGraph {
    fn with_labels(labels: Vec<NodeLabel>) -> Self {
        let n = labels.len();
        Self {
            labels,
            adj: vec![BTreeSet::new(); n],
            edges: 0,
        }
    }

    /// Unlabelled graph on `n` nodes with synthetic slugs.
    pub fn empty(n: usize) -> Self {
        Self::with_labels(numbered_labels(n))
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut ug = Self::empty(n);
        for (u, v) in edges {
            ug.add_edge(NodeId(u), NodeId(v))?;
        }
        Ok(ug)
    }

    pub fn labelled(labels: Vec<NodeLabel>) -> Result<Self> {
        check_labels(&labels)?;
        Ok(Self::with_labels(labels))
    }

    fn insert(&mut self, u: usize, v: usize) -> bool {
        if self.adj[u].insert(v) {
            self.adj[v].insert(u);
            self.edges += 1;
            true
        } else {
            false
        }
    }

    /// Adds `{u, v}`; returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        let n = self.node_count();
        for x in [u, v] {
            if x.0 >= n {
                return Err(GraphError::UnknownNode(x));
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(self.insert(u.0, v.0))
    }

    pub(crate) fn remove_edge_raw(&mut self, u: usize, v: usize) -> bool {
        if self.adj[u].remove(&v) {
            self.adj[v].remove(&u);
            self.edges -= 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn insert_raw(&mut self, u: usize, v: usize) -> bool {
        self.insert(u, v)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn labels(&self) -> &[NodeLabel] {
        &self.labels
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|s| s.contains(&v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(BTreeSet::len).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub(crate) fn adjacency(&self) -> &[BTreeSet<usize>] {
        &self.adj
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, s)| {
            s.range(u + 1..).map(move |&v| (NodeId(u), NodeId(v)))
        })
    }

    /// Unweighted BFS distances from `source`; `None` marks unreachable nodes.
    pub fn bfs_distances(&self, source: NodeId) -> Result<Vec<Option<usize>>> {
        if source.0 >= self.node_count() {
            return Err(GraphError::UnknownNode(source));
        }
        Ok(self.bfs_raw(source.0))
    }

    pub(crate) fn bfs_raw(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or_default() + 1;
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp.into_iter().map(NodeId).collect());
        }
        out
    }
}
