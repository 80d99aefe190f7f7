//! Degree statistics, vertex roles, rankings, rich-club analysis, clustering,
//! path lengths and centrality.
//!
//! Everything here reads the unweighted arc relation. Undirected statistics
//! (rich-club coefficient, clustering, paths, betweenness, closeness) run on
//! the undirected projection.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DiGraph, NodeId, UGraph};
use crate::null_models::{self, NullModelError, SeedStream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("graph with {0} node(s) is too small for this statistic")]
    DegenerateGraph(usize),
    #[error("k = {k} is out of range for {n} nodes")]
    BadK { k: usize, n: usize },
    #[error("rich-club coefficient undefined at k = {0}: fewer than two nodes exceed that degree")]
    UndefinedCoefficient(usize),
    #[error("null-model mean rich-club coefficient is zero")]
    NullModelDegenerate,
    #[error(transparent)]
    NullModel(#[from] NullModelError),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

/// Arc density `arcs / (n (n - 1))`.
pub fn density(g: &DiGraph) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(MetricsError::DegenerateGraph(n));
    }
    Ok(g.arc_count() as f64 / (n * (n - 1)) as f64)
}

/// Structural role of a vertex. Precedence: isolated, pendant, then
/// source-only / sink-only, then ordinary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Isolated,
    Pendant,
    SourceOnly,
    SinkOnly,
    Ordinary,
}

impl Role {
    pub fn classify(in_degree: usize, out_degree: usize) -> Self {
        match (in_degree, out_degree) {
            (0, 0) => Role::Isolated,
            (i, o) if i + o == 1 => Role::Pendant,
            (0, _) => Role::SourceOnly,
            (_, 0) => Role::SinkOnly,
            _ => Role::Ordinary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeRecord {
    pub node: NodeId,
    pub in_degree: usize,
    pub out_degree: usize,
    pub total_degree: usize,
    pub role: Role,
}

pub fn degree_profile(g: &DiGraph) -> Vec<DegreeRecord> {
    g.nodes()
        .map(|v| {
            let in_degree = g.predecessors(v).count();
            let out_degree = g.successors(v).count();
            DegreeRecord {
                node: v,
                in_degree,
                out_degree,
                total_degree: in_degree + out_degree,
                role: Role::classify(in_degree, out_degree),
            }
        })
        .collect()
}

/// Top-k nodes by some degree. `truncated_tie` is set when the k-th value
/// equals the (k+1)-th, i.e. the cut fell inside a tie.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub nodes: Vec<NodeId>,
    pub degrees: Vec<usize>,
    pub truncated_tie: bool,
}

fn top_by(g: &DiGraph, k: usize, degree: impl Fn(NodeId) -> usize) -> Result<Ranking> {
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(MetricsError::BadK { k, n });
    }
    let mut order: Vec<(usize, NodeId)> = g.nodes().map(|v| (degree(v), v)).collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| g.slug(a.1).cmp(g.slug(b.1))));
    let truncated_tie = k < n && order[k - 1].0 == order[k].0;
    order.truncate(k);
    Ok(Ranking {
        nodes: order.iter().map(|&(_, v)| v).collect(),
        degrees: order.iter().map(|&(d, _)| d).collect(),
        truncated_tie,
    })
}

/// Most citing nodes (out-degree), ties by slug.
pub fn top_citing(g: &DiGraph, k: usize) -> Result<Ranking> {
    top_by(g, k, |v| g.successors(v).count())
}

/// Most cited nodes (in-degree), ties by slug.
pub fn top_cited(g: &DiGraph, k: usize) -> Result<Ranking> {
    top_by(g, k, |v| g.predecessors(v).count())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cohesion {
    pub internal_density: f64,
    pub internal_arcs: usize,
    /// Share of arcs with at least one endpoint in the club.
    pub quotation_capture: f64,
    /// Same share, counted in citation multiplicities.
    pub weighted_quotation_capture: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RichClub {
    pub members: BTreeSet<NodeId>,
    pub top_citing: Ranking,
    pub top_cited: Ranking,
    pub cohesion: Cohesion,
}

impl RichClub {
    pub fn overlap(&self) -> usize {
        self.top_citing
            .nodes
            .iter()
            .filter(|v| self.top_cited.nodes.contains(v))
            .count()
    }
}

pub fn cohesion(g: &DiGraph, members: &BTreeSet<NodeId>) -> Cohesion {
    let mut internal_arcs = 0;
    let mut incident = 0;
    let mut incident_weight = 0u64;
    for (u, v, w) in g.edges() {
        let (iu, iv) = (members.contains(&u), members.contains(&v));
        if iu && iv {
            internal_arcs += 1;
        }
        if iu || iv {
            incident += 1;
            incident_weight += w;
        }
    }
    let s = members.len();
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
    Cohesion {
        internal_density: ratio(internal_arcs as f64, (s * s.saturating_sub(1)) as f64),
        internal_arcs,
        quotation_capture: ratio(incident as f64, g.arc_count() as f64),
        weighted_quotation_capture: ratio(incident_weight as f64, g.total_weight() as f64),
    }
}

/// Union of the `k_citing` most citing and `k_cited` most cited nodes, with
/// cohesion measured on the induced subgraph.
pub fn rich_club_members(g: &DiGraph, k_citing: usize, k_cited: usize) -> Result<RichClub> {
    let citing = top_citing(g, k_citing)?;
    let cited = top_cited(g, k_cited)?;
    let members: BTreeSet<NodeId> = citing.nodes.iter().chain(&cited.nodes).copied().collect();
    Ok(RichClub {
        cohesion: cohesion(g, &members),
        members,
        top_citing: citing,
        top_cited: cited,
    })
}

/// phi(k) = 2 E_k / (N_k (N_k - 1)) over the nodes of degree > k; `None` when
/// fewer than two nodes qualify.
pub fn rich_club_coefficient(ug: &UGraph, k: usize) -> Option<f64> {
    let rich: Vec<bool> = ug.degrees().iter().map(|&d| d > k).collect();
    let n_k = rich.iter().filter(|&&r| r).count();
    if n_k < 2 {
        return None;
    }
    let e_k = ug
        .edges()
        .filter(|(u, v)| rich[u.index()] && rich[v.index()])
        .count();
    Some(2.0 * e_k as f64 / (n_k * (n_k - 1)) as f64)
}

/// phi(k) for every k from 0 to the maximum degree.
pub fn rich_club_table(ug: &UGraph) -> Vec<(usize, Option<f64>)> {
    let max = ug.degrees().into_iter().max().unwrap_or(0);
    (0..=max).map(|k| (k, rich_club_coefficient(ug, k))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedRichClub {
    pub k: usize,
    pub phi: f64,
    pub null_mean: f64,
    pub phi_norm: f64,
    /// Sample standard deviation of the null draws (0 for one sample).
    pub null_stddev: f64,
    pub samples: usize,
}

/// phi(k) against its mean over `samples` degree-preserving rewirings, each
/// with `swap_factor * m` attempted swaps.
pub fn normalized_rich_club(
    ug: &UGraph,
    k: usize,
    samples: usize,
    seed: u64,
    swap_factor: usize,
) -> Result<NormalizedRichClub> {
    let phi = rich_club_coefficient(ug, k).ok_or(MetricsError::UndefinedCoefficient(k))?;
    let samples = samples.max(1);
    let budget = swap_factor * ug.edge_count();
    let draws: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = null_models::sample_seed(seed, SeedStream::RichClubNull, i);
            let r = null_models::degree_preserving_rewire(ug, budget, s)?;
            Ok(rich_club_coefficient(&r, k).expect("degree sequence is preserved"))
        })
        .collect::<Result<_>>()?;
    let (null_mean, null_stddev) = mean_stddev(&draws);
    if null_mean == 0.0 {
        return Err(MetricsError::NullModelDegenerate);
    }
    Ok(NormalizedRichClub {
        k,
        phi,
        null_mean,
        phi_norm: phi / null_mean,
        null_stddev,
        samples,
    })
}

pub(crate) fn mean_stddev(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Outcome of the rich-club cohesion rule: the club is "validated" when its
/// internal density beats the whole-graph density and phi is above its
/// rewired expectation at k = the smallest member degree.
#[derive(Debug, Clone, PartialEq)]
pub struct CohesionCheck {
    pub graph_density: f64,
    pub internal_density: f64,
    pub k: usize,
    pub normalized: Option<NormalizedRichClub>,
    pub validated: bool,
}

pub fn check_cohesion(
    g: &DiGraph,
    club: &RichClub,
    samples: usize,
    seed: u64,
    swap_factor: usize,
) -> Result<CohesionCheck> {
    let graph_density = density(g)?;
    let ug = g.undirected_projection();
    let k = club
        .members
        .iter()
        .map(|v| ug.degree(v.index()))
        .min()
        .unwrap_or(0);
    let normalized = match normalized_rich_club(&ug, k, samples, seed, swap_factor) {
        Ok(nr) => Some(nr),
        Err(
            MetricsError::UndefinedCoefficient(_)
            | MetricsError::NullModelDegenerate
            | MetricsError::NullModel(NullModelError::TooFewEdges(_)),
        ) => None,
        Err(e) => return Err(e),
    };
    let internal_density = club.cohesion.internal_density;
    let validated =
        internal_density > graph_density && normalized.is_some_and(|nr| nr.phi_norm > 1.0);
    Ok(CohesionCheck {
        graph_density,
        internal_density,
        k,
        normalized,
        validated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clustering {
    /// 3 x triangles / connected triples.
    pub transitivity: f64,
    /// Mean local coefficient over nodes of degree >= 2.
    pub average_local: f64,
}

/// Both coefficients are 0 on triangle-free graphs and when no node has
/// degree >= 2.
pub fn global_clustering(ug: &UGraph) -> Clustering {
    let adj = ug.adjacency();
    let mut closed = 0usize;
    let mut triples = 0usize;
    let mut local_sum = 0.0;
    let mut local_n = 0usize;
    for nbrs in adj {
        let d = nbrs.len();
        if d < 2 {
            continue;
        }
        let nv: Vec<usize> = nbrs.iter().copied().collect();
        let mut t = 0usize;
        for (i, &a) in nv.iter().enumerate() {
            t += nv[i + 1..].iter().filter(|&&b| adj[a].contains(&b)).count();
        }
        let pairs = d * (d - 1) / 2;
        closed += t;
        triples += pairs;
        local_sum += t as f64 / pairs as f64;
        local_n += 1;
    }
    Clustering {
        transitivity: if triples > 0 { closed as f64 / triples as f64 } else { 0.0 },
        average_local: if local_n > 0 { local_sum / local_n as f64 } else { 0.0 },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLength {
    /// Mean distance over unordered pairs of the largest component.
    pub value: f64,
    pub component_size: usize,
    /// Reachable unordered pairs over all unordered pairs.
    pub reachable_pair_fraction: f64,
}

pub fn average_path_length(ug: &UGraph) -> Result<PathLength> {
    let n = ug.node_count();
    if n < 2 {
        return Err(MetricsError::DegenerateGraph(n));
    }
    let comps = ug.connected_components();
    let reachable: usize = comps.iter().map(|c| c.len() * (c.len() - 1) / 2).sum();
    // first component of maximal size, i.e. the one holding the smallest id
    let largest = comps
        .iter()
        .fold(&comps[0], |best, c| if c.len() > best.len() { c } else { best });
    let size = largest.len();
    let value = if size < 2 {
        0.0
    } else {
        let total: usize = largest
            .par_iter()
            .map(|s| ug.bfs_raw(s.index()).iter().flatten().sum::<usize>())
            .sum();
        // each unordered pair was counted from both ends
        (total as f64 / 2.0) / (size * (size - 1) / 2) as f64
    };
    Ok(PathLength {
        value,
        component_size: size,
        reachable_pair_fraction: reachable as f64 / (n * (n - 1) / 2) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralityKind {
    Degree,
    Betweenness,
    Closeness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub kind: CentralityKind,
    /// Indexed by node id.
    pub values: Vec<f64>,
}

/// Degree: (in + out) / (2 (n - 1)). Betweenness: Brandes accumulation on the
/// undirected projection, normalized by the (n-1)(n-2)/2 pairs that exclude
/// the node. Closeness: harmonic, normalized by n - 1.
pub fn centrality_scores(g: &DiGraph, kind: CentralityKind) -> CentralityScores {
    let n = g.node_count();
    let values = match kind {
        CentralityKind::Degree => {
            let denom = 2.0 * n.saturating_sub(1) as f64;
            g.nodes()
                .map(|v| {
                    let t = g.predecessors(v).count() + g.successors(v).count();
                    if denom > 0.0 { t as f64 / denom } else { 0.0 }
                })
                .collect()
        }
        CentralityKind::Betweenness => {
            let raw = brandes(&g.undirected_projection());
            // ordered-pair sums over unordered pair count
            let scale = if n > 2 { 1.0 / ((n - 1) * (n - 2)) as f64 } else { 0.0 };
            raw.into_iter().map(|b| b * scale).collect()
        }
        CentralityKind::Closeness => {
            let ug = g.undirected_projection();
            (0..n)
                .into_par_iter()
                .map(|s| {
                    if n < 2 {
                        return 0.0;
                    }
                    let h: f64 = ug
                        .bfs_raw(s)
                        .iter()
                        .flatten()
                        .filter(|&&d| d > 0)
                        .map(|&d| 1.0 / d as f64)
                        .sum();
                    h / (n - 1) as f64
                })
                .collect()
        }
    };
    CentralityScores { kind, values }
}

/// Unnormalized betweenness summed over ordered source/target pairs.
fn brandes(ug: &UGraph) -> Vec<f64> {
    let n = ug.node_count();
    let partials: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut acc = vec![0.0; n];
            let mut stack = Vec::with_capacity(n);
            let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
            let mut sigma = vec![0.0f64; n];
            let mut dist: Vec<Option<usize>> = vec![None; n];
            sigma[s] = 1.0;
            dist[s] = Some(0);
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                stack.push(v);
                let dv = dist[v].unwrap_or_default();
                for w in ug.neighbors(v) {
                    if dist[w].is_none() {
                        dist[w] = Some(dv + 1);
                        queue.push_back(w);
                    }
                    if dist[w] == Some(dv + 1) {
                        sigma[w] += sigma[v];
                        preds[w].push(v);
                    }
                }
            }
            let mut delta = vec![0.0; n];
            while let Some(w) = stack.pop() {
                for &v in &preds[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
                if w != s {
                    acc[w] += delta[w];
                }
            }
            acc
        })
        .collect();
    // fixed summation order keeps results independent of scheduling
    let mut total = vec![0.0; n];
    for p in partials {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    total
}
