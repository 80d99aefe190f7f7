//! Modularity and greedy agglomerative community detection (Clauset, Newman
//! and Moore), plus the "remove the rich club, partition the rest" workflow.
//!
//! The greedy merge keeps every quantity in integers: with `E_ij` the number
//! of edges between communities `i` and `j` and `d_i` their total degrees,
//! the merge gain is `dQ_ij = (2m E_ij - d_i d_j) / (2m^2)` and the running
//! modularity is tracked as an integer numerator over `4m^2`. Ties are
//! therefore exact and the merge order is fully reproducible.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use thiserror::Error;

use crate::graph::{DiGraph, NodeId, NodeMap, UGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommunityError {
    #[error("modularity is undefined on a graph without edges")]
    EmptyGraph,
    #[error("assignment covers {got} nodes, graph has {expected}")]
    PartialAssignment { expected: usize, got: usize },
    #[error("exhaustive search is limited to {max} nodes, graph has {n}")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

pub type Result<T> = std::result::Result<T, CommunityError>;

/// Node -> community assignment with dense indices `0..c`, numbered by
/// first appearance in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub q: f64,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |&c| c + 1)
    }

    /// Members of each community, ascending.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.community_count()];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(NodeId(v));
        }
        out
    }
}

/// Relabels arbitrary community labels densely by first appearance.
pub fn densify(labels: &[usize]) -> Vec<usize> {
    let mut map = BTreeMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// `Q = sum_c (e_c / m - (d_c / 2m)^2)`, with `e_c` the internal edges and
/// `d_c` the total degree of community `c`. Labels need not be dense.
pub fn modularity(ug: &UGraph, assignment: &[usize]) -> Result<f64> {
    let n = ug.node_count();
    if assignment.len() != n {
        return Err(CommunityError::PartialAssignment {
            expected: n,
            got: assignment.len(),
        });
    }
    let m = ug.edge_count();
    if m == 0 {
        return Err(CommunityError::EmptyGraph);
    }
    let mut internal: BTreeMap<usize, usize> = BTreeMap::new();
    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
    for (u, v) in ug.edges() {
        if assignment[u.index()] == assignment[v.index()] {
            *internal.entry(assignment[u.index()]).or_default() += 1;
        }
    }
    for (v, d) in ug.degrees().into_iter().enumerate() {
        *degree.entry(assignment[v]).or_default() += d;
    }
    let m = m as f64;
    Ok(degree
        .iter()
        .map(|(c, &d)| {
            let e = internal.get(c).copied().unwrap_or(0) as f64;
            e / m - (d as f64 / (2.0 * m)).powi(2)
        })
        .sum())
}

/// One greedy merge: community `absorbed` joins `kept` (`kept < absorbed`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeStep {
    pub kept: usize,
    pub absorbed: usize,
    pub delta_q: f64,
    /// Modularity after the merge.
    pub q: f64,
}

/// Full record of a greedy run. Community ids are the ids of the singleton
/// each community grew from.
#[derive(Debug, Clone, PartialEq)]
pub struct CnmRun {
    pub initial_q: f64,
    pub steps: Vec<MergeStep>,
    /// Number of merges applied in the reported best state.
    pub best_len: usize,
    pub partition: Partition,
}

impl CnmRun {
    /// Assignment (non-dense, labelled by kept ids) after the first `len` merges.
    pub fn labels_after(&self, len: usize) -> Vec<usize> {
        let n = self.partition.assignment.len();
        let mut parent: Vec<usize> = (0..n).collect();
        for s in &self.steps[..len] {
            parent[s.absorbed] = s.kept;
        }
        (0..n)
            .map(|mut v| {
                while parent[v] != v {
                    v = parent[v];
                }
                v
            })
            .collect()
    }
}

pub fn cnm_communities(ug: &UGraph) -> Result<Partition> {
    Ok(cnm_run(ug)?.partition)
}

/// Greedy modularity agglomeration from singletons. At each step the
/// adjacent pair with the largest gain is merged (ties: smallest index pair);
/// merging continues until no adjacent pairs remain and the first state
/// reaching the best modularity is reported.
pub fn cnm_run(ug: &UGraph) -> Result<CnmRun> {
    let n = ug.node_count();
    let m = ug.edge_count() as i64;
    if m == 0 {
        return Err(CommunityError::EmptyGraph);
    }
    let two_m = 2 * m;
    let denom = (4 * m * m) as f64;

    let mut degree: Vec<i64> = ug.degrees().into_iter().map(|d| d as i64).collect();
    let mut rows: Vec<BTreeMap<usize, i64>> = ug
        .adjacency()
        .iter()
        .map(|s| s.iter().map(|&k| (k, 1)).collect())
        .collect();
    let mut alive = vec![true; n];
    let gain = |e: i64, di: i64, dj: i64| two_m * e - di * dj;

    // Max-heap of (gain numerator, pair). A pair's key is never below its
    // current gain: gains that grow are pushed, gains that shrink are
    // corrected lazily when popped.
    let mut heap: BinaryHeap<(i64, Reverse<usize>, Reverse<usize>)> = BinaryHeap::new();
    for (i, row) in rows.iter().enumerate() {
        for (&j, &e) in row.range(i + 1..) {
            heap.push((gain(e, degree[i], degree[j]), Reverse(i), Reverse(j)));
        }
    }

    let mut q_num: i128 = -degree.iter().map(|&d| (d * d) as i128).sum::<i128>();
    let initial_q = q_num as f64 / denom;
    let (mut best_num, mut best_len) = (q_num, 0usize);
    let mut steps = Vec::new();

    while let Some((key, Reverse(i), Reverse(j))) = heap.pop() {
        if !alive[i] || !alive[j] {
            continue;
        }
        let Some(&e) = rows[i].get(&j) else { continue };
        let current = gain(e, degree[i], degree[j]);
        if current != key {
            debug_assert!(current < key);
            heap.push((current, Reverse(i), Reverse(j)));
            continue;
        }

        q_num += 2 * current as i128;
        alive[j] = false;
        let row_j = std::mem::take(&mut rows[j]);
        rows[i].remove(&j);
        degree[i] += degree[j];
        for (k, e_jk) in row_j {
            if k == i {
                continue;
            }
            rows[k].remove(&j);
            let e_ik = {
                let slot = rows[i].entry(k).or_insert(0);
                *slot += e_jk;
                *slot
            };
            rows[k].insert(i, e_ik);
            // only pairs that gained edges can have a larger gain than before
            let (a, b) = if i < k { (i, k) } else { (k, i) };
            heap.push((gain(e_ik, degree[i], degree[k]), Reverse(a), Reverse(b)));
        }

        steps.push(MergeStep {
            kept: i,
            absorbed: j,
            delta_q: 2.0 * current as f64 / denom,
            q: q_num as f64 / denom,
        });
        if q_num > best_num {
            best_num = q_num;
            best_len = steps.len();
        }
    }

    let mut run = CnmRun {
        initial_q,
        steps,
        best_len,
        partition: Partition {
            assignment: Vec::new(),
            q: best_num as f64 / denom,
        },
    };
    run.partition.assignment = (0..n).collect();
    run.partition.assignment = densify(&run.labels_after(best_len));
    Ok(run)
}

/// Largest node count accepted by [`brute_force_best_partition`].
pub const BRUTE_FORCE_MAX_NODES: usize = 12;

/// Exhaustive modularity maximum over all set partitions. Ties resolve to
/// the lexicographically smallest restricted-growth string.
pub fn brute_force_best_partition(ug: &UGraph) -> Result<Partition> {
    let n = ug.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(CommunityError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_NODES,
        });
    }
    let m = ug.edge_count() as i64;
    if m == 0 {
        return Err(CommunityError::EmptyGraph);
    }
    let edges: Vec<(usize, usize)> = ug.edges().map(|(u, v)| (u.index(), v.index())).collect();
    let degree: Vec<i64> = ug.degrees().into_iter().map(|d| d as i64).collect();
    // 4m^2 Q = 4m * sum e_c - sum d_c^2
    let score = |rgs: &[usize], blocks: usize| -> i64 {
        let internal = edges.iter().filter(|&&(u, v)| rgs[u] == rgs[v]).count() as i64;
        let mut dc = vec![0i64; blocks];
        for (v, &c) in rgs.iter().enumerate() {
            dc[c] += degree[v];
        }
        4 * m * internal - dc.iter().map(|d| d * d).sum::<i64>()
    };

    let mut rgs = vec![0usize; n];
    // prefix maxima: maxes[i] = max(rgs[..=i])
    let mut maxes = vec![0usize; n];
    let mut best = (score(&rgs, 1), rgs.clone());
    loop {
        // advance to the next restricted-growth string in lex order
        let mut i = n;
        loop {
            if i <= 1 {
                let q = best.0 as f64 / (4 * m * m) as f64;
                return Ok(Partition {
                    assignment: best.1,
                    q,
                });
            }
            i -= 1;
            if rgs[i] <= maxes[i - 1] {
                break;
            }
        }
        rgs[i] += 1;
        maxes[i] = maxes[i - 1].max(rgs[i]);
        for t in i + 1..n {
            rgs[t] = 0;
            maxes[t] = maxes[i];
        }
        let s = score(&rgs, maxes[n - 1] + 1);
        if s > best.0 {
            best = (s, rgs.clone());
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MainCommunity {
    /// Index in the reduced-network partition.
    pub index: usize,
    /// Original node ids, ascending by slug.
    pub members: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityReport {
    /// Reduced id -> original id.
    pub node_map: NodeMap,
    /// Partition of the reduced network (indexed by reduced id).
    pub partition: Partition,
    /// Communities of at least `min_size` nodes, largest first, ties by
    /// smallest member slug.
    pub main: Vec<MainCommunity>,
    /// Original ids outside every main community, ascending by slug.
    pub residual: Vec<NodeId>,
    pub min_size: usize,
}

impl CommunityReport {
    /// Community index of an original node, `None` for removed nodes.
    pub fn community_of(&self, v: NodeId) -> Option<usize> {
        self.node_map.new_id(v).map(|r| self.partition.assignment[r.index()])
    }
}

/// Drops `rich_club`, projects the rest to an undirected graph and
/// partitions it greedily.
pub fn reduced_network_partition(
    g: &DiGraph,
    rich_club: &BTreeSet<NodeId>,
    min_size: usize,
) -> Result<CommunityReport> {
    let (reduced, node_map) = g.remove_nodes(rich_club)?;
    let partition = cnm_communities(&reduced.undirected_projection())?;
    let by_slug = |a: &NodeId, b: &NodeId| g.slug(*a).cmp(g.slug(*b));

    let mut main = Vec::new();
    let mut residual = Vec::new();
    for (index, members) in partition.communities().into_iter().enumerate() {
        let mut members: Vec<NodeId> = members.into_iter().map(|r| node_map.old_id(r)).collect();
        members.sort_by(by_slug);
        if members.len() >= min_size {
            main.push(MainCommunity { index, members });
        } else {
            residual.extend(members);
        }
    }
    main.sort_by(|a, b| {
        b.members
            .len()
            .cmp(&a.members.len())
            .then_with(|| by_slug(&a.members[0], &b.members[0]))
    });
    residual.sort_by(by_slug);
    Ok(CommunityReport {
        node_map,
        partition,
        main,
        residual,
        min_size,
    })
}
