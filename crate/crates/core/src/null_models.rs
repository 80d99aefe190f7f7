//! Random-graph baselines and the concentrated-world assessment.
//!
//! All generators are pure functions of their parameters and a `u64` seed.
//! Independent samples draw their seeds from [`sample_seed`], so results do
//! not depend on how samples are scheduled across threads.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DiGraph, NodeId, UGraph};
use crate::metrics::{self, MetricsError, RichClub};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NullModelError {
    #[error("{m} edges requested but only {max} node pairs exist")]
    TooManyEdges { m: u64, max: u64 },
    #[error("lattice degree {k} must be even with 2 <= k < n = {n}")]
    BadLatticeDegree { k: usize, n: usize },
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("degree-preserving rewiring needs at least two edges, graph has {0}")]
    TooFewEdges(usize),
}

pub type Result<T> = std::result::Result<T, NullModelError>;

/// Seed streams keep the draws of different analyses independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum SeedStream {
    RichClubNull = 1,
    ErdosRenyi = 2,
    WattsStrogatz = 3,
    Rewired = 4,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for sample `index` of `stream` under the run seed.
pub fn sample_seed(seed: u64, stream: SeedStream, index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ stream as u64) ^ index as u64)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Index of pair `(u, v)`, `u < v`, in row-major order over the upper triangle.
fn row_offset(u: u64, n: u64) -> u64 {
    u * n - u * (u + 1) / 2
}

fn decode_pair(idx: u64, n: u64) -> (usize, usize) {
    // largest u with row_offset(u) <= idx
    let (mut lo, mut hi) = (0u64, n - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if row_offset(mid, n) <= idx {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = lo;
    let v = u + 1 + (idx - row_offset(u, n));
    (u as usize, v as usize)
}

/// Uniform simple graph on `n` nodes with exactly `m` edges.
pub fn erdos_renyi_gnm(n: usize, m: usize, seed: u64) -> Result<UGraph> {
    let max = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if m as u64 > max {
        return Err(NullModelError::TooManyEdges { m: m as u64, max });
    }
    let mut ug = UGraph::empty(n);
    if m == 0 {
        return Ok(ug);
    }
    let mut r = rng(seed);
    let picks = index::sample(&mut r, max as usize, m);
    for idx in picks.iter() {
        let (u, v) = decode_pair(idx as u64, n as u64);
        ug.insert_raw(u, v);
    }
    Ok(ug)
}

/// Ring lattice where every node links to its `k_even` nearest neighbours,
/// then each lattice edge `(u, u + j)` is rewired with probability `p` to
/// `(u, w)` for a uniform `w` that creates neither a self-loop nor a
/// duplicate.
pub fn watts_strogatz(n: usize, k_even: usize, p: f64, seed: u64) -> Result<UGraph> {
    if !k_even.is_multiple_of(2) || k_even < 2 || k_even >= n {
        return Err(NullModelError::BadLatticeDegree { k: k_even, n });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(NullModelError::BadProbability(p));
    }
    let mut ug = UGraph::empty(n);
    for u in 0..n {
        for j in 1..=k_even / 2 {
            ug.insert_raw(u, (u + j) % n);
        }
    }
    let mut r = rng(seed);
    for j in 1..=k_even / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if r.gen::<f64>() >= p {
                continue;
            }
            if ug.degree(u) >= n - 1 {
                continue;
            }
            let w = loop {
                let w = r.gen_range(0..n);
                if w != u && !ug.has_edge(u, w) {
                    break w;
                }
            };
            ug.remove_edge_raw(u, v);
            ug.insert_raw(u, w);
        }
    }
    Ok(ug)
}

/// Replaces `{a, b}`, `{c, d}` by `{a, d}`, `{c, b}` unless that would create
/// a self-loop or a duplicate edge. Returns whether the swap was applied.
pub fn try_double_edge_swap(ug: &mut UGraph, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    if a == d || c == b || ug.has_edge(a, d) || ug.has_edge(c, b) {
        return false;
    }
    if !ug.has_edge(a, b) || !ug.has_edge(c, d) {
        return false;
    }
    ug.remove_edge_raw(a, b);
    ug.remove_edge_raw(c, d);
    ug.insert_raw(a, d);
    ug.insert_raw(c, b);
    true
}

/// Randomizes `ug` by `swap_attempts` attempted double-edge swaps; the
/// degree sequence is preserved exactly.
pub fn degree_preserving_rewire(ug: &UGraph, swap_attempts: usize, seed: u64) -> Result<UGraph> {
    let m = ug.edge_count();
    if m < 2 {
        return Err(NullModelError::TooFewEdges(m));
    }
    let mut out = ug.clone();
    let mut edges: Vec<(usize, usize)> = ug.edges().map(|(u, v)| (u.index(), v.index())).collect();
    let mut r = rng(seed);
    for _ in 0..swap_attempts {
        let i = r.gen_range(0..m);
        let mut j = r.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        // both orientations of the second edge are reachable
        if r.gen::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        if try_double_edge_swap(&mut out, (a, b), (c, d)) {
            edges[i] = (a, d);
            edges[j] = (c, b);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullModel {
    ErGnm,
    WattsStrogatz,
    Rewired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullModelStats {
    pub model: NullModel,
    pub samples: usize,
    pub seed: u64,
    /// Undirected edge density.
    pub density_mean: f64,
    pub clustering_mean: f64,
    pub clustering_stddev: f64,
    pub path_length_mean: f64,
    pub path_length_stddev: f64,
}

fn undirected_density(ug: &UGraph) -> f64 {
    let n = ug.node_count();
    if n < 2 {
        return 0.0;
    }
    2.0 * ug.edge_count() as f64 / (n * (n - 1)) as f64
}

/// Draws `samples` graphs and summarizes density, transitivity and path length.
pub fn sample_stats<F>(model: NullModel, samples: usize, seed: u64, stream: SeedStream, draw: F) -> std::result::Result<NullModelStats, MetricsError>
where
    F: Fn(u64) -> Result<UGraph> + Sync,
{
    let per: Vec<(f64, f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let ug = draw(sample_seed(seed, stream, i))?;
            let t = metrics::global_clustering(&ug).transitivity;
            let l = metrics::average_path_length(&ug)?.value;
            Ok((undirected_density(&ug), t, l))
        })
        .collect::<std::result::Result<_, MetricsError>>()?;
    let dens: Vec<f64> = per.iter().map(|x| x.0).collect();
    let clus: Vec<f64> = per.iter().map(|x| x.1).collect();
    let path: Vec<f64> = per.iter().map(|x| x.2).collect();
    let (density_mean, _) = metrics::mean_stddev(&dens);
    let (clustering_mean, clustering_stddev) = metrics::mean_stddev(&clus);
    let (path_length_mean, path_length_stddev) = metrics::mean_stddev(&path);
    Ok(NullModelStats {
        model,
        samples,
        seed,
        density_mean,
        clustering_mean,
        clustering_stddev,
        path_length_mean,
        path_length_stddev,
    })
}

/// Decision-rule thresholds for [`concentrated_world_assessment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Dense when mean total degree >= this fraction of n - 1.
    pub dense_degree_fraction: f64,
    /// Small-world clustering must reach this multiple of the ER mean.
    pub small_world_clustering_factor: f64,
    /// Small-world path length may not exceed this multiple of the ER mean.
    pub small_world_path_factor: f64,
    /// Random-like when transitivity is within this many ER stddevs.
    pub random_clustering_sigmas: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            dense_degree_fraction: 0.15,
            small_world_clustering_factor: 3.0,
            small_world_path_factor: 1.5,
            random_clustering_sigmas: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssessmentParams {
    pub samples: usize,
    pub seed: u64,
    pub ws_p: f64,
    pub rewire_budget_factor: usize,
    pub thresholds: Thresholds,
}

impl Default for AssessmentParams {
    fn default() -> Self {
        Self {
            samples: 100,
            seed: 42,
            ws_p: 0.1,
            rewire_budget_factor: 10,
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConcentratedWorld,
    SmallWorldLike,
    SparseRandomLike,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observed {
    /// Arc density of the directed graph.
    pub density: f64,
    /// Edge density of the undirected projection.
    pub undirected_density: f64,
    /// Mean of in + out degree.
    pub mean_total_degree: f64,
    pub transitivity: f64,
    pub average_local_clustering: f64,
    pub path_length: f64,
    pub reachable_pair_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub observed: Observed,
    pub baselines: Vec<NullModelStats>,
    pub density_ratio_vs_er: f64,
    pub clustering_ratio_vs_er: f64,
    pub dense: bool,
    pub rich_club_present: bool,
    pub verdict: Verdict,
    pub thresholds: Thresholds,
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else if a > 0.0 {
        f64::MAX
    } else {
        1.0
    }
}

/// The decision rule. Checked in order: concentrated world (dense and a
/// validated rich club), small-world-like (clustering well above ER with
/// comparable paths), sparse-random-like (clustering within noise of ER),
/// otherwise inconclusive.
pub fn verdict(
    observed: &Observed,
    n: usize,
    er: &NullModelStats,
    rich_club_present: bool,
    t: &Thresholds,
) -> (bool, Verdict) {
    let dense = observed.mean_total_degree >= t.dense_degree_fraction * n.saturating_sub(1) as f64;
    let v = if dense && rich_club_present {
        Verdict::ConcentratedWorld
    } else if observed.transitivity >= t.small_world_clustering_factor * er.clustering_mean
        && observed.path_length <= t.small_world_path_factor * er.path_length_mean
    {
        Verdict::SmallWorldLike
    } else if (observed.transitivity - er.clustering_mean).abs()
        <= t.random_clustering_sigmas * er.clustering_stddev
    {
        Verdict::SparseRandomLike
    } else {
        Verdict::Inconclusive
    };
    (dense, v)
}

/// Even lattice degree closest to the mean degree, clamped to `[2, n - 1]`.
fn matched_lattice_degree(mean_degree: f64, n: usize) -> usize {
    let k = ((mean_degree / 2.0).round() as usize * 2).max(2);
    let max_even = if (n - 1).is_multiple_of(2) { n - 1 } else { n - 2 };
    k.min(max_even.max(2))
}

pub fn concentrated_world_assessment(
    g: &DiGraph,
    rich_club: &RichClub,
    params: &AssessmentParams,
) -> std::result::Result<Assessment, MetricsError> {
    let n = g.node_count();
    if n < 3 {
        return Err(MetricsError::DegenerateGraph(n));
    }
    let ug = g.undirected_projection();
    let m = ug.edge_count();
    let clustering = metrics::global_clustering(&ug);
    let paths = metrics::average_path_length(&ug)?;
    let observed = Observed {
        density: metrics::density(g)?,
        undirected_density: undirected_density(&ug),
        mean_total_degree: 2.0 * g.arc_count() as f64 / n as f64,
        transitivity: clustering.transitivity,
        average_local_clustering: clustering.average_local,
        path_length: paths.value,
        reachable_pair_fraction: paths.reachable_pair_fraction,
    };
    let samples = params.samples.max(1);
    let seed = params.seed;
    let er = sample_stats(NullModel::ErGnm, samples, seed, SeedStream::ErdosRenyi, |s| {
        erdos_renyi_gnm(n, m, s)
    })?;
    let k_ws = matched_lattice_degree(2.0 * m as f64 / n as f64, n);
    let ws = sample_stats(NullModel::WattsStrogatz, samples, seed, SeedStream::WattsStrogatz, |s| {
        watts_strogatz(n, k_ws, params.ws_p, s)
    })?;
    let mut baselines = vec![er.clone(), ws];
    if m >= 2 {
        let budget = params.rewire_budget_factor * m;
        baselines.push(sample_stats(NullModel::Rewired, samples, seed, SeedStream::Rewired, |s| {
            degree_preserving_rewire(&ug, budget, s)
        })?);
    }
    let check = metrics::check_cohesion(g, rich_club, samples, seed, params.rewire_budget_factor)?;
    let (dense, verdict) = verdict(&observed, n, &er, check.validated, &params.thresholds);
    Ok(Assessment {
        density_ratio_vs_er: ratio(observed.undirected_density, er.density_mean),
        clustering_ratio_vs_er: ratio(observed.transitivity, er.clustering_mean),
        observed,
        baselines,
        dense,
        rich_club_present: check.validated,
        verdict,
        thresholds: params.thresholds,
    })
}

/// Convenience for callers holding a rich-club node set rather than a
/// [`RichClub`].
pub fn club_from_members(g: &DiGraph, members: impl IntoIterator<Item = NodeId>) -> RichClub {
    let members = members.into_iter().collect();
    RichClub {
        cohesion: metrics::cohesion(g, &members),
        members,
        top_citing: metrics::Ranking { nodes: vec![], degrees: vec![], truncated_tie: false },
        top_cited: metrics::Ranking { nodes: vec![], degrees: vec![], truncated_tie: false },
    }
}
