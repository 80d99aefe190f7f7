//! Assembles report sections from a citation graph and a configuration.

use thiserror::Error;

use crate::communities::{self, CommunityError, CommunityReport};
use crate::config::{ConfigError, PipelineConfig};
use crate::graph::{DiGraph, NodeId};
use crate::metrics::{self, CentralityKind, CohesionCheck, MetricsError, RichClub};
use crate::null_models::{self, Assessment};
use crate::report::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Community(#[from] CommunityError),
}

pub type Result<T> = std::result::Result<T, PipelineError>;

fn slugs(g: &DiGraph, ids: impl IntoIterator<Item = NodeId>) -> Vec<String> {
    let mut out: Vec<String> = ids.into_iter().map(|v| g.slug(v).to_string()).collect();
    out.sort_unstable();
    out
}

/// `name:sha256:<hex>` identifier of an input file's content.
pub fn input_fingerprint(name: &str, content: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    format!("{name}:sha256:{}", hex::encode(Sha256::digest(content)))
}

pub fn provenance(config: &PipelineConfig, inputs: Vec<String>, run_id: Option<String>) -> Provenance {
    Provenance {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        run_id,
        inputs,
        config: config.clone(),
        config_digest: config.digest(),
        seed: config.seed,
    }
}

pub fn graph_summary(g: &DiGraph) -> Result<GraphSummary> {
    let mut nodes: Vec<NodeSummary> = g
        .labels()
        .iter()
        .map(|l| NodeSummary {
            slug: l.slug.clone(),
            display_name: l.display_name.clone(),
        })
        .collect();
    nodes.sort_by(|a, b| a.slug.cmp(&b.slug));
    Ok(GraphSummary {
        nodes,
        n: g.node_count(),
        arcs: g.arc_count(),
        undirected_edges: g.undirected_projection().edge_count(),
        density: metrics::density(g)?,
        total_citations: g.total_weight(),
        weakly_connected_components: g.weakly_connected_components().len(),
    })
}

pub fn roles(g: &DiGraph) -> Vec<RoleEntry> {
    let mut out: Vec<RoleEntry> = metrics::degree_profile(g)
        .into_iter()
        .map(|r| RoleEntry {
            slug: g.slug(r.node).to_string(),
            in_degree: r.in_degree,
            out_degree: r.out_degree,
            total_degree: r.total_degree,
            role: r.role,
        })
        .collect();
    out.sort_by(|a, b| a.slug.cmp(&b.slug));
    out
}

fn ranking_section(g: &DiGraph, r: &metrics::Ranking) -> RankingSection {
    RankingSection {
        k: r.nodes.len(),
        entries: r
            .nodes
            .iter()
            .zip(&r.degrees)
            .map(|(&v, &degree)| RankedEntry {
                slug: g.slug(v).to_string(),
                degree,
            })
            .collect(),
        truncated_tie: r.truncated_tie,
    }
}

/// The rich club, its rankings and the cohesion check.
pub struct RichClubAnalysis {
    pub club: RichClub,
    pub check: CohesionCheck,
    pub rankings: Rankings,
    pub section: RichClubSection,
}

pub fn rich_club(g: &DiGraph, config: &PipelineConfig) -> Result<RichClubAnalysis> {
    config.validate()?;
    let club = metrics::rich_club_members(g, config.k_citing, config.k_cited)?;
    let check = metrics::check_cohesion(
        g,
        &club,
        config.null_samples,
        config.seed,
        config.rewire_budget_factor,
    )?;
    let ug = g.undirected_projection();
    let rankings = Rankings {
        top_citing: ranking_section(g, &club.top_citing),
        top_cited: ranking_section(g, &club.top_cited),
    };
    let section = RichClubSection {
        members: slugs(g, club.members.iter().copied()),
        top_citing: slugs(g, club.top_citing.nodes.iter().copied()),
        top_cited: slugs(g, club.top_cited.nodes.iter().copied()),
        overlap: club.overlap(),
        cohesion: CohesionSection {
            internal_density: club.cohesion.internal_density,
            internal_arcs: club.cohesion.internal_arcs,
            quotation_capture: club.cohesion.quotation_capture,
            weighted_quotation_capture: club.cohesion.weighted_quotation_capture,
        },
        graph_density: check.graph_density,
        normalization_k: check.k,
        normalization: check.normalized.map(|nr| NormalizationSection {
            k: nr.k,
            phi: nr.phi,
            null_mean: nr.null_mean,
            phi_norm: nr.phi_norm,
            null_stddev: nr.null_stddev,
            samples: nr.samples,
        }),
        phi_table: metrics::rich_club_table(&ug)
            .into_iter()
            .map(|(k, phi)| PhiEntry { k, phi })
            .collect(),
        validated: check.validated,
    };
    Ok(RichClubAnalysis {
        club,
        check,
        rankings,
        section,
    })
}

pub fn centrality(g: &DiGraph) -> Vec<CentralityEntry> {
    let d = metrics::centrality_scores(g, CentralityKind::Degree).values;
    let b = metrics::centrality_scores(g, CentralityKind::Betweenness).values;
    let c = metrics::centrality_scores(g, CentralityKind::Closeness).values;
    let mut out: Vec<CentralityEntry> = g
        .nodes()
        .map(|v| CentralityEntry {
            slug: g.slug(v).to_string(),
            degree: d[v.index()],
            betweenness: b[v.index()],
            closeness: c[v.index()],
        })
        .collect();
    out.sort_by(|a, b| a.slug.cmp(&b.slug));
    out
}

pub fn community_section(g: &DiGraph, club: &RichClub, config: &PipelineConfig) -> Result<(CommunityReport, CommunitySection)> {
    config.validate()?;
    let rep = communities::reduced_network_partition(g, &club.members, config.min_community_size)?;
    let assignment = rep
        .node_map
        .kept()
        .iter()
        .enumerate()
        .map(|(r, &v)| (g.slug(v).to_string(), rep.partition.assignment[r]))
        .collect();
    let section = CommunitySection {
        removed: slugs(g, club.members.iter().copied()),
        min_size: rep.min_size,
        q: rep.partition.q,
        community_count: rep.partition.community_count(),
        assignment,
        main: rep
            .main
            .iter()
            .map(|m| MainCommunitySection {
                index: m.index,
                size: m.members.len(),
                members: m.members.iter().map(|&v| g.slug(v).to_string()).collect(),
            })
            .collect(),
        residual: rep.residual.iter().map(|&v| g.slug(v).to_string()).collect(),
    };
    Ok((rep, section))
}

pub fn assessment(g: &DiGraph, club: &RichClub, config: &PipelineConfig) -> Result<Assessment> {
    config.validate()?;
    Ok(null_models::concentrated_world_assessment(g, club, &config.assessment_params())?)
}

/// Everything the full analysis computes.
pub fn analyze(g: &DiGraph, config: &PipelineConfig, provenance: Provenance) -> Result<AnalysisReport> {
    let graph_summary = graph_summary(g)?;
    let rc = rich_club(g, config)?;
    let (_, communities) = community_section(g, &rc.club, config)?;
    let assessment = assessment(g, &rc.club, config)?;
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        provenance,
        graph_summary,
        roles: roles(g),
        rankings: rc.rankings,
        rich_club: rc.section,
        centrality: centrality(g),
        communities,
        assessment,
    })
}

/// Which sections a partial run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    RichClub,
    Communities,
    NullModels,
}

pub fn analyze_partial(
    g: &DiGraph,
    config: &PipelineConfig,
    provenance: Provenance,
    stage: Stage,
) -> Result<PartialReport> {
    let mut out = PartialReport {
        schema_version: SCHEMA_VERSION,
        provenance,
        graph_summary: graph_summary(g)?,
        rankings: None,
        rich_club: None,
        communities: None,
        assessment: None,
    };
    match stage {
        Stage::RichClub => {
            let rc = rich_club(g, config)?;
            out.rankings = Some(rc.rankings);
            out.rich_club = Some(rc.section);
        }
        Stage::Communities => {
            config.validate()?;
            let club = metrics::rich_club_members(g, config.k_citing, config.k_cited)?;
            out.communities = Some(community_section(g, &club, config)?.1);
        }
        Stage::NullModels => {
            config.validate()?;
            let club = metrics::rich_club_members(g, config.k_citing, config.k_cited)?;
            out.assessment = Some(assessment(g, &club, config)?);
        }
    }
    Ok(out)
}

/// Annotations for export, computed directly from the graph.
pub fn annotations(g: &DiGraph, config: &PipelineConfig) -> Result<Annotations> {
    config.validate()?;
    let n = g.node_count();
    let club = metrics::rich_club_members(g, config.k_citing, config.k_cited)?;
    let (rep, _) = community_section(g, &club, config)?;
    let mut ann = Annotations {
        roles: metrics::degree_profile(g).into_iter().map(|r| r.role).collect(),
        top_citing: vec![false; n],
        top_cited: vec![false; n],
        community: g.nodes().map(|v| rep.community_of(v)).collect(),
    };
    for v in &club.top_citing.nodes {
        ann.top_citing[v.index()] = true;
    }
    for v in &club.top_cited.nodes {
        ann.top_cited[v.index()] = true;
    }
    Ok(ann)
}
