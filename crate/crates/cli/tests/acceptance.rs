//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use citenet_core::communities::{brute_force_best_partition, cnm_communities, cnm_run};
use citenet_core::config::PipelineConfig;
use citenet_core::extract::{find_citations, load_registry, CodeDocument};
use citenet_core::metrics::{self, CentralityKind, Role};
use citenet_core::null_models::{degree_preserving_rewire, erdos_renyi_gnm, watts_strogatz, Verdict};
use citenet_core::pipeline;
use citenet_core::report::read_report;
use citenet_core::{DiGraph, UGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_edges(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// A random graph with at least one edge.
fn random_nonempty(rng: &mut ChaCha8Rng, n_max: usize) -> (usize, Vec<(usize, usize)>) {
    loop {
        let n = rng.gen_range(2..=n_max);
        let p = rng.gen_range(0.15..0.85);
        let edges = random_edges(rng, n, p);
        if !edges.is_empty() {
            return (n, edges);
        }
    }
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in edges {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Q = 1/(2m) * sum_ij [A_ij - k_i k_j / (2m)] delta(c_i, c_j)
fn modularity_by_definition(n: usize, edges: &[(usize, usize)], labels: &[usize]) -> f64 {
    let a = adjacency(n, edges);
    let k: Vec<f64> = a.iter().map(|row| row.iter().filter(|&&x| x).count() as f64).collect();
    let two_m = 2.0 * edges.len() as f64;
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += f64::from(u8::from(a[i][j])) - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            grow(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let mut prefix = vec![0];
    grow(&mut prefix, 0, n, &mut out);
    out
}

fn best_modularity(n: usize, edges: &[(usize, usize)]) -> f64 {
    all_partitions(n)
        .iter()
        .map(|p| modularity_by_definition(n, edges, p))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut steps = 0;
    for case in 0..200 {
        let (n, edges) = random_nonempty(&mut rng, 8);
        let ug = UGraph::from_edges(n, edges.iter().copied()).map_err(|e| e.to_string())?;
        let run = cnm_run(&ug).map_err(|e| e.to_string())?;
        let singletons: Vec<usize> = (0..n).collect();
        let q0 = modularity_by_definition(n, &edges, &singletons);
        ensure((run.initial_q - q0).abs() <= 1e-12, || format!("case {case}: initial Q {} vs {q0}", run.initial_q))?;
        for (i, s) in run.steps.iter().enumerate() {
            let q = modularity_by_definition(n, &edges, &run.labels_after(i + 1));
            ensure((s.q - q).abs() <= 1e-12, || format!("case {case} step {i}: tracked {} vs {q}", s.q))?;
            steps += 1;
        }
        let q_star = best_modularity(n, &edges);
        ensure(run.partition.q <= q_star + 1e-12, || {
            format!("case {case}: greedy {} exceeds optimum {q_star}", run.partition.q)
        })?;
        let bf = brute_force_best_partition(&ug).map_err(|e| e.to_string())?;
        ensure((bf.q - q_star).abs() <= 1e-12, || format!("case {case}: brute force {} vs {q_star}", bf.q))?;
    }
    let named: [(&str, usize, Vec<(usize, usize)>, f64); 3] = [
        ("two triangles", 6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 0.5),
        (
            "two triangles + bridge",
            6,
            vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
            5.0 / 14.0,
        ),
        ("K4", 4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 0.0),
    ];
    for (name, n, edges, expected) in named {
        let q_star = best_modularity(n, &edges);
        ensure((q_star - expected).abs() <= 1e-12, || format!("{name}: oracle optimum {q_star}"))?;
        let ug = UGraph::from_edges(n, edges).map_err(|e| e.to_string())?;
        let p = cnm_communities(&ug).map_err(|e| e.to_string())?;
        ensure((p.q - q_star).abs() <= 1e-12, || format!("{name}: greedy Q {} vs {q_star}", p.q))?;
    }
    Ok(format!("200 graphs, {steps} merge steps checked, 3 named graphs optimal"))
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for case in 0..100 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.9);
        let edges = random_edges(&mut rng, n, p);
        let a = adjacency(n, &edges);
        let ug = UGraph::from_edges(n, edges.iter().copied()).map_err(|e| e.to_string())?;
        let degree: Vec<usize> = a.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
        for k in 0..=n {
            let rich: Vec<usize> = (0..n).filter(|&v| degree[v] > k).collect();
            let expected = if rich.len() < 2 {
                None
            } else {
                let mut e = 0;
                for (i, &u) in rich.iter().enumerate() {
                    for &v in &rich[i + 1..] {
                        e += usize::from(a[u][v]);
                    }
                }
                Some(2.0 * e as f64 / (rich.len() * (rich.len() - 1)) as f64)
            };
            let got = metrics::rich_club_coefficient(&ug, k);
            let agree = match (got, expected) {
                (None, None) => true,
                (Some(x), Some(y)) => (x - y).abs() <= 1e-12,
                _ => false,
            };
            ensure(agree, || format!("case {case}, k = {k}: got {got:?}, expected {expected:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("100 graphs, {checked} (graph, k) pairs"))
}

fn transitivity_by_definition(n: usize, a: &[Vec<bool>]) -> f64 {
    let (mut closed, mut triads) = (0usize, 0usize);
    for v in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&u| a[v][u]).collect();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                triads += 1;
                closed += usize::from(a[x][y]);
            }
        }
    }
    closed as f64 / triads as f64
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut rewired = 0;
    for case in 0..1000u64 {
        let (n, edges) = loop {
            let n = rng.gen_range(4..=20);
            let p = rng.gen_range(0.2..0.7);
            let edges = random_edges(&mut rng, n, p);
            if edges.len() >= 2 {
                break (n, edges);
            }
        };
        let ug = UGraph::from_edges(n, edges.iter().copied()).map_err(|e| e.to_string())?;
        let out = degree_preserving_rewire(&ug, 10 * ug.edge_count(), case).map_err(|e| e.to_string())?;
        ensure(out.degrees() == ug.degrees(), || format!("rewiring case {case} changed degrees"))?;
        ensure(out.edge_count() == ug.edge_count(), || format!("rewiring case {case} changed m"))?;
        rewired += 1;
    }
    for seed in 0..1000u64 {
        let n = rng.gen_range(2..=60);
        let max = n * (n - 1) / 2;
        let m = rng.gen_range(0..=max);
        let g = erdos_renyi_gnm(n, m, seed).map_err(|e| e.to_string())?;
        ensure(g.edge_count() == m && g.node_count() == n, || {
            format!("ER({n}, {m}) seed {seed} gave {} edges", g.edge_count())
        })?;
    }
    let ws = watts_strogatz(10, 4, 0.0, 0).map_err(|e| e.to_string())?;
    let a = adjacency(10, &ws.edges().map(|(u, v)| (u.index(), v.index())).collect::<Vec<_>>());
    let t_oracle = transitivity_by_definition(10, &a);
    let t = metrics::global_clustering(&ws).transitivity;
    ensure((t - 0.5).abs() <= 1e-12 && (t_oracle - 0.5).abs() <= 1e-12, || {
        format!("WS(10, 4, 0) transitivity {t} (oracle {t_oracle})")
    })?;
    Ok(format!("{rewired} rewirings degree-exact, 1000 ER draws edge-exact, WS ring T = {t}"))
}

/// Sum over unordered pairs {s, t} of the share of shortest s-t paths
/// through v, by enumerating every simple path.
fn betweenness_by_enumeration(n: usize, a: &[Vec<bool>]) -> Vec<f64> {
    fn paths(a: &[Vec<bool>], at: usize, t: usize, seen: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == t {
            out.push(cur.clone());
            return;
        }
        for next in 0..a.len() {
            if a[at][next] && !seen[next] {
                seen[next] = true;
                cur.push(next);
                paths(a, next, t, seen, cur, out);
                cur.pop();
                seen[next] = false;
            }
        }
    }
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let mut all = Vec::new();
            let mut seen = vec![false; n];
            seen[s] = true;
            paths(a, s, t, &mut seen, &mut vec![s], &mut all);
            let shortest = all.iter().map(Vec::len).min().unwrap_or(0);
            let best: Vec<&Vec<usize>> = all.iter().filter(|p| p.len() == shortest).collect();
            for (v, bv) in b.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = best.iter().filter(|p| p.contains(&v)).count();
                *bv += through as f64 / best.len() as f64;
            }
        }
    }
    if n > 2 {
        let pairs = ((n - 1) * (n - 2)) as f64 / 2.0;
        for x in &mut b {
            *x /= pairs;
        }
    }
    b
}

fn connected(n: usize, a: &[Vec<bool>]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if a[u][v] && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    let mut worst = 0.0f64;
    while done < 100 {
        let n = rng.gen_range(2..=7);
        let p = rng.gen_range(0.3..0.9);
        let edges = random_edges(&mut rng, n, p);
        let a = adjacency(n, &edges);
        if !connected(n, &a) {
            continue;
        }
        let ug = UGraph::from_edges(n, edges.iter().copied()).map_err(|e| e.to_string())?;
        let g = DiGraph::from_undirected(&ug);
        let got = metrics::centrality_scores(&g, CentralityKind::Betweenness).values;
        let expected = betweenness_by_enumeration(n, &a);
        for v in 0..n {
            let d = (got[v] - expected[v]).abs();
            worst = worst.max(d);
            ensure(d <= 1e-9, || format!("graph {done}, node {v}: {} vs {}", got[v], expected[v]))?;
        }
        done += 1;
    }
    Ok(format!("100 connected graphs, max deviation {worst:.1e}"))
}

fn citenet(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_citenet"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "citenet {} exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn path(p: &Path) -> &str {
    p.to_str().expect("temp paths are UTF-8")
}

fn criterion_5(dir: &Path) -> Check {
    let fx = dir.join("fixture");
    citenet(&["fixture", "--out", path(&fx)])?;
    let edges = dir.join("edges.tsv");
    let report_path = dir.join("report.json");
    let registry = fx.join("registry.tsv");
    let start = Instant::now();
    citenet(&[
        "extract",
        "--corpus",
        path(&fx.join("corpus")),
        "--registry",
        path(&registry),
        "-o",
        path(&edges),
    ])?;
    citenet(&["analyze", path(&edges), "--registry", path(&registry), "-o", path(&report_path)])?;
    let elapsed = start.elapsed();

    let text = std::fs::read_to_string(&report_path).map_err(|e| e.to_string())?;
    let r = read_report(&text).map_err(|e| e.to_string())?;

    // independent recount from the edge list and sidecar
    let nodes = std::fs::read_to_string(dir.join("edges.nodes")).map_err(|e| e.to_string())?;
    let slugs: BTreeSet<&str> = nodes.lines().filter(|l| !l.is_empty()).collect();
    let tsv = std::fs::read_to_string(&edges).map_err(|e| e.to_string())?;
    let arcs: Vec<(&str, &str)> = tsv
        .lines()
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0], f[1])
        })
        .collect();
    let degree = |s: &str| {
        let out = arcs.iter().filter(|a| a.0 == s).count();
        let inn = arcs.iter().filter(|a| a.1 == s).count();
        (inn, out)
    };
    let isolated = slugs.iter().filter(|s| degree(s) == (0, 0)).count();
    let pendant = slugs.iter().filter(|s| {
        let (i, o) = degree(s);
        i + o == 1
    });
    let pendant = pendant.count();
    let sources: Vec<(&str, usize)> = slugs
        .iter()
        .filter(|s| degree(s).0 == 0 && degree(s).1 > 1)
        .map(|s| (*s, degree(s).1))
        .collect();

    ensure(slugs.len() == 52 && r.graph_summary.n == 52, || format!("n = {}", r.graph_summary.n))?;
    let count_role = |role: Role| r.roles.iter().filter(|e| e.role == role).count();
    ensure(isolated == 1 && count_role(Role::Isolated) == 1, || format!("isolated: recount {isolated}"))?;
    ensure(pendant == 1 && count_role(Role::Pendant) == 1, || format!("pendant: recount {pendant}"))?;
    ensure(sources.len() == 1 && sources[0].1 == 4 && count_role(Role::SourceOnly) == 1, || {
        format!("source-only: {sources:?}")
    })?;
    let rc = &r.rich_club;
    ensure(rc.members.len() == 10 && rc.overlap == 1, || {
        format!("rich club size {} overlap {}", rc.members.len(), rc.overlap)
    })?;
    let phi_norm = rc.normalization.as_ref().map(|n| n.phi_norm);
    ensure(
        rc.validated && rc.cohesion.internal_density > rc.graph_density && phi_norm.is_some_and(|p| p > 1.0),
        || format!("cohesion not validated: {:?}", rc.normalization),
    )?;
    ensure(r.assessment.verdict == Verdict::ConcentratedWorld, || {
        format!("verdict {:?}", r.assessment.verdict)
    })?;
    ensure(elapsed < Duration::from_secs(5), || format!("extract + analyze took {elapsed:.2?}"))?;
    Ok(format!(
        "{} arcs, club density {:.3} vs {:.3}, phi_norm {:.3}, extract + analyze {elapsed:.2?}",
        r.graph_summary.arcs,
        rc.cohesion.internal_density,
        rc.graph_density,
        phi_norm.unwrap_or(f64::NAN)
    ))
}

fn verdict_for(ug: &UGraph, seed: u64) -> Result<Verdict, String> {
    let g = DiGraph::from_undirected(ug);
    let config = PipelineConfig { seed, ..Default::default() };
    let club = metrics::rich_club_members(&g, config.k_citing, config.k_cited).map_err(|e| e.to_string())?;
    Ok(pipeline::assessment(&g, &club, &config).map_err(|e| e.to_string())?.verdict)
}

fn criterion_6() -> Check {
    let mut ws_other = Vec::new();
    for seed in 0..100u64 {
        let ws = watts_strogatz(52, 6, 0.1, seed).map_err(|e| e.to_string())?;
        let v = verdict_for(&ws, seed)?;
        if v != Verdict::SmallWorldLike {
            ws_other.push((seed, v));
        }
        let er = erdos_renyi_gnm(52, ws.edge_count(), seed).map_err(|e| e.to_string())?;
        let v = verdict_for(&er, seed)?;
        ensure(v != Verdict::ConcentratedWorld, || format!("ER seed {seed} judged concentrated_world"))?;
    }
    ensure(ws_other.is_empty(), || format!("WS seeds not small_world_like: {ws_other:?}"))?;
    Ok("100 WS inputs small_world_like, 100 ER inputs never concentrated_world".into())
}

fn criterion_7(dir: &Path) -> Check {
    let fx = dir.join("fixture");
    let edges = dir.join("edges.tsv");
    let registry = fx.join("registry.tsv");
    let mut reports = Vec::new();
    let mut dots = Vec::new();
    for run in 0..2 {
        let report = dir.join(format!("det{run}.json"));
        citenet(&["analyze", path(&edges), "--registry", path(&registry), "-o", path(&report)])?;
        let dot = citenet(&[
            "export",
            path(&edges),
            "--registry",
            path(&registry),
            "--report",
            path(&report),
        ])?;
        reports.push(std::fs::read(&report).map_err(|e| e.to_string())?);
        dots.push(dot);
    }
    ensure(reports[0] == reports[1], || "reports differ".into())?;
    ensure(dots[0] == dots[1], || "DOT files differ".into())?;
    ensure(!dots[0].is_empty(), || "empty DOT output".into())?;
    Ok(format!("report {} bytes, DOT {} bytes, identical", reports[0].len(), dots[0].len()))
}

const GOLDEN_REGISTRY: &str = "\
civil\tCode civil\tcode civil
penal\tCode pénal\tcode pénal
procedure-penale\tCode de procédure pénale\tcode de procédure pénale
procedure-civile\tCode de procédure civile\tcode de procédure civile
rural\tCode rural\tcode rural|code rural et de la pêche maritime
travail\tCode du travail\tcode du travail
legion\tCode de la Légion d'honneur\tcode de la Légion d'honneur
sante\tCode de la santé publique\tcode de la santé publique
cgct\tCode général des collectivités territoriales\tcode général des collectivités territoriales|CGCT
oeuvres\tCode des œuvres sociales\tcode des œuvres sociales
stvo\tStraßenverkehrsordnung\tStraßenverkehrsordnung
";

/// (citing code, text, expected [(cited slug, matched normalized alias)])
const GOLDEN: [(&str, &str, &[(&str, &str)]); 25] = [
    ("civil", "Vu le code civil et le code pénal.", &[("penal", "code penal")]),
    ("civil", "Le Code Civil, article 1240.", &[]),
    ("civil", "Voir le code penal.", &[("penal", "code penal")]),
    ("civil", "CODE DU TRAVAIL, article L. 1221-1", &[("travail", "code du travail")]),
    ("civil", "selon le code de procédure pénale", &[("procedure-penale", "code de procedure penale")]),
    ("civil", "le code de procédure civile s'applique", &[("procedure-civile", "code de procedure civile")]),
    (
        "civil",
        "code rural et de la pêche maritime",
        &[("rural", "code rural et de la peche maritime")],
    ),
    ("civil", "code rural, livre II", &[("rural", "code rural")]),
    ("penal", "les codes civils étrangers", &[]),
    ("penal", "un code civilisé", &[]),
    ("penal", "le précode civil", &[]),
    ("penal", "(code civil)", &[("civil", "code civil")]),
    ("civil", "code de la légion d\u{2019}honneur", &[("legion", "code de la legion d'honneur")]),
    ("civil", "CODE DE LA SANTÉ PUBLIQUE", &[("sante", "code de la sante publique")]),
    ("civil", "code pe\u{301}nal", &[("penal", "code penal")]),
    ("civil", "code\n  du \t travail", &[("travail", "code du travail")]),
    ("civil", "le CGCT prévoit", &[("cgct", "cgct")]),
    ("civil", "les CGCTS", &[]),
    ("civil", "Code des Œuvres sociales", &[("oeuvres", "code des oeuvres sociales")]),
    ("civil", "die Straßenverkehrsordnung", &[("stvo", "strassenverkehrsordnung")]),
    (
        "travail",
        "code civil, code civil et code pénal",
        &[("civil", "code civil"), ("civil", "code civil"), ("penal", "code penal")],
    ),
    ("procedure-penale", "le code de procédure pénale", &[]),
    ("civil", "le code de procédure", &[]),
    ("penal", "code civil1", &[("civil", "code civil")]),
    ("penal", "code civil-pénal", &[("civil", "code civil")]),
];

fn criterion_8() -> Check {
    let reg = load_registry(GOLDEN_REGISTRY).map_err(|e| e.to_string())?;
    for (i, (citing, text, expected)) in GOLDEN.iter().enumerate() {
        let doc = CodeDocument::new(*citing, *text);
        let got: Vec<(String, String)> = find_citations(&doc, &reg)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|m| (m.cited_slug, m.matched_alias))
            .collect();
        let want: Vec<(String, String)> = expected.iter().map(|(s, a)| (s.to_string(), a.to_string())).collect();
        ensure(got == want, || format!("snippet {} {text:?}: got {got:?}, expected {want:?}", i + 1))?;
    }
    Ok(format!("{} snippets", GOLDEN.len()))
}

fn criterion_9() -> Check {
    let ug = erdos_renyi_gnm(10_000, 50_000, 9).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let p = cnm_communities(&ug).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:.2?}"))?;
    Ok(format!("{} communities, Q = {:.4}, {elapsed:.2?}", p.community_count(), p.q))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<(u32, &str, Option<Duration>, Box<dyn Fn() -> Check>)> = vec![
        (1, "modularity oracle equivalence", Some(Duration::from_secs(30)), Box::new(criterion_1)),
        (2, "rich-club coefficient oracle", Some(Duration::from_secs(10)), Box::new(criterion_2)),
        (3, "null-model invariants", None, Box::new(criterion_3)),
        (4, "betweenness oracle", None, Box::new(criterion_4)),
        (5, "fixture structural reproduction", None, Box::new(|| criterion_5(dir.path()))),
        (6, "small-world / random discrimination", Some(Duration::from_secs(60)), Box::new(criterion_6)),
        (7, "determinism", None, Box::new(|| criterion_7(dir.path()))),
        (8, "extraction golden suite", None, Box::new(criterion_8)),
        (9, "greedy modularity at scale", None, Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (n, title, budget, check) in &criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(b)) = (&outcome, budget) {
            if elapsed > *b {
                outcome = Err(format!("runtime {elapsed:.2?} over the {b:?} budget"));
            }
        }
        match outcome {
            Ok(detail) => println!("criterion {n} PASS  {title} [{elapsed:.2?}]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL  {title} [{elapsed:.2?}]: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
