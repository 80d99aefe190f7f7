//! A synthetic corpus of 52 French-style legal codes.
//!
//! The texts are generated, not real legislation. The citation pattern is
//! designed so that the full pipeline has a known answer: a ten-member rich
//! club (five heavy citers, six heavily cited, one in both rankings), three
//! thematic communities of 13, 12 and 12 codes once the club is removed, one
//! isolated code, one pendant code and one code that cites without ever
//! being cited.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::extract::CodeDocument;

struct Code {
    slug: &'static str,
    name: &'static str,
    /// Extra surface forms besides the display name.
    aliases: &'static [&'static str],
}

const fn code(slug: &'static str, name: &'static str, aliases: &'static [&'static str]) -> Code {
    Code { slug, name, aliases }
}

const CODES: [Code; 52] = [
    code("collectivites-territoriales", "Code général des collectivités territoriales", &["CGCT"]),
    code("environnement", "Code de l'environnement", &[]),
    code("securite-sociale", "Code de la sécurité sociale", &[]),
    code("rural", "Code rural", &["code rural et de la pêche maritime"]),
    code("sante-publique", "Code de la santé publique", &[]),
    code("penal", "Code pénal", &[]),
    code("civil", "Code civil", &[]),
    code("procedure-penale", "Code de procédure pénale", &[]),
    code("travail", "Code du travail", &[]),
    code("commerce", "Code de commerce", &[]),
    code(
        "legion-honneur",
        "Code de la Légion d'honneur et de la médaille militaire",
        &["code de la légion d’honneur"],
    ),
    code(
        "instruments-monetaires",
        "Code des instruments monétaires et des médailles",
        &["code des instruments monétaires"],
    ),
    code("artisanat", "Code de l'artisanat", &[]),
    code("urbanisme", "Code de l'urbanisme", &[]),
    code("construction-habitation", "Code de la construction et de l'habitation", &[]),
    code("forestier", "Code forestier", &[]),
    code("minier", "Code minier", &[]),
    code("expropriation", "Code de l'expropriation pour cause d'utilité publique", &[]),
    code("voirie-routiere", "Code de la voirie routière", &[]),
    code("ports-maritimes", "Code des ports maritimes", &[]),
    code("tourisme", "Code du tourisme", &[]),
    code("energie", "Code de l'énergie", &[]),
    code("patrimoine", "Code du patrimoine", &[]),
    code(
        "propriete-personnes-publiques",
        "Code général de la propriété des personnes publiques",
        &["CGPPP"],
    ),
    code(
        "domaine-public-fluvial",
        "Code du domaine public fluvial et de la navigation intérieure",
        &[],
    ),
    code("transports", "Code des transports", &[]),
    code("action-sociale-familles", "Code de l'action sociale et des familles", &[]),
    code("education", "Code de l'éducation", &[]),
    code("sport", "Code du sport", &[]),
    code("mutualite", "Code de la mutualité", &[]),
    code("assurances", "Code des assurances", &[]),
    code("consommation", "Code de la consommation", &[]),
    code("propriete-intellectuelle", "Code de la propriété intellectuelle", &[]),
    code(
        "postes-communications",
        "Code des postes et des communications électroniques",
        &[],
    ),
    code("recherche", "Code de la recherche", &[]),
    code("service-national", "Code du service national", &[]),
    code(
        "entree-sejour-etrangers",
        "Code de l'entrée et du séjour des étrangers et du droit d'asile",
        &["CESEDA"],
    ),
    code("industrie-cinematographique", "Code de l'industrie cinématographique", &[]),
    code("justice-administrative", "Code de justice administrative", &[]),
    code("juridictions-financieres", "Code des juridictions financières", &[]),
    code("marches-publics", "Code des marchés publics", &[]),
    code("electoral", "Code électoral", &[]),
    code("defense", "Code de la défense", &[]),
    code(
        "pensions-civiles-militaires",
        "Code des pensions civiles et militaires de retraite",
        &[],
    ),
    code(
        "pensions-militaires-invalidite",
        "Code des pensions militaires d'invalidité et des victimes de la guerre",
        &[],
    ),
    code("douanes", "Code des douanes", &[]),
    code("organisation-judiciaire", "Code de l'organisation judiciaire", &[]),
    code("procedure-civile", "Code de procédure civile", &[]),
    code("communes", "Code des communes", &[]),
    code("route", "Code de la route", &[]),
    code("aviation-civile", "Code de l'aviation civile", &[]),
    code("marine-marchande", "Code disciplinaire et pénal de la marine marchande", &[]),
];

const HEAVY_CITERS: [&str; 4] = ["collectivites-territoriales", "environnement", "securite-sociale", "rural"];
const BOTH: &str = "sante-publique";
const HEAVILY_CITED: [&str; 5] = ["penal", "civil", "procedure-penale", "travail", "commerce"];

fn slice(from: usize, to: usize) -> &'static [Code] {
    &CODES[from..to]
}

fn community(i: usize) -> &'static [Code] {
    match i {
        0 => slice(13, 26),
        1 => slice(26, 38),
        _ => slice(38, 50),
    }
}

/// Rich-club members in a fixed order.
pub fn rich_club_slugs() -> Vec<&'static str> {
    let mut out: Vec<&str> = HEAVY_CITERS.to_vec();
    out.push(BOTH);
    out.extend(HEAVILY_CITED);
    out
}

/// The three designed communities, as slug lists.
pub fn community_slugs() -> Vec<Vec<&'static str>> {
    (0..3).map(|i| community(i).iter().map(|c| c.slug).collect()).collect()
}

/// Designed arcs in citing order: for each citing code, its targets.
fn targets() -> BTreeMap<&'static str, Vec<&'static str>> {
    let mut t: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut add = |u: &'static str, v: &'static str| t.entry(u).or_default().push(v);
    let club = rich_club_slugs();

    let mut global = 0;
    for ci in 0..3 {
        let members = community(ci);
        let s = members.len();
        for (j, c) in members.iter().enumerate() {
            for off in [1, 2, 5] {
                add(c.slug, members[(j + off) % s].slug);
            }
            let g = global + j;
            add(c.slug, "penal");
            if g % 2 == 0 {
                add(c.slug, "civil");
            }
            if g % 3 == 0 {
                add(c.slug, "procedure-penale");
            }
            if g % 4 == 1 {
                add(c.slug, "travail");
            }
            if g % 5 == 2 {
                add(c.slug, "commerce");
            }
            if g % 6 == 3 {
                add(c.slug, BOTH);
            }
        }
        global += s;
    }
    add(community(0)[0].slug, community(1)[0].slug);
    add(community(1)[3].slug, community(2)[3].slug);
    add(community(2)[6].slug, community(0)[6].slug);

    for &u in HEAVY_CITERS.iter().chain([&BOTH]) {
        for &v in &club {
            if u != v {
                add(u, v);
            }
        }
    }
    let within_cited = [
        ("civil", "penal"),
        ("penal", "procedure-penale"),
        ("procedure-penale", "penal"),
        ("procedure-penale", "civil"),
        ("procedure-penale", "travail"),
        ("procedure-penale", "commerce"),
        ("travail", "penal"),
        ("travail", "civil"),
        ("travail", "commerce"),
        ("commerce", "penal"),
        ("commerce", "civil"),
    ];
    for (u, v) in within_cited {
        add(u, v);
    }

    let a = community(0);
    let b = community(1);
    let c = community(2);
    for x in c.iter().chain(&a[0..4]) {
        add("collectivites-territoriales", x.slug);
    }
    for x in &a[0..10] {
        add("environnement", x.slug);
    }
    for x in &a[3..13] {
        add("rural", x.slug);
    }
    for x in &b[0..8] {
        add(BOTH, x.slug);
    }
    for x in &b[4..12] {
        add("securite-sociale", x.slug);
    }
    add("environnement", "aviation-civile");
    add("securite-sociale", "marine-marchande");
    for v in ["commerce", "travail", "securite-sociale", "civil"] {
        add("artisanat", v);
    }
    add("instruments-monetaires", "commerce");
    for v in ["penal", "environnement"] {
        add("aviation-civile", v);
    }
    for v in ["penal", "travail", "procedure-penale"] {
        add("marine-marchande", v);
    }
    t
}

fn position(slug: &str) -> usize {
    CODES.iter().position(|c| c.slug == slug).expect("fixture slug")
}

fn mention_count(citing: usize, j: usize) -> u64 {
    1 + ((citing + 2 * j) % 3) as u64
}

/// Designed `(citing, cited, count)` triples, sorted.
pub fn designed_edges() -> Vec<(&'static str, &'static str, u64)> {
    let mut out = Vec::new();
    for (u, vs) in targets() {
        let i = position(u);
        for (j, v) in vs.into_iter().enumerate() {
            out.push((u, v, mention_count(i, j)));
        }
    }
    out.sort_unstable();
    out
}

pub fn registry_tsv() -> String {
    let mut out = String::from("# slug\tdisplay name\taliases (|-separated)\n");
    for c in &CODES {
        let mut aliases = vec![c.name];
        aliases.extend(c.aliases);
        let _ = writeln!(out, "{}\t{}\t{}", c.slug, c.name, aliases.join("|"));
    }
    out
}

const TEMPLATES: [&str; 5] = [
    "Les dispositions de l'article L. {a} du {code} sont applicables.",
    "Conformément à l'article R. {a} du {code}, l'autorité compétente statue dans un délai de deux mois.",
    "Sous réserve des articles {a} et {b} du {code}, la demande est instruite par le préfet.",
    "Il est renvoyé au {code} pour les modalités d'application du présent chapitre.",
    "Les infractions sont constatées dans les conditions prévues par le {code} (article {a}).",
];

fn lowercase_initial(s: &str) -> String {
    match s.strip_prefix("Code") {
        Some(rest) => format!("code{rest}"),
        None => s.to_string(),
    }
}

fn document(i: usize, targets: &[&str]) -> String {
    let me = &CODES[i];
    let mut text = String::new();
    let _ = writeln!(text, "{}\n\nPartie législative (texte synthétique)\n", me.name);
    let _ = writeln!(
        text,
        "Article 1er. Le présent code, dit {}, rassemble les dispositions relatives à son objet.",
        lowercase_initial(me.name)
    );
    for (j, v) in targets.iter().enumerate() {
        let c = &CODES[position(v)];
        let forms: Vec<&str> = std::iter::once(c.name).chain(c.aliases.iter().copied()).collect();
        let _ = writeln!(text, "\nChapitre {}", j + 1);
        for rep in 0..mention_count(i, j) as usize {
            let form = forms[(rep + j) % forms.len()];
            let form = if (i + j + rep).is_multiple_of(2) {
                lowercase_initial(form)
            } else {
                form.to_string()
            };
            let a = 100 + (i * 13 + j * 7 + rep * 3) % 900;
            let sentence = TEMPLATES[(i + j + rep) % TEMPLATES.len()]
                .replace("{code}", &form)
                .replace("{a}", &a.to_string())
                .replace("{b}", &(a + 1).to_string());
            let _ = writeln!(text, "Article {}-{}. {}", j + 1, rep + 1, sentence);
        }
    }
    let _ = writeln!(
        text,
        "\nArticle final. Les autres codes et lois demeurent réservés. Les modifications \
         du {} entrent en vigueur le premier jour du mois suivant.",
        me.name
    );
    text
}

pub fn documents() -> Vec<CodeDocument> {
    let t = targets();
    CODES
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let empty = Vec::new();
            let vs = t.get(c.slug).unwrap_or(&empty);
            CodeDocument::new(c.slug, document(i, vs))
        })
        .collect()
}

pub const README: &str = "Synthetic corpus of 52 legal codes.\n\n\
The texts are generated and are not real legislation. Each file is named\n\
after the slug of a code in registry.tsv. Citations follow a designed\n\
pattern so that analyses of this corpus have known answers.\n";
