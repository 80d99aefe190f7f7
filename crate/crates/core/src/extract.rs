//! Registry-driven citation extraction.
//!
//! A [`CodeRegistry`] lists every code and the surface forms (aliases) that
//! denote it in running text. [`find_citations`] scans one document for alias
//! occurrences and [`build_edge_list`] aggregates a corpus into the citing ->
//! cited edge list. Matching is done on normalized text: lowercase, accents
//! folded, apostrophes unified, whitespace collapsed.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("input is not valid UTF-8 (byte {0})")]
    InvalidEncoding(usize),
    #[error("malformed registry line {line}: {reason}")]
    MalformedRegistry { line: usize, reason: String },
    #[error("alias `{alias}` claimed by both `{first}` and `{second}`")]
    AmbiguousAlias {
        alias: String,
        first: String,
        second: String,
    },
    #[error("duplicate registry slug `{0}`")]
    DuplicateSlug(String),
    #[error("document slug `{0}` is not in the registry")]
    UnknownDocumentSlug(String),
    #[error("corpus holds two documents for `{0}`")]
    DuplicateDocument(String),
}

pub type Result<T> = std::result::Result<T, ExtractError>;

fn fold_char(c: char, out: &mut String) {
    match c {
        '\u{2019}' | '\u{2018}' | '\u{02BC}' | '\u{00B4}' | '`' | '\u{2032}' => out.push('\''),
        '\u{0153}' => out.push_str("oe"),
        '\u{00E6}' => out.push_str("ae"),
        '\u{00DF}' => out.push_str("ss"),
        c if is_combining_mark(c) => {}
        c => out.push(c),
    }
}

/// Lowercase, fold diacritics, unify apostrophes and collapse whitespace runs
/// to a single space.
pub fn normalize_text(text: &str) -> String {
    let mut folded = String::with_capacity(text.len());
    for c in text.chars().flat_map(char::to_lowercase).nfd() {
        fold_char(c, &mut folded);
    }
    let mut out = String::with_capacity(folded.len());
    let mut in_space = false;
    for c in folded.chars() {
        if c.is_whitespace() {
            if !in_space {
                out.push(' ');
            }
            in_space = true;
        } else {
            out.push(c);
            in_space = false;
        }
    }
    out
}

pub fn normalize_bytes(bytes: &[u8]) -> Result<String> {
    std::str::from_utf8(bytes)
        .map(normalize_text)
        .map_err(|e| ExtractError::InvalidEncoding(e.valid_up_to()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryEntry {
    pub slug: String,
    pub display_name: String,
    /// Normalized surface forms.
    pub aliases: Vec<String>,
}

#[derive(Default, Debug)]
struct TrieNode {
    next: HashMap<u8, usize>,
    /// Entry index when an alias ends here.
    terminal: Option<usize>,
}

/// The universe of codes and their textual aliases.
#[derive(Debug)]
pub struct CodeRegistry {
    entries: Vec<RegistryEntry>,
    by_slug: HashMap<String, usize>,
    trie: Vec<TrieNode>,
}

fn valid_slug(slug: &str) -> bool {
    !slug.is_empty()
        && slug
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

impl CodeRegistry {
    pub fn new(entries: Vec<RegistryEntry>) -> Result<Self> {
        let mut reg = Self {
            entries: Vec::with_capacity(entries.len()),
            by_slug: HashMap::new(),
            trie: vec![TrieNode::default()],
        };
        for entry in entries {
            reg.push(entry, 0)?;
        }
        Ok(reg)
    }

    fn push(&mut self, entry: RegistryEntry, line: usize) -> Result<()> {
        if !valid_slug(&entry.slug) {
            return Err(ExtractError::MalformedRegistry {
                line,
                reason: format!("invalid slug `{}`", entry.slug),
            });
        }
        if self.by_slug.contains_key(&entry.slug) {
            return Err(ExtractError::DuplicateSlug(entry.slug));
        }
        let idx = self.entries.len();
        let mut aliases = Vec::with_capacity(entry.aliases.len());
        for raw in &entry.aliases {
            let alias = normalize_text(raw.trim());
            if alias.trim().is_empty() {
                return Err(ExtractError::MalformedRegistry {
                    line,
                    reason: format!("empty alias for `{}`", entry.slug),
                });
            }
            if aliases.contains(&alias) {
                continue;
            }
            self.insert_alias(&alias, idx, &entry.slug)?;
            aliases.push(alias);
        }
        self.by_slug.insert(entry.slug.clone(), idx);
        self.entries.push(RegistryEntry { aliases, ..entry });
        Ok(())
    }

    fn insert_alias(&mut self, alias: &str, idx: usize, slug: &str) -> Result<()> {
        let mut node = 0;
        for &b in alias.as_bytes() {
            node = match self.trie[node].next.get(&b) {
                Some(&next) => next,
                None => {
                    self.trie.push(TrieNode::default());
                    let next = self.trie.len() - 1;
                    self.trie[node].next.insert(b, next);
                    next
                }
            };
        }
        match self.trie[node].terminal {
            Some(other) if other != idx => Err(ExtractError::AmbiguousAlias {
                alias: alias.to_string(),
                first: self.entries[other].slug.clone(),
                second: slug.to_string(),
            }),
            _ => {
                self.trie[node].terminal = Some(idx);
                Ok(())
            }
        }
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, slug: &str) -> Option<&RegistryEntry> {
        self.by_slug.get(slug).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, slug: &str) -> bool {
        self.by_slug.contains_key(slug)
    }

    /// Longest alias starting at byte `start` of `text` whose end sits on a
    /// word boundary. Returns (entry index, end offset).
    fn longest_at(&self, text: &str, start: usize) -> Option<(usize, usize)> {
        let bytes = text.as_bytes();
        let mut node = 0;
        let mut best = None;
        for (i, b) in bytes[start..].iter().enumerate() {
            match self.trie[node].next.get(b) {
                Some(&next) => node = next,
                None => break,
            }
            let end = start + i + 1;
            if let Some(idx) = self.trie[node].terminal {
                if text.is_char_boundary(end) && is_word_boundary(text, end) {
                    best = Some((idx, end));
                }
            }
        }
        best
    }
}

/// Parses the registry file: `slug<TAB>display_name<TAB>alias1|alias2|...`,
/// `#` comment lines and blank lines ignored.
pub fn load_registry(source: &str) -> Result<CodeRegistry> {
    let mut reg = CodeRegistry::new(Vec::new())?;
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 3 {
            return Err(ExtractError::MalformedRegistry {
                line,
                reason: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        }
        let entry = RegistryEntry {
            slug: fields[0].trim().to_string(),
            display_name: fields[1].trim().to_string(),
            aliases: fields[2].split('|').map(str::to_string).collect(),
        };
        if entry.display_name.is_empty() {
            return Err(ExtractError::MalformedRegistry {
                line,
                reason: "empty display name".into(),
            });
        }
        reg.push(entry, line)?;
    }
    Ok(reg)
}

/// Writes a registry back in the line format accepted by [`load_registry`].
pub fn write_registry(registry: &CodeRegistry) -> String {
    let mut out = String::new();
    for e in registry.entries() {
        out.push_str(&format!("{}\t{}\t{}\n", e.slug, e.display_name, e.aliases.join("|")));
    }
    out
}

fn is_letter(c: Option<char>) -> bool {
    c.is_some_and(char::is_alphabetic)
}

/// A boundary is any position not strictly inside a run of letters.
fn is_word_boundary(text: &str, pos: usize) -> bool {
    let before = text[..pos].chars().next_back();
    let after = text[pos..].chars().next();
    !(is_letter(before) && is_letter(after))
}

#[derive(Debug, Clone)]
pub struct CodeDocument {
    pub slug: String,
    pub text: String,
}

impl CodeDocument {
    pub fn new(slug: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            slug: slug.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub cited_slug: String,
    /// Offset into the normalized text.
    pub byte_offset: usize,
    pub matched_alias: String,
}

/// Scans `doc` for citations of other codes.
///
/// At each word-boundary position the longest alias that also ends on a
/// boundary wins and the scan resumes after it. Self-mentions are consumed
/// but not reported.
pub fn find_citations(doc: &CodeDocument, registry: &CodeRegistry) -> Result<Vec<Mention>> {
    let own = *registry
        .by_slug
        .get(&doc.slug)
        .ok_or_else(|| ExtractError::UnknownDocumentSlug(doc.slug.clone()))?;
    let text = normalize_text(&doc.text);
    let mut mentions = Vec::new();
    let mut pos = 0;
    while pos < text.len() {
        if is_word_boundary(&text, pos) {
            if let Some((idx, end)) = registry.longest_at(&text, pos) {
                if idx != own {
                    mentions.push(Mention {
                        cited_slug: registry.entries[idx].slug.clone(),
                        byte_offset: pos,
                        matched_alias: text[pos..end].to_string(),
                    });
                }
                pos = end;
                continue;
            }
        }
        pos += text[pos..].chars().next().map_or(1, char::len_utf8);
    }
    Ok(mentions)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub citing: String,
    pub cited: String,
    pub count: u64,
}

/// Citing -> cited records sorted by (citing, cited).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub records: Vec<EdgeRecord>,
}

impl EdgeList {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `citing<TAB>cited<TAB>count` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{}\t{}\t{}\n", r.citing, r.cited, r.count));
        }
        out
    }
}

pub fn build_edge_list(corpus: &[CodeDocument], registry: &CodeRegistry) -> Result<EdgeList> {
    let mut seen = BTreeSet::new();
    for doc in corpus {
        if !registry.contains(&doc.slug) {
            return Err(ExtractError::UnknownDocumentSlug(doc.slug.clone()));
        }
        if !seen.insert(doc.slug.as_str()) {
            return Err(ExtractError::DuplicateDocument(doc.slug.clone()));
        }
    }
    let per_doc: Vec<Vec<Mention>> = corpus
        .par_iter()
        .map(|doc| find_citations(doc, registry))
        .collect::<Result<_>>()?;

    let mut counts: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    for (doc, mentions) in corpus.iter().zip(&per_doc) {
        for m in mentions {
            *counts.entry((doc.slug.as_str(), m.cited_slug.as_str())).or_insert(0) += 1;
        }
    }
    Ok(EdgeList {
        records: counts
            .into_iter()
            .map(|((citing, cited), count)| EdgeRecord {
                citing: citing.to_string(),
                cited: cited.to_string(),
                count,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn registry() -> CodeRegistry {
        load_registry(
            "# test registry\n\
             civil\tCode civil\tcode civil\n\
             penal\tCode pénal\tcode pénal\n\
             sante\tCode de la santé\tcode de la santé\n\
             sante-publique\tCode de la santé publique\tcode de la santé publique|csp\n",
        )
        .unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_text("Code Pénal"), "code penal");
        assert_eq!(
            normalize_text("code   de  la\nsanté publique"),
            "code de la sante publique"
        );
        assert_eq!(normalize_text(""), "");
        assert_eq!(normalize_text("L\u{2019}ŒUVRE Ça"), "l'oeuvre ca");
        assert_eq!(normalize_bytes(&[0x63, 0xff]), Err(ExtractError::InvalidEncoding(1)));
    }

    #[test]
    fn registry_loading() {
        let reg = registry();
        assert_eq!(reg.len(), 4);
        assert_eq!(reg.get("penal").unwrap().aliases, vec!["code penal"]);

        let err = load_registry("a\tA\tcode general\nb\tB\tCode Général\n").unwrap_err();
        assert!(matches!(err, ExtractError::AmbiguousAlias { .. }));
        assert_eq!(
            load_registry("a\tA\tx\na\tB\ty\n").unwrap_err(),
            ExtractError::DuplicateSlug("a".into())
        );
        assert!(matches!(
            load_registry("a\tA\n").unwrap_err(),
            ExtractError::MalformedRegistry { line: 1, .. }
        ));
        assert!(matches!(
            load_registry("a\tA\tx||y\n").unwrap_err(),
            ExtractError::MalformedRegistry { .. }
        ));
    }

    #[test]
    fn single_entry_registry_yields_no_edges() {
        let reg = load_registry("civil\tCode civil\tcode civil\n").unwrap();
        let docs = [CodeDocument::new("civil", "le code civil, encore le code civil")];
        assert!(build_edge_list(&docs, &reg).unwrap().is_empty());
    }

    #[test]
    fn basic_mentions() {
        let reg = registry();
        let doc = CodeDocument::new("civil", "les peines prévues par le code pénal");
        let m = find_citations(&doc, &reg).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].cited_slug, "penal");
        assert_eq!(m[0].matched_alias, "code penal");
        assert_eq!(m[0].byte_offset, 26);

        let doc = CodeDocument::new("civil", "le code civil dispose");
        assert!(find_citations(&doc, &reg).unwrap().is_empty());

        let doc = CodeDocument::new("civil", "voir le code de la santé publique");
        let m = find_citations(&doc, &reg).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].cited_slug, "sante-publique");

        let doc = CodeDocument::new("nope", "");
        assert_eq!(
            find_citations(&doc, &reg).unwrap_err(),
            ExtractError::UnknownDocumentSlug("nope".into())
        );
    }

    #[test]
    fn self_mention_is_consumed() {
        // the shorter "code de la sante" must not surface inside a self-mention
        let reg = registry();
        let doc = CodeDocument::new("sante-publique", "le code de la santé publique");
        assert!(find_citations(&doc, &reg).unwrap().is_empty());
    }

    #[test]
    fn word_boundaries() {
        let reg = registry();
        let doc = CodeDocument::new("penal", "un code civilisé; pas de code civil2");
        let m = find_citations(&doc, &reg).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].byte_offset, 25);
    }

    #[test]
    fn edge_list_aggregation() {
        let reg = registry();
        let docs = [
            CodeDocument::new("penal", "code civil, code civil et code civil; code pénal"),
            CodeDocument::new("civil", "code pénal"),
        ];
        let el = build_edge_list(&docs, &reg).unwrap();
        assert_eq!(el.to_tsv(), "civil\tpenal\t1\npenal\tcivil\t3\n");

        let dup = [CodeDocument::new("civil", ""), CodeDocument::new("civil", "")];
        assert_eq!(
            build_edge_list(&dup, &reg).unwrap_err(),
            ExtractError::DuplicateDocument("civil".into())
        );
        assert!(build_edge_list(&[], &reg).unwrap().is_empty());
    }
}
