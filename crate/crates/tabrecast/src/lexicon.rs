//! Bundled, user-overridable word lists: the antonym lexicon that drives
//! antonym contradictions, the abbreviation map used by partial matching,
//! and the header-name list consulted by orientation detection.
//!
//! All three ship inside the binary (`data/*.tsv`, `data/*.txt`) and can be
//! replaced by files of the same format at run time.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};

/// Coarse part-of-speech classes carried by antonym entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PosTag {
    Adjective,
    Adverb,
    Comparative,
    Superlative,
}

impl PosTag {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "adj" => Some(Self::Adjective),
            "adv" => Some(Self::Adverb),
            "comparative" => Some(Self::Comparative),
            "superlative" => Some(Self::Superlative),
            _ => None,
        }
    }
}

/// Irregular comparative/superlative forms the suffix heuristic cannot see.
const IRREGULAR_SUPERLATIVES: [&str; 5] = ["most", "least", "best", "worst", "fewest"];
const IRREGULAR_COMPARATIVES: [&str; 6] = ["more", "less", "better", "worse", "fewer", "lesser"];
/// Closed adverb list for the tagger-free heuristic.
const ADVERBS: [&str; 6] = ["above", "below", "before", "after", "up", "down"];

/// Tagger-free heuristic pos-tag: irregular forms first, then suffix shape,
/// then the closed adverb list, defaulting to adjective.
pub fn heuristic_pos(token: &str) -> PosTag {
    if IRREGULAR_SUPERLATIVES.contains(&token) {
        PosTag::Superlative
    } else if IRREGULAR_COMPARATIVES.contains(&token) {
        PosTag::Comparative
    } else if token.len() > 3 && token.ends_with("est") {
        PosTag::Superlative
    } else if token.len() > 3 && token.ends_with("er") {
        PosTag::Comparative
    } else if ADVERBS.contains(&token) {
        PosTag::Adverb
    } else {
        PosTag::Adjective
    }
}

/// Antonym pairs keyed by (word, pos). An entry only fires when the token's
/// heuristic pos-tag agrees with the entry's tag, so "most" (superlative)
/// never picks up an adjective-sense antonym.
#[derive(Debug, Clone)]
pub struct AntonymLexicon {
    entries: HashMap<(String, PosTag), String>,
}

impl AntonymLexicon {
    /// The lexicon bundled with the crate.
    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/antonyms.tsv"))
            .expect("bundled antonym lexicon is well-formed")
    }

    /// Load a replacement lexicon from a TSV file (`word\tantonym\tpos`).
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (word, antonym, pos) = match (cols.next(), cols.next(), cols.next()) {
                (Some(w), Some(a), Some(p)) => (w, a, p),
                _ => {
                    return Err(Error::Usage(format!(
                        "antonym lexicon line {}: expected word<TAB>antonym<TAB>pos",
                        no + 1
                    )))
                }
            };
            let pos = PosTag::parse(pos.trim()).ok_or_else(|| {
                Error::Usage(format!(
                    "antonym lexicon line {}: unknown pos `{}`",
                    no + 1,
                    pos
                ))
            })?;
            entries.insert(
                (word.trim().to_lowercase(), pos),
                antonym.trim().to_lowercase(),
            );
        }
        Ok(Self { entries })
    }

    /// Antonym for `token` when an entry exists whose pos-tag matches the
    /// token's heuristic tag.
    pub fn antonym_of(&self, token: &str) -> Option<&str> {
        let pos = heuristic_pos(token);
        self.entries
            .get(&(token.to_string(), pos))
            .map(String::as_str)
    }

    /// Number of entries (used by examples and tests).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when the lexicon holds no entries.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Bidirectional abbreviation map in token space ("us" ↔ ["united",
/// "states"]). Both sides are stored lowercase and pre-tokenized.
#[derive(Debug, Clone)]
pub struct AbbrevMap {
    /// short token → expansion tokens
    expand: HashMap<String, Vec<String>>,
    /// expansion tokens (joined by space) → short token
    contract: HashMap<String, String>,
}

impl AbbrevMap {
    /// The abbreviation map bundled with the crate.
    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/abbreviations.tsv"))
            .expect("bundled abbreviation map is well-formed")
    }

    /// Load a replacement map from a TSV file (`short\texpanded`).
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn parse(text: &str) -> Result<Self> {
        let mut expand = HashMap::new();
        let mut contract = HashMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (short, long) = match (cols.next(), cols.next()) {
                (Some(s), Some(l)) => (s, l),
                _ => {
                    return Err(Error::Usage(format!(
                        "abbreviation map line {}: expected short<TAB>expanded",
                        no + 1
                    )))
                }
            };
            let short = short.trim().to_lowercase();
            let long_tokens: Vec<String> = long
                .trim()
                .to_lowercase()
                .split_whitespace()
                .map(str::to_string)
                .collect();
            contract.insert(long_tokens.join(" "), short.clone());
            expand.insert(short, long_tokens);
        }
        Ok(Self { expand, contract })
    }

    /// Expansion tokens for a short form.
    pub fn expansion(&self, short: &str) -> Option<&[String]> {
        self.expand.get(short).map(Vec::as_slice)
    }

    /// Short form for an expansion (tokens joined by single spaces).
    pub fn contraction(&self, expanded: &str) -> Option<&str> {
        self.contract.get(expanded).map(String::as_str)
    }
}

/// Header-name lexicon consulted by orientation detection.
#[derive(Debug, Clone)]
pub struct HeaderLexicon {
    words: HashSet<String>,
}

impl HeaderLexicon {
    /// The list bundled with the crate (lowercase singular head nouns).
    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/header_names.txt"))
    }

    /// Load a replacement list (one entry per line, `#` comments).
    pub fn load(path: &Path) -> Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Self { words }
    }

    /// True when `word` (already lowercase) is in the list after
    /// depluralization.
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word) || self.words.contains(depluralize(word))
    }
}

/// Light depluralizer: "seats" → "seat", "parties" → "party", otherwise the
/// input unchanged. Returns a borrowed or owned form via `String` only when
/// needed; callers pass lowercase input.
pub fn depluralize(word: &str) -> &str {
    if word.ends_with("ss") || word.len() < 3 {
        return word;
    }
    if let Some(stem) = word.strip_suffix("es") {
        if stem.ends_with("sh") || stem.ends_with("ch") || stem.ends_with('x') || stem.ends_with('s')
        {
            return stem;
        }
    }
    word.strip_suffix('s').unwrap_or(word)
}

/// Owned depluralizer that also folds "-ies" → "-y" ("parties" → "party").
pub fn depluralize_owned(word: &str) -> String {
    if word.len() > 3 {
        if let Some(stem) = word.strip_suffix("ies") {
            return format!("{stem}y");
        }
    }
    depluralize(word).to_string()
}

/// The three lexicons an engine works with, bundled or overridden together.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub antonyms: AntonymLexicon,
    pub abbreviations: AbbrevMap,
    pub headers: HeaderLexicon,
}

impl Default for Lexicons {
    fn default() -> Self {
        Self {
            antonyms: AntonymLexicon::bundled(),
            abbreviations: AbbrevMap::bundled(),
            headers: HeaderLexicon::bundled(),
        }
    }
}
