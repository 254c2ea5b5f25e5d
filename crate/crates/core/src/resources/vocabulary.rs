use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::tsv_rows;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Pronoun,
    LocativeNoun,
    Other,
}

impl Pos {
    pub const ALL: [Pos; 7] = [
        Pos::Noun,
        Pos::Verb,
        Pos::Adjective,
        Pos::Adverb,
        Pos::Pronoun,
        Pos::LocativeNoun,
        Pos::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adjective",
            Pos::Adverb => "adverb",
            Pos::Pronoun => "pronoun",
            Pos::LocativeNoun => "locative-noun",
            Pos::Other => "other",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pos::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown part of speech {s:?}"))
    }
}

/// A set of features, as bits indexed by the vocabulary's feature registry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct FeatureSet(u64);

impl FeatureSet {
    pub const EMPTY: FeatureSet = FeatureSet(0);

    pub fn contains_all(self, other: FeatureSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains(*i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub surface: String,
    pub pos: Pos,
    pub features: FeatureSet,
}

#[derive(Debug, Clone)]
pub struct Vocabulary {
    features: Vec<String>,
    feature_index: HashMap<String, usize>,
    entries: Vec<LexEntry>,
    by_pos: BTreeMap<Pos, Vec<usize>>,
}

const MAX_FEATURES: usize = 64;

impl Vocabulary {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses a vocabulary file. The first `#features` line declares the
    /// feature registry; rows are `surface<TAB>pos<TAB>f1,f2,...`.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut features: Vec<String> = Vec::new();
        let mut feature_index = HashMap::new();
        let mut declared = false;

        for (i, line) in text.lines().enumerate() {
            if let Some(rest) = line.strip_prefix("#features") {
                if declared {
                    return Err(Error::load(origin, i + 1, "second #features line"));
                }
                declared = true;
                for name in split_list(rest.trim_start_matches('\t')) {
                    if feature_index.insert(name.to_string(), features.len()).is_some() {
                        return Err(Error::load(origin, i + 1, format!("feature {name} declared twice")));
                    }
                    features.push(name.to_string());
                }
                if features.len() > MAX_FEATURES {
                    return Err(Error::load(
                        origin,
                        i + 1,
                        format!("at most {MAX_FEATURES} features are supported"),
                    ));
                }
            }
        }
        if !declared {
            return Err(Error::load(origin, 1, "missing #features header"));
        }

        let mut vocab = Vocabulary {
            features,
            feature_index,
            entries: Vec::new(),
            by_pos: BTreeMap::new(),
        };
        for (line, cols) in tsv_rows(text) {
            if cols == ["surface", "pos", "features"] {
                continue;
            }
            if cols.len() < 2 || cols.len() > 3 {
                return Err(Error::load(origin, line, "expected surface, pos and features columns"));
            }
            let surface = cols[0].trim();
            if surface.is_empty() {
                return Err(Error::load(origin, line, "empty surface"));
            }
            let pos: Pos = cols[1]
                .trim()
                .parse()
                .map_err(|m: String| Error::load(origin, line, m))?;
            let names: Vec<&str> = cols.get(2).map(|s| split_list(s).collect()).unwrap_or_default();
            let features = vocab.feature_set(&names).map_err(|m| Error::load(origin, line, m))?;
            vocab.push(LexEntry {
                surface: surface.to_string(),
                pos,
                features,
            });
        }
        Ok(vocab)
    }

    fn push(&mut self, entry: LexEntry) {
        self.by_pos.entry(entry.pos).or_default().push(self.entries.len());
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.features
    }

    pub fn feature_id(&self, name: &str) -> Option<usize> {
        self.feature_index.get(name).copied()
    }

    /// Resolves feature names against the registry.
    pub fn feature_set(&self, names: &[&str]) -> Result<FeatureSet, String> {
        let mut set = FeatureSet::EMPTY;
        for name in names {
            let id = self
                .feature_id(name)
                .ok_or_else(|| format!("unknown feature {name:?}"))?;
            set.insert(id);
        }
        Ok(set)
    }

    pub fn has_feature(&self, entry: &LexEntry, name: &str) -> bool {
        self.feature_id(name).is_some_and(|id| entry.features.contains(id))
    }

    pub fn feature_list(&self, set: FeatureSet) -> Vec<&str> {
        set.indices().map(|i| self.features[i].as_str()).collect()
    }

    /// Entries with the given POS carrying every required feature.
    pub fn lookup(&self, pos: Pos, required: FeatureSet) -> Vec<&LexEntry> {
        self.by_pos
            .get(&pos)
            .into_iter()
            .flatten()
            .map(|&i| &self.entries[i])
            .filter(|e| e.features.contains_all(required))
            .collect()
    }

    pub fn find(&self, surface: &str, pos: Pos) -> Option<&LexEntry> {
        self.by_pos
            .get(&pos)?
            .iter()
            .map(|&i| &self.entries[i])
            .find(|e| e.surface == surface)
    }

    /// Whether relation `rel` holds from `a` to `b`: `a` carries some
    /// feature `rel_X` for which `b` carries `X`.
    pub fn agrees(&self, rel: &str, a: &LexEntry, b: &LexEntry) -> bool {
        let prefix = format!("{rel}_");
        a.features.indices().any(|i| {
            self.features[i]
                .strip_prefix(&prefix)
                .and_then(|x| self.feature_id(x))
                .is_some_and(|x| b.features.contains(x))
        })
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|f| !f.is_empty())
}
