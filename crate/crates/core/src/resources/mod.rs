//! Declarative inputs: lexicons, substitution dictionaries, pinyin and
//! frequency tables, distractor statements and entity lists.
//!
//! Every resource is a UTF-8, tab-separated file. Blank lines and lines that
//! start with `#` are ignored (the vocabulary's `#features` header aside).
//! Each file ships embedded in the crate; a directory of replacements can be
//! supplied at run time and is searched first.

mod distractors;
mod lexicon;
mod tables;
mod vocabulary;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use distractors::{Distractor, DistractorSet};
pub use lexicon::{Candidate, EntityList, QuantLexicon, QuantRelation, Quantifier, SubstitutionLexicon};
pub use tables::{CharFrequency, PinyinTable};
pub use vocabulary::{FeatureSet, LexEntry, Pos, Vocabulary};

/// Frequency window for spelling substitutions, in occurrences per million.
pub const SPELLING_FREQ_RANGE: (u64, u64) = (100, 6000);

/// Resource files embedded at build time, by file name.
pub mod bundled {
    pub const VOCABULARY: &str = include_str!("../../resources/vocabulary.tsv");
    pub const TEMPLATES: &str = include_str!("../../resources/templates.tsv");
    pub const PINYIN: &str = include_str!("../../resources/pinyin.tsv");
    pub const CHAR_FREQ: &str = include_str!("../../resources/char_freq.tsv");
    pub const DISTRACTORS: &str = include_str!("../../resources/distractors.tsv");
    pub const ANTONYMS: &str = include_str!("../../resources/antonyms.tsv");
    pub const SYNONYMS: &str = include_str!("../../resources/synonyms.tsv");
    pub const QUANTIFIERS: &str = include_str!("../../resources/quantifiers.tsv");
    pub const NAMES: &str = include_str!("../../resources/names.tsv");
    pub const PLACES: &str = include_str!("../../resources/places.tsv");
    pub const NUMERIC_SEEDS: &str = include_str!("../../resources/numeric_seeds.txt");
    pub const MINI_CORPUS: &str = include_str!("../../resources/mini_corpus.jsonl");
    pub const DIAGNOSTIC_COUNTS: &str = include_str!("../../resources/diagnostic_counts.tsv");

    pub const FILES: &[(&str, &str)] = &[
        ("vocabulary.tsv", VOCABULARY),
        ("templates.tsv", TEMPLATES),
        ("pinyin.tsv", PINYIN),
        ("char_freq.tsv", CHAR_FREQ),
        ("distractors.tsv", DISTRACTORS),
        ("antonyms.tsv", ANTONYMS),
        ("synonyms.tsv", SYNONYMS),
        ("quantifiers.tsv", QUANTIFIERS),
        ("names.tsv", NAMES),
        ("places.tsv", PLACES),
        ("numeric_seeds.txt", NUMERIC_SEEDS),
        ("mini_corpus.jsonl", MINI_CORPUS),
        ("diagnostic_counts.tsv", DIAGNOSTIC_COUNTS),
    ];

    pub fn get(name: &str) -> Option<&'static str> {
        FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
    }
}

/// The text of one resource together with where it came from.
#[derive(Debug, Clone)]
pub struct ResourceText {
    pub origin: String,
    pub text: String,
}

impl ResourceText {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(ResourceText {
            origin: path.display().to_string(),
            text,
        })
    }

    pub fn bundled(name: &str) -> Result<Self> {
        let text = bundled::get(name).ok_or_else(|| Error::InvalidResource {
            resource: name.to_string(),
            message: "no bundled file of that name".into(),
        })?;
        Ok(ResourceText {
            origin: format!("bundled:{name}"),
            text: text.to_string(),
        })
    }

    /// An explicit path wins; otherwise `dir/name` if it exists; otherwise the
    /// embedded copy.
    pub fn locate(explicit: Option<&Path>, dir: Option<&Path>, name: &str) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::read(p);
        }
        if let Some(d) = dir {
            let p: PathBuf = d.join(name);
            if p.exists() {
                return Self::read(&p);
            }
        }
        Self::bundled(name)
    }

    pub fn digest(&self) -> String {
        digest(&self.text)
    }
}

/// Hex sha256 of a resource's bytes, recorded in dataset metadata.
pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Non-comment, non-blank lines with 1-based line numbers, split on tabs.
pub(crate) fn tsv_rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').collect()))
        }
    })
}

/// All characters other than `ch` that share its toneless syllable and whose
/// frequency lies in `lo..=hi`. Characters missing from the frequency table
/// count as frequency 0.
pub fn homophone_candidates(
    ch: char,
    pinyin: &PinyinTable,
    freq: &CharFrequency,
    (lo, hi): (u64, u64),
) -> Result<BTreeSet<char>> {
    let syllable = pinyin.syllable(ch).ok_or(Error::NoPronunciation(ch))?;
    Ok(pinyin
        .chars_with(syllable)
        .iter()
        .copied()
        .filter(|&c| c != ch)
        .filter(|&c| (lo..=hi).contains(&freq.count(c)))
        .collect())
}
