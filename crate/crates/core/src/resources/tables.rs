use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use super::tsv_rows;
use crate::error::{Error, Result};

/// Character → toneless pinyin syllable, one reading per character.
#[derive(Debug, Clone, Default)]
pub struct PinyinTable {
    syllables: HashMap<char, String>,
    by_syllable: BTreeMap<String, Vec<char>>,
}

impl PinyinTable {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut table = PinyinTable::default();
        for (line, cols) in tsv_rows(text) {
            let [key, syllable] = cols[..] else {
                return Err(Error::load(origin, line, "expected character and syllable"));
            };
            let ch = single_char(key).ok_or_else(|| Error::load(origin, line, "key must be one character"))?;
            if syllable.is_empty() || !syllable.bytes().all(|b| b.is_ascii_lowercase()) {
                return Err(Error::load(
                    origin,
                    line,
                    format!("syllable {syllable:?} is not lowercase ASCII"),
                ));
            }
            if table.syllables.insert(ch, syllable.to_string()).is_some() {
                return Err(Error::load(origin, line, format!("{ch} listed twice")));
            }
            table.by_syllable.entry(syllable.to_string()).or_default().push(ch);
        }
        for chars in table.by_syllable.values_mut() {
            chars.sort_unstable();
        }
        Ok(table)
    }

    pub fn syllable(&self, ch: char) -> Option<&str> {
        self.syllables.get(&ch).map(String::as_str)
    }

    /// Characters read as `syllable`, in code point order.
    pub fn chars_with(&self, syllable: &str) -> &[char] {
        self.by_syllable.get(syllable).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }
}

/// Character → occurrence count (per million characters in the bundled table).
#[derive(Debug, Clone, Default)]
pub struct CharFrequency {
    counts: HashMap<char, u64>,
}

impl CharFrequency {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut counts = HashMap::new();
        for (line, cols) in tsv_rows(text) {
            let [key, count] = cols[..] else {
                return Err(Error::load(origin, line, "expected character and count"));
            };
            let ch = single_char(key).ok_or_else(|| Error::load(origin, line, "key must be one character"))?;
            let n: u64 = count
                .trim()
                .parse()
                .map_err(|_| Error::load(origin, line, format!("count {count:?} is not a non-negative integer")))?;
            counts.insert(ch, n);
        }
        Ok(CharFrequency { counts })
    }

    /// Count for `ch`; characters absent from the table count as 0.
    pub fn count(&self, ch: char) -> u64 {
        self.counts.get(&ch).copied().unwrap_or(0)
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}
