use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use super::tsv_rows;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub surface: String,
    pub similarity: Option<f64>,
}

/// Word → ordered replacement candidates (antonyms or synonyms).
#[derive(Debug, Clone, Default)]
pub struct SubstitutionLexicon {
    map: BTreeMap<String, Vec<Candidate>>,
}

impl SubstitutionLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Rows are `word<TAB>candidate[<TAB>similarity]`; candidate order is
    /// file order.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut map: BTreeMap<String, Vec<Candidate>> = BTreeMap::new();
        for (line, cols) in tsv_rows(text) {
            let (word, cand, sim) = match cols[..] {
                [w, c] => (w, c, None),
                [w, c, s] => (w, c, Some(s)),
                _ => {
                    return Err(Error::load(
                        origin,
                        line,
                        "expected word, candidate and optional similarity",
                    ))
                }
            };
            let (word, cand) = (word.trim(), cand.trim());
            if word.is_empty() || cand.is_empty() {
                return Err(Error::load(origin, line, "empty word"));
            }
            if word == cand {
                return Err(Error::load(origin, line, format!("{word} maps to itself")));
            }
            let similarity = match sim.map(str::trim).filter(|s| !s.is_empty()) {
                None => None,
                Some(s) => {
                    let v: f64 = s
                        .parse()
                        .map_err(|_| Error::load(origin, line, format!("similarity {s:?} is not a number")))?;
                    if !(0.0..=1.0).contains(&v) {
                        return Err(Error::load(origin, line, format!("similarity {v} outside [0, 1]")));
                    }
                    Some(v)
                }
            };
            let list = map.entry(word.to_string()).or_default();
            if list.iter().any(|c| c.surface == cand) {
                return Err(Error::load(origin, line, format!("{word} → {cand} listed twice")));
            }
            list.push(Candidate {
                surface: cand.to_string(),
                similarity,
            });
        }
        Ok(SubstitutionLexicon { map })
    }

    pub fn candidates(&self, word: &str) -> &[Candidate] {
        self.map.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, word: &str) -> bool {
        self.map.contains_key(word)
    }

    pub fn first(&self, word: &str) -> Option<&Candidate> {
        self.candidates(word).first()
    }

    /// The highest-similarity candidate. Equal similarities fall back to the
    /// lexicographically smallest surface; a missing similarity ranks below
    /// any value.
    pub fn best(&self, word: &str) -> Option<&Candidate> {
        self.candidates(word).iter().min_by(|a, b| {
            let sa = a.similarity.unwrap_or(f64::NEG_INFINITY);
            let sb = b.similarity.unwrap_or(f64::NEG_INFINITY);
            sb.total_cmp(&sa).then_with(|| a.surface.cmp(&b.surface))
        })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuantRelation {
    LessThan,
    MoreThan,
}

impl QuantRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            QuantRelation::LessThan => "less_than",
            QuantRelation::MoreThan => "more_than",
        }
    }
}

impl fmt::Display for QuantRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantifier {
    pub surface: String,
    pub relation: QuantRelation,
}

/// Quantifier phrases that turn a number into a bound ("less than 510").
#[derive(Debug, Clone)]
pub struct QuantLexicon {
    entries: Vec<Quantifier>,
}

impl QuantLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        for (line, cols) in tsv_rows(text) {
            let [surface, rel] = cols[..] else {
                return Err(Error::load(origin, line, "expected surface and relation"));
            };
            let relation = match rel.trim() {
                "less_than" => QuantRelation::LessThan,
                "more_than" => QuantRelation::MoreThan,
                other => return Err(Error::load(origin, line, format!("unknown relation {other:?}"))),
            };
            if surface.trim().is_empty() || !seen.insert(surface.to_string()) {
                return Err(Error::load(
                    origin,
                    line,
                    format!("empty or repeated surface {surface:?}"),
                ));
            }
            entries.push(Quantifier {
                surface: surface.to_string(),
                relation,
            });
        }
        Self::new(entries).map_err(|message| Error::InvalidResource {
            resource: origin.to_string(),
            message,
        })
    }

    pub fn new(entries: Vec<Quantifier>) -> Result<Self, String> {
        for rel in [QuantRelation::LessThan, QuantRelation::MoreThan] {
            if !entries.iter().any(|q| q.relation == rel) {
                return Err(format!("no {rel} phrase"));
            }
        }
        Ok(QuantLexicon { entries })
    }

    pub fn entries(&self) -> &[Quantifier] {
        &self.entries
    }

    pub fn with_relation(&self, rel: QuantRelation) -> Vec<&Quantifier> {
        self.entries.iter().filter(|q| q.relation == rel).collect()
    }

    /// The longest entry that `text` ends with.
    pub fn suffix_of<'a>(&'a self, text: &str) -> Option<&'a Quantifier> {
        self.entries
            .iter()
            .filter(|q| text.ends_with(q.surface.as_str()))
            .max_by_key(|q| q.surface.len())
    }
}

/// A one-column list of names (persons or places).
#[derive(Debug, Clone)]
pub struct EntityList {
    items: Vec<String>,
}

impl EntityList {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut items = Vec::new();
        let mut seen = HashSet::new();
        for (line, cols) in tsv_rows(text) {
            let name = cols[0].trim();
            if cols.len() != 1 || name.is_empty() {
                return Err(Error::load(origin, line, "expected one non-empty name"));
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::load(origin, line, format!("{name} listed twice")));
            }
            items.push(name.to_string());
        }
        if items.is_empty() {
            return Err(Error::InvalidResource {
                resource: origin.to_string(),
                message: "no entries".into(),
            });
        }
        Ok(EntityList { items })
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::bundled;

    #[test]
    fn self_mapping_rejected() {
        assert!(matches!(
            SubstitutionLexicon::parse("大\t大\n", "t"),
            Err(Error::Load { line: 1, .. })
        ));
    }

    #[test]
    fn best_is_argmax_similarity() {
        let lex = SubstitutionLexicon::parse("x\ta\t0.7\nx\tb\t0.9\n", "t").unwrap();
        assert_eq!(lex.best("x").unwrap().surface, "b");
    }

    #[test]
    fn best_breaks_ties_lexicographically() {
        let lex = SubstitutionLexicon::parse("x\tz\t0.5\nx\ty\t0.5\nx\tw\n", "t").unwrap();
        assert_eq!(lex.best("x").unwrap().surface, "y");
    }

    #[test]
    fn bundled_difficulty_synonym() {
        let lex = SubstitutionLexicon::parse(bundled::SYNONYMS, "bundled").unwrap();
        assert_eq!(lex.best("困难").unwrap().surface, "艰难");
        let ant = SubstitutionLexicon::parse(bundled::ANTONYMS, "bundled").unwrap();
        assert_eq!(ant.first("较大").unwrap().surface, "较小");
    }

    #[test]
    fn bundled_quantifiers_are_six() {
        let q = QuantLexicon::parse(bundled::QUANTIFIERS, "bundled").unwrap();
        assert_eq!(q.entries().len(), 6);
        assert_eq!(q.with_relation(QuantRelation::LessThan).len(), 3);
        assert_eq!(q.suffix_of("每分钟打不到").unwrap().surface, "不到");
    }

    #[test]
    fn bundled_names_and_places_are_disjoint() {
        let names = EntityList::parse(bundled::NAMES, "names").unwrap();
        let places = EntityList::parse(bundled::PLACES, "places").unwrap();
        let set: HashSet<_> = names.items().iter().collect();
        assert!(places.items().iter().all(|p| !set.contains(p)));
    }
}
