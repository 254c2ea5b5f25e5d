use std::path::Path;

use super::tsv_rows;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distractor {
    pub plain: String,
    pub negated: String,
    pub has_oov: bool,
    pub tautology: bool,
}

/// Truth-preserving statements appended by the distraction perturbation.
#[derive(Debug, Clone)]
pub struct DistractorSet {
    statements: Vec<Distractor>,
}

const LEN_RANGE: std::ops::RangeInclusive<usize> = 5..=16;

impl DistractorSet {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut statements = Vec::new();
        for (line, cols) in tsv_rows(text) {
            if cols == ["plain", "negated", "has_oov", "tautology"] {
                continue;
            }
            let [plain, negated, oov, taut] = cols[..] else {
                return Err(Error::load(origin, line, "expected plain, negated, has_oov, tautology"));
            };
            for t in [plain, negated] {
                let n = t.chars().count();
                if !LEN_RANGE.contains(&n) {
                    return Err(Error::load(
                        origin,
                        line,
                        format!("{t:?} has {n} characters, expected 5 to 16"),
                    ));
                }
            }
            if !has_negator(negated) {
                return Err(Error::load(origin, line, "negated variant lacks 不 or 没"));
            }
            if has_negator(plain) {
                return Err(Error::load(origin, line, "plain variant contains 不 or 没"));
            }
            statements.push(Distractor {
                plain: plain.to_string(),
                negated: negated.to_string(),
                has_oov: flag(oov).ok_or_else(|| Error::load(origin, line, "has_oov must be 0 or 1"))?,
                tautology: flag(taut).ok_or_else(|| Error::load(origin, line, "tautology must be 0 or 1"))?,
            });
        }

        let invalid = |message: String| Error::InvalidResource {
            resource: origin.to_string(),
            message,
        };
        let tautologies = statements.iter().filter(|s| s.tautology).count();
        if tautologies != 1 {
            return Err(invalid(format!("expected exactly one tautology, found {tautologies}")));
        }
        let rest = statements.len() - 1;
        let oov = statements.iter().filter(|s| !s.tautology && s.has_oov).count();
        if 2 * oov != rest {
            return Err(invalid(format!(
                "{oov} of {rest} non-tautology statements have has_oov set, expected exactly half"
            )));
        }
        Ok(DistractorSet { statements })
    }

    pub fn statements(&self) -> &[Distractor] {
        &self.statements
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Distractor> {
        self.statements.get(i)
    }
}

fn has_negator(s: &str) -> bool {
    s.contains('不') || s.contains('没')
}

fn flag(s: &str) -> Option<bool> {
    match s.trim() {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}
