//! The shipped Punjabi test data: per-category dictionaries and grammars plus
//! golden cases with inputs, references and traces.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::grammar::{parse_grammar, Grammar};
use crate::lexicon::{parse_dictionary, Lexicon};

pub const MANIFEST: &str = "suite.toml";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("missing fixture file {0}")]
    MissingFixture(PathBuf),
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseSource {
    /// Input and output taken from the published generation traces.
    Published,
    /// Variant worked out by hand from the fixture rules.
    Derived,
}

#[derive(Clone, Debug)]
pub struct Category {
    pub name: String,
    pub dictionary: PathBuf,
    pub grammar: PathBuf,
}

impl Category {
    pub fn load(&self) -> Result<(Lexicon, Grammar), FixtureError> {
        let dic = read(&self.dictionary)?;
        let (lex, _) = parse_dictionary(&dic).map_err(|e| invalid(&self.dictionary, e))?;
        let grm = read(&self.grammar)?;
        let grammar = parse_grammar(&grm).map_err(|e| invalid(&self.grammar, e))?;
        Ok((lex, grammar))
    }
}

#[derive(Clone, Debug)]
pub struct GoldenCase {
    pub name: String,
    pub category: String,
    pub source: CaseSource,
    pub unl_text: String,
    pub expected_output: String,
    /// Rule indices in firing order.
    pub expected_rule_sequence: Vec<usize>,
    /// Surfaces whose paradigm is expected to match no case.
    pub no_append: Vec<String>,
    pub trace_path: PathBuf,
    /// Golden level-2 trace, if recorded.
    pub expected_trace: Option<String>,
}

#[derive(Clone, Debug)]
pub struct FixtureSuite {
    pub root: PathBuf,
    pub categories: BTreeMap<String, Category>,
    pub cases: Vec<GoldenCase>,
}

impl FixtureSuite {
    pub fn category(&self, case: &GoldenCase) -> &Category {
        &self.categories[&case.category]
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    categories: BTreeMap<String, CategoryEntry>,
    #[serde(default)]
    case: Vec<CaseEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryEntry {
    dictionary: String,
    grammar: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseEntry {
    name: String,
    category: String,
    source: CaseSource,
    rules: Vec<usize>,
    #[serde(default)]
    no_append: Vec<String>,
}

/// The fixture directory shipped with this crate.
pub fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn read(path: &Path) -> Result<String, FixtureError> {
    fs::read_to_string(path).map_err(|_| FixtureError::MissingFixture(path.to_path_buf()))
}

fn invalid(path: &Path, e: impl ToString) -> FixtureError {
    FixtureError::Invalid {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn load_fixture_suite(dir: &Path) -> Result<FixtureSuite, FixtureError> {
    let manifest_path = dir.join(MANIFEST);
    let manifest: Manifest =
        toml::from_str(&read(&manifest_path)?).map_err(|e| invalid(&manifest_path, e))?;

    let mut categories = BTreeMap::new();
    for (name, entry) in manifest.categories {
        let cat = Category {
            name: name.clone(),
            dictionary: dir.join(entry.dictionary),
            grammar: dir.join(entry.grammar),
        };
        for p in [&cat.dictionary, &cat.grammar] {
            if !p.is_file() {
                return Err(FixtureError::MissingFixture(p.clone()));
            }
        }
        categories.insert(name, cat);
    }

    let mut cases = Vec::new();
    for c in manifest.case {
        if !categories.contains_key(&c.category) {
            return Err(invalid(
                &manifest_path,
                format!("case {}: unknown category {:?}", c.name, c.category),
            ));
        }
        if cases.iter().any(|g: &GoldenCase| g.name == c.name) {
            return Err(invalid(
                &manifest_path,
                format!("duplicate case {}", c.name),
            ));
        }
        let base = dir.join("cases");
        let unl_text = read(&base.join(format!("{}.unl", c.name)))?;
        let expected_output = read(&base.join(format!("{}.ref", c.name)))?
            .trim_end_matches(['\n', '\r'])
            .to_string();
        let trace_path = base.join(format!("{}.trace", c.name));
        let expected_trace = fs::read_to_string(&trace_path).ok();
        cases.push(GoldenCase {
            name: c.name,
            category: c.category,
            source: c.source,
            unl_text,
            expected_output,
            expected_rule_sequence: c.rules,
            no_append: c.no_append,
            trace_path,
            expected_trace,
        });
    }
    Ok(FixtureSuite {
        root: dir.to_path_buf(),
        categories,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_suite_loads() {
        let suite = load_fixture_suite(&default_fixture_dir()).unwrap();
        let published = suite
            .cases
            .iter()
            .filter(|c| c.source == CaseSource::Published)
            .count();
        let derived = suite.cases.len() - published;
        assert_eq!(published, 3);
        assert!(derived >= 9);
        for cat in suite.categories.values() {
            cat.load().unwrap();
        }
    }

    #[test]
    fn missing_directory_is_reported() {
        let err = load_fixture_suite(Path::new("/nonexistent/fixtures")).unwrap_err();
        assert!(matches!(err, FixtureError::MissingFixture(p) if p.ends_with(MANIFEST)));
    }
}
