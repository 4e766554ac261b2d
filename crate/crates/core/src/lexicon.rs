//! Target-language dictionary: UW headwords mapped to lemmas and features.
//!
//! One entry per line, `[lemma] "uw" (F1,F2,...);`. A `KEY=VALUE` item in the
//! feature list is stored as a key-value pair rather than a feature.

use std::fmt;

use thiserror::Error;

use crate::token::Token;
use crate::unl::Attribute;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexEntry {
    pub lemma: String,
    pub uw: String,
    pub features: Vec<Token>,
    pub values: Vec<(Token, Token)>,
}

impl LexEntry {
    pub fn has_feature(&self, tok: &Token) -> bool {
        self.features.contains(tok)
    }
}

impl fmt::Display for LexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] \"{}\" (", self.lemma, self.uw)?;
        let items = self
            .features
            .iter()
            .map(ToString::to_string)
            .chain(self.values.iter().map(|(k, v)| format!("{k}={v}")));
        for (i, item) in items.enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&item)?;
        }
        f.write_str(");")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("line {line}: malformed dictionary entry: {message}")]
    MalformedEntry { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexWarning {
    DuplicateEntry { line: usize, entry: String },
}

impl fmt::Display for LexWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexWarning::DuplicateEntry { line, entry } => {
                write!(f, "line {line}: duplicate entry {entry} ignored")
            }
        }
    }
}

/// Attribute → required-feature filter applied by [`Lexicon::lookup`].
///
/// Empty by default: every entry for a UW is returned and the grammar
/// disambiguates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AttrCompat(Vec<(Attribute, Token)>);

impl AttrCompat {
    /// Lines of the form `@attr FEATURE`; `//` comments allowed.
    pub fn parse(text: &str) -> Result<Self, LexError> {
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: &str| LexError::MalformedEntry {
                line: idx + 1,
                message: message.to_string(),
            };
            let mut parts = line.split_whitespace();
            let attr = parts
                .next()
                .and_then(|a| a.strip_prefix('@'))
                .ok_or_else(|| bad("expected @attribute"))?;
            let feature = parts
                .next()
                .ok_or_else(|| bad("expected a feature after the attribute"))?;
            if parts.next().is_some() {
                return Err(bad("trailing text"));
            }
            let attr = Attribute::new(attr).map_err(|m| bad(&m))?;
            rows.push((attr, Token::from(feature)));
        }
        Ok(AttrCompat(rows))
    }

    fn admits(&self, entry: &LexEntry, attrs: &[Attribute]) -> bool {
        self.0
            .iter()
            .filter(|(a, _)| attrs.contains(a))
            .all(|(_, feature)| entry.has_feature(feature))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    compat: AttrCompat,
}

impl Lexicon {
    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn with_compat(mut self, compat: AttrCompat) -> Self {
        self.compat = compat;
        self
    }

    /// Entries for `uw` admitted by the compatibility table, in file order.
    pub fn lookup(&self, uw: &str, attrs: &[Attribute]) -> Vec<&LexEntry> {
        self.entries
            .iter()
            .filter(|e| e.uw == uw && self.compat.admits(e, attrs))
            .collect()
    }
}

fn strip_comment(line: &str) -> &str {
    // "//" inside a quoted uw or bracketed lemma is not a comment.
    let mut in_quote = false;
    let mut in_bracket = false;
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'"' if !in_bracket => in_quote = !in_quote,
            b'[' if !in_quote => in_bracket = true,
            b']' if !in_quote => in_bracket = false,
            b'/' if !in_quote && !in_bracket && bytes.get(i + 1) == Some(&b'/') => {
                return &line[..i]
            }
            _ => {}
        }
    }
    line
}

pub fn parse_dictionary(text: &str) -> Result<(Lexicon, Vec<LexWarning>), LexError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut entries: Vec<LexEntry> = Vec::new();
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw.trim_end_matches('\r')).trim();
        if line.is_empty() {
            continue;
        }
        let entry = parse_entry(line, line_no)?;
        if entries.contains(&entry) {
            warnings.push(LexWarning::DuplicateEntry {
                line: line_no,
                entry: entry.to_string(),
            });
        } else {
            entries.push(entry);
        }
    }
    Ok((
        Lexicon {
            entries,
            compat: AttrCompat::default(),
        },
        warnings,
    ))
}

fn parse_entry(line: &str, line_no: usize) -> Result<LexEntry, LexError> {
    let bad = |message: &str| LexError::MalformedEntry {
        line: line_no,
        message: format!("{message}: {line:?}"),
    };

    let rest = line
        .strip_prefix('[')
        .ok_or_else(|| bad("expected '[' before the lemma"))?;
    let close = rest.find(']').ok_or_else(|| bad("unterminated lemma"))?;
    let lemma = &rest[..close];
    if lemma.is_empty() {
        return Err(bad("empty lemma"));
    }
    let rest = rest[close + 1..].trim_start();

    let rest = rest
        .strip_prefix('"')
        .ok_or_else(|| bad("expected quoted uw"))?;
    let close = rest.find('"').ok_or_else(|| bad("unterminated uw"))?;
    let uw = &rest[..close];
    if uw.trim().is_empty() {
        return Err(bad("empty uw"));
    }
    let rest = rest[close + 1..].trim_start();

    let rest = rest
        .strip_prefix('(')
        .ok_or_else(|| bad("expected '(' before features"))?;
    let close = rest
        .find(')')
        .ok_or_else(|| bad("unterminated feature list"))?;
    let feature_text = &rest[..close];
    let tail = rest[close + 1..].trim();
    if !(tail.is_empty() || tail == ";") {
        return Err(bad("unexpected text after the feature list"));
    }

    let mut features = Vec::new();
    let mut values = Vec::new();
    for item in feature_text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        if item.contains('@') || item.chars().any(char::is_whitespace) {
            return Err(bad("features may not contain '@' or whitespace"));
        }
        match item.split_once('=') {
            Some((k, v)) if !k.is_empty() && !v.is_empty() && !v.contains('=') => {
                values.push((Token::from(k), Token::from(v)));
            }
            Some(_) => return Err(bad("malformed KEY=VALUE feature")),
            None => {
                let tok = Token::from(item);
                if !features.contains(&tok) {
                    features.push(tok);
                }
            }
        }
    }
    Ok(LexEntry {
        lemma: lemma.to_string(),
        uw: uw.to_string(),
        features,
        values,
    })
}

/// Canonical dictionary text, one entry per line.
pub fn serialize_dictionary(lex: &Lexicon) -> String {
    lex.entries.iter().map(|e| format!("{e}\n")).collect()
}
