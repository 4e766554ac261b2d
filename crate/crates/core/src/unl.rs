//! UNL documents: the semantic-network input of the generator.
//!
//! A document is a `{unl}` ... `{/unl}` block holding one binary relation per
//! line, e.g. `agt(arrive:0B.@present.@perfect, 00:01.@3.@male)`. Nodes are
//! written `uw[:id][.@attr]*`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

const BLOCK_OPEN: &str = "{unl}";
const BLOCK_CLOSE: &str = "{/unl}";

static DEFAULT_RELATIONS: &str = include_str!("../data/relations.txt");

/// Opaque instance token (`0B`, `01`). Never interpreted numerically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstanceId(String);

impl InstanceId {
    pub fn new(token: impl Into<String>) -> Result<Self, String> {
        let token = token.into();
        if token.is_empty() || !token.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(format!(
                "instance id must be non-empty alphanumeric, got {token:?}"
            ));
        }
        Ok(InstanceId(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A UNL attribute name without the leading `@`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attribute(String);

impl Attribute {
    pub fn new(name: impl Into<String>) -> Result<Self, String> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) || name.contains('@') {
            return Err(format!("invalid attribute name {name:?}"));
        }
        Ok(Attribute(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnlNode {
    pub uw: String,
    pub id: Option<InstanceId>,
    /// Ordered set: input order kept, duplicates collapsed.
    pub attrs: Vec<Attribute>,
}

impl UnlNode {
    pub fn key(&self) -> (&str, Option<&InstanceId>) {
        (&self.uw, self.id.as_ref())
    }

    pub fn has_attr(&self, name: &str) -> bool {
        self.attrs.iter().any(|a| a.as_str() == name)
    }
}

impl fmt::Display for UnlNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.uw)?;
        if let Some(id) = &self.id {
            write!(f, ":{id}")?;
        }
        for a in &self.attrs {
            write!(f, ".@{a}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnlRelation {
    pub label: String,
    pub source: UnlNode,
    pub target: UnlNode,
}

impl fmt::Display for UnlRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.label, self.source, self.target)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnlDocument {
    pub relations: Vec<UnlRelation>,
}

impl UnlDocument {
    /// Distinct nodes by `(uw, id)` in order of first appearance. Where a
    /// node is written twice with different attributes the first spelling wins
    /// (`validate_document` reports the conflict).
    pub fn nodes(&self) -> Vec<&UnlNode> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for rel in &self.relations {
            for node in [&rel.source, &rel.target] {
                if seen.insert(node.key()) {
                    out.push(node);
                }
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

impl fmt::Display for UnlDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_unl_document(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnlError {
    #[error("line {line}: unbalanced {{unl}} block: {message}")]
    UnbalancedBlock { line: usize, message: String },
    #[error("line {line}: malformed relation: {message}")]
    MalformedRelation { line: usize, message: String },
    #[error("line {line}: empty universal word")]
    EmptyUw { line: usize },
}

impl UnlError {
    pub fn line(&self) -> usize {
        match self {
            UnlError::UnbalancedBlock { line, .. }
            | UnlError::MalformedRelation { line, .. }
            | UnlError::EmptyUw { line } => *line,
        }
    }
}

/// Parses text holding at most one `{unl}` block. Text without any block is
/// read as a bare list of relation lines.
pub fn parse_unl_document(text: &str) -> Result<UnlDocument, UnlError> {
    let mut docs = parse_unl_blocks(text)?;
    match docs.len() {
        0 => Ok(UnlDocument::default()),
        1 => Ok(docs.remove(0)),
        _ => Err(UnlError::UnbalancedBlock {
            line: 1,
            message: format!("expected one {BLOCK_OPEN} block, found {}", docs.len()),
        }),
    }
}

/// Parses a `.unl` file: every `{unl}` block is one sentence, in file order.
pub fn parse_unl_file(text: &str) -> Result<Vec<UnlDocument>, UnlError> {
    parse_unl_blocks(text)
}

fn parse_unl_blocks(text: &str) -> Result<Vec<UnlDocument>, UnlError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut docs = Vec::new();
    let mut current: Option<(usize, UnlDocument)> = None;
    let mut bare = UnlDocument::default();
    let mut saw_block = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        if line.eq_ignore_ascii_case(BLOCK_OPEN) {
            if let Some((open, _)) = current {
                return Err(UnlError::UnbalancedBlock {
                    line: line_no,
                    message: format!("{BLOCK_OPEN} opened at line {open} is not closed"),
                });
            }
            saw_block = true;
            current = Some((line_no, UnlDocument::default()));
            continue;
        }
        if line.eq_ignore_ascii_case(BLOCK_CLOSE) {
            match current.take() {
                Some((_, doc)) => docs.push(doc),
                None => {
                    return Err(UnlError::UnbalancedBlock {
                        line: line_no,
                        message: format!("{BLOCK_CLOSE} without {BLOCK_OPEN}"),
                    })
                }
            }
            continue;
        }
        let rel = parse_relation(line, line_no)?;
        match current.as_mut() {
            Some((_, doc)) => doc.relations.push(rel),
            None if saw_block => {
                return Err(UnlError::MalformedRelation {
                    line: line_no,
                    message: "relation outside of a {unl} block".into(),
                })
            }
            None => bare.relations.push(rel),
        }
    }
    if let Some((open, _)) = current {
        return Err(UnlError::UnbalancedBlock {
            line: open,
            message: format!("missing {BLOCK_CLOSE}"),
        });
    }
    if !saw_block && !bare.relations.is_empty() {
        docs.push(bare);
    }
    Ok(docs)
}

fn parse_relation(line: &str, line_no: usize) -> Result<UnlRelation, UnlError> {
    let malformed = |message: &str| UnlError::MalformedRelation {
        line: line_no,
        message: format!("{message} in {line:?}"),
    };
    let open = line.find('(').ok_or_else(|| malformed("missing '('"))?;
    let close = line.rfind(')').ok_or_else(|| malformed("missing ')'"))?;
    if close < open || !line[close + 1..].trim().is_empty() {
        return Err(malformed("text after closing ')'"));
    }
    let label = line[..open].trim();
    if !(2..=3).contains(&label.len()) || !label.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err(malformed("relation label must be 2-3 lowercase letters"));
    }
    let inner = &line[open + 1..close];
    let split = top_level_separator(inner)
        .ok_or_else(|| malformed("expected two comma-separated nodes"))?;
    let source = parse_node(&inner[..split], line_no, line)?;
    let target = parse_node(&inner[split + 1..], line_no, line)?;
    Ok(UnlRelation {
        label: label.to_string(),
        source,
        target,
    })
}

/// Index of the single top-level `,` (or `;`) separating the two endpoints.
fn top_level_separator(inner: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut found = None;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' | ';' if depth == 0 => {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
            _ => {}
        }
    }
    found
}

fn parse_node(text: &str, line_no: usize, line: &str) -> Result<UnlNode, UnlError> {
    let text = text.trim();
    let malformed = |message: String| UnlError::MalformedRelation {
        line: line_no,
        message: format!("{message} in {line:?}"),
    };
    // Attributes begin at the first top-level ".@"; everything before is uw[:id].
    let mut depth = 0i32;
    let mut attr_start = None;
    let bytes = text.as_bytes();
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '.' if depth == 0 && bytes.get(i + 1) == Some(&b'@') => {
                attr_start = Some(i);
                break;
            }
            _ => {}
        }
    }
    let (head, attr_text) = match attr_start {
        Some(i) => (&text[..i], &text[i..]),
        None => (text.trim_end_matches('.'), ""),
    };

    let mut attrs: Vec<Attribute> = Vec::new();
    for part in attr_text.split('.') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let name = part
            .strip_prefix('@')
            .ok_or_else(|| malformed(format!("attribute {part:?} lacks '@'")))?;
        let attr = Attribute::new(name).map_err(malformed)?;
        if !attrs.contains(&attr) {
            attrs.push(attr);
        }
    }

    let (uw, id) = match top_level_colon(head) {
        Some(i) => {
            let id = InstanceId::new(head[i + 1..].trim()).map_err(malformed)?;
            (head[..i].trim(), Some(id))
        }
        None => (head.trim(), None),
    };
    if uw.is_empty() {
        return Err(UnlError::EmptyUw { line: line_no });
    }
    Ok(UnlNode {
        uw: uw.to_string(),
        id,
        attrs,
    })
}

fn top_level_colon(head: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut last = None;
    for (i, c) in head.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ':' if depth == 0 => last = Some(i),
            _ => {}
        }
    }
    last
}

pub fn serialize_unl_document(doc: &UnlDocument) -> String {
    let mut out = String::from(BLOCK_OPEN);
    out.push('\n');
    for rel in &doc.relations {
        out.push_str(&rel.to_string());
        out.push('\n');
    }
    out.push_str(BLOCK_CLOSE);
    out.push('\n');
    out
}

/// The set of relation labels considered standard by `validate_document`.
#[derive(Clone, Debug)]
pub struct RelationLabels(BTreeSet<String>);

impl RelationLabels {
    /// One label per line; `#` and `//` comments allowed.
    pub fn from_text(text: &str) -> Self {
        RelationLabels(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("//"))
                .map(str::to_string)
                .collect(),
        )
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }
}

impl Default for RelationLabels {
    fn default() -> Self {
        RelationLabels::from_text(DEFAULT_RELATIONS)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnlDiagnostic {
    ConflictingAttributes { uw: String, id: Option<InstanceId> },
    UnknownRelationLabel(String),
    SelfLoop { label: String, node: String },
}

impl fmt::Display for UnlDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnlDiagnostic::ConflictingAttributes { uw, id } => match id {
                Some(id) => write!(f, "node {uw}:{id} is written with conflicting attributes"),
                None => write!(f, "node {uw} is written with conflicting attributes"),
            },
            UnlDiagnostic::UnknownRelationLabel(l) => write!(f, "unknown relation label {l:?}"),
            UnlDiagnostic::SelfLoop { label, node } => {
                write!(f, "self-loop {label}({node}, {node})")
            }
        }
    }
}

pub fn validate_document(doc: &UnlDocument) -> Vec<UnlDiagnostic> {
    validate_document_with(doc, &RelationLabels::default())
}

pub fn validate_document_with(doc: &UnlDocument, labels: &RelationLabels) -> Vec<UnlDiagnostic> {
    let mut out = Vec::new();
    let mut reported = BTreeSet::new();
    let firsts = doc.nodes();
    for rel in &doc.relations {
        if !labels.contains(&rel.label) {
            out.push(UnlDiagnostic::UnknownRelationLabel(rel.label.clone()));
        }
        if rel.source.key() == rel.target.key() {
            out.push(UnlDiagnostic::SelfLoop {
                label: rel.label.clone(),
                node: rel.source.to_string(),
            });
        }
        for node in [&rel.source, &rel.target] {
            let first = firsts
                .iter()
                .find(|n| n.key() == node.key())
                .expect("node listed");
            let same: BTreeSet<_> = first.attrs.iter().collect();
            let other: BTreeSet<_> = node.attrs.iter().collect();
            if same != other && reported.insert(node.key()) {
                out.push(UnlDiagnostic::ConflictingAttributes {
                    uw: node.uw.clone(),
                    id: node.id.clone(),
                });
            }
        }
    }
    out
}
