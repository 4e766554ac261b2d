use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};
use std::hash::{DefaultHasher, Hash, Hasher};

use crate::grammar::FlxSpec;
use crate::lexicon::Lexicon;
use crate::token::Token;
use crate::unl::{Attribute, InstanceId, UnlDocument};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Unl {
        uw: String,
        id: Option<InstanceId>,
    },
    /// Inserted by a sequence action; numbered in creation order.
    Literal(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenNode {
    pub origin: Origin,
    pub surface: String,
    pub features: BTreeSet<Token>,
    /// Set semantics, input order kept for rendering.
    pub attrs: Vec<Attribute>,
    pub kv: BTreeMap<Token, Token>,
    pub pending_flx: Option<FlxSpec>,
    pub inflected: bool,
}

impl GenNode {
    pub fn literal(surface: &str) -> Self {
        GenNode {
            origin: Origin::Literal(0),
            surface: surface.to_string(),
            features: BTreeSet::new(),
            attrs: Vec::new(),
            kv: BTreeMap::new(),
            pending_flx: None,
            inflected: false,
        }
    }

    /// A bare token holds as a feature or as the value of any key.
    pub fn satisfies(&self, tok: &Token) -> bool {
        self.features.contains(tok) || self.kv.values().any(|v| v == tok)
    }

    pub fn has_attr(&self, attr: &Attribute) -> bool {
        self.attrs.contains(attr)
    }

    /// `"surface":id.@attr` as used in trace sites.
    pub fn label(&self) -> String {
        let mut s = String::new();
        crate::grammar::write_quoted(&mut s, &self.surface).unwrap();
        match &self.origin {
            Origin::Unl { id: Some(id), .. } => write!(s, ":{id}").unwrap(),
            Origin::Unl { id: None, .. } => {}
            Origin::Literal(n) => write!(s, ":-:{n:02}").unwrap(),
        }
        for a in &self.attrs {
            write!(s, ".@{a}").unwrap();
        }
        s
    }
}

/// Label plus features, key-values and inflection status.
impl fmt::Display for GenNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())?;
        let mut parts: Vec<String> = self.features.iter().map(Token::to_string).collect();
        parts.extend(self.kv.iter().map(|(k, v)| format!("{k}={v}")));
        if self.pending_flx.is_some() {
            parts.push("FLX?".into());
        }
        if self.inflected {
            parts.push("FLX!".into());
        }
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenRelation {
    pub label: String,
    pub source: NodeId,
    pub target: NodeId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenState {
    pub nodes: BTreeMap<NodeId, GenNode>,
    pub relations: Vec<GenRelation>,
    /// Disjoint ordered node lists; every node lives in exactly one.
    pub segments: Vec<Vec<NodeId>>,
    pub(crate) next_node: usize,
    pub(crate) literals: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineDiagnostic {
    UnknownUw { uw: String },
    UnresolvedRelations(usize),
}

impl fmt::Display for EngineDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineDiagnostic::UnknownUw { uw } => {
                write!(f, "no dictionary entry for UW {uw:?}; using it verbatim")
            }
            EngineDiagnostic::UnresolvedRelations(n) => {
                write!(f, "{n} relation(s) left unresolved at fixpoint")
            }
        }
    }
}

impl GenState {
    pub fn node(&self, id: NodeId) -> &GenNode {
        &self.nodes[&id]
    }

    pub fn hash_value(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    pub(crate) fn add_literal(&mut self, surface: &str) -> NodeId {
        self.literals += 1;
        let mut node = GenNode::literal(surface);
        node.origin = Origin::Literal(self.literals);
        self.insert(node)
    }

    fn insert(&mut self, node: GenNode) -> NodeId {
        let id = NodeId(self.next_node);
        self.next_node += 1;
        self.nodes.insert(id, node);
        id
    }

    pub fn segment_of(&self, id: NodeId) -> Option<usize> {
        self.segments.iter().position(|s| s.contains(&id))
    }

    /// Node ids in segment order.
    pub fn ordered_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.segments.iter().flatten().copied()
    }

    pub fn relation_label(&self, i: usize) -> String {
        let r = &self.relations[i];
        format!(
            "{}({}, {})",
            r.label,
            self.node(r.source).label(),
            self.node(r.target).label()
        )
    }
}

/// One node per distinct UNL node, each in its own segment.
pub fn init_state(doc: &UnlDocument, lex: &Lexicon) -> (GenState, Vec<EngineDiagnostic>) {
    let mut state = GenState::default();
    let mut diags = Vec::new();
    let mut ids = BTreeMap::new();
    for unl in doc.nodes() {
        let entry = lex.lookup(&unl.uw, &unl.attrs).into_iter().next();
        let node = GenNode {
            origin: Origin::Unl {
                uw: unl.uw.clone(),
                id: unl.id.clone(),
            },
            surface: entry.map_or_else(|| unl.uw.clone(), |e| e.lemma.clone()),
            features: entry
                .map(|e| e.features.iter().cloned().collect())
                .unwrap_or_default(),
            attrs: unl.attrs.clone(),
            kv: entry
                .map(|e| e.values.iter().cloned().collect())
                .unwrap_or_default(),
            pending_flx: None,
            inflected: false,
        };
        if entry.is_none() {
            diags.push(EngineDiagnostic::UnknownUw { uw: unl.uw.clone() });
        }
        let id = state.insert(node);
        state.segments.push(vec![id]);
        ids.insert((unl.uw.clone(), unl.id.clone()), id);
    }
    for rel in &doc.relations {
        let key = |n: &crate::unl::UnlNode| ids[&(n.uw.clone(), n.id.clone())];
        state.relations.push(GenRelation {
            label: rel.label.clone(),
            source: key(&rel.source),
            target: key(&rel.target),
        });
    }
    (state, diags)
}
