use crate::token::Token;
use crate::unl::Attribute;

/// One constraint inside a node pattern such as `(V,@present,^PRS,%a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// Bare token: a feature, or the value of any key-value pair.
    Feature(Token),
    NegFeature(Token),
    Attribute(Attribute),
    NegAttribute(Attribute),
    KeyValue(Token, Token),
    /// `{N V D J R}`: at least one member holds.
    Disjunction(Vec<Token>),
    Variable(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NodeSpec {
    pub constraints: Vec<Constraint>,
}

impl NodeSpec {
    pub fn binding(&self) -> Option<&str> {
        self.constraints.iter().find_map(|c| match c {
            Constraint::Variable(v) => Some(v.as_str()),
            _ => None,
        })
    }

    /// Constraints other than the variable binding.
    pub fn tests(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints
            .iter()
            .filter(|c| !matches!(c, Constraint::Variable(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Edit {
    AddFeature(Token),
    /// `-X`: drops feature `X` and clears key `X`.
    RemoveFeature(Token),
    AddAttribute(Attribute),
    RemoveAttribute(Attribute),
    /// Bare `@attr` on the action side: the attribute is consumed.
    ResolveAttribute(Attribute),
    /// `+K=V` or bare `K=V`.
    SetKey(Token, Token),
    /// `-K=V`: clears `K` only while it holds `V`.
    ClearKey(Token, Token),
    /// `+FLX(...)`: adds feature `FLX` and attaches the paradigm.
    AttachFlx(FlxSpec),
    /// `!FLX`: runs the attached paradigm.
    ExecuteFlx,
    /// Bare feature restated on the action side; changes nothing.
    Keep(Token),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EditTerm {
    Variable(String),
    Edit(Edit),
}

/// The parenthesised edit list for one node on the action side.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NodeEdits {
    pub terms: Vec<EditTerm>,
}

impl NodeEdits {
    pub fn variable(&self) -> Option<&str> {
        self.terms.iter().find_map(|t| match t {
            EditTerm::Variable(v) => Some(v.as_str()),
            _ => None,
        })
    }

    pub fn edits(&self) -> impl Iterator<Item = &Edit> {
        self.terms.iter().filter_map(|t| match t {
            EditTerm::Edit(e) => Some(e),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Relation {
        label: String,
        source: NodeSpec,
        target: NodeSpec,
    },
    Node(NodeSpec),
}

impl Pattern {
    pub fn variables(&self) -> Vec<&str> {
        match self {
            Pattern::Relation { source, target, .. } => source
                .binding()
                .into_iter()
                .chain(target.binding())
                .collect(),
            Pattern::Node(spec) => spec.binding().into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SeqItem {
    Node(NodeEdits),
    Literal(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    /// `agt(%a,+PER;%b)`: edit both endpoints, keep the relation.
    Relation {
        label: String,
        source: NodeEdits,
        target: NodeEdits,
    },
    /// `(%b)(" ")(%a)`: place nodes and literals in order.
    Sequence(Vec<SeqItem>),
}

impl Action {
    pub fn variables(&self) -> Vec<&str> {
        match self {
            Action::Relation { source, target, .. } => source
                .variable()
                .into_iter()
                .chain(target.variable())
                .collect(),
            Action::Sequence(items) => items
                .iter()
                .filter_map(|i| match i {
                    SeqItem::Node(n) => n.variable(),
                    SeqItem::Literal(_) => None,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Eq)]
pub struct TRule {
    pub index: usize,
    /// Source line where the rule starts.
    pub line: usize,
    pub pattern: Pattern,
    pub action: Action,
}

impl PartialEq for TRule {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && self.pattern == other.pattern && self.action == other.action
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CondLiteral {
    pub token: Token,
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffixOp {
    /// Unicode scalar values removed from the right end.
    pub strip: usize,
    pub append: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlxCase {
    pub condition: Vec<CondLiteral>,
    pub op: AffixOp,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlxSpec {
    pub cases: Vec<FlxCase>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grammar {
    pub rules: Vec<TRule>,
    /// Disambiguation rule blocks, kept verbatim and never executed.
    pub drules: Vec<String>,
}
