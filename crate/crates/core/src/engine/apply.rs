use std::collections::BTreeMap;

use super::state::{GenNode, GenRelation, GenState, NodeId};
use crate::grammar::{Action, Constraint, Edit, NodeEdits, NodeSpec, Pattern, SeqItem, TRule};
use crate::morphology::{inflect, InflectionOutcome, MorphError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Site {
    /// Index into the state's relation list.
    Relation(usize),
    Node(NodeId),
}

impl Site {
    pub fn render(&self, state: &GenState) -> String {
        match self {
            Site::Relation(i) => state.relation_label(*i),
            Site::Node(id) => state.node(*id).label(),
        }
    }
}

pub fn match_node(spec: &NodeSpec, node: &GenNode) -> bool {
    spec.constraints.iter().all(|c| match c {
        Constraint::Feature(t) => node.satisfies(t),
        Constraint::NegFeature(t) => !node.satisfies(t),
        Constraint::Attribute(a) => node.has_attr(a),
        Constraint::NegAttribute(a) => !node.has_attr(a),
        // An unset key also accepts the value as a bare feature.
        Constraint::KeyValue(k, v) => match node.kv.get(k) {
            Some(cur) => cur == v,
            None => node.features.contains(v),
        },
        Constraint::Disjunction(ts) => ts.iter().any(|t| node.features.contains(t)),
        Constraint::Variable(_) => true,
    })
}

/// Candidate sites for a rule's pattern in scan order.
pub fn sites(rule: &TRule, state: &GenState) -> Vec<Site> {
    match &rule.pattern {
        Pattern::Relation { label, .. } => (0..state.relations.len())
            .filter(|&i| &state.relations[i].label == label)
            .map(Site::Relation)
            .collect(),
        Pattern::Node(_) => state.ordered_nodes().map(Site::Node).collect(),
    }
}

pub struct Applied {
    pub state: GenState,
    pub inflections: Vec<(NodeId, InflectionOutcome)>,
}

/// Fires `rule` at `site`. `None` when the pattern does not match there or the
/// firing would leave the state unchanged.
pub fn apply_rule(
    state: &GenState,
    rule: &TRule,
    site: Site,
    blank_joins: bool,
) -> Result<Option<Applied>, MorphError> {
    let Some(bindings) = bind(state, rule, site) else {
        return Ok(None);
    };
    let mut next = state.clone();
    let mut inflections = Vec::new();
    match (&rule.action, site) {
        (
            Action::Relation {
                label,
                source,
                target,
            },
            Site::Relation(i),
        ) => {
            let old = state.relations[i].clone();
            let pick = |edits: &NodeEdits, default: NodeId| {
                edits.variable().map_or(default, |v| bindings[v])
            };
            let (s, t) = (pick(source, old.source), pick(target, old.target));
            if s == t {
                return Ok(None);
            }
            edit_node(&mut next, s, source, &mut inflections)?;
            edit_node(&mut next, t, target, &mut inflections)?;
            next.relations[i] = GenRelation {
                label: label.clone(),
                source: s,
                target: t,
            };
        }
        (Action::Sequence(items), Site::Relation(i)) => {
            let rel = &state.relations[i];
            let (seg_s, seg_t) = (state.segment_of(rel.source), state.segment_of(rel.target));
            if seg_s == seg_t {
                return Ok(None);
            }
            let mut merged = Vec::new();
            let mut used = Vec::new();
            for item in items {
                let part = match item {
                    SeqItem::Literal(s) => vec![next.add_literal(s)],
                    SeqItem::Node(edits) => {
                        let id = bindings[edits.variable().expect("checked at parse time")];
                        edit_node(&mut next, id, edits, &mut inflections)?;
                        let seg = state.segment_of(id).expect("bound nodes are placed");
                        used.push(seg);
                        state.segments[seg].clone()
                    }
                };
                append_joined(&mut next, &mut merged, part, blank_joins);
            }
            next.relations.remove(i);
            let at = used.iter().copied().min();
            let mut segments = Vec::new();
            for (k, seg) in state.segments.iter().enumerate() {
                if Some(k) == at {
                    segments.push(std::mem::take(&mut merged));
                } else if !used.contains(&k) {
                    segments.push(seg.clone());
                }
            }
            if !merged.is_empty() {
                // Only literals were placed; they start a segment of their own.
                segments.push(merged);
            }
            next.segments = segments;
        }
        (Action::Sequence(items), Site::Node(id)) => {
            let mut placed = Vec::new();
            let mut kept = false;
            for item in items {
                let part = match item {
                    SeqItem::Literal(s) => next.add_literal(s),
                    SeqItem::Node(edits) => {
                        edit_node(&mut next, id, edits, &mut inflections)?;
                        kept = true;
                        id
                    }
                };
                append_joined(&mut next, &mut placed, vec![part], blank_joins);
            }
            let seg = state.segment_of(id).expect("node sites are placed");
            let pos = state.segments[seg].iter().position(|&n| n == id).unwrap();
            next.segments[seg].splice(pos..=pos, placed);
            if !kept {
                next.nodes.remove(&id);
                next.relations.retain(|r| r.source != id && r.target != id);
            }
            next.segments.retain(|s| !s.is_empty());
        }
        (Action::Relation { .. }, Site::Node(_)) => return Ok(None),
    }
    if without_counters(&next) == without_counters(state) {
        return Ok(None);
    }
    Ok(Some(Applied {
        state: next,
        inflections,
    }))
}

fn without_counters(
    state: &GenState,
) -> (
    &BTreeMap<NodeId, GenNode>,
    &Vec<GenRelation>,
    &Vec<Vec<NodeId>>,
) {
    (&state.nodes, &state.relations, &state.segments)
}

fn bind<'r>(state: &GenState, rule: &'r TRule, site: Site) -> Option<BTreeMap<&'r str, NodeId>> {
    let mut out = BTreeMap::new();
    match (&rule.pattern, site) {
        (
            Pattern::Relation {
                label,
                source,
                target,
            },
            Site::Relation(i),
        ) => {
            let rel = state.relations.get(i)?;
            if &rel.label != label
                || !match_node(source, state.node(rel.source))
                || !match_node(target, state.node(rel.target))
            {
                return None;
            }
            out.extend(source.binding().map(|v| (v, rel.source)));
            out.extend(target.binding().map(|v| (v, rel.target)));
        }
        (Pattern::Node(spec), Site::Node(id)) => {
            if !match_node(spec, state.nodes.get(&id)?) {
                return None;
            }
            out.extend(spec.binding().map(|v| (v, id)));
        }
        _ => return None,
    }
    Some(out)
}

/// Inserts a blank between two juxtaposed pieces when neither brings its own
/// whitespace to the join.
fn append_joined(
    state: &mut GenState,
    acc: &mut Vec<NodeId>,
    part: Vec<NodeId>,
    blank_joins: bool,
) {
    if blank_joins {
        if let (Some(&l), Some(&r)) = (acc.last(), part.first()) {
            let left = state.node(l).surface.chars().last();
            let right = state.node(r).surface.chars().next();
            if let (Some(a), Some(b)) = (left, right) {
                if !a.is_whitespace() && !b.is_whitespace() {
                    let blank = state.add_literal(" ");
                    acc.push(blank);
                }
            }
        }
    }
    acc.extend(part);
}

fn edit_node(
    state: &mut GenState,
    id: NodeId,
    edits: &NodeEdits,
    inflections: &mut Vec<(NodeId, InflectionOutcome)>,
) -> Result<(), MorphError> {
    let node = state.nodes.get_mut(&id).expect("bound node exists");
    for edit in edits.edits() {
        match edit {
            Edit::AddFeature(t) => {
                node.features.insert(t.clone());
            }
            Edit::RemoveFeature(t) => {
                node.features.remove(t);
                node.kv.remove(t);
            }
            Edit::AddAttribute(a) => {
                if !node.attrs.contains(a) {
                    node.attrs.push(a.clone());
                }
            }
            Edit::RemoveAttribute(a) | Edit::ResolveAttribute(a) => node.attrs.retain(|x| x != a),
            Edit::SetKey(k, v) => {
                node.kv.insert(k.clone(), v.clone());
            }
            Edit::ClearKey(k, v) => {
                if node.kv.get(k) == Some(v) {
                    node.kv.remove(k);
                }
            }
            Edit::AttachFlx(spec) => {
                if !node.inflected {
                    node.features.insert("FLX".into());
                    node.pending_flx = Some(spec.clone());
                }
            }
            Edit::ExecuteFlx => inflections.push((id, inflect(node)?)),
            Edit::Keep(_) => {}
        }
    }
    Ok(())
}
