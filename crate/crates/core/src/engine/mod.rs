//! Fixpoint rule interpreter: UNL graph in, ordered surface nodes out.

mod apply;
mod state;

use thiserror::Error;

pub use apply::{apply_rule, match_node, sites, Applied, Site};
pub use state::{init_state, EngineDiagnostic, GenNode, GenRelation, GenState, NodeId, Origin};

use crate::grammar::Grammar;
use crate::lexicon::Lexicon;
use crate::morphology::{InflectionOutcome, MorphError};
use crate::unl::UnlDocument;

pub const DEFAULT_MAX_FIRINGS: usize = 1000;
pub const MAX_TRACE_LEVEL: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineCaps {
    pub max_firings: usize,
    /// 0 output only, 1 phases, 2 firings, 3 node deltas and inflections,
    /// 4 every failed match attempt.
    pub trace_level: u8,
    pub blank_joins: bool,
    pub collapse_spaces: bool,
}

impl Default for EngineCaps {
    fn default() -> Self {
        EngineCaps {
            max_firings: DEFAULT_MAX_FIRINGS,
            trace_level: 0,
            blank_joins: true,
            collapse_spaces: true,
        }
    }
}

/// One rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Firing {
    pub step: usize,
    pub rule_index: usize,
    pub rule_text: String,
    pub site: String,
    pub before_hash: u64,
    pub after_hash: u64,
    pub inflections: Vec<InflectionOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generation {
    pub text: String,
    pub state: GenState,
    pub firings: Vec<Firing>,
    /// Trace lines up to the requested level.
    pub trace: Vec<String>,
    pub diagnostics: Vec<EngineDiagnostic>,
}

impl Generation {
    pub fn firing_count(&self) -> usize {
        self.firings.len()
    }

    pub fn rule_sequence(&self) -> Vec<usize> {
        self.firings.iter().map(|f| f.rule_index).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("firing cap of {max_firings} reached before a fixpoint")]
    FiringCapExceeded {
        max_firings: usize,
        partial: Box<Generation>,
    },
    #[error(transparent)]
    Morphology(#[from] MorphError),
}

struct Tracer {
    level: u8,
    lines: Vec<String>,
}

impl Tracer {
    fn wants(&self, level: u8) -> bool {
        level <= self.level
    }

    fn emit(&mut self, level: u8, line: impl FnOnce() -> String) {
        if self.wants(level) {
            self.lines.push(line());
        }
    }
}

pub struct RunOutcome {
    pub state: GenState,
    pub firings: Vec<Firing>,
    pub trace: Vec<String>,
    pub diagnostics: Vec<EngineDiagnostic>,
    pub capped: bool,
}

/// Repeatedly fires the first rule (file order) with a matching site, then
/// rescans from the top, until nothing fires or the cap is hit.
pub fn run(
    state: GenState,
    grammar: &Grammar,
    caps: &EngineCaps,
) -> Result<RunOutcome, MorphError> {
    let mut tr = Tracer {
        level: caps.trace_level,
        lines: Vec::new(),
    };
    run_traced(state, grammar, caps, &mut tr)
}

fn run_traced(
    mut state: GenState,
    grammar: &Grammar,
    caps: &EngineCaps,
    tr: &mut Tracer,
) -> Result<RunOutcome, MorphError> {
    let mut firings = Vec::new();
    let mut capped = false;
    'outer: loop {
        for rule in &grammar.rules {
            for site in sites(rule, &state) {
                let Some(applied) = apply_rule(&state, rule, site, caps.blank_joins)? else {
                    tr.emit(4, || {
                        format!("  miss r{} @ {}", rule.index, site.render(&state))
                    });
                    continue;
                };
                if firings.len() >= caps.max_firings {
                    capped = true;
                    tr.emit(1, || {
                        format!(
                            "cap: stopped after {} firings; r{} would fire next",
                            firings.len(),
                            rule.index
                        )
                    });
                    break 'outer;
                }
                let step = firings.len() + 1;
                let rule_text = rule.to_string();
                let site_text = site.render(&state);
                tr.emit(2, || {
                    format!("#{step} fire r{}: {rule_text} @ {site_text}", rule.index)
                });
                if tr.wants(3) {
                    trace_delta(tr, &state, &applied);
                }
                firings.push(Firing {
                    step,
                    rule_index: rule.index,
                    rule_text,
                    site: site_text,
                    before_hash: state.hash_value(),
                    after_hash: applied.state.hash_value(),
                    inflections: applied.inflections.into_iter().map(|(_, o)| o).collect(),
                });
                state = applied.state;
                continue 'outer;
            }
        }
        break;
    }
    let mut diagnostics = Vec::new();
    if !state.relations.is_empty() {
        diagnostics.push(EngineDiagnostic::UnresolvedRelations(state.relations.len()));
    }
    tr.emit(1, || {
        format!(
            "run: {} firing(s), {} relation(s) left",
            firings.len(),
            state.relations.len()
        )
    });
    Ok(RunOutcome {
        state,
        firings,
        trace: std::mem::take(&mut tr.lines),
        diagnostics,
        capped,
    })
}

fn trace_delta(tr: &mut Tracer, before: &GenState, applied: &Applied) {
    let after = &applied.state;
    let ids: std::collections::BTreeSet<NodeId> = before
        .nodes
        .keys()
        .chain(after.nodes.keys())
        .copied()
        .collect();
    for id in ids {
        let (b, a) = (before.nodes.get(&id), after.nodes.get(&id));
        if b == a {
            continue;
        }
        if let Some(b) = b {
            tr.emit(3, || format!("  - {b}"));
        }
        if let Some(a) = a {
            tr.emit(3, || format!("  + {a}"));
        }
    }
    for (_, o) in &applied.inflections {
        tr.emit(3, || match o.matched_case {
            Some(i) => format!(
                "  inflect {}: case {i} -> {}",
                quote(&o.surface_before),
                quote(&o.surface_after)
            ),
            None => format!(
                "  inflect {}: no case matched, nothing appended",
                quote(&o.surface_before)
            ),
        });
    }
    if before.segments != after.segments {
        tr.emit(3, || format!("  order: {}", render_order(after)));
    }
}

fn quote(s: &str) -> String {
    let mut out = String::new();
    crate::grammar::write_quoted(&mut out, s).expect("writing to a String");
    out
}

fn render_order(state: &GenState) -> String {
    state
        .segments
        .iter()
        .map(|seg| {
            seg.iter()
                .map(|id| state.node(*id).label())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Concatenates surfaces in segment order, optionally collapsing whitespace
/// runs to one space and trimming the ends.
pub fn linearize(state: &GenState, collapse_spaces: bool) -> String {
    let raw: String = state
        .ordered_nodes()
        .map(|id| state.node(id).surface.as_str())
        .collect();
    if collapse_spaces {
        raw.split_whitespace().collect::<Vec<_>>().join(" ")
    } else {
        raw
    }
}

pub fn generate(
    doc: &UnlDocument,
    lex: &Lexicon,
    grammar: &Grammar,
    caps: &EngineCaps,
) -> Result<Generation, EngineError> {
    let mut tr = Tracer {
        level: caps.trace_level,
        lines: Vec::new(),
    };
    let (state, mut diagnostics) = init_state(doc, lex);
    tr.emit(1, || {
        format!(
            "init: {} node(s), {} relation(s)",
            state.nodes.len(),
            state.relations.len()
        )
    });
    if !grammar.drules.is_empty() {
        tr.emit(1, || {
            format!(
                "init: {} disambiguation block(s) ignored",
                grammar.drules.len()
            )
        });
    }
    let outcome = run_traced(state, grammar, caps, &mut tr)?;
    diagnostics.extend(outcome.diagnostics);
    let text = linearize(&outcome.state, caps.collapse_spaces);
    let mut trace = outcome.trace;
    trace.push(format!("output: {text}"));
    let trace = if caps.trace_level >= 1 {
        trace
    } else {
        Vec::new()
    };
    let generation = Generation {
        text,
        state: outcome.state,
        firings: outcome.firings,
        trace,
        diagnostics,
    };
    if outcome.capped {
        return Err(EngineError::FiringCapExceeded {
            max_firings: caps.max_firings,
            partial: Box::new(generation),
        });
    }
    Ok(generation)
}
