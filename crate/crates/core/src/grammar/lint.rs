use std::collections::BTreeSet;
use std::fmt;

use super::ast::*;
use crate::lexicon::Lexicon;
use crate::token::Token;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LintDiagnostic {
    /// A dictionary paradigm tag no node pattern ever tests.
    UnusedParadigmTag(String),
    /// The rule's action restates its pattern and can never change a state.
    NoOpRule(usize),
    /// Case `case` repeats the condition of an earlier case in the same paradigm.
    ShadowedCase {
        rule: Option<usize>,
        case: usize,
    },
    UnusedVariable {
        rule: usize,
        var: String,
    },
    DRulesNotExecuted(usize),
}

impl fmt::Display for LintDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LintDiagnostic::UnusedParadigmTag(t) => {
                write!(f, "paradigm tag {t} is not matched by any node rule")
            }
            LintDiagnostic::NoOpRule(i) => write!(f, "rule r{i} never changes anything"),
            LintDiagnostic::ShadowedCase {
                rule: Some(r),
                case,
            } => {
                write!(
                    f,
                    "rule r{r}: paradigm case {case} is shadowed by an earlier identical condition"
                )
            }
            LintDiagnostic::ShadowedCase { rule: None, case } => {
                write!(
                    f,
                    "paradigm case {case} is shadowed by an earlier identical condition"
                )
            }
            LintDiagnostic::UnusedVariable { rule, var } => {
                write!(f, "rule r{rule}: variable %{var} is bound but unused")
            }
            LintDiagnostic::DRulesNotExecuted(n) => write!(
                f,
                "{n} disambiguation rule block(s) stored but not executed"
            ),
        }
    }
}

pub fn lint_grammar(grammar: &Grammar, lex: &Lexicon) -> Vec<LintDiagnostic> {
    let mut out = Vec::new();

    let tested: BTreeSet<&Token> = grammar
        .rules
        .iter()
        .filter_map(|r| match &r.pattern {
            Pattern::Node(spec) => Some(spec),
            Pattern::Relation { .. } => None,
        })
        .flat_map(|spec| spec.constraints.iter())
        .flat_map(|c| match c {
            Constraint::Feature(t) => vec![t],
            Constraint::Disjunction(ts) => ts.iter().collect(),
            _ => vec![],
        })
        .collect();
    let mut reported = BTreeSet::new();
    for entry in lex.entries() {
        for tag in entry.features.iter().filter(|t| t.is_paradigm_tag()) {
            if !tested.contains(tag) && reported.insert(tag.clone()) {
                out.push(LintDiagnostic::UnusedParadigmTag(tag.to_string()));
            }
        }
    }

    for rule in &grammar.rules {
        if is_noop(rule) {
            out.push(LintDiagnostic::NoOpRule(rule.index));
        }
        for spec in attached_paradigms(&rule.action) {
            out.extend(
                shadowed_cases(spec)
                    .into_iter()
                    .map(|case| LintDiagnostic::ShadowedCase {
                        rule: Some(rule.index),
                        case,
                    }),
            );
        }
        for var in unused_variables(rule) {
            out.push(LintDiagnostic::UnusedVariable {
                rule: rule.index,
                var: var.to_string(),
            });
        }
    }

    if !grammar.drules.is_empty() {
        out.push(LintDiagnostic::DRulesNotExecuted(grammar.drules.len()));
    }
    out
}

pub fn lint_flx_spec(spec: &FlxSpec) -> Vec<LintDiagnostic> {
    shadowed_cases(spec)
        .into_iter()
        .map(|case| LintDiagnostic::ShadowedCase { rule: None, case })
        .collect()
}

fn shadowed_cases(spec: &FlxSpec) -> Vec<usize> {
    let mut seen: Vec<BTreeSet<(&Token, bool)>> = Vec::new();
    let mut out = Vec::new();
    for (i, case) in spec.cases.iter().enumerate() {
        let cond: BTreeSet<_> = case
            .condition
            .iter()
            .map(|l| (&l.token, l.negated))
            .collect();
        if seen.contains(&cond) {
            out.push(i);
        } else {
            seen.push(cond);
        }
    }
    out
}

fn attached_paradigms(action: &Action) -> Vec<&FlxSpec> {
    let edits: Vec<&NodeEdits> = match action {
        Action::Relation { source, target, .. } => vec![source, target],
        Action::Sequence(items) => items
            .iter()
            .filter_map(|i| match i {
                SeqItem::Node(n) => Some(n),
                SeqItem::Literal(_) => None,
            })
            .collect(),
    };
    edits
        .into_iter()
        .flat_map(|n| n.edits())
        .filter_map(|e| match e {
            Edit::AttachFlx(spec) => Some(spec),
            _ => None,
        })
        .collect()
}

fn only_keeps(n: &NodeEdits) -> bool {
    n.edits().all(|e| matches!(e, Edit::Keep(_)))
}

fn is_noop(rule: &TRule) -> bool {
    match (&rule.pattern, &rule.action) {
        (Pattern::Node(spec), Action::Sequence(items)) => match items.as_slice() {
            [SeqItem::Node(n)] => n.variable() == spec.binding() && only_keeps(n),
            _ => false,
        },
        (
            Pattern::Relation {
                label,
                source,
                target,
            },
            Action::Relation {
                label: new_label,
                source: a,
                target: b,
            },
        ) => {
            let same_side = |spec: &NodeSpec, edits: &NodeEdits| {
                edits.variable().is_none() || edits.variable() == spec.binding()
            };
            label == new_label
                && same_side(source, a)
                && same_side(target, b)
                && only_keeps(a)
                && only_keeps(b)
        }
        _ => false,
    }
}

fn unused_variables(rule: &TRule) -> Vec<&str> {
    let mut used: BTreeSet<&str> = rule.action.variables().into_iter().collect();
    if let (
        Pattern::Relation { source, target, .. },
        Action::Relation {
            source: a,
            target: b,
            ..
        },
    ) = (&rule.pattern, &rule.action)
    {
        // An action side without a variable refers to the same pattern side.
        if a.variable().is_none() {
            used.extend(source.binding());
        }
        if b.variable().is_none() {
            used.extend(target.binding());
        }
    }
    rule.pattern
        .variables()
        .into_iter()
        .filter(|v| !used.contains(v))
        .collect()
}
