//! Canonical rule text. Parsing the output yields the same AST.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::*;

pub(crate) fn write_quoted(f: &mut impl Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            _ => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

fn join<T: Display>(
    f: &mut Formatter<'_>,
    items: impl IntoIterator<Item = T>,
    sep: &str,
) -> fmt::Result {
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl Display for Constraint {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Feature(t) => write!(f, "{t}"),
            Constraint::NegFeature(t) => write!(f, "^{t}"),
            Constraint::Attribute(a) => write!(f, "@{a}"),
            Constraint::NegAttribute(a) => write!(f, "^@{a}"),
            Constraint::KeyValue(k, v) => write!(f, "{k}={v}"),
            Constraint::Disjunction(ts) => {
                f.write_str("{")?;
                join(f, ts, " ")?;
                f.write_str("}")
            }
            Constraint::Variable(v) => write!(f, "%{v}"),
        }
    }
}

impl Display for NodeSpec {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        join(f, &self.constraints, ",")
    }
}

impl Display for Edit {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Edit::AddFeature(t) => write!(f, "+{t}"),
            Edit::RemoveFeature(t) => write!(f, "-{t}"),
            Edit::AddAttribute(a) => write!(f, "+@{a}"),
            Edit::RemoveAttribute(a) => write!(f, "-@{a}"),
            Edit::ResolveAttribute(a) => write!(f, "@{a}"),
            Edit::SetKey(k, v) => write!(f, "+{k}={v}"),
            Edit::ClearKey(k, v) => write!(f, "-{k}={v}"),
            Edit::AttachFlx(spec) => write!(f, "+FLX({spec})"),
            Edit::ExecuteFlx => f.write_str("!FLX"),
            Edit::Keep(t) => write!(f, "{t}"),
        }
    }
}

impl Display for EditTerm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            EditTerm::Variable(v) => write!(f, "%{v}"),
            EditTerm::Edit(e) => write!(f, "{e}"),
        }
    }
}

impl Display for NodeEdits {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        join(f, &self.terms, ",")
    }
}

impl Display for Pattern {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Relation {
                label,
                source,
                target,
            } => write!(f, "{label}({source};{target})"),
            Pattern::Node(spec) => write!(f, "({spec})"),
        }
    }
}

impl Display for SeqItem {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        match self {
            SeqItem::Node(n) => write!(f, "{n}")?,
            SeqItem::Literal(s) => write_quoted(f, s)?,
        }
        f.write_str(")")
    }
}

impl Display for Action {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Action::Relation {
                label,
                source,
                target,
            } => write!(f, "{label}({source};{target})"),
            Action::Sequence(items) => join(f, items, ""),
        }
    }
}

impl Display for TRule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}:={};", self.pattern, self.action)
    }
}

impl Display for CondLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("^")?;
        }
        write!(f, "{}", self.token)
    }
}

impl Display for AffixOp {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}>", self.strip)?;
        write_quoted(f, &self.append)
    }
}

impl Display for FlxCase {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        join(f, &self.condition, "&")?;
        write!(f, ":={}", self.op)
    }
}

impl Display for FlxSpec {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        join(f, &self.cases, "; ")
    }
}

impl Display for Grammar {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        for block in &self.drules {
            writeln!(f, "{{drules}}\n{}\n{{/drules}}", block.trim_end())?;
        }
        Ok(())
    }
}
