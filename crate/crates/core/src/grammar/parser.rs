use std::collections::BTreeSet;

use super::ast::*;
use super::lexer::{tokenize, Spanned, Tok};
use super::GrammarError;
use crate::token::Token;
use crate::unl::Attribute;

const DRULES_OPEN: &str = "{drules}";
const DRULES_CLOSE: &str = "{/drules}";

pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let (rule_text, drules) = split_drules(text)?;
    let tokens = tokenize(&rule_text)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut rules = Vec::new();
    while !p.at_end() {
        if let Some(Tok::Semi) = p.peek() {
            let line = p.tokens[p.pos].line;
            return Err(GrammarError::EmptyRule { line });
        }
        let line = p.tokens[p.pos].line;
        let index = rules.len();
        let rule = p.rule(index, line)?;
        check_rule(&rule)?;
        rules.push(rule);
    }
    Ok(Grammar { rules, drules })
}

pub fn parse_flx_spec(text: &str) -> Result<FlxSpec, GrammarError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let spec = p.flx_body(None)?;
    if !p.at_end() {
        return Err(p.error("end of paradigm"));
    }
    Ok(spec)
}

/// Lifts `{drules}` blocks out of the text, blanking their lines so rule line
/// numbers stay correct.
fn split_drules(text: &str) -> Result<(String, Vec<String>), GrammarError> {
    let mut rules = String::with_capacity(text.len());
    let mut blocks = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (idx, line) in text.split('\n').enumerate() {
        let trimmed = line.trim().trim_start_matches('\u{feff}');
        if idx > 0 {
            rules.push('\n');
        }
        if trimmed.eq_ignore_ascii_case(DRULES_OPEN) {
            if current.is_some() {
                return Err(GrammarError::syntax(
                    idx + 1,
                    1,
                    "'{/drules}' before another '{drules}'",
                ));
            }
            current = Some((idx + 1, String::new()));
        } else if trimmed.eq_ignore_ascii_case(DRULES_CLOSE) {
            match current.take() {
                Some((_, body)) => blocks.push(body),
                None => {
                    return Err(GrammarError::syntax(
                        idx + 1,
                        1,
                        "'{drules}' before '{/drules}'",
                    ))
                }
            }
        } else if let Some((_, body)) = current.as_mut() {
            body.push_str(line.trim_end_matches('\r'));
            body.push('\n');
        } else {
            rules.push_str(line);
        }
    }
    if let Some((open, _)) = current {
        return Err(GrammarError::syntax(
            open,
            1,
            "'{/drules}' closing this block",
        ));
    }
    Ok((rules, blocks))
}

fn check_rule(rule: &TRule) -> Result<(), GrammarError> {
    let syntax = |expected: &str| GrammarError::syntax(rule.line, 1, expected);
    let bound: BTreeSet<&str> = rule.pattern.variables().into_iter().collect();
    if let Pattern::Relation { source, target, .. } = &rule.pattern {
        if source.binding().is_some() && source.binding() == target.binding() {
            return Err(syntax("distinct variables for the two relation endpoints"));
        }
    }
    let used = rule.action.variables();
    for var in &used {
        if !bound.contains(var) {
            return Err(GrammarError::UnboundVariable {
                rule: rule.index,
                line: rule.line,
                var: format!("%{var}"),
            });
        }
    }
    let distinct: BTreeSet<&str> = used.iter().copied().collect();
    if distinct.len() != used.len() {
        return Err(syntax("each variable at most once in the action"));
    }
    match (&rule.pattern, &rule.action) {
        (Pattern::Node(_), Action::Relation { .. }) => {
            return Err(syntax("a sequence action for a node pattern"));
        }
        (_, Action::Sequence(items)) => {
            if items.is_empty() {
                return Err(syntax("at least one action item"));
            }
            for item in items {
                if let SeqItem::Node(n) = item {
                    if n.variable().is_none() {
                        return Err(syntax("a variable in every node item of a sequence action"));
                    }
                }
            }
        }
        _ => {}
    }
    Ok(())
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|s| &s.tok)
    }

    fn error(&self, expected: &str) -> GrammarError {
        match self.tokens.get(self.pos) {
            Some(s) => GrammarError::syntax(
                s.line,
                s.column,
                &format!("{expected}, found {}", s.tok.describe()),
            ),
            None => {
                let (line, column) = self
                    .tokens
                    .last()
                    .map(|s| (s.line, s.column))
                    .unwrap_or((1, 1));
                GrammarError::syntax(line, column, &format!("{expected}, found end of input"))
            }
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), GrammarError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn word(&mut self, expected: &str) -> Result<String, GrammarError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn label(&mut self) -> Result<String, GrammarError> {
        let start = self.pos;
        let w = self.word("relation label")?;
        if !(2..=3).contains(&w.len()) || !w.bytes().all(|b| b.is_ascii_lowercase()) {
            self.pos = start;
            return Err(self.error("relation label of 2-3 lowercase letters"));
        }
        Ok(w)
    }

    fn attribute(&self, name: String) -> Result<Attribute, GrammarError> {
        Attribute::new(name).map_err(|m| self.error(&m))
    }

    fn rule(&mut self, index: usize, line: usize) -> Result<TRule, GrammarError> {
        let pattern = self.pattern()?;
        self.expect(Tok::Assign)?;
        let action = self.action()?;
        self.expect(Tok::Semi)?;
        Ok(TRule {
            index,
            line,
            pattern,
            action,
        })
    }

    fn pattern(&mut self) -> Result<Pattern, GrammarError> {
        match self.peek() {
            Some(Tok::Word(_)) => {
                let label = self.label()?;
                self.expect(Tok::LParen)?;
                let source = self.node_spec()?;
                self.expect(Tok::Semi)?;
                let target = self.node_spec()?;
                self.expect(Tok::RParen)?;
                Ok(Pattern::Relation {
                    label,
                    source,
                    target,
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let spec = self.node_spec()?;
                self.expect(Tok::RParen)?;
                Ok(Pattern::Node(spec))
            }
            _ => Err(self.error("relation label or '(' starting a rule pattern")),
        }
    }

    fn node_spec(&mut self) -> Result<NodeSpec, GrammarError> {
        let mut constraints = Vec::new();
        if matches!(self.peek(), Some(Tok::RParen | Tok::Semi)) {
            return Ok(NodeSpec { constraints });
        }
        loop {
            let c = self.constraint()?;
            if matches!(c, Constraint::Variable(_))
                && constraints
                    .iter()
                    .any(|x| matches!(x, Constraint::Variable(_)))
            {
                return Err(self.error("at most one variable per node pattern"));
            }
            constraints.push(c);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(NodeSpec { constraints })
    }

    fn constraint(&mut self) -> Result<Constraint, GrammarError> {
        match self.next() {
            Some(Tok::Var(v)) => Ok(Constraint::Variable(v)),
            Some(Tok::Attr(a)) => Ok(Constraint::Attribute(self.attribute(a)?)),
            Some(Tok::Caret) => match self.next() {
                Some(Tok::Attr(a)) => Ok(Constraint::NegAttribute(self.attribute(a)?)),
                Some(Tok::Word(w)) => Ok(Constraint::NegFeature(Token::from(w.as_str()))),
                _ => {
                    self.pos -= 1;
                    Err(self.error("feature or @attribute after '^'"))
                }
            },
            Some(Tok::LBrace) => {
                let mut members = Vec::new();
                while let Some(Tok::Word(w)) = self.peek() {
                    members.push(Token::from(w.as_str()));
                    self.pos += 1;
                }
                if members.len() < 2 {
                    return Err(self.error("at least two space-separated features in '{...}'"));
                }
                self.expect(Tok::RBrace)?;
                Ok(Constraint::Disjunction(members))
            }
            Some(Tok::Word(w)) => {
                if self.eat(&Tok::Eq) {
                    let v = self.word("value after '='")?;
                    Ok(Constraint::KeyValue(
                        Token::from(w.as_str()),
                        Token::from(v.as_str()),
                    ))
                } else {
                    Ok(Constraint::Feature(Token::from(w.as_str())))
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.error("feature, @attribute, ^negation, {disjunction} or %variable"))
            }
        }
    }

    fn action(&mut self) -> Result<Action, GrammarError> {
        if let Some(Tok::Word(_)) = self.peek() {
            let label = self.label()?;
            self.expect(Tok::LParen)?;
            let source = self.node_edits()?;
            self.expect(Tok::Semi)?;
            let target = self.node_edits()?;
            self.expect(Tok::RParen)?;
            return Ok(Action::Relation {
                label,
                source,
                target,
            });
        }
        let mut items = Vec::new();
        while self.eat(&Tok::LParen) {
            if let Some(Tok::Str(s)) = self.peek() {
                items.push(SeqItem::Literal(s.clone()));
                self.pos += 1;
            } else {
                items.push(SeqItem::Node(self.node_edits()?));
            }
            self.expect(Tok::RParen)?;
        }
        if items.is_empty() {
            return Err(self.error("'(' starting an action item or a relation action"));
        }
        Ok(Action::Sequence(items))
    }

    fn node_edits(&mut self) -> Result<NodeEdits, GrammarError> {
        let mut terms = Vec::new();
        if matches!(self.peek(), Some(Tok::RParen | Tok::Semi)) {
            return Ok(NodeEdits { terms });
        }
        loop {
            let t = self.edit_term()?;
            if matches!(t, EditTerm::Variable(_))
                && terms.iter().any(|x| matches!(x, EditTerm::Variable(_)))
            {
                return Err(self.error("at most one variable per action node"));
            }
            terms.push(t);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(NodeEdits { terms })
    }

    fn key_value_tail(&mut self, key: &str) -> Result<Option<(Token, Token)>, GrammarError> {
        if self.eat(&Tok::Eq) {
            let v = self.word("value after '='")?;
            Ok(Some((Token::from(key), Token::from(v.as_str()))))
        } else {
            Ok(None)
        }
    }

    fn edit_term(&mut self) -> Result<EditTerm, GrammarError> {
        let edit = match self.next() {
            Some(Tok::Var(v)) => return Ok(EditTerm::Variable(v)),
            Some(Tok::Plus) => match self.next() {
                Some(Tok::Attr(a)) => Edit::AddAttribute(self.attribute(a)?),
                Some(Tok::Word(w)) => {
                    if self.peek() == Some(&Tok::LParen) {
                        if !w.eq_ignore_ascii_case("FLX") {
                            self.pos -= 1;
                            return Err(self.error("FLX before a paradigm body"));
                        }
                        self.pos += 1;
                        let spec = self.flx_body(Some(Tok::RParen))?;
                        self.expect(Tok::RParen)?;
                        Edit::AttachFlx(spec)
                    } else if let Some((k, v)) = self.key_value_tail(&w)? {
                        Edit::SetKey(k, v)
                    } else {
                        Edit::AddFeature(Token::from(w.as_str()))
                    }
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.error("feature, KEY=VALUE, @attribute or FLX(...) after '+'"));
                }
            },
            Some(Tok::Minus) => match self.next() {
                Some(Tok::Attr(a)) => Edit::RemoveAttribute(self.attribute(a)?),
                Some(Tok::Word(w)) => match self.key_value_tail(&w)? {
                    Some((k, v)) => Edit::ClearKey(k, v),
                    None => Edit::RemoveFeature(Token::from(w.as_str())),
                },
                _ => {
                    self.pos -= 1;
                    return Err(self.error("feature, KEY=VALUE or @attribute after '-'"));
                }
            },
            Some(Tok::Bang) => match self.next() {
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("FLX") => Edit::ExecuteFlx,
                _ => {
                    self.pos -= 1;
                    return Err(self.error("FLX after '!'"));
                }
            },
            Some(Tok::Attr(a)) => Edit::ResolveAttribute(self.attribute(a)?),
            Some(Tok::Word(w)) => match self.key_value_tail(&w)? {
                Some((k, v)) => Edit::SetKey(k, v),
                None => Edit::Keep(Token::from(w.as_str())),
            },
            _ => {
                self.pos -= 1;
                return Err(self.error("an edit (+X, -X, !FLX, KEY=VALUE, @attr) or %variable"));
            }
        };
        Ok(EditTerm::Edit(edit))
    }

    /// Cases separated by `;` (a trailing `;` is allowed), up to `terminator`
    /// or end of input.
    fn flx_body(&mut self, terminator: Option<Tok>) -> Result<FlxSpec, GrammarError> {
        let mut cases = Vec::new();
        loop {
            if self.at_end() || (terminator.is_some() && self.peek() == terminator.as_ref()) {
                break;
            }
            cases.push(self.flx_case()?);
            if !self.eat(&Tok::Semi) {
                break;
            }
        }
        if cases.is_empty() {
            return Err(self.error("at least one paradigm case"));
        }
        Ok(FlxSpec { cases })
    }

    fn flx_case(&mut self) -> Result<FlxCase, GrammarError> {
        let braced = self.eat(&Tok::LBrace);
        let mut condition = Vec::new();
        loop {
            let negated = self.eat(&Tok::Caret);
            match self.peek() {
                Some(Tok::Word(w)) => {
                    condition.push(CondLiteral {
                        token: Token::from(w.as_str()),
                        negated,
                    });
                    self.pos += 1;
                }
                _ if condition.is_empty() && !negated => {
                    let (line, column) = self.here();
                    return Err(GrammarError::EmptyCondition { line, column });
                }
                _ => return Err(self.error("condition token")),
            }
            if !self.eat(&Tok::Amp) {
                break;
            }
        }
        if braced {
            self.expect(Tok::RBrace)?;
        }
        self.expect(Tok::Assign)?;
        let digits = self.word("strip count")?;
        let strip = digits.parse::<usize>().map_err(|_| {
            self.pos -= 1;
            self.error("non-negative strip count")
        })?;
        self.expect(Tok::Gt)?;
        let append = match self.next() {
            Some(Tok::Str(s)) => s,
            _ => {
                self.pos -= 1;
                return Err(self.error("quoted affix string"));
            }
        };
        Ok(FlxCase {
            condition,
            op: AffixOp { strip, append },
        })
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .or(self.tokens.last())
            .map(|s| (s.line, s.column))
            .unwrap_or((1, 1))
    }
}
