//! The transformation-rule language: T-rules, paradigm bodies and lints.

mod ast;
mod display;
mod lexer;
mod lint;
mod parser;

use thiserror::Error;

pub use ast::*;
pub(crate) use display::write_quoted;
pub use lint::{lint_flx_spec, lint_grammar, LintDiagnostic};
pub use parser::{parse_flx_spec, parse_grammar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}, column {column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("line {line}: rule r{rule} uses unbound variable {var}")]
    UnboundVariable {
        rule: usize,
        line: usize,
        var: String,
    },
    #[error("line {line}: empty rule")]
    EmptyRule { line: usize },
    #[error("line {line}, column {column}: empty paradigm condition")]
    EmptyCondition { line: usize, column: usize },
}

impl GrammarError {
    pub(crate) fn syntax(line: usize, column: usize, expected: &str) -> Self {
        GrammarError::Syntax {
            line,
            column,
            expected: expected.to_string(),
        }
    }

    pub fn line(&self) -> usize {
        match self {
            GrammarError::Syntax { line, .. }
            | GrammarError::UnboundVariable { line, .. }
            | GrammarError::EmptyRule { line }
            | GrammarError::EmptyCondition { line, .. } => *line,
        }
    }
}
