use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use unlgen::engine::{generate as run_generation, EngineCaps, EngineError, Generation};
use unlgen::eval::{evaluate_corpus, pair_lines, parse_corpus_tsv};
use unlgen::grammar::{lint_grammar, parse_grammar, Grammar};
use unlgen::lexicon::{parse_dictionary, serialize_dictionary, AttrCompat, Lexicon};
use unlgen::unl::{parse_unl_file, validate_document};

use crate::{CheckArgs, EvalArgs, GenerateArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INCOMPLETE: u8 = 2;

/// An input problem already rendered for standard error.
struct InputError(String);

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: impl std::fmt::Display) -> InputError {
    InputError(format!("{}: {e}", path.display()))
}

fn load_lexicon(dict: &Path, compat: Option<&Path>) -> Result<Lexicon, InputError> {
    let (mut lex, warnings) = parse_dictionary(&read(dict)?).map_err(|e| located(dict, e))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", dict.display());
    }
    if let Some(path) = compat {
        lex = lex.with_compat(AttrCompat::parse(&read(path)?).map_err(|e| located(path, e))?);
    }
    Ok(lex)
}

fn load_grammar(path: &Path) -> Result<Grammar, InputError> {
    parse_grammar(&read(path)?).map_err(|e| located(path, e))
}

fn report(result: Result<u8, InputError>) -> u8 {
    result.unwrap_or_else(|InputError(msg)| {
        eprintln!("error: {msg}");
        EXIT_INPUT
    })
}

pub fn generate(args: &GenerateArgs) -> u8 {
    report(generate_inner(args))
}

fn generate_inner(args: &GenerateArgs) -> Result<u8, InputError> {
    let docs = parse_unl_file(&read(&args.unl)?).map_err(|e| located(&args.unl, e))?;
    let lex = load_lexicon(&args.dict, args.compat.as_deref())?;
    let grammar = load_grammar(&args.grammar)?;
    let caps = EngineCaps {
        max_firings: args.max_firings,
        trace_level: args.trace,
        blank_joins: !args.no_blank_joins,
        collapse_spaces: !args.keep_spaces,
    };

    // Sentences are independent; collect preserves input order.
    let results: Vec<_> = docs
        .par_iter()
        .map(|doc| run_generation(doc, &lex, &grammar, &caps))
        .collect();

    let mut code = EXIT_OK;
    let mut lines = Vec::with_capacity(results.len());
    let stderr = io::stderr();
    let mut err = stderr.lock();
    for (i, (doc, result)) in docs.iter().zip(results).enumerate() {
        let n = i + 1;
        for d in validate_document(doc) {
            let _ = writeln!(err, "warning: sentence {n}: {d}");
        }
        let generation: Option<Generation> = match result {
            Ok(g) => Some(g),
            Err(EngineError::FiringCapExceeded {
                max_firings,
                partial,
            }) => {
                let _ = writeln!(err, "sentence {n}: FiringCapExceeded: stopped after {max_firings} firings; output is partial");
                code = EXIT_INCOMPLETE;
                Some(*partial)
            }
            Err(e) => {
                let _ = writeln!(err, "sentence {n}: {e}");
                code = EXIT_INCOMPLETE;
                None
            }
        };
        let Some(g) = generation else {
            lines.push(String::new());
            continue;
        };
        if !g.trace.is_empty() {
            let _ = writeln!(err, "== sentence {n}");
            for line in &g.trace {
                let _ = writeln!(err, "{line}");
            }
        }
        for d in &g.diagnostics {
            let _ = writeln!(err, "warning: sentence {n}: {d}");
            if matches!(d, unlgen::engine::EngineDiagnostic::UnresolvedRelations(_)) {
                code = EXIT_INCOMPLETE;
            }
        }
        lines.push(g.text);
    }

    let mut text = lines.join("\n");
    if !lines.is_empty() {
        text.push('\n');
    }
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| located(path, e))?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| InputError(format!("stdout: {e}")))?;
        }
    }
    Ok(code)
}

pub fn eval(args: &EvalArgs) -> u8 {
    report(eval_inner(args))
}

fn eval_inner(args: &EvalArgs) -> Result<u8, InputError> {
    let pairs = match (&args.corpus, &args.candidate, &args.reference) {
        (Some(corpus), _, _) => parse_corpus_tsv(&read(corpus)?).map_err(|e| located(corpus, e))?,
        (None, Some(c), Some(r)) => {
            pair_lines(&read(c)?, &read(r)?).map_err(|e| InputError(e.to_string()))?
        }
        _ => {
            return Err(InputError(
                "either --corpus or both --candidate and --reference are required".into(),
            ))
        }
    };
    let report = evaluate_corpus(&pairs).map_err(|e| InputError(e.to_string()))?;
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_tsv());
    }
    Ok(EXIT_OK)
}

pub fn check(args: &CheckArgs) -> u8 {
    report(check_inner(args))
}

fn check_inner(args: &CheckArgs) -> Result<u8, InputError> {
    let lex = load_lexicon(&args.dict, args.compat.as_deref())?;
    let grammar = load_grammar(&args.grammar)?;
    let diags = lint_grammar(&grammar, &lex);
    for d in &diags {
        eprintln!("warning: {}: {d}", args.grammar.display());
    }
    eprintln!(
        "checked {} dictionary entries and {} rules: 0 errors, {} warnings",
        lex.len(),
        grammar.rules.len(),
        diags.len()
    );
    if args.dump_dict {
        print!("{}", serialize_dictionary(&lex));
    }
    if args.dump_ast {
        print!("{grammar}");
    }
    Ok(EXIT_OK)
}
