//! Generates every fixture case and reports whether output and firing
//! sequence match the recorded expectations.
//!
//! Usage: run_suite [LEVEL] [--write-traces]

use std::fs;

use unlgen::engine::{generate, EngineCaps};
use unlgen::fixtures::{default_fixture_dir, load_fixture_suite};
use unlgen::unl::parse_unl_document;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let write = args.iter().any(|a| a == "--write-traces");
    let level = args.iter().find_map(|a| a.parse().ok()).unwrap_or(0);
    let suite = load_fixture_suite(&default_fixture_dir()).expect("fixture suite");
    for case in &suite.cases {
        let (lex, grammar) = suite.category(case).load().expect("category files");
        let doc = parse_unl_document(&case.unl_text).expect("case input");
        let caps = EngineCaps {
            trace_level: if write { 2 } else { level },
            ..EngineCaps::default()
        };
        match generate(&doc, &lex, &grammar, &caps) {
            Ok(g) => {
                let ok = g.text == case.expected_output
                    && g.rule_sequence() == case.expected_rule_sequence;
                println!(
                    "{} {}: {} {:?}",
                    if ok { "ok  " } else { "DIFF" },
                    case.name,
                    g.text,
                    g.rule_sequence()
                );
                if write {
                    fs::write(&case.trace_path, g.trace.join("\n") + "\n").expect("trace file");
                } else {
                    for line in &g.trace {
                        println!("    {line}");
                    }
                }
            }
            Err(e) => println!("ERR  {}: {e}", case.name),
        }
    }
}
