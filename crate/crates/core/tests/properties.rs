use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

use unlgen::engine::GenNode;
use unlgen::eval::{f_measure, lcs_length, tokenize_surface};
use unlgen::grammar::{parse_flx_spec, parse_grammar, AffixOp, GrammarError};
use unlgen::lexicon::{parse_dictionary, serialize_dictionary};
use unlgen::morphology::{apply_affix, inflect};
use unlgen::unl::{parse_unl_document, serialize_unl_document};
use unlgen::Token;

fn ws() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["", " ", "  ", "\t"])
}

fn unl_node() -> impl Strategy<Value = String> {
    (
        prop_oneof![
            Just("00".to_string()),
            "[a-z]{1,8}",
            "[a-z]{2,5}\\(icl>[a-z]{2,5}\\)"
        ],
        prop::option::of("[0-9A-Z]{2}"),
        btree_set("[a-z0-9]{1,8}", 0..4),
        any::<bool>(),
    )
        .prop_map(|(uw, id, attrs, trailing_dot)| {
            let mut s = uw;
            if let Some(id) = id {
                s += &format!(":{id}");
            }
            for a in attrs {
                s += &format!(".@{a}");
            }
            if trailing_dot {
                s.push('.');
            }
            s
        })
}

fn unl_text() -> impl Strategy<Value = String> {
    vec(("[a-z]{2,3}", unl_node(), unl_node(), ws(), ws()), 0..6).prop_map(|rels| {
        let mut s = String::from("{unl}\n");
        for (label, a, b, w1, w2) in rels {
            s += &format!("{label}({w1}{a},{w2}{b}{w1})\n");
        }
        s + "{/unl}\n"
    })
}

fn brute_lcs(a: &[u8], b: &[u8]) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let sub: Vec<u8> = (0..a.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| a[i])
            .collect();
        let mut it = b.iter();
        if sub.iter().all(|x| it.any(|y| y == x)) {
            best = best.max(sub.len());
        }
    }
    best
}

fn gurmukhi(max: usize) -> impl Strategy<Value = String> {
    vec(prop::char::range('\u{0A01}', '\u{0A75}'), 0..max).prop_map(|cs| cs.into_iter().collect())
}

fn sentence() -> impl Strategy<Value = String> {
    vec(
        (
            prop::sample::select(vec!["ਉਹ", "ਪਹੁੰਚ", "ਹੈ", "a", "b", "c"]),
            ws(),
        ),
        0..7,
    )
    .prop_map(|ws| ws.into_iter().map(|(w, s)| format!("{w}{s} ")).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn unl_round_trip(text in unl_text()) {
        let doc = parse_unl_document(&text).unwrap();
        let printed = serialize_unl_document(&doc);
        let again = parse_unl_document(&printed).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(serialize_unl_document(&again), printed);
    }

    #[test]
    fn lcs_matches_brute_force(a in vec(0u8..3, 0..=8), b in vec(0u8..3, 0..=8)) {
        prop_assert_eq!(lcs_length(&a, &b), brute_lcs(&a, &b));
    }

    #[test]
    fn affix_length_law(surface in gurmukhi(12), strip in 0usize..6, append in gurmukhi(6)) {
        let op = AffixOp { strip, append: append.clone() };
        let len = surface.chars().count();
        match apply_affix(&surface, &op) {
            Ok(out) => {
                prop_assert!(strip <= len);
                prop_assert_eq!(out.chars().count(), len - strip + append.chars().count());
                prop_assert!(out.ends_with(&append));
            }
            Err(_) => prop_assert!(strip > len),
        }
    }

    #[test]
    fn action_variables_must_be_bound(p in "[abc]", q in "[abc]", r in "[abc]") {
        let node = parse_grammar(&format!("(%{p},V):=(%{q},+X);"));
        if p == q {
            prop_assert!(node.is_ok());
        } else {
            let is_unbound = matches!(node, Err(GrammarError::UnboundVariable { .. }));
            prop_assert!(is_unbound);
        }
        let rel = parse_grammar(&format!("agt(%{p};%{q}):=(%{r});"));
        if p == q {
            prop_assert!(rel.is_err());
        } else if r == p || r == q {
            prop_assert!(rel.is_ok());
        } else {
            let is_unbound = matches!(rel, Err(GrammarError::UnboundVariable { .. }));
            prop_assert!(is_unbound);
        }
    }

    #[test]
    fn canonical_rules_reparse(
        feats in vec("[A-Z][A-Z0-9]{0,3}", 1..4),
        edits in vec(prop::sample::select(vec!["+A", "-B", "+@x", "-@y", "@z", "K=V", "+K=W", "-K=V", "!FLX", "Q"]), 0..4),
        lit in gurmukhi(5),
        w in ws(),
    ) {
        let text = format!(
            "({w}%x,{}{w}):={w}(%x,{}+FLX(A&^B:=0>\"ਾਂ\"; {{C}}:=1>\"\")){w}(\"{}\");",
            feats.join(","),
            edits.iter().map(|e| format!("{e},")).collect::<String>(),
            lit
        );
        let g = parse_grammar(&text).unwrap();
        prop_assert_eq!(parse_grammar(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn dictionary_round_trip(entries in vec(("[ਕਖਗਘ]{1,4}", "[a-z]{1,6}", btree_set("[A-Z][A-Z0-9]{0,2}", 1..4)), 0..8)) {
        let text: String = entries
            .iter()
            .map(|(lemma, uw, f)| format!("[{lemma}] \"{uw}\" ({});\n", f.iter().cloned().collect::<Vec<_>>().join(",")))
            .collect();
        let (lex, _) = parse_dictionary(&text).unwrap();
        let (again, warnings) = parse_dictionary(&serialize_dictionary(&lex)).unwrap();
        prop_assert!(warnings.is_empty());
        prop_assert_eq!(again.entries(), lex.entries());
    }

    #[test]
    fn disjoint_case_order_does_not_matter(present in btree_set(prop::sample::select(vec!["A", "B", "C", "D"]), 0..4), rot in 0usize..4) {
        // Each case requires one token and forbids all the others: at most one holds.
        let toks = ["A", "B", "C", "D"];
        let cases: Vec<String> = toks
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let neg: Vec<String> = toks.iter().filter(|o| *o != t).map(|o| format!("^{o}")).collect();
                format!("{t}&{}:=0>\"{i}\"", neg.join("&"))
            })
            .collect();
        let mut rotated = cases.clone();
        rotated.rotate_left(rot);
        let run = |cases: &[String]| {
            let mut n = GenNode::literal("x");
            n.features = present.iter().map(|t| Token::from(*t)).collect();
            n.pending_flx = Some(parse_flx_spec(&cases.join("; ")).unwrap());
            inflect(&mut n).unwrap();
            n.surface
        };
        prop_assert_eq!(run(&cases), run(&rotated));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn f_measure_symmetry_and_bounds(a in sentence(), b in sentence()) {
        let (fab, fba) = (f_measure(&a, &b), f_measure(&b, &a));
        prop_assert_eq!(fab, fba);
        prop_assert!((0.0..=1.0).contains(&fab));
        prop_assert_eq!(fab == 1.0, tokenize_surface(&a) == tokenize_surface(&b));
    }
}
