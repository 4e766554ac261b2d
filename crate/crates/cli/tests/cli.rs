use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use unlgen::fixtures::default_fixture_dir;

fn unlgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unlgen"))
        .args(args)
        .env_remove("UNLGEN_TRACE")
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    default_fixture_dir()
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn case(name: &str) -> String {
    fixture(&format!("cases/{name}.unl"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const VERB_CASES: [(&str, &str); 3] = [
    ("verb_walk_future_female", "ਉਹ ਚੱਲੇਗੀ"),
    ("verb_arrive_present_perfect", "ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ"),
    ("verb_sit_past_male_plural", "ਉਹ ਬੈਠ ਗਏ ਸਨ"),
];

#[test]
fn multi_sentence_output_keeps_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = VERB_CASES
        .iter()
        .map(|(n, _)| fs::read_to_string(case(n)).unwrap())
        .collect();
    let unl = write(dir.path(), "in.unl", &text);
    let out_path = dir.path().join("out.txt");
    let o = unlgen(&[
        "generate",
        "--unl",
        unl.to_str().unwrap(),
        "--dict",
        &fixture("verbs.dic"),
        "--grammar",
        &fixture("verbs.grm"),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let want: String = VERB_CASES.iter().map(|(_, s)| format!("{s}\n")).collect();
    assert_eq!(fs::read_to_string(out_path).unwrap(), want);
}

#[test]
fn traces_go_to_stderr_and_the_flag_beats_the_environment() {
    let args = [
        "generate",
        "--unl",
        &case("verb_arrive_present_perfect"),
        "--dict",
        &fixture("verbs.dic"),
        "--grammar",
        &fixture("verbs.grm"),
    ];
    let quiet = unlgen(&args);
    assert_eq!(stdout(&quiet), "ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ\n");
    assert!(stderr(&quiet).is_empty());

    let env = Command::new(env!("CARGO_BIN_EXE_unlgen"))
        .args(args)
        .env("UNLGEN_TRACE", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&env), stdout(&quiet));
    assert!(stderr(&env).contains("#1 fire r0: (%x,M7):="));

    let mut with_flag = args.to_vec();
    with_flag.extend(["--trace", "0"]);
    let flag = Command::new(env!("CARGO_BIN_EXE_unlgen"))
        .args(&with_flag)
        .env("UNLGEN_TRACE", "3")
        .output()
        .unwrap();
    assert!(stderr(&flag).is_empty());
}

#[test]
fn keep_spaces_shows_raw_joins() {
    let o = unlgen(&[
        "generate",
        "--unl",
        &case("determiner_book_multal"),
        "--dict",
        &fixture("determiners.dic"),
        "--grammar",
        &fixture("determiners.grm"),
        "--keep-spaces",
    ]);
    assert_eq!(stdout(&o), "ਉਹਨਾਂ ਦੀਆਂ ਬਹੁਤ ਕਿਤਾਬਾਂ\n");
}

#[test]
fn unknown_words_and_leftover_relations() {
    let o = unlgen(&[
        "generate",
        "--unl",
        &case("determiner_book_multal"),
        "--dict",
        &fixture("verbs.dic"),
        "--grammar",
        &fixture("verbs.grm"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("no dictionary entry for UW \"book\""), "{err}");
    assert!(err.contains("unresolved"), "{err}");
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad_unl = write(dir.path(), "bad.unl", "{unl}\nagt(a:01 b:02\n");
    let o = unlgen(&[
        "generate",
        "--unl",
        bad_unl.to_str().unwrap(),
        "--dict",
        &fixture("verbs.dic"),
        "--grammar",
        &fixture("verbs.grm"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.unl"), "{}", stderr(&o));

    let o = unlgen(&[
        "generate",
        "--unl",
        "/nonexistent.unl",
        "--dict",
        "x",
        "--grammar",
        "y",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(unlgen(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(unlgen(&["--help"]).status.code(), Some(0));
}

#[test]
fn eval_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let refs = write(
        dir.path(),
        "ref.txt",
        "ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ\nਉਹ ਇਕ ਦੂਜੇ ਨੂੰ ਪਿਆਰ ਕਰਦੇ ਹਨ\nਉਹਨਾਂ ਦੀਆਂ ਬਹੁਤ ਕਿਤਾਬਾਂ\n",
    );
    let r = refs.to_str().unwrap();
    let o = unlgen(&["eval", "--candidate", r, "--reference", r]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).ends_with("aggregate\t1.0000\t1.0000\t1.0000\n"),
        "{}",
        stdout(&o)
    );

    let short = write(dir.path(), "short.txt", "ਉਹ\n");
    let o = unlgen(&[
        "eval",
        "--candidate",
        short.to_str().unwrap(),
        "--reference",
        r,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("1 lines but reference file has 3"));

    let corpus = write(
        dir.path(),
        "c.tsv",
        "a\tਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ\tਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ\nb\tਉਹ ਪਹੁੰਚ ਚੁੱਕਾ\tਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ\n",
    );
    let o = unlgen(&["eval", "--corpus", corpus.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((json["aggregate_f"].as_f64().unwrap() - 14.0 / 15.0).abs() < 1e-9);

    let empty = write(dir.path(), "empty.tsv", "");
    assert_eq!(
        unlgen(&["eval", "--corpus", empty.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(unlgen(&["eval"]).status.code(), Some(1));
}

#[test]
fn check_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    for cat in ["verbs", "pronouns", "determiners"] {
        let o = unlgen(&[
            "check",
            "--dict",
            &fixture(&format!("{cat}.dic")),
            "--grammar",
            &fixture(&format!("{cat}.grm")),
        ]);
        assert_eq!(o.status.code(), Some(0), "{cat}: {}", stderr(&o));
        assert!(stderr(&o).contains("0 errors"));
    }

    let dup = write(
        dir.path(),
        "dup.dic",
        "[ਉਹ] \"00\" (R,M2);\n[ਉਹ] \"00\" (R,M2);\n",
    );
    let o = unlgen(&[
        "check",
        "--dict",
        dup.to_str().unwrap(),
        "--grammar",
        &fixture("pronouns.grm"),
        "--dump-dict",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1);

    let unbound = write(dir.path(), "u.grm", "(%x,V):=(%y);\n");
    let o = unlgen(&[
        "check",
        "--dict",
        &fixture("verbs.dic"),
        "--grammar",
        unbound.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unbound variable %y"), "{}", stderr(&o));

    let o = unlgen(&[
        "check",
        "--dict",
        &fixture("determiners.dic"),
        "--grammar",
        &fixture("determiners.grm"),
        "--dump-ast",
    ]);
    let dumped = stdout(&o);
    assert_eq!(dumped.lines().count(), 5);
    assert_eq!(
        unlgen::grammar::parse_grammar(&dumped).unwrap(),
        unlgen::grammar::parse_grammar(&fs::read_to_string(fixture("determiners.grm")).unwrap())
            .unwrap()
    );
}
