//! Token-level LCS precision, recall and F-measure.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("corpus has no sentence pairs")]
    EmptyCorpus,
    #[error("sentence id {0:?} occurs more than once")]
    DuplicateId(String),
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("candidate file has {candidate} lines but reference file has {reference}")]
    LineCountMismatch { candidate: usize, reference: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentencePair {
    pub id: String,
    pub candidate: String,
    pub reference: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SentenceScore {
    pub id: String,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
    pub lcs: usize,
    pub candidate_tokens: usize,
    pub reference_tokens: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub per_sentence: Vec<SentenceScore>,
    /// Micro-averaged from summed counts.
    pub aggregate_precision: f64,
    pub aggregate_recall: f64,
    pub aggregate_f: f64,
}

/// NFC, then split on whitespace runs.
pub fn tokenize_surface(text: &str) -> Vec<String> {
    let normalized: String = text.nfc().collect();
    normalized.split_whitespace().map(str::to_string).collect()
}

pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// F = 2·LCS / (|a| + |b|); both empty counts as a perfect match.
fn f_from_counts(lcs: usize, a: usize, b: usize) -> f64 {
    if a == 0 && b == 0 {
        1.0
    } else {
        2.0 * lcs as f64 / (a + b) as f64
    }
}

pub fn score_pair(id: &str, candidate: &str, reference: &str) -> SentenceScore {
    let (c, r) = (tokenize_surface(candidate), tokenize_surface(reference));
    let lcs = lcs_length(&c, &r);
    let both_empty = c.is_empty() && r.is_empty();
    SentenceScore {
        id: id.to_string(),
        precision: if both_empty { 1.0 } else { ratio(lcs, c.len()) },
        recall: if both_empty { 1.0 } else { ratio(lcs, r.len()) },
        f: f_from_counts(lcs, c.len(), r.len()),
        lcs,
        candidate_tokens: c.len(),
        reference_tokens: r.len(),
    }
}

pub fn f_measure(candidate: &str, reference: &str) -> f64 {
    score_pair("", candidate, reference).f
}

/// Numeric ids in numeric order first, then the rest lexically.
fn id_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

pub fn evaluate_corpus(pairs: &[SentencePair]) -> Result<EvalReport, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut seen = BTreeSet::new();
    for p in pairs {
        if !seen.insert(p.id.as_str()) {
            return Err(EvalError::DuplicateId(p.id.clone()));
        }
    }
    let mut per_sentence: Vec<SentenceScore> = pairs
        .iter()
        .map(|p| score_pair(&p.id, &p.candidate, &p.reference))
        .collect();
    per_sentence.sort_by(|a, b| id_order(&a.id, &b.id));
    let lcs: usize = per_sentence.iter().map(|s| s.lcs).sum();
    let c: usize = per_sentence.iter().map(|s| s.candidate_tokens).sum();
    let r: usize = per_sentence.iter().map(|s| s.reference_tokens).sum();
    let empty = c == 0 && r == 0;
    Ok(EvalReport {
        aggregate_precision: if empty { 1.0 } else { ratio(lcs, c) },
        aggregate_recall: if empty { 1.0 } else { ratio(lcs, r) },
        aggregate_f: f_from_counts(lcs, c, r),
        per_sentence,
    })
}

fn lines(text: &str) -> Vec<&str> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut out: Vec<&str> = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    if out.last() == Some(&"") {
        out.pop();
    }
    out
}

/// `id<TAB>candidate<TAB>reference` per line; blank lines are skipped.
pub fn parse_corpus_tsv(text: &str) -> Result<Vec<SentencePair>, EvalError> {
    let mut out = Vec::new();
    for (i, line) in lines(text).into_iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let [id, candidate, reference] = cols.as_slice() else {
            return Err(EvalError::MalformedLine {
                line: i + 1,
                message: format!("expected 3 tab-separated columns, found {}", cols.len()),
            });
        };
        out.push(SentencePair {
            id: id.to_string(),
            candidate: candidate.to_string(),
            reference: reference.to_string(),
        });
    }
    Ok(out)
}

/// Pairs line i of each file; ids are 1-based line numbers.
pub fn pair_lines(candidates: &str, references: &str) -> Result<Vec<SentencePair>, EvalError> {
    let (c, r) = (lines(candidates), lines(references));
    if c.len() != r.len() {
        return Err(EvalError::LineCountMismatch {
            candidate: c.len(),
            reference: r.len(),
        });
    }
    Ok(c.into_iter()
        .zip(r)
        .enumerate()
        .map(|(i, (c, r))| SentencePair {
            id: (i + 1).to_string(),
            candidate: c.to_string(),
            reference: r.to_string(),
        })
        .collect())
}

impl EvalReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\tprecision\trecall\tf\n");
        for s in &self.per_sentence {
            writeln!(
                out,
                "{}\t{:.4}\t{:.4}\t{:.4}",
                s.id, s.precision, s.recall, s.f
            )
            .unwrap();
        }
        writeln!(
            out,
            "aggregate\t{:.4}\t{:.4}\t{:.4}",
            self.aggregate_precision, self.aggregate_recall, self.aggregate_f
        )
        .unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(id: &str, c: &str, r: &str) -> SentencePair {
        SentencePair {
            id: id.into(),
            candidate: c.into(),
            reference: r.into(),
        }
    }

    #[test]
    fn tokenizing() {
        assert_eq!(tokenize_surface("ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ"), ["ਉਹ", "ਪਹੁੰਚ", "ਚੁੱਕਾ", "ਹੈ"]);
        assert_eq!(tokenize_surface("  a   b "), ["a", "b"]);
        assert!(tokenize_surface("").is_empty());
        // Decomposed and composed forms tokenize identically.
        assert_eq!(
            tokenize_surface("\u{0a16}\u{0a3c}"),
            tokenize_surface("\u{0a59}")
        );
    }

    #[test]
    fn lcs_examples() {
        assert_eq!(lcs_length(&["x"], &["x"]), 1);
        assert_eq!(lcs_length(&["a", "b"], &["b", "a"]), 1);
        assert_eq!(
            lcs_length(&["ਉਹ", "ਪਹੁੰਚ", "ਚੁੱਕਾ"], &["ਉਹ", "ਪਹੁੰਚ", "ਚੁੱਕਾ", "ਹੈ"]),
            3
        );
        assert_eq!(lcs_length::<&str>(&[], &["a"]), 0);
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_measure("ਉਹ ਪਹੁੰਚ", "ਉਹ ਪਹੁੰਚ"), 1.0);
        assert!((f_measure("ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ", "ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ") - 6.0 / 7.0).abs() < 1e-12);
        assert_eq!(f_measure("a b", "c d"), 0.0);
        assert_eq!(f_measure("", ""), 1.0);
        assert_eq!(f_measure("", "a"), 0.0);
    }

    #[test]
    fn corpus_micro_average() {
        let pairs = [
            pair("1", "ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ", "ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ"),
            pair("2", "ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ", "ਉਹ ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ"),
        ];
        let report = evaluate_corpus(&pairs).unwrap();
        // 2·(4+3) / ((4+3) + (4+4))
        assert!((report.aggregate_f - 14.0 / 15.0).abs() < 1e-12);
        assert_eq!(report.per_sentence[0].f, 1.0);

        let one = evaluate_corpus(&[pair("x", "a b", "a c")]).unwrap();
        assert_eq!(one.aggregate_f, one.per_sentence[0].f);
        assert_eq!(evaluate_corpus(&[]), Err(EvalError::EmptyCorpus));
        assert_eq!(
            evaluate_corpus(&[pair("a", "", ""), pair("a", "", "")]),
            Err(EvalError::DuplicateId("a".into()))
        );
    }

    #[test]
    fn report_is_sorted_by_id() {
        let report = evaluate_corpus(&[
            pair("10", "a", "a"),
            pair("b", "a", "a"),
            pair("2", "a", "a"),
        ])
        .unwrap();
        let ids: Vec<&str> = report.per_sentence.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["2", "10", "b"]);
        let tsv = report.to_tsv();
        assert!(tsv.starts_with("id\tprecision\trecall\tf\n2\t"));
        assert!(tsv.ends_with("aggregate\t1.0000\t1.0000\t1.0000\n"));
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["aggregate_f"], 1.0);
        assert_eq!(json["per_sentence"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn corpus_files() {
        let pairs = parse_corpus_tsv("\u{feff}1\ta b\ta b\r\n\n2\tc\td\n").unwrap();
        assert_eq!(pairs, [pair("1", "a b", "a b"), pair("2", "c", "d")]);
        assert!(matches!(
            parse_corpus_tsv("1\tonly two"),
            Err(EvalError::MalformedLine { line: 1, .. })
        ));
        assert_eq!(pair_lines("a\nb\n", "a\nb").unwrap().len(), 2);
        assert_eq!(
            pair_lines("a\nb\n", "a\n"),
            Err(EvalError::LineCountMismatch {
                candidate: 2,
                reference: 1
            })
        );
    }
}
