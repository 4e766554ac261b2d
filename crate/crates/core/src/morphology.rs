//! Right-edge inflection: paradigm conditions and strip/append affixes.

use thiserror::Error;

use crate::engine::GenNode;
use crate::grammar::{AffixOp, CondLiteral};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphError {
    #[error("cannot strip {strip} characters from {surface:?}")]
    StripTooLong { surface: String, strip: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InflectionOutcome {
    pub matched_case: Option<usize>,
    pub surface_before: String,
    pub surface_after: String,
}

/// Every positive literal holds and every `^` literal does not.
pub fn eval_condition(cond: &[CondLiteral], node: &GenNode) -> bool {
    cond.iter()
        .all(|lit| node.satisfies(&lit.token) != lit.negated)
}

pub fn apply_affix(surface: &str, op: &AffixOp) -> Result<String, MorphError> {
    let len = surface.chars().count();
    if op.strip > len {
        return Err(MorphError::StripTooLong {
            surface: surface.to_string(),
            strip: op.strip,
        });
    }
    let keep: String = surface.chars().take(len - op.strip).collect();
    Ok(keep + &op.append)
}

/// Runs the node's pending paradigm: the first case whose condition holds
/// rewrites the surface. The paradigm is consumed either way.
pub fn inflect(node: &mut GenNode) -> Result<InflectionOutcome, MorphError> {
    let before = node.surface.clone();
    let mut matched = None;
    if let Some(spec) = &node.pending_flx {
        if let Some((i, case)) = spec
            .cases
            .iter()
            .enumerate()
            .find(|(_, c)| eval_condition(&c.condition, node))
        {
            node.surface = apply_affix(&node.surface, &case.op)?;
            matched = Some(i);
        }
    }
    node.pending_flx = None;
    node.inflected = true;
    Ok(InflectionOutcome {
        matched_case: matched,
        surface_before: before,
        surface_after: node.surface.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_flx_spec;
    use crate::token::Token;

    fn node(surface: &str, features: &[&str], kv: &[(&str, &str)]) -> GenNode {
        let mut n = GenNode::literal(surface);
        n.features = features.iter().map(|f| Token::from(*f)).collect();
        n.kv = kv
            .iter()
            .map(|(k, v)| (Token::from(*k), Token::from(*v)))
            .collect();
        n
    }

    fn cond(text: &str) -> Vec<CondLiteral> {
        parse_flx_spec(&format!("{text}:=0>\"\""))
            .unwrap()
            .cases
            .remove(0)
            .condition
    }

    fn op(strip: usize, append: &str) -> AffixOp {
        AffixOp {
            strip,
            append: append.into(),
        }
    }

    #[test]
    fn conditions() {
        let n = node("ਪਹੁੰਚ", &["V", "PER", "PRS", "MCL"], &[("NUM", "SNG")]);
        assert!(eval_condition(&cond("PER&PRS&MCL&SNG"), &n));
        assert!(!eval_condition(&cond("AGT"), &n));
        assert!(!eval_condition(&cond("A&^A"), &node("x", &["A"], &[])));
        assert!(!eval_condition(&cond("A&^A"), &node("x", &[], &[])));
        // Key names are not values.
        assert!(!eval_condition(&cond("NUM"), &n));
        assert!(eval_condition(&cond("^NUM"), &n));
    }

    #[test]
    fn affixes() {
        assert_eq!(apply_affix("ਕਿਤਾਬ", &op(0, "ਾਂ")).unwrap(), "ਕਿਤਾਬਾਂ");
        assert_eq!(apply_affix("ਪਹੁੰਚ", &op(0, " ਚੁੱਕਾ ਹੈ")).unwrap(), "ਪਹੁੰਚ ਚੁੱਕਾ ਹੈ");
        assert_eq!(apply_affix("ਉਹ", &op(0, "")).unwrap(), "ਉਹ");
        // Strip counts scalar values: "ਾਂ" is two of them.
        assert_eq!(apply_affix("ਕਿਤਾਬਾਂ", &op(2, "")).unwrap(), "ਕਿਤਾਬ");
        assert_eq!(apply_affix("ab", &op(2, "c")).unwrap(), "c");
        assert_eq!(
            apply_affix("ab", &op(3, "")),
            Err(MorphError::StripTooLong {
                surface: "ab".into(),
                strip: 3
            })
        );
    }

    #[test]
    fn inflect_plural_pronoun() {
        let mut n = node("ਉਹ", &["R", "PLR"], &[]);
        n.pending_flx = Some(parse_flx_spec(r#"SNG:=0>""; PLR:=0>"ਨਾਂ""#).unwrap());
        let out = inflect(&mut n).unwrap();
        assert_eq!(n.surface, "ਉਹਨਾਂ");
        assert_eq!(out.matched_case, Some(1));
        assert!(n.inflected && n.pending_flx.is_none());
    }

    #[test]
    fn inflect_without_matching_case_keeps_surface() {
        let mut n = node("ਉਹ", &["R"], &[]);
        n.pending_flx = Some(parse_flx_spec(r#"AGT:=0>"ਨੂੰ""#).unwrap());
        let out = inflect(&mut n).unwrap();
        assert_eq!(
            out,
            InflectionOutcome {
                matched_case: None,
                surface_before: "ਉਹ".into(),
                surface_after: "ਉਹ".into()
            }
        );
        assert!(n.inflected && n.pending_flx.is_none());
    }

    #[test]
    fn first_matching_case_wins() {
        let mut n = node("x", &["A", "B"], &[]);
        n.pending_flx = Some(parse_flx_spec(r#"A:=0>"1"; B:=0>"2""#).unwrap());
        assert_eq!(inflect(&mut n).unwrap().matched_case, Some(0));
        assert_eq!(n.surface, "x1");
    }
}
