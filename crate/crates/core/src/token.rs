use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// A grammar/dictionary feature token such as `V`, `M7`, `PRS` or `3PS`.
///
/// Tokens keep their original spelling for display but compare, order and
/// hash ASCII-case-insensitively, so `PRs` and `PRS` name the same feature.
#[derive(Clone, Debug)]
pub struct Token(String);

impl Token {
    pub fn new(text: impl Into<String>) -> Self {
        Token(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for paradigm tags of the form `M<digits>`.
    pub fn is_paradigm_tag(&self) -> bool {
        let mut chars = self.0.chars();
        matches!(chars.next(), Some('M' | 'm'))
            && self.0.len() > 1
            && chars.all(|c| c.is_ascii_digit())
    }

    fn folded(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.bytes().map(|b| b.to_ascii_lowercase())
    }
}

impl PartialEq for Token {
    fn eq(&self, other: &Self) -> bool {
        self.0.eq_ignore_ascii_case(&other.0)
    }
}

impl Eq for Token {}

impl PartialEq<str> for Token {
    fn eq(&self, other: &str) -> bool {
        self.0.eq_ignore_ascii_case(other)
    }
}

impl PartialEq<&str> for Token {
    fn eq(&self, other: &&str) -> bool {
        self.0.eq_ignore_ascii_case(other)
    }
}

impl Ord for Token {
    fn cmp(&self, other: &Self) -> Ordering {
        self.folded().cmp(other.folded())
    }
}

impl PartialOrd for Token {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Token {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for b in self.folded() {
            state.write_u8(b);
        }
        state.write_u8(0xff);
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Token {
    fn from(s: &str) -> Self {
        Token(s.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn case_insensitive_identity() {
        assert_eq!(Token::from("PRs"), Token::from("PRS"));
        let set: BTreeSet<Token> = ["PRS", "PRs", "inflected"]
            .into_iter()
            .map(Token::from)
            .collect();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&Token::from("INFLECTED")));
    }

    #[test]
    fn paradigm_tags() {
        assert!(Token::from("M7").is_paradigm_tag());
        assert!(Token::from("M12").is_paradigm_tag());
        assert!(!Token::from("M").is_paradigm_tag());
        assert!(!Token::from("MCL").is_paradigm_tag());
    }
}
