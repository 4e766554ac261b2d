use super::GrammarError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Assign,
    Plus,
    Minus,
    Caret,
    Bang,
    Amp,
    Eq,
    Gt,
    Var(String),
    Attr(String),
    Word(String),
    Str(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Semi => "';'".into(),
            Tok::Comma => "','".into(),
            Tok::Assign => "':='".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Eq => "'='".into(),
            Tok::Gt => "'>'".into(),
            Tok::Var(v) => format!("variable %{v}"),
            Tok::Attr(a) => format!("attribute @{a}"),
            Tok::Word(w) => format!("{w:?}"),
            Tok::Str(s) => format!("string {s:?}"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, GrammarError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '^' => Some(Tok::Caret),
            '!' => Some(Tok::Bang),
            '&' => Some(Tok::Amp),
            '=' => Some(Tok::Eq),
            '>' => Some(Tok::Gt),
            _ => None,
        };
        if let Some(tok) = simple {
            bump!();
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            continue;
        }
        if c.is_whitespace() || c == '\u{feff}' {
            bump!();
            continue;
        }
        match c {
            '/' => {
                bump!();
                if chars.peek() == Some(&'/') {
                    while let Some(&n) = chars.peek() {
                        if n == '\n' {
                            break;
                        }
                        bump!();
                    }
                } else {
                    return Err(GrammarError::syntax(start_line, start_col, "'//' comment"));
                }
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    out.push(Spanned {
                        tok: Tok::Assign,
                        line: start_line,
                        column: start_col,
                    });
                } else {
                    return Err(GrammarError::syntax(line, column, "'=' after ':'"));
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        None => {
                            return Err(GrammarError::syntax(start_line, start_col, "closing '\"'"))
                        }
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some('n') => s.push('\n'),
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => {
                                return Err(GrammarError::syntax(
                                    line,
                                    column,
                                    "escape \\\" \\\\ or \\n",
                                ))
                            }
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                out.push(Spanned {
                    tok: Tok::Str(s),
                    line: start_line,
                    column: start_col,
                });
            }
            '%' | '@' => {
                bump!();
                let mut name = String::new();
                while let Some(&n) = chars.peek() {
                    if !is_word_char(n) {
                        break;
                    }
                    name.push(n);
                    bump!();
                }
                if name.is_empty() {
                    return Err(GrammarError::syntax(line, column, "a name"));
                }
                let tok = if c == '%' {
                    if !name.chars().all(|ch| ch.is_ascii_lowercase()) {
                        return Err(GrammarError::syntax(
                            start_line,
                            start_col,
                            "variable of lowercase letters (%[a-z]+)",
                        ));
                    }
                    Tok::Var(name)
                } else {
                    Tok::Attr(name)
                };
                out.push(Spanned {
                    tok,
                    line: start_line,
                    column: start_col,
                });
            }
            c if is_word_char(c) => {
                let mut word = String::new();
                while let Some(&n) = chars.peek() {
                    if !is_word_char(n) {
                        break;
                    }
                    word.push(n);
                    bump!();
                }
                out.push(Spanned {
                    tok: Tok::Word(word),
                    line: start_line,
                    column: start_col,
                });
            }
            other => {
                return Err(GrammarError::syntax(
                    start_line,
                    start_col,
                    &format!("a rule token, found {other:?}"),
                ));
            }
        }
    }
    Ok(out)
}
