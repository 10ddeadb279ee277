//! Line-oriented token syntax shared by canonical bytes and the TriG subset.

use crate::error::{Error, Result};
use crate::gupri::Gupri;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Iri(String),
    Str(String),
    Caret,
    Word(String),
    Punct(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Spanned {
    pub token: Token,
    pub column: usize,
}

pub(crate) fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub(crate) fn iri(g: &Gupri) -> String {
    format!("<{g}>")
}

/// Splits one line into tokens. Columns are 1-based character offsets.
pub(crate) fn tokenize(line: &str, line_no: usize) -> Result<Vec<Spanned>> {
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (byte, c) = chars[i];
        let column = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '<' => {
                let rest = &line[byte + 1..];
                let end = rest
                    .find('>')
                    .ok_or_else(|| Error::syntax(line_no, column, "unterminated IRI"))?;
                let body = &rest[..end];
                if body.chars().any(|c| c.is_whitespace() || c == '<') {
                    return Err(Error::syntax(line_no, column, "whitespace inside IRI"));
                }
                out.push(Spanned {
                    token: Token::Iri(body.to_string()),
                    column,
                });
                i += body.chars().count() + 2;
            }
            '"' => {
                let mut j = i + 1;
                let mut escaped = false;
                loop {
                    if j >= chars.len() {
                        return Err(Error::syntax(line_no, column, "unterminated string"));
                    }
                    let ch = chars[j].1;
                    if escaped {
                        escaped = false;
                    } else if ch == '\\' {
                        escaped = true;
                    } else if ch == '"' {
                        break;
                    }
                    j += 1;
                }
                let end_byte = chars[j].0 + 1;
                let value: String = serde_json::from_str(&line[byte..end_byte]).map_err(|e| {
                    Error::syntax(line_no, column, format!("bad string escape: {e}"))
                })?;
                out.push(Spanned {
                    token: Token::Str(value),
                    column,
                });
                i = j + 1;
            }
            '^' => {
                if chars.get(i + 1).map(|c| c.1) != Some('^') {
                    return Err(Error::syntax(line_no, column, "expected `^^`"));
                }
                out.push(Spanned {
                    token: Token::Caret,
                    column,
                });
                i += 2;
            }
            '{' | '}' => {
                out.push(Spanned {
                    token: Token::Punct(c),
                    column,
                });
                i += 1;
            }
            _ => {
                let mut j = i;
                while j < chars.len()
                    && !matches!(chars[j].1, ' ' | '\t' | '<' | '"' | '{' | '}' | '^')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().map(|(_, c)| c).collect();
                let token = if word == "." {
                    Token::Punct('.')
                } else {
                    Token::Word(word)
                };
                out.push(Spanned { token, column });
                i = j;
            }
        }
    }
    Ok(out)
}

/// Cursor over the tokens of a single line.
pub(crate) struct Cursor<'a> {
    tokens: &'a [Spanned],
    pos: usize,
    line: usize,
    width: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(tokens: &'a [Spanned], line: usize, width: usize) -> Self {
        Self {
            tokens,
            pos: 0,
            line,
            width,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let column = self
            .tokens
            .get(self.pos)
            .map(|t| t.column)
            .unwrap_or(self.width + 1);
        Error::syntax(self.line, column, message)
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos).map(|t| &t.token)
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos).map(|t| &t.token);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn word(&mut self) -> Result<&'a str> {
        match self.peek() {
            Some(Token::Word(w)) => {
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("expected a word")),
        }
    }

    pub fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Token::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected `{kw}`"))),
        }
    }

    pub fn string(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token::Str(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.error("expected a quoted string")),
        }
    }

    pub fn gupri(&mut self) -> Result<Gupri> {
        match self.peek() {
            Some(Token::Iri(text)) => {
                let g = Gupri::parse(text).map_err(|e| self.error(e.to_string()))?;
                self.pos += 1;
                Ok(g)
            }
            _ => Err(self.error("expected a GUPRI in angle brackets")),
        }
    }

    pub fn number<T: std::str::FromStr>(&mut self) -> Result<T> {
        let w = self.word()?;
        w.parse().map_err(|_| {
            self.pos -= 1;
            self.error(format!("expected a number, found `{w}`"))
        })
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing tokens"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_columns() {
        let line = r#"<urn:x> su:p "a \"b\""^^xsd:string ."#;
        let toks = tokenize(line, 1).unwrap();
        assert_eq!(toks[0].token, Token::Iri("urn:x".into()));
        assert_eq!(toks[1].token, Token::Word("su:p".into()));
        assert_eq!(toks[2].token, Token::Str("a \"b\"".into()));
        assert_eq!(toks[3].token, Token::Caret);
        assert_eq!(toks[4].token, Token::Word("xsd:string".into()));
        assert_eq!(toks[5].token, Token::Punct('.'));
        assert_eq!(toks[1].column, 9);
    }

    #[test]
    fn unterminated_reports_position() {
        match tokenize("abc \"open", 7) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (7, 5)),
            other => panic!("{other:?}"),
        }
    }
}
