//! A minimal S-expression reader that keeps source positions for diagnostics.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: expected {expected}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SexpKind {
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sexp {
    pub kind: SexpKind,
    pub line: usize,
    pub column: usize,
}

impl Sexp {
    pub fn error(&self, expected: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: self.line,
            column: self.column,
            expected: expected.into(),
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::List(l) => Some(l),
            _ => None,
        }
    }

    pub fn string(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Str(s) => Some(s),
            _ => None,
        }
    }

    /// The head symbol and arguments of a list form.
    pub fn form(&self) -> Option<(&str, &[Sexp])> {
        let l = self.list()?;
        let head = l.first()?.atom()?;
        Some((head, &l[1..]))
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn err(&self, expected: &str) -> SyntaxError {
        SyntaxError {
            line: self.line,
            column: self.column,
            expected: expected.to_string(),
        }
    }

    fn read(&mut self) -> Result<Sexp, SyntaxError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let kind = match self.chars.peek().copied() {
            None => return Err(self.err("an expression")),
            Some(')') => return Err(self.err("an expression, not ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(self.err("')'")),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
                SexpKind::List(items)
            }
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err("closing '\"'")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some(c) => s.push(c),
                            None => return Err(self.err("escaped character")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                SexpKind::Str(s)
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                SexpKind::Atom(s)
            }
        };
        Ok(Sexp { kind, line, column })
    }
}

/// Read every top-level expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Read exactly one expression.
pub fn read_one(text: &str) -> Result<Sexp, SyntaxError> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(SyntaxError {
            line: 1,
            column: 1,
            expected: "an expression".into(),
        }),
        _ => {
            let extra = &all[1];
            Err(extra.error("end of input"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists() {
        let s = read_one("(a (b c) \"d e\")").unwrap();
        let (head, args) = s.form().unwrap();
        assert_eq!(head, "a");
        assert_eq!(args.len(), 2);
        assert_eq!(args[1].string(), Some("d e"));
    }

    #[test]
    fn unbalanced_reports_position() {
        let e = read_one("(app-11 (var f 0)").unwrap_err();
        assert_eq!(e.expected, "')'");
        assert_eq!((e.line, e.column), (1, 18));
    }

    #[test]
    fn comments_are_skipped() {
        let all = read_all("; header\n(x) ; trailing\n(y)").unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[1].line, 3);
    }
}
