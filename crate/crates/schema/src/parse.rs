use crate::{AdtDecl, ConstructorDecl, FieldType, Schema, SchemaError, INT};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    Equals,
    Bar,
    Semi,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    /// Next token with its starting (line, column).
    fn next(&mut self) -> Result<Option<(Token<'a>, usize, usize)>, ParseError> {
        loop {
            let rest = &self.src[self.pos..];
            let Some(c) = rest.chars().next() else {
                return Ok(None);
            };
            if c.is_whitespace() {
                self.bump(c);
            } else if rest.starts_with("--") {
                while let Some(c) = self.src[self.pos..].chars().next() {
                    if c == '\n' {
                        break;
                    }
                    self.bump(c);
                }
            } else {
                break;
            }
        }
        let (line, column) = (self.line, self.column);
        let rest = &self.src[self.pos..];
        let c = rest.chars().next().expect("non-empty after skipping");
        let token = match c {
            '=' => {
                self.bump(c);
                Token::Equals
            }
            '|' => {
                self.bump(c);
                Token::Bar
            }
            ';' => {
                self.bump(c);
                Token::Semi
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = rest
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(rest.len());
                let ident = &rest[..len];
                for c in ident.chars() {
                    self.bump(c);
                }
                Token::Ident(ident)
            }
            other => return self.error(format!("unexpected character `{other}`")),
        };
        Ok(Some((token, line, column)))
    }
}

/// Parses and validates schema text.
pub fn parse(src: &str) -> Result<Schema, ParseError> {
    let mut lexer = Lexer::new(src);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next()? {
        tokens.push(t);
    }
    let end = (lexer.line, lexer.column);

    let mut i = 0;
    let syntax = |at: Option<&(Token<'_>, usize, usize)>, message: String| {
        let (line, column) = at.map(|t| (t.1, t.2)).unwrap_or(end);
        Err(ParseError::Syntax {
            line,
            column,
            message,
        })
    };

    let mut adts = Vec::new();
    while i < tokens.len() {
        match &tokens[i].0 {
            Token::Semi => {
                i += 1;
                continue;
            }
            Token::Ident("data") => i += 1,
            _ => return syntax(tokens.get(i), "expected `data`".into()),
        }
        let name = match tokens.get(i) {
            Some((Token::Ident(n), ..)) if *n != "data" => *n,
            t => return syntax(t, "expected a type name after `data`".into()),
        };
        i += 1;
        if !matches!(tokens.get(i), Some((Token::Equals, ..))) {
            return syntax(tokens.get(i), format!("expected `=` after `data {name}`"));
        }
        i += 1;

        let mut constructors = Vec::new();
        loop {
            let ctor = match tokens.get(i) {
                Some((Token::Ident(n), ..)) if *n != "data" => *n,
                t => return syntax(t, "expected a constructor name".into()),
            };
            if ctor == INT {
                return syntax(tokens.get(i), "`Int` cannot be a constructor name".into());
            }
            i += 1;
            let mut fields = Vec::new();
            while let Some((Token::Ident(f), ..)) = tokens.get(i) {
                if *f == "data" {
                    break;
                }
                fields.push(if *f == INT {
                    FieldType::Int
                } else {
                    FieldType::Ref((*f).to_string())
                });
                i += 1;
            }
            constructors.push(ConstructorDecl {
                name: ctor.to_string(),
                fields,
            });
            if matches!(tokens.get(i), Some((Token::Bar, ..))) {
                i += 1;
            } else {
                break;
            }
        }
        adts.push(AdtDecl {
            name: name.to_string(),
            constructors,
        });
    }

    Ok(Schema::checked(adts)?)
}
