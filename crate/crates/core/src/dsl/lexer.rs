use super::{Diagnostic, DiagnosticKind, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i128),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits source text into tokens. `#` starts a comment running to the end
/// of the line.
pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
                col += 1;
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            let n = s.parse::<i128>().map_err(|_| Diagnostic {
                pos,
                kind: DiagnosticKind::Syntax,
                message: format!("integer literal `{s}` is too large"),
            })?;
            out.push(Token { tok: Tok::Int(n), pos });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), pos });
        } else if "[](){},;=/-".contains(c) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Sym(c), pos });
        } else {
            return Err(Diagnostic {
                pos,
                kind: DiagnosticKind::Syntax,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = lex("let a = perm[2,1]; # note\n  x_1").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("let".into()));
        assert_eq!(toks[4].tok, Tok::Sym('['));
        assert_eq!(toks[5].tok, Tok::Int(2));
        let last = &toks[toks.len() - 2];
        assert_eq!(last.tok, Tok::Ident("x_1".into()));
        assert_eq!((last.pos.line, last.pos.col), (2, 3));
    }

    #[test]
    fn rejects_stray_characters() {
        let err = lex("let a = @;").unwrap_err();
        assert_eq!((err.pos.line, err.pos.col), (1, 9));
    }
}
