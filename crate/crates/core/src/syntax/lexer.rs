use super::ast::Span;
use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Colon,
    Dot,
    Bar,
    Eq,
    LArrow,    // <-
    FatArrow,  // =>
    Arrow,     // ->
    Lolly,     // -o
    Star,      // *
    AndVal,    // /\
    Plus,      // +
    Amp,       // &
    Backslash, // \
    Turnstile, // |-
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    pub fn text(&self) -> &str {
        match self {
            Tok::Ident(s) | Tok::Num(s) => s,
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Bar => "|",
            Tok::Eq => "=",
            Tok::LArrow => "<-",
            Tok::FatArrow => "=>",
            Tok::Arrow => "->",
            Tok::Lolly => "-o",
            Tok::Star => "*",
            Tok::AndVal => "/\\",
            Tok::Plus => "+",
            Tok::Amp => "&",
            Tok::Backslash => "\\",
            Tok::Turnstile => "|-",
            Tok::Eof => "<eof>",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    while i < chars.len() {
        let (start, c) = chars[i];
        let span_at = |len: usize, line: usize, col: usize| Span {
            start,
            end: start + len,
            line,
            col,
        };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).map(|p| p.1);
        if c == '/' && next == Some('/') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'') {
                j += 1;
            }
            let text: String = chars[i..j].iter().map(|p| p.1).collect();
            out.push(Token {
                span: span_at(text.len(), line, col),
                tok: Tok::Ident(text),
            });
            col += j - i;
            i = j;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().map(|p| p.1).collect();
            out.push(Token {
                span: span_at(text.len(), line, col),
                tok: Tok::Num(text),
            });
            col += j - i;
            i = j;
            continue;
        }
        let two = match (c, next) {
            ('<', Some('-')) => Some(Tok::LArrow),
            ('=', Some('>')) => Some(Tok::FatArrow),
            ('-', Some('>')) => Some(Tok::Arrow),
            ('-', Some('o')) => Some(Tok::Lolly),
            ('/', Some('\\')) => Some(Tok::AndVal),
            ('|', Some('-')) => Some(Tok::Turnstile),
            _ => None,
        };
        if let Some(tok) = two {
            out.push(Token {
                tok,
                span: span_at(2, line, col),
            });
            i += 2;
            col += 2;
            continue;
        }
        let one = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            '|' => Tok::Bar,
            '=' => Tok::Eq,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '&' => Tok::Amp,
            '\\' => Tok::Backslash,
            _ => {
                return Err(SyntaxError {
                    line,
                    col,
                    expected: vec!["a token".into()],
                    found: format!("character `{c}`"),
                })
            }
        };
        out.push(Token {
            tok: one,
            span: span_at(c.len_utf8(), line, col),
        });
        i += 1;
        col += 1;
    }
    let end = src.len();
    out.push(Token {
        tok: Tok::Eof,
        span: Span {
            start: end,
            end,
            line,
            col,
        },
    });
    Ok(out)
}
