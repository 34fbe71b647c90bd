use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Colon,
    Dot,
    Comma,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Arrow,
    FatArrow,
    LongArrow,
    Assign,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("`{s}`"),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::LongArrow => "`-->`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&self, k: usize) -> Option<u8> {
        self.src.get(self.pos + k).copied()
    }

    fn bump(&mut self) {
        if self.src[self.pos] == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        self.pos += 1;
    }

    fn here(&self) -> SourceSpan {
        SourceSpan::new(self.pos, self.pos, self.line, self.col)
    }
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        skip_trivia(&mut cur)?;
        let start = cur.here();
        let Some(ch) = cur.peek(0) else {
            out.push(Token {
                tok: Tok::Eof,
                span: start,
            });
            return Ok(out);
        };
        let tok = if is_ident_char(ch) {
            let begin = cur.pos;
            loop {
                while cur.peek(0).is_some_and(is_ident_char) {
                    cur.bump();
                }
                // `a.b` is one qualified name; `a.` ends a declaration.
                if cur.peek(0) == Some(b'.') && cur.peek(1).is_some_and(is_ident_char) {
                    cur.bump();
                } else {
                    break;
                }
            }
            Tok::Ident(text[begin..cur.pos].to_string())
        } else {
            let (tok, len) = match (ch, cur.peek(1), cur.peek(2)) {
                (b'-', Some(b'-'), Some(b'>')) => (Tok::LongArrow, 3),
                (b'-', Some(b'>'), _) => (Tok::Arrow, 2),
                (b'=', Some(b'>'), _) => (Tok::FatArrow, 2),
                (b':', Some(b'='), _) => (Tok::Assign, 2),
                (b':', _, _) => (Tok::Colon, 1),
                (b'.', _, _) => (Tok::Dot, 1),
                (b',', _, _) => (Tok::Comma, 1),
                (b'[', _, _) => (Tok::LBrack, 1),
                (b']', _, _) => (Tok::RBrack, 1),
                (b'(', _, _) => (Tok::LParen, 1),
                (b')', _, _) => (Tok::RParen, 1),
                _ => {
                    let c = text[cur.pos..].chars().next().unwrap_or('?');
                    return Err(ParseError::new(
                        alloc::format!("unexpected character `{c}`"),
                        start,
                    ));
                }
            };
            for _ in 0..len {
                cur.bump();
            }
            tok
        };
        let mut span = start;
        span.end = cur.pos;
        out.push(Token { tok, span });
    }
}

fn skip_trivia(cur: &mut Cursor<'_>) -> Result<(), ParseError> {
    loop {
        match cur.peek(0) {
            Some(c) if c.is_ascii_whitespace() => cur.bump(),
            Some(b'(') if cur.peek(1) == Some(b';') => {
                let open = cur.here();
                cur.bump();
                cur.bump();
                let mut depth = 1usize;
                while depth > 0 {
                    match (cur.peek(0), cur.peek(1)) {
                        (None, _) => {
                            return Err(ParseError::new("unterminated comment".into(), open))
                        }
                        (Some(b'('), Some(b';')) => {
                            depth += 1;
                            cur.bump();
                            cur.bump();
                        }
                        (Some(b';'), Some(b')')) => {
                            depth -= 1;
                            cur.bump();
                            cur.bump();
                        }
                        _ => cur.bump(),
                    }
                }
            }
            _ => return Ok(()),
        }
    }
}
