//! Tokens with positions and an offside marker.

use crate::mode_theory::Modality;
use crate::surface::{ElabError, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Codata,
    Def,
    Where,
    LParen,
    RParen,
    Colon,
    /// `:^M`
    ModalColon(Modality),
    Arrow,
    Lambda,
    Equals,
    Comma,
    Turnstile,
    /// `^d…` or `ᵈ…`
    Disp(u32),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    pub col: usize,
    /// First token on its line.
    pub first: bool,
}

fn ident_start(c: char) -> bool {
    (c.is_alphabetic() && c != 'ᵈ' && c != 'λ') || c == '_' || "△◇□■▲◆".contains(c)
}

fn ident_continue(c: char) -> bool {
    (c.is_alphanumeric() && c != 'ᵈ' && c != 'λ')
        || c == '_'
        || c == '\''
        || c == '′'
        || c == '⁺'
        || c == '+'
        || ('₀'..='₉').contains(&c)
}

fn modal_symbol(c: char) -> bool {
    "△◇□".contains(c)
}

pub fn lex(src: &str) -> Result<Vec<Token>, ElabError> {
    let mut out = vec![];
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    let mut line_start = 0;
    let mut first = true;
    let end_of = |i: usize| chars.get(i).map(|c| c.0).unwrap_or(src.len());
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c == '\n' {
            i += 1;
            line_start = end_of(i);
            first = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1).map(|c| c.1) == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let col = src[line_start..pos].chars().count();
        let next = chars.get(i + 1).map(|c| c.1);
        let tok = if ident_start(c) {
            if "△◇□■▲◆".contains(c) {
                i += 1;
                Tok::Ident(c.to_string())
            } else {
                while i < chars.len() && ident_continue(chars[i].1) {
                    i += 1;
                }
                let s = &src[pos..end_of(i)];
                match s {
                    "codata" => Tok::Codata,
                    "def" => Tok::Def,
                    "where" => Tok::Where,
                    _ => Tok::Ident(s.to_string()),
                }
            }
        } else {
            match c {
                '(' => {
                    i += 1;
                    Tok::LParen
                }
                ')' => {
                    i += 1;
                    Tok::RParen
                }
                ',' => {
                    i += 1;
                    Tok::Comma
                }
                '=' => {
                    i += 1;
                    Tok::Equals
                }
                '→' => {
                    i += 1;
                    Tok::Arrow
                }
                '-' if next == Some('>') => {
                    i += 2;
                    Tok::Arrow
                }
                'λ' | '\\' => {
                    i += 1;
                    Tok::Lambda
                }
                '⊢' => {
                    i += 1;
                    Tok::Turnstile
                }
                '|' if next == Some('-') => {
                    i += 2;
                    Tok::Turnstile
                }
                'ᵈ' => {
                    let mut k = 0;
                    while i < chars.len() && chars[i].1 == 'ᵈ' {
                        i += 1;
                        k += 1;
                    }
                    Tok::Disp(k)
                }
                '^' => {
                    i += 1;
                    let mut k = 0;
                    while i < chars.len() && chars[i].1 == 'd' {
                        i += 1;
                        k += 1;
                    }
                    if k == 0 {
                        return Err(ElabError::parse(
                            Span::new(pos, end_of(i)),
                            "expected `d` after `^`",
                        ));
                    }
                    Tok::Disp(k)
                }
                ':' if next == Some('^') => {
                    i += 2;
                    let s0 = end_of(i);
                    while i < chars.len()
                        && (matches!(chars[i].1, 'T' | 'D' | 'B') || modal_symbol(chars[i].1))
                    {
                        i += 1;
                    }
                    let s = &src[s0..end_of(i)];
                    match Modality::from_ascii(s) {
                        Some(m) => Tok::ModalColon(m),
                        None => {
                            return Err(ElabError::parse(
                                Span::new(pos, end_of(i)),
                                &format!("unknown modality `{s}`"),
                            ))
                        }
                    }
                }
                ':' => {
                    i += 1;
                    Tok::Colon
                }
                _ => {
                    return Err(ElabError::parse(
                        Span::new(pos, end_of(i + 1)),
                        &format!("unexpected character `{c}`"),
                    ))
                }
            }
        };
        out.push(Token {
            tok,
            span: Span::new(pos, end_of(i)),
            col,
            first,
        });
        first = false;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(src.len(), src.len()),
        col: 0,
        first: true,
    });
    Ok(out)
}
