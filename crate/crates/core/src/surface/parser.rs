//! Recursive-descent parser with an offside rule.
//!
//! An item (declaration header, destructor, clause) starts on a fresh line.
//! Inside an item, a token that starts a line at or left of the item's
//! column ends the current expression.

use crate::mode_theory::Modality;
use crate::surface::lexer::{lex, Tok, Token};
use crate::surface::{ElabError, Span};

#[derive(Clone, Debug)]
pub struct Binder {
    pub names: Vec<(String, Span)>,
    pub m: Modality,
    pub ty: Expr,
}

#[derive(Clone, Debug)]
pub struct LamBinder {
    pub name: String,
    pub span: Span,
    pub ann: Option<(Modality, Expr)>,
}

#[derive(Clone, Debug)]
pub enum Expr {
    Name(String, Span),
    Pi(Vec<Binder>, Box<Expr>, Span),
    Arrow(Box<Expr>, Box<Expr>, Span),
    Lam(Vec<LamBinder>, Box<Expr>, Span),
    App(Box<Expr>, Vec<Expr>, Span),
    Disp(Box<Expr>, u32, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Name(_, s)
            | Expr::Pi(_, _, s)
            | Expr::Arrow(_, _, s)
            | Expr::Lam(_, _, s)
            | Expr::App(_, _, s)
            | Expr::Disp(_, _, s) => *s,
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Expr, Vec<&Expr>) {
        match self {
            Expr::App(h, args, _) => {
                let (h2, mut a2) = h.spine();
                a2.extend(args.iter());
                (h2, a2)
            }
            e => (e, vec![]),
        }
    }

    pub fn as_name(&self) -> Option<&str> {
        match self {
            Expr::Name(n, _) => Some(n),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Destructor {
    pub name: String,
    pub span: Span,
    pub ty: Expr,
}

#[derive(Clone, Debug)]
pub struct Clause {
    pub lhs: Expr,
    pub rhs: Expr,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum Decl {
    Codata {
        name: String,
        span: Span,
        params: Vec<Binder>,
        sort: Expr,
        head: Destructor,
        tail: Destructor,
    },
    Def {
        name: String,
        span: Span,
        ty: Expr,
        clauses: Vec<Clause>,
    },
}

#[derive(Clone, Debug)]
pub struct CtxEntryExpr {
    pub names: Vec<(String, Span)>,
    pub m: Modality,
    pub ty: Expr,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ElabError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> PResult<T> {
        let t = self.peek();
        let found = match &t.tok {
            Tok::Eof => "end of input".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            other => format!("{other:?}"),
        };
        Err(ElabError::parse(t.span, &format!("{msg}, found {found}")))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            self.err(&format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                let t = self.bump();
                Ok((s, t.span))
            }
            _ => self.err("expected a name"),
        }
    }

    /// Whether the current token ends an expression in an item at `col`.
    fn stops(&self, col: usize) -> bool {
        let t = self.peek();
        (t.first && t.col <= col)
            || matches!(
                t.tok,
                Tok::Eof
                    | Tok::RParen
                    | Tok::Equals
                    | Tok::Comma
                    | Tok::Turnstile
                    | Tok::Codata
                    | Tok::Def
                    | Tok::Where
            )
    }

    fn is_binder_group(&self) -> bool {
        if self.peek().tok != Tok::LParen {
            return false;
        }
        let mut k = 1;
        while matches!(self.peek_at(k), Tok::Ident(_)) {
            k += 1;
        }
        k > 1 && matches!(self.peek_at(k), Tok::Colon | Tok::ModalColon(_))
    }

    fn colon(&mut self) -> PResult<Modality> {
        match self.peek().tok {
            Tok::Colon => {
                self.bump();
                Ok(Modality::IdSm)
            }
            Tok::ModalColon(m) => {
                self.bump();
                Ok(m)
            }
            _ => self.err("expected `:`"),
        }
    }

    fn binder_group(&mut self, col: usize) -> PResult<Binder> {
        self.expect(Tok::LParen, "`(`")?;
        let mut names = vec![];
        while let Tok::Ident(_) = self.peek().tok {
            names.push(self.ident()?);
        }
        let m = self.colon()?;
        let ty = self.expr(col)?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(Binder { names, m, ty })
    }

    fn expr(&mut self, col: usize) -> PResult<Expr> {
        let start = self.peek().span;
        if self.peek().tok == Tok::Lambda {
            self.bump();
            let mut binders = vec![];
            loop {
                match &self.peek().tok {
                    Tok::Ident(_) => {
                        let (name, span) = self.ident()?;
                        binders.push(LamBinder {
                            name,
                            span,
                            ann: None,
                        });
                    }
                    Tok::LParen if self.is_binder_group() => {
                        let b = self.binder_group(col)?;
                        for (name, span) in b.names {
                            binders.push(LamBinder {
                                name,
                                span,
                                ann: Some((b.m, b.ty.clone())),
                            });
                        }
                    }
                    _ => break,
                }
            }
            if binders.is_empty() {
                return self.err("expected a binder after λ");
            }
            self.expect(Tok::Arrow, "`→`")?;
            let body = self.expr(col)?;
            let span = start.to(body.span());
            return Ok(Expr::Lam(binders, Box::new(body), span));
        }
        if self.is_binder_group() {
            let mut groups = vec![];
            while self.is_binder_group() && !self.stops(col) {
                groups.push(self.binder_group(col)?);
            }
            self.expect(Tok::Arrow, "`→` after binders")?;
            let cod = self.expr(col)?;
            let span = start.to(cod.span());
            return Ok(Expr::Pi(groups, Box::new(cod), span));
        }
        let a = self.app(col)?;
        if self.peek().tok == Tok::Arrow && !self.stops(col) {
            self.bump();
            let b = self.expr(col)?;
            let span = a.span().to(b.span());
            return Ok(Expr::Arrow(Box::new(a), Box::new(b), span));
        }
        Ok(a)
    }

    fn can_start_atom(&self, col: usize) -> bool {
        !self.stops(col) && matches!(self.peek().tok, Tok::Ident(_) | Tok::LParen)
    }

    fn app(&mut self, col: usize) -> PResult<Expr> {
        let t = self.peek();
        let lead = t.first && t.col == col && matches!(t.tok, Tok::Ident(_) | Tok::LParen);
        if !lead && !self.can_start_atom(col) {
            return self.err("expected an expression");
        }
        let head = self.atom(col)?;
        let mut args = vec![];
        while self.can_start_atom(col) {
            args.push(self.atom(col)?);
        }
        if args.is_empty() {
            Ok(head)
        } else {
            let span = head.span().to(args.last().unwrap().span());
            Ok(Expr::App(Box::new(head), args, span))
        }
    }

    fn atom(&mut self, col: usize) -> PResult<Expr> {
        let e = match self.peek().tok {
            Tok::Ident(_) => {
                let (n, s) = self.ident()?;
                Expr::Name(n, s)
            }
            Tok::LParen => {
                let open = self.bump().span;
                let e = self.expr(col)?;
                let close = self.expect(Tok::RParen, "`)`")?.span;
                reparen(e, open.to(close))
            }
            _ => return self.err("expected an expression"),
        };
        if let Tok::Disp(k) = self.peek().tok {
            let s = self.bump().span;
            let span = e.span().to(s);
            return Ok(Expr::Disp(Box::new(e), k, span));
        }
        Ok(e)
    }

    fn decl(&mut self) -> PResult<Decl> {
        let head = self.peek().clone();
        let col = head.col;
        match head.tok {
            Tok::Codata => {
                self.bump();
                let (name, span) = self.ident()?;
                let mut params = vec![];
                while self.is_binder_group() {
                    params.push(self.binder_group(col)?);
                }
                self.expect(Tok::Colon, "`:`")?;
                let sort = self.expr(col)?;
                self.expect(Tok::Where, "`where`")?;
                let head = self.destructor(col)?;
                let tail = self.destructor(col)?;
                Ok(Decl::Codata {
                    name,
                    span,
                    params,
                    sort,
                    head,
                    tail,
                })
            }
            Tok::Def => {
                self.bump();
                let (name, span) = self.ident()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.expr(col)?;
                let mut clauses = vec![];
                while !matches!(self.peek().tok, Tok::Eof | Tok::Codata | Tok::Def) {
                    if !self.peek().first {
                        return self.err("expected a clause on a new line");
                    }
                    let ccol = self.peek().col;
                    let lhs = self.app(ccol)?;
                    self.expect(Tok::Equals, "`=`")?;
                    let rhs = self.expr(ccol)?;
                    let span = lhs.span().to(rhs.span());
                    clauses.push(Clause { lhs, rhs, span });
                }
                Ok(Decl::Def {
                    name,
                    span,
                    ty,
                    clauses,
                })
            }
            _ => self.err("expected `codata` or `def`"),
        }
    }

    fn destructor(&mut self, col: usize) -> PResult<Destructor> {
        let t = self.peek().clone();
        if !t.first || t.col <= col {
            return self.err("expected an indented destructor declaration");
        }
        let (name, span) = self.ident()?;
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.expr(t.col)?;
        Ok(Destructor { name, span, ty })
    }
}

/// Widen the span of a parenthesized expression.
fn reparen(e: Expr, span: Span) -> Expr {
    match e {
        Expr::Name(n, _) => Expr::Name(n, span),
        Expr::Pi(b, c, _) => Expr::Pi(b, c, span),
        Expr::Arrow(a, b, _) => Expr::Arrow(a, b, span),
        Expr::Lam(b, c, _) => Expr::Lam(b, c, span),
        Expr::App(h, a, _) => Expr::App(h, a, span),
        Expr::Disp(e, k, _) => Expr::Disp(e, k, span),
    }
}

pub fn parse_file(src: &str) -> PResult<Vec<Decl>> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let mut out = vec![];
    while p.peek().tok != Tok::Eof {
        out.push(p.decl()?);
    }
    Ok(out)
}

/// `entries ⊢ expr` or a bare expression.
pub fn parse_judgement(src: &str) -> PResult<(Vec<CtxEntryExpr>, Expr)> {
    let toks = lex(src)?;
    let has_ctx = toks.iter().any(|t| t.tok == Tok::Turnstile);
    let mut p = Parser { toks, pos: 0 };
    let mut ctx = vec![];
    if has_ctx {
        while p.peek().tok != Tok::Turnstile {
            let mut names = vec![];
            while let Tok::Ident(_) = p.peek().tok {
                names.push(p.ident()?);
            }
            if names.is_empty() {
                return p.err("expected a context entry");
            }
            let m = p.colon()?;
            let ty = p.expr(usize::MAX)?;
            ctx.push(CtxEntryExpr { names, m, ty });
            if p.peek().tok == Tok::Comma {
                p.bump();
            }
        }
        p.bump();
    }
    let e = p.expr(usize::MAX)?;
    if p.peek().tok != Tok::Eof {
        return p.err("unexpected trailing input");
    }
    Ok((ctx, e))
}
