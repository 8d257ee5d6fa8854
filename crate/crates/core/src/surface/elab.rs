//! Bidirectional elaboration of surface syntax into checked kernel terms.

use std::collections::HashMap;
use std::rc::Rc;

use crate::checker::{universe, Checker, KernelError};
use crate::coinductive::{dcoind_tel, tail_params_at, tail_sig};
use crate::display::{decalage_tel, display_tel};
use crate::mode_theory::{Modality, Mode};
use crate::printer::print_tm;
use crate::subst::{instantiate, subst_top};
use crate::surface::parser::{
    parse_file, parse_judgement, Binder, Clause, CtxEntryExpr, Decl, Destructor, Expr,
};
use crate::surface::{ElabError, Span};
use crate::syntax::{
    app_m, disp_term_n, dvar, same_spec, var, Context, CorecPremises, CtxEntry, DCoindSpec,
    Telescope, Term, Tm,
};

type R<T> = Result<T, ElabError>;

#[derive(Clone, Debug)]
pub enum Global {
    Codata(Rc<DCoindSpec>),
    Head(Rc<DCoindSpec>),
    Tail(Rc<DCoindSpec>),
    Def { value: Tm, ty: Tm },
}

/// A summary of one checked declaration.
#[derive(Clone, Debug)]
pub struct Checked {
    pub name: String,
    pub kind: &'static str,
    pub ty: String,
}

#[derive(Clone, Debug)]
struct SelfRef {
    name: String,
    head: String,
    level: usize,
}

#[derive(Clone, Debug)]
struct Scope {
    ctx: Context,
    self_ref: Option<SelfRef>,
}

const BUILTINS: &[&str] = &[
    "Type", "Disc", "El", "Code", "△", "Tri", "◇", "Dia", "□", "Box", "tri", "dia", "box", "■",
    "unbox", "▲", "untri", "◆", "undia",
];

impl Scope {
    fn empty() -> Self {
        Scope {
            ctx: Context::empty(Mode::Sm),
            self_ref: None,
        }
    }

    fn local(&self, n: &str) -> Option<usize> {
        if n == "_" || n.is_empty() {
            return None;
        }
        let mut i = 0;
        for e in self.ctx.entries().iter().rev() {
            if let CtxEntry::Var { name, .. } = e {
                if &**name == n {
                    return Some(i);
                }
                i += 1;
            }
        }
        None
    }

    fn push(&self, n: &str, m: Modality, ty: Tm) -> Scope {
        Scope {
            ctx: self.ctx.with_var(n, m, ty),
            self_ref: self.self_ref.clone(),
        }
    }

    fn lock(&self, m: Modality, span: Span) -> R<Scope> {
        if m.cod() != self.ctx.mode() {
            return Err(ElabError::kernel(
                span,
                KernelError::ModeMismatch {
                    expected: m.cod(),
                    found: self.ctx.mode(),
                },
            ));
        }
        Ok(Scope {
            ctx: self.ctx.lock(m),
            self_ref: self.self_ref.clone(),
        })
    }

    fn self_index(&self) -> Option<usize> {
        self.self_ref
            .as_ref()
            .map(|s| self.ctx.var_count() - 1 - s.level)
    }
}

fn is_builtin(n: &str) -> bool {
    BUILTINS.contains(&n)
}

/// Peel the first binder off a function type.
fn split_first(e: &Expr) -> Option<(String, Span, Modality, Expr, Expr)> {
    match e {
        Expr::Arrow(a, b, _) => Some((
            "_".into(),
            a.span(),
            Modality::IdSm,
            (**a).clone(),
            (**b).clone(),
        )),
        Expr::Pi(groups, cod, span) => {
            let g = &groups[0];
            let (n, s) = g.names[0].clone();
            let mut rest_groups = groups.clone();
            rest_groups[0].names.remove(0);
            if rest_groups[0].names.is_empty() {
                rest_groups.remove(0);
            }
            let rest = if rest_groups.is_empty() {
                (**cod).clone()
            } else {
                Expr::Pi(rest_groups, cod.clone(), *span)
            };
            Some((n, s, g.m, g.ty.clone(), rest))
        }
        _ => None,
    }
}

/// Contract the β-redexes along the head spine of an application.
fn beta_spine(t: &Tm) -> Tm {
    match &**t {
        Term::App { m, fun, arg } => {
            let f = beta_spine(fun);
            match &*f {
                Term::Lam { body, .. } => beta_spine(&subst_top(body, arg)),
                _ => Rc::new(Term::App {
                    m: *m,
                    fun: f,
                    arg: arg.clone(),
                }),
            }
        }
        _ => t.clone(),
    }
}

/// Name and display depth of a possibly displayed name.
fn disp_name(e: &Expr) -> Option<(&str, u32)> {
    match e {
        Expr::Name(n, _) => Some((n, 0)),
        Expr::Disp(inner, k, _) => match &**inner {
            Expr::Name(n, _) => Some((n, *k)),
            _ => None,
        },
        _ => None,
    }
}

pub struct Elaborator {
    pub checker: Checker,
    globals: HashMap<String, Global>,
    pub checked: Vec<Checked>,
}

impl Default for Elaborator {
    fn default() -> Self {
        Elaborator::new(Checker::default())
    }
}

impl Elaborator {
    pub fn new(checker: Checker) -> Self {
        Elaborator {
            checker,
            globals: HashMap::new(),
            checked: vec![],
        }
    }

    pub fn global(&self, name: &str) -> Option<&Global> {
        self.globals.get(name)
    }

    pub fn spec(&self, name: &str) -> Option<Rc<DCoindSpec>> {
        match self.globals.get(name) {
            Some(Global::Codata(s)) => Some(s.clone()),
            _ => None,
        }
    }

    fn kerr(span: Span) -> impl Fn(KernelError) -> ElabError {
        move |e| ElabError::kernel(span, e)
    }

    fn nf(&mut self, t: &Tm, span: Span) -> R<Tm> {
        self.checker.nf(t).map_err(Self::kerr(span))
    }

    fn show(&self, scope: &Scope, t: &Tm) -> String {
        print_tm(&scope.ctx.names(), t, self.checker.opts)
    }

    fn conv_or_err(&mut self, scope: &Scope, found: &Tm, expected: &Tm, span: Span) -> R<()> {
        if self
            .checker
            .conv(found, expected)
            .map_err(Self::kerr(span))?
        {
            return Ok(());
        }
        let e = self.nf(expected, span)?;
        let f = self.nf(found, span)?;
        Err(ElabError::kernel(
            span,
            KernelError::TypeMismatch {
                expected: self.show(scope, &e),
                found: self.show(scope, &f),
            },
        ))
    }

    /// Elaborate and check a whole source file.
    pub fn load(&mut self, src: &str) -> R<()> {
        for d in parse_file(src)? {
            self.checker.reset_fuel();
            self.decl(&d)?;
        }
        Ok(())
    }

    fn define(&mut self, name: &str, span: Span, g: Global) -> R<()> {
        if self.globals.contains_key(name) || is_builtin(name) {
            return Err(ElabError::new(
                "duplicate-definition",
                span,
                format!("`{name}` is already defined"),
            ));
        }
        self.globals.insert(name.to_string(), g);
        Ok(())
    }

    fn decl(&mut self, d: &Decl) -> R<()> {
        match d {
            Decl::Codata {
                name,
                span,
                params,
                sort,
                head,
                tail,
            } => self.codata(name, *span, params, sort, head, tail),
            Decl::Def {
                name,
                span,
                ty,
                clauses,
            } => self.def(name, *span, ty, clauses),
        }
    }

    // ---- expressions ----

    fn infer(&mut self, scope: &Scope, e: &Expr) -> R<(Tm, Tm)> {
        match e {
            Expr::Name(n, sp) => self.infer_name(scope, n, 0, *sp),
            Expr::Disp(inner, k, sp) => match &**inner {
                Expr::Name(n, _) => self.infer_name(scope, n, *k, *sp),
                other => {
                    let inner_scope = scope.lock(Modality::TriBox, *sp)?;
                    let (t0, _) = self.infer(&inner_scope, other)?;
                    let t = disp_term_n(t0, *k);
                    let ty = self
                        .checker
                        .infer(&scope.ctx, &t)
                        .map_err(Self::kerr(*sp))?;
                    Ok((t, ty))
                }
            },
            Expr::App(_, _, sp) => {
                let (head, args) = e.spine();
                self.infer_app(scope, head, &args, *sp)
            }
            Expr::Lam(binders, body, sp) => {
                if binders.iter().any(|b| b.ann.is_none()) {
                    return Err(ElabError::new(
                        "annotation-required",
                        *sp,
                        "cannot infer the type of an unannotated λ",
                    ));
                }
                let mut s = scope.clone();
                let mut doms = vec![];
                for b in binders {
                    let (m, ty) = b.ann.as_ref().unwrap();
                    let a = self.elab_type(&s.lock(*m, b.span)?, ty)?;
                    s = s.push(&b.name, *m, a.clone());
                    doms.push((b.name.clone(), *m, a));
                }
                let (mut t, mut ty) = self.infer(&s, body)?;
                for (n, m, a) in doms.into_iter().rev() {
                    t = Rc::new(Term::Lam {
                        m,
                        name: n.as_str().into(),
                        body: t,
                    });
                    ty = Rc::new(Term::Pi {
                        m,
                        name: n.as_str().into(),
                        dom: a,
                        cod: ty,
                    });
                }
                Ok((t, ty))
            }
            Expr::Pi(_, _, sp) | Expr::Arrow(_, _, sp) => Err(ElabError::new(
                "not-a-term",
                *sp,
                "a type cannot be used as a term here",
            )),
        }
    }

    fn infer_name(&mut self, scope: &Scope, n: &str, k: u32, sp: Span) -> R<(Tm, Tm)> {
        if let Some(idx) = scope.local(n) {
            let t = dvar(idx, k);
            let ty = self.checker.infer(&scope.ctx, &t).map_err(Self::kerr(sp))?;
            return Ok((t, ty));
        }
        if let Some(s) = &scope.self_ref {
            if s.name == n {
                return Err(ElabError::new(
                    "schema-violation",
                    sp,
                    format!("`{n}` may only be used as the argument of `{}`", s.head),
                ));
            }
        }
        if is_builtin(n) {
            return Err(ElabError::new(
                "not-a-term",
                sp,
                format!("`{n}` needs an argument or is a type"),
            ));
        }
        match self.globals.get(n).cloned() {
            Some(Global::Def { value, ty }) => {
                if k == 0 {
                    return Ok((value, ty));
                }
                let t = disp_term_n(value, k);
                let ty = self.checker.infer(&scope.ctx, &t).map_err(Self::kerr(sp))?;
                Ok((t, ty))
            }
            Some(Global::Codata(_)) => Err(ElabError::new(
                "not-a-term",
                sp,
                format!("`{n}` is a type, not a term"),
            )),
            Some(Global::Head(_)) | Some(Global::Tail(_)) => Err(ElabError::new(
                "arity-mismatch",
                sp,
                format!("destructor `{n}` needs its coinductive argument"),
            )),
            None => Err(ElabError::new(
                "unbound-name",
                sp,
                format!("unbound name `{n}`"),
            )),
        }
    }

    fn infer_app(&mut self, scope: &Scope, head: &Expr, args: &[&Expr], sp: Span) -> R<(Tm, Tm)> {
        // The coinductive argument inside a codata declaration.
        if let (Some(s), Some((hn, 0))) = (&scope.self_ref, disp_name(head)) {
            if s.head == hn && args.first().and_then(|a| a.as_name()) == Some(s.name.as_str()) {
                let idx = scope.self_index().unwrap();
                let ty = self
                    .checker
                    .lookup(&scope.ctx, idx)
                    .map_err(Self::kerr(sp))?;
                return self.apply_args(scope, var(idx), ty, &args[1..]);
            }
        }
        if let Some((n, k)) = disp_name(head) {
            if scope.local(n).is_none() {
                if k == 0 && is_builtin(n) {
                    return self.infer_builtin(scope, n, head.span(), args, sp);
                }
                match self.globals.get(n).cloned() {
                    Some(Global::Head(spec)) => {
                        return self.destructor_app(scope, &spec, true, k, args, sp)
                    }
                    Some(Global::Tail(spec)) => {
                        return self.destructor_app(scope, &spec, false, k, args, sp)
                    }
                    Some(Global::Codata(_)) => {
                        return Err(ElabError::new(
                            "not-a-term",
                            sp,
                            format!("`{n}` is a type, not a term"),
                        ))
                    }
                    _ => {}
                }
            }
        }
        let (f, fty) = self.infer(scope, head)?;
        let (t, ty) = self.apply_args(scope, f, fty, args)?;
        let is_def = matches!(disp_name(head), Some((n, 0)) if scope.local(n).is_none()
            && matches!(self.globals.get(n), Some(Global::Def { .. })));
        Ok((if is_def { beta_spine(&t) } else { t }, ty))
    }

    fn infer_builtin(
        &mut self,
        scope: &Scope,
        n: &str,
        hsp: Span,
        args: &[&Expr],
        sp: Span,
    ) -> R<(Tm, Tm)> {
        let Some(first) = args.first() else {
            return Err(ElabError::new(
                "arity-mismatch",
                hsp,
                format!("`{n}` needs an argument"),
            ));
        };
        let mode = scope.ctx.mode();
        let need = |m: Mode| -> R<()> {
            if mode != m {
                Err(ElabError::kernel(
                    sp,
                    KernelError::ModeMismatch {
                        expected: m,
                        found: mode,
                    },
                ))
            } else {
                Ok(())
            }
        };
        let (t, ty) = match n {
            "Code" => {
                let a = self.elab_type(scope, first)?;
                (Rc::new(Term::Code(a)), universe(mode))
            }
            "tri" => {
                need(Mode::Sm)?;
                let (u, a) = self.infer(&scope.lock(Modality::Tri, sp)?, first)?;
                (Rc::new(Term::TriIntro(u)), Rc::new(Term::TriForm(a)))
            }
            "dia" => {
                need(Mode::Dm)?;
                let (u, a) = self.infer(&scope.lock(Modality::Dia, sp)?, first)?;
                (Rc::new(Term::DiaIntro(u)), Rc::new(Term::DiaForm(a)))
            }
            "box" => {
                need(Mode::Dm)?;
                let (u, a) = self.infer(&scope.lock(Modality::Box, sp)?, first)?;
                (Rc::new(Term::BoxIntro(u)), Rc::new(Term::BoxForm(a)))
            }
            "■" | "unbox" | "▲" | "untri" | "◆" | "undia" => {
                let (lock, want) = match n {
                    "■" | "unbox" => (Modality::Tri, Mode::Sm),
                    "▲" | "untri" => (Modality::Dia, Mode::Dm),
                    _ => (Modality::Tri, Mode::Sm),
                };
                need(want)?;
                let inner = scope.lock(lock, sp)?;
                let (u, uty) = self.infer(&inner, first)?;
                let uty = self.nf(&uty, first.span())?;
                let node = match (n, &*uty) {
                    ("■" | "unbox", Term::BoxForm(a)) => Term::BlackSquare {
                        ty: a.clone(),
                        tm: u,
                    },
                    ("▲" | "untri", Term::TriForm(a)) => Term::BlackTriangle {
                        ty: a.clone(),
                        tm: u,
                    },
                    ("◆" | "undia", Term::DiaForm(a)) => Term::BlackDiamond {
                        ty: a.clone(),
                        tm: u,
                    },
                    _ => {
                        return Err(ElabError::kernel(
                            first.span(),
                            KernelError::TypeMismatch {
                                expected: "a modal type".into(),
                                found: self.show(&inner, &uty),
                            },
                        ))
                    }
                };
                let node = Rc::new(node);
                let ty = self
                    .checker
                    .infer(&scope.ctx, &node)
                    .map_err(Self::kerr(sp))?;
                (node, ty)
            }
            _ => {
                return Err(ElabError::new(
                    "not-a-term",
                    hsp,
                    format!("`{n}` forms a type, not a term"),
                ))
            }
        };
        self.apply_args(scope, t, ty, &args[1..])
    }

    fn destructor_app(
        &mut self,
        scope: &Scope,
        spec: &Rc<DCoindSpec>,
        is_head: bool,
        k: u32,
        args: &[&Expr],
        sp: Span,
    ) -> R<(Tm, Tm)> {
        let dname = if is_head {
            &spec.head_name
        } else {
            &spec.tail_name
        };
        let Some(point) = args.first() else {
            return Err(ElabError::new(
                "arity-mismatch",
                sp,
                format!("`{dname}` needs its coinductive argument"),
            ));
        };
        let (p, pty) = self.infer(scope, point)?;
        let pty = self.nf(&pty, point.span())?;
        let targs = match &*pty {
            Term::DCoind {
                spec: s2,
                level,
                args,
            } if same_spec(s2, spec) && *level == k => args.clone(),
            _ => {
                let found = self.show(scope, &pty);
                return Err(ElabError::kernel(
                    point.span(),
                    KernelError::TypeMismatch {
                        expected: format!("an element of {}{}", spec.name, "^d".repeat(k as usize)),
                        found,
                    },
                ));
            }
        };
        let mut acc = targs;
        acc.push(p);
        if is_head {
            let node = Rc::new(Term::Head {
                spec: spec.clone(),
                level: k,
                args: acc,
            });
            let ty = self
                .checker
                .infer(&scope.ctx, &node)
                .map_err(Self::kerr(sp))?;
            return self.apply_args(scope, node, ty, &args[1..]);
        }
        let (ltel, c) = tail_sig(&mut self.checker.norm, spec, k).map_err(Self::kerr(sp))?;
        let nb = ltel.len() - acc.len();
        if args.len() < 1 + nb {
            return Err(ElabError::new(
                "arity-mismatch",
                sp,
                format!("`{dname}` expects {nb} arguments after its coinductive argument"),
            ));
        }
        for (j, a) in args[1..1 + nb].iter().enumerate() {
            let e = &ltel.entries[acc.len()];
            let ty = instantiate(&e.ty, &acc, 0);
            let inner = scope.lock(e.m, a.span())?;
            let t = self.check(&inner, a, &ty)?;
            acc.push(t);
            let _ = j;
        }
        let ty = instantiate(&c, &acc, 0);
        let node = Rc::new(Term::Tail {
            spec: spec.clone(),
            level: k,
            args: acc,
        });
        self.apply_args(scope, node, ty, &args[1 + nb..])
    }

    fn apply_args(&mut self, scope: &Scope, mut f: Tm, mut fty: Tm, args: &[&Expr]) -> R<(Tm, Tm)> {
        for a in args {
            let ft = self.nf(&fty, a.span())?;
            match &*ft {
                Term::Pi { m, dom, cod, .. } => {
                    let inner = scope.lock(*m, a.span())?;
                    let t = self.check(&inner, a, dom)?;
                    f = app_m(*m, f, t.clone());
                    fty = subst_top(cod, &t);
                }
                _ => {
                    let shown = self.show(scope, &f);
                    return Err(ElabError::kernel(
                        a.span(),
                        KernelError::NotAFunction(shown),
                    ));
                }
            }
        }
        Ok((f, fty))
    }

    fn is_type_syntax(&self, scope: &Scope, e: &Expr) -> bool {
        match e {
            Expr::Pi(..) | Expr::Arrow(..) => true,
            _ => {
                let (h, _) = e.spine();
                if let Expr::Disp(inner, 1, _) = h {
                    if self.is_type_syntax(scope, inner) {
                        return true;
                    }
                }
                match disp_name(h) {
                    Some((n, k)) if scope.local(n).is_none() => {
                        (k == 0
                            && matches!(
                                n,
                                "Type" | "Disc" | "El" | "△" | "Tri" | "◇" | "Dia" | "□" | "Box"
                            ))
                            || matches!(self.globals.get(n), Some(Global::Codata(_)))
                    }
                    _ => false,
                }
            }
        }
    }

    fn check(&mut self, scope: &Scope, e: &Expr, expected: &Tm) -> R<Tm> {
        if let Expr::Lam(binders, body, sp) = e {
            let mut s = scope.clone();
            let mut exp = expected.clone();
            let mut built = vec![];
            for b in binders {
                let en = self.nf(&exp, b.span)?;
                let Term::Pi { m, dom, cod, .. } = &*en else {
                    return Err(ElabError::kernel(
                        *sp,
                        KernelError::TypeMismatch {
                            expected: self.show(&s, &en),
                            found: "a function".into(),
                        },
                    ));
                };
                if let Some((am, aty)) = &b.ann {
                    if am != m {
                        return Err(ElabError::new(
                            "modality-violation",
                            b.span,
                            format!("binder `{}` has modality {am} but {m} is expected", b.name),
                        ));
                    }
                    let a = self.elab_type(&s.lock(*m, b.span)?, aty)?;
                    self.conv_or_err(&s, &a, dom, b.span)?;
                }
                s = s.push(&b.name, *m, dom.clone());
                built.push((b.name.clone(), *m));
                exp = cod.clone();
            }
            let mut t = self.check(&s, body, &exp)?;
            for (n, m) in built.into_iter().rev() {
                t = Rc::new(Term::Lam {
                    m,
                    name: n.as_str().into(),
                    body: t,
                });
            }
            return Ok(t);
        }
        let en = self.nf(expected, e.span())?;
        if matches!(&*en, Term::Type | Term::Disc) && self.is_type_syntax(scope, e) {
            let a = self.elab_type(scope, e)?;
            return Ok(Rc::new(Term::Code(a)));
        }
        let (t, ty) = self.infer(scope, e)?;
        self.conv_or_err(scope, &ty, expected, e.span())?;
        Ok(t)
    }

    fn elab_args(
        &mut self,
        scope: &Scope,
        args: &[&Expr],
        tel: &Telescope,
        sp: Span,
    ) -> R<Vec<Tm>> {
        if args.len() != tel.len() {
            return Err(ElabError::kernel(
                sp,
                KernelError::Arity {
                    expected: tel.len(),
                    found: args.len(),
                },
            ));
        }
        let mut acc = vec![];
        for (e, a) in tel.entries.iter().zip(args) {
            let ty = instantiate(&e.ty, &acc, 0);
            let inner = scope.lock(e.m, a.span())?;
            acc.push(self.check(&inner, a, &ty)?);
        }
        Ok(acc)
    }

    fn elab_type(&mut self, scope: &Scope, e: &Expr) -> R<Tm> {
        let mode = scope.ctx.mode();
        match e {
            Expr::Pi(groups, cod, _) => {
                let mut s = scope.clone();
                let mut doms = vec![];
                for g in groups {
                    for (n, nsp) in &g.names {
                        let a = self.elab_type(&s.lock(g.m, *nsp)?, &g.ty)?;
                        s = s.push(n, g.m, a.clone());
                        doms.push((n.clone(), g.m, a));
                    }
                }
                let mut t = self.elab_type(&s, cod)?;
                for (n, m, a) in doms.into_iter().rev() {
                    t = Rc::new(Term::Pi {
                        m,
                        name: n.as_str().into(),
                        dom: a,
                        cod: t,
                    });
                }
                Ok(t)
            }
            Expr::Arrow(a, b, _) => {
                let a = self.elab_type(scope, a)?;
                let s = scope.push("_", Modality::id(mode), a.clone());
                let b = self.elab_type(&s, b)?;
                Ok(Rc::new(Term::Pi {
                    m: Modality::id(mode),
                    name: "_".into(),
                    dom: a,
                    cod: b,
                }))
            }
            _ => {
                let (h, args) = e.spine();
                let sp = e.span();
                if let Some((n, k)) = disp_name(h) {
                    if scope.local(n).is_none() {
                        if let Some(t) = self.elab_type_head(scope, n, k, &args, sp)? {
                            return Ok(t);
                        }
                    }
                }
                if let (Expr::Disp(inner, 1, _), [p]) = (h, args.as_slice()) {
                    if self.is_type_syntax(scope, inner) {
                        let body = self.elab_type(&scope.lock(Modality::TriBox, sp)?, inner)?;
                        let point = self.check(scope, p, &body)?;
                        return Ok(Rc::new(Term::DispType {
                            skel: vec![],
                            body,
                            args: vec![],
                            point,
                        }));
                    }
                }
                let (t, ty) = self.infer(scope, e)?;
                let ty = self.nf(&ty, sp)?;
                if crate::syntax::alpha_eq(&ty, &universe(mode)) {
                    Ok(Rc::new(Term::El(t)))
                } else {
                    Err(ElabError::kernel(
                        sp,
                        KernelError::NotAType(self.show(scope, &t)),
                    ))
                }
            }
        }
    }

    fn elab_type_head(
        &mut self,
        scope: &Scope,
        n: &str,
        k: u32,
        args: &[&Expr],
        sp: Span,
    ) -> R<Option<Tm>> {
        let mode = scope.ctx.mode();
        let need = |m: Mode| -> R<()> {
            if mode != m {
                Err(ElabError::kernel(
                    sp,
                    KernelError::ModeMismatch {
                        expected: m,
                        found: mode,
                    },
                ))
            } else {
                Ok(())
            }
        };
        let one = |args: &[&Expr]| -> R<Expr> {
            if args.len() == 1 {
                Ok(args[0].clone())
            } else {
                Err(ElabError::new(
                    "arity-mismatch",
                    sp,
                    format!("`{n}` takes one argument"),
                ))
            }
        };
        if k == 0 {
            match n {
                "Type" if args.is_empty() => {
                    need(Mode::Sm)?;
                    return Ok(Some(Rc::new(Term::Type)));
                }
                "Disc" if args.is_empty() => {
                    need(Mode::Dm)?;
                    return Ok(Some(Rc::new(Term::Disc)));
                }
                "El" => {
                    let a = one(args)?;
                    let c = self.check(scope, &a, &universe(mode))?;
                    return Ok(Some(Rc::new(Term::El(c))));
                }
                "△" | "Tri" => {
                    need(Mode::Sm)?;
                    let a = one(args)?;
                    return Ok(Some(Rc::new(Term::TriForm(
                        self.elab_type(&scope.lock(Modality::Tri, sp)?, &a)?,
                    ))));
                }
                "◇" | "Dia" => {
                    need(Mode::Dm)?;
                    let a = one(args)?;
                    return Ok(Some(Rc::new(Term::DiaForm(
                        self.elab_type(&scope.lock(Modality::Dia, sp)?, &a)?,
                    ))));
                }
                "□" | "Box" => {
                    need(Mode::Dm)?;
                    let a = one(args)?;
                    return Ok(Some(Rc::new(Term::BoxForm(
                        self.elab_type(&scope.lock(Modality::Box, sp)?, &a)?,
                    ))));
                }
                _ => {}
            }
        }
        if let Some(Global::Codata(spec)) = self.globals.get(n).cloned() {
            need(Mode::Sm)?;
            let tel = dcoind_tel(&mut self.checker.norm, &spec, k).map_err(Self::kerr(sp))?;
            let targs = self.elab_args(scope, args, &tel, sp)?;
            return Ok(Some(Rc::new(Term::DCoind {
                spec,
                level: k,
                args: targs,
            })));
        }
        Ok(None)
    }

    fn elab_binders(&mut self, scope: &Scope, groups: &[Binder]) -> R<(Telescope, Scope)> {
        let mut tel = Telescope::new();
        let mut s = scope.clone();
        for g in groups {
            for (n, nsp) in &g.names {
                let a = self.elab_type(&s.lock(g.m, *nsp)?, &g.ty)?;
                s = s.push(n, g.m, a.clone());
                tel.push(n, g.m, a);
            }
        }
        Ok((tel, s))
    }

    // ---- declarations ----

    fn check_self_domain(&self, dom: &Expr, name: &str, phi: &Telescope) -> R<()> {
        let (h, args) = dom.spine();
        let ok = h.as_name() == Some(name)
            && args.len() == phi.len()
            && args
                .iter()
                .zip(&phi.entries)
                .all(|(a, e)| a.as_name() == Some(&e.name));
        if ok {
            Ok(())
        } else {
            let ps: Vec<&str> = phi.entries.iter().map(|e| &*e.name).collect();
            Err(ElabError::new(
                "schema-violation",
                dom.span(),
                format!("destructor input must have type `{name} {}`", ps.join(" "))
                    .trim_end()
                    .to_string(),
            ))
        }
    }

    fn codata(
        &mut self,
        name: &str,
        span: Span,
        params: &[Binder],
        sort: &Expr,
        head: &Destructor,
        tail: &Destructor,
    ) -> R<()> {
        if sort.as_name() != Some("Type") {
            return Err(ElabError::new(
                "schema-violation",
                sort.span(),
                "a codata type must live in `Type`",
            ));
        }
        let (phi, sphi) = self.elab_binders(&Scope::empty(), params)?;
        let schema = |sp: Span, msg: &str| ElabError::new("schema-violation", sp, msg.to_string());

        let (_, _, m, dom, rest) = split_first(&head.ty)
            .ok_or_else(|| schema(head.ty.span(), "destructor type must be a function"))?;
        if !m.is_identity() {
            return Err(schema(
                dom.span(),
                "the coinductive argument must be non-modal",
            ));
        }
        self.check_self_domain(&dom, name, &phi)?;
        let head_ty = self.elab_type(&sphi, &rest)?;

        let (x, _, m, dom, mut rest) = split_first(&tail.ty)
            .ok_or_else(|| schema(tail.ty.span(), "destructor type must be a function"))?;
        if !m.is_identity() {
            return Err(schema(
                dom.span(),
                "the coinductive argument must be non-modal",
            ));
        }
        self.check_self_domain(&dom, name, &phi)?;
        let mut s = sphi.push("", Modality::IdSm, head_ty.clone());
        s.self_ref = Some(SelfRef {
            name: x.clone(),
            head: head.name.clone(),
            level: phi.len(),
        });
        let mut b = Telescope::new();
        let final_args = loop {
            let (h, args) = rest.spine();
            if let Some((n, 1)) = disp_name(h) {
                if n == name {
                    break args.into_iter().cloned().collect::<Vec<Expr>>();
                }
            }
            let (bn, bsp, bm, bdom, r) = split_first(&rest).ok_or_else(|| {
                schema(
                    rest.span(),
                    &format!("the tail type must end in `{name}^d … {x}`"),
                )
            })?;
            let a = self.elab_type(&s.lock(bm, bsp)?, &bdom)?;
            s = s.push(&bn, bm, a.clone());
            b.push(&bn, bm, a);
            rest = r;
        };
        match final_args.last() {
            Some(Expr::Name(n, _)) if *n == x => {}
            _ => {
                return Err(schema(
                    rest.span(),
                    &format!("the tail type must end in `{name}^d … {x}`"),
                ))
            }
        }
        let sigma_exprs: Vec<&Expr> = final_args[..final_args.len() - 1].iter().collect();
        let p = phi.len();
        let q = b.len();
        let phi_vars: Vec<Tm> = (0..p).map(|i| var(p + q - i)).collect();
        let dtel = display_tel(&phi, &phi_vars);
        let sigma = self.elab_args(&s, &sigma_exprs, &dtel, rest.span())?;

        let spec = Rc::new(DCoindSpec {
            name: name.into(),
            head_name: head.name.as_str().into(),
            tail_name: tail.name.as_str().into(),
            phi,
            head_ty,
            tail_params: b,
            sigma,
        });
        self.checker.check_spec(&spec).map_err(Self::kerr(span))?;
        self.define(name, span, Global::Codata(spec.clone()))?;
        self.define(&head.name, head.span, Global::Head(spec.clone()))?;
        self.define(&tail.name, tail.span, Global::Tail(spec.clone()))?;
        let mut sig = Rc::new(Term::Type);
        for e in spec.phi.entries.iter().rev() {
            sig = Rc::new(Term::Pi {
                m: e.m,
                name: e.name.clone(),
                dom: e.ty.clone(),
                cod: sig,
            });
        }
        let ty = print_tm(&[], &sig, self.checker.opts);
        self.checked.push(Checked {
            name: name.into(),
            kind: "codata",
            ty,
        });
        Ok(())
    }

    fn def(&mut self, name: &str, span: Span, ty: &Expr, clauses: &[Clause]) -> R<()> {
        if self.globals.contains_key(name) {
            return Err(ElabError::new(
                "duplicate-definition",
                span,
                format!("`{name}` is already defined"),
            ));
        }
        let scope = Scope::empty();
        let t = self.elab_type(&scope, ty)?;
        let t = self.nf(&t, ty.span())?;
        let is_corec = clauses.iter().any(|c| {
            let (h, _) = c.lhs.spine();
            matches!(
                h.as_name().and_then(|n| self.globals.get(n)),
                Some(Global::Head(_) | Global::Tail(_))
            )
        });
        let value = if is_corec {
            self.corec(name, span, &t, clauses)?
        } else {
            let [c] = clauses else {
                return Err(ElabError::new(
                    "schema-violation",
                    span,
                    format!("`{name}` needs exactly one defining clause"),
                ));
            };
            let (h, params) = c.lhs.spine();
            if h.as_name() != Some(name) {
                return Err(ElabError::new(
                    "schema-violation",
                    c.lhs.span(),
                    format!("clause must define `{name}`"),
                ));
            }
            let mut binders = vec![];
            for p in params {
                let Expr::Name(n, s) = p else {
                    return Err(ElabError::new(
                        "schema-violation",
                        p.span(),
                        "parameters must be names",
                    ));
                };
                binders.push(crate::surface::parser::LamBinder {
                    name: n.clone(),
                    span: *s,
                    ann: None,
                });
            }
            let body = if binders.is_empty() {
                c.rhs.clone()
            } else {
                Expr::Lam(binders, Box::new(c.rhs.clone()), c.span)
            };
            let v = self.check(&scope, &body, &t)?;
            self.nf(&v, c.span)?
        };
        let shown = print_tm(&[], &t, self.checker.opts);
        self.define(name, span, Global::Def { value, ty: t })?;
        self.checked.push(Checked {
            name: name.into(),
            kind: "def",
            ty: shown,
        });
        Ok(())
    }

    fn corec(&mut self, name: &str, span: Span, t: &Tm, clauses: &[Clause]) -> R<Tm> {
        let schema = |sp: Span, msg: String| ElabError::new("schema-violation", sp, msg);
        let mut upsilon = Telescope::new();
        let mut cur = t.clone();
        while let Term::Pi {
            m,
            name: n,
            dom,
            cod,
        } = &*cur
        {
            upsilon.push(n, *m, dom.clone());
            cur = cod.clone();
        }
        let (spec, zeta) = match &*cur {
            Term::DCoind {
                spec,
                level: 0,
                args,
            } => (spec.clone(), args.clone()),
            _ => {
                return Err(schema(
                    span,
                    format!("`{name}` must return an element of a codata type"),
                ));
            }
        };
        let find = |d: &str| -> Vec<&Clause> {
            clauses
                .iter()
                .filter(|c| c.lhs.spine().0.as_name() == Some(d))
                .collect()
        };
        let heads = find(&spec.head_name);
        let tails = find(&spec.tail_name);
        if heads.len() != 1 || tails.len() != 1 || clauses.len() != 2 {
            return Err(schema(
                span,
                format!(
                    "`{name}` needs one `{}` clause and one `{}` clause",
                    spec.head_name, spec.tail_name
                ),
            ));
        }
        let (hc, tc) = (heads[0], tails[0]);

        let reserved: Vec<String> = self.globals.keys().cloned().collect();
        let pattern = |e: &Expr| -> R<Vec<String>> {
            let (h, args) = e.spine();
            if h.as_name() != Some(name) {
                return Err(schema(e.span(), format!("expected a copattern `{name} …`")));
            }
            let mut out = vec![];
            for a in args {
                match a {
                    Expr::Name(n, sp) if is_builtin(n) || reserved.contains(n) => {
                        return Err(schema(*sp, format!("`{n}` is not a pattern variable")))
                    }
                    Expr::Name(n, _) => out.push(n.clone()),
                    _ => return Err(schema(a.span(), "copattern variables must be names".into())),
                }
            }
            if out.len() != upsilon.len() {
                return Err(schema(
                    e.span(),
                    format!("copattern must bind {} variables", upsilon.len()),
                ));
            }
            Ok(out)
        };
        let bind_upsilon = |names: &[String]| -> Scope {
            let mut s = Scope::empty();
            for (e, n) in upsilon.entries.iter().zip(names) {
                s = s.push(n, e.m, e.ty.clone());
            }
            s
        };

        // head clause
        let (_, hargs) = hc.lhs.spine();
        if hargs.len() != 1 {
            return Err(schema(
                hc.lhs.span(),
                format!("`{}` takes only the copattern", spec.head_name),
            ));
        }
        let hnames = pattern(hargs[0])?;
        let hs = bind_upsilon(&hnames);
        let a = instantiate(&spec.head_ty, &zeta, 0);
        let h = self.check(&hs, &hc.rhs, &a)?;
        let h = self.nf(&h, hc.rhs.span())?;

        // tail clause
        let (_, targs) = tc.lhs.spine();
        let q = spec.tail_params.len();
        if targs.len() != 1 + q {
            return Err(schema(
                tc.lhs.span(),
                format!(
                    "`{}` takes the copattern and {q} more variables",
                    spec.tail_name
                ),
            ));
        }
        let tnames = pattern(targs[0])?;
        let mut ts = bind_upsilon(&tnames);
        let btel = tail_params_at(&spec, &zeta, &h);
        for (e, a) in btel.entries.iter().zip(&targs[1..]) {
            let Expr::Name(n, _) = a else {
                return Err(schema(a.span(), "copattern variables must be names".into()));
            };
            ts = ts.push(n, e.m, e.ty.clone());
        }
        let (rh, rargs) = tc.rhs.spine();
        if disp_name(rh) != Some((name, 1)) {
            return Err(schema(
                tc.rhs.span(),
                format!(
                    "the `{}` clause must be a call to `{name}^d`",
                    spec.tail_name
                ),
            ));
        }
        let dec = decalage_tel(&upsilon);
        if rargs.len() != dec.len() {
            return Err(schema(
                tc.rhs.span(),
                format!("`{name}^d` takes {} arguments here", dec.len()),
            ));
        }
        let uy = upsilon.len();
        let mut acc: Vec<Tm> = vec![];
        let mut tau = vec![];
        let mut ri = rargs.iter();
        for (i, e) in upsilon.entries.iter().enumerate() {
            let ev = ri.next().unwrap();
            let want = uy + q - 1 - i;
            if ev.as_name() != Some(tnames[i].as_str()) || ts.local(&tnames[i]) != Some(want) {
                return Err(schema(
                    ev.span(),
                    format!(
                        "expected the state variable `{}` in this position",
                        tnames[i]
                    ),
                ));
            }
            acc.push(var(want));
            if e.m.is_identity() {
                let odd = ri.next().unwrap();
                let ty = instantiate(&dec.entries[acc.len()].ty, &acc, 0);
                let t = self.check(&ts, odd, &ty)?;
                acc.push(t.clone());
                tau.push(t);
            }
        }
        let mut ups_named = Telescope::new();
        for (e, n) in upsilon.entries.iter().zip(&hnames) {
            ups_named.push(n, e.m, e.ty.clone());
        }
        let prem = Rc::new(CorecPremises {
            name: name.into(),
            spec,
            upsilon: ups_named,
            zeta,
            h,
            tau,
        });
        self.checker
            .check_premises(&prem)
            .map_err(Self::kerr(tc.span))?;
        let n = prem.upsilon.len();
        let mut v = Rc::new(Term::Corec {
            prem: prem.clone(),
            level: 0,
            args: prem.upsilon.vars(),
        });
        for e in prem.upsilon.entries.iter().rev() {
            v = Rc::new(Term::Lam {
                m: e.m,
                name: e.name.clone(),
                body: v,
            });
        }
        let _ = n;
        Ok(v)
    }

    // ---- judgements for the command line ----

    /// Elaborate `Γ ⊢ e`. Returns the context and either a term with its
    /// type or, when `e` is a type, the type alone.
    pub fn judgement(&mut self, src: &str) -> R<(Context, Tm, Option<Tm>)> {
        let (entries, e) = parse_judgement(src)?;
        let scope = self.context(&entries)?;
        if self.is_type_syntax(&scope, &e)
            && !matches!(e, Expr::Name(ref n, _) if scope.local(n).is_some())
        {
            let a = self.elab_type(&scope, &e)?;
            return Ok((scope.ctx, a, None));
        }
        let (t, ty) = self.infer(&scope, &e)?;
        Ok((scope.ctx, t, Some(ty)))
    }

    fn context(&mut self, entries: &[CtxEntryExpr]) -> R<Scope> {
        let mut s = Scope::empty();
        for ce in entries {
            for (n, sp) in &ce.names {
                let a = self.elab_type(&s.lock(ce.m, *sp)?, &ce.ty)?;
                s = s.push(n, ce.m, a);
            }
        }
        Ok(s)
    }

    /// Elaborate a context prefix on its own.
    pub fn elab_context(&mut self, src: &str) -> R<Context> {
        let (entries, _) = parse_judgement(&format!("{src} ⊢ Type"))?;
        Ok(self.context(&entries)?.ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SST: &str =
        "codata SST : Type where\n  Z : SST → Type\n  S : (A : SST) → Z A → SST^d A\n";

    #[test]
    fn sst_and_fib_elaborate() {
        let mut e = Elaborator::default();
        e.load(SST).unwrap();
        e.load("def Fib : (X :^TB Type) (z : X) → SST\nZ (Fib X z) = X^d z\nS (Fib X z) x = Fib^d X z x\n")
            .unwrap();
        assert!(matches!(e.global("Fib"), Some(Global::Def { .. })));
    }

    #[test]
    fn unbound_names_are_reported() {
        let mut e = Elaborator::default();
        let err = e.load("def f : Type\nf = Nope\n").unwrap_err();
        assert_eq!(err.code, "unbound-name");
    }
}
