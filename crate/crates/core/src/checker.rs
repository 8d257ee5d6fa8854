//! Normalization, conversion and bidirectional type checking.

use std::rc::Rc;

use thiserror::Error;

use crate::coinductive::{
    corec_sig, dcoind_tel, head_sig, head_value, point_index, side_condition, tail_params_at,
    tail_sig, tail_state,
};
use crate::display::{decalage_tel, disp_tm, disp_ty, disp_ty_or_fallback, evens, pair, DispEnv};
use crate::mode_theory::{compose, leq_or_false, Modality, Mode};
use crate::printer::{print_tm, PrintOpts};
use crate::subst::{instantiate, push_subs, shift, subst_top};
use crate::syntax::{
    alpha_eq, disp_term, same_spec, var, Context, CorecPremises, CtxEntry, DCoindSpec, Telescope,
    Term, Tm,
};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("variable {var} of modality {modality} is not accessible behind locks {locks}")]
    ModalityViolation {
        var: String,
        modality: String,
        locks: String,
    },
    #[error("the context is not flat")]
    NotFlat,
    #[error("{0} is not a function")]
    NotAFunction(String),
    #[error("expected a type, found {0}")]
    NotAType(String),
    #[error("expected a term, found the type {0}")]
    NotATerm(String),
    #[error("cannot infer the type of {0}; add an annotation")]
    AnnotationRequired(String),
    #[error("mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("corecursor {0} violates its side condition")]
    SideConditionFailed(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("normalization ran out of fuel")]
    FuelExhausted,
    #[error("unbound variable index {0}")]
    Unbound(usize),
}

impl KernelError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            KernelError::TypeMismatch { .. } => "type-mismatch",
            KernelError::ModalityViolation { .. } => "modality-violation",
            KernelError::NotFlat => "not-flat",
            KernelError::NotAFunction(_) => "not-a-function",
            KernelError::NotAType(_) => "universe-expected",
            KernelError::NotATerm(_) => "not-a-term",
            KernelError::AnnotationRequired(_) => "annotation-required",
            KernelError::ModeMismatch { .. } => "mode-mismatch",
            KernelError::Arity { .. } => "arity-mismatch",
            KernelError::SideConditionFailed(_) => "side-condition-failed",
            KernelError::Unsupported(_) => "unsupported",
            KernelError::FuelExhausted => "fuel-exhausted",
            KernelError::Unbound(_) => "unbound-name",
        }
    }
}

type Result<T> = std::result::Result<T, KernelError>;

/// Full normalizer with a step budget.
#[derive(Clone, Debug)]
pub struct Normalizer {
    pub limit: u64,
    used: u64,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer::new(DEFAULT_FUEL)
    }
}

/// Normalize with a fresh budget.
pub fn normalize(t: &Tm, fuel: u64) -> Result<Tm> {
    Normalizer::new(fuel).nf(t)
}

impl Normalizer {
    pub fn new(limit: u64) -> Self {
        Normalizer { limit, used: 0 }
    }

    pub fn reset(&mut self) {
        self.used = 0;
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(KernelError::FuelExhausted)
        } else {
            Ok(())
        }
    }

    pub fn nf_all(&mut self, ts: &[Tm]) -> Result<Vec<Tm>> {
        ts.iter().map(|t| self.nf(t)).collect()
    }

    pub fn nf(&mut self, t: &Tm) -> Result<Tm> {
        use Term::*;
        self.tick()?;
        Ok(match &**t {
            Var { .. } | Disc | Type => t.clone(),
            Pi { m, name, dom, cod } => Rc::new(Pi {
                m: *m,
                name: name.clone(),
                dom: self.nf(dom)?,
                cod: self.nf(cod)?,
            }),
            Lam { m, name, body } => Rc::new(Lam {
                m: *m,
                name: name.clone(),
                body: self.nf(body)?,
            }),
            App { m, fun, arg } => {
                let f = self.nf(fun)?;
                let a = self.nf(arg)?;
                match &*f {
                    Lam { body, .. } => self.nf(&subst_top(body, &a))?,
                    _ => Rc::new(App {
                        m: *m,
                        fun: f,
                        arg: a,
                    }),
                }
            }
            El(c) => {
                let c = self.nf(c)?;
                match &*c {
                    Code(a) => a.clone(),
                    _ => Rc::new(El(c)),
                }
            }
            Code(a) => {
                let a = self.nf(a)?;
                match &*a {
                    El(c) => c.clone(),
                    _ => Rc::new(Code(a)),
                }
            }
            TriForm(a) => Rc::new(TriForm(self.nf(a)?)),
            DiaForm(a) => Rc::new(DiaForm(self.nf(a)?)),
            BoxForm(a) => Rc::new(BoxForm(self.nf(a)?)),
            TriIntro(a) => Rc::new(TriIntro(self.nf(a)?)),
            DiaIntro(a) => Rc::new(DiaIntro(self.nf(a)?)),
            BoxIntro(a) => Rc::new(BoxIntro(self.nf(a)?)),
            BlackSquare { ty, tm } => {
                let tm = self.nf(tm)?;
                match &*tm {
                    BoxIntro(u) => u.clone(),
                    _ => Rc::new(BlackSquare {
                        ty: self.nf(ty)?,
                        tm,
                    }),
                }
            }
            BlackTriangle { ty, tm } => {
                let tm = self.nf(tm)?;
                match &*tm {
                    TriIntro(u) => u.clone(),
                    _ => Rc::new(BlackTriangle {
                        ty: self.nf(ty)?,
                        tm,
                    }),
                }
            }
            BlackDiamond { ty, tm } => {
                let tm = self.nf(tm)?;
                match &*tm {
                    DiaIntro(u) => u.clone(),
                    _ => Rc::new(BlackDiamond {
                        ty: self.nf(ty)?,
                        tm,
                    }),
                }
            }
            DispTerm { skel, body, args } => {
                let body = self.nf(body)?;
                let args = self.nf_all(args)?;
                let env = DispEnv::over_skeleton(skel);
                match disp_tm(&env, &body) {
                    Some(r) => self.nf(&instantiate(&r, &args, 0))?,
                    None => match self.reduce_on_decalage(skel, &body, &args)? {
                        Some(r) => self.nf(&disp_term(r))?,
                        None => Rc::new(DispTerm {
                            skel: skel.clone(),
                            body,
                            args,
                        }),
                    },
                }
            }
            DispType {
                skel,
                body,
                args,
                point,
            } => {
                let body = self.nf(body)?;
                let args = self.nf_all(args)?;
                let point = self.nf(point)?;
                let env = DispEnv::over_skeleton(skel);
                match disp_ty(&env, &body, &shift(&point, env.target_len())) {
                    Some(r) => self.nf(&instantiate(&r, &args, 0))?,
                    None => match self.reduce_on_decalage(skel, &body, &args)? {
                        Some(r) => Rc::new(DispType {
                            skel: vec![],
                            body: r,
                            args: vec![],
                            point,
                        }),
                        None => Rc::new(DispType {
                            skel: skel.clone(),
                            body,
                            args,
                            point,
                        }),
                    },
                }
            }
            DCoind { spec, level, args } => Rc::new(DCoind {
                spec: spec.clone(),
                level: *level,
                args: self.nf_all(args)?,
            }),
            Head { spec, level, args } => {
                let args = self.nf_all(args)?;
                match self.corec_point(spec, *level, &args) {
                    Some((prem, cargs)) => {
                        let h = head_value(self, &prem, *level)?;
                        self.nf(&instantiate(&h, &cargs, 0))?
                    }
                    None => Rc::new(Head {
                        spec: spec.clone(),
                        level: *level,
                        args,
                    }),
                }
            }
            Tail { spec, level, args } => {
                let args = self.nf_all(args)?;
                match self.corec_point(spec, *level, &args) {
                    Some((prem, cargs)) => {
                        let k = point_index(spec, *level) + 1;
                        let mut all = cargs;
                        all.extend(args[k..].iter().cloned());
                        let p = tail_state(self, &prem, *level)?;
                        let new_args = p.iter().map(|t| instantiate(t, &all, 0)).collect();
                        self.nf(&Rc::new(Corec {
                            prem,
                            level: level + 1,
                            args: new_args,
                        }))?
                    }
                    None => Rc::new(Tail {
                        spec: spec.clone(),
                        level: *level,
                        args,
                    }),
                }
            }
            Corec { prem, level, args } => Rc::new(Corec {
                prem: prem.clone(),
                level: *level,
                args: self.nf_all(args)?,
            }),
            Sub { .. } => self.nf(&push_subs(t))?,
        })
    }

    /// Contract one destructor-on-corecursor redex, innermost first, in a
    /// term whose other parts are already normal.
    pub fn step(&mut self, t: &Tm) -> Result<Option<Tm>> {
        use Term::*;
        self.tick()?;
        let step_args = |me: &mut Self, args: &[Tm]| -> Result<Option<Vec<Tm>>> {
            for (i, a) in args.iter().enumerate() {
                if let Some(a2) = me.step(a)? {
                    let mut out = args.to_vec();
                    out[i] = a2;
                    return Ok(Some(out));
                }
            }
            Ok(None)
        };
        Ok(match &**t {
            App { m, fun, arg } => {
                if let Some(f) = self.step(fun)? {
                    Some(match &*f {
                        Lam { body, .. } => self.nf(&subst_top(body, arg))?,
                        _ => Rc::new(App {
                            m: *m,
                            fun: f,
                            arg: arg.clone(),
                        }),
                    })
                } else {
                    self.step(arg)?.map(|a| {
                        Rc::new(App {
                            m: *m,
                            fun: fun.clone(),
                            arg: a,
                        })
                    })
                }
            }
            El(c) => self
                .step(c)?
                .map(|c| self.nf(&Rc::new(El(c))))
                .transpose()?,
            Code(a) => self
                .step(a)?
                .map(|a| self.nf(&Rc::new(Code(a))))
                .transpose()?,
            Head { spec, level, args } | Tail { spec, level, args } => {
                let is_head = matches!(&**t, Head { .. });
                match step_args(self, args)? {
                    Some(a) => Some(Rc::new(if is_head {
                        Head {
                            spec: spec.clone(),
                            level: *level,
                            args: a,
                        }
                    } else {
                        Tail {
                            spec: spec.clone(),
                            level: *level,
                            args: a,
                        }
                    })),
                    None if self.corec_point(spec, *level, args).is_some() => Some(self.nf(t)?),
                    None => None,
                }
            }
            DCoind { spec, level, args } => step_args(self, args)?.map(|a| {
                Rc::new(DCoind {
                    spec: spec.clone(),
                    level: *level,
                    args: a,
                })
            }),
            Corec { prem, level, args } => step_args(self, args)?.map(|a| {
                Rc::new(Corec {
                    prem: prem.clone(),
                    level: *level,
                    args: a,
                })
            }),
            _ => None,
        })
    }

    /// The sequence of terms visited by repeated [`Normalizer::step`].
    pub fn trace(&mut self, t: &Tm) -> Result<Vec<Tm>> {
        let mut out = vec![t.clone()];
        while let Some(next) = self.step(out.last().unwrap())? {
            out.push(next);
        }
        Ok(out)
    }

    fn corec_point(
        &self,
        spec: &Rc<DCoindSpec>,
        level: u32,
        args: &[Tm],
    ) -> Option<(Rc<CorecPremises>, Vec<Tm>)> {
        match args.get(point_index(spec, level)).map(|p| &**p) {
            Some(Term::Corec {
                prem,
                level: l,
                args: cargs,
            }) if *l == level && same_spec(&prem.spec, spec) => Some((prem.clone(), cargs.clone())),
            _ => None,
        }
    }

    /// `𝒜^d σ^D ≡ (𝒜σ)^d`: when the arguments are a décalage, push the
    /// evaluation part into the body.
    fn reduce_on_decalage(
        &mut self,
        skel: &[crate::mode_theory::Modality],
        body: &Tm,
        args: &[Tm],
    ) -> Result<Option<Tm>> {
        if skel.is_empty() {
            return Ok(None);
        }
        let ev = evens(skel, args);
        let mut it = args.iter();
        for (m, e) in skel.iter().zip(&ev) {
            it.next();
            if m.is_identity() {
                let odd = it.next().unwrap();
                let expect = self.nf(&disp_term(e.clone()))?;
                if !alpha_eq(odd, &expect) {
                    return Ok(None);
                }
            }
        }
        Ok(Some(instantiate(body, &ev, 0)))
    }
}

pub fn universe(mode: Mode) -> Tm {
    match mode {
        Mode::Sm => Rc::new(Term::Type),
        Mode::Dm => Rc::new(Term::Disc),
    }
}

/// Whether the context ends with a ◇ lock followed only by variables.
pub fn is_flat(ctx: &Context) -> bool {
    for e in ctx.entries().iter().rev() {
        if let CtxEntry::Lock(m) = e {
            return matches!(m, Modality::Dia | Modality::TriDia);
        }
    }
    false
}

/// Bidirectional checker over kernel syntax.
#[derive(Debug, Default)]
pub struct Checker {
    pub norm: Normalizer,
    pub opts: PrintOpts,
}

impl Checker {
    pub fn new(fuel: u64) -> Self {
        Checker {
            norm: Normalizer::new(fuel),
            opts: PrintOpts::default(),
        }
    }

    pub fn reset_fuel(&mut self) {
        self.norm.reset();
    }

    pub fn nf(&mut self, t: &Tm) -> Result<Tm> {
        self.norm.nf(t)
    }

    fn show(&self, ctx: &Context, t: &Tm) -> String {
        print_tm(&ctx.names(), t, self.opts)
    }

    fn lock(&self, ctx: &Context, m: Modality) -> Result<Context> {
        if m.cod() != ctx.mode() {
            return Err(KernelError::ModeMismatch {
                expected: m.cod(),
                found: ctx.mode(),
            });
        }
        Ok(ctx.lock(m))
    }

    fn expect_mode(ctx: &Context, mode: Mode) -> Result<()> {
        if ctx.mode() != mode {
            return Err(KernelError::ModeMismatch {
                expected: mode,
                found: ctx.mode(),
            });
        }
        Ok(())
    }

    pub fn conv(&mut self, a: &Tm, b: &Tm) -> Result<bool> {
        Ok(alpha_eq(&self.nf(a)?, &self.nf(b)?))
    }

    /// The type of variable `i`, checking the modal access rules.
    pub fn lookup(&self, ctx: &Context, i: usize) -> Result<Tm> {
        let entries = ctx.entries();
        let mut count = 0;
        let mut locks: Vec<Modality> = vec![];
        for (pos, e) in entries.iter().enumerate().rev() {
            match e {
                CtxEntry::Lock(m) => locks.push(*m),
                CtxEntry::Var { name, m, ty } => {
                    if count < i {
                        count += 1;
                        continue;
                    }
                    let nu = locks
                        .iter()
                        .rev()
                        .try_fold(Modality::id(m.cod()), |acc, l| compose(acc, *l))
                        .map_err(|_| KernelError::ModeMismatch {
                            expected: m.cod(),
                            found: ctx.mode(),
                        })?;
                    let prefix = Context::from_entries(ctx.base(), entries[..pos].to_vec());
                    let ok = leq_or_false(*m, nu)
                        || (*m == Modality::TriDia && nu == Modality::IdSm && is_flat(&prefix));
                    if !ok {
                        return Err(KernelError::ModalityViolation {
                            var: name.to_string(),
                            modality: m.to_string(),
                            locks: nu.to_string(),
                        });
                    }
                    return Ok(shift(ty, i + 1));
                }
            }
        }
        Err(KernelError::Unbound(i))
    }

    pub fn infer(&mut self, ctx: &Context, t: &Tm) -> Result<Tm> {
        use Term::*;
        match &**t {
            Var { idx, disp } => {
                if *disp == 0 {
                    return self.lookup(ctx, *idx);
                }
                Self::expect_mode(ctx, Mode::Sm)?;
                let mut a = self.nf(&self.lookup(&ctx.lock(Modality::TriBox), *idx)?)?;
                for j in 0..*disp {
                    let point = crate::syntax::dvar(*idx, j);
                    a = self.nf(&disp_ty_or_fallback(&DispEnv::new(), &a, point))?;
                }
                Ok(a)
            }
            App { m, fun, arg } => {
                let ft = self.infer(ctx, fun)?;
                let ft = self.nf(&ft)?;
                match &*ft {
                    Pi {
                        m: m2, dom, cod, ..
                    } if m2 == m => {
                        let inner = self.lock(ctx, *m)?;
                        self.check(&inner, arg, dom)?;
                        Ok(subst_top(cod, arg))
                    }
                    _ => Err(KernelError::NotAFunction(self.show(ctx, fun))),
                }
            }
            Code(a) => {
                self.check_type(ctx, a)?;
                Ok(universe(ctx.mode()))
            }
            TriIntro(u) => {
                Self::expect_mode(ctx, Mode::Sm)?;
                let a = self.infer(&ctx.lock(Modality::Tri), u)?;
                Ok(Rc::new(TriForm(a)))
            }
            DiaIntro(u) => {
                Self::expect_mode(ctx, Mode::Dm)?;
                let a = self.infer(&ctx.lock(Modality::Dia), u)?;
                Ok(Rc::new(DiaForm(a)))
            }
            BoxIntro(u) => {
                Self::expect_mode(ctx, Mode::Dm)?;
                let a = self.infer(&ctx.lock(Modality::Box), u)?;
                Ok(Rc::new(BoxForm(a)))
            }
            BlackSquare { ty, tm } => {
                Self::expect_mode(ctx, Mode::Sm)?;
                self.check_type(&ctx.lock(Modality::TriBox), ty)?;
                self.check(&ctx.lock(Modality::Tri), tm, &Rc::new(BoxForm(ty.clone())))?;
                Ok(ty.clone())
            }
            BlackTriangle { ty, tm } => {
                Self::expect_mode(ctx, Mode::Dm)?;
                self.check_type(ctx, ty)?;
                self.check(&ctx.lock(Modality::Dia), tm, &Rc::new(TriForm(ty.clone())))?;
                Ok(ty.clone())
            }
            BlackDiamond { ty, tm } => {
                Self::expect_mode(ctx, Mode::Sm)?;
                if !is_flat(ctx) {
                    return Err(KernelError::NotFlat);
                }
                self.check_type(&ctx.lock(Modality::TriDia), ty)?;
                self.check(&ctx.lock(Modality::Tri), tm, &Rc::new(DiaForm(ty.clone())))?;
                Ok(ty.clone())
            }
            DispTerm { skel, body, args } if skel.is_empty() && args.is_empty() => {
                Self::expect_mode(ctx, Mode::Sm)?;
                let a = self.infer(&ctx.lock(Modality::TriBox), body)?;
                let a = self.nf(&a)?;
                Ok(disp_ty_or_fallback(&DispEnv::new(), &a, body.clone()))
            }
            DispTerm { .. } => Err(KernelError::Unsupported(
                "cannot infer the type of a display over a nonempty telescope".into(),
            )),
            Head { spec, level, args } => {
                Self::expect_mode(ctx, Mode::Sm)?;
                let (tel, a) = head_sig(&mut self.norm, spec, *level)?;
                self.check_psub(ctx, args, &tel)?;
                Ok(instantiate(&a, args, 0))
            }
            Tail { spec, level, args } => {
                Self::expect_mode(ctx, Mode::Sm)?;
                let (tel, c) = tail_sig(&mut self.norm, spec, *level)?;
                self.check_psub(ctx, args, &tel)?;
                Ok(instantiate(&c, args, 0))
            }
            Corec { prem, level, args } => {
                Self::expect_mode(ctx, Mode::Sm)?;
                let (tel, c) = corec_sig(&mut self.norm, prem, *level)?;
                self.check_psub(ctx, args, &tel)?;
                Ok(instantiate(&c, args, 0))
            }
            Sub { .. } => self.infer(ctx, &push_subs(t)),
            Lam { .. } => Err(KernelError::AnnotationRequired(self.show(ctx, t))),
            Pi { .. }
            | Disc
            | Type
            | El(_)
            | TriForm(_)
            | DiaForm(_)
            | BoxForm(_)
            | DispType { .. }
            | DCoind { .. } => Err(KernelError::NotATerm(self.show(ctx, t))),
        }
    }

    pub fn check(&mut self, ctx: &Context, t: &Tm, ty: &Tm) -> Result<()> {
        if let Term::Lam { m, name, body } = &**t {
            let ty_n = self.nf(ty)?;
            return match &*ty_n {
                Term::Pi {
                    m: m2, dom, cod, ..
                } if m == m2 => {
                    let inner = ctx.with_var(name, *m, dom.clone());
                    self.check(&inner, body, cod)
                }
                _ => Err(KernelError::TypeMismatch {
                    expected: self.show(ctx, &ty_n),
                    found: "a function".into(),
                }),
            };
        }
        let found = self.infer(ctx, t)?;
        if self.conv(&found, ty)? {
            Ok(())
        } else {
            let e = self.nf(ty)?;
            let f = self.nf(&found)?;
            Err(KernelError::TypeMismatch {
                expected: self.show(ctx, &e),
                found: self.show(ctx, &f),
            })
        }
    }

    pub fn check_type(&mut self, ctx: &Context, a: &Tm) -> Result<()> {
        use Term::*;
        match &**a {
            Pi { m, name, dom, cod } => {
                let inner = self.lock(ctx, *m)?;
                self.check_type(&inner, dom)?;
                self.check_type(&ctx.with_var(name, *m, dom.clone()), cod)
            }
            Type => Self::expect_mode(ctx, Mode::Sm),
            Disc => Self::expect_mode(ctx, Mode::Dm),
            El(c) => self.check(ctx, c, &universe(ctx.mode())),
            TriForm(b) => {
                Self::expect_mode(ctx, Mode::Sm)?;
                self.check_type(&ctx.lock(Modality::Tri), b)
            }
            DiaForm(b) => {
                Self::expect_mode(ctx, Mode::Dm)?;
                self.check_type(&ctx.lock(Modality::Dia), b)
            }
            BoxForm(b) => {
                Self::expect_mode(ctx, Mode::Dm)?;
                self.check_type(&ctx.lock(Modality::Box), b)
            }
            DispType {
                skel,
                body,
                args,
                point,
            } if skel.is_empty() && args.is_empty() => {
                Self::expect_mode(ctx, Mode::Sm)?;
                self.check_type(&ctx.lock(Modality::TriBox), body)?;
                self.check(ctx, point, body)
            }
            DCoind { spec, level, args } => {
                Self::expect_mode(ctx, Mode::Sm)?;
                let tel = dcoind_tel(&mut self.norm, spec, *level)?;
                self.check_psub(ctx, args, &tel)
            }
            Sub { .. } => self.check_type(ctx, &push_subs(a)),
            _ => Err(KernelError::NotAType(self.show(ctx, a))),
        }
    }

    /// Check `args` against a telescope living over `ctx`.
    pub fn check_psub(&mut self, ctx: &Context, args: &[Tm], tel: &Telescope) -> Result<()> {
        if args.len() != tel.len() {
            return Err(KernelError::Arity {
                expected: tel.len(),
                found: args.len(),
            });
        }
        for (k, e) in tel.entries.iter().enumerate() {
            let ty = instantiate(&e.ty, &args[..k], 0);
            let inner = self.lock(ctx, e.m)?;
            self.check(&inner, &args[k], &ty)?;
        }
        Ok(())
    }

    pub fn check_tel(&mut self, ctx: &Context, tel: &Telescope) -> Result<Context> {
        let mut c = ctx.clone();
        for e in &tel.entries {
            let inner = self.lock(&c, e.m)?;
            self.check_type(&inner, &e.ty)?;
            c.push_var(&e.name, e.m, e.ty.clone());
        }
        Ok(c)
    }

    /// Well-formedness of a display coinductive specification.
    pub fn check_spec(&mut self, spec: &DCoindSpec) -> Result<()> {
        let c0 = Context::empty(Mode::Sm);
        let cphi = self.check_tel(&c0, &spec.phi)?;
        self.check_type(&cphi, &spec.head_ty)?;
        let ca = cphi.with_var("a", Modality::IdSm, spec.head_ty.clone());
        let cb = self.check_tel(&ca, &spec.tail_params)?;
        let p = spec.phi.len();
        let q = spec.tail_params.len();
        let phi_vars: Vec<Tm> = (0..p).map(|i| var(p + q - i)).collect();
        if spec.sigma.len()
            != spec
                .phi
                .entries
                .iter()
                .filter(|e| e.m.is_identity())
                .count()
        {
            return Err(KernelError::Arity {
                expected: spec
                    .phi
                    .entries
                    .iter()
                    .filter(|e| e.m.is_identity())
                    .count(),
                found: spec.sigma.len(),
            });
        }
        let paired = pair(&spec.phi.skeleton(), &phi_vars, &spec.sigma);
        self.check_psub(&cb, &paired, &decalage_tel(&spec.phi))
    }

    /// Typing of corecursor premises, including the side condition.
    pub fn check_premises(&mut self, prem: &CorecPremises) -> Result<()> {
        let spec = &prem.spec;
        let cu = self.check_tel(&Context::empty(Mode::Sm), &prem.upsilon)?;
        self.check_psub(&cu, &prem.zeta, &spec.phi)?;
        let a = instantiate(&spec.head_ty, &prem.zeta, 0);
        self.check(&cu, &prem.h, &a)?;
        let b = tail_params_at(spec, &prem.zeta, &prem.h);
        let cb = self.check_tel(&cu, &b)?;
        let expected = prem
            .upsilon
            .entries
            .iter()
            .filter(|e| e.m.is_identity())
            .count();
        if prem.tau.len() != expected {
            return Err(KernelError::Arity {
                expected,
                found: prem.tau.len(),
            });
        }
        side_condition(&mut self.norm, prem)?;
        let p0 = tail_state(&mut self.norm, prem, 0)?;
        self.check_psub(&cb, &p0, &decalage_tel(&prem.upsilon))?;
        Ok(())
    }
}
