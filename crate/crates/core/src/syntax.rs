//! Abstract syntax: one sort for terms and types, contexts with locks,
//! telescopes, partial substitutions and meta-abstractions.
//!
//! Variables are de Bruijn indices counting variable entries from the right
//! and skipping locks. Keys act as the identity on this representation, so a
//! term is unchanged when a key is applied to it.

use std::rc::Rc;

use crate::mode_theory::{compose, Modality, Mode};
use crate::subst::Subst;

pub type Name = Rc<str>;
pub type Tm = Rc<Term>;

pub fn name(s: &str) -> Name {
    Rc::from(s)
}

#[derive(Debug)]
pub enum Term {
    /// `x^{d^disp}`; `disp = 0` is a plain variable.
    Var {
        idx: usize,
        disp: u32,
    },
    Pi {
        m: Modality,
        name: Name,
        dom: Tm,
        cod: Tm,
    },
    Lam {
        m: Modality,
        name: Name,
        body: Tm,
    },
    App {
        m: Modality,
        fun: Tm,
        arg: Tm,
    },
    Disc,
    Type,
    El(Tm),
    Code(Tm),
    TriForm(Tm),
    DiaForm(Tm),
    BoxForm(Tm),
    TriIntro(Tm),
    DiaIntro(Tm),
    BoxIntro(Tm),
    /// ■^A t
    BlackSquare {
        ty: Tm,
        tm: Tm,
    },
    /// ▲^A t
    BlackTriangle {
        ty: Tm,
        tm: Tm,
    },
    /// ◆^A t
    BlackDiamond {
        ty: Tm,
        tm: Tm,
    },
    /// 𝒜^d args point, where `body` is a type over a telescope with
    /// modality skeleton `skel`, living behind a △□ lock.
    DispType {
        skel: Vec<Modality>,
        body: Tm,
        args: Vec<Tm>,
        point: Tm,
    },
    /// 𝔱^d args.
    DispTerm {
        skel: Vec<Modality>,
        body: Tm,
        args: Vec<Tm>,
    },
    /// The `level`-fold display of a display coinductive type.
    DCoind {
        spec: Rc<DCoindSpec>,
        level: u32,
        args: Vec<Tm>,
    },
    /// `head` at display level `level`: parameters followed by the point.
    Head {
        spec: Rc<DCoindSpec>,
        level: u32,
        args: Vec<Tm>,
    },
    /// `tail` at display level `level`: parameters, point, then tail arguments.
    Tail {
        spec: Rc<DCoindSpec>,
        level: u32,
        args: Vec<Tm>,
    },
    /// The `level`-fold display of a corecursor, applied to an element of
    /// the `level`-fold décalage of its state telescope.
    Corec {
        prem: Rc<CorecPremises>,
        level: u32,
        args: Vec<Tm>,
    },
    Sub {
        body: Tm,
        sub: Subst,
    },
}

/// The data of an indexed display coinductive type. All components are
/// closed: they live in the empty sm context.
#[derive(Debug)]
pub struct DCoindSpec {
    pub name: Name,
    pub head_name: Name,
    pub tail_name: Name,
    pub phi: Telescope,
    /// A type over `phi`.
    pub head_ty: Tm,
    /// A telescope over `(phi, a : head_ty)`.
    pub tail_params: Telescope,
    /// Components of `phi^d φ`, over `(phi, a, tail_params)`.
    pub sigma: Vec<Tm>,
}

/// Premises of a corecursor. Closed like [`DCoindSpec`].
#[derive(Debug)]
pub struct CorecPremises {
    pub name: Name,
    pub spec: Rc<DCoindSpec>,
    pub upsilon: Telescope,
    /// Components of `phi`, over `upsilon`.
    pub zeta: Vec<Tm>,
    /// A term of `head_ty[ζ]` over `upsilon`.
    pub h: Tm,
    /// Components of `upsilon^d υ`, over `(upsilon, tail_params[ζ, h])`.
    pub tau: Vec<Tm>,
}

#[derive(Clone, Debug)]
pub struct TelEntry {
    pub name: Name,
    pub m: Modality,
    pub ty: Tm,
}

/// A lock-free list of typed variables; entry `k` lives in the ambient
/// context extended by entries `0..k`.
#[derive(Clone, Debug, Default)]
pub struct Telescope {
    pub entries: Vec<TelEntry>,
}

pub type PartialSub = Vec<Tm>;

/// ⟦body⟧ abstracted over `domain`.
#[derive(Clone, Debug)]
pub struct MetaAbs {
    pub domain: Telescope,
    pub body: Tm,
}

#[derive(Clone, Debug)]
pub enum CtxEntry {
    Var { name: Name, m: Modality, ty: Tm },
    Lock(Modality),
}

/// A context in canonical lock form.
#[derive(Clone, Debug)]
pub struct Context {
    base: Mode,
    entries: Vec<CtxEntry>,
}

impl Term {
    pub fn is_var0(&self) -> bool {
        matches!(self, Term::Var { idx: 0, disp: 0 })
    }
}

pub fn var(idx: usize) -> Tm {
    Rc::new(Term::Var { idx, disp: 0 })
}

pub fn dvar(idx: usize, disp: u32) -> Tm {
    Rc::new(Term::Var { idx, disp })
}

pub fn app(fun: Tm, arg: Tm) -> Tm {
    Rc::new(Term::App {
        m: Modality::IdSm,
        fun,
        arg,
    })
}

pub fn app_m(m: Modality, fun: Tm, arg: Tm) -> Tm {
    Rc::new(Term::App { m, fun, arg })
}

pub fn apps(fun: Tm, args: impl IntoIterator<Item = Tm>) -> Tm {
    args.into_iter().fold(fun, app)
}

pub fn pi(m: Modality, n: &str, dom: Tm, cod: Tm) -> Tm {
    Rc::new(Term::Pi {
        m,
        name: name(n),
        dom,
        cod,
    })
}

pub fn arrow(dom: Tm, cod: Tm) -> Tm {
    Rc::new(Term::Pi {
        m: Modality::IdSm,
        name: name("_"),
        dom,
        cod: crate::subst::shift(&cod, 1),
    })
}

pub fn lam(m: Modality, n: &str, body: Tm) -> Tm {
    Rc::new(Term::Lam {
        m,
        name: name(n),
        body,
    })
}

pub fn el(code: Tm) -> Tm {
    Rc::new(Term::El(code))
}

pub fn code(ty: Tm) -> Tm {
    Rc::new(Term::Code(ty))
}

pub fn ty() -> Tm {
    Rc::new(Term::Type)
}

pub fn disc() -> Tm {
    Rc::new(Term::Disc)
}

/// `t^d` with an empty telescope.
pub fn disp_term(t: Tm) -> Tm {
    match &*t {
        Term::Var { idx, disp } => dvar(*idx, disp + 1),
        _ => Rc::new(Term::DispTerm {
            skel: vec![],
            body: t,
            args: vec![],
        }),
    }
}

/// `t^{d^k}`.
pub fn disp_term_n(t: Tm, k: u32) -> Tm {
    (0..k).fold(t, |t, _| disp_term(t))
}

impl Telescope {
    pub fn new() -> Self {
        Telescope { entries: vec![] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, n: &str, m: Modality, ty: Tm) {
        self.entries.push(TelEntry {
            name: name(n),
            m,
            ty,
        });
    }

    pub fn skeleton(&self) -> Vec<Modality> {
        self.entries.iter().map(|e| e.m).collect()
    }

    /// Strict iff every entry is non-modal.
    pub fn is_strict(&self) -> bool {
        self.entries.iter().all(|e| e.m.is_identity())
    }

    /// Variables of the telescope, as a partial substitution in the
    /// context extended by it.
    pub fn vars(&self) -> PartialSub {
        let n = self.len();
        (0..n).map(|i| var(n - 1 - i)).collect()
    }
}

/// `(Υ | Φ)`: list append. `phi` lives over `upsilon`.
pub fn concat(upsilon: &Telescope, phi: &Telescope) -> Telescope {
    let mut entries = upsilon.entries.clone();
    entries.extend(phi.entries.iter().cloned());
    Telescope { entries }
}

impl MetaAbs {
    /// β: application is substitution of the body.
    pub fn apply(&self, sigma: &[Tm]) -> Tm {
        crate::subst::instantiate(&self.body, sigma, 0)
    }
}

impl Context {
    pub fn empty(mode: Mode) -> Self {
        Context {
            base: mode,
            entries: vec![],
        }
    }

    pub fn entries(&self) -> &[CtxEntry] {
        &self.entries
    }

    pub fn base(&self) -> Mode {
        self.base
    }

    pub fn mode(&self) -> Mode {
        for e in self.entries.iter().rev() {
            if let CtxEntry::Lock(m) = e {
                return m.dom();
            }
        }
        self.base
    }

    pub fn var_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e, CtxEntry::Var { .. }))
            .count()
    }

    pub fn push_var(&mut self, n: &str, m: Modality, ty: Tm) {
        self.entries.push(CtxEntry::Var {
            name: name(n),
            m,
            ty,
        });
    }

    pub fn with_var(&self, n: &str, m: Modality, ty: Tm) -> Context {
        let mut c = self.clone();
        c.push_var(n, m, ty);
        c
    }

    /// Push a lock, keeping the canonical form: identity locks vanish,
    /// adjacent locks compose, and `(⟨⟩_dm, 🔒_□)` is `⟨⟩_sm`.
    ///
    /// Panics if `cod(mu)` differs from the current mode.
    pub fn push_lock(&mut self, mu: Modality) {
        assert_eq!(
            mu.cod(),
            self.mode(),
            "lock {mu} on a context of the wrong mode"
        );
        if self.entries.is_empty() && self.base == Mode::Sm {
            self.base = Mode::Dm;
            self.entries.push(CtxEntry::Lock(Modality::Box));
        }
        match self.entries.last() {
            Some(CtxEntry::Lock(nu)) => {
                let c = compose(*nu, mu).expect("composable locks");
                self.entries.pop();
                if !c.is_identity() {
                    self.entries.push(CtxEntry::Lock(c));
                }
            }
            _ => {
                if !mu.is_identity() {
                    self.entries.push(CtxEntry::Lock(mu));
                }
            }
        }
        if self.base == Mode::Dm
            && self.entries.len() == 1
            && matches!(self.entries[0], CtxEntry::Lock(Modality::Box))
        {
            self.entries.clear();
            self.base = Mode::Sm;
        }
    }

    pub fn lock(&self, mu: Modality) -> Context {
        let mut c = self.clone();
        c.push_lock(mu);
        c
    }

    /// Names of variables, outermost first.
    pub fn names(&self) -> Vec<Name> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                CtxEntry::Var { name, .. } => Some(name.clone()),
                CtxEntry::Lock(_) => None,
            })
            .collect()
    }

    /// The context with its telescope-shaped suffix extended by `tel`.
    pub fn extend(&self, tel: &Telescope) -> Context {
        let mut c = self.clone();
        for e in &tel.entries {
            c.entries.push(CtxEntry::Var {
                name: e.name.clone(),
                m: e.m,
                ty: e.ty.clone(),
            });
        }
        c
    }

    /// Build a context from raw entries, canonicalizing locks.
    pub fn from_entries(base: Mode, entries: Vec<CtxEntry>) -> Context {
        let mut c = Context::empty(base);
        for e in entries {
            match e {
                CtxEntry::Lock(m) => c.push_lock(m),
                v => c.entries.push(v),
            }
        }
        c
    }
}

/// Structural equality of nameless syntax. Binder names are ignored.
pub fn alpha_eq(a: &Tm, b: &Tm) -> bool {
    use Term::*;
    if Rc::ptr_eq(a, b) {
        return true;
    }
    match (&**a, &**b) {
        (Var { idx: i, disp: k }, Var { idx: j, disp: l }) => i == j && k == l,
        (
            Pi { m, dom, cod, .. },
            Pi {
                m: m2,
                dom: d2,
                cod: c2,
                ..
            },
        ) => m == m2 && alpha_eq(dom, d2) && alpha_eq(cod, c2),
        (
            Lam { m, body, .. },
            Lam {
                m: m2, body: b2, ..
            },
        ) => m == m2 && alpha_eq(body, b2),
        (
            App { m, fun, arg },
            App {
                m: m2,
                fun: f2,
                arg: a2,
            },
        ) => m == m2 && alpha_eq(fun, f2) && alpha_eq(arg, a2),
        (Disc, Disc) | (Type, Type) => true,
        (El(x), El(y))
        | (Code(x), Code(y))
        | (TriForm(x), TriForm(y))
        | (DiaForm(x), DiaForm(y))
        | (BoxForm(x), BoxForm(y))
        | (TriIntro(x), TriIntro(y))
        | (DiaIntro(x), DiaIntro(y))
        | (BoxIntro(x), BoxIntro(y)) => alpha_eq(x, y),
        (BlackSquare { ty, tm }, BlackSquare { ty: t2, tm: m2 })
        | (BlackTriangle { ty, tm }, BlackTriangle { ty: t2, tm: m2 })
        | (BlackDiamond { ty, tm }, BlackDiamond { ty: t2, tm: m2 }) => {
            alpha_eq(ty, t2) && alpha_eq(tm, m2)
        }
        (
            DispType {
                skel,
                body,
                args,
                point,
            },
            DispType {
                skel: s2,
                body: b2,
                args: a2,
                point: p2,
            },
        ) => skel == s2 && alpha_eq(body, b2) && all_eq(args, a2) && alpha_eq(point, p2),
        (
            DispTerm { skel, body, args },
            DispTerm {
                skel: s2,
                body: b2,
                args: a2,
            },
        ) => skel == s2 && alpha_eq(body, b2) && all_eq(args, a2),
        (
            DCoind { spec, level, args },
            DCoind {
                spec: s2,
                level: l2,
                args: a2,
            },
        )
        | (
            Head { spec, level, args },
            Head {
                spec: s2,
                level: l2,
                args: a2,
            },
        )
        | (
            Tail { spec, level, args },
            Tail {
                spec: s2,
                level: l2,
                args: a2,
            },
        ) => same_spec(spec, s2) && level == l2 && all_eq(args, a2),
        (
            Corec { prem, level, args },
            Corec {
                prem: p2,
                level: l2,
                args: a2,
            },
        ) => same_premises(prem, p2) && level == l2 && all_eq(args, a2),
        (Sub { .. }, _) | (_, Sub { .. }) => {
            alpha_eq(&crate::subst::push_subs(a), &crate::subst::push_subs(b))
        }
        _ => false,
    }
}

pub fn all_eq(a: &[Tm], b: &[Tm]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| alpha_eq(x, y))
}

pub fn same_spec(a: &Rc<DCoindSpec>, b: &Rc<DCoindSpec>) -> bool {
    Rc::ptr_eq(a, b) || a.name == b.name
}

pub fn same_premises(a: &Rc<CorecPremises>, b: &Rc<CorecPremises>) -> bool {
    Rc::ptr_eq(a, b) || (a.name == b.name && same_spec(&a.spec, &b.spec))
}
