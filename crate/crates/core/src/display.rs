//! The display operation as a syntactic translation on normal forms.
//!
//! A [`DispEnv`] relates a source context `(Γ, 🔒_△□ | Υ)` to a target
//! context `(Γ | Υ^D, …)`. Every non-modal entry of `Υ` becomes an
//! evaluation slot and a primed partner in the target; a modal entry
//! becomes a single evaluation slot. Nodes the translation cannot push
//! through are kept as stuck display nodes.

use std::rc::Rc;

use crate::coinductive::{skel_h, skel_l, skel_t, skel_u};
use crate::mode_theory::{is_tri_composite, Modality};
use crate::subst::{instantiate, map_vars, shift, shift_from};
use crate::syntax::{app, app_m, dvar, lam, name, var, Name, Telescope, Term, Tm};

#[derive(Clone, Copy, Debug)]
enum Slot {
    Pair { ev: usize, pr: usize },
    Single { ev: usize, m: Modality },
}

/// Correspondence between a source telescope and its décalage.
#[derive(Clone, Debug, Default)]
pub struct DispEnv {
    slots: Vec<Slot>,
    tgt_len: usize,
}

impl DispEnv {
    pub fn new() -> Self {
        DispEnv::default()
    }

    /// The environment for a whole telescope with the given skeleton.
    pub fn over_skeleton(skel: &[Modality]) -> Self {
        skel.iter().fold(DispEnv::new(), |e, &m| e.bind(m))
    }

    pub fn source_len(&self) -> usize {
        self.slots.len()
    }

    pub fn target_len(&self) -> usize {
        self.tgt_len
    }

    fn idx(&self, level: usize) -> usize {
        self.tgt_len - 1 - level
    }

    /// Extend by a source binder of modality `m`.
    pub fn bind(&self, m: Modality) -> Self {
        let mut e = self.clone();
        if m.is_identity() {
            e.slots.push(Slot::Pair {
                ev: e.tgt_len,
                pr: e.tgt_len + 1,
            });
            e.tgt_len += 2;
        } else {
            e.slots.push(Slot::Single { ev: e.tgt_len, m });
            e.tgt_len += 1;
        }
        e
    }

    /// Extend the target by `n` binders with no source counterpart.
    pub fn extra(&self, n: usize) -> Self {
        let mut e = self.clone();
        e.tgt_len += n;
        e
    }

    pub fn skeleton(&self) -> Vec<Modality> {
        self.slots
            .iter()
            .map(|s| match s {
                Slot::Pair { .. } => Modality::IdSm,
                Slot::Single { m, .. } => *m,
            })
            .collect()
    }

    /// The target variables standing for `Υ^D`, outermost first.
    pub fn id_args(&self) -> Vec<Tm> {
        let mut out = vec![];
        for s in &self.slots {
            match *s {
                Slot::Pair { ev, pr } => {
                    out.push(var(self.idx(ev)));
                    out.push(var(self.idx(pr)));
                }
                Slot::Single { ev, .. } => out.push(var(self.idx(ev))),
            }
        }
        out
    }

    /// The evaluation slots, outermost first.
    pub fn ev_args(&self) -> Vec<Tm> {
        self.slots
            .iter()
            .map(|s| match *s {
                Slot::Pair { ev, .. } | Slot::Single { ev, .. } => var(self.idx(ev)),
            })
            .collect()
    }

    fn ren_index(&self, j: usize) -> usize {
        let n = self.slots.len();
        if j < n {
            match self.slots[n - 1 - j] {
                Slot::Pair { ev, .. } | Slot::Single { ev, .. } => self.idx(ev),
            }
        } else {
            j - n + self.tgt_len
        }
    }
}

/// `t[🔑 | ev]`: move a term from behind the lock into the target.
pub fn ren(env: &DispEnv, t: &Tm) -> Tm {
    map_vars(t, 0, &mut |j, k, d| dvar(env.ren_index(j) + d, k))
}

fn disp_var(env: &DispEnv, i: usize, k: u32) -> Option<Tm> {
    let n = env.slots.len();
    if i < n {
        match env.slots[n - 1 - i] {
            Slot::Pair { pr, .. } if k == 0 => Some(var(env.idx(pr))),
            Slot::Pair { .. } => None,
            Slot::Single { ev, .. } => Some(dvar(env.idx(ev), k + 1)),
        }
    } else {
        Some(dvar(i - n + env.tgt_len, k + 1))
    }
}

fn fallback_tm(env: &DispEnv, t: &Tm) -> Tm {
    Rc::new(Term::DispTerm {
        skel: env.skeleton(),
        body: shift_from(t, env.slots.len(), env.tgt_len),
        args: env.id_args(),
    })
}

fn fallback_ty(env: &DispEnv, a: &Tm, point: Tm) -> Tm {
    Rc::new(Term::DispType {
        skel: env.skeleton(),
        body: shift_from(a, env.slots.len(), env.tgt_len),
        args: env.id_args(),
        point,
    })
}

fn primed(n: &Name) -> String {
    if n.as_ref() == "_" {
        "_".to_string()
    } else {
        format!("{n}'")
    }
}

/// Display of a term, or `None` when it is stuck at its root.
pub fn disp_tm(env: &DispEnv, t: &Tm) -> Option<Tm> {
    use Term::*;
    match &**t {
        Var { idx, disp } => disp_var(env, *idx, *disp),
        Lam { m, name: x, body } if m.is_identity() => {
            let inner = disp_or_fallback(&env.bind(*m), body);
            Some(Rc::new(Lam {
                m: *m,
                name: x.clone(),
                body: lam(*m, &primed(x), inner),
            }))
        }
        Lam { m, name: x, body } if is_tri_composite(*m) => Some(Rc::new(Lam {
            m: *m,
            name: x.clone(),
            body: disp_or_fallback(&env.bind(*m), body),
        })),
        App { m, fun, arg } if m.is_identity() => Some(app(
            app(disp_or_fallback(env, fun), ren(env, arg)),
            disp_or_fallback(env, arg),
        )),
        App { m, fun, arg } if is_tri_composite(*m) => {
            Some(app_m(*m, disp_or_fallback(env, fun), ren(env, arg)))
        }
        Code(a) => {
            let inner = disp_ty_or_fallback(&env.extra(1), a, var(0));
            Some(lam(Modality::IdSm, "a", Rc::new(Code(inner))))
        }
        Head { spec, level, args } => Some(Rc::new(Head {
            spec: spec.clone(),
            level: level + 1,
            args: decal_args(env, &skel_h(spec, *level), args),
        })),
        Tail { spec, level, args } => Some(Rc::new(Tail {
            spec: spec.clone(),
            level: level + 1,
            args: decal_args(env, &skel_l(spec, *level), args),
        })),
        Corec { prem, level, args } => Some(Rc::new(Corec {
            prem: prem.clone(),
            level: level + 1,
            args: decal_args(env, &skel_u(prem, *level), args),
        })),
        _ => None,
    }
}

pub fn disp_or_fallback(env: &DispEnv, t: &Tm) -> Tm {
    disp_tm(env, t).unwrap_or_else(|| fallback_tm(env, t))
}

/// Display of a type at `point`, which must live in the target context.
pub fn disp_ty(env: &DispEnv, a: &Tm, point: &Tm) -> Option<Tm> {
    use Term::*;
    match &**a {
        Pi {
            m,
            name: x,
            dom,
            cod,
        } if m.is_identity() => {
            let dom_d = disp_ty_or_fallback(&env.extra(1), dom, var(0));
            let cod_d = disp_ty_or_fallback(&env.bind(*m), cod, app(shift(point, 2), var(1)));
            Some(Rc::new(Pi {
                m: *m,
                name: x.clone(),
                dom: ren(env, dom),
                cod: Rc::new(Pi {
                    m: *m,
                    name: name(&primed(x)),
                    dom: dom_d,
                    cod: cod_d,
                }),
            }))
        }
        Pi {
            m,
            name: x,
            dom,
            cod,
        } if is_tri_composite(*m) => {
            let cod_d = disp_ty_or_fallback(&env.bind(*m), cod, app_m(*m, shift(point, 1), var(0)));
            Some(Rc::new(Pi {
                m: *m,
                name: x.clone(),
                dom: ren(env, dom),
                cod: cod_d,
            }))
        }
        Type => Some(Rc::new(Pi {
            m: Modality::IdSm,
            name: name("_"),
            dom: Rc::new(El(point.clone())),
            cod: Rc::new(Type),
        })),
        El(c) => Some(Rc::new(El(app(disp_or_fallback(env, c), point.clone())))),
        DCoind { spec, level, args } => {
            let mut new_args = decal_args(env, &skel_t(spec, *level), args);
            new_args.push(point.clone());
            Some(Rc::new(DCoind {
                spec: spec.clone(),
                level: level + 1,
                args: new_args,
            }))
        }
        _ => None,
    }
}

pub fn disp_ty_or_fallback(env: &DispEnv, a: &Tm, point: Tm) -> Tm {
    disp_ty(env, a, &point).unwrap_or_else(|| fallback_ty(env, a, point))
}

/// `σ^D` relative to the skeleton of the telescope `σ` inhabits.
pub fn decal_args(env: &DispEnv, skel: &[Modality], args: &[Tm]) -> Vec<Tm> {
    assert_eq!(
        skel.len(),
        args.len(),
        "partial substitution does not match its skeleton"
    );
    let mut out = vec![];
    for (m, a) in skel.iter().zip(args) {
        out.push(ren(env, a));
        if m.is_identity() {
            out.push(disp_or_fallback(env, a));
        }
    }
    out
}

pub fn decal_skel(skel: &[Modality]) -> Vec<Modality> {
    let mut out = vec![];
    for &m in skel {
        out.push(m);
        if m.is_identity() {
            out.push(m);
        }
    }
    out
}

pub fn decal_skel_n(skel: &[Modality], n: u32) -> Vec<Modality> {
    (0..n).fold(skel.to_vec(), |s, _| decal_skel(&s))
}

/// `Υ^D`: each non-modal entry `x : A` becomes `x : A, x' : A^d x`.
pub fn decalage_tel(tel: &Telescope) -> Telescope {
    let mut out = Telescope::new();
    let mut env = DispEnv::new();
    for e in &tel.entries {
        out.push(&e.name, e.m, ren(&env, &e.ty));
        if e.m.is_identity() {
            out.push(
                &primed(&e.name),
                e.m,
                disp_ty_or_fallback(&env.extra(1), &e.ty, var(0)),
            );
        }
        env = env.bind(e.m);
    }
    out
}

/// `Υ^d σ`: the strict telescope of primed entries over `σ`.
pub fn display_tel(tel: &Telescope, sigma: &[Tm]) -> Telescope {
    let dec = decalage_tel(tel);
    let mut out = Telescope::new();
    let mut vals: Vec<Tm> = vec![];
    let mut q = 0;
    for (i, e) in tel.entries.iter().enumerate() {
        vals.push(shift(&sigma[i], out.len()));
        q += 1;
        if e.m.is_identity() {
            let ty = instantiate(&dec.entries[q].ty, &vals, out.len());
            out.push(&dec.entries[q].name, e.m, ty);
            vals = vals.iter().map(|v| shift(v, 1)).collect();
            vals.push(var(0));
            q += 1;
        }
    }
    out
}

pub fn evens(skel: &[Modality], sigma: &[Tm]) -> Vec<Tm> {
    let mut out = vec![];
    let mut it = sigma.iter();
    for m in skel {
        out.push(it.next().expect("short substitution").clone());
        if m.is_identity() {
            it.next();
        }
    }
    out
}

pub fn odds(skel: &[Modality], sigma: &[Tm]) -> Vec<Tm> {
    let mut out = vec![];
    let mut it = sigma.iter();
    for m in skel {
        it.next();
        if m.is_identity() {
            out.push(it.next().expect("short substitution").clone());
        }
    }
    out
}

/// `⦅σ, τ⦆`: interleave evaluation components with primed ones.
pub fn pair(skel: &[Modality], sigma: &[Tm], tau: &[Tm]) -> Vec<Tm> {
    let mut out = vec![];
    let mut t = tau.iter();
    for (m, s) in skel.iter().zip(sigma) {
        out.push(s.clone());
        if m.is_identity() {
            out.push(t.next().expect("short pairing").clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, el, pi, ty};
    use Modality::*;

    #[test]
    fn decal_skel_doubles_plain_entries() {
        assert_eq!(decal_skel(&[IdSm, TriBox]), vec![IdSm, IdSm, TriBox]);
        assert_eq!(decal_skel_n(&[IdSm], 3).len(), 8);
    }

    #[test]
    fn universe_display() {
        let env = DispEnv::new();
        let r = disp_ty(&env, &ty(), &var(0)).unwrap();
        assert!(alpha_eq(&r, &pi(IdSm, "_", el(var(0)), ty())));
    }

    #[test]
    fn even_odd_pairing() {
        let skel = [IdSm, TriBox, IdSm];
        let s = vec![var(0), var(1), var(2)];
        let t = vec![var(3), var(4)];
        let p = pair(&skel, &s, &t);
        assert_eq!(p.len(), 5);
        assert!(evens(&skel, &p).iter().zip(&s).all(|(a, b)| alpha_eq(a, b)));
        assert!(odds(&skel, &p).iter().zip(&t).all(|(a, b)| alpha_eq(a, b)));
    }

    #[test]
    fn variable_display_in_empty_telescope() {
        let env = DispEnv::new();
        assert!(alpha_eq(&disp_tm(&env, &dvar(2, 1)).unwrap(), &dvar(2, 2)));
        let env1 = DispEnv::over_skeleton(&[IdSm]);
        assert!(alpha_eq(&disp_tm(&env1, &var(0)).unwrap(), &var(0)));
        assert!(alpha_eq(&ren(&env1, &var(0)), &var(1)));
        assert!(alpha_eq(&disp_tm(&env1, &var(1)).unwrap(), &dvar(2, 1)));
    }
}
