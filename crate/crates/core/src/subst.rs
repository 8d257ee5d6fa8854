//! Substitutions with lock and key actions, and the variable traversals
//! that implement them.
//!
//! Locks and keys leave nameless syntax unchanged, so their actions only
//! record the shape of the substitution.

use std::rc::Rc;

use crate::mode_theory::Modality;
use crate::syntax::{disp_term_n, dvar, Term, Tm};

#[derive(Clone, Debug)]
pub enum SubstAction {
    /// Extend by a term for the next variable.
    Term(Tm),
    /// Push the substitution under a lock.
    CrossLock(Modality),
    /// The key `🔑^{μ≤ν}`.
    Key(Modality, Modality),
    /// The key for the exceptional △◇ variable rule.
    ExceptionalKey,
}

/// `↑^shift` followed by `actions`, innermost last.
#[derive(Clone, Debug, Default)]
pub struct Subst {
    pub shift: usize,
    pub actions: Vec<SubstAction>,
}

impl Subst {
    pub fn id() -> Self {
        Subst::default()
    }

    pub fn weaken(n: usize) -> Self {
        Subst {
            shift: n,
            actions: vec![],
        }
    }

    pub fn push(mut self, a: SubstAction) -> Self {
        self.actions.push(a);
        self
    }

    /// Where a free variable goes.
    fn lookup(&self, mut i: usize) -> Result<Tm, usize> {
        for a in self.actions.iter().rev() {
            if let SubstAction::Term(t) = a {
                if i == 0 {
                    return Ok(t.clone());
                }
                i -= 1;
            }
        }
        Err(i + self.shift)
    }
}

/// Rebuild `t`, replacing each free variable. `f` receives the free index,
/// the display count and the number of binders crossed, and returns a term
/// valid under those binders.
pub fn map_vars(t: &Tm, depth: usize, f: &mut dyn FnMut(usize, u32, usize) -> Tm) -> Tm {
    use Term::*;
    let r = |x: &Tm, f: &mut dyn FnMut(usize, u32, usize) -> Tm| map_vars(x, depth, f);
    match &**t {
        Var { idx, disp } => {
            if *idx < depth {
                t.clone()
            } else {
                f(idx - depth, *disp, depth)
            }
        }
        Pi { m, name, dom, cod } => Rc::new(Pi {
            m: *m,
            name: name.clone(),
            dom: r(dom, f),
            cod: map_vars(cod, depth + 1, f),
        }),
        Lam { m, name, body } => Rc::new(Lam {
            m: *m,
            name: name.clone(),
            body: map_vars(body, depth + 1, f),
        }),
        App { m, fun, arg } => Rc::new(App {
            m: *m,
            fun: r(fun, f),
            arg: r(arg, f),
        }),
        Disc | Type => t.clone(),
        El(x) => Rc::new(El(r(x, f))),
        Code(x) => Rc::new(Code(r(x, f))),
        TriForm(x) => Rc::new(TriForm(r(x, f))),
        DiaForm(x) => Rc::new(DiaForm(r(x, f))),
        BoxForm(x) => Rc::new(BoxForm(r(x, f))),
        TriIntro(x) => Rc::new(TriIntro(r(x, f))),
        DiaIntro(x) => Rc::new(DiaIntro(r(x, f))),
        BoxIntro(x) => Rc::new(BoxIntro(r(x, f))),
        BlackSquare { ty, tm } => Rc::new(BlackSquare {
            ty: r(ty, f),
            tm: r(tm, f),
        }),
        BlackTriangle { ty, tm } => Rc::new(BlackTriangle {
            ty: r(ty, f),
            tm: r(tm, f),
        }),
        BlackDiamond { ty, tm } => Rc::new(BlackDiamond {
            ty: r(ty, f),
            tm: r(tm, f),
        }),
        DispType {
            skel,
            body,
            args,
            point,
        } => Rc::new(DispType {
            skel: skel.clone(),
            body: map_vars(body, depth + skel.len(), f),
            args: args.iter().map(|a| r(a, f)).collect(),
            point: r(point, f),
        }),
        DispTerm { skel, body, args } => Rc::new(DispTerm {
            skel: skel.clone(),
            body: map_vars(body, depth + skel.len(), f),
            args: args.iter().map(|a| r(a, f)).collect(),
        }),
        DCoind { spec, level, args } => Rc::new(DCoind {
            spec: spec.clone(),
            level: *level,
            args: args.iter().map(|a| r(a, f)).collect(),
        }),
        Head { spec, level, args } => Rc::new(Head {
            spec: spec.clone(),
            level: *level,
            args: args.iter().map(|a| r(a, f)).collect(),
        }),
        Tail { spec, level, args } => Rc::new(Tail {
            spec: spec.clone(),
            level: *level,
            args: args.iter().map(|a| r(a, f)).collect(),
        }),
        Corec { prem, level, args } => Rc::new(Corec {
            prem: prem.clone(),
            level: *level,
            args: args.iter().map(|a| r(a, f)).collect(),
        }),
        Sub { body, sub } => map_vars(&apply(body, sub), depth, f),
    }
}

/// Weaken by `by` variables.
pub fn shift(t: &Tm, by: usize) -> Tm {
    shift_from(t, 0, by)
}

/// Weaken by `by` variables inserted below the innermost `cutoff` ones.
pub fn shift_from(t: &Tm, cutoff: usize, by: usize) -> Tm {
    if by == 0 {
        return t.clone();
    }
    map_vars(t, cutoff, &mut |j, k, d| dvar(j + by + d, k))
}

/// Substitute for the innermost `args.len()` variables of `body`
/// (`args[0]` outermost). Remaining free variables are shifted down past
/// the telescope and then up by `outer_shift`.
pub fn instantiate(body: &Tm, args: &[Tm], outer_shift: usize) -> Tm {
    let n = args.len();
    map_vars(body, 0, &mut |j, k, d| {
        if j < n {
            disp_term_n(shift(&args[n - 1 - j], d), k)
        } else {
            dvar(j - n + outer_shift + d, k)
        }
    })
}

/// `body[a/x]` for the innermost variable.
pub fn subst_top(body: &Tm, a: &Tm) -> Tm {
    instantiate(body, std::slice::from_ref(a), 0)
}

pub fn apply(t: &Tm, s: &Subst) -> Tm {
    map_vars(t, 0, &mut |j, k, d| match s.lookup(j) {
        Ok(u) => disp_term_n(shift(&u, d), k),
        Err(i) => dvar(i + d, k),
    })
}

/// Eliminate every explicit substitution node.
pub fn push_subs(t: &Tm) -> Tm {
    map_vars(t, 0, &mut |j, k, d| dvar(j + d, k))
}

/// Does variable `i` occur free in `t`.
pub fn occurs(t: &Tm, i: usize) -> bool {
    let mut found = false;
    map_vars(t, 0, &mut |j, k, d| {
        if j == i {
            found = true;
        }
        dvar(j + d, k)
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_theory::Modality::IdSm;
    use crate::syntax::{alpha_eq, app, lam, var};

    #[test]
    fn shifting_respects_binders() {
        let t = lam(IdSm, "x", app(var(0), var(1)));
        let s = shift(&t, 2);
        assert!(alpha_eq(&s, &lam(IdSm, "x", app(var(0), var(3)))));
    }

    #[test]
    fn instantiate_under_binder() {
        let body = lam(IdSm, "y", app(var(1), var(2)));
        let r = instantiate(&body, &[var(5)], 0);
        assert!(alpha_eq(&r, &lam(IdSm, "y", app(var(6), var(1)))));
    }

    #[test]
    fn displayed_variable_substitution() {
        let r = subst_top(&dvar(0, 2), &var(3));
        assert!(alpha_eq(&r, &dvar(3, 2)));
    }

    #[test]
    fn lock_actions_are_identity() {
        let s = Subst::id()
            .push(SubstAction::Term(var(7)))
            .push(SubstAction::CrossLock(Modality::TriBox))
            .push(SubstAction::Key(Modality::TriBox, IdSm));
        assert!(alpha_eq(&apply(&var(0), &s), &var(7)));
        assert!(alpha_eq(&apply(&var(1), &s), &var(0)));
        assert!(!occurs(&lam(IdSm, "x", var(0)), 0));
    }

    fn term() -> impl proptest::strategy::Strategy<Value = crate::syntax::Tm> {
        use proptest::prelude::*;
        let leaf = (0usize..4, 0u32..3).prop_map(|(i, d)| dvar(i, d));
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(f, a)| app(f, a)),
                inner.prop_map(|b| lam(IdSm, "x", b)),
            ]
        })
    }

    proptest::proptest! {
        #[test]
        fn shifts_compose(t in term(), a in 0usize..3, b in 0usize..3) {
            proptest::prop_assert!(alpha_eq(&shift(&shift(&t, a), b), &shift(&t, a + b)));
        }

        #[test]
        fn substituting_into_a_weakening_is_identity(t in term(), u in term()) {
            proptest::prop_assert!(alpha_eq(&subst_top(&shift(&t, 1), &u), &t));
            proptest::prop_assert!(!occurs(&shift(&t, 1), 0));
        }
    }
}
