//! Pretty printing of terms with binder names.

use crate::coinductive::point_index;
use crate::mode_theory::Modality;
use crate::subst::{occurs, push_subs};
use crate::syntax::{Name, Term, Tm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrintOpts {
    pub unicode: bool,
}

impl Default for PrintOpts {
    fn default() -> Self {
        PrintOpts { unicode: true }
    }
}

const TOP: u8 = 0;
const ARG: u8 = 2;
const SPINE: u8 = 1;

struct Printer {
    opts: PrintOpts,
    names: Vec<String>,
}

pub fn print_tm(names: &[Name], t: &Tm, opts: PrintOpts) -> String {
    let mut p = Printer {
        opts,
        names: names.iter().map(|n| n.to_string()).collect(),
    };
    p.go(t, TOP)
}

pub fn print_modality(m: Modality, opts: PrintOpts) -> &'static str {
    if opts.unicode {
        m.unicode()
    } else {
        m.ascii()
    }
}

/// Spell a user name, transliterating the few non-ASCII letters the
/// libraries use when Unicode output is off.
pub fn spell(n: &str, opts: PrintOpts) -> String {
    if opts.unicode {
        return n.to_string();
    }
    n.chars()
        .map(|c| match c {
            'β' => "b".to_string(),
            'ʒ' => "z".to_string(),
            '𝔣' => "f".to_string(),
            'ᵈ' => "^d".to_string(),
            '⁺' => "+".to_string(),
            '′' => "'".to_string(),
            c => c.to_string(),
        })
        .collect()
}

impl Printer {
    fn marks(&self, k: u32) -> String {
        if k == 0 {
            String::new()
        } else if self.opts.unicode {
            "ᵈ".repeat(k as usize)
        } else {
            format!("^{}", "d".repeat(k as usize))
        }
    }

    fn arrow(&self) -> &'static str {
        if self.opts.unicode {
            "→"
        } else {
            "->"
        }
    }

    fn fresh(&self, n: &str) -> String {
        let base = if n.is_empty() || n == "_" { "x" } else { n };
        if !self.names.iter().any(|m| m == base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|c| !self.names.iter().any(|m| m == c))
            .unwrap()
    }

    fn var_name(&self, i: usize) -> String {
        if i < self.names.len() {
            spell(&self.names[self.names.len() - 1 - i], self.opts)
        } else {
            format!("#{}", i - self.names.len())
        }
    }

    fn paren(s: String, needed: bool) -> String {
        if needed {
            format!("({s})")
        } else {
            s
        }
    }

    fn app_like(&mut self, head: String, args: &[Tm], prec: u8) -> String {
        if args.is_empty() {
            return head;
        }
        let mut s = head;
        for a in args {
            s.push(' ');
            s.push_str(&self.go(a, ARG));
        }
        Self::paren(s, prec >= ARG)
    }

    fn prefix(&mut self, op: &str, t: &Tm, prec: u8) -> String {
        let s = format!("{op} {}", self.go(t, ARG));
        Self::paren(s, prec >= ARG)
    }

    fn go(&mut self, t: &Tm, prec: u8) -> String {
        use Term::*;
        let u = self.opts.unicode;
        match &**t {
            Var { idx, disp } => format!("{}{}", self.var_name(*idx), self.marks(*disp)),
            Pi { .. } => {
                let s = self.pi(t);
                Self::paren(s, prec > TOP)
            }
            Lam { .. } => {
                let mut binders = vec![];
                let mut cur = t.clone();
                while let Lam { name, body, .. } = &*cur {
                    let x = self.fresh(name);
                    binders.push(spell(&x, self.opts));
                    self.names.push(x);
                    cur = body.clone();
                }
                let body = self.go(&cur, TOP);
                self.names.truncate(self.names.len() - binders.len());
                let lam = if u { "λ " } else { "\\" };
                Self::paren(
                    format!("{lam}{} {} {body}", binders.join(" "), self.arrow()),
                    prec > TOP,
                )
            }
            App { .. } => {
                let mut args = vec![];
                let mut cur = t.clone();
                while let App { fun, arg, .. } = &*cur {
                    args.push(arg.clone());
                    cur = fun.clone();
                }
                args.reverse();
                let head = self.go(&cur, SPINE);
                self.app_like(head, &args, prec)
            }
            Disc => "Disc".into(),
            Type => "Type".into(),
            El(a) => self.prefix("El", a, prec),
            Code(a) => self.prefix("Code", a, prec),
            TriForm(a) => self.prefix(if u { "△" } else { "Tri" }, a, prec),
            DiaForm(a) => self.prefix(if u { "◇" } else { "Dia" }, a, prec),
            BoxForm(a) => self.prefix(if u { "□" } else { "Box" }, a, prec),
            TriIntro(a) => self.prefix("tri", a, prec),
            DiaIntro(a) => self.prefix("dia", a, prec),
            BoxIntro(a) => self.prefix("box", a, prec),
            BlackSquare { tm, .. } => self.prefix(if u { "■" } else { "unbox" }, tm, prec),
            BlackTriangle { tm, .. } => self.prefix(if u { "▲" } else { "untri" }, tm, prec),
            BlackDiamond { tm, .. } => self.prefix(if u { "◆" } else { "undia" }, tm, prec),
            DispTerm { skel, body, args } if skel.is_empty() => {
                let mut k = 1;
                let mut cur = body.clone();
                while let DispTerm { skel, body, .. } = &*cur {
                    if !skel.is_empty() {
                        break;
                    }
                    k += 1;
                    cur = body.clone();
                }
                let _ = args;
                format!("({}){}", self.go(&cur, TOP), self.marks(k))
            }
            DispTerm { skel, body, args } => {
                let head = self.meta(skel.len(), body);
                self.app_like(head, args, prec)
            }
            DispType {
                skel,
                body,
                args,
                point,
            } => {
                let head = if skel.is_empty() {
                    format!("({}){}", self.go(body, TOP), self.marks(1))
                } else {
                    self.meta(skel.len(), body)
                };
                let mut all = args.clone();
                all.push(point.clone());
                self.app_like(head, &all, prec)
            }
            DCoind { spec, level, args } => {
                let head = format!("{}{}", spell(&spec.name, self.opts), self.marks(*level));
                self.app_like(head, args, prec)
            }
            Head { spec, level, args } => {
                let head = format!(
                    "{}{}",
                    spell(&spec.head_name, self.opts),
                    self.marks(*level)
                );
                let k = point_index(spec, *level).min(args.len());
                self.app_like(head, &args[k..], prec)
            }
            Tail { spec, level, args } => {
                let head = format!(
                    "{}{}",
                    spell(&spec.tail_name, self.opts),
                    self.marks(*level)
                );
                let k = point_index(spec, *level).min(args.len());
                self.app_like(head, &args[k..], prec)
            }
            Corec { prem, level, args } => {
                let head = format!("{}{}", spell(&prem.name, self.opts), self.marks(*level));
                self.app_like(head, args, prec)
            }
            Sub { .. } => self.go(&push_subs(t), prec),
        }
    }

    /// A stuck display of a meta-abstraction over `n` binders.
    fn meta(&mut self, n: usize, body: &Tm) -> String {
        let start = self.names.len();
        for i in 0..n {
            let x = self.fresh(&format!("υ{i}"));
            self.names.push(x);
        }
        let bs: Vec<String> = self.names[start..].to_vec();
        let b = self.go(body, TOP);
        self.names.truncate(start);
        let (l, r) = if self.opts.unicode {
            ("⟪", "⟫")
        } else {
            ("<<", ">>")
        };
        format!("{l}{} . {b}{r}{}", bs.join(" "), self.marks(1))
    }

    fn pi(&mut self, t: &Tm) -> String {
        let Term::Pi { m, name, dom, cod } = &**t else {
            unreachable!()
        };
        let named = !m.is_identity() || occurs(cod, 0);
        if !named {
            let d = self.go(dom, SPINE);
            self.names.push("_".into());
            let c = self.go(cod, TOP);
            self.names.pop();
            return format!("{d} {} {c}", self.arrow());
        }
        let start = self.names.len();
        let mut groups: Vec<(Vec<String>, Modality, String)> = vec![];
        let mut cur = t.clone();
        while let Term::Pi { m, name, dom, cod } = &*cur.clone() {
            if m.is_identity() && !occurs(cod, 0) {
                break;
            }
            let d = self.go(dom, TOP);
            let x = self.fresh(name);
            match groups.last_mut() {
                Some((xs, gm, gd))
                    if *gm == *m && *gd == d && dom_closed_over_group(dom, xs.len()) =>
                {
                    xs.push(x.clone())
                }
                _ => groups.push((vec![x.clone()], *m, d)),
            }
            self.names.push(x);
            cur = cod.clone();
        }
        let _ = (name, dom, m);
        let rest = self.go(&cur, TOP);
        self.names.truncate(start);
        let mut s = String::new();
        for (xs, m, d) in groups {
            let xs: Vec<String> = xs.iter().map(|x| spell(x, self.opts)).collect();
            let colon = if m.is_identity() {
                ":".to_string()
            } else {
                format!(":^{}", print_modality(m, self.opts))
            };
            s.push_str(&format!("({} {colon} {d}) ", xs.join(" ")));
        }
        format!("{s}{} {rest}", self.arrow())
    }
}

/// Whether a binder type can share a group with the previous `k` binders:
/// it must not mention them.
fn dom_closed_over_group(dom: &Tm, k: usize) -> bool {
    (0..k).all(|i| !occurs(dom, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{arrow, el, lam, name, pi, ty, var};
    use Modality::*;

    #[test]
    fn arrows_and_binders() {
        let o = PrintOpts::default();
        let t = pi(IdSm, "X", ty(), arrow(el(var(0)), ty()));
        assert_eq!(print_tm(&[], &t, o), "(X : Type) → El X → Type");
        let t = pi(TriBox, "X", ty(), ty());
        assert_eq!(
            print_tm(&[], &t, PrintOpts { unicode: false }),
            "(X :^TB Type) -> Type"
        );
    }

    #[test]
    fn lambdas_and_names() {
        let t = lam(IdSm, "x", lam(IdSm, "x", var(1)));
        assert_eq!(
            print_tm(&[name("f")], &t, PrintOpts::default()),
            "λ x x1 → x"
        );
    }
}
