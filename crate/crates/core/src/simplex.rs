//! Types of simplices of a generic element of a display coinductive type.
//!
//! Starting from a point `X` of an unparametrised codata type, each tail
//! step at level `k` introduces the entries of `B` displayed `k` times,
//! and the head at the final level introduces the rest of the boundary.
//! Entries are labelled consecutively, which coincides with the Campion
//! ordering of the faces of a simplex.

use std::rc::Rc;

use crate::checker::{Checker, KernelError};
use crate::coinductive::tail_sig;
use crate::mode_theory::Modality;
use crate::subst::{instantiate, shift};
use crate::syntax::{app_m, var, Context, DCoindSpec, Name, Term, Tm};

#[derive(Clone, Debug)]
pub struct BoundaryEntry {
    pub label: u64,
    pub name: Name,
    /// Type of the entry over the context up to and including the
    /// previous entries.
    pub ty: Tm,
}

#[derive(Clone, Debug)]
pub struct SimplexType {
    /// The context the point lives in, followed by the boundary.
    pub ctx: Context,
    pub entries: Vec<BoundaryEntry>,
    /// The type of `n`-simplices over the whole boundary.
    pub simplex: Tm,
}

/// Name for the face with `label` in an `n`-simplex.
pub fn face_name(label: u64, bits: usize, augmented: bool) -> String {
    let digits = format!("{label:0bits$b}");
    let letter = match label.count_ones() {
        0 if augmented => "ʒ",
        0 | 1 => "x",
        2 => "β",
        _ => "𝔣",
    };
    format!("{letter}{digits}")
}

#[allow(clippy::too_many_arguments)]
fn push(
    ctx: &mut Context,
    acc: &mut Vec<Tm>,
    entries: &mut Vec<BoundaryEntry>,
    label: &mut u64,
    bits: usize,
    aug: bool,
    m: Modality,
    ty: Tm,
) {
    let name = face_name(*label, bits, aug);
    *ctx = ctx.with_var(&name, m, ty.clone());
    for t in acc.iter_mut() {
        *t = shift(t, 1);
    }
    acc.push(var(0));
    entries.push(BoundaryEntry {
        label: *label,
        name: name.as_str().into(),
        ty,
    });
    *label += 1;
}

/// Expand the type of `level`-fold simplices of `point : spec` in `ctx`.
/// For augmented types pass `augmented`, which starts labels at zero.
pub fn simplex_type(
    checker: &mut Checker,
    ctx: &Context,
    spec: &Rc<DCoindSpec>,
    point: &Tm,
    n: u32,
    augmented: bool,
) -> Result<SimplexType, KernelError> {
    if !spec.phi.entries.is_empty() {
        return Err(KernelError::Unsupported(format!(
            "{} has parameters",
            spec.name
        )));
    }
    let level = if augmented { n + 1 } else { n };
    let bits = (n + 1) as usize;
    let mut ctx = ctx.clone();
    let mut entries = vec![];
    let mut label: u64 = if augmented { 0 } else { 1 };
    let mut t = point.clone();
    for k in 0..level {
        let ty = checker.infer(&ctx, &t)?;
        let ty = checker.nf(&ty)?;
        let targs = match &*ty {
            Term::DCoind { level: l, args, .. } if *l == k => args.clone(),
            _ => {
                return Err(KernelError::Unsupported(
                    "point is not an element of the codata type".into(),
                ))
            }
        };
        let (ltel, _) = tail_sig(&mut checker.norm, spec, k)?;
        let mut acc = targs;
        acc.push(t.clone());
        while acc.len() < ltel.len() {
            let e = &ltel.entries[acc.len()];
            let ety = checker.nf(&instantiate(&e.ty, &acc, 0))?;
            push(
                &mut ctx,
                &mut acc,
                &mut entries,
                &mut label,
                bits,
                augmented,
                e.m,
                ety,
            );
        }
        t = Rc::new(Term::Tail {
            spec: spec.clone(),
            level: k,
            args: acc,
        });
    }
    let ty = checker.infer(&ctx, &t)?;
    let ty = checker.nf(&ty)?;
    let mut acc = match &*ty {
        Term::DCoind { args, .. } => args.clone(),
        _ => {
            return Err(KernelError::Unsupported(
                "point is not an element of the codata type".into(),
            ))
        }
    };
    acc.push(t);
    let mut head = Rc::new(Term::Head {
        spec: spec.clone(),
        level,
        args: acc,
    });
    let hty = checker.infer(&ctx, &head)?;
    let mut hty = checker.nf(&hty)?;
    while let Term::Pi { m, dom, cod, .. } = &*hty.clone() {
        let mut dummy = vec![];
        push(
            &mut ctx,
            &mut dummy,
            &mut entries,
            &mut label,
            bits,
            augmented,
            *m,
            dom.clone(),
        );
        head = app_m(*m, shift(&head, 1), var(0));
        hty = checker.nf(cod)?;
    }
    Ok(SimplexType {
        ctx,
        entries,
        simplex: head,
    })
}
