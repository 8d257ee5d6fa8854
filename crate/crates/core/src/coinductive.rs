//! Display coinductive types and their corecursors at every display level.
//!
//! Level `n` signatures are obtained from level `n-1` by décalage and
//! display, and are closed. Head and tail redexes on a corecursor at level
//! `n` compute to the `n`-fold displays of its premises.

use std::rc::Rc;

use crate::checker::{KernelError, Normalizer};
use crate::display::{
    decal_args, decal_skel_n, decalage_tel, disp_or_fallback, disp_ty_or_fallback, odds, pair,
    DispEnv,
};
use crate::mode_theory::Modality;
use crate::subst::{instantiate, shift};
use crate::syntax::{all_eq, var, CorecPremises, DCoindSpec, Telescope, Term, Tm};

/// Skeleton of `H_n = (Φ, x)^{D^n}`, the arguments of `head` at level `n`.
pub fn skel_h(spec: &DCoindSpec, n: u32) -> Vec<Modality> {
    let mut s = spec.phi.skeleton();
    s.push(Modality::IdSm);
    decal_skel_n(&s, n)
}

/// Skeleton of the parameters `T_n` of the level-`n` coinductive type.
pub fn skel_t(spec: &DCoindSpec, n: u32) -> Vec<Modality> {
    let mut s = skel_h(spec, n);
    s.pop();
    s
}

pub fn skel_b(spec: &DCoindSpec, n: u32) -> Vec<Modality> {
    decal_skel_n(&spec.tail_params.skeleton(), n)
}

/// Skeleton of `L_n`, the arguments of `tail` at level `n`.
pub fn skel_l(spec: &DCoindSpec, n: u32) -> Vec<Modality> {
    let mut s = skel_h(spec, n);
    s.extend(skel_b(spec, n));
    s
}

pub fn skel_u(prem: &CorecPremises, n: u32) -> Vec<Modality> {
    decal_skel_n(&prem.upsilon.skeleton(), n)
}

/// Index of the point among the arguments of `head`/`tail` at level `n`.
pub fn point_index(spec: &DCoindSpec, n: u32) -> usize {
    skel_h(spec, n).len() - 1
}

fn nf_tel(norm: &mut Normalizer, tel: Telescope) -> Result<Telescope, KernelError> {
    let mut out = Telescope::new();
    for e in tel.entries {
        let ty = norm.nf(&e.ty)?;
        out.push(&e.name, e.m, ty);
    }
    Ok(out)
}

fn phi_vars(spec: &DCoindSpec, ctx_len: usize) -> Vec<Tm> {
    let p = spec.phi.len();
    (0..p).map(|i| var(ctx_len - 1 - i)).collect()
}

/// `(H_n, A_n)`: the argument telescope and result type of `head` at level `n`.
pub fn head_sig(
    norm: &mut Normalizer,
    spec: &Rc<DCoindSpec>,
    n: u32,
) -> Result<(Telescope, Tm), KernelError> {
    let p = spec.phi.len();
    let mut h = spec.phi.clone();
    let point_ty = Rc::new(Term::DCoind {
        spec: spec.clone(),
        level: 0,
        args: phi_vars(spec, p),
    });
    h.push("x", Modality::IdSm, point_ty);
    let mut a = shift(&spec.head_ty, 1);
    for k in 0..n {
        let env = DispEnv::over_skeleton(&h.skeleton());
        let point = Rc::new(Term::Head {
            spec: spec.clone(),
            level: k,
            args: env.ev_args(),
        });
        a = norm.nf(&disp_ty_or_fallback(&env, &a, point))?;
        h = nf_tel(norm, decalage_tel(&h))?;
    }
    Ok((h, a))
}

/// `T_n`: parameters of the level-`n` coinductive type.
pub fn dcoind_tel(
    norm: &mut Normalizer,
    spec: &Rc<DCoindSpec>,
    n: u32,
) -> Result<Telescope, KernelError> {
    let mut h = spec.phi.clone();
    let p = h.len();
    h.push(
        "x",
        Modality::IdSm,
        Rc::new(Term::DCoind {
            spec: spec.clone(),
            level: 0,
            args: phi_vars(spec, p),
        }),
    );
    for _ in 0..n {
        h = nf_tel(norm, decalage_tel(&h))?;
    }
    h.entries.pop();
    Ok(h)
}

/// `B` instantiated at parameters and a head value living in the ambient
/// context; the result is a telescope over that context.
pub fn tail_params_at(spec: &DCoindSpec, phi: &[Tm], head: &Tm) -> Telescope {
    let mut out = Telescope::new();
    for (k, e) in spec.tail_params.entries.iter().enumerate() {
        let mut args: Vec<Tm> = phi.iter().map(|t| shift(t, k)).collect();
        args.push(shift(head, k));
        args.extend((0..k).map(|j| var(k - 1 - j)));
        out.push(&e.name, e.m, instantiate(&e.ty, &args, k));
    }
    out
}

/// `σ(φ, a, b)` for arguments in the ambient context.
pub fn sigma_at(spec: &DCoindSpec, phi: &[Tm], head: &Tm, b: &[Tm]) -> Vec<Tm> {
    let mut args = phi.to_vec();
    args.push(head.clone());
    args.extend(b.iter().cloned());
    spec.sigma
        .iter()
        .map(|s| instantiate(s, &args, 0))
        .collect()
}

/// `(L_n, C_n)`: the argument telescope and result type of `tail` at level `n`.
pub fn tail_sig(
    norm: &mut Normalizer,
    spec: &Rc<DCoindSpec>,
    n: u32,
) -> Result<(Telescope, Tm), KernelError> {
    let p = spec.phi.len();
    let q = spec.tail_params.len();
    let mut l = spec.phi.clone();
    l.push(
        "x",
        Modality::IdSm,
        Rc::new(Term::DCoind {
            spec: spec.clone(),
            level: 0,
            args: phi_vars(spec, p),
        }),
    );
    let phi_in_x: Vec<Tm> = (0..p).map(|i| var(p - i)).collect();
    let head = Rc::new(Term::Head {
        spec: spec.clone(),
        level: 0,
        args: {
            let mut a = phi_in_x.clone();
            a.push(var(0));
            a
        },
    });
    let b = tail_params_at(spec, &phi_in_x, &head);
    l.entries.extend(b.entries);
    let phi_l: Vec<Tm> = phi_in_x.iter().map(|t| shift(t, q)).collect();
    let head_l = shift(&head, q);
    let bvars: Vec<Tm> = (0..q).map(|j| var(q - 1 - j)).collect();
    let sigma = sigma_at(spec, &phi_l, &head_l, &bvars);
    let mut args = pair(&spec.phi.skeleton(), &phi_l, &sigma);
    args.push(var(q));
    let mut c = Rc::new(Term::DCoind {
        spec: spec.clone(),
        level: 1,
        args,
    });
    c = norm.nf(&c)?;
    for k in 0..n {
        let env = DispEnv::over_skeleton(&l.skeleton());
        let point = Rc::new(Term::Tail {
            spec: spec.clone(),
            level: k,
            args: env.ev_args(),
        });
        c = norm.nf(&disp_ty_or_fallback(&env, &c, point))?;
        l = nf_tel(norm, decalage_tel(&l))?;
    }
    Ok((l, c))
}

/// `(Υ^{D^n}, type_n)` for a corecursor at level `n`.
pub fn corec_sig(
    norm: &mut Normalizer,
    prem: &Rc<CorecPremises>,
    n: u32,
) -> Result<(Telescope, Tm), KernelError> {
    let mut u = prem.upsilon.clone();
    let mut t = Rc::new(Term::DCoind {
        spec: prem.spec.clone(),
        level: 0,
        args: prem.zeta.clone(),
    });
    for k in 0..n {
        let env = DispEnv::over_skeleton(&u.skeleton());
        let point = Rc::new(Term::Corec {
            prem: prem.clone(),
            level: k,
            args: env.ev_args(),
        });
        t = norm.nf(&disp_ty_or_fallback(&env, &t, point))?;
        u = nf_tel(norm, decalage_tel(&u))?;
    }
    Ok((u, t))
}

/// `h^{(n)}`, a term over `Υ^{D^n}`.
pub fn head_value(norm: &mut Normalizer, prem: &CorecPremises, n: u32) -> Result<Tm, KernelError> {
    let mut h = prem.h.clone();
    for k in 0..n {
        let env = DispEnv::over_skeleton(&skel_u(prem, k));
        h = norm.nf(&disp_or_fallback(&env, &h))?;
    }
    Ok(h)
}

/// `P_n`, the new state after a tail step at level `n`: an element of
/// `Υ^{D^{n+1}}` over `(Υ | B)^{D^n}`.
pub fn tail_state(
    norm: &mut Normalizer,
    prem: &CorecPremises,
    n: u32,
) -> Result<Vec<Tm>, KernelError> {
    let uy = prem.upsilon.len();
    let q = prem.spec.tail_params.len();
    let ups: Vec<Tm> = (0..uy).map(|i| var(uy + q - 1 - i)).collect();
    let mut p = pair(&prem.upsilon.skeleton(), &ups, &prem.tau);
    let mut src = prem.upsilon.skeleton();
    src.extend(prem.spec.tail_params.skeleton());
    for k in 0..n {
        let env = DispEnv::over_skeleton(&decal_skel_n(&src, k));
        p = decal_args(&env, &skel_u(prem, k + 1), &p);
        p = p.iter().map(|t| norm.nf(t)).collect::<Result<_, _>>()?;
    }
    Ok(p)
}

/// The corecursor side condition `ζ^d ⦅υ, τ⦆ ≡ σ(ζ, h, b)` over `(Υ, B)`.
pub fn side_condition(norm: &mut Normalizer, prem: &CorecPremises) -> Result<(), KernelError> {
    let spec = &prem.spec;
    let q = spec.tail_params.len();
    let env = DispEnv::over_skeleton(&prem.upsilon.skeleton());
    let zeta_d = decal_args(&env, &spec.phi.skeleton(), &prem.zeta);
    let p0 = tail_state(norm, prem, 0)?;
    let lhs: Vec<Tm> = zeta_d
        .iter()
        .map(|t| norm.nf(&instantiate(t, &p0, 0)))
        .collect::<Result<_, _>>()?;
    let lhs = odds(&spec.phi.skeleton(), &lhs);
    let zeta_b: Vec<Tm> = prem.zeta.iter().map(|t| shift(t, q)).collect();
    let bvars: Vec<Tm> = (0..q).map(|j| var(q - 1 - j)).collect();
    let rhs: Vec<Tm> = sigma_at(spec, &zeta_b, &shift(&prem.h, q), &bvars)
        .iter()
        .map(|t| norm.nf(t))
        .collect::<Result<_, _>>()?;
    if all_eq(&lhs, &rhs) {
        Ok(())
    } else {
        Err(KernelError::SideConditionFailed(prem.name.to_string()))
    }
}
