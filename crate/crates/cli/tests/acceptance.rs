//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::rc::Rc;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use dtt_core::checker::{Checker, Normalizer, DEFAULT_FUEL};
use dtt_core::coinductive::{corec_sig, skel_b, skel_u};
use dtt_core::delta_plus::{self, campion_order, BinarySeq};
use dtt_core::display::{decal_args, disp_or_fallback, evens, odds, pair, ren, DispEnv};
use dtt_core::mode_theory::{self, is_hazardous, leq_or_false, Modality, Modality::*, Mode};
use dtt_core::printer::{print_tm, PrintOpts};
use dtt_core::simplex::simplex_type;
use dtt_core::subst::{occurs, shift};
use dtt_core::surface::{Elaborator, Global};
use dtt_core::syntax::{
    all_eq, alpha_eq, app, code, dvar, el, lam, pi, ty, var, Context, CorecPremises, Telescope,
    Term, Tm,
};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn dtt(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dtt"))
        .current_dir(root())
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(root().join("golden").join(name)).unwrap()
}

fn load(file: &str) -> Elaborator {
    let src = std::fs::read_to_string(root().join("corpus").join(file)).unwrap();
    let mut el = Elaborator::default();
    el.load(&src)
        .unwrap_or_else(|e| panic!("{}", e.render(file, &src)));
    el
}

fn premises(el: &Elaborator, name: &str) -> Rc<CorecPremises> {
    let Some(Global::Def { value, .. }) = el.global(name) else {
        panic!("{name} is not a definition")
    };
    let mut t = value.clone();
    while let Term::Lam { body, .. } = &*t {
        t = body.clone();
    }
    match &*t {
        Term::Corec { prem, .. } => prem.clone(),
        _ => panic!("{name} is not a corecursor"),
    }
}

struct Report {
    failures: Vec<String>,
}

impl Report {
    fn line(&mut self, n: u32, title: &str, tolerance: &str, result: Result<String, String>) {
        let mut out = std::io::stdout().lock();
        match result {
            Ok(detail) => {
                writeln!(
                    out,
                    "criterion {n:>2} PASS  {title} [tolerance: {tolerance}] {detail}"
                )
                .unwrap();
            }
            Err(why) => {
                writeln!(
                    out,
                    "criterion {n:>2} FAIL  {title} [tolerance: {tolerance}] {why}"
                )
                .unwrap();
                self.failures.push(format!("criterion {n}: {why}"));
            }
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- 1

const MODALITIES: [Modality; 7] = [IdDm, IdSm, Tri, Dia, Box, TriDia, TriBox];

/// The composition tables, transcribed independently of the library.
fn table(nu: Modality, rho: Modality) -> Option<Modality> {
    let dom = |m: Modality| match m {
        IdDm | Tri => Mode::Dm,
        _ => Mode::Sm,
    };
    let cod = |m: Modality| match m {
        IdDm | Dia | Box => Mode::Dm,
        _ => Mode::Sm,
    };
    if dom(nu) != cod(rho) {
        return None;
    }
    Some(match (nu, rho) {
        (IdDm | IdSm, r) => r,
        (n, IdDm | IdSm) => n,
        (Dia | Box, Tri) => IdDm,
        (Dia | Box, TriDia) => Dia,
        (Dia | Box, TriBox) => Box,
        (TriDia | TriBox, Tri) => Tri,
        (TriDia | TriBox, TriDia) => TriDia,
        (TriDia | TriBox, TriBox) => TriBox,
        (Tri, Dia) => TriDia,
        (Tri, Box) => TriBox,
        _ => unreachable!(),
    })
}

fn order(a: Modality, b: Modality) -> bool {
    a == b
        || matches!(
            (a, b),
            (Box, Dia) | (TriBox, IdSm) | (IdSm, TriDia) | (TriBox, TriDia)
        )
}

fn criterion_1() -> Result<String, String> {
    let mut cells = 0;
    for nu in MODALITIES {
        for rho in MODALITIES {
            let lib = mode_theory::compose(nu, rho).ok();
            ensure(lib == table(nu, rho), || {
                format!("{nu} ∘ {rho}: library {lib:?}, table {:?}", table(nu, rho))
            })?;
            if lib.is_some() {
                cells += 1;
            }
            ensure(leq_or_false(nu, rho) == order(nu, rho), || {
                format!("order {nu} ≤ {rho} differs")
            })?;
        }
    }
    for a in MODALITIES {
        for b in MODALITIES {
            for c in MODALITIES {
                if let (Some(bc), Some(ab)) = (table(b, c), table(a, b)) {
                    ensure(table(a, bc) == table(ab, c), || {
                        format!("associativity fails at {a},{b},{c}")
                    })?;
                }
            }
            if let Some(ab) = table(a, b) {
                ensure(table(Modality::id(a.cod()), a) == Some(a), || {
                    format!("left unit fails at {a}")
                })?;
                ensure(table(a, Modality::id(a.dom())) == Some(a), || {
                    format!("right unit fails at {a}")
                })?;
                if is_hazardous(b) {
                    ensure(is_hazardous(ab), || {
                        format!("{a} ∘ {b} should be hazardous")
                    })?;
                }
            }
        }
    }
    // Whiskering: μ ≤ μ' implies ν∘μ ≤ ν∘μ' and μ∘ρ ≤ μ'∘ρ.
    for m1 in MODALITIES {
        for m2 in MODALITIES {
            if !order(m1, m2) {
                continue;
            }
            for x in MODALITIES {
                if let (Some(l), Some(r)) = (table(x, m1), table(x, m2)) {
                    ensure(order(l, r), || {
                        format!("left whiskering fails: {x}∘{m1} ≰ {x}∘{m2}")
                    })?;
                }
                if let (Some(l), Some(r)) = (table(m1, x), table(m2, x)) {
                    ensure(order(l, r), || {
                        format!("right whiskering fails: {m1}∘{x} ≰ {m2}∘{x}")
                    })?;
                }
            }
        }
    }
    let hazards: Vec<_> = MODALITIES
        .into_iter()
        .filter(|m| is_hazardous(*m))
        .collect();
    ensure(hazards == vec![Dia, TriDia], || {
        format!("hazardous set {hazards:?}")
    })?;
    Ok(format!("{cells} composable cells match"))
}

// ---------------------------------------------------------------- 2

fn seq(s: &str) -> BinarySeq {
    BinarySeq::new(s.chars().map(|c| c == '1').collect())
}

fn all_maps(max_n: i64) -> Vec<BinarySeq> {
    (-1..=max_n)
        .flat_map(|n| (-1..=n).flat_map(move |m| delta_plus::faces(n, m)))
        .collect()
}

fn criterion_2() -> Result<String, String> {
    let r = delta_plus::compose(&seq("1010011"), &seq("0110")).map_err(|e| e.to_string())?;
    ensure(r == seq("0010010"), || format!("compose gave {r}"))?;
    let maps = all_maps(6);
    let mut pairs = 0usize;
    for b1 in &maps {
        for b0 in maps.iter().filter(|b0| b1.source() == b0.target()) {
            pairs += 1;
            let c = delta_plus::compose(b1, b0).unwrap();
            ensure(
                c.source() == b0.source() && c.target() == b1.target(),
                || "composite has wrong ends".into(),
            )?;
            let one = delta_plus::compose(&delta_plus::one_prefix(b1), &delta_plus::one_prefix(b0))
                .unwrap();
            ensure(one == delta_plus::one_prefix(&c), || {
                format!("𝟙 functoriality fails at {b1}, {b0}")
            })?;
            let zero = delta_plus::compose(&delta_plus::zero_prefix(b1), b0).unwrap();
            ensure(zero == delta_plus::zero_prefix(&c), || {
                format!("𝟘 rule fails at {b1}, {b0}")
            })?;
        }
        let id_l = delta_plus::compose(&delta_plus::identity(b1.target()), b1).unwrap();
        let id_r = delta_plus::compose(b1, &delta_plus::identity(b1.source())).unwrap();
        ensure(&id_l == b1 && &id_r == b1, || {
            format!("identity law fails at {b1}")
        })?;
        if b1.target() >= 0 {
            let (m, n) = (b1.source(), b1.target());
            let lhs =
                delta_plus::compose(&delta_plus::one_prefix(b1), &delta_plus::rho(m)).unwrap();
            let rhs = delta_plus::compose(&delta_plus::rho(n), b1).unwrap();
            ensure(lhs == delta_plus::zero_prefix(b1) && rhs == lhs, || {
                format!("ρ-naturality fails at {b1}")
            })?;
        }
    }
    // Associativity over triples with n ≤ 4 keeps the count manageable.
    let small = all_maps(4);
    let mut triples = 0usize;
    for c in &small {
        for b in small.iter().filter(|b| c.source() == b.target()) {
            for a in small.iter().filter(|a| b.source() == a.target()) {
                triples += 1;
                let l = delta_plus::compose(&delta_plus::compose(c, b).unwrap(), a).unwrap();
                let r = delta_plus::compose(c, &delta_plus::compose(b, a).unwrap()).unwrap();
                ensure(l == r, || format!("associativity fails at {c},{b},{a}"))?;
            }
        }
    }
    Ok(format!(
        "{} maps, {pairs} composable pairs, {triples} triples",
        maps.len()
    ))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Result<String, String> {
    let cases: [(&str, &[&str]); 4] = [
        (
            "display_pi.out",
            &[
                "normalize",
                "-e",
                "A :^△□ Type, B :^△□ A → Type, f : (a : A) → B a ⊢ ((a : A) → B a)ᵈ f",
            ],
        ),
        (
            "display_pi.ascii.out",
            &[
                "--no-unicode",
                "normalize",
                "-e",
                "A :^TB Type, B :^TB A -> Type, f : (a : A) -> B a |- ((a : A) -> B a)^d f",
            ],
        ),
        (
            "display_universe.out",
            &["normalize", "-e", "A : Type ⊢ Typeᵈ A"],
        ),
        (
            "display_modal_pi.out",
            &[
                "normalize",
                "-e",
                "X :^△□ Type, f : (x :^△□ X) → X ⊢ ((x :^△□ X) → X)ᵈ f",
            ],
        ),
    ];
    for (file, args) in cases {
        let (code, out, err) = dtt(args);
        ensure(code == 0, || format!("{file}: exit {code}: {err}"))?;
        ensure(out == golden(file), || format!("{file}: got {out:?}"))?;
    }
    // Shape checks: the function rule adds a primed argument, the modal rule does not.
    let pi_out = golden("display_pi.out");
    ensure(
        pi_out.trim() == "(a : El A) (a' : El (Aᵈ a)) → El (Bᵈ a a' (f a))",
        || pi_out.clone(),
    )?;
    ensure(
        golden("display_universe.out").trim() == "El A → Type",
        || "universe".into(),
    )?;
    let modal = golden("display_modal_pi.out");
    ensure(!modal.contains('\''), || {
        format!("modal Π produced a primed argument: {modal}")
    })?;
    Ok("4 goldens byte-identical".into())
}

// ---------------------------------------------------------------- 4

#[derive(Clone, Debug)]
enum EntryKind {
    Univ,
    ElA,
    ElOf(usize),
}

#[derive(Clone, Debug)]
struct Plan {
    entries: Vec<(bool, EntryKind, u8)>,
}

fn plan_strategy() -> impl Strategy<Value = Plan> {
    prop::collection::vec((any::<bool>(), 0u8..3, any::<u8>(), any::<u8>()), 0..=4).prop_map(
        |raw| {
            let mut entries = vec![];
            let mut univs: Vec<usize> = vec![];
            for (i, (modal, k, pick, choice)) in raw.into_iter().enumerate() {
                let kind = match k {
                    0 => EntryKind::Univ,
                    1 => EntryKind::ElA,
                    _ if univs.is_empty() => EntryKind::ElA,
                    _ => EntryKind::ElOf(univs[pick as usize % univs.len()]),
                };
                if matches!(kind, EntryKind::Univ) {
                    univs.push(i);
                }
                entries.push((modal, kind, choice));
            }
            Plan { entries }
        },
    )
}

/// `Γ = (A :^△□ Type, a :^△□ El A, b : El A)`.
fn base_ctx() -> Context {
    Context::empty(Mode::Sm)
        .with_var("A", TriBox, ty())
        .with_var("a", TriBox, el(var(0)))
        .with_var("b", IdSm, el(var(1)))
}

fn build(plan: &Plan) -> (Telescope, Vec<Tm>) {
    let mut tel = Telescope::new();
    let mut sigma = vec![];
    for (i, (modal, kind, choice)) in plan.entries.iter().enumerate() {
        let m = if *modal { TriBox } else { IdSm };
        let a_in_tel = var(i + 2);
        let t = match kind {
            EntryKind::Univ => ty(),
            EntryKind::ElA => el(a_in_tel),
            EntryKind::ElOf(j) => el(var(i - 1 - j)),
        };
        tel.push(&format!("t{i}"), m, t);
        let value = match kind {
            EntryKind::Univ => match choice % 3 {
                0 => var(2),
                1 => code(el(var(2))),
                _ => app(lam(IdSm, "x", var(0)), var(2)),
            },
            _ => match (choice % 3, m) {
                (0, IdSm) => var(0),
                (1, _) => app(lam(IdSm, "x", var(0)), var(1)),
                _ => var(1),
            },
        };
        sigma.push(value);
    }
    (tel, sigma)
}

fn criterion_4() -> Result<String, String> {
    let mut runner = TestRunner::new(Config {
        cases: 500,
        failure_persistence: None,
        ..Config::default()
    });
    let ctx = base_ctx();
    let skel_g = vec![TriBox, TriBox, IdSm];
    runner
        .run(&plan_strategy(), |plan| {
            let (tel, sigma) = build(&plan);
            // The kernel has no annotated λ, so redexes are typed through their reducts.
            let mut ck = Checker::default();
            let reduced: Vec<Tm> = sigma.iter().map(|t| ck.nf(t).unwrap()).collect();
            ck.check_psub(&ctx, &reduced, &tel)
                .map_err(|e| TestCaseError::fail(format!("ill-typed sample: {e}")))?;
            let env = DispEnv::over_skeleton(&skel_g);
            let skel = tel.skeleton();
            let sd = decal_args(&env, &skel, &sigma);
            let keyed: Vec<Tm> = sigma.iter().map(|t| ren(&env, t)).collect();
            prop_assert!(all_eq(&evens(&skel, &sd), &keyed), "evens(σ^D) ≢ σ[🔑]");
            prop_assert!(
                all_eq(&pair(&skel, &evens(&skel, &sd), &odds(&skel, &sd)), &sd),
                "pair(evens, odds) ≢ id"
            );
            let back = pair(&skel, &keyed, &odds(&skel, &sd));
            prop_assert!(
                all_eq(&evens(&skel, &back), &keyed)
                    && all_eq(&odds(&skel, &back), &odds(&skel, &sd))
            );
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("500 samples".into())
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Result<String, String> {
    let mut rules = 0;
    for (file, name) in [
        ("fib.dtt", "Fib"),
        ("fibprime.dtt", "Fib′"),
        ("int.dtt", "Int"),
        ("hom.dtt", "idhom"),
    ] {
        let el = load(file);
        let prem = premises(&el, name);
        let spec = prem.spec.clone();
        let mut norm = Normalizer::new(DEFAULT_FUEL);
        // Depth 0: the defining equations.
        let uy = prem.upsilon.len();
        let q = spec.tail_params.len();
        let ids: Vec<Tm> = (0..uy).map(|i| var(uy - 1 - i)).collect();
        let point = Rc::new(Term::Corec {
            prem: prem.clone(),
            level: 0,
            args: ids.clone(),
        });
        let mut hargs = prem.zeta.clone();
        hargs.push(point.clone());
        let head = Rc::new(Term::Head {
            spec: spec.clone(),
            level: 0,
            args: hargs,
        });
        let got = norm.nf(&head).map_err(|e| e.to_string())?;
        ensure(alpha_eq(&got, &norm.nf(&prem.h).unwrap()), || {
            format!("{name}: head rule does not fire")
        })?;
        let mut targs: Vec<Tm> = prem.zeta.iter().map(|t| shift(t, q)).collect();
        targs.push(shift(&point, q));
        targs.extend((0..q).map(|j| var(q - 1 - j)));
        let tail = Rc::new(Term::Tail {
            spec: spec.clone(),
            level: 0,
            args: targs,
        });
        let got = norm.nf(&tail).map_err(|e| e.to_string())?;
        let ups_b: Vec<Tm> = (0..uy).map(|i| var(uy + q - 1 - i)).collect();
        let want = Rc::new(Term::Corec {
            prem: prem.clone(),
            level: 1,
            args: pair(&prem.upsilon.skeleton(), &ups_b, &prem.tau),
        });
        let want = norm.nf(&want).unwrap();
        ensure(alpha_eq(&got, &want), || {
            format!("{name}: tail rule does not fire")
        })?;
        rules += 2;
        // Depths 0..=2: displaying a redex and then normalizing agrees with
        // displaying its reduct.
        for n in 0..=2u32 {
            let (_, cty) = corec_sig(&mut norm, &prem, n).map_err(|e| e.to_string())?;
            let su = skel_u(&prem, n);
            let len = su.len();
            let targs0 = match &*cty {
                Term::DCoind { args, .. } => args.clone(),
                _ => {
                    return Err(format!(
                        "{name}: corecursor type at level {n} is not codata"
                    ))
                }
            };
            let pt = Rc::new(Term::Corec {
                prem: prem.clone(),
                level: n,
                args: (0..len).map(|i| var(len - 1 - i)).collect(),
            });
            let mut hargs = targs0.clone();
            hargs.push(pt.clone());
            let head = Rc::new(Term::Head {
                spec: spec.clone(),
                level: n,
                args: hargs,
            });
            let env = DispEnv::over_skeleton(&su);
            let lhs = norm
                .nf(&disp_or_fallback(&env, &head))
                .map_err(|e| e.to_string())?;
            let red = norm.nf(&head).map_err(|e| e.to_string())?;
            let rhs = norm
                .nf(&disp_or_fallback(&env, &red))
                .map_err(|e| e.to_string())?;
            ensure(alpha_eq(&lhs, &rhs), || {
                format!("{name}: head rule at depth {} differs", n + 1)
            })?;

            let sb = skel_b(&spec, n);
            let nb = sb.len();
            let mut targs: Vec<Tm> = targs0.iter().map(|t| shift(t, nb)).collect();
            targs.push(shift(&pt, nb));
            targs.extend((0..nb).map(|j| var(nb - 1 - j)));
            let tail = Rc::new(Term::Tail {
                spec: spec.clone(),
                level: n,
                args: targs,
            });
            let mut sk = su.clone();
            sk.extend(sb);
            let env = DispEnv::over_skeleton(&sk);
            let lhs = norm
                .nf(&disp_or_fallback(&env, &tail))
                .map_err(|e| e.to_string())?;
            let red = norm.nf(&tail).map_err(|e| e.to_string())?;
            let rhs = norm
                .nf(&disp_or_fallback(&env, &red))
                .map_err(|e| e.to_string())?;
            ensure(alpha_eq(&lhs, &rhs), || {
                format!("{name}: tail rule at depth {} differs", n + 1)
            })?;
            rules += 2;
        }
    }
    Ok(format!("{rules} rule instances"))
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Result<String, String> {
    let runs = [
        (
            "fib_chain_0.out",
            "X :^△□ Type, ʒ00 : X ⊢ Fib X ʒ00",
            "0",
            "Xᵈ ʒ00",
        ),
        (
            "fib_chain_1.out",
            "X :^△□ Type, ʒ00 : X ⊢ Fib X ʒ00",
            "1",
            "Xᵈᵈ ʒ00 x01 x10",
        ),
        (
            "fib_chain_2.out",
            "X :^△□ Type, ʒ000 : X ⊢ Fib X ʒ000",
            "2",
            "Xᵈᵈᵈ ʒ000 x001 x010 β011 x100 β101 β110",
        ),
    ];
    for (file, term, n, last) in runs {
        let (code, out, err) = dtt(&[
            "simplices",
            "corpus/fib.dtt",
            "-t",
            term,
            "-n",
            n,
            "--trace",
        ]);
        ensure(code == 0, || format!("{file}: exit {code}: {err}"))?;
        ensure(out == golden(file), || format!("{file}: got {out:?}"))?;
        let final_line = out.lines().last().unwrap_or("");
        ensure(final_line.trim_start_matches("  ≡ ") == last, || {
            format!("{file}: ends in {final_line}")
        })?;
    }
    // Expected intermediate steps.
    let two = golden("fib_chain_2.out");
    for step in [
        "Zᵈᵈ (Sᵈ (S (Fib X ʒ000) x001) x010 β011) x100 β101 β110",
        "Zᵈᵈ (Sᵈ (Fibᵈ X ʒ000 x001) x010 β011) x100 β101 β110",
        "Zᵈᵈ (Fibᵈᵈ X ʒ000 x001 x010 β011) x100 β101 β110",
    ] {
        ensure(two.contains(step), || format!("missing step {step}"))?;
    }
    let one = golden("fib_chain_1.out");
    ensure(one.contains("Zᵈ (Fibᵈ X ʒ00 x01) x10"), || {
        "missing depth-1 step".into()
    })?;
    Ok("3 chains byte-identical".into())
}

// ---------------------------------------------------------------- 7

/// Labels of the proper non-empty faces of `label`, via the simplex category.
fn sub_faces(label: &BinarySeq) -> BTreeSet<u64> {
    let d = label.source();
    (0..d)
        .flat_map(|m| delta_plus::faces(d, m))
        .map(|f| delta_plus::compose(label, &f).unwrap().label())
        .collect()
}

fn criterion_7() -> Result<String, String> {
    let el = load("sst.dtt");
    let spec = el.spec("SST").unwrap();
    let opts = PrintOpts::default();
    for n in 0..=3u32 {
        let mut ck = Checker::default();
        let ctx = Context::empty(Mode::Sm).with_var(
            "A",
            IdSm,
            Rc::new(Term::DCoind {
                spec: spec.clone(),
                level: 0,
                args: vec![],
            }),
        );
        let st =
            simplex_type(&mut ck, &ctx, &spec, &var(0), n, false).map_err(|e| e.to_string())?;
        let expected = (1u64 << (n + 1)) - 2;
        ensure(st.entries.len() as u64 == expected, || {
            format!("n={n}: {} entries", st.entries.len())
        })?;
        let order: Vec<u64> = campion_order(n as i64)
            .iter()
            .map(|l| l.label.label())
            .collect();
        let labels: Vec<u64> = st.entries.iter().map(|e| e.label).collect();
        ensure(labels[..] == order[..order.len() - 1], || {
            format!("n={n}: labels {labels:?}")
        })?;
        for (i, e) in st.entries.iter().enumerate() {
            let mentioned: BTreeSet<u64> = (0..i)
                .filter(|j| occurs(&e.ty, *j))
                .map(|j| st.entries[i - 1 - j].label)
                .collect();
            let faces = sub_faces(&BinarySeq::from_label(e.label, n as i64));
            ensure(mentioned == faces, || {
                format!("n={n}: {} mentions {mentioned:?}, faces {faces:?}", e.name)
            })?;
        }
        let names = st.ctx.names();
        let body = match &*st.simplex {
            Term::El(c) => c.clone(),
            _ => st.simplex.clone(),
        };
        let printed = print_tm(&names, &body, opts);
        if n == 2 {
            ensure(
                printed == "Zᵈᵈ (Sᵈ (S A x001) x010 β011) x100 β101 β110",
                || format!("A₂ printed as {printed}"),
            )?;
        }
        if n == 3 {
            let listed: Vec<String> = st.entries.iter().map(|e| e.name.to_string()).collect();
            let want = "x0001 x0010 β0011 x0100 β0101 β0110 𝔣0111 x1000 β1001 β1010 𝔣1011 β1100 𝔣1101 𝔣1110";
            ensure(listed.join(" ") == want, || {
                format!("A₃ arguments {listed:?}")
            })?;
            let a2_faces = [
                "(𝔣0111 : Zᵈᵈ (Sᵈ (S A x0001) x0010 β0011) x0100 β0101 β0110)",
                "(𝔣1110 : Zᵈᵈ (Sᵈ (S A x0010) x0100 β0110) x1000 β1010 β1100)",
            ];
            let out = golden("simplices_sst_3.out");
            for f in a2_faces {
                ensure(out.contains(f), || format!("missing {f}"))?;
            }
        }
    }
    for (file, args) in [
        (
            "simplices_sst_2.out",
            vec!["simplices", "corpus/sst.dtt", "-t", "A", "-n", "2"],
        ),
        (
            "simplices_sst_3.out",
            vec!["simplices", "corpus/sst.dtt", "-t", "A", "-n", "3"],
        ),
        (
            "simplices_sst_2.ascii.out",
            vec![
                "--no-unicode",
                "simplices",
                "corpus/sst.dtt",
                "-t",
                "A",
                "-n",
                "2",
            ],
        ),
        (
            "simplices_asst_1.out",
            vec![
                "simplices",
                "corpus/asst.dtt",
                "-t",
                "X",
                "-n",
                "1",
                "--asst",
            ],
        ),
    ] {
        let (code, out, err) = dtt(&args);
        ensure(code == 0 && out == golden(file), || {
            format!("{file}: exit {code} {err} {out:?}")
        })?;
    }
    Ok("n ≤ 3 boundaries agree with the face oracle".into())
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Result<String, String> {
    let positive = ["sst", "asst", "int", "fib", "fibprime", "pt", "hom"];
    for p in positive {
        let path = format!("corpus/{p}.dtt");
        let (code, _, err) = dtt(&["check", &path]);
        ensure(code == 0, || format!("{path}: exit {code}: {err}"))?;
    }
    let negative = [
        ("nonflat", "not-flat"),
        ("hazard", "modality-violation"),
        ("sidecond", "side-condition-failed"),
        ("copattern", "schema-violation"),
    ];
    for (f, want) in negative {
        let path = format!("corpus/neg/{f}.dtt");
        let (code, _, err) = dtt(&["--json", "check", &path]);
        ensure(code == 1, || format!("{path}: exit {code}"))?;
        ensure(err.contains(&format!("\"code\":\"{want}\"")), || {
            format!("{path}: {err}")
        })?;
        ensure(err == golden(&format!("neg_{f}.json")), || {
            format!("{path}: diagnostics changed: {err}")
        })?;
    }
    let (_, out, _) = dtt(&[
        "check",
        "corpus/asst.dtt",
        "corpus/fib.dtt",
        "corpus/fibprime.dtt",
        "corpus/hom.dtt",
        "corpus/int.dtt",
        "corpus/pt.dtt",
        "corpus/sst.dtt",
    ]);
    ensure(out == golden("check_corpus.out"), || {
        "check output changed".into()
    })?;
    Ok("7 positive, 4 negative".into())
}

// ---------------------------------------------------------------- 9

fn criterion_9() -> Result<String, String> {
    let flat = dtt(&["normalize", "-e", "y :^△ ◇ Type ⊢ tri (dia (◆ y))"]);
    ensure(flat.0 == 0, || format!("flat use rejected: {}", flat.2))?;
    let nonflat = dtt(&["normalize", "-e", "y :^△ ◇ Type ⊢ ◆ y"]);
    ensure(
        nonflat.0 == 1 && nonflat.2.contains("error[not-flat]"),
        || format!("non-flat: {}", nonflat.2),
    )?;
    // The same check straight through the kernel.
    let dia_ty = Rc::new(Term::DiaForm(ty()));
    let base = Context::empty(Mode::Sm).with_var("y", Tri, dia_ty);
    let term = Rc::new(Term::BlackDiamond {
        ty: ty(),
        tm: var(0),
    });
    let mut ck = Checker::default();
    let flat_ctx = base.lock(Tri).lock(Dia);
    ensure(ck.infer(&flat_ctx, &term).is_ok(), || {
        "kernel rejects the flat use".into()
    })?;
    match ck.infer(&base, &term) {
        Err(e) if e.code() == "not-flat" => {
            Ok("flat accepted, non-flat rejected with not-flat".into())
        }
        other => Err(format!("kernel on non-flat context: {other:?}")),
    }
}

// ---------------------------------------------------------------- 10

/// `Γ = (A :^△□ Type, a :^△□ El A, f :^△□ El A → El A, b : El A)`.
fn rich_ctx() -> Context {
    Context::empty(Mode::Sm)
        .with_var("A", TriBox, ty())
        .with_var("a", TriBox, el(var(0)))
        .with_var("f", TriBox, pi(IdSm, "_", el(var(1)), el(var(2))))
        .with_var("b", IdSm, el(var(2)))
}

/// Terms of type `El A` (`want_type = false`) or `Type` over `rich_ctx`
/// extended by `extra` variables of type `El A`.
fn gen_term(want_type: bool, depth: u32, extra: usize) -> BoxedStrategy<Tm> {
    let a = var(3 + extra);
    if want_type {
        let leaf = Just(a.clone()).boxed();
        if depth == 0 {
            return leaf;
        }
        let a2 = a.clone();
        prop_oneof![
            leaf,
            gen_term(true, depth - 1, extra).prop_map(|c| code(el(c))),
            gen_term(false, depth - 1, extra).prop_map(move |t| app(dvar(3 + extra, 1), t)),
            (
                gen_term(true, depth - 1, extra + 1),
                gen_term(false, depth - 1, extra)
            )
                .prop_map(|(b, t)| app(lam(IdSm, "x", b), t)),
            Just(code(pi(IdSm, "_", el(a2.clone()), el(shift(&a2, 1))))),
        ]
        .boxed()
    } else {
        let vars = vec![var(2 + extra), var(extra)];
        let mut leaves: Vec<Tm> = vars;
        leaves.extend((0..extra).map(var));
        let leaf = prop::sample::select(leaves).boxed();
        if depth == 0 {
            return leaf;
        }
        let fvar = var(1 + extra);
        prop_oneof![
            leaf,
            gen_term(false, depth - 1, extra).prop_map(move |t| app(fvar.clone(), t)),
            (
                gen_term(false, depth - 1, extra + 1),
                gen_term(false, depth - 1, extra)
            )
                .prop_map(|(b, t)| app(lam(IdSm, "x", b), t)),
        ]
        .boxed()
    }
}

fn criterion_10() -> Result<String, String> {
    let ctx = rich_ctx();
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let strat = (any::<bool>(), 0u32..=6).prop_flat_map(|(t, d)| (Just(t), gen_term(t, d, 0)));
    runner
        .run(&strat, |(is_type, t)| {
            // Samples are typed by construction; redexes have no inferable type.
            let mut ck = Checker::default();
            let ty0 = if is_type { ty() } else { el(var(3)) };
            let mut n1 = Normalizer::new(DEFAULT_FUEL);
            let mut n2 = Normalizer::new(DEFAULT_FUEL);
            let v = n1.nf(&t).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let again = n1.nf(&v).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let other = n2.nf(&t).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(alpha_eq(&v, &again), "not idempotent");
            prop_assert!(alpha_eq(&v, &other), "not deterministic");
            let ty1 = ck
                .infer(&ctx, &v)
                .map_err(|e| TestCaseError::fail(format!("normal form ill-typed: {e}")))?;
            prop_assert!(ck.conv(&ty0, &ty1).unwrap_or(false), "type not preserved");
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let mut peak = 0;
    for f in ["sst", "asst", "int", "fib", "fibprime", "pt", "hom"] {
        let el = load(&format!("{f}.dtt"));
        peak = peak.max(el.checker.norm.used());
    }
    ensure(peak < DEFAULT_FUEL, || {
        "fuel exhausted on the corpus".into()
    })?;
    Ok(format!(
        "1000 samples; corpus fuel peak {peak} of {DEFAULT_FUEL}, 0 exhaustions"
    ))
}

#[test]
fn acceptance() {
    let mut r = Report { failures: vec![] };
    r.line(1, "mode theory tables and laws", "exact", criterion_1());
    r.line(2, "Δ⁺ oracle", "exact", criterion_2());
    r.line(3, "display goldens", "byte-identical", criterion_3());
    r.line(
        4,
        "décalage and pairing",
        "alpha-equivalence",
        criterion_4(),
    );
    r.line(5, "corecursor rules", "alpha-equivalence", criterion_5());
    r.line(6, "Fib derivation chains", "byte-identical", criterion_6());
    r.line(7, "simplex types", "exact", criterion_7());
    r.line(
        8,
        "corpus",
        "exact exit codes and error codes",
        criterion_8(),
    );
    r.line(
        9,
        "exceptional-rule pair",
        "exact error code",
        criterion_9(),
    );
    r.line(
        10,
        "normalizer robustness",
        "alpha-equivalence",
        criterion_10(),
    );
    assert!(r.failures.is_empty(), "{:#?}", r.failures);
}
