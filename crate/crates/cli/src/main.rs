use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use dtt_core::checker::{Checker, DEFAULT_FUEL};
use dtt_core::delta_plus::{campion_order, compose, BinarySeq};
use dtt_core::printer::{print_tm, spell, PrintOpts};
use dtt_core::simplex::simplex_type;
use dtt_core::surface::{ElabError, Elaborator, Span};
use dtt_core::syntax::{Name, Term, Tm};

#[derive(Parser)]
#[command(name = "dtt", version, about = "Checker for displayed type theory")]
struct Cli {
    /// Normalizer step budget per declaration or query.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Emit diagnostics as line-delimited JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Print with ASCII spellings only.
    #[arg(long, global = true)]
    no_unicode: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Elaborate and check source files.
    Check {
        #[arg(required = true)]
        files: Vec<String>,
    },
    /// Print the normal form of an expression, optionally with a context `Γ ⊢ e`.
    Normalize {
        file: Option<String>,
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Print the boundary and type of the n-simplices of a term.
    Simplices {
        file: String,
        #[arg(short = 't', long = "term")]
        term: String,
        #[arg(short = 'n')]
        n: u32,
        /// Treat the codata type as augmented, labelling from zero.
        #[arg(long)]
        asst: bool,
        /// Also print each reduction step of the simplex type.
        #[arg(long)]
        trace: bool,
    },
    /// Queries on the augmented semi-simplex category.
    Delta {
        #[command(subcommand)]
        q: DeltaCmd,
    },
}

#[derive(Subcommand)]
enum DeltaCmd {
    /// Compose two 0/1 sequences, `b1 ∘ b0`.
    Compose { b1: String, b0: String },
    /// List the faces of an n-simplex in Campion order.
    Order { n: i64 },
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    path: &'a str,
    span: [usize; 2],
    line: usize,
    col: usize,
    code: &'a str,
    message: &'a str,
}

struct Ctx {
    fuel: u64,
    json: bool,
    opts: PrintOpts,
}

enum Failure {
    Check,
    Usage,
    Fuel,
}

impl Failure {
    fn code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Check => 1,
            Failure::Usage => 2,
            Failure::Fuel => 3,
        })
    }
}

impl Ctx {
    fn elaborator(&self) -> Elaborator {
        let mut c = Checker::new(self.fuel);
        c.opts = self.opts;
        Elaborator::new(c)
    }

    fn report(&self, path: &str, src: &str, e: &ElabError) -> Failure {
        if self.json {
            let (line, col) = e.span.line_col(src);
            let d = Diagnostic {
                path,
                span: [e.span.start, e.span.end],
                line,
                col,
                code: e.code,
                message: &e.message,
            };
            eprintln!(
                "{}",
                serde_json::to_string(&d).expect("diagnostic serializes")
            );
        } else {
            eprintln!("{}", e.render(path, src));
        }
        match e.code {
            "fuel-exhausted" => Failure::Fuel,
            "parse-error" => Failure::Usage,
            _ => Failure::Check,
        }
    }

    fn usage(&self, msg: &str) -> Failure {
        eprintln!("error: {msg}");
        Failure::Usage
    }

    fn read(&self, path: &str) -> Result<String, Failure> {
        fs::read_to_string(path).map_err(|e| self.usage(&format!("cannot read {path}: {e}")))
    }

    fn load(&self, path: &str) -> Result<(Elaborator, String), Failure> {
        let src = self.read(path)?;
        let mut el = self.elaborator();
        el.load(&src).map_err(|e| self.report(path, &src, &e))?;
        Ok((el, src))
    }

    fn show(&self, names: &[Name], t: &Tm) -> String {
        print_tm(names, t, self.opts)
    }
}

fn check(cx: &Ctx, files: &[String]) -> Result<(), Failure> {
    let mut worst: Option<Failure> = None;
    for f in files {
        match cx.load(f) {
            Ok((el, _)) => {
                for c in &el.checked {
                    println!("{f}: {} {} : {}", c.kind, c.name, c.ty);
                }
                println!("{f}: ok");
            }
            Err(e) => {
                worst = Some(match (worst, e) {
                    (Some(Failure::Usage), _) | (_, Failure::Usage) => Failure::Usage,
                    (Some(Failure::Fuel), _) | (_, Failure::Fuel) => Failure::Fuel,
                    _ => Failure::Check,
                })
            }
        }
    }
    worst.map_or(Ok(()), Err)
}

fn normalize(cx: &Ctx, file: Option<&str>, expr: &str) -> Result<(), Failure> {
    let mut el = match file {
        Some(f) => cx.load(f)?.0,
        None => cx.elaborator(),
    };
    el.checker.reset_fuel();
    let (ctx, t, ty) = el
        .judgement(expr)
        .map_err(|e| cx.report("<expr>", expr, &e))?;
    let span = Span::new(0, expr.len());
    let wrap = |e| cx.report("<expr>", expr, &ElabError::kernel(span, e));
    let names = ctx.names();
    let nt = el.checker.nf(&t).map_err(wrap)?;
    match ty {
        Some(ty) => {
            let nty = el.checker.nf(&ty).map_err(wrap)?;
            println!("{} : {}", cx.show(&names, &nt), cx.show(&names, &nty));
        }
        None => println!("{}", cx.show(&names, &nt)),
    }
    Ok(())
}

fn strip_el(t: &Tm) -> Tm {
    match &**t {
        Term::El(a) => a.clone(),
        _ => t.clone(),
    }
}

fn simplices(
    cx: &Ctx,
    file: &str,
    term: &str,
    n: u32,
    asst: bool,
    trace: bool,
) -> Result<(), Failure> {
    let (mut el, _) = cx.load(file)?;
    let spec = {
        let mut specs: Vec<_> = ["SST", "ASST"].iter().filter_map(|s| el.spec(s)).collect();
        if asst {
            specs.retain(|s| &*s.name == "ASST");
        }
        specs.into_iter().next().ok_or_else(|| {
            cx.usage(&format!(
                "{file} defines no {} type",
                if asst { "ASST" } else { "SST" }
            ))
        })?
    };
    // Unbound names in the term become generic points.
    let mut points: Vec<String> = vec![];
    let (ctx, t, ty) = loop {
        let decls: Vec<String> = points
            .iter()
            .map(|p| format!("{p} : {}", spec.name))
            .collect();
        let src = if term.contains('⊢') || term.contains("|-") {
            term.to_string()
        } else {
            format!("{} ⊢ {term}", decls.join(", "))
        };
        match el.judgement(&src) {
            Ok(r) => break r,
            Err(e) if e.code == "unbound-name" && points.len() < 16 => {
                points.push(src[e.span.start..e.span.end].to_string());
            }
            Err(e) => return Err(cx.report("<term>", &src, &e)),
        }
    };
    if ty.is_none() {
        return Err(cx.usage("the simplices term must be a term, not a type"));
    }
    let st = simplex_type(&mut el.checker, &ctx, &spec, &t, n, asst).map_err(|e| {
        cx.report(
            "<term>",
            term,
            &ElabError::kernel(Span::new(0, term.len()), e),
        )
    })?;
    let mut names = ctx.names();
    for e in &st.entries {
        println!(
            "({} : {})",
            spell(&e.name, cx.opts),
            cx.show(&names, &strip_el(&e.ty))
        );
        names.push(e.name.clone());
    }
    println!("simplex: {}", cx.show(&names, &strip_el(&st.simplex)));
    if trace {
        let steps = el.checker.norm.trace(&st.simplex).map_err(|e| {
            cx.report(
                "<term>",
                term,
                &ElabError::kernel(Span::new(0, term.len()), e),
            )
        })?;
        for s in &steps[1..] {
            println!("  ≡ {}", cx.show(&names, &strip_el(s)));
        }
    }
    Ok(())
}

fn parse_seq(cx: &Ctx, s: &str) -> Result<BinarySeq, Failure> {
    let digits: Option<Vec<bool>> = s
        .chars()
        .filter(|c| *c != '∅')
        .map(|c| match c {
            '0' | '𝟘' => Some(false),
            '1' | '𝟙' => Some(true),
            _ => None,
        })
        .collect();
    digits
        .map(BinarySeq::new)
        .ok_or_else(|| cx.usage(&format!("`{s}` is not a 0/1 sequence")))
}

fn show_seq(b: &BinarySeq) -> String {
    if b.is_empty() {
        return "∅".into();
    }
    b.digits()
        .iter()
        .map(|d| if *d { '1' } else { '0' })
        .collect()
}

fn delta(cx: &Ctx, q: &DeltaCmd) -> Result<(), Failure> {
    match q {
        DeltaCmd::Compose { b1, b0 } => {
            let b1 = parse_seq(cx, b1)?;
            let b0 = parse_seq(cx, b0)?;
            let r = compose(&b1, &b0).map_err(|e| {
                eprintln!("error[arity-mismatch]: {e}");
                Failure::Check
            })?;
            println!("{}", show_seq(&r));
        }
        DeltaCmd::Order { n } => {
            if *n < 0 {
                return Err(cx.usage("n must be at least 0"));
            }
            for l in campion_order(*n) {
                println!("{} dim {}", show_seq(&l.label), l.dim);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cx = Ctx {
        fuel: cli.fuel,
        json: cli.json,
        opts: PrintOpts {
            unicode: !cli.no_unicode,
        },
    };
    let r = match &cli.cmd {
        Cmd::Check { files } => check(&cx, files),
        Cmd::Normalize { file, expr } => normalize(&cx, file.as_deref(), expr),
        Cmd::Simplices {
            file,
            term,
            n,
            asst,
            trace,
        } => simplices(&cx, file, term, *n, *asst, *trace),
        Cmd::Delta { q } => delta(&cx, q),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.code(),
    }
}
