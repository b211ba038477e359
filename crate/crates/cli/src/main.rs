use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use symcl_core::ccl::{principal_c, CTerm};
use symcl_core::enumerate::{ccl_terms, ls_terms, random_ccl, random_ls};
use symcl_core::lambda_sym::{infer, LsTerm};
use symcl_core::rewrite::{
    explore, normalize, reaches, CclSystem, Limits, LsSystem, NormalizeError, Rewriting,
    Strategy,
};
use symcl_core::syntax::{parse_c, parse_claims, parse_context, parse_ls, AnyTerm, Calculus, Claim};
use symcl_core::translate::{phi, psi};
use symcl_core::types::Context;
use symcl_core::verify::{self, Corpus, Scope, SuiteReport};

/// `println!`/`print!` that exit quietly once stdout is closed, as in
/// `symcl gen | head`.
macro_rules! outln {
    ($($arg:tt)*) => { emit(format_args!("{}\n", format_args!($($arg)*))) };
}

macro_rules! out {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

fn emit(args: std::fmt::Arguments<'_>) {
    if let Err(e) = io::stdout().lock().write_fmt(args) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}

#[derive(Parser)]
#[command(name = "symcl", version, about = "Symmetric classical lambda calculus and CCL workbench")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Terms are λs-terms (the default).
    #[arg(long, global = true, conflicts_with = "ccl")]
    ls: bool,
    /// Terms are c-terms.
    #[arg(long, global = true)]
    ccl: bool,
    /// Variable declarations `x:TYPE` (or several, comma-separated).
    #[arg(long = "ctx", global = true, value_name = "DECL")]
    ctx: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    /// Leftmost-outermost.
    Lo,
    /// Leftmost-innermost.
    Li,
    /// Leftmost-outermost, never under a λ.
    Omega,
    /// Every redex: prints all normal forms.
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Ls,
    Ccl,
}

#[derive(Subcommand)]
enum Cmd {
    /// Infer the type of a term, or check every claim in a file.
    Check {
        /// The term; omit when using --file.
        term: Option<String>,
        #[arg(long, conflicts_with = "term")]
        file: Option<std::path::PathBuf>,
    },
    /// Reduce a term with a strategy.
    Reduce {
        term: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Lo)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        /// Print every step.
        #[arg(long)]
        trace: bool,
    },
    /// Reduce interactively, choosing each redex from standard input.
    Step { term: String },
    /// Print the reduction graph in DOT format.
    Graph {
        term: String,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Translate a term into the other calculus.
    Translate {
        term: String,
        #[arg(long, value_enum)]
        to: Target,
        /// Keep combinator instantiations in CCL output.
        #[arg(long)]
        typed: bool,
    },
    /// List typable terms, exhaustively by size or at random.
    Gen {
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        #[arg(long, default_value_t = 1)]
        atoms: usize,
        /// Sample at random instead, with this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random terms.
        #[arg(long, default_value_t = 10, requires = "seed")]
        count: usize,
    },
    /// Run the property suites.
    Verify {
        /// A suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Use small sizes.
        #[arg(long)]
        quick: bool,
        /// List the suite names.
        #[arg(long)]
        list: bool,
    },
}

/// A failed command: `Usage` exits with 2, `Failed` with 1.
enum Error {
    Usage(String),
    Failed(String),
}

type Res = Result<(), Error>;

fn usage(e: impl std::fmt::Display) -> Error {
    Error::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Failed(m)) => {
            if !m.is_empty() {
                eprintln!("{m}");
            }
            ExitCode::from(1)
        }
        Err(Error::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

impl Global {
    fn calculus(&self) -> Calculus {
        if self.ccl {
            Calculus::Ccl
        } else {
            Calculus::Ls
        }
    }

    fn context(&self) -> Result<Context, Error> {
        let mut ctx = Context::new();
        for d in &self.ctx {
            let part = parse_context(d).map_err(|e| usage(format!("in --ctx `{d}`: {e}")))?;
            for (x, ty) in part.iter() {
                ctx.insert(x.clone(), ty.clone());
            }
        }
        Ok(ctx)
    }

    fn term(&self, s: &str) -> Result<AnyTerm, Error> {
        let parsed = match self.calculus() {
            Calculus::Ls => parse_ls(s).map(AnyTerm::Ls),
            Calculus::Ccl => parse_c(s).map(AnyTerm::C),
        };
        parsed.map_err(|e| usage(format!("{e}\n  {s}\n  {}", caret(e.span.start, e.span.end))))
    }

    fn json(&self) -> bool {
        self.format == Format::Json
    }
}

fn caret(start: usize, end: usize) -> String {
    format!("{}{}", " ".repeat(start), "^".repeat((end - start).max(1)))
}

fn run(cli: Cli) -> Res {
    let g = &cli.global;
    match cli.cmd {
        Cmd::Check { term: Some(t), file: None } => check_term(g, &t),
        Cmd::Check { term: None, file: Some(f) } => check_file(g, &f),
        Cmd::Check { .. } => Err(usage("give a term or --file")),
        Cmd::Reduce { term, strategy, fuel, trace } => {
            let ctx = g.context()?;
            let s = match strategy {
                StrategyArg::Lo => Strategy::LeftmostOutermost,
                StrategyArg::Li => Strategy::LeftmostInnermost,
                StrategyArg::Omega => Strategy::Omega,
                StrategyArg::All => Strategy::All,
            };
            match g.term(&term)? {
                AnyTerm::Ls(t) => reduce(g, &LsSystem::new(ctx), &t, s, fuel, trace),
                AnyTerm::C(t) => {
                    if matches!(strategy, StrategyArg::Omega) {
                        return Err(usage("the omega strategy only applies to λs-terms"));
                    }
                    reduce(g, &CclSystem::new(ctx), &t, s, fuel, trace)
                }
            }
        }
        Cmd::Step { term } => {
            let ctx = g.context()?;
            let stdin = io::stdin();
            let mut input = stdin.lock();
            let mut out = io::stdout();
            match g.term(&term)? {
                AnyTerm::Ls(t) => step(&LsSystem::new(ctx), t, &mut input, &mut out),
                AnyTerm::C(t) => step(&CclSystem::new(ctx), t, &mut input, &mut out),
            }
            .map_err(|e| Error::Failed(e.to_string()))
        }
        Cmd::Graph { term, max_nodes, max_depth } => {
            let ctx = g.context()?;
            let limits = Limits { max_nodes, max_depth };
            match g.term(&term)? {
                AnyTerm::Ls(t) => graph(&LsSystem::new(ctx), &t, limits),
                AnyTerm::C(t) => graph(&CclSystem::new(ctx), &t, limits),
            }
        }
        Cmd::Translate { term, to, typed } => translate(g, &term, to, typed),
        Cmd::Gen { max_size, atoms, seed, count } => gen(g, max_size, atoms, seed, count),
        Cmd::Verify { suite, quick, list } => {
            if list {
                verify::SUITES.iter().for_each(|s| outln!("{s}"));
                return Ok(());
            }
            run_verify(g, &suite, quick)
        }
    }
}

// ---------------------------------------------------------------- check

fn type_of(ctx: &Context, t: &AnyTerm) -> Result<String, String> {
    match t {
        AnyTerm::Ls(t) => infer(ctx, t).map(|ty| ty.to_string()).map_err(|e| e.to_string()),
        // Principal type; unconstrained parts are shown as `?n`.
        AnyTerm::C(t) => principal_c(ctx, t).map(|p| p.ty.to_string()).map_err(|e| e.to_string()),
    }
}

fn check_term(g: &Global, src: &str) -> Res {
    let ctx = g.context()?;
    let t = g.term(src)?;
    let r = type_of(&ctx, &t);
    if g.json() {
        let v = match &r {
            Ok(ty) => json!({"term": t.to_string(), "ok": true, "type": ty}),
            Err(e) => json!({"term": t.to_string(), "ok": false, "error": e}),
        };
        outln!("{v}");
    }
    match r {
        Ok(ty) => {
            if !g.json() {
                outln!("{ty}");
            }
            Ok(())
        }
        Err(_) if g.json() => Err(Error::Failed(String::new())),
        Err(e) => Err(Error::Failed(format!("type error: {e}"))),
    }
}

#[derive(Serialize)]
struct ClaimResult {
    line: usize,
    claim: String,
    ok: bool,
    detail: String,
}

fn check_file(g: &Global, path: &std::path::Path) -> Res {
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let claims = parse_claims(&src, g.calculus()).map_err(usage)?;
    let mut results = Vec::new();
    for c in claims {
        let (claim, ok, detail) = match &c.claim {
            Claim::Typing { ctx, term, ty } => {
                let got = type_of(ctx, term);
                let ok = got.as_deref() == Ok(ty.to_string().as_str());
                let detail = got.unwrap_or_else(|e| e);
                (format!("{ctx} |- {term} : {ty}"), ok, detail)
            }
            Claim::Reduces { ctx, from, to, nonempty, max_steps } => {
                let max = max_steps.unwrap_or(50);
                let arrow = if *nonempty { "=>+" } else { "=>*" };
                let (ok, n) = match (from, to) {
                    (AnyTerm::Ls(a), AnyTerm::Ls(b)) => {
                        witness(&LsSystem::new(ctx.clone()), a, b, max, *nonempty)
                    }
                    (AnyTerm::C(a), AnyTerm::C(b)) => {
                        witness(&CclSystem::new(ctx.clone()), a, b, max, *nonempty)
                    }
                    _ => (false, None),
                };
                let detail = match n {
                    Some(n) => format!("reached in {n} steps"),
                    None => format!("not reached within {max} steps"),
                };
                (format!("{from} {arrow} {to}"), ok, detail)
            }
        };
        results.push(ClaimResult { line: c.line, claim, ok, detail });
    }
    let failed = results.iter().filter(|r| !r.ok).count();
    if g.json() {
        outln!("{}", serde_json::to_string_pretty(&results).expect("serializable"));
    } else {
        for r in &results {
            let tag = if r.ok { "ok  " } else { "FAIL" };
            outln!("{tag} line {}: {} ({})", r.line, r.claim, r.detail);
        }
        outln!("{} claims, {failed} failed", results.len());
    }
    if failed > 0 {
        return Err(Error::Failed(String::new()));
    }
    Ok(())
}

fn witness<S: Rewriting>(sys: &S, a: &S::Term, b: &S::Term, max: usize, nonempty: bool) -> (bool, Option<usize>) {
    match reaches(sys, a, b, max, nonempty, 200_000) {
        symcl_core::rewrite::Reach::Reached(steps) => (true, Some(steps.len())),
        _ => (false, None),
    }
}

// ---------------------------------------------------------------- reduce

fn reduce<S: Rewriting>(g: &Global, sys: &S, t: &S::Term, s: Strategy, fuel: usize, trace: bool) -> Res {
    if s == Strategy::All {
        let graph = explore(sys, t, Limits::default());
        let nfs: Vec<String> = graph.normal_forms().iter().map(|n| n.to_string()).collect();
        if g.json() {
            let v = json!({
                "term": t.to_string(),
                "normal_forms": nfs,
                "terms": graph.nodes.len(),
                "truncated": graph.truncated.is_some(),
            });
            outln!("{v}");
        } else {
            nfs.iter().for_each(|n| outln!("{n}"));
            if graph.truncated.is_some() {
                eprintln!("warning: exploration truncated; normal forms may be missing");
            }
        }
        return Ok(());
    }
    let done = match normalize(sys, t, s, fuel) {
        Ok(n) => n,
        Err(NormalizeError::FuelExhausted { fuel, last }) => {
            return Err(Error::Failed(format!("no normal form after {fuel} steps; reached {last}")))
        }
        Err(e) => return Err(Error::Failed(e.to_string())),
    };
    if g.json() {
        let steps: Vec<_> = done
            .steps
            .iter()
            .map(|s| json!({"rule": s.redex.rule, "path": s.redex.path, "term": s.term.to_string()}))
            .collect();
        let mut v = json!({
            "term": t.to_string(),
            "result": done.term.to_string(),
            "steps": done.steps.len(),
        });
        if trace {
            v["trace"] = steps.into();
        }
        outln!("{v}");
    } else {
        if trace {
            outln!("   {t}");
            for (i, s) in done.steps.iter().enumerate() {
                outln!("{:>2}. {} -> {}", i + 1, s.redex, s.term);
            }
            outln!("{} steps", done.steps.len());
        }
        outln!("{}", done.term);
    }
    Ok(())
}

// ---------------------------------------------------------------- step

fn step<S: Rewriting>(sys: &S, mut t: S::Term, input: &mut impl BufRead, out: &mut impl Write) -> io::Result<()>
where
    S::Term: Subterm,
{
    let mut line = String::new();
    loop {
        writeln!(out, "{t}")?;
        let redexes = sys.redexes(&t);
        if redexes.is_empty() {
            writeln!(out, "normal form")?;
            return Ok(());
        }
        for (i, r) in redexes.iter().enumerate() {
            let at = t.at(&r.path.0).unwrap_or_default();
            writeln!(out, "  [{i}] {r}: {at}")?;
        }
        write!(out, "redex number, or q to quit> ")?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(());
        }
        let choice = line.trim();
        if choice == "q" || choice == "quit" {
            return Ok(());
        }
        match choice.parse::<usize>().ok().and_then(|i| redexes.get(i)) {
            Some(r) => match sys.contract(&t, r) {
                Ok(u) => t = u,
                Err(e) => writeln!(out, "{e}")?,
            },
            None => writeln!(out, "no such redex: `{choice}`")?,
        }
    }
}

/// Printing of the subterm a redex sits at.
trait Subterm {
    fn at(&self, path: &[u8]) -> Option<String>;
}

impl Subterm for LsTerm {
    fn at(&self, path: &[u8]) -> Option<String> {
        self.subterm(path).map(|s| s.to_string())
    }
}

impl Subterm for CTerm {
    fn at(&self, path: &[u8]) -> Option<String> {
        self.subterm(path).map(|s| s.to_string())
    }
}

// ---------------------------------------------------------------- graph

fn graph<S: Rewriting>(sys: &S, t: &S::Term, limits: Limits) -> Res {
    let g = explore(sys, t, limits);
    out!("{}", g.to_dot());
    if let Some(why) = g.truncated {
        eprintln!("warning: graph truncated ({why:?}) after {} terms", g.nodes.len());
    }
    Ok(())
}

// ---------------------------------------------------------------- translate

fn translate(g: &Global, src: &str, to: Target, typed: bool) -> Res {
    let ctx = g.context()?;
    let out = match to {
        Target::Ccl => {
            let t = parse_ls(src).map_err(usage)?;
            let c = phi(&ctx, &t).map_err(|e| Error::Failed(e.to_string()))?;
            if typed { c } else { c.erase() }.to_string()
        }
        Target::Ls => {
            let t = parse_c(src).map_err(usage)?;
            psi(&ctx, &t).map_err(|e| Error::Failed(e.to_string()))?.to_string()
        }
    };
    if g.json() {
        outln!("{}", json!({"term": src, "result": out}));
    } else {
        outln!("{out}");
    }
    Ok(())
}

// ---------------------------------------------------------------- gen

fn gen(g: &Global, max_size: usize, atoms: usize, seed: Option<u64>, count: usize) -> Res {
    if !(1..=6).contains(&atoms) {
        return Err(usage("--atoms must be between 1 and 6"));
    }
    let mut lines = Vec::new();
    match (g.calculus(), seed) {
        (Calculus::Ls, None) => {
            for i in ls_terms(max_size, atoms) {
                lines.push(format!("{} |- {} : {}", i.ctx, i.term, i.ty));
            }
        }
        (Calculus::Ccl, None) => {
            for i in ccl_terms(max_size, atoms) {
                lines.push(format!("{} |- {} : {}", i.ctx, i.term, i.ty));
            }
        }
        (calc, Some(seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let line = match calc {
                    Calculus::Ls => random_ls(&mut rng, max_size, atoms, 10_000)
                        .map(|i| format!("{} |- {} : {}", i.ctx, i.term, i.ty)),
                    Calculus::Ccl => random_ccl(&mut rng, max_size, atoms, 10_000)
                        .map(|i| format!("{} |- {} : {}", i.ctx, i.term, i.ty)),
                };
                match line {
                    Some(l) => lines.push(l),
                    None => return Err(Error::Failed(format!("no typable term of size {max_size} found"))),
                }
            }
        }
    }
    let mut out = io::stdout().lock();
    for l in lines {
        // A closed pipe (`| head`) just ends the listing.
        if writeln!(out, "{l}").is_err() {
            break;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- verify

fn run_verify(g: &Global, suite: &str, quick: bool) -> Res {
    let names: Vec<&str> = if suite == "all" {
        verify::SUITES.to_vec()
    } else if verify::SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(usage(format!(
            "unknown suite `{suite}`; one of: all, {}",
            verify::SUITES.join(", ")
        )));
    };
    let corpus = Corpus::new(if quick { Scope::quick() } else { Scope::full() });
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in names {
        let r = verify::run(name, &corpus).expect("known suite");
        if !g.json() {
            print_report(&r);
        }
        reports.push(r);
    }
    if g.json() {
        outln!("{}", serde_json::to_string_pretty(&reports).expect("serializable"));
    }
    if reports.iter().all(SuiteReport::passed) {
        Ok(())
    } else {
        Err(Error::Failed(String::new()))
    }
}

fn print_report(r: &SuiteReport) {
    outln!(
        "{} {}: {} instances, {} failures, {:.2}s",
        if r.passed() { "PASS" } else { "FAIL" },
        r.name,
        r.instances,
        r.failed,
        r.wall_time.as_secs_f64()
    );
    for n in &r.notes {
        outln!("  note: {n}");
    }
    for f in &r.failures {
        outln!("  input:    {}", f.input);
        outln!("  expected: {}", f.expected);
        outln!("  got:      {}", f.got);
    }
}
