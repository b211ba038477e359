//! Property suites checking the metatheory of both calculi on exhaustively
//! enumerated small terms.
//!
//! Each suite returns a [`SuiteReport`]. Suites share a [`Corpus`], which
//! enumerates terms on first use so that several suites over the same sizes
//! pay for enumeration once.

use std::cell::OnceCell;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::ccl::{
    self, app, classify, cstar, cvar, find_redexes_c, infer_c, principal_c, reduce_at_c,
    substitute_c, CTerm, CclRule, TermClass,
};
use crate::enumerate::{
    atoms, ccl_shapes_with, for_each_ls, for_each_mtype, ground_ccl, mtypes, CclInstance,
    CclShapes, LsInstance,
};
use crate::lambda_sym::{
    alpha_eq, find_redexes, free_vars, infer, lam, pair, reduce_at, star, substitute, var, LsTerm,
};
use crate::rewrite::{check_sn, explore, reaches, CclSystem, Limits, LsSystem, Reach, Rewriting, SnResult};
use crate::syntax::{parse_c, parse_context, parse_ls, parse_mtype, parse_type};
use crate::translate::{bracket_abstract, bracket_abstract_typed, pair_app, phi, pi, psi};
use crate::types::{negate, Context, MType, Name, Ty};

/// Failures kept verbatim per suite; the rest are only counted.
const KEPT_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    /// Total failures; only the first few are kept in `failures`.
    pub failed: usize,
    pub failures: Vec<Failure>,
    #[serde(rename = "wall_time_ms", serialize_with = "millis")]
    pub wall_time: Duration,
    pub notes: Vec<String>,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

struct Tally {
    name: &'static str,
    start: Instant,
    instances: usize,
    failed: usize,
    failures: Vec<Failure>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally {
            name,
            start: Instant::now(),
            instances: 0,
            failed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, input: impl FnOnce() -> String, expected: impl FnOnce() -> String, got: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.fail(input(), expected(), got());
        }
    }

    fn fail(&mut self, input: String, expected: String, got: String) {
        self.failed += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(Failure { input, expected, got });
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            instances: self.instances,
            failed: self.failed,
            failures: self.failures,
            wall_time: self.start.elapsed(),
            notes: self.notes,
        }
    }
}

/// Sizes and budgets the suites run at.
#[derive(Clone, Debug, Serialize)]
pub struct Scope {
    /// Atoms used to ground enumerated terms (1 up to this many).
    pub atoms: usize,
    pub mtype_depth: usize,
    pub reduction_size: usize,
    pub typing_size: usize,
    pub bracket_size: usize,
    pub argument_size: usize,
    pub substitution_size: usize,
    pub omega_size: usize,
    pub sn_size: usize,
    pub sn_budget: usize,
    pub round_trip_size: usize,
    pub reach_steps: usize,
    pub psi_steps: usize,
    /// Terms a single reachability query may expand.
    pub reach_budget: usize,
}

impl Scope {
    /// The sizes the acceptance run uses.
    pub fn full() -> Scope {
        Scope {
            atoms: 2,
            mtype_depth: 4,
            reduction_size: 9,
            typing_size: 8,
            bracket_size: 6,
            argument_size: 3,
            substitution_size: 6,
            omega_size: 8,
            sn_size: 9,
            sn_budget: 100_000,
            round_trip_size: 10,
            reach_steps: 50,
            psi_steps: 100,
            reach_budget: 200_000,
        }
    }

    /// Small sizes, for smoke tests; finishes in seconds.
    pub fn quick() -> Scope {
        Scope {
            mtype_depth: 3,
            reduction_size: 6,
            typing_size: 6,
            bracket_size: 5,
            argument_size: 3,
            substitution_size: 5,
            omega_size: 6,
            sn_size: 6,
            round_trip_size: 7,
            ..Scope::full()
        }
    }
}

/// Enumerated terms shared between suites.
pub struct Corpus {
    pub scope: Scope,
    ls: OnceCell<Vec<LsInstance>>,
    ccl: OnceCell<CclCorpus>,
}

struct CclCorpus {
    shapes: CclShapes,
    /// Candidates that are neither pre-terms nor star-terms.
    neither: usize,
    neither_typable: Vec<String>,
}

impl Corpus {
    pub fn new(scope: Scope) -> Corpus {
        Corpus {
            scope,
            ls: OnceCell::new(),
            ccl: OnceCell::new(),
        }
    }

    fn ls_max(&self) -> usize {
        let s = &self.scope;
        s.reduction_size
            .max(s.typing_size)
            .max(s.omega_size)
            .max(s.sn_size)
            .max(s.substitution_size)
    }

    fn ccl_max(&self) -> usize {
        let s = &self.scope;
        self.ls_max().max(s.bracket_size).max(s.argument_size).max(s.round_trip_size)
    }

    /// Every enumerated well-typed λs-term of size at most `max`.
    pub fn ls(&self, max: usize) -> impl Iterator<Item = &LsInstance> {
        let all = self.ls.get_or_init(|| {
            let mut out = Vec::new();
            for n in 1..=self.ls_max() {
                for_each_ls(n, self.scope.atoms, |i| out.push(i));
            }
            out
        });
        all.iter().take_while(move |i| i.term.size() <= max)
    }

    fn ccl_corpus(&self) -> &CclCorpus {
        self.ccl.get_or_init(|| {
            let mut neither = 0;
            let mut neither_typable = Vec::new();
            let shapes = ccl_shapes_with(self.ccl_max(), |t, ok| {
                if classify(t) == TermClass::Neither {
                    neither += 1;
                    if ok {
                        neither_typable.push(t.to_string());
                    }
                }
            });
            CclCorpus {
                shapes,
                neither,
                neither_typable,
            }
        })
    }

    /// Calls `f` on every enumerated typable c-term of size at most `max`,
    /// grounded with 1 up to `scope.atoms` atoms.
    pub fn for_each_ccl(&self, max: usize, mut f: impl FnMut(&CclInstance)) {
        let c = self.ccl_corpus();
        for shapes in c.shapes.by_size.iter().take(max + 1) {
            for s in shapes {
                let mut seen: Vec<CclInstance> = Vec::new();
                for n in 1..=self.scope.atoms.max(1) {
                    let inst = ground_ccl(s, n);
                    if !seen.contains(&inst) {
                        f(&inst);
                        seen.push(inst);
                    }
                }
            }
        }
    }

    fn ccl_instances(&self, max: usize) -> Vec<CclInstance> {
        let mut out = Vec::new();
        self.for_each_ccl(max, |i| out.push(i.clone()));
        out
    }
}

/// Suite names accepted by [`run`], in the order `all` runs them.
pub const SUITES: [&str; 19] = [
    "negation-involution",
    "subject-reduction-ls",
    "subject-reduction-ccl",
    "pre-star-dichotomy",
    "bracket-abstraction-typing",
    "bracket-abstraction-reduction",
    "phi-substitution",
    "phi-typing",
    "omega-simulation",
    "projection-macros",
    "application-macro",
    "psi-substitution",
    "psi-typing",
    "psi-simulation",
    "non-confluence",
    "strong-normalization-ls",
    "strong-normalization-ccl",
    "round-trip",
    "golden-round-trip",
];

/// Runs one suite by name.
pub fn run(name: &str, corpus: &Corpus) -> Option<SuiteReport> {
    let s = &corpus.scope;
    Some(match name {
        "negation-involution" => negation_involution(s.mtype_depth, s.atoms),
        "subject-reduction-ls" => subject_reduction_ls(corpus),
        "subject-reduction-ccl" => subject_reduction_ccl(corpus),
        "pre-star-dichotomy" => dichotomy(corpus),
        "bracket-abstraction-typing" => bracket_abstraction_typing(corpus),
        "bracket-abstraction-reduction" => bracket_abstraction_reduction(corpus),
        "phi-substitution" => phi_substitution(corpus),
        "phi-typing" => phi_typing(corpus),
        "omega-simulation" => omega_simulation(corpus),
        "projection-macros" => projection_macros(s),
        "application-macro" => application_macro(s),
        "psi-substitution" => psi_substitution(corpus),
        "psi-typing" => psi_typing(corpus),
        "psi-simulation" => psi_simulation(s),
        "non-confluence" => non_confluence(),
        "strong-normalization-ls" => strong_normalization_ls(corpus),
        "strong-normalization-ccl" => strong_normalization_ccl(corpus),
        "round-trip" => round_trip(corpus),
        "golden-round-trip" => golden_round_trip(GOLDEN),
        _ => return None,
    })
}

// ---------------------------------------------------------------- types

/// Negation is an involution on every m-type of depth at most `depth`.
pub fn negation_involution(depth: usize, n: usize) -> SuiteReport {
    let mut t = Tally::new("negation-involution");
    for_each_mtype(depth, &atoms(n), |m| {
        let back = negate(&negate(m));
        t.instances += 1;
        if back != *m {
            t.fail(m.to_string(), m.to_string(), back.to_string());
        }
    });
    t.finish()
}

// ---------------------------------------------------------------- reduction

pub fn subject_reduction_ls(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("subject-reduction-ls");
    for i in corpus.ls(corpus.scope.reduction_size) {
        for r in find_redexes(&i.ctx, &i.term) {
            let input = || format!("{} |- {} by {}", i.ctx, i.term, r);
            match reduce_at(&i.term, &r) {
                Ok(v) => {
                    let got = infer(&i.ctx, &v);
                    t.check(
                        got.as_ref() == Ok(&i.ty),
                        input,
                        || i.ty.to_string(),
                        || format!("{v} : {}", show(&got)),
                    );
                }
                Err(e) => t.check(false, input, || "a contractum".into(), || e.to_string()),
            }
        }
    }
    t.finish()
}

pub fn subject_reduction_ccl(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("subject-reduction-ccl");
    corpus.for_each_ccl(corpus.scope.reduction_size, |i| {
        for r in find_redexes_c(&i.ctx, &i.term) {
            let input = || format!("{} |- {} by {}", i.ctx, i.term, r);
            match reduce_at_c(&i.term, &r) {
                Ok(v) => {
                    let got = infer_c(&i.ctx, &v);
                    t.check(
                        got.as_ref() == Ok(&i.ty),
                        input,
                        || i.ty.to_string(),
                        || format!("{v} : {}", show(&got)),
                    );
                }
                Err(e) => t.check(false, input, || "a contractum".into(), || e.to_string()),
            }
        }
    });
    t.finish()
}

fn show<E: std::fmt::Display>(r: &Result<Ty, E>) -> String {
    match r {
        Ok(ty) => ty.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Typable c-terms of m-type are pre-terms, those of type ⊥ are star-terms.
pub fn dichotomy(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("pre-star-dichotomy");
    corpus.for_each_ccl(corpus.scope.reduction_size, |i| {
        let class = classify(&i.term);
        let want = match i.ty {
            Ty::M(_) => TermClass::PreTerm,
            Ty::Bottom => TermClass::StarTerm,
        };
        t.check(
            class == want,
            || format!("{} |- {} : {}", i.ctx, i.term, i.ty),
            || format!("{want:?}"),
            || format!("{class:?}"),
        );
    });
    let c = corpus.ccl_corpus();
    for s in &c.neither_typable {
        t.fail(s.clone(), "untypable".into(), "typable".into());
    }
    t.note(format!(
        "{} candidates that are neither pre- nor star-terms, {} of them typable",
        c.neither,
        c.neither_typable.len()
    ));
    t.finish()
}

// ---------------------------------------------------------------- φ

fn m_or_atom(ctx: &Context, x: &str) -> MType {
    match ctx.get(x) {
        Some(Ty::M(m)) => m.clone(),
        _ => MType::atom("a"),
    }
}

/// `l_x(T) : A⊥ ∨ B` when `T : B`, and `l_x(T) : A⊥` when `T : ⊥`.
pub fn bracket_abstraction_typing(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("bracket-abstraction-typing");
    corpus.for_each_ccl(corpus.scope.bracket_size, |i| {
        let a = m_or_atom(&i.ctx, "x");
        let outer = i.ctx.without("x");
        let want = match &i.ty {
            Ty::M(b) => Ty::M(MType::disj(negate(&a), b.clone())),
            Ty::Bottom => Ty::M(negate(&a)),
        };
        let input = || format!("{} |- l_x({}) with x : {a}", outer, i.term);
        match bracket_abstract_typed(&outer, "x", &a, &i.term) {
            Ok(l) => {
                let got = infer_c(&outer, &l);
                t.check(got.as_ref() == Ok(&want), input, || want.to_string(), || show(&got));
                let untyped = bracket_abstract("x", &i.term.erase());
                t.check(
                    untyped.as_ref() == Ok(&l.erase()),
                    || format!("untyped l_x({})", i.term.erase()),
                    || l.erase().to_string(),
                    || format!("{untyped:?}"),
                );
            }
            Err(e) => t.check(false, input, || want.to_string(), || e.to_string()),
        }
    });
    t.finish()
}

/// Renames the free variables `x`, `y` of an argument term apart from those
/// of the term it is substituted into.
const ARG_RENAMING: [(&str, &str); 2] = [("x", "z"), ("y", "w")];

fn rename_c(i: &CclInstance) -> (Context, CTerm) {
    let mut term = i.term.clone();
    let mut ctx = Context::new();
    for (from, to) in ARG_RENAMING {
        term = substitute_c(&term, from, &cvar(to));
        if let Some(ty) = i.ctx.get(from) {
            ctx.insert(Name::from(to), ty.clone());
        }
    }
    (ctx, term)
}

fn rename_ls(i: &LsInstance) -> (Context, LsTerm) {
    let mut term = i.term.clone();
    let mut ctx = Context::new();
    for (from, to) in ARG_RENAMING {
        term = substitute(&term, from, &var(to));
        if let Some(ty) = i.ctx.get(from) {
            ctx.insert(Name::from(to), ty.clone());
        }
    }
    (ctx, term)
}

fn merge(a: &Context, b: &Context) -> Context {
    let mut out = a.clone();
    for (x, ty) in b.iter() {
        out.insert(x.clone(), ty.clone());
    }
    out
}

/// Arguments: enumerated pre-terms of m-type, renamed apart.
fn ccl_arguments(corpus: &Corpus) -> Vec<(Context, CTerm, MType)> {
    corpus
        .ccl_instances(corpus.scope.argument_size)
        .iter()
        .filter_map(|i| {
            let Ty::M(m) = &i.ty else { return None };
            let (ctx, term) = rename_c(i);
            Some((ctx, term, m.clone()))
        })
        .collect()
}

/// `(l_x(U) V) ▷* U[x:=V]` for pre-terms `U`; `l_x(U) ⋆ V ▷* U[x:=V]` and
/// `V ⋆ l_x(U) ▷* U[x:=V]` for star-terms `U`.
pub fn bracket_abstraction_reduction(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("bracket-abstraction-reduction");
    let s = &corpus.scope;
    let args = ccl_arguments(corpus);
    let mut longest = 0;
    corpus.for_each_ccl(s.bracket_size, |u| {
        let mentions_x = ccl::occurs("x", &u.term);
        let outer = u.ctx.without("x");
        for (vctx, v, vty) in &args {
            if mentions_x && m_or_atom(&u.ctx, "x") != *vty {
                continue;
            }
            let Ok(l) = bracket_abstract_typed(&outer, "x", vty, &u.term) else {
                t.fail(u.term.to_string(), "an abstraction".into(), "error".into());
                continue;
            };
            let ctx = merge(&outer, vctx);
            let target = substitute_c(&u.term, "x", v);
            let sys = CclSystem::new(ctx);
            let sources = match u.ty {
                Ty::M(_) => vec![app(l.clone(), v.clone())],
                Ty::Bottom => vec![cstar(l.clone(), v.clone()), cstar(v.clone(), l.clone())],
            };
            for src in sources {
                let r = reaches(&sys, &src, &target, s.reach_steps, false, s.reach_budget);
                if let Reach::Reached(steps) = &r {
                    longest = longest.max(steps.len());
                }
                t.check(
                    r.is_reached(),
                    || format!("{} |- {src}", sys.ctx),
                    || target.to_string(),
                    || reach_failure(&r),
                );
            }
        }
    });
    t.note(format!("longest witness: {longest} steps"));
    t.finish()
}

fn reach_failure<S: Rewriting>(r: &Reach<S>) -> String {
    match r {
        Reach::Reached(steps) => format!("reached in {} steps", steps.len()),
        Reach::Exhausted { visited } => format!("unreachable ({visited} terms searched)"),
        Reach::BudgetExceeded { visited } => format!("search budget exceeded ({visited} terms)"),
    }
}

fn ls_arguments(corpus: &Corpus) -> Vec<(Context, LsTerm, MType)> {
    corpus
        .ls(corpus.scope.argument_size)
        .filter_map(|i| {
            let Ty::M(m) = &i.ty else { return None };
            let (ctx, term) = rename_ls(i);
            Some((ctx, term, m.clone()))
        })
        .collect()
}

/// `φ(u[y:=v]) = φ(u)[y:=φ(v)]`.
pub fn phi_substitution(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("phi-substitution");
    let args = ls_arguments(corpus);
    for u in corpus.ls(corpus.scope.substitution_size) {
        let Some(Ty::M(yty)) = u.ctx.get("y") else { continue };
        let Ok(pu) = phi(&u.ctx, &u.term) else {
            t.fail(u.term.to_string(), "φ defined".into(), "error".into());
            continue;
        };
        for (vctx, v, _) in args.iter().filter(|a| a.2 == *yty) {
            let ctx = merge(&u.ctx.without("y"), vctx);
            let lhs = phi(&ctx, &substitute(&u.term, "y", v));
            let rhs = phi(vctx, v).map(|pv| substitute_c(&pu, "y", &pv));
            t.check(
                matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l == r),
                || format!("{} with y := {v}", u.term),
                || format!("{rhs:?}"),
                || format!("{lhs:?}"),
            );
        }
    }
    t.finish()
}

/// φ preserves types.
pub fn phi_typing(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("phi-typing");
    for i in corpus.ls(corpus.scope.typing_size) {
        let got = phi(&i.ctx, &i.term).map(|c| (infer_c(&i.ctx, &c), c));
        t.check(
            matches!(&got, Ok((Ok(ty), _)) if *ty == i.ty),
            || format!("{} |- {}", i.ctx, i.term),
            || i.ty.to_string(),
            || match &got {
                Ok((ty, c)) => format!("{c} : {}", show(ty)),
                Err(e) => e.to_string(),
            },
        );
    }
    t.finish()
}

/// A reduction not under any λ is simulated by at least one step in CCL.
pub fn omega_simulation(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("omega-simulation");
    let s = &corpus.scope;
    let mut longest = 0;
    for i in corpus.ls(s.omega_size) {
        let omega = LsSystem::omega(i.ctx.clone());
        let sys = CclSystem::new(i.ctx.clone());
        for r in omega.redexes(&i.term) {
            let Ok(v) = reduce_at(&i.term, &r) else { continue };
            let input = || format!("{} |- {} by {}", i.ctx, i.term, r);
            match (phi(&i.ctx, &i.term), phi(&i.ctx, &v)) {
                (Ok(pu), Ok(pv)) => {
                    let res = reaches(&sys, &pu, &pv, s.reach_steps, true, s.reach_budget);
                    if let Reach::Reached(steps) = &res {
                        longest = longest.max(steps.len());
                    }
                    t.check(
                        res.is_reached(),
                        || format!("{} ; {pu}", input()),
                        || pv.to_string(),
                        || reach_failure(&res),
                    );
                }
                (a, b) => t.check(false, input, || "φ defined".into(), || format!("{a:?} / {b:?}")),
            }
        }
    }
    t.note(format!("longest witness: {longest} steps"));
    t.finish()
}

// ---------------------------------------------------------------- ψ

fn two_atom_types() -> Vec<MType> {
    mtypes(2, 2)
}

/// `π1⟨u,v⟩ →* u`, `π2⟨u,v⟩ →* v`, and `π_i t` has the component type.
pub fn projection_macros(scope: &Scope) -> SuiteReport {
    let mut t = Tally::new("projection-macros");
    let tys = two_atom_types();
    for a in &tys {
        for b in &tys {
            let ctx: Context = [
                (Name::from("u"), Ty::M(a.clone())),
                (Name::from("v"), Ty::M(b.clone())),
            ]
            .into_iter()
            .collect();
            let sys = LsSystem::new(ctx.clone());
            let p = pair(var("u"), var("v"));
            let pty = MType::conj(a.clone(), b.clone());
            for (i, want, wty) in [(1, "u", a), (2, "v", b)] {
                let Ok((proj, ty)) = pi(i, &p, &pty) else {
                    t.fail(format!("pi{i} <u, v>"), "a term".into(), "error".into());
                    continue;
                };
                let got = infer(&ctx, &proj);
                t.check(
                    ty == *wty && got == Ok(Ty::M(wty.clone())),
                    || format!("{ctx} |- {proj}"),
                    || wty.to_string(),
                    || show(&got),
                );
                let r = reaches(&sys, &proj, &var(want), scope.reach_steps, false, scope.reach_budget);
                t.check(
                    r.is_reached(),
                    || format!("{ctx} |- {proj}"),
                    || want.into(),
                    || reach_failure(&r),
                );
            }
        }
    }
    t.finish()
}

/// `[u, v] : B` for `u : A⊥ ∨ B`, `v : A`, and
/// `[λx.s, v] →* λy.s[x := ⟨v, y⟩]`.
pub fn application_macro(scope: &Scope) -> SuiteReport {
    let mut t = Tally::new("application-macro");
    let tys = two_atom_types();
    for a in &tys {
        for b in &tys {
            let fty = MType::disj(negate(a), b.clone());
            let ctx: Context = [
                (Name::from("f"), Ty::M(fty.clone())),
                (Name::from("v"), Ty::M(a.clone())),
            ]
            .into_iter()
            .collect();
            match pair_app(&var("f"), &fty, &var("v")) {
                Ok((term, ty)) => {
                    let got = infer(&ctx, &term);
                    t.check(
                        ty == *b && got == Ok(Ty::M(b.clone())),
                        || format!("{ctx} |- {term}"),
                        || b.to_string(),
                        || show(&got),
                    );
                }
                Err(e) => t.fail("[f, v]".into(), b.to_string(), e.to_string()),
            }
            // λx.s with x : A ∧ B⊥ and s : ⊥, over two bodies.
            let xty = negate(&fty);
            let sys = LsSystem::new(ctx.clone());
            for body in [star(var("f"), var("x")), star(var("x"), var("f"))] {
                let abs = lam("x", xty.clone(), body.clone());
                let Ok((term, _)) = pair_app(&abs, &fty, &var("v")) else {
                    t.fail(abs.to_string(), "[λx.s, v]".into(), "error".into());
                    continue;
                };
                let y = "_0";
                let target = lam(y, negate(b), substitute(&body, "x", &pair(var("v"), var(y))));
                let r = reaches(&sys, &term, &target, scope.reach_steps, false, scope.reach_budget);
                t.check(
                    r.is_reached(),
                    || format!("{ctx} |- {term}"),
                    || target.to_string(),
                    || reach_failure(&r),
                );
            }
        }
    }
    t.note("the bound variable of the contractum is the one bound by the macro");
    t.finish()
}

/// `ψ(U[x:=V]) = ψ(U)[x:=ψ(V)]` up to renaming of bound variables.
pub fn psi_substitution(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("psi-substitution");
    let args = ccl_arguments(corpus);
    corpus.for_each_ccl(corpus.scope.substitution_size, |u| {
        let Some(Ty::M(xty)) = u.ctx.get("x") else { return };
        let Ok(pu) = psi(&u.ctx, &u.term) else {
            t.fail(u.term.to_string(), "ψ defined".into(), "error".into());
            return;
        };
        for (vctx, v, _) in args.iter().filter(|a| a.2 == *xty) {
            let ctx = merge(&u.ctx.without("x"), vctx);
            let lhs = psi(&ctx, &substitute_c(&u.term, "x", v));
            let rhs = psi(vctx, v).map(|pv| substitute(&pu, "x", &pv));
            t.check(
                matches!((&lhs, &rhs), (Ok(l), Ok(r)) if alpha_eq(l, r)),
                || format!("{} with x := {v}", u.term),
                || format!("{rhs:?}"),
                || format!("{lhs:?}"),
            );
        }
    });
    t.finish()
}

/// ψ preserves types.
pub fn psi_typing(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("psi-typing");
    corpus.for_each_ccl(corpus.scope.typing_size, |i| {
        let got = psi(&i.ctx, &i.term).map(|l| (infer(&i.ctx, &l), l));
        t.check(
            matches!(&got, Ok((Ok(ty), _)) if *ty == i.ty),
            || format!("{} |- {}", i.ctx, i.term),
            || i.ty.to_string(),
            || match &got {
                Ok((ty, l)) => format!("{l} : {}", show(ty)),
                Err(e) => e.to_string(),
            },
        );
    });
    t.finish()
}

/// One instance of each CCL rule: context, redex, rule.
const RULE_INSTANCES: [(&str, &str, CclRule); 11] = [
    ("u:a, v:b", "K u v", CclRule::K),
    ("u:~a | (~b | c), v:~a | b, w:a", "S u v w", CclRule::S),
    ("u:~a | ~b, v:~a | b, w:a", "C u v * w", CclRule::CR),
    ("u:~a | ~b, v:~a | b, w:a", "w * C u v", CclRule::CL),
    ("u:~a", "C (K u) I_A", CclRule::ER),
    ("u:~a", "C I_A (K u)", CclRule::EL),
    ("u:a, v:b, w:~a", "P u v * Q1 w", CclRule::Pq1),
    ("u:a, v:b, w:~b", "P u v * Q2 w", CclRule::Pq2),
    ("u:a, v:b, w:~a", "Q1 w * P u v", CclRule::Qp1),
    ("u:a, v:b, w:~b", "Q2 w * P u v", CclRule::Qp2),
    ("u:~b, v:b, w:a", "w * C (K u) (K v)", CclRule::Simp),
];

/// A table row: context, left-hand c-term (translated by ψ), and the
/// right-hand side, either a c-term to translate or a λs-term as written.
struct Row {
    label: &'static str,
    ctx: &'static str,
    lhs: &'static str,
    rhs: Rhs,
}

enum Rhs {
    Psi(&'static str),
    Ls(&'static str),
}

/// `I` at type `a⊥ ∨ a`; plain `I` leaves one instantiation undetermined.
const I_A: &str = "S[a, a | a, a] K[a, ~a & ~a] K[a, a]";

fn rows() -> Vec<Row> {
    use Rhs::*;
    vec![
        Row { label: "[[K, u], v] ->+ u", ctx: "u:a, v:b", lhs: "K u v", rhs: Psi("u") },
        Row {
            label: "[[[S, u], v], w] ->+ [[u, w], [v, w]]",
            ctx: "u:~a | (~b | c), v:~a | b, w:a",
            lhs: "S u v w",
            rhs: Psi("u w (v w)"),
        },
        Row { label: "[I, u] ->+ u", ctx: "u:a", lhs: "I_A u", rhs: Psi("u") },
        Row {
            label: "[[C, u], v] * w ->+ [u, w] * [v, w]",
            ctx: "u:~a | ~b, v:~a | b, w:a",
            lhs: "C u v * w",
            rhs: Psi("u w * v w"),
        },
        Row {
            label: "w * [[C, u], v] ->+ [u, w] * [v, w] (corrected: C read as psi(C))",
            ctx: "u:~a | ~b, v:~a | b, w:a",
            lhs: "w * C u v",
            rhs: Psi("u w * v w"),
        },
        Row {
            label: "[[C, [K, u]], I] ->+ u",
            ctx: "u:~a",
            lhs: "C (K u) I_A",
            rhs: Psi("u"),
        },
        Row {
            label: "[[C, I], [K, u]] ->+ u",
            ctx: "u:~a",
            lhs: "C I_A (K u)",
            rhs: Psi("u"),
        },
        Row { label: "[[P, u], v] * [Q1, w] ->+ u * w", ctx: "u:a, v:b, w:~a", lhs: "P u v * Q1 w", rhs: Psi("u * w") },
        Row { label: "[[P, u], v] * [Q2, w] ->+ v * w", ctx: "u:a, v:b, w:~b", lhs: "P u v * Q2 w", rhs: Psi("v * w") },
        Row { label: "[Q1, w] * [[P, u], v] ->+ w * u", ctx: "u:a, v:b, w:~a", lhs: "Q1 w * P u v", rhs: Psi("w * u") },
        Row { label: "[Q2, w] * [[P, u], v] ->+ w * v", ctx: "u:a, v:b, w:~b", lhs: "Q2 w * P u v", rhs: Psi("w * v") },
        Row {
            label: "[[C, [K, u]], [K, v]] ->+ \\z.(u * v) (corrected: second K applied to v)",
            ctx: "u:~b, v:b",
            lhs: "C[a, b] (K u) (K v)",
            rhs: Ls("\\z:a. u * v"),
        },
    ]
}

/// Each CCL rule is simulated by at least one λs step under ψ, and every
/// row of the simulation table holds.
pub fn psi_simulation(scope: &Scope) -> SuiteReport {
    let mut t = Tally::new("psi-simulation");
    let steps = scope.psi_steps;
    let budget = scope.reach_budget;
    let mut longest = 0;
    let mut track = |r: &Reach<LsSystem>| {
        if let Reach::Reached(s) = r {
            longest = longest.max(s.len());
        }
    };
    for (ctx_src, lhs_src, rule) in RULE_INSTANCES {
        let ctx = parse_context(ctx_src).expect("instance context parses");
        let lhs = parse_c(&lhs_src.replace("I_A", &format!("({I_A})"))).expect("instance parses");
        let Some(redex) = find_redexes_c(&ctx, &lhs).into_iter().find(|r| r.rule == rule) else {
            t.fail(lhs_src.into(), format!("a {rule} redex"), "none".into());
            continue;
        };
        let rhs = reduce_at_c(&lhs, &redex).expect("fresh redex contracts");
        match (psi(&ctx, &lhs), psi(&ctx, &rhs)) {
            (Ok(pl), Ok(pr)) => {
                let r = reaches(&LsSystem::new(ctx.clone()), &pl, &pr, steps, true, budget);
                track(&r);
                t.check(
                    r.is_reached(),
                    || format!("{rule}: {lhs} ▷ {rhs}"),
                    || pr.to_string(),
                    || reach_failure(&r),
                );
            }
            (a, b) => t.fail(format!("{rule}: {lhs}"), "ψ defined".into(), format!("{a:?} / {b:?}")),
        }
    }
    for row in rows() {
        let ctx = parse_context(row.ctx).expect("row context parses");
        let lhs = parse_c(&row.lhs.replace("I_A", &format!("({I_A})"))).expect("row parses");
        let target = match row.rhs {
            Rhs::Psi(s) => psi(&ctx, &parse_c(s).expect("row parses")),
            Rhs::Ls(s) => Ok(parse_ls(s).expect("row parses")),
        };
        match (psi(&ctx, &lhs), target) {
            (Ok(pl), Ok(pr)) => {
                let r = reaches(&LsSystem::new(ctx.clone()), &pl, &pr, steps, true, budget);
                track(&r);
                t.check(r.is_reached(), || row.label.into(), || pr.to_string(), || reach_failure(&r));
            }
            (a, b) => t.fail(row.label.into(), "ψ defined".into(), format!("{a:?} / {b:?}")),
        }
    }
    t.note(format!("longest witness: {longest} steps"));
    literal_rows(&mut t);
    t.finish()
}

/// Status of the two table rows as literally written; reported, not counted.
fn literal_rows(t: &mut Tally) {
    t.note(
        "literal row `w * [[C, u], v]`: C is a combinator, not a λs-term, so the \
         row only makes sense with psi(C); verified in that form",
    );
    let ctx = parse_context("u:~b").expect("context parses");
    let lhs = parse_c("C (K u) (K u)").expect("parses");
    let typable = principal_c(&ctx, &lhs).is_ok();
    let target = parse_ls("\\z:a. u * v").expect("parses");
    let v_free = free_vars(&target).contains("v");
    t.note(format!(
        "literal row `[[C, [K, u]], [K, u]] ->+ \\z.(u * v)`: left side {} at atom \
         types; right side {} a variable absent from the left, so it is unreachable",
        if typable { "is typable" } else { "is untypable" },
        if v_free { "mentions" } else { "does not mention" },
    ));
}

// ---------------------------------------------------------------- confluence

fn ground_remaining(ctx: &Context, t: &CTerm) -> Option<CTerm> {
    let p = principal_c(ctx, t).ok()?;
    let a = MType::atom("a");
    Some(p.term.map_inst(&mut |m| {
        m.map_metas(&mut |_, neg| if neg { negate(&a) } else { a.clone() })
    }))
}

/// Both example terms have exactly the normal forms `y ⋆ z` and `y' ⋆ z'`.
pub fn non_confluence() -> SuiteReport {
    let mut t = Tally::new("non-confluence");
    let ctx = parse_context("y:~b, z:b, y':~c, z':c").expect("context parses");
    let want: BTreeSet<String> = ["y * z", "y' * z'"].into_iter().map(String::from).collect();

    let ls = parse_ls("(\\x:a. y * z) * (\\x':~a. y' * z')").expect("parses");
    let sys = LsSystem::new(ctx.clone());
    let g = explore(&sys, &ls, Limits::default());
    let got: BTreeSet<String> = g.normal_forms().iter().map(|n| n.to_string()).collect();
    t.check(
        got == want && g.truncated.is_none(),
        || ls.to_string(),
        || format!("{want:?}"),
        || format!("{got:?} ({} terms)", g.nodes.len()),
    );

    let c = parse_c("C (K y) (K z) * C (K y') (K z')").expect("parses");
    match ground_remaining(&ctx, &c) {
        Some(c) => {
            let sys = CclSystem::new(ctx.clone());
            let g = explore(&sys, &c, Limits::default());
            let got: BTreeSet<String> =
                g.normal_forms().iter().map(|n| n.erase().to_string()).collect();
            t.check(
                got == want && g.truncated.is_none(),
                || c.to_string(),
                || format!("{want:?}"),
                || format!("{got:?} ({} terms)", g.nodes.len()),
            );
        }
        None => t.fail(c.to_string(), "typable".into(), "untypable".into()),
    }
    t.finish()
}

// ---------------------------------------------------------------- termination

pub fn strong_normalization_ls(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("strong-normalization-ls");
    let s = &corpus.scope;
    let (mut longest, mut nodes) = (0, 0);
    for i in corpus.ls(s.sn_size) {
        let r = check_sn(&LsSystem::new(i.ctx.clone()), &i.term, s.sn_budget);
        if let SnResult::Terminates { longest: l, nodes: n } = r {
            longest = longest.max(l);
            nodes = nodes.max(n);
        }
        t.check(
            matches!(r, SnResult::Terminates { .. }),
            || format!("{} |- {}", i.ctx, i.term),
            || "terminates".into(),
            || format!("{r:?}"),
        );
    }
    t.note(format!("longest reduction {longest}; largest reduction graph {nodes} terms"));
    t.finish()
}

pub fn strong_normalization_ccl(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("strong-normalization-ccl");
    let s = &corpus.scope;
    let (mut longest, mut nodes) = (0, 0);
    corpus.for_each_ccl(s.sn_size, |i| {
        let r = check_sn(&CclSystem::new(i.ctx.clone()), &i.term, s.sn_budget);
        if let SnResult::Terminates { longest: l, nodes: n } = r {
            longest = longest.max(l);
            nodes = nodes.max(n);
        }
        t.check(
            matches!(r, SnResult::Terminates { .. }),
            || format!("{} |- {}", i.ctx, i.term),
            || "terminates".into(),
            || format!("{r:?}"),
        );
    });
    t.note(format!("longest reduction {longest}; largest reduction graph {nodes} terms"));
    t.finish()
}

// ---------------------------------------------------------------- syntax

/// Printing then parsing gives back an α-equivalent term.
pub fn round_trip(corpus: &Corpus) -> SuiteReport {
    let mut t = Tally::new("round-trip");
    let s = &corpus.scope;
    for n in 1..=s.round_trip_size {
        for_each_ls(n, s.atoms, |i| {
            let printed = i.term.to_string();
            let back = parse_ls(&printed);
            let ctx_back = parse_context(&i.ctx.to_string());
            t.check(
                matches!(&back, Ok(b) if alpha_eq(b, &i.term)) && ctx_back.as_ref() == Ok(&i.ctx),
                || printed.clone(),
                || format!("{:?}", i.term),
                || format!("{back:?}"),
            );
        });
    }
    corpus.for_each_ccl(s.round_trip_size, |i| {
        let printed = i.term.to_string();
        let back = parse_c(&printed);
        let ty_back = parse_type(&i.ty.to_string());
        t.check(
            back.as_ref() == Ok(&i.term) && ty_back.as_ref() == Ok(&i.ty),
            || printed.clone(),
            || format!("{:?}", i.term),
            || format!("{back:?}"),
        );
    });
    t.finish()
}

/// The golden corpus shipped with the crate.
pub const GOLDEN: &str = include_str!("../tests/data/golden.txt");

/// Each golden line is `ls TERM`, `ccl TERM`, `type TYPE` or `ctx CONTEXT`;
/// parsing is stable under one print/parse cycle.
pub fn golden_round_trip(src: &str) -> SuiteReport {
    let mut t = Tally::new("golden-round-trip");
    for (n, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (kind, text) = line.split_once(' ').unwrap_or((line, ""));
        let once_twice: Result<(String, String), String> = match kind {
            "ls" => stable(text, parse_ls, alpha_eq),
            "ccl" => stable(text, parse_c, |a, b| a == b),
            "type" => stable(text, parse_type, |a, b| a == b),
            "mtype" => stable(text, parse_mtype, |a, b| a == b),
            "ctx" => stable(text, parse_context, |a, b| a == b),
            _ => Err(format!("unknown entry kind `{kind}`")),
        };
        t.check(
            matches!(&once_twice, Ok((a, b)) if a == b),
            || format!("line {}: {line}", n + 1),
            || "stable printing".into(),
            || format!("{once_twice:?}"),
        );
    }
    t.finish()
}

fn stable<T: std::fmt::Display, E: std::fmt::Display>(
    text: &str,
    parse: impl Fn(&str) -> Result<T, E>,
    same: impl Fn(&T, &T) -> bool,
) -> Result<(String, String), String> {
    let first = parse(text).map_err(|e| e.to_string())?;
    let printed = first.to_string();
    let second = parse(&printed).map_err(|e| format!("reparse of `{printed}`: {e}"))?;
    if !same(&first, &second) {
        return Err(format!("`{printed}` reparses to a different value"));
    }
    Ok((printed, second.to_string()))
}
