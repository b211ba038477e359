//! The symmetric classical lambda calculus: terms, substitution, typing and
//! the nine reduction rules.
//!
//! Terms are Church-style: every binder carries the m-type of its variable
//! and every injection carries the full disjunction it injects into, which
//! makes [`infer`] syntax-directed.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::rewrite::{Path, Redex, StaleRedex};
use crate::types::{negate, Context, MType, MView, Name, Ty};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LsTerm {
    Var(Name),
    /// `λx:A.t`, where `A` is the type of `x`.
    Lam(Name, MType, Arc<LsTerm>),
    /// `u ⋆ v`.
    Star(Arc<LsTerm>, Arc<LsTerm>),
    Pair(Arc<LsTerm>, Arc<LsTerm>),
    /// `σ1(t)` annotated with the whole disjunction `A ∨ B`.
    Inj1(Arc<LsTerm>, MType),
    /// `σ2(t)` annotated with the whole disjunction `A ∨ B`.
    Inj2(Arc<LsTerm>, MType),
}

pub fn var(x: &str) -> LsTerm {
    LsTerm::Var(x.into())
}

pub fn lam(x: &str, ann: MType, body: LsTerm) -> LsTerm {
    LsTerm::Lam(x.into(), ann, Arc::new(body))
}

pub fn star(u: LsTerm, v: LsTerm) -> LsTerm {
    LsTerm::Star(Arc::new(u), Arc::new(v))
}

pub fn pair(u: LsTerm, v: LsTerm) -> LsTerm {
    LsTerm::Pair(Arc::new(u), Arc::new(v))
}

pub fn inj1(t: LsTerm, ann: MType) -> LsTerm {
    LsTerm::Inj1(Arc::new(t), ann)
}

pub fn inj2(t: LsTerm, ann: MType) -> LsTerm {
    LsTerm::Inj2(Arc::new(t), ann)
}

impl LsTerm {
    pub fn size(&self) -> usize {
        match self {
            LsTerm::Var(_) => 1,
            LsTerm::Lam(_, _, b) | LsTerm::Inj1(b, _) | LsTerm::Inj2(b, _) => 1 + b.size(),
            LsTerm::Star(u, v) | LsTerm::Pair(u, v) => 1 + u.size() + v.size(),
        }
    }

    pub fn children(&self) -> Vec<&Arc<LsTerm>> {
        match self {
            LsTerm::Var(_) => vec![],
            LsTerm::Lam(_, _, b) | LsTerm::Inj1(b, _) | LsTerm::Inj2(b, _) => vec![b],
            LsTerm::Star(u, v) | LsTerm::Pair(u, v) => vec![u, v],
        }
    }

    pub fn subterm(&self, path: &[u8]) -> Option<&LsTerm> {
        let mut cur = self;
        for &i in path {
            cur = cur.children().get(i as usize)?;
        }
        Some(cur)
    }

    /// Rebuilds the term with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[u8], new: LsTerm) -> Option<LsTerm> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(new);
        };
        let re = |c: &Arc<LsTerm>| c.replace_at(rest, new.clone()).map(Arc::new);
        Some(match (self, i) {
            (LsTerm::Lam(x, a, b), 0) => LsTerm::Lam(x.clone(), a.clone(), re(b)?),
            (LsTerm::Inj1(b, a), 0) => LsTerm::Inj1(re(b)?, a.clone()),
            (LsTerm::Inj2(b, a), 0) => LsTerm::Inj2(re(b)?, a.clone()),
            (LsTerm::Star(u, v), 0) => LsTerm::Star(re(u)?, v.clone()),
            (LsTerm::Star(u, v), 1) => LsTerm::Star(u.clone(), re(v)?),
            (LsTerm::Pair(u, v), 0) => LsTerm::Pair(re(u)?, v.clone()),
            (LsTerm::Pair(u, v), 1) => LsTerm::Pair(u.clone(), re(v)?),
            _ => return None,
        })
    }

    pub fn is_lam(&self) -> bool {
        matches!(self, LsTerm::Lam(..))
    }
}

pub fn free_vars(t: &LsTerm) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn collect_free<'a>(t: &'a LsTerm, bound: &mut Vec<&'a Name>, out: &mut BTreeSet<Name>) {
    match t {
        LsTerm::Var(x) => {
            if !bound.contains(&x) {
                out.insert(x.clone());
            }
        }
        LsTerm::Lam(x, _, b) => {
            bound.push(x);
            collect_free(b, bound, out);
            bound.pop();
        }
        LsTerm::Inj1(b, _) | LsTerm::Inj2(b, _) => collect_free(b, bound, out),
        LsTerm::Star(u, v) | LsTerm::Pair(u, v) => {
            collect_free(u, bound, out);
            collect_free(v, bound, out);
        }
    }
}

pub fn occurs_free(x: &str, t: &LsTerm) -> bool {
    match t {
        LsTerm::Var(y) => &**y == x,
        LsTerm::Lam(y, _, b) => &**y != x && occurs_free(x, b),
        LsTerm::Inj1(b, _) | LsTerm::Inj2(b, _) => occurs_free(x, b),
        LsTerm::Star(u, v) | LsTerm::Pair(u, v) => occurs_free(x, u) || occurs_free(x, v),
    }
}

fn all_names(t: &LsTerm, out: &mut BTreeSet<Name>) {
    match t {
        LsTerm::Var(x) => {
            out.insert(x.clone());
        }
        LsTerm::Lam(x, _, b) => {
            out.insert(x.clone());
            all_names(b, out);
        }
        LsTerm::Inj1(b, _) | LsTerm::Inj2(b, _) => all_names(b, out),
        LsTerm::Star(u, v) | LsTerm::Pair(u, v) => {
            all_names(u, out);
            all_names(v, out);
        }
    }
}

/// Appends primes to `base` until the name is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut cand = format!("{base}'");
    while avoid.contains(cand.as_str()) {
        cand.push('\'');
    }
    cand.into()
}

/// Capture-avoiding `t[x := v]`.
pub fn substitute(t: &LsTerm, x: &str, v: &LsTerm) -> LsTerm {
    let fv = free_vars(v);
    subst_rec(t, x, v, &fv).unwrap_or_else(|| t.clone())
}

// Returns None when nothing changed, so untouched subtrees stay shared.
fn subst_rec(t: &LsTerm, x: &str, v: &LsTerm, fv: &BTreeSet<Name>) -> Option<LsTerm> {
    match t {
        LsTerm::Var(y) => (&**y == x).then(|| v.clone()),
        LsTerm::Lam(y, a, b) => {
            if &**y == x || !occurs_free(x, b) {
                return None;
            }
            if fv.contains(y) {
                let mut avoid = fv.clone();
                all_names(b, &mut avoid);
                avoid.insert(x.into());
                let y2 = fresh_name(y, &avoid);
                let renamed = subst_rec(b, y, &LsTerm::Var(y2.clone()), &BTreeSet::new())
                    .unwrap_or_else(|| (**b).clone());
                let body = subst_rec(&renamed, x, v, fv).unwrap_or(renamed);
                Some(LsTerm::Lam(y2, a.clone(), Arc::new(body)))
            } else {
                Some(LsTerm::Lam(y.clone(), a.clone(), Arc::new(subst_rec(b, x, v, fv)?)))
            }
        }
        LsTerm::Inj1(b, a) => Some(LsTerm::Inj1(Arc::new(subst_rec(b, x, v, fv)?), a.clone())),
        LsTerm::Inj2(b, a) => Some(LsTerm::Inj2(Arc::new(subst_rec(b, x, v, fv)?), a.clone())),
        LsTerm::Star(l, r) | LsTerm::Pair(l, r) => {
            let nl = subst_rec(l, x, v, fv);
            let nr = subst_rec(r, x, v, fv);
            if nl.is_none() && nr.is_none() {
                return None;
            }
            let nl = nl.map(Arc::new).unwrap_or_else(|| l.clone());
            let nr = nr.map(Arc::new).unwrap_or_else(|| r.clone());
            Some(match t {
                LsTerm::Star(..) => LsTerm::Star(nl, nr),
                _ => LsTerm::Pair(nl, nr),
            })
        }
    }
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(t: &LsTerm, u: &LsTerm) -> bool {
    fn go<'a>(t: &'a LsTerm, u: &'a LsTerm, env: &mut Vec<(&'a Name, &'a Name)>) -> bool {
        match (t, u) {
            (LsTerm::Var(x), LsTerm::Var(y)) => {
                for (l, r) in env.iter().rev() {
                    match (*l == x, *r == y) {
                        (true, true) => return true,
                        (false, false) => continue,
                        _ => return false,
                    }
                }
                x == y
            }
            (LsTerm::Lam(x, a, b), LsTerm::Lam(y, c, d)) => {
                if a != c {
                    return false;
                }
                env.push((x, y));
                let r = go(b, d, env);
                env.pop();
                r
            }
            (LsTerm::Star(a, b), LsTerm::Star(c, d)) | (LsTerm::Pair(a, b), LsTerm::Pair(c, d)) => {
                go(a, c, env) && go(b, d, env)
            }
            (LsTerm::Inj1(a, s), LsTerm::Inj1(b, t)) | (LsTerm::Inj2(a, s), LsTerm::Inj2(b, t)) => {
                s == t && go(a, b, env)
            }
            _ => false,
        }
    }
    go(t, u, &mut Vec::new())
}

/// Representative of the α-class: the binder at depth `d` is renamed `#d`,
/// a name the concrete syntax cannot produce.
pub fn canonical(t: &LsTerm) -> LsTerm {
    fn go(t: &LsTerm, env: &mut Vec<(Name, Name)>) -> LsTerm {
        match t {
            LsTerm::Var(x) => match env.iter().rev().find(|(o, _)| o == x) {
                Some((_, n)) => LsTerm::Var(n.clone()),
                None => t.clone(),
            },
            LsTerm::Lam(x, a, b) => {
                let n: Name = format!("#{}", env.len()).into();
                env.push((x.clone(), n.clone()));
                let body = go(b, env);
                env.pop();
                LsTerm::Lam(n, a.clone(), Arc::new(body))
            }
            LsTerm::Star(u, v) => LsTerm::Star(Arc::new(go(u, env)), Arc::new(go(v, env))),
            LsTerm::Pair(u, v) => LsTerm::Pair(Arc::new(go(u, env)), Arc::new(go(v, env))),
            LsTerm::Inj1(u, a) => LsTerm::Inj1(Arc::new(go(u, env)), a.clone()),
            LsTerm::Inj2(u, a) => LsTerm::Inj2(Arc::new(go(u, env)), a.clone()),
        }
    }
    go(t, &mut Vec::new())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LsTypeError {
    #[error("unbound variable `{0}`")]
    Unbound(Name),
    #[error("`{left}` has type {left_ty} and `{right}` has type {right_ty}: not dual m-types")]
    NotDual {
        left: String,
        left_ty: Ty,
        right: String,
        right_ty: Ty,
    },
    #[error("body of `\\{binder}` has type {got}, expected #")]
    BodyNotBottom { binder: Name, got: Ty },
    #[error("`{0}` has type # where an m-type is required")]
    BottomOperand(String),
    #[error("injection annotation {0} is not a disjunction")]
    InjNotDisj(MType),
    #[error("`{term}` has type {got} but the injection annotation expects {expected}")]
    InjMismatch {
        term: String,
        got: MType,
        expected: MType,
    },
    #[error("annotation {0} contains a metavariable")]
    NotGround(MType),
}

fn require_m(t: &LsTerm, ty: Ty) -> Result<MType, LsTypeError> {
    match ty {
        Ty::M(m) => Ok(m),
        Ty::Bottom => Err(LsTypeError::BottomOperand(t.to_string())),
    }
}

/// Syntax-directed type inference.
pub fn infer(ctx: &Context, t: &LsTerm) -> Result<Ty, LsTypeError> {
    let mut scope = Vec::new();
    infer_in(ctx, &mut scope, t)
}

fn lookup<'a>(ctx: &'a Context, scope: &'a [(Name, Ty)], x: &str) -> Option<&'a Ty> {
    scope
        .iter()
        .rev()
        .find(|(n, _)| &**n == x)
        .map(|(_, t)| t)
        .or_else(|| ctx.get(x))
}

fn infer_in(ctx: &Context, scope: &mut Vec<(Name, Ty)>, t: &LsTerm) -> Result<Ty, LsTypeError> {
    match t {
        LsTerm::Var(x) => lookup(ctx, scope, x)
            .cloned()
            .ok_or_else(|| LsTypeError::Unbound(x.clone())),
        LsTerm::Lam(x, a, b) => {
            if !a.is_ground() {
                return Err(LsTypeError::NotGround(a.clone()));
            }
            scope.push((x.clone(), Ty::M(a.clone())));
            let body = infer_in(ctx, scope, b);
            scope.pop();
            match body? {
                Ty::Bottom => Ok(Ty::M(negate(a))),
                got => Err(LsTypeError::BodyNotBottom {
                    binder: x.clone(),
                    got,
                }),
            }
        }
        LsTerm::Star(u, v) => {
            let tu = infer_in(ctx, scope, u)?;
            let tv = infer_in(ctx, scope, v)?;
            match (&tu, &tv) {
                (Ty::M(a), Ty::M(b)) if *a == negate(b) => Ok(Ty::Bottom),
                _ => Err(LsTypeError::NotDual {
                    left: u.to_string(),
                    left_ty: tu,
                    right: v.to_string(),
                    right_ty: tv,
                }),
            }
        }
        LsTerm::Pair(u, v) => {
            let a = infer_in(ctx, scope, u)?;
            let a = require_m(u, a)?;
            let b = infer_in(ctx, scope, v)?;
            let b = require_m(v, b)?;
            Ok(Ty::M(MType::conj(a, b)))
        }
        LsTerm::Inj1(u, ann) | LsTerm::Inj2(u, ann) => {
            if !ann.is_ground() {
                return Err(LsTypeError::NotGround(ann.clone()));
            }
            let MView::Disj(l, r) = ann.view() else {
                return Err(LsTypeError::InjNotDisj(ann.clone()));
            };
            let got = infer_in(ctx, scope, u)?;
            let got = require_m(u, got)?;
            let expected = if matches!(t, LsTerm::Inj1(..)) { l } else { r };
            if got != expected {
                return Err(LsTypeError::InjMismatch {
                    term: u.to_string(),
                    got,
                    expected,
                });
            }
            Ok(Ty::M(ann.clone()))
        }
    }
}

/// The nine reduction rules, in tie-breaking priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LsRule {
    Beta,
    BetaPerp,
    Eta,
    EtaPerp,
    Pi1,
    Pi2,
    Pi1Perp,
    Pi2Perp,
    Triv,
}

impl LsRule {
    pub const ALL: [LsRule; 9] = [
        LsRule::Beta,
        LsRule::BetaPerp,
        LsRule::Eta,
        LsRule::EtaPerp,
        LsRule::Pi1,
        LsRule::Pi2,
        LsRule::Pi1Perp,
        LsRule::Pi2Perp,
        LsRule::Triv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LsRule::Beta => "beta",
            LsRule::BetaPerp => "beta_perp",
            LsRule::Eta => "eta",
            LsRule::EtaPerp => "eta_perp",
            LsRule::Pi1 => "pi1",
            LsRule::Pi2 => "pi2",
            LsRule::Pi1Perp => "pi1_perp",
            LsRule::Pi2Perp => "pi2_perp",
            LsRule::Triv => "triv",
        }
    }
}

impl fmt::Display for LsRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type LsRedex = Redex<LsRule>;

/// Which local (non-`triv`) rule matches at the root of `t`, if any.
pub fn local_rules_at(t: &LsTerm) -> Vec<LsRule> {
    let mut out = Vec::new();
    match t {
        LsTerm::Star(u, v) => {
            if u.is_lam() {
                out.push(LsRule::Beta);
            }
            if v.is_lam() {
                out.push(LsRule::BetaPerp);
            }
            match (&**u, &**v) {
                (LsTerm::Pair(..), LsTerm::Inj1(..)) => out.push(LsRule::Pi1),
                (LsTerm::Pair(..), LsTerm::Inj2(..)) => out.push(LsRule::Pi2),
                (LsTerm::Inj1(..), LsTerm::Pair(..)) => out.push(LsRule::Pi1Perp),
                (LsTerm::Inj2(..), LsTerm::Pair(..)) => out.push(LsRule::Pi2Perp),
                _ => {}
            }
        }
        LsTerm::Lam(x, _, b) => {
            if let LsTerm::Star(u, v) = &**b {
                if matches!(&**v, LsTerm::Var(y) if y == x) && !occurs_free(x, u) {
                    out.push(LsRule::Eta);
                }
                if matches!(&**u, LsTerm::Var(y) if y == x) && !occurs_free(x, v) {
                    out.push(LsRule::EtaPerp);
                }
            }
        }
        _ => {}
    }
    out
}

/// Every redex of `t`, sorted by path (pre-order), then rule priority.
///
/// `triv` is only detected when `t` is well-typed under `ctx`. A `triv` redex
/// is reported at the `⊥`-typed subterm it rewrites (`path`) with `site`
/// pointing, relative to it, at an abstraction `λy.v` whose body `v` is a
/// `⋆`-term that mentions neither `y` nor any variable bound between the
/// rewritten subterm and `λy`.
pub fn find_redexes(ctx: &Context, t: &LsTerm) -> Vec<LsRedex> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_local(t, &mut path, &mut out);
    if infer(ctx, t).is_ok() {
        collect_triv(t, &mut path, &mut Vec::new(), &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

fn collect_local(t: &LsTerm, path: &mut Vec<u8>, out: &mut Vec<LsRedex>) {
    for rule in local_rules_at(t) {
        out.push(Redex::new(rule, Path(path.clone())));
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i as u8);
        collect_local(c, path, out);
        path.pop();
    }
}

// `binders` holds (depth, name) of enclosing abstractions; `scopes` holds the
// paths of enclosing ⋆-nodes, the ⊥-typed positions of a well-typed term.
fn collect_triv<'a>(
    t: &'a LsTerm,
    path: &mut Vec<u8>,
    binders: &mut Vec<(usize, &'a Name)>,
    scopes: &mut Vec<Vec<u8>>,
    out: &mut Vec<LsRedex>,
) {
    match t {
        LsTerm::Lam(y, _, body) => {
            if let LsTerm::Star(..) = &**body {
                let fv = free_vars(body);
                if !fv.contains(y) {
                    // Scopes must lie strictly below the innermost binder
                    // that captures a free variable of the body.
                    let mut seen: Vec<&Name> = Vec::new();
                    let mut floor = 0usize;
                    for (depth, n) in binders.iter().rev() {
                        if seen.contains(n) {
                            continue;
                        }
                        seen.push(n);
                        if fv.contains(*n) {
                            floor = *depth + 1;
                            break;
                        }
                    }
                    for s in scopes.iter().filter(|s| s.len() >= floor) {
                        let site = Path(path[s.len()..].to_vec());
                        out.push(Redex::with_site(LsRule::Triv, Path(s.clone()), site));
                    }
                }
            }
            binders.push((path.len(), y));
            path.push(0);
            collect_triv(body, path, binders, scopes, out);
            path.pop();
            binders.pop();
        }
        LsTerm::Star(u, v) => {
            scopes.push(path.clone());
            for (i, c) in [u, v].into_iter().enumerate() {
                path.push(i as u8);
                collect_triv(c, path, binders, scopes, out);
                path.pop();
            }
            scopes.pop();
        }
        LsTerm::Var(_) => {}
        LsTerm::Pair(..) | LsTerm::Inj1(..) | LsTerm::Inj2(..) => {
            for (i, c) in t.children().into_iter().enumerate() {
                path.push(i as u8);
                collect_triv(c, path, binders, scopes, out);
                path.pop();
            }
        }
    }
}

fn contract_local(rule: LsRule, t: &LsTerm) -> Option<LsTerm> {
    use LsTerm::*;
    match (rule, t) {
        (LsRule::Beta, Star(l, v)) => match &**l {
            Lam(x, _, u) => Some(substitute(u, x, v)),
            _ => None,
        },
        (LsRule::BetaPerp, Star(v, r)) => match &**r {
            Lam(x, _, u) => Some(substitute(u, x, v)),
            _ => None,
        },
        (LsRule::Eta | LsRule::EtaPerp, Lam(..)) => {
            if !local_rules_at(t).contains(&rule) {
                return None;
            }
            let Lam(_, _, b) = t else { unreachable!() };
            let Star(u, v) = &**b else { unreachable!() };
            Some(if rule == LsRule::Eta { (**u).clone() } else { (**v).clone() })
        }
        (_, Star(l, r)) => match (rule, &**l, &**r) {
            (LsRule::Pi1, Pair(u, _), Inj1(w, _)) => Some(star((**u).clone(), (**w).clone())),
            (LsRule::Pi2, Pair(_, v), Inj2(w, _)) => Some(star((**v).clone(), (**w).clone())),
            (LsRule::Pi1Perp, Inj1(w, _), Pair(u, _)) => Some(star((**w).clone(), (**u).clone())),
            (LsRule::Pi2Perp, Inj2(w, _), Pair(_, v)) => Some(star((**w).clone(), (**v).clone())),
            _ => None,
        },
        _ => None,
    }
}

/// Contracts one redex previously returned by [`find_redexes`].
pub fn reduce_at(t: &LsTerm, r: &LsRedex) -> Result<LsTerm, StaleRedex> {
    let stale = || StaleRedex(format!("{} at {}", r.rule, r.path));
    let target = t.subterm(&r.path.0).ok_or_else(stale)?;
    let replacement = if r.rule == LsRule::Triv {
        let site = r.site.as_ref().ok_or_else(stale)?;
        if site.0.is_empty() {
            return Err(stale());
        }
        match target.subterm(&site.0) {
            Some(LsTerm::Lam(y, _, body)) if matches!(**body, LsTerm::Star(..)) && !occurs_free(y, body) => {
                (**body).clone()
            }
            _ => return Err(stale()),
        }
    } else {
        contract_local(r.rule, target).ok_or_else(stale)?
    };
    t.replace_at(&r.path.0, replacement).ok_or_else(stale)
}

/// Paths at which `t` contains an abstraction strictly above the node at
/// `path`.
pub fn under_lambda(t: &LsTerm, path: &[u8]) -> bool {
    let mut cur = t;
    for &i in path {
        if cur.is_lam() {
            return true;
        }
        match cur.children().get(i as usize) {
            Some(c) => cur = c,
            None => return false,
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_ls, parse_type};

    fn p(s: &str) -> LsTerm {
        parse_ls(s).unwrap()
    }

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    fn ctx(decls: &[(&str, &str)]) -> Context {
        decls.iter().map(|(x, t)| (Name::from(*x), ty(t))).collect()
    }

    fn names(xs: &[&str]) -> BTreeSet<Name> {
        xs.iter().map(|x| Name::from(*x)).collect()
    }

    #[test]
    fn free_variable_examples() {
        assert_eq!(free_vars(&p("\\x:a. y * x")), names(&["y"]));
        assert_eq!(free_vars(&p("x")), names(&["x"]));
        assert_eq!(free_vars(&p("<x, \\x:a. x * z>")), names(&["x", "z"]));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute(&p("y * x"), "x", &p("z")), p("y * z"));
        let r = substitute(&p("\\y:a. x * y"), "x", &p("y"));
        assert_eq!(r, p("\\y':a. y * y'"));
        assert!(alpha_eq(&r, &p("\\w:a. y * w")));
        let t = p("\\y:a. z * y");
        assert_eq!(substitute(&t, "x", &p("q")), t);
    }

    #[test]
    fn substitution_stops_at_shadowing_binder() {
        let t = p("<x, \\x:a. x * z>");
        assert_eq!(substitute(&t, "x", &p("w")), p("<w, \\x:a. x * z>"));
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(&p("\\x:a. x * y"), &p("\\z:a. z * y")));
        assert!(!alpha_eq(&p("\\x:a. x * y"), &p("\\x:b. x * y")));
        assert!(!alpha_eq(&p("x"), &p("y")));
        // a bound name must not match a free one
        assert!(!alpha_eq(&p("\\x:a. x * y"), &p("\\y:a. y * y")));
    }

    #[test]
    fn inference_examples() {
        assert_eq!(infer(&ctx(&[("x", "a")]), &p("x")), Ok(ty("a")));
        assert_eq!(infer(&ctx(&[("u", "~a"), ("v", "a")]), &p("u * v")), Ok(Ty::Bottom));
        assert_eq!(infer(&ctx(&[("y", "~a")]), &p("\\x:a. y * x")), Ok(ty("~a")));
    }

    #[test]
    fn inference_errors() {
        assert!(matches!(infer(&Context::new(), &p("x")), Err(LsTypeError::Unbound(_))));
        let c = ctx(&[("u", "a"), ("v", "a")]);
        assert!(matches!(infer(&c, &p("u * v")), Err(LsTypeError::NotDual { .. })));
        assert!(matches!(
            infer(&c, &p("\\x:a. u")),
            Err(LsTypeError::BodyNotBottom { .. })
        ));
        let c = ctx(&[("u", "~a"), ("v", "a")]);
        assert!(matches!(infer(&c, &p("<u * v, u>")), Err(LsTypeError::BottomOperand(_))));
        assert!(matches!(
            infer(&c, &p("s1(u : a | b)")),
            Err(LsTypeError::InjMismatch { .. })
        ));
    }

    #[test]
    fn remark_example_has_beta_and_beta_perp_at_root() {
        let c = ctx(&[("y", "~b"), ("z", "b"), ("y'", "~c"), ("z'", "c")]);
        let t = p("(\\x:a. y * z) * \\x':~a. y' * z'");
        let root: Vec<_> = find_redexes(&c, &t)
            .into_iter()
            .filter(|r| r.path.0.is_empty() && r.rule != LsRule::Triv)
            .map(|r| r.rule)
            .collect();
        assert_eq!(root, vec![LsRule::Beta, LsRule::BetaPerp]);
    }

    #[test]
    fn pi1_redex_and_contraction() {
        let c = ctx(&[("u", "a"), ("v", "b"), ("w", "~a")]);
        let t = p("<u, v> * s1(w : ~a | ~b)");
        let rs = find_redexes(&c, &t);
        assert_eq!(rs, vec![Redex::new(LsRule::Pi1, Path::root())]);
        assert_eq!(reduce_at(&t, &rs[0]).unwrap(), p("u * w"));
        assert!(find_redexes(&c, &p("u")).is_empty());
    }

    #[test]
    fn contraction_examples() {
        let t = p("(\\x:a. y * x) * v");
        assert_eq!(reduce_at(&t, &Redex::new(LsRule::Beta, Path::root())).unwrap(), p("y * v"));
        let t = p("\\x:a. u * x");
        assert_eq!(reduce_at(&t, &Redex::new(LsRule::Eta, Path::root())).unwrap(), p("u"));
        let t = p("s2(w : a | b) * <u, v>");
        assert_eq!(reduce_at(&t, &Redex::new(LsRule::Pi2Perp, Path::root())).unwrap(), p("w * v"));
    }

    #[test]
    fn eta_side_condition() {
        assert!(local_rules_at(&p("\\x:a. x * x")).is_empty());
        assert_eq!(local_rules_at(&p("\\x:a. x * u")), vec![LsRule::EtaPerp]);
    }

    #[test]
    fn stale_redex_is_rejected() {
        let t = p("u * v");
        assert!(reduce_at(&t, &Redex::new(LsRule::Beta, Path::root())).is_err());
        assert!(reduce_at(&t, &Redex::new(LsRule::Pi1, Path(vec![0]))).is_err());
    }

    #[test]
    fn triv_respects_binders_between_scope_and_site() {
        // λz binds z above the inner abstraction: only the λz body may be
        // rewritten, not the root.
        let c = ctx(&[("w", "b"), ("q", "~c"), ("r", "c"), ("m", "~b")]);
        let t = p("(\\z:~b. <\\y:a. z * w, q> * s2(r : a | c)) * m");
        infer(&c, &t).unwrap();
        let trivs: Vec<_> = find_redexes(&c, &t)
            .into_iter()
            .filter(|r| r.rule == LsRule::Triv)
            .collect();
        assert_eq!(trivs.len(), 1);
        assert_eq!(trivs[0].path, Path(vec![0, 0]));
        let reduct = reduce_at(&t, &trivs[0]).unwrap();
        assert_eq!(reduct, p("(\\z:~b. z * w) * m"));
        assert_eq!(infer(&c, &reduct), Ok(Ty::Bottom));
    }

    #[test]
    fn triv_needs_typing() {
        let t = p("(\\x:a. y * z) * \\x':~a. y' * z'");
        assert!(find_redexes(&Context::new(), &t)
            .iter()
            .all(|r| r.rule != LsRule::Triv));
    }

    #[test]
    fn under_lambda_detection() {
        let t = p("\\z:a. (\\x:a. y * x) * z");
        assert!(!under_lambda(&t, &[]));
        assert!(under_lambda(&t, &[0]));
    }
}
