//! The classical combinatory calculus: c-terms, typing by instantiation of
//! the combinator schemes, the eleven reduction rules, and the
//! pre-term / star-term classification.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::rewrite::{Path, Redex, StaleRedex};
use crate::types::{negate, Context, MType, Name, Substitution, Ty, UnifyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Comb {
    K,
    S,
    C,
    P,
    Q1,
    Q2,
}

impl Comb {
    pub const ALL: [Comb; 6] = [Comb::K, Comb::S, Comb::C, Comb::P, Comb::Q1, Comb::Q2];

    /// Number of scheme parameters.
    pub fn arity(self) -> usize {
        match self {
            Comb::S => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Comb::K => "K",
            Comb::S => "S",
            Comb::C => "C",
            Comb::P => "P",
            Comb::Q1 => "Q1",
            Comb::Q2 => "Q2",
        }
    }

    /// The axiom type with parameters `[A, B]` (or `[A, B, C]` for `S`).
    pub fn scheme(self, p: &[MType]) -> MType {
        use MType as M;
        let n = negate;
        match self {
            // A⊥ ∨ (B ∨ A)
            Comb::K => M::disj(n(&p[0]), M::disj(p[1].clone(), p[0].clone())),
            // (A ∧ (B ∧ C⊥)) ∨ ((A ∧ B⊥) ∨ (A⊥ ∨ C))
            Comb::S => M::disj(
                M::conj(p[0].clone(), M::conj(p[1].clone(), n(&p[2]))),
                M::disj(
                    M::conj(p[0].clone(), n(&p[1])),
                    M::disj(n(&p[0]), p[2].clone()),
                ),
            ),
            // (A ∧ B) ∨ ((A ∧ B⊥) ∨ A⊥)
            Comb::C => M::disj(
                M::conj(p[0].clone(), p[1].clone()),
                M::disj(M::conj(p[0].clone(), n(&p[1])), n(&p[0])),
            ),
            // A⊥ ∨ (B⊥ ∨ (A ∧ B))
            Comb::P => M::disj(
                n(&p[0]),
                M::disj(n(&p[1]), M::conj(p[0].clone(), p[1].clone())),
            ),
            // A⊥ ∨ (A ∨ B)
            Comb::Q1 => M::disj(n(&p[0]), M::disj(p[0].clone(), p[1].clone())),
            // B⊥ ∨ (A ∨ B)
            Comb::Q2 => M::disj(n(&p[1]), M::disj(p[0].clone(), p[1].clone())),
        }
    }
}

impl fmt::Display for Comb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Optional explicit instantiation of a combinator's scheme parameters.
pub type Inst = Option<Arc<[MType]>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CTerm {
    Var(Name),
    Comb(Comb, Inst),
    App(Arc<CTerm>, Arc<CTerm>),
    Star(Arc<CTerm>, Arc<CTerm>),
}

pub fn cvar(x: &str) -> CTerm {
    CTerm::Var(x.into())
}

pub fn comb(c: Comb) -> CTerm {
    CTerm::Comb(c, None)
}

pub fn comb_at(c: Comb, inst: Vec<MType>) -> CTerm {
    assert_eq!(inst.len(), c.arity(), "wrong number of parameters for {c}");
    CTerm::Comb(c, Some(inst.into()))
}

pub fn app(u: CTerm, v: CTerm) -> CTerm {
    CTerm::App(Arc::new(u), Arc::new(v))
}

/// `(U V1 ... Vn)`, left-associated.
pub fn apps(head: CTerm, args: impl IntoIterator<Item = CTerm>) -> CTerm {
    args.into_iter().fold(head, app)
}

pub fn cstar(u: CTerm, v: CTerm) -> CTerm {
    CTerm::Star(Arc::new(u), Arc::new(v))
}

/// `I = S K K`, uninstantiated.
pub fn identity() -> CTerm {
    apps(comb(Comb::S), [comb(Comb::K), comb(Comb::K)])
}

/// `I` instantiated so that it has type `A⊥ ∨ A`.
pub fn identity_at(a: &MType) -> CTerm {
    let aa = MType::disj(a.clone(), a.clone());
    apps(
        comb_at(Comb::S, vec![a.clone(), aa.clone(), a.clone()]),
        [
            comb_at(Comb::K, vec![a.clone(), negate(&aa)]),
            comb_at(Comb::K, vec![a.clone(), a.clone()]),
        ],
    )
}

impl CTerm {
    pub fn size(&self) -> usize {
        match self {
            CTerm::Var(_) | CTerm::Comb(..) => 1,
            CTerm::App(u, v) | CTerm::Star(u, v) => 1 + u.size() + v.size(),
        }
    }

    pub fn children(&self) -> Vec<&Arc<CTerm>> {
        match self {
            CTerm::Var(_) | CTerm::Comb(..) => vec![],
            CTerm::App(u, v) | CTerm::Star(u, v) => vec![u, v],
        }
    }

    pub fn subterm(&self, path: &[u8]) -> Option<&CTerm> {
        let mut cur = self;
        for &i in path {
            cur = cur.children().get(i as usize)?;
        }
        Some(cur)
    }

    pub fn replace_at(&self, path: &[u8], new: CTerm) -> Option<CTerm> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(new);
        };
        let re = |c: &Arc<CTerm>| c.replace_at(rest, new.clone()).map(Arc::new);
        Some(match (self, i) {
            (CTerm::App(u, v), 0) => CTerm::App(re(u)?, v.clone()),
            (CTerm::App(u, v), 1) => CTerm::App(u.clone(), re(v)?),
            (CTerm::Star(u, v), 0) => CTerm::Star(re(u)?, v.clone()),
            (CTerm::Star(u, v), 1) => CTerm::Star(u.clone(), re(v)?),
            _ => return None,
        })
    }

    pub fn contains_star(&self) -> bool {
        match self {
            CTerm::Var(_) | CTerm::Comb(..) => false,
            CTerm::App(u, v) => u.contains_star() || v.contains_star(),
            CTerm::Star(..) => true,
        }
    }

    pub fn is_comb(&self, c: Comb) -> bool {
        matches!(self, CTerm::Comb(d, _) if *d == c)
    }

    /// Head and arguments of a left-nested application spine.
    pub fn spine(&self) -> (&CTerm, Vec<&Arc<CTerm>>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let CTerm::App(f, a) = cur {
            args.push(a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Syntactically `((S K) K)`, ignoring instantiations.
    pub fn is_identity(&self) -> bool {
        let (h, args) = self.spine();
        h.is_comb(Comb::S) && args.len() == 2 && args.iter().all(|a| a.is_comb(Comb::K))
    }

    /// Drops every instantiation.
    pub fn erase(&self) -> CTerm {
        match self {
            CTerm::Var(_) => self.clone(),
            CTerm::Comb(c, _) => CTerm::Comb(*c, None),
            CTerm::App(u, v) => app(u.erase(), v.erase()),
            CTerm::Star(u, v) => cstar(u.erase(), v.erase()),
        }
    }

    pub fn map_inst(&self, f: &mut impl FnMut(&MType) -> MType) -> CTerm {
        match self {
            CTerm::Var(_) | CTerm::Comb(_, None) => self.clone(),
            CTerm::Comb(c, Some(ps)) => CTerm::Comb(*c, Some(ps.iter().map(&mut *f).collect())),
            CTerm::App(u, v) => app(u.map_inst(f), v.map_inst(f)),
            CTerm::Star(u, v) => cstar(u.map_inst(f), v.map_inst(f)),
        }
    }

    pub fn is_fully_instantiated(&self) -> bool {
        match self {
            CTerm::Var(_) => true,
            CTerm::Comb(_, i) => i.as_ref().is_some_and(|ps| ps.iter().all(MType::is_ground)),
            CTerm::App(u, v) | CTerm::Star(u, v) => {
                u.is_fully_instantiated() && v.is_fully_instantiated()
            }
        }
    }
}

pub fn vars(t: &CTerm) -> BTreeSet<Name> {
    fn go(t: &CTerm, out: &mut BTreeSet<Name>) {
        match t {
            CTerm::Var(x) => {
                out.insert(x.clone());
            }
            CTerm::Comb(..) => {}
            CTerm::App(u, v) | CTerm::Star(u, v) => {
                go(u, out);
                go(v, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut out);
    out
}

pub fn occurs(x: &str, t: &CTerm) -> bool {
    match t {
        CTerm::Var(y) => &**y == x,
        CTerm::Comb(..) => false,
        CTerm::App(u, v) | CTerm::Star(u, v) => occurs(x, u) || occurs(x, v),
    }
}

/// `t[x := v]`. No binders, so no capture.
pub fn substitute_c(t: &CTerm, x: &str, v: &CTerm) -> CTerm {
    match t {
        CTerm::Var(y) if &**y == x => v.clone(),
        CTerm::Var(_) | CTerm::Comb(..) => t.clone(),
        CTerm::App(a, b) | CTerm::Star(a, b) => {
            if !occurs(x, t) {
                return t.clone();
            }
            let a = Arc::new(substitute_c(a, x, v));
            let b = Arc::new(substitute_c(b, x, v));
            match t {
                CTerm::App(..) => CTerm::App(a, b),
                _ => CTerm::Star(a, b),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TermClass {
    PreTerm,
    StarTerm,
    Neither,
}

pub fn classify(t: &CTerm) -> TermClass {
    match t {
        _ if !t.contains_star() => TermClass::PreTerm,
        CTerm::Star(u, v) if !u.contains_star() && !v.contains_star() => TermClass::StarTerm,
        _ => TermClass::Neither,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CclTypeError {
    #[error("unbound variable `{0}`")]
    Unbound(Name),
    #[error("{comb} expects {expected} type parameters, got {got}")]
    Arity {
        comb: Comb,
        expected: usize,
        got: usize,
    },
    #[error("`{0}` has type # where an m-type is required")]
    BottomOperand(String),
    #[error("ill-typed `{term}`: {source}")]
    Unify { term: String, source: UnifyError },
    #[error("ambiguous type {0}: supply combinator instantiations")]
    Ambiguous(Ty),
    #[error("`{term}` has type {got}, expected {expected}")]
    Mismatch { term: String, got: Ty, expected: Ty },
}

/// Result of principal type inference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Principal {
    pub ty: Ty,
    /// The input with every combinator's instantiation made explicit; may
    /// still mention metavariables.
    pub term: CTerm,
    pub subst: Substitution,
}

struct Inferencer<'a> {
    ctx: &'a Context,
    subst: Substitution,
    next: u32,
}

impl Inferencer<'_> {
    fn fresh(&mut self) -> MType {
        self.next += 1;
        MType::meta(self.next - 1)
    }

    fn unify(&mut self, a: &MType, b: &MType, at: &CTerm) -> Result<(), CclTypeError> {
        self.subst.unify(a, b).map_err(|source| CclTypeError::Unify {
            term: at.to_string(),
            source,
        })
    }

    fn operand(&mut self, t: &CTerm) -> Result<(MType, CTerm), CclTypeError> {
        match self.go(t)? {
            (Ty::M(m), e) => Ok((m, e)),
            (Ty::Bottom, _) => Err(CclTypeError::BottomOperand(t.to_string())),
        }
    }

    fn go(&mut self, t: &CTerm) -> Result<(Ty, CTerm), CclTypeError> {
        match t {
            CTerm::Var(x) => {
                let ty = self
                    .ctx
                    .get(x)
                    .cloned()
                    .ok_or_else(|| CclTypeError::Unbound(x.clone()))?;
                Ok((ty, t.clone()))
            }
            CTerm::Comb(c, inst) => {
                let params: Vec<MType> = match inst {
                    Some(ps) if ps.len() != c.arity() => {
                        return Err(CclTypeError::Arity {
                            comb: *c,
                            expected: c.arity(),
                            got: ps.len(),
                        })
                    }
                    Some(ps) => ps.to_vec(),
                    None => (0..c.arity()).map(|_| self.fresh()).collect(),
                };
                let ty = c.scheme(&params);
                Ok((Ty::M(ty), CTerm::Comb(*c, Some(params.into()))))
            }
            CTerm::App(u, v) => {
                let (tu, eu) = self.operand(u)?;
                let (tv, ev) = self.operand(v)?;
                let result = self.fresh();
                self.unify(&tu, &MType::disj(negate(&tv), result.clone()), t)?;
                Ok((Ty::M(result), app(eu, ev)))
            }
            CTerm::Star(u, v) => {
                let (tu, eu) = self.operand(u)?;
                let (tv, ev) = self.operand(v)?;
                self.unify(&tu, &negate(&tv), t)?;
                Ok((Ty::Bottom, cstar(eu, ev)))
            }
        }
    }
}

/// Principal typing: combinators without an instantiation get fresh
/// metavariables, which are solved by unification. Context types may
/// themselves mention metavariables.
pub fn principal_c(ctx: &Context, t: &CTerm) -> Result<Principal, CclTypeError> {
    let start = ctx.max_meta().map_or(0, |m| m + 1).max(max_inst_meta(t).map_or(0, |m| m + 1));
    let mut inf = Inferencer {
        ctx,
        subst: Substitution::new(),
        next: start,
    };
    let (ty, elaborated) = inf.go(t)?;
    let subst = inf.subst.normalized();
    let ty = subst.apply_ty(&ty);
    let term = elaborated.map_inst(&mut |m| subst.apply(m));
    Ok(Principal { ty, term, subst })
}

fn max_inst_meta(t: &CTerm) -> Option<u32> {
    match t {
        CTerm::Var(_) | CTerm::Comb(_, None) => None,
        CTerm::Comb(_, Some(ps)) => ps.iter().filter_map(MType::max_meta).max(),
        CTerm::App(u, v) | CTerm::Star(u, v) => max_inst_meta(u).max(max_inst_meta(v)),
    }
}

/// The type of `t`. Metavariables left in the result are reported as
/// [`CclTypeError::Ambiguous`]; ones that only occur inside the derivation
/// are not.
pub fn infer_c(ctx: &Context, t: &CTerm) -> Result<Ty, CclTypeError> {
    let p = principal_c(ctx, t)?;
    if p.ty.is_ground() {
        Ok(p.ty)
    } else {
        Err(CclTypeError::Ambiguous(p.ty))
    }
}

/// Whether `t` admits the type `expected` (which must be ground).
pub fn check_c(ctx: &Context, t: &CTerm, expected: &Ty) -> Result<(), CclTypeError> {
    let p = principal_c(ctx, t)?;
    match (&p.ty, expected) {
        (Ty::Bottom, Ty::Bottom) => Ok(()),
        (Ty::M(got), Ty::M(want)) => {
            let mut s = p.subst.clone();
            s.unify(got, want).map_err(|source| CclTypeError::Unify {
                term: t.to_string(),
                source,
            })
        }
        _ => Err(CclTypeError::Mismatch {
            term: t.to_string(),
            got: p.ty.clone(),
            expected: expected.clone(),
        }),
    }
}

/// The eleven reduction rules, in tie-breaking priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CclRule {
    K,
    S,
    CR,
    CL,
    ER,
    EL,
    Pq1,
    Pq2,
    Qp1,
    Qp2,
    Simp,
}

impl CclRule {
    pub const ALL: [CclRule; 11] = [
        CclRule::K,
        CclRule::S,
        CclRule::CR,
        CclRule::CL,
        CclRule::ER,
        CclRule::EL,
        CclRule::Pq1,
        CclRule::Pq2,
        CclRule::Qp1,
        CclRule::Qp2,
        CclRule::Simp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CclRule::K => "k",
            CclRule::S => "s",
            CclRule::CR => "c_r",
            CclRule::CL => "c_l",
            CclRule::ER => "e_r",
            CclRule::EL => "e_l",
            CclRule::Pq1 => "pq1",
            CclRule::Pq2 => "pq2",
            CclRule::Qp1 => "qp1",
            CclRule::Qp2 => "qp2",
            CclRule::Simp => "simp",
        }
    }
}

impl fmt::Display for CclRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type CRedex = Redex<CclRule>;

/// Splits `(h a1 ... an)` when `h` is the combinator `c` and `n` matches.
fn comb_app(t: &CTerm, c: Comb, n: usize) -> Option<Vec<&Arc<CTerm>>> {
    let (h, args) = t.spine();
    (h.is_comb(c) && args.len() == n).then_some(args)
}

/// `(C (K U) (K V))`, the pattern abstracted by `simp`.
fn simp_pattern(t: &CTerm) -> Option<(&Arc<CTerm>, &Arc<CTerm>)> {
    let args = comb_app(t, Comb::C, 2)?;
    let u = comb_app(args[0], Comb::K, 1)?;
    let v = comb_app(args[1], Comb::K, 1)?;
    Some((u[0], v[0]))
}

/// Local rules matching at the root of `t`.
pub fn local_rules_at_c(t: &CTerm) -> Vec<CclRule> {
    let mut out = Vec::new();
    match t {
        CTerm::App(..) => {
            if comb_app(t, Comb::K, 2).is_some() {
                out.push(CclRule::K);
            }
            if comb_app(t, Comb::S, 3).is_some() {
                out.push(CclRule::S);
            }
            if let Some(args) = comb_app(t, Comb::C, 2) {
                if comb_app(args[0], Comb::K, 1).is_some() && args[1].is_identity() {
                    out.push(CclRule::ER);
                }
                if args[0].is_identity() && comb_app(args[1], Comb::K, 1).is_some() {
                    out.push(CclRule::EL);
                }
            }
        }
        CTerm::Star(l, r) => {
            if comb_app(l, Comb::C, 2).is_some() {
                out.push(CclRule::CR);
            }
            if comb_app(r, Comb::C, 2).is_some() {
                out.push(CclRule::CL);
            }
            if comb_app(l, Comb::P, 2).is_some() {
                if comb_app(r, Comb::Q1, 1).is_some() {
                    out.push(CclRule::Pq1);
                }
                if comb_app(r, Comb::Q2, 1).is_some() {
                    out.push(CclRule::Pq2);
                }
            }
            if comb_app(r, Comb::P, 2).is_some() {
                if comb_app(l, Comb::Q1, 1).is_some() {
                    out.push(CclRule::Qp1);
                }
                if comb_app(l, Comb::Q2, 1).is_some() {
                    out.push(CclRule::Qp2);
                }
            }
        }
        _ => {}
    }
    out
}

/// Every redex of `t`, sorted by path (pre-order), then rule priority.
///
/// `simp` is only detected when `t` is typable under `ctx` with type `⊥`;
/// it is reported at the root with `site` pointing at one non-root
/// occurrence of `(C (K U) (K V))`.
pub fn find_redexes_c(ctx: &Context, t: &CTerm) -> Vec<CRedex> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_local(t, &mut path, &mut out);
    let mut sites = Vec::new();
    collect_simp_sites(t, &mut path, &mut sites);
    if !sites.is_empty() && matches!(principal_c(ctx, t), Ok(Principal { ty: Ty::Bottom, .. })) {
        out.extend(
            sites
                .into_iter()
                .map(|s| Redex::with_site(CclRule::Simp, Path::root(), Path(s))),
        );
    }
    out.sort();
    out
}

fn collect_local(t: &CTerm, path: &mut Vec<u8>, out: &mut Vec<CRedex>) {
    for rule in local_rules_at_c(t) {
        out.push(Redex::new(rule, Path(path.clone())));
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i as u8);
        collect_local(c, path, out);
        path.pop();
    }
}

fn collect_simp_sites(t: &CTerm, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if !path.is_empty() && simp_pattern(t).is_some() {
        out.push(path.clone());
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i as u8);
        collect_simp_sites(c, path, out);
        path.pop();
    }
}

fn contract_local(rule: CclRule, t: &CTerm) -> Option<CTerm> {
    let cl = |a: &Arc<CTerm>| (**a).clone();
    match rule {
        CclRule::K => comb_app(t, Comb::K, 2).map(|a| cl(a[0])),
        CclRule::S => comb_app(t, Comb::S, 3).map(|a| {
            app(app(cl(a[0]), cl(a[2])), app(cl(a[1]), cl(a[2])))
        }),
        CclRule::ER | CclRule::EL => {
            if !local_rules_at_c(t).contains(&rule) {
                return None;
            }
            let a = comb_app(t, Comb::C, 2)?;
            let k = if rule == CclRule::ER { a[0] } else { a[1] };
            comb_app(k, Comb::K, 1).map(|u| cl(u[0]))
        }
        _ => {
            let CTerm::Star(l, r) = t else { return None };
            match rule {
                CclRule::CR => comb_app(l, Comb::C, 2)
                    .map(|a| cstar(app(cl(a[0]), cl(r)), app(cl(a[1]), cl(r)))),
                CclRule::CL => comb_app(r, Comb::C, 2)
                    .map(|a| cstar(app(cl(a[0]), cl(l)), app(cl(a[1]), cl(l)))),
                CclRule::Pq1 => Some(cstar(
                    cl(comb_app(l, Comb::P, 2)?[0]),
                    cl(comb_app(r, Comb::Q1, 1)?[0]),
                )),
                CclRule::Pq2 => Some(cstar(
                    cl(comb_app(l, Comb::P, 2)?[1]),
                    cl(comb_app(r, Comb::Q2, 1)?[0]),
                )),
                CclRule::Qp1 => Some(cstar(
                    cl(comb_app(l, Comb::Q1, 1)?[0]),
                    cl(comb_app(r, Comb::P, 2)?[0]),
                )),
                CclRule::Qp2 => Some(cstar(
                    cl(comb_app(l, Comb::Q2, 1)?[0]),
                    cl(comb_app(r, Comb::P, 2)?[1]),
                )),
                _ => None,
            }
        }
    }
}

/// Contracts one redex previously returned by [`find_redexes_c`].
pub fn reduce_at_c(t: &CTerm, r: &CRedex) -> Result<CTerm, StaleRedex> {
    let stale = || StaleRedex(format!("{} at {}", r.rule, r.path));
    let target = t.subterm(&r.path.0).ok_or_else(stale)?;
    let replacement = if r.rule == CclRule::Simp {
        let site = r.site.as_ref().filter(|s| !s.0.is_empty()).ok_or_else(stale)?;
        let (u, v) = target.subterm(&site.0).and_then(simp_pattern).ok_or_else(stale)?;
        cstar((**u).clone(), (**v).clone())
    } else {
        contract_local(r.rule, target).ok_or_else(stale)?
    };
    t.replace_at(&r.path.0, replacement).ok_or_else(stale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::MView;
    use crate::syntax::{parse_c, parse_type};

    fn p(s: &str) -> CTerm {
        parse_c(s).unwrap()
    }

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    fn ctx(decls: &[(&str, &str)]) -> Context {
        decls.iter().map(|(x, t)| (Name::from(*x), ty(t))).collect()
    }

    fn rules(ctx: &Context, t: &CTerm) -> Vec<(CclRule, Vec<u8>)> {
        find_redexes_c(ctx, t)
            .into_iter()
            .map(|r| (r.rule, r.path.0))
            .collect()
    }

    #[test]
    fn combinator_axioms() {
        assert_eq!(infer_c(&Context::new(), &p("K[a, b]")), Ok(ty("~a | (b | a)")));
        assert_eq!(
            infer_c(&Context::new(), &p("S[a, b, c]")),
            Ok(ty("(a & (b & ~c)) | ((a & ~b) | (~a | c))"))
        );
        assert_eq!(infer_c(&Context::new(), &p("C[a, b]")), Ok(ty("(a & b) | ((a & ~b) | ~a)")));
        assert_eq!(infer_c(&Context::new(), &p("P[a, b]")), Ok(ty("~a | (~b | (a & b))")));
        assert_eq!(infer_c(&Context::new(), &p("Q1[a, b]")), Ok(ty("~a | (a | b)")));
        assert_eq!(infer_c(&Context::new(), &p("Q2[a, b]")), Ok(ty("~b | (a | b)")));
    }

    #[test]
    fn identity_has_type_a_perp_or_a() {
        let p = principal_c(&Context::new(), &identity()).unwrap();
        let Some(MView::Disj(l, r)) = p.ty.as_m().map(MType::view) else {
            panic!("{}", p.ty)
        };
        assert_eq!(l, negate(&r));
        for a in ["a", "~b", "a & ~b"] {
            let a = match ty(a) {
                Ty::M(m) => m,
                _ => unreachable!(),
            };
            let want = Ty::M(MType::disj(negate(&a), a.clone()));
            check_c(&Context::new(), &identity(), &want).unwrap();
            assert_eq!(infer_c(&Context::new(), &identity_at(&a)), Ok(want));
        }
    }

    #[test]
    fn bare_combinator_is_ambiguous() {
        assert!(matches!(infer_c(&Context::new(), &p("K")), Err(CclTypeError::Ambiguous(_))));
        // internal metavariables do not make the result ambiguous
        let c = ctx(&[("x", "a")]);
        assert_eq!(infer_c(&c, &p("K x (K x)")), Ok(ty("a")));
    }

    #[test]
    fn star_of_dual_variables() {
        assert_eq!(infer_c(&ctx(&[("x", "~a"), ("y", "a")]), &p("x * y")), Ok(Ty::Bottom));
    }

    #[test]
    fn ill_typed_terms() {
        let c = ctx(&[("x", "~a"), ("y", "a"), ("z", "a")]);
        assert!(matches!(
            infer_c(&c, &p("(x * y) z")),
            Err(CclTypeError::BottomOperand(_))
        ));
        assert!(matches!(infer_c(&c, &p("x z")), Err(CclTypeError::Unify { .. })));
        assert!(matches!(
            infer_c(&c, &p("K[a]")),
            Err(CclTypeError::Arity { .. })
        ));
        assert!(matches!(infer_c(&c, &p("w")), Err(CclTypeError::Unbound(_))));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&p("K x y")), TermClass::PreTerm);
        assert_eq!(classify(&p("x * K y z")), TermClass::StarTerm);
        assert_eq!(classify(&p("(x * y) * z")), TermClass::Neither);
        assert_eq!(classify(&p("K (x * y)")), TermClass::Neither);
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute_c(&p("K x x"), "x", &p("S")), p("K S S"));
        let t = p("K y z");
        assert_eq!(substitute_c(&t, "x", &p("S")), t);
        assert_eq!(substitute_c(&p("x * y"), "x", &p("K z")), p("K z * y"));
    }

    #[test]
    fn remark_example_has_both_c_rules_at_root() {
        let t = p("C (K y) (K z) * C (K y') (K z')");
        let rs = rules(&Context::new(), &t);
        assert_eq!(rs, vec![(CclRule::CR, vec![]), (CclRule::CL, vec![])]);
    }

    #[test]
    fn pq_and_qp_redexes() {
        assert_eq!(rules(&Context::new(), &p("P u v * Q2 w")), vec![(CclRule::Pq2, vec![])]);
        assert_eq!(rules(&Context::new(), &p("Q1 w * P u v")), vec![(CclRule::Qp1, vec![])]);
        assert!(rules(&Context::new(), &p("K")).is_empty());
    }

    #[test]
    fn contraction_examples() {
        let t = p("K u v");
        assert_eq!(reduce_at_c(&t, &Redex::new(CclRule::K, Path::root())).unwrap(), p("u"));
        let t = p("S u v w");
        assert_eq!(
            reduce_at_c(&t, &Redex::new(CclRule::S, Path::root())).unwrap(),
            p("u w (v w)")
        );
        let t = p("w * C u v");
        assert_eq!(
            reduce_at_c(&t, &Redex::new(CclRule::CL, Path::root())).unwrap(),
            p("u w * v w")
        );
        let t = p("I t");
        let t1 = reduce_at_c(&t, &Redex::new(CclRule::S, Path::root())).unwrap();
        assert_eq!(t1, p("K t (K t)"));
        assert_eq!(reduce_at_c(&t1, &Redex::new(CclRule::K, Path::root())).unwrap(), p("t"));
    }

    #[test]
    fn e_rules_match_syntactic_identity_only() {
        assert_eq!(rules(&Context::new(), &p("C (K u) I")), vec![(CclRule::ER, vec![])]);
        assert_eq!(rules(&Context::new(), &p("C I (K u)")), vec![(CclRule::EL, vec![])]);
        assert!(rules(&Context::new(), &p("C (K u) (S K S)")).is_empty());
    }

    #[test]
    fn simp_requires_bottom_typing() {
        let t = p("C (K y) (K z) * x");
        assert!(rules(&Context::new(), &t).iter().all(|(r, _)| *r != CclRule::Simp));
        let c = ctx(&[("y", "~b"), ("z", "b"), ("x", "a")]);
        let rs = find_redexes_c(&c, &t);
        let simp: Vec<_> = rs.iter().filter(|r| r.rule == CclRule::Simp).collect();
        assert_eq!(simp.len(), 1);
        assert_eq!(simp[0].site, Some(Path(vec![0])));
        assert_eq!(reduce_at_c(&t, simp[0]).unwrap(), p("y * z"));
    }

    #[test]
    fn stale_redex() {
        let t = p("K u");
        assert!(reduce_at_c(&t, &Redex::new(CclRule::K, Path::root())).is_err());
    }
}
