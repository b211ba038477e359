//! Exhaustive enumeration of small typable terms, plus a seeded random mode
//! for sizes beyond exhaustive reach.
//!
//! Terms are generated with metavariables for every type they mention (the
//! free variables `x`, `y`, binder annotations, the hidden side of
//! injections, combinator instantiations) and kept only if a principal
//! typing exists. Each surviving shape is then grounded by mapping its
//! metavariables, in order of first occurrence, onto the first `n` atoms
//! round-robin.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::ccl::{app, comb, cstar, cvar, principal_c, CTerm, Comb};
use crate::lambda_sym::{free_vars, infer, lam, pair, star, LsTerm};
pub use crate::types::for_each_mtype;
use crate::types::{negate, Context, MType, Name, Substitution, Ty};

/// The free variables enumerated terms may use.
pub const FREE_VARS: [&str; 2] = ["x", "y"];

const ATOM_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// The first `n` atom names (at most six).
pub fn atoms(n: usize) -> Vec<Name> {
    ATOM_NAMES[..n.clamp(1, ATOM_NAMES.len())]
        .iter()
        .map(|s| Name::from(*s))
        .collect()
}

/// All m-types of depth at most `depth` over `n` atoms, where atoms and
/// negated atoms have depth 1.
pub fn mtypes(depth: usize, n: usize) -> Vec<MType> {
    let mut out = Vec::new();
    for_each_mtype(depth, &atoms(n), |t| out.push(t.clone()));
    out
}

/// A ground, well-typed λs-term with the context it is typed in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LsInstance {
    pub ctx: Context,
    pub term: LsTerm,
    pub ty: Ty,
}

/// A ground, typable c-term with every combinator instantiated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CclInstance {
    pub ctx: Context,
    pub term: CTerm,
    pub ty: Ty,
}

/// Replaces metavariables by atoms via `map`.
fn ground_with(t: &MType, map: &HashMap<u32, Name>) -> MType {
    t.map_metas(&mut |i, neg| {
        let a = map[&i].clone();
        if neg {
            MType::neg_atom_named(a)
        } else {
            MType::atom_named(a)
        }
    })
}

/// Assigns atoms to metavariables in the order they are first met.
struct Grounding {
    map: HashMap<u32, Name>,
    atoms: Vec<Name>,
}

impl Grounding {
    fn new(n: usize) -> Grounding {
        Grounding {
            map: HashMap::new(),
            atoms: atoms(n),
        }
    }

    fn see(&mut self, t: &MType) {
        let mut ms = Vec::new();
        t.metas_into(&mut ms);
        for m in ms {
            let k = self.map.len();
            self.map.entry(m).or_insert_with(|| self.atoms[k % self.atoms.len()].clone());
        }
    }

    fn apply(&self, t: &MType) -> MType {
        ground_with(t, &self.map)
    }
}

// ---------------------------------------------------------------- λs

#[derive(Clone)]
struct St {
    subst: Substitution,
    next: u32,
    scope: Vec<(Name, MType)>,
}

impl St {
    fn start() -> St {
        St {
            subst: Substitution::new(),
            next: FREE_VARS.len() as u32,
            scope: FREE_VARS
                .iter()
                .enumerate()
                .map(|(i, x)| (Name::from(*x), MType::meta(i as u32)))
                .collect(),
        }
    }

    fn fresh(&mut self) -> MType {
        self.next += 1;
        MType::meta(self.next - 1)
    }

    fn binder(&self) -> Name {
        format!("v{}", self.scope.len() - FREE_VARS.len()).into()
    }
}

type KM<'a> = dyn FnMut(&St, LsTerm, MType) + 'a;
type KB<'a> = dyn FnMut(&St, LsTerm) + 'a;

fn gen_m(n: usize, st: &St, k: &mut KM<'_>) {
    match n {
        0 => {}
        1 => {
            for (x, ty) in &st.scope {
                k(st, LsTerm::Var(x.clone()), ty.clone());
            }
        }
        _ => {
            if n >= 4 {
                let mut s = st.clone();
                let a = s.fresh();
                let x = s.binder();
                s.scope.push((x.clone(), a.clone()));
                gen_b(n - 1, &s, &mut |s2, body| {
                    let mut s3 = s2.clone();
                    s3.scope.pop();
                    k(&s3, lam(&x, a.clone(), body), negate(&a));
                });
            }
            for i in 1..n - 1 {
                gen_m(i, st, &mut |s1, u, tu| {
                    gen_m(n - 1 - i, s1, &mut |s2, v, tv| {
                        k(s2, pair(u.clone(), v), MType::conj(tu.clone(), tv));
                    })
                });
            }
            for first in [true, false] {
                gen_m(n - 1, st, &mut |s1, u, tu| {
                    let mut s = s1.clone();
                    let other = s.fresh();
                    let (d, t) = if first {
                        let d = MType::disj(tu, other);
                        (d.clone(), LsTerm::Inj1(Arc::new(u), d))
                    } else {
                        let d = MType::disj(other, tu);
                        (d.clone(), LsTerm::Inj2(Arc::new(u), d))
                    };
                    k(&s, t, d);
                });
            }
        }
    }
}

fn gen_b(n: usize, st: &St, k: &mut KB<'_>) {
    if n < 3 {
        return;
    }
    for i in 1..n - 1 {
        gen_m(i, st, &mut |s1, u, tu| {
            gen_m(n - 1 - i, s1, &mut |s2, v, tv| {
                let mut s = s2.clone();
                if s.subst.unify(&tu, &negate(&tv)).is_ok() {
                    k(&s, star(u.clone(), v));
                }
            })
        });
    }
}

fn map_ann(t: &LsTerm, f: &mut impl FnMut(&MType) -> MType) -> LsTerm {
    match t {
        LsTerm::Var(_) => t.clone(),
        LsTerm::Lam(x, a, b) => LsTerm::Lam(x.clone(), f(a), Arc::new(map_ann(b, f))),
        LsTerm::Star(u, v) => star(map_ann(u, f), map_ann(v, f)),
        LsTerm::Pair(u, v) => pair(map_ann(u, f), map_ann(v, f)),
        LsTerm::Inj1(u, a) => LsTerm::Inj1(Arc::new(map_ann(u, f)), f(a)),
        LsTerm::Inj2(u, a) => LsTerm::Inj2(Arc::new(map_ann(u, f)), f(a)),
    }
}

fn ground_ls(st: &St, t: &LsTerm, n: usize) -> LsInstance {
    let resolved = map_ann(t, &mut |a| st.subst.apply(a));
    let mut g = Grounding::new(n);
    map_ann(&resolved, &mut |a| {
        g.see(a);
        a.clone()
    });
    let fv = free_vars(t);
    let mut ctx = Context::new();
    for (i, x) in FREE_VARS.iter().enumerate() {
        if fv.contains(*x) {
            let ty = st.subst.apply(&MType::meta(i as u32));
            g.see(&ty);
            ctx.insert(Name::from(*x), Ty::M(g.apply(&ty)));
        }
    }
    let term = map_ann(&resolved, &mut |a| g.apply(a));
    let ty = infer(&ctx, &term).expect("grounded principal typing is a typing");
    LsInstance { ctx, term, ty }
}

/// Calls `f` on every well-typed λs-term of size exactly `size` (up to
/// renaming of bound variables), grounded with 1 up to `max_atoms` atoms;
/// groundings that coincide are reported once.
pub fn for_each_ls(size: usize, max_atoms: usize, mut f: impl FnMut(LsInstance)) {
    let mut emit = |st: &St, t: LsTerm| {
        let mut seen: Vec<LsInstance> = Vec::new();
        for n in 1..=max_atoms.max(1) {
            let inst = ground_ls(st, &t, n);
            if !seen.contains(&inst) {
                seen.push(inst.clone());
                f(inst);
            }
        }
    };
    let st = St::start();
    gen_m(size, &st, &mut |s, t, _| emit(s, t));
    gen_b(size, &st, &mut |s, t| emit(s, t));
}

/// Every well-typed λs-term of size at most `max_size`, smallest first.
pub fn ls_terms(max_size: usize, max_atoms: usize) -> Vec<LsInstance> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        for_each_ls(n, max_atoms, |i| out.push(i));
    }
    out
}

// ---------------------------------------------------------------- CCL

fn meta_ctx() -> Context {
    FREE_VARS
        .iter()
        .enumerate()
        .map(|(i, x)| (Name::from(*x), Ty::M(MType::meta(i as u32))))
        .collect()
}

fn ccl_leaves() -> Vec<CTerm> {
    let mut out: Vec<CTerm> = FREE_VARS.iter().map(|x| cvar(x)).collect();
    out.extend(Comb::ALL.iter().map(|&c| comb(c)));
    out
}

/// Typable c-terms (with uninstantiated combinators) by size, plus the
/// number of candidates rejected per size. Every candidate is built from
/// typable parts, which loses nothing since typability is inherited by
/// subterms.
#[derive(Clone, Debug, Default)]
pub struct CclShapes {
    pub by_size: Vec<Vec<CTerm>>,
    pub rejected: Vec<usize>,
}

impl CclShapes {
    pub fn iter(&self) -> impl Iterator<Item = &CTerm> {
        self.by_size.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_size.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All typable c-term shapes of size at most `max_size` over the leaves
/// `x`, `y`, `K`, `S`, `C`, `P`, `Q1`, `Q2`. `check` is called on every
/// candidate with its typability, typable or not.
pub fn ccl_shapes_with(max_size: usize, mut check: impl FnMut(&CTerm, bool)) -> CclShapes {
    let ctx = meta_ctx();
    let mut shapes = CclShapes {
        by_size: vec![Vec::new(); max_size + 1],
        rejected: vec![0; max_size + 1],
    };
    if max_size == 0 {
        return shapes;
    }
    for leaf in ccl_leaves() {
        check(&leaf, true);
        shapes.by_size[1].push(leaf);
    }
    for n in 2..=max_size {
        let mut found = Vec::new();
        for i in 1..n - 1 {
            let j = n - 1 - i;
            for u in &shapes.by_size[i] {
                for v in &shapes.by_size[j] {
                    for t in [app(u.clone(), v.clone()), cstar(u.clone(), v.clone())] {
                        let ok = principal_c(&ctx, &t).is_ok();
                        check(&t, ok);
                        if ok {
                            found.push(t);
                        } else {
                            shapes.rejected[n] += 1;
                        }
                    }
                }
            }
        }
        shapes.by_size[n] = found;
    }
    shapes
}

pub fn ccl_shapes(max_size: usize) -> CclShapes {
    ccl_shapes_with(max_size, |_, _| {})
}

/// Grounds a typable shape with `n` atoms.
pub fn ground_ccl(shape: &CTerm, n: usize) -> CclInstance {
    let ctx = meta_ctx();
    let p = principal_c(&ctx, shape).expect("shape is typable");
    let mut g = Grounding::new(n);
    p.term.map_inst(&mut |m| {
        g.see(m);
        m.clone()
    });
    let vs = crate::ccl::vars(shape);
    let mut gctx = Context::new();
    for (i, x) in FREE_VARS.iter().enumerate() {
        if vs.contains(*x) {
            let ty = p.subst.apply(&MType::meta(i as u32));
            g.see(&ty);
            gctx.insert(Name::from(*x), Ty::M(g.apply(&ty)));
        }
    }
    if let Ty::M(m) = &p.ty {
        g.see(m);
    }
    let term = p.term.map_inst(&mut |m| g.apply(m));
    let ty = crate::ccl::infer_c(&gctx, &term).expect("grounded principal typing is a typing");
    CclInstance {
        ctx: gctx,
        term,
        ty,
    }
}

/// Every typable c-term of size at most `max_size`, grounded with 1 up to
/// `max_atoms` atoms (coinciding groundings reported once).
pub fn ccl_terms(max_size: usize, max_atoms: usize) -> Vec<CclInstance> {
    let shapes = ccl_shapes(max_size);
    let mut out = Vec::new();
    for s in shapes.iter() {
        let mut seen: Vec<CclInstance> = Vec::new();
        for n in 1..=max_atoms.max(1) {
            let inst = ground_ccl(s, n);
            if !seen.contains(&inst) {
                seen.push(inst.clone());
                out.push(inst);
            }
        }
    }
    out
}

// ---------------------------------------------------------------- random

/// A random well-typed λs-term of size exactly `size` (at least 1), found by
/// rejection sampling; `None` after `attempts` failures.
pub fn random_ls(rng: &mut impl Rng, size: usize, n: usize, attempts: usize) -> Option<LsInstance> {
    for _ in 0..attempts {
        let mut st = St::start();
        let bottom = size >= 3 && rng.gen_bool(0.5);
        let t = if bottom {
            rand_b(rng, size, &mut st)
        } else {
            rand_m(rng, size, &mut st).map(|(t, _)| t)
        };
        if let Some(t) = t {
            return Some(ground_ls(&st, &t, n));
        }
    }
    None
}

fn rand_m(rng: &mut impl Rng, n: usize, st: &mut St) -> Option<(LsTerm, MType)> {
    if n == 1 {
        let (x, ty) = st.scope[rng.gen_range(0..st.scope.len())].clone();
        return Some((LsTerm::Var(x), ty));
    }
    let mut choices = vec![0u8];
    if n >= 3 {
        choices.push(1);
    }
    if n >= 4 {
        choices.push(2);
    }
    match choices[rng.gen_range(0..choices.len())] {
        0 => {
            let (u, tu) = rand_m(rng, n - 1, st)?;
            let other = st.fresh();
            Some(if rng.gen_bool(0.5) {
                let d = MType::disj(tu, other);
                (LsTerm::Inj1(Arc::new(u), d.clone()), d)
            } else {
                let d = MType::disj(other, tu);
                (LsTerm::Inj2(Arc::new(u), d.clone()), d)
            })
        }
        1 => {
            let i = rng.gen_range(1..n - 1);
            let (u, tu) = rand_m(rng, i, st)?;
            let (v, tv) = rand_m(rng, n - 1 - i, st)?;
            Some((pair(u, v), MType::conj(tu, tv)))
        }
        _ => {
            let a = st.fresh();
            let x = st.binder();
            st.scope.push((x.clone(), a.clone()));
            let body = rand_b(rng, n - 1, st);
            st.scope.pop();
            Some((lam(&x, a.clone(), body?), negate(&a)))
        }
    }
}

fn rand_b(rng: &mut impl Rng, n: usize, st: &mut St) -> Option<LsTerm> {
    let i = rng.gen_range(1..n - 1);
    let (u, tu) = rand_m(rng, i, st)?;
    let (v, tv) = rand_m(rng, n - 1 - i, st)?;
    st.subst.unify(&tu, &negate(&tv)).ok()?;
    Some(star(u, v))
}

/// A random typable c-term of size exactly `size` (odd), by rejection
/// sampling.
pub fn random_ccl(rng: &mut impl Rng, size: usize, n: usize, attempts: usize) -> Option<CclInstance> {
    let ctx = meta_ctx();
    let leaves = ccl_leaves();
    for _ in 0..attempts {
        let star_root = size >= 3 && rng.gen_bool(0.3);
        let t = if star_root {
            let i = 2 * rng.gen_range(0..(size - 1) / 2) + 1;
            cstar(rand_pre(rng, i, &leaves), rand_pre(rng, size - 1 - i, &leaves))
        } else {
            rand_pre(rng, size, &leaves)
        };
        if principal_c(&ctx, &t).is_ok() {
            return Some(ground_ccl(&t, n));
        }
    }
    None
}

fn rand_pre(rng: &mut impl Rng, n: usize, leaves: &[CTerm]) -> CTerm {
    if n <= 2 {
        return leaves[rng.gen_range(0..leaves.len())].clone();
    }
    let i = 2 * rng.gen_range(0..(n - 1) / 2) + 1;
    app(rand_pre(rng, i, leaves), rand_pre(rng, n - 1 - i, leaves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mtype_counts() {
        assert_eq!(mtypes(1, 2).len(), 4);
        assert_eq!(mtypes(2, 2).len(), 4 + 2 * 16);
        assert_eq!(mtypes(3, 2).len(), 4 + 2 * 36 * 36);
        assert_eq!(mtypes(2, 1).len(), 2 + 2 * 4);
    }

    #[test]
    fn small_ls_terms() {
        // size 1: x, y; size 2: s1(x), s2(x), s1(y), s2(y)
        let one: Vec<_> = ls_terms(1, 1);
        assert_eq!(one.len(), 2);
        let two = ls_terms(2, 1).len() - 2;
        assert_eq!(two, 4);
        for i in ls_terms(6, 2) {
            assert_eq!(infer(&i.ctx, &i.term), Ok(i.ty.clone()), "{}", i.term);
        }
    }

    #[test]
    fn ls_enumeration_includes_known_terms() {
        let all = ls_terms(5, 1);
        let printed: Vec<String> = all.iter().map(|i| i.term.to_string()).collect();
        assert!(printed.contains(&"\\v0:a. x * v0".to_string()), "{printed:?}");
        assert!(printed.contains(&"<x, y>".to_string()));
        assert!(printed.contains(&"x * y".to_string()));
    }

    #[test]
    fn small_ccl_shapes() {
        let s = ccl_shapes(3);
        assert_eq!(s.by_size[1].len(), 8);
        assert!(s.by_size[2].is_empty());
        for t in s.by_size[3].iter() {
            assert!(principal_c(&meta_ctx(), t).is_ok());
        }
        let printed: Vec<String> = s.by_size[3].iter().map(|t| t.to_string()).collect();
        assert!(printed.contains(&"K x".to_string()));
        assert!(printed.contains(&"x * y".to_string()));
        assert!(!printed.contains(&"K * K".to_string()));
    }

    #[test]
    fn ccl_instances_are_ground_and_typed() {
        for i in ccl_terms(5, 2) {
            assert!(i.term.is_fully_instantiated());
            assert!(i.ty.is_ground());
        }
    }

    #[test]
    fn random_terms_are_typed_and_deterministic() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for size in [5, 9, 15] {
            let a = random_ls(&mut r1, size, 2, 1000).unwrap();
            let b = random_ls(&mut r2, size, 2, 1000).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.term.size(), size);
            assert_eq!(infer(&a.ctx, &a.term), Ok(a.ty));
            let c = random_ccl(&mut r1, size, 2, 1000).unwrap();
            let d = random_ccl(&mut r2, size, 2, 1000).unwrap();
            assert_eq!(c, d);
            assert_eq!(c.term.size(), size);
        }
    }
}
