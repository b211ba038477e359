//! Translations between the two calculi.
//!
//! [`phi`] maps λs-terms to c-terms by bracket abstraction; [`psi`] maps
//! c-terms to λs-terms, encoding application with [`pair_app`] and the
//! combinators with closed λs-terms built from the projections [`pi`].
//!
//! Both directions are type-directed: φ instantiates every combinator it
//! emits and ψ annotates every binder and injection it emits. Binders
//! introduced by ψ are named `_0`, `_1`, ..., the first such name not free in
//! the surrounding parts.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::ccl::{
    self, app, classify, comb_at, cstar, infer_c, principal_c, CTerm, CclTypeError, Comb, TermClass,
};
use crate::lambda_sym::{free_vars, infer, lam, pair, star, var, LsTerm, LsTypeError};
use crate::types::{negate, Context, MType, MView, Name, Ty};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error(transparent)]
    Ls(#[from] LsTypeError),
    #[error(transparent)]
    Ccl(#[from] CclTypeError),
    #[error("cannot abstract `{x}` from `{term}`: neither a pre-term nor a star-term")]
    NotAbstractable { x: Name, term: String },
    #[error("variable `{0}` has type #, which has no combinatory counterpart")]
    BottomVariable(Name),
    #[error("`{term}` has type {ty}, expected {expected}")]
    MacroType {
        term: String,
        ty: String,
        expected: &'static str,
    },
    #[error("instantiation of `{0}` is not determined; annotate the combinators")]
    Ambiguous(String),
}

/// Untyped bracket abstraction `l_x(t)`: combinators are left
/// uninstantiated and `l_x(x)` is `S K K`.
pub fn bracket_abstract(x: &str, t: &CTerm) -> Result<CTerm, TranslateError> {
    match t {
        CTerm::Var(y) if &**y == x => Ok(ccl::identity()),
        CTerm::Star(u, v) => Ok(app(
            app(ccl::comb(Comb::C), bracket_abstract(x, u)?),
            bracket_abstract(x, v)?,
        )),
        _ if classify(t) != TermClass::PreTerm => Err(TranslateError::NotAbstractable {
            x: x.into(),
            term: t.to_string(),
        }),
        _ if !ccl::occurs(x, t) => Ok(app(ccl::comb(Comb::K), t.clone())),
        CTerm::App(u, v) => Ok(app(
            app(ccl::comb(Comb::S), bracket_abstract(x, u)?),
            bracket_abstract(x, v)?,
        )),
        _ => unreachable!("a pre-term mentioning x is x or an application"),
    }
}

fn m_of(t: &CTerm, ty: Ty) -> Result<MType, TranslateError> {
    match ty {
        Ty::M(m) => Ok(m),
        Ty::Bottom => Err(CclTypeError::BottomOperand(t.to_string()).into()),
    }
}

/// Typed bracket abstraction of `x : a` from `t`, where `t` is fully
/// instantiated and typable under `ctx` extended with `x : a`. The result
/// is fully instantiated.
pub fn bracket_abstract_typed(
    ctx: &Context,
    x: &str,
    a: &MType,
    t: &CTerm,
) -> Result<CTerm, TranslateError> {
    let inner = ctx.with(x.into(), Ty::M(a.clone()));
    let abs = |u: &CTerm| bracket_abstract_typed(ctx, x, a, u);
    match t {
        CTerm::Var(y) if &**y == x => Ok(ccl::identity_at(a)),
        CTerm::Star(u, v) => {
            let d = m_of(v, infer_c(&inner, v)?)?;
            Ok(app(app(comb_at(Comb::C, vec![a.clone(), d]), abs(u)?), abs(v)?))
        }
        _ if classify(t) != TermClass::PreTerm => Err(TranslateError::NotAbstractable {
            x: x.into(),
            term: t.to_string(),
        }),
        _ if !ccl::occurs(x, t) => {
            let b = m_of(t, infer_c(&inner, t)?)?;
            Ok(app(comb_at(Comb::K, vec![b, negate(a)]), t.clone()))
        }
        CTerm::App(u, v) => {
            let d = m_of(v, infer_c(&inner, v)?)?;
            let b = m_of(t, infer_c(&inner, t)?)?;
            Ok(app(
                app(comb_at(Comb::S, vec![a.clone(), d, b]), abs(u)?),
                abs(v)?,
            ))
        }
        _ => unreachable!("a pre-term mentioning x is x or an application"),
    }
}

/// The translation φ of a well-typed λs-term into CCL.
pub fn phi(ctx: &Context, t: &LsTerm) -> Result<CTerm, TranslateError> {
    infer(ctx, t)?;
    for x in free_vars(t) {
        if ctx.get(&x) == Some(&Ty::Bottom) {
            return Err(TranslateError::BottomVariable(x));
        }
    }
    phi_in(ctx, t)
}

fn m_ls(ctx: &Context, t: &LsTerm) -> Result<MType, TranslateError> {
    match infer(ctx, t)? {
        Ty::M(m) => Ok(m),
        Ty::Bottom => Err(LsTypeError::BottomOperand(t.to_string()).into()),
    }
}

fn phi_in(ctx: &Context, t: &LsTerm) -> Result<CTerm, TranslateError> {
    match t {
        LsTerm::Var(x) => Ok(CTerm::Var(x.clone())),
        LsTerm::Lam(x, a, body) => {
            let inner = ctx.with(x.clone(), Ty::M(a.clone()));
            let b = phi_in(&inner, body)?;
            bracket_abstract_typed(ctx, x, a, &b)
        }
        LsTerm::Star(u, v) => Ok(cstar(phi_in(ctx, u)?, phi_in(ctx, v)?)),
        LsTerm::Pair(u, v) => {
            let p = comb_at(Comb::P, vec![m_ls(ctx, u)?, m_ls(ctx, v)?]);
            Ok(app(app(p, phi_in(ctx, u)?), phi_in(ctx, v)?))
        }
        LsTerm::Inj1(u, d) | LsTerm::Inj2(u, d) => {
            let MView::Disj(l, r) = d.view() else {
                return Err(LsTypeError::InjNotDisj(d.clone()).into());
            };
            let c = if matches!(t, LsTerm::Inj1(..)) { Comb::Q1 } else { Comb::Q2 };
            Ok(app(
                comb_at(c, vec![l, r]),
                phi_in(ctx, u)?,
            ))
        }
    }
}

/// First reserved name `_k` not in `avoid`.
pub fn reserved_fresh(avoid: &BTreeSet<Name>) -> Name {
    (0..)
        .map(|k| Name::from(format!("_{k}")))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply")
}

fn split_conj(t: &LsTerm, ty: &MType) -> Result<(MType, MType), TranslateError> {
    match ty.view() {
        MView::Conj(a, b) => Ok((a, b)),
        _ => Err(TranslateError::MacroType {
            term: t.to_string(),
            ty: ty.to_string(),
            expected: "a conjunction",
        }),
    }
}

/// `π_i t = λx.(t ⋆ σ_i(x))` for `t : A ∧ B`; the result has type `A`
/// (`i = 1`) or `B` (`i = 2`). Returns the term and its type.
pub fn pi(i: u8, t: &LsTerm, ty: &MType) -> Result<(LsTerm, MType), TranslateError> {
    let (a, b) = split_conj(t, ty)?;
    let x = reserved_fresh(&free_vars(t));
    let dual = MType::disj(negate(&a), negate(&b));
    let (inj, bind, out) = if i == 1 {
        (LsTerm::Inj1(Arc::new(var(&x)), dual), negate(&a), a)
    } else {
        (LsTerm::Inj2(Arc::new(var(&x)), dual), negate(&b), b)
    };
    Ok((lam(&x, bind, star(t.clone(), inj)), out))
}

/// `π_{i1...in} t = π_{i1}(... (π_{in} t))`.
pub fn pi_path(path: &[u8], t: &LsTerm, ty: &MType) -> Result<(LsTerm, MType), TranslateError> {
    let mut cur = (t.clone(), ty.clone());
    for &i in path.iter().rev() {
        cur = pi(i, &cur.0, &cur.1)?;
    }
    Ok(cur)
}

/// `[u, v] = λx.(u ⋆ ⟨v, x⟩)` for `u : A⊥ ∨ B`; the result has type `B`.
pub fn pair_app(u: &LsTerm, u_ty: &MType, v: &LsTerm) -> Result<(LsTerm, MType), TranslateError> {
    let MView::Disj(_, b) = u_ty.view() else {
        return Err(TranslateError::MacroType {
            term: u.to_string(),
            ty: u_ty.to_string(),
            expected: "a disjunction",
        });
    };
    let mut avoid = free_vars(u);
    avoid.extend(free_vars(v));
    let x = reserved_fresh(&avoid);
    Ok((
        lam(&x, negate(&b), star(u.clone(), pair(v.clone(), var(&x)))),
        b,
    ))
}

/// The closed λs-term standing for combinator `c` at instantiation `params`.
pub fn psi_comb(c: Comb, params: &[MType]) -> Result<LsTerm, TranslateError> {
    let ty = c.scheme(params);
    let xt = negate(&ty);
    let x = reserved_fresh(&BTreeSet::new());
    let xv = var(&x);
    let p = |path: &[u8]| pi_path(path, &xv, &xt);
    let body = match c {
        Comb::K => star(p(&[1])?.0, p(&[2, 2])?.0),
        Comb::S => {
            let (f, ft) = p(&[1])?;
            let (g, gt) = p(&[1, 2])?;
            let (a, _) = p(&[1, 2, 2])?;
            let (fa, fat) = pair_app(&f, &ft, &a)?;
            let (ga, _) = pair_app(&g, &gt, &a)?;
            let (l, _) = pair_app(&fa, &fat, &ga)?;
            star(l, p(&[2, 2, 2])?.0)
        }
        Comb::C => {
            let (f, ft) = p(&[1])?;
            let (g, gt) = p(&[1, 2])?;
            let (a, _) = p(&[2, 2])?;
            star(pair_app(&f, &ft, &a)?.0, pair_app(&g, &gt, &a)?.0)
        }
        Comb::P => star(pair(p(&[1])?.0, p(&[1, 2])?.0), p(&[2, 2])?.0),
        Comb::Q1 | Comb::Q2 => {
            let d = MType::disj(params[0].clone(), params[1].clone());
            let (h, _) = p(&[1])?;
            let inj = if c == Comb::Q1 {
                LsTerm::Inj1(Arc::new(h), d)
            } else {
                LsTerm::Inj2(Arc::new(h), d)
            };
            star(inj, p(&[2])?.0)
        }
    };
    Ok(lam(&x, xt, body))
}

/// The translation ψ of a typable c-term into λs. Combinator
/// instantiations are inferred; they must be fully determined.
pub fn psi(ctx: &Context, t: &CTerm) -> Result<LsTerm, TranslateError> {
    let p = principal_c(ctx, t)?;
    if !p.term.is_fully_instantiated() {
        return Err(TranslateError::Ambiguous(t.to_string()));
    }
    psi_in(ctx, &p.term)
}

fn psi_in(ctx: &Context, t: &CTerm) -> Result<LsTerm, TranslateError> {
    match t {
        CTerm::Var(x) => Ok(LsTerm::Var(x.clone())),
        CTerm::Comb(c, Some(ps)) => psi_comb(*c, ps),
        CTerm::Comb(_, None) => Err(TranslateError::Ambiguous(t.to_string())),
        CTerm::App(u, v) => {
            let ut = m_of(u, infer_c(ctx, u)?)?;
            Ok(pair_app(&psi_in(ctx, u)?, &ut, &psi_in(ctx, v)?)?.0)
        }
        CTerm::Star(u, v) => Ok(star(psi_in(ctx, u)?, psi_in(ctx, v)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_c, parse_context, parse_ls, parse_mtype};

    fn ctx(s: &str) -> Context {
        parse_context(s).unwrap()
    }

    #[test]
    fn untyped_bracket_abstraction() {
        let c = |s: &str| parse_c(s).unwrap();
        assert_eq!(bracket_abstract("x", &c("x")).unwrap(), c("S K K"));
        assert_eq!(bracket_abstract("x", &c("y")).unwrap(), c("K y"));
        assert_eq!(bracket_abstract("x", &c("x * y")).unwrap(), c("C I (K y)"));
        assert_eq!(bracket_abstract("x", &c("y x")).unwrap(), c("S (K y) I"));
        assert_eq!(bracket_abstract("x", &c("y * z")).unwrap(), c("C (K y) (K z)"));
        assert!(bracket_abstract("x", &c("(x * y) x")).is_err());
    }

    #[test]
    fn phi_examples() {
        let g = ctx("y:~a, u:a, v:b");
        let t = parse_ls("\\x:a. y * x").unwrap();
        let f = phi(&g, &t).unwrap();
        assert_eq!(f.erase(), parse_c("C (K y) I").unwrap());
        assert!(f.is_fully_instantiated());
        assert_eq!(infer_c(&g, &f).unwrap(), infer(&g, &t).unwrap());
        let t = parse_ls("<u, v>").unwrap();
        assert_eq!(phi(&g, &t).unwrap().erase(), parse_c("P u v").unwrap());
        let t = parse_ls("y * u").unwrap();
        assert_eq!(phi(&g, &t).unwrap(), parse_c("y * u").unwrap());
    }

    #[test]
    fn phi_preserves_types() {
        let g = ctx("y:~a, u:a, v:b, w:~b | c, r:(~a | ~b) & ~c");
        for s in [
            "\\x:a. y * x",
            "\\x:~c. w * <v, x>",
            "\\x:b. r * s1(<u, x> : a & b | c)",
            "s1(<u, \\x:a. y * x> : (a & ~a) | b)",
            "\\p:a & b. p * s1(y : ~a | ~b)",
        ] {
            let t = parse_ls(s).unwrap_or_else(|e| panic!("{s}: {e}"));
            let want = infer(&g, &t).unwrap_or_else(|e| panic!("{s}: {e}"));
            let f = phi(&g, &t).unwrap();
            assert_eq!(infer_c(&g, &f).unwrap(), want, "{s} -> {f}");
        }
    }

    #[test]
    fn phi_rejects_bad_input() {
        assert!(phi(&ctx("k:#"), &parse_ls("\\x:a. k").unwrap()).is_err());
        assert!(phi(&ctx(""), &parse_ls("y").unwrap()).is_err());
    }

    #[test]
    fn projections_type_check() {
        let g = ctx("t:a & b");
        let m = parse_mtype("a & b").unwrap();
        let (p1, t1) = pi(1, &var("t"), &m).unwrap();
        let (p2, t2) = pi(2, &var("t"), &m).unwrap();
        assert_eq!(infer(&g, &p1).unwrap(), Ty::M(t1.clone()));
        assert_eq!(t1, parse_mtype("a").unwrap());
        assert_eq!(infer(&g, &p2).unwrap(), Ty::M(t2));
        assert_eq!(p1.to_string(), "\\_0:~a. t * s1(_0 : ~a | ~b)");
        assert!(pi(1, &var("t"), &parse_mtype("a | b").unwrap()).is_err());
    }

    #[test]
    fn pair_app_type_checks() {
        let g = ctx("u:~a | b, v:a");
        let (t, ty) = pair_app(&var("u"), &parse_mtype("~a | b").unwrap(), &var("v")).unwrap();
        assert_eq!(ty, parse_mtype("b").unwrap());
        assert_eq!(infer(&g, &t).unwrap(), Ty::M(ty));
        assert_eq!(t.to_string(), "\\_0:~b. u * <v, _0>");
    }

    #[test]
    fn combinator_images_type_check() {
        let a = parse_mtype("a").unwrap();
        let b = parse_mtype("~b").unwrap();
        let c = parse_mtype("c & a").unwrap();
        for comb in Comb::ALL {
            let ps: Vec<MType> = [a.clone(), b.clone(), c.clone()][..comb.arity()].to_vec();
            let t = psi_comb(comb, &ps).unwrap();
            assert_eq!(
                infer(&Context::new(), &t).unwrap(),
                Ty::M(comb.scheme(&ps)),
                "{comb}: {t}"
            );
        }
    }

    #[test]
    fn psi_shapes() {
        let g = ctx("x:a, y:b");
        let k = psi(&g, &parse_c("K[a, b]").unwrap()).unwrap();
        assert_eq!(
            crate::lambda_sym::canonical(&k),
            crate::lambda_sym::canonical(&psi_comb(Comb::K, &[MType::atom("a"), MType::atom("b")]).unwrap())
        );
        let t = psi(&g, &parse_c("K x y").unwrap()).unwrap();
        assert_eq!(infer(&g, &t).unwrap(), parse_type_ok("a"));
        assert!(matches!(
            psi(&Context::new(), &parse_c("S K K").unwrap()),
            Err(TranslateError::Ambiguous(_))
        ));
        let s = psi(&ctx("u:a, w:~a"), &parse_c("w * u").unwrap()).unwrap();
        assert_eq!(s, parse_ls("w * u").unwrap());
    }

    fn parse_type_ok(s: &str) -> Ty {
        crate::syntax::parse_type(s).unwrap()
    }
}
