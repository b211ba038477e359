//! Redex finding compared with brute-force matchers over every position.

use std::collections::BTreeSet;

use symcl_core::ccl::{find_redexes_c, infer_c, CRedex, CTerm, CclRule, Comb};
use symcl_core::enumerate::{ccl_terms, ls_terms};
use symcl_core::lambda_sym::{find_redexes, LsRedex, LsRule, LsTerm};
use symcl_core::syntax::{parse_c, parse_context};
use symcl_core::{Path, Redex, Ty};

fn ls_positions(t: &LsTerm) -> Vec<(Vec<u8>, &LsTerm)> {
    fn go<'a>(t: &'a LsTerm, p: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, &'a LsTerm)>) {
        out.push((p.clone(), t));
        let kids: Vec<&LsTerm> = match t {
            LsTerm::Var(_) => vec![],
            LsTerm::Lam(_, _, b) => vec![b],
            LsTerm::Star(u, v) | LsTerm::Pair(u, v) => vec![u, v],
            LsTerm::Inj1(u, _) | LsTerm::Inj2(u, _) => vec![u],
        };
        for (i, k) in kids.into_iter().enumerate() {
            p.push(i as u8);
            go(k, p, out);
            p.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

fn free_in(x: &str, t: &LsTerm) -> bool {
    match t {
        LsTerm::Var(y) => &**y == x,
        LsTerm::Lam(y, _, b) => &**y != x && free_in(x, b),
        LsTerm::Star(u, v) | LsTerm::Pair(u, v) => free_in(x, u) || free_in(x, v),
        LsTerm::Inj1(u, _) | LsTerm::Inj2(u, _) => free_in(x, u),
    }
}

fn is_var(t: &LsTerm, x: &str) -> bool {
    matches!(t, LsTerm::Var(y) if &**y == x)
}

fn ls_oracle(t: &LsTerm) -> BTreeSet<LsRedex> {
    let positions = ls_positions(t);
    let mut out = BTreeSet::new();
    for (p, s) in &positions {
        let at = |r| Redex::new(r, Path(p.clone()));
        match s {
            LsTerm::Star(u, v) => {
                if let LsTerm::Lam(..) = **u {
                    out.insert(at(LsRule::Beta));
                }
                if let LsTerm::Lam(..) = **v {
                    out.insert(at(LsRule::BetaPerp));
                }
                match (&**u, &**v) {
                    (LsTerm::Pair(..), LsTerm::Inj1(..)) => out.insert(at(LsRule::Pi1)),
                    (LsTerm::Pair(..), LsTerm::Inj2(..)) => out.insert(at(LsRule::Pi2)),
                    (LsTerm::Inj1(..), LsTerm::Pair(..)) => out.insert(at(LsRule::Pi1Perp)),
                    (LsTerm::Inj2(..), LsTerm::Pair(..)) => out.insert(at(LsRule::Pi2Perp)),
                    _ => false,
                };
            }
            LsTerm::Lam(x, _, b) => {
                if let LsTerm::Star(u, v) = &**b {
                    if is_var(v, x) && !free_in(x, u) {
                        out.insert(at(LsRule::Eta));
                    }
                    if is_var(u, x) && !free_in(x, v) {
                        out.insert(at(LsRule::EtaPerp));
                    }
                }
            }
            _ => {}
        }
    }
    // triv: a ⋆-node p, and strictly inside it an abstraction λy.v with v a
    // ⋆-term free of y and of every name bound on the way from p down to it.
    for (p, s) in &positions {
        if !matches!(s, LsTerm::Star(..)) {
            continue;
        }
        for (q, l) in &positions {
            if q.len() <= p.len() || !q.starts_with(p) {
                continue;
            }
            let LsTerm::Lam(y, _, body) = l else { continue };
            if !matches!(**body, LsTerm::Star(..)) || free_in(y, body) {
                continue;
            }
            let captured = positions.iter().any(|(r, b)| {
                r.len() >= p.len()
                    && r.len() < q.len()
                    && q.starts_with(r)
                    && matches!(b, LsTerm::Lam(z, _, _) if free_in(z, body))
            });
            if !captured {
                out.insert(Redex::with_site(
                    LsRule::Triv,
                    Path(p.clone()),
                    Path(q[p.len()..].to_vec()),
                ));
            }
        }
    }
    out
}

#[test]
fn ls_redexes_match_brute_force() {
    let corpus = ls_terms(7, 2);
    assert!(corpus.len() > 1000);
    let mut triv = 0;
    for inst in &corpus {
        let got: Vec<LsRedex> = find_redexes(&inst.ctx, &inst.term);
        let set: BTreeSet<LsRedex> = got.iter().cloned().collect();
        assert_eq!(set.len(), got.len(), "duplicates for {}", inst.term);
        assert_eq!(set, ls_oracle(&inst.term), "redexes of {}", inst.term);
        triv += got.iter().filter(|r| r.rule == LsRule::Triv).count();
    }
    assert!(triv > 0, "corpus exercises triv");
}

fn c_positions(t: &CTerm) -> Vec<(Vec<u8>, &CTerm)> {
    fn go<'a>(t: &'a CTerm, p: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, &'a CTerm)>) {
        out.push((p.clone(), t));
        if let CTerm::App(u, v) | CTerm::Star(u, v) = t {
            for (i, k) in [u, v].into_iter().enumerate() {
                p.push(i as u8);
                go(k, p, out);
                p.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

fn head(t: &CTerm, c: Comb) -> bool {
    matches!(t, CTerm::Comb(d, _) if *d == c)
}

/// `c a`, returning `a`.
fn ap1(t: &CTerm, c: Comb) -> Option<&CTerm> {
    match t {
        CTerm::App(f, a) if head(f, c) => Some(a),
        _ => None,
    }
}

/// `c a b`, returning `(a, b)`.
fn ap2(t: &CTerm, c: Comb) -> Option<(&CTerm, &CTerm)> {
    match t {
        CTerm::App(f, b) => ap1(f, c).map(|a| (a, &**b)),
        _ => None,
    }
}

fn ap3(t: &CTerm, c: Comb) -> bool {
    matches!(t, CTerm::App(f, _) if ap2(f, c).is_some())
}

fn identity(t: &CTerm) -> bool {
    matches!(ap2(t, Comb::S), Some((a, b)) if head(a, Comb::K) && head(b, Comb::K))
}

fn ccl_oracle(t: &CTerm, bottom: bool) -> BTreeSet<CRedex> {
    let mut out = BTreeSet::new();
    for (p, s) in c_positions(t) {
        let at = |r| Redex::new(r, Path(p.clone()));
        if ap2(s, Comb::K).is_some() {
            out.insert(at(CclRule::K));
        }
        if ap3(s, Comb::S) {
            out.insert(at(CclRule::S));
        }
        if let Some((l, r)) = ap2(s, Comb::C) {
            if ap1(l, Comb::K).is_some() && identity(r) {
                out.insert(at(CclRule::ER));
            }
            if identity(l) && ap1(r, Comb::K).is_some() {
                out.insert(at(CclRule::EL));
            }
            if bottom && !p.is_empty() && ap1(l, Comb::K).is_some() && ap1(r, Comb::K).is_some() {
                out.insert(Redex::with_site(CclRule::Simp, Path::root(), Path(p.clone())));
            }
        }
        if let CTerm::Star(l, r) = s {
            if ap2(l, Comb::C).is_some() {
                out.insert(at(CclRule::CR));
            }
            if ap2(r, Comb::C).is_some() {
                out.insert(at(CclRule::CL));
            }
            let pair = |x: &CTerm| ap2(x, Comb::P).is_some();
            let q = |x: &CTerm, c| ap1(x, c).is_some();
            if pair(l) && q(r, Comb::Q1) {
                out.insert(at(CclRule::Pq1));
            }
            if pair(l) && q(r, Comb::Q2) {
                out.insert(at(CclRule::Pq2));
            }
            if q(l, Comb::Q1) && pair(r) {
                out.insert(at(CclRule::Qp1));
            }
            if q(l, Comb::Q2) && pair(r) {
                out.insert(at(CclRule::Qp2));
            }
        }
    }
    out
}

#[test]
fn ccl_redexes_match_brute_force() {
    let corpus = ccl_terms(8, 2);
    assert!(corpus.len() > 1000);
    let mut seen = BTreeSet::new();
    for inst in &corpus {
        let got: Vec<CRedex> = find_redexes_c(&inst.ctx, &inst.term);
        let set: BTreeSet<CRedex> = got.iter().cloned().collect();
        assert_eq!(set.len(), got.len(), "duplicates for {}", inst.term);
        let bottom = infer_c(&inst.ctx, &inst.term) == Ok(Ty::Bottom);
        assert_eq!(set, ccl_oracle(&inst.term, bottom), "redexes of {}", inst.term);
        seen.extend(got.iter().map(|r| r.rule));
    }
    assert!(seen.len() >= 4, "rules exercised: {seen:?}");
}

#[test]
fn ccl_redexes_match_brute_force_on_larger_terms() {
    let i = "(S[a, a | a, a] K[a, ~a & ~a] K[a, a])";
    let cases = [
        ("C (K y) (K z) * C (K y') (K z')".to_string(), "y:~b, z:b, y':~c, z':c"),
        (format!("C (K u) {i}"), "u:~a"),
        (format!("C {i} (K u) * x"), "u:~a, x:a"),
        ("S u v w".into(), "u:~a | (~b | c), v:~a | b, w:a"),
        ("P u v * Q1 w".into(), "u:a, v:b, w:~a"),
        ("P u v * Q2 w".into(), "u:a, v:b, w:~b"),
        ("Q1 w * P u v".into(), "u:a, v:b, w:~a"),
        ("Q2 w * P u v".into(), "u:a, v:b, w:~b"),
        ("w * K (C (K u) (K v)) x".into(), "u:~b, v:b, w:a, x:c"),
    ];
    let mut seen = BTreeSet::new();
    for (term, ctx) in cases {
        let t = parse_c(&term).unwrap();
        let ctx = parse_context(ctx).unwrap();
        let ty = infer_c(&ctx, &t).unwrap_or_else(|e| panic!("{term}: {e}"));
        let got: BTreeSet<CRedex> = find_redexes_c(&ctx, &t).into_iter().collect();
        assert_eq!(got, ccl_oracle(&t, ty == Ty::Bottom), "redexes of {term}");
        seen.extend(got.iter().map(|r| r.rule));
    }
    assert_eq!(seen.len(), CclRule::ALL.len(), "rules exercised: {seen:?}");
}
