//! Concrete syntax for types, λs-terms, c-terms and contexts.
//!
//! Types: `a`, `~a`, `A & B`, `A | B` (both right-associative, `&` binds
//! tighter), `#` for `⊥`. λs-terms: `\x:T. t`, `t * u`, `<t, u>`,
//! `s1(t : A | B)`, `s2(t : A | B)`. c-terms: `K S C P Q1 Q2` with optional
//! `[T, ...]` instantiation, `I` as sugar for `S K K`, juxtaposition for
//! application, `*` for `⋆`. In both term languages `*` has the lowest
//! precedence and does not associate.
//!
//! Unicode aliases accepted on input: `λ ⋆ ⟨ ⟩ σ1 σ2 ∧ ∨ ⊥ ¬ ⊢`, and a
//! postfix `⊥`/`ᗮ` directly after an atom for its negation. Output is ASCII.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::ccl::{self, CTerm, Comb};
use crate::lambda_sym::LsTerm;
use crate::types::{negate, Context, MType, Ty};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at {span}")]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    Lambda,
    Dot,
    Colon,
    Comma,
    Star,
    LAngle,
    RAngle,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Tilde,
    Amp,
    Bar,
    Bottom,
    /// Postfix `⊥` glued to an identifier.
    PostNeg,
    Turnstile,
    ReducesStar,
    ReducesPlus,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Num(n) => return write!(f, "`{n}`"),
            Tok::Lambda => "`\\`",
            Tok::Dot => "`.`",
            Tok::Colon => "`:`",
            Tok::Comma => "`,`",
            Tok::Star => "`*`",
            Tok::LAngle => "`<`",
            Tok::RAngle => "`>`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::Bar => "`|`",
            Tok::Bottom => "`#`",
            Tok::PostNeg => "postfix negation",
            Tok::Turnstile => "`|-`",
            Tok::ReducesStar => "`=>*`",
            Tok::ReducesPlus => "`=>+`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(start, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let span = |end: usize| SourceSpan { start, end };
        let single = |t: Tok| (t, span(start + c.len_utf8()));
        if is_ident_start(c) {
            let mut end = start;
            while let Some(&(i, d)) = it.peek() {
                if is_ident_char(d) {
                    end = i + d.len_utf8();
                    it.next();
                } else {
                    break;
                }
            }
            while let Some(&(i, '\'')) = it.peek() {
                end = i + 1;
                it.next();
            }
            out.push((Tok::Ident(src[start..end].to_string()), span(end)));
            if let Some(&(i, d)) = it.peek() {
                if d == '⊥' || d == 'ᗮ' {
                    it.next();
                    out.push((Tok::PostNeg, SourceSpan { start: i, end: i + d.len_utf8() }));
                }
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, d)) = it.peek() {
                if d.is_ascii_digit() {
                    end = i + 1;
                    it.next();
                } else {
                    break;
                }
            }
            let n = src[start..end].parse().map_err(|_| ParseError {
                message: "number too large".into(),
                span: span(end),
            })?;
            out.push((Tok::Num(n), span(end)));
            continue;
        }
        if c == 'σ' {
            // σ1 / σ2
            it.next();
            match it.peek() {
                Some(&(i, d @ ('1' | '2'))) => {
                    it.next();
                    out.push((Tok::Ident(format!("s{d}")), span(i + 1)));
                    continue;
                }
                _ => {
                    return Err(ParseError {
                        message: "expected 1 or 2 after σ".into(),
                        span: span(start + c.len_utf8()),
                    })
                }
            }
        }
        it.next();
        let tok = match c {
            '\\' | 'λ' => single(Tok::Lambda),
            '.' => single(Tok::Dot),
            ':' => single(Tok::Colon),
            ',' => single(Tok::Comma),
            '*' | '⋆' => single(Tok::Star),
            '<' | '⟨' => single(Tok::LAngle),
            '>' | '⟩' => single(Tok::RAngle),
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            '[' => single(Tok::LBrack),
            ']' => single(Tok::RBrack),
            '~' | '¬' => single(Tok::Tilde),
            '&' | '∧' => single(Tok::Amp),
            '∨' => single(Tok::Bar),
            '#' | '⊥' => single(Tok::Bottom),
            '⊢' => single(Tok::Turnstile),
            '|' => {
                if let Some(&(_, '-')) = it.peek() {
                    it.next();
                    (Tok::Turnstile, span(start + 2))
                } else {
                    single(Tok::Bar)
                }
            }
            '=' => {
                let ok = matches!(it.next(), Some((_, '>')));
                match it.next() {
                    Some((i, '*')) if ok => (Tok::ReducesStar, span(i + 1)),
                    Some((i, '+')) if ok => (Tok::ReducesPlus, span(i + 1)),
                    _ => {
                        return Err(ParseError {
                            message: "expected `=>*` or `=>+`".into(),
                            span: span(start + 1),
                        })
                    }
                }
            }
            other => {
                return Err(ParseError {
                    message: format!("unexpected character `{other}`"),
                    span: span(start + other.len_utf8()),
                })
            }
        };
        out.push(tok);
    }
    out.push((Tok::Eof, SourceSpan { start: src.len(), end: src.len() }));
    Ok(out)
}

const LS_KEYWORDS: [&str; 2] = ["s1", "s2"];

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            message: message.into(),
            span: self.span(),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {want}, found {}", self.peek()))
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == want {
            self.bump();
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.err(format!("unexpected {t}")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.err(format!("expected identifier, found {t}")),
        }
    }

    // ---- types ----

    fn ty(&mut self) -> Result<Ty, ParseError> {
        if self.eat(&Tok::Bottom) {
            return Ok(Ty::Bottom);
        }
        self.mtype().map(Ty::M)
    }

    fn mtype(&mut self) -> Result<MType, ParseError> {
        let l = self.conj()?;
        if self.eat(&Tok::Bar) {
            Ok(MType::disj(l, self.mtype()?))
        } else {
            Ok(l)
        }
    }

    fn conj(&mut self) -> Result<MType, ParseError> {
        let l = self.unary()?;
        if self.eat(&Tok::Amp) {
            Ok(MType::conj(l, self.conj()?))
        } else {
            Ok(l)
        }
    }

    fn unary(&mut self) -> Result<MType, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(negate(&self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let t = self.mtype()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => {
                if !s.starts_with(|c: char| c.is_ascii_lowercase()) {
                    return self.err(format!("atoms are lowercase identifiers, found `{s}`"));
                }
                self.bump();
                if self.eat(&Tok::PostNeg) {
                    Ok(MType::neg_atom(&s))
                } else {
                    Ok(MType::atom(&s))
                }
            }
            Tok::Bottom => self.err("`#` is not an m-type"),
            t => self.err(format!("expected a type, found {t}")),
        }
    }

    // ---- λs ----

    fn ls_term(&mut self) -> Result<LsTerm, ParseError> {
        let l = self.ls_simple()?;
        if self.eat(&Tok::Star) {
            let r = self.ls_simple()?;
            if *self.peek() == Tok::Star {
                return self.err("`*` does not associate; add parentheses");
            }
            Ok(LsTerm::Star(Arc::new(l), Arc::new(r)))
        } else {
            Ok(l)
        }
    }

    fn ls_simple(&mut self) -> Result<LsTerm, ParseError> {
        match self.peek().clone() {
            Tok::Lambda => {
                self.bump();
                let x = self.ls_var()?;
                if *self.peek() != Tok::Colon {
                    return self.err(format!("missing type annotation for binder `{x}`"));
                }
                self.bump();
                let a = self.mtype()?;
                self.expect(Tok::Dot)?;
                let body = self.ls_term()?;
                Ok(LsTerm::Lam(x.into(), a, Arc::new(body)))
            }
            Tok::LAngle => {
                self.bump();
                let u = self.ls_term()?;
                self.expect(Tok::Comma)?;
                let v = self.ls_term()?;
                self.expect(Tok::RAngle)?;
                Ok(LsTerm::Pair(Arc::new(u), Arc::new(v)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ls_term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if LS_KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                self.expect(Tok::LParen)?;
                let t = self.ls_term()?;
                if *self.peek() != Tok::Colon {
                    return self.err(format!("missing disjunction annotation for `{s}(...)`"));
                }
                self.bump();
                let at = self.span();
                let a = self.mtype()?;
                if !a.is_disj() {
                    return Err(ParseError {
                        message: format!("injection annotation must be a disjunction, found {a}"),
                        span: at,
                    });
                }
                self.expect(Tok::RParen)?;
                Ok(if s == "s1" {
                    LsTerm::Inj1(Arc::new(t), a)
                } else {
                    LsTerm::Inj2(Arc::new(t), a)
                })
            }
            Tok::Ident(_) => Ok(LsTerm::Var(self.ls_var()?.into())),
            t => self.err(format!("expected a term, found {t}")),
        }
    }

    fn ls_var(&mut self) -> Result<String, ParseError> {
        let x = self.ident()?;
        if LS_KEYWORDS.contains(&x.as_str()) {
            return Err(ParseError {
                message: format!("`{x}` is reserved"),
                span: self.toks[self.pos - 1].1,
            });
        }
        Ok(x)
    }

    // ---- CCL ----

    fn c_term(&mut self) -> Result<CTerm, ParseError> {
        let l = self.c_app()?;
        if self.eat(&Tok::Star) {
            let r = self.c_app()?;
            if *self.peek() == Tok::Star {
                return self.err("`*` does not associate; add parentheses");
            }
            Ok(CTerm::Star(Arc::new(l), Arc::new(r)))
        } else {
            Ok(l)
        }
    }

    fn c_starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen)
    }

    fn c_app(&mut self) -> Result<CTerm, ParseError> {
        let mut head = self.c_atom()?;
        while self.c_starts_atom() {
            let arg = self.c_atom()?;
            head = CTerm::App(Arc::new(head), Arc::new(arg));
        }
        Ok(head)
    }

    fn c_atom(&mut self) -> Result<CTerm, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.c_term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => {
                self.bump();
                let c = match s.as_str() {
                    "I" => return Ok(ccl::identity()),
                    "K" => Comb::K,
                    "S" => Comb::S,
                    "C" => Comb::C,
                    "P" => Comb::P,
                    "Q1" => Comb::Q1,
                    "Q2" => Comb::Q2,
                    _ => return Ok(CTerm::Var(s.into())),
                };
                if *self.peek() == Tok::LBrack {
                    self.bump();
                    let mut ps = vec![self.mtype()?];
                    while self.eat(&Tok::Comma) {
                        ps.push(self.mtype()?);
                    }
                    self.expect(Tok::RBrack)?;
                    Ok(CTerm::Comb(c, Some(ps.into())))
                } else {
                    Ok(CTerm::Comb(c, None))
                }
            }
            t => self.err(format!("expected a c-term, found {t}")),
        }
    }
}

pub fn parse_type(s: &str) -> Result<Ty, ParseError> {
    let mut p = Parser::new(s)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_mtype(s: &str) -> Result<MType, ParseError> {
    let mut p = Parser::new(s)?;
    let t = p.mtype()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_ls(s: &str) -> Result<LsTerm, ParseError> {
    let mut p = Parser::new(s)?;
    let t = p.ls_term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_c(s: &str) -> Result<CTerm, ParseError> {
    let mut p = Parser::new(s)?;
    let t = p.c_term()?;
    p.finish()?;
    Ok(t)
}

/// `x:T, y:U, ...`; an empty string is the empty context.
pub fn parse_context(s: &str) -> Result<Context, ParseError> {
    let mut p = Parser::new(s)?;
    let ctx = p.context()?;
    p.finish()?;
    Ok(ctx)
}

impl Parser {
    fn context(&mut self) -> Result<Context, ParseError> {
        let mut ctx = Context::new();
        if matches!(self.peek(), Tok::Eof | Tok::Turnstile) {
            return Ok(ctx);
        }
        loop {
            let x = self.ident()?;
            self.expect(Tok::Colon)?;
            let t = self.ty()?;
            ctx.insert(x.into(), t);
            if !self.eat(&Tok::Comma) {
                return Ok(ctx);
            }
        }
    }
}

fn print_ls(t: &LsTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        LsTerm::Var(x) => f.write_str(x),
        LsTerm::Lam(x, a, b) => {
            write!(f, "\\{x}:{a}. ")?;
            print_ls(b, f)
        }
        LsTerm::Star(u, v) => {
            if matches!(**u, LsTerm::Star(..) | LsTerm::Lam(..)) {
                f.write_str("(")?;
                print_ls(u, f)?;
                f.write_str(")")?;
            } else {
                print_ls(u, f)?;
            }
            f.write_str(" * ")?;
            if matches!(**v, LsTerm::Star(..)) {
                f.write_str("(")?;
                print_ls(v, f)?;
                f.write_str(")")
            } else {
                print_ls(v, f)
            }
        }
        LsTerm::Pair(u, v) => {
            f.write_str("<")?;
            print_ls(u, f)?;
            f.write_str(", ")?;
            print_ls(v, f)?;
            f.write_str(">")
        }
        LsTerm::Inj1(u, a) | LsTerm::Inj2(u, a) => {
            f.write_str(if matches!(t, LsTerm::Inj1(..)) { "s1(" } else { "s2(" })?;
            print_ls(u, f)?;
            write!(f, " : {a})")
        }
    }
}

impl fmt::Display for LsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_ls(self, f)
    }
}

fn print_c(t: &CTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        CTerm::Var(x) => f.write_str(x),
        CTerm::Comb(c, None) => write!(f, "{c}"),
        CTerm::Comb(c, Some(ps)) => {
            write!(f, "{c}[")?;
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str("]")
        }
        CTerm::App(u, v) => {
            if matches!(**u, CTerm::Star(..)) {
                f.write_str("(")?;
                print_c(u, f)?;
                f.write_str(")")?;
            } else {
                print_c(u, f)?;
            }
            f.write_str(" ")?;
            if matches!(**v, CTerm::App(..) | CTerm::Star(..)) {
                f.write_str("(")?;
                print_c(v, f)?;
                f.write_str(")")
            } else {
                print_c(v, f)
            }
        }
        CTerm::Star(u, v) => {
            for (i, side) in [u, v].into_iter().enumerate() {
                if i == 1 {
                    f.write_str(" * ")?;
                }
                if matches!(**side, CTerm::Star(..)) {
                    f.write_str("(")?;
                    print_c(side, f)?;
                    f.write_str(")")?;
                } else {
                    print_c(side, f)?;
                }
            }
            Ok(())
        }
    }
}

impl fmt::Display for CTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_c(self, f)
    }
}

/// Which calculus a term or file line belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Calculus {
    Ls,
    Ccl,
}

/// A term of either calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyTerm {
    Ls(LsTerm),
    C(CTerm),
}

impl fmt::Display for AnyTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyTerm::Ls(t) => t.fmt(f),
            AnyTerm::C(t) => t.fmt(f),
        }
    }
}

pub fn parse_term(calc: Calculus, s: &str) -> Result<AnyTerm, ParseError> {
    match calc {
        Calculus::Ls => parse_ls(s).map(AnyTerm::Ls),
        Calculus::Ccl => parse_c(s).map(AnyTerm::C),
    }
}

/// One non-comment line of a verification file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    /// `CTX |- term : type`
    Typing { ctx: Context, term: AnyTerm, ty: Ty },
    /// `term =>* term [max N]` or `term =>+ term [max N]`, checked under the
    /// context set by the most recent `@ctx` line.
    Reduces {
        ctx: Context,
        from: AnyTerm,
        to: AnyTerm,
        nonempty: bool,
        max_steps: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimLine {
    pub line: usize,
    pub calculus: Calculus,
    pub claim: Claim,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {error}")]
pub struct FileError {
    pub line: usize,
    pub error: ParseError,
}

/// Reads a verification file: one claim per line, `#` comments, and the
/// directives `@ls`, `@ccl` (switch calculus) and `@ctx x:T, ...` (context
/// for subsequent reduction claims).
pub fn parse_claims(src: &str, default: Calculus) -> Result<Vec<ClaimLine>, FileError> {
    let mut calc = default;
    let mut ctx = Context::new();
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let wrap = |error: ParseError| FileError { line, error };
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if let Some(rest) = text.strip_prefix('@') {
            let (kw, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            match kw {
                "ls" => calc = Calculus::Ls,
                "ccl" => calc = Calculus::Ccl,
                "ctx" => ctx = parse_context(arg).map_err(wrap)?,
                _ => {
                    return Err(wrap(ParseError {
                        message: format!("unknown directive `@{kw}`"),
                        span: SourceSpan { start: 0, end: text.len() },
                    }))
                }
            }
            continue;
        }
        let claim = parse_claim(text, calc, &ctx).map_err(wrap)?;
        out.push(ClaimLine {
            line,
            calculus: calc,
            claim,
        });
    }
    Ok(out)
}

fn parse_claim(text: &str, calc: Calculus, ctx: &Context) -> Result<Claim, ParseError> {
    let mut p = Parser::new(text)?;
    let has_turnstile = p.toks.iter().any(|(t, _)| *t == Tok::Turnstile);
    if has_turnstile {
        let ctx = p.context()?;
        p.expect(Tok::Turnstile)?;
        let term = match calc {
            Calculus::Ls => AnyTerm::Ls(p.ls_term()?),
            Calculus::Ccl => AnyTerm::C(p.c_term()?),
        };
        p.expect(Tok::Colon)?;
        let ty = p.ty()?;
        p.finish()?;
        return Ok(Claim::Typing { ctx, term, ty });
    }
    let from = p.any_term(calc)?;
    let nonempty = match p.bump() {
        Tok::ReducesStar => false,
        Tok::ReducesPlus => true,
        t => {
            p.pos -= 1;
            return p.err(format!("expected `|-`, `=>*` or `=>+`, found {t}"));
        }
    };
    let to = p.any_term(calc)?;
    let mut max_steps = None;
    if p.eat(&Tok::LBrack) {
        match p.ident()?.as_str() {
            "max" => {}
            other => return p.err(format!("expected `max`, found `{other}`")),
        }
        let n = p.number()?;
        max_steps = Some(n);
        p.expect(Tok::RBrack)?;
    }
    p.finish()?;
    Ok(Claim::Reduces {
        ctx: ctx.clone(),
        from,
        to,
        nonempty,
        max_steps,
    })
}

impl Parser {
    fn any_term(&mut self, calc: Calculus) -> Result<AnyTerm, ParseError> {
        Ok(match calc {
            Calculus::Ls => AnyTerm::Ls(self.ls_term()?),
            Calculus::Ccl => AnyTerm::C(self.c_term()?),
        })
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            t => self.err(format!("expected a step count, found {t}")),
        }
    }
}
