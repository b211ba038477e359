//! The type language shared by both calculi.
//!
//! m-types are built from atoms, negated atoms, conjunction and disjunction.
//! Negation is not a constructor: it is the de Morgan dual computed by
//! [`negate`], so every [`MType`] is in negation-normal form by construction.
//! A full type ([`Ty`]) is either an m-type or `⊥`.
//!
//! Metavariables only appear while inferring combinator instantiations. A
//! metavariable carries a polarity flag, which is how the negation of a
//! not-yet-known type is represented.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Identifier used for atoms and term variables.
pub type Name = Arc<str>;

/// An m-type.
///
/// Stored as a polarity flag over a node, where a disjunction is the negated
/// conjunction of the negated parts. Every m-type has exactly one such
/// representation, so structural equality is type equality, and
/// [`negate`] only flips the flag. Use [`MType::view`] to inspect a type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MType {
    neg: bool,
    node: Node,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    Atom(Name),
    /// Inference metavariable.
    Meta(u32),
    Conj(Arc<(MType, MType)>),
}

/// The outermost constructor of an m-type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MView<'a> {
    Atom(&'a Name),
    NegAtom(&'a Name),
    Conj(MType, MType),
    Disj(MType, MType),
    /// Metavariable; `true` means "the negation of".
    Meta(u32, bool),
}

/// A type: an m-type or `⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    M(MType),
    Bottom,
}

impl MType {
    pub fn atom(name: &str) -> MType {
        MType::atom_named(name.into())
    }

    pub fn neg_atom(name: &str) -> MType {
        MType::neg_atom_named(name.into())
    }

    pub fn atom_named(name: Name) -> MType {
        MType {
            neg: false,
            node: Node::Atom(name),
        }
    }

    pub fn neg_atom_named(name: Name) -> MType {
        MType {
            neg: true,
            node: Node::Atom(name),
        }
    }

    pub fn conj(a: MType, b: MType) -> MType {
        MType {
            neg: false,
            node: Node::Conj(Arc::new((a, b))),
        }
    }

    pub fn disj(a: MType, b: MType) -> MType {
        MType {
            neg: true,
            node: Node::Conj(Arc::new((negate(&a), negate(&b)))),
        }
    }

    pub fn meta(id: u32) -> MType {
        MType::meta_pol(id, false)
    }

    /// The metavariable `id`, negated when `neg` is set.
    pub fn meta_pol(id: u32, neg: bool) -> MType {
        MType {
            neg,
            node: Node::Meta(id),
        }
    }

    pub fn view(&self) -> MView<'_> {
        match (&self.node, self.neg) {
            (Node::Atom(n), false) => MView::Atom(n),
            (Node::Atom(n), true) => MView::NegAtom(n),
            (Node::Meta(i), neg) => MView::Meta(*i, neg),
            (Node::Conj(p), false) => MView::Conj(p.0.clone(), p.1.clone()),
            (Node::Conj(p), true) => MView::Disj(negate(&p.0), negate(&p.1)),
        }
    }

    pub fn is_conj(&self) -> bool {
        matches!(self.node, Node::Conj(_)) && !self.neg
    }

    pub fn is_disj(&self) -> bool {
        matches!(self.node, Node::Conj(_)) && self.neg
    }

    /// `(id, negated)` if this is a metavariable.
    pub fn as_meta(&self) -> Option<(u32, bool)> {
        match self.node {
            Node::Meta(i) => Some((i, self.neg)),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match &self.node {
            Node::Atom(_) => true,
            Node::Meta(_) => false,
            Node::Conj(p) => p.0.is_ground() && p.1.is_ground(),
        }
    }

    pub fn contains_meta(&self, id: u32) -> bool {
        match &self.node {
            Node::Atom(_) => false,
            Node::Meta(i) => *i == id,
            Node::Conj(p) => p.0.contains_meta(id) || p.1.contains_meta(id),
        }
    }

    /// Metavariable ids in order of first occurrence (left to right).
    pub fn metas_into(&self, out: &mut Vec<u32>) {
        match &self.node {
            Node::Atom(_) => {}
            Node::Meta(i) => {
                if !out.contains(i) {
                    out.push(*i)
                }
            }
            Node::Conj(p) => {
                p.0.metas_into(out);
                p.1.metas_into(out);
            }
        }
    }

    pub fn max_meta(&self) -> Option<u32> {
        match &self.node {
            Node::Atom(_) => None,
            Node::Meta(i) => Some(*i),
            Node::Conj(p) => p.0.max_meta().max(p.1.max_meta()),
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match &self.node {
            Node::Conj(p) => 1 + p.0.size() + p.1.size(),
            _ => 1,
        }
    }

    /// Rebuilds the type bottom-up, replacing each metavariable `(id, neg)`
    /// by `f(id, neg)`.
    pub fn map_metas(&self, f: &mut impl FnMut(u32, bool) -> MType) -> MType {
        match &self.node {
            Node::Atom(_) => self.clone(),
            Node::Meta(i) => f(*i, self.neg),
            Node::Conj(p) => MType {
                neg: self.neg,
                node: Node::Conj(Arc::new((p.0.map_metas(f), p.1.map_metas(f)))),
            },
        }
    }
}

impl Ty {
    pub fn as_m(&self) -> Option<&MType> {
        match self {
            Ty::M(m) => Some(m),
            Ty::Bottom => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Ty::M(m) => m.is_ground(),
            Ty::Bottom => true,
        }
    }
}

impl From<MType> for Ty {
    fn from(m: MType) -> Ty {
        Ty::M(m)
    }
}

/// The de Morgan dual `A⊥`.
pub fn negate(a: &MType) -> MType {
    MType {
        neg: !a.neg,
        node: a.node.clone(),
    }
}

/// Calls `f` on every m-type of depth at most `depth` built from `atoms`,
/// where atoms and negated atoms have depth 1. Types passed to `f` are only
/// valid for the duration of the call; the deepest level is produced by
/// overwriting two scratch nodes in place.
pub fn for_each_mtype(depth: usize, atoms: &[Name], mut f: impl FnMut(&MType)) {
    if depth == 0 || atoms.is_empty() {
        return;
    }
    let mut base = Vec::new();
    for a in atoms {
        base.push(MType::atom_named(a.clone()));
        base.push(MType::neg_atom_named(a.clone()));
    }
    let mut level = base.clone();
    for _ in 1..depth.saturating_sub(1) {
        let mut next = base.clone();
        for l in &level {
            for r in &level {
                next.push(MType::conj(l.clone(), r.clone()));
                next.push(MType::disj(l.clone(), r.clone()));
            }
        }
        level = next;
    }
    base.iter().for_each(&mut f);
    if depth == 1 {
        return;
    }
    for l in &level {
        let mut c = MType::conj(l.clone(), base[0].clone());
        let mut d = MType::disj(l.clone(), base[0].clone());
        for r in &level {
            set_second(&mut c, r.clone());
            f(&c);
            // `d` stores the negated parts of `l ∨ r`.
            set_second(&mut d, negate(r));
            f(&d);
        }
    }
}

fn set_second(t: &mut MType, part: MType) {
    if let Node::Conj(p) = &mut t.node {
        match Arc::get_mut(p) {
            Some(slot) => slot.1 = part,
            None => *p = Arc::new((p.0.clone(), part)),
        }
    }
}

fn fmt_operand(f: &mut fmt::Formatter<'_>, m: &MType) -> fmt::Result {
    if matches!(m.node, Node::Conj(_)) {
        write!(f, "({m})")
    } else {
        write!(f, "{m}")
    }
}

// Compound operands are always parenthesised: `~a | (b | a)`.
impl fmt::Display for MType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.view() {
            MView::Atom(n) => write!(f, "{n}"),
            MView::NegAtom(n) => write!(f, "~{n}"),
            MView::Conj(a, b) => {
                fmt_operand(f, &a)?;
                f.write_str(" & ")?;
                fmt_operand(f, &b)
            }
            MView::Disj(a, b) => {
                fmt_operand(f, &a)?;
                f.write_str(" | ")?;
                fmt_operand(f, &b)
            }
            MView::Meta(i, false) => write!(f, "?{i}"),
            MView::Meta(i, true) => write!(f, "~?{i}"),
        }
    }
}

impl fmt::Debug for MType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MType({self})")
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::M(m) => m.fmt(f),
            Ty::Bottom => f.write_str("#"),
        }
    }
}

/// Declarations of variables, `Γ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    decls: BTreeMap<Name, Ty>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn get(&self, x: &str) -> Option<&Ty> {
        self.decls.get(x)
    }

    /// Adds or shadows a declaration.
    pub fn insert(&mut self, x: Name, ty: Ty) {
        self.decls.insert(x, ty);
    }

    pub fn with(&self, x: Name, ty: Ty) -> Context {
        let mut c = self.clone();
        c.insert(x, ty);
        c
    }

    pub fn without(&self, x: &str) -> Context {
        let mut c = self.clone();
        c.decls.remove(x);
        c
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Ty)> {
        self.decls.iter()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn map_types(&self, mut f: impl FnMut(&Ty) -> Ty) -> Context {
        Context {
            decls: self.decls.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }

    pub fn max_meta(&self) -> Option<u32> {
        self.decls
            .values()
            .filter_map(|t| t.as_m().and_then(MType::max_meta))
            .max()
    }
}

impl FromIterator<(Name, Ty)> for Context {
    fn from_iter<I: IntoIterator<Item = (Name, Ty)>>(iter: I) -> Self {
        Context {
            decls: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, t)) in self.decls.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}:{t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("cannot unify {0} with {1}")]
    Clash(MType, MType),
    #[error("occurs check: ?{0} occurs in {1}")]
    Occurs(u32, MType),
}

/// Bindings from metavariable id to m-type.
///
/// Bindings may mention other bound metavariables while unification is in
/// progress; [`Substitution::normalized`] resolves them so that applying the
/// substitution is idempotent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: HashMap<u32, MType>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn get(&self, id: u32) -> Option<&MType> {
        self.bindings.get(&id)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bind(&mut self, id: u32, t: MType) {
        self.bindings.insert(id, t);
    }

    pub fn apply(&self, t: &MType) -> MType {
        if t.is_ground() {
            return t.clone();
        }
        t.map_metas(&mut |i, neg| match self.bindings.get(&i) {
            Some(bound) => {
                let r = self.apply(bound);
                if neg {
                    negate(&r)
                } else {
                    r
                }
            }
            None => MType::meta_pol(i, neg),
        })
    }

    pub fn apply_ty(&self, t: &Ty) -> Ty {
        match t {
            Ty::M(m) => Ty::M(self.apply(m)),
            Ty::Bottom => Ty::Bottom,
        }
    }

    /// Resolves one level: follows bindings of a root metavariable only.
    fn shallow(&self, t: &MType) -> MType {
        let mut cur = t.clone();
        while let Some((i, neg)) = cur.as_meta() {
            match self.bindings.get(&i) {
                Some(b) => cur = if neg { negate(b) } else { b.clone() },
                None => break,
            }
        }
        cur
    }

    /// Adds the constraint `a ≐ b`.
    pub fn unify(&mut self, a: &MType, b: &MType) -> Result<(), UnifyError> {
        let a = self.shallow(a);
        let b = self.shallow(b);
        match (a.as_meta(), b.as_meta()) {
            (Some((i, p)), Some((j, q))) if i == j => {
                return if p == q {
                    Ok(())
                } else {
                    Err(UnifyError::Clash(a.clone(), b.clone()))
                };
            }
            (Some((i, p)), _) | (_, Some((i, p))) => {
                let other = if a.as_meta() == Some((i, p)) { &b } else { &a };
                let full = self.apply(other);
                if full.contains_meta(i) {
                    return Err(UnifyError::Occurs(i, full));
                }
                let bound = if p { negate(&full) } else { full };
                self.bindings.insert(i, bound);
                return Ok(());
            }
            _ => {}
        }
        if a.neg == b.neg {
            match (&a.node, &b.node) {
                (Node::Atom(x), Node::Atom(y)) if x == y => return Ok(()),
                (Node::Conj(p), Node::Conj(q)) => {
                    // Both sides share the polarity, so the stored parts can
                    // be matched directly.
                    self.unify(&p.0, &q.0)?;
                    return self.unify(&p.1, &q.1);
                }
                _ => {}
            }
        }
        Err(UnifyError::Clash(self.apply(&a), self.apply(&b)))
    }

    /// Returns an equivalent substitution whose bindings mention no bound
    /// metavariable.
    pub fn normalized(&self) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .map(|(k, v)| (*k, self.apply(v)))
                .collect(),
        }
    }
}

/// Most general unifier of a list of constraints.
pub fn unify(constraints: &[(MType, MType)]) -> Result<Substitution, UnifyError> {
    let mut s = Substitution::new();
    for (a, b) in constraints {
        s.unify(a, b)?;
    }
    Ok(s.normalized())
}
