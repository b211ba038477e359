//! Generic rewriting machinery shared by both calculi: redex positions,
//! strategies, normalisation, reduction graphs, reachability and termination
//! checks.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::hash::Hash;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ccl::{find_redexes_c, reduce_at_c, CTerm, CclRule};
use crate::lambda_sym::{canonical, find_redexes, reduce_at, under_lambda, LsRule, LsTerm};
use crate::types::Context;

/// Child indices from the root. Abstraction body is 0, the two sides of `⋆`
/// and of a pair are 0 and 1, an injection's argument is 0; for c-terms the
/// function of an application is 0 and its argument 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<u8>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A rule instance at a position. `site` is used by the two non-local rules
/// (`triv`, `simp`) and is relative to `path`.
///
/// The derived order (path, then rule, then site) is pre-order followed by
/// rule priority, which is what the deterministic strategies rely on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Redex<R> {
    pub path: Path,
    pub rule: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub site: Option<Path>,
}

impl<R> Redex<R> {
    pub fn new(rule: R, path: Path) -> Redex<R> {
        Redex {
            path,
            rule,
            site: None,
        }
    }

    pub fn with_site(rule: R, path: Path, site: Path) -> Redex<R> {
        Redex {
            path,
            rule,
            site: Some(site),
        }
    }
}

impl<R: fmt::Display> fmt::Display for Redex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.rule, self.path)?;
        if let Some(s) = &self.site {
            write!(f, " (site {s})")?;
        }
        Ok(())
    }
}

/// A redex did not match the term it was applied to.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("stale redex: {0}")]
pub struct StaleRedex(pub String);

/// A rewriting system over some term type.
pub trait Rewriting {
    type Term: Clone + Eq + Hash + fmt::Display + fmt::Debug;
    type Rule: Copy + Ord + fmt::Display + fmt::Debug + Serialize;

    fn redexes(&self, t: &Self::Term) -> Vec<Redex<Self::Rule>>;

    fn contract(&self, t: &Self::Term, r: &Redex<Self::Rule>) -> Result<Self::Term, StaleRedex>;

    /// Representative of the equivalence class terms are identified up to.
    fn key(&self, t: &Self::Term) -> Self::Term;

    fn size(&self, t: &Self::Term) -> usize;

    /// Whether a redex at `path` lies under a binder.
    fn under_binder(&self, _t: &Self::Term, _path: &Path) -> bool {
        false
    }

    fn successors(&self, t: &Self::Term) -> Vec<(Redex<Self::Rule>, Self::Term)> {
        self.redexes(t)
            .into_iter()
            .filter_map(|r| {
                let u = self.contract(t, &r).ok()?;
                Some((r, u))
            })
            .collect()
    }
}

/// λs under a fixed context. With `omega` set, redexes under an abstraction
/// are ignored.
#[derive(Clone, Debug, Default)]
pub struct LsSystem {
    pub ctx: Context,
    pub omega: bool,
}

impl LsSystem {
    pub fn new(ctx: Context) -> LsSystem {
        LsSystem { ctx, omega: false }
    }

    pub fn omega(ctx: Context) -> LsSystem {
        LsSystem { ctx, omega: true }
    }
}

impl Rewriting for LsSystem {
    type Term = LsTerm;
    type Rule = LsRule;

    fn redexes(&self, t: &LsTerm) -> Vec<Redex<LsRule>> {
        let mut rs = find_redexes(&self.ctx, t);
        if self.omega {
            rs.retain(|r| !under_lambda(t, &r.path.0));
        }
        rs
    }

    fn contract(&self, t: &LsTerm, r: &Redex<LsRule>) -> Result<LsTerm, StaleRedex> {
        reduce_at(t, r)
    }

    fn key(&self, t: &LsTerm) -> LsTerm {
        canonical(t)
    }

    fn size(&self, t: &LsTerm) -> usize {
        t.size()
    }

    fn under_binder(&self, t: &LsTerm, path: &Path) -> bool {
        under_lambda(t, &path.0)
    }
}

/// CCL under a fixed context (needed by `simp`).
#[derive(Clone, Debug, Default)]
pub struct CclSystem {
    pub ctx: Context,
}

impl CclSystem {
    pub fn new(ctx: Context) -> CclSystem {
        CclSystem { ctx }
    }
}

impl Rewriting for CclSystem {
    type Term = CTerm;
    type Rule = CclRule;

    fn redexes(&self, t: &CTerm) -> Vec<Redex<CclRule>> {
        find_redexes_c(&self.ctx, t)
    }

    fn contract(&self, t: &CTerm, r: &Redex<CclRule>) -> Result<CTerm, StaleRedex> {
        reduce_at_c(t, r)
    }

    fn key(&self, t: &CTerm) -> CTerm {
        t.clone()
    }

    fn size(&self, t: &CTerm) -> usize {
        t.size()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    LeftmostOutermost,
    LeftmostInnermost,
    /// Leftmost-outermost among redexes not under an abstraction.
    Omega,
    /// Every redex; only meaningful for graph exploration.
    All,
}

/// The redex a deterministic strategy picks, if any.
pub fn select<S: Rewriting>(sys: &S, t: &S::Term, strategy: Strategy) -> Option<Redex<S::Rule>> {
    pick(sys, t, sys.redexes(t), strategy)
}

fn pick<S: Rewriting>(
    sys: &S,
    t: &S::Term,
    rs: Vec<Redex<S::Rule>>,
    strategy: Strategy,
) -> Option<Redex<S::Rule>> {
    match strategy {
        Strategy::LeftmostOutermost | Strategy::All => rs.into_iter().next(),
        Strategy::Omega => rs.into_iter().find(|r| !sys.under_binder(t, &r.path)),
        Strategy::LeftmostInnermost => {
            let innermost = |r: &Redex<S::Rule>| {
                !rs.iter()
                    .any(|o| o.path.0.len() > r.path.0.len() && o.path.0.starts_with(&r.path.0))
            };
            rs.iter().find(|r| innermost(r)).cloned()
        }
    }
}

/// One reduction step: the redex contracted and the resulting term.
#[derive(Clone, Debug)]
pub struct Step<S: Rewriting> {
    pub redex: Redex<S::Rule>,
    pub term: S::Term,
}

#[derive(Debug)]
pub struct Normalized<S: Rewriting> {
    pub term: S::Term,
    pub steps: Vec<Step<S>>,
}

#[derive(Debug, Error)]
pub enum NormalizeError<T: fmt::Debug + fmt::Display> {
    #[error("no normal form within {fuel} steps; last term {last}")]
    FuelExhausted { fuel: usize, last: T },
    #[error("strategy `all` is nondeterministic; explore the reduction graph instead")]
    Nondeterministic,
}

/// Reduces `t` with a deterministic strategy for at most `fuel` steps.
pub fn normalize<S: Rewriting>(
    sys: &S,
    t: &S::Term,
    strategy: Strategy,
    fuel: usize,
) -> Result<Normalized<S>, NormalizeError<S::Term>>
where
    S::Term: fmt::Debug,
{
    if strategy == Strategy::All {
        return Err(NormalizeError::Nondeterministic);
    }
    let mut cur = t.clone();
    let mut steps = Vec::new();
    loop {
        let rs = sys.redexes(&cur);
        let Some(r) = pick(sys, &cur, rs, strategy) else {
            return Ok(Normalized { term: cur, steps });
        };
        if steps.len() == fuel {
            return Err(NormalizeError::FuelExhausted { fuel, last: cur });
        }
        let next = sys
            .contract(&cur, &r)
            .expect("redexes reported by the system contract");
        steps.push(Step {
            redex: r,
            term: next.clone(),
        });
        cur = next;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    NodeBudget,
    MaxDepth,
}

#[derive(Clone, Debug)]
pub struct Edge<R> {
    pub from: usize,
    pub to: usize,
    pub redex: Redex<R>,
}

/// The reduction graph from a term, with nodes identified up to
/// [`Rewriting::key`].
#[derive(Clone, Debug)]
pub struct Graph<S: Rewriting> {
    pub nodes: Vec<S::Term>,
    pub depth: Vec<usize>,
    pub expanded: Vec<bool>,
    pub edges: Vec<Edge<S::Rule>>,
    pub truncated: Option<Truncation>,
}

impl<S: Rewriting> Graph<S> {
    /// Fully expanded nodes without successors.
    pub fn normal_forms(&self) -> Vec<&S::Term> {
        let mut has_out = vec![false; self.nodes.len()];
        for e in &self.edges {
            has_out[e.from] = true;
        }
        (0..self.nodes.len())
            .filter(|&i| self.expanded[i] && !has_out[i])
            .map(|i| &self.nodes[i])
            .collect()
    }

    /// Graphviz rendering; nodes are listed in lexicographic order of their
    /// printed form and edges are labelled with rule names.
    pub fn to_dot(&self) -> String {
        let printed: Vec<String> = self.nodes.iter().map(|t| t.to_string()).collect();
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|&a, &b| printed[a].cmp(&printed[b]));
        let mut id = vec![0; self.nodes.len()];
        for (k, &i) in order.iter().enumerate() {
            id[i] = k;
        }
        let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut out = String::from("digraph reductions {\n");
        for &i in &order {
            let shape = if self.expanded[i] && !self.edges.iter().any(|e| e.from == i) {
                ", shape=box"
            } else {
                ""
            };
            out.push_str(&format!("  n{} [label=\"{}\"{shape}];\n", id[i], esc(&printed[i])));
        }
        let mut edges: Vec<(usize, usize, String)> = self
            .edges
            .iter()
            .map(|e| (id[e.from], id[e.to], e.redex.rule.to_string()))
            .collect();
        edges.sort();
        edges.dedup();
        for (a, b, l) in edges {
            out.push_str(&format!("  n{a} -> n{b} [label=\"{l}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_nodes: usize,
    pub max_depth: Option<usize>,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_nodes: 100_000,
            max_depth: None,
        }
    }
}

/// Breadth-first exploration of every reduction from `t`.
pub fn explore<S: Rewriting>(sys: &S, t: &S::Term, limits: Limits) -> Graph<S> {
    let mut g = Graph {
        nodes: vec![t.clone()],
        depth: vec![0],
        expanded: vec![false],
        edges: Vec::new(),
        truncated: None,
    };
    let mut index: HashMap<S::Term, usize> = HashMap::new();
    index.insert(sys.key(t), 0);
    let mut next = 0;
    while next < g.nodes.len() {
        let i = next;
        next += 1;
        if limits.max_depth.is_some_and(|d| g.depth[i] >= d) {
            g.truncated.get_or_insert(Truncation::MaxDepth);
            continue;
        }
        let succ = sys.successors(&g.nodes[i]);
        g.expanded[i] = true;
        for (redex, u) in succ {
            let k = sys.key(&u);
            let to = match index.get(&k) {
                Some(&j) => j,
                None => {
                    if g.nodes.len() >= limits.max_nodes {
                        g.truncated = Some(Truncation::NodeBudget);
                        g.expanded[i] = false;
                        g.edges.retain(|e| e.from != i);
                        return g;
                    }
                    let j = g.nodes.len();
                    g.nodes.push(u);
                    g.depth.push(g.depth[i] + 1);
                    g.expanded.push(false);
                    index.insert(k, j);
                    j
                }
            };
            g.edges.push(Edge { from: i, to, redex });
        }
    }
    g
}

#[derive(Debug)]
pub enum Reach<S: Rewriting> {
    /// A reduction sequence from the source to the target.
    Reached(Vec<Step<S>>),
    /// Every term within the step bound was visited.
    Exhausted { visited: usize },
    BudgetExceeded { visited: usize },
}

impl<S: Rewriting> Reach<S> {
    pub fn is_reached(&self) -> bool {
        matches!(self, Reach::Reached(_))
    }
}

/// Searches for a reduction `from →* to` (or `→+` when `nonempty`) of at most
/// `max_steps` steps, comparing terms up to [`Rewriting::key`].
///
/// The leftmost-outermost and leftmost-innermost reductions are tried first,
/// since they find most witnesses at a fraction of the cost. Failing that,
/// the search is best-first on term size and tracks the least depth at which
/// each term was seen, so it is exhaustive up to the step bound.
pub fn reaches<S: Rewriting>(
    sys: &S,
    from: &S::Term,
    to: &S::Term,
    max_steps: usize,
    nonempty: bool,
    budget: usize,
) -> Reach<S> {
    let target = sys.key(to);
    if !nonempty && sys.key(from) == target {
        return Reach::Reached(Vec::new());
    }
    for strategy in [Strategy::LeftmostOutermost, Strategy::LeftmostInnermost] {
        if let Some(steps) = follow(sys, from, &target, max_steps, strategy) {
            return Reach::Reached(steps);
        }
    }
    search(sys, from, &target, max_steps, nonempty, budget)
}

/// The prefix of the `strategy` reduction from `from` that ends at `target`,
/// if it does so within `max_steps` steps.
fn follow<S: Rewriting>(
    sys: &S,
    from: &S::Term,
    target: &S::Term,
    max_steps: usize,
    strategy: Strategy,
) -> Option<Vec<Step<S>>> {
    let mut cur = from.clone();
    let mut steps = Vec::new();
    while steps.len() < max_steps {
        let r = select(sys, &cur, strategy)?;
        cur = sys.contract(&cur, &r).ok()?;
        steps.push(Step {
            redex: r,
            term: cur.clone(),
        });
        if sys.key(&cur) == *target {
            return Some(steps);
        }
    }
    None
}

fn search<S: Rewriting>(
    sys: &S,
    from: &S::Term,
    target: &S::Term,
    max_steps: usize,
    nonempty: bool,
    budget: usize,
) -> Reach<S> {
    struct Entry<S: Rewriting> {
        term: S::Term,
        via: Option<(usize, Redex<S::Rule>)>,
    }
    let mut arena: Vec<Entry<S>> = vec![Entry {
        term: from.clone(),
        via: None,
    }];
    let mut best: HashMap<S::Term, usize> = HashMap::new();
    if !nonempty {
        best.insert(sys.key(from), 0);
    }
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((sys.size(from), 0usize, 0usize)));
    let mut visited = 0;
    while let Some(Reverse((_, depth, id))) = heap.pop() {
        let key = sys.key(&arena[id].term);
        if id != 0 || !nonempty {
            if best.get(&key).is_some_and(|&d| d < depth) {
                continue;
            }
            if key == *target {
                let mut steps = Vec::new();
                let mut cur = id;
                while let Some((parent, redex)) = arena[cur].via.clone() {
                    steps.push(Step {
                        redex,
                        term: arena[cur].term.clone(),
                    });
                    cur = parent;
                }
                steps.reverse();
                return Reach::Reached(steps);
            }
        }
        if depth >= max_steps {
            continue;
        }
        visited += 1;
        if visited > budget {
            return Reach::BudgetExceeded { visited };
        }
        for (redex, u) in sys.successors(&arena[id].term) {
            let k = sys.key(&u);
            let d = depth + 1;
            if best.get(&k).is_some_and(|&b| b <= d) {
                continue;
            }
            best.insert(k, d);
            let size = sys.size(&u);
            arena.push(Entry {
                term: u,
                via: Some((id, redex)),
            });
            heap.push(Reverse((size, d, arena.len() - 1)));
        }
    }
    Reach::Exhausted { visited }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SnResult {
    /// Every reduction sequence terminates; `longest` is the length of the
    /// longest one and `nodes` the number of distinct terms reachable.
    Terminates { longest: usize, nodes: usize },
    /// Some term reduces back to itself.
    Diverges { cycle_at: String },
    BudgetExceeded { nodes: usize },
}

/// Decides termination of every reduction from `t` by exhaustive search,
/// visiting at most `budget` distinct terms.
pub fn check_sn<S: Rewriting>(sys: &S, t: &S::Term, budget: usize) -> SnResult {
    enum Mark {
        Open,
        Done(usize),
    }
    struct Frame<T> {
        key: T,
        succ: Vec<T>,
        next: usize,
        longest: usize,
    }
    let succ_of = |u: &S::Term| -> Vec<S::Term> {
        sys.successors(u).into_iter().map(|(_, v)| v).collect()
    };
    let mut marks: HashMap<S::Term, Mark> = HashMap::new();
    let root = sys.key(t);
    marks.insert(root.clone(), Mark::Open);
    let mut stack = vec![Frame {
        key: root,
        succ: succ_of(t),
        next: 0,
        longest: 0,
    }];
    while let Some(top) = stack.last_mut() {
        if top.next < top.succ.len() {
            let child = top.succ[top.next].clone();
            top.next += 1;
            let k = sys.key(&child);
            match marks.get(&k) {
                Some(Mark::Open) => {
                    return SnResult::Diverges {
                        cycle_at: child.to_string(),
                    }
                }
                Some(Mark::Done(l)) => top.longest = top.longest.max(l + 1),
                None => {
                    if marks.len() >= budget {
                        return SnResult::BudgetExceeded { nodes: marks.len() };
                    }
                    marks.insert(k.clone(), Mark::Open);
                    let succ = succ_of(&child);
                    stack.push(Frame {
                        key: k,
                        succ,
                        next: 0,
                        longest: 0,
                    });
                }
            }
        } else {
            let done = stack.pop().expect("non-empty stack");
            marks.insert(done.key, Mark::Done(done.longest));
            match stack.last_mut() {
                Some(parent) => parent.longest = parent.longest.max(done.longest + 1),
                None => {
                    return SnResult::Terminates {
                        longest: done.longest,
                        nodes: marks.len(),
                    }
                }
            }
        }
    }
    unreachable!("the root frame returns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_c, parse_context, parse_ls};

    fn ls(ctx: &str) -> LsSystem {
        LsSystem::new(parse_context(ctx).unwrap())
    }

    #[test]
    fn path_order_is_preorder() {
        let mut ps = vec![Path(vec![1]), Path(vec![0, 1]), Path::root(), Path(vec![0])];
        ps.sort();
        assert_eq!(ps, vec![Path::root(), Path(vec![0]), Path(vec![0, 1]), Path(vec![1])]);
        assert_eq!(Path(vec![0, 1]).to_string(), "0.1");
        assert_eq!(Path::root().to_string(), "root");
    }

    #[test]
    fn normalize_ccl() {
        let sys = CclSystem::new(parse_context("x:a, y:b").unwrap());
        let t = parse_c("S K K x").unwrap();
        let n = normalize(&sys, &t, Strategy::LeftmostOutermost, 10).unwrap();
        assert_eq!(n.term, parse_c("x").unwrap());
        assert_eq!(n.steps.len(), 2);
        let n = normalize(&sys, &t, Strategy::LeftmostInnermost, 10).unwrap();
        assert_eq!(n.term, parse_c("x").unwrap());
        assert!(matches!(
            normalize(&sys, &t, Strategy::LeftmostOutermost, 1),
            Err(NormalizeError::FuelExhausted { fuel: 1, .. })
        ));
        assert!(matches!(
            normalize(&sys, &t, Strategy::All, 10),
            Err(NormalizeError::Nondeterministic)
        ));
    }

    #[test]
    fn innermost_prefers_deeper_redex() {
        let sys = CclSystem::new(parse_context("x:a, y:b, z:c").unwrap());
        let t = parse_c("K (K x y) z").unwrap();
        let lo = select(&sys, &t, Strategy::LeftmostOutermost).unwrap();
        let li = select(&sys, &t, Strategy::LeftmostInnermost).unwrap();
        assert!(lo.path.is_root());
        assert_eq!(li.path, Path(vec![0, 1]));
    }

    #[test]
    fn omega_skips_redexes_under_lambda() {
        let sys = LsSystem::omega(parse_context("u:a, w:~a, y:b").unwrap());
        let t = parse_ls("\\x:~b. y * ((\\z:a. w * z) * u)").unwrap();
        assert!(sys.redexes(&t).is_empty());
        let full = ls("u:a, w:~a, y:b");
        assert!(!full.redexes(&t).is_empty());
    }

    #[test]
    fn graph_and_normal_forms() {
        let sys = CclSystem::new(parse_context("x:a, y:b").unwrap());
        let t = parse_c("K (S K K x) y").unwrap();
        let g = explore(&sys, &t, Limits::default());
        assert!(g.truncated.is_none());
        let nfs: Vec<String> = g.normal_forms().iter().map(|t| t.to_string()).collect();
        assert_eq!(nfs, vec!["x"]);
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("[label=\"k\"]"));
        let small = explore(&sys, &t, Limits { max_nodes: 2, max_depth: None });
        assert_eq!(small.truncated, Some(Truncation::NodeBudget));
    }

    #[test]
    fn reachability_with_witness() {
        let sys = CclSystem::new(parse_context("x:a, y:b").unwrap());
        let t = parse_c("K (S K K x) y").unwrap();
        let x = parse_c("x").unwrap();
        match reaches(&sys, &t, &x, 10, false, 1000) {
            Reach::Reached(steps) => {
                assert_eq!(steps.last().unwrap().term, x);
                let mut cur = t.clone();
                for s in &steps {
                    cur = sys.contract(&cur, &s.redex).unwrap();
                    assert_eq!(cur, s.term);
                }
            }
            r => panic!("{r:?}"),
        }
        assert!(matches!(reaches(&sys, &t, &x, 1, false, 1000), Reach::Exhausted { .. }));
        assert!(matches!(reaches(&sys, &x, &x, 5, false, 10), Reach::Reached(s) if s.is_empty()));
        assert!(matches!(reaches(&sys, &x, &x, 5, true, 10), Reach::Exhausted { .. }));
    }

    #[test]
    fn reachability_is_up_to_alpha() {
        let sys = ls("y:~a, w:b");
        let t = parse_ls("(\\z:~b. \\x:a. y * x) * w").unwrap();
        let u = parse_ls("\\q:a. y * q").unwrap();
        assert!(reaches(&sys, &t, &u, 3, true, 100).is_reached());
    }

    #[test]
    fn strong_normalisation_check() {
        let sys = CclSystem::new(parse_context("x:a, y:b").unwrap());
        let t = parse_c("K (S K K x) y").unwrap();
        assert_eq!(
            check_sn(&sys, &t, 100),
            SnResult::Terminates { longest: 3, nodes: 6 }
        );
        assert!(matches!(check_sn(&sys, &t, 2), SnResult::BudgetExceeded { .. }));
    }
}
