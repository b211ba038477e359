//! Workloads shared by the benchmarks.

use symcl_core::syntax::{parse_c, parse_context, parse_ls};
use symcl_core::{CTerm, Context, LsTerm};

/// A fully instantiated c-term whose reduction graph has about a hundred
/// edges.
pub fn ccl_workload() -> (Context, CTerm) {
    let ctx = parse_context("x:a, y:~b").unwrap();
    let i = "(S[a, a | a, a] K[a, ~a & ~a] K[a, a])";
    (ctx, parse_c(&format!("{i} (K[a, b] ({i} x) y)")).unwrap())
}

/// A λs-term with overlapping β, η and projection redexes.
pub fn ls_workload() -> (Context, LsTerm) {
    let ctx = parse_context("u:a, v:b, w:~a").unwrap();
    let t = parse_ls("(\\x:a. <x, v> * s1((\\y:a. w * y) : ~a | ~b)) * u").unwrap();
    (ctx, t)
}
