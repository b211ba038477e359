//! A workbench for the symmetric classical propositional lambda calculus and
//! the classical combinatory calculus CCL.
//!
//! * [`types`]: m-types, negation, metavariable unification.
//! * [`lambda_sym`]: λs-terms, typing and their nine reduction rules.
//! * [`ccl`]: c-terms, combinator typing and the eleven reduction rules.
//! * [`translate`]: bracket abstraction and the encodings in both directions.
//! * [`rewrite`]: strategies, reduction graphs, reachability and termination
//!   checks over either calculus.
//! * [`syntax`]: parsers and printers for the concrete syntax.
//! * [`enumerate`] and [`verify`]: exhaustive small-scope term generation and
//!   the property suites built on it.

pub mod ccl;
pub mod enumerate;
pub mod lambda_sym;
pub mod rewrite;
pub mod syntax;
pub mod translate;
pub mod types;
pub mod verify;

pub use ccl::{classify, infer_c, CTerm, CclRule, Comb, TermClass};
pub use lambda_sym::{alpha_eq, infer, LsRule, LsTerm};
pub use rewrite::{Path, Redex, Strategy};
pub use types::{negate, Context, MType, MView, Name, Ty};
