//! A small language for Sweedler-notation formulas.
//!
//! An expression is a `(x)`-separated list of tensor slots; each slot is a
//! product of atoms read left to right:
//!
//! * `h3` is the third leg of `Δ^{(k)}(h)`, where `k` is the largest leg of
//!   `h` used anywhere in the expression;
//! * `S(atom)` applies the antipode (nest for `S²`);
//! * `X1`, `X2` are the legs of a cocycle bound to the name `X`, `Xi1`, `Xi2`
//!   the legs of its inverse;
//! * primes (`X'1`, `X''i2`) make independent summation copies of the same
//!   element;
//! * `X2.1`, `X2.2` are the legs of `Δ` applied to the second leg of `X`;
//! * `1` is the unit.
//!
//! Variables start with a lowercase letter, cocycle names with an uppercase
//! one. `S` is reserved for the antipode.
//!
//! ```
//! use hopfcross::hopf::sweedler_h4;
//! use hopfcross::sweedler::{parse, EvaluationContext};
//!
//! let h = sweedler_h4();
//! let ctx = EvaluationContext::new(&h);
//! let e = parse("h1 S(h2)").unwrap();
//! // the antipode axiom: h1 S(h2) = ε(h) 1
//! for i in 0..4 {
//!     let v = ctx.evaluate_basis(&e, &[i]).unwrap();
//!     assert_eq!(v, h.unit().scale(&h.counit_basis(i)));
//! }
//! ```

mod eval;
mod identity;
mod parse;

pub use eval::{check_identity, EvaluationContext, IdentityCheck, IdentityWitness};
pub use identity::{parse_identity_file, IdentityLine};
pub use parse::{parse, parse_at, parse_with, Declarations};

use std::fmt;

use thiserror::Error;

use crate::hopf::HopfError;
use crate::tensor::TensorError;

/// Largest coproduct depth of a single variable or cocycle leg.
pub const MAX_DEPTH: usize = 12;
/// Largest number of independent copies (`X`, `X'`, `X''`, `X'''`) of one
/// cocycle.
pub const MAX_COPIES: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("cocycle `{0}` is not bound")]
    Unbound(String),
    #[error("{0}")]
    Dimension(String),
    #[error("incompatible expressions: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

/// One cocycle instance: a name, the inverse marker and the number of
/// primes. Distinct instances are summed independently.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CocycleRef {
    pub name: String,
    pub inverse: bool,
    pub primes: usize,
}

impl fmt::Display for CocycleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.name, if self.inverse { "i" } else { "" }, "'".repeat(self.primes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Unit,
    /// `h3` is `Leg { var: "h", index: 3 }` (one-based).
    Leg { var: String, index: usize },
    /// `X2.1` is `CocycleLeg { leg: 2, sub: Some(1) }`.
    CocycleLeg { cocycle: CocycleRef, leg: usize, sub: Option<usize> },
    Antipode(Box<Atom>),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Unit => f.write_str("1"),
            Atom::Leg { var, index } => write!(f, "{var}{index}"),
            Atom::CocycleLeg { cocycle, leg, sub } => {
                write!(f, "{cocycle}{leg}")?;
                if let Some(s) = sub {
                    write!(f, ".{s}")?;
                }
                Ok(())
            }
            Atom::Antipode(a) => write!(f, "S({a})"),
        }
    }
}

/// A parsed Sweedler expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweedlerExpr {
    /// Variables in argument order, with their coproduct depth (0 for a
    /// declared variable that never appears, which contributes `ε`).
    pub variables: Vec<(String, usize)>,
    /// Cocycle instances in order of first appearance.
    pub cocycles: Vec<CocycleRef>,
    pub slots: Vec<Vec<Atom>>,
}

impl SweedlerExpr {
    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn depth(&self, var: &str) -> Option<usize> {
        self.variables.iter().find(|(v, _)| v == var).map(|(_, d)| *d)
    }

    pub fn variable_names(&self) -> Vec<&str> {
        self.variables.iter().map(|(v, _)| v.as_str()).collect()
    }

    /// Names of the bound elements the expression needs.
    pub fn cocycle_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.cocycles.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        names
    }
}

impl fmt::Display for SweedlerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, slot) in self.slots.iter().enumerate() {
            if k > 0 {
                f.write_str(" (x) ")?;
            }
            for (j, atom) in slot.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{atom}")?;
            }
        }
        Ok(())
    }
}
