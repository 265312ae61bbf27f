//! String-diagram terms, read bottom to top: `Seq(a, b)` runs `a` first.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use core::fmt;

use super::{MarkovCategory, Obj};
use crate::error::{Error, Result};

/// Generators are bound by name so that scripts stay serializable.
pub type Env<M> = BTreeMap<String, M>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DiagramTerm<A> {
    Id(Obj<A>),
    Gen(String),
    Seq(Box<DiagramTerm<A>>, Box<DiagramTerm<A>>),
    Par(Box<DiagramTerm<A>>, Box<DiagramTerm<A>>),
    Swap(Obj<A>, Obj<A>),
    Copy(Obj<A>),
    Discard(Obj<A>),
}

impl<A> DiagramTerm<A> {
    pub fn gen(name: impl Into<String>) -> Self {
        DiagramTerm::Gen(name.into())
    }

    pub fn seq(first: Self, second: Self) -> Self {
        DiagramTerm::Seq(Box::new(first), Box::new(second))
    }

    pub fn par(left: Self, right: Self) -> Self {
        DiagramTerm::Par(Box::new(left), Box::new(right))
    }

    /// Number of nodes in the term tree.
    pub fn size(&self) -> usize {
        match self {
            DiagramTerm::Seq(a, b) | DiagramTerm::Par(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

impl<A: fmt::Display> fmt::Display for DiagramTerm<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramTerm::Id(x) => write!(f, "id({x})"),
            DiagramTerm::Gen(n) => write!(f, "gen({n})"),
            DiagramTerm::Seq(a, b) => write!(f, "seq({a}, {b})"),
            DiagramTerm::Par(a, b) => write!(f, "par({a}, {b})"),
            DiagramTerm::Swap(x, y) => write!(f, "swap({x}, {y})"),
            DiagramTerm::Copy(x) => write!(f, "copy({x})"),
            DiagramTerm::Discard(x) => write!(f, "discard({x})"),
        }
    }
}

/// Infers `(dom, cod)` of `term`. Syntax directed; fails on the first
/// unbound generator or sequential composite whose interfaces disagree.
pub fn typecheck<C: MarkovCategory>(
    cat: &C,
    term: &DiagramTerm<C::Atom>,
    env: &Env<C::Morphism>,
) -> Result<(Obj<C::Atom>, Obj<C::Atom>)> {
    Ok(match term {
        DiagramTerm::Id(x) => (x.clone(), x.clone()),
        DiagramTerm::Gen(name) => {
            let m = env
                .get(name)
                .ok_or_else(|| Error::UnboundGenerator(name.clone()))?;
            (cat.dom(m).clone(), cat.cod(m).clone())
        }
        DiagramTerm::Seq(a, b) => {
            let (da, ca) = typecheck(cat, a, env)?;
            let (db, cb) = typecheck(cat, b, env)?;
            if ca != db {
                return Err(Error::DomainMismatch {
                    at: format!("{term}"),
                    expected: format!("{ca}"),
                    found: format!("{db}"),
                });
            }
            (da, cb)
        }
        DiagramTerm::Par(a, b) => {
            let (da, ca) = typecheck(cat, a, env)?;
            let (db, cb) = typecheck(cat, b, env)?;
            (da.tensor(&db), ca.tensor(&cb))
        }
        DiagramTerm::Swap(x, y) => (x.tensor(y), y.tensor(x)),
        DiagramTerm::Copy(x) => (x.clone(), x.tensor(x)),
        DiagramTerm::Discard(x) => (x.clone(), Obj::unit()),
    })
}

/// Interprets `term` in `cat`. Type errors are reported before anything is built.
pub fn evaluate<C: MarkovCategory>(
    cat: &C,
    term: &DiagramTerm<C::Atom>,
    env: &Env<C::Morphism>,
) -> Result<C::Morphism> {
    typecheck(cat, term, env)?;
    eval_unchecked(cat, term, env)
}

fn eval_unchecked<C: MarkovCategory>(
    cat: &C,
    term: &DiagramTerm<C::Atom>,
    env: &Env<C::Morphism>,
) -> Result<C::Morphism> {
    Ok(match term {
        DiagramTerm::Id(x) => cat.id(x),
        DiagramTerm::Gen(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnboundGenerator(name.clone()))?,
        DiagramTerm::Seq(a, b) => {
            cat.compose(&eval_unchecked(cat, a, env)?, &eval_unchecked(cat, b, env)?)?
        }
        DiagramTerm::Par(a, b) => {
            cat.tensor(&eval_unchecked(cat, a, env)?, &eval_unchecked(cat, b, env)?)
        }
        DiagramTerm::Swap(x, y) => cat.swap(x, y),
        DiagramTerm::Copy(x) => cat.copy(x),
        DiagramTerm::Discard(x) => cat.discard(x),
    })
}
