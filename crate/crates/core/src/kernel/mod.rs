//! The category-agnostic layer.
//!
//! Monoidal structure is strict: an object is a list of atoms, the tensor of
//! objects is concatenation and the unit is the empty list. Instances choose
//! their atoms (finite sets, finite spaces, polynomial rings) and implement
//! [`MarkovCategory`]; everything in [`predicates`] and [`diagram`] is then
//! available for free.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub mod diagram;
pub mod predicates;

pub use diagram::{DiagramTerm, Env};

/// A tensor product of atoms. The empty product is the monoidal unit `I`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj<A>(Vec<A>);

impl<A> Obj<A> {
    pub fn unit() -> Self {
        Obj(Vec::new())
    }

    pub fn atom(a: A) -> Self {
        Obj(alloc::vec![a])
    }

    pub fn from_atoms(atoms: Vec<A>) -> Self {
        Obj(atoms)
    }

    pub fn atoms(&self) -> &[A] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of atomic tensor factors.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<A: Clone> Obj<A> {
    pub fn tensor(&self, other: &Self) -> Self {
        let mut atoms = self.0.clone();
        atoms.extend(other.0.iter().cloned());
        Obj(atoms)
    }

    pub fn tensor_all<'a, I>(objs: I) -> Self
    where
        I: IntoIterator<Item = &'a Obj<A>>,
        A: 'a,
    {
        Obj(objs.into_iter().flat_map(|o| o.0.iter().cloned()).collect())
    }

    /// `n` tensor copies of `self`.
    pub fn power(&self, n: usize) -> Self {
        let mut atoms = Vec::with_capacity(self.0.len() * n);
        for _ in 0..n {
            atoms.extend(self.0.iter().cloned());
        }
        Obj(atoms)
    }
}

impl<A: fmt::Display> fmt::Display for Obj<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊗ ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl<A: fmt::Debug> fmt::Debug for Obj<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊗ ")?;
            }
            write!(f, "{a:?}")?;
        }
        Ok(())
    }
}

/// A strict symmetric monoidal category with a terminal unit and a chosen
/// commutative comonoid on every object.
///
/// Implementations must make [`MarkovCategory::equal`] exact. Composition is
/// written in diagrammatic order: `compose(f, g)` is `f` followed by `g`.
pub trait MarkovCategory {
    type Atom: Clone + Eq + fmt::Debug + fmt::Display;
    type Morphism: Clone + fmt::Debug;

    fn name(&self) -> &'static str;

    fn dom<'a>(&self, f: &'a Self::Morphism) -> &'a Obj<Self::Atom>;
    fn cod<'a>(&self, f: &'a Self::Morphism) -> &'a Obj<Self::Atom>;

    fn id(&self, x: &Obj<Self::Atom>) -> Self::Morphism;

    /// `f` followed by `g`; fails unless `cod(f) = dom(g)`.
    fn compose(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism>;

    fn tensor(&self, f: &Self::Morphism, g: &Self::Morphism) -> Self::Morphism;

    /// The symmetry `X ⊗ Y → Y ⊗ X`.
    fn swap(&self, x: &Obj<Self::Atom>, y: &Obj<Self::Atom>) -> Self::Morphism;

    /// The comultiplication `X → X ⊗ X`.
    fn copy(&self, x: &Obj<Self::Atom>) -> Self::Morphism;

    /// The unique map `X → I`.
    fn discard(&self, x: &Obj<Self::Atom>) -> Self::Morphism;

    fn equal(&self, f: &Self::Morphism, g: &Self::Morphism) -> bool;

    /// Reorders tensor factors: output factor `j` is input factor `perm[j]`.
    ///
    /// The default builds the permutation out of adjacent swaps; instances
    /// with a direct construction override it.
    fn permute(&self, factors: &[Obj<Self::Atom>], perm: &[usize]) -> Self::Morphism {
        permutation_via_swaps(self, factors, perm)
    }

    /// Human-readable rendering used for witnesses.
    fn render(&self, f: &Self::Morphism) -> String {
        alloc::format!("{f:?}")
    }
}

/// Builds the factor permutation of [`MarkovCategory::permute`] from
/// adjacent symmetries only.
///
/// # Panics
///
/// Panics if `perm` is not a permutation of `0..factors.len()`.
pub fn permutation_via_swaps<C: MarkovCategory + ?Sized>(
    cat: &C,
    factors: &[Obj<C::Atom>],
    perm: &[usize],
) -> C::Morphism {
    assert!(is_permutation(perm, factors.len()), "not a permutation: {perm:?}");
    let mut order: Vec<usize> = (0..factors.len()).collect();
    let mut acc = cat.id(&Obj::tensor_all(factors));
    for (j, &want) in perm.iter().enumerate() {
        let mut k = order.iter().position(|&o| o == want).expect("present");
        while k > j {
            let before = Obj::tensor_all(order[..k - 1].iter().map(|&o| &factors[o]));
            let after = Obj::tensor_all(order[k + 1..].iter().map(|&o| &factors[o]));
            let sw = cat.swap(&factors[order[k - 1]], &factors[order[k]]);
            let layer = cat.tensor(&cat.tensor(&cat.id(&before), &sw), &cat.id(&after));
            acc = cat.compose(&acc, &layer).expect("swap layer typechecks");
            order.swap(k - 1, k);
            k -= 1;
        }
    }
    acc
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = alloc::vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// An ordered decomposition of a codomain into tensor factors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorSplit<A> {
    factors: Vec<Obj<A>>,
}

impl<A: Clone + Eq + fmt::Display> TensorSplit<A> {
    pub fn new(factors: Vec<Obj<A>>) -> Self {
        TensorSplit { factors }
    }

    /// One factor per atom of `obj`.
    pub fn atoms(obj: &Obj<A>) -> Self {
        TensorSplit {
            factors: obj.atoms().iter().cloned().map(Obj::atom).collect(),
        }
    }

    pub fn factors(&self) -> &[Obj<A>] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total(&self) -> Obj<A> {
        Obj::tensor_all(&self.factors)
    }

    pub fn check_matches(&self, cod: &Obj<A>) -> Result<()> {
        let total = self.total();
        if &total == cod {
            Ok(())
        } else {
            Err(Error::SplitMismatch(alloc::format!(
                "factors multiply to {total}, codomain is {cod}"
            )))
        }
    }

    /// The split with its factors reordered so that factor `j` is old factor `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        TensorSplit {
            factors: perm.iter().map(|&p| self.factors[p].clone()).collect(),
        }
    }
}

/// Outcome of a check. A failed report always carries a witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
    pub detail: String,
}

impl CheckReport {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            passed: true,
            witness: None,
            detail: detail.into(),
        }
    }

    pub fn fail(
        name: impl Into<String>,
        witness: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        CheckReport {
            name: name.into(),
            passed: false,
            witness: Some(witness.into()),
            detail: detail.into(),
        }
    }

    /// Folds a list of sub-checks into one report; the first failure wins.
    pub fn all(name: impl Into<String>, parts: Vec<CheckReport>) -> Self {
        let name = name.into();
        let total = parts.len();
        match parts.into_iter().find(|r| !r.passed) {
            Some(bad) => CheckReport {
                name,
                passed: false,
                witness: bad.witness,
                detail: alloc::format!("{}: {}", bad.name, bad.detail),
            },
            None => CheckReport::pass(name, alloc::format!("{total} sub-checks passed")),
        }
    }
}

/// Outcome of checking an implication `precondition ∧ hypothesis ⇒ conclusion`.
///
/// The report passes unless the precondition and hypothesis hold while the
/// conclusion fails. Both booleans are always evaluated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LemmaReport {
    pub precondition_holds: bool,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub report: CheckReport,
}

impl LemmaReport {
    pub fn new(
        name: &str,
        precondition_holds: bool,
        hypothesis_holds: bool,
        conclusion_holds: bool,
        witness: impl FnOnce() -> String,
    ) -> Self {
        let violated = precondition_holds && hypothesis_holds && !conclusion_holds;
        let detail = alloc::format!(
            "precondition={precondition_holds} hypothesis={hypothesis_holds} conclusion={conclusion_holds}{}",
            if !precondition_holds {
                " (not applicable)"
            } else if !hypothesis_holds {
                " (no claim)"
            } else {
                ""
            }
        );
        let report = if violated {
            CheckReport::fail(name, witness(), detail)
        } else {
            CheckReport::pass(name, detail)
        };
        LemmaReport {
            precondition_holds,
            hypothesis_holds,
            conclusion_holds,
            report,
        }
    }

    pub fn passed(&self) -> bool {
        self.report.passed
    }

    /// True when the implication was exercised non-vacuously.
    pub fn is_informative(&self) -> bool {
        self.precondition_holds && self.hypothesis_holds
    }
}
