//! Generic Markov-category predicates, written once against [`MarkovCategory`].

use alloc::format;
use alloc::vec::Vec;

use super::{CheckReport, MarkovCategory, Obj, TensorSplit};
use crate::error::{Error, Result};

type M<C> = <C as MarkovCategory>::Morphism;
type O<C> = Obj<<C as MarkovCategory>::Atom>;

fn then<C: MarkovCategory>(cat: &C, f: &M<C>, g: &M<C>) -> M<C> {
    cat.compose(f, g).expect("internally constructed composite typechecks")
}

/// `n`-fold copy `X → X^{⊗n}`; `n = 0` is discard, `n = 1` the identity.
pub fn copy_n<C: MarkovCategory>(cat: &C, x: &O<C>, n: usize) -> M<C> {
    match n {
        0 => cat.discard(x),
        1 => cat.id(x),
        _ => {
            let mut acc = cat.copy(x);
            for k in 2..n {
                let layer = cat.tensor(&cat.id(&x.power(k - 1)), &cat.copy(x));
                acc = then(cat, &acc, &layer);
            }
            acc
        }
    }
}

/// Tensor of a list of morphisms; the empty list gives `id_I`.
pub fn tensor_all<C: MarkovCategory>(cat: &C, ms: &[M<C>]) -> M<C> {
    let mut iter = ms.iter();
    match iter.next() {
        None => cat.id(&Obj::unit()),
        Some(first) => iter.fold(first.clone(), |acc, m| cat.tensor(&acc, m)),
    }
}

/// `(m_1 ⊗ … ⊗ m_n) ∘ copy^n_A` for morphisms sharing the domain `a`.
pub fn pair_all<C: MarkovCategory>(cat: &C, a: &O<C>, ms: &[M<C>]) -> Result<M<C>> {
    for m in ms {
        if cat.dom(m) != a {
            return Err(Error::TypeMismatch(format!(
                "pairing expects domain {a}, found {}",
                cat.dom(m)
            )));
        }
    }
    cat.compose(&copy_n(cat, a, ms.len()), &tensor_all(cat, ms))
}

/// The projection `⊗ factors → ⊗ kept factors`, discarding the rest.
pub fn projection<C: MarkovCategory>(
    cat: &C,
    split: &TensorSplit<C::Atom>,
    keep: &[usize],
) -> Result<M<C>> {
    for &k in keep {
        if k >= split.len() {
            return Err(Error::KeepNotSubset {
                index: k,
                len: split.len(),
            });
        }
    }
    let parts: Vec<M<C>> = split
        .factors()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            if keep.contains(&i) {
                cat.id(x)
            } else {
                cat.discard(x)
            }
        })
        .collect();
    Ok(tensor_all(cat, &parts))
}

/// Marginal of `f` on the factors `keep` of `split` (kept in split order).
pub fn marginalize<C: MarkovCategory>(
    cat: &C,
    f: &M<C>,
    split: &TensorSplit<C::Atom>,
    keep: &[usize],
) -> Result<M<C>> {
    split.check_matches(cat.cod(f))?;
    if keep.len() == split.len() && keep.iter().enumerate().all(|(i, &k)| i == k) {
        return Ok(f.clone());
    }
    let proj = projection(cat, split, keep)?;
    cat.compose(f, &proj)
}

/// `f` is a comonoid homomorphism: `copy ∘ f = (f ⊗ f) ∘ copy`.
pub fn is_deterministic<C: MarkovCategory>(cat: &C, f: &M<C>) -> bool {
    let lhs = then(cat, f, &cat.copy(cat.cod(f)));
    let rhs = then(cat, &cat.copy(cat.dom(f)), &cat.tensor(f, f));
    cat.equal(&lhs, &rhs)
}

/// `(id_X ⊗ f) ∘ copy_X ∘ p`, the joint of the input and output of `f` under `p`.
pub fn graph<C: MarkovCategory>(cat: &C, p: &M<C>, f: &M<C>) -> Result<M<C>> {
    let x = cat.cod(p);
    if cat.dom(f) != x {
        return Err(Error::TypeMismatch(format!(
            "{} does not start at cod(p) = {x}",
            cat.render(f)
        )));
    }
    let body = then(cat, &cat.copy(x), &cat.tensor(&cat.id(x), f));
    cat.compose(p, &body)
}

/// `f` and `g` are `p`-almost surely equal.
pub fn as_equal<C: MarkovCategory>(cat: &C, p: &M<C>, f: &M<C>, g: &M<C>) -> Result<bool> {
    if cat.dom(f) != cat.dom(g) || cat.cod(f) != cat.cod(g) {
        return Err(Error::TypeMismatch(format!(
            "{} and {} are not parallel",
            cat.render(f),
            cat.render(g)
        )));
    }
    Ok(cat.equal(&graph(cat, p, f)?, &graph(cat, p, g)?))
}

/// `p` equals the copy of its domain followed by the tensor of its
/// single-factor marginals. Splits with at most one factor hold trivially.
pub fn displays_ci<C: MarkovCategory>(
    cat: &C,
    p: &M<C>,
    split: &TensorSplit<C::Atom>,
) -> Result<bool> {
    split.check_matches(cat.cod(p))?;
    if split.len() <= 1 {
        return Ok(true);
    }
    let marginals = (0..split.len())
        .map(|i| marginalize(cat, p, split, &[i]))
        .collect::<Result<Vec<_>>>()?;
    let product = pair_all(cat, cat.dom(p), &marginals)?;
    Ok(cat.equal(p, &product))
}

/// Coassociativity, both counit laws and cocommutativity of `copy_X`.
pub fn check_comonoid_laws<C: MarkovCategory>(cat: &C, x: &O<C>) -> CheckReport {
    let copy = cat.copy(x);
    let id = cat.id(x);
    let del = cat.discard(x);
    let mut parts = Vec::new();
    let mut law = |name: &str, lhs: M<C>, rhs: M<C>| {
        parts.push(if cat.equal(&lhs, &rhs) {
            CheckReport::pass(name, "holds")
        } else {
            CheckReport::fail(
                name,
                format!("lhs = {}; rhs = {}", cat.render(&lhs), cat.render(&rhs)),
                format!("fails on {x}"),
            )
        });
    };
    law(
        "coassociativity",
        then(cat, &copy, &cat.tensor(&copy, &id)),
        then(cat, &copy, &cat.tensor(&id, &copy)),
    );
    law(
        "left counitality",
        then(cat, &copy, &cat.tensor(&del, &id)),
        id.clone(),
    );
    law(
        "right counitality",
        then(cat, &copy, &cat.tensor(&id, &del)),
        id.clone(),
    );
    law("cocommutativity", then(cat, &copy, &cat.swap(x, x)), copy.clone());
    CheckReport::all(format!("comonoid laws on {x}"), parts)
}

/// `copy_{X⊗Y} = (id ⊗ swap ⊗ id) ∘ (copy_X ⊗ copy_Y)`.
pub fn check_multiplicativity<C: MarkovCategory>(cat: &C, x: &O<C>, y: &O<C>) -> CheckReport {
    let name = format!("multiplicativity on {x}, {y}");
    let lhs = cat.copy(&x.tensor(y));
    let middle = cat.tensor(&cat.tensor(&cat.id(x), &cat.swap(x, y)), &cat.id(y));
    let rhs = then(cat, &cat.tensor(&cat.copy(x), &cat.copy(y)), &middle);
    if cat.equal(&lhs, &rhs) {
        CheckReport::pass(name, "holds")
    } else {
        CheckReport::fail(
            name,
            format!("lhs = {}; rhs = {}", cat.render(&lhs), cat.render(&rhs)),
            "copy of the tensor differs from the tensor of copies",
        )
    }
}

/// `discard_Y ∘ f = discard_X`: the unit is terminal.
pub fn check_discard_natural<C: MarkovCategory>(cat: &C, f: &M<C>) -> CheckReport {
    let lhs = then(cat, f, &cat.discard(cat.cod(f)));
    let rhs = cat.discard(cat.dom(f));
    if cat.equal(&lhs, &rhs) {
        CheckReport::pass("discard naturality", "holds")
    } else {
        CheckReport::fail(
            "discard naturality",
            cat.render(f),
            "discarding after f differs from discarding the input",
        )
    }
}

/// Both sides of the causality axiom for `f: A → X`, `g: X → Y`, `h1, h2: Y → Z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CausalityReport {
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub report: CheckReport,
}

/// Evaluates the hypothesis `(id ⊗ h_i) ∘ copy_Y ∘ g ∘ f` (equal for i = 1, 2)
/// and the conclusion `(id_X ⊗ ((id ⊗ h_i) ∘ copy_Y ∘ g)) ∘ copy_X ∘ f`
/// (equal for i = 1, 2). The report fails exactly when the hypothesis holds
/// and the conclusion does not.
pub fn check_causality_triple<C: MarkovCategory>(
    cat: &C,
    f: &M<C>,
    g: &M<C>,
    h1: &M<C>,
    h2: &M<C>,
) -> Result<CausalityReport> {
    if cat.cod(f) != cat.dom(g)
        || cat.cod(g) != cat.dom(h1)
        || cat.dom(h1) != cat.dom(h2)
        || cat.cod(h1) != cat.cod(h2)
    {
        return Err(Error::TypeMismatch(
            "causality needs f: A → X, g: X → Y, h1, h2: Y → Z".into(),
        ));
    }
    let y = cat.cod(g);
    let x = cat.cod(f);
    let branch = |h: &M<C>| then(cat, &cat.copy(y), &cat.tensor(&cat.id(y), h));
    let gf = then(cat, f, g);
    let hyp1 = then(cat, &gf, &branch(h1));
    let hyp2 = then(cat, &gf, &branch(h2));
    let hypothesis_holds = cat.equal(&hyp1, &hyp2);
    let past = |h: &M<C>| {
        let inner = then(cat, g, &branch(h));
        then(cat, f, &then(cat, &cat.copy(x), &cat.tensor(&cat.id(x), &inner)))
    };
    let con1 = past(h1);
    let con2 = past(h2);
    let conclusion_holds = cat.equal(&con1, &con2);
    let detail = format!("hypothesis={hypothesis_holds} conclusion={conclusion_holds}");
    let report = if hypothesis_holds && !conclusion_holds {
        CheckReport::fail(
            "causality",
            format!(
                "f = {}; g = {}; h1 = {}; h2 = {}",
                cat.render(f),
                cat.render(g),
                cat.render(h1),
                cat.render(h2)
            ),
            detail,
        )
    } else {
        CheckReport::pass("causality", detail)
    };
    Ok(CausalityReport {
        hypothesis_holds,
        conclusion_holds,
        report,
    })
}
