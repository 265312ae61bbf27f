//! Window-level verifiers for the independence lemmas and zero--one laws.
//!
//! Each lemma check evaluates precondition, hypothesis and conclusion exactly
//! and reports all three; a report fails only if the implication is violated.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::family::{canonical, describe, injection_action, reindexed, CompatibleFamily, StatisticFamily};
use super::index::{permutations, subsets, IndexInjection, Label};
use crate::error::{Error, Result};
use crate::kernel::{predicates, CheckReport, LemmaReport, MarkovCategory, Obj, TensorSplit};

type M<C> = <C as MarkovCategory>::Morphism;
type O<C> = Obj<<C as MarkovCategory>::Atom>;

/// `marginalize(assign(F′), F) = assign(F)` for all `F ⊆ F′` inside the first
/// `depth` labels.
pub fn validate_compatibility<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    depth: usize,
) -> CheckReport {
    let window = fam.window(depth);
    let name = format!("compatibility on {}", describe(&window));
    let cat = fam.cat();
    let mut pairs = 0usize;
    for big in subsets(&window) {
        let (joint, split) = match (fam.assign(&big), fam.split(&big)) {
            (Ok(j), Ok(s)) => (j, s),
            (Err(e), _) | (_, Err(e)) => {
                return CheckReport::fail(name, format!("F′ = {}", describe(&big)), format!("{e}"))
            }
        };
        for small in subsets(&big) {
            let keep: Vec<usize> = small
                .iter()
                .map(|l| big.iter().position(|m| m == l).expect("subset"))
                .collect();
            let lhs = predicates::marginalize(cat, &joint, &split, &keep).expect("split matches");
            let rhs = match fam.assign(&small) {
                Ok(m) => m,
                Err(e) => {
                    return CheckReport::fail(name, format!("F = {}", describe(&small)), format!("{e}"))
                }
            };
            pairs += 1;
            if !cat.equal(&lhs, &rhs) {
                return CheckReport::fail(
                    name,
                    format!("F = {}, F′ = {}", describe(&small), describe(&big)),
                    format!(
                        "marginal of assign(F′) is {} but assign(F) is {}",
                        cat.render(&lhs),
                        cat.render(&rhs)
                    ),
                );
            }
        }
    }
    CheckReport::pass(name, format!("{pairs} pairs F ⊆ F′ coherent"))
}

/// `assign(F)` displays `⊥_{i∈F} X_i ∥ A`.
pub fn displays_independence<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    f: &[Label],
) -> Result<bool> {
    predicates::displays_ci(fam.cat(), &fam.assign(f)?, &fam.split(f)?)
}

/// `σ̂p = p` on the window: for every permutation of the first `window`
/// labels and every subset `F` of them, `injection_action(fam, σ, F) = assign(F)`.
/// Results depend only on `σ|_F`, so repeated restrictions are evaluated once.
pub fn check_exchangeability<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    window: usize,
) -> CheckReport {
    let labels = fam.window(window);
    let name = format!("exchangeability on {}", describe(&labels));
    let cat = fam.cat();
    let all = subsets(&labels);
    let mut seen: BTreeSet<(Vec<Label>, Vec<Label>)> = BTreeSet::new();
    let (mut perms, mut checks) = (0usize, 0usize);
    for perm in permutations(labels.len()) {
        perms += 1;
        let sigma = IndexInjection::from_window_permutation(&labels, &perm).expect("permutation");
        for f in &all {
            let images: Vec<Label> = f.iter().map(|l| sigma.apply(l)).collect();
            if !seen.insert((f.clone(), images)) {
                continue;
            }
            checks += 1;
            let acted = injection_action(fam, &sigma, f);
            let plain = fam.assign(f);
            match (acted, plain) {
                (Ok(a), Ok(p)) if cat.equal(&a, &p) => {}
                (Ok(a), Ok(p)) => {
                    return CheckReport::fail(
                        name,
                        format!("σ = {sigma}, F = {}", describe(f)),
                        format!("σ̂p gives {} but p gives {}", cat.render(&a), cat.render(&p)),
                    )
                }
                (Err(e), _) | (_, Err(e)) => {
                    return CheckReport::fail(name, format!("σ = {sigma}, F = {}", describe(f)), format!("{e}"))
                }
            }
        }
    }
    CheckReport::pass(
        name,
        format!("{perms} permutations, {checks} distinct restrictions invariant"),
    )
}

/// Acting by `σ` and then `τ` agrees with acting by `σ ∘ τ` on every `F` in
/// the window.
pub fn check_functoriality<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    sigma: &IndexInjection,
    tau: &IndexInjection,
    depth: usize,
) -> Result<CheckReport> {
    let window = fam.window(depth);
    let name = format!("functoriality of the action on {}", describe(&window));
    let cat = fam.cat();
    let acted = reindexed(fam, sigma.clone());
    let composite = sigma.after(tau);
    for f in subsets(&window) {
        let lhs = injection_action(&acted, tau, &f)?;
        let rhs = injection_action(fam, &composite, &f)?;
        if !cat.equal(&lhs, &rhs) {
            return Ok(CheckReport::fail(
                name,
                format!("σ = {sigma}, τ = {tau}, F = {}", describe(&f)),
                "τ̂σ̂p differs from (σ∘τ)^p",
            ));
        }
    }
    Ok(CheckReport::pass(name, format!("σ = {sigma}, τ = {tau}")))
}

/// Moves the factor of `i` in `X_G` to the front.
fn front<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    g: &[Label],
    i: &Label,
) -> Result<(M<C>, TensorSplit<C::Atom>)> {
    let cat = fam.cat();
    let pos = g.iter().position(|l| l == i).expect("i ∈ G");
    let mut perm = vec![pos];
    perm.extend((0..g.len()).filter(|&k| k != pos));
    let factors = fam.factors(g)?;
    let moved = cat.compose(&fam.assign(g)?, &cat.permute(&factors, &perm))?;
    let rest: Vec<O<C>> = perm[1..].iter().map(|&k| factors[k].clone()).collect();
    let split = TensorSplit::new(vec![factors[pos].clone(), Obj::tensor_all(&rest)]);
    Ok((moved, split))
}

/// Infinite independence lemma at truncation: if the family displays
/// `⊥_i X_i ∥ A` on the window, then every `assign(G)` with `i ∈ G` displays
/// `X_i ⊥ X_{G∖{i}} ∥ A`.
pub fn check_infindep_lemma<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    i: &Label,
    depth: usize,
) -> Result<LemmaReport> {
    let window = fam.window(depth);
    if !window.contains(i) {
        return Err(Error::NotInIndex(format!("{i} is not among {}", describe(&window))));
    }
    let cat = fam.cat();
    let precondition = displays_independence(fam, &window)?;
    let mut conclusion = true;
    let mut witness = None;
    for g in subsets(&window).into_iter().filter(|g| g.contains(i)) {
        let (moved, split) = front(fam, &g, i)?;
        if !predicates::displays_ci(cat, &moved, &split)? {
            conclusion = false;
            witness = Some(g);
            break;
        }
    }
    Ok(LemmaReport::new(
        &format!("infinite independence at {i} on {}", describe(&window)),
        precondition,
        true,
        conclusion,
        || format!("G = {}", describe(witness.as_deref().unwrap_or(&[]))),
    ))
}

/// Determinism lemma: with `s` deterministic, if `(id ⊗ s) ∘ copy ∘ p`
/// displays `X ⊥ T ∥ A` then `s ∘ p` is deterministic.
pub fn check_determinism_lemma<C: MarkovCategory>(cat: &C, p: &M<C>, s: &M<C>) -> Result<LemmaReport> {
    if !predicates::is_deterministic(cat, s) {
        return Err(Error::NotDeterministic(cat.render(s)));
    }
    let joint = predicates::graph(cat, p, s)?;
    let split = TensorSplit::new(vec![cat.cod(p).clone(), cat.cod(s).clone()]);
    let hypothesis = predicates::displays_ci(cat, &joint, &split)?;
    let sp = cat.compose(p, s)?;
    let conclusion = predicates::is_deterministic(cat, &sp);
    Ok(LemmaReport::new("determinism lemma", true, hypothesis, conclusion, || {
        format!("p = {}; s = {}", cat.render(p), cat.render(s))
    }))
}

/// Kolmogorov's law for a finite index set. `fam` must live on a finite
/// index `F` and `stat` on `G ⊆ F`. Precondition: `assign(F)` displays
/// `⊥_i X_i ∥ A`. Hypothesis: for every `F′ ⊆ F` the joint of `X_{F′}` and
/// `T` displays `X_{F′} ⊥ T ∥ A`. Conclusion: `s ∘ p` is deterministic.
pub fn check_kolmogorov_finite<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    stat: &StatisticFamily<M<C>>,
) -> Result<LemmaReport> {
    if !fam.index().is_finite() {
        return Err(Error::InvalidObject("finite Kolmogorov check needs a finite index set".into()));
    }
    let cat = fam.cat();
    let f = canonical(&fam.window(usize::MAX >> 1));
    if f.len() > 12 {
        return Err(Error::InvalidObject("finite Kolmogorov check limited to 12 labels".into()));
    }
    for g in stat.support() {
        if !f.contains(g) {
            return Err(Error::NotInIndex(format!("statistic reads {g}, outside {}", describe(&f))));
        }
    }
    let p = fam.assign(&f)?;
    let split = fam.split(&f)?;
    let keep: Vec<usize> = stat
        .support()
        .iter()
        .map(|g| f.iter().position(|l| l == g).expect("checked"))
        .collect();
    let s_full = cat.compose(&predicates::projection(cat, &split, &keep)?, stat.stat())?;
    let t = cat.cod(&s_full).clone();
    let precondition = predicates::displays_ci(cat, &p, &split)?;

    let joint = predicates::graph(cat, &p, &s_full)?;
    let mut joint_factors = split.factors().to_vec();
    joint_factors.push(t.clone());
    let joint_split = TensorSplit::new(joint_factors);
    let mut hypothesis = true;
    let mut bad = None;
    for sub in subsets(&f) {
        let mut keep: Vec<usize> = sub
            .iter()
            .map(|l| f.iter().position(|m| m == l).expect("subset"))
            .collect();
        keep.push(f.len());
        let marginal = predicates::marginalize(cat, &joint, &joint_split, &keep)?;
        let xs = Obj::tensor_all(keep[..keep.len() - 1].iter().map(|&k| &split.factors()[k]));
        let two = TensorSplit::new(vec![xs, t.clone()]);
        if !predicates::displays_ci(cat, &marginal, &two)? {
            hypothesis = false;
            bad = Some(sub);
            break;
        }
    }
    let sp = cat.compose(&p, &s_full)?;
    let conclusion = predicates::is_deterministic(cat, &sp);
    let report = LemmaReport::new(
        &format!("finite Kolmogorov law on {}", describe(&f)),
        precondition,
        hypothesis,
        conclusion,
        || format!("p = {}; s = {}", cat.render(&p), cat.render(stat.stat())),
    );
    Ok(match bad {
        Some(sub) if precondition => {
            let mut r = report;
            r.report.detail = format!("{}; CI fails at F′ = {}", r.report.detail, describe(&sub));
            r
        }
        _ => report,
    })
}

/// The truncated splitting step of the Hewitt--Savage argument.
///
/// Precondition: the family displays independence on `F1 ∪ F2 ∪ τ1(F1) ∪
/// τ2(F2)` and is invariant under `τ1` on `F1` and `τ2` on `F2`.
/// Conclusion: the marginal of `p` on `τ1(F1) ⊔ τ2(F2)`, reindexed to
/// `X_{F1} ⊗ X_{F2}`, equals `(assign(F1) ⊗ assign(F2)) ∘ copy_A`, and both
/// equal `(τ̂1 ⊗ τ̂2) ∘ copy_A` marginalized to `F1, F2`.
pub fn check_hs_splitting<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    tau1: &IndexInjection,
    tau2: &IndexInjection,
    f1: &[Label],
    f2: &[Label],
) -> Result<LemmaReport> {
    let cat = fam.cat();
    let (f1, f2) = (canonical(f1), canonical(f2));
    let window = canonical(&[f1.clone(), f2.clone()].concat());
    let im1_w: BTreeSet<Label> = tau1.image_of(&window)?.into_iter().collect();
    let im2_w: BTreeSet<Label> = tau2.image_of(&window)?.into_iter().collect();
    if let Some(l) = im1_w.intersection(&im2_w).next() {
        return Err(Error::OverlappingImages(format!(
            "{tau1} and {tau2} both hit {l} on {}",
            describe(&window)
        )));
    }
    let im1 = tau1.image_of(&f1)?;
    let im2 = tau2.image_of(&f2)?;

    let support = canonical(&[window.clone(), im1.clone(), im2.clone()].concat());
    let independent = displays_independence(fam, &support)?;
    let act1 = injection_action(fam, tau1, &f1)?;
    let act2 = injection_action(fam, tau2, &f2)?;
    let plain1 = fam.assign(&f1)?;
    let plain2 = fam.assign(&f2)?;
    let invariant = cat.equal(&act1, &plain1) && cat.equal(&act2, &plain2);
    let precondition = independent && invariant;

    let union = canonical(&[im1.clone(), im2.clone()].concat());
    let order: Vec<Label> = [im1, im2].concat();
    let perm: Vec<usize> = order
        .iter()
        .map(|l| union.iter().position(|m| m == l).expect("present"))
        .collect();
    let reindexed_union = cat.compose(&fam.assign(&union)?, &cat.permute(&fam.factors(&union)?, &perm))?;
    let a = fam.domain();
    let split_side = predicates::pair_all(cat, a, &[plain1, plain2])?;
    let acted_side = predicates::pair_all(cat, a, &[act1, act2])?;
    let conclusion = cat.equal(&reindexed_union, &split_side) && cat.equal(&acted_side, &split_side);
    let mut report = LemmaReport::new(
        &format!("Hewitt--Savage splitting, F1 = {}, F2 = {}", describe(&f1), describe(&f2)),
        precondition,
        true,
        conclusion,
        || format!("τ1 = {tau1}, τ2 = {tau2}, F1 = {}, F2 = {}", describe(&f1), describe(&f2)),
    );
    if !precondition {
        report.report.detail = format!(
            "{}; independence={independent} invariance={invariant}",
            report.report.detail
        );
    }
    Ok(report)
}

/// The a.s.-equality lemma: with `f` deterministic, if
/// `(f ⊗ f) ∘ copy ∘ p = (f ⊗ g) ∘ copy ∘ p` then `f =_{p-a.s.} g`.
/// Only meaningful in a causal instance.
pub fn check_aseq_lemma<C: MarkovCategory>(cat: &C, p: &M<C>, f: &M<C>, g: &M<C>) -> Result<LemmaReport> {
    if !predicates::is_deterministic(cat, f) {
        return Err(Error::NotDeterministic(cat.render(f)));
    }
    let x = cat.cod(p);
    let both = |h: &M<C>| -> Result<M<C>> {
        let body = cat.compose(&cat.copy(x), &cat.tensor(f, h))?;
        cat.compose(p, &body)
    };
    let hypothesis = cat.equal(&both(f)?, &both(g)?);
    let conclusion = predicates::as_equal(cat, p, f, g)?;
    Ok(LemmaReport::new("a.s. equality lemma", true, hypothesis, conclusion, || {
        format!("p = {}; f = {}; g = {}", cat.render(p), cat.render(f), cat.render(g))
    }))
}

/// The marginalization `X_{F′} → X_F` (identities on `keep`, discards
/// elsewhere) is deterministic.
pub fn check_marginalization_determinism<C: MarkovCategory>(
    cat: &C,
    factors: &[O<C>],
    keep: &[usize],
) -> Result<CheckReport> {
    let split = TensorSplit::new(factors.to_vec());
    let proj = predicates::projection(cat, &split, keep)?;
    let name = format!("marginalization to {keep:?} is deterministic");
    Ok(if predicates::is_deterministic(cat, &proj) {
        CheckReport::pass(name, format!("on {}", split.total()))
    } else {
        CheckReport::fail(name, cat.render(&proj), "copy does not commute with the projection")
    })
}

/// Families of deterministic morphisms: if every single-label marginal on
/// the window is deterministic, then every `assign(F)` is deterministic and
/// is the pairing of its single-label marginals.
pub fn check_catdet_shadow<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    depth: usize,
) -> Result<LemmaReport> {
    let cat = fam.cat();
    let window = canonical(&fam.window(depth));
    let mut singles = Vec::with_capacity(window.len());
    for l in &window {
        singles.push(fam.assign(core::slice::from_ref(l))?);
    }
    let hypothesis = singles.iter().all(|m| predicates::is_deterministic(cat, m));
    let mut conclusion = true;
    let mut bad = Vec::new();
    for f in subsets(&window) {
        let m = fam.assign(&f)?;
        let parts: Vec<M<C>> = f
            .iter()
            .map(|l| singles[window.iter().position(|w| w == l).expect("in window")].clone())
            .collect();
        let paired = predicates::pair_all(cat, fam.domain(), &parts)?;
        if !predicates::is_deterministic(cat, &m) || !cat.equal(&m, &paired) {
            conclusion = false;
            bad = f;
            break;
        }
    }
    Ok(LemmaReport::new(
        &format!("deterministic families on {}", describe(&window)),
        true,
        hypothesis,
        conclusion,
        || format!("F = {}", describe(&bad)),
    ))
}

/// `a.assign(F) = b.assign(F)` for every `F` in the first `depth` labels of `a`.
pub fn check_same_assignments<C: MarkovCategory + Clone>(
    a: &CompatibleFamily<C>,
    b: &CompatibleFamily<C>,
    depth: usize,
) -> Result<CheckReport> {
    let window = a.window(depth);
    let name = format!("equal assignments on {}", describe(&window));
    for f in subsets(&window) {
        let (x, y) = (a.assign(&f)?, b.assign(&f)?);
        if !a.cat().equal(&x, &y) {
            return Ok(CheckReport::fail(
                name,
                format!("F = {}", describe(&f)),
                format!("{} vs {}", a.cat().render(&x), a.cat().render(&y)),
            ));
        }
    }
    Ok(CheckReport::pass(name, "all subsets agree"))
}
