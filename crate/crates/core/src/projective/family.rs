//! Compatible families `F ↦ g_F : A → X_F`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use super::index::{show_labels, IndexInjection, IndexSet, Label};
use crate::error::{Error, Result};
use crate::kernel::{predicates, MarkovCategory, Obj, TensorSplit};

type M<C> = <C as MarkovCategory>::Morphism;
type O<C> = Obj<<C as MarkovCategory>::Atom>;

/// Per-label morphism rule of an independent family.
pub type FactorRule<C> = Arc<dyn Fn(&Label) -> M<C> + Send + Sync>;

enum Kind<C: MarkovCategory> {
    Iid(M<C>),
    Independent(FactorRule<C>),
    /// One draw of `q` copied to every coordinate.
    Diagonal(M<C>),
    Joint {
        labels: Vec<Label>,
        factors: Vec<O<C>>,
        joint: M<C>,
    },
    Regroup(Vec<CompatibleFamily<C>>),
    Reindexed {
        base: Box<CompatibleFamily<C>>,
        sigma: IndexInjection,
    },
    Override {
        base: Box<CompatibleFamily<C>>,
        overrides: BTreeMap<Vec<Label>, M<C>>,
    },
}

impl<C: MarkovCategory + Clone> Clone for Kind<C> {
    fn clone(&self) -> Self {
        match self {
            Kind::Iid(q) => Kind::Iid(q.clone()),
            Kind::Independent(r) => Kind::Independent(r.clone()),
            Kind::Diagonal(q) => Kind::Diagonal(q.clone()),
            Kind::Joint {
                labels,
                factors,
                joint,
            } => Kind::Joint {
                labels: labels.clone(),
                factors: factors.clone(),
                joint: joint.clone(),
            },
            Kind::Regroup(fs) => Kind::Regroup(fs.clone()),
            Kind::Reindexed { base, sigma } => Kind::Reindexed {
                base: base.clone(),
                sigma: sigma.clone(),
            },
            Kind::Override { base, overrides } => Kind::Override {
                base: base.clone(),
                overrides: overrides.clone(),
            },
        }
    }
}

/// A coherent assignment of a morphism `A → X_F` to every finite subset `F`
/// of an index set: the data the universal property of an infinite tensor
/// product quantifies over. `X_F` lists its factors in label order.
///
/// Assignments are memoized per worker; clone the family to share it across
/// threads.
pub struct CompatibleFamily<C: MarkovCategory> {
    cat: C,
    domain: O<C>,
    index: IndexSet,
    kind: Kind<C>,
    cache: RefCell<BTreeMap<Vec<Label>, M<C>>>,
}

impl<C: MarkovCategory + Clone> Clone for CompatibleFamily<C> {
    fn clone(&self) -> Self {
        CompatibleFamily {
            cat: self.cat.clone(),
            domain: self.domain.clone(),
            index: self.index.clone(),
            kind: self.kind.clone(),
            cache: RefCell::new(self.cache.borrow().clone()),
        }
    }
}

impl<C: MarkovCategory + Clone> fmt::Debug for CompatibleFamily<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} family on {:?} over {}", self.kind_name(), self.index, self.domain)
    }
}

/// Labels of a finite subset in canonical (sorted, duplicate-free) order.
pub fn canonical(f: &[Label]) -> Vec<Label> {
    let mut v = f.to_vec();
    v.sort();
    v.dedup();
    v
}

/// `assign(F) = (⊗_{i∈F} q) ∘ copy_A^{|F|}`.
pub fn iid_family<C: MarkovCategory + Clone>(cat: &C, q: M<C>, index: IndexSet) -> CompatibleFamily<C> {
    CompatibleFamily::new(cat, cat.dom(&q).clone(), index, Kind::Iid(q))
}

/// Independent, not necessarily identical: factor `i` is drawn by `rule(i)`,
/// which must start at `domain`.
pub fn independent_family<C: MarkovCategory + Clone>(
    cat: &C,
    domain: O<C>,
    index: IndexSet,
    rule: FactorRule<C>,
) -> CompatibleFamily<C> {
    CompatibleFamily::new(cat, domain, index, Kind::Independent(rule))
}

/// Perfectly correlated: one draw of `q` copied to every coordinate.
pub fn diagonal_family<C: MarkovCategory + Clone>(cat: &C, q: M<C>, index: IndexSet) -> CompatibleFamily<C> {
    CompatibleFamily::new(cat, cat.dom(&q).clone(), index, Kind::Diagonal(q))
}

/// The marginals of a single joint over a finite index set; `factors[k]` is
/// the factor of `labels[k]` and `cod(joint)` their tensor in that order.
pub fn joint_family<C: MarkovCategory + Clone>(
    cat: &C,
    labels: Vec<Label>,
    factors: Vec<O<C>>,
    joint: M<C>,
) -> Result<CompatibleFamily<C>> {
    if labels.len() != factors.len() {
        return Err(Error::SplitMismatch(format!(
            "{} labels but {} factors",
            labels.len(),
            factors.len()
        )));
    }
    TensorSplit::new(factors.clone()).check_matches(cat.cod(&joint))?;
    let index = IndexSet::finite(labels.clone())?;
    // store in label order so marginals come out canonical
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    let joint = if order.iter().enumerate().all(|(i, &o)| i == o) {
        joint
    } else {
        cat.compose(&joint, &cat.permute(&factors, &order))?
    };
    let labels = order.iter().map(|&o| labels[o].clone()).collect();
    let factors = order.iter().map(|&o| factors[o].clone()).collect();
    Ok(CompatibleFamily::new(
        cat,
        cat.dom(&joint).clone(),
        index,
        Kind::Joint {
            labels,
            factors,
            joint,
        },
    ))
}

/// Independent product over `J₁ ⊔ J₂`:
/// `assign(F) = (f1.assign(F∩J₁) ⊗ f2.assign(F∩J₂)) ∘ copy_A`.
pub fn product_family<C: MarkovCategory + Clone>(
    f1: &CompatibleFamily<C>,
    f2: &CompatibleFamily<C>,
) -> Result<CompatibleFamily<C>> {
    regroup_family(alloc::vec![f1.clone(), f2.clone()])
}

/// The single family over `⊔_k J_k` obtained by tensoring the groups
/// independently over the shared domain.
pub fn regroup_family<C: MarkovCategory + Clone>(
    groups: Vec<CompatibleFamily<C>>,
) -> Result<CompatibleFamily<C>> {
    let first = groups
        .first()
        .ok_or_else(|| Error::InvalidObject("regrouping needs at least one family".into()))?;
    let cat = first.cat.clone();
    let domain = first.domain.clone();
    for (k, g) in groups.iter().enumerate() {
        if g.domain != domain {
            return Err(Error::TypeMismatch(format!(
                "group {k} starts at {}, expected {domain}",
                g.domain
            )));
        }
        for h in &groups[..k] {
            g.index.check_disjoint(&h.index, 64)?;
        }
    }
    let index = IndexSet::Union(groups.iter().map(|g| g.index.clone()).collect());
    Ok(CompatibleFamily::new(&cat, domain, index, Kind::Regroup(groups)))
}

/// The family `F ↦ injection_action(base, σ, F)`, i.e. `σ̂ ∘ p`.
pub fn reindexed<C: MarkovCategory + Clone>(
    base: &CompatibleFamily<C>,
    sigma: IndexInjection,
) -> CompatibleFamily<C> {
    CompatibleFamily::new(
        &base.cat,
        base.domain.clone(),
        base.index.clone(),
        Kind::Reindexed {
            base: Box::new(base.clone()),
            sigma,
        },
    )
}

/// `base` with `assign(F)` replaced by `m` (used to inject incoherence).
pub fn with_override<C: MarkovCategory + Clone>(
    base: &CompatibleFamily<C>,
    f: &[Label],
    m: M<C>,
) -> CompatibleFamily<C> {
    let mut overrides = BTreeMap::new();
    overrides.insert(canonical(f), m);
    CompatibleFamily::new(
        &base.cat,
        base.domain.clone(),
        base.index.clone(),
        Kind::Override {
            base: Box::new(base.clone()),
            overrides,
        },
    )
}

impl<C: MarkovCategory + Clone> CompatibleFamily<C> {
    fn new(cat: &C, domain: O<C>, index: IndexSet, kind: Kind<C>) -> Self {
        CompatibleFamily {
            cat: cat.clone(),
            domain,
            index,
            kind,
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn cat(&self) -> &C {
        &self.cat
    }

    /// The common domain `A`.
    pub fn domain(&self) -> &O<C> {
        &self.domain
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn window(&self, depth: usize) -> Vec<Label> {
        self.index.window(depth)
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            Kind::Iid(_) => "iid",
            Kind::Independent(_) => "independent",
            Kind::Diagonal(_) => "diagonal",
            Kind::Joint { .. } => "table",
            Kind::Regroup(_) => "regroup",
            Kind::Reindexed { .. } => "reindexed",
            Kind::Override { .. } => "override",
        }
    }

    fn check_label(&self, l: &Label) -> Result<()> {
        if self.index.contains(l) {
            Ok(())
        } else {
            Err(Error::NotInIndex(format!("{l}")))
        }
    }

    /// The factor object `X_i`.
    pub fn factor(&self, i: &Label) -> Result<O<C>> {
        self.check_label(i)?;
        Ok(match &self.kind {
            Kind::Iid(q) | Kind::Diagonal(q) => self.cat.cod(q).clone(),
            Kind::Independent(rule) => self.cat.cod(&rule(i)).clone(),
            Kind::Joint { labels, factors, .. } => {
                let k = labels.iter().position(|l| l == i).expect("checked membership");
                factors[k].clone()
            }
            Kind::Regroup(groups) => {
                let g = groups.iter().find(|g| g.index.contains(i)).expect("checked membership");
                g.factor(i)?
            }
            Kind::Reindexed { base, sigma } => base.factor(&sigma.apply(i))?,
            Kind::Override { base, .. } => base.factor(i)?,
        })
    }

    /// Factor objects of `F` in the given order.
    pub fn factors(&self, f: &[Label]) -> Result<Vec<O<C>>> {
        f.iter().map(|l| self.factor(l)).collect()
    }

    /// `X_F`, the tensor of the factors of the canonical form of `F`.
    pub fn object(&self, f: &[Label]) -> Result<O<C>> {
        Ok(Obj::tensor_all(&self.factors(&canonical(f))?))
    }

    /// The split of `X_F` into one factor per label.
    pub fn split(&self, f: &[Label]) -> Result<TensorSplit<C::Atom>> {
        Ok(TensorSplit::new(self.factors(&canonical(f))?))
    }

    /// `g_F : A → X_F` for the canonical form of `F`.
    pub fn assign(&self, f: &[Label]) -> Result<M<C>> {
        let key = canonical(f);
        if let Some(m) = self.cache.borrow().get(&key) {
            return Ok(m.clone());
        }
        for l in &key {
            self.check_label(l)?;
        }
        let m = self.compute(&key)?;
        self.cache.borrow_mut().insert(key, m.clone());
        Ok(m)
    }

    fn compute(&self, f: &[Label]) -> Result<M<C>> {
        let cat = &self.cat;
        match &self.kind {
            Kind::Iid(q) => predicates::pair_all(cat, &self.domain, &alloc::vec![q.clone(); f.len()]),
            Kind::Independent(rule) => {
                let parts: Vec<M<C>> = f.iter().map(|l| rule(l)).collect();
                predicates::pair_all(cat, &self.domain, &parts)
            }
            Kind::Diagonal(q) => cat.compose(q, &predicates::copy_n(cat, cat.cod(q), f.len())),
            Kind::Joint {
                labels,
                factors,
                joint,
            } => {
                let keep: Vec<usize> = f
                    .iter()
                    .map(|l| labels.iter().position(|m| m == l).expect("checked membership"))
                    .collect();
                predicates::marginalize(cat, joint, &TensorSplit::new(factors.clone()), &keep)
            }
            Kind::Regroup(groups) => {
                let touched: Vec<usize> = (0..groups.len())
                    .filter(|&k| f.iter().any(|l| groups[k].index.contains(l)))
                    .collect();
                self.assign_via(f, &touched)
            }
            Kind::Reindexed { base, sigma } => injection_action(base, sigma, f),
            Kind::Override { base, overrides } => match overrides.get(f) {
                Some(m) => Ok(m.clone()),
                None => base.assign(f),
            },
        }
    }

    /// For a regrouped family: the two-stage composite through the finite set
    /// of groups `g` (which must cover `F`; extra groups contribute discards).
    pub fn assign_via(&self, f: &[Label], g: &[usize]) -> Result<M<C>> {
        let Kind::Regroup(groups) = &self.kind else {
            return Err(Error::InvalidObject(format!(
                "{} family has no groups",
                self.kind_name()
            )));
        };
        let f = canonical(f);
        let mut parts = Vec::with_capacity(g.len());
        let mut order: Vec<Label> = Vec::with_capacity(f.len());
        for &k in g {
            let group = groups
                .get(k)
                .ok_or_else(|| Error::InvalidObject(format!("no group {k}")))?;
            let mine: Vec<Label> = f.iter().filter(|l| group.index.contains(l)).cloned().collect();
            parts.push(group.assign(&mine)?);
            order.extend(mine);
        }
        if order.len() != f.len() {
            return Err(Error::NotInIndex(format!(
                "groups {g:?} do not cover {}",
                show_labels(&f)
            )));
        }
        let joint = predicates::pair_all(&self.cat, &self.domain, &parts)?;
        let perm: Vec<usize> = f
            .iter()
            .map(|l| order.iter().position(|m| m == l).expect("covered"))
            .collect();
        let factors = self.factors(&order)?;
        self.cat.compose(&joint, &self.cat.permute(&factors, &perm))
    }
}

/// `π_F ∘ σ̂ ∘ p`: the marginal on `σ(F)` with factor `σ(F[j])` moved to
/// position `j`, for `F` in canonical order.
pub fn injection_action<C: MarkovCategory + Clone>(
    fam: &CompatibleFamily<C>,
    sigma: &IndexInjection,
    f: &[Label],
) -> Result<M<C>> {
    let f = canonical(f);
    let images = sigma.image_of(&f)?;
    let sorted = canonical(&images);
    let base = fam.assign(&sorted)?;
    let perm: Vec<usize> = images
        .iter()
        .map(|l| sorted.iter().position(|m| m == l).expect("image present"))
        .collect();
    if perm.iter().enumerate().all(|(j, &p)| j == p) {
        return Ok(base);
    }
    let factors = fam.factors(&sorted)?;
    fam.cat.compose(&base, &fam.cat.permute(&factors, &perm))
}

/// Deterministic statistic `s = s_G ∘ π_G` factoring through a finite window.
#[derive(Clone, Debug)]
pub struct StatisticFamily<M> {
    support: Vec<Label>,
    stat: M,
}

impl<M: Clone> StatisticFamily<M> {
    /// `stat : X_G → T` with `G = support` in canonical order; must be deterministic.
    pub fn new<C: MarkovCategory<Morphism = M>>(cat: &C, support: &[Label], stat: M) -> Result<Self> {
        if !predicates::is_deterministic(cat, &stat) {
            return Err(Error::NotDeterministic(format!(
                "statistic {} is not deterministic",
                cat.render(&stat)
            )));
        }
        Ok(StatisticFamily {
            support: canonical(support),
            stat,
        })
    }

    pub fn support(&self) -> &[Label] {
        &self.support
    }

    pub fn stat(&self) -> &M {
        &self.stat
    }
}

/// Label list for messages.
pub fn describe(f: &[Label]) -> String {
    show_labels(f)
}
