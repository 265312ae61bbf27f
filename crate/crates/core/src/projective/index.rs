//! Index labels, lazily enumerated index sets and injections between them.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Component value reserved for the extra index `∗`.
pub const STAR: u32 = u32::MAX;

/// An index label: a natural number, or a tagged label `tag.inner`.
/// Ordering is lexicographic on components, which fixes the factor order of
/// every finite product `X_F`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Vec<u32>);

impl Label {
    pub fn nat(n: u32) -> Self {
        Label(vec![n])
    }

    /// The label `∗` used to extend an index set by one point.
    pub fn star() -> Self {
        Label(vec![STAR])
    }

    pub fn tagged(tag: u32, inner: &Label) -> Self {
        let mut c = Vec::with_capacity(inner.0.len() + 1);
        c.push(tag);
        c.extend_from_slice(&inner.0);
        Label(c)
    }

    pub fn from_components(c: Vec<u32>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::UnknownLabel("empty label".into()));
        }
        Ok(Label(c))
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    /// Inverse of the `Display` form: `3`, `1.4`, `*`.
    pub fn parse(s: &str) -> Result<Self> {
        let c = s
            .trim()
            .split('.')
            .map(|p| match p {
                "*" => Ok(STAR),
                _ => p.parse::<u32>().map_err(|_| Error::UnknownLabel(s.into())),
            })
            .collect::<Result<Vec<u32>>>()?;
        Label::from_components(c)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            if *c == STAR {
                f.write_str("*")?;
            } else {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders a finite label set as `{0,2,5}`.
pub fn show_labels(ls: &[Label]) -> alloc::string::String {
    let parts: Vec<alloc::string::String> = ls.iter().map(|l| format!("{l}")).collect();
    format!("{{{}}}", parts.join(","))
}

/// A countable index set with a fixed, reproducible enumeration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IndexSet {
    /// `0, 1, 2, …`
    Naturals,
    /// `start, start + step, …` with `step ≥ 1`.
    Arithmetic { start: u32, step: u32 },
    Finite(Vec<Label>),
    /// `tag.i` for every `i` of the inner set.
    Tagged { tag: u32, inner: Box<IndexSet> },
    /// Round-robin interleaving of the parts, which should be disjoint.
    Union(Vec<IndexSet>),
}

impl IndexSet {
    pub fn finite(labels: Vec<Label>) -> Result<Self> {
        let set: BTreeSet<&Label> = labels.iter().collect();
        if set.len() != labels.len() {
            return Err(Error::LabelCollision("repeated label in a finite index set".into()));
        }
        Ok(IndexSet::Finite(labels))
    }

    /// `{0, …, n-1}`.
    pub fn range(n: u32) -> Self {
        IndexSet::Finite((0..n).map(Label::nat).collect())
    }

    pub fn is_finite(&self) -> bool {
        match self {
            IndexSet::Finite(_) => true,
            IndexSet::Tagged { inner, .. } => inner.is_finite(),
            IndexSet::Union(parts) => parts.iter().all(IndexSet::is_finite),
            _ => false,
        }
    }

    /// The first `depth` labels (fewer if the set is smaller).
    pub fn window(&self, depth: usize) -> Vec<Label> {
        match self {
            IndexSet::Naturals => (0..depth as u32).map(Label::nat).collect(),
            IndexSet::Arithmetic { start, step } => (0..depth as u32)
                .map(|k| Label::nat(start + k * step))
                .collect(),
            IndexSet::Finite(ls) => ls.iter().take(depth).cloned().collect(),
            IndexSet::Tagged { tag, inner } => inner
                .window(depth)
                .iter()
                .map(|l| Label::tagged(*tag, l))
                .collect(),
            IndexSet::Union(parts) => {
                let windows: Vec<Vec<Label>> = parts.iter().map(|p| p.window(depth)).collect();
                let mut out = Vec::with_capacity(depth);
                for round in 0..depth {
                    for w in &windows {
                        if out.len() == depth {
                            return out;
                        }
                        if let Some(l) = w.get(round) {
                            out.push(l.clone());
                        }
                    }
                }
                out
            }
        }
    }

    pub fn contains(&self, l: &Label) -> bool {
        let c = l.components();
        match self {
            IndexSet::Naturals => c.len() == 1 && c[0] != STAR,
            IndexSet::Arithmetic { start, step } => {
                c.len() == 1 && c[0] != STAR && c[0] >= *start && (c[0] - start).is_multiple_of(*step)
            }
            IndexSet::Finite(ls) => ls.contains(l),
            IndexSet::Tagged { tag, inner } => {
                c.len() > 1 && c[0] == *tag && inner.contains(&Label(c[1..].to_vec()))
            }
            IndexSet::Union(parts) => parts.iter().any(|p| p.contains(l)),
        }
    }

    /// Checks that `self` and `other` share no label among the first `probe`
    /// labels of each (exact for finite sets).
    pub fn check_disjoint(&self, other: &IndexSet, probe: usize) -> Result<()> {
        for l in self.window(probe) {
            if other.contains(&l) {
                return Err(Error::LabelCollision(format!("label {l} occurs in both index sets")));
            }
        }
        for l in other.window(probe) {
            if self.contains(&l) {
                return Err(Error::LabelCollision(format!("label {l} occurs in both index sets")));
            }
        }
        Ok(())
    }
}

/// An injection `J → J`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IndexInjection {
    Identity,
    Transposition(Label, Label),
    /// A bijection of its finite key set; every other label is fixed.
    FinitePermutation(BTreeMap<Label, Label>),
    /// `n ↦ scale·n + offset` on the last component, `scale ≥ 1`.
    Affine { scale: u32, offset: u32 },
    /// `Compose(σ, τ)` applies `τ` first, then `σ`.
    Compose(Box<IndexInjection>, Box<IndexInjection>),
}

impl IndexInjection {
    pub fn permutation(map: BTreeMap<Label, Label>) -> Result<Self> {
        let keys: BTreeSet<&Label> = map.keys().collect();
        let values: BTreeSet<&Label> = map.values().collect();
        if keys != values {
            return Err(Error::NotInjective(
                "a finite permutation must map its support onto itself".into(),
            ));
        }
        Ok(IndexInjection::FinitePermutation(map))
    }

    /// The permutation sending `window[k]` to `window[perm[k]]`.
    pub fn from_window_permutation(window: &[Label], perm: &[usize]) -> Result<Self> {
        if !crate::kernel::is_permutation(perm, window.len()) {
            return Err(Error::NotInjective(format!("{perm:?} is not a permutation")));
        }
        IndexInjection::permutation(
            window
                .iter()
                .zip(perm)
                .map(|(l, &p)| (l.clone(), window[p].clone()))
                .collect(),
        )
    }

    pub fn affine(scale: u32, offset: u32) -> Result<Self> {
        if scale == 0 {
            return Err(Error::NotInjective("affine injection needs scale ≥ 1".into()));
        }
        Ok(IndexInjection::Affine { scale, offset })
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &IndexInjection) -> IndexInjection {
        IndexInjection::Compose(Box::new(self.clone()), Box::new(first.clone()))
    }

    pub fn apply(&self, l: &Label) -> Label {
        match self {
            IndexInjection::Identity => l.clone(),
            IndexInjection::Transposition(a, b) => {
                if l == a {
                    b.clone()
                } else if l == b {
                    a.clone()
                } else {
                    l.clone()
                }
            }
            IndexInjection::FinitePermutation(m) => m.get(l).cloned().unwrap_or_else(|| l.clone()),
            IndexInjection::Affine { scale, offset } => {
                let mut c = l.components().to_vec();
                let last = c.last_mut().expect("labels are nonempty");
                *last = last
                    .checked_mul(*scale)
                    .and_then(|v| v.checked_add(*offset))
                    .filter(|&v| v != STAR)
                    .expect("affine injection overflowed the label range");
                Label(c)
            }
            IndexInjection::Compose(s, t) => s.apply(&t.apply(l)),
        }
    }

    /// True for bijections that fix all but finitely many labels.
    pub fn is_finite_permutation(&self) -> bool {
        match self {
            IndexInjection::Identity
            | IndexInjection::Transposition(..)
            | IndexInjection::FinitePermutation(_) => true,
            IndexInjection::Affine { scale, offset } => *scale == 1 && *offset == 0,
            IndexInjection::Compose(s, t) => s.is_finite_permutation() && t.is_finite_permutation(),
        }
    }

    /// The images of `labels`, failing if two of them collide.
    pub fn image_of(&self, labels: &[Label]) -> Result<Vec<Label>> {
        let images: Vec<Label> = labels.iter().map(|l| self.apply(l)).collect();
        let distinct: BTreeSet<&Label> = images.iter().collect();
        if distinct.len() != images.len() {
            return Err(Error::NotInjective(format!(
                "{self:?} is not injective on {}",
                show_labels(labels)
            )));
        }
        Ok(images)
    }
}

impl fmt::Display for IndexInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexInjection::Identity => f.write_str("id"),
            IndexInjection::Transposition(a, b) => write!(f, "({a} {b})"),
            IndexInjection::FinitePermutation(m) => {
                f.write_str("[")?;
                for (i, (a, b)) in m.iter().filter(|(a, b)| a != b).enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}→{b}")?;
                }
                f.write_str("]")
            }
            IndexInjection::Affine { scale, offset } => write!(f, "n ↦ {scale}n+{offset}"),
            IndexInjection::Compose(s, t) => write!(f, "{s} ∘ {t}"),
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Every subset of `labels`, each sorted, in bitmask order.
pub fn subsets(labels: &[Label]) -> Vec<Vec<Label>> {
    assert!(labels.len() < 20, "subset enumeration is exponential");
    (0u32..1 << labels.len())
        .map(|m| {
            let mut s: Vec<Label> = labels
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, l)| l.clone())
                .collect();
            s.sort();
            s
        })
        .collect()
}
