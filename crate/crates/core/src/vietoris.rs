//! Finite topological spaces and the Kleisli category of the lower Vietoris
//! (hyperspace) monad.
//!
//! A finite topology is stored through the minimal open neighbourhood `U_x` of
//! each point. Then `cl(S) = {x : U_x ∩ S ≠ ∅}`, the opens are the sets closed
//! under `x ↦ U_x`, and a product of finite spaces has `U_(x,y) = U_x × U_y`,
//! so products never need their (possibly huge) open-set lattice.
//!
//! Morphisms `X → Y` send each point to a nonempty closed subset of `Y`
//! continuously for the topology generated by `Hit(U) = {C : C ∩ U ≠ ∅}`.
//! Empty images are excluded so that `I` stays terminal.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finstoch::FinSet;
use crate::kernel::{predicates, CheckReport, MarkovCategory, Obj};

fn bits(n: usize, elems: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for e in elems {
        s.insert(e);
    }
    s
}

fn full(n: usize) -> FixedBitSet {
    bits(n, 0..n)
}

/// A finite set with a topology.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteTopSpace {
    points: FinSet,
    nbhd: Vec<FixedBitSet>,
    opens: Vec<FixedBitSet>,
}

/// What [`FiniteTopSpace::from_opens`] had to add to reach a topology.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Completion {
    pub added: Vec<Vec<usize>>,
}

impl FiniteTopSpace {
    /// Completes `opens` with `∅`, the full set, and all finite unions and
    /// intersections, reporting the sets that were added.
    pub fn from_opens(points: FinSet, opens: Vec<Vec<usize>>) -> Result<(Self, Completion)> {
        let n = points.len();
        if n > 16 {
            return Err(Error::InvalidObject("finite spaces are limited to 16 points".into()));
        }
        let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
        for o in &opens {
            if let Some(&bad) = o.iter().find(|&&p| p >= n) {
                return Err(Error::InvalidObject(format!("point {bad} outside {points}")));
            }
            let mut o = o.clone();
            o.sort_unstable();
            o.dedup();
            family.insert(o);
        }
        let given = family.clone();
        family.insert(Vec::new());
        family.insert((0..n).collect());
        loop {
            let list: Vec<FixedBitSet> = family.iter().map(|o| bits(n, o.iter().copied())).collect();
            let before = family.len();
            for (i, a) in list.iter().enumerate() {
                for b in &list[i + 1..] {
                    family.insert(a.union(b).collect());
                    family.insert(a.intersection(b).collect());
                }
            }
            if family.len() == before {
                break;
            }
        }
        let added = family.difference(&given).cloned().collect();
        let open_sets: Vec<FixedBitSet> = family.iter().map(|o| bits(n, o.iter().copied())).collect();
        let nbhd = (0..n)
            .map(|x| {
                let mut u = full(n);
                for o in open_sets.iter().filter(|o| o.contains(x)) {
                    u.intersect_with(o);
                }
                u
            })
            .collect();
        Ok((FiniteTopSpace::with_nbhd(points, nbhd), Completion { added }))
    }

    /// The Alexandrov topology of a preorder: `U_x = {y : x ⊑ y}`.
    ///
    /// `leq` must be reflexive and transitive.
    pub fn from_preorder(points: FinSet, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = points.len();
        if n > 16 {
            return Err(Error::InvalidObject("finite spaces are limited to 16 points".into()));
        }
        for x in 0..n {
            if !leq(x, x) {
                return Err(Error::InvalidObject("specialization order is not reflexive".into()));
            }
            for y in 0..n {
                for z in 0..n {
                    if leq(x, y) && leq(y, z) && !leq(x, z) {
                        return Err(Error::InvalidObject(
                            "specialization order is not transitive".into(),
                        ));
                    }
                }
            }
        }
        let nbhd = (0..n).map(|x| bits(n, (0..n).filter(|&y| leq(x, y)))).collect();
        Ok(FiniteTopSpace::with_nbhd(points, nbhd))
    }

    fn with_nbhd(points: FinSet, nbhd: Vec<FixedBitSet>) -> Self {
        let n = points.len();
        let opens = (0u32..1 << n)
            .map(|mask| bits(n, (0..n).filter(|&i| mask >> i & 1 == 1)))
            .filter(|s| s.ones().all(|x| nbhd[x].is_subset(s)))
            .collect();
        FiniteTopSpace { points, nbhd, opens }
    }

    pub fn discrete(n: usize) -> Self {
        FiniteTopSpace::from_preorder(FinSet::range(n).expect("n ≥ 1"), |x, y| x == y)
            .expect("discrete order")
    }

    pub fn indiscrete(n: usize) -> Self {
        FiniteTopSpace::from_preorder(FinSet::range(n).expect("n ≥ 1"), |_, _| true)
            .expect("indiscrete order")
    }

    /// Points `0` (closed) and `1` (open); opens `∅, {1}, {0,1}`.
    pub fn sierpinski() -> Self {
        FiniteTopSpace::from_preorder(FinSet::range(2).expect("two points"), |x, y| x <= y)
            .expect("sierpinski order")
    }

    /// Every topology on `{0, …, n-1}` (one per preorder), `n ≤ 4`.
    pub fn all_topologies(n: usize) -> Vec<Self> {
        assert!((1..=4).contains(&n), "enumeration supports 1..=4 points");
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
            .collect();
        let mut out = Vec::new();
        for mask in 0u32..1 << pairs.len() {
            let rel = |x: usize, y: usize| {
                x == y || pairs.iter().position(|&p| p == (x, y)).is_some_and(|k| mask >> k & 1 == 1)
            };
            if let Ok(s) = FiniteTopSpace::from_preorder(FinSet::range(n).expect("n ≥ 1"), rel) {
                out.push(s);
            }
        }
        out
    }

    /// Reflexive-transitive closure of a random relation.
    pub fn random_with<R: Rng + ?Sized>(rng: &mut R, n: usize, discrete: bool) -> Self {
        if discrete {
            return FiniteTopSpace::discrete(n);
        }
        let mut rel = vec![vec![false; n]; n];
        for (x, row) in rel.iter_mut().enumerate() {
            for (y, r) in row.iter_mut().enumerate() {
                *r = x == y || rng.gen_ratio(1, 3);
            }
        }
        for k in 0..n {
            for x in 0..n {
                for y in 0..n {
                    if rel[x][k] && rel[k][y] {
                        rel[x][y] = true;
                    }
                }
            }
        }
        FiniteTopSpace::from_preorder(FinSet::range(n).expect("n ≥ 1"), |x, y| rel[x][y])
            .expect("closed relation")
    }

    pub fn points(&self) -> &FinSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn opens(&self) -> &[FixedBitSet] {
        &self.opens
    }

    /// Minimal open neighbourhood of `x`.
    pub fn nbhd(&self, x: usize) -> &FixedBitSet {
        &self.nbhd[x]
    }

    pub fn is_open(&self, s: &FixedBitSet) -> bool {
        s.ones().all(|x| self.nbhd[x].is_subset(s))
    }

    pub fn closure(&self, s: &FixedBitSet) -> FixedBitSet {
        closure_with(&self.nbhd, s)
    }

    pub fn is_closed(&self, s: &FixedBitSet) -> bool {
        &self.closure(s) == s
    }
}

impl fmt::Display for FiniteTopSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.points)?;
        for (i, o) in self.opens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let labels: Vec<&str> = o.ones().map(|p| self.points.labels()[p].as_str()).collect();
            write!(f, "{{{}}}", labels.join(","))?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for FiniteTopSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn closure_with(nbhd: &[FixedBitSet], s: &FixedBitSet) -> FixedBitSet {
    bits(nbhd.len(), (0..nbhd.len()).filter(|&x| !nbhd[x].is_disjoint(s)))
}

pub type SpaceObj = Obj<FiniteTopSpace>;

/// Points and minimal neighbourhoods of a product space.
#[derive(Clone, Debug)]
pub struct Carrier {
    sizes: Vec<usize>,
    nbhd: Vec<FixedBitSet>,
}

impl Carrier {
    pub fn of(obj: &SpaceObj) -> Self {
        let sizes: Vec<usize> = obj.atoms().iter().map(FiniteTopSpace::len).collect();
        let total: usize = sizes.iter().product();
        let nbhd = (0..total)
            .map(|idx| {
                let digits = digits_of(&sizes, idx);
                let mut acc = vec![0usize];
                for (k, a) in obj.atoms().iter().enumerate() {
                    let mut next = Vec::with_capacity(acc.len() * a.len());
                    for &prefix in &acc {
                        for y in a.nbhd(digits[k]).ones() {
                            next.push(prefix * sizes[k] + y);
                        }
                    }
                    acc = next;
                }
                bits(total, acc)
            })
            .collect();
        Carrier { sizes, nbhd }
    }

    pub fn len(&self) -> usize {
        self.nbhd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nbhd.is_empty()
    }

    pub fn nbhd(&self, x: usize) -> &FixedBitSet {
        &self.nbhd[x]
    }

    pub fn closure(&self, s: &FixedBitSet) -> FixedBitSet {
        closure_with(&self.nbhd, s)
    }

    pub fn is_closed(&self, s: &FixedBitSet) -> bool {
        &self.closure(s) == s
    }

    pub fn is_open(&self, s: &FixedBitSet) -> bool {
        s.ones().all(|x| self.nbhd[x].is_subset(s))
    }

    pub fn point_closure(&self, x: usize) -> FixedBitSet {
        self.closure(&bits(self.len(), [x]))
    }

    pub fn digits(&self, idx: usize) -> Vec<usize> {
        digits_of(&self.sizes, idx)
    }
}

fn digits_of(sizes: &[usize], mut idx: usize) -> Vec<usize> {
    let mut d = vec![0; sizes.len()];
    for (slot, s) in d.iter_mut().zip(sizes).rev() {
        *slot = idx % s;
        idx /= s;
    }
    d
}

/// Comma-joined point label of a product point; the unit's point is `*`.
pub fn point_label(obj: &SpaceObj, idx: usize) -> String {
    if obj.is_unit() {
        return "*".into();
    }
    let sizes: Vec<usize> = obj.atoms().iter().map(FiniteTopSpace::len).collect();
    digits_of(&sizes, idx)
        .iter()
        .zip(obj.atoms())
        .map(|(&d, a)| a.points().labels()[d].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

/// Inverse of [`point_label`].
pub fn point_index(obj: &SpaceObj, label: &str) -> Result<usize> {
    if obj.is_unit() {
        return if label == "*" || label.is_empty() {
            Ok(0)
        } else {
            Err(Error::UnknownLabel(label.into()))
        };
    }
    let parts: Vec<&str> = label.split(',').collect();
    if parts.len() != obj.len() {
        return Err(Error::UnknownLabel(label.into()));
    }
    parts.iter().zip(obj.atoms()).try_fold(0, |acc, (p, a)| {
        let d = a
            .points()
            .index_of(p.trim())
            .ok_or_else(|| Error::UnknownLabel(label.into()))?;
        Ok(acc * a.len() + d)
    })
}

/// A point ↦ nonempty closed set assignment.
#[derive(Clone, PartialEq, Eq)]
pub struct ClosedSetMap {
    dom: SpaceObj,
    cod: SpaceObj,
    images: Vec<FixedBitSet>,
}

impl ClosedSetMap {
    /// Checks that every image is a nonempty closed subset of `cod`.
    /// Continuity is checked separately by [`continuity_check`].
    pub fn new(dom: SpaceObj, cod: SpaceObj, images: Vec<Vec<usize>>) -> Result<Self> {
        let dc = Carrier::of(&dom);
        let cc = Carrier::of(&cod);
        if images.len() != dc.len() {
            return Err(Error::InvalidMorphism(format!(
                "expected {} images, found {}",
                dc.len(),
                images.len()
            )));
        }
        let mut sets = Vec::with_capacity(images.len());
        for (x, img) in images.into_iter().enumerate() {
            if img.is_empty() {
                return Err(Error::InvalidMorphism(format!("image of point {x} is empty")));
            }
            if let Some(&bad) = img.iter().find(|&&y| y >= cc.len()) {
                return Err(Error::InvalidMorphism(format!("point {bad} outside codomain")));
            }
            let s = bits(cc.len(), img);
            if !cc.is_closed(&s) {
                return Err(Error::InvalidMorphism(format!(
                    "image of {} is not closed",
                    point_label(&dom, x)
                )));
            }
            sets.push(s);
        }
        Ok(ClosedSetMap {
            dom,
            cod,
            images: sets,
        })
    }

    /// Like [`ClosedSetMap::new`] but also rejects discontinuous maps.
    pub fn continuous(dom: SpaceObj, cod: SpaceObj, images: Vec<Vec<usize>>) -> Result<Self> {
        let f = ClosedSetMap::new(dom, cod, images)?;
        let report = continuity_check(&f);
        if report.passed {
            Ok(f)
        } else {
            Err(Error::InvalidMorphism(report.detail))
        }
    }

    /// `x ↦ cl{φ(x)}`; continuous whenever `φ` is.
    pub fn from_function(dom: SpaceObj, cod: SpaceObj, phi: impl Fn(usize) -> usize) -> Self {
        let n = Carrier::of(&dom).len();
        let cc = Carrier::of(&cod);
        let images = (0..n).map(|x| cc.point_closure(phi(x))).collect();
        ClosedSetMap { dom, cod, images }
    }

    /// The constant map onto a closed set.
    pub fn constant(dom: SpaceObj, cod: SpaceObj, image: Vec<usize>) -> Result<Self> {
        let n = Carrier::of(&dom).len();
        ClosedSetMap::new(dom, cod, vec![image; n])
    }

    pub fn dom(&self) -> &SpaceObj {
        &self.dom
    }

    pub fn cod(&self) -> &SpaceObj {
        &self.cod
    }

    pub fn image(&self, x: usize) -> &FixedBitSet {
        &self.images[x]
    }

    /// `(g ∘ f)(x) = cl(⋃_{y ∈ f(x)} g(y))`.
    pub fn then(&self, g: &ClosedSetMap) -> Result<ClosedSetMap> {
        if self.cod != g.dom {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {} → {} with {} → {}",
                self.dom, self.cod, g.dom, g.cod
            )));
        }
        let cc = Carrier::of(&g.cod);
        let images = self
            .images
            .iter()
            .map(|fx| {
                let mut u = FixedBitSet::with_capacity(cc.len());
                for y in fx.ones() {
                    u.union_with(&g.images[y]);
                }
                cc.closure(&u)
            })
            .collect();
        Ok(ClosedSetMap {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            images,
        })
    }

    /// `(f ⊗ g)(a, b) = f(a) × g(b)`, already closed in the product.
    pub fn product(&self, g: &ClosedSetMap) -> ClosedSetMap {
        let c2 = Carrier::of(&g.cod).len();
        let c = Carrier::of(&self.cod).len() * c2;
        let mut images = Vec::with_capacity(self.images.len() * g.images.len());
        for fa in &self.images {
            for gb in &g.images {
                images.push(bits(c, fa.ones().flat_map(|x| gb.ones().map(move |y| x * c2 + y))));
            }
        }
        ClosedSetMap {
            dom: self.dom.tensor(&g.dom),
            cod: self.cod.tensor(&g.cod),
            images,
        }
    }
}

impl fmt::Debug for ClosedSetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {} {{", self.dom, self.cod)?;
        for (x, img) in self.images.iter().enumerate() {
            if x > 0 {
                f.write_str("; ")?;
            }
            let elems: Vec<String> = img.ones().map(|y| point_label(&self.cod, y)).collect();
            write!(f, "{} ↦ {{{}}}", point_label(&self.dom, x), elems.join(" "))?;
        }
        f.write_str("}")
    }
}

/// Smallest closed superset of `s` in `space`.
pub fn closure(s: &FixedBitSet, space: &FiniteTopSpace) -> FixedBitSet {
    space.closure(s)
}

/// Preimages of the subbasic opens `Hit(U)` must be open.
///
/// Every open `U` is the union of the minimal neighbourhoods `U_y` of its
/// points and `f⁻¹Hit(U) = ⋃_{y ∈ U} f⁻¹Hit(U_y)`, so the `U_y` suffice.
pub fn continuity_check(f: &ClosedSetMap) -> CheckReport {
    let dc = Carrier::of(&f.dom);
    let cc = Carrier::of(&f.cod);
    for y in 0..cc.len() {
        let u = cc.nbhd(y);
        let pre = bits(dc.len(), (0..dc.len()).filter(|&x| !f.images[x].is_disjoint(u)));
        if !dc.is_open(&pre) {
            let u_labels: Vec<String> = u.ones().map(|p| point_label(&f.cod, p)).collect();
            let pre_labels: Vec<String> = pre.ones().map(|p| point_label(&f.dom, p)).collect();
            return CheckReport::fail(
                "continuity",
                format!("U = {{{}}}", u_labels.join(" ")),
                format!(
                    "preimage of Hit(U) is {{{}}}, which is not open",
                    pre_labels.join(" ")
                ),
            );
        }
    }
    CheckReport::pass("continuity", format!("{} subbasic preimages open", cc.len()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Vietoris;

impl MarkovCategory for Vietoris {
    type Atom = FiniteTopSpace;
    type Morphism = ClosedSetMap;

    fn name(&self) -> &'static str {
        "vietoris"
    }

    fn dom<'a>(&self, f: &'a ClosedSetMap) -> &'a SpaceObj {
        &f.dom
    }

    fn cod<'a>(&self, f: &'a ClosedSetMap) -> &'a SpaceObj {
        &f.cod
    }

    fn id(&self, x: &SpaceObj) -> ClosedSetMap {
        ClosedSetMap::from_function(x.clone(), x.clone(), |i| i)
    }

    fn compose(&self, f: &ClosedSetMap, g: &ClosedSetMap) -> Result<ClosedSetMap> {
        f.then(g)
    }

    fn tensor(&self, f: &ClosedSetMap, g: &ClosedSetMap) -> ClosedSetMap {
        f.product(g)
    }

    fn swap(&self, x: &SpaceObj, y: &SpaceObj) -> ClosedSetMap {
        let nx = Carrier::of(x).len();
        let ny = Carrier::of(y).len();
        ClosedSetMap::from_function(x.tensor(y), y.tensor(x), |i| (i % ny) * nx + i / ny)
    }

    fn copy(&self, x: &SpaceObj) -> ClosedSetMap {
        let n = Carrier::of(x).len();
        ClosedSetMap::from_function(x.clone(), x.tensor(x), |i| i * n + i)
    }

    fn discard(&self, x: &SpaceObj) -> ClosedSetMap {
        ClosedSetMap::from_function(x.clone(), Obj::unit(), |_| 0)
    }

    fn equal(&self, f: &ClosedSetMap, g: &ClosedSetMap) -> bool {
        f == g
    }

    fn permute(&self, factors: &[SpaceObj], perm: &[usize]) -> ClosedSetMap {
        assert!(crate::kernel::is_permutation(perm, factors.len()));
        let cards: Vec<usize> = factors.iter().map(|o| Carrier::of(o).len()).collect();
        let dom = Obj::tensor_all(factors);
        let cod = Obj::tensor_all(perm.iter().map(|&p| &factors[p]));
        ClosedSetMap::from_function(dom, cod, |idx| {
            let blocks = digits_of(&cards, idx);
            perm.iter().fold(0, |acc, &p| acc * cards[p] + blocks[p])
        })
    }
}

/// Random continuous map: random nonempty closed images, then made monotone
/// along the specialization order by `f'(x) = cl(⋃_{z ⊑ x} f(z))`.
pub fn random_map_with<R: Rng + ?Sized>(rng: &mut R, dom: &SpaceObj, cod: &SpaceObj) -> ClosedSetMap {
    let dc = Carrier::of(dom);
    let cc = Carrier::of(cod);
    assert!(cc.len() < 64, "random images are drawn as u64 masks");
    let raw: Vec<FixedBitSet> = (0..dc.len())
        .map(|_| {
            let mask = rng.gen_range(1..(1u64 << cc.len()));
            cc.closure(&bits(cc.len(), (0..cc.len()).filter(|&y| mask >> y & 1 == 1)))
        })
        .collect();
    let images = (0..dc.len())
        .map(|x| {
            let mut u = FixedBitSet::with_capacity(cc.len());
            for z in (0..dc.len()).filter(|&z| dc.nbhd(z).contains(x)) {
                u.union_with(&raw[z]);
            }
            cc.closure(&u)
        })
        .collect();
    ClosedSetMap {
        dom: dom.clone(),
        cod: cod.clone(),
        images,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_points: usize,
    pub seed: u64,
    /// Number of quadruples drawn, skipped ones included.
    pub budget: usize,
    pub discrete_only: bool,
}

#[derive(Clone, Debug)]
pub struct CausalityQuadruple {
    pub f: ClosedSetMap,
    pub g: ClosedSetMap,
    pub h1: ClosedSetMap,
    pub h2: ClosedSetMap,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub drawn: usize,
    pub skipped_equal: usize,
    pub hypothesis_true: usize,
    pub counterexample: Option<CausalityQuadruple>,
}

impl SearchOutcome {
    /// A report that records the outcome without asserting anything.
    pub fn report(&self) -> CheckReport {
        let detail = format!(
            "drew {} quadruples, skipped {} with h1 = h2, hypothesis held on {}",
            self.drawn, self.skipped_equal, self.hypothesis_true
        );
        match &self.counterexample {
            None => CheckReport::pass("vietoris causality search", format!("{detail}; no counterexample found")),
            Some(q) => CheckReport {
                name: "vietoris causality search".into(),
                passed: true,
                witness: Some(format!(
                    "f = {:?}; g = {:?}; h1 = {:?}; h2 = {:?}",
                    q.f, q.g, q.h1, q.h2
                )),
                detail: format!("{detail}; counterexample to causality found"),
            },
        }
    }
}

/// Draws quadruples `f: A → X, g: X → Y, h1, h2: Y → Z` over random spaces of
/// at most `max_points` points and stops at the first one where the causality
/// hypothesis holds but the conclusion fails. Half of the `h2` are one-point
/// perturbations of `h1`. The traversal is a function of the seed.
pub fn causality_search(cfg: &SearchConfig) -> SearchOutcome {
    assert!(cfg.max_points >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = SearchOutcome {
        drawn: 0,
        skipped_equal: 0,
        hypothesis_true: 0,
        counterexample: None,
    };
    let space = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(1..=cfg.max_points);
        Obj::atom(FiniteTopSpace::random_with(rng, n, cfg.discrete_only))
    };
    while out.drawn < cfg.budget {
        out.drawn += 1;
        let a = space(&mut rng);
        let x = space(&mut rng);
        let y = space(&mut rng);
        let z = space(&mut rng);
        let f = random_map_with(&mut rng, &a, &x);
        let g = random_map_with(&mut rng, &x, &y);
        let h1 = random_map_with(&mut rng, &y, &z);
        let h2 = if rng.gen_bool(0.5) {
            random_map_with(&mut rng, &y, &z)
        } else {
            perturb(&mut rng, &h1)
        };
        if h1 == h2 {
            out.skipped_equal += 1;
            continue;
        }
        let r = predicates::check_causality_triple(&Vietoris, &f, &g, &h1, &h2)
            .expect("search builds well-typed quadruples");
        if r.hypothesis_holds {
            out.hypothesis_true += 1;
            if !r.conclusion_holds {
                out.counterexample = Some(CausalityQuadruple { f, g, h1, h2 });
                break;
            }
        }
    }
    out
}

/// Changes the image at one point to a random closed set, then restores continuity.
fn perturb<R: Rng + ?Sized>(rng: &mut R, h: &ClosedSetMap) -> ClosedSetMap {
    let dc = Carrier::of(&h.dom);
    let cc = Carrier::of(&h.cod);
    let at = rng.gen_range(0..dc.len());
    let mask = rng.gen_range(1..(1u64 << cc.len()));
    let mut images = h.images.clone();
    images[at] = cc.closure(&bits(cc.len(), (0..cc.len()).filter(|&y| mask >> y & 1 == 1)));
    let fixed = (0..dc.len())
        .map(|x| {
            let mut u = FixedBitSet::with_capacity(cc.len());
            for z in (0..dc.len()).filter(|&z| dc.nbhd(z).contains(x)) {
                u.union_with(&images[z]);
            }
            cc.closure(&u)
        })
        .collect();
    ClosedSetMap {
        dom: h.dom.clone(),
        cod: h.cod.clone(),
        images: fixed,
    }
}

/// Every continuous map `dom → cod` (small spaces only).
pub fn all_maps(dom: &SpaceObj, cod: &SpaceObj) -> Vec<ClosedSetMap> {
    let dc = Carrier::of(dom);
    let cc = Carrier::of(cod);
    assert!(cc.len() <= 8 && dc.len() <= 4, "enumeration is exponential");
    let closed: Vec<FixedBitSet> = (1u32..1 << cc.len())
        .map(|m| bits(cc.len(), (0..cc.len()).filter(|&y| m >> y & 1 == 1)))
        .filter(|s| cc.is_closed(s))
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; dc.len()];
    loop {
        let f = ClosedSetMap {
            dom: dom.clone(),
            cod: cod.clone(),
            images: choice.iter().map(|&c| closed[c].clone()).collect(),
        };
        if continuity_check(&f).passed {
            out.push(f);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < closed.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

impl fmt::Display for SearchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max_points={} seed={} budget={} discrete_only={}",
            self.max_points, self.seed, self.budget, self.discrete_only
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::predicates::*;

    fn atom(s: FiniteTopSpace) -> SpaceObj {
        Obj::atom(s)
    }

    #[test]
    fn completion_reports_additions() {
        let pts = FinSet::range(3).unwrap();
        let (s, c) = FiniteTopSpace::from_opens(pts, vec![vec![0], vec![1]]).unwrap();
        // ∅, {0,1,2}, {0,1} added
        assert_eq!(c.added, vec![vec![], vec![0, 1], vec![0, 1, 2]]);
        assert_eq!(s.opens().len(), 5);
        assert!(FiniteTopSpace::from_opens(FinSet::range(2).unwrap(), vec![vec![5]]).is_err());
    }

    #[test]
    fn closure_examples() {
        let s = FiniteTopSpace::sierpinski();
        // closed sets are complements of opens: {0,1}, {0}, ∅
        let closed: Vec<FixedBitSet> = s
            .opens()
            .iter()
            .map(|o| bits(2, (0..2).filter(|&p| !o.contains(p))))
            .collect();
        let brute = |t: &FixedBitSet| {
            let mut acc = full(2);
            for c in closed.iter().filter(|c| t.is_subset(c)) {
                acc.intersect_with(c);
            }
            acc
        };
        for m in 0u32..4 {
            let t = bits(2, (0..2).filter(|&i| m >> i & 1 == 1));
            assert_eq!(s.closure(&t), brute(&t));
        }
        assert_eq!(s.closure(&bits(2, [1])), full(2));
        assert_eq!(s.closure(&bits(2, [0])), bits(2, [0]));
        assert!(s.closure(&FixedBitSet::with_capacity(2)).is_clear());
    }

    #[test]
    fn continuity_examples() {
        let sier = atom(FiniteTopSpace::sierpinski());
        let two = atom(FiniteTopSpace::discrete(2));
        // closed point ↦ {1} hits U = {1}; open point ↦ {0} misses it.
        // Preimage {0} is not open in Sierpiński space.
        let bad = ClosedSetMap::new(sier.clone(), two.clone(), vec![vec![1], vec![0]]).unwrap();
        let r = continuity_check(&bad);
        assert!(!r.passed);
        assert!(r.witness.is_some());
        assert!(ClosedSetMap::continuous(sier.clone(), two.clone(), vec![vec![1], vec![0]]).is_err());

        let k = ClosedSetMap::constant(sier.clone(), two.clone(), vec![0, 1]).unwrap();
        assert!(continuity_check(&k).passed);
        // discrete domain: everything continuous
        for m in all_maps_unchecked(&two, &sier) {
            assert!(continuity_check(&m).passed);
        }
    }

    fn all_maps_unchecked(dom: &SpaceObj, cod: &SpaceObj) -> Vec<ClosedSetMap> {
        let cc = Carrier::of(cod);
        let closed: Vec<Vec<usize>> = (1u32..1 << cc.len())
            .map(|m| (0..cc.len()).filter(|&y| m >> y & 1 == 1).collect::<Vec<_>>())
            .filter(|s| cc.is_closed(&bits(cc.len(), s.iter().copied())))
            .collect();
        let n = Carrier::of(dom).len();
        let mut out = Vec::new();
        for a in &closed {
            for b in &closed {
                if n == 2 {
                    out.push(ClosedSetMap::new(dom.clone(), cod.clone(), vec![a.clone(), b.clone()]).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn non_closed_image_rejected() {
        let sier = atom(FiniteTopSpace::sierpinski());
        assert!(ClosedSetMap::new(sier.clone(), sier.clone(), vec![vec![1], vec![1]]).is_err());
        assert!(ClosedSetMap::new(sier.clone(), sier, vec![vec![], vec![0]]).is_err());
    }

    #[test]
    fn discrete_composition_is_setmulti() {
        use crate::setmulti::{MultiMap, SetMulti};
        let d = FiniteTopSpace::discrete(3);
        let x = atom(d.clone());
        let fx: crate::finstoch::FinObj = Obj::atom(d.points().clone());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = random_map_with(&mut rng, &x, &x);
            let g = random_map_with(&mut rng, &x, &x);
            let as_multi = |m: &ClosedSetMap| {
                MultiMap::from_sets(fx.clone(), fx.clone(), m.images.clone()).unwrap()
            };
            let lhs = as_multi(&f.then(&g).unwrap());
            let rhs = SetMulti.compose(&as_multi(&f), &as_multi(&g)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn unit_laws_on_three_point_spaces() {
        for s in FiniteTopSpace::all_topologies(3) {
            let x = atom(s);
            let id = Vietoris.id(&x);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..5 {
                let f = random_map_with(&mut rng, &x, &x);
                assert_eq!(id.then(&f).unwrap(), f);
                assert_eq!(f.then(&id).unwrap(), f);
            }
        }
    }

    #[test]
    fn constant_full_maps_compose_to_constant_full() {
        let x = atom(FiniteTopSpace::sierpinski());
        let k = ClosedSetMap::constant(x.clone(), x.clone(), vec![0, 1]).unwrap();
        assert_eq!(k.then(&k).unwrap(), k);
    }

    #[test]
    fn copy_on_products() {
        let d = atom(FiniteTopSpace::discrete(2));
        let c = Vietoris.copy(&d);
        assert_eq!(c.image(1).ones().collect::<Vec<_>>(), vec![3]);

        let s = atom(FiniteTopSpace::sierpinski());
        let c = Vietoris.copy(&s);
        // open point 1: cl{(1,1)} = S × S
        assert_eq!(c.image(1).count_ones(..), 4);
        assert_eq!(c.image(0).ones().collect::<Vec<_>>(), vec![0]);
        let ss = s.tensor(&s);
        let c2 = Vietoris.copy(&ss);
        // point (1,1) of S×S has closure everything, its copy is all of (S×S)²
        assert_eq!(c2.image(3).count_ones(..), 16);
    }

    #[test]
    fn comonoid_laws_small_spaces() {
        for n in 1..=3 {
            for s in FiniteTopSpace::all_topologies(n) {
                let r = check_comonoid_laws(&Vietoris, &atom(s));
                assert!(r.passed, "{}", r.detail);
            }
        }
    }

    #[test]
    fn all_topologies_counts() {
        // number of preorders on n labelled points
        assert_eq!(FiniteTopSpace::all_topologies(1).len(), 1);
        assert_eq!(FiniteTopSpace::all_topologies(2).len(), 4);
        assert_eq!(FiniteTopSpace::all_topologies(3).len(), 29);
    }

    #[test]
    fn monad_laws_and_continuity_of_composites() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let sp = |rng: &mut ChaCha8Rng| {
                let n = rng.gen_range(1..=3);
                atom(FiniteTopSpace::random_with(rng, n, false))
            };
            let (a, b, c, d) = (sp(&mut rng), sp(&mut rng), sp(&mut rng), sp(&mut rng));
            let f = random_map_with(&mut rng, &a, &b);
            let g = random_map_with(&mut rng, &b, &c);
            let h = random_map_with(&mut rng, &c, &d);
            assert!(continuity_check(&f).passed);
            let gf = f.then(&g).unwrap();
            assert!(continuity_check(&gf).passed);
            assert_eq!(gf.then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
        }
    }

    #[test]
    fn search_is_reproducible_and_discrete_is_causal() {
        let cfg = SearchConfig {
            max_points: 3,
            seed: 17,
            budget: 150,
            discrete_only: true,
        };
        let a = causality_search(&cfg);
        assert!(a.counterexample.is_none());
        assert!(a.hypothesis_true > 0);
        let b = causality_search(&cfg);
        assert_eq!((a.drawn, a.skipped_equal, a.hypothesis_true), (b.drawn, b.skipped_equal, b.hypothesis_true));
    }
}
