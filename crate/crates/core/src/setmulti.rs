//! Finite sets with nonempty-multivalued maps: the Kleisli category of the
//! nonempty powerset monad.
//!
//! Subsets are bitsets over the canonical element order of [`crate::finstoch`];
//! a state `I → X` is a nonempty subset of `X`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::error::{Error, Result};
use crate::finstoch::{card, element_label, permutation_index_map, FinObj, FinSet};
use crate::kernel::{CheckReport, MarkovCategory, Obj};

/// `f: X → P(Y) \ {∅}`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiMap {
    dom: FinObj,
    cod: FinObj,
    images: Vec<FixedBitSet>,
}

fn singleton(n: usize, i: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert(i);
    s
}

impl MultiMap {
    /// `images[x]` lists the element indices of `f(x)`; every image must be nonempty.
    pub fn new(dom: FinObj, cod: FinObj, images: Vec<Vec<usize>>) -> Result<Self> {
        let c = card(&cod);
        if images.len() != card(&dom) {
            return Err(Error::InvalidMorphism(format!(
                "expected {} images, found {}",
                card(&dom),
                images.len()
            )));
        }
        let sets = images
            .into_iter()
            .enumerate()
            .map(|(x, img)| {
                if img.is_empty() {
                    return Err(Error::InvalidMorphism(format!("image of element {x} is empty")));
                }
                let mut s = FixedBitSet::with_capacity(c);
                for y in img {
                    if y >= c {
                        return Err(Error::InvalidMorphism(format!("element {y} outside {cod}")));
                    }
                    s.insert(y);
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiMap {
            dom,
            cod,
            images: sets,
        })
    }

    pub fn from_sets(dom: FinObj, cod: FinObj, images: Vec<FixedBitSet>) -> Result<Self> {
        let lists = images.iter().map(|s| s.ones().collect()).collect();
        MultiMap::new(dom, cod, lists)
    }

    /// The singleton-valued map of a function.
    pub fn from_function(dom: FinObj, cod: FinObj, f: impl Fn(usize) -> usize) -> Self {
        let c = card(&cod);
        let images = (0..card(&dom)).map(|x| singleton(c, f(x))).collect();
        MultiMap { dom, cod, images }
    }

    /// The state `I → X` given by a nonempty subset.
    pub fn state(obj: &FinObj, elements: Vec<usize>) -> Result<Self> {
        MultiMap::new(Obj::unit(), obj.clone(), vec![elements])
    }

    pub fn dom(&self) -> &FinObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinObj {
        &self.cod
    }

    pub fn image(&self, x: usize) -> &FixedBitSet {
        &self.images[x]
    }

    pub fn is_singleton_valued(&self) -> bool {
        self.images.iter().all(|s| s.count_ones(..) == 1)
    }

    /// `(g ∘ f)(x) = ⋃_{y ∈ f(x)} g(y)`.
    pub fn then(&self, g: &MultiMap) -> Result<MultiMap> {
        if self.cod != g.dom {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {} → {} with {} → {}",
                self.dom, self.cod, g.dom, g.cod
            )));
        }
        let c = card(&g.cod);
        let images = self
            .images
            .iter()
            .map(|fx| {
                let mut out = FixedBitSet::with_capacity(c);
                for y in fx.ones() {
                    out.union_with(&g.images[y]);
                }
                out
            })
            .collect();
        Ok(MultiMap {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            images,
        })
    }

    /// `(f ⊗ g)(a, b) = f(a) × g(b)`.
    pub fn product(&self, g: &MultiMap) -> MultiMap {
        let c2 = card(&g.cod);
        let c = card(&self.cod) * c2;
        let mut images = Vec::with_capacity(self.images.len() * g.images.len());
        for fa in &self.images {
            for gb in &g.images {
                let mut out = FixedBitSet::with_capacity(c);
                for x in fa.ones() {
                    for y in gb.ones() {
                        out.insert(x * c2 + y);
                    }
                }
                images.push(out);
            }
        }
        MultiMap {
            dom: self.dom.tensor(&g.dom),
            cod: self.cod.tensor(&g.cod),
            images,
        }
    }
}

impl fmt::Debug for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {} {{", self.dom, self.cod)?;
        for (x, img) in self.images.iter().enumerate() {
            if x > 0 {
                f.write_str("; ")?;
            }
            let elems: Vec<String> = img.ones().map(|y| element_label(&self.cod, y)).collect();
            write!(f, "{} ↦ {{{}}}", element_label(&self.dom, x), elems.join(" "))?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SetMulti;

impl MarkovCategory for SetMulti {
    type Atom = FinSet;
    type Morphism = MultiMap;

    fn name(&self) -> &'static str {
        "setmulti"
    }

    fn dom<'a>(&self, f: &'a MultiMap) -> &'a FinObj {
        &f.dom
    }

    fn cod<'a>(&self, f: &'a MultiMap) -> &'a FinObj {
        &f.cod
    }

    fn id(&self, x: &FinObj) -> MultiMap {
        MultiMap::from_function(x.clone(), x.clone(), |i| i)
    }

    fn compose(&self, f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
        f.then(g)
    }

    fn tensor(&self, f: &MultiMap, g: &MultiMap) -> MultiMap {
        f.product(g)
    }

    fn swap(&self, x: &FinObj, y: &FinObj) -> MultiMap {
        let (nx, ny) = (card(x), card(y));
        MultiMap::from_function(x.tensor(y), y.tensor(x), |i| (i % ny) * nx + i / ny)
    }

    fn copy(&self, x: &FinObj) -> MultiMap {
        let n = card(x);
        MultiMap::from_function(x.clone(), x.tensor(x), |i| i * n + i)
    }

    fn discard(&self, x: &FinObj) -> MultiMap {
        MultiMap::from_function(x.clone(), Obj::unit(), |_| 0)
    }

    fn equal(&self, f: &MultiMap, g: &MultiMap) -> bool {
        f == g
    }

    fn permute(&self, factors: &[FinObj], perm: &[usize]) -> MultiMap {
        assert!(crate::kernel::is_permutation(perm, factors.len()));
        let map = permutation_index_map(factors, perm);
        MultiMap::from_function(
            Obj::tensor_all(factors),
            Obj::tensor_all(perm.iter().map(|&p| &factors[p])),
            |i| map[i],
        )
    }
}

/// Coordinate projection of a subset of `⊗ factors` onto the factors `keep`.
pub fn marginal_image(
    state: &MultiMap,
    factors: &[FinObj],
    keep: &[usize],
) -> Result<FixedBitSet> {
    if !state.dom.is_unit() {
        return Err(Error::TypeMismatch("marginal_image expects a state I → X".into()));
    }
    if Obj::tensor_all(factors) != state.cod {
        return Err(Error::SplitMismatch(format!("factors do not multiply to {}", state.cod)));
    }
    for &k in keep {
        if k >= factors.len() {
            return Err(Error::KeepNotSubset {
                index: k,
                len: factors.len(),
            });
        }
    }
    let cards: Vec<usize> = factors.iter().map(card).collect();
    let out_card: usize = keep.iter().map(|&k| cards[k]).product();
    let mut out = FixedBitSet::with_capacity(out_card);
    let mut blocks = vec![0usize; factors.len()];
    for idx in state.images[0].ones() {
        let mut rest = idx;
        for (b, c) in blocks.iter_mut().zip(&cards).rev() {
            *b = rest % c;
            rest /= c;
        }
        out.insert(keep.iter().fold(0, |acc, &k| acc * cards[k] + blocks[k]));
    }
    Ok(out)
}

/// Random map with each image a uniformly random nonempty subset.
pub fn random_multimap_with<R: Rng + ?Sized>(rng: &mut R, dom: &FinObj, cod: &FinObj) -> MultiMap {
    let c = card(cod);
    assert!(c < 64, "random images are drawn as u64 masks");
    let images = (0..card(dom))
        .map(|_| {
            let mask = rng.gen_range(1..(1u64 << c));
            (0..c).filter(|&y| mask >> y & 1 == 1).collect()
        })
        .collect();
    MultiMap::new(dom.clone(), cod.clone(), images).expect("nonempty by construction")
}

/// The states `A_N` (sequences with at least one 1) and `B_N` (at least one 0)
/// on `{0,1}^N`, with a report that they differ while every proper coordinate
/// projection agrees.
///
/// This is the length-`N` truncation of the infinite-sequence example: there
/// the two sets have the same image on every finite window, so a compatible
/// family of finite marginals cannot determine a state on the infinite
/// product.
pub fn nonextension_witness(n: usize) -> Result<(MultiMap, MultiMap, CheckReport)> {
    if n == 0 {
        return Err(Error::InvalidObject("witness needs N ≥ 1".into()));
    }
    if n > 20 {
        return Err(Error::InvalidObject("witness enumerates 2^N sequences; N ≤ 20".into()));
    }
    let bit = FinSet::new(["0", "1"])?;
    let obj = Obj::from_atoms(vec![bit.clone(); n]);
    let factors: Vec<FinObj> = vec![Obj::atom(bit); n];
    let total = 1usize << n;
    let full = total - 1;
    // element index bit (n-1-i) is coordinate i
    let a_n = MultiMap::state(&obj, (0..total).filter(|&s| s != 0).collect())?;
    let b_n = MultiMap::state(&obj, (0..total).filter(|&s| s != full).collect())?;
    let name = format!("setmulti non-extension witness N={n}");
    if a_n == b_n {
        return Ok((
            a_n.clone(),
            b_n,
            CheckReport::fail(name, format!("{a_n:?}"), "A_N and B_N coincide"),
        ));
    }
    for mask in 0..full {
        let keep: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let ia = marginal_image(&a_n, &factors, &keep)?;
        let ib = marginal_image(&b_n, &factors, &keep)?;
        if ia != ib {
            return Ok((
                a_n,
                b_n,
                CheckReport::fail(name, format!("F = {keep:?}"), "proper marginal images differ"),
            ));
        }
    }
    let detail = format!(
        "A_N ≠ B_N ({} vs {} sequences) while all {} proper-subset marginal images agree; \
         on infinite sequences the same holds for every finite window, so finite marginals \
         do not determine the state",
        a_n.image(0).count_ones(..),
        b_n.image(0).count_ones(..),
        full
    );
    Ok((a_n, b_n, CheckReport::pass(name, detail)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::predicates::*;
    use crate::kernel::TensorSplit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(labels: &[&str]) -> FinObj {
        Obj::atom(FinSet::new(labels.iter().copied()).unwrap())
    }

    #[test]
    fn composition_is_union() {
        let x = set(&["x"]);
        let y = set(&["a", "b"]);
        let z = set(&["1", "2"]);
        let f = MultiMap::new(x.clone(), y.clone(), vec![vec![0, 1]]).unwrap();
        let g = MultiMap::new(y.clone(), z.clone(), vec![vec![0], vec![1]]).unwrap();
        let gf = f.then(&g).unwrap();
        let expected: Vec<usize> = [0usize, 1].iter().flat_map(|&yy| g.image(yy).ones()).collect();
        assert_eq!(gf.image(0).ones().collect::<Vec<_>>(), expected);
        assert_eq!(expected, vec![0, 1]);
        assert_eq!(f.then(&SetMulti.discard(&y)).unwrap(), SetMulti.discard(&x));
    }

    #[test]
    fn singleton_composition_is_function_composition() {
        let x = set(&["a", "b", "c"]);
        let f = MultiMap::from_function(x.clone(), x.clone(), |i| (i + 1) % 3);
        let g = MultiMap::from_function(x.clone(), x.clone(), |i| (i * 2) % 3);
        let h = MultiMap::from_function(x.clone(), x.clone(), |i| ((i + 1) % 3 * 2) % 3);
        assert_eq!(f.then(&g).unwrap(), h);
    }

    #[test]
    fn empty_images_rejected() {
        let x = set(&["a"]);
        assert!(MultiMap::new(x.clone(), x, vec![vec![]]).is_err());
    }

    #[test]
    fn copy_and_tensor() {
        let x = set(&["0", "1"]);
        let c = SetMulti.copy(&x);
        assert_eq!(c.image(0).ones().collect::<Vec<_>>(), vec![0]); // (0,0)
        let two = MultiMap::new(x.clone(), x.clone(), vec![vec![0, 1], vec![0, 1]]).unwrap();
        let t = SetMulti.tensor(&two, &two);
        assert!((0..4).all(|i| t.image(i).count_ones(..) == 4));
    }

    #[test]
    fn determinism_is_singleton_valued() {
        let x = set(&["a", "b", "c"]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = [0usize; 2];
        for _ in 0..300 {
            let f = random_multimap_with(&mut rng, &x, &x);
            let det = is_deterministic(&SetMulti, &f);
            assert_eq!(det, f.is_singleton_valued());
            seen[det as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn marginal_images() {
        let x = set(&["0", "1"]);
        let factors = [x.clone(), x.clone()];
        let xx = x.tensor(&x);
        let anti = MultiMap::state(&xx, vec![1, 2]).unwrap();
        assert_eq!(marginal_image(&anti, &factors, &[0]).unwrap().ones().collect::<Vec<_>>(), vec![0, 1]);
        let full = MultiMap::state(&xx, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(marginal_image(&full, &factors, &[1]).unwrap().count_ones(..), 2);
        let unit = marginal_image(&anti, &factors, &[]).unwrap();
        assert_eq!(unit.len(), 1);
        assert!(unit.contains(0));
        // agrees with the generic marginal
        let m = marginalize(&SetMulti, &anti, &TensorSplit::atoms(&xx), &[0]).unwrap();
        assert_eq!(m.image(0), &marginal_image(&anti, &factors, &[0]).unwrap());
    }

    #[test]
    fn witness_small_cases() {
        let (a, b, r) = nonextension_witness(1).unwrap();
        assert!(r.passed);
        assert_eq!(a.image(0).ones().collect::<Vec<_>>(), vec![1]);
        assert_eq!(b.image(0).ones().collect::<Vec<_>>(), vec![0]);

        let (a, b, r) = nonextension_witness(2).unwrap();
        assert!(r.passed);
        // 01, 10, 11 and 00, 01, 10
        assert_eq!(a.image(0).ones().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(b.image(0).ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(nonextension_witness(6).unwrap().2.passed);
        assert!(nonextension_witness(0).is_err());
    }
}
