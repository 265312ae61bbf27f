//! Finite sets and exact rational stochastic matrices.
//!
//! Elements of a tensor object are tuples of atom labels, ordered
//! lexicographically with the first factor most significant. Every structure
//! matrix (copy, swap, reindexing) is fixed by that order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::{MarkovCategory, Obj};
use crate::Q;

/// A nonempty finite set of distinct labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSet {
    labels: Vec<String>,
}

impl FinSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidObject("finite sets must be nonempty".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidObject(format!("duplicate label `{l}`")));
            }
        }
        Ok(FinSet { labels })
    }

    /// `{0, 1, …, n-1}`.
    pub fn range(n: usize) -> Result<Self> {
        FinSet::new((0..n).map(|i| i.to_string()))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(","))
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type FinObj = Obj<FinSet>;

/// Number of elements of a tensor object (1 for the unit).
pub fn card(obj: &FinObj) -> usize {
    obj.atoms().iter().map(FinSet::len).product()
}

/// Mixed-radix digits of element `idx`, one per atom.
pub fn decompose(obj: &FinObj, mut idx: usize) -> Vec<usize> {
    let mut digits = vec![0; obj.len()];
    for (d, a) in digits.iter_mut().zip(obj.atoms()).rev() {
        *d = idx % a.len();
        idx /= a.len();
    }
    digits
}

pub fn recompose(obj: &FinObj, digits: &[usize]) -> usize {
    digits
        .iter()
        .zip(obj.atoms())
        .fold(0, |acc, (&d, a)| acc * a.len() + d)
}

/// Comma-joined tuple label of element `idx`; the unit's element is `*`.
pub fn element_label(obj: &FinObj, idx: usize) -> String {
    if obj.is_unit() {
        return "*".into();
    }
    decompose(obj, idx)
        .iter()
        .zip(obj.atoms())
        .map(|(&d, a)| a.labels()[d].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

/// Inverse of [`element_label`].
pub fn element_index(obj: &FinObj, label: &str) -> Result<usize> {
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
    let digits = parts
        .iter()
        .zip(obj.atoms())
        .map(|(p, a)| a.index_of(p.trim()).ok_or_else(|| Error::UnknownLabel(label.into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(recompose(obj, &digits))
}

/// Index map of the factor permutation: output factor `j` is input factor `perm[j]`.
pub(crate) fn permutation_index_map(factors: &[FinObj], perm: &[usize]) -> Vec<usize> {
    let input = Obj::tensor_all(factors);
    let output = Obj::tensor_all(perm.iter().map(|&p| &factors[p]));
    let cards: Vec<usize> = factors.iter().map(card).collect();
    (0..card(&input))
        .map(|idx| {
            let mut blocks = vec![0; factors.len()];
            let mut rest = idx;
            for (b, c) in blocks.iter_mut().zip(&cards).rev() {
                *b = rest % c;
                rest /= c;
            }
            let out = perm.iter().fold(0, |acc, &p| acc * cards[p] + blocks[p]);
            debug_assert!(out < card(&output));
            out
        })
        .collect()
}

/// A stochastic matrix with exact rational entries: nonnegative rows summing to one.
#[derive(Clone, PartialEq, Eq)]
pub struct StochMatrix {
    dom: FinObj,
    cod: FinObj,
    entries: Vec<Q>,
}

impl StochMatrix {
    /// Validates shape, nonnegativity and exact row sums.
    pub fn new(dom: FinObj, cod: FinObj, rows: Vec<Vec<Q>>) -> Result<Self> {
        let (r, c) = (card(&dom), card(&cod));
        if rows.len() != r {
            return Err(Error::InvalidMorphism(format!(
                "expected {r} rows for {dom}, found {}",
                rows.len()
            )));
        }
        let mut entries = Vec::with_capacity(r * c);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::InvalidMorphism(format!(
                    "row {x} has {} entries, expected {c}",
                    row.len()
                )));
            }
            let mut sum = Q::zero();
            for v in &row {
                if v < &Q::zero() {
                    return Err(Error::InvalidMorphism(format!("negative entry {v} in row {x}")));
                }
                sum += v;
            }
            if !sum.is_one() {
                return Err(Error::InvalidMorphism(format!("row {x} sums to {sum}, not 1")));
            }
            entries.extend(row);
        }
        Ok(StochMatrix { dom, cod, entries })
    }

    fn from_entries(dom: FinObj, cod: FinObj, entries: Vec<Q>) -> Self {
        debug_assert_eq!(entries.len(), card(&dom) * card(&cod));
        StochMatrix { dom, cod, entries }
    }

    /// The deterministic matrix of a function between element indices.
    pub fn from_function(dom: FinObj, cod: FinObj, f: impl Fn(usize) -> usize) -> Self {
        let (r, c) = (card(&dom), card(&cod));
        let mut entries = vec![Q::zero(); r * c];
        for x in 0..r {
            let y = f(x);
            assert!(y < c, "function value {y} out of range {c}");
            entries[x * c + y] = Q::one();
        }
        StochMatrix::from_entries(dom, cod, entries)
    }

    /// The point mass `I → X` at element `x`.
    pub fn dirac(obj: &FinObj, x: usize) -> Result<Self> {
        if x >= card(obj) {
            return Err(Error::UnknownLabel(format!("element {x} of {obj}")));
        }
        Ok(StochMatrix::from_function(Obj::unit(), obj.clone(), |_| x))
    }

    pub fn dirac_label(obj: &FinObj, label: &str) -> Result<Self> {
        StochMatrix::dirac(obj, element_index(obj, label)?)
    }

    /// A state `I → X` from a probability vector.
    pub fn state(obj: &FinObj, probs: Vec<Q>) -> Result<Self> {
        StochMatrix::new(Obj::unit(), obj.clone(), vec![probs])
    }

    pub fn dom(&self) -> &FinObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinObj {
        &self.cod
    }

    pub fn rows(&self) -> usize {
        card(&self.dom)
    }

    pub fn cols(&self) -> usize {
        card(&self.cod)
    }

    pub fn entry(&self, x: usize, y: usize) -> &Q {
        &self.entries[x * self.cols() + y]
    }

    pub fn row(&self, x: usize) -> &[Q] {
        let c = self.cols();
        &self.entries[x * c..(x + 1) * c]
    }

    /// Syntactic determinism: every entry is 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// Chapman--Kolmogorov: `(g ∘ f)_{xz} = Σ_y f_{xy} g_{yz}`.
    pub fn then(&self, g: &StochMatrix) -> Result<StochMatrix> {
        if self.cod != g.dom {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {} → {} with {} → {}",
                self.dom, self.cod, g.dom, g.cod
            )));
        }
        let (r, m, c) = (self.rows(), self.cols(), g.cols());
        let mut out = vec![Q::zero(); r * c];
        for x in 0..r {
            for y in 0..m {
                let a = &self.entries[x * m + y];
                if a.is_zero() {
                    continue;
                }
                for z in 0..c {
                    let b = &g.entries[y * c + z];
                    if !b.is_zero() {
                        out[x * c + z] += a * b;
                    }
                }
            }
        }
        Ok(StochMatrix::from_entries(self.dom.clone(), g.cod.clone(), out))
    }

    /// Kronecker product; rows and columns are label pairs in lexicographic order.
    pub fn kron(&self, g: &StochMatrix) -> StochMatrix {
        let (r1, c1, r2, c2) = (self.rows(), self.cols(), g.rows(), g.cols());
        let cols = c1 * c2;
        let mut out = vec![Q::zero(); r1 * r2 * cols];
        for a in 0..r1 {
            for x in 0..c1 {
                let u = &self.entries[a * c1 + x];
                if u.is_zero() {
                    continue;
                }
                for b in 0..r2 {
                    for y in 0..c2 {
                        let v = &g.entries[b * c2 + y];
                        if !v.is_zero() {
                            out[(a * r2 + b) * cols + x * c2 + y] = u * v;
                        }
                    }
                }
            }
        }
        StochMatrix::from_entries(self.dom.tensor(&g.dom), self.cod.tensor(&g.cod), out)
    }
}

impl fmt::Debug for StochMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {} [", self.dom, self.cod)?;
        for x in 0..self.rows() {
            if x > 0 {
                f.write_str("; ")?;
            }
            for (j, v) in self.row(x).iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
        }
        f.write_str("]")
    }
}

/// The category of finite sets and stochastic matrices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FinStoch;

impl MarkovCategory for FinStoch {
    type Atom = FinSet;
    type Morphism = StochMatrix;

    fn name(&self) -> &'static str {
        "finstoch"
    }

    fn dom<'a>(&self, f: &'a StochMatrix) -> &'a FinObj {
        &f.dom
    }

    fn cod<'a>(&self, f: &'a StochMatrix) -> &'a FinObj {
        &f.cod
    }

    fn id(&self, x: &FinObj) -> StochMatrix {
        StochMatrix::from_function(x.clone(), x.clone(), |i| i)
    }

    fn compose(&self, f: &StochMatrix, g: &StochMatrix) -> Result<StochMatrix> {
        f.then(g)
    }

    fn tensor(&self, f: &StochMatrix, g: &StochMatrix) -> StochMatrix {
        f.kron(g)
    }

    fn swap(&self, x: &FinObj, y: &FinObj) -> StochMatrix {
        let ny = card(y);
        let nx = card(x);
        StochMatrix::from_function(x.tensor(y), y.tensor(x), |i| (i % ny) * nx + i / ny)
    }

    fn copy(&self, x: &FinObj) -> StochMatrix {
        let n = card(x);
        StochMatrix::from_function(x.clone(), x.tensor(x), |i| i * n + i)
    }

    fn discard(&self, x: &FinObj) -> StochMatrix {
        StochMatrix::from_function(x.clone(), Obj::unit(), |_| 0)
    }

    fn equal(&self, f: &StochMatrix, g: &StochMatrix) -> bool {
        f == g
    }

    fn permute(&self, factors: &[FinObj], perm: &[usize]) -> StochMatrix {
        assert!(crate::kernel::is_permutation(perm, factors.len()));
        let map = permutation_index_map(factors, perm);
        let dom = Obj::tensor_all(factors);
        let cod = Obj::tensor_all(perm.iter().map(|&p| &factors[p]));
        StochMatrix::from_function(dom, cod, |i| map[i])
    }
}

/// A uniformly random weak composition of `d` into `n` parts, as a
/// probability vector with denominator `d`.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize, d: u32) -> Vec<Q> {
    assert!(n >= 1 && d >= 1);
    // stars and bars: choose n-1 bar positions among d+n-1 slots
    let slots = d as usize + n - 1;
    let mut bars: Vec<usize> = rand::seq::index::sample(rng, slots, n - 1).into_vec();
    bars.sort_unstable();
    let mut parts = Vec::with_capacity(n);
    let mut prev = 0usize;
    for (k, &b) in bars.iter().enumerate() {
        // stars between consecutive bars
        parts.push(b - prev - if k == 0 { 0 } else { 1 });
        prev = b;
    }
    let last = if n == 1 { slots } else { slots - prev - 1 };
    parts.push(last);
    let den = num_bigint::BigInt::from(d);
    parts
        .into_iter()
        .map(|p| Q::new(num_bigint::BigInt::from(p), den.clone()))
        .collect()
}

/// Random kernel whose rows are independent draws of [`random_distribution`].
pub fn random_kernel_with<R: Rng + ?Sized>(
    rng: &mut R,
    dom: &FinObj,
    cod: &FinObj,
    d: u32,
) -> StochMatrix {
    let c = card(cod);
    let entries = (0..card(dom))
        .flat_map(|_| random_distribution(rng, c, d))
        .collect();
    StochMatrix::from_entries(dom.clone(), cod.clone(), entries)
}

/// Random kernel with denominators dividing `d`, reproducible from `seed`.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn random_kernel(dom: &FinObj, cod: &FinObj, seed: u64, d: u32) -> StochMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_kernel_with(&mut rng, dom, cod, d)
}

/// A uniformly random function `dom → cod` as a deterministic kernel.
pub fn random_function_with<R: Rng + ?Sized>(
    rng: &mut R,
    dom: &FinObj,
    cod: &FinObj,
) -> StochMatrix {
    let c = card(cod);
    let values: Vec<usize> = (0..card(dom)).map(|_| rng.gen_range(0..c)).collect();
    StochMatrix::from_function(dom.clone(), cod.clone(), |x| values[x])
}
