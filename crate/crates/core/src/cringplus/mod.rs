//! The opposite of the category of commutative rings with additive unital
//! maps, restricted to integer polynomial rings.
//!
//! A morphism `R → S` here is an additive, unit-preserving map `S → R`. It is
//! stored as a rule on the monomials of `S` and extended additively, so
//! composition reverses: `f` followed by `g` is represented by `rep_f ∘ rep_g`.
//! Copy is represented by multiplication `R ⊗ R → R`, discard by the unit
//! `ℤ → R`, and `R ⊗ S` is the polynomial ring on the disjoint union of the
//! variables.
//!
//! Equality of rules is undecidable in general; [`CRingPlus`] compares them on
//! every monomial whose exponents are all at most its degree bound.

mod poly;

pub use poly::{Monomial, Poly};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::kernel::predicates::{self, CausalityReport};
use crate::kernel::{CheckReport, MarkovCategory, Obj};

/// `ℤ[vars]`, an atomic object.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new<I, S>(vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidObject(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidObject(format!("duplicate variable {v}")));
            }
        }
        Ok(PolyRing { vars })
    }

    /// `ℤ[t]`.
    pub fn univariate() -> Self {
        PolyRing::new(["t"]).expect("valid name")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℤ[{}]", self.vars.join(","))
    }
}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type RingObj = Obj<PolyRing>;

/// Number of variables of the tensor product ring.
pub fn nvars(obj: &RingObj) -> usize {
    obj.atoms().iter().map(|r| r.vars.len()).sum()
}

/// Variable names of the tensor product ring. With several factors each name
/// gets the 1-based factor index as a suffix: `t_1, t_2`.
pub fn var_names(obj: &RingObj) -> Vec<String> {
    if obj.len() <= 1 {
        return obj.atoms().iter().flat_map(|r| r.vars.iter().cloned()).collect();
    }
    obj.atoms()
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.vars.iter().map(move |v| format!("{v}_{}", i + 1)))
        .collect()
}

type Rule = Arc<dyn Fn(&[u32]) -> Poly + Send + Sync>;

/// A morphism `dom → cod`, represented by an additive unital map from the
/// ring `cod` to the ring `dom`.
#[derive(Clone)]
pub struct CringMap {
    dom: RingObj,
    cod: RingObj,
    name: String,
    rule: Rule,
}

/// What a [`CringMap::from_table`] rule does on monomials outside the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableDefault {
    /// `m ↦ m`; needs rings with the same number of variables.
    Identity,
    /// `m ↦ 1`.
    Unit,
    /// `m ↦ 0` (the unit monomial must then be in the table).
    Zero,
}

impl CringMap {
    /// Wraps a monomial rule. `rule` receives exponent vectors of `cod` and
    /// must return polynomials over `dom`; unit preservation is checked.
    pub fn from_rule(
        dom: RingObj,
        cod: RingObj,
        name: impl Into<String>,
        rule: impl Fn(&[u32]) -> Poly + Send + Sync + 'static,
    ) -> Result<Self> {
        let m = CringMap {
            dom,
            cod,
            name: name.into(),
            rule: Arc::new(rule),
        };
        let unit = m.apply_monomial(&vec![0; nvars(&m.cod)]);
        if unit.nvars() != nvars(&m.dom) {
            return Err(Error::InvalidMorphism(format!(
                "{} produces polynomials over the wrong ring",
                m.name
            )));
        }
        if unit != Poly::one(nvars(&m.dom)) {
            return Err(Error::InvalidMorphism(format!("{} does not preserve the unit", m.name)));
        }
        Ok(m)
    }

    /// A finite monomial table plus a default clause.
    pub fn from_table(
        dom: RingObj,
        cod: RingObj,
        name: impl Into<String>,
        table: BTreeMap<Monomial, Poly>,
        default: TableDefault,
    ) -> Result<Self> {
        let (nd, nc) = (nvars(&dom), nvars(&cod));
        if default == TableDefault::Identity && nd != nc {
            return Err(Error::InvalidMorphism(
                "identity default needs rings with the same number of variables".into(),
            ));
        }
        for (m, p) in &table {
            if m.len() != nc || p.nvars() != nd {
                return Err(Error::TypeMismatch(format!(
                    "table entry {m:?} does not match {cod} → {dom}"
                )));
            }
        }
        CringMap::from_rule(dom, cod, name, move |m| match table.get(m) {
            Some(p) => p.clone(),
            None => match default {
                TableDefault::Identity => Poly::monomial(m.to_vec()),
                TableDefault::Unit => Poly::one(nd),
                TableDefault::Zero => Poly::zero(nd),
            },
        })
    }

    pub fn dom(&self) -> &RingObj {
        &self.dom
    }

    pub fn cod(&self) -> &RingObj {
        &self.cod
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply_monomial(&self, m: &[u32]) -> Poly {
        (self.rule)(m)
    }

    /// The representing map applied to a polynomial over `cod`.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        if p.nvars() != nvars(&self.cod) {
            return Err(Error::TypeMismatch(format!(
                "{} acts on polynomials in {} variables, got {}",
                self.name,
                nvars(&self.cod),
                p.nvars()
            )));
        }
        Ok(p.apply_additive(nvars(&self.dom), |m| self.apply_monomial(m)))
    }

    /// Spot-checks `rep(ab) = rep(a) rep(b)` on monomials with exponents `≤ bound`.
    pub fn is_multiplicative(&self, bound: u32) -> bool {
        let ms = monomials(nvars(&self.cod), bound);
        ms.iter().all(|a| {
            let ra = self.apply_monomial(a);
            ms.iter().all(|b| {
                let ab: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                self.apply_monomial(&ab) == ra.mul(&self.apply_monomial(b))
            })
        })
    }
}

impl fmt::Debug for CringMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = var_names(&self.cod);
        let dst = var_names(&self.dom);
        write!(f, "{} : {} → {} [", self.name, self.dom, self.cod)?;
        for (i, m) in monomials(src.len(), 2).iter().take(9).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let lhs = Poly::monomial(m.clone());
            write!(
                f,
                "{} ↦ {}",
                lhs.display_with(&src),
                self.apply_monomial(m).display_with(&dst)
            )?;
        }
        f.write_str(", …]")
    }
}

/// All exponent vectors in `nvars` variables with entries `≤ bound`.
pub fn monomials(nvars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for _ in 0..nvars {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..=bound).map(move |e| {
                    let mut m = m.clone();
                    m.push(e);
                    m
                })
            })
            .collect();
    }
    out
}

/// The category; `degree_bound` governs [`MarkovCategory::equal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CRingPlus {
    pub degree_bound: u32,
}

impl Default for CRingPlus {
    fn default() -> Self {
        CRingPlus { degree_bound: 12 }
    }
}

impl CRingPlus {
    pub fn new(degree_bound: u32) -> Self {
        CRingPlus { degree_bound }
    }

    /// The first monomial on which `f` and `g` differ, if any.
    pub fn difference(&self, f: &CringMap, g: &CringMap) -> Option<Monomial> {
        if f.dom != g.dom || f.cod != g.cod {
            return Some(Vec::new());
        }
        monomials(nvars(&f.cod), self.degree_bound)
            .into_iter()
            .find(|m| f.apply_monomial(m) != g.apply_monomial(m))
    }
}

fn block_offsets(factors: &[RingObj]) -> Vec<usize> {
    let mut offs = Vec::with_capacity(factors.len() + 1);
    let mut acc = 0;
    offs.push(0);
    for f in factors {
        acc += nvars(f);
        offs.push(acc);
    }
    offs
}

impl MarkovCategory for CRingPlus {
    type Atom = PolyRing;
    type Morphism = CringMap;

    fn name(&self) -> &'static str {
        "cringplus"
    }

    fn dom<'a>(&self, f: &'a CringMap) -> &'a RingObj {
        &f.dom
    }

    fn cod<'a>(&self, f: &'a CringMap) -> &'a RingObj {
        &f.cod
    }

    fn id(&self, x: &RingObj) -> CringMap {
        CringMap {
            dom: x.clone(),
            cod: x.clone(),
            name: "id".into(),
            rule: Arc::new(|m| Poly::monomial(m.to_vec())),
        }
    }

    fn compose(&self, f: &CringMap, g: &CringMap) -> Result<CringMap> {
        if f.cod != g.dom {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {} → {} with {} → {}",
                f.dom, f.cod, g.dom, g.cod
            )));
        }
        let (rf, rg) = (f.rule.clone(), g.rule.clone());
        let n = nvars(&f.dom);
        Ok(CringMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            name: format!("({};{})", f.name, g.name),
            rule: Arc::new(move |m| rg(m).apply_additive(n, |k| rf(k))),
        })
    }

    fn tensor(&self, f: &CringMap, g: &CringMap) -> CringMap {
        let (rf, rg) = (f.rule.clone(), g.rule.clone());
        let split = nvars(&f.cod);
        CringMap {
            dom: f.dom.tensor(&g.dom),
            cod: f.cod.tensor(&g.cod),
            name: format!("({}⊗{})", f.name, g.name),
            rule: Arc::new(move |m| rf(&m[..split]).outer(&rg(&m[split..]))),
        }
    }

    fn swap(&self, x: &RingObj, y: &RingObj) -> CringMap {
        self.permute(&[x.clone(), y.clone()], &[1, 0])
    }

    fn copy(&self, x: &RingObj) -> CringMap {
        let n = nvars(x);
        CringMap {
            dom: x.clone(),
            cod: x.tensor(x),
            name: "copy".into(),
            rule: Arc::new(move |m| Poly::monomial((0..n).map(|i| m[i] + m[n + i]).collect())),
        }
    }

    fn discard(&self, x: &RingObj) -> CringMap {
        let n = nvars(x);
        CringMap {
            dom: x.clone(),
            cod: Obj::unit(),
            name: "discard".into(),
            rule: Arc::new(move |_| Poly::one(n)),
        }
    }

    fn equal(&self, f: &CringMap, g: &CringMap) -> bool {
        self.difference(f, g).is_none()
    }

    /// A cod monomial has block `j` belonging to input factor `perm[j]`; the
    /// representing map moves every block back to its input position.
    fn permute(&self, factors: &[RingObj], perm: &[usize]) -> CringMap {
        assert!(crate::kernel::is_permutation(perm, factors.len()));
        let dom_offs = block_offsets(factors);
        let cod_factors: Vec<RingObj> = perm.iter().map(|&p| factors[p].clone()).collect();
        let cod_offs = block_offsets(&cod_factors);
        let perm = perm.to_vec();
        let total = *dom_offs.last().expect("nonempty offsets");
        CringMap {
            dom: Obj::tensor_all(factors),
            cod: Obj::tensor_all(&cod_factors),
            name: format!("perm{perm:?}"),
            rule: Arc::new(move |m| {
                let mut out = vec![0; total];
                for (j, &p) in perm.iter().enumerate() {
                    out[dom_offs[p]..dom_offs[p + 1]].copy_from_slice(&m[cod_offs[j]..cod_offs[j + 1]]);
                }
                Poly::monomial(out)
            }),
        }
    }
}

fn t_ring() -> RingObj {
    Obj::atom(PolyRing::univariate())
}

fn t_pow(n: u32) -> Poly {
    Poly::monomial(vec![n])
}

/// The maps on `ℤ[t]` of the non-causality example: `f(tⁿ) = tⁿ⁻¹`,
/// `g(tⁿ) = t` for `n ≥ 1`, `h1 = id`, `h2(tⁿ) = 1`; all fix `1`.
pub fn builtin(name: &str) -> Option<CringMap> {
    let rule: fn(&[u32]) -> Poly = match name {
        "f" => |m| t_pow(m[0].saturating_sub(1)),
        "g" => |m| t_pow(m[0].min(1)),
        "h1" => |m| t_pow(m[0]),
        "h2" => |_| t_pow(0),
        _ => return None,
    };
    Some(CringMap::from_rule(t_ring(), t_ring(), name, rule).expect("builtins are unital"))
}

/// Outcome of [`check_noncausality`].
#[derive(Clone, Debug)]
pub struct NoncausalityReport {
    /// `(fg)(h1(tⁿ)tᵐ) = (fg)(h2(tⁿ)tᵐ)` for all `n, m ≤ D`.
    pub hypothesis_holds: bool,
    /// `f(g(h_i(t)) t)` for `i = 1, 2`.
    pub conclusion_values: (Poly, Poly),
    /// The same quadruple through the generic causality checker.
    pub kernel: CausalityReport,
    pub report: CheckReport,
}

/// Reproduces the failure of causality with the builtin `f, g, h1, h2`.
pub fn check_noncausality(d: u32) -> Result<NoncausalityReport> {
    let h1 = builtin("h1").expect("builtin");
    let h2 = builtin("h2").expect("builtin");
    check_noncausality_with(d, &h1, &h2)
}

/// As [`check_noncausality`] with arbitrary `h1, h2` on `ℤ[t]`. The report
/// passes when the hypothesis holds, the conclusion fails at `n = ℓ = 1,
/// m = 0`, and the generic checker agrees on both.
pub fn check_noncausality_with(d: u32, h1: &CringMap, h2: &CringMap) -> Result<NoncausalityReport> {
    if d < 2 {
        return Err(Error::InvalidObject(format!("degree bound {d} < 2")));
    }
    for h in [h1, h2] {
        if h.dom != t_ring() || h.cod != t_ring() {
            return Err(Error::TypeMismatch(format!("{} is not a map on ℤ[t]", h.name)));
        }
    }
    let f = builtin("f").expect("builtin");
    let g = builtin("g").expect("builtin");
    let fg = |p: &Poly| f.apply(&g.apply(p).expect("ℤ[t]")).expect("ℤ[t]");
    let mut hypothesis_holds = true;
    'outer: for n in 0..=d {
        for m in 0..=d {
            let a = fg(&h1.apply_monomial(&[n]).mul(&t_pow(m)));
            let b = fg(&h2.apply_monomial(&[n]).mul(&t_pow(m)));
            if a != b {
                hypothesis_holds = false;
                break 'outer;
            }
        }
    }
    // n = ℓ = 1, m = 0
    let value = |h: &CringMap| {
        let inner = g.apply(&h.apply_monomial(&[1]).mul(&t_pow(0))).expect("ℤ[t]");
        f.apply(&inner.mul(&t_pow(1))).expect("ℤ[t]")
    };
    let conclusion_values = (value(h1), value(h2));
    let kernel = predicates::check_causality_triple(&CRingPlus::new(d), &f, &g, h1, h2)?;

    let conclusion_fails = conclusion_values.0 != conclusion_values.1;
    let names = var_names(&t_ring());
    let shown = format!(
        "f(g(h1(t))·t) = {}, f(g(h2(t))·t) = {}",
        conclusion_values.0.display_with(&names),
        conclusion_values.1.display_with(&names)
    );
    let agree = kernel.hypothesis_holds == hypothesis_holds && kernel.conclusion_holds == !conclusion_fails;
    let name = format!("cring non-causality up to degree {d}");
    let report = if hypothesis_holds && conclusion_fails && agree {
        CheckReport::pass(name, format!("hypothesis verified for n, m ≤ {d}; {shown}"))
    } else {
        CheckReport::fail(
            name,
            shown,
            format!(
                "hypothesis={hypothesis_holds} conclusion_fails={conclusion_fails} kernel: {}",
                kernel.report.detail
            ),
        )
    };
    Ok(NoncausalityReport {
        hypothesis_holds,
        conclusion_values,
        kernel,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::predicates::*;

    fn b(name: &str) -> CringMap {
        builtin(name).unwrap()
    }

    #[test]
    fn builtin_values() {
        assert_eq!(b("f").apply_monomial(&[2]), t_pow(1));
        assert_eq!(b("f").apply_monomial(&[0]), t_pow(0));
        assert_eq!(b("g").apply_monomial(&[3]), t_pow(1));
        assert_eq!(b("h2").apply_monomial(&[5]), t_pow(0));
        assert_eq!(b("h1").apply_monomial(&[5]), t_pow(5));
        assert!(builtin("k").is_none());
    }

    #[test]
    fn composition_reverses() {
        let cat = CRingPlus::default();
        // Markov f then g is represented by x ↦ f(g(x)); the builtins give 1.
        let fg = cat.compose(&b("f"), &b("g")).unwrap();
        for n in 0..=20 {
            assert_eq!(fg.apply_monomial(&[n]), t_pow(0), "n = {n}");
        }
        // g then f: x ↦ g(f(x)); oracle: t^n ↦ t^(n-1) ↦ t if n ≥ 2, 1 otherwise
        let gf = cat.compose(&b("g"), &b("f")).unwrap();
        for n in 0..=20u32 {
            let expect = if n >= 2 { 1 } else { 0 };
            assert_eq!(gf.apply_monomial(&[n]), t_pow(expect));
        }
        let ff = cat.compose(&b("f"), &b("f")).unwrap();
        assert_eq!(ff.apply_monomial(&[3]), t_pow(1));
        let id = cat.id(&t_ring());
        assert!(cat.equal(&cat.compose(&id, &b("f")).unwrap(), &b("f")));
        assert!(cat.equal(&cat.compose(&b("f"), &id).unwrap(), &b("f")));
    }

    #[test]
    fn structural_maps() {
        let cat = CRingPlus::new(6);
        let x = t_ring();
        let copy = cat.copy(&x);
        assert_eq!(copy.apply_monomial(&[3, 4]), t_pow(7));
        assert_eq!(cat.discard(&x).apply_monomial(&[]), t_pow(0));
        assert!(check_comonoid_laws(&cat, &x).passed);
        let two = Obj::atom(PolyRing::new(["s", "u"]).unwrap());
        assert!(check_multiplicativity(&cat, &x, &two).passed);
        assert_eq!(var_names(&x.tensor(&x)), ["t_1", "t_2"]);
    }

    #[test]
    fn determinism_is_multiplicativity() {
        let cat = CRingPlus::new(6);
        assert!(!is_deterministic(&cat, &b("f")));
        assert!(!b("f").is_multiplicative(6));
        // t ↦ t^2 extends to a ring endomorphism
        let sq = CringMap::from_rule(t_ring(), t_ring(), "sq", |m| t_pow(2 * m[0])).unwrap();
        assert!(is_deterministic(&cat, &sq));
        assert!(sq.is_multiplicative(6));
        for name in ["g", "h1", "h2"] {
            assert_eq!(is_deterministic(&cat, &b(name)), b(name).is_multiplicative(6), "{name}");
        }
    }

    #[test]
    fn unit_preservation_enforced() {
        assert!(CringMap::from_rule(t_ring(), t_ring(), "bad", |m| t_pow(m[0] + 1)).is_err());
        let mut table = BTreeMap::new();
        table.insert(vec![0], t_pow(0));
        table.insert(vec![1], Poly::parse("t + 2", &var_names(&t_ring())).unwrap());
        let m = CringMap::from_table(t_ring(), t_ring(), "tab", table.clone(), TableDefault::Zero).unwrap();
        assert!(m.apply_monomial(&[4]).is_zero());
        table.remove(&vec![0]);
        assert!(CringMap::from_table(t_ring(), t_ring(), "tab", table, TableDefault::Zero).is_err());
    }

    #[test]
    fn noncausality_reproduced() {
        for d in 2..=6 {
            let r = check_noncausality(d).unwrap();
            assert!(r.report.passed, "{}", r.report.detail);
            assert!(r.hypothesis_holds);
            assert!(r.kernel.hypothesis_holds && !r.kernel.conclusion_holds);
        }
        let r = check_noncausality(3).unwrap();
        assert_eq!(r.conclusion_values, (t_pow(1), t_pow(0)));
        assert!(check_noncausality(1).is_err());
    }

    #[test]
    fn equal_h_gives_conclusion() {
        let r = check_noncausality_with(4, &b("h1"), &b("h1")).unwrap();
        assert!(r.hypothesis_holds);
        assert_eq!(r.conclusion_values.0, r.conclusion_values.1);
        assert!(r.kernel.conclusion_holds);
        assert!(!r.report.passed);
    }

    #[test]
    fn permute_matches_swaps() {
        let cat = CRingPlus::new(3);
        let fs = [t_ring(), Obj::atom(PolyRing::new(["a", "b"]).unwrap()), t_ring()];
        let direct = cat.permute(&fs, &[2, 0, 1]);
        let via = crate::kernel::permutation_via_swaps(&cat, &fs, &[2, 0, 1]);
        assert!(cat.equal(&direct, &via));
    }
}
