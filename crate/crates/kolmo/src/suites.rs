//! Seeded verification suites.
//!
//! Instance `i` of a suite is generated from its own ChaCha8 stream
//! (`seed` mixed with a per-suite tag, stream `i`), so reports do not depend
//! on evaluation order and `parallel` runs give identical bytes. Each suite
//! folds its instances into a few aggregate cases: total, informative
//! (hypothesis exercised), violations, and the first witness.

use std::collections::BTreeMap;
use std::sync::Arc;

use kolmo_core::cringplus::{builtin, check_noncausality, CRingPlus, PolyRing};
use kolmo_core::finstoch::{card, random_distribution, random_function_with, random_kernel_with, FinObj, FinSet, FinStoch, StochMatrix};
use kolmo_core::kernel::predicates::{check_causality_triple, check_comonoid_laws, check_discard_natural, check_multiplicativity};
use kolmo_core::projective::{
    check_aseq_lemma, check_determinism_lemma, check_exchangeability, check_hs_splitting, check_infindep_lemma,
    check_kolmogorov_finite, iid_family, independent_family, joint_family, CompatibleFamily, IndexInjection, IndexSet,
    Label, StatisticFamily,
};
use kolmo_core::setmulti::{nonextension_witness, random_multimap_with, SetMulti};
use kolmo_core::vietoris::{random_map_with, FiniteTopSpace, Vietoris};
use kolmo_core::{CheckReport, LemmaReport, MarkovCategory, Obj, Q};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{Case, Report};

pub const RANDOM_LAW_COUNT: usize = 500;
pub const DETERMINISM_COUNT: usize = 1_000;
pub const KOLMOGOROV_COUNT: usize = 1_000;
pub const INFINDEP_COUNT: usize = 200;
pub const HS_COUNT: usize = 200;
pub const ASEQ_COUNT: usize = 1_000;
pub const CAUSALITY_COUNT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the default instance count of the randomized suites.
    pub count: Option<usize>,
    /// Window depth of the family suites.
    pub depth: usize,
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            count: None,
            depth: 5,
            parallel: true,
        }
    }
}

impl SuiteConfig {
    fn count(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }
}

pub type SuiteFn = fn(&SuiteConfig) -> Report;

/// Every suite, by CLI name.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("axioms", axioms),
    ("determinism", determinism_lemma),
    ("kolmogorov", kolmogorov_finite),
    ("infindep", infindep),
    ("hewitt-savage", hewitt_savage),
    ("aseq", aseq_lemma),
    ("noncausality", noncausality),
    ("witness", witness),
    ("causality", causality),
];

pub fn suite(name: &str) -> Option<SuiteFn> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
}

const TAG_LAWS: u64 = 1;
const TAG_DET: u64 = 2;
const TAG_KOLMO: u64 = 3;
const TAG_INFINDEP: u64 = 4;
const TAG_HS: u64 = 5;
const TAG_ASEQ: u64 = 6;
const TAG_CAUSAL: u64 = 7;

/// The generator of instance `i` of the suite tagged `tag`.
pub fn instance_rng(seed: u64, tag: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(i as u64);
    rng
}

fn map_instances<T: Send>(cfg: &SuiteConfig, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    if cfg.parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

fn set(n: usize) -> FinObj {
    Obj::atom(FinSet::range(n).expect("n ≥ 1"))
}

/// Aggregate of many implication checks.
#[derive(Default)]
struct Tally {
    total: usize,
    informative: usize,
    violations: usize,
    errors: usize,
    first: Option<String>,
}

impl Tally {
    fn note_failure(&mut self, what: String) {
        if self.first.is_none() {
            self.first = Some(what);
        }
    }

    fn lemma(&mut self, i: usize, r: kolmo_core::Result<LemmaReport>) {
        self.total += 1;
        match r {
            Ok(r) => {
                self.informative += usize::from(r.is_informative());
                if !r.passed() {
                    self.violations += 1;
                    self.note_failure(format!("instance {i}: {}", r.report.witness.unwrap_or_default()));
                }
            }
            Err(e) => {
                self.errors += 1;
                self.note_failure(format!("instance {i}: {e}"));
            }
        }
    }

    /// A check that must pass outright.
    fn check(&mut self, i: usize, r: &CheckReport) {
        self.total += 1;
        self.informative += 1;
        if !r.passed {
            self.violations += 1;
            self.note_failure(format!("instance {i}: {} ({})", r.detail, r.witness.clone().unwrap_or_default()));
        }
    }

    fn case(&self, name: &str) -> Case {
        let detail = format!(
            "{} instances, {} informative, {} violations, {} errors",
            self.total, self.informative, self.violations, self.errors
        );
        match &self.first {
            Some(w) => Case::fail(name, w.clone(), detail),
            None => Case::pass(name, detail),
        }
    }
}

// ------------------------------------------------------------------ axioms

/// Comonoid laws on every object and multiplicativity on every pair.
fn structural<C: MarkovCategory>(cat: &C, objs: &[Obj<C::Atom>], label: &str) -> Case {
    let mut t = Tally::default();
    for (i, x) in objs.iter().enumerate() {
        t.check(i, &check_comonoid_laws(cat, x));
        for y in objs {
            t.check(i, &check_multiplicativity(cat, x, y));
        }
    }
    t.case(&format!("{label}: comonoid laws and multiplicativity on {} objects", objs.len()))
}

/// Category and monoidal laws for `f: A → B`, `g: B → C`, `h: C → D`, `k: D → E`.
fn laws<C: MarkovCategory>(cat: &C, f: &C::Morphism, g: &C::Morphism, h: &C::Morphism, k: &C::Morphism) -> CheckReport {
    let c = |a: &C::Morphism, b: &C::Morphism| cat.compose(a, b).expect("types line up");
    let eq = |name: &str, a: &C::Morphism, b: &C::Morphism| {
        if cat.equal(a, b) {
            CheckReport::pass(name, "")
        } else {
            CheckReport::fail(name, format!("{} vs {}", cat.render(a), cat.render(b)), "sides differ")
        }
    };
    let (a, b) = (cat.dom(f).clone(), cat.cod(f).clone());
    let (cc, d) = (cat.dom(h).clone(), cat.cod(h).clone());
    CheckReport::all(
        "laws",
        vec![
            eq("associativity", &c(&c(f, g), h), &c(f, &c(g, h))),
            eq("left unit", &c(&cat.id(&a), f), f),
            eq("right unit", &c(f, &cat.id(&b)), f),
            check_discard_natural(cat, f),
            eq(
                "interchange",
                &c(&cat.tensor(f, h), &cat.tensor(g, k)),
                &cat.tensor(&c(f, g), &c(h, k)),
            ),
            eq(
                "symmetry is natural",
                &c(&cat.tensor(f, h), &cat.swap(&b, &d)),
                &c(&cat.swap(&a, &cc), &cat.tensor(h, f)),
            ),
        ],
    )
}

fn random_laws<C: MarkovCategory + Sync>(
    cfg: &SuiteConfig,
    cat: &C,
    n: usize,
    label: &str,
    salt: u64,
    object: impl Fn(&mut ChaCha8Rng) -> Obj<C::Atom> + Sync,
    morphism: impl Fn(&mut ChaCha8Rng, &Obj<C::Atom>, &Obj<C::Atom>) -> C::Morphism + Sync,
) -> Case
where
    C::Morphism: Send,
{
    let reports = map_instances(cfg, n, |i| {
        let mut rng = instance_rng(cfg.seed, TAG_LAWS + salt, i);
        let objs: Vec<_> = (0..5).map(|_| object(&mut rng)).collect();
        let f = morphism(&mut rng, &objs[0], &objs[1]);
        let g = morphism(&mut rng, &objs[1], &objs[2]);
        let h = morphism(&mut rng, &objs[2], &objs[3]);
        let k = morphism(&mut rng, &objs[3], &objs[4]);
        laws(cat, &f, &g, &h, &k)
    });
    let mut t = Tally::default();
    for (i, r) in reports.iter().enumerate() {
        t.check(i, r);
    }
    t.case(&format!("{label}: laws on random morphisms"))
}

/// Structural laws exhaustively on small objects plus laws on
/// random morphisms, in all four instances.
pub fn axioms(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("axioms", Some(cfg.seed));
    let n = cfg.count(RANDOM_LAW_COUNT);
    let sets: Vec<FinObj> = std::iter::once(Obj::unit()).chain((1..=3).map(set)).collect();
    r.push(structural(&FinStoch, &sets, "finstoch"));
    r.push(structural(&SetMulti, &sets, "setmulti"));
    let small = |rng: &mut ChaCha8Rng| set(rng.gen_range(1..=3));
    r.push(random_laws(cfg, &FinStoch, n, "finstoch", 0, small, |rng, a, b| {
        let d = rng.gen_range(2..=4);
        random_kernel_with(rng, a, b, d)
    }));
    r.push(random_laws(cfg, &SetMulti, n, "setmulti", 100, small, |rng, a, b| {
        random_multimap_with(rng, a, b)
    }));

    let spaces: Vec<Obj<FiniteTopSpace>> = std::iter::once(Obj::unit())
        .chain((1..=3).flat_map(FiniteTopSpace::all_topologies).map(Obj::atom))
        .collect();
    r.push(structural(&Vietoris, &spaces, "vietoris"));
    r.push(random_laws(
        cfg,
        &Vietoris,
        n,
        "vietoris",
        200,
        |rng| {
            let k = rng.gen_range(1..=3);
            Obj::atom(FiniteTopSpace::random_with(rng, k, false))
        },
        random_map_with,
    ));

    let ring = CRingPlus::new(6);
    let t = Obj::atom(PolyRing::univariate());
    let u = Obj::atom(PolyRing::new(["u"]).expect("valid"));
    let st = Obj::atom(PolyRing::new(["s", "t"]).expect("valid"));
    let mut tally = Tally::default();
    for (i, x) in [&t, &st, &t.tensor(&u)].into_iter().enumerate() {
        tally.check(i, &check_comonoid_laws(&ring, x));
    }
    for (i, (x, y)) in [(&Obj::unit(), &t), (&t, &t), (&t, &u)].into_iter().enumerate() {
        tally.check(i, &check_multiplicativity(&ring, x, y));
    }
    r.push(tally.case("cringplus (degree 6): comonoid laws and multiplicativity"));
    let maps: Vec<_> = ["f", "g", "h1", "h2"].iter().map(|n| builtin(n).expect("builtin")).collect();
    let mut tally = Tally::default();
    for (i, f) in maps.iter().enumerate() {
        for g in &maps {
            for h in &maps {
                tally.check(i, &laws(&ring, f, g, h, f));
            }
        }
    }
    r.push(tally.case("cringplus (degree 6): laws on the builtin maps"));
    r
}

// ------------------------------------------------------- determinism lemma

fn function_values(s: &StochMatrix) -> Vec<usize> {
    (0..s.rows())
        .map(|x| s.row(x).iter().position(One::is_one).expect("deterministic"))
        .collect()
}

/// Instance `i` of the determinism-lemma suite: `p: A → X` and a
/// deterministic `s: X → T`, carriers ≤ 4. A third of the `p` put each row
/// inside one fiber of `s`, so the hypothesis is often exercised.
pub fn determinism_instance(seed: u64, i: usize) -> (StochMatrix, StochMatrix) {
    let mut rng = instance_rng(seed, TAG_DET, i);
    let (a, x, t) = (set(rng.gen_range(1..=3)), set(rng.gen_range(1..=4)), set(rng.gen_range(1..=4)));
    let s = random_function_with(&mut rng, &x, &t);
    let p = match i % 3 {
        0 => {
            let d = rng.gen_range(1..=4);
            random_kernel_with(&mut rng, &a, &x, d)
        }
        1 => {
            let sv = function_values(&s);
            let rows = (0..card(&a))
                .map(|_| {
                    let target = sv[rng.gen_range(0..sv.len())];
                    let fiber: Vec<usize> = (0..sv.len()).filter(|&y| sv[y] == target).collect();
                    let probs = random_distribution(&mut rng, fiber.len(), 3);
                    let mut row = vec![Q::zero(); sv.len()];
                    for (&y, pr) in fiber.iter().zip(probs) {
                        row[y] = pr;
                    }
                    row
                })
                .collect();
            StochMatrix::new(a, x, rows).expect("rows are distributions")
        }
        _ => random_function_with(&mut rng, &a, &x),
    };
    (p, s)
}

/// Determinism lemma on random FinStoch instances.
pub fn determinism_lemma(cfg: &SuiteConfig) -> Report {
    let n = cfg.count(DETERMINISM_COUNT);
    let results = map_instances(cfg, n, |i| {
        let (p, s) = determinism_instance(cfg.seed, i);
        check_determinism_lemma(&FinStoch, &p, &s)
    });
    let mut t = Tally::default();
    for (i, r) in results.into_iter().enumerate() {
        t.lemma(i, r);
    }
    let mut r = Report::new("determinism", Some(cfg.seed));
    r.push(t.case("determinism lemma on random (p, s), carriers ≤ 4"));
    r
}

// ------------------------------------------------------ finite Kolmogorov

/// Instance `i` of the finite Kolmogorov suite: a family on `{0, …, n-1}`,
/// `n ≤ 4`, and a statistic on a subset. Most families are independent;
/// every tenth is an arbitrary joint, where the precondition usually fails.
pub fn kolmogorov_instance(seed: u64, i: usize) -> (CompatibleFamily<FinStoch>, StatisticFamily<StochMatrix>) {
    let mut rng = instance_rng(seed, TAG_KOLMO, i);
    let n = rng.gen_range(1..=4u32);
    let labels: Vec<Label> = (0..n).map(Label::nat).collect();
    let a = set(rng.gen_range(1..=2));
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
    let factors: Vec<FinObj> = sizes.iter().map(|&k| set(k)).collect();
    let deterministic: Vec<bool> = (0..n).map(|_| rng.gen_ratio(1, 3)).collect();
    let fam = if i % 10 == 9 {
        let joint = random_kernel_with(&mut rng, &a, &Obj::tensor_all(&factors), 3);
        joint_family(&FinStoch, labels.clone(), factors.clone(), joint).expect("consistent joint")
    } else {
        let table: BTreeMap<Label, StochMatrix> = labels
            .iter()
            .zip(&factors)
            .zip(&deterministic)
            .map(|((l, x), &det)| {
                let q = if det {
                    random_function_with(&mut rng, &a, x)
                } else {
                    random_kernel_with(&mut rng, &a, x, 3)
                };
                (l.clone(), q)
            })
            .collect();
        let rule = Arc::new(move |l: &Label| table[l].clone());
        independent_family(&FinStoch, a.clone(), IndexSet::Finite(labels.clone()), rule)
    };
    let t = set(rng.gen_range(1..=3));
    let pick = |rng: &mut ChaCha8Rng, pool: &[Label]| -> Vec<Label> {
        let mut g: Vec<Label> = pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if g.is_empty() {
            g.push(pool[rng.gen_range(0..pool.len())].clone());
        }
        g
    };
    let det_labels: Vec<Label> = labels
        .iter()
        .zip(&deterministic)
        .filter(|(_, &d)| d)
        .map(|(l, _)| l.clone())
        .collect();
    let support = match i % 3 {
        1 if !det_labels.is_empty() => pick(&mut rng, &det_labels),
        _ => pick(&mut rng, &labels),
    };
    let xg = fam.object(&support).expect("labels in index");
    let stat = if i.is_multiple_of(3) {
        let v = rng.gen_range(0..card(&t));
        StochMatrix::from_function(xg, t, |_| v)
    } else {
        random_function_with(&mut rng, &xg, &t)
    };
    let stat = StatisticFamily::new(&FinStoch, &support, stat).expect("functions are deterministic");
    (fam, stat)
}

/// Finite Kolmogorov zero--one law on random families.
pub fn kolmogorov_finite(cfg: &SuiteConfig) -> Report {
    let n = cfg.count(KOLMOGOROV_COUNT);
    let results = map_instances(cfg, n, |i| {
        let (fam, stat) = kolmogorov_instance(cfg.seed, i);
        check_kolmogorov_finite(&fam, &stat)
    });
    let mut t = Tally::default();
    for (i, r) in results.into_iter().enumerate() {
        t.lemma(i, r);
    }
    let mut r = Report::new("kolmogorov", Some(cfg.seed));
    r.push(t.case("finite Kolmogorov zero--one law, |F| ≤ 4"));
    r
}

// ---------------------------------------------------- infinite independence

fn random_index(rng: &mut ChaCha8Rng) -> IndexSet {
    match rng.gen_range(0..3) {
        0 => IndexSet::Naturals,
        1 => IndexSet::Arithmetic {
            start: rng.gen_range(0..3),
            step: rng.gen_range(1..=3),
        },
        _ => IndexSet::Tagged {
            tag: rng.gen_range(0..4),
            inner: Box::new(IndexSet::Naturals),
        },
    }
}

/// Instance `i` of the infinite-independence suite: an independent family
/// (every fourth one i.i.d. over a random index set) and a label of its
/// first `depth` labels.
pub fn infindep_instance(seed: u64, i: usize, depth: usize) -> (CompatibleFamily<FinStoch>, Label) {
    let mut rng = instance_rng(seed, TAG_INFINDEP, i);
    let a = set(rng.gen_range(1..=2));
    let fam = if i.is_multiple_of(4) {
        let x = set(rng.gen_range(2..=3));
        let q = random_kernel_with(&mut rng, &a, &x, 4);
        iid_family(&FinStoch, q, random_index(&mut rng))
    } else {
        let mut table = BTreeMap::new();
        for k in 0..depth as u32 {
            let x = set(rng.gen_range(2..=3));
            let q = if rng.gen_ratio(1, 4) {
                random_function_with(&mut rng, &a, &x)
            } else {
                random_kernel_with(&mut rng, &a, &x, 4)
            };
            table.insert(Label::nat(k), q);
        }
        let default = random_kernel_with(&mut rng, &a, &set(2), 2);
        let rule = Arc::new(move |l: &Label| table.get(l).unwrap_or(&default).clone());
        independent_family(&FinStoch, a, IndexSet::Naturals, rule)
    };
    let window = fam.window(depth);
    let label = window[rng.gen_range(0..window.len())].clone();
    (fam, label)
}

/// Every family must display independence on the window and
/// every `X_i ⊥ X_{G∖i}` display must hold.
pub fn infindep(cfg: &SuiteConfig) -> Report {
    let n = cfg.count(INFINDEP_COUNT);
    let results = map_instances(cfg, n, |i| {
        let (fam, label) = infindep_instance(cfg.seed, i, cfg.depth);
        check_infindep_lemma(&fam, &label, cfg.depth)
    });
    let mut t = Tally::default();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(l) if !(l.precondition_holds && l.conclusion_holds) => {
                t.total += 1;
                t.violations += 1;
                t.note_failure(format!("instance {i}: {}", l.report.detail));
            }
            other => t.lemma(i, other),
        }
    }
    let mut r = Report::new("infindep", Some(cfg.seed));
    r.push(t.case(&format!("infinite independence lemma at depth {}", cfg.depth)));
    r
}

// ----------------------------------------------------------- Hewitt--Savage

/// The i.i.d. families whose exchangeability is checked, with their windows.
pub fn exchangeable_families() -> Vec<(String, CompatibleFamily<FinStoch>, usize)> {
    let coin = set(2);
    let fair = StochMatrix::state(&coin, vec![Q::new(1.into(), 2.into()); 2]).expect("distribution");
    let biased = random_kernel_with(&mut instance_rng(0, TAG_HS, usize::MAX), &set(2), &coin, 5);
    let three = StochMatrix::state(&set(3), vec![Q::new(1.into(), 2.into()), Q::new(1.into(), 3.into()), Q::new(1.into(), 6.into())])
        .expect("distribution");
    vec![
        ("fair coin".into(), iid_family(&FinStoch, fair.clone(), IndexSet::Naturals), 6),
        ("coin with a two-valued parameter".into(), iid_family(&FinStoch, biased, IndexSet::Naturals), 6),
        (
            "fair coin on tagged labels".into(),
            iid_family(
                &FinStoch,
                fair,
                IndexSet::Tagged {
                    tag: 2,
                    inner: Box::new(IndexSet::Arithmetic { start: 1, step: 2 }),
                },
            ),
            6,
        ),
        ("three-valued die".into(), iid_family(&FinStoch, three, IndexSet::Naturals), 4),
    ]
}

/// Instance `i` of the splitting suite: an i.i.d. family, injections
/// `n ↦ m·n + r₁` and `n ↦ m·n + r₂` with `r₁ ≠ r₂`, and finite `F1, F2`.
pub fn hs_instance(seed: u64, i: usize) -> (CompatibleFamily<FinStoch>, IndexInjection, IndexInjection, Vec<Label>, Vec<Label>) {
    let mut rng = instance_rng(seed, TAG_HS, i);
    let a = set(rng.gen_range(1..=2));
    let k = if rng.gen_ratio(1, 4) { 3 } else { 2 };
    let q = random_kernel_with(&mut rng, &a, &set(k), 4);
    let fam = iid_family(&FinStoch, q, IndexSet::Naturals);
    let m = rng.gen_range(2..=3u32);
    let mut residues: Vec<u32> = (0..m).collect();
    residues.shuffle(&mut rng);
    let tau1 = IndexInjection::affine(m, residues[0]).expect("scale ≥ 1");
    let tau2 = IndexInjection::affine(m, residues[1]).expect("scale ≥ 1");
    let max = if k == 3 { 1 } else { 2 };
    let mut pick = || {
        let mut pool: Vec<Label> = (0..3).map(Label::nat).collect();
        pool.shuffle(&mut rng);
        let len = rng.gen_range(1..=max);
        pool.truncate(len);
        pool
    };
    let (f1, f2) = (pick(), pick());
    (fam, tau1, tau2, f1, f2)
}

/// Exchangeability on windows of i.i.d. families, a
/// non-identical family as expected failure, and the splitting step.
pub fn hewitt_savage(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("hewitt-savage", Some(cfg.seed));
    let fams = exchangeable_families();
    let run = |(name, f, w): (String, CompatibleFamily<FinStoch>, usize)| (name, check_exchangeability(&f, w));
    let checks: Vec<(String, CheckReport)> = if cfg.parallel {
        fams.into_par_iter().map(run).collect()
    } else {
        fams.into_iter().map(run).collect()
    };
    for (name, c) in checks {
        r.push(Case {
            name: format!("exchangeability of the i.i.d. {name}: {}", c.name),
            ..c.into()
        });
    }
    // two different coins side by side are independent but not exchangeable
    let coin = set(2);
    let heads = StochMatrix::state(&coin, vec![Q::one(), Q::zero()]).expect("distribution");
    let fair = StochMatrix::state(&coin, vec![Q::new(1.into(), 2.into()); 2]).expect("distribution");
    let rule = Arc::new(move |l: &Label| if l == &Label::nat(0) { heads.clone() } else { fair.clone() });
    let mixed = independent_family(&FinStoch, Obj::unit(), IndexSet::Naturals, rule);
    let c = check_exchangeability(&mixed, 3);
    r.push(if c.passed {
        Case::fail("non-identical family is not exchangeable", "the check passed", c.detail)
    } else {
        Case::pass(
            "non-identical family is not exchangeable",
            format!("fails as expected at {}", c.witness.unwrap_or_default()),
        )
    });

    let n = cfg.count(HS_COUNT);
    let results = map_instances(cfg, n, |i| {
        let (fam, t1, t2, f1, f2) = hs_instance(cfg.seed, i);
        check_hs_splitting(&fam, &t1, &t2, &f1, &f2)
    });
    let mut t = Tally::default();
    for (i, res) in results.into_iter().enumerate() {
        match res {
            Ok(l) if !(l.precondition_holds && l.conclusion_holds) => {
                t.total += 1;
                t.violations += 1;
                t.note_failure(format!("instance {i}: {}", l.report.detail));
            }
            other => t.lemma(i, other),
        }
    }
    r.push(t.case("Hewitt--Savage splitting with disjoint-image injections"));
    r
}

// -------------------------------------------------------------------- aseq

/// Instance `i` of the a.s.-equality suite: `p: A → X` avoiding a random
/// set of states, a function `f: X → Y`, and `g` that is either `f`
/// perturbed off the support of `p` (even `i`) or random (odd `i`).
pub fn aseq_instance(seed: u64, i: usize) -> (StochMatrix, StochMatrix, StochMatrix) {
    let mut rng = instance_rng(seed, TAG_ASEQ, i);
    let (na, nx, ny) = (rng.gen_range(1..=2), rng.gen_range(2..=4), rng.gen_range(1..=3));
    let (a, x, y) = (set(na), set(nx), set(ny));
    let avoided: Vec<bool> = {
        let keep = rng.gen_range(0..nx);
        (0..nx).map(|s| s != keep && rng.gen_bool(0.5)).collect()
    };
    let allowed: Vec<usize> = (0..nx).filter(|&s| !avoided[s]).collect();
    let rows = (0..na)
        .map(|_| {
            let probs = random_distribution(&mut rng, allowed.len(), 3);
            let mut row = vec![Q::zero(); nx];
            for (&s, pr) in allowed.iter().zip(probs) {
                row[s] = pr;
            }
            row
        })
        .collect();
    let p = StochMatrix::new(a, x.clone(), rows).expect("rows are distributions");
    let f = random_function_with(&mut rng, &x, &y);
    let g = if i.is_multiple_of(2) {
        let noise = random_kernel_with(&mut rng, &x, &y, 2);
        let rows = (0..nx)
            .map(|s| if avoided[s] { noise.row(s).to_vec() } else { f.row(s).to_vec() })
            .collect();
        StochMatrix::new(x, y, rows).expect("rows are distributions")
    } else if rng.gen_bool(0.5) {
        random_function_with(&mut rng, &x, &y)
    } else {
        random_kernel_with(&mut rng, &x, &y, 2)
    };
    (p, f, g)
}

/// The a.s.-equality lemma on constructed FinStoch instances.
pub fn aseq_lemma(cfg: &SuiteConfig) -> Report {
    let n = cfg.count(ASEQ_COUNT);
    let results = map_instances(cfg, n, |i| {
        let (p, f, g) = aseq_instance(cfg.seed, i);
        check_aseq_lemma(&FinStoch, &p, &f, &g)
    });
    let mut t = Tally::default();
    for (i, r) in results.into_iter().enumerate() {
        t.lemma(i, r);
    }
    let mut r = Report::new("aseq", Some(cfg.seed));
    r.push(t.case("a.s. equality lemma in FinStoch"));
    r
}

// ---------------------------------------------------------------- causality

/// Instance `i` of the causality suite: `f: A → X`, `g: X → Y`,
/// `h1, h2: Y → Z`, carriers ≤ 3. `h2` is random, equal to `h1`, or `h1`
/// resampled on the states `f ; g` never reaches, by `i mod 3`.
pub fn causality_instance(seed: u64, i: usize) -> [StochMatrix; 4] {
    let mut rng = instance_rng(seed, TAG_CAUSAL, i);
    let [a, x, y, z] = [(); 4].map(|_| set(rng.gen_range(1..=3)));
    let morph = |rng: &mut ChaCha8Rng, d: &FinObj, c: &FinObj| {
        if rng.gen_bool(0.5) {
            random_function_with(rng, d, c)
        } else {
            let den = rng.gen_range(2..=3);
            random_kernel_with(rng, d, c, den)
        }
    };
    let f = morph(&mut rng, &a, &x);
    let g = morph(&mut rng, &x, &y);
    let h1 = random_kernel_with(&mut rng, &y, &z, 2);
    let h2 = match i % 3 {
        0 => random_kernel_with(&mut rng, &y, &z, 2),
        1 => h1.clone(),
        _ => {
            let fg = f.then(&g).expect("types line up");
            let reached: Vec<bool> = (0..card(&y)).map(|s| (0..fg.rows()).any(|r| !fg.entry(r, s).is_zero())).collect();
            let noise = random_kernel_with(&mut rng, &y, &z, 2);
            let rows = (0..card(&y))
                .map(|s| if reached[s] { h1.row(s).to_vec() } else { noise.row(s).to_vec() })
                .collect();
            StochMatrix::new(y, z, rows).expect("rows are distributions")
        }
    };
    [f, g, h1, h2]
}

/// Causality of FinStoch on random quadruples.
pub fn causality(cfg: &SuiteConfig) -> Report {
    let n = cfg.count(CAUSALITY_COUNT);
    let results = map_instances(cfg, n, |i| {
        let [f, g, h1, h2] = causality_instance(cfg.seed, i);
        check_causality_triple(&FinStoch, &f, &g, &h1, &h2)
    });
    let mut t = Tally::default();
    for (i, r) in results.into_iter().enumerate() {
        t.total += 1;
        match r {
            Ok(c) => {
                t.informative += usize::from(c.hypothesis_holds);
                if !c.report.passed {
                    t.violations += 1;
                    t.note_failure(format!("instance {i}: {}", c.report.witness.unwrap_or_default()));
                }
            }
            Err(e) => {
                t.errors += 1;
                t.note_failure(format!("instance {i}: {e}"));
            }
        }
    }
    let mut r = Report::new("causality", Some(cfg.seed));
    r.push(t.case("causality of FinStoch on random quadruples, carriers ≤ 3"));
    r
}

// ------------------------------------------------------- exact witnesses

/// The CRing non-causality example for every degree bound up to 12.
pub fn noncausality(_cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("noncausality", None);
    for d in 2..=12 {
        match check_noncausality(d) {
            Ok(n) => r.push(n.report),
            Err(e) => r.push(Case::fail(format!("cring non-causality up to degree {d}"), e.to_string(), "error")),
        }
    }
    r
}

/// The SetMulti non-extension witness for `N = 1..=8`.
pub fn witness(_cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("witness", None);
    for n in 1..=8 {
        match nonextension_witness(n) {
            Ok((_, _, c)) => r.push(c),
            Err(e) => r.push(Case::fail(format!("setmulti non-extension witness N={n}"), e.to_string(), "error")),
        }
    }
    r
}
