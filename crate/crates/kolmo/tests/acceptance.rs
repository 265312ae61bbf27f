//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Each criterion runs the library's suite and cross-checks it against an
//! oracle written here from first principles (plain support and product
//! arithmetic on the matrices), so a bug shared by a suite and its checker
//! would still show up.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kolmo::montecarlo::{simulate_hs_negative_control, simulate_kolmogorov_demo, MonteCarloConfig, MonteCarloResult, Prob};
use kolmo::suites::{self, SuiteConfig, SUITES};
use kolmo::{Case, Report};
use kolmo_core::cringplus::{check_noncausality, Poly};
use kolmo_core::finstoch::{card, FinObj, FinSet, FinStoch, StochMatrix};
use kolmo_core::kernel::predicates::check_causality_triple;
use kolmo_core::projective::{
    canonical, check_aseq_lemma, check_determinism_lemma, check_hs_splitting, check_infindep_lemma,
    check_kolmogorov_finite, CompatibleFamily, Label,
};
use kolmo_core::setmulti::{nonextension_witness, SetMulti};
use kolmo_core::vietoris::{causality_search, FiniteTopSpace, SearchConfig};
use kolmo_core::{MarkovCategory, Obj, Q};
use num_traits::{One, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)*));
        }
    };
}

const SEED: u64 = 0;

fn cfg() -> SuiteConfig {
    SuiteConfig {
        seed: SEED,
        ..SuiteConfig::default()
    }
}

// ------------------------------------------------------------------ oracles

/// Row-major digits of `idx` for the given radices.
fn digits(sizes: &[usize], mut idx: usize) -> Vec<usize> {
    let mut d = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        d[k] = idx % sizes[k];
        idx /= sizes[k];
    }
    d
}

fn index(sizes: &[usize], d: &[usize]) -> usize {
    d.iter().zip(sizes).fold(0, |acc, (&x, &n)| acc * n + x)
}

fn is_dirac(row: &[Q]) -> bool {
    row.iter().filter(|x| x.is_one()).count() == 1 && row.iter().filter(|x| !x.is_zero()).count() == 1
}

fn function_values(s: &StochMatrix) -> Vec<usize> {
    (0..s.rows())
        .map(|x| s.row(x).iter().position(One::is_one).expect("deterministic"))
        .collect()
}

fn sizes_of(fam: &CompatibleFamily<FinStoch>, labels: &[Label]) -> Vec<usize> {
    fam.factors(labels).unwrap().iter().map(card).collect()
}

/// `assign(F)` equals the product of its single-label marginals, entrywise.
fn is_product(fam: &CompatibleFamily<FinStoch>, labels: &[Label]) -> bool {
    let joint = fam.assign(labels).unwrap();
    let singles: Vec<StochMatrix> = labels.iter().map(|l| fam.assign(std::slice::from_ref(l)).unwrap()).collect();
    let sizes = sizes_of(fam, labels);
    (0..joint.rows()).all(|a| {
        (0..joint.cols()).all(|idx| {
            let d = digits(&sizes, idx);
            let prod: Q = singles.iter().zip(&d).map(|(m, &x)| m.entry(a, x).clone()).product();
            joint.entry(a, idx) == &prod
        })
    })
}

/// `(used, informative, violations, errors)` from an aggregate case detail.
fn counts(case: &Case) -> [usize; 4] {
    let nums: Vec<usize> = case
        .detail
        .split(", ")
        .map(|part| part.split(' ').next().and_then(|n| n.parse().ok()).unwrap_or(usize::MAX))
        .collect();
    [nums[0], nums[1], nums[2], nums[3]]
}

fn suite_case<'a>(r: &'a Report, needle: &str) -> Result<&'a Case, String> {
    r.cases
        .iter()
        .find(|c| c.name.contains(needle))
        .ok_or_else(|| format!("no case `{needle}` in {}", r.suite))
}

fn passed(r: &Report) -> Result<(), String> {
    match r.cases.iter().find(|c| !c.passed) {
        Some(c) => Err(format!("{}: {} ({})", c.name, c.detail, c.witness.clone().unwrap_or_default())),
        None if r.passed => Ok(()),
        None => Err(format!("{} failed", r.suite)),
    }
}

fn set(n: usize) -> FinObj {
    Obj::atom(FinSet::range(n).unwrap())
}

fn prob(s: &str) -> Prob {
    s.parse().unwrap()
}

// --------------------------------------------------------------- criteria

fn axioms() -> Outcome {
    let start = Instant::now();
    let r = suites::axioms(&cfg());
    passed(&r)?;
    for inst in ["finstoch", "setmulti", "vietoris"] {
        let [n, _, v, e] = counts(suite_case(&r, &format!("{inst}: laws on random morphisms"))?);
        ensure!(n >= 500 && v == 0 && e == 0, "{inst}: {n} random checks, {v} violations");
    }
    suite_case(&r, "cringplus (degree 6)")?;

    // topologies on n labeled points: 1, 4, 29
    let tops: Vec<usize> = (1..=3).map(|n| FiniteTopSpace::all_topologies(n).len()).collect();
    ensure!(tops == [1, 4, 29], "topology counts {tops:?}");
    let [spaces, ..] = counts(suite_case(&r, "vietoris: comonoid laws")?);
    // every space plus the unit, and every ordered pair for multiplicativity
    ensure!(spaces == 35 + 35 * 35, "vietoris structural checks: {spaces}");

    // copy on X ⊗ Y is the diagonal (x, y) ↦ ((x, y), (x, y)), in both
    // FinStoch and SetMulti
    for a in 1..=3 {
        for b in 1..=3 {
            let xy = set(a).tensor(&set(b));
            let n = a * b;
            let c = FinStoch.copy(&xy);
            let m = SetMulti.copy(&xy);
            for i in 0..n {
                for j in 0..n * n {
                    let want = j == i * n + i;
                    ensure!(c.entry(i, j).is_one() == want, "finstoch copy on {a}x{b} at ({i}, {j})");
                    ensure!(m.image(i).contains(j) == want, "setmulti copy on {a}x{b} at ({i}, {j})");
                }
            }
        }
    }
    ensure!(start.elapsed() < Duration::from_secs(120), "took {:?}", start.elapsed());
    Ok(format!("{} exact cases pass; random-morphism laws ≥ 500 per instance", r.cases.len()))
}

fn determinism() -> Outcome {
    let r = suites::determinism_lemma(&cfg());
    passed(&r)?;
    let [n, ..] = counts(&r.cases[0]);
    ensure!(n >= 1000, "only {n} instances");
    let mut informative = 0;
    for i in 0..n {
        let (p, s) = suites::determinism_instance(SEED, i);
        ensure!(p.rows() <= 4 && p.cols() <= 4 && s.cols() <= 4, "instance {i}: carrier too large");
        let sv = function_values(&s);
        let mut hyp = true;
        let mut concl = true;
        for a in 0..p.rows() {
            let mut pt = vec![Q::zero(); s.cols()];
            for x in 0..p.cols() {
                pt[sv[x]] += p.entry(a, x);
            }
            concl &= is_dirac(&pt);
            // joint (x, t) against the product of its marginals
            for x in 0..p.cols() {
                for (t, pt_t) in pt.iter().enumerate() {
                    let joint = if sv[x] == t { p.entry(a, x).clone() } else { Q::zero() };
                    hyp &= joint == p.entry(a, x) * pt_t;
                }
            }
        }
        ensure!(!hyp || concl, "instance {i}: oracle violation");
        let l = check_determinism_lemma(&FinStoch, &p, &s).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(
            l.hypothesis_holds == hyp && l.conclusion_holds == concl,
            "instance {i}: checker ({}, {}) vs oracle ({hyp}, {concl})",
            l.hypothesis_holds,
            l.conclusion_holds
        );
        informative += usize::from(hyp);
    }
    Ok(format!("{n} instances, {informative} with the CI hypothesis, 0 violations"))
}

fn kolmogorov() -> Outcome {
    let r = suites::kolmogorov_finite(&cfg());
    passed(&r)?;
    let [n, ..] = counts(&r.cases[0]);
    ensure!(n >= 1000, "only {n} instances");
    let mut informative = 0;
    for i in 0..n {
        let (fam, stat) = suites::kolmogorov_instance(SEED, i);
        let f = canonical(&fam.window(64));
        ensure!(f.len() <= 4, "instance {i}: |F| = {}", f.len());
        let p = fam.assign(&f).unwrap();
        let sizes = sizes_of(&fam, &f);
        let support = stat.support();
        let gsizes = sizes_of(&fam, support);
        let sv = function_values(stat.stat());
        // s ∘ p by summing over the joint
        let mut concl = true;
        for a in 0..p.rows() {
            let mut pt = vec![Q::zero(); stat.stat().cols()];
            for idx in 0..p.cols() {
                let d = digits(&sizes, idx);
                let g: Vec<usize> = support.iter().map(|l| d[f.iter().position(|m| m == l).unwrap()]).collect();
                pt[sv[index(&gsizes, &g)]] += p.entry(a, idx);
            }
            concl &= is_dirac(&pt);
        }
        let l = check_kolmogorov_finite(&fam, &stat).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(l.conclusion_holds == concl, "instance {i}: conclusion {} vs oracle {concl}", l.conclusion_holds);
        ensure!(l.precondition_holds == is_product(&fam, &f), "instance {i}: precondition disagrees with the product oracle");
        if i % 10 != 9 {
            ensure!(l.precondition_holds, "instance {i}: independent family not displayed independent");
        }
        ensure!(!l.is_informative() || concl, "instance {i}: hypothesis holds but s ∘ p is not deterministic");
        informative += usize::from(l.is_informative());
    }
    Ok(format!("{n} instances, {informative} informative, 0 violations"))
}

fn infindep() -> Outcome {
    let c = cfg();
    ensure!(c.depth == 5, "depth {}", c.depth);
    let r = suites::infindep(&c);
    passed(&r)?;
    let [n, ..] = counts(&r.cases[0]);
    ensure!(n >= 200, "only {n} instances");
    let mut displays = 0;
    for i in 0..n {
        let (fam, label) = suites::infindep_instance(SEED, i, c.depth);
        let w = canonical(&fam.window(c.depth));
        ensure!(w.len() == 5, "instance {i}: window {}", w.len());
        ensure!(is_product(&fam, &w), "instance {i}: not a product on the window");
        let l = check_infindep_lemma(&fam, &label, c.depth).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(l.precondition_holds && l.conclusion_holds, "instance {i}: {}", l.report.detail);
        // the subsets G ∋ label, each one CI display
        displays += 1 << (w.len() - 1);
    }
    Ok(format!("{n} families at depth 5, {displays} CI displays exact"))
}

fn hewitt_savage() -> Outcome {
    let r = suites::hewitt_savage(&cfg());
    passed(&r)?;
    // exchangeability: invariance of the window joint under every permutation
    let mut perms_checked = 0;
    for (name, fam, w) in suites::exchangeable_families() {
        let labels = canonical(&fam.window(w));
        let p = fam.assign(&labels).unwrap();
        let sizes = sizes_of(&fam, &labels);
        let mut perm: Vec<usize> = (0..labels.len()).collect();
        let mut all = vec![perm.clone()];
        while next_permutation(&mut perm) {
            all.push(perm.clone());
        }
        for sigma in &all {
            for a in 0..p.rows() {
                for idx in 0..p.cols() {
                    let d = digits(&sizes, idx);
                    let moved: Vec<usize> = sigma.iter().map(|&k| d[k]).collect();
                    ensure!(p.entry(a, idx) == p.entry(a, index(&sizes, &moved)), "{name}: not invariant under {sigma:?}");
                }
            }
        }
        perms_checked += all.len();
        if name.contains("coin") {
            ensure!(w == 6, "{name}: window {w}");
        }
    }

    let [n, ..] = counts(suite_case(&r, "splitting")?);
    ensure!(n >= 200, "only {n} splitting instances");
    let probe: Vec<Label> = (0..32).map(Label::nat).collect();
    for i in 0..n {
        let (fam, t1, t2, f1, f2) = suites::hs_instance(SEED, i);
        let a: BTreeSet<Label> = t1.image_of(&probe).unwrap().into_iter().collect();
        let b: BTreeSet<Label> = t2.image_of(&probe).unwrap().into_iter().collect();
        ensure!(a.is_disjoint(&b), "instance {i}: images of {t1} and {t2} meet");
        let l = check_hs_splitting(&fam, &t1, &t2, &f1, &f2).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(l.precondition_holds && l.conclusion_holds, "instance {i}: {}", l.report.detail);
    }
    Ok(format!("{perms_checked} window permutations invariant; {n} splitting instances exact"))
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn aseq() -> Outcome {
    let r = suites::aseq_lemma(&cfg());
    passed(&r)?;
    let [n, ..] = counts(&r.cases[0]);
    ensure!(n >= 1000, "only {n} instances");
    let (mut positives, mut negatives) = (0, 0);
    for i in 0..n {
        let (p, f, g) = suites::aseq_instance(SEED, i);
        // g agrees with f on every state p can reach
        let on_support = (0..p.rows()).all(|a| (0..p.cols()).all(|x| p.entry(a, x).is_zero() || f.row(x) == g.row(x)));
        let l = check_aseq_lemma(&FinStoch, &p, &f, &g).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(
            l.hypothesis_holds == on_support && l.conclusion_holds == on_support,
            "instance {i}: checker ({}, {}) vs oracle {on_support}",
            l.hypothesis_holds,
            l.conclusion_holds
        );
        if on_support {
            positives += 1;
        } else {
            negatives += 1;
        }
    }
    ensure!(positives > 0 && negatives > 0, "degenerate sample: {positives} / {negatives}");
    Ok(format!("{n} instances ({positives} a.s. equal, {negatives} not), 0 violations"))
}

fn noncausality() -> Outcome {
    // exponent maps of the additive extensions on monomials
    let f = |n: u32| n.saturating_sub(1);
    let g = |n: u32| n.min(1);
    let h = [|n: u32| n, |_: u32| 0];
    for n in 0..=12 {
        for m in 0..=12 {
            let fg: Vec<u32> = h.iter().map(|hi| f(g(hi(n) + m))).collect();
            ensure!(fg == [0, 0], "hypothesis fails at n={n}, m={m}");
        }
    }
    let past = |hi: &dyn Fn(u32) -> u32, n, m, l| f(g(hi(n) + m) + l);
    ensure!(past(&h[0], 1, 0, 1) == 1 && past(&h[1], 1, 0, 1) == 0, "oracle at (1, 0, 1)");

    let rep = check_noncausality(12).map_err(|e| e.to_string())?;
    ensure!(rep.hypothesis_holds, "hypothesis not verified for n, m ≤ 12");
    let t = ["t".to_string()];
    let (v1, v2) = &rep.conclusion_values;
    ensure!(
        *v1 == Poly::monomial(vec![1]) && *v2 == Poly::one(1),
        "conclusion values {} vs {}",
        v1.display_with(&t),
        v2.display_with(&t)
    );
    ensure!(rep.kernel.hypothesis_holds && !rep.kernel.conclusion_holds, "generic checker disagrees");
    ensure!(rep.report.passed, "{}", rep.report.detail);
    passed(&suites::noncausality(&cfg()))?;
    Ok("hypothesis holds for all n, m ≤ 12; at (n, m, ℓ) = (1, 0, 1) the sides are t vs 1".into())
}

fn witness() -> Outcome {
    for n in 1..=8usize {
        let (a, b, rep) = nonextension_witness(n).map_err(|e| e.to_string())?;
        ensure!(rep.passed, "N={n}: {}", rep.detail);
        let sa: BTreeSet<usize> = a.image(0).ones().collect();
        let sb: BTreeSet<usize> = b.image(0).ones().collect();
        ensure!(sa != sb, "N={n}: states coincide");
        let full = (1usize << n) - 1;
        for mask in 0..full {
            let pa: BTreeSet<usize> = sa.iter().map(|s| s & mask).collect();
            let pb: BTreeSet<usize> = sb.iter().map(|s| s & mask).collect();
            ensure!(pa == pb, "N={n}: marginal images differ on mask {mask:b}");
        }
    }
    passed(&suites::witness(&cfg()))?;
    Ok("N = 1..8: distinct states, all proper marginal images equal".into())
}

fn causality() -> Outcome {
    let r = suites::causality(&cfg());
    passed(&r)?;
    let [n, ..] = counts(&r.cases[0]);
    ensure!(n >= 10_000, "only {n} instances");
    let mut informative = 0;
    for i in 0..n {
        let [f, g, h1, h2] = suites::causality_instance(SEED, i);
        ensure!([&f, &g, &h1].iter().all(|m| m.rows() <= 3 && m.cols() <= 3), "instance {i}: carrier > 3");
        // both sides of the axiom reduce to h1 = h2 on the states f ; g reaches
        let reached = |y: usize| (0..f.rows()).any(|a| (0..f.cols()).any(|x| !(f.entry(a, x) * g.entry(x, y)).is_zero()));
        let agree = (0..g.cols()).all(|y| !reached(y) || h1.row(y) == h2.row(y));
        let c = check_causality_triple(&FinStoch, &f, &g, &h1, &h2).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(
            c.hypothesis_holds == agree && c.conclusion_holds == agree,
            "instance {i}: checker ({}, {}) vs oracle {agree}",
            c.hypothesis_holds,
            c.conclusion_holds
        );
        informative += usize::from(agree);
    }
    Ok(format!("{n} quadruples, {informative} with the hypothesis, 0 counterexamples"))
}

fn timed_mc(f: impl FnOnce() -> MonteCarloResult) -> Result<MonteCarloResult, String> {
    let start = Instant::now();
    let r = f();
    ensure!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
    Ok(r)
}

fn mc_kolmogorov() -> Outcome {
    let (n, samples) = (10_000u64, 10_000u64);
    let hoeffding = |q: f64, theta: f64| (-2.0 * n as f64 * (theta - q).powi(2)).exp();
    ensure!(hoeffding(0.5, 0.6) < 1e-80, "oracle bound");

    let high = MonteCarloConfig::kolmogorov(prob("1/2"), prob("3/5"), n, samples, SEED).with_shards(8);
    let up = timed_mc(|| simulate_kolmogorov_demo(&high).unwrap())?;
    ensure!(up.estimate <= 0.01, "θ = 3/5: empirical {}", up.estimate);
    ensure!(up.within_oracle(), "θ = 3/5 outside the oracle band");

    let low = MonteCarloConfig { theta: prob("2/5"), ..high.clone() };
    let down = timed_mc(|| simulate_kolmogorov_demo(&low).unwrap())?;
    ensure!(down.estimate >= 0.99, "θ = 2/5: empirical {}", down.estimate);

    // shard count does not change the estimate; doubling samples stays in band
    let resharded = simulate_kolmogorov_demo(&high.clone().with_shards(3)).unwrap();
    ensure!(resharded.positives == up.positives, "estimate depends on shards");
    let doubled = simulate_kolmogorov_demo(&MonteCarloConfig { samples: 2 * samples, ..high.clone() }).unwrap();
    ensure!(doubled.estimate <= 0.01, "doubled samples: {}", doubled.estimate);

    let ones = MonteCarloConfig::kolmogorov(prob("1"), prob("1/2"), 100, 500, SEED);
    ensure!(simulate_kolmogorov_demo(&ones).unwrap().estimate == 1.0, "q = 1");
    Ok(format!("θ = 3/5: {:.4}; θ = 2/5: {:.4}; Hoeffding bound {:.1e}", up.estimate, down.estimate, hoeffding(0.5, 0.6)))
}

fn mc_hewitt_savage() -> Outcome {
    let (n, samples) = (10_000u64, 10_000u64);
    let cfg = MonteCarloConfig::mixture(vec![prob("3/10"), prob("7/10")], vec![prob("1/2"); 2], prob("1/2"), n, samples, SEED)
        .with_shards(8);
    let res = timed_mc(|| simulate_hs_negative_control(&cfg).unwrap())?;
    ensure!((0.45..=0.55).contains(&res.estimate), "empirical {}", res.estimate);
    // each branch lands on its own side of θ: the low coin misses with
    // probability ≤ exp(−2N·0.2²)
    ensure!(res.positives == res.per_component[1], "positives {} vs high-coin windows {}", res.positives, res.per_component[1]);

    let degenerate = MonteCarloConfig { weights: vec![prob("1"), prob("0")], window: 1000, samples: 500, ..cfg.clone() };
    let d = simulate_hs_negative_control(&degenerate).unwrap();
    ensure!(d.per_component[1] == 0 && d.estimate == 0.0, "weights {{1, 0}}: {}", d.estimate);

    let fair = MonteCarloConfig { biases: vec![prob("1/2"); 2], window: 1000, samples: 4000, ..cfg.clone() };
    let mixed = simulate_hs_negative_control(&fair).unwrap();
    let single = simulate_kolmogorov_demo(&MonteCarloConfig::kolmogorov(prob("1/2"), prob("1/2"), 1000, 4000, SEED + 1)).unwrap();
    ensure!((mixed.estimate - single.estimate).abs() < 0.05, "identical components {} vs single coin {}", mixed.estimate, single.estimate);
    Ok(format!("empirical {:.4} ({} vs {} windows per coin)", res.estimate, res.per_component[0], res.per_component[1]))
}

fn reproducibility() -> Outcome {
    let mut compared = 0;
    for (name, f) in SUITES {
        let a = f(&cfg()).to_json();
        let b = f(&cfg()).to_json();
        ensure!(a == b, "suite {name} differs across runs");
        let seq = f(&SuiteConfig { parallel: false, ..cfg() }).to_json();
        ensure!(a == seq, "suite {name} differs between parallel and sequential runs");
        compared += 1;
    }
    let k = MonteCarloConfig::kolmogorov(prob("1/2"), prob("3/5"), 10_000, 10_000, SEED).with_shards(8);
    let run_k = || {
        let r = simulate_kolmogorov_demo(&k).unwrap();
        kolmo::montecarlo::report("demo-kolmogorov", &k, &r).to_json()
    };
    ensure!(run_k() == run_k(), "demo-kolmogorov differs across runs");
    let h = MonteCarloConfig::mixture(vec![prob("3/10"), prob("7/10")], vec![prob("1/2"); 2], prob("1/2"), 10_000, 10_000, SEED)
        .with_shards(8);
    let run_h = || {
        let r = simulate_hs_negative_control(&h).unwrap();
        kolmo::montecarlo::report("demo-hewitt-savage", &h, &r).to_json()
    };
    ensure!(run_h() == run_h(), "demo-hewitt-savage differs across runs");
    let search = SearchConfig {
        max_points: 3,
        seed: SEED,
        budget: 2_000,
        discrete_only: false,
    };
    let run_s = || {
        let mut r = Report::new("search-causality", Some(SEED));
        r.push(Case::from(causality_search(&search).report()));
        r.to_json()
    };
    ensure!(run_s() == run_s(), "search-causality differs across runs");
    Ok(format!("{compared} suites (also parallel vs sequential) and 3 demos byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("axiom suite", axioms),
        ("determinism lemma", determinism),
        ("finite Kolmogorov zero--one law", kolmogorov),
        ("infinite independence lemma", infindep),
        ("Hewitt--Savage machinery", hewitt_savage),
        ("a.s.-equality lemma", aseq),
        ("CRing non-causality", noncausality),
        ("SetMulti non-extension witness", witness),
        ("FinStoch causality", causality),
        ("Monte Carlo Kolmogorov demo", mc_kolmogorov),
        ("Monte Carlo Hewitt--Savage negative control", mc_hewitt_savage),
        ("reproducibility", reproducibility),
    ];
    // the default hook would interleave panic messages with the result lines
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS ({secs:.1}s) {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL ({secs:.1}s) {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
