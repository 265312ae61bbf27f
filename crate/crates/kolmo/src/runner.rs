//! Executes a parsed script and folds the outcomes into a [`Report`].
//!
//! Bindings are evaluated in order; a binding that fails to load becomes a
//! failed case (exit 1) and later references to it fail as unknown names.
//! Directives never mutate the scope, so with `parallel` they run
//! concurrently after all bindings, and the report is the same.

use std::path::{Path, PathBuf};

use kolmo_core::cringplus::{check_noncausality, CRingPlus};
use kolmo_core::finstoch::FinStoch;
use kolmo_core::kernel::diagram::evaluate;
use kolmo_core::kernel::predicates::{
    as_equal, check_causality_triple, check_comonoid_laws, check_discard_natural, check_multiplicativity,
    displays_ci, is_deterministic,
};
use kolmo_core::projective::{
    check_aseq_lemma, check_catdet_shadow, check_determinism_lemma, check_exchangeability, check_infindep_lemma,
    check_kolmogorov_finite, validate_compatibility, Label, StatisticFamily,
};
use kolmo_core::setmulti::{nonextension_witness, SetMulti};
use kolmo_core::vietoris::Vietoris;
use kolmo_core::{CheckReport, DiagramTerm, Obj, TensorSplit};
use rayon::prelude::*;
use serde_json::Value;

use crate::json::{Instance, InstanceKind, LoadError, Scope};
use crate::report::{Case, Report};
use crate::script::{Directive, Expr, ObjExpr, Source, Statement, Script};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Directory that `load "path"` is resolved against.
    pub base_dir: Option<PathBuf>,
    pub parallel: bool,
    pub suite: Option<String>,
}

type Outcome = Result<CheckReport, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Runs every statement of `script` in its declared instance.
pub fn run_script(script: &Script, opts: &RunOptions) -> Report {
    match script.instance_kind() {
        InstanceKind::FinStoch => run_in(FinStoch, script, opts),
        InstanceKind::SetMulti => run_in(SetMulti, script, opts),
        InstanceKind::Vietoris => run_in(Vietoris, script, opts),
        InstanceKind::CRingPlus(d) => run_in(CRingPlus::new(d), script, opts),
    }
}

fn read_source(src: &Source, base: Option<&Path>) -> Result<Value, String> {
    match src {
        Source::Inline(v) => Ok(v.clone()),
        Source::Load(p) => {
            let path = base.map_or_else(|| PathBuf::from(p), |b| b.join(p));
            let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
        }
    }
}

fn run_in<C: Instance>(cat: C, script: &Script, opts: &RunOptions) -> Report {
    let suite = opts.suite.clone().unwrap_or_else(|| format!("script ({})", cat.name()));
    let mut scope = Scope::new(cat);
    let base = opts.base_dir.as_deref();
    let mut cases: Vec<(usize, Case)> = Vec::new();
    let mut checks = Vec::new();
    for (k, stmt) in script.statements.iter().enumerate() {
        let line = script.positions.get(k).map_or(0, |p| p.0);
        let loaded: Result<(), String> = match stmt {
            Statement::Object(name, src) => read_source(src, base)
                .and_then(|v| scope.object(&v).map_err(err))
                .map(|o| {
                    scope.objects.insert(name.clone(), o);
                }),
            Statement::Morphism(name, src) => read_source(src, base)
                .and_then(|v| scope.morphism(&v).map_err(err))
                .map(|m| {
                    scope.morphisms.insert(name.clone(), m);
                }),
            Statement::Family(name, src) => read_source(src, base)
                .and_then(|v| scope.family(&v).map_err(err))
                .map(|f| {
                    scope.families.insert(name.clone(), f);
                }),
            Statement::Term(name, e) => eval(&scope, e).map(|m| {
                scope.morphisms.insert(name.clone(), m);
            }),
            Statement::Check { negated, directive } => {
                checks.push((k, line, *negated, directive));
                continue;
            }
        };
        if let Err(e) = loaded {
            let what = match stmt {
                Statement::Object(n, _) | Statement::Morphism(n, _) | Statement::Family(n, _) | Statement::Term(n, _) => n,
                Statement::Check { .. } => unreachable!(),
            };
            cases.push((k, Case::fail(format!("line {line}: load {what}"), e.clone(), format!("loader error: {e}"))));
        }
    }
    let run = |scope: &Scope<C>, &(k, line, negated, directive): &(usize, usize, bool, &Directive)| {
        let name = format!("line {line}: {}{directive}", if negated { "not " } else { "" });
        let case = match run_directive(scope, directive) {
            Ok(r) if !negated => Case {
                name,
                passed: r.passed,
                witness: r.witness,
                detail: r.detail,
            },
            Ok(r) if r.passed => Case::fail(name, "the check passed", format!("expected a failure; {}", r.detail)),
            Ok(r) => Case::pass(
                name,
                format!(
                    "fails as expected: {}{}",
                    r.detail,
                    r.witness.map(|w| format!(" (witness: {w})")).unwrap_or_default()
                ),
            ),
            Err(e) => Case::fail(name, e.clone(), format!("error: {e}")),
        };
        (k, case)
    };
    if opts.parallel {
        // families memoize through a RefCell, so each worker gets its own scope
        cases.par_extend(checks.par_iter().map_with(scope.clone(), |s, c| run(s, c)));
    } else {
        cases.extend(checks.iter().map(|c| run(&scope, c)));
    }
    cases.sort_by_key(|(k, _)| *k);
    let mut report = Report::new(suite, None);
    for (_, c) in cases {
        report.push(c);
    }
    report
}

fn object<C: Instance>(scope: &Scope<C>, o: &ObjExpr) -> Result<Obj<C::Atom>, String> {
    scope.named_object(&o.to_string()).map_err(err)
}

fn term<C: Instance>(scope: &Scope<C>, e: &Expr) -> Result<DiagramTerm<C::Atom>, String> {
    Ok(match e {
        Expr::Gen(n) => DiagramTerm::Gen(n.clone()),
        Expr::Id(x) => DiagramTerm::Id(object(scope, x)?),
        Expr::Seq(a, b) => DiagramTerm::seq(term(scope, a)?, term(scope, b)?),
        Expr::Par(a, b) => DiagramTerm::par(term(scope, a)?, term(scope, b)?),
        Expr::Swap(x, y) => DiagramTerm::Swap(object(scope, x)?, object(scope, y)?),
        Expr::Copy(x) => DiagramTerm::Copy(object(scope, x)?),
        Expr::Discard(x) => DiagramTerm::Discard(object(scope, x)?),
    })
}

fn eval<C: Instance>(scope: &Scope<C>, e: &Expr) -> Result<C::Morphism, String> {
    evaluate(&scope.cat, &term(scope, e)?, &scope.morphisms).map_err(err)
}

fn verdict(name: &str, ok: bool, pass: &str, fail_witness: impl FnOnce() -> String) -> CheckReport {
    if ok {
        CheckReport::pass(name, pass)
    } else {
        CheckReport::fail(name, fail_witness(), format!("not {pass}"))
    }
}

fn family<'a, C: Instance>(scope: &'a Scope<C>, name: &str) -> Result<&'a kolmo_core::projective::CompatibleFamily<C>, String> {
    scope
        .families
        .get(name)
        .ok_or_else(|| err(LoadError::UnknownName(name.into())))
}

fn run_directive<C: Instance>(scope: &Scope<C>, d: &Directive) -> Outcome {
    let cat = &scope.cat;
    let ev = |e: &Expr| eval(scope, e);
    let name = d.to_string();
    Ok(match d {
        Directive::Comonoid(x) => check_comonoid_laws(cat, &object(scope, x)?),
        Directive::Multiplicativity(x, y) => check_multiplicativity(cat, &object(scope, x)?, &object(scope, y)?),
        Directive::DiscardNatural(e) => check_discard_natural(cat, &ev(e)?),
        Directive::Deterministic(e) => {
            let m = ev(e)?;
            verdict(&name, is_deterministic(cat, &m), "deterministic", || cat.render(&m))
        }
        Directive::Continuity(e) => {
            let m = ev(e)?;
            cat.continuity(&m)
                .ok_or_else(|| format!("continuity is not defined in {}", cat.name()))?
        }
        Directive::Equal(a, b) => {
            let (a, b) = (ev(a)?, ev(b)?);
            verdict(&name, cat.equal(&a, &b), "equal", || format!("{} vs {}", cat.render(&a), cat.render(&b)))
        }
        Directive::AsEqual(p, f, g) => {
            let (p, f, g) = (ev(p)?, ev(f)?, ev(g)?);
            let ok = as_equal(cat, &p, &f, &g).map_err(err)?;
            verdict(&name, ok, "almost surely equal", || format!("p = {}", cat.render(&p)))
        }
        Directive::Ci(e, objs) => {
            let m = ev(e)?;
            let split = TensorSplit::new(objs.iter().map(|o| object(scope, o)).collect::<Result<_, _>>()?);
            let ok = displays_ci(cat, &m, &split).map_err(err)?;
            verdict(&name, ok, "conditionally independent", || cat.render(&m))
        }
        Directive::Causality(f, g, h1, h2) => {
            check_causality_triple(cat, &ev(f)?, &ev(g)?, &ev(h1)?, &ev(h2)?).map_err(err)?.report
        }
        Directive::DeterminismLemma(p, s) => check_determinism_lemma(cat, &ev(p)?, &ev(s)?).map_err(err)?.report,
        Directive::AseqLemma(p, f, g) => check_aseq_lemma(cat, &ev(p)?, &ev(f)?, &ev(g)?).map_err(err)?.report,
        Directive::Kolmogorov(fam, s) => {
            let fam = family(scope, fam)?;
            let support = fam.window(usize::MAX >> 1);
            let stat = StatisticFamily::new(cat, &support, ev(s)?).map_err(err)?;
            check_kolmogorov_finite(fam, &stat).map_err(err)?.report
        }
        Directive::Compatibility(fam, depth) => validate_compatibility(family(scope, fam)?, *depth),
        Directive::Infindep(fam, label, depth) => {
            let label = Label::parse(label).map_err(err)?;
            check_infindep_lemma(family(scope, fam)?, &label, *depth).map_err(err)?.report
        }
        Directive::Exchangeable(fam, window) => check_exchangeability(family(scope, fam)?, *window),
        Directive::Catdet(fam, depth) => check_catdet_shadow(family(scope, fam)?, *depth).map_err(err)?.report,
        Directive::Noncausality(d) => check_noncausality(*d).map_err(err)?.report,
        Directive::Witness(n) => nonextension_witness(*n).map_err(err)?.2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::parse_script;

    fn run(src: &str) -> Report {
        run_script(&parse_script(src).unwrap(), &RunOptions::default())
    }

    #[test]
    fn empty_script_passes() {
        let r = run("");
        assert!(r.passed);
        assert!(r.cases.is_empty());
    }

    #[test]
    fn corrupted_row_is_a_loader_failure() {
        let r = run(r#"
object X = ["a", "b"]
morphism k = {"dom": "X", "cod": "X", "rows": [["1/2", "1/3"], [0, 1]]}
check discard-natural k
"#);
        assert!(!r.passed);
        assert_eq!(r.exit_code(), 1);
        assert!(r.cases[0].detail.starts_with("loader error"), "{:?}", r.cases[0]);
        assert!(r.cases[1].detail.contains("unknown name") || r.cases[1].detail.contains("unbound"));
    }

    #[test]
    fn noncausality_is_an_expected_outcome() {
        let r = run("instance cringplus degree 12\ncheck noncausality 12\n");
        assert!(r.passed, "{}", r.to_text());
        assert!(r.cases[0].detail.contains("f(g(h1(t))·t) = t"));
    }

    #[test]
    fn negation_and_laws() {
        let r = run(r#"
object X = ["a", "b"]
morphism coin = {"cod": "X", "state": ["1/2", "1/2"]}
morphism flip = {"dom": "X", "cod": "X", "function": {"a": "b", "b": "a"}}
term twice = seq(flip, flip)
check comonoid X
check multiplicativity X, X
check equal twice, id(X)
check deterministic flip
check not deterministic coin
check not ci seq(coin, copy(X)) : X, X
check ci par(coin, coin) : X, X
check not equal flip, id(X)
check determinism-lemma coin, flip
check aseq-lemma coin, flip, flip
check witness 3
"#);
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.cases.len(), 11);
        let r = run("object X = [\"a\"]\ncheck not comonoid X");
        assert!(!r.passed);
        assert_eq!(r.cases[0].witness.as_deref(), Some("the check passed"));
    }

    #[test]
    fn type_errors_fail_the_case() {
        let r = run(r#"
object X = ["a", "b"]
object Y = ["u"]
morphism f = {"dom": "X", "cod": "Y", "function": {"a": "u", "b": "u"}}
check equal seq(f, f), f
"#);
        assert!(!r.passed);
        assert!(r.cases[0].detail.contains("domain mismatch"));
    }

    #[test]
    fn parallel_matches_sequential() {
        let src = r#"
object X = ["a", "b", "c"]
family P = {"kind": "iid", "q": {"cod": "X", "state": ["1/2", "1/4", "1/4"]}}
check compatibility P depth 3
check exchangeable P window 3
check infindep P at 1 depth 3
check catdet P depth 2
check comonoid X*X
"#;
        let s = parse_script(src).unwrap();
        let seq = run_script(&s, &RunOptions::default());
        let par = run_script(&s, &RunOptions { parallel: true, ..Default::default() });
        assert_eq!(seq.to_json(), par.to_json());
        assert!(seq.passed, "{}", seq.to_text());
    }

    #[test]
    fn load_resolves_against_base_dir() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("x.json"), r#"{"points": ["o", "c"], "opens": [["o"]]}"#).unwrap();
        let s = parse_script("instance vietoris\nobject S = load \"x.json\"\ncheck comonoid S\ncheck continuity id(S)\n").unwrap();
        let opts = RunOptions {
            base_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        let r = run_script(&s, &opts);
        assert!(r.passed, "{}", r.to_text());
        let missing = run_script(&s, &RunOptions::default());
        assert!(!missing.passed);
    }
}
