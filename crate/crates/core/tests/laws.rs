//! Algebraic laws of the diagram evaluator and the generic predicates,
//! checked on seeded random morphisms.

use std::collections::BTreeMap;

use kolmo_core::finstoch::{random_function_with, random_kernel_with, FinObj, FinSet, FinStoch, StochMatrix};
use kolmo_core::kernel::diagram::{evaluate, typecheck, Env};
use kolmo_core::kernel::predicates::*;
use kolmo_core::setmulti::{random_multimap_with, SetMulti};
use kolmo_core::vietoris::{random_map_with, FiniteTopSpace, Vietoris};
use kolmo_core::{q, DiagramTerm, Error, MarkovCategory, Obj, TensorSplit};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn set(n: usize) -> FinObj {
    Obj::atom(FinSet::range(n).unwrap())
}

type T = DiagramTerm<FinSet>;

fn gen(name: &str) -> T {
    DiagramTerm::gen(name)
}

fn env_of(pairs: &[(&str, StochMatrix)]) -> Env<StochMatrix> {
    pairs.iter().map(|(n, m)| (n.to_string(), m.clone())).collect()
}

#[test]
fn typecheck_examples() {
    let x = set(2);
    let env: Env<StochMatrix> = BTreeMap::new();
    let counit = T::seq(
        T::Copy(x.clone()),
        T::par(T::Id(x.clone()), T::Discard(x.clone())),
    );
    assert_eq!(typecheck(&FinStoch, &counit, &env).unwrap(), (x.clone(), x.clone()));
    assert!(FinStoch.equal(&evaluate(&FinStoch, &counit, &env).unwrap(), &FinStoch.id(&x)));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (y, z, w, a, b) = (set(3), set(1), set(2), set(2), set(3));
    let env = env_of(&[
        ("f", random_kernel_with(&mut rng, &x, &y, 4)),
        ("g", random_kernel_with(&mut rng, &z, &w, 4)),
        ("h", random_kernel_with(&mut rng, &a, &b, 4)),
    ]);
    match typecheck(&FinStoch, &T::seq(gen("f"), gen("g")), &env) {
        Err(Error::DomainMismatch { at, .. }) => assert_eq!(at, "seq(gen(f), gen(g))"),
        other => panic!("expected a domain mismatch, got {other:?}"),
    }
    let par = T::par(T::Id(x.clone()), gen("h"));
    assert_eq!(typecheck(&FinStoch, &par, &env).unwrap(), (x.tensor(&a), x.tensor(&b)));
    assert!(matches!(
        typecheck(&FinStoch, &gen("missing"), &env),
        Err(Error::UnboundGenerator(n)) if n == "missing"
    ));
}

#[test]
fn chapman_kolmogorov_example() {
    let x = set(2);
    let f = StochMatrix::new(x.clone(), x.clone(), vec![vec![q(1, 2), q(1, 2)], vec![q(0, 1), q(1, 1)]]).unwrap();
    let g = StochMatrix::new(x.clone(), x.clone(), vec![vec![q(1, 1), q(0, 1)], vec![q(1, 3), q(2, 3)]]).unwrap();
    let env = env_of(&[("f", f.clone()), ("g", g.clone())]);
    let fg = evaluate(&FinStoch, &T::seq(gen("f"), gen("g")), &env).unwrap();
    // independent oracle: row-by-row sums over the middle state
    for i in 0..2 {
        for k in 0..2 {
            let sum: kolmo_core::Q = (0..2).map(|j| f.entry(i, j) * g.entry(j, k)).sum();
            assert_eq!(fg.entry(i, k), &sum);
        }
    }
    assert_eq!(fg.entry(0, 0), &q(2, 3));
    assert_eq!(fg.entry(1, 1), &q(2, 3));
}

fn sizes() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seq_is_associative_and_unital(seed in any::<u64>(), (a, b, c, d) in sizes()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (oa, ob, oc, od) = (set(a), set(b), set(c), set(d));
        let env = env_of(&[
            ("f", random_kernel_with(&mut rng, &oa, &ob, 5)),
            ("g", random_kernel_with(&mut rng, &ob, &oc, 5)),
            ("h", random_kernel_with(&mut rng, &oc, &od, 5)),
        ]);
        let left = T::seq(T::seq(gen("f"), gen("g")), gen("h"));
        let right = T::seq(gen("f"), T::seq(gen("g"), gen("h")));
        prop_assert!(FinStoch.equal(&evaluate(&FinStoch, &left, &env).unwrap(), &evaluate(&FinStoch, &right, &env).unwrap()));
        let unit = T::seq(T::Id(oa.clone()), T::seq(gen("f"), T::Id(ob.clone())));
        prop_assert!(FinStoch.equal(&evaluate(&FinStoch, &unit, &env).unwrap(), &env["f"]));
    }

    #[test]
    fn interchange_law(seed in any::<u64>(), (a, b, c, d) in sizes()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (oa, ob, oc) = (set(a), set(b), set(c));
        let (od, oe, of) = (set(d), set(1 + (a + d) % 3), set(1 + (b + c) % 3));
        let env = env_of(&[
            ("f1", random_kernel_with(&mut rng, &oa, &ob, 4)),
            ("f2", random_kernel_with(&mut rng, &ob, &oc, 4)),
            ("g1", random_kernel_with(&mut rng, &od, &oe, 4)),
            ("g2", random_kernel_with(&mut rng, &oe, &of, 4)),
        ]);
        let lhs = T::seq(T::par(gen("f1"), gen("g1")), T::par(gen("f2"), gen("g2")));
        let rhs = T::par(T::seq(gen("f1"), gen("f2")), T::seq(gen("g1"), gen("g2")));
        prop_assert!(FinStoch.equal(&evaluate(&FinStoch, &lhs, &env).unwrap(), &evaluate(&FinStoch, &rhs, &env).unwrap()));
        // par is associative on the nose (strictness)
        let l = T::par(T::par(gen("f1"), gen("g1")), gen("f2"));
        let r = T::par(gen("f1"), T::par(gen("g1"), gen("f2")));
        prop_assert!(FinStoch.equal(&evaluate(&FinStoch, &l, &env).unwrap(), &evaluate(&FinStoch, &r, &env).unwrap()));
    }

    #[test]
    fn as_equal_is_an_equivalence(seed in any::<u64>(), (a, b, _c, _d) in sizes()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, x, y) = (Obj::unit(), set(a + 1), set(b));
        let p = random_kernel_with(&mut rng, &i, &x, 2);
        // functions make collisions on the support likely
        let fs: Vec<StochMatrix> = (0..3).map(|_| random_function_with(&mut rng, &x, &y)).collect();
        for f in &fs {
            prop_assert!(as_equal(&FinStoch, &p, f, f).unwrap());
            for g in &fs {
                prop_assert_eq!(as_equal(&FinStoch, &p, f, g).unwrap(), as_equal(&FinStoch, &p, g, f).unwrap());
                for h in &fs {
                    if as_equal(&FinStoch, &p, f, g).unwrap() && as_equal(&FinStoch, &p, g, h).unwrap() {
                        prop_assert!(as_equal(&FinStoch, &p, f, h).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn ci_is_invariant_under_factor_permutation(seed in any::<u64>(), (a, b, c, _d) in sizes(), product in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dom = set(1 + seed as usize % 2);
        let fs = [set(a), set(b), set(c)];
        let p = if product {
            let parts: Vec<StochMatrix> = fs.iter().map(|x| random_kernel_with(&mut rng, &dom, x, 3)).collect();
            pair_all(&FinStoch, &dom, &parts).unwrap()
        } else {
            random_kernel_with(&mut rng, &dom, &Obj::tensor_all(&fs), 3)
        };
        let split = TensorSplit::new(fs.to_vec());
        let base = displays_ci(&FinStoch, &p, &split).unwrap();
        if product {
            prop_assert!(base);
        }
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let moved = FinStoch.compose(&p, &FinStoch.permute(&fs, &perm)).unwrap();
            prop_assert_eq!(displays_ci(&FinStoch, &moved, &split.permuted(&perm)).unwrap(), base);
        }
    }

    #[test]
    fn deterministic_closed_under_compose_and_tensor(seed in any::<u64>(), (a, b, c, _d) in sizes()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (set(a), set(b), set(c));
        let f = random_function_with(&mut rng, &x, &y);
        let g = random_function_with(&mut rng, &y, &z);
        prop_assert!(is_deterministic(&FinStoch, &FinStoch.compose(&f, &g).unwrap()));
        prop_assert!(is_deterministic(&FinStoch, &FinStoch.tensor(&f, &g)));
        for s in [FinStoch.id(&x), FinStoch.copy(&x), FinStoch.discard(&x), FinStoch.swap(&x, &y)] {
            prop_assert!(is_deterministic(&FinStoch, &s));
        }
        let k = random_kernel_with(&mut rng, &x, &y, 6);
        prop_assert_eq!(is_deterministic(&FinStoch, &k), k.is_zero_one());
    }

    #[test]
    fn setmulti_laws(seed in any::<u64>(), (a, b, c, d) in sizes()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (oa, ob, oc, od) = (set(a), set(b), set(c), set(d));
        let f = random_multimap_with(&mut rng, &oa, &ob);
        let g = random_multimap_with(&mut rng, &ob, &oc);
        let h = random_multimap_with(&mut rng, &oc, &od);
        let l = SetMulti.compose(&SetMulti.compose(&f, &g).unwrap(), &h).unwrap();
        let r = SetMulti.compose(&f, &SetMulti.compose(&g, &h).unwrap()).unwrap();
        prop_assert!(SetMulti.equal(&l, &r));
        prop_assert!(check_discard_natural(&SetMulti, &f).passed);
        prop_assert!(check_multiplicativity(&SetMulti, &oa, &ob).passed);
    }

    #[test]
    fn vietoris_laws(seed in any::<u64>(), (a, b, c, _d) in sizes()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sp = |n, rng: &mut ChaCha8Rng| Obj::atom(FiniteTopSpace::random_with(rng, n, false));
        let (x, y, z) = (sp(a, &mut rng), sp(b, &mut rng), sp(c, &mut rng));
        let f = random_map_with(&mut rng, &x, &y);
        let g = random_map_with(&mut rng, &y, &z);
        let f2 = random_map_with(&mut rng, &z, &x);
        // interchange
        let l = Vietoris.compose(&Vietoris.tensor(&f, &f2), &Vietoris.tensor(&g, &f)).unwrap();
        let r = Vietoris.tensor(&Vietoris.compose(&f, &g).unwrap(), &Vietoris.compose(&f2, &f).unwrap());
        prop_assert!(Vietoris.equal(&l, &r));
        prop_assert!(check_discard_natural(&Vietoris, &f).passed);
        prop_assert!(check_multiplicativity(&Vietoris, &x, &y).passed);
    }
}
