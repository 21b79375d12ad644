mod common;

use std::collections::BTreeMap;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stone_pairing::fo::{
    count_satisfying, count_satisfying_with, fragment_inclusion, parse_formula, semantic_fragment,
    stone_pairing_classical, stone_pairing_gamma, type_table, FinStructure, FoError, Formula,
};
use stone_pairing::gamma::{gamma, GammaValue};
use stone_pairing::limits::ladder;
use stone_pairing::measure::{check_gamma, pushforward};

fn case(seed: u64) -> (ChaCha8Rng, FinStructure, usize, Formula) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_edge_structure(&mut rng, 4);
    let n = rng.gen_range(0..=3);
    let f = random_formula(&mut rng, n, 4);
    (rng, a, n, f)
}

fn psi() -> Formula {
    parse_formula(
        "forall y. !(x < y) & exists z. (!(z < x) & !(z = x))",
        ladder(1).unwrap().signature(),
    )
    .unwrap()
}

/// Relabelings of `a` under every permutation of its domain.
fn permuted(a: &FinStructure) -> Vec<FinStructure> {
    let n = a.size();
    let mut perms = vec![vec![]];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..n)
                    .filter(|x| !p.contains(x))
                    .map(|x| [p.clone(), vec![x]].concat())
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    perms
        .into_iter()
        .map(|p| {
            let mut rel = BTreeMap::new();
            rel.insert("E".to_string(), a.tuples("E").iter().map(|t| vec![p[t[0]], p[t[1]]]).collect());
            FinStructure::new(a.signature().clone(), a.domain().to_vec(), &rel).unwrap()
        })
        .collect()
}

proptest! {
    #[test]
    fn evaluator_matches_brute_force(seed in any::<u64>()) {
        let (_, a, n, f) = case(seed);
        prop_assert_eq!(count_satisfying(&a, &f, n).unwrap(), brute_count(&a, &f, n));
    }

    #[test]
    fn worker_count_does_not_matter(seed in any::<u64>(), workers in 2usize..5) {
        let (_, a, n, f) = case(seed);
        prop_assert_eq!(count_satisfying_with(&a, &f, n, workers).unwrap(), count_satisfying(&a, &f, n).unwrap());
    }

    #[test]
    fn embedding_triangle(seed in any::<u64>()) {
        let (_, a, n, f) = case(seed);
        prop_assert_eq!(gamma(&stone_pairing_gamma(&a, &f, n).unwrap()), stone_pairing_classical(&a, &f, n).unwrap());
    }

    #[test]
    fn extra_slots_do_not_change_pairings(seed in any::<u64>(), extra in 1usize..3) {
        let (_, a, n, f) = case(seed);
        prop_assert_eq!(stone_pairing_classical(&a, &f, n).unwrap(), stone_pairing_classical(&a, &f, n + extra).unwrap());
    }

    #[test]
    fn printer_output_parses_back(seed in any::<u64>()) {
        let (_, a, _, f) = case(seed);
        let text = f.display(a.signature()).to_string();
        let back = parse_formula(&text, a.signature()).unwrap();
        prop_assert_eq!(count_satisfying(&a, &back, 3).unwrap(), count_satisfying(&a, &f, 3).unwrap());
        prop_assert_eq!(back.display(a.signature()).to_string(), text);
    }

    #[test]
    fn type_tables_integrate_to_pairings(seed in any::<u64>()) {
        let (mut rng, a, n, _) = case(seed);
        let fs: Vec<Formula> = (0..3).map(|_| random_formula(&mut rng, n, 3)).collect();
        let table = type_table(&a, &fs, n).unwrap();
        let total: BigInt = table.classes.iter().map(|c| &c.count).sum();
        prop_assert_eq!(total, BigInt::from(a.size()).pow(n as u32));
        for (i, f) in fs.iter().enumerate() {
            prop_assert_eq!(table.integrate(i), stone_pairing_gamma(&a, f, n).unwrap());
        }
    }

    #[test]
    fn fragment_measures_restrict_along_inclusions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family: Vec<_> = (0..rng.gen_range(1..=3)).map(|_| random_edge_structure(&mut rng, 3)).collect();
        let n = rng.gen_range(1..=2);
        let fine: Vec<Formula> = (0..4).map(|_| random_formula(&mut rng, n, 3)).collect();
        let coarse: Vec<Formula> = fine.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let fine_frag = semantic_fragment(&fine, &family, n).unwrap();
        let coarse_frag = semantic_fragment(&coarse, &family, n).unwrap();
        let h = fragment_inclusion(&coarse_frag, &fine_frag).unwrap();
        prop_assert!(h.check());
        for s in 0..family.len() {
            let mu = fine_frag.measure(s).unwrap();
            prop_assert!(check_gamma(fine_frag.lattice(), mu.values()).unwrap().is_ok());
            prop_assert_eq!(pushforward(&h, &mu).unwrap(), coarse_frag.measure(s).unwrap());
        }
    }
}

#[test]
fn examples() {
    let sig = edge_signature();
    let edge = edge_structure(2, 0b0010);
    let e = parse_formula("E(v1,v2)", &sig).unwrap();
    assert_eq!(count_satisfying(&edge, &e, 2).unwrap(), BigInt::from(1));
    assert_eq!(stone_pairing_classical(&edge, &e, 2).unwrap(), u(1, 4));
    assert_eq!(stone_pairing_gamma(&edge, &e, 2).unwrap(), GammaValue::c(1, 4));
    assert!(matches!(parse_formula("E(v1)", &sig), Err(FoError::Arity { .. })));
    assert!(matches!(count_satisfying(&edge, &e, 1), Err(FoError::UnboundVariable { .. })));
    for a in all_edge_structures(2) {
        assert_eq!(stone_pairing_gamma(&a, &Formula::True, 2).unwrap(), GammaValue::top());
        assert_eq!(stone_pairing_gamma(&a, &Formula::False, 1).unwrap(), GammaValue::bottom());
    }
}

#[test]
fn ladder_fragments() {
    let a2 = ladder(2).unwrap();
    let p = psi();
    assert_eq!(count_satisfying(&a2, &p, 1).unwrap(), BigInt::from(2));
    let table = type_table(&a2, std::slice::from_ref(&p), 1).unwrap();
    let mut masses: Vec<GammaValue> = table.classes.iter().map(|c| c.mass.clone()).collect();
    masses.sort();
    assert_eq!(masses, [GammaValue::c(1, 3), GammaValue::c(2, 3)]);
    let single = type_table(&a2, &[Formula::True], 1).unwrap();
    assert_eq!(single.classes.len(), 1);
    assert_eq!(single.classes[0].mass, GammaValue::top());

    let bounds = semantic_fragment(&[Formula::True, Formula::False], std::slice::from_ref(&a2), 1).unwrap();
    assert_eq!(bounds.lattice().len(), 2);
    let chain = semantic_fragment(std::slice::from_ref(&p), std::slice::from_ref(&a2), 1).unwrap();
    assert_eq!(chain.lattice().len(), 3);
    let both = [p.clone(), Formula::not(p)];
    let boolean = semantic_fragment(&both, std::slice::from_ref(&a2), 1).unwrap();
    let d = boolean.lattice();
    assert_eq!(d.len(), 4);
    let (x, y) = (boolean.element_of(0), boolean.element_of(1));
    assert_eq!(d.meet(x, y), d.bottom());
    assert_eq!(d.join(x, y), d.top());
}

// Isomorphic structures always share their pairings; distinct isomorphism
// types may collide on a small fragment, and those collisions are reported.
#[test]
fn injectivity_on_small_structures() {
    let sig = edge_signature();
    let fs: Vec<Formula> = [
        "E(v1,v2)",
        "E(v1,v1)",
        "exists v2. E(v1,v2)",
        "exists v2. E(v2,v1)",
        "E(v1,v2) & E(v2,v1)",
        "forall v2. E(v1,v2)",
        "v1 = v2",
    ]
    .iter()
    .map(|t| parse_formula(t, &sig).unwrap())
    .collect();
    let structures = all_edge_structures(3);
    let key = |a: &FinStructure| -> Vec<GammaValue> { fs.iter().map(|f| stone_pairing_gamma(a, f, 2).unwrap()).collect() };
    let canonical = |a: &FinStructure| permuted(a).iter().map(|b| b.tuples("E")).min().unwrap();
    // Pairing vector -> isomorphism types (size, canonical edge list) realizing it.
    type Classes = BTreeMap<Vec<GammaValue>, std::collections::BTreeSet<(usize, Vec<Vec<usize>>)>>;
    let mut classes = Classes::new();
    for a in &structures {
        classes.entry(key(a)).or_default().insert((a.size(), canonical(a)));
    }
    let types: usize = classes.values().map(|c| c.len()).sum();
    let collisions = types - classes.len();
    for a in structures.iter().filter(|a| a.size() == 3).take(40) {
        for b in permuted(a) {
            assert_eq!(key(a), key(&b));
        }
    }
    println!(
        "{} structures, {types} isomorphism types, {} pairing classes, {collisions} types share a class",
        structures.len(),
        classes.len()
    );
}
