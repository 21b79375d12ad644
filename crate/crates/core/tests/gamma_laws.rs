mod common;

use std::cmp::Ordering;

use common::*;
use proptest::prelude::*;
use stone_pairing::gamma::{compare, finite_join, finite_meet, gamma, iota, BasicClopen, Flavor, GammaValue, Grid};

fn flavored(max_den: u64) -> impl Strategy<Value = GammaValue> {
    (1..=max_den)
        .prop_flat_map(|d| (Just(d), 0..=d, any::<bool>()))
        .prop_map(|(d, k, circ)| {
            if circ || k == 0 {
                GammaValue::c(k, d)
            } else {
                GammaValue::m(k, d)
            }
        })
}

/// A pair `y <= x` from one flavored grid.
fn domain_pair(max_den: u64) -> impl Strategy<Value = (GammaValue, GammaValue)> {
    (1..=max_den).prop_flat_map(|d| {
        let vals = Grid::new(d).unwrap().flavored();
        let len = vals.len();
        (0..len, 0..len).prop_map(move |(i, j)| {
            let (lo, hi) = (i.min(j), i.max(j));
            (vals[hi].clone(), vals[lo].clone())
        })
    })
}

// Order by value, then minus below circ, computed on cross-multiplied integers.
fn oracle_cmp(x: &GammaValue, y: &GammaValue) -> Ordering {
    let lhs = x.value().numer() * y.value().denom();
    let rhs = y.value().numer() * x.value().denom();
    let rank = |v: &GammaValue| matches!(v.flavor(), Flavor::Circ) as u8;
    lhs.cmp(&rhs).then(rank(x).cmp(&rank(y)))
}

proptest! {
    #[test]
    fn compare_matches_the_lexicographic_oracle(x in flavored(30), y in flavored(30)) {
        prop_assert_eq!(compare(&x, &y), oracle_cmp(&x, &y));
        prop_assert_eq!(compare(&y, &x), compare(&x, &y).reverse());
    }

    #[test]
    fn compare_is_transitive(x in flavored(20), y in flavored(20), z in flavored(20)) {
        if compare(&x, &y) != Ordering::Greater && compare(&y, &z) != Ordering::Greater {
            prop_assert_ne!(compare(&x, &z), Ordering::Greater);
        }
    }

    #[test]
    fn miss_agrees_with_join_up_to_64((x, y) in domain_pair(64)) {
        let d = lcm(x.value().denom_u64().unwrap(), y.value().denom_u64().unwrap());
        let [a, b, c] = miss_oracle(&x, &y, 2 * d);
        prop_assert!(a == b && b == c, "join not stable: {} {} {}", a, b, c);
        prop_assert_eq!(x.miss(&y).unwrap(), c);
    }

    #[test]
    fn adjunction_on_random_grids((z, y) in domain_pair(24), x in flavored(24)) {
        if let Ok(s) = x.plus(&y) {
            let r = z.mip(&y).unwrap();
            prop_assert_eq!(s <= z, x <= r);
        }
    }

    #[test]
    fn both_minuses_collapse_to_the_difference((x, y) in domain_pair(40)) {
        let diff = gamma(&x).checked_sub(&gamma(&y)).unwrap();
        prop_assert_eq!(gamma(&x.mip(&y).unwrap()), diff.clone());
        prop_assert_eq!(gamma(&x.miss(&y).unwrap()), diff);
        prop_assert!(x.miss(&y).unwrap() <= x.mip(&y).unwrap());
    }

    #[test]
    fn iota_is_right_adjoint_to_gamma(x in flavored(24), r in flavored(24)) {
        let r = gamma(&r);
        prop_assert_eq!(gamma(&x) <= r, x <= iota(&r));
    }
}

#[test]
fn oracle_separates_miss_from_mip() {
    let vals = Grid::new(4).unwrap().flavored();
    let mut differ = 0;
    for x in &vals {
        for y in vals.iter().filter(|y| *y <= x) {
            let [.., join] = miss_oracle(x, y, 8);
            if join != x.mip(y).unwrap() {
                differ += 1;
            }
        }
    }
    assert!(differ > 0);
}

#[test]
fn mip_and_miss_examples() {
    let x = GammaValue::c(3, 4);
    assert_eq!(x.mip(&GammaValue::c(1, 2)).unwrap(), GammaValue::c(1, 4));
    assert_eq!(x.miss(&GammaValue::c(1, 2)).unwrap(), GammaValue::m(1, 4));
    assert_eq!(GammaValue::m(1, 2).mip(&GammaValue::c(1, 4)).unwrap(), GammaValue::m(1, 4));
    assert_eq!(GammaValue::c(1, 2).miss(&GammaValue::m(1, 4)).unwrap(), GammaValue::c(1, 4));
    assert_eq!(GammaValue::c(1, 2).miss(&GammaValue::c(1, 2)).unwrap(), GammaValue::bottom());
    assert!(GammaValue::c(1, 4).mip(&GammaValue::c(1, 2)).is_err());
    assert!(GammaValue::c(3, 4).plus(&GammaValue::c(1, 2)).is_err());
    assert_eq!(GammaValue::c(1, 4).plus(&GammaValue::m(1, 2)).unwrap(), GammaValue::m(3, 4));
}

#[test]
fn projections_compose() {
    let (g12, g6, g3) = (Grid::new(12).unwrap(), Grid::new(6).unwrap(), Grid::new(3).unwrap());
    for x in g12.elements() {
        let two = g6.project(&g12.project(&x, &g6).unwrap(), &g3).unwrap();
        assert_eq!(two, g12.project(&x, &g3).unwrap());
    }
    assert_eq!(g6.project(&GammaValue::c(5, 6), &g3).unwrap(), GammaValue::c(2, 3));
    assert!(Grid::new(4).unwrap().project(&GammaValue::c(1, 4), &g3).is_err());
}

#[test]
fn clopens_and_finite_lattice_ops() {
    let half = u(1, 2);
    assert!(BasicClopen::up_circ(half.clone()).contains(&GammaValue::c(1, 2)));
    assert!(!BasicClopen::up_circ(half.clone()).contains(&GammaValue::m(1, 2)));
    assert!(BasicClopen::down_minus(half).unwrap().contains(&GammaValue::m(1, 2)));
    assert!(BasicClopen::down_minus(u(0, 1)).is_err());
    let pair = [GammaValue::c(1, 3), GammaValue::m(1, 3)];
    assert_eq!(finite_join(&pair), GammaValue::c(1, 3));
    assert_eq!(finite_join(&[]), GammaValue::bottom());
    assert_eq!(finite_meet(&[GammaValue::c(1, 2), GammaValue::m(3, 4)]).unwrap(), GammaValue::c(1, 2));
    assert!(finite_meet(&[]).is_err());
    assert_eq!(GammaValue::c(2, 4), GammaValue::c(1, 2));
}
