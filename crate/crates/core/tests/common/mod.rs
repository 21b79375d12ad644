//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use rand::Rng;
use stone_pairing::fo::{FinStructure, Formula, Signature};
use stone_pairing::gamma::{compare, GammaValue, Grid, UnitRational};
use stone_pairing::FinDistLattice;

pub fn u(n: u64, d: u64) -> UnitRational {
    UnitRational::new(n, d).unwrap()
}

pub fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn den(x: &GammaValue) -> u64 {
    x.value().denom_u64().unwrap()
}

/// Join of `{x - q^o | y < q^o <= x}` with `q` restricted to `I_n`, using only
/// `mip` and `compare`. `None` when no `q` qualifies.
pub fn miss_sample_max(x: &GammaValue, y: &GammaValue, n: u64) -> Option<GammaValue> {
    let grid = Grid::new(n).unwrap();
    let mut best: Option<GammaValue> = None;
    for q in grid.points() {
        let qc = GammaValue::circ(q);
        if compare(y, &qc) != Ordering::Less || compare(&qc, x) == Ordering::Greater {
            continue;
        }
        let v = x.mip(&qc).expect("q^o <= x");
        if best.as_ref().is_none_or(|b| compare(&v, b) == Ordering::Greater) {
            best = Some(v);
        }
    }
    best
}

/// Least element of the flavored grid `I_d` at or above `v`.
pub fn round_up(v: &GammaValue, d: u64) -> GammaValue {
    Grid::new(d)
        .unwrap()
        .flavored()
        .into_iter()
        .find(|g| compare(g, v) != Ordering::Less)
        .expect("1^o bounds everything")
}

/// The dual minus as a join over refining grids `I_base`, `I_2base`,
/// `I_4base`, each sample maximum rounded up onto the flavored grid that
/// carries `x` and `y`. Returns the three candidates; they must agree.
pub fn miss_oracle(x: &GammaValue, y: &GammaValue, base: u64) -> [GammaValue; 3] {
    let d = lcm(den(x), den(y));
    [base, 2 * base, 4 * base].map(|n| match miss_sample_max(x, y, n) {
        None => GammaValue::bottom(),
        Some(m) => round_up(&m, d),
    })
}

/// All subsets of the lattice that are prime filters, checked from the
/// definition.
pub fn brute_prime_filters(d: &FinDistLattice) -> Vec<FixedBitSet> {
    let n = d.len();
    assert!(n <= 16);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let has = |a: usize| mask & (1 << a) != 0;
        if has(d.bottom()) {
            continue;
        }
        let up = (0..n).all(|a| !has(a) || (0..n).all(|b| !d.leq(a, b) || has(b)));
        let meets = (0..n).all(|a| (0..n).all(|b| !(has(a) && has(b)) || has(d.meet(a, b))));
        let prime = (0..n).all(|a| (0..n).all(|b| !has(d.join(a, b)) || has(a) || has(b)));
        if up && meets && prime {
            let mut s = FixedBitSet::with_capacity(n);
            s.extend((0..n).filter(|&a| has(a)));
            out.push(s);
        }
    }
    out
}

fn holds(a: &FinStructure, f: &Formula, env: &mut Vec<usize>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Rel(r, args) => {
            let t: Vec<usize> = args.iter().map(|&v| env[v]).collect();
            a.holds(r, &t)
        }
        Formula::Eq(x, y) => env[*x] == env[*y],
        Formula::Not(g) => !holds(a, g, env),
        Formula::And(x, y) => holds(a, x, env) & holds(a, y, env),
        Formula::Or(x, y) => holds(a, x, env) | holds(a, y, env),
        Formula::Implies(x, y) => !holds(a, x, env) | holds(a, y, env),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let saved = env[*v];
            let mut hits = 0;
            for e in 0..a.size() {
                env[*v] = e;
                hits += holds(a, g, env) as usize;
            }
            env[*v] = saved;
            if matches!(f, Formula::Exists(..)) {
                hits > 0
            } else {
                hits == a.size()
            }
        }
    }
}

/// Satisfying assignment count by plain recursion over every tuple.
pub fn brute_count(a: &FinStructure, f: &Formula, n: usize) -> BigInt {
    let slots = f.slot_count().max(n) + 1;
    let size = a.size();
    let total = size.pow(n as u32);
    let mut count = 0u64;
    for code in 0..total {
        let mut env = vec![0; slots];
        let mut c = code;
        for slot in env.iter_mut().take(n) {
            *slot = c % size;
            c /= size;
        }
        if holds(a, f, &mut env) {
            count += 1;
        }
    }
    BigInt::from(count)
}

pub fn brute_pairing(a: &FinStructure, f: &Formula, n: usize) -> UnitRational {
    let total = BigInt::from(a.size()).pow(n as u32);
    UnitRational::from_counts(&brute_count(a, f, n), &total).unwrap()
}

pub fn edge_signature() -> Signature {
    Signature::new().with("E", 2).unwrap()
}

/// Structure over `{0..size}` whose edge set is read off the bits of `mask`.
pub fn edge_structure(size: usize, mask: u64) -> FinStructure {
    let mut edges = Vec::new();
    for i in 0..size {
        for j in 0..size {
            if mask & (1 << (i * size + j)) != 0 {
                edges.push(vec![i, j]);
            }
        }
    }
    let mut rel = BTreeMap::new();
    rel.insert("E".to_string(), edges);
    let domain = (0..size).map(|i| format!("d{i}")).collect();
    FinStructure::new(edge_signature(), domain, &rel).unwrap()
}

/// Every structure with one binary relation on 1 to `max` elements.
pub fn all_edge_structures(max: usize) -> Vec<FinStructure> {
    (1..=max)
        .flat_map(|s| (0..1u64 << (s * s)).map(move |m| edge_structure(s, m)))
        .collect()
}

pub fn random_edge_structure<R: Rng>(rng: &mut R, max: usize) -> FinStructure {
    let size = rng.gen_range(1..=max);
    edge_structure(size, rng.gen_range(0..1u64 << (size * size)))
}

/// Random formula over `E` with free variables among slots `0..free`;
/// quantified variables get slots from `free` upward.
pub fn random_formula<R: Rng>(rng: &mut R, free: usize, depth: usize) -> Formula {
    fn go<R: Rng>(rng: &mut R, bound: usize, next: usize, depth: usize) -> Formula {
        let pick = |rng: &mut R| rng.gen_range(0..bound);
        if depth == 0 || rng.gen_bool(0.3) {
            return match rng.gen_range(0..6) {
                0 => Formula::True,
                1 => Formula::Eq(pick(rng), pick(rng)),
                _ => Formula::rel("E", &[pick(rng), pick(rng)]),
            };
        }
        match rng.gen_range(0..6) {
            0 => Formula::not(go(rng, bound, next, depth - 1)),
            1 => Formula::and(go(rng, bound, next, depth - 1), go(rng, bound, next, depth - 1)),
            2 => Formula::or(go(rng, bound, next, depth - 1), go(rng, bound, next, depth - 1)),
            3 => Formula::implies(go(rng, bound, next, depth - 1), go(rng, bound, next, depth - 1)),
            4 => Formula::exists(next, go(rng, next + 1, next + 1, depth - 1)),
            _ => Formula::forall(next, go(rng, next + 1, next + 1, depth - 1)),
        }
    }
    if free == 0 {
        return Formula::exists(0, go(rng, 1, 1, depth));
    }
    go(rng, free, free, depth)
}
