//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::cmp::Ordering;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stone_pairing::fo::{
    fragment_inclusion, parse_formula, semantic_fragment, stone_pairing_classical, stone_pairing_gamma, type_table,
    Formula,
};
use stone_pairing::gamma::{compare, gamma, iota, BasicClopen, GammaValue, Grid};
use stone_pairing::lattice::{dual_hom, random_lattice, random_monotone_map, random_poset, downset_lattice};
use stone_pairing::limits::{
    classical_converge, gamma_converge, ladder, sequence_report, Generator, ReportOptions,
};
use stone_pairing::measure::{check_gamma, fs_integrate, pushforward, random_gamma};
use stone_pairing::plogic::{
    check_soundness, exhaustive_measures, filter_from_measure, measure_from_filter_on, Axiom,
};
use stone_pairing::{FinDistLattice, GammaMeasure, LatticeHom};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn psi() -> Formula {
    parse_formula(
        "forall y. !(x < y) & exists z. (!(z < x) & !(z = x))",
        ladder(1).unwrap().signature(),
    )
    .unwrap()
}

fn fragment_formulas() -> Vec<Formula> {
    let sig = edge_signature();
    [
        "E(v1,v2)",
        "E(v2,v1)",
        "E(v1,v1)",
        "v1 = v2",
        "exists v2. E(v1,v2)",
        "forall v2. E(v1,v2)",
        "exists v2. E(v2,v1)",
        "E(v1,v2) & E(v2,v1)",
        "E(v1,v2) | v1 = v2",
        "!E(v1,v2)",
        "forall v1. exists v2. E(v1,v2)",
        "E(v1,v2) -> E(v2,v1)",
    ]
    .iter()
    .map(|t| parse_formula(t, &sig).unwrap())
    .collect()
}

fn ladder_pairings() -> Outcome {
    let not_psi = Formula::not(psi());
    let expected = [
        GammaValue::c(1, 1),
        GammaValue::c(1, 3),
        GammaValue::c(1, 1),
        GammaValue::c(2, 4),
        GammaValue::c(1, 1),
        GammaValue::c(3, 5),
    ];
    let mut classical = Vec::new();
    let mut flavored = Vec::new();
    for i in 1..=40 {
        let a = ladder(i).unwrap();
        classical.push(stone_pairing_classical(&a, &not_psi, 1).unwrap());
        flavored.push(stone_pairing_gamma(&a, &not_psi, 1).unwrap());
    }
    ensure(flavored[..6] == expected, || format!("first six pairings {:?}", &flavored[..6]))?;
    let g = gamma_converge(&flavored, 20);
    let w = g.witness().ok_or_else(|| format!("flavored verdict {}", g.status))?;
    ensure(w.clopen == BasicClopen::up_circ(u(1, 1)), || format!("witness {w}"))?;
    let c = classical_converge(&classical, 20, &u(1, 20));
    let lim = c.limit().ok_or_else(|| format!("classical verdict {}", c.status))?;
    let gap = u(1, 1).checked_sub(lim).unwrap();
    ensure(gap <= u(1, 20), || format!("limit {lim}"))?;
    Ok(format!("pairings exact, gamma diverged ({w}), classical limit {lim}"))
}

fn embedding_triangle() -> Outcome {
    let structures = all_edge_structures(3);
    let fs = fragment_formulas();
    let mut checked = 0;
    for a in &structures {
        for f in &fs {
            let c = stone_pairing_classical(a, f, 2).unwrap();
            let g = stone_pairing_gamma(a, f, 2).unwrap();
            ensure(gamma(&g) == c, || format!("collapse mismatch on {}", a.to_json()))?;
            ensure(c == brute_pairing(a, f, 2), || format!("oracle mismatch on {}", a.to_json()))?;
            checked += 1;
        }
    }
    Ok(format!("{} structures, {checked} pairings", structures.len()))
}

fn measure_axioms() -> Outcome {
    let fs = fragment_formulas();
    let structures = all_edge_structures(3);
    let mut largest = 0;
    for a in &structures {
        let table = type_table(a, &fs, 2).unwrap();
        let frag = semantic_fragment(&fs, std::slice::from_ref(a), 2).unwrap();
        let d = frag.lattice();
        largest = largest.max(d.len());
        let fsf = table.fs_function();
        let values: Vec<GammaValue> = d.elements().map(|e| fs_integrate(&fsf, frag.cell_set(e))).collect();
        let verdict = check_gamma(d, &values).unwrap();
        ensure(verdict.is_ok(), || format!("{verdict:?} on {}", a.to_json()))?;
    }
    Ok(format!("{} measures, largest fragment {largest} elements", structures.len()))
}

fn restriction_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..50 {
        let a = random_edge_structure(&mut rng, 4);
        let n = rng.gen_range(0..=2);
        let f = random_formula(&mut rng, n, 4);
        let small = stone_pairing_gamma(&a, &f, n).unwrap();
        let large = stone_pairing_gamma(&a, &f, n + 2).unwrap();
        ensure(small == large, || format!("case {case}: {small} vs {large}"))?;
    }
    Ok("50 cases".into())
}

fn algebra_laws() -> Outcome {
    let vals = Grid::new(12).unwrap().flavored();
    let le = |x: &GammaValue, y: &GammaValue| compare(x, y) != Ordering::Greater;
    let mut checks = 0u64;
    let dom: Vec<(usize, usize)> = (0..vals.len())
        .flat_map(|i| (0..vals.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| vals[i].mip(&vals[j]).is_ok())
        .collect();
    for &(i, j) in &dom {
        let (x, y) = (&vals[i], &vals[j]);
        ensure(vals[i].miss(y).is_ok(), || format!("miss undefined at ({x}, {y})"))?;
        for x2 in vals.iter().filter(|x2| le(x, x2)) {
            for y2 in vals.iter().filter(|y2| le(y2, y)) {
                ensure(x2.mip(y2).is_ok() && x2.miss(y2).is_ok(), || {
                    format!("not an up-set: ({x}, {y}) in, ({x2}, {y2}) out")
                })?;
                let (m, m2) = (x.mip(y).unwrap(), x2.mip(y2).unwrap());
                let (d, d2) = (x.miss(y).unwrap(), x2.miss(y2).unwrap());
                ensure(le(&m, &m2) && le(&d, &d2), || format!("monotonicity at ({x}, {y}) <= ({x2}, {y2})"))?;
                checks += 1;
            }
        }
        let (m, d) = (x.mip(y).unwrap(), x.miss(y).unwrap());
        ensure(le(&d, &m), || format!("miss above mip at ({x}, {y})"))?;
        let diff = gamma(x).checked_sub(&gamma(y)).unwrap();
        ensure(gamma(&m) == diff && gamma(&d) == diff, || format!("collapse of minus at ({x}, {y})"))?;
    }
    for x in &vals {
        for y in &vals {
            let Ok(s) = x.plus(y) else { continue };
            for z in &vals {
                let Ok(r) = z.mip(y) else {
                    ensure(!le(&s, z), || format!("{x} + {y} <= {z} but {z} - {y} undefined"))?;
                    continue;
                };
                ensure(le(&s, z) == le(x, &r), || format!("adjunction at ({x}, {y}, {z})"))?;
                checks += 1;
            }
        }
    }
    let pts: Vec<_> = Grid::new(12).unwrap().points().collect();
    for r in &pts {
        ensure(gamma(&iota(r)) == *r, || format!("retraction at {r}"))?;
        for s in pts.iter().filter(|s| *s <= r) {
            let lhs = iota(&r.checked_sub(s).unwrap());
            ensure(lhs == iota(r).mip(&iota(s)).unwrap(), || format!("section at ({r}, {s})"))?;
        }
    }
    Ok(format!("{} values, {} pairs in the domain, {checks} law checks", vals.len(), dom.len()))
}

fn miss_oracle_agreement() -> Outcome {
    let vals = Grid::new(8).unwrap().flavored();
    let mut pairs = 0;
    for x in &vals {
        for y in &vals {
            let Ok(closed) = x.miss(y) else { continue };
            let [a, b, c] = miss_oracle(x, y, 16);
            ensure(a == b && b == c, || format!("join not stable at ({x}, {y}): {a} {b} {c}"))?;
            ensure(c == closed, || format!("({x}, {y}): closed form {closed}, join {c}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs agree over I_16, I_32, I_64"))
}

fn soundness() -> Outcome {
    let g4 = Grid::new(4).unwrap();
    let mut measures = 0;
    for d in [FinDistLattice::diamond(), FinDistLattice::chain(4)] {
        let d = Arc::new(d);
        let family = exhaustive_measures(&d, &g4);
        measures += family.len();
        for ax in Axiom::ALL {
            let v = check_soundness(ax, &d, &family, &g4).unwrap();
            ensure(v.is_empty(), || format!("{ax}: {}", v[0].text))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..500 {
        let (_, d) = random_lattice(8, &mut rng);
        let d = Arc::new(d);
        let den = [2, 3, 4][rng.gen_range(0..3)];
        let mu = random_gamma(d.clone(), den, true, &mut rng).unwrap();
        let g = Grid::new(den).unwrap();
        for ax in Axiom::ALL {
            let v = check_soundness(ax, &d, std::slice::from_ref(&mu), &g).unwrap();
            ensure(v.is_empty(), || format!("random measure {i}, {ax}: {}", v[0].text))?;
        }
    }
    let d = Arc::new(FinDistLattice::diamond());
    let (a, b) = (d.element("a").unwrap(), d.element("b").unwrap());
    let mut vals = vec![GammaValue::bottom(); 4];
    vals[d.top()] = GammaValue::top();
    vals[a] = GammaValue::c(1, 4);
    vals[b] = GammaValue::c(1, 4);
    let planted = GammaMeasure::unchecked(d.clone(), vals).unwrap();
    let caught: Vec<Axiom> = Axiom::ALL
        .into_iter()
        .filter(|&ax| !check_soundness(ax, &d, std::slice::from_ref(&planted), &g4).unwrap().is_empty())
        .collect();
    ensure(!caught.is_empty(), || "planted non-measure passed every axiom".into())?;
    Ok(format!("{measures} exhaustive + 500 random measures, control caught by {caught:?}"))
}

fn round_trip() -> Outcome {
    let (g4, g8) = (Grid::new(4).unwrap(), Grid::new(8).unwrap());
    let mut total = 0;
    let mut separated = 0;
    for d in [FinDistLattice::diamond(), FinDistLattice::chain(4)] {
        let d = Arc::new(d);
        let family = exhaustive_measures(&d, &g4);
        let filters: Vec<_> = family.iter().map(|mu| filter_from_measure(mu, &g8)).collect();
        for (mu, f) in family.iter().zip(&filters) {
            let back = measure_from_filter_on(f, &g4).map_err(|e| e.to_string())?;
            ensure(back == *mu, || format!("round trip moved {:?}", mu.to_named()))?;
        }
        for i in 0..family.len() {
            for j in 0..family.len() {
                if i == j {
                    continue;
                }
                let atom = filters[i]
                    .separating_atom(&filters[j])
                    .or_else(|| filters[j].separating_atom(&filters[i]));
                let atom = atom.ok_or_else(|| format!("no separating atom for {i}, {j}"))?;
                ensure(atom.holds(&family[i]) != atom.holds(&family[j]), || {
                    format!("atom does not separate {i}, {j}")
                })?;
                separated += 1;
            }
        }
        total += family.len();
    }
    Ok(format!("{total} measures round-trip, {separated} ordered pairs separated"))
}

fn functor_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..20 {
        let ps: Vec<_> = (0..3).map(|_| random_poset(rng.gen_range(1..=4), 0.4, &mut rng)).collect();
        let ds: Vec<_> = ps.iter().map(|p| Arc::new(downset_lattice(p))).collect();
        let f = random_monotone_map(&ps[1], &ps[0], &mut rng);
        let g = random_monotone_map(&ps[2], &ps[1], &mut rng);
        let h1 = dual_hom(&ps[0], &ps[1], &f, ds[0].clone(), ds[1].clone()).map_err(|e| e.to_string())?;
        let h2 = dual_hom(&ps[1], &ps[2], &g, ds[1].clone(), ds[2].clone()).map_err(|e| e.to_string())?;
        let mu = random_gamma(ds[2].clone(), rng.gen_range(2..=6), true, &mut rng).unwrap();
        let id = pushforward(&LatticeHom::identity(ds[2].clone()), &mu).unwrap();
        ensure(id == mu, || format!("case {case}: identity law"))?;
        let whole = pushforward(&h1.then(&h2).unwrap(), &mu).unwrap();
        let steps = pushforward(&h1, &pushforward(&h2, &mu).unwrap()).unwrap();
        ensure(whole == steps, || format!("case {case}: composition law"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..20 {
        let family: Vec<_> = (0..rng.gen_range(1..=3)).map(|_| random_edge_structure(&mut rng, 3)).collect();
        let n = rng.gen_range(1..=2);
        let fine: Vec<Formula> = (0..4).map(|_| random_formula(&mut rng, n, 3)).collect();
        let coarse: Vec<Formula> = fine.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let fine_frag = semantic_fragment(&fine, &family, n).unwrap();
        let coarse_frag = semantic_fragment(&coarse, &family, n).unwrap();
        let h = fragment_inclusion(&coarse_frag, &fine_frag).map_err(|e| e.to_string())?;
        for (s, a) in family.iter().enumerate() {
            let pushed = pushforward(&h, &fine_frag.measure(s).unwrap()).unwrap();
            ensure(pushed == coarse_frag.measure(s).unwrap(), || format!("case {case}: restriction"))?;
            for (i, f) in coarse.iter().enumerate() {
                let direct = stone_pairing_gamma(a, f, n).unwrap();
                ensure(*pushed.value(coarse_frag.element_of(i)) == direct, || {
                    format!("case {case}: formula {i} disagrees with its pairing")
                })?;
            }
        }
    }
    Ok("20 hom chains, 20 fragment inclusions".into())
}

fn determinism() -> Outcome {
    let p = psi();
    let fs = vec![("!psi".to_string(), Formula::not(p.clone())), ("psi".to_string(), p)];
    let csv = |workers| {
        let opts = ReportOptions {
            workers,
            ..ReportOptions::default()
        };
        sequence_report(&Generator::Ladder, 1, 40, &fs, 1, &opts)
            .unwrap()
            .to_csv_string()
            .unwrap()
    };
    let (a, b, c) = (csv(1), csv(1), csv(4));
    ensure(a == b, || "two runs differ".into())?;
    ensure(a == c, || "workers 1 and 4 differ".into())?;
    Ok(format!("{} bytes identical", a.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("ladder pairings and convergence verdicts", ladder_pairings),
        ("embedding triangle", embedding_triangle),
        ("measure axioms on type tables", measure_axioms),
        ("restriction coherence", restriction_coherence),
        ("flavored algebra laws", algebra_laws),
        ("dual minus against its join", miss_oracle_agreement),
        ("logic soundness", soundness),
        ("filter round trip and separation", round_trip),
        ("functor laws", functor_laws),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
