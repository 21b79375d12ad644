mod common;

use common::u;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stone_pairing::fo::{parse_formula, stone_pairing_gamma, Formula};
use stone_pairing::gamma::{gamma, BasicClopen, GammaValue, UnitRational};
use stone_pairing::limits::{
    chain, classical_converge_with, default_eps, gamma_converge, gamma_converge_with, ladder, sequence_report,
    ConvergenceVerdict, Generator, ReportOptions, Status, DEFAULT_THRESHOLD,
};

const WINDOW: usize = 20;

/// Sequences of several shapes: eventually constant, geometric approach from
/// either side, two-point oscillation, and the ladder pattern.
fn sequence(seed: u64) -> Vec<GammaValue> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(WINDOW..=50);
    let den = rng.gen_range(1..=9u64);
    let k = rng.gen_range(0..=den);
    let r = u(k, den);
    let circ = |x: UnitRational| GammaValue::circ(x);
    match rng.gen_range(0..5) {
        0 => {
            let v = if k > 0 && rng.gen_bool(0.5) { GammaValue::m(k, den) } else { GammaValue::c(k, den) };
            let noise = rng.gen_range(0..len - WINDOW / 2 + 1);
            (0..len)
                .map(|i| if i < noise { circ(u(rng.gen_range(0..=8), 8)) } else { v.clone() })
                .collect()
        }
        1 | 2 => {
            let from_below = rng.gen_bool(0.5) && k > 0;
            let gap = if from_below { r.clone() } else { u(1, 1).checked_sub(&r).unwrap() };
            (1..=len as u32)
                .map(|i| {
                    let step = gap.as_ratio() * num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(2u8).pow(i));
                    let x = if from_below { r.as_ratio() - step } else { r.as_ratio() + step };
                    circ(UnitRational::from_ratio(x).unwrap())
                })
                .collect()
        }
        3 => {
            let other = u(rng.gen_range(0..=den), den);
            (0..len).map(|i| circ(if i % 2 == 0 { r.clone() } else { other.clone() })).collect()
        }
        _ => (1..=len as u64)
            .map(|n| if n % 2 == 1 { GammaValue::top() } else { GammaValue::c(n / 2, n / 2 + 2) })
            .collect(),
    }
}

fn same_verdict<L: PartialEq>(a: &ConvergenceVerdict<L>, b: &ConvergenceVerdict<L>, shift: usize) -> bool {
    match (&a.status, &b.status) {
        (Status::Converged(x), Status::Converged(y)) => x == y,
        (Status::Inconclusive, Status::Inconclusive) => true,
        (Status::Diverged(x), Status::Diverged(y)) => {
            let moved: Vec<usize> = x.entries.iter().map(|i| i + shift).collect();
            x.clopen == y.clopen && moved == y.entries && x.exits.len() == y.exits.len()
        }
        _ => false,
    }
}

fn collapse(seq: &[GammaValue]) -> Vec<UnitRational> {
    seq.iter().map(gamma).collect()
}

proptest! {
    #[test]
    fn verdicts_ignore_values_before_the_window(seed in any::<u64>(), junk in prop::collection::vec(0u64..=6, 1..10)) {
        let seq = sequence(seed);
        let base = gamma_converge(&seq, WINDOW);
        let mut mutated = seq.clone();
        let cut = seq.len() - WINDOW;
        for (i, v) in junk.iter().enumerate().take(cut) {
            mutated[i] = GammaValue::c(*v, 6);
        }
        prop_assert!(same_verdict(&base, &gamma_converge(&mutated, WINDOW), 0));
        let mut prefixed: Vec<GammaValue> = junk.iter().map(|v| GammaValue::c(*v, 6)).collect();
        let shift = prefixed.len();
        prefixed.extend(seq.iter().cloned());
        prop_assert!(same_verdict(&base, &gamma_converge(&prefixed, WINDOW), shift));
        let eps = default_eps(WINDOW);
        let c = classical_converge_with(&collapse(&seq), WINDOW, &eps, DEFAULT_THRESHOLD);
        let cp = classical_converge_with(&collapse(&prefixed), WINDOW, &eps, DEFAULT_THRESHOLD);
        prop_assert!(same_verdict(&c, &cp, shift));
    }

    #[test]
    fn flavored_convergence_implies_classical(seed in any::<u64>()) {
        let seq = sequence(seed);
        let eps = default_eps(WINDOW);
        let g = gamma_converge_with(&seq, WINDOW, &eps, DEFAULT_THRESHOLD);
        if let Some(limit) = g.limit() {
            let c = classical_converge_with(&collapse(&seq), WINDOW, &eps, DEFAULT_THRESHOLD);
            prop_assert_eq!(c.limit(), Some(&gamma(limit)));
        }
    }

    #[test]
    fn eventually_constant_sequences_converge_to_their_value(k in 0u64..=12, minus in any::<bool>(), head in prop::collection::vec(0u64..=12, 0..15)) {
        let v = if minus && k > 0 { GammaValue::m(k, 12) } else { GammaValue::c(k, 12) };
        let mut seq: Vec<GammaValue> = head.iter().map(|h| GammaValue::c(*h, 12)).collect();
        seq.extend(std::iter::repeat_n(v.clone(), WINDOW));
        let verdict = gamma_converge(&seq, WINDOW);
        prop_assert_eq!(verdict.limit(), Some(&v));
    }

    // Limits are identified to within eps, so the targets are kept on a grid
    // coarse enough to be told apart at the default eps.
    #[test]
    fn approach_from_below_gives_the_minus_point(k in 1u64..=4) {
        let seq: Vec<GammaValue> = (1..=40u64).map(|i| GammaValue::c(k * i, 4 * (i + 1))).collect();
        let verdict = gamma_converge(&seq, WINDOW);
        prop_assert_eq!(verdict.limit(), Some(&GammaValue::m(k, 4)));
    }
}

#[test]
fn ladder_row_separates_the_two_notions() {
    let p = parse_formula(
        "forall y. !(x < y) & exists z. (!(z < x) & !(z = x))",
        ladder(1).unwrap().signature(),
    )
    .unwrap();
    let fs = vec![("!psi".to_string(), Formula::not(p.clone())), ("psi".to_string(), p.clone())];
    let rep = sequence_report(&Generator::Ladder, 1, 40, &fs, 1, &ReportOptions::default()).unwrap();
    let not_psi = &rep.summaries[0];
    assert!(not_psi.classical.is_converged());
    assert!(not_psi.gamma.is_diverged());
    assert_eq!(not_psi.gamma.witness().unwrap().clopen, BasicClopen::up_circ(u(1, 1)));
    assert_eq!(rep.summaries[1].gamma.limit(), Some(&GammaValue::bottom()));

    // Odd ladders are chains, where psi never holds; even ones have k/(k+2).
    for n in 1..=12usize {
        let v = stone_pairing_gamma(&ladder(n).unwrap(), &Formula::not(p.clone()), 1).unwrap();
        let k = n as u64 / 2;
        let want = if n % 2 == 1 { GammaValue::top() } else { GammaValue::c(k, k + 2) };
        assert_eq!(v, want, "ladder({n})");
    }

    let chains = sequence_report(&Generator::Chain, 1, 30, &fs, 1, &ReportOptions::default()).unwrap();
    assert_eq!(chains.summaries[0].gamma.limit(), Some(&GammaValue::top()));
}

#[test]
fn short_prefixes_are_inconclusive() {
    let seq: Vec<GammaValue> = (0..10).map(|_| GammaValue::c(1, 2)).collect();
    assert_eq!(gamma_converge(&seq, WINDOW).status, Status::Inconclusive);
    assert!(chain(0).is_err());
}

#[test]
fn csv_reports_provenance() {
    let p = parse_formula("forall y. !(x < y)", ladder(1).unwrap().signature()).unwrap();
    let rep = sequence_report(&Generator::Ladder, 1, 24, &[("max".into(), p)], 1, &ReportOptions::default()).unwrap();
    let csv = rep.to_csv_string().unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# generator=ladder range=1..24"));
    assert!(lines.next().unwrap().contains("window=20"));
    assert_eq!(lines.next().unwrap(), "index,formula,classical,gamma,verdict_classical,verdict_gamma,witness");
    assert!(csv.lines().last().unwrap().starts_with("verdict,max,"));
    assert!(csv.lines().filter(|l| !l.starts_with('#')).all(|l| !l.contains('.')));
}
