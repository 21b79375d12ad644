//! Structure sequences, prefix-window convergence analysis in `[0,1]` and in
//! the flavored order, and side-by-side pairing reports.
//!
//! Every verdict is relative to the analyzed window of a finite prefix.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::fo::{stone_pairing_classical, FinStructure, FoError, Formula, Signature};
use crate::gamma::{iota, BasicClopen, Flavor, GammaValue, UnitRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitsError {
    #[error("sequence index {0} is out of range")]
    BadIndex(usize),
    #[error("window must be at least 2")]
    BadWindow,
    #[error(transparent)]
    Fo(#[from] FoError),
    #[error("csv output: {0}")]
    Csv(String),
    #[error("worker pool: {0}")]
    Workers(String),
}

fn lt_signature() -> Signature {
    Signature::new().with("<", 2).expect("valid symbol")
}

fn strict_chain_pairs(len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..len {
        for j in i + 1..len {
            out.push(vec![i, j]);
        }
    }
    out
}

/// `ladder(2k-1)` is a `(k+1)`-chain; `ladder(2k)` is a `(k+1)`-chain plus an
/// isolated point. `<` is the strict order.
pub fn ladder(n: usize) -> Result<FinStructure, LimitsError> {
    if n == 0 {
        return Err(LimitsError::BadIndex(0));
    }
    let k = n.div_ceil(2);
    let len = k + 1;
    let size = if n.is_multiple_of(2) { len + 1 } else { len };
    let domain = (1..=size).map(|i| format!("b{i}")).collect();
    let mut rel = BTreeMap::new();
    rel.insert("<".to_string(), strict_chain_pairs(len));
    Ok(FinStructure::new(lt_signature(), domain, &rel)?)
}

/// An `n`-element chain under the strict order.
pub fn chain(n: usize) -> Result<FinStructure, LimitsError> {
    if n == 0 {
        return Err(LimitsError::BadIndex(0));
    }
    let domain = (1..=n).map(|i| format!("c{i}")).collect();
    let mut rel = BTreeMap::new();
    rel.insert("<".to_string(), strict_chain_pairs(n));
    Ok(FinStructure::new(lt_signature(), domain, &rel)?)
}

/// Source of the structures `A_1, A_2, ...`.
#[derive(Debug, Clone)]
pub enum Generator {
    Ladder,
    Chain,
    /// `A_i` is the `i`-th listed structure.
    Files(Vec<FinStructure>),
}

impl Generator {
    pub fn structure(&self, i: usize) -> Result<FinStructure, LimitsError> {
        match self {
            Generator::Ladder => ladder(i),
            Generator::Chain => chain(i),
            Generator::Files(v) => i
                .checked_sub(1)
                .and_then(|j| v.get(j))
                .cloned()
                .ok_or(LimitsError::BadIndex(i)),
        }
    }

    pub fn id(&self) -> String {
        match self {
            Generator::Ladder => "ladder".into(),
            Generator::Chain => "chain".into(),
            Generator::Files(v) => format!("file:{} structures", v.len()),
        }
    }
}

/// Oscillation through a basic clopen inside the window: `entries` are the
/// first positions of maximal runs inside, `exits` the first positions after
/// such a run that fall outside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oscillation {
    pub clopen: BasicClopen,
    pub entries: Vec<usize>,
    pub exits: Vec<usize>,
}

impl fmt::Display for Oscillation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} entries={} exits={}", self.clopen, self.entries.len(), self.exits.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status<L> {
    Converged(L),
    Diverged(Oscillation),
    Inconclusive,
}

/// Parameters the verdict was reached with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowInfo {
    pub prefix: usize,
    pub window: usize,
    pub eps: UnitRational,
    pub threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceVerdict<L> {
    pub status: Status<L>,
    pub info: WindowInfo,
}

impl<L> ConvergenceVerdict<L> {
    pub fn limit(&self) -> Option<&L> {
        match &self.status {
            Status::Converged(l) => Some(l),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Oscillation> {
        match &self.status {
            Status::Diverged(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self.status, Status::Converged(_))
    }

    pub fn is_diverged(&self) -> bool {
        matches!(self.status, Status::Diverged(_))
    }
}

impl<L: fmt::Display> fmt::Display for Status<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Converged(l) => write!(f, "converged({l})"),
            Status::Diverged(_) => write!(f, "diverged"),
            Status::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

pub const DEFAULT_THRESHOLD: usize = 5;

/// `1/(2 window)`.
pub fn default_eps(window: usize) -> UnitRational {
    UnitRational::new(1, 2 * window.max(1) as u64).expect("in range")
}

/// Simplest rational (least denominator, then least numerator) in `[lo, hi]`,
/// for `0 <= lo <= hi`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(!lo.is_negative() && lo <= hi);
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if &fl + BigRational::one() <= *hi {
        return lo.ceil();
    }
    // same integer part, recurse on the reciprocals of the fractional parts
    let a = hi - &fl;
    let b = lo - &fl;
    fl + (simplest_between(&a.recip(), &b.recip())).recip()
}

fn spread(v: &[&BigRational]) -> (BigRational, BigRational) {
    let lo = v.iter().min().expect("non-empty").to_owned().clone();
    let hi = v.iter().max().expect("non-empty").to_owned().clone();
    (lo, hi)
}

fn clamp01(x: BigRational) -> BigRational {
    if x.is_negative() {
        BigRational::zero()
    } else if x > BigRational::one() {
        BigRational::one()
    } else {
        x
    }
}

/// Runs of consecutive window positions satisfying `inside`.
fn oscillation(start: usize, len: usize, inside: impl Fn(usize) -> bool) -> (Vec<usize>, Vec<usize>) {
    let mut entries = Vec::new();
    let mut exits = Vec::new();
    let mut prev = false;
    for i in start..len {
        let now = inside(i);
        if now && !prev {
            entries.push(i);
        }
        if !now && prev {
            exits.push(i);
        }
        prev = now;
    }
    (entries, exits)
}

/// Convergence in `[0,1]` judged on the final `window` values.
///
/// The window is split in halves; a constant second half converges to its
/// value. Otherwise the lower and upper envelopes are extrapolated from the
/// two halves (geometric contraction of the spread), and the sequence is
/// declared convergent when the extrapolated envelopes lie within `2 eps`.
/// The limit reported is the simplest rational within `eps` of their
/// midpoint. Divergence needs two bands of width `eps` more than `2 eps`
/// apart, each visited at least `threshold` times.
pub fn classical_converge(seq: &[UnitRational], window: usize, eps: &UnitRational) -> ConvergenceVerdict<UnitRational> {
    classical_converge_with(seq, window, eps, DEFAULT_THRESHOLD)
}

pub fn classical_converge_with(
    seq: &[UnitRational],
    window: usize,
    eps: &UnitRational,
    threshold: usize,
) -> ConvergenceVerdict<UnitRational> {
    let info = WindowInfo {
        prefix: seq.len(),
        window,
        eps: eps.clone(),
        threshold,
    };
    let verdict = |status| ConvergenceVerdict {
        status,
        info: info.clone(),
    };
    if window < 2 || seq.len() < window {
        return verdict(Status::Inconclusive);
    }
    let start = seq.len() - window;
    let tail: Vec<&BigRational> = seq[start..].iter().map(UnitRational::as_ratio).collect();
    let half = window / 2;
    let (h1, h2) = tail.split_at(window - half);
    if h2.iter().all(|x| *x == h2[0]) {
        return verdict(Status::Converged(seq[seq.len() - 1].clone()));
    }
    let e = eps.as_ratio();
    let (lo1, hi1) = spread(h1);
    let (lo2, hi2) = spread(h2);
    let (s1, s2) = (&hi1 - &lo1, &hi2 - &lo2);
    let (lo_inf, hi_inf) = if s2 < s1 {
        let factor = &s2 / (&s1 - &s2);
        (
            clamp01(&lo2 + (&lo2 - &lo1) * &factor),
            clamp01(&hi2 + (&hi2 - &hi1) * &factor),
        )
    } else {
        (lo2.clone(), hi2.clone())
    };
    let two = BigRational::from_integer(BigInt::from(2));
    if lo_inf <= hi_inf && &hi_inf - &lo_inf <= &two * e {
        let mid = (&lo_inf + &hi_inf) / &two;
        let limit = simplest_between(&clamp01(&mid - e), &clamp01(&mid + e));
        return verdict(Status::Converged(UnitRational::from_ratio(limit).expect("clamped to [0,1]")));
    }
    let (lo, hi) = spread(&tail);
    if &hi - &lo > &two * e {
        let low_band = |x: &BigRational| *x <= &lo + e;
        let high_band = |x: &BigRational| *x >= &hi - e;
        let runs = |band: &dyn Fn(&BigRational) -> bool| oscillation(start, seq.len(), |i| band(seq[i].as_ratio())).0.len();
        if runs(&low_band) >= threshold && runs(&high_band) >= threshold {
            let p = (&lo + &hi) / &two;
            let clopen = BasicClopen::up_circ(UnitRational::from_ratio(p.clone()).expect("between values"));
            let (entries, exits) = oscillation(start, seq.len(), |i| *seq[i].as_ratio() >= p);
            if entries.len() >= threshold && exits.len() >= threshold {
                return verdict(Status::Diverged(Oscillation { clopen, entries, exits }));
            }
        }
    }
    verdict(Status::Inconclusive)
}

/// Convergence in the flavored order.
///
/// The collapsed sequence gives a candidate rational limit `r`. The window is
/// then split by the clopen `upCirc r` into the side `{x < r^o}` (values below
/// `r` and `r^-`) and the side `{x >= r^o}` (`r^o` and values above). If both
/// sides recur `threshold` times the sequence diverges with witness
/// `upCirc r`; otherwise the side holding the final run, when that run covers
/// at least half the window, fixes the limit `r^-` or `r^o`.
pub fn gamma_converge(seq: &[GammaValue], window: usize) -> ConvergenceVerdict<GammaValue> {
    gamma_converge_with(seq, window, &default_eps(window), DEFAULT_THRESHOLD)
}

pub fn gamma_converge_with(
    seq: &[GammaValue],
    window: usize,
    eps: &UnitRational,
    threshold: usize,
) -> ConvergenceVerdict<GammaValue> {
    let collapsed: Vec<UnitRational> = seq.iter().map(GammaValue::collapse).collect();
    let c = classical_converge_with(&collapsed, window, eps, threshold);
    let info = c.info.clone();
    let verdict = |status| ConvergenceVerdict {
        status,
        info: info.clone(),
    };
    match c.status {
        Status::Inconclusive => verdict(Status::Inconclusive),
        Status::Diverged(w) => {
            let (entries, exits) = oscillation(seq.len() - window, seq.len(), |i| w.clopen.contains(&seq[i]));
            if entries.len() >= threshold && exits.len() >= threshold {
                verdict(Status::Diverged(Oscillation {
                    clopen: w.clopen,
                    entries,
                    exits,
                }))
            } else {
                verdict(Status::Inconclusive)
            }
        }
        Status::Converged(r) => {
            let start = seq.len() - window;
            let up = BasicClopen::up_circ(r.clone());
            let (entries, exits) = oscillation(start, seq.len(), |i| up.contains(&seq[i]));
            if entries.len() >= threshold && exits.len() >= threshold {
                return verdict(Status::Diverged(Oscillation {
                    clopen: up,
                    entries,
                    exits,
                }));
            }
            let last_side = up.contains(&seq[seq.len() - 1]);
            let run = seq[start..].iter().rev().take_while(|x| up.contains(x) == last_side).count();
            if 2 * run < window {
                return verdict(Status::Inconclusive);
            }
            let limit = if last_side || r.is_zero() {
                iota(&r)
            } else {
                GammaValue::new(r, Flavor::Minus).expect("positive")
            };
            verdict(Status::Converged(limit))
        }
    }
}

/// One evaluated sequence position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub index: usize,
    pub formula: String,
    pub classical: UnitRational,
    pub gamma: GammaValue,
}

/// Verdicts for one formula over the whole range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportSummary {
    pub formula: String,
    pub classical: ConvergenceVerdict<UnitRational>,
    pub gamma: ConvergenceVerdict<GammaValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub generator: String,
    pub first: usize,
    pub last: usize,
    pub n: usize,
    pub rows: Vec<ReportRow>,
    pub summaries: Vec<ReportSummary>,
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub window: usize,
    pub eps: Option<UnitRational>,
    pub threshold: usize,
    pub workers: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            window: 20,
            eps: None,
            threshold: DEFAULT_THRESHOLD,
            workers: 1,
        }
    }
}

/// Pairings of each formula on `A_first..=A_last`, and both verdicts.
pub fn sequence_report(
    generator: &Generator,
    first: usize,
    last: usize,
    formulas: &[(String, Formula)],
    n: usize,
    opts: &ReportOptions,
) -> Result<Report, LimitsError> {
    if opts.window < 2 {
        return Err(LimitsError::BadWindow);
    }
    let indices: Vec<usize> = (first..=last).collect();
    let eval = |i: &usize| -> Result<Vec<UnitRational>, LimitsError> {
        let a = generator.structure(*i)?;
        formulas
            .iter()
            .map(|(_, f)| Ok(stone_pairing_classical(&a, f, n)?))
            .collect()
    };
    let values: Vec<Vec<UnitRational>> = if opts.workers <= 1 {
        indices.iter().map(eval).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| LimitsError::Workers(e.to_string()))?;
        pool.install(|| indices.par_iter().map(eval).collect::<Result<_, _>>())?
    };
    let eps = opts.eps.clone().unwrap_or_else(|| default_eps(opts.window));
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (k, (label, _)) in formulas.iter().enumerate() {
        let classical: Vec<UnitRational> = values.iter().map(|v| v[k].clone()).collect();
        let gamma: Vec<GammaValue> = classical.iter().map(iota).collect();
        for (j, &index) in indices.iter().enumerate() {
            rows.push(ReportRow {
                index,
                formula: label.clone(),
                classical: classical[j].clone(),
                gamma: gamma[j].clone(),
            });
        }
        summaries.push(ReportSummary {
            formula: label.clone(),
            classical: classical_converge_with(&classical, opts.window, &eps, opts.threshold),
            gamma: gamma_converge_with(&gamma, opts.window, &eps, opts.threshold),
        });
    }
    Ok(Report {
        generator: generator.id(),
        first,
        last,
        n,
        rows,
        summaries,
    })
}

pub const CSV_HEADER: [&str; 7] = [
    "index",
    "formula",
    "classical",
    "gamma",
    "verdict_classical",
    "verdict_gamma",
    "witness",
];

impl Report {
    /// Comment lines describing how the verdicts were reached.
    pub fn provenance(&self) -> Vec<String> {
        let mut out = vec![format!(
            "# generator={} range={}..{} vars={}",
            self.generator, self.first, self.last, self.n
        )];
        if let Some(s) = self.summaries.first() {
            let i = &s.classical.info;
            out.push(format!(
                "# prefix={} window={} eps={} threshold={} (verdicts are relative to the window)",
                i.prefix, i.window, i.eps, i.threshold
            ));
        }
        out
    }

    /// CSV with provenance comments, one row per index and formula, then one
    /// `verdict` row per formula.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), LimitsError> {
        let err = |e: std::io::Error| LimitsError::Csv(e.to_string());
        for line in self.provenance() {
            writeln!(out, "{line}").map_err(err)?;
        }
        let mut w = csv::Writer::from_writer(out);
        let cerr = |e: csv::Error| LimitsError::Csv(e.to_string());
        w.write_record(CSV_HEADER).map_err(cerr)?;
        for r in &self.rows {
            w.write_record([
                r.index.to_string(),
                r.formula.clone(),
                r.classical.to_string(),
                r.gamma.to_string(),
                String::new(),
                String::new(),
                String::new(),
            ])
            .map_err(cerr)?;
        }
        for s in &self.summaries {
            let witness = s
                .gamma
                .witness()
                .or(s.classical.witness())
                .map(ToString::to_string)
                .unwrap_or_default();
            w.write_record([
                "verdict".to_string(),
                s.formula.clone(),
                String::new(),
                String::new(),
                s.classical.status.to_string(),
                s.gamma.status.to_string(),
                witness,
            ])
            .map_err(cerr)?;
        }
        w.flush().map_err(err)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, LimitsError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}
