//! Classical and flavored finitely additive measures on finite distributive
//! lattices, the lifts between them, pushforward along homomorphisms, and
//! integration of finitely supported functions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamma::{gamma, iota, GammaError, GammaValue, UnitRational};
use crate::lattice::{downset_lattice, FinDistLattice, FinPoset, LatticeError, LatticeHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("measures need a non-degenerate lattice")]
    Degenerate,
    #[error("value table has {got} entries, lattice has {expected}")]
    Arity { got: usize, expected: usize },
    #[error("measure lives on a different lattice")]
    LatticeMismatch,
    #[error("not a measure: {0}")]
    Invalid(Violation),
    #[error("bad weight vector: {0}")]
    BadWeights(String),
    #[error("not finitely supported with total 1^o: {0}")]
    BadMass(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("missing value for element `{0}`")]
    MissingValue(String),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// First failed measure axiom, with the offending elements named.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Bottom(String),
    Top(String),
    Monotone { a: String, b: String },
    Modular { a: String, b: String },
    /// `mu(a) miss mu(a^b) <= mu(avb) mip mu(b)` fails.
    MissBelowMip { a: String, b: String },
    /// `mu(a) mip mu(a^b) >= mu(avb) miss mu(b)` fails.
    MipAboveMiss { a: String, b: String },
}

impl Violation {
    pub fn pair(&self) -> Option<(&str, &str)> {
        match self {
            Violation::Monotone { a, b }
            | Violation::Modular { a, b }
            | Violation::MissBelowMip { a, b }
            | Violation::MipAboveMiss { a, b } => Some((a, b)),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Bottom(v) => write!(f, "value at 0 is {v}"),
            Violation::Top(v) => write!(f, "value at 1 is {v}"),
            Violation::Monotone { a, b } => write!(f, "not monotone on {a} <= {b}"),
            Violation::Modular { a, b } => write!(f, "not modular at ({a}, {b})"),
            Violation::MissBelowMip { a, b } => write!(f, "miss/mip inequality fails at ({a}, {b})"),
            Violation::MipAboveMiss { a, b } => write!(f, "mip/miss inequality fails at ({a}, {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violation(Violation),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

fn arity<T>(lattice: &FinDistLattice, values: &[T]) -> Result<(), MeasureError> {
    if lattice.is_degenerate() {
        return Err(MeasureError::Degenerate);
    }
    if values.len() != lattice.len() {
        return Err(MeasureError::Arity {
            got: values.len(),
            expected: lattice.len(),
        });
    }
    Ok(())
}

fn names(l: &FinDistLattice, a: usize, b: usize) -> (String, String) {
    (l.label(a).to_string(), l.label(b).to_string())
}

/// Checks `m(0)=0`, `m(1)=1`, monotonicity and `m(a)-m(a^b) = m(avb)-m(b)`.
pub fn check_classical(lattice: &FinDistLattice, values: &[UnitRational]) -> Result<Verdict, MeasureError> {
    arity(lattice, values)?;
    let bad = |v| Ok(Verdict::Violation(v));
    if !values[lattice.bottom()].is_zero() {
        return bad(Violation::Bottom(values[lattice.bottom()].to_string()));
    }
    if !values[lattice.top()].is_one() {
        return bad(Violation::Top(values[lattice.top()].to_string()));
    }
    for a in lattice.elements() {
        for b in lattice.elements() {
            if lattice.leq(a, b) && values[a] > values[b] {
                let (a, b) = names(lattice, a, b);
                return bad(Violation::Monotone { a, b });
            }
        }
    }
    for a in lattice.elements() {
        for b in lattice.elements() {
            let (m, j) = (lattice.meet(a, b), lattice.join(a, b));
            let lhs = values[a].as_ratio() - values[m].as_ratio();
            let rhs = values[j].as_ratio() - values[b].as_ratio();
            if lhs != rhs {
                let (a, b) = names(lattice, a, b);
                return bad(Violation::Modular { a, b });
            }
        }
    }
    Ok(Verdict::Ok)
}

/// Checks the flavored measure axioms: bounds `0^o`/`1^o`, monotonicity, and
/// both halves of flavored additivity for every pair.
pub fn check_gamma(lattice: &FinDistLattice, values: &[GammaValue]) -> Result<Verdict, MeasureError> {
    arity(lattice, values)?;
    let bad = |v| Ok(Verdict::Violation(v));
    if values[lattice.bottom()] != GammaValue::bottom() {
        return bad(Violation::Bottom(values[lattice.bottom()].to_string()));
    }
    if values[lattice.top()] != GammaValue::top() {
        return bad(Violation::Top(values[lattice.top()].to_string()));
    }
    for a in lattice.elements() {
        for b in lattice.elements() {
            if lattice.leq(a, b) && values[a] > values[b] {
                let (a, b) = names(lattice, a, b);
                return bad(Violation::Monotone { a, b });
            }
        }
    }
    for a in lattice.elements() {
        for b in lattice.elements() {
            if let Some(v) = additivity_at(lattice, values, a, b) {
                return bad(v);
            }
        }
    }
    Ok(Verdict::Ok)
}

/// The two flavored additivity inequalities at `(a, b)`, assuming monotone
/// values. Returns the failed half, if any.
pub fn additivity_at(
    lattice: &FinDistLattice,
    values: &[GammaValue],
    a: usize,
    b: usize,
) -> Option<Violation> {
    let (m, j) = (lattice.meet(a, b), lattice.join(a, b));
    let (va, vb, vm, vj) = (&values[a], &values[b], &values[m], &values[j]);
    let left_miss = va.miss(vm).expect("monotone: mu(a^b) <= mu(a)");
    let right_mip = vj.mip(vb).expect("monotone: mu(b) <= mu(avb)");
    if left_miss > right_mip {
        let (a, b) = names(lattice, a, b);
        return Some(Violation::MissBelowMip { a, b });
    }
    let left_mip = va.mip(vm).expect("monotone");
    let right_miss = vj.miss(vb).expect("monotone");
    if left_mip < right_miss {
        let (a, b) = names(lattice, a, b);
        return Some(Violation::MipAboveMiss { a, b });
    }
    None
}

/// A `[0,1]`-valued finitely additive probability measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalMeasure {
    lattice: Arc<FinDistLattice>,
    values: Vec<UnitRational>,
}

impl ClassicalMeasure {
    pub fn new(lattice: Arc<FinDistLattice>, values: Vec<UnitRational>) -> Result<Self, MeasureError> {
        match check_classical(&lattice, &values)? {
            Verdict::Ok => Ok(Self { lattice, values }),
            Verdict::Violation(v) => Err(MeasureError::Invalid(v)),
        }
    }

    pub fn lattice(&self) -> &Arc<FinDistLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[UnitRational] {
        &self.values
    }

    pub fn value(&self, a: usize) -> &UnitRational {
        &self.values[a]
    }

    /// Pointwise order.
    pub fn leq(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(x, y)| x <= y)
    }
}

/// A flavored finitely additive probability measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaMeasure {
    lattice: Arc<FinDistLattice>,
    values: Vec<GammaValue>,
}

impl GammaMeasure {
    pub fn new(lattice: Arc<FinDistLattice>, values: Vec<GammaValue>) -> Result<Self, MeasureError> {
        match check_gamma(&lattice, &values)? {
            Verdict::Ok => Ok(Self { lattice, values }),
            Verdict::Violation(v) => Err(MeasureError::Invalid(v)),
        }
    }

    /// A value table that skips validation; for negative controls.
    pub fn unchecked(lattice: Arc<FinDistLattice>, values: Vec<GammaValue>) -> Result<Self, MeasureError> {
        if values.len() != lattice.len() {
            return Err(MeasureError::Arity {
                got: values.len(),
                expected: lattice.len(),
            });
        }
        Ok(Self { lattice, values })
    }

    pub fn from_named(
        lattice: Arc<FinDistLattice>,
        named: &BTreeMap<String, String>,
    ) -> Result<Self, MeasureError> {
        let values = named_values(&lattice, named)?;
        Self::new(lattice, values)
    }

    pub fn lattice(&self) -> &Arc<FinDistLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[GammaValue] {
        &self.values
    }

    pub fn value(&self, a: usize) -> &GammaValue {
        &self.values[a]
    }

    pub fn verdict(&self) -> Verdict {
        check_gamma(&self.lattice, &self.values).unwrap_or(Verdict::Violation(Violation::Top(
            "degenerate lattice".into(),
        )))
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(x, y)| x <= y)
    }

    pub fn to_named(&self) -> BTreeMap<String, String> {
        self.lattice
            .elements()
            .map(|a| (self.lattice.label(a).to_string(), self.values[a].to_string()))
            .collect()
    }
}

fn named_values(
    lattice: &FinDistLattice,
    named: &BTreeMap<String, String>,
) -> Result<Vec<GammaValue>, MeasureError> {
    for k in named.keys() {
        lattice.element(k)?;
    }
    lattice
        .labels()
        .iter()
        .map(|l| {
            let text = named.get(l).ok_or_else(|| MeasureError::MissingValue(l.clone()))?;
            Ok(text.parse::<GammaValue>()?)
        })
        .collect()
}

/// Serialized measure: a lattice reference (path or inline lattice) and
/// per-element values in the flavored textual format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureFile {
    pub lattice: serde_json::Value,
    pub values: BTreeMap<String, String>,
}

/// Collapse flavors pointwise.
pub fn lift_gamma(mu: &GammaMeasure) -> Result<ClassicalMeasure, MeasureError> {
    ClassicalMeasure::new(mu.lattice.clone(), mu.values.iter().map(gamma).collect())
}

/// Embed a classical measure with achieved values.
pub fn lift_iota(m: &ClassicalMeasure) -> Result<GammaMeasure, MeasureError> {
    GammaMeasure::new(m.lattice.clone(), m.values.iter().map(iota).collect())
}

/// `mu . h`, a measure on the source of `h`.
pub fn pushforward(h: &LatticeHom, mu: &GammaMeasure) -> Result<GammaMeasure, MeasureError> {
    if !Arc::ptr_eq(h.target(), &mu.lattice) && **h.target() != *mu.lattice {
        return Err(MeasureError::LatticeMismatch);
    }
    if let Some(why) = h.violation() {
        return Err(MeasureError::InvalidHom(why));
    }
    let values = h.map().iter().map(|&b| mu.values[b].clone()).collect();
    GammaMeasure::new(h.source().clone(), values)
}

/// `m(a) = sum of w(j)` over join-irreducibles `j <= a`; `weights` follow
/// `join_irreducible_ids` order.
pub fn from_weights(
    lattice: Arc<FinDistLattice>,
    weights: &[UnitRational],
) -> Result<ClassicalMeasure, MeasureError> {
    let ids = lattice.join_irreducible_ids();
    if weights.len() != ids.len() {
        return Err(MeasureError::BadWeights(format!(
            "{} weights for {} join-irreducibles",
            weights.len(),
            ids.len()
        )));
    }
    let total: BigRational = weights.iter().map(|w| w.as_ratio().clone()).sum();
    if !total.is_one() {
        return Err(MeasureError::BadWeights(format!("weights sum to {total}")));
    }
    let values = lattice
        .elements()
        .map(|a| {
            let s: BigRational = ids
                .iter()
                .zip(weights)
                .filter(|(&j, _)| lattice.leq(j, a))
                .map(|(_, w)| w.as_ratio().clone())
                .sum();
            UnitRational::from_ratio(s)
        })
        .collect::<Result<Vec<_>, _>>()?;
    ClassicalMeasure::new(lattice, values)
}

/// Random weights on the join-irreducibles with denominator `den`.
pub fn random_weights<R: Rng>(lattice: &FinDistLattice, den: u64, rng: &mut R) -> Vec<UnitRational> {
    let k = lattice.join_irreducible_ids().len();
    let mut counts = vec![0u64; k];
    for _ in 0..den {
        counts[rng.gen_range(0..k)] += 1;
    }
    counts
        .into_iter()
        .map(|c| UnitRational::new(c, den).expect("c <= den"))
        .collect()
}

/// Random classical measure from grid weights.
pub fn random_classical<R: Rng>(
    lattice: Arc<FinDistLattice>,
    den: u64,
    rng: &mut R,
) -> Result<ClassicalMeasure, MeasureError> {
    let w = random_weights(&lattice, den, rng);
    from_weights(lattice, &w)
}

/// Lowers randomly chosen non-extremal achieved values `q^o` to `q^-`,
/// keeping each change only if the result is still a measure.
pub fn perturb<R: Rng>(mu: &GammaMeasure, rng: &mut R) -> GammaMeasure {
    let l = &mu.lattice;
    let mut candidates: Vec<usize> = l
        .elements()
        .filter(|&a| a != l.bottom() && a != l.top() && mu.values[a].is_circ() && !mu.values[a].value().is_zero())
        .collect();
    candidates.shuffle(rng);
    let mut values = mu.values.clone();
    for a in candidates {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let old = values[a].clone();
        values[a] = GammaValue::minus(old.collapse()).expect("positive value");
        if !check_gamma(l, &values).map(|v| v.is_ok()).unwrap_or(false) {
            values[a] = old;
        }
    }
    GammaMeasure {
        lattice: l.clone(),
        values,
    }
}

/// Random flavored measure: lift of a grid-weighted classical measure,
/// optionally perturbed.
pub fn random_gamma<R: Rng>(
    lattice: Arc<FinDistLattice>,
    den: u64,
    perturbed: bool,
    rng: &mut R,
) -> Result<GammaMeasure, MeasureError> {
    let mu = lift_iota(&random_classical(lattice, den, rng)?)?;
    Ok(if perturbed { perturb(&mu, rng) } else { mu })
}

/// A finitely supported flavored mass function on a finite carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsFunction {
    labels: Vec<String>,
    values: Vec<GammaValue>,
}

impl FsFunction {
    pub fn new(labels: Vec<String>, values: Vec<GammaValue>) -> Result<Self, MeasureError> {
        if labels.len() != values.len() {
            return Err(MeasureError::Arity {
                got: values.len(),
                expected: labels.len(),
            });
        }
        let f = Self { labels, values };
        let all = FixedBitSet::with_capacity(f.len());
        let total = f
            .try_sum(&{
                let mut s = all;
                s.insert_range(..);
                s
            })
            .map_err(|e| MeasureError::BadMass(e.to_string()))?;
        if total != GammaValue::top() {
            return Err(MeasureError::BadMass(format!("total is {total}")));
        }
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[GammaValue] {
        &self.values
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&x| self.values[x] != GammaValue::bottom())
    }

    fn try_sum(&self, subset: &FixedBitSet) -> Result<GammaValue, GammaError> {
        self.support()
            .filter(|&x| subset.contains(x))
            .try_fold(GammaValue::bottom(), |acc, x| acc.plus(&self.values[x]))
    }

    /// Iterated plus over `subset` intersected with the support, in carrier order.
    pub fn integrate(&self, subset: &FixedBitSet) -> GammaValue {
        self.try_sum(subset)
            .expect("partial sums of a total-1 family are defined")
    }

    /// Iterated plus in an explicit order of carrier elements.
    pub fn integrate_in_order(&self, order: &[usize]) -> GammaValue {
        order
            .iter()
            .filter(|&&x| self.values[x] != GammaValue::bottom())
            .try_fold(GammaValue::bottom(), |acc, &x| acc.plus(&self.values[x]))
            .expect("partial sums of a total-1 family are defined")
    }

    /// The induced measure on the powerset of the carrier.
    pub fn powerset_measure(&self) -> Result<GammaMeasure, MeasureError> {
        let labels: Vec<String> = self.labels.clone();
        let pairs: Vec<(usize, usize)> = Vec::new();
        let p = FinPoset::from_indices(labels, &pairs)?;
        let lattice = Arc::new(downset_lattice(&p));
        let values = lattice
            .elements()
            .map(|a| self.integrate(&powerset_members(&lattice, &self.labels, a)))
            .collect();
        GammaMeasure::new(lattice, values)
    }
}

/// `int_M f`.
pub fn fs_integrate(f: &FsFunction, subset: &FixedBitSet) -> GammaValue {
    f.integrate(subset)
}

// Recovers the carrier subset from a down-set label `{x,y}` of an antichain.
fn powerset_members(lattice: &FinDistLattice, carrier: &[String], a: usize) -> FixedBitSet {
    let label = lattice.label(a);
    let inner = &label[1..label.len() - 1];
    let mut s = FixedBitSet::with_capacity(carrier.len());
    if !inner.is_empty() {
        for name in inner.split(',') {
            let i = carrier.iter().position(|c| c == name).expect("label from carrier");
            s.insert(i);
        }
    }
    s
}

/// Uniform mass `1/|X|` on a carrier, as a convenience generator.
pub fn uniform_fs(labels: Vec<String>) -> Result<FsFunction, MeasureError> {
    let n = labels.len() as u64;
    if n == 0 {
        return Err(MeasureError::BadMass("empty carrier".into()));
    }
    let v = GammaValue::c(1, n);
    FsFunction::new(labels, vec![v; n as usize])
}
