//! Propositional logic of probability thresholds over a finite distributive
//! lattice: atoms `P[>=p](a)` and `P[<q](a)`, their measure semantics, the
//! axiom schemes L1-L6, family-relative entailment, and the passage between
//! measures and threshold filters.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::gamma::{GammaError, GammaValue, Grid, UnitRational};
use crate::lattice::FinDistLattice;
use crate::measure::{additivity_at, check_gamma, random_gamma, GammaMeasure, MeasureError, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlogicError {
    #[error("formula mentions element {0}, which the lattice lacks")]
    LatticeMismatch(usize),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown lattice element `{0}`")]
    UnknownElement(String),
    #[error("threshold {value} is not on the grid I_{den}")]
    OffGrid { value: UnitRational, den: u64 },
    #[error("filter condition fails: {0}")]
    Filter(String),
    #[error("filters live on different lattices or grids")]
    Mismatch,
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Geq,
    Lt,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PAtom {
    pub polarity: Polarity,
    pub threshold: UnitRational,
    pub subject: usize,
}

impl PAtom {
    pub fn geq(threshold: UnitRational, subject: usize) -> Self {
        Self {
            polarity: Polarity::Geq,
            threshold,
            subject,
        }
    }

    pub fn lt(threshold: UnitRational, subject: usize) -> Self {
        Self {
            polarity: Polarity::Lt,
            threshold,
            subject,
        }
    }

    /// `mu |= P[>=p](a)` iff `mu(a) >= p^o`; `mu |= P[<q](a)` iff `mu(a) < q^o`.
    pub fn holds(&self, mu: &GammaMeasure) -> bool {
        let v = mu.value(self.subject);
        let t = GammaValue::circ(self.threshold.clone());
        match self.polarity {
            Polarity::Geq => *v >= t,
            Polarity::Lt => *v < t,
        }
    }

    pub fn display<'a>(&'a self, d: &'a FinDistLattice) -> impl fmt::Display + 'a {
        AtomDisplay { atom: self, d }
    }
}

struct AtomDisplay<'a> {
    atom: &'a PAtom,
    d: &'a FinDistLattice,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.atom.polarity {
            Polarity::Geq => ">=",
            Polarity::Lt => "<",
        };
        write!(f, "P[{op}{}]({})", self.atom.threshold, self.d.label(self.atom.subject))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PFormula {
    True,
    False,
    Atom(PAtom),
    And(Box<PFormula>, Box<PFormula>),
    Or(Box<PFormula>, Box<PFormula>),
}

impl PFormula {
    pub fn atom(a: PAtom) -> Self {
        PFormula::Atom(a)
    }

    pub fn and(a: PFormula, b: PFormula) -> Self {
        PFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PFormula, b: PFormula) -> Self {
        PFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn atoms(&self) -> Vec<&PAtom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a PAtom>) {
        match self {
            PFormula::Atom(a) => out.push(a),
            PFormula::And(x, y) | PFormula::Or(x, y) => {
                x.collect_atoms(out);
                y.collect_atoms(out);
            }
            _ => {}
        }
    }

    fn eval(&self, mu: &GammaMeasure) -> bool {
        match self {
            PFormula::True => true,
            PFormula::False => false,
            PFormula::Atom(a) => a.holds(mu),
            PFormula::And(x, y) => x.eval(mu) && y.eval(mu),
            PFormula::Or(x, y) => x.eval(mu) || y.eval(mu),
        }
    }

    pub fn display<'a>(&'a self, d: &'a FinDistLattice) -> impl fmt::Display + 'a {
        PDisplay { f: self, d }
    }
}

struct PDisplay<'a> {
    f: &'a PFormula,
    d: &'a FinDistLattice,
}

impl PDisplay<'_> {
    fn write(&self, f: &PFormula, need: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = match f {
            PFormula::Or(..) => 1,
            PFormula::And(..) => 2,
            _ => 3,
        };
        if prec < need {
            write!(out, "(")?;
        }
        match f {
            PFormula::True => write!(out, "true")?,
            PFormula::False => write!(out, "false")?,
            PFormula::Atom(a) => write!(out, "{}", a.display(self.d))?,
            PFormula::And(x, y) => {
                self.write(x, 2, out)?;
                write!(out, " & ")?;
                self.write(y, 3, out)?;
            }
            PFormula::Or(x, y) => {
                self.write(x, 1, out)?;
                write!(out, " | ")?;
                self.write(y, 2, out)?;
            }
        }
        if prec < need {
            write!(out, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for PDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.f, 0, out)
    }
}

struct PParser<'a> {
    s: &'a str,
    at: usize,
    d: &'a FinDistLattice,
}

impl PParser<'_> {
    fn skip_ws(&mut self) {
        while self.s[self.at..].starts_with(char::is_whitespace) {
            self.at += self.s[self.at..].chars().next().map_or(0, char::len_utf8);
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PlogicError> {
        Err(PlogicError::Parse {
            pos: self.at,
            msg: msg.into(),
        })
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.at..].starts_with(tok) {
            self.at += tok.len();
            true
        } else {
            false
        }
    }

    fn disjunction(&mut self) -> Result<PFormula, PlogicError> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            f = PFormula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<PFormula, PlogicError> {
        let mut f = self.primary()?;
        while self.eat("&") {
            f = PFormula::and(f, self.primary()?);
        }
        Ok(f)
    }

    fn primary(&mut self) -> Result<PFormula, PlogicError> {
        if self.eat("(") {
            let f = self.disjunction()?;
            if !self.eat(")") {
                return self.err("expected `)`");
            }
            return Ok(f);
        }
        if self.eat("true") {
            return Ok(PFormula::True);
        }
        if self.eat("false") {
            return Ok(PFormula::False);
        }
        if !self.eat("P[") {
            return self.err("expected `P[`, `(`, `true` or `false`");
        }
        let polarity = if self.eat(">=") {
            Polarity::Geq
        } else if self.eat("<") {
            Polarity::Lt
        } else {
            return self.err("expected `>=` or `<`");
        };
        self.skip_ws();
        let close = match self.s[self.at..].find(']') {
            Some(i) => self.at + i,
            None => return self.err("expected `]`"),
        };
        let threshold: UnitRational = self.s[self.at..close].trim().parse().map_err(|_| PlogicError::Parse {
            pos: self.at,
            msg: "bad threshold".into(),
        })?;
        self.at = close + 1;
        if !self.eat("(") {
            return self.err("expected `(` before the lattice element");
        }
        let start = self.at;
        let mut depth = 1;
        for (i, c) in self.s[start..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if depth == 0 {
                let name = self.s[start..start + i].trim();
                self.at = start + i + 1;
                let subject = self
                    .d
                    .element(name)
                    .map_err(|_| PlogicError::UnknownElement(name.to_string()))?;
                return Ok(PFormula::Atom(PAtom {
                    polarity,
                    threshold,
                    subject,
                }));
            }
        }
        self.err("unbalanced parentheses in the lattice element")
    }
}

/// Parses `P[>=1/2](a) & P[<1/3](b) | P[>=0](c)`; `&` binds tighter than `|`.
pub fn parse_pformula(text: &str, d: &FinDistLattice) -> Result<PFormula, PlogicError> {
    let mut p = PParser { s: text, at: 0, d };
    let f = p.disjunction()?;
    p.skip_ws();
    if p.at != text.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

fn check_subjects(f: &PFormula, d: &FinDistLattice) -> Result<(), PlogicError> {
    match f.atoms().into_iter().find(|a| a.subject >= d.len()) {
        Some(a) => Err(PlogicError::LatticeMismatch(a.subject)),
        None => Ok(()),
    }
}

pub fn p_satisfies(mu: &GammaMeasure, f: &PFormula) -> Result<bool, PlogicError> {
    check_subjects(f, mu.lattice())?;
    Ok(f.eval(mu))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [Axiom::L1, Axiom::L2, Axiom::L3, Axiom::L4, Axiom::L5, Axiom::L6];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Axiom {
    type Err = PlogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| PlogicError::Parse {
                pos: 0,
                msg: format!("unknown axiom `{s}`"),
            })
    }
}

/// `antecedent |= consequent`. A valid formula has antecedent `true`, an
/// inconsistent one has consequent `false`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub axiom: Axiom,
    pub antecedent: PFormula,
    pub consequent: PFormula,
}

impl Instance {
    pub fn holds(&self, mu: &GammaMeasure) -> bool {
        !self.antecedent.eval(mu) || self.consequent.eval(mu)
    }

    pub fn display<'a>(&'a self, d: &'a FinDistLattice) -> String {
        format!("{}: {} |= {}", self.axiom, self.antecedent.display(d), self.consequent.display(d))
    }
}

fn geq(p: &UnitRational, a: usize) -> PFormula {
    PFormula::Atom(PAtom::geq(p.clone(), a))
}

/// Every instance of `axiom` with thresholds on `grid`.
pub fn axiom_instances(axiom: Axiom, d: &FinDistLattice, grid: &Grid) -> Vec<Instance> {
    let pts: Vec<UnitRational> = grid.points().collect();
    let n = grid.denominator();
    let mk = |antecedent, consequent| Instance {
        axiom,
        antecedent,
        consequent,
    };
    let mut out = Vec::new();
    match axiom {
        Axiom::L1 => {
            for a in d.elements() {
                for (i, p) in pts.iter().enumerate() {
                    for q in &pts[i..] {
                        out.push(mk(geq(q, a), geq(p, a)));
                    }
                }
            }
        }
        Axiom::L2 => {
            for p in pts.iter().skip(1) {
                out.push(mk(geq(p, d.bottom()), PFormula::False));
            }
            out.push(mk(PFormula::True, geq(&pts[0], d.bottom())));
            for q in &pts {
                out.push(mk(PFormula::True, geq(q, d.top())));
            }
        }
        Axiom::L3 => {
            for a in d.elements() {
                for b in d.elements().filter(|&b| d.leq(a, b)) {
                    for q in &pts {
                        out.push(mk(geq(q, a), geq(q, b)));
                    }
                }
            }
        }
        Axiom::L4 | Axiom::L5 => {
            for a in d.elements() {
                for b in d.elements() {
                    let (j, m) = (d.join(a, b), d.meet(a, b));
                    for p in 0..=n {
                        for q in 0..=n {
                            for r in 0..=n {
                                let s = (p + q).checked_sub(r).filter(|&s| s <= n);
                                let Some(s) = s else { continue };
                                let (p, q, r, s) = (&pts[p as usize], &pts[q as usize], &pts[r as usize], &pts[s as usize]);
                                out.push(if axiom == Axiom::L4 {
                                    mk(PFormula::and(geq(p, a), geq(q, b)), PFormula::or(geq(s, j), geq(r, m)))
                                } else {
                                    mk(PFormula::and(geq(s, j), geq(r, m)), PFormula::or(geq(p, a), geq(q, b)))
                                });
                            }
                        }
                    }
                }
            }
        }
        Axiom::L6 => {
            for a in d.elements() {
                for q in &pts {
                    let lt = PFormula::Atom(PAtom::lt(q.clone(), a));
                    out.push(mk(PFormula::and(lt.clone(), geq(q, a)), PFormula::False));
                    out.push(mk(PFormula::True, PFormula::or(lt, geq(q, a))));
                }
            }
        }
    }
    out
}

/// A failed axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SoundnessViolation {
    pub axiom: Axiom,
    pub instance: usize,
    pub measure: usize,
    pub text: String,
}

/// Checks every instance of `axiom` on `grid` against every measure of the
/// family. Violations come back sorted by instance, then measure.
pub fn check_soundness(
    axiom: Axiom,
    d: &FinDistLattice,
    family: &[GammaMeasure],
    grid: &Grid,
) -> Result<Vec<SoundnessViolation>, PlogicError> {
    if family.iter().any(|mu| **mu.lattice() != *d) {
        return Err(PlogicError::Mismatch);
    }
    let mut out = Vec::new();
    for (i, inst) in axiom_instances(axiom, d, grid).iter().enumerate() {
        for (k, mu) in family.iter().enumerate() {
            if !inst.holds(mu) {
                out.push(SoundnessViolation {
                    axiom,
                    instance: i,
                    measure: k,
                    text: inst.display(d),
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entailment {
    /// No member of the family is a countermodel; says nothing beyond it.
    HoldsOnFamily { family_size: usize },
    Countermodel { index: usize, measure: GammaMeasure },
}

impl Entailment {
    pub fn holds(&self) -> bool {
        matches!(self, Entailment::HoldsOnFamily { .. })
    }
}

/// `phi |= psi` relative to `family`. A reported countermodel has been
/// re-checked to be a measure satisfying `phi` and not `psi`.
pub fn entails(phi: &PFormula, psi: &PFormula, family: &[GammaMeasure]) -> Result<Entailment, PlogicError> {
    for (index, mu) in family.iter().enumerate() {
        if p_satisfies(mu, phi)? && !p_satisfies(mu, psi)? {
            let genuine = check_gamma(mu.lattice(), mu.values())? == Verdict::Ok;
            if genuine && phi.eval(mu) && !psi.eval(mu) {
                return Ok(Entailment::Countermodel {
                    index,
                    measure: mu.clone(),
                });
            }
        }
    }
    Ok(Entailment::HoldsOnFamily {
        family_size: family.len(),
    })
}

/// Least common denominator of the thresholds in `fs`, as a grid.
pub fn default_grid<'a>(fs: impl IntoIterator<Item = &'a PFormula>) -> Grid {
    let mut den = 1u64;
    for f in fs {
        for a in f.atoms() {
            let d = a.threshold.denom_u64().unwrap_or(1);
            den = num_integer::lcm(den, d);
        }
    }
    Grid::new(den).expect("positive")
}

// Elements ordered so every element comes after everything below it.
fn linear_extension(d: &FinDistLattice) -> Vec<usize> {
    let mut order: Vec<usize> = d.elements().collect();
    order.sort_by_key(|&a| (d.elements().filter(|&b| d.leq(b, a)).count(), a));
    order
}

/// All measures whose values are flavored grid values `k/n^o`, `k/n^-`.
pub fn exhaustive_measures(d: &Arc<FinDistLattice>, grid: &Grid) -> Vec<GammaMeasure> {
    if d.is_degenerate() {
        return Vec::new();
    }
    let order = linear_extension(d);
    let values = grid.flavored();
    let mut assigned: Vec<Option<GammaValue>> = vec![None; d.len()];
    assigned[d.bottom()] = Some(GammaValue::bottom());
    assigned[d.top()] = Some(GammaValue::top());
    let free: Vec<usize> = order.into_iter().filter(|&a| a != d.bottom() && a != d.top()).collect();
    let mut out = Vec::new();
    extend(d, &free, 0, &values, &mut assigned, &mut out);
    out
}

fn consistent(d: &FinDistLattice, assigned: &[Option<GammaValue>], x: usize) -> bool {
    let vx = assigned[x].as_ref().expect("just assigned");
    for y in d.elements() {
        let Some(vy) = &assigned[y] else { continue };
        if (d.leq(y, x) && vy > vx) || (d.leq(x, y) && vx > vy) {
            return false;
        }
    }
    let vals: Vec<GammaValue> = assigned
        .iter()
        .map(|v| v.clone().unwrap_or_else(GammaValue::bottom))
        .collect();
    for y in d.elements() {
        for (a, b) in [(x, y), (y, x)] {
            let (m, j) = (d.meet(a, b), d.join(a, b));
            if [a, b, m, j].iter().all(|&e| assigned[e].is_some()) && additivity_at(d, &vals, a, b).is_some() {
                return false;
            }
        }
    }
    true
}

fn extend(
    d: &Arc<FinDistLattice>,
    free: &[usize],
    at: usize,
    values: &[GammaValue],
    assigned: &mut Vec<Option<GammaValue>>,
    out: &mut Vec<GammaMeasure>,
) {
    if at == free.len() {
        let vals: Vec<GammaValue> = assigned.iter().map(|v| v.clone().expect("all assigned")).collect();
        if let Ok(mu) = GammaMeasure::new(d.clone(), vals) {
            out.push(mu);
        }
        return;
    }
    let x = free[at];
    for v in values {
        assigned[x] = Some(v.clone());
        if consistent(d, assigned, x) {
            extend(d, free, at + 1, values, assigned, out);
        }
    }
    assigned[x] = None;
}

/// Exhaustive grid measures plus `random` perturbed lifts of grid-weighted
/// classical measures with denominators drawn from `dens`.
pub fn measure_family<R: Rng>(
    d: &Arc<FinDistLattice>,
    grid: &Grid,
    random: usize,
    dens: &[u64],
    rng: &mut R,
) -> Result<Vec<GammaMeasure>, PlogicError> {
    let mut out = exhaustive_measures(d, grid);
    for _ in 0..random {
        let den = dens[rng.gen_range(0..dens.len())];
        out.push(random_gamma(d.clone(), den, true, rng)?);
    }
    Ok(out)
}

/// A set of atoms `P[>=k/n](a)` over a lattice and a threshold grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomFilter {
    lattice: Arc<FinDistLattice>,
    grid: Grid,
    members: BTreeSet<(usize, u64)>,
}

impl AtomFilter {
    pub fn new(lattice: Arc<FinDistLattice>, grid: Grid, members: BTreeSet<(usize, u64)>) -> Self {
        Self { lattice, grid, members }
    }

    /// Only the atoms every filter must contain.
    pub fn minimal(lattice: Arc<FinDistLattice>, grid: Grid) -> Self {
        let mut members: BTreeSet<(usize, u64)> = lattice.elements().map(|a| (a, 0)).collect();
        members.extend((0..=grid.denominator()).map(|k| (lattice.top(), k)));
        Self { lattice, grid, members }
    }

    pub fn lattice(&self) -> &Arc<FinDistLattice> {
        &self.lattice
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn members(&self) -> &BTreeSet<(usize, u64)> {
        &self.members
    }

    pub fn contains(&self, a: usize, k: u64) -> bool {
        self.members.contains(&(a, k))
    }

    pub fn contains_atom(&self, atom: &PAtom) -> bool {
        atom.polarity == Polarity::Geq
            && self
                .grid
                .index_of(&atom.threshold)
                .is_some_and(|k| self.contains(atom.subject, k))
    }

    pub fn atom(&self, a: usize, k: u64) -> PAtom {
        PAtom::geq(self.grid.point(k), a)
    }

    /// Largest `k` with `P[>=k/n](a)` in the filter.
    pub fn top_index(&self, a: usize) -> u64 {
        (0..=self.grid.denominator())
            .rev()
            .find(|&k| self.contains(a, k))
            .unwrap_or(0)
    }

    /// Filter invariants and the L3-L5 closure conditions on the grid.
    pub fn validate(&self) -> Result<(), PlogicError> {
        let d = &self.lattice;
        let n = self.grid.denominator();
        let fail = |msg: String| Err(PlogicError::Filter(msg));
        let name = |a: usize| d.label(a).to_string();
        for &(a, k) in &self.members {
            if a >= d.len() || k > n {
                return fail(format!("atom ({a}, {k}) is outside the lattice or grid"));
            }
        }
        for a in d.elements() {
            if !self.contains(a, 0) {
                return fail(format!("missing P[>=0]({})", name(a)));
            }
            for k in 1..=n {
                if self.contains(a, k) && !self.contains(a, k - 1) {
                    return fail(format!("not closed under L1 at {}", name(a)));
                }
            }
        }
        for k in 0..=n {
            if !self.contains(d.top(), k) {
                return fail(format!("missing P[>={}]({})", self.grid.point(k), name(d.top())));
            }
        }
        if self.top_index(d.bottom()) > 0 {
            return fail(format!("contains P[>=p]({}) with p > 0", name(d.bottom())));
        }
        for a in d.elements() {
            for b in d.elements().filter(|&b| d.leq(a, b)) {
                if self.top_index(a) > self.top_index(b) {
                    return fail(format!("not closed under L3 at {} <= {}", name(a), name(b)));
                }
            }
        }
        for a in d.elements() {
            for b in d.elements() {
                let (j, m) = (d.join(a, b), d.meet(a, b));
                for p in 0..=n {
                    for q in 0..=n {
                        for r in 0..=n {
                            let Some(s) = (p + q).checked_sub(r).filter(|&s| s <= n) else { continue };
                            if self.contains(a, p) && self.contains(b, q) && !self.contains(j, s) && !self.contains(m, r) {
                                return fail(format!("L4 fails at ({}, {}) with p={p}, q={q}, r={r}", name(a), name(b)));
                            }
                            if self.contains(j, s) && self.contains(m, r) && !self.contains(a, p) && !self.contains(b, q) {
                                return fail(format!("L5 fails at ({}, {}) with p={p}, q={q}, r={r}", name(a), name(b)));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// An atom in `self` but not in `other`, found by scanning each element's
    /// largest threshold.
    pub fn separating_atom(&self, other: &AtomFilter) -> Option<PAtom> {
        if self.lattice != other.lattice || self.grid != other.grid {
            return None;
        }
        self.lattice.elements().find_map(|a| {
            let k = self.top_index(a);
            (!other.contains(a, k)).then(|| self.atom(a, k))
        })
    }
}

/// `{P[>=q](a) | q on the grid, mu(a) >= q^o}`.
pub fn filter_from_measure(mu: &GammaMeasure, grid: &Grid) -> AtomFilter {
    let d = mu.lattice().clone();
    let mut members = BTreeSet::new();
    for a in d.elements() {
        for k in 0..=grid.denominator() {
            if *mu.value(a) >= GammaValue::circ(grid.point(k)) {
                members.insert((a, k));
            }
        }
    }
    AtomFilter::new(d, *grid, members)
}

/// `a -> join{q^o | P[>=q](a) in F}` over the filter's grid, after validating
/// the filter. The result must pass the measure check.
pub fn measure_from_filter(f: &AtomFilter) -> Result<GammaMeasure, PlogicError> {
    f.validate()?;
    let values = f
        .lattice
        .elements()
        .map(|a| GammaValue::circ(f.grid.point(f.top_index(a))))
        .collect();
    Ok(GammaMeasure::new(f.lattice.clone(), values)?)
}

/// Decodes a filter taken on `I_2n` as a measure with flavored values on
/// `I_n`: an even top threshold `2k` gives `k/n^o`, an odd one `2k-1` gives
/// `k/n^-`, matching the join over every rational threshold.
pub fn measure_from_filter_on(f: &AtomFilter, carrier: &Grid) -> Result<GammaMeasure, PlogicError> {
    f.validate()?;
    let n = carrier.denominator();
    if f.grid.denominator() != 2 * n {
        return Err(PlogicError::Mismatch);
    }
    let values = f
        .lattice
        .elements()
        .map(|a| {
            let j = f.top_index(a);
            if j.is_multiple_of(2) {
                GammaValue::circ(carrier.point(j / 2))
            } else {
                GammaValue::minus(carrier.point(j.div_ceil(2))).expect("positive")
            }
        })
        .collect();
    Ok(GammaMeasure::new(f.lattice.clone(), values)?)
}
