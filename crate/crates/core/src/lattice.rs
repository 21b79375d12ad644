//! Finite bounded distributive lattices and their finite duals.
//!
//! A lattice is stored with explicit meet and join tables. Direct table input
//! is checked for the lattice axioms and for distributivity up to a size bound;
//! lattices of down-sets and of set families closed under union and
//! intersection are distributive by construction and skip the check.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest direct-table input checked exhaustively for distributivity.
pub const DEFAULT_CHECK_BOUND: usize = 64;

/// Largest number of down-sets `downset_lattice` will materialize.
pub const MAX_DOWNSETS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("order is not antisymmetric: {0} <= {1} <= {0}")]
    NotAntisymmetric(String, String),
    #[error("{0} and {1} have no {2}")]
    NotLattice(String, String, &'static str),
    #[error("distributivity fails at ({0}, {1}, {2})")]
    NotDistributive(String, String, String),
    #[error("lattice has {0} elements, above the direct-input bound {1}")]
    TooLarge(usize, usize),
    #[error("empty element list")]
    Empty,
    #[error("degenerate lattice (0 = 1)")]
    Degenerate,
    #[error("set family is not closed under {0}")]
    NotClosed(&'static str),
    #[error("map has {got} entries, expected {expected}")]
    MapArity { got: usize, expected: usize },
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("malformed lattice file: {0}")]
    Format(String),
}

/// Finite partial order on labelled elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPoset {
    labels: Vec<String>,
    // up[i] = { j | i <= j }
    up: Vec<FixedBitSet>,
}

impl FinPoset {
    /// Builds the reflexive-transitive closure of `pairs` and rejects cycles.
    pub fn new<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)]) -> Result<Self, LatticeError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let index = label_index(&labels)?;
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let ia = lookup(&index, a.as_ref())?;
            let ib = lookup(&index, b.as_ref())?;
            idx_pairs.push((ia, ib));
        }
        Self::from_indices(labels, &idx_pairs)
    }

    pub fn from_indices(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        for &(a, b) in pairs {
            up[a].insert(b);
        }
        // Warshall closure
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for i in 0..n {
            for j in up[i].ones() {
                if i != j && up[j].contains(i) {
                    return Err(LatticeError::NotAntisymmetric(
                        labels[i].clone(),
                        labels[j].clone(),
                    ));
                }
            }
        }
        Ok(Self { labels, up })
    }

    pub fn antichain(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        Self::from_indices(labels, &[]).expect("antichain")
    }

    pub fn chain(n: usize) -> Self {
        let n = n.max(1);
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_indices(labels, &pairs).expect("chain")
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

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// Strict order pairs `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].ones() {
                if a != b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_downset(&self, s: &FixedBitSet) -> bool {
        s.ones()
            .all(|x| (0..self.len()).all(|y| !self.leq(y, x) || s.contains(y)))
    }

    /// An order isomorphism onto `other`, found by backtracking.
    pub fn isomorphism_to(&self, other: &FinPoset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let sig = |p: &FinPoset, i: usize| {
            let ups = p.up[i].count_ones(..);
            let downs = (0..p.len()).filter(|&j| p.leq(j, i)).count();
            (ups, downs)
        };
        let mine: Vec<_> = (0..n).map(|i| sig(self, i)).collect();
        let theirs: Vec<_> = (0..n).map(|i| sig(other, i)).collect();
        let mut a: Vec<_> = mine.clone();
        let mut b: Vec<_> = theirs.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            i: usize,
            p: &FinPoset,
            q: &FinPoset,
            mine: &[(usize, usize)],
            theirs: &[(usize, usize)],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if i == p.len() {
                return true;
            }
            for c in 0..q.len() {
                if used[c] || mine[i] != theirs[c] {
                    continue;
                }
                let ok = (0..i).all(|k| {
                    p.leq(k, i) == q.leq(map[k], c) && p.leq(i, k) == q.leq(c, map[k])
                });
                if ok {
                    map[i] = c;
                    used[c] = true;
                    if go(i + 1, p, q, mine, theirs, map, used) {
                        return true;
                    }
                    used[c] = false;
                }
            }
            false
        }
        go(0, self, other, &mine, &theirs, &mut map, &mut used).then_some(map)
    }

    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let spec: OrderSpec =
            serde_json::from_str(text).map_err(|e| LatticeError::Format(e.to_string()))?;
        let pairs: Vec<(String, String)> = spec.leq.into_iter().map(|[a, b]| (a, b)).collect();
        Self::new(&spec.elements, &pairs)
    }

    pub fn to_spec(&self) -> OrderSpec {
        OrderSpec {
            elements: self.labels.clone(),
            leq: self
                .strict_pairs()
                .into_iter()
                .map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
        }
    }
}

/// Serialized poset or lattice: element names plus generating order pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[String; 2]>,
}

fn label_index(labels: &[String]) -> Result<HashMap<String, usize>, LatticeError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(LatticeError::DuplicateElement(l.clone()));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, usize>, name: &str) -> Result<usize, LatticeError> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| LatticeError::UnknownElement(name.to_string()))
}

/// Finite bounded distributive lattice with element ids `0..len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinDistLattice {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<FixedBitSet>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl FinDistLattice {
    /// Lattice from an order, checked for existence of meets and joins and for
    /// distributivity. Rejects inputs above `DEFAULT_CHECK_BOUND` elements.
    pub fn from_order(poset: &FinPoset) -> Result<Self, LatticeError> {
        Self::from_order_bounded(poset, DEFAULT_CHECK_BOUND)
    }

    pub fn from_order_bounded(poset: &FinPoset, bound: usize) -> Result<Self, LatticeError> {
        let n = poset.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if n > bound {
            return Err(LatticeError::TooLarge(n, bound));
        }
        let labels = poset.labels.clone();
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let lower: Vec<usize> = (0..n)
                    .filter(|&c| poset.leq(c, a) && poset.leq(c, b))
                    .collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&c| lower.iter().all(|&d| poset.leq(d, c)))
                    .ok_or_else(|| {
                        LatticeError::NotLattice(labels[a].clone(), labels[b].clone(), "meet")
                    })?;
                let upper: Vec<usize> = poset.up[a].intersection(&poset.up[b]).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&c| upper.iter().all(|&d| poset.leq(c, d)))
                    .ok_or_else(|| {
                        LatticeError::NotLattice(labels[a].clone(), labels[b].clone(), "join")
                    })?;
                meet[a][b] = glb;
                meet[b][a] = glb;
                join[a][b] = lub;
                join[b][a] = lub;
            }
        }
        let bottom = (0..n).find(|&c| (0..n).all(|d| poset.leq(c, d))).ok_or_else(|| {
            LatticeError::NotLattice(labels[0].clone(), labels[0].clone(), "bottom")
        })?;
        let top = (0..n).find(|&c| (0..n).all(|d| poset.leq(d, c))).ok_or_else(|| {
            LatticeError::NotLattice(labels[0].clone(), labels[0].clone(), "top")
        })?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                        return Err(LatticeError::NotDistributive(
                            labels[a].clone(),
                            labels[b].clone(),
                            labels[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(Self {
            index: label_index(&labels)?,
            labels,
            up: poset.up.clone(),
            meet,
            join,
            bottom,
            top,
        })
    }

    /// Lattice of a family of subsets of a finite universe ordered by
    /// inclusion. The family must be closed under binary union and
    /// intersection.
    pub fn from_set_family(labels: Vec<String>, sets: &[FixedBitSet]) -> Result<Self, LatticeError> {
        let n = sets.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if labels.len() != n {
            return Err(LatticeError::MapArity {
                got: labels.len(),
                expected: n,
            });
        }
        let mut pos: HashMap<&FixedBitSet, usize> = HashMap::with_capacity(n);
        for (i, s) in sets.iter().enumerate() {
            if pos.insert(s, i).is_some() {
                return Err(LatticeError::DuplicateElement(labels[i].clone()));
            }
        }
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in a..n {
                let mut i = sets[a].clone();
                i.intersect_with(&sets[b]);
                let mut u = sets[a].clone();
                u.union_with(&sets[b]);
                let mi = *pos.get(&i).ok_or(LatticeError::NotClosed("intersection"))?;
                let ju = *pos.get(&u).ok_or(LatticeError::NotClosed("union"))?;
                meet[a][b] = mi;
                meet[b][a] = mi;
                join[a][b] = ju;
                join[b][a] = ju;
                if sets[a].is_subset(&sets[b]) {
                    up[a].insert(b);
                }
                if sets[b].is_subset(&sets[a]) {
                    up[b].insert(a);
                }
            }
        }
        let bottom = (0..n).find(|&c| up[c].count_ones(..) == n).expect("closed family has a least set");
        let top = (0..n)
            .find(|&c| (0..n).all(|d| up[d].contains(c)))
            .expect("closed family has a greatest set");
        Ok(Self {
            index: label_index(&labels)?,
            labels,
            up,
            meet,
            join,
            bottom,
            top,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        Self::from_order(&FinPoset::from_json(text)?)
    }

    /// Serialized form listing the cover relation.
    pub fn to_spec(&self) -> OrderSpec {
        OrderSpec {
            elements: self.labels.clone(),
            leq: self
                .covers()
                .into_iter()
                .map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
        }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let n = n.max(1);
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        let p = FinPoset::from_indices(labels, &pairs).expect("chain");
        Self::from_order(&p).expect("chains are distributive lattices")
    }

    /// The Boolean lattice on `k` atoms.
    pub fn boolean(k: usize) -> Self {
        downset_lattice(&FinPoset::antichain(k))
    }

    /// `{0, a, b, 1}` with `a`, `b` incomparable.
    pub fn diamond() -> Self {
        let p = FinPoset::new(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
            .expect("diamond order");
        Self::from_order(&p).expect("diamond is distributive")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn is_degenerate(&self) -> bool {
        self.bottom == self.top
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn element(&self, name: &str) -> Result<usize, LatticeError> {
        lookup(&self.index, name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// Cover pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.up[a].ones() {
                if a == b {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn as_poset(&self) -> FinPoset {
        FinPoset {
            labels: self.labels.clone(),
            up: self.up.clone(),
        }
    }

    /// `j` is join-irreducible iff it is not the join of the elements strictly below it.
    pub fn is_join_irreducible(&self, j: usize) -> bool {
        if j == self.bottom {
            return false;
        }
        let below_join = (0..self.len())
            .filter(|&c| c != j && self.leq(c, j))
            .fold(self.bottom, |acc, c| self.join(acc, c));
        below_join != j
    }

    /// Ids of the join-irreducible elements, ascending.
    pub fn join_irreducible_ids(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.is_join_irreducible(j)).collect()
    }

    /// The induced subposet of join-irreducibles.
    pub fn join_irreducibles(&self) -> FinPoset {
        let ids = self.join_irreducible_ids();
        let labels = ids.iter().map(|&j| self.labels[j].clone()).collect();
        let mut pairs = Vec::new();
        for (x, &a) in ids.iter().enumerate() {
            for (y, &b) in ids.iter().enumerate() {
                if x != y && self.leq(a, b) {
                    pairs.push((x, y));
                }
            }
        }
        FinPoset::from_indices(labels, &pairs).expect("subposet of a partial order")
    }

    /// For each element `a`, the set of join-irreducibles (by position in
    /// `join_irreducible_ids`) below it.
    pub fn birkhoff_map(&self) -> Vec<FixedBitSet> {
        let ids = self.join_irreducible_ids();
        (0..self.len())
            .map(|a| {
                let mut s = FixedBitSet::with_capacity(ids.len());
                for (k, &j) in ids.iter().enumerate() {
                    if self.leq(j, a) {
                        s.insert(k);
                    }
                }
                s
            })
            .collect()
    }

    /// Prime filters, one principal filter `up(j)` per join-irreducible `j`.
    pub fn prime_filters(&self) -> Result<Vec<PrimeFilter>, LatticeError> {
        if self.is_degenerate() {
            return Err(LatticeError::Degenerate);
        }
        Ok(self
            .join_irreducible_ids()
            .into_iter()
            .map(|j| PrimeFilter {
                generator: j,
                members: self.up[j].clone(),
            })
            .collect())
    }

    /// `s` is a proper, non-empty, up-closed, meet-closed and prime subset.
    pub fn is_prime_filter(&self, s: &FixedBitSet) -> bool {
        if !s.contains(self.top) || s.contains(self.bottom) {
            return false;
        }
        for a in s.ones() {
            if !self.up[a].is_subset(s) {
                return false;
            }
            for b in s.ones() {
                if !s.contains(self.meet(a, b)) {
                    return false;
                }
            }
        }
        for a in 0..self.len() {
            for b in a..self.len() {
                if s.contains(self.join(a, b)) && !s.contains(a) && !s.contains(b) {
                    return false;
                }
            }
        }
        true
    }

    /// Isomorphism test via the posets of join-irreducibles.
    pub fn is_isomorphic(&self, other: &FinDistLattice) -> bool {
        self.len() == other.len()
            && self
                .join_irreducibles()
                .isomorphism_to(&other.join_irreducibles())
                .is_some()
    }

    /// Smallest sublattice containing `gens`, `0` and `1`, with its inclusion.
    pub fn sublattice_closure(self: &Arc<Self>, gens: &[usize]) -> (Arc<FinDistLattice>, LatticeHom) {
        let mut members: BTreeSet<usize> = [self.bottom, self.top].into_iter().collect();
        members.extend(gens.iter().copied());
        let mut queue: VecDeque<usize> = members.iter().copied().collect();
        while let Some(a) = queue.pop_front() {
            let current: Vec<usize> = members.iter().copied().collect();
            for b in current {
                for c in [self.meet(a, b), self.join(a, b)] {
                    if members.insert(c) {
                        queue.push_back(c);
                    }
                }
            }
        }
        let ids: Vec<usize> = members.into_iter().collect();
        let local: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let m = ids.len();
        let labels: Vec<String> = ids.iter().map(|&a| self.labels[a].clone()).collect();
        let mut up = vec![FixedBitSet::with_capacity(m); m];
        let mut meet = vec![vec![0; m]; m];
        let mut join = vec![vec![0; m]; m];
        for (x, &a) in ids.iter().enumerate() {
            for (y, &b) in ids.iter().enumerate() {
                if self.leq(a, b) {
                    up[x].insert(y);
                }
                meet[x][y] = local[&self.meet(a, b)];
                join[x][y] = local[&self.join(a, b)];
            }
        }
        let sub = Arc::new(FinDistLattice {
            index: label_index(&labels).expect("labels of a lattice are unique"),
            labels,
            up,
            meet,
            join,
            bottom: local[&self.bottom],
            top: local[&self.top],
        });
        let hom = LatticeHom {
            source: sub.clone(),
            target: self.clone(),
            map: ids,
        };
        (sub, hom)
    }
}

impl fmt::Display for FinDistLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "elements: {}", self.labels.join(", "))?;
        writeln!(f, "bottom: {}  top: {}", self.labels[self.bottom], self.labels[self.top])?;
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{} < {}", self.labels[a], self.labels[b]))
            .collect();
        write!(f, "covers: {}", covers.join(", "))
    }
}

/// Lattice of down-closed subsets of `p`, ordered by inclusion.
///
/// Elements are labelled `{x,y,...}` and listed by size, then by membership
/// bits. Panics when `p` has more than `MAX_DOWNSETS` down-sets.
pub fn downset_lattice(p: &FinPoset) -> FinDistLattice {
    let sets = downsets(p);
    let labels = sets
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.ones().map(|i| p.labels[i].as_str()).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    FinDistLattice::from_set_family(labels, &sets).expect("down-sets are closed under union and intersection")
}

/// Down-sets of `p` in the element order of `downset_lattice(p)`: by size,
/// then by members.
pub fn downsets(p: &FinPoset) -> Vec<FixedBitSet> {
    let n = p.len();
    // down-sets are built by adding elements in a linear extension order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (0..n).filter(|&j| p.leq(j, i)).count());
    let mut sets: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n)];
    let mut seen: std::collections::HashSet<FixedBitSet> = sets.iter().cloned().collect();
    let mut frontier = sets.clone();
    while let Some(s) = frontier.pop() {
        for &x in &order {
            if s.contains(x) {
                continue;
            }
            let preds_in = (0..n).all(|y| y == x || !p.leq(y, x) || s.contains(y));
            if preds_in {
                let mut t = s.clone();
                t.insert(x);
                if seen.insert(t.clone()) {
                    assert!(seen.len() <= MAX_DOWNSETS, "too many down-sets");
                    sets.push(t.clone());
                    frontier.push(t);
                }
            }
        }
    }
    sets.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().collect::<Vec<_>>().cmp(&b.ones().collect::<Vec<_>>()))
    });
    sets
}

/// The homomorphism `Down(p) -> Down(q)`, `U -> f^-1(U)`, of a monotone map
/// `f: q -> p`.
pub fn dual_hom(
    p: &FinPoset,
    q: &FinPoset,
    f: &[usize],
    down_p: Arc<FinDistLattice>,
    down_q: Arc<FinDistLattice>,
) -> Result<LatticeHom, LatticeError> {
    if f.len() != q.len() {
        return Err(LatticeError::MapArity {
            got: f.len(),
            expected: q.len(),
        });
    }
    for x in 0..q.len() {
        for y in 0..q.len() {
            if q.leq(x, y) && !p.leq(f[x], f[y]) {
                return Err(LatticeError::InvalidHom("map is not monotone".into()));
            }
        }
    }
    let sp = downsets(p);
    let sq = downsets(q);
    if sp.len() != down_p.len() || sq.len() != down_q.len() {
        return Err(LatticeError::InvalidHom("lattices are not the down-set lattices".into()));
    }
    let index: HashMap<Vec<usize>, usize> = sq.iter().enumerate().map(|(i, s)| (s.ones().collect(), i)).collect();
    let map = sp
        .iter()
        .map(|u| {
            let pre: Vec<usize> = (0..q.len()).filter(|&x| u.contains(f[x])).collect();
            index[&pre]
        })
        .collect();
    LatticeHom::new_checked(down_p, down_q, map)
}

/// Random order on `k` points: each pair `i < j` is related with probability
/// `density`, then closed transitively.
pub fn random_poset<R: Rng>(k: usize, density: f64, rng: &mut R) -> FinPoset {
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    let labels = (0..k).map(|i| format!("p{i}")).collect();
    FinPoset::from_indices(labels, &pairs).expect("pairs respect index order")
}

/// A random poset whose down-set lattice has between 2 and `max` elements.
pub fn random_lattice<R: Rng>(max: usize, rng: &mut R) -> (FinPoset, FinDistLattice) {
    assert!(max >= 2, "a non-degenerate lattice has at least two elements");
    loop {
        let k = rng.gen_range(1..=max.ilog2().max(1) as usize + 1);
        let p = random_poset(k, rng.gen_range(0.2..0.9), rng);
        if downsets(&p).len() <= max {
            let l = downset_lattice(&p);
            return (p, l);
        }
    }
}

/// A random monotone map `q -> p`: rejection sampling over arbitrary maps,
/// falling back to a constant map.
pub fn random_monotone_map<R: Rng>(q: &FinPoset, p: &FinPoset, rng: &mut R) -> Vec<usize> {
    for _ in 0..200 {
        let f: Vec<usize> = (0..q.len()).map(|_| rng.gen_range(0..p.len())).collect();
        let monotone = (0..q.len()).all(|x| (0..q.len()).all(|y| !q.leq(x, y) || p.leq(f[x], f[y])));
        if monotone {
            return f;
        }
    }
    vec![rng.gen_range(0..p.len()); q.len()]
}

/// A prime filter of a finite distributive lattice, the principal filter of
/// a join-irreducible element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFilter {
    generator: usize,
    members: FixedBitSet,
}

impl PrimeFilter {
    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }
}

/// Bounded lattice homomorphism candidate.
#[derive(Debug, Clone)]
pub struct LatticeHom {
    source: Arc<FinDistLattice>,
    target: Arc<FinDistLattice>,
    map: Vec<usize>,
}

impl LatticeHom {
    /// Unchecked: use `check` (or `new_checked`) to validate.
    pub fn new(
        source: Arc<FinDistLattice>,
        target: Arc<FinDistLattice>,
        map: Vec<usize>,
    ) -> Result<Self, LatticeError> {
        if map.len() != source.len() {
            return Err(LatticeError::MapArity {
                got: map.len(),
                expected: source.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&b| b >= target.len()) {
            return Err(LatticeError::InvalidHom(format!("image id {bad} out of range")));
        }
        Ok(Self { source, target, map })
    }

    pub fn new_checked(
        source: Arc<FinDistLattice>,
        target: Arc<FinDistLattice>,
        map: Vec<usize>,
    ) -> Result<Self, LatticeError> {
        let h = Self::new(source, target, map)?;
        if let Some(why) = h.violation() {
            return Err(LatticeError::InvalidHom(why));
        }
        Ok(h)
    }

    pub fn identity(l: Arc<FinDistLattice>) -> Self {
        let map = l.elements().collect();
        Self {
            source: l.clone(),
            target: l,
            map,
        }
    }

    pub fn source(&self) -> &Arc<FinDistLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinDistLattice> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// True iff bounds, meets and joins are preserved.
    pub fn check(&self) -> bool {
        self.violation().is_none()
    }

    pub fn violation(&self) -> Option<String> {
        let (s, t, h) = (&self.source, &self.target, &self.map);
        if h[s.bottom()] != t.bottom() {
            return Some(format!("0 maps to {}", t.label(h[s.bottom()])));
        }
        if h[s.top()] != t.top() {
            return Some(format!("1 maps to {}", t.label(h[s.top()])));
        }
        for a in s.elements() {
            for b in s.elements() {
                if h[s.meet(a, b)] != t.meet(h[a], h[b]) {
                    return Some(format!("meet of {} and {}", s.label(a), s.label(b)));
                }
                if h[s.join(a, b)] != t.join(h[a], h[b]) {
                    return Some(format!("join of {} and {}", s.label(a), s.label(b)));
                }
            }
        }
        None
    }

    /// `next . self`.
    pub fn then(&self, next: &LatticeHom) -> Result<LatticeHom, LatticeError> {
        if !Arc::ptr_eq(&self.target, &next.source) && *self.target != *next.source {
            return Err(LatticeError::InvalidHom("composite of mismatched homs".into()));
        }
        Ok(LatticeHom {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&a| next.map[a]).collect(),
        })
    }

    /// Preimage of a subset of the target.
    pub fn preimage(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.source.len());
        for a in self.source.elements() {
            if s.contains(self.map[a]) {
                out.insert(a);
            }
        }
        out
    }
}

/// Check a hom given as a standalone value.
pub fn check_hom(h: &LatticeHom) -> bool {
    h.check()
}
