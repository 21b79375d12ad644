//! Brute-force evaluation over assignments and the Stone pairings.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::structure::FinStructure;
use super::syntax::Formula;
use super::FoError;
use crate::gamma::{iota, GammaValue, UnitRational};

enum Node<'a> {
    Const(bool),
    Rel(&'a fixedbitset::FixedBitSet, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Node<'a>>),
    And(Box<Node<'a>>, Box<Node<'a>>),
    Or(Box<Node<'a>>, Box<Node<'a>>),
    Implies(Box<Node<'a>>, Box<Node<'a>>),
    Exists(usize, Box<Node<'a>>),
    Forall(usize, Box<Node<'a>>),
}

/// A formula compiled against one structure. Closed subformulas are
/// evaluated once and replaced by constants.
pub struct Compiled<'a> {
    root: Node<'a>,
    n: usize,
    slots: usize,
}

fn compile_node<'a>(f: &Formula, a: &'a FinStructure, slots: usize) -> Result<Node<'a>, FoError> {
    let node = match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Rel(name, args) => {
            let r = a.relation(name).ok_or_else(|| FoError::UnknownSymbol(name.clone()))?;
            if r.arity != args.len() {
                return Err(FoError::Arity {
                    symbol: name.clone(),
                    expected: r.arity,
                    got: args.len(),
                });
            }
            Node::Rel(&r.bits, args.clone())
        }
        Formula::Eq(x, y) => Node::Eq(*x, *y),
        Formula::Not(g) => Node::Not(Box::new(compile_node(g, a, slots)?)),
        Formula::And(x, y) => Node::And(Box::new(compile_node(x, a, slots)?), Box::new(compile_node(y, a, slots)?)),
        Formula::Or(x, y) => Node::Or(Box::new(compile_node(x, a, slots)?), Box::new(compile_node(y, a, slots)?)),
        Formula::Implies(x, y) => {
            Node::Implies(Box::new(compile_node(x, a, slots)?), Box::new(compile_node(y, a, slots)?))
        }
        Formula::Exists(v, g) => Node::Exists(*v, Box::new(compile_node(g, a, slots)?)),
        Formula::Forall(v, g) => Node::Forall(*v, Box::new(compile_node(g, a, slots)?)),
    };
    if !matches!(node, Node::Const(_)) && f.is_closed() {
        let mut scratch = vec![0; slots];
        return Ok(Node::Const(eval(&node, a.size(), &mut scratch)));
    }
    Ok(node)
}

fn eval(node: &Node<'_>, size: usize, asg: &mut [usize]) -> bool {
    match node {
        Node::Const(b) => *b,
        Node::Rel(bits, args) => {
            let c = args.iter().rev().fold(0, |acc, &v| acc * size + asg[v]);
            bits.contains(c)
        }
        Node::Eq(x, y) => asg[*x] == asg[*y],
        Node::Not(g) => !eval(g, size, asg),
        Node::And(x, y) => eval(x, size, asg) && eval(y, size, asg),
        Node::Or(x, y) => eval(x, size, asg) || eval(y, size, asg),
        Node::Implies(x, y) => !eval(x, size, asg) || eval(y, size, asg),
        Node::Exists(v, g) => {
            let old = asg[*v];
            let mut hit = false;
            for d in 0..size {
                asg[*v] = d;
                if eval(g, size, asg) {
                    hit = true;
                    break;
                }
            }
            asg[*v] = old;
            hit
        }
        Node::Forall(v, g) => {
            let old = asg[*v];
            let mut all = true;
            for d in 0..size {
                asg[*v] = d;
                if !eval(g, size, asg) {
                    all = false;
                    break;
                }
            }
            asg[*v] = old;
            all
        }
    }
}

impl<'a> Compiled<'a> {
    /// Compiles `f` for evaluation on `a` with free variables among `v1..vn`.
    pub fn new(a: &'a FinStructure, f: &Formula, n: usize) -> Result<Self, FoError> {
        if a.size() == 0 {
            return Err(FoError::EmptyDomain);
        }
        if let Some(&v) = f.free_vars().iter().find(|&&v| v >= n) {
            return Err(FoError::UnboundVariable { var: v + 1, n });
        }
        let slots = f.slot_count().max(n);
        Ok(Self {
            root: compile_node(f, a, slots)?,
            n,
            slots,
        })
    }

    pub fn holds(&self, size: usize, assignment: &[usize]) -> bool {
        let mut asg = vec![0; self.slots];
        asg[..assignment.len()].copy_from_slice(assignment);
        eval(&self.root, size, &mut asg)
    }
}

/// Number of assignments `A^n`; fails past `u64`.
pub fn assignment_count(size: usize, n: usize) -> Result<u64, FoError> {
    (size as u64)
        .checked_pow(n as u32)
        .ok_or(FoError::TooManyAssignments { size, n })
}

/// Visits assignments with index in `start..end` (little-endian mixed radix).
pub(crate) fn for_each_assignment(size: usize, n: usize, start: u64, end: u64, mut f: impl FnMut(&[usize])) {
    if start >= end {
        return;
    }
    let mut asg = vec![0usize; n];
    let mut c = start;
    for slot in asg.iter_mut() {
        *slot = (c % size as u64) as usize;
        c /= size as u64;
    }
    for _ in start..end {
        f(&asg);
        for slot in asg.iter_mut() {
            *slot += 1;
            if *slot < size {
                break;
            }
            *slot = 0;
        }
    }
}

pub(crate) fn chunks(total: u64, workers: usize) -> Vec<(u64, u64)> {
    let parts = (workers.max(1) as u64 * 4).min(total.max(1));
    let step = total.div_ceil(parts);
    (0..parts)
        .map(|i| (i * step, ((i + 1) * step).min(total)))
        .filter(|(s, e)| s < e)
        .collect()
}

fn count_range(c: &Compiled<'_>, size: usize, start: u64, end: u64) -> u64 {
    let mut asg = vec![0; c.slots];
    let mut hits = 0;
    for_each_assignment(size, c.n, start, end, |head| {
        asg[..head.len()].copy_from_slice(head);
        if eval(&c.root, size, &mut asg) {
            hits += 1;
        }
    });
    hits
}

/// `|{a in A^n : A |= f(a)}|`.
pub fn count_satisfying(a: &FinStructure, f: &Formula, n: usize) -> Result<BigInt, FoError> {
    count_satisfying_with(a, f, n, 1)
}

/// As `count_satisfying`, splitting the assignment space over `workers`
/// threads. The result does not depend on `workers`.
pub fn count_satisfying_with(a: &FinStructure, f: &Formula, n: usize, workers: usize) -> Result<BigInt, FoError> {
    let c = Compiled::new(a, f, n)?;
    let total = assignment_count(a.size(), n)?;
    let size = a.size();
    if workers <= 1 {
        return Ok(BigInt::from(count_range(&c, size, 0, total)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| FoError::Workers(e.to_string()))?;
    let parts = chunks(total, workers);
    let counts: Vec<u64> = pool.install(|| {
        parts
            .par_iter()
            .map(|&(s, e)| count_range(&c, size, s, e))
            .collect()
    });
    Ok(BigInt::from(counts.into_iter().sum::<u64>()))
}

/// Probability that a uniformly random `n`-assignment satisfies `f`.
pub fn stone_pairing_classical(a: &FinStructure, f: &Formula, n: usize) -> Result<UnitRational, FoError> {
    stone_pairing_classical_with(a, f, n, 1)
}

pub fn stone_pairing_classical_with(
    a: &FinStructure,
    f: &Formula,
    n: usize,
    workers: usize,
) -> Result<UnitRational, FoError> {
    let count = count_satisfying_with(a, f, n, workers)?;
    let total = BigInt::from(a.size()).pow(n as u32);
    Ok(UnitRational::from_counts(&count, &total).expect("count never exceeds the total"))
}

/// The flavored pairing; always achieved.
pub fn stone_pairing_gamma(a: &FinStructure, f: &Formula, n: usize) -> Result<GammaValue, FoError> {
    Ok(iota(&stone_pairing_classical(a, f, n)?))
}

pub fn stone_pairing_gamma_with(a: &FinStructure, f: &Formula, n: usize, workers: usize) -> Result<GammaValue, FoError> {
    Ok(iota(&stone_pairing_classical_with(a, f, n, workers)?))
}
