//! Assignment-type tables and semantic fragments.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;

use super::eval::{assignment_count, for_each_assignment, Compiled};
use super::structure::FinStructure;
use super::syntax::{Formula, Signature};
use super::FoError;
use crate::gamma::{GammaValue, UnitRational};
use crate::lattice::{FinDistLattice, LatticeHom};
use crate::measure::{FsFunction, GammaMeasure};

/// One type: the assignments sharing a satisfaction pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeClass {
    pub pattern: Vec<bool>,
    pub count: BigInt,
    pub mass: GammaValue,
}

impl TypeClass {
    pub fn pattern_string(&self) -> String {
        self.pattern.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Partition of `A^n` by satisfaction pattern over a formula list, with
/// mass `count / |A|^n` per class. Classes are sorted by pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeTable {
    pub n: usize,
    pub formulas: Vec<Formula>,
    pub total: BigInt,
    pub classes: Vec<TypeClass>,
}

pub fn type_table(a: &FinStructure, formulas: &[Formula], n: usize) -> Result<TypeTable, FoError> {
    let compiled = formulas
        .iter()
        .map(|f| Compiled::new(a, f, n))
        .collect::<Result<Vec<_>, _>>()?;
    if a.size() == 0 {
        return Err(FoError::EmptyDomain);
    }
    let total = assignment_count(a.size(), n)?;
    let mut counts: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for_each_assignment(a.size(), n, 0, total, |asg| {
        let pattern = compiled.iter().map(|c| c.holds(a.size(), asg)).collect();
        *counts.entry(pattern).or_insert(0) += 1;
    });
    let total = BigInt::from(total);
    let classes = counts
        .into_iter()
        .map(|(pattern, c)| {
            let count = BigInt::from(c);
            let mass = GammaValue::circ(UnitRational::from_counts(&count, &total).expect("count <= total"));
            TypeClass { pattern, count, mass }
        })
        .collect();
    Ok(TypeTable {
        n,
        formulas: formulas.to_vec(),
        total,
        classes,
    })
}

impl TypeTable {
    /// The mass function over classes, labelled by pattern.
    pub fn fs_function(&self) -> FsFunction {
        FsFunction::new(
            self.classes.iter().map(TypeClass::pattern_string).collect(),
            self.classes.iter().map(|c| c.mass.clone()).collect(),
        )
        .expect("class masses sum to 1")
    }

    /// Classes where formula `i` holds.
    pub fn extension(&self, i: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.classes.len());
        for (k, c) in self.classes.iter().enumerate() {
            if c.pattern[i] {
                s.insert(k);
            }
        }
        s
    }

    /// `int_{[f_i]} f_n^A`.
    pub fn integrate(&self, i: usize) -> GammaValue {
        self.fs_function().integrate(&self.extension(i))
    }
}

/// A type cell: a class of one structure of the family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub structure: usize,
    pub pattern: Vec<bool>,
}

/// Formulas interpreted as sets of occupied type cells of a structure family;
/// the lattice is the closure of these sets under union and intersection,
/// together with the empty set and the set of all cells.
#[derive(Debug, Clone)]
pub struct SemanticFragment {
    n: usize,
    formulas: Vec<Formula>,
    tables: Vec<TypeTable>,
    cells: Vec<Cell>,
    sets: Vec<FixedBitSet>,
    lattice: Arc<FinDistLattice>,
    formula_elements: Vec<usize>,
}

pub fn semantic_fragment(
    formulas: &[Formula],
    structures: &[FinStructure],
    n: usize,
) -> Result<SemanticFragment, FoError> {
    if structures.is_empty() {
        return Err(FoError::EmptyFamily);
    }
    let tables = structures
        .iter()
        .map(|a| type_table(a, formulas, n))
        .collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<Cell> = tables
        .iter()
        .enumerate()
        .flat_map(|(s, t)| {
            t.classes.iter().map(move |c| Cell {
                structure: s,
                pattern: c.pattern.clone(),
            })
        })
        .collect();
    let m = cells.len();
    let gens: Vec<FixedBitSet> = (0..formulas.len())
        .map(|i| {
            let mut s = FixedBitSet::with_capacity(m);
            s.extend(cells.iter().enumerate().filter(|(_, c)| c.pattern[i]).map(|(k, _)| k));
            s
        })
        .collect();
    let mut empty = FixedBitSet::with_capacity(m);
    empty.clear();
    let mut full = FixedBitSet::with_capacity(m);
    full.insert_range(..);
    let sets = close_under_union_intersection(empty, full, &gens);
    let sig = structures[0].signature();
    let labels = label_sets(&sets, &gens, formulas, sig);
    let lattice = Arc::new(FinDistLattice::from_set_family(labels, &sets)?);
    let pos: HashMap<&FixedBitSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let formula_elements = gens.iter().map(|g| pos[g]).collect();
    Ok(SemanticFragment {
        n,
        formulas: formulas.to_vec(),
        tables,
        cells,
        sets,
        lattice,
        formula_elements,
    })
}

// Sorted by size, then by members, so element numbering is canonical.
fn close_under_union_intersection(empty: FixedBitSet, full: FixedBitSet, gens: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut all: Vec<FixedBitSet> = Vec::new();
    let mut push = |s: FixedBitSet, all: &mut Vec<FixedBitSet>| {
        if seen.insert(s.ones().collect()) {
            all.push(s);
            true
        } else {
            false
        }
    };
    for s in std::iter::once(empty).chain(std::iter::once(full)).chain(gens.iter().cloned()) {
        push(s, &mut all);
    }
    let mut frontier = 0;
    while frontier < all.len() {
        let a = all[frontier].clone();
        for b in 0..=frontier {
            let mut i = a.clone();
            i.intersect_with(&all[b]);
            let mut u = a.clone();
            u.union_with(&all[b]);
            push(i, &mut all);
            push(u, &mut all);
        }
        frontier += 1;
    }
    all.sort_by(|x, y| {
        x.count_ones(..)
            .cmp(&y.count_ones(..))
            .then_with(|| x.ones().collect::<Vec<_>>().cmp(&y.ones().collect::<Vec<_>>()))
    });
    all
}

fn label_sets(sets: &[FixedBitSet], gens: &[FixedBitSet], formulas: &[Formula], sig: &Signature) -> Vec<String> {
    let m = sets.len();
    let mut used = BTreeSet::new();
    sets.iter()
        .enumerate()
        .map(|(i, s)| {
            let label = if i == 0 {
                "false".to_string()
            } else if i == m - 1 {
                "true".to_string()
            } else if let Some(k) = gens.iter().position(|g| g == s) {
                formulas[k].display(sig).to_string()
            } else {
                format!("e{i}")
            };
            if used.insert(label.clone()) {
                label
            } else {
                format!("e{i}")
            }
        })
        .collect()
}

impl SemanticFragment {
    pub fn lattice(&self) -> &Arc<FinDistLattice> {
        &self.lattice
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn tables(&self) -> &[TypeTable] {
        &self.tables
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Cell set of a lattice element.
    pub fn cell_set(&self, element: usize) -> &FixedBitSet {
        &self.sets[element]
    }

    /// Lattice element interpreting formula `i`.
    pub fn element_of(&self, i: usize) -> usize {
        self.formula_elements[i]
    }

    pub fn structure_count(&self) -> usize {
        self.tables.len()
    }

    /// `mu_n^A` on the fragment for structure `s` of the family, obtained by
    /// integrating its type masses. Validated as a flavored measure.
    pub fn measure(&self, s: usize) -> Result<GammaMeasure, FoError> {
        let table = &self.tables[s];
        let fs = table.fs_function();
        let local: Vec<usize> = self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.structure == s)
            .map(|(k, _)| k)
            .collect();
        let values = self
            .lattice
            .elements()
            .map(|e| {
                let mut sub = FixedBitSet::with_capacity(table.classes.len());
                for (j, &k) in local.iter().enumerate() {
                    if self.sets[e].contains(k) {
                        sub.insert(j);
                    }
                }
                fs.integrate(&sub)
            })
            .collect();
        Ok(GammaMeasure::new(self.lattice.clone(), values)?)
    }
}

/// The inclusion of a coarse fragment into a finer one over the same
/// structures and variable count, when every coarse formula also occurs in
/// the fine list.
pub fn fragment_inclusion(coarse: &SemanticFragment, fine: &SemanticFragment) -> Result<LatticeHom, FoError> {
    if coarse.n != fine.n || coarse.tables.len() != fine.tables.len() {
        return Err(FoError::FragmentMismatch("different structure family or variable count".into()));
    }
    let positions = coarse
        .formulas
        .iter()
        .map(|f| {
            fine.formulas
                .iter()
                .position(|g| g == f)
                .ok_or_else(|| FoError::FragmentMismatch("coarse formula missing from the fine list".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let coarse_index: HashMap<&Cell, usize> = coarse.cells.iter().enumerate().map(|(k, c)| (c, k)).collect();
    // fine cell -> coarse cell it projects onto
    let projection: Vec<usize> = fine
        .cells
        .iter()
        .map(|c| {
            let p = Cell {
                structure: c.structure,
                pattern: positions.iter().map(|&i| c.pattern[i]).collect(),
            };
            coarse_index
                .get(&p)
                .copied()
                .ok_or_else(|| FoError::FragmentMismatch("type cells do not match".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coarse.tables.iter().zip(&fine.tables).any(|(a, b)| a.total != b.total) {
        return Err(FoError::FragmentMismatch("different structure family".into()));
    }
    let fine_pos: HashMap<Vec<usize>, usize> = fine.sets.iter().enumerate().map(|(i, s)| (s.ones().collect(), i)).collect();
    let map = coarse
        .sets
        .iter()
        .map(|s| {
            let image: Vec<usize> = (0..fine.cells.len()).filter(|&k| s.contains(projection[k])).collect();
            fine_pos
                .get(&image)
                .copied()
                .ok_or_else(|| FoError::FragmentMismatch("preimage is not a fine element".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LatticeHom::new_checked(coarse.lattice.clone(), fine.lattice.clone(), map)?)
}
