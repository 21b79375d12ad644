//! Finite relational structures and their JSON form.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::syntax::Signature;
use super::FoError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Relation {
    pub(crate) arity: usize,
    // tuple (t0, .., tk-1) lives at bit t0 + t1*n + ... + tk-1*n^(k-1)
    pub(crate) bits: FixedBitSet,
}

/// A finite structure over a relational signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinStructure {
    signature: Signature,
    domain: Vec<String>,
    relations: BTreeMap<String, Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub signature: BTreeMap<String, usize>,
    pub domain: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<String>>>,
}

fn code(tuple: &[usize], n: usize) -> usize {
    tuple.iter().rev().fold(0, |acc, &t| acc * n + t)
}

impl FinStructure {
    /// Builds a structure from tuples of element indices.
    pub fn new(
        signature: Signature,
        domain: Vec<String>,
        tuples: &BTreeMap<String, Vec<Vec<usize>>>,
    ) -> Result<Self, FoError> {
        let n = domain.len();
        let mut seen = HashMap::new();
        for (i, d) in domain.iter().enumerate() {
            if seen.insert(d.as_str(), i).is_some() {
                return Err(FoError::Structure(format!("element `{d}` listed twice")));
            }
        }
        for name in tuples.keys() {
            if signature.arity(name).is_none() {
                return Err(FoError::UnknownSymbol(name.clone()));
            }
        }
        let mut relations = BTreeMap::new();
        for (name, arity) in signature.symbols() {
            let size = n
                .checked_pow(arity as u32)
                .filter(|&s| s <= 1 << 26)
                .ok_or_else(|| FoError::Structure(format!("relation `{name}` is too large to tabulate")))?;
            let mut bits = FixedBitSet::with_capacity(size);
            for t in tuples.get(name).map(Vec::as_slice).unwrap_or(&[]) {
                if t.len() != arity {
                    return Err(FoError::Arity {
                        symbol: name.to_string(),
                        expected: arity,
                        got: t.len(),
                    });
                }
                if let Some(&bad) = t.iter().find(|&&x| x >= n) {
                    return Err(FoError::Structure(format!("tuple entry {bad} outside the domain")));
                }
                bits.insert(code(t, n));
            }
            relations.insert(name.to_string(), Relation { arity, bits });
        }
        Ok(Self {
            signature,
            domain,
            relations,
        })
    }

    pub fn from_file(file: &StructureFile) -> Result<Self, FoError> {
        let signature = Signature::from_map(&file.signature)?;
        let index: HashMap<&str, usize> = file.domain.iter().enumerate().map(|(i, d)| (d.as_str(), i)).collect();
        let mut tuples = BTreeMap::new();
        for (name, ts) in &file.relations {
            let mut out = Vec::with_capacity(ts.len());
            for t in ts {
                let idx = t
                    .iter()
                    .map(|e| {
                        index
                            .get(e.as_str())
                            .copied()
                            .ok_or_else(|| FoError::Structure(format!("`{e}` is not in the domain")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(idx);
            }
            tuples.insert(name.clone(), out);
        }
        Self::new(signature, file.domain.clone(), &tuples)
    }

    pub fn from_json(text: &str) -> Result<Self, FoError> {
        let file: StructureFile = serde_json::from_str(text).map_err(|e| FoError::Json(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> StructureFile {
        let relations = self
            .relations
            .keys()
            .map(|name| {
                let ts = self
                    .tuples(name)
                    .into_iter()
                    .map(|t| t.into_iter().map(|x| self.domain[x].clone()).collect())
                    .collect();
                (name.clone(), ts)
            })
            .collect();
        StructureFile {
            signature: self.signature.to_map(),
            domain: self.domain.clone(),
            relations,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data serializes")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> bool {
        self.relations
            .get(name)
            .is_some_and(|r| r.bits.contains(code(tuple, self.domain.len())))
    }

    pub(crate) fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    /// Tuples of a relation in lexicographic order.
    pub fn tuples(&self, name: &str) -> Vec<Vec<usize>> {
        let n = self.domain.len();
        let Some(r) = self.relations.get(name) else {
            return Vec::new();
        };
        let mut out: Vec<Vec<usize>> = r
            .bits
            .ones()
            .map(|mut c| {
                (0..r.arity)
                    .map(|_| {
                        let t = c % n;
                        c /= n;
                        t
                    })
                    .collect()
            })
            .collect();
        out.sort();
        out
    }

    pub fn tuple_count(&self, name: &str) -> usize {
        self.relations.get(name).map_or(0, |r| r.bits.count_ones(..))
    }
}
