//! Partitions of a finite atom set, the finite stand-in for sub-σ-algebras.
//!
//! A partition is always held in canonical form: blocks are sorted by their
//! smallest member and members are sorted ascending. Structural equality and
//! hashing therefore coincide with equality of the generated σ-algebras.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest atom count accepted by [`enumerate_partitions`] (Bell(10) = 115975).
pub const MAX_ENUMERATION_ATOMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    atom_count: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from arbitrary block lists, validating disjointness
    /// and coverage, then canonicalizing.
    pub fn new(atom_count: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if atom_count == 0 {
            return Err(Error::EmptySpace);
        }
        let mut seen = vec![false; atom_count];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &atom in block {
                if atom >= atom_count {
                    return Err(Error::InvalidPartition(format!(
                        "atom {atom} outside 0..{atom_count}"
                    )));
                }
                if seen[atom] {
                    return Err(Error::InvalidPartition(format!(
                        "atom {atom} appears in more than one block"
                    )));
                }
                seen[atom] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPartition(format!(
                "atom {missing} is not covered"
            )));
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { atom_count, blocks })
    }

    /// Builds a partition from a block label per atom. Labels are arbitrary
    /// keys; atoms sharing a label share a block.
    pub fn from_labels<L: Eq + std::hash::Hash>(labels: &[L]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut ids: HashMap<&L, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        // Scanning atoms in order assigns block ids by smallest member, so
        // the result is already canonical.
        for (atom, label) in labels.iter().enumerate() {
            let next = blocks.len();
            let id = *ids.entry(label).or_insert(next);
            if id == next {
                blocks.push(Vec::new());
            }
            blocks[id].push(atom);
        }
        Ok(Partition {
            atom_count: labels.len(),
            blocks,
        })
    }

    /// The partition `Ω = Ω`, i.e. the σ-algebra `{∅, Ω}`.
    pub fn trivial(atom_count: usize) -> Result<Self> {
        if atom_count == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(Partition {
            atom_count,
            blocks: vec![(0..atom_count).collect()],
        })
    }

    /// Every atom in its own block (the full σ-algebra of the space).
    pub fn discrete(atom_count: usize) -> Result<Self> {
        if atom_count == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(Partition {
            atom_count,
            blocks: (0..atom_count).map(|a| vec![a]).collect(),
        })
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of every atom.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.atom_count];
        for (id, block) in self.blocks.iter().enumerate() {
            for &atom in block {
                labels[atom] = id;
            }
        }
        labels
    }

    fn check_same_atoms(&self, other: &Partition) -> Result<()> {
        if self.atom_count != other.atom_count {
            return Err(Error::AtomCountMismatch {
                expected: self.atom_count,
                found: other.atom_count,
            });
        }
        Ok(())
    }

    /// Coarsest common refinement (the σ-algebra generated by both).
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_same_atoms(other)?;
        let pairs: Vec<(usize, usize)> = self.labels().into_iter().zip(other.labels()).collect();
        Partition::from_labels(&pairs)
    }

    /// True iff every block of `self` lies inside a block of `coarse`.
    pub fn refines(&self, coarse: &Partition) -> Result<bool> {
        self.check_same_atoms(coarse)?;
        let coarse_labels = coarse.labels();
        Ok(self.blocks.iter().all(|block| {
            let first = coarse_labels[block[0]];
            block.iter().all(|&a| coarse_labels[a] == first)
        }))
    }

    /// Restricts to the kept atoms (given in ascending order), renumbering
    /// them `0..kept.len()` and dropping blocks that become empty.
    pub fn restrict(&self, kept: &[usize]) -> Result<Partition> {
        let labels = self.labels();
        let restricted: Vec<usize> = kept
            .iter()
            .map(|&a| {
                labels.get(a).copied().ok_or_else(|| {
                    Error::InvalidPartition(format!("kept atom {a} outside partition"))
                })
            })
            .collect::<Result<_>>()?;
        Partition::from_labels(&restricted)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, atom) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{atom}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("]")
    }
}

pub fn trivial_partition(atom_count: usize) -> Result<Partition> {
    Partition::trivial(atom_count)
}

pub fn partition_join(p1: &Partition, p2: &Partition) -> Result<Partition> {
    p1.join(p2)
}

pub fn is_refinement(fine: &Partition, coarse: &Partition) -> Result<bool> {
    fine.refines(coarse)
}

/// All set partitions of `0..atom_count`, each exactly once, in
/// lexicographic order of their restricted growth strings.
pub fn enumerate_partitions(atom_count: usize) -> Result<Vec<Partition>> {
    if atom_count == 0 || atom_count > MAX_ENUMERATION_ATOMS {
        return Err(Error::OutOfRange {
            what: "atom_count",
            value: atom_count,
            min: 1,
            max: MAX_ENUMERATION_ATOMS,
        });
    }
    let n = atom_count;
    // growth[i] <= 1 + max(growth[..i]); prefix_max[i] = max(growth[..=i]).
    let mut growth = vec![0usize; n];
    let mut prefix_max = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        out.push(Partition::from_labels(&growth)?);
        // Rightmost position that can still be incremented.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            if growth[i] <= prefix_max[i - 1] {
                break;
            }
            i -= 1;
        }
        growth[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(growth[i]);
        for j in i + 1..n {
            growth[j] = 0;
            prefix_max[j] = prefix_max[j - 1];
        }
    }
}
