//! Finite probability spaces, random elements, and conditional expectation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Tolerance on `Σ p = 1` for probability vectors held by the engine.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Atoms `0..atom_count` with their probability masses.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpace {
    probabilities: Vec<f64>,
}

fn validate_distribution(values: &[f64], what: &str) -> Result<()> {
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(Error::InvalidProbabilities(format!(
            "{what}[{i}] = {v} is not a nonnegative finite number"
        )));
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(Error::InvalidProbabilities(format!(
            "{what} sums to {total}, not 1"
        )));
    }
    Ok(())
}

impl SampleSpace {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::EmptySpace);
        }
        validate_distribution(&probabilities, "probabilities")?;
        Ok(SampleSpace { probabilities })
    }

    pub fn uniform(atom_count: usize) -> Result<Self> {
        if atom_count == 0 {
            return Err(Error::EmptySpace);
        }
        SampleSpace::new(vec![1.0 / atom_count as f64; atom_count])
    }

    pub fn atom_count(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, atom: usize) -> f64 {
        self.probabilities[atom]
    }

    /// Total mass of a set of atoms.
    pub fn mass(&self, atoms: &[usize]) -> f64 {
        atoms.iter().map(|&a| self.probabilities[a]).sum()
    }

    /// Atoms with positive probability, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.atom_count())
            .filter(|&a| self.probabilities[a] > 0.0)
            .collect()
    }

    /// The space restricted to its support, with the kept atom indices.
    ///
    /// Conditional quantities are defined almost everywhere, so null atoms
    /// carry no information (`0 · l = 0`). Every partition-dependent
    /// computation runs on the reduced space.
    pub fn drop_null_atoms(&self) -> (SampleSpace, Vec<usize>) {
        let kept = self.support();
        let space = SampleSpace {
            probabilities: kept.iter().map(|&a| self.probabilities[a]).collect(),
        };
        (space, kept)
    }
}

/// What a random element takes values in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    RealVector { dim: usize },
    Distribution { alphabet: usize },
}

impl ElementKind {
    pub fn width(self) -> usize {
        match self {
            ElementKind::RealVector { dim } => dim,
            ElementKind::Distribution { alphabet } => alphabet,
        }
    }
}

/// A map from atoms to values; values are stored as `f64` slices of the
/// kind's width.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomElement {
    kind: ElementKind,
    values: Vec<Vec<f64>>,
}

impl RandomElement {
    pub fn new(kind: ElementKind, values: Vec<Vec<f64>>) -> Result<Self> {
        let width = kind.width();
        if width == 0 {
            return Err(Error::InvalidElement("zero-width values".into()));
        }
        if values.is_empty() {
            return Err(Error::EmptySpace);
        }
        for (atom, v) in values.iter().enumerate() {
            if v.len() != width {
                return Err(Error::InvalidElement(format!(
                    "value at atom {atom} has width {}, expected {width}",
                    v.len()
                )));
            }
            match kind {
                ElementKind::RealVector { .. } => {
                    if v.iter().any(|c| !c.is_finite()) {
                        return Err(Error::InvalidElement(format!(
                            "non-finite value at atom {atom}"
                        )));
                    }
                }
                ElementKind::Distribution { .. } => {
                    validate_distribution(v, &format!("value at atom {atom}"))
                        .map_err(|e| Error::InvalidElement(e.to_string()))?;
                }
            }
        }
        Ok(RandomElement { kind, values })
    }

    /// Real-vector element from per-atom vectors.
    pub fn real(values: Vec<Vec<f64>>) -> Result<Self> {
        let dim = values.first().map_or(0, Vec::len);
        RandomElement::new(ElementKind::RealVector { dim }, values)
    }

    /// Scalar real element.
    pub fn scalar(values: &[f64]) -> Result<Self> {
        RandomElement::new(
            ElementKind::RealVector { dim: 1 },
            values.iter().map(|&v| vec![v]).collect(),
        )
    }

    /// Distribution-valued element (a random measure such as `P_{Y|Z}`).
    pub fn distributions(values: Vec<Vec<f64>>) -> Result<Self> {
        let alphabet = values.first().map_or(0, Vec::len);
        RandomElement::new(ElementKind::Distribution { alphabet }, values)
    }

    /// A discrete element realized as the one-hot distribution `δ_x` of its
    /// symbol.
    pub fn symbols(alphabet: usize, symbols: &[usize]) -> Result<Self> {
        let values = symbols
            .iter()
            .map(|&s| {
                if s >= alphabet {
                    return Err(Error::InvalidElement(format!(
                        "symbol {s} outside alphabet of size {alphabet}"
                    )));
                }
                Ok(one_hot(alphabet, s))
            })
            .collect::<Result<_>>()?;
        RandomElement::new(ElementKind::Distribution { alphabet }, values)
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn atom_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> &[f64] {
        &self.values[atom]
    }

    pub fn restrict(&self, kept: &[usize]) -> RandomElement {
        RandomElement {
            kind: self.kind,
            values: kept.iter().map(|&a| self.values[a].clone()).collect(),
        }
    }

    pub(crate) fn check_space(&self, space: &SampleSpace) -> Result<()> {
        if self.atom_count() != space.atom_count() {
            return Err(Error::AtomCountMismatch {
                expected: space.atom_count(),
                found: self.atom_count(),
            });
        }
        Ok(())
    }

    /// True when the element is constant (bitwise) on every block.
    pub fn is_measurable(&self, partition: &Partition) -> bool {
        partition.atom_count() == self.atom_count()
            && partition.blocks().iter().all(|block| {
                let key = bit_key(&self.values[block[0]]);
                block.iter().all(|&a| bit_key(&self.values[a]) == key)
            })
    }
}

pub fn one_hot(alphabet: usize, symbol: usize) -> Vec<f64> {
    let mut v = vec![0.0; alphabet];
    v[symbol] = 1.0;
    v
}

fn bit_key(value: &[f64]) -> Vec<u64> {
    value.iter().map(|c| c.to_bits()).collect()
}

/// `σ(X)`: atoms grouped by bitwise-equal values of `x`.
pub fn partition_of_element(space: &SampleSpace, x: &RandomElement) -> Result<Partition> {
    x.check_space(space)?;
    let keys: Vec<Vec<u64>> = x.values().iter().map(|v| bit_key(v)).collect();
    Partition::from_labels(&keys)
}

/// `𝔼[X|σ]` for the partition generating `σ`: on every block, the
/// probability-weighted mean of `x` over that block.
pub fn conditional_expectation(
    space: &SampleSpace,
    x: &RandomElement,
    partition: &Partition,
) -> Result<RandomElement> {
    x.check_space(space)?;
    if partition.atom_count() != space.atom_count() {
        return Err(Error::AtomCountMismatch {
            expected: space.atom_count(),
            found: partition.atom_count(),
        });
    }
    let width = x.kind().width();
    let mut values = vec![Vec::new(); space.atom_count()];
    for (id, block) in partition.blocks().iter().enumerate() {
        let mass = space.mass(block);
        if mass <= 0.0 {
            return Err(Error::ZeroMassBlock { block: id });
        }
        let mut mean = vec![0.0; width];
        for &atom in block {
            let w = space.probability(atom) / mass;
            for (m, v) in mean.iter_mut().zip(x.value(atom)) {
                *m += w * v;
            }
        }
        for &atom in block {
            values[atom] = mean.clone();
        }
    }
    // Means of distributions are distributions up to rounding; keep the kind
    // without re-validating the 1e-12 tolerance.
    Ok(RandomElement {
        kind: x.kind(),
        values,
    })
}

/// `𝔼[X]` as a single value.
pub fn expectation(space: &SampleSpace, x: &RandomElement) -> Result<Vec<f64>> {
    x.check_space(space)?;
    let mut mean = vec![0.0; x.kind().width()];
    for (atom, value) in x.values().iter().enumerate() {
        let w = space.probability(atom);
        for (m, v) in mean.iter_mut().zip(value) {
            *m += w * v;
        }
    }
    Ok(mean)
}

/// Distinct values of `x` (bitwise) with their probabilities, in order of
/// first occurrence: the law `p_X` on the support of `x`.
pub fn law(space: &SampleSpace, x: &RandomElement) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    x.check_space(space)?;
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut probs = Vec::new();
    for (atom, value) in x.values().iter().enumerate() {
        let p = space.probability(atom);
        if p == 0.0 {
            continue;
        }
        let next = states.len();
        let id = *index.entry(bit_key(value)).or_insert(next);
        if id == next {
            states.push(value.clone());
            probs.push(0.0);
        }
        probs[id] += p;
    }
    Ok((states, probs))
}
