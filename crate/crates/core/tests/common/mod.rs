//! Independent oracles and random instance generators shared by the
//! integration tests. Nothing here calls the engine's risk machinery; the
//! formulas are direct sums over explicit tables.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lossinfo::{Partition, RandomElement, SampleSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A strictly positive probability vector.
pub fn random_distribution(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.random::<f64>()).collect();
    normalize(raw)
}

/// A probability vector where each entry is zero with probability
/// `zero_rate`; at least one entry stays positive.
pub fn random_sparse_distribution(rng: &mut ChaCha8Rng, k: usize, zero_rate: f64) -> Vec<f64> {
    let mut raw: Vec<f64> = (0..k)
        .map(|_| {
            if rng.random::<f64>() < zero_rate {
                0.0
            } else {
                0.05 + rng.random::<f64>()
            }
        })
        .collect();
    if raw.iter().all(|v| *v == 0.0) {
        let i = rng.random_range(0..k);
        raw[i] = 1.0;
    }
    normalize(raw)
}

pub fn normalize(raw: Vec<f64>) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Random labels in `0..max_labels` for `n` atoms.
pub fn random_partition(rng: &mut ChaCha8Rng, n: usize, max_labels: usize) -> Partition {
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..max_labels)).collect();
    Partition::from_labels(&labels).unwrap()
}

/// Probability table over the product of `dims`, flattened row-major: the
/// last axis varies fastest.
#[derive(Debug, Clone)]
pub struct JointTable {
    pub dims: Vec<usize>,
    pub probs: Vec<f64>,
}

impl JointTable {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> JointTable {
        assert_eq!(dims.iter().product::<usize>(), probs.len());
        JointTable { dims, probs }
    }

    pub fn random(rng: &mut ChaCha8Rng, dims: Vec<usize>, zero_rate: f64) -> JointTable {
        let size = dims.iter().product();
        let probs = random_sparse_distribution(rng, size, zero_rate);
        JointTable::new(dims, probs)
    }

    pub fn cells(&self) -> usize {
        self.probs.len()
    }

    pub fn coords(&self, cell: usize) -> Vec<usize> {
        let mut rest = cell;
        let mut out = vec![0; self.dims.len()];
        for axis in (0..self.dims.len()).rev() {
            out[axis] = rest % self.dims[axis];
            rest /= self.dims[axis];
        }
        out
    }

    pub fn space(&self) -> SampleSpace {
        SampleSpace::new(self.probs.clone()).unwrap()
    }

    /// The variable on `axis` as one-hot symbols.
    pub fn symbols(&self, axis: usize) -> RandomElement {
        let symbols: Vec<usize> = (0..self.cells()).map(|c| self.coords(c)[axis]).collect();
        RandomElement::symbols(self.dims[axis], &symbols).unwrap()
    }

    /// The variable on `axis` embedded as the reals in `embedding`.
    pub fn reals(&self, axis: usize, embedding: &[f64]) -> RandomElement {
        let values: Vec<f64> = (0..self.cells())
            .map(|c| embedding[self.coords(c)[axis]])
            .collect();
        RandomElement::scalar(&values).unwrap()
    }

    /// `σ` of the variables on `axes`.
    pub fn partition(&self, axes: &[usize]) -> Partition {
        let labels: Vec<Vec<usize>> = (0..self.cells())
            .map(|c| {
                let co = self.coords(c);
                axes.iter().map(|&a| co[a]).collect()
            })
            .collect();
        Partition::from_labels(&labels).unwrap()
    }

    /// Marginal over `axes`, keyed by the coordinate tuple.
    pub fn marginal(&self, axes: &[usize]) -> BTreeMap<Vec<usize>, f64> {
        let mut out = BTreeMap::new();
        for (c, p) in self.probs.iter().enumerate() {
            let co = self.coords(c);
            let key: Vec<usize> = axes.iter().map(|&a| co[a]).collect();
            *out.entry(key).or_insert(0.0) += p;
        }
        out
    }

    fn project(&self, cell: usize, axes: &[usize]) -> Vec<usize> {
        let co = self.coords(cell);
        axes.iter().map(|&a| co[a]).collect()
    }
}

/// Shannon quantities in nats from the classical formulas.
pub mod shannon {
    use super::JointTable;

    pub fn entropy_of(p: &[f64]) -> f64 {
        p.iter().filter(|v| **v > 0.0).map(|v| -v * v.ln()).sum()
    }

    pub fn cross_entropy(p: &[f64], q: &[f64]) -> f64 {
        p.iter()
            .zip(q)
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, b)| -a * b.ln())
            .sum()
    }

    pub fn kl(p: &[f64], q: &[f64]) -> f64 {
        p.iter()
            .zip(q)
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, b)| a * (a / b).ln())
            .sum()
    }

    /// `H(X) = −Σ p(x) ln p(x)`.
    pub fn entropy(t: &JointTable, x: usize) -> f64 {
        t.marginal(&[x])
            .values()
            .map(|p| if *p > 0.0 { -p * p.ln() } else { 0.0 })
            .sum()
    }

    /// `H(X|Y) = Σ p(x,y) ln(p(y)/p(x,y))`.
    pub fn conditional_entropy(t: &JointTable, x: usize, given: &[usize]) -> f64 {
        let mut both = given.to_vec();
        both.push(x);
        let pxy = t.marginal(&both);
        let py = t.marginal(given);
        pxy.iter()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, p)| p * (py[&k[..given.len()]] / p).ln())
            .sum()
    }

    /// `I(X;Y) = Σ p(x,y) ln(p(x,y)/(p(x)p(y)))`.
    pub fn mutual_information(t: &JointTable, x: usize, y: usize) -> f64 {
        let pxy = t.marginal(&[x, y]);
        let px = t.marginal(&[x]);
        let py = t.marginal(&[y]);
        pxy.iter()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, p)| p * (p / (px[&k[..1]] * py[&k[1..]])).ln())
            .sum()
    }

    /// `I(X;Y|Z) = Σ p(x,y,z) ln(p(z)p(x,y,z)/(p(x,z)p(y,z)))`.
    pub fn conditional_mutual_information(t: &JointTable, x: usize, y: usize, z: usize) -> f64 {
        let pxyz = t.marginal(&[x, y, z]);
        let pxz = t.marginal(&[x, z]);
        let pyz = t.marginal(&[y, z]);
        let pz = t.marginal(&[z]);
        pxyz.iter()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, p)| {
                let (xx, yy, zz) = (k[0], k[1], k[2]);
                p * (pz[&vec![zz]] * p / (pxz[&vec![xx, zz]] * pyz[&vec![yy, zz]])).ln()
            })
            .sum()
    }
}

/// Variance quantities of a real-valued variable from explicit block sums.
pub mod variance {
    use std::collections::BTreeMap;

    /// `Var` of `values` under `probs`, by the two-pass formula.
    pub fn var(probs: &[f64], values: &[f64]) -> f64 {
        let mass: f64 = probs.iter().sum();
        let mean: f64 = probs.iter().zip(values).map(|(p, v)| p * v).sum::<f64>() / mass;
        probs
            .iter()
            .zip(values)
            .map(|(p, v)| p * (v - mean) * (v - mean))
            .sum::<f64>()
            / mass
    }

    fn groups<K: Ord + Clone>(labels: &[K]) -> BTreeMap<K, Vec<usize>> {
        let mut g: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            g.entry(l.clone()).or_default().push(i);
        }
        g
    }

    fn block_mean(probs: &[f64], values: &[f64], block: &[usize]) -> (f64, f64) {
        let mass: f64 = block.iter().map(|&i| probs[i]).sum();
        let mean = block.iter().map(|&i| probs[i] * values[i]).sum::<f64>() / mass;
        (mass, mean)
    }

    /// `𝔼[Var(X|L)]` for the grouping given by `labels`.
    pub fn expected_conditional_variance<K: Ord + Clone>(
        probs: &[f64],
        values: &[f64],
        labels: &[K],
    ) -> f64 {
        groups(labels)
            .values()
            .map(|block| {
                let p: Vec<f64> = block.iter().map(|&i| probs[i]).collect();
                let v: Vec<f64> = block.iter().map(|&i| values[i]).collect();
                let mass: f64 = p.iter().sum();
                if mass == 0.0 {
                    0.0
                } else {
                    mass * var(&p, &v)
                }
            })
            .sum()
    }

    /// `Var(𝔼[X|L])`.
    pub fn variance_of_conditional_mean<K: Ord + Clone>(
        probs: &[f64],
        values: &[f64],
        labels: &[K],
    ) -> f64 {
        let (masses, means): (Vec<f64>, Vec<f64>) = groups(labels)
            .values()
            .map(|block| block_mean(probs, values, block))
            .filter(|(m, _)| *m > 0.0)
            .unzip();
        var(&masses, &means)
    }

    /// `𝔼_Z[Var_Y(𝔼[X|Y,Z])]`: inside each `Z`-group, the variance of the
    /// `(Y,Z)`-conditional means, averaged over `Z`.
    pub fn nested_information<K: Ord + Clone>(
        probs: &[f64],
        values: &[f64],
        y_labels: &[K],
        z_labels: &[K],
    ) -> f64 {
        groups(z_labels)
            .values()
            .map(|zblock| {
                let zmass: f64 = zblock.iter().map(|&i| probs[i]).sum();
                if zmass == 0.0 {
                    return 0.0;
                }
                let sub_labels: Vec<K> = zblock.iter().map(|&i| y_labels[i].clone()).collect();
                let sub_probs: Vec<f64> = zblock.iter().map(|&i| probs[i]).collect();
                let sub_values: Vec<f64> = zblock.iter().map(|&i| values[i]).collect();
                zmass * variance_of_conditional_mean(&sub_probs, &sub_values, &sub_labels)
            })
            .sum()
    }
}

/// Every set partition of `0..n` by canonicalizing all `n^n` label maps.
pub fn brute_force_partitions(n: usize) -> BTreeSet<Vec<Vec<usize>>> {
    let mut out = BTreeSet::new();
    let total = n.pow(n as u32);
    for code in 0..total {
        let mut labels = vec![0; n];
        let mut rest = code;
        for l in labels.iter_mut() {
            *l = rest % n;
            rest /= n;
        }
        let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (atom, l) in labels.iter().enumerate() {
            blocks.entry(*l).or_default().push(atom);
        }
        let mut canon: Vec<Vec<usize>> = blocks.into_values().collect();
        canon.sort();
        out.insert(canon);
    }
    out
}
