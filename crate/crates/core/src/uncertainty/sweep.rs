//! Optimal risk over the whole partition lattice of a small space.

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::losses::LossModel;
use crate::partition::{enumerate_partitions, Partition};
use crate::space::{partition_of_element, RandomElement, SampleSpace};

use super::{check_kind, reduced_risk, Reduced};

/// Every partition of the atom set (enumeration order, trivial first) with
/// its optimal risk.
#[derive(Debug, Clone)]
pub struct LatticeSweep {
    pub partitions: Vec<Partition>,
    pub risks: Vec<ExtendedReal>,
    pub element_partition: Partition,
}

/// Extremes of the lattice-wide ordering properties. Gaps are
/// `risk(coarser) − risk(finer)`, so every minimum should be `≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSummary {
    pub partition_count: usize,
    pub refinement_pairs: usize,
    /// Over all pairs `σ1 ⊂ σ2`; this also bounds every conditional
    /// information, since `σ1 ⊂ σ1 ∨ σ2`.
    pub min_refinement_gap: f64,
    /// `min_σ R(σ) − R(σ(X))`, i.e. the smallest conditional entropy.
    pub min_maximality_gap: f64,
    /// `min_σ R({∅,Ω}) − R(σ)`, i.e. the smallest information.
    pub min_information: f64,
    pub entropy: f64,
    /// `max |R(σ) − R(σ(X))|` over `σ` finer than `σ(X)`.
    pub max_plateau_deviation: f64,
}

pub fn lattice_sweep(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
) -> Result<LatticeSweep> {
    check_kind(x, loss)?;
    let partitions = enumerate_partitions(space.atom_count())?;
    let reduced = Reduced::new(space, x)?;
    let risks = partitions
        .iter()
        .map(|p| reduced_risk(&reduced.space, &reduced.x, loss, &reduced.partition(p)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeSweep {
        partitions,
        risks,
        element_partition: partition_of_element(space, x)?,
    })
}

impl LatticeSweep {
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// `𝒰_{{∅,Ω}→σ_i}`.
    pub fn uncertainty_from_trivial(&self, index: usize) -> Result<ExtendedReal> {
        self.risks[0].checked_sub(self.risks[index])
    }

    fn element_index(&self) -> usize {
        self.partitions
            .iter()
            .position(|p| *p == self.element_partition)
            .expect("σ(X) is in the full lattice")
    }

    pub fn summary(&self) -> Result<LatticeSummary> {
        let risks = self
            .risks
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.finite().ok_or_else(|| {
                    Error::InfiniteTerm(format!("optimal risk under {}", self.partitions[i]))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let labels: Vec<Vec<usize>> = self.partitions.iter().map(Partition::labels).collect();
        let refines = |fine: usize, coarse: usize| {
            self.partitions[fine]
                .blocks()
                .iter()
                .all(|b| b.iter().all(|&a| labels[coarse][a] == labels[coarse][b[0]]))
        };

        let own = self.element_index();
        let mut summary = LatticeSummary {
            partition_count: self.len(),
            refinement_pairs: 0,
            min_refinement_gap: f64::INFINITY,
            min_maximality_gap: f64::INFINITY,
            min_information: f64::INFINITY,
            entropy: risks[0] - risks[own],
            max_plateau_deviation: 0.0,
        };
        for (i, &ri) in risks.iter().enumerate() {
            summary.min_maximality_gap = summary.min_maximality_gap.min(ri - risks[own]);
            summary.min_information = summary.min_information.min(risks[0] - ri);
            if refines(i, own) {
                summary.max_plateau_deviation =
                    summary.max_plateau_deviation.max((ri - risks[own]).abs());
            }
            for (j, &rj) in risks.iter().enumerate() {
                if i != j && refines(i, j) {
                    summary.refinement_pairs += 1;
                    summary.min_refinement_gap = summary.min_refinement_gap.min(rj - ri);
                }
            }
        }
        Ok(summary)
    }
}
