//! Entropy and information written as expected scoring-rule divergences.
//! One Bayes act is fixed per distribution and reused for every term.

use crate::error::Result;
use crate::extended::ExtendedReal;
use crate::losses::{bayes_act, divergence_between_acts, LossModel, WeightedStates};
use crate::partition::Partition;
use crate::space::{RandomElement, SampleSpace};

use super::{block_states, check_kind, Reduced};

/// `Σ_ω ℙ(ω) D(δ_{X(ω)} ‖ q_{B(ω)})` where `q_B` is the law of `X` on the
/// block of `knowledge` containing `ω`.
fn expected_point_divergence(
    reduced: &Reduced,
    loss: &LossModel,
    knowledge: &Partition,
) -> Result<ExtendedReal> {
    let mut total = ExtendedReal::ZERO;
    for block in knowledge.blocks() {
        let (states, _) = block_states(&reduced.space, &reduced.x, block)?;
        let act_block = bayes_act(loss, &states)?.action;
        for &atom in block {
            let point = WeightedStates::point(reduced.x.value(atom).to_vec());
            let act_point = bayes_act(loss, &point)?.action;
            let d = divergence_between_acts(loss, &point, &act_block, &act_point)?;
            total = total.checked_add(d.weighted(reduced.space.probability(atom)))?;
        }
    }
    Ok(total)
}

/// `Σ_{B∈fine} ℙ(B) D(P_{X|B} ‖ P_{X|C(B)})` where `C(B)` is the block of
/// `coarse` containing `B`.
fn expected_block_divergence(
    reduced: &Reduced,
    loss: &LossModel,
    coarse: &Partition,
    fine: &Partition,
) -> Result<ExtendedReal> {
    let mut coarse_acts = Vec::with_capacity(coarse.block_count());
    for block in coarse.blocks() {
        let (states, _) = block_states(&reduced.space, &reduced.x, block)?;
        coarse_acts.push(bayes_act(loss, &states)?.action);
    }
    let coarse_label = coarse.labels();
    let mut total = ExtendedReal::ZERO;
    for block in fine.blocks() {
        let (states, mass) = block_states(&reduced.space, &reduced.x, block)?;
        let act_fine = bayes_act(loss, &states)?.action;
        let act_coarse = &coarse_acts[coarse_label[block[0]]];
        let d = divergence_between_acts(loss, &states, act_coarse, &act_fine)?;
        total = total.checked_add(d.weighted(mass))?;
    }
    Ok(total)
}

/// `𝔼[D(δ_X ‖ p_X)]`.
pub fn entropy_as_divergence(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
) -> Result<ExtendedReal> {
    check_kind(x, loss)?;
    let reduced = Reduced::new(space, x)?;
    let trivial = Partition::trivial(reduced.space.atom_count())?;
    expected_point_divergence(&reduced, loss, &trivial)
}

/// `𝔼[D(δ_X ‖ P_{X|σ})]`.
pub fn conditional_entropy_as_divergence(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    knowledge: &Partition,
) -> Result<ExtendedReal> {
    check_kind(x, loss)?;
    let reduced = Reduced::new(space, x)?;
    let p = reduced.partition(knowledge)?;
    expected_point_divergence(&reduced, loss, &p)
}

/// `𝔼[D(P_{X|σ} ‖ p_X)]`.
pub fn information_as_divergence(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    knowledge: &Partition,
) -> Result<ExtendedReal> {
    check_kind(x, loss)?;
    let reduced = Reduced::new(space, x)?;
    let p = reduced.partition(knowledge)?;
    let trivial = Partition::trivial(reduced.space.atom_count())?;
    expected_block_divergence(&reduced, loss, &trivial, &p)
}

/// `𝔼[D(P_{X|inner∨outer} ‖ P_{X|inner})]`, i.e. `𝔼[D(P_{X|Y,Z} ‖ P_{X|Z})]`.
pub fn conditional_information_as_divergence(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    inner: &Partition,
    outer: &Partition,
) -> Result<ExtendedReal> {
    check_kind(x, loss)?;
    let reduced = Reduced::new(space, x)?;
    let inner = reduced.partition(inner)?;
    let joined = inner.join(&reduced.partition(outer)?)?;
    expected_block_divergence(&reduced, loss, &inner, &joined)
}
