//! Ancillary statistics of a finite model and their classification.
//!
//! Everything here works on a *base* partition: only coarsenings of the base
//! are considered (pass the minimal sufficient partition to restrict attention
//! to ancillaries that are functions of it, or nothing for all ancillaries).
//! The model is first pushed forward onto the base blocks, and subsets of
//! blocks are handled as bitmasks.
//!
//! Two facts carry most of the weight:
//!
//! * A conditional model `M | V = i` has `P_theta(V = i)` free of theta when `V`
//!   is ancillary, so `U` is ancillary in it iff every `U`-block meets the
//!   `V`-block in an ancillary event. A mixture `sum_i p_i M | V = i` is linear
//!   in `p`, so `U` is ancillary for every `p` iff it is ancillary in each
//!   point-mass component. Stability and strength are decided this way.
//! * An ancillary `A` is maximal iff none of its blocks properly contains a
//!   nonempty ancillary event (otherwise splitting that block stays ancillary).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{FiniteModel, Weights};
use crate::partition::{join, Partition, DEFAULT_PARTITION_CAP};
use crate::rational::{common_denominator, ratio, scaled_numerators, Rational};

/// Default cap on sample points for exhaustive scans over all subsets.
pub const DEFAULT_EVENT_CAP: usize = 20;

/// Resource caps for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of base blocks whose partitions may be enumerated.
    pub partition_cap: usize,
    /// Largest number of points whose subsets may be scanned.
    pub event_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            partition_cap: DEFAULT_PARTITION_CAP,
            event_cap: DEFAULT_EVENT_CAP,
        }
    }
}

/// Weights tried before point masses when looking for an instability witness.
pub fn default_probe_weights() -> Vec<Weights> {
    vec![Weights::new(vec![
        ratio(7, 100),
        ratio(13, 100),
        ratio(27, 100),
        ratio(53, 100),
    ])
    .expect("sums to one")]
}

type Mask = u64;

fn mask_of(items: impl IntoIterator<Item = usize>) -> Mask {
    items.into_iter().fold(0, |m, i| m | (1 << i))
}

fn members(mask: Mask) -> impl Iterator<Item = usize> {
    (0..Mask::BITS as usize).filter(move |i| mask & (1 << i) != 0)
}

/// Ancillary events of a model given as per-point probability columns:
/// bitmasks over the points whose probability is the same under every
/// parameter. Walks all subsets in Gray-code order keeping running sums.
fn scan_ancillary_events(columns: &[Vec<Rational>], num_thetas: usize) -> Vec<bool> {
    let k = columns.len();
    let denominator = common_denominator(columns.iter().flatten());
    let scaled: Vec<Vec<_>> = columns
        .iter()
        .map(|col| scaled_numerators(col, &denominator))
        .collect();
    let mut sums = vec![num_bigint::BigInt::zero(); num_thetas];
    let mut is_event = vec![false; 1 << k];
    is_event[0] = true;
    let mut current: Mask = 0;
    for step in 1u64..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        current ^= 1 << bit;
        let adding = current & (1 << bit) != 0;
        for (sum, value) in sums.iter_mut().zip(&scaled[bit]) {
            if adding {
                *sum += value;
            } else {
                *sum -= value;
            }
        }
        is_event[current as usize] = sums.iter().all(|s| *s == sums[0]);
    }
    is_event
}

/// An ancillary that is not stable, shown by a concrete reweighting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstabilityWitness {
    /// The statistic that stops being ancillary.
    pub unstable: Partition,
    /// The ancillary whose distribution is changed.
    pub via: Partition,
    pub weights: Weights,
    /// Index of the `unstable` block whose probability now depends on theta.
    pub block: usize,
    /// The two parameter indices compared.
    pub thetas: (usize, usize),
    /// The block's probability under those two parameters in the mixture.
    pub probs: (Rational, Rational),
}

impl InstabilityWitness {
    pub fn likelihood_ratio(&self) -> Option<Rational> {
        (!self.probs.1.is_zero()).then(|| &self.probs.0 / &self.probs.1)
    }
}

/// The full ancillary taxonomy of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncillaryClassification {
    /// Base partition the search was restricted to.
    pub within: Partition,
    pub restricted_to_mss: bool,
    pub ancillaries: Vec<Partition>,
    pub maximal: Vec<Partition>,
    pub minimal: Vec<Partition>,
    pub laminal: Partition,
    pub stable: Vec<Partition>,
    /// Ancillary events conforming to every ancillary event.
    pub gamma0: Vec<Vec<usize>>,
}

/// Precomputed ancillary structure of a model relative to a base partition.
#[derive(Debug, Clone)]
pub struct AncillaryEngine<'a> {
    model: &'a FiniteModel,
    base: Partition,
    is_event: Vec<bool>,
    ancillaries: Vec<Partition>,
    // the same partitions as block masks over the base
    ancillary_masks: Vec<Vec<Mask>>,
    maximal: Vec<usize>,
    laminal: Partition,
}

impl<'a> AncillaryEngine<'a> {
    pub fn new(model: &'a FiniteModel, within: Option<&Partition>, limits: Limits) -> Result<Self> {
        let base = match within {
            Some(p) => {
                model.check_partition(p)?;
                p.clone()
            }
            None => Partition::singletons(model.num_samples()),
        };
        let k = base.num_blocks();
        if k > limits.partition_cap {
            return Err(Error::SizeCapExceeded {
                what: "partition enumeration",
                size: k,
                cap: limits.partition_cap,
            });
        }
        let columns: Vec<Vec<Rational>> =
            base.blocks().iter().map(|b| model.event_probs(b)).collect();
        let is_event = scan_ancillary_events(&columns, model.num_thetas());

        let mut found = Vec::new();
        collect_partitions(&is_event, (1 << k) - 1, &mut Vec::new(), &mut found);
        let mut pairs: Vec<(Partition, Vec<Mask>)> = found
            .into_iter()
            .map(|mut masks| {
                masks.sort_unstable_by_key(|m| m.trailing_zeros());
                let labels: Vec<usize> = (0..k)
                    .map(|b| masks.iter().position(|m| m & (1 << b) != 0).unwrap())
                    .collect();
                (base.expand(&Partition::from_labels(&labels)), masks)
            })
            .collect();
        pairs.sort();
        let (ancillaries, ancillary_masks): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();

        let maximal: Vec<usize> = ancillary_masks
            .iter()
            .enumerate()
            .filter(|(_, blocks)| {
                blocks.iter().all(|&block| {
                    // no nonempty ancillary event strictly inside the block
                    let mut sub = (block - 1) & block;
                    while sub != 0 {
                        if is_event[sub as usize] {
                            return false;
                        }
                        sub = (sub - 1) & block;
                    }
                    true
                })
            })
            .map(|(i, _)| i)
            .collect();

        let maximal_parts: Vec<Partition> =
            maximal.iter().map(|&i| ancillaries[i].clone()).collect();
        let laminal = join(&maximal_parts)?;

        let engine = Self {
            model,
            base,
            is_event,
            ancillaries,
            ancillary_masks,
            maximal,
            laminal,
        };
        engine.check_laminal();
        Ok(engine)
    }

    fn check_laminal(&self) {
        let laminal = &self.laminal;
        assert!(
            self.model.ancillary_distribution(laminal).is_some(),
            "join of maximal ancillaries is not ancillary"
        );
        let minimal = self.minimal();
        assert!(minimal.contains(laminal), "laminal is not minimal");
        for m in &minimal {
            assert!(
                m.is_coarsening(laminal).unwrap(),
                "minimal ancillary {m} is not a coarsening of the laminal {laminal}"
            );
        }
    }

    pub fn model(&self) -> &FiniteModel {
        self.model
    }

    pub fn base(&self) -> &Partition {
        &self.base
    }

    /// All ancillary coarsenings of the base, sorted.
    pub fn ancillaries(&self) -> &[Partition] {
        &self.ancillaries
    }

    pub fn maximal(&self) -> Vec<Partition> {
        self.maximal
            .iter()
            .map(|&i| self.ancillaries[i].clone())
            .collect()
    }

    /// Ancillaries that are functions of every maximal ancillary.
    pub fn minimal(&self) -> Vec<Partition> {
        let maximal = self.maximal();
        self.ancillaries
            .iter()
            .filter(|a| maximal.iter().all(|m| a.is_coarsening(m).unwrap()))
            .cloned()
            .collect()
    }

    pub fn laminal(&self) -> &Partition {
        &self.laminal
    }

    fn contract(&self, u: &Partition) -> Result<Vec<Mask>> {
        self.model.check_partition(u)?;
        if self.model.ancillary_distribution(u).is_none() {
            return Err(Error::NotAncillary(
                u.display_with(self.model.sample_labels()),
            ));
        }
        let over_blocks = self.base.contract(u).map_err(|_| {
            Error::NotAncillary(format!(
                "{} is not a function of the base partition",
                u.display_with(self.model.sample_labels())
            ))
        })?;
        Ok(over_blocks
            .blocks()
            .iter()
            .map(|b| mask_of(b.iter().copied()))
            .collect())
    }

    fn meets_ancillary(&self, left: &[Mask], right: &[Mask]) -> bool {
        left.iter()
            .all(|&l| right.iter().all(|&r| self.is_event[(l & r) as usize]))
    }

    /// `U` stays ancillary in every component `M | V = i` of every ancillary `V`.
    fn stable_by_components(&self, u: &[Mask]) -> bool {
        self.ancillary_masks.iter().all(|v| {
            v.iter()
                .all(|&vb| u.iter().all(|&ub| self.is_event[(ub & vb) as usize]))
        })
    }

    /// Every ancillary `V` stays ancillary in each component `M | U = j`.
    fn strong_by_components(&self, u: &[Mask]) -> bool {
        self.ancillary_masks
            .iter()
            .all(|v| self.meets_ancillary(u, v))
    }

    fn coarsens_all_maximal(&self, u: &Partition) -> bool {
        self.maximal
            .iter()
            .all(|&i| u.is_coarsening(&self.ancillaries[i]).unwrap())
    }

    /// Whether `U` survives every reweighting of every other ancillary.
    ///
    /// Decided through the point-mass components and cross-checked against
    /// "coarsens every maximal ancillary"; the two must agree.
    pub fn is_stable(&self, u: &Partition) -> Result<bool> {
        let masks = self.contract(u)?;
        let by_components = self.stable_by_components(&masks);
        let structural = self.coarsens_all_maximal(u);
        assert_eq!(
            by_components, structural,
            "stability routes disagree for {u}"
        );
        Ok(by_components)
    }

    /// Whether reweighting `U` leaves every other ancillary ancillary.
    pub fn is_strong(&self, u: &Partition) -> Result<bool> {
        let masks = self.contract(u)?;
        let strong = self.strong_by_components(&masks);
        assert_eq!(
            strong,
            self.stable_by_components(&masks),
            "strong and stable disagree for {u}"
        );
        Ok(strong)
    }

    /// A reweighting of some ancillary under which `U` loses ancillarity.
    pub fn instability_witness(&self, u: &Partition) -> Result<Option<InstabilityWitness>> {
        self.instability_witness_with(u, &default_probe_weights())
    }

    /// As [`instability_witness`](Self::instability_witness) with an explicit
    /// list of weight vectors to try before the point masses.
    ///
    /// Ancillaries are tried in sorted order; for each, the probe weights of
    /// matching length come first, then the point masses in block order.
    pub fn instability_witness_with(
        &self,
        u: &Partition,
        probes: &[Weights],
    ) -> Result<Option<InstabilityWitness>> {
        if self.is_stable(u)? {
            return Ok(None);
        }
        let model = self.model;
        for v in &self.ancillaries {
            let marginal = model
                .ancillary_distribution(v)
                .expect("enumerated partitions are ancillary");
            let k = v.num_blocks();
            let candidates = probes
                .iter()
                .filter(|w| w.len() == k)
                .cloned()
                .chain((0..k).map(|i| Weights::point_mass(k, i)));
            for weights in candidates {
                if let Some(w) = self.first_dependent_block(u, v, &marginal, &weights) {
                    return Ok(Some(w));
                }
            }
        }
        unreachable!("an unstable ancillary always has a point-mass witness")
    }

    fn first_dependent_block(
        &self,
        u: &Partition,
        v: &Partition,
        marginal: &[Rational],
        weights: &Weights,
    ) -> Option<InstabilityWitness> {
        let model = self.model;
        let v_of = v.assignment();
        for (index, block) in u.blocks().iter().enumerate() {
            // probability of the block in sum_i w_i M|V=i
            let probs: Vec<Rational> = (0..model.num_thetas())
                .map(|t| {
                    block
                        .iter()
                        .map(|&x| {
                            let b = v_of[x];
                            &weights.values()[b] * model.prob(t, x) / &marginal[b]
                        })
                        .sum()
                })
                .collect();
            if let Some(t) = probs.iter().position(|p| *p != probs[0]) {
                return Some(InstabilityWitness {
                    unstable: u.clone(),
                    via: v.clone(),
                    weights: weights.clone(),
                    block: index,
                    thetas: (0, t),
                    probs: (probs[0].clone(), probs[t].clone()),
                });
            }
        }
        None
    }

    /// Ancillary events made of base blocks, as sorted lists of sample indices.
    pub fn ancillary_events(&self) -> Vec<Vec<usize>> {
        self.expand_events(self.event_masks())
    }

    fn event_masks(&self) -> Vec<Mask> {
        (0..self.is_event.len() as Mask)
            .filter(|&m| self.is_event[m as usize])
            .collect()
    }

    /// Ancillary events that conform to (meet in an ancillary event) every
    /// other ancillary event.
    pub fn gamma0(&self) -> Vec<Vec<usize>> {
        let events = self.event_masks();
        let conforming = conforming_events(&events, &self.is_event);
        let generated = self.expand_events(generated_algebra(
            &self
                .base
                .contract(&self.laminal)
                .expect("laminal coarsens base"),
        ));
        let gamma0 = self.expand_events(conforming);
        assert_eq!(
            gamma0, generated,
            "conforming events differ from the laminal algebra"
        );
        gamma0
    }

    fn expand_events(&self, masks: Vec<Mask>) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = masks
            .into_iter()
            .map(|m| {
                let mut e: Vec<usize> = members(m)
                    .flat_map(|b| self.base.blocks()[b].iter().copied())
                    .collect();
                e.sort_unstable();
                e
            })
            .collect();
        out.sort();
        out
    }

    pub fn classify(&self) -> Result<AncillaryClassification> {
        let minimal = self.minimal();
        let mut stable = Vec::new();
        for a in &self.ancillaries {
            let s = self.is_stable(a)?;
            assert_eq!(s, self.is_strong(a)?);
            if s {
                stable.push(a.clone());
            }
        }
        assert_eq!(
            stable, minimal,
            "stable ancillaries differ from minimal ones"
        );
        let gamma0 = self.gamma0();
        check_algebra(&gamma0, self.model.num_samples());
        Ok(AncillaryClassification {
            within: self.base.clone(),
            restricted_to_mss: self.base == crate::sufficiency::mss_partition(self.model),
            ancillaries: self.ancillaries.clone(),
            maximal: self.maximal(),
            minimal,
            laminal: self.laminal.clone(),
            stable,
            gamma0,
        })
    }
}

/// Depth-first search for partitions of `remaining` into ancillary events;
/// the block holding the lowest remaining element is chosen first.
fn collect_partitions(
    is_event: &[bool],
    remaining: Mask,
    current: &mut Vec<Mask>,
    out: &mut Vec<Vec<Mask>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    let low = remaining & remaining.wrapping_neg();
    let rest = remaining ^ low;
    // subsets of `rest`, each joined with the lowest element
    let mut sub = rest;
    loop {
        let block = sub | low;
        if is_event[block as usize] {
            current.push(block);
            collect_partitions(is_event, remaining ^ block, current, out);
            current.pop();
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
}

fn conforming_events(events: &[Mask], is_event: &[bool]) -> Vec<Mask> {
    events
        .iter()
        .copied()
        .filter(|&e| events.iter().all(|&f| is_event[(e & f) as usize]))
        .collect()
}

/// All unions of blocks of `partition`, as masks over its ground set.
fn generated_algebra(partition: &Partition) -> Vec<Mask> {
    let blocks: Vec<Mask> = partition
        .blocks()
        .iter()
        .map(|b| mask_of(b.iter().copied()))
        .collect();
    (0..1u64 << blocks.len())
        .map(|choice| members(choice).map(|i| blocks[i]).fold(0, |acc, b| acc | b))
        .collect()
}

fn check_algebra(sets: &[Vec<usize>], n: usize) {
    let masks: std::collections::HashSet<Mask> =
        sets.iter().map(|s| mask_of(s.iter().copied())).collect();
    let full: Mask = if n == 64 { Mask::MAX } else { (1 << n) - 1 };
    assert!(
        masks.contains(&0) && masks.contains(&full),
        "algebra misses empty or full set"
    );
    for &a in &masks {
        assert!(
            masks.contains(&(full ^ a)),
            "algebra not closed under complement"
        );
        for &b in &masks {
            assert!(masks.contains(&(a | b)), "algebra not closed under union");
        }
    }
}

/// True iff every block of `partition` has the same probability under every parameter.
pub fn is_ancillary(model: &FiniteModel, partition: &Partition) -> Result<bool> {
    model.check_partition(partition)?;
    Ok(model.ancillary_distribution(partition).is_some())
}

/// All ancillary coarsenings of `within` (or of the identity).
pub fn ancillaries(model: &FiniteModel, within: Option<&Partition>) -> Result<Vec<Partition>> {
    Ok(AncillaryEngine::new(model, within, Limits::default())?
        .ancillaries()
        .to_vec())
}

pub fn maximal_ancillaries(
    model: &FiniteModel,
    within: Option<&Partition>,
) -> Result<Vec<Partition>> {
    Ok(AncillaryEngine::new(model, within, Limits::default())?.maximal())
}

pub fn minimal_ancillaries(
    model: &FiniteModel,
    within: Option<&Partition>,
) -> Result<Vec<Partition>> {
    Ok(AncillaryEngine::new(model, within, Limits::default())?.minimal())
}

/// The finest common coarsening of all maximal ancillaries.
pub fn laminal(model: &FiniteModel, within: Option<&Partition>) -> Result<Partition> {
    Ok(AncillaryEngine::new(model, within, Limits::default())?
        .laminal()
        .clone())
}

pub fn is_stable(model: &FiniteModel, u: &Partition) -> Result<bool> {
    AncillaryEngine::new(model, None, Limits::default())?.is_stable(u)
}

pub fn is_strong(model: &FiniteModel, u: &Partition) -> Result<bool> {
    AncillaryEngine::new(model, None, Limits::default())?.is_strong(u)
}

pub fn instability_witness(
    model: &FiniteModel,
    u: &Partition,
) -> Result<Option<InstabilityWitness>> {
    AncillaryEngine::new(model, None, Limits::default())?.instability_witness(u)
}

/// Every subset of the sample space whose probability is free of theta.
pub fn ancillary_events(model: &FiniteModel) -> Result<Vec<Vec<usize>>> {
    ancillary_events_with(model, Limits::default())
}

pub fn ancillary_events_with(model: &FiniteModel, limits: Limits) -> Result<Vec<Vec<usize>>> {
    let is_event = full_event_table(model, limits)?;
    let mut out: Vec<Vec<usize>> = (0..is_event.len() as Mask)
        .filter(|&m| is_event[m as usize])
        .map(|m| members(m).collect())
        .collect();
    out.sort();
    Ok(out)
}

fn full_event_table(model: &FiniteModel, limits: Limits) -> Result<Vec<bool>> {
    let n = model.num_samples();
    if n > limits.event_cap {
        return Err(Error::SizeCapExceeded {
            what: "subset scan",
            size: n,
            cap: limits.event_cap,
        });
    }
    let columns: Vec<Vec<Rational>> = (0..n).map(|x| model.column(x)).collect();
    Ok(scan_ancillary_events(&columns, model.num_thetas()))
}

/// Ancillary events conforming to every ancillary event.
///
/// When the sample space is small enough to enumerate partitions, the result
/// is also checked against the algebra generated by the laminal ancillary.
pub fn gamma0(model: &FiniteModel) -> Result<Vec<Vec<usize>>> {
    gamma0_with(model, Limits::default())
}

pub fn gamma0_with(model: &FiniteModel, limits: Limits) -> Result<Vec<Vec<usize>>> {
    let is_event = full_event_table(model, limits)?;
    let events: Vec<Mask> = (0..is_event.len() as Mask)
        .filter(|&m| is_event[m as usize])
        .collect();
    let mut out: Vec<Vec<usize>> = conforming_events(&events, &is_event)
        .into_iter()
        .map(|m| members(m).collect())
        .collect();
    out.sort();
    check_algebra(&out, model.num_samples());
    if model.num_samples() <= limits.partition_cap {
        let engine = AncillaryEngine::new(model, None, limits)?;
        assert_eq!(out, engine.gamma0());
    }
    Ok(out)
}

pub fn classify(
    model: &FiniteModel,
    within: Option<&Partition>,
) -> Result<AncillaryClassification> {
    AncillaryEngine::new(model, within, Limits::default())?.classify()
}

/// Maximum-likelihood parameter index at `x`; ties go to the lowest index.
pub fn mle(model: &FiniteModel, x: usize) -> usize {
    mle_with_tie(model, x).0
}

/// The MLE together with whether the tie-break rule decided it.
pub fn mle_with_tie(model: &FiniteModel, x: usize) -> (usize, bool) {
    let column = model.column(x);
    let mut best = 0;
    for (t, p) in column.iter().enumerate().skip(1) {
        if *p > column[best] {
            best = t;
        }
    }
    let tied = column.iter().filter(|p| **p == column[best]).count() > 1;
    (best, tied)
}

/// `P_row(mle(X) = col | X in block)` for the given ancillary block.
pub fn conditional_mle_table(
    model: &FiniteModel,
    ancillary: &Partition,
    block: usize,
) -> Result<Vec<Vec<Rational>>> {
    if !is_ancillary(model, ancillary)? {
        return Err(Error::NotAncillary(
            ancillary.display_with(model.sample_labels()),
        ));
    }
    let event = ancillary.blocks().get(block).ok_or_else(|| {
        Error::InvalidPartition(format!(
            "block {block} out of range for {} blocks",
            ancillary.num_blocks()
        ))
    })?;
    let m = model.num_thetas();
    let mut table = Vec::with_capacity(m);
    for row in 0..m {
        let total = model.event_prob(row, event);
        if total.is_zero() {
            return Err(Error::ZeroProbabilityEvent(
                model.theta_labels()[row].clone(),
            ));
        }
        let mut entries = vec![Rational::zero(); m];
        for &x in event {
            entries[mle(model, x)] += model.prob(row, x);
        }
        table.push(entries.into_iter().map(|e| e / &total).collect());
    }
    Ok(table)
}
