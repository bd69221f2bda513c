//! Finite discrete statistical models with exact probabilities.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::{format_exact, ratio, Rational};

/// A family of distributions `P_theta` on a finite sample space, stored as a
/// matrix with one row per parameter value and one column per sample point.
///
/// Rows sum to one, entries are non-negative, and every column is positive
/// under at least one parameter value.
#[derive(Debug, Clone)]
pub struct FiniteModel {
    name: String,
    thetas: Vec<String>,
    samples: Vec<String>,
    probs: Vec<Vec<Rational>>,
    dropped: Vec<String>,
}

impl PartialEq for FiniteModel {
    /// Name and provenance are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.thetas == other.thetas && self.samples == other.samples && self.probs == other.probs
    }
}

impl Eq for FiniteModel {}

fn check_labels(labels: &[String], axis: &str) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::Dimension(format!("no {axis} labels")));
    }
    for (i, label) in labels.iter().enumerate() {
        if label.is_empty()
            || label
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, ',' | '|' | '#'))
        {
            return Err(Error::Dimension(format!("invalid {axis} label `{label}`")));
        }
        if labels[..i].contains(label) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    Ok(())
}

impl FiniteModel {
    /// Validates a probability matrix against its labels.
    pub fn new(
        thetas: Vec<String>,
        samples: Vec<String>,
        probs: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        check_labels(&thetas, "theta")?;
        check_labels(&samples, "sample")?;
        if probs.len() != thetas.len() {
            return Err(Error::Dimension(format!(
                "{} rows for {} parameter values",
                probs.len(),
                thetas.len()
            )));
        }
        for (theta, row) in thetas.iter().zip(&probs) {
            if row.len() != samples.len() {
                return Err(Error::Dimension(format!(
                    "row `{theta}` has {} entries for {} sample points",
                    row.len(),
                    samples.len()
                )));
            }
            if let Some((j, value)) = row.iter().enumerate().find(|(_, v)| **v < Rational::zero()) {
                return Err(Error::NegativeProbability {
                    theta: theta.clone(),
                    sample: samples[j].clone(),
                    value: format_exact(value),
                });
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::RowSum {
                    theta: theta.clone(),
                    sum: format_exact(&sum),
                });
            }
        }
        for (j, label) in samples.iter().enumerate() {
            if probs.iter().all(|row| row[j].is_zero()) {
                return Err(Error::DeadSamplePoint(label.clone()));
            }
        }
        Ok(Self {
            name: "model".to_string(),
            thetas,
            samples,
            probs,
            dropped: Vec::new(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn theta_labels(&self) -> &[String] {
        &self.thetas
    }

    pub fn sample_labels(&self) -> &[String] {
        &self.samples
    }

    /// Labels of sample points removed while deriving this model.
    pub fn dropped_labels(&self) -> &[String] {
        &self.dropped
    }

    pub fn num_thetas(&self) -> usize {
        self.thetas.len()
    }

    pub fn num_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.probs
    }

    pub fn prob(&self, theta: usize, sample: usize) -> &Rational {
        &self.probs[theta][sample]
    }

    /// Probability vector of one sample point across parameter values.
    pub fn column(&self, sample: usize) -> Vec<Rational> {
        self.probs.iter().map(|row| row[sample].clone()).collect()
    }

    pub fn event_prob(&self, theta: usize, event: &[usize]) -> Rational {
        event.iter().map(|&x| &self.probs[theta][x]).sum()
    }

    /// `P_theta(event)` for every parameter value.
    pub fn event_probs(&self, event: &[usize]) -> Vec<Rational> {
        (0..self.num_thetas())
            .map(|t| self.event_prob(t, event))
            .collect()
    }

    pub fn sample_index(&self, label: &str) -> Result<usize> {
        self.samples
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownSampleLabel(label.to_string()))
    }

    pub(crate) fn check_partition(&self, partition: &Partition) -> Result<()> {
        if partition.ground_size() != self.num_samples() {
            return Err(Error::GroundSetMismatch {
                left: self.num_samples(),
                right: partition.ground_size(),
            });
        }
        Ok(())
    }

    /// Block probabilities of `partition`, or `None` if some block's
    /// probability depends on the parameter.
    pub(crate) fn ancillary_distribution(&self, partition: &Partition) -> Option<Vec<Rational>> {
        partition
            .blocks()
            .iter()
            .map(|block| {
                let probs = self.event_probs(block);
                probs
                    .iter()
                    .all(|p| *p == probs[0])
                    .then(|| probs[0].clone())
            })
            .collect()
    }

    /// The conditional model `P_theta( . | event)` on the event's sample points.
    ///
    /// Points of the event that are null under every parameter value are dropped
    /// and recorded in [`dropped_labels`](Self::dropped_labels).
    pub fn condition_on_event(&self, event: &[usize]) -> Result<FiniteModel> {
        let mut event = event.to_vec();
        event.sort_unstable();
        event.dedup();
        if let Some(&x) = event.iter().find(|&&x| x >= self.num_samples()) {
            return Err(Error::SampleOutOfRange {
                index: x,
                size: self.num_samples(),
            });
        }
        let totals = self.event_probs(&event);
        if let Some(t) = totals.iter().position(|p| p.is_zero()) {
            return Err(Error::ZeroProbabilityEvent(self.thetas[t].clone()));
        }
        let (kept, dropped): (Vec<usize>, Vec<usize>) = event
            .into_iter()
            .partition(|&x| self.probs.iter().any(|row| !row[x].is_zero()));
        let probs = self
            .probs
            .iter()
            .zip(&totals)
            .map(|(row, total)| kept.iter().map(|&x| &row[x] / total).collect())
            .collect();
        let mut model = FiniteModel::new(
            self.thetas.clone(),
            kept.iter().map(|&x| self.samples[x].clone()).collect(),
            probs,
        )?;
        model.name = self.name.clone();
        model.dropped = self.dropped.clone();
        model
            .dropped
            .extend(dropped.iter().map(|&x| self.samples[x].clone()));
        Ok(model)
    }

    /// Reweights the ancillary `u`: the block `B` receives probability `p_B`
    /// while the conditional law inside each block is kept.
    ///
    /// Blocks given weight zero leave null columns, which are dropped.
    pub fn mixture_model(&self, u: &Partition, weights: &Weights) -> Result<FiniteModel> {
        self.check_partition(u)?;
        let marginal = self
            .ancillary_distribution(u)
            .ok_or_else(|| Error::NotAncillary(u.display_with(&self.samples)))?;
        if weights.len() != u.num_blocks() {
            return Err(Error::WeightArityMismatch {
                expected: u.num_blocks(),
                actual: weights.len(),
            });
        }
        let assignment = u.assignment();
        let kept: Vec<usize> = (0..self.num_samples())
            .filter(|&x| !weights.values()[assignment[x]].is_zero())
            .collect();
        let probs = self
            .probs
            .iter()
            .map(|row| {
                kept.iter()
                    .map(|&x| {
                        let b = assignment[x];
                        &weights.values()[b] * &row[x] / &marginal[b]
                    })
                    .collect()
            })
            .collect();
        let mut model = FiniteModel::new(
            self.thetas.clone(),
            kept.iter().map(|&x| self.samples[x].clone()).collect(),
            probs,
        )?;
        model.name = self.name.clone();
        model.dropped = self.dropped.clone();
        model.dropped.extend(
            (0..self.num_samples())
                .filter(|x| kept.binary_search(x).is_err())
                .map(|x| self.samples[x].clone()),
        );
        Ok(model)
    }
}

/// Validates a probability matrix; see [`FiniteModel::new`].
pub fn build_model(
    theta_labels: Vec<String>,
    sample_labels: Vec<String>,
    probs: Vec<Vec<Rational>>,
) -> Result<FiniteModel> {
    FiniteModel::new(theta_labels, sample_labels, probs)
}

/// A probability vector over the blocks of some partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights(Vec<Rational>);

impl Weights {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.iter().any(|v| *v < Rational::zero()) {
            return Err(Error::InvalidWeights("negative weight".into()));
        }
        let sum: Rational = values.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {}",
                format_exact(&sum)
            )));
        }
        Ok(Self(values))
    }

    /// All mass on block `i` of `k`.
    pub fn point_mass(k: usize, i: usize) -> Self {
        Self(
            (0..k)
                .map(|j| {
                    if j == i {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        )
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A model together with an observed sample point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceBase {
    pub model: FiniteModel,
    pub observed: usize,
}

impl InferenceBase {
    pub fn new(model: FiniteModel, observed: usize) -> Result<Self> {
        if observed >= model.num_samples() {
            return Err(Error::SampleOutOfRange {
                index: observed,
                size: model.num_samples(),
            });
        }
        Ok(Self { model, observed })
    }

    pub fn from_label(model: FiniteModel, label: &str) -> Result<Self> {
        let observed = model.sample_index(label)?;
        Ok(Self { model, observed })
    }

    pub fn observed_label(&self) -> &str {
        &self.model.sample_labels()[self.observed]
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// The two-parameter, seven-point model whose maximal ancillaries are not unique.
///
/// Valid for `0 < eps < 1/64`.
pub fn example1_model(eps: &Rational) -> Result<FiniteModel> {
    example1_model_with(eps, false)
}

/// As [`example1_model`], additionally accepting `eps = 0` when
/// `allow_degenerate` is set. At zero several likelihood ratios coincide and
/// the minimal sufficient statistic is no longer the identity.
pub fn example1_model_with(eps: &Rational, allow_degenerate: bool) -> Result<FiniteModel> {
    let zero = Rational::zero();
    let in_range = if allow_degenerate {
        *eps >= zero
    } else {
        *eps > zero
    } && *eps < ratio(1, 64);
    if !in_range {
        return Err(Error::EpsilonOutOfRange(format_exact(eps)));
    }
    let e = eps.clone();
    let e2 = &e * ratio(2, 1);
    let e4 = &e * ratio(4, 1);
    let theta1 = vec![
        ratio(1, 8) + &e,
        ratio(1, 8) - &e,
        ratio(1, 8) + &e2,
        ratio(1, 8) - &e2,
        ratio(1, 14),
        ratio(2, 14),
        ratio(4, 14),
    ];
    let theta2 = vec![
        ratio(1, 16) - &e,
        ratio(3, 16) + &e,
        ratio(3, 16) + &e4,
        ratio(1, 16) - &e4,
        ratio(2, 14),
        ratio(1, 14),
        ratio(4, 14),
    ];
    Ok(
        FiniteModel::new(labels("theta", 2), labels("", 7), vec![theta1, theta2])?
            .with_name("example1"),
    )
}

/// The two-parameter, four-point model with crossing maximal ancillaries.
pub fn example2_model() -> FiniteModel {
    let theta1 = vec![ratio(1, 6), ratio(1, 6), ratio(2, 6), ratio(2, 6)];
    let theta2 = vec![ratio(1, 12), ratio(3, 12), ratio(5, 12), ratio(3, 12)];
    FiniteModel::new(labels("theta", 2), labels("", 4), vec![theta1, theta2])
        .expect("table is a valid model")
        .with_name("example2")
}
