//! Minimal sufficiency, pushforward models and the minimal-sufficiency evidence function.

use crate::error::{Error, Result};
use crate::model::{FiniteModel, InferenceBase};
use crate::partition::Partition;
use crate::rational::{format_exact, Rational};

/// Partition of the sample space into classes of proportional likelihood:
/// `x ~ y` iff `P_theta(x) = c * P_theta(y)` for all theta and one constant `c`.
///
/// Columns are compared after dividing by their own sum, which is positive for
/// every sample point of a valid model.
pub fn mss_partition(model: &FiniteModel) -> Partition {
    let normalized: Vec<Vec<Rational>> = (0..model.num_samples())
        .map(|x| normalize(&model.column(x)))
        .collect();
    Partition::from_labels(&normalized)
}

fn normalize(column: &[Rational]) -> Vec<Rational> {
    let total: Rational = column.iter().sum();
    column.iter().map(|p| p / &total).collect()
}

/// Label of a block of sample points: the point's own label for a singleton,
/// otherwise the labels joined with `+`.
pub fn block_label(model: &FiniteModel, block: &[usize]) -> String {
    block
        .iter()
        .map(|&x| model.sample_labels()[x].as_str())
        .collect::<Vec<_>>()
        .join("+")
}

/// The model of a statistic: its sample points are the blocks of `partition`.
pub fn model_of_statistic(model: &FiniteModel, partition: &Partition) -> Result<FiniteModel> {
    model.check_partition(partition)?;
    let probs = (0..model.num_thetas())
        .map(|t| {
            partition
                .blocks()
                .iter()
                .map(|b| model.event_prob(t, b))
                .collect()
        })
        .collect();
    let labels = partition
        .blocks()
        .iter()
        .map(|b| block_label(model, b))
        .collect();
    Ok(FiniteModel::new(model.theta_labels().to_vec(), labels, probs)?.with_name(model.name()))
}

/// Output of an evidence function: a model over minimal sufficient blocks
/// (possibly conditioned on a laminal block) and the observed block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceBase {
    /// The minimal sufficient partition of the original sample space.
    pub mss: Partition,
    /// Blocks of `mss` (by index) that form the sample points of `model`.
    pub space: Vec<usize>,
    pub model: FiniteModel,
    /// Position of the observed block in `space`.
    pub observed: usize,
    /// The laminal block, as `mss` block indices, when the model is conditional.
    pub contour: Option<Vec<usize>>,
}

impl EvidenceBase {
    /// Original sample indices making up the observed block.
    pub fn observed_block(&self) -> &[usize] {
        &self.mss.blocks()[self.space[self.observed]]
    }

    /// Size of the full minimal sufficient sample space.
    pub fn ambient_size(&self) -> usize {
        self.mss.num_blocks()
    }

    /// The pair (model, observed block) as an inference base in its own right.
    pub fn as_inference_base(&self) -> InferenceBase {
        InferenceBase {
            model: self.model.clone(),
            observed: self.observed,
        }
    }
}

/// Reduces an inference base to the model of its minimal sufficient statistic.
pub fn ev_ms(ib: &InferenceBase) -> EvidenceBase {
    let mss = mss_partition(&ib.model);
    let model = model_of_statistic(&ib.model, &mss).expect("mss partitions the sample space");
    let observed = mss
        .block_of(ib.observed)
        .expect("observed point is covered");
    EvidenceBase {
        space: (0..mss.num_blocks()).collect(),
        mss,
        model,
        observed,
        contour: None,
    }
}

/// A bijection between block index sets: block `j` of the second base maps
/// to block `mapping[j]` of the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    pub mapping: Vec<usize>,
}

impl Relabeling {
    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut mapping = vec![0; self.mapping.len()];
        for (j, &i) in self.mapping.iter().enumerate() {
            mapping[i] = j;
        }
        Self { mapping }
    }

    /// `self` after `inner`: maps through `inner` first.
    pub fn compose(&self, inner: &Relabeling) -> Self {
        Self {
            mapping: inner.mapping.iter().map(|&k| self.mapping[k]).collect(),
        }
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.mapping.len()];
        self.mapping
            .iter()
            .all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
    }
}

/// Result of comparing two inference bases under S or SC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Equivalent(Relabeling),
    NotEquivalent(String),
}

impl Comparison {
    pub fn relabeling(self) -> Option<Relabeling> {
        match self {
            Comparison::Equivalent(h) => Some(h),
            Comparison::NotEquivalent(_) => None,
        }
    }
}

pub(crate) fn check_thetas(a: &FiniteModel, b: &FiniteModel) -> Result<()> {
    if a.theta_labels() != b.theta_labels() {
        return Err(Error::ThetaSpaceMismatch {
            left: a.theta_labels().to_vec(),
            right: b.theta_labels().to_vec(),
        });
    }
    Ok(())
}

fn show_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_exact).collect();
    format!("({})", parts.join(", "))
}

/// Finds a bijection `h` from the second model's points onto the first's that
/// preserves probability vectors and sends `observed2` to `observed1`.
///
/// The observed points are paired first; every other point of the second
/// model takes the lowest unused point of the first with the same vector.
pub(crate) fn match_points(
    first: &FiniteModel,
    observed1: usize,
    second: &FiniteModel,
    observed2: usize,
) -> Comparison {
    let n = first.num_samples();
    if n != second.num_samples() {
        return Comparison::NotEquivalent(format!(
            "sample spaces differ in size ({} vs {})",
            n,
            second.num_samples()
        ));
    }
    let cols1: Vec<Vec<Rational>> = (0..n).map(|x| first.column(x)).collect();
    let cols2: Vec<Vec<Rational>> = (0..n).map(|x| second.column(x)).collect();
    if cols1[observed1] != cols2[observed2] {
        return Comparison::NotEquivalent(format!(
            "observed points have different probability vectors {} vs {}",
            show_vector(&cols1[observed1]),
            show_vector(&cols2[observed2])
        ));
    }
    let mut used = vec![false; n];
    let mut mapping = vec![usize::MAX; n];
    used[observed1] = true;
    mapping[observed2] = observed1;
    for j in (0..n).filter(|&j| j != observed2) {
        match (0..n).find(|&i| !used[i] && cols1[i] == cols2[j]) {
            Some(i) => {
                used[i] = true;
                mapping[j] = i;
            }
            None => {
                return Comparison::NotEquivalent(format!(
                    "point `{}` of the second base has no counterpart with vector {}",
                    second.sample_labels()[j],
                    show_vector(&cols2[j])
                ))
            }
        }
    }
    Comparison::Equivalent(Relabeling { mapping })
}

/// Compares two inference bases under the sufficiency principle: their
/// minimal sufficient models must coincide after relabeling blocks, with the
/// observed blocks corresponding.
pub fn s_compare(ib1: &InferenceBase, ib2: &InferenceBase) -> Result<Comparison> {
    check_thetas(&ib1.model, &ib2.model)?;
    let e1 = ev_ms(ib1);
    let e2 = ev_ms(ib2);
    Ok(match_points(&e1.model, e1.observed, &e2.model, e2.observed))
}

/// The canonical relabeling witnessing S-equivalence, if any.
pub fn s_equivalent(ib1: &InferenceBase, ib2: &InferenceBase) -> Result<Option<Relabeling>> {
    Ok(s_compare(ib1, ib2)?.relabeling())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example1_model, example1_model_with, example2_model};
    use crate::rational::{int, ratio};

    fn ex1() -> FiniteModel {
        example1_model(&ratio(1, 100)).unwrap()
    }

    fn one_theta(n: usize) -> FiniteModel {
        FiniteModel::new(
            vec!["t".into()],
            (1..=n).map(|i| i.to_string()).collect(),
            vec![vec![ratio(1, n as i64); n]],
        )
        .unwrap()
    }

    #[test]
    fn example1_likelihood_ratios_are_distinct() {
        // LR per column at eps = 1/100, computed from the table entries
        let m = ex1();
        let lrs: Vec<Rational> = (0..7).map(|x| m.prob(0, x) / m.prob(1, x)).collect();
        assert_eq!(
            lrs,
            vec![
                ratio(18, 7),
                ratio(46, 79),
                ratio(58, 91),
                ratio(14, 3),
                ratio(1, 2),
                int(2),
                int(1)
            ]
        );
        assert_eq!(mss_partition(&m), Partition::singletons(7));
    }

    #[test]
    fn degenerate_example1_collapses() {
        let m = example1_model_with(&int(0), true).unwrap();
        let expected =
            Partition::from_blocks(7, vec![vec![0, 3, 5], vec![1, 2], vec![4], vec![6]]).unwrap();
        assert_eq!(mss_partition(&m), expected);
    }

    #[test]
    fn one_theta_mss_is_trivial() {
        assert_eq!(mss_partition(&one_theta(5)), Partition::trivial(5));
    }

    #[test]
    fn mss_handles_zero_entries() {
        // no row is everywhere positive
        let m = FiniteModel::new(
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into(), "z".into(), "w".into()],
            vec![
                vec![ratio(1, 4), ratio(1, 2), ratio(1, 4), int(0)],
                vec![int(0), int(0), ratio(1, 2), ratio(1, 2)],
            ],
        )
        .unwrap();
        let expected = Partition::from_blocks(4, vec![vec![0, 1], vec![2], vec![3]]).unwrap();
        assert_eq!(mss_partition(&m), expected);
    }

    #[test]
    fn pushforward_examples() {
        let l = Partition::from_blocks(7, vec![vec![0, 1, 2, 3], vec![4, 5], vec![6]]).unwrap();
        let ml = model_of_statistic(&ex1(), &l).unwrap();
        for row in ml.rows() {
            assert_eq!(row, &vec![ratio(1, 2), ratio(3, 14), ratio(4, 14)]);
        }
        assert_eq!(ml.sample_labels(), &["1+2+3+4", "5+6", "7"]);

        assert_eq!(
            model_of_statistic(&ex1(), &Partition::singletons(7)).unwrap(),
            ex1()
        );

        let a1 = Partition::from_blocks(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let m = model_of_statistic(&example2_model(), &a1).unwrap();
        for row in m.rows() {
            assert_eq!(row, &vec![ratio(1, 3), ratio(2, 3)]);
        }
        assert!(model_of_statistic(&ex1(), &a1).is_err());
    }

    #[test]
    fn ev_ms_examples() {
        let e = ev_ms(&InferenceBase::new(ex1(), 2).unwrap());
        assert_eq!(e.ambient_size(), 7);
        assert_eq!(e.observed_block(), &[2]);
        assert!(e.contour.is_none());

        let e = ev_ms(&InferenceBase::new(one_theta(3), 1).unwrap());
        assert_eq!(e.model.num_samples(), 1);

        let degenerate = example1_model_with(&int(0), true).unwrap();
        let e = ev_ms(&InferenceBase::new(degenerate, 3).unwrap());
        assert_eq!(e.observed_block(), &[0, 3, 5]);
    }

    #[test]
    fn s_equivalence_examples() {
        let ib5 = InferenceBase::new(ex1(), 4).unwrap();
        let ib6 = InferenceBase::new(ex1(), 5).unwrap();
        assert_eq!(
            s_equivalent(&ib5, &ib5).unwrap(),
            Some(Relabeling::identity(7))
        );
        assert_eq!(s_equivalent(&ib5, &ib6).unwrap(), None);

        let reduced = ev_ms(&ib5).as_inference_base();
        assert!(s_equivalent(&ib5, &reduced).unwrap().is_some());

        let degenerate =
            InferenceBase::new(example1_model_with(&int(0), true).unwrap(), 3).unwrap();
        let reduced = ev_ms(&degenerate).as_inference_base();
        let h = s_equivalent(&degenerate, &reduced).unwrap().unwrap();
        assert!(h.is_bijection());
    }

    #[test]
    fn s_requires_matching_thetas() {
        let ib = InferenceBase::new(ex1(), 0).unwrap();
        let other = InferenceBase::new(one_theta(2), 0).unwrap();
        assert!(matches!(
            s_equivalent(&ib, &other),
            Err(Error::ThetaSpaceMismatch { .. })
        ));
    }

    #[test]
    fn permuted_models_are_s_equivalent() {
        let m = example2_model();
        let permuted = FiniteModel::new(
            m.theta_labels().to_vec(),
            vec!["d".into(), "c".into(), "b".into(), "a".into()],
            m.rows()
                .iter()
                .map(|r| r.iter().rev().cloned().collect())
                .collect(),
        )
        .unwrap();
        let h = s_equivalent(
            &InferenceBase::new(m, 0).unwrap(),
            &InferenceBase::new(permuted, 3).unwrap(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(h.mapping, vec![3, 2, 1, 0]);
    }

    #[test]
    fn relabeling_algebra() {
        let h = Relabeling {
            mapping: vec![2, 0, 1],
        };
        assert!(h.is_bijection());
        assert_eq!(h.compose(&h.inverse()), Relabeling::identity(3));
        assert!(!Relabeling {
            mapping: vec![0, 0]
        }
        .is_bijection());
    }
}
