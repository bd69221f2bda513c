//! Stable conditionality: conditioning the minimal sufficient model on the
//! laminal ancillary, SC-equivalence, and audits of candidate equivalence
//! relations over a corpus of inference bases.

use std::fmt;

use crate::ancillary::{AncillaryEngine, Limits};
use crate::error::{Error, Result};
use crate::format::content_hash;
use crate::model::InferenceBase;
use crate::sufficiency::{
    check_thetas, ev_ms, match_points, s_equivalent, Comparison, EvidenceBase, Relabeling,
};

/// Minimal sufficient model conditioned on the laminal block holding the
/// observed value.
pub fn ev_sc(ib: &InferenceBase) -> Result<EvidenceBase> {
    ev_sc_with(ib, Limits::default())
}

pub fn ev_sc_with(ib: &InferenceBase, limits: Limits) -> Result<EvidenceBase> {
    let reduced = ev_ms(ib);
    // points of the reduced model are the mss blocks, so every ancillary of
    // it is a function of the mss
    let engine = AncillaryEngine::new(&reduced.model, None, limits)?;
    let laminal = engine.laminal();
    let contour = laminal.blocks()[laminal
        .block_of(reduced.observed)
        .expect("observed block is covered")]
    .clone();
    let model = reduced.model.condition_on_event(&contour)?;
    debug_assert_eq!(model.num_samples(), contour.len());
    let observed = contour
        .iter()
        .position(|&b| b == reduced.observed)
        .expect("observed block lies in its own contour");
    Ok(EvidenceBase {
        mss: reduced.mss,
        space: contour.clone(),
        model,
        observed,
        contour: Some(contour),
    })
}

fn sc_compare_bases(e1: &EvidenceBase, e2: &EvidenceBase) -> Comparison {
    if e1.ambient_size() != e2.ambient_size() {
        return Comparison::NotEquivalent(format!(
            "minimal sufficient spaces differ in size ({} vs {})",
            e1.ambient_size(),
            e2.ambient_size()
        ));
    }
    let on_contour = match match_points(&e1.model, e1.observed, &e2.model, e2.observed) {
        Comparison::Equivalent(h) => h,
        Comparison::NotEquivalent(reason) => {
            return Comparison::NotEquivalent(format!("on the laminal contour: {reason}"))
        }
    };
    let n = e1.ambient_size();
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (j, &i) in on_contour.mapping.iter().enumerate() {
        mapping[e2.space[j]] = e1.space[i];
        used[e1.space[i]] = true;
    }
    // off the contour: remaining blocks paired in index order
    let mut free = (0..n).filter(|&i| !used[i]);
    for slot in mapping.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = free.next().expect("equal cardinalities");
    }
    Comparison::Equivalent(Relabeling { mapping })
}

/// Compares two inference bases under stable conditionality.
pub fn sc_compare(ib1: &InferenceBase, ib2: &InferenceBase) -> Result<Comparison> {
    check_thetas(&ib1.model, &ib2.model)?;
    Ok(sc_compare_bases(&ev_sc(ib1)?, &ev_sc(ib2)?))
}

/// The canonical relabeling witnessing SC-equivalence, if any.
pub fn sc_equivalent(ib1: &InferenceBase, ib2: &InferenceBase) -> Result<Option<Relabeling>> {
    Ok(sc_compare(ib1, ib2)?.relabeling())
}

/// For an SC-equivalent pair, whether the two conditional inference bases are
/// S-equivalent.
pub fn sc_conditionals_s_equivalent(ib1: &InferenceBase, ib2: &InferenceBase) -> Result<bool> {
    if sc_equivalent(ib1, ib2)?.is_none() {
        return Err(Error::NotScEquivalent);
    }
    let c1 = ev_sc(ib1)?.as_inference_base();
    let c2 = ev_sc(ib2)?.as_inference_base();
    Ok(s_equivalent(&c1, &c2)?.is_some())
}

/// Whether `ev_sc` agrees with `ev_ms` applied after it and with itself
/// applied after `ev_ms`.
pub fn ev_sc_is_idempotent(ib: &InferenceBase) -> Result<bool> {
    let sc = ev_sc(ib)?;
    let ms_after_sc = ev_ms(&sc.as_inference_base());
    let sc_after_ms = ev_sc(&ev_ms(ib).as_inference_base())?;
    let same = |e: &EvidenceBase| e.model == sc.model && e.observed == sc.observed;
    Ok(ms_after_sc.mss.is_singletons() && same(&ms_after_sc) && same(&sc_after_ms))
}

/// Relations that can be audited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Sufficiency: equal minimal sufficient models up to relabeling.
    S,
    /// Stable conditionality: equal laminal-conditional models.
    Sc,
    /// Classical conditionality: a base is related to its conditionals on
    /// the maximal ancillaries through the observed point (and vice versa).
    C,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::S => "S",
            Relation::Sc => "SC",
            Relation::C => "C",
        })
    }
}

/// One pair checked for S implying SC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentCheck {
    pub pair: (usize, usize),
    pub in_s: bool,
    pub in_sc: bool,
}

/// Outcome of checking reflexivity, symmetry and transitivity on a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationAuditReport {
    pub relation: Relation,
    pub corpus_size: usize,
    /// Content hash of each member's model, by corpus index.
    pub hashes: Vec<String>,
    /// Number of ordered pairs found related.
    pub related_pairs: usize,
    pub reflexive_failures: Vec<usize>,
    /// `(a, b)` related but `(b, a)` not.
    pub symmetric_failures: Vec<(usize, usize)>,
    /// `(a, b)` and `(b, c)` related but `(a, c)` not.
    pub transitive_failures: Vec<(usize, usize, usize)>,
    /// Recorded for the SC audit only.
    pub containment_checks: Vec<ContainmentCheck>,
}

impl RelationAuditReport {
    pub fn is_equivalence(&self) -> bool {
        self.reflexive_failures.is_empty()
            && self.symmetric_failures.is_empty()
            && self.transitive_failures.is_empty()
    }

    /// Pairs related by S but not by SC.
    pub fn containment_failures(&self) -> Vec<(usize, usize)> {
        self.containment_checks
            .iter()
            .filter(|c| c.in_s && !c.in_sc)
            .map(|c| c.pair)
            .collect()
    }
}

fn relation_matrix(corpus: &[InferenceBase], relation: Relation) -> Result<Vec<Vec<bool>>> {
    let k = corpus.len();
    let same_thetas =
        |a: usize, b: usize| corpus[a].model.theta_labels() == corpus[b].model.theta_labels();
    let mut related = vec![vec![false; k]; k];
    match relation {
        Relation::S | Relation::Sc => {
            let bases: Vec<EvidenceBase> = corpus
                .iter()
                .map(|ib| match relation {
                    Relation::S => Ok(ev_ms(ib)),
                    _ => ev_sc(ib),
                })
                .collect::<Result<_>>()?;
            for a in 0..k {
                for b in 0..k {
                    if !same_thetas(a, b) {
                        continue;
                    }
                    let (e1, e2) = (&bases[a], &bases[b]);
                    let cmp = match relation {
                        Relation::S => match_points(&e1.model, e1.observed, &e2.model, e2.observed),
                        _ => sc_compare_bases(e1, e2),
                    };
                    related[a][b] = matches!(cmp, Comparison::Equivalent(_));
                }
            }
        }
        Relation::C => {
            let conditionals: Vec<Vec<InferenceBase>> = corpus
                .iter()
                .map(classical_conditionals)
                .collect::<Result<_>>()?;
            for a in 0..k {
                for b in 0..k {
                    related[a][b] = corpus[a] == corpus[b]
                        || conditionals[a].contains(&corpus[b])
                        || conditionals[b].contains(&corpus[a]);
                }
            }
        }
    }
    Ok(related)
}

/// The inference bases `(M | A(x), x)` for every maximal ancillary `A` of `M`.
pub fn classical_conditionals(ib: &InferenceBase) -> Result<Vec<InferenceBase>> {
    let engine = AncillaryEngine::new(&ib.model, None, Limits::default())?;
    let mut out = Vec::new();
    for a in engine.maximal() {
        let block = &a.blocks()[a.block_of(ib.observed).expect("covered")];
        let model = ib.model.condition_on_event(block)?;
        let observed = model
            .sample_index(ib.observed_label())
            .expect("observed point is kept");
        let conditional = InferenceBase { model, observed };
        if !out.contains(&conditional) {
            out.push(conditional);
        }
    }
    Ok(out)
}

/// Exhaustively checks the three equivalence-relation laws on `corpus`.
pub fn audit_relation(corpus: &[InferenceBase], relation: Relation) -> Result<RelationAuditReport> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput);
    }
    let k = corpus.len();
    let related = relation_matrix(corpus, relation)?;

    let reflexive_failures = (0..k).filter(|&a| !related[a][a]).collect();
    let mut symmetric_failures = Vec::new();
    let mut transitive_failures = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if !related[a][b] {
                continue;
            }
            if !related[b][a] {
                symmetric_failures.push((a, b));
            }
            for (c, &bc) in related[b].iter().enumerate() {
                if bc && !related[a][c] {
                    transitive_failures.push((a, b, c));
                }
            }
        }
    }

    let containment_checks = if relation == Relation::Sc {
        let s = relation_matrix(corpus, Relation::S)?;
        (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .map(|(a, b)| ContainmentCheck {
                pair: (a, b),
                in_s: s[a][b],
                in_sc: related[a][b],
            })
            .collect()
    } else {
        Vec::new()
    };

    Ok(RelationAuditReport {
        relation,
        corpus_size: k,
        hashes: corpus.iter().map(|ib| content_hash(&ib.model)).collect(),
        related_pairs: related.iter().flatten().filter(|r| **r).count(),
        reflexive_failures,
        symmetric_failures,
        transitive_failures,
        containment_checks,
    })
}
