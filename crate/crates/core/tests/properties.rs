use ancillary_core::ancillary::{is_ancillary, AncillaryEngine, Limits};
use ancillary_core::corpus::{random_corpus, random_models, CorpusShape};
use ancillary_core::evidence::{ev_sc, sc_equivalent};
use ancillary_core::model::Weights;
use ancillary_core::rational::ratio;
use ancillary_core::sufficiency::{ev_ms, model_of_statistic, mss_partition, s_equivalent};
use ancillary_core::{example1_model, FiniteModel, Partition, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn models() -> Vec<FiniteModel> {
    random_models(99, 60, CorpusShape::default())
}

fn random_weights<R: Rng>(rng: &mut R, k: usize) -> Weights {
    let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=9)).collect();
    let total: i64 = raw.iter().sum::<i64>().max(1);
    let mut values: Vec<Rational> = raw.iter().map(|&w| ratio(w, total)).collect();
    if raw.iter().all(|&w| w == 0) {
        values[0] = ratio(1, 1);
    }
    Weights::new(values).unwrap()
}

#[test]
fn mixing_with_own_marginal_is_identity() {
    for model in models() {
        let engine = AncillaryEngine::new(&model, None, Limits::default()).unwrap();
        for u in engine.ancillaries() {
            let marginal: Vec<Rational> =
                u.blocks().iter().map(|b| model.event_prob(0, b)).collect();
            let mixed = model
                .mixture_model(u, &Weights::new(marginal).unwrap())
                .unwrap();
            assert_eq!(mixed, model);
        }
    }
}

#[test]
fn stable_ancillaries_survive_random_reweighting() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mixtures = 0;
    for model in models() {
        let engine = AncillaryEngine::new(&model, None, Limits::default()).unwrap();
        let minimal = engine.minimal();
        let ancillaries = engine.ancillaries();
        for v in ancillaries.iter().filter(|v| !v.is_trivial()).take(6) {
            for _ in 0..50 {
                let weights = random_weights(&mut rng, v.num_blocks());
                let mixed = model.mixture_model(v, &weights).unwrap();
                for u in &minimal {
                    let kept = u.restrict(
                        &(0..model.num_samples())
                            .filter(|&x| mixed.sample_index(&model.sample_labels()[x]).is_ok())
                            .collect::<Vec<_>>(),
                    );
                    assert!(
                        is_ancillary(&mixed, &kept).unwrap(),
                        "{u} under reweighting of {v}"
                    );
                }
                mixtures += 1;
            }
        }
    }
    assert!(mixtures >= 1000);
}

#[test]
fn pushforward_composes() {
    // model of a coarsening equals the model of it taken on the finer statistic
    for model in models() {
        let mss = mss_partition(&model);
        let reduced = model_of_statistic(&model, &mss).unwrap();
        let trivial = Partition::trivial(model.num_samples());
        let once = model_of_statistic(&model, &trivial).unwrap();
        let twice =
            model_of_statistic(&reduced, &Partition::trivial(reduced.num_samples())).unwrap();
        assert_eq!(once.rows(), twice.rows());
        assert!(mss_partition(&reduced).is_singletons());
    }
}

#[test]
fn s_implies_sc_on_random_corpus() {
    let corpus = random_corpus(17, 40, CorpusShape::default());
    let mut s_pairs = 0;
    for a in &corpus {
        for b in &corpus {
            if a.model.theta_labels() != b.model.theta_labels() {
                continue;
            }
            if let Some(h) = s_equivalent(a, b).unwrap() {
                s_pairs += 1;
                assert!(h.is_bijection());
                assert!(sc_equivalent(a, b).unwrap().is_some());
                let back = s_equivalent(b, a).unwrap().unwrap();
                assert_eq!(back, h.inverse());
            }
        }
    }
    assert!(s_pairs > corpus.len());
}

#[test]
fn evidence_functions_are_idempotent() {
    for ib in random_corpus(23, 40, CorpusShape::default()) {
        let ms = ev_ms(&ib);
        assert!(ev_ms(&ms.as_inference_base()).mss.is_singletons());
        let sc = ev_sc(&ib).unwrap();
        let again = ev_sc(&sc.as_inference_base()).unwrap();
        assert_eq!(again.model, sc.model);
        assert_eq!(again.observed, sc.observed);
    }
}

#[test]
fn seven_point_model_has_one_exceptional_epsilon() {
    let model = example1_model(&ratio(1, 224)).unwrap();
    let extra = Partition::parse_with("1,5|2,3,4,6,7", model.sample_labels()).unwrap();
    assert!(is_ancillary(&model, &extra).unwrap());
    let nearby = example1_model(&ratio(1, 225)).unwrap();
    assert!(!is_ancillary(&nearby, &extra).unwrap());
}
