//! Seeded pseudorandom models and inference-base corpora.
//!
//! Probabilities come from a small integer grid and are normalized exactly.
//! Besides unstructured grids the generator plants ancillary structure
//! (blocks with fixed mass, and crossed two-by-two tables with fixed margins,
//! the pattern that produces several maximal ancillaries), and derives
//! S-equivalent copies of earlier members by permuting or splitting points.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::evidence::classical_conditionals;
use crate::model::{example1_model, example2_model, FiniteModel, InferenceBase};
use crate::rational::{int, ratio, Rational};

/// Bounds on generated models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusShape {
    pub max_samples: usize,
    pub max_thetas: usize,
}

impl Default for CorpusShape {
    fn default() -> Self {
        Self {
            max_samples: 7,
            max_thetas: 3,
        }
    }
}

fn theta_labels(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("theta{i}")).collect()
}

fn sample_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn normalized(weights: &[u32]) -> Vec<Rational> {
    let total: u32 = weights.iter().sum();
    weights
        .iter()
        .map(|&w| ratio(w as i64, total as i64))
        .collect()
}

fn pick_thetas<R: Rng>(rng: &mut R, shape: CorpusShape) -> usize {
    // one-parameter models make every partition ancillary; keep them rare
    if shape.max_thetas == 1 || rng.gen_ratio(1, 10) {
        1
    } else {
        rng.gen_range(2..=shape.max_thetas)
    }
}

/// Every column positive somewhere: bump a null column in the first row.
fn revive_columns(grid: &mut [Vec<u32>]) {
    for x in 0..grid[0].len() {
        if grid.iter().all(|row| row[x] == 0) {
            grid[0][x] = 1;
        }
    }
}

fn grid_model<R: Rng>(rng: &mut R, shape: CorpusShape) -> Vec<Vec<Rational>> {
    let n = rng.gen_range(2..=shape.max_samples);
    let m = pick_thetas(rng, shape);
    let mut grid: Vec<Vec<u32>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect())
        .collect();
    revive_columns(&mut grid);
    for row in grid.iter_mut() {
        if row.iter().all(|&w| w == 0) {
            row[rng.gen_range(0..n)] = 1;
        }
    }
    grid.iter().map(|row| normalized(row)).collect()
}

/// Blocks with parameter-free mass and parameter-dependent insides.
fn planted_model<R: Rng>(rng: &mut R, shape: CorpusShape) -> Vec<Vec<Rational>> {
    let n = rng.gen_range(2..=shape.max_samples);
    let m = pick_thetas(rng, shape);
    let groups = rng.gen_range(1..=3.min(n));
    let mut assignment: Vec<usize> = (0..n).map(|x| x % groups).collect();
    assignment.shuffle(rng);
    let mass: Vec<u32> = (0..groups).map(|_| rng.gen_range(1..=4)).collect();
    let mass = normalized(&mass);
    let mut inner: Vec<Vec<u32>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect())
        .collect();
    revive_columns(&mut inner);
    for row in inner.iter_mut() {
        for g in 0..groups {
            if (0..n).filter(|&x| assignment[x] == g).all(|x| row[x] == 0) {
                let first = (0..n).find(|&x| assignment[x] == g).unwrap();
                row[first] = 1;
            }
        }
    }
    inner
        .iter()
        .map(|row| {
            (0..n)
                .map(|x| {
                    let g = assignment[x];
                    let total: u32 = (0..n).filter(|&y| assignment[y] == g).map(|y| row[y]).sum();
                    &mass[g] * ratio(row[x] as i64, total as i64)
                })
                .collect()
        })
        .collect()
}

/// A two-by-two table with fixed row and column margins, plus a few planted
/// extra points.
fn crossed_model<R: Rng>(rng: &mut R, shape: CorpusShape) -> Vec<Vec<Rational>> {
    const N: i64 = 12;
    let m = rng.gen_range(2..=shape.max_thetas.max(2));
    loop {
        let r1 = rng.gen_range(2..=10);
        let c1 = rng.gen_range(2..=10);
        let lo = (r1 + c1 - N).max(0);
        let hi = r1.min(c1);
        let tables: Vec<[i64; 4]> = (0..m)
            .map(|_| {
                let a = rng.gen_range(lo..=hi);
                [a, r1 - a, c1 - a, N - r1 - c1 + a]
            })
            .collect();
        if (0..4).any(|cell| tables.iter().all(|t| t[cell] == 0)) {
            continue;
        }
        let extra = rng.gen_range(0..=shape.max_samples.saturating_sub(4).min(3));
        let cross_mass = if extra == 0 {
            int(1)
        } else {
            ratio(rng.gen_range(1..=3), 4)
        };
        let extra_mass: Vec<u32> = (0..extra).map(|_| rng.gen_range(1..=3)).collect();
        let extra_mass: Vec<Rational> = normalized(&extra_mass)
            .into_iter()
            .map(|w| w * (int(1) - &cross_mass))
            .collect();
        // extra points form one planted block with theta-dependent insides
        let rows = tables
            .iter()
            .map(|t| {
                let mut row: Vec<Rational> = t.iter().map(|&c| &cross_mass * ratio(c, N)).collect();
                if extra > 0 {
                    let inner: Vec<u32> = (0..extra).map(|_| rng.gen_range(1..=3)).collect();
                    let inner = normalized(&inner);
                    let block_mass: Rational = extra_mass.iter().sum();
                    row.extend(inner.into_iter().map(|w| w * &block_mass));
                }
                row
            })
            .collect();
        return rows;
    }
}

/// Draws one model; sample order is shuffled so structure is not positional.
pub fn random_model<R: Rng>(rng: &mut R, shape: CorpusShape) -> FiniteModel {
    let rows = match rng.gen_range(0..3) {
        0 => grid_model(rng, shape),
        1 => planted_model(rng, shape),
        _ => crossed_model(rng, shape),
    };
    let n = rows[0].len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let rows = rows
        .into_iter()
        .map(|row| order.iter().map(|&x| row[x].clone()).collect())
        .collect::<Vec<Vec<Rational>>>();
    FiniteModel::new(theta_labels(rows.len()), sample_labels(n), rows)
        .expect("generator yields valid models")
        .with_name("random")
}

/// `count` models from a fixed seed.
pub fn random_models(seed: u64, count: usize, shape: CorpusShape) -> Vec<FiniteModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_model(&mut rng, shape)).collect()
}

/// Reorders sample points; the result is S-equivalent to the input.
fn permuted<R: Rng>(rng: &mut R, ib: &InferenceBase) -> InferenceBase {
    let n = ib.model.num_samples();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let rows = ib
        .model
        .rows()
        .iter()
        .map(|row| order.iter().map(|&x| row[x].clone()).collect())
        .collect();
    let labels = order
        .iter()
        .map(|&x| format!("p{}", ib.model.sample_labels()[x]))
        .collect();
    let model = FiniteModel::new(ib.model.theta_labels().to_vec(), labels, rows)
        .expect("permutation keeps validity")
        .with_name("permuted");
    let observed = order.iter().position(|&x| x == ib.observed).unwrap();
    InferenceBase { model, observed }
}

/// Splits one sample point into two proportional halves; S-equivalent to the input.
fn split<R: Rng>(rng: &mut R, ib: &InferenceBase) -> InferenceBase {
    let n = ib.model.num_samples();
    let x = rng.gen_range(0..n);
    let mut labels = Vec::with_capacity(n + 1);
    let mut rows: Vec<Vec<Rational>> = vec![Vec::with_capacity(n + 1); ib.model.num_thetas()];
    for y in 0..n {
        let label = &ib.model.sample_labels()[y];
        let pieces: &[(&str, Rational)] = if y == x {
            &[("a", ratio(1, 3)), ("b", ratio(2, 3))]
        } else {
            &[("", Rational::zero())]
        };
        for (suffix, share) in pieces {
            labels.push(format!("{label}{suffix}"));
            for (t, row) in rows.iter_mut().enumerate() {
                let p = ib.model.prob(t, y);
                row.push(if suffix.is_empty() {
                    p.clone()
                } else {
                    p * share
                });
            }
        }
    }
    let model = FiniteModel::new(ib.model.theta_labels().to_vec(), labels, rows)
        .expect("splitting keeps validity")
        .with_name("split");
    let observed = if ib.observed > x {
        ib.observed + 1
    } else {
        ib.observed
    };
    InferenceBase { model, observed }
}

/// `size` inference bases from a fixed seed. About a quarter are derived
/// from earlier members (permuted or split) so that equivalent pairs occur.
pub fn random_corpus(seed: u64, size: usize, shape: CorpusShape) -> Vec<InferenceBase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<InferenceBase> = Vec::with_capacity(size);
    while out.len() < size {
        if !out.is_empty() && rng.gen_ratio(1, 4) {
            let parent = out[rng.gen_range(0..out.len())].clone();
            let child = if rng.gen_bool(0.5) || parent.model.num_samples() >= shape.max_samples {
                permuted(&mut rng, &parent)
            } else {
                split(&mut rng, &parent)
            };
            out.push(child);
        } else {
            let model = random_model(&mut rng, shape);
            let observed = rng.gen_range(0..model.num_samples());
            out.push(InferenceBase { model, observed });
        }
    }
    out
}

/// Two bases that agree once conditioned on their laminal contours but whose
/// unconditional models differ: SC-equivalent, not S-equivalent.
pub fn sc_not_s_pair() -> (InferenceBase, InferenceBase) {
    let build = |w: Rational| {
        let v = int(1) - &w;
        let rows = vec![
            vec![
                &w * ratio(1, 4),
                &w * ratio(3, 4),
                &v * ratio(1, 3),
                &v * ratio(2, 3),
            ],
            vec![
                &w * ratio(3, 4),
                &w * ratio(1, 4),
                &v * ratio(2, 3),
                &v * ratio(1, 3),
            ],
        ];
        let model = FiniteModel::new(theta_labels(2), sample_labels(4), rows)
            .expect("valid mixture")
            .with_name("instruments");
        InferenceBase { model, observed: 0 }
    };
    (build(ratio(1, 2)), build(ratio(1, 3)))
}

/// The seeded corpus plus both worked examples (every observed point), the
/// classical conditionals of their first points, and the SC-not-S pair.
pub fn audit_corpus(seed: u64, size: usize) -> Result<Vec<InferenceBase>> {
    let mut corpus = random_corpus(seed, size, CorpusShape::default());
    let ex1 = example1_model(&ratio(1, 100))?;
    let ex2 = example2_model();
    for model in [ex1, ex2] {
        for x in 0..model.num_samples() {
            corpus.push(InferenceBase::new(model.clone(), x)?);
        }
        let first = InferenceBase::new(model, 0)?;
        corpus.extend(classical_conditionals(&first)?);
    }
    let (a, b) = sc_not_s_pair();
    corpus.push(a);
    corpus.push(b);
    Ok(corpus)
}
