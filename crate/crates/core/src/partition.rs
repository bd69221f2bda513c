//! Set partitions of sample indices.
//!
//! A statistic on a finite sample space is identified with the partition its
//! preimages induce, so this module doubles as the algebra of statistics:
//! `is_coarsening(p, q)` holds exactly when `p` is a function of `q`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of elements (or blocks) an enumeration may range over.
pub const DEFAULT_PARTITION_CAP: usize = 13;

/// A set partition of `{0, .., n-1}` in canonical form: blocks sorted by their
/// least element, elements sorted inside each block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates and canonicalizes a list of blocks.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside ground set of size {n}"
                    )));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidPartition(format!("element {x} repeated")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "element {missing} not covered"
            )));
        }
        Ok(Self::canonical(n, blocks))
    }

    /// Builds the partition whose blocks are the level sets of `labels`.
    pub fn from_labels<T: Ord>(labels: &[T]) -> Self {
        let mut groups: BTreeMap<&T, Vec<usize>> = BTreeMap::new();
        for (x, label) in labels.iter().enumerate() {
            groups.entry(label).or_default().push(x);
        }
        Self::canonical(labels.len(), groups.into_values().collect())
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for block in &mut blocks {
            block.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Self { n, blocks }
    }

    /// The partition into singletons (the identity statistic).
    pub fn singletons(n: usize) -> Self {
        Self {
            n,
            blocks: (0..n).map(|x| vec![x]).collect(),
        }
    }

    /// The one-block partition (the constant statistic).
    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            blocks: if n == 0 {
                vec![]
            } else {
                vec![(0..n).collect()]
            },
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() <= 1
    }

    /// Block index of every element.
    pub fn assignment(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x] = b;
            }
        }
        out
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }

    fn check_ground(&self, other: &Partition) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GroundSetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// True iff every block of `finer` lies inside a block of `self`.
    pub fn is_coarsening(&self, finer: &Partition) -> Result<bool> {
        self.check_ground(finer)?;
        let coarse = self.assignment();
        Ok(finer
            .blocks
            .iter()
            .all(|block| block.iter().all(|&x| coarse[x] == coarse[block[0]])))
    }

    /// Coarsest common refinement.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_ground(other)?;
        let a = self.assignment();
        let b = other.assignment();
        let pairs: Vec<(usize, usize)> = a.into_iter().zip(b).collect();
        Ok(Partition::from_labels(&pairs))
    }

    /// Restriction to a subset of the ground set, re-indexed by position in `subset`.
    ///
    /// `subset` must be sorted and free of duplicates.
    pub fn restrict(&self, subset: &[usize]) -> Partition {
        let assignment = self.assignment();
        let labels: Vec<usize> = subset.iter().map(|&x| assignment[x]).collect();
        Partition::from_labels(&labels)
    }

    /// Expands a partition of this partition's blocks into a partition of the ground set.
    pub fn expand(&self, over_blocks: &Partition) -> Partition {
        debug_assert_eq!(over_blocks.n, self.blocks.len());
        let outer = over_blocks.assignment();
        let mut labels = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                labels[x] = outer[b];
            }
        }
        Partition::from_labels(&labels)
    }

    /// Expresses a coarsening of `self` as a partition of `self`'s blocks.
    pub fn contract(&self, coarser: &Partition) -> Result<Partition> {
        if !coarser.is_coarsening(self)? {
            return Err(Error::InvalidPartition(
                "partition is not a coarsening of the base".into(),
            ));
        }
        let assignment = coarser.assignment();
        let labels: Vec<usize> = self.blocks.iter().map(|b| assignment[b[0]]).collect();
        Ok(Partition::from_labels(&labels))
    }

    /// Renders blocks with `labels` as `1,2|3`.
    pub fn display_with(&self, labels: &[String]) -> String {
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&x| labels[x].as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Parses the `1,2|3` syntax against sample labels.
    pub fn parse_with(text: &str, labels: &[String]) -> Result<Partition> {
        let mut blocks = Vec::new();
        for group in text.trim().split('|') {
            let mut block = Vec::new();
            for label in group.split(',') {
                let label = label.trim();
                let x = labels
                    .iter()
                    .position(|l| l == label)
                    .ok_or_else(|| Error::UnknownSampleLabel(label.to_string()))?;
                block.push(x);
            }
            blocks.push(block);
        }
        Partition::from_blocks(labels.len(), blocks)
    }
}

impl fmt::Display for Partition {
    /// One-based indices, matching how sample points are usually numbered.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
        }
        Ok(())
    }
}

/// Finest partition coarsening every input: connected components of the
/// union of the inputs' same-block relations.
pub fn join(parts: &[Partition]) -> Result<Partition> {
    let first = parts.first().ok_or(Error::EmptyInput)?;
    let n = first.n;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for part in parts {
        first.check_ground(part)?;
        for block in &part.blocks {
            let root = find(&mut parent, block[0]);
            for &x in &block[1..] {
                let r = find(&mut parent, x);
                if r != root {
                    parent[r] = root;
                }
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    Ok(Partition::from_labels(&roots))
}

/// Coarsest common refinement of two partitions.
pub fn meet(p: &Partition, q: &Partition) -> Result<Partition> {
    p.meet(q)
}

/// `p` is a coarsening of `q` (equivalently, `p` is a function of `q`).
pub fn is_coarsening(p: &Partition, q: &Partition) -> Result<bool> {
    p.is_coarsening(q)
}

/// Restricted-growth-string enumeration of set partitions.
///
/// Yields every partition of `{0, .., n-1}` once, or with `coarser_than` every
/// partition whose blocks are unions of its blocks.
#[derive(Debug, Clone)]
pub struct Partitions {
    base: Option<Partition>,
    n: usize,
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn advance(&mut self) -> bool {
        let k = self.rgs.len();
        for i in (1..k).rev() {
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..k {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let over_blocks = Partition::from_labels(&self.rgs);
        let item = match &self.base {
            Some(base) => base.expand(&over_blocks),
            None => over_blocks,
        };
        debug_assert_eq!(item.n, self.n);
        if !self.advance() {
            self.done = true;
        }
        Some(item)
    }
}

/// Enumerates set partitions in restricted-growth-string order.
pub fn enumerate_partitions(
    n: usize,
    coarser_than: Option<&Partition>,
    cap: usize,
) -> Result<Partitions> {
    if n == 0 {
        return Err(Error::InvalidPartition("empty ground set".into()));
    }
    let k = match coarser_than {
        Some(base) => {
            if base.n != n {
                return Err(Error::GroundSetMismatch {
                    left: n,
                    right: base.n,
                });
            }
            base.num_blocks()
        }
        None => n,
    };
    if k > cap {
        return Err(Error::SizeCapExceeded {
            what: "partition enumeration",
            size: k,
            cap,
        });
    }
    Ok(Partitions {
        base: coarser_than.cloned(),
        n,
        rgs: vec![0; k],
        prefix_max: vec![0; k],
        done: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn p(n: usize, blocks: &[&[usize]]) -> Partition {
        // one-based, as printed in the tables
        Partition::from_blocks(
            n,
            blocks
                .iter()
                .map(|b| b.iter().map(|x| x - 1).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Bell numbers from the Bell triangle, independent of the enumerator.
    fn bell_triangle(n: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                let last = *next.last().unwrap();
                next.push(last + v);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    #[test]
    fn canonical_form_is_structural() {
        let a = Partition::from_blocks(4, vec![vec![3, 1], vec![2, 0]]).unwrap();
        let b = Partition::from_blocks(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.blocks(), &[vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn rejects_malformed_blocks() {
        assert!(Partition::from_blocks(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(Partition::from_blocks(2, vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn coarsening_examples() {
        let l = p(7, &[&[1, 2, 3, 4], &[5, 6], &[7]]);
        let a1 = p(7, &[&[1, 2], &[3, 4], &[5, 6], &[7]]);
        let c2 = p(7, &[&[1, 3, 5, 6], &[2, 4], &[7]]);
        assert!(l.is_coarsening(&a1).unwrap());
        assert!(a1.is_coarsening(&a1).unwrap());
        assert!(!c2.is_coarsening(&a1).unwrap());
        assert!(l.is_coarsening(&Partition::singletons(4)).is_err());
    }

    #[test]
    fn join_examples() {
        let a1 = p(7, &[&[1, 2], &[3, 4], &[5, 6], &[7]]);
        let a2 = p(7, &[&[1, 3], &[2, 4], &[5, 6], &[7]]);
        let l = p(7, &[&[1, 2, 3, 4], &[5, 6], &[7]]);
        assert_eq!(join(&[a1.clone(), a2.clone()]).unwrap(), l);
        assert_eq!(join(std::slice::from_ref(&a1)).unwrap(), a1);
        assert_eq!(join(&[a1.clone(), Partition::singletons(7)]).unwrap(), a1);
        assert_eq!(join(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn meet_examples() {
        let a1 = p(7, &[&[1, 2], &[3, 4], &[5, 6], &[7]]);
        let a2 = p(7, &[&[1, 3], &[2, 4], &[5, 6], &[7]]);
        let expected = p(7, &[&[1], &[2], &[3], &[4], &[5, 6], &[7]]);
        assert_eq!(meet(&a1, &a2).unwrap(), expected);
        assert_eq!(meet(&a1, &a1).unwrap(), a1);
        assert_eq!(meet(&a1, &Partition::trivial(7)).unwrap(), a1);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_partitions(3, None, 13).unwrap().count(), 5);
        assert_eq!(enumerate_partitions(7, None, 13).unwrap().count(), 877);
        let a1 = p(7, &[&[1, 2], &[3, 4], &[5, 6], &[7]]);
        let coarser: Vec<_> = enumerate_partitions(7, Some(&a1), 13).unwrap().collect();
        assert_eq!(coarser.len(), 15);
        assert!(coarser.iter().all(|q| q.is_coarsening(&a1).unwrap()));
    }

    #[test]
    fn enumeration_matches_bell_triangle() {
        for n in 1..=10 {
            let all: BTreeSet<Partition> = enumerate_partitions(n, None, 13).unwrap().collect();
            assert_eq!(all.len() as u64, bell_triangle(n), "n = {n}");
        }
    }

    #[test]
    fn enumeration_starts_trivial_ends_singletons() {
        let all: Vec<_> = enumerate_partitions(4, None, 13).unwrap().collect();
        assert_eq!(all.first().unwrap(), &Partition::trivial(4));
        assert_eq!(all.last().unwrap(), &Partition::singletons(4));
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_partitions(14, None, 13),
            Err(Error::SizeCapExceeded {
                size: 14,
                cap: 13,
                ..
            })
        ));
        assert!(enumerate_partitions(14, Some(&Partition::trivial(14)), 13).is_ok());
    }

    #[test]
    fn label_syntax_round_trip() {
        let labels: Vec<String> = (1..=7).map(|i| i.to_string()).collect();
        let l = Partition::parse_with("1,2,3,4|5,6|7", &labels).unwrap();
        assert_eq!(l, p(7, &[&[1, 2, 3, 4], &[5, 6], &[7]]));
        assert_eq!(l.display_with(&labels), "1,2,3,4|5,6|7");
        assert_eq!(l.to_string(), "1,2,3,4|5,6|7");
        assert!(Partition::parse_with("1,2|9", &labels).is_err());
    }

    #[test]
    fn contract_and_expand_are_inverse() {
        let a1 = p(7, &[&[1, 2], &[3, 4], &[5, 6], &[7]]);
        let l = p(7, &[&[1, 2, 3, 4], &[5, 6], &[7]]);
        let contracted = a1.contract(&l).unwrap();
        assert_eq!(contracted.ground_size(), 4);
        assert_eq!(a1.expand(&contracted), l);
        assert!(l.contract(&a1).is_err());
    }

    fn arb_partition(n: usize) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(0..n, n).prop_map(|labels| Partition::from_labels(&labels))
    }

    fn arb_triple() -> impl Strategy<Value = (Partition, Partition, Partition)> {
        (1usize..=8).prop_flat_map(|n| (arb_partition(n), arb_partition(n), arb_partition(n)))
    }

    proptest! {
        #[test]
        fn lattice_laws((a, b, c) in arb_triple()) {
            let j = |x: &Partition, y: &Partition| join(&[x.clone(), y.clone()]).unwrap();
            let m = |x: &Partition, y: &Partition| meet(x, y).unwrap();
            prop_assert_eq!(j(&a, &a), a.clone());
            prop_assert_eq!(m(&a, &a), a.clone());
            prop_assert_eq!(j(&a, &b), j(&b, &a));
            prop_assert_eq!(m(&a, &b), m(&b, &a));
            prop_assert_eq!(j(&j(&a, &b), &c), j(&a, &j(&b, &c)));
            prop_assert_eq!(m(&m(&a, &b), &c), m(&a, &m(&b, &c)));
            prop_assert_eq!(j(&a, &m(&a, &b)), a.clone());
            prop_assert_eq!(m(&a, &j(&a, &b)), a.clone());
            prop_assert!(j(&a, &b).is_coarsening(&a).unwrap());
            prop_assert!(a.is_coarsening(&m(&a, &b)).unwrap());
        }

        #[test]
        fn join_is_least_upper_bound((a, b, c) in arb_triple()) {
            // any common coarsening of a and b coarsens their join
            if c.is_coarsening(&a).unwrap() && c.is_coarsening(&b).unwrap() {
                prop_assert!(c.is_coarsening(&join(&[a, b]).unwrap()).unwrap());
            }
        }
    }
}
