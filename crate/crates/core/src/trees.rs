//! Finite-depth subtrees of the tree of sequences `⟨f⟩`, where the `i`-th
//! coordinate of a node ranges over `0..f(i)`.
//!
//! A [`FiniteTree`] always carries one level per length `0..=depth`; levels
//! past the end of a branch are simply empty. Node colourings are stored as
//! the canonical rule plus an explicit exception set.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The branching bounds `f(0), ..., f(depth - 1)`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct BranchingSpec {
    f: Vec<u32>,
}

impl BranchingSpec {
    pub fn new(f: Vec<u32>) -> Result<Self> {
        if let Some((i, &v)) = f.iter().enumerate().find(|(_, &v)| v < 2) {
            return Err(Error::params(format!("f({i}) = {v}, every branching bound must be >= 2")));
        }
        Ok(BranchingSpec { f })
    }

    /// `f ≡ value` up to `depth`.
    pub fn constant(value: u32, depth: usize) -> Result<Self> {
        Self::new(vec![value; depth])
    }

    pub fn binary(depth: usize) -> Self {
        BranchingSpec { f: vec![2; depth] }
    }

    pub fn depth(&self) -> usize {
        self.f.len()
    }

    pub fn bound(&self, i: usize) -> u32 {
        self.f[i]
    }

    pub fn bounds(&self) -> &[u32] {
        &self.f
    }

    /// `Π_{i<n} f(i)`, the size of level `n` of the full tree.
    pub fn full_level_size(&self, n: usize) -> BigUint {
        self.f[..n].iter().fold(BigUint::one(), |acc, &v| acc * v)
    }

    /// Checks that `node` is an element of `⟨f⟩` within this depth.
    pub fn admits(&self, node: &[u32]) -> bool {
        node.len() <= self.depth() && node.iter().zip(&self.f).all(|(&c, &b)| c < b)
    }
}

impl TryFrom<Vec<u32>> for BranchingSpec {
    type Error = Error;

    fn try_from(f: Vec<u32>) -> Result<Self> {
        BranchingSpec::new(f)
    }
}

impl From<BranchingSpec> for Vec<u32> {
    fn from(s: BranchingSpec) -> Self {
        s.f
    }
}

/// A node of `⟨f⟩`: a finite coordinate sequence.
pub type TreeNode = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeDoc", into = "TreeDoc")]
pub struct FiniteTree {
    spec: BranchingSpec,
    levels: Vec<Vec<TreeNode>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    f: Vec<u32>,
    levels: Vec<Vec<TreeNode>>,
}

impl TryFrom<TreeDoc> for FiniteTree {
    type Error = Error;

    fn try_from(doc: TreeDoc) -> Result<Self> {
        FiniteTree::from_levels(BranchingSpec::new(doc.f)?, doc.levels)
    }
}

impl From<FiniteTree> for TreeDoc {
    fn from(t: FiniteTree) -> Self {
        TreeDoc {
            f: t.spec.f,
            levels: t.levels,
        }
    }
}

impl FiniteTree {
    /// Builds a tree from per-level node lists. Missing trailing levels are
    /// treated as empty; nodes are sorted and deduplicated; downward closure
    /// and coordinate bounds are validated.
    pub fn from_levels(spec: BranchingSpec, mut levels: Vec<Vec<TreeNode>>) -> Result<Self> {
        if levels.len() > spec.depth() + 1 {
            return Err(Error::MalformedTree(format!(
                "{} levels given for depth {}",
                levels.len(),
                spec.depth()
            )));
        }
        levels.resize(spec.depth() + 1, Vec::new());
        for (n, level) in levels.iter_mut().enumerate() {
            level.sort();
            level.dedup();
            for node in level.iter() {
                if node.len() != n {
                    return Err(Error::MalformedTree(format!(
                        "node {node:?} listed on level {n}"
                    )));
                }
                if !spec.admits(node) {
                    return Err(Error::MalformedTree(format!(
                        "node {node:?} violates the branching bounds {:?}",
                        spec.bounds()
                    )));
                }
            }
        }
        for n in 1..levels.len() {
            for node in &levels[n] {
                if levels[n - 1].binary_search_by(|p| p.as_slice().cmp(&node[..n - 1])).is_err() {
                    return Err(Error::MalformedTree(format!(
                        "node {node:?} has no parent in the tree"
                    )));
                }
            }
        }
        Ok(FiniteTree { spec, levels })
    }

    /// Builds the downward closure of the given nodes.
    pub fn from_nodes(spec: BranchingSpec, nodes: impl IntoIterator<Item = TreeNode>) -> Result<Self> {
        let mut sets: Vec<BTreeSet<TreeNode>> = vec![BTreeSet::new(); spec.depth() + 1];
        for node in nodes {
            if !spec.admits(&node) {
                return Err(Error::MalformedTree(format!("node {node:?} is not in ⟨f⟩")));
            }
            for len in 0..=node.len() {
                sets[len].insert(node[..len].to_vec());
            }
        }
        let levels = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(FiniteTree { spec, levels })
    }

    pub fn empty(spec: BranchingSpec) -> Self {
        let levels = vec![Vec::new(); spec.depth() + 1];
        FiniteTree { spec, levels }
    }

    /// The whole of `⟨f⟩` up to the spec depth.
    pub fn full(spec: BranchingSpec) -> Self {
        let mut levels = vec![vec![Vec::new()]];
        for i in 0..spec.depth() {
            let mut next = Vec::new();
            for node in &levels[i] {
                for c in 0..spec.bound(i) {
                    let mut child = node.clone();
                    child.push(c);
                    next.push(child);
                }
            }
            levels.push(next);
        }
        FiniteTree { spec, levels }
    }

    /// The chain of initial segments of `branch`, which must have length `depth`.
    pub fn single_branch(spec: BranchingSpec, branch: &[u32]) -> Result<Self> {
        if branch.len() != spec.depth() {
            return Err(Error::params(format!(
                "branch has length {}, spec depth is {}",
                branch.len(),
                spec.depth()
            )));
        }
        Self::from_nodes(spec, [branch.to_vec()])
    }

    /// Every node at an even length keeps all successors; nodes at odd
    /// lengths keep only the successor with last coordinate 0.
    pub fn even_split(spec: BranchingSpec) -> Self {
        let mut levels = vec![vec![Vec::new()]];
        for i in 0..spec.depth() {
            let width = if i % 2 == 0 { spec.bound(i) } else { 1 };
            let next = levels[i]
                .iter()
                .flat_map(|node| {
                    (0..width).map(move |c| {
                        let mut child = node.clone();
                        child.push(c);
                        child
                    })
                })
                .collect();
            levels.push(next);
        }
        FiniteTree { spec, levels }
    }

    /// Random pruned tree: each successor of a present node is kept
    /// independently with probability `keep`, then nodes with no surviving
    /// successor below full depth are removed. Deterministic in `seed`.
    pub fn random(spec: BranchingSpec, keep: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&keep) {
            return Err(Error::params(format!("retention probability {keep} not in [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut levels = vec![vec![Vec::new()]];
        for i in 0..spec.depth() {
            let mut next = Vec::new();
            for node in &levels[i] {
                for c in 0..spec.bound(i) {
                    if rng.gen_bool(keep) {
                        let mut child = node.clone();
                        child.push(c);
                        next.push(child);
                    }
                }
            }
            levels.push(next);
        }
        let mut tree = FiniteTree { spec, levels };
        tree.prune();
        Ok(tree)
    }

    fn prune(&mut self) {
        for n in (0..self.spec.depth()).rev() {
            let (head, tail) = self.levels.split_at_mut(n + 1);
            let children = &tail[0];
            head[n].retain(|node| {
                children
                    .binary_search_by(|c| c[..n].cmp(node.as_slice()))
                    .is_ok()
            });
        }
    }

    pub fn spec(&self) -> &BranchingSpec {
        &self.spec
    }

    pub fn depth(&self) -> usize {
        self.spec.depth()
    }

    pub fn is_empty(&self) -> bool {
        self.levels[0].is_empty()
    }

    /// Nodes of length `n`.
    pub fn level(&self, n: usize) -> Result<&[TreeNode]> {
        self.levels
            .get(n)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::params(format!("level {n} exceeds tree depth {}", self.depth())))
    }

    /// `h_T(n) = |T(n)|`.
    pub fn level_size(&self, n: usize) -> Result<usize> {
        Ok(self.level(n)?.len())
    }

    /// Level sizes `h_T(0..=depth)`.
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, node: &[u32]) -> bool {
        self.levels
            .get(node.len())
            .is_some_and(|l| l.binary_search_by(|p| p.as_slice().cmp(node)).is_ok())
    }

    pub fn is_subtree_of(&self, other: &FiniteTree) -> bool {
        self.depth() <= other.depth()
            && self.levels.iter().flatten().all(|node| other.contains(node))
    }

    /// The first `n` levels `T(0), ..., T(n-1)`; later levels are emptied.
    pub fn restrict(&self, n: usize) -> Result<FiniteTree> {
        if n > self.depth() + 1 {
            return Err(Error::params(format!(
                "cannot keep {n} levels of a tree with {} levels",
                self.depth() + 1
            )));
        }
        let mut levels = self.levels.clone();
        for level in levels.iter_mut().skip(n) {
            level.clear();
        }
        Ok(FiniteTree {
            spec: self.spec.clone(),
            levels,
        })
    }

    /// First node (in level order) below full depth without a successor.
    pub fn dead_end(&self) -> Option<(usize, &TreeNode)> {
        for n in 0..self.depth() {
            let children = &self.levels[n + 1];
            for node in &self.levels[n] {
                if children.binary_search_by(|c| c[..n].cmp(node.as_slice())).is_err() {
                    return Some((n, node));
                }
            }
        }
        None
    }

    /// Every node below full depth has a successor.
    pub fn is_pruned(&self) -> bool {
        self.dead_end().is_none()
    }

    fn require_pruned(&self) -> Result<()> {
        match self.dead_end() {
            Some((level, node)) => Err(Error::NotPruned {
                level,
                node: node.clone(),
            }),
            None => Ok(()),
        }
    }

    /// `|T(n)| / Π_{i<n} f(i)`.
    pub fn density(&self, n: usize) -> Result<BigRational> {
        let size = self.level_size(n)?;
        Ok(BigRational::new(
            BigInt::from(size),
            BigInt::from(self.spec.full_level_size(n)),
        ))
    }

    /// Density at full depth: the finite approximant of the measure of the
    /// branch set, and an upper bound for it. Requires a pruned tree.
    pub fn measure_estimate(&self) -> Result<BigRational> {
        self.require_pruned()?;
        self.density(self.depth())
    }
}

/// A `{0, 1}` colouring of the nodes of `⟨f⟩` up to the spec depth: the
/// canonical rule with the listed nodes flipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeColouring {
    f: BranchingSpec,
    exceptions: BTreeSet<TreeNode>,
}

/// Canonical colour of a node: 0 iff its last coordinate is below
/// `⌊f(|s|-1)/2⌋`. The root gets colour 0.
pub fn canonical_colour(spec: &BranchingSpec, node: &[u32]) -> u8 {
    match node.last() {
        None => 0,
        Some(&last) => {
            let threshold = spec.bound(node.len() - 1) / 2;
            u8::from(last >= threshold)
        }
    }
}

impl NodeColouring {
    pub fn canonical(spec: BranchingSpec) -> Self {
        NodeColouring {
            f: spec,
            exceptions: BTreeSet::new(),
        }
    }

    pub fn with_exceptions(spec: BranchingSpec, exceptions: impl IntoIterator<Item = TreeNode>) -> Result<Self> {
        let exceptions: BTreeSet<TreeNode> = exceptions.into_iter().collect();
        if let Some(bad) = exceptions.iter().find(|n| !spec.admits(n)) {
            return Err(Error::params(format!("exception node {bad:?} is not in ⟨f⟩")));
        }
        Ok(NodeColouring { f: spec, exceptions })
    }

    pub fn spec(&self) -> &BranchingSpec {
        &self.f
    }

    pub fn exceptions(&self) -> &BTreeSet<TreeNode> {
        &self.exceptions
    }

    pub fn colour(&self, node: &[u32]) -> u8 {
        canonical_colour(&self.f, node) ^ u8::from(self.exceptions.contains(node))
    }
}

/// Colour class of a level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelClass {
    Homog0,
    Homog1,
    Nonhomog,
}

impl LevelClass {
    pub fn is_homogeneous(self) -> bool {
        self != LevelClass::Nonhomog
    }
}

/// Classifies `T(n)` under `c`. Empty levels are reported as `Homog0`.
pub fn level_homogeneity(tree: &FiniteTree, n: usize, c: &NodeColouring) -> Result<LevelClass> {
    let level = tree.level(n)?;
    let mut seen = [false; 2];
    for node in level {
        seen[c.colour(node) as usize] = true;
        if seen[0] && seen[1] {
            return Ok(LevelClass::Nonhomog);
        }
    }
    Ok(if seen[1] {
        LevelClass::Homog1
    } else {
        LevelClass::Homog0
    })
}

/// Outcome of checking the density bound forced by homogeneous levels
/// under the canonical colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma5Report {
    /// All homogeneous levels, the root level included.
    pub homogeneous_levels: Vec<usize>,
    /// Homogeneous levels `n >= 1`; each caps coordinate `n - 1`.
    pub bound_levels: Vec<usize>,
    /// Level at which the density is evaluated: `min(max F + 1, depth)`.
    pub eval_level: usize,
    pub density: BigRational,
    /// `Π_{n∈F} ⌈f(n-1)/2⌉ / f(n-1)`.
    pub product_bound: BigRational,
    /// `(2/3)^|F|`.
    pub geometric_bound: BigRational,
    /// No homogeneous level beyond the root: nothing to bound.
    pub vacuous: bool,
    pub holds: bool,
}

/// Finds the homogeneous levels of a pruned tree under the canonical
/// colouring and checks `density ≤ Π ⌈f/2⌉/f ≤ (2/3)^|F|`.
pub fn lemma5_check(tree: &FiniteTree) -> Result<Lemma5Report> {
    tree.require_pruned()?;
    let c = NodeColouring::canonical(tree.spec().clone());
    let mut homogeneous_levels = Vec::new();
    for n in 0..=tree.depth() {
        if level_homogeneity(tree, n, &c)?.is_homogeneous() {
            homogeneous_levels.push(n);
        }
    }
    let bound_levels: Vec<usize> = homogeneous_levels.iter().copied().filter(|&n| n >= 1).collect();
    let spec = tree.spec();
    let product_bound = bound_levels.iter().fold(BigRational::one(), |acc, &n| {
        let f = spec.bound(n - 1);
        acc * BigRational::new(BigInt::from(f.div_ceil(2)), BigInt::from(f))
    });
    let geometric_bound = BigRational::new(BigInt::from(2), BigInt::from(3)).pow(bound_levels.len() as i32);
    let eval_level = bound_levels
        .last()
        .map_or(0, |&m| (m + 1).min(tree.depth()));
    let density = tree.density(eval_level)?;
    let holds = density <= product_bound && product_bound <= geometric_bound;
    Ok(Lemma5Report {
        vacuous: bound_levels.is_empty(),
        homogeneous_levels,
        bound_levels,
        eval_level,
        density,
        product_bound,
        geometric_bound,
        holds,
    })
}

/// `{n < limit : c(branch↾n) = 1}`.
pub fn splitting_trace(c: &NodeColouring, branch: &[u32], limit: usize) -> Result<BTreeSet<usize>> {
    if branch.len() + 1 < limit {
        return Err(Error::params(format!(
            "branch of length {} does not reach level {}",
            branch.len(),
            limit - 1
        )));
    }
    if limit > c.spec().depth() + 1 {
        return Err(Error::params(format!(
            "trace limit {limit} exceeds colouring depth {}",
            c.spec().depth()
        )));
    }
    if !c.spec().admits(&branch[..limit.saturating_sub(1)]) {
        return Err(Error::params("branch is not a node sequence of ⟨f⟩"));
    }
    Ok((0..limit).filter(|&n| c.colour(&branch[..n]) == 1).collect())
}

/// A level and two of its nodes of different colours.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub level: usize,
    pub zero_node: TreeNode,
    pub one_node: TreeNode,
}

/// Least `n ∈ levels` at which `T(n)` is nonhomogeneous, with the first node
/// of each colour; `None` when every listed level is homogeneous.
pub fn split_witness(tree: &FiniteTree, c: &NodeColouring, levels: &[usize]) -> Result<Option<SplitWitness>> {
    if let Some(&bad) = levels.iter().find(|&&n| n > tree.depth()) {
        return Err(Error::params(format!("level {bad} exceeds tree depth {}", tree.depth())));
    }
    let mut sorted = levels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for n in sorted {
        let level = tree.level(n)?;
        let zero = level.iter().find(|s| c.colour(s) == 0);
        let one = level.iter().find(|s| c.colour(s) == 1);
        if let (Some(z), Some(o)) = (zero, one) {
            return Ok(Some(SplitWitness {
                level: n,
                zero_node: z.clone(),
                one_node: o.clone(),
            }));
        }
    }
    Ok(None)
}

/// `h_⟨f⟩(n) = Π_{i<n} f(i)` for `n = 0..=depth`.
pub fn full_level_sizes(spec: &BranchingSpec) -> Vec<BigUint> {
    (0..=spec.depth()).map(|n| spec.full_level_size(n)).collect()
}

impl FiniteTree {
    /// Level sizes as big integers, for the decay comparisons.
    pub fn level_sizes_big(&self) -> Vec<BigUint> {
        self.levels.iter().map(|l| BigUint::from(l.len())).collect()
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn spec_validation() {
        assert!(BranchingSpec::new(vec![2, 1]).is_err());
        assert!(BranchingSpec::new(vec![]).is_ok());
        assert!(serde_json::from_str::<BranchingSpec>("[2,0]").is_err());
    }

    #[test]
    fn levels_of_standard_trees() {
        let spec = BranchingSpec::binary(5);
        let full = FiniteTree::full(spec.clone());
        assert_eq!(full.level_size(3).unwrap(), 8);
        let chain = FiniteTree::single_branch(spec.clone(), &[1, 0, 1, 1, 0]).unwrap();
        assert!((0..=5).all(|n| chain.level_size(n).unwrap() == 1));
        let empty = FiniteTree::empty(spec.clone());
        assert_eq!(empty.level(2).unwrap().len(), 0);
        assert!(full.level(6).is_err());
    }

    #[test]
    fn restriction() {
        let spec = BranchingSpec::binary(4);
        let full = FiniteTree::full(spec.clone());
        assert!(full.restrict(0).unwrap().is_empty());
        assert_eq!(full.restrict(5).unwrap(), full);
        let chain = FiniteTree::single_branch(spec, &[0, 1, 1, 0]).unwrap();
        let r = chain.restrict(2).unwrap();
        assert_eq!(r.node_count(), 2);
        assert_eq!(r.level(1).unwrap(), &[vec![0]]);
        assert!(full.restrict(6).is_err());
    }

    #[test]
    fn densities() {
        let spec = BranchingSpec::new(vec![3, 2, 5]).unwrap();
        let full = FiniteTree::full(spec);
        for n in 0..=3 {
            assert_eq!(full.density(n).unwrap(), BigRational::one());
        }
        let chain = FiniteTree::single_branch(BranchingSpec::binary(10), &[0; 10]).unwrap();
        assert_eq!(chain.density(7).unwrap(), q(1, 128));
        assert_eq!(chain.measure_estimate().unwrap(), q(1, 1024));
        let even = FiniteTree::even_split(BranchingSpec::binary(4));
        assert_eq!(even.level_sizes(), vec![1, 2, 2, 4, 4]);
        assert_eq!(even.density(4).unwrap(), q(1, 4));
        assert_eq!(even.measure_estimate().unwrap(), q(1, 4));
    }

    #[test]
    fn measure_requires_pruned() {
        let spec = BranchingSpec::binary(3);
        let stub = FiniteTree::from_nodes(spec, [vec![0, 0, 0], vec![1]]).unwrap();
        assert!(!stub.is_pruned());
        assert_eq!(
            stub.measure_estimate().unwrap_err(),
            Error::NotPruned { level: 1, node: vec![1] }
        );
    }

    #[test]
    fn malformed_trees_rejected() {
        let spec = BranchingSpec::binary(2);
        assert!(FiniteTree::from_levels(spec.clone(), vec![vec![vec![]], vec![], vec![vec![0, 1]]]).is_err());
        assert!(FiniteTree::from_levels(spec.clone(), vec![vec![vec![]], vec![vec![2]]]).is_err());
        assert!(FiniteTree::from_levels(spec, vec![vec![vec![]], vec![vec![0, 0]]]).is_err());
    }

    #[test]
    fn canonical_colour_rule() {
        let binary = BranchingSpec::binary(3);
        assert_eq!(canonical_colour(&binary, &[1, 0]), 0);
        assert_eq!(canonical_colour(&binary, &[0, 1]), 1);
        let ternary = BranchingSpec::new(vec![3, 3]).unwrap();
        assert_eq!(canonical_colour(&ternary, &[2, 0]), 0);
        assert_eq!(canonical_colour(&ternary, &[2, 1]), 1);
        assert_eq!(canonical_colour(&ternary, &[2, 2]), 1);
        for f in 2..9 {
            let spec = BranchingSpec::new(vec![f]).unwrap();
            assert_eq!(canonical_colour(&spec, &[0]), 0);
        }
        assert_eq!(canonical_colour(&binary, &[]), 0);
    }

    #[test]
    fn homogeneity_of_levels() {
        let spec = BranchingSpec::binary(4);
        let c = NodeColouring::canonical(spec.clone());
        let full = FiniteTree::full(spec.clone());
        for n in 1..=4 {
            assert_eq!(level_homogeneity(&full, n, &c).unwrap(), LevelClass::Nonhomog);
        }
        let chain = FiniteTree::single_branch(spec.clone(), &[1, 1, 0, 1]).unwrap();
        for n in 0..=4 {
            assert!(level_homogeneity(&chain, n, &c).unwrap().is_homogeneous());
        }
        let even = FiniteTree::even_split(spec);
        assert_eq!(level_homogeneity(&even, 2, &c).unwrap(), LevelClass::Homog0);
        assert_eq!(level_homogeneity(&even, 3, &c).unwrap(), LevelClass::Nonhomog);
    }

    #[test]
    fn exceptions_flip_colours() {
        let spec = BranchingSpec::binary(2);
        let c = NodeColouring::with_exceptions(spec.clone(), [vec![1]]).unwrap();
        assert_eq!(c.colour(&[1]), 0);
        assert_eq!(c.colour(&[0]), 0);
        let full = FiniteTree::full(spec.clone());
        assert_eq!(level_homogeneity(&full, 1, &c).unwrap(), LevelClass::Homog0);
        assert!(NodeColouring::with_exceptions(spec, [vec![3]]).is_err());
    }

    #[test]
    fn lemma5_examples() {
        let depth = 10;
        let chain = FiniteTree::single_branch(BranchingSpec::binary(depth), &[1; 10]).unwrap();
        let r = lemma5_check(&chain).unwrap();
        assert_eq!(r.bound_levels, (1..=depth).collect::<Vec<_>>());
        assert_eq!(r.density, q(1, 1024));
        assert_eq!(r.product_bound, q(1, 1024));
        assert!(r.holds && !r.vacuous);

        let full = FiniteTree::full(BranchingSpec::binary(6));
        let r = lemma5_check(&full).unwrap();
        assert_eq!(r.homogeneous_levels, vec![0]);
        assert!(r.vacuous && r.holds);

        let even = FiniteTree::even_split(BranchingSpec::binary(4));
        let r = lemma5_check(&even).unwrap();
        assert_eq!(r.homogeneous_levels, vec![0, 2, 4]);
        assert_eq!(r.eval_level, 4);
        assert_eq!(r.density, q(1, 4));
        assert_eq!(r.product_bound, q(1, 4));
        assert_eq!(r.geometric_bound, q(4, 9));
        assert!(r.holds);
    }

    #[test]
    fn traces() {
        let spec = BranchingSpec::binary(8);
        let c = NodeColouring::canonical(spec);
        assert_eq!(
            splitting_trace(&c, &[0, 1, 1], 3).unwrap(),
            BTreeSet::from([2])
        );
        assert!(splitting_trace(&c, &[0; 8], 8).unwrap().is_empty());
        assert_eq!(
            splitting_trace(&c, &[1; 8], 8).unwrap(),
            (1..8).collect::<BTreeSet<_>>()
        );
        assert_eq!(
            splitting_trace(&c, &[1; 8], 9).unwrap(),
            (1..9).collect::<BTreeSet<_>>()
        );
        assert!(splitting_trace(&c, &[0, 1], 4).is_err());
        assert!(splitting_trace(&c, &[0; 9], 10).is_err());
    }

    #[test]
    fn split_witnesses() {
        let spec = BranchingSpec::binary(4);
        let c = NodeColouring::canonical(spec.clone());
        let full = FiniteTree::full(spec.clone());
        let w = split_witness(&full, &c, &[3]).unwrap().unwrap();
        assert_eq!(w.level, 3);
        assert_eq!(w.zero_node.last(), Some(&0));
        assert_eq!(w.one_node.last(), Some(&1));

        let chain = FiniteTree::single_branch(spec.clone(), &[0, 1, 0, 1]).unwrap();
        assert_eq!(split_witness(&chain, &c, &[0, 1, 2, 3, 4]).unwrap(), None);

        let even = FiniteTree::even_split(spec);
        assert_eq!(split_witness(&even, &c, &[2, 4]).unwrap(), None);
        assert_eq!(split_witness(&even, &c, &[1, 2]).unwrap().unwrap().level, 1);
        assert!(split_witness(&even, &c, &[5]).is_err());
    }

    #[test]
    fn random_trees_are_pruned_and_deterministic() {
        let spec = BranchingSpec::binary(12);
        for seed in 0..20 {
            let t = FiniteTree::random(spec.clone(), 0.7, seed).unwrap();
            assert!(t.is_pruned());
            assert_eq!(t, FiniteTree::random(spec.clone(), 0.7, seed).unwrap());
        }
    }

    #[test]
    fn json_round_trip() {
        let t = FiniteTree::even_split(BranchingSpec::new(vec![2, 3, 2]).unwrap());
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<FiniteTree>(&s).unwrap(), t);
        let c = NodeColouring::with_exceptions(BranchingSpec::binary(2), [vec![0, 1]]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"f":[2,2],"exceptions":[[0,1]]}"#);
        assert_eq!(serde_json::from_str::<NodeColouring>(&s).unwrap(), c);
    }
}
