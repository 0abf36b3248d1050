//! Isometry groups of finite metric spaces.
//!
//! [`enumerate_isometries`] is a backtracking search over partial point maps.
//! Each point starts with the candidates sharing its sorted distance row;
//! assigning `p -> c` then filters every open domain down to the images
//! consistent with that pair (forward checking), and the next point taken is
//! the one with the smallest remaining domain, lowest index on ties.
//! [`naive_enumerate`] filters all `n!` permutations and serves as the oracle.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{compose_perms, invert_perm, is_permutation, Group};
use crate::metric::FiniteMetricSpace;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const NAIVE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("not a bijection of 0..{0}")]
    NotABijection(usize),
    #[error("permutation does not preserve distances")]
    NotAnIsometry,
    #[error("isometries act on spaces of different sizes ({0} vs {1})")]
    SpaceMismatch(usize, usize),
    #[error("search exceeded the node budget of {0}")]
    SizeGuardExceeded(u64),
    #[error("naive enumeration is limited to {limit} points, got {n}")]
    TooLargeForOracle { n: usize, limit: usize },
    #[error("partial assignment refers to point {0} outside the space")]
    BadPartialAssignment(usize),
}

/// A distance-preserving permutation, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Isometry {
    perm: Vec<usize>,
}

impl Isometry {
    pub fn new(space: &FiniteMetricSpace, perm: Vec<usize>) -> Result<Self, IsoError> {
        if is_isometry(space, &perm)? {
            Ok(Isometry { perm })
        } else {
            Err(IsoError::NotAnIsometry)
        }
    }

    pub fn identity(n: usize) -> Self {
        Isometry { perm: (0..n).collect() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry, IsoError> {
        if self.len() != other.len() {
            return Err(IsoError::SpaceMismatch(self.len(), other.len()));
        }
        Ok(Isometry { perm: compose_perms(&self.perm, &other.perm) })
    }

    pub fn inverse(&self) -> Isometry {
        Isometry { perm: invert_perm(&self.perm) }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.perm[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub(crate) fn from_trusted(perm: Vec<usize>) -> Self {
        Isometry { perm }
    }
}

pub fn is_isometry(space: &FiniteMetricSpace, perm: &[usize]) -> Result<bool, IsoError> {
    let n = space.len();
    if !is_permutation(perm, n) {
        return Err(IsoError::NotABijection(n));
    }
    for i in 0..n {
        for j in i + 1..n {
            if space.class(perm[i], perm[j]) != space.class(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A set of isometries of one space, sorted by image vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoGroup {
    n: usize,
    elements: Vec<Isometry>,
}

#[derive(Serialize, Deserialize)]
struct IsoGroupJson {
    n: usize,
    elements: Vec<Vec<usize>>,
}

impl IsoGroup {
    pub fn from_elements(n: usize, mut elements: Vec<Isometry>) -> Self {
        elements.sort();
        elements.dedup();
        IsoGroup { n, elements }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Isometry] {
        &self.elements
    }

    pub fn contains(&self, perm: &[usize]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(perm)).is_ok()
    }

    /// Contains the identity and is closed under composition and inversion.
    pub fn is_group(&self) -> bool {
        if !self.contains(Isometry::identity(self.n).as_slice()) {
            return false;
        }
        self.elements.iter().all(|a| {
            self.contains(a.inverse().as_slice())
                && self.elements.iter().all(|b| self.contains(&compose_perms(&a.perm, &b.perm)))
        })
    }

    pub fn to_json(&self) -> String {
        let json = IsoGroupJson {
            n: self.n,
            elements: self.elements.iter().map(|e| e.perm.clone()).collect(),
        };
        serde_json::to_string_pretty(&json).expect("plain data serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_budget: u64,
    /// Explore the branches below the first chosen point on the rayon pool.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { node_budget: DEFAULT_NODE_BUDGET, parallel: true }
    }
}

impl SearchConfig {
    pub fn sequential() -> Self {
        SearchConfig { parallel: false, ..Self::default() }
    }
}

/// Groups points by their sorted row of distance classes.
fn initial_domains(space: &FiniteMetricSpace) -> Vec<Vec<usize>> {
    let n = space.len();
    let mut by_profile: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    let mut profiles = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = space.class_row(i).to_vec();
        row.sort_unstable();
        by_profile.entry(row.clone()).or_default().push(i);
        profiles.push(row);
    }
    profiles.iter().map(|p| by_profile[p].clone()).collect()
}

struct Search<'a> {
    space: &'a FiniteMetricSpace,
    budget: u64,
    nodes: &'a AtomicU64,
    exhausted: &'a AtomicBool,
    /// Stop after this many solutions.
    limit: usize,
}

impl Search<'_> {
    fn pick(domains: &[Vec<usize>], assignment: &[Option<usize>]) -> Option<usize> {
        (0..domains.len())
            .filter(|&p| assignment[p].is_none())
            .min_by_key(|&p| (domains[p].len(), p))
    }

    /// Domains after fixing `point -> image`, or None on a wipe-out.
    fn narrow(&self, domains: &[Vec<usize>], assignment: &[Option<usize>], point: usize, image: usize) -> Option<Vec<Vec<usize>>> {
        let n = self.space.len();
        let mut next = Vec::with_capacity(n);
        for q in 0..n {
            if assignment[q].is_some() || q == point {
                next.push(Vec::new());
                continue;
            }
            let want = self.space.class(q, point);
            let kept: Vec<usize> = domains[q]
                .iter()
                .copied()
                .filter(|&c| c != image && self.space.class(c, image) == want)
                .collect();
            if kept.is_empty() {
                return None;
            }
            next.push(kept);
        }
        Some(next)
    }

    fn tick(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn run(&self, domains: Vec<Vec<usize>>, assignment: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) -> bool {
        let Some(point) = Self::pick(&domains, assignment) else {
            out.push(assignment.iter().map(|a| a.expect("complete")).collect());
            return out.len() < self.limit;
        };
        for &image in &domains[point] {
            if !self.tick() {
                return false;
            }
            if let Some(next) = self.narrow(&domains, assignment, point, image) {
                assignment[point] = Some(image);
                let go_on = self.run(next, assignment, out);
                assignment[point] = None;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn search(
    space: &FiniteMetricSpace,
    fixed: &[(usize, usize)],
    config: &SearchConfig,
    limit: usize,
) -> Result<Vec<Vec<usize>>, IsoError> {
    let n = space.len();
    let nodes = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let s = Search { space, budget: config.node_budget, nodes: &nodes, exhausted: &exhausted, limit };

    let mut domains = initial_domains(space);
    let mut assignment = vec![None; n];
    for &(p, c) in fixed {
        if p >= n || c >= n {
            return Err(IsoError::BadPartialAssignment(p.max(c)));
        }
        if assignment[p].is_some() {
            return Err(IsoError::BadPartialAssignment(p));
        }
        if !domains[p].contains(&c) {
            return Ok(Vec::new());
        }
        match s.narrow(&domains, &assignment, p, c) {
            Some(next) => {
                domains = next;
                assignment[p] = Some(c);
            }
            None => return Ok(Vec::new()),
        }
    }

    let mut out = Vec::new();
    match Search::pick(&domains, &assignment) {
        None => out.push(assignment.iter().map(|a| a.expect("complete")).collect()),
        Some(root) if config.parallel && limit == usize::MAX => {
            let branches: Vec<Vec<Vec<usize>>> = domains[root]
                .par_iter()
                .map(|&image| {
                    let mut local = Vec::new();
                    if !s.tick() {
                        return local;
                    }
                    if let Some(next) = s.narrow(&domains, &assignment, root, image) {
                        let mut assignment = assignment.clone();
                        assignment[root] = Some(image);
                        s.run(next, &mut assignment, &mut local);
                    }
                    local
                })
                .collect();
            out = branches.into_iter().flatten().collect();
        }
        Some(_) => {
            s.run(domains, &mut assignment, &mut out);
        }
    }
    if exhausted.load(Ordering::Relaxed) {
        return Err(IsoError::SizeGuardExceeded(config.node_budget));
    }
    out.sort();
    Ok(out)
}

/// The full isometry group, elements in lexicographic image-vector order.
pub fn enumerate_isometries(space: &FiniteMetricSpace, config: &SearchConfig) -> Result<IsoGroup, IsoError> {
    let perms = search(space, &[], config, usize::MAX)?;
    Ok(IsoGroup { n: space.len(), elements: perms.into_iter().map(Isometry::from_trusted).collect() })
}

/// Some isometry extending the prescribed `point -> image` pairs, if any.
pub fn extend_partial(
    space: &FiniteMetricSpace,
    fixed: &[(usize, usize)],
    config: &SearchConfig,
) -> Result<Option<Isometry>, IsoError> {
    let seq = SearchConfig { parallel: false, ..*config };
    let mut found = search(space, fixed, &seq, 1)?;
    Ok(found.pop().map(Isometry::from_trusted))
}

/// Oracle: all `n!` permutations filtered through [`is_isometry`].
pub fn naive_enumerate(space: &FiniteMetricSpace) -> Result<IsoGroup, IsoError> {
    let n = space.len();
    if n > NAIVE_LIMIT {
        return Err(IsoError::TooLargeForOracle { n, limit: NAIVE_LIMIT });
    }
    let mut elements = Vec::new();
    for perm in (0..n).permutations(n) {
        if is_isometry(space, &perm)? {
            elements.push(Isometry { perm });
        }
    }
    Ok(IsoGroup::from_elements(n, elements))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingFailure {
    #[error("map has {got} images for a group of order {order}")]
    WrongDomain { order: usize, got: usize },
    #[error("elements {0} and {1} have the same image")]
    NotInjective(usize, usize),
    #[error("image of {0}*{1} is not the composite of the images")]
    NotHomomorphic(usize, usize),
    #[error(transparent)]
    Iso(#[from] IsoError),
}

/// Checks that `g -> map[g]` is an injective homomorphism.
pub fn verify_embedding(group: &Group, map: &[Isometry]) -> Result<(), EmbeddingFailure> {
    let order = group.order();
    if map.len() != order {
        return Err(EmbeddingFailure::WrongDomain { order, got: map.len() });
    }
    let mut seen: HashSet<&[usize]> = HashSet::with_capacity(order);
    for (g, image) in map.iter().enumerate() {
        if !seen.insert(image.as_slice()) {
            let first = map.iter().position(|m| m == image).expect("present");
            return Err(EmbeddingFailure::NotInjective(first, g));
        }
    }
    for g in 0..order {
        for h in 0..order {
            if map[group.mul(g, h)] != map[g].compose(&map[h])? {
                return Err(EmbeddingFailure::NotHomomorphic(g, h));
            }
        }
    }
    Ok(())
}
