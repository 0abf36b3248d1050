//! Finite covers of `Iso(X) \ G` by basic neighborhoods.
//!
//! A neighborhood `V` is given by witnesses `x_1..x_m`, targets `y_1..y_m` and
//! a radius `ε`; it holds the isometries `ψ` with `d(ψ(x_k), y_k) < ε` for all
//! `k`. A cover is sound when no element of `G` lies in any neighborhood and
//! complete when every other isometry of `X` lies in one.

use std::collections::HashSet;

use serde::Serialize;

use crate::iso::{enumerate_isometries, extend_partial, IsoGroup, Isometry, SearchConfig};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

use super::RealizeError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Neighborhood {
    /// 1-based position in the cover.
    pub index: usize,
    pub witnesses: Vec<usize>,
    pub targets: Vec<usize>,
    pub epsilon: Rational,
}

impl Neighborhood {
    /// Neighborhood with `ε = min pairwise witness distance / (2m + 1)`.
    pub fn with_strict_epsilon(
        space: &FiniteMetricSpace,
        index: usize,
        witnesses: Vec<usize>,
        targets: Vec<usize>,
    ) -> Result<Self, RealizeError> {
        let epsilon = strict_epsilon(space, &witnesses)?;
        Ok(Neighborhood { index, witnesses, targets, epsilon })
    }

    pub fn m(&self) -> usize {
        self.witnesses.len()
    }

    /// Structural invariants: matching lengths, targets at the same pairwise
    /// distances as the witnesses, and `2mε` strictly below the minimum
    /// witness distance.
    pub fn check(&self, space: &FiniteMetricSpace) -> Result<(), String> {
        if self.witnesses.len() != self.targets.len() {
            return Err("witness and target tuples differ in length".into());
        }
        if self.m() < 2 {
            return Err("a neighborhood needs at least two witnesses".into());
        }
        let min_pair = space.min_pairwise_distance(&self.witnesses).map_err(|e| e.to_string())?;
        for &t in &self.targets {
            space.check_index(t).map_err(|e| e.to_string())?;
        }
        for a in 0..self.m() {
            for b in a + 1..self.m() {
                if space.class(self.witnesses[a], self.witnesses[b]) != space.class(self.targets[a], self.targets[b]) {
                    return Err(format!("targets {a},{b} are not at the witness distance"));
                }
            }
        }
        let span = Rational::from_integer(2 * self.m() as i64) * &self.epsilon;
        if !self.epsilon.is_positive() || span >= min_pair {
            return Err(format!("2mε = {span} is not strictly below {min_pair}"));
        }
        Ok(())
    }
}

pub fn strict_epsilon(space: &FiniteMetricSpace, witnesses: &[usize]) -> Result<Rational, RealizeError> {
    let min_pair = space.min_pairwise_distance(witnesses)?;
    Ok(min_pair / Rational::from_integer(2 * witnesses.len() as i64 + 1))
}

/// `max_k d(ψ(x_k), y_k) < ε`, decided exactly.
pub fn v_membership(space: &FiniteMetricSpace, psi: &Isometry, nbhd: &Neighborhood) -> bool {
    nbhd.witnesses
        .iter()
        .zip(&nbhd.targets)
        .all(|(&x, &y)| space.d(psi.apply(x), y) < &nbhd.epsilon)
}

fn meets_group(space: &FiniteMetricSpace, embedded: &[Isometry], nbhd: &Neighborhood) -> bool {
    embedded.iter().any(|g| v_membership(space, g, nbhd))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoverStrategy {
    #[default]
    Greedy,
    Pairs,
}

/// Covers `Iso(X) \ G`. Point 0 of `X` must be the identity element and
/// `embedded` the left translations. Neighborhoods are indexed `1..=N`.
pub fn build_cover(
    space: &FiniteMetricSpace,
    embedded: &[Isometry],
    strategy: CoverStrategy,
    search: &SearchConfig,
) -> Result<Vec<Neighborhood>, RealizeError> {
    match strategy {
        CoverStrategy::Greedy => {
            let iso = enumerate_isometries(space, search)?;
            greedy_cover(space, embedded, &iso)
        }
        CoverStrategy::Pairs => pairs_cover(space, embedded, search),
    }
}

fn check_subgroup(space: &FiniteMetricSpace, embedded: &[Isometry]) -> Result<(), RealizeError> {
    for g in embedded {
        if g.len() != space.len() || !crate::iso::is_isometry(space, g.as_slice())? {
            return Err(RealizeError::NotASubgroup);
        }
    }
    Ok(())
}

/// Greedy cover over an enumerated `Iso(X)`.
///
/// Isometries outside `G` are visited in lexicographic order; one already
/// inside an earlier neighborhood is skipped. Otherwise a witness tuple is
/// grown from point 0: each step appends the point leaving the fewest
/// elements of `G` inside the neighborhood, the highest index on ties, until
/// none is left.
pub fn greedy_cover(
    space: &FiniteMetricSpace,
    embedded: &[Isometry],
    iso: &IsoGroup,
) -> Result<Vec<Neighborhood>, RealizeError> {
    check_subgroup(space, embedded)?;
    let in_group: HashSet<&[usize]> = embedded.iter().map(Isometry::as_slice).collect();
    let n = space.len();
    let mut cover: Vec<Neighborhood> = Vec::new();
    for psi in iso.elements() {
        if in_group.contains(psi.as_slice()) || cover.iter().any(|v| v_membership(space, psi, v)) {
            continue;
        }
        let mut witnesses = vec![0usize];
        let nbhd = loop {
            let mut best: Option<(usize, usize)> = None;
            for x in 0..n {
                if witnesses.contains(&x) {
                    continue;
                }
                let mut trial = witnesses.clone();
                trial.push(x);
                let targets = trial.iter().map(|&w| psi.apply(w)).collect();
                let candidate = Neighborhood::with_strict_epsilon(space, 0, trial, targets)?;
                let survivors = embedded.iter().filter(|g| v_membership(space, g, &candidate)).count();
                if best.is_none_or(|(s, _)| survivors <= s) {
                    best = Some((survivors, x));
                }
            }
            let (survivors, x) = best.ok_or(RealizeError::CoverIncomplete)?;
            witnesses.push(x);
            if survivors == 0 {
                let targets = witnesses.iter().map(|&w| psi.apply(w)).collect();
                break Neighborhood::with_strict_epsilon(space, cover.len() + 1, witnesses, targets)?;
            }
        };
        cover.push(nbhd);
    }
    Ok(cover)
}

/// Candidate triples `(a, u, v)` of the pairs strategy: `a` a non-identity
/// element, `v != u·a`. Witnesses `(e, a)`, targets `(u, v)`.
pub fn pair_candidates(embedded: &[Isometry]) -> Vec<(usize, usize, usize)> {
    let n = embedded.len();
    let mut out = Vec::new();
    for a in 1..n {
        for u in 0..n {
            let ua = embedded[u].apply(a);
            for v in 0..n {
                if v != ua {
                    out.push((a, u, v));
                }
            }
        }
    }
    out
}

/// Pairs cover: every non-translation `ψ` moves some `a` away from
/// `ψ(e)·a`, so it falls in the `(e, a) -> (ψ(e), ψ(a))` neighborhood.
/// Candidates whose targets no isometry can reach, or that contain an
/// element of `G`, are dropped.
pub fn pairs_cover(
    space: &FiniteMetricSpace,
    embedded: &[Isometry],
    search: &SearchConfig,
) -> Result<Vec<Neighborhood>, RealizeError> {
    check_subgroup(space, embedded)?;
    let mut cover: Vec<Neighborhood> = Vec::new();
    let mut seen = HashSet::new();
    for (a, u, v) in pair_candidates(embedded) {
        if !seen.insert((a, u, v)) {
            continue;
        }
        if space.class(u, v) != space.class(0, a) {
            continue;
        }
        if extend_partial(space, &[(0, u), (a, v)], search)?.is_none() {
            continue;
        }
        let nbhd = Neighborhood::with_strict_epsilon(space, cover.len() + 1, vec![0, a], vec![u, v])?;
        if meets_group(space, embedded, &nbhd) {
            continue;
        }
        cover.push(nbhd);
    }
    Ok(cover)
}

/// Every element of `G` stays outside every neighborhood.
pub fn cover_is_sound(space: &FiniteMetricSpace, embedded: &[Isometry], cover: &[Neighborhood]) -> bool {
    cover.iter().all(|v| !meets_group(space, embedded, v))
}

/// Every isometry outside `G` lies in some neighborhood.
pub fn cover_is_complete(
    space: &FiniteMetricSpace,
    embedded: &[Isometry],
    iso: &IsoGroup,
    cover: &[Neighborhood],
) -> bool {
    let in_group: HashSet<&[usize]> = embedded.iter().map(Isometry::as_slice).collect();
    iso.elements()
        .iter()
        .filter(|psi| !in_group.contains(psi.as_slice()))
        .all(|psi| cover.iter().any(|v| v_membership(space, psi, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Group, DEFAULT_ORDER_CAP};
    use crate::realize::space::{left_translation_space, MetricChoice};

    fn setup(group: &Group, metric: MetricChoice) -> (FiniteMetricSpace, Vec<Isometry>, IsoGroup) {
        let t = left_translation_space(group, &metric).unwrap();
        let iso = enumerate_isometries(&t.space, &SearchConfig::default()).unwrap();
        (t.space, t.embed, iso)
    }

    #[test]
    fn full_group_needs_no_cover() {
        let (x, embed, _) = setup(&Group::cyclic(2), MetricChoice::Discrete);
        for strategy in [CoverStrategy::Greedy, CoverStrategy::Pairs] {
            assert!(build_cover(&x, &embed, strategy, &SearchConfig::default()).unwrap().is_empty());
        }
    }

    #[test]
    fn greedy_cover_of_c3() {
        let (x, embed, iso) = setup(&Group::cyclic(3), MetricChoice::Discrete);
        let cover = greedy_cover(&x, &embed, &iso).unwrap();
        assert_eq!(cover.len(), 3);
        for (i, v) in cover.iter().enumerate() {
            assert_eq!(v.index, i + 1);
            assert_eq!(v.m(), 2);
            assert_eq!(v.epsilon, Rational::new(1, 5));
            assert!(v.check(&x).is_ok());
        }
        // the transposition swapping 0 and 1
        assert!(cover.contains(&Neighborhood { index: 2, witnesses: vec![0, 2], targets: vec![1, 2], epsilon: Rational::new(1, 5) }));
        assert!(cover_is_sound(&x, &embed, &cover));
        assert!(cover_is_complete(&x, &embed, &iso, &cover));
    }

    #[test]
    fn membership_examples() {
        let (x, embed, _) = setup(&Group::cyclic(3), MetricChoice::Discrete);
        let v = Neighborhood { index: 1, witnesses: vec![0, 2], targets: vec![1, 2], epsilon: Rational::new(1, 5) };
        let swap01 = Isometry::new(&x, vec![1, 0, 2]).unwrap();
        assert!(v_membership(&x, &swap01, &v));
        for g in &embed {
            assert!(!v_membership(&x, g, &v));
        }
        let rot = Isometry::new(&x, vec![1, 2, 0]).unwrap();
        assert!(!v_membership(&x, &rot, &v));
    }

    #[test]
    fn pairs_candidates_on_c3() {
        let (x, embed, iso) = setup(&Group::cyclic(3), MetricChoice::Discrete);
        assert_eq!(pair_candidates(&embed).len(), 12);
        let cover = pairs_cover(&x, &embed, &SearchConfig::default()).unwrap();
        // v == u is unreachable by an isometry
        assert_eq!(cover.len(), 6);
        assert!(cover_is_sound(&x, &embed, &cover));
        assert!(cover_is_complete(&x, &embed, &iso, &cover));
    }

    #[test]
    fn covers_are_sound_and_complete_on_small_groups() {
        let s3 = Group::from_generators(&[vec![1, 0, 2], vec![0, 2, 1]], 3, DEFAULT_ORDER_CAP).unwrap();
        let v4 = Group::from_cayley(&[vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]]).unwrap();
        let cases = vec![
            (Group::cyclic(4), MetricChoice::Discrete),
            (Group::cyclic(4), MetricChoice::Word(vec![1])),
            (Group::cyclic(5), MetricChoice::Discrete),
            (Group::cyclic(5), MetricChoice::Word(vec![1])),
            (Group::cyclic(6), MetricChoice::Word(vec![1])),
            (v4, MetricChoice::Discrete),
            (s3.clone(), MetricChoice::Discrete),
            (s3, MetricChoice::Word(vec![1, 2])),
        ];
        for (group, metric) in cases {
            let (x, embed, iso) = setup(&group, metric.clone());
            for strategy in [CoverStrategy::Greedy, CoverStrategy::Pairs] {
                let cover = build_cover(&x, &embed, strategy, &SearchConfig::default()).unwrap();
                assert!(cover_is_sound(&x, &embed, &cover), "{metric:?} {strategy:?}");
                assert!(cover_is_complete(&x, &embed, &iso, &cover), "{metric:?} {strategy:?}");
                assert_eq!(cover.is_empty(), iso.order() == group.order());
                for v in &cover {
                    assert!(v.check(&x).is_ok());
                }
            }
        }
    }

    #[test]
    fn strict_bound_is_checked() {
        let (x, _, _) = setup(&Group::cyclic(3), MetricChoice::Discrete);
        let loose = Neighborhood { index: 1, witnesses: vec![0, 2], targets: vec![1, 2], epsilon: Rational::new(1, 4) };
        assert!(loose.check(&x).is_err());
        let skew = Neighborhood { index: 1, witnesses: vec![0, 2], targets: vec![1, 1], epsilon: Rational::new(1, 5) };
        assert!(skew.check(&x).is_err());
    }
}
