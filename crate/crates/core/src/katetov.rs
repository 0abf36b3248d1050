//! Katětov maps: one-point metric extensions of a finite space.
//!
//! A map `f` on the points of `X` is Katětov when
//! `|f(x) - f(y)| <= d(x, y) <= f(x) + f(y)` for all `x, y`. Such a map is the
//! distance profile of a new point, and the set `E(X)` of all of them carries
//! the sup-metric. [`adjoin`] realizes a family of maps as actual points.

use std::collections::HashMap;

use thiserror::Error;

use crate::iso::Isometry;
use crate::metric::{FiniteMetricSpace, MetricError, PointSet};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KatetovError {
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("negative value at point {0}")]
    Negative(usize),
    #[error("|f({0}) - f({1})| exceeds d({0},{1})")]
    KatetovLower(usize, usize),
    #[error("f({0}) + f({1}) is below d({0},{1})")]
    KatetovUpper(usize, usize),
    #[error("maps live on different base spaces")]
    BaseMismatch,
    #[error("support set is empty")]
    EmptySubset,
    #[error("map is not supported by the given set")]
    NotSupported,
    #[error("staircase needs a base of diameter at most 1, got {0}")]
    DiameterExceedsOne(Rational),
    #[error("staircase spec violated: {0}")]
    SpecViolation(String),
    #[error("map vanishes at point {0} without being its Kuratowski image")]
    ZeroOnBase(usize),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A Katětov map over a borrowed base space.
#[derive(Debug, Clone)]
pub struct KatetovMap<'a> {
    base: &'a FiniteMetricSpace,
    values: Vec<Rational>,
}

impl PartialEq for KatetovMap<'_> {
    fn eq(&self, other: &Self) -> bool {
        same_base(self.base, other.base) && self.values == other.values
    }
}

impl Eq for KatetovMap<'_> {}

fn same_base(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> bool {
    std::ptr::eq(a, b) || a == b
}

impl<'a> KatetovMap<'a> {
    /// Validates `values` against the Katětov condition on `base`.
    pub fn new(base: &'a FiniteMetricSpace, values: Vec<Rational>) -> Result<Self, KatetovError> {
        let n = base.len();
        if values.len() != n {
            return Err(KatetovError::LengthMismatch { expected: n, got: values.len() });
        }
        if let Some(x) = values.iter().position(Rational::is_negative) {
            return Err(KatetovError::Negative(x));
        }
        for x in 0..n {
            for y in x + 1..n {
                let d = base.d(x, y);
                if &values[x].abs_diff(&values[y]) > d {
                    return Err(KatetovError::KatetovLower(x, y));
                }
                if &(&values[x] + &values[y]) < d {
                    return Err(KatetovError::KatetovUpper(x, y));
                }
            }
        }
        Ok(KatetovMap { base, values })
    }

    pub fn base(&self) -> &'a FiniteMetricSpace {
        self.base
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Rational {
        &self.values[x]
    }

    /// The point `x` with `f = δ_x`, if any. A Katětov map vanishing at `x`
    /// is forced to equal `δ_x`.
    pub fn as_kuratowski(&self) -> Option<usize> {
        self.values.iter().position(Rational::is_zero)
    }
}

/// `δ_x(y) = d(x, y)`.
pub fn kuratowski(space: &FiniteMetricSpace, x: usize) -> Result<KatetovMap<'_>, KatetovError> {
    space.check_index(x)?;
    let values = (0..space.len()).map(|y| space.d(x, y).clone()).collect();
    Ok(KatetovMap { base: space, values })
}

fn check_base(f: &KatetovMap<'_>, g: &KatetovMap<'_>) -> Result<(), KatetovError> {
    if same_base(f.base, g.base) {
        Ok(())
    } else {
        Err(KatetovError::BaseMismatch)
    }
}

/// The sup-metric on `E(X)`.
pub fn sup_distance(f: &KatetovMap<'_>, g: &KatetovMap<'_>) -> Result<Rational, KatetovError> {
    check_base(f, g)?;
    Ok(max_abs_diff(f.values.iter().zip(&g.values)))
}

fn max_abs_diff<'r>(pairs: impl Iterator<Item = (&'r Rational, &'r Rational)>) -> Rational {
    pairs.map(|(a, b)| a.abs_diff(b)).max().unwrap_or_else(Rational::zero)
}

/// True iff `f(x) = min_{s in S} f(s) + d(x, s)` for every point `x`.
pub fn is_supported_by(f: &KatetovMap<'_>, support: &PointSet) -> Result<bool, KatetovError> {
    if support.is_empty() {
        return Err(KatetovError::EmptySubset);
    }
    if let Some(&last) = support.as_slice().last() {
        f.base.check_index(last)?;
    }
    let base = f.base;
    Ok((0..base.len()).all(|x| {
        let best = support
            .iter()
            .map(|s| &f.values[s] + base.d(x, s))
            .min()
            .expect("support is nonempty");
        best == f.values[x]
    }))
}

/// `max_{s in S} |f(s) - g(s)|`, which equals the sup-distance when both maps
/// are supported by `S`.
pub fn support_reduced_distance(
    f: &KatetovMap<'_>,
    g: &KatetovMap<'_>,
    support: &PointSet,
) -> Result<Rational, KatetovError> {
    check_base(f, g)?;
    if !is_supported_by(f, support)? || !is_supported_by(g, support)? {
        return Err(KatetovError::NotSupported);
    }
    Ok(max_abs_diff(support.iter().map(|s| (&f.values[s], &g.values[s]))))
}

/// Parameters of a staircase map
/// `x -> min(min_k (1 + offset + d(x, x_k) + 2(k-1)ε), 1 + offset + 2mε)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseSpec {
    pub witnesses: Vec<usize>,
    pub epsilon: Rational,
    pub offset: Rational,
}

impl StaircaseSpec {
    pub fn new(witnesses: Vec<usize>, epsilon: Rational, offset: Rational) -> Self {
        StaircaseSpec { witnesses, epsilon, offset }
    }
}

/// Builds the staircase map; requires `2mε <= min pairwise witness distance`.
pub fn staircase<'a>(space: &'a FiniteMetricSpace, spec: &StaircaseSpec) -> Result<KatetovMap<'a>, KatetovError> {
    check_staircase(space, spec, true)?;
    Ok(staircase_values(space, spec))
}

/// Like [`staircase`] but without the `2mε` bound. The result is still
/// Katětov on a base of diameter at most 1; it exists for probing what
/// goes wrong when the bound is ignored.
pub fn staircase_relaxed<'a>(
    space: &'a FiniteMetricSpace,
    spec: &StaircaseSpec,
) -> Result<KatetovMap<'a>, KatetovError> {
    check_staircase(space, spec, false)?;
    Ok(staircase_values(space, spec))
}

fn check_staircase(space: &FiniteMetricSpace, spec: &StaircaseSpec, enforce_bound: bool) -> Result<(), KatetovError> {
    let diameter = space.diameter();
    if diameter > Rational::one() {
        return Err(KatetovError::DiameterExceedsOne(diameter));
    }
    if !spec.epsilon.is_positive() {
        return Err(KatetovError::SpecViolation(format!("epsilon {} is not positive", spec.epsilon)));
    }
    if spec.offset.is_negative() {
        return Err(KatetovError::SpecViolation(format!("offset {} is negative", spec.offset)));
    }
    for &w in &spec.witnesses {
        space.check_index(w)?;
    }
    if spec.witnesses.len() >= 2 {
        let min_pair = space.min_pairwise_distance(&spec.witnesses)?;
        let m = Rational::from_integer(spec.witnesses.len() as i64);
        let span = Rational::from_integer(2) * m * &spec.epsilon;
        if enforce_bound && span > min_pair {
            return Err(KatetovError::SpecViolation(format!(
                "2mε = {span} exceeds the minimum witness distance {min_pair}"
            )));
        }
    }
    Ok(())
}

fn staircase_values<'a>(space: &'a FiniteMetricSpace, spec: &StaircaseSpec) -> KatetovMap<'a> {
    let level = Rational::one() + &spec.offset;
    let two_eps = Rational::from_integer(2) * &spec.epsilon;
    let steps: Vec<Rational> = (0..spec.witnesses.len())
        .map(|k| &level + &(Rational::from_integer(k as i64) * &two_eps))
        .collect();
    let cap = &level + &(Rational::from_integer(spec.witnesses.len() as i64) * &two_eps);
    let values = (0..space.len())
        .map(|x| {
            spec.witnesses
                .iter()
                .zip(&steps)
                .map(|(&w, step)| step + space.d(x, w))
                .fold(cap.clone(), Rational::min)
        })
        .collect();
    KatetovMap { base: space, values }
}

/// `φ*(f)(x) = f(φ⁻¹(x))`.
pub fn pushforward<'a>(f: &KatetovMap<'a>, phi: &Isometry) -> Result<KatetovMap<'a>, KatetovError> {
    if phi.len() != f.base.len() {
        return Err(KatetovError::BaseMismatch);
    }
    let mut values = vec![Rational::zero(); f.values.len()];
    for (y, v) in f.values.iter().enumerate() {
        values[phi.apply(y)] = v.clone();
    }
    Ok(KatetovMap { base: f.base, values })
}

/// Result of [`adjoin`].
#[derive(Debug, Clone)]
pub struct Adjunction {
    pub space: FiniteMetricSpace,
    /// Indices of the base copy inside `space` (always `0..base.len()`).
    pub base: PointSet,
    /// For each input map, the index of the point realizing it.
    pub placed: Vec<usize>,
}

/// Adds one point per distinct map. Kuratowski images are identified with
/// their base point and equal maps share a point (first label wins). New
/// points sit at sup-metric distance from each other.
pub fn adjoin(
    space: &FiniteMetricSpace,
    maps: &[(String, KatetovMap<'_>)],
) -> Result<Adjunction, KatetovError> {
    let n = space.len();
    let mut placed = Vec::with_capacity(maps.len());
    let mut fresh: Vec<(&str, &[Rational])> = Vec::new();
    let mut seen: HashMap<&[Rational], usize> = HashMap::new();
    for (label, map) in maps {
        if !same_base(map.base, space) {
            return Err(KatetovError::BaseMismatch);
        }
        if let Some(x) = map.as_kuratowski() {
            if map.values.iter().enumerate().any(|(y, v)| v != space.d(x, y)) {
                return Err(KatetovError::ZeroOnBase(x));
            }
            placed.push(x);
            continue;
        }
        let index = *seen.entry(map.values.as_slice()).or_insert_with(|| {
            fresh.push((label.as_str(), map.values.as_slice()));
            n + fresh.len() - 1
        });
        placed.push(index);
    }

    let total = n + fresh.len();
    let mut matrix = space.matrix();
    for (i, row) in matrix.iter_mut().enumerate() {
        row.extend(fresh.iter().map(|(_, values)| values[i].clone()));
    }
    for (a, (_, fa)) in fresh.iter().enumerate() {
        let mut row: Vec<Rational> = fa.to_vec();
        row.reserve(fresh.len());
        for (b, (_, fb)) in fresh.iter().enumerate() {
            if a == b {
                row.push(Rational::zero());
            } else {
                row.push(max_abs_diff(fa.iter().zip(fb.iter())));
            }
        }
        matrix.push(row);
    }
    let mut labels = space.labels().to_vec();
    labels.extend(fresh.iter().map(|(label, _)| label.to_string()));
    debug_assert_eq!(labels.len(), total);
    let extended = FiniteMetricSpace::new(labels, matrix)?;
    Ok(Adjunction { space: extended, base: PointSet::range(0, n), placed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::Isometry;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn vals(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| r(n, d)).collect()
    }

    fn discrete(n: usize) -> FiniteMetricSpace {
        FiniteMetricSpace::discrete((0..n).map(|i| format!("x{i}")).collect()).unwrap()
    }

    #[test]
    fn validation_examples() {
        let two = discrete(2);
        let delta_a = KatetovMap::new(&two, vals(&[(0, 1), (1, 1)])).unwrap();
        assert_eq!(delta_a.as_kuratowski(), Some(0));
        assert_eq!(KatetovMap::new(&two, vals(&[(0, 1), (0, 1)])), Err(KatetovError::KatetovUpper(0, 1)));
        assert_eq!(KatetovMap::new(&two, vals(&[(0, 1), (2, 1)])), Err(KatetovError::KatetovLower(0, 1)));
        assert_eq!(KatetovMap::new(&two, vals(&[(-1, 1), (1, 1)])), Err(KatetovError::Negative(0)));
        assert!(matches!(KatetovMap::new(&two, vals(&[(1, 1)])), Err(KatetovError::LengthMismatch { .. })));
        let c3 = discrete(3);
        assert!(KatetovMap::new(&c3, vals(&[(1, 1), (1, 1), (1, 1)])).is_ok());
    }

    #[test]
    fn kuratowski_examples() {
        let two = discrete(2);
        assert_eq!(kuratowski(&two, 0).unwrap().values(), vals(&[(0, 1), (1, 1)]).as_slice());
        let c3 = discrete(3);
        assert_eq!(kuratowski(&c3, 0).unwrap().values(), vals(&[(0, 1), (1, 1), (1, 1)]).as_slice());
        for x in 0..3 {
            for y in 0..3 {
                let d = sup_distance(&kuratowski(&c3, x).unwrap(), &kuratowski(&c3, y).unwrap()).unwrap();
                assert_eq!(&d, c3.d(x, y));
            }
        }
    }

    #[test]
    fn sup_distance_examples() {
        let c3 = discrete(3);
        let f = KatetovMap::new(&c3, vals(&[(3, 2), (23, 10), (19, 10)])).unwrap();
        let g = KatetovMap::new(&c3, vals(&[(3, 2), (19, 10), (23, 10)])).unwrap();
        assert_eq!(sup_distance(&f, &f).unwrap(), Rational::zero());
        assert_eq!(sup_distance(&f, &g).unwrap(), r(2, 5));
        for x in 0..3 {
            assert_eq!(&sup_distance(&f, &kuratowski(&c3, x).unwrap()).unwrap(), f.value(x));
        }
        let other = discrete(3);
        let unrelated = discrete(2);
        let h = KatetovMap::new(&other, vals(&[(3, 2), (23, 10), (19, 10)])).unwrap();
        assert_eq!(sup_distance(&f, &h).unwrap(), Rational::zero());
        let k = kuratowski(&unrelated, 0).unwrap();
        assert_eq!(sup_distance(&f, &k), Err(KatetovError::BaseMismatch));
    }

    #[test]
    fn support_examples() {
        let c3 = discrete(3);
        let all = PointSet::range(0, 3);
        let f = KatetovMap::new(&c3, vals(&[(3, 2), (23, 10), (19, 10)])).unwrap();
        assert!(is_supported_by(&f, &all).unwrap());
        let d1 = kuratowski(&c3, 1).unwrap();
        assert!(is_supported_by(&d1, &PointSet::new([1], 3).unwrap()).unwrap());
        let one = KatetovMap::new(&c3, vals(&[(1, 1), (1, 1), (1, 1)])).unwrap();
        assert!(!is_supported_by(&one, &PointSet::new([0], 3).unwrap()).unwrap());
        assert_eq!(is_supported_by(&one, &PointSet::default()), Err(KatetovError::EmptySubset));

        let d0 = kuratowski(&c3, 0).unwrap();
        let pair = PointSet::new([0, 1], 3).unwrap();
        assert_eq!(support_reduced_distance(&d0, &d1, &pair).unwrap(), sup_distance(&d0, &d1).unwrap());
        assert_eq!(support_reduced_distance(&d0, &one, &pair), Err(KatetovError::NotSupported));

        // worked staircase pair: witnesses (0,2) and (0,1), support = union
        let g = KatetovMap::new(&c3, vals(&[(3, 2), (19, 10), (23, 10)])).unwrap();
        assert_eq!(support_reduced_distance(&f, &g, &all).unwrap(), r(2, 5));
    }

    #[test]
    fn staircase_examples() {
        let c3 = discrete(3);
        let spec = StaircaseSpec::new(vec![0, 2], r(1, 5), r(1, 2));
        assert_eq!(staircase(&c3, &spec).unwrap().values(), vals(&[(3, 2), (23, 10), (19, 10)]).as_slice());
        let spec = StaircaseSpec::new(vec![1, 2], r(1, 5), r(1, 2));
        assert_eq!(staircase(&c3, &spec).unwrap().values(), vals(&[(23, 10), (3, 2), (19, 10)]).as_slice());
        let empty = StaircaseSpec::new(vec![], r(1, 5), Rational::zero());
        assert_eq!(staircase(&c3, &empty).unwrap().values(), vals(&[(1, 1), (1, 1), (1, 1)]).as_slice());
        let empty = StaircaseSpec::new(vec![], r(1, 5), r(1, 3));
        assert!(staircase(&c3, &empty).unwrap().values().iter().all(|v| v == &r(4, 3)));
    }

    #[test]
    fn staircase_errors() {
        let c3 = discrete(3);
        let wide = StaircaseSpec::new(vec![0, 1], r(1, 3), Rational::zero());
        assert!(matches!(staircase(&c3, &wide), Err(KatetovError::SpecViolation(_))));
        assert!(staircase_relaxed(&c3, &wide).is_ok());
        // 2mε = minpair is allowed
        let edge = StaircaseSpec::new(vec![0, 1], r(1, 4), Rational::zero());
        assert!(staircase(&c3, &edge).is_ok());
        let big = FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![r(0, 1), r(2, 1)], vec![r(2, 1), r(0, 1)]],
        )
        .unwrap();
        let spec = StaircaseSpec::new(vec![0], r(1, 5), Rational::zero());
        assert_eq!(staircase(&big, &spec), Err(KatetovError::DiameterExceedsOne(r(2, 1))));
        let repeated = StaircaseSpec::new(vec![1, 1], r(1, 5), Rational::zero());
        assert!(matches!(staircase(&c3, &repeated), Err(KatetovError::Metric(MetricError::RepeatedIndex(1)))));
    }

    #[test]
    fn pushforward_examples() {
        let c3 = discrete(3);
        let f = KatetovMap::new(&c3, vals(&[(3, 2), (23, 10), (19, 10)])).unwrap();
        assert_eq!(pushforward(&f, &Isometry::identity(3)).unwrap(), f);
        let rot = Isometry::new(&c3, vec![1, 2, 0]).unwrap();
        assert_eq!(pushforward(&f, &rot).unwrap().values(), vals(&[(19, 10), (3, 2), (23, 10)]).as_slice());
        assert_eq!(pushforward(&f, &Isometry::identity(2)), Err(KatetovError::BaseMismatch));
    }

    #[test]
    fn adjoin_examples() {
        let two = discrete(2);
        let nothing = adjoin(&two, &[]).unwrap();
        assert_eq!(nothing.space, two);

        let delta = kuratowski(&two, 1).unwrap();
        let same = adjoin(&two, &[("d".into(), delta)]).unwrap();
        assert_eq!(same.space, two);
        assert_eq!(same.placed, vec![1]);

        let one = KatetovMap::new(&two, vals(&[(1, 1), (1, 1)])).unwrap();
        let three = adjoin(&two, &[("c".into(), one.clone()), ("c2".into(), one)]).unwrap();
        assert_eq!(three.space.len(), 3);
        assert_eq!(three.space.matrix(), discrete(3).matrix());
        assert_eq!(three.placed, vec![2, 2]);
        assert_eq!(three.space.label(2), "c");
        assert_eq!(three.base, PointSet::range(0, 2));
    }

    #[test]
    fn adjoin_rejects_foreign_maps() {
        let two = discrete(2);
        let other = discrete(3);
        let f = kuratowski(&other, 0).unwrap();
        assert!(matches!(adjoin(&two, &[("f".into(), f)]), Err(KatetovError::BaseMismatch)));
    }

    mod props {
        use super::*;
        use crate::iso::{enumerate_isometries, SearchConfig};
        use proptest::prelude::*;

        /// Unit-diameter spaces with distances in {1/2, 3/4, 1}; any such
        /// symmetric matrix is metric.
        fn arb_unit_space() -> impl Strategy<Value = FiniteMetricSpace> {
            (2usize..=6).prop_flat_map(|n| {
                proptest::collection::vec(0usize..3, n * n).prop_map(move |w| {
                    let vals = [r(1, 2), r(3, 4), r(1, 1)];
                    let m = (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| if i == j { Rational::zero() } else { vals[w[i.min(j) * n + i.max(j)]].clone() })
                                .collect()
                        })
                        .collect();
                    FiniteMetricSpace::new((0..n).map(|i| format!("x{i}")).collect(), m)
                        .unwrap()
                        .rescale_to_unit_diameter()
                        .unwrap()
                })
            })
        }

        fn spec_for(space: &FiniteMetricSpace, seed: &[usize], eps_den: i64, off: i64) -> StaircaseSpec {
            let mut w: Vec<usize> = Vec::new();
            for &s in seed {
                let p = s % space.len();
                if !w.contains(&p) {
                    w.push(p);
                }
            }
            let m = w.len().max(1) as i64;
            let min_pair = if w.len() >= 2 { space.min_pairwise_distance(&w).unwrap() } else { Rational::one() };
            let eps = min_pair / Rational::from_integer(2 * m * eps_den);
            StaircaseSpec::new(w, eps, Rational::new(1, off))
        }

        proptest! {
            #[test]
            fn staircases_are_katetov(s in arb_unit_space(), seed in proptest::collection::vec(0usize..6, 0..5), eps_den in 1i64..4, off in 1i64..9) {
                let spec = spec_for(&s, &seed, eps_den, off);
                let f = staircase(&s, &spec).unwrap();
                prop_assert!(KatetovMap::new(&s, f.values().to_vec()).is_ok());
                if let Some(&first) = spec.witnesses.first() {
                    prop_assert_eq!(f.value(first), &(Rational::one() + &spec.offset));
                }
            }

            #[test]
            fn sup_metric_axioms(s in arb_unit_space(), seeds in proptest::collection::vec(proptest::collection::vec(0usize..6, 0..4), 3)) {
                let maps: Vec<_> = seeds.iter().enumerate()
                    .map(|(i, seed)| staircase(&s, &spec_for(&s, seed, 1, i as i64 + 1)).unwrap())
                    .collect();
                for a in &maps {
                    for b in &maps {
                        let dab = sup_distance(a, b).unwrap();
                        prop_assert_eq!(&dab, &sup_distance(b, a).unwrap());
                        prop_assert_eq!(dab.is_zero(), a == b);
                        for c in &maps {
                            prop_assert!(sup_distance(a, c).unwrap() <= &dab + &sup_distance(b, c).unwrap());
                        }
                    }
                }
            }

            #[test]
            fn pushforward_is_an_isometric_action(s in arb_unit_space(), seed in proptest::collection::vec(0usize..6, 0..4), seed2 in proptest::collection::vec(0usize..6, 0..4)) {
                let f = staircase(&s, &spec_for(&s, &seed, 1, 2)).unwrap();
                let g = staircase(&s, &spec_for(&s, &seed2, 2, 3)).unwrap();
                let group = enumerate_isometries(&s, &SearchConfig::sequential()).unwrap();
                prop_assert_eq!(pushforward(&f, &Isometry::identity(s.len())).unwrap(), f.clone());
                for phi in group.elements() {
                    let pf = pushforward(&f, phi).unwrap();
                    prop_assert_eq!(sup_distance(&pf, &pushforward(&g, phi).unwrap()).unwrap(), sup_distance(&f, &g).unwrap());
                    for psi in group.elements().iter().take(6) {
                        let lhs = pushforward(&f, &phi.compose(psi).unwrap()).unwrap();
                        let rhs = pushforward(&pushforward(&f, psi).unwrap(), phi).unwrap();
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }

            #[test]
            fn adjoin_yields_metric_spaces(s in arb_unit_space(), seeds in proptest::collection::vec(proptest::collection::vec(0usize..6, 0..4), 0..4)) {
                let maps: Vec<(String, KatetovMap<'_>)> = seeds.iter().enumerate()
                    .map(|(i, seed)| (format!("n{i}"), staircase(&s, &spec_for(&s, seed, 1, 2)).unwrap()))
                    .collect();
                let adj = adjoin(&s, &maps).unwrap();
                let n = s.len();
                for (i, (_, f)) in maps.iter().enumerate() {
                    let p = adj.placed[i];
                    for x in 0..n {
                        prop_assert_eq!(adj.space.d(p, x), f.value(x));
                    }
                }
                for x in 0..n { for y in 0..n {
                    prop_assert_eq!(adj.space.d(x, y), s.d(x, y));
                }}
            }
        }
    }
}
