//! Finite metric spaces with exact rational distances.
//!
//! A [`FiniteMetricSpace`] stores its distance matrix as class ids into a
//! sorted table of the distinct distance values. Ids are monotone in the
//! value they stand for, so `class(i, j) < class(k, l)` iff
//! `d(i, j) < d(k, l)`. The search code works on ids only.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("a metric space needs at least one point")]
    EmptySpace,
    #[error("{labels} labels for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("nonzero diagonal entry at ({0},{0})")]
    NonzeroDiagonal(usize),
    #[error("asymmetric matrix at ({0},{1})")]
    AsymmetricMatrix(usize, usize),
    #[error("nonpositive off-diagonal distance at ({0},{1})")]
    NonpositiveOffDiagonal(usize, usize),
    #[error("triangle inequality violated: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(usize, usize, usize),
    #[error("rescaling needs at least two points")]
    DegenerateSpace,
    #[error("subset is empty")]
    EmptySubset,
    #[error("need at least two points")]
    FewerThanTwoPoints,
    #[error("index {0} repeated")]
    RepeatedIndex(usize),
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
}

/// A sorted set of point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PointSet(Vec<usize>);

impl PointSet {
    /// Builds a set from arbitrary indices; rejects repeats and out-of-range entries.
    pub fn new(indices: impl IntoIterator<Item = usize>, len: usize) -> Result<Self, MetricError> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(MetricError::RepeatedIndex(w[0]));
            }
        }
        if let Some(&last) = v.last() {
            if last >= len {
                return Err(MetricError::IndexOutOfRange { index: last, len });
            }
        }
        Ok(PointSet(v))
    }

    pub fn range(start: usize, end: usize) -> Self {
        PointSet((start..end).collect())
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    /// Distinct distances in increasing order; `values[0]` is zero.
    values: Vec<Rational>,
    /// Row-major `n * n` class ids into `values`.
    classes: Vec<u32>,
}

impl FiniteMetricSpace {
    /// Validates labels and a distance matrix against the metric axioms.
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let n = matrix.len();
        if n == 0 {
            return Err(MetricError::EmptySpace);
        }
        if labels.len() != n {
            return Err(MetricError::LabelCount { labels: labels.len(), points: n });
        }
        for (row, entries) in matrix.iter().enumerate() {
            if entries.len() != n {
                return Err(MetricError::NotSquare { row, len: entries.len(), expected: n });
            }
        }
        let mut seen = HashSet::with_capacity(n);
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(MetricError::DuplicateLabel(label.clone()));
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(MetricError::NonzeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(MetricError::AsymmetricMatrix(i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !matrix[i][j].is_positive() {
                    return Err(MetricError::NonpositiveOffDiagonal(i, j));
                }
            }
        }

        let mut interned: BTreeMap<&Rational, u32> = BTreeMap::new();
        for row in &matrix {
            for value in row {
                interned.entry(value).or_insert(0);
            }
        }
        for (id, slot) in interned.values_mut().enumerate() {
            *slot = id as u32;
        }
        let values: Vec<Rational> = interned.keys().map(|v| (*v).clone()).collect();
        let mut classes = Vec::with_capacity(n * n);
        for row in &matrix {
            for value in row {
                classes.push(interned[value]);
            }
        }
        drop(interned);

        let space = FiniteMetricSpace { labels, values, classes };
        if let Some((i, j, k)) = space.first_triangle_violation() {
            return Err(MetricError::TriangleViolation(i, j, k));
        }
        Ok(space)
    }

    /// The discrete space: every pair of distinct points at distance 1.
    pub fn discrete(labels: Vec<String>) -> Result<Self, MetricError> {
        let n = labels.len();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::zero() } else { Rational::one() })
                    .collect()
            })
            .collect();
        FiniteMetricSpace::new(labels, matrix)
    }

    /// Scans unordered triples. Only the strictly longest side of a triple can
    /// violate the inequality, so ties are settled on class ids alone. A float
    /// comparison with a wide margin clears the clear-cut triples; anything
    /// near equality is decided exactly.
    fn first_triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        let approx: Vec<f64> = self.values.iter().map(Rational::to_f64).collect();
        (0..n).into_par_iter().find_map_first(|i| {
            for j in i + 1..n {
                let ij = self.class(i, j);
                for k in j + 1..n {
                    let jk = self.class(j, k);
                    let ik = self.class(i, k);
                    // (long side endpoints, middle point, short sides)
                    let (a, mid, b, s1, s2, long) = if ik > ij && ik > jk {
                        (i, j, k, ij, jk, ik)
                    } else if ij > ik && ij > jk {
                        (i, k, j, ik, jk, ij)
                    } else if jk > ij && jk > ik {
                        (j, i, k, ij, ik, jk)
                    } else {
                        continue;
                    };
                    let fsum = approx[s1 as usize] + approx[s2 as usize];
                    if approx[long as usize] < fsum - 1e-9 * fsum.max(1.0) {
                        continue;
                    }
                    let sum = &self.values[s1 as usize] + &self.values[s2 as usize];
                    if self.values[long as usize] > sum {
                        return Some((a.min(b), mid, a.max(b)));
                    }
                }
            }
            None
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> &Rational {
        &self.values[self.class(i, j) as usize]
    }

    /// Distance class id of the pair; ids are ordered like the distances.
    #[inline]
    pub fn class(&self, i: usize, j: usize) -> u32 {
        self.classes[i * self.len() + j]
    }

    pub fn class_row(&self, i: usize) -> &[u32] {
        let n = self.len();
        &self.classes[i * n..(i + 1) * n]
    }

    /// Distinct distances, increasing.
    pub fn distance_values(&self) -> &[Rational] {
        &self.values
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.d(i, j).clone()).collect()).collect()
    }

    pub fn diameter(&self) -> Rational {
        self.values.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Divides every distance by the diameter. Labels and the distance
    /// ordering are unchanged.
    pub fn rescale_to_unit_diameter(&self) -> Result<Self, MetricError> {
        if self.len() < 2 {
            return Err(MetricError::DegenerateSpace);
        }
        let diameter = self.diameter();
        Ok(FiniteMetricSpace {
            labels: self.labels.clone(),
            values: self.values.iter().map(|v| v / &diameter).collect(),
            classes: self.classes.clone(),
        })
    }

    pub fn check_index(&self, index: usize) -> Result<(), MetricError> {
        if index < self.len() {
            Ok(())
        } else {
            Err(MetricError::IndexOutOfRange { index, len: self.len() })
        }
    }

    pub fn distance_to_subset(&self, point: usize, subset: &PointSet) -> Result<Rational, MetricError> {
        self.check_index(point)?;
        subset
            .iter()
            .map(|s| self.class(point, s))
            .min()
            .map(|c| self.values[c as usize].clone())
            .ok_or(MetricError::EmptySubset)
    }

    pub fn min_pairwise_distance(&self, indices: &[usize]) -> Result<Rational, MetricError> {
        if indices.len() < 2 {
            return Err(MetricError::FewerThanTwoPoints);
        }
        for &i in indices {
            self.check_index(i)?;
        }
        let mut best = u32::MAX;
        for (a, &i) in indices.iter().enumerate() {
            for &j in &indices[a + 1..] {
                if i == j {
                    return Err(MetricError::RepeatedIndex(i));
                }
                best = best.min(self.class(i, j));
            }
        }
        Ok(self.values[best as usize].clone())
    }
}
