use std::collections::VecDeque;

use crate::group::Group;
use crate::iso::{verify_embedding, Isometry};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

use super::RealizeError;

/// Left-invariant metric to put on the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricChoice {
    /// All distinct elements at distance 1.
    Discrete,
    /// Word length w.r.t. the given element indices and their inverses.
    Word(Vec<usize>),
    /// Explicit matrix indexed by group element.
    Explicit(Vec<Vec<Rational>>),
}

/// `X = (G, d)` together with the left-translation action.
#[derive(Debug, Clone)]
pub struct TranslationSpace {
    pub space: FiniteMetricSpace,
    /// `embed[g]` is `x -> g·x`.
    pub embed: Vec<Isometry>,
}

/// Builds `X` from the group. Point `x` of `X` is group element `x`, so the
/// identity element sits at index 0. The space is rescaled to diameter 1.
pub fn left_translation_space(group: &Group, choice: &MetricChoice) -> Result<TranslationSpace, RealizeError> {
    let n = group.order();
    let matrix = match choice {
        MetricChoice::Discrete => (0..n)
            .map(|i| (0..n).map(|j| Rational::from_integer((i != j) as i64)).collect())
            .collect(),
        MetricChoice::Word(generators) => word_metric(group, generators)?,
        MetricChoice::Explicit(matrix) => {
            if matrix.len() != n {
                return Err(RealizeError::ExplicitSizeMismatch { expected: n, got: matrix.len() });
            }
            matrix.clone()
        }
    };
    let space = FiniteMetricSpace::new(group.labels().to_vec(), matrix)?;
    for g in group.elements() {
        for x in 0..n {
            for y in x + 1..n {
                if space.class(group.mul(g, x), group.mul(g, y)) != space.class(x, y) {
                    return Err(RealizeError::NotLeftInvariant { g, x, y });
                }
            }
        }
    }
    let space = if n >= 2 { space.rescale_to_unit_diameter()? } else { space };
    let embed = group
        .elements()
        .map(|g| Isometry::new(&space, group.elements().map(|x| group.mul(g, x)).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    verify_embedding(group, &embed)?;
    Ok(TranslationSpace { space, embed })
}

/// `d(x, y) = |x⁻¹y|` in the Cayley graph of the symmetrized generating set.
fn word_metric(group: &Group, generators: &[usize]) -> Result<Vec<Vec<Rational>>, RealizeError> {
    let n = group.order();
    if let Some(&bad) = generators.iter().find(|&&s| s >= n) {
        return Err(RealizeError::GeneratorOutOfRange(bad));
    }
    let steps: Vec<usize> = generators.iter().flat_map(|&s| [s, group.inverse(s)]).collect();
    let mut length = vec![None; n];
    length[0] = Some(0i64);
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        let lx = length[x].expect("queued elements have a length");
        for &s in &steps {
            let y = group.mul(x, s);
            if length[y].is_none() {
                length[y] = Some(lx + 1);
                queue.push_back(y);
            }
        }
    }
    let length: Vec<i64> = length
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(RealizeError::DisconnectedWordMetric)?;
    Ok((0..n)
        .map(|x| (0..n).map(|y| Rational::from_integer(length[group.mul(group.inverse(x), y)])).collect())
        .collect())
}
