//! Finite abstract groups given by a Cayley table or by permutation generators.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_ORDER_CAP: usize = 5040;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("Cayley table is empty")]
    EmptyTable,
    #[error("Cayley table row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("Cayley table entry ({row},{col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("index 0 is not an identity: fails against element {0}")]
    NoIdentity(usize),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("generator {index} is not a permutation of degree {degree}")]
    InvalidGenerator { index: usize, degree: usize },
    #[error("generated group exceeds the order cap {0}")]
    OrderCapExceeded(usize),
    #[error("group file must contain exactly one of `cayley` or `generators`")]
    AmbiguousSpec,
}

/// How a group is presented on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    /// `table[g][h]` is the index of `g*h`; index 0 is the identity.
    Cayley(Vec<Vec<usize>>),
    /// Permutations of `0..degree`; the group is their closure.
    Generators { generators: Vec<Vec<usize>>, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

impl TryFrom<GroupFile> for GroupSpec {
    type Error = GroupError;

    fn try_from(file: GroupFile) -> Result<Self, GroupError> {
        match (file.cayley, file.generators, file.degree) {
            (Some(table), None, None) => Ok(GroupSpec::Cayley(table)),
            (None, Some(generators), Some(degree)) => Ok(GroupSpec::Generators { generators, degree }),
            (None, Some(generators), None) => {
                let degree = generators.first().map_or(0, Vec::len);
                Ok(GroupSpec::Generators { generators, degree })
            }
            _ => Err(GroupError::AmbiguousSpec),
        }
    }
}

/// A finite group with elements `0..order`, identity at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    labels: Vec<String>,
}

impl Group {
    pub fn from_spec(spec: &GroupSpec) -> Result<Self, GroupError> {
        Self::from_spec_with_cap(spec, DEFAULT_ORDER_CAP)
    }

    pub fn from_spec_with_cap(spec: &GroupSpec, order_cap: usize) -> Result<Self, GroupError> {
        match spec {
            GroupSpec::Cayley(table) => Self::from_cayley(table),
            GroupSpec::Generators { generators, degree } => Self::from_generators(generators, *degree, order_cap),
        }
    }

    pub fn from_cayley(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::EmptyTable);
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare { row, len: entries.len(), expected: n });
            }
            if let Some((col, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::EntryOutOfRange { row, col, value });
            }
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(GroupError::NoIdentity(g));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
                Some(h) => inverses.push(h),
                None => return Err(GroupError::NoInverse(g)),
            }
        }
        Ok(Group {
            order: n,
            table: table.iter().flatten().copied().collect(),
            inverses,
            labels: (0..n).map(|g| format!("g{g}")).collect(),
        })
    }

    /// Closure of the generators under composition, elements in breadth-first
    /// discovery order starting from the identity.
    pub fn from_generators(generators: &[Vec<usize>], degree: usize, order_cap: usize) -> Result<Self, GroupError> {
        for (index, gen) in generators.iter().enumerate() {
            if !is_permutation(gen, degree) {
                return Err(GroupError::InvalidGenerator { index, degree });
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for gen in generators {
                let next = compose_perms(&elements[e], gen);
                if !index.contains_key(&next) {
                    if elements.len() == order_cap {
                        return Err(GroupError::OrderCapExceeded(order_cap));
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                table.push(index[&compose_perms(a, b)]);
            }
        }
        let inverses = elements.iter().map(|p| index[&invert_perm(p)]).collect();
        let labels = elements
            .iter()
            .map(|p| format!("p{}", p.iter().map(usize::to_string).collect::<Vec<_>>().join(".")))
            .collect();
        Ok(Group { order: n, table, inverses, labels })
    }

    /// Cyclic group of the given order, as a Cayley table.
    pub fn cyclic(order: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..order).map(|g| (0..order).map(|h| (g + h) % order).collect()).collect();
        Group::from_cayley(&table).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }
}

pub(crate) fn is_permutation(perm: &[usize], degree: usize) -> bool {
    if perm.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &p in perm {
        if p >= degree || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    true
}

/// `a ∘ b`: apply `b` first.
pub(crate) fn compose_perms(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

pub(crate) fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_three() {
        let g = Group::from_cayley(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.mul(1, 1), 2);
        assert_eq!(g.inverse(1), 2);
        assert_eq!(g, Group::cyclic(3));
    }

    #[test]
    fn symmetric_three_from_transpositions() {
        let g = Group::from_generators(&[vec![1, 0, 2], vec![0, 2, 1]], 3, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 6);
        // discovery order is deterministic
        assert_eq!(g.label(0), "p0.1.2");
        assert_eq!(g.label(1), "p1.0.2");
        assert_eq!(g.label(2), "p0.2.1");
        // nonabelian
        assert_ne!(g.mul(1, 2), g.mul(2, 1));
        // the table it produces is itself a valid Cayley table
        assert_eq!(Group::from_cayley(&g.cayley_table()).unwrap().order(), 6);
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // identity at 0, every element self-inverse, but (1*1)*2 != 1*(1*2)
        let table = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 1, 2, 0]];
        assert!(matches!(Group::from_cayley(&table), Err(GroupError::NotAssociative(..))));
        let table = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 1, 0]];
        assert_eq!(Group::from_cayley(&table), Err(GroupError::NotAssociative(1, 1, 2)));
    }

    #[test]
    fn identity_and_inverse_errors() {
        assert_eq!(Group::from_cayley(&[vec![1, 0], vec![0, 1]]), Err(GroupError::NoIdentity(0)));
        // associative monoid {0,1} with 1*1 = 1 has no inverse for 1
        assert_eq!(Group::from_cayley(&[vec![0, 1], vec![1, 1]]), Err(GroupError::NoInverse(1)));
        assert_eq!(Group::from_cayley(&[]), Err(GroupError::EmptyTable));
        assert!(matches!(Group::from_cayley(&[vec![0, 2], vec![1, 0]]), Err(GroupError::EntryOutOfRange { .. })));
    }

    #[test]
    fn order_cap_and_bad_generators() {
        let cycle: Vec<usize> = (1..8).chain([0]).collect();
        let swap: Vec<usize> = [1, 0].into_iter().chain(2..8).collect();
        assert_eq!(Group::from_generators(&[cycle, swap], 8, 5040), Err(GroupError::OrderCapExceeded(5040)));
        assert_eq!(
            Group::from_generators(&[vec![0, 0, 1]], 3, 10),
            Err(GroupError::InvalidGenerator { index: 0, degree: 3 })
        );
        assert_eq!(Group::from_generators(&[], 3, 10).unwrap().order(), 1);
    }

    #[test]
    fn group_file_forms() {
        let c: GroupFile = serde_json::from_str(r#"{"cayley": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(GroupSpec::try_from(c).unwrap(), GroupSpec::Cayley(vec![vec![0, 1], vec![1, 0]]));
        let g: GroupFile = serde_json::from_str(r#"{"generators": [[1,0,2],[0,2,1]], "degree": 3}"#).unwrap();
        assert!(matches!(GroupSpec::try_from(g).unwrap(), GroupSpec::Generators { degree: 3, .. }));
        let both: GroupFile = serde_json::from_str(r#"{"cayley": [[0]], "generators": []}"#).unwrap();
        assert_eq!(GroupSpec::try_from(both), Err(GroupError::AmbiguousSpec));
        assert!(serde_json::from_str::<GroupFile>(r#"{"table": [[0]]}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_perm(degree: usize) -> impl Strategy<Value = Vec<usize>> {
            Just((0..degree).collect::<Vec<_>>()).prop_shuffle()
        }

        proptest! {
            #[test]
            fn generated_groups_satisfy_axioms(gens in proptest::collection::vec(arb_perm(5), 0..3)) {
                let g = Group::from_generators(&gens, 5, DEFAULT_ORDER_CAP).unwrap();
                let n = g.order();
                prop_assert!(120 % n == 0);
                for a in 0..n {
                    prop_assert_eq!(g.mul(a, g.inverse(a)), 0);
                    prop_assert_eq!(g.mul(0, a), a);
                    for b in 0..n {
                        for c in 0..n {
                            prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                        }
                    }
                }
            }
        }
    }
}
