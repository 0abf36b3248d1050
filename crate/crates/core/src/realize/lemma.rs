//! The staircase pair `(f_i, g_i)` attached to a neighborhood, and the exact
//! check that `ψ ∈ V_i ⇔ d(ψ*(f_i), g_i) < ε_i` over all of `Iso(X)`.

use crate::iso::{IsoGroup, Isometry};
use crate::katetov::{pushforward, staircase, sup_distance, KatetovError, KatetovMap, StaircaseSpec};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

use super::cover::{v_membership, Neighborhood};

/// Level offsets attached to neighborhood `i >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OffsetSchedule {
    /// `1 / (i + 1)`.
    #[default]
    Harmonic,
    /// `1 / 2^i`.
    Dyadic,
}

impl OffsetSchedule {
    pub fn offset(&self, i: usize) -> Rational {
        match self {
            OffsetSchedule::Harmonic => Rational::new(1, i as i64 + 1),
            OffsetSchedule::Dyadic => Rational::dyadic(i as u32),
        }
    }
}

/// `f` is the staircase over the witnesses, `g` the one over the targets.
pub fn build_pair_functions<'a>(
    space: &'a FiniteMetricSpace,
    nbhd: &Neighborhood,
    offset: &Rational,
) -> Result<(KatetovMap<'a>, KatetovMap<'a>), KatetovError> {
    let f = staircase(space, &StaircaseSpec::new(nbhd.witnesses.clone(), nbhd.epsilon.clone(), offset.clone()))?;
    let g = staircase(space, &StaircaseSpec::new(nbhd.targets.clone(), nbhd.epsilon.clone(), offset.clone()))?;
    Ok((f, g))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Failure {
    pub witness: Isometry,
    pub in_neighborhood: bool,
    pub sup_distance: Rational,
}

/// Exhaustive check of the equivalence over every `ψ` in `iso`.
pub fn lemma1_check(
    space: &FiniteMetricSpace,
    iso: &IsoGroup,
    nbhd: &Neighborhood,
    f: &KatetovMap<'_>,
    g: &KatetovMap<'_>,
) -> Result<(), Lemma1Failure> {
    for psi in iso.elements() {
        let inside = v_membership(space, psi, nbhd);
        let moved = pushforward(f, psi).expect("isometry of the base");
        let dist = sup_distance(&moved, g).expect("same base");
        if inside != (dist < nbhd.epsilon) {
            return Err(Lemma1Failure { witness: psi.clone(), in_neighborhood: inside, sup_distance: dist });
        }
    }
    Ok(())
}

/// `d(h*(f), g) >= ε` for every `h` in `G`; returns the offending element.
pub fn separation_check(
    embedded: &[Isometry],
    nbhd: &Neighborhood,
    f: &KatetovMap<'_>,
    g: &KatetovMap<'_>,
) -> Result<(), usize> {
    for (h, phi) in embedded.iter().enumerate() {
        let moved = pushforward(f, phi).expect("isometry of the base");
        if sup_distance(&moved, g).expect("same base") < nbhd.epsilon {
            return Err(h);
        }
    }
    Ok(())
}
