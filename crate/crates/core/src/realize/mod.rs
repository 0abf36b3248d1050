//! From a finite group `G` to a finite metric space `K` with `Iso(K) ≅ G`.
//!
//! `X` is `G` with a left-invariant metric. Every isometry of `X` outside
//! the left translations is caught by a finite cover of explicit
//! neighborhoods; each neighborhood contributes a pair of staircase maps whose
//! `G`-orbit is adjoined to `X`. An apex point (compact pipeline) or one tag
//! point per orbit (polish pipeline) then pins those orbits down.

pub mod assemble;
pub mod cover;
pub mod lemma;
pub mod space;
pub mod verify;

use thiserror::Error;

use crate::group::{Group, GroupError};
use crate::iso::{enumerate_isometries, EmbeddingFailure, IsoError, SearchConfig};
use crate::katetov::KatetovError;
use crate::metric::MetricError;
use crate::rational::Rational;

pub use assemble::{Assembly, AssemblyOptions, Pipeline, Provenance};
pub use cover::{CoverStrategy, Neighborhood};
pub use lemma::OffsetSchedule;
pub use space::{MetricChoice, TranslationSpace};
pub use verify::{CoverRecord, MapRecord, ProvenanceRecord, RealizationReport};

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Katetov(#[from] KatetovError),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error("left translations are not an embedding: {0}")]
    Embedding(#[from] EmbeddingFailure),
    #[error("metric is not left-invariant: d({g}*{x}, {g}*{y}) != d({x}, {y})")]
    NotLeftInvariant { g: usize, x: usize, y: usize },
    #[error("word metric generators do not generate the group")]
    DisconnectedWordMetric,
    #[error("generator index {0} is not a group element")]
    GeneratorOutOfRange(usize),
    #[error("explicit metric has {got} rows, group has order {expected}")]
    ExplicitSizeMismatch { expected: usize, got: usize },
    #[error("embedded group is not a set of isometries of X")]
    NotASubgroup,
    #[error("no witness tuple separates an isometry from the group")]
    CoverIncomplete,
    #[error("membership equivalence fails for neighborhood {neighborhood} at {witness:?} (inside: {in_neighborhood}, distance {sup_distance})")]
    Lemma1Failed { neighborhood: usize, witness: Vec<usize>, in_neighborhood: bool, sup_distance: Rational },
    #[error("orbit of f_{neighborhood} under element {group_element} comes within epsilon of g_{neighborhood}")]
    SeparationFailed { neighborhood: usize, group_element: usize },
    #[error("offset of neighborhood {0} repeats an earlier one")]
    OffsetCollision(usize),
    #[error("orbit point {0} belongs to two levels")]
    CrossLevelCollision(usize),
    #[error("tag {0} is not farther than diam(Z)")]
    TagSeparationFailed(usize),
    #[error("two tag points coincide")]
    TagCollision,
    #[error("recovery identities fail in the assembled space")]
    RecoveryFailed,
    #[error("element {group_element} does not extend to an isometry of K")]
    ExtensionNotIsometric { group_element: usize },
    #[error("invalid provenance: {0}")]
    InvalidProvenance(String),
}

impl RealizeError {
    pub fn is_budget_exhausted(&self) -> bool {
        matches!(
            self,
            RealizeError::Iso(IsoError::SizeGuardExceeded(_))
                | RealizeError::Embedding(EmbeddingFailure::Iso(IsoError::SizeGuardExceeded(_)))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizeOptions {
    pub metric: MetricChoice,
    pub pipeline: Pipeline,
    pub cover: CoverStrategy,
    pub assembly: AssemblyOptions,
    pub search: SearchConfig,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            metric: MetricChoice::Discrete,
            pipeline: Pipeline::Compact,
            cover: CoverStrategy::Greedy,
            assembly: AssemblyOptions::default(),
            search: SearchConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Realization {
    pub translation: TranslationSpace,
    pub assembly: Assembly,
    pub report: RealizationReport,
}

/// Runs a full pipeline and verifies its output.
///
/// Groups of order at most 2 under the compact pipeline return `X` itself,
/// whose isometry group already is `G`.
pub fn realize(group: &Group, options: &RealizeOptions) -> Result<Realization, RealizeError> {
    let translation = space::left_translation_space(group, &options.metric)?;
    let x = &translation.space;
    let assembly = if group.order() <= 2 && options.pipeline == Pipeline::Compact {
        assemble::trivial_assembly(x, Pipeline::Compact)
    } else {
        let iso_x = enumerate_isometries(x, &options.search)?;
        let nbhds = match options.cover {
            CoverStrategy::Greedy => cover::greedy_cover(x, &translation.embed, &iso_x)?,
            CoverStrategy::Pairs => cover::pairs_cover(x, &translation.embed, &options.search)?,
        };
        match options.pipeline {
            Pipeline::Compact => assemble::assemble_compact(x, &iso_x, &translation.embed, &nbhds, &options.assembly)?,
            Pipeline::Polish => assemble::assemble_polish(x, &iso_x, &translation.embed, &nbhds)?,
        }
    };
    let mut report = verify::verify_realization(&assembly.space, group, &assembly.provenance, &options.search)?;
    // every pair passed the exhaustive gate during assembly
    report.lemma1_verified = Some(true);
    report.pipeline = options.pipeline;
    report.cover_size = assembly.cover.len();
    report.cover = cover_records(x, &assembly);
    Ok(Realization { translation, assembly, report })
}

fn cover_records(x: &crate::metric::FiniteMetricSpace, assembly: &Assembly) -> Vec<CoverRecord> {
    let labels = |points: &[usize]| points.iter().map(|&p| x.label(p).to_string()).collect::<Vec<_>>();
    let map = |values: &[Rational]| MapRecord { base_labels: x.labels().to_vec(), values: values.to_vec() };
    assembly
        .cover
        .iter()
        .zip(&assembly.pairs)
        .map(|(nbhd, pair)| CoverRecord {
            index: nbhd.index,
            witnesses: labels(&nbhd.witnesses),
            targets: labels(&nbhd.targets),
            epsilon: nbhd.epsilon.clone(),
            offset: pair.offset.clone(),
            f: map(&pair.f),
            g: map(&pair.g),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Group {
        Group::from_generators(&[vec![1, 0, 2], vec![0, 2, 1]], 3, 100).unwrap()
    }

    #[test]
    fn compact_small_groups() {
        for group in [Group::cyclic(1), Group::cyclic(2), Group::cyclic(3), Group::cyclic(4)] {
            let r = realize(&group, &RealizeOptions::default()).unwrap();
            assert!(r.report.realized, "{:?}", r.report.failures);
            assert!(r.report.recovery_verified && r.report.all_isometries_extend);
            assert_eq!(r.report.iso_order_of_k, group.order());
        }
    }

    #[test]
    fn degenerate_sizes() {
        let one = realize(&Group::cyclic(1), &RealizeOptions::default()).unwrap();
        assert_eq!(one.assembly.space.len(), 1);
        let two = realize(&Group::cyclic(2), &RealizeOptions::default()).unwrap();
        assert_eq!(two.assembly.space.len(), 2);
        assert_eq!(two.report.iso_order_of_k, 2);
    }

    #[test]
    fn c3_report_fields() {
        let r = realize(&Group::cyclic(3), &RealizeOptions::default()).unwrap();
        assert_eq!(r.report.group_order, 3);
        assert_eq!(r.report.cover_size, 3);
        assert_eq!(r.report.lemma1_verified, Some(true));
        assert_eq!(r.report.cover[0].epsilon, Rational::new(1, 5));
        assert_eq!(r.report.k_size, r.assembly.space.len());
        let json = serde_json::to_value(&r.report).unwrap();
        assert_eq!(json["iso_order_of_K"], 3);
        assert_eq!(json["pipeline"], "compact");
    }

    #[test]
    fn polish_c2_and_c3() {
        let opts = RealizeOptions { pipeline: Pipeline::Polish, ..Default::default() };
        for group in [Group::cyclic(2), Group::cyclic(3)] {
            let r = realize(&group, &opts).unwrap();
            assert!(r.report.realized, "{:?}", r.report.failures);
            assert!(r.report.recovery_verified, "{:?}", r.report.failures);
        }
    }

    #[test]
    fn pairs_cover_and_word_metric() {
        let opts = RealizeOptions { cover: CoverStrategy::Pairs, ..Default::default() };
        assert!(realize(&Group::cyclic(3), &opts).unwrap().report.realized);
        let opts = RealizeOptions { metric: MetricChoice::Word(vec![1]), ..Default::default() };
        assert!(realize(&Group::cyclic(5), &opts).unwrap().report.realized);
    }

    #[test]
    fn s3_word_metric_compact() {
        let opts = RealizeOptions { metric: MetricChoice::Word(vec![1, 2]), ..Default::default() };
        let r = realize(&s3(), &opts).unwrap();
        assert!(r.report.realized, "{:?}", r.report.failures);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = RealizeOptions { search: SearchConfig { node_budget: 2, parallel: false }, ..Default::default() };
        let err = realize(&Group::cyclic(4), &opts).unwrap_err();
        assert!(err.is_budget_exhausted(), "{err}");
    }

    #[test]
    fn deterministic_and_parallel_invariant() {
        let seq = RealizeOptions { search: SearchConfig::sequential(), ..Default::default() };
        let a = realize(&Group::cyclic(4), &RealizeOptions::default()).unwrap();
        let b = realize(&Group::cyclic(4), &seq).unwrap();
        assert_eq!(a.assembly.space, b.assembly.space);
        assert_eq!(a.report, b.report);
    }
}
