//! Realizing finite groups as isometry groups of finite metric spaces.
//!
//! Given a finite group `G`, the crate builds a finite metric space `K`
//! with `Iso(K) ≅ G` out of Katětov one-point extensions of a left-invariant
//! metric on `G`, then checks the result with an exact isometry-group search.

pub mod group;
pub mod io;
pub mod iso;
pub mod katetov;
pub mod metric;
pub mod rational;
pub mod realize;

pub use group::{Group, GroupError, GroupSpec};
pub use iso::{enumerate_isometries, naive_enumerate, IsoError, IsoGroup, Isometry, SearchConfig};
pub use katetov::{KatetovError, KatetovMap, StaircaseSpec};
pub use metric::{FiniteMetricSpace, MetricError, PointSet};
pub use rational::Rational;
pub use realize::{realize, Pipeline, RealizationReport, RealizeError, RealizeOptions};
