//! JSON files: metric spaces (optionally with provenance), groups, reports.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Group, GroupError, GroupFile, GroupSpec};
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::rational::Rational;
use crate::realize::ProvenanceRecord;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Metric { path: PathBuf, source: MetricError },
    #[error("{path}: {source}")]
    Group { path: PathBuf, source: GroupError },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub labels: Vec<String>,
    pub d: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<ProvenanceRecord>>,
}

impl SpaceFile {
    pub fn from_space(space: &FiniteMetricSpace, provenance: Option<Vec<ProvenanceRecord>>) -> Self {
        SpaceFile { labels: space.labels().to_vec(), d: space.matrix(), provenance }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| FileError::Json { path: path.into(), source })
}

pub fn read_space(path: &Path) -> Result<(FiniteMetricSpace, Option<Vec<ProvenanceRecord>>), FileError> {
    let file: SpaceFile = read_json(path)?;
    let space =
        FiniteMetricSpace::new(file.labels, file.d).map_err(|source| FileError::Metric { path: path.into(), source })?;
    Ok((space, file.provenance))
}

/// A bare distance matrix or a full space file; only the matrix is used.
pub fn read_matrix(path: &Path) -> Result<Vec<Vec<Rational>>, FileError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum MatrixFile {
        Bare(Vec<Vec<Rational>>),
        Space(SpaceFile),
    }
    Ok(match read_json::<MatrixFile>(path)? {
        MatrixFile::Bare(m) => m,
        MatrixFile::Space(s) => s.d,
    })
}

pub fn read_group(path: &Path) -> Result<Group, FileError> {
    let file: GroupFile = read_json(path)?;
    let err = |source| FileError::Group { path: path.into(), source };
    let spec = GroupSpec::try_from(file).map_err(err)?;
    Group::from_spec(&spec).map_err(err)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FileError> {
    fs::write(path, text).map_err(|source| FileError::Write { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_file_round_trip() {
        let text = r#"{"labels": ["a","b"], "d": [["0","1/2"],["1/2","0"]]}"#;
        let file: SpaceFile = serde_json::from_str(text).unwrap();
        let space = FiniteMetricSpace::new(file.labels.clone(), file.d.clone()).unwrap();
        let back: SpaceFile = serde_json::from_str(&to_json(&SpaceFile::from_space(&space, None))).unwrap();
        assert_eq!(back, file);
        assert!(!to_json(&file).contains("provenance"));
    }

    #[test]
    fn strict_fractions_and_fields() {
        assert!(serde_json::from_str::<SpaceFile>(r#"{"labels": ["a","b"], "d": [["0","2/4"],["2/4","0"]]}"#).is_err());
        assert!(serde_json::from_str::<SpaceFile>(r#"{"labels": ["a"], "d": [[0]]}"#).is_err());
        assert!(serde_json::from_str::<SpaceFile>(r#"{"labels": ["a"], "d": [["0"]], "extra": 1}"#).is_err());
    }
}
