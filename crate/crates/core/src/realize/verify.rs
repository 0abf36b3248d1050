//! Independent check of a realization: enumerate `Iso(K)`, extend every
//! group element to `K` from provenance alone, and test the recovery sets.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::group::Group;
use crate::iso::{enumerate_isometries, is_isometry, verify_embedding, IsoGroup, Isometry, SearchConfig};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

use super::assemble::{Pipeline, Provenance};
use super::RealizeError;

/// Serialized form of one provenance entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceRecord {
    pub label: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_element: Option<usize>,
    /// Neighborhood index for orbit and Y-layer points, tag index for tags.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighborhood: Option<usize>,
}

impl ProvenanceRecord {
    pub fn new(label: &str, provenance: &Provenance) -> Self {
        let (kind, group_element, neighborhood) = match *provenance {
            Provenance::Base { group_element } => ("base", Some(group_element), None),
            Provenance::Orbit { neighborhood, group_element } => ("orbit", Some(group_element), Some(neighborhood)),
            Provenance::YLayer { neighborhood, group_element } => ("ylayer", Some(group_element), Some(neighborhood)),
            Provenance::Tag { index } => ("tag", None, Some(index)),
            Provenance::Apex => ("apex", None, None),
        };
        ProvenanceRecord { label: label.to_string(), kind: kind.to_string(), group_element, neighborhood }
    }

    pub fn to_provenance(&self) -> Result<Provenance, RealizeError> {
        let need = |v: Option<usize>, field: &str| {
            v.ok_or_else(|| RealizeError::InvalidProvenance(format!("{}: {} point without {field}", self.label, self.kind)))
        };
        let forbid = |v: Option<usize>, field: &str| match v {
            Some(_) => Err(RealizeError::InvalidProvenance(format!("{}: {} point with {field}", self.label, self.kind))),
            None => Ok(()),
        };
        Ok(match self.kind.as_str() {
            "base" => {
                forbid(self.neighborhood, "neighborhood")?;
                Provenance::Base { group_element: need(self.group_element, "group_element")? }
            }
            "orbit" => Provenance::Orbit {
                neighborhood: need(self.neighborhood, "neighborhood")?,
                group_element: need(self.group_element, "group_element")?,
            },
            "ylayer" => Provenance::YLayer {
                neighborhood: need(self.neighborhood, "neighborhood")?,
                group_element: need(self.group_element, "group_element")?,
            },
            "tag" => {
                forbid(self.group_element, "group_element")?;
                Provenance::Tag { index: need(self.neighborhood, "neighborhood")? }
            }
            "apex" => {
                forbid(self.group_element, "group_element")?;
                forbid(self.neighborhood, "neighborhood")?;
                Provenance::Apex
            }
            other => return Err(RealizeError::InvalidProvenance(format!("{}: unknown kind {other:?}", self.label))),
        })
    }
}

/// Maps records onto the points of `k` by label. Every point needs exactly
/// one record.
pub fn provenance_from_records(k: &FiniteMetricSpace, records: &[ProvenanceRecord]) -> Result<Vec<Provenance>, RealizeError> {
    let mut out: Vec<Option<Provenance>> = vec![None; k.len()];
    for rec in records {
        let p = k
            .index_of(&rec.label)
            .ok_or_else(|| RealizeError::InvalidProvenance(format!("{}: no such point", rec.label)))?;
        if out[p].replace(rec.to_provenance()?).is_some() {
            return Err(RealizeError::InvalidProvenance(format!("{}: two records", rec.label)));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(p, prov)| prov.ok_or_else(|| RealizeError::InvalidProvenance(format!("{}: no record", k.label(p)))))
        .collect()
}

/// The structural roles of points in `K`, read off the provenance.
#[derive(Debug, Clone)]
pub struct Layout {
    /// `x_points[g]` is the point of group element `g`.
    pub x_points: Vec<usize>,
    /// Points of `Z`, i.e. everything but tags and apex.
    pub z_points: Vec<usize>,
    /// Orbit points by neighborhood index.
    pub f_sets: BTreeMap<usize, Vec<usize>>,
    pub apex: Option<usize>,
    /// `tags[i]` is `y_i`.
    pub tags: Vec<usize>,
}

impl Layout {
    pub fn new(group: &Group, provenance: &[Provenance]) -> Result<Self, RealizeError> {
        let order = group.order();
        let bad = |msg: String| RealizeError::InvalidProvenance(msg);
        let mut x_points = vec![None; order];
        let mut z_points = Vec::new();
        let mut f_sets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut apex = None;
        let mut tags = BTreeMap::new();
        for (p, prov) in provenance.iter().enumerate() {
            match *prov {
                Provenance::Base { group_element }
                | Provenance::Orbit { group_element, .. }
                | Provenance::YLayer { group_element, .. }
                    if group_element >= order =>
                {
                    return Err(bad(format!("point {p}: group element {group_element} out of range")));
                }
                Provenance::Base { group_element } => {
                    if x_points[group_element].replace(p).is_some() {
                        return Err(bad(format!("group element {group_element} has two base points")));
                    }
                    z_points.push(p);
                }
                Provenance::Orbit { neighborhood: 0, .. } => return Err(bad(format!("point {p}: orbit index 0"))),
                Provenance::Orbit { neighborhood, .. } => {
                    f_sets.entry(neighborhood).or_default().push(p);
                    z_points.push(p);
                }
                Provenance::YLayer { .. } => z_points.push(p),
                Provenance::Tag { index } => {
                    if tags.insert(index, p).is_some() {
                        return Err(bad(format!("tag {index} appears twice")));
                    }
                }
                Provenance::Apex => {
                    if apex.replace(p).is_some() {
                        return Err(bad("two apex points".into()));
                    }
                }
            }
        }
        let x_points = x_points
            .into_iter()
            .enumerate()
            .map(|(g, p)| p.ok_or_else(|| bad(format!("group element {g} has no base point"))))
            .collect::<Result<Vec<_>, _>>()?;
        if tags.keys().copied().ne(0..tags.len()) {
            return Err(bad("tag indices are not 0..N".into()));
        }
        if apex.is_some() && !tags.is_empty() {
            return Err(bad("both an apex and tags".into()));
        }
        Ok(Layout { x_points, z_points, f_sets, apex, tags: tags.into_values().collect() })
    }

    pub fn pipeline(&self) -> Pipeline {
        if self.tags.is_empty() {
            Pipeline::Compact
        } else {
            Pipeline::Polish
        }
    }
}

/// Extends isometries of `X` to `K`: derived points are Katětov maps over `X`
/// and move by pushforward; tags and the apex stay put.
pub struct Extender<'a> {
    k: &'a FiniteMetricSpace,
    layout: &'a Layout,
    /// Distance-class profile over `X` (group element order) to point.
    by_profile: HashMap<Vec<u32>, usize>,
    derived: Vec<(usize, Vec<u32>)>,
}

impl<'a> Extender<'a> {
    pub fn new(k: &'a FiniteMetricSpace, layout: &'a Layout, provenance: &[Provenance]) -> Self {
        let mut by_profile = HashMap::new();
        let mut derived = Vec::new();
        for (p, prov) in provenance.iter().enumerate() {
            if matches!(prov, Provenance::Orbit { .. } | Provenance::YLayer { .. }) {
                let profile: Vec<u32> = layout.x_points.iter().map(|&x| k.class(p, x)).collect();
                by_profile.entry(profile.clone()).or_insert(p);
                derived.push((p, profile));
            }
        }
        Extender { k, layout, by_profile, derived }
    }

    /// `phi` permutes group elements (points of `X` in group order).
    pub fn extend(&self, phi: &Isometry, group_element: usize) -> Result<Isometry, RealizeError> {
        let fail = || RealizeError::ExtensionNotIsometric { group_element };
        let n = self.layout.x_points.len();
        if phi.len() != n {
            return Err(fail());
        }
        let mut perm: Vec<usize> = (0..self.k.len()).collect();
        for (g, &x) in self.layout.x_points.iter().enumerate() {
            perm[x] = self.layout.x_points[phi.apply(g)];
        }
        let mut moved = vec![0u32; n];
        for (p, profile) in &self.derived {
            for (g, &c) in profile.iter().enumerate() {
                moved[phi.apply(g)] = c;
            }
            perm[*p] = *self.by_profile.get(&moved).ok_or_else(fail)?;
        }
        if is_isometry(self.k, &perm)? {
            Ok(Isometry::from_trusted(perm))
        } else {
            Err(fail())
        }
    }
}

/// Left translation by `g` on `X`, in group element order.
fn translation(group: &Group, g: usize) -> Isometry {
    Isometry::from_trusted(group.elements().map(|x| group.mul(g, x)).collect())
}

/// Extends the left translation by `g` to all of `K`.
pub fn extend_isometry(
    k: &FiniteMetricSpace,
    group: &Group,
    provenance: &[Provenance],
    g: usize,
) -> Result<Isometry, RealizeError> {
    let layout = Layout::new(group, provenance)?;
    Extender::new(k, &layout, provenance).extend(&translation(group, g), g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    pub base_labels: Vec<String>,
    pub values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub index: usize,
    pub witnesses: Vec<String>,
    pub targets: Vec<String>,
    pub epsilon: Rational,
    pub offset: Rational,
    pub f: MapRecord,
    pub g: MapRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationReport {
    pub group_order: usize,
    pub pipeline: Pipeline,
    pub k_size: usize,
    pub point_provenance: Vec<ProvenanceRecord>,
    pub cover_size: usize,
    #[serde(rename = "iso_order_of_K")]
    pub iso_order_of_k: usize,
    pub embedding_verified: bool,
    /// `None` when the cover is not available, e.g. when re-verifying a
    /// stored space.
    pub lemma1_verified: Option<bool>,
    pub recovery_verified: bool,
    pub all_isometries_extend: bool,
    pub realized: bool,
    pub cover: Vec<CoverRecord>,
    pub failures: Vec<String>,
}

/// Runs every check on `K`. Malformed provenance is an error; a failed
/// check only clears the matching flag and is described in `failures`.
pub fn verify_realization(
    k: &FiniteMetricSpace,
    group: &Group,
    provenance: &[Provenance],
    search: &SearchConfig,
) -> Result<RealizationReport, RealizeError> {
    if provenance.len() != k.len() {
        return Err(RealizeError::InvalidProvenance(format!(
            "{} records for {} points",
            provenance.len(),
            k.len()
        )));
    }
    let layout = Layout::new(group, provenance)?;
    let mut failures = Vec::new();

    let extender = Extender::new(k, &layout, provenance);
    let mut embed = Vec::with_capacity(group.order());
    for g in group.elements() {
        match extender.extend(&translation(group, g), g) {
            Ok(psi) => embed.push(psi),
            Err(e) => failures.push(e.to_string()),
        }
    }
    let embedding_verified = embed.len() == group.order()
        && match verify_embedding(group, &embed) {
            Ok(()) => true,
            Err(e) => {
                failures.push(format!("embedding: {e}"));
                false
            }
        };

    let iso_k = enumerate_isometries(k, search)?;
    if iso_k.order() != group.order() {
        failures.push(format!("|Iso(K)| = {} but |G| = {}", iso_k.order(), group.order()));
    }
    let all_isometries_extend = {
        let images: std::collections::HashSet<&[usize]> = embed.iter().map(Isometry::as_slice).collect();
        let missing = iso_k.elements().iter().filter(|psi| !images.contains(psi.as_slice())).count();
        if missing > 0 {
            failures.push(format!("{missing} isometries of K are not extensions of group elements"));
        }
        missing == 0
    };
    let recovery_verified = match recovery(k, &layout, &iso_k) {
        Ok(()) => true,
        Err(msg) => {
            failures.push(format!("recovery: {msg}"));
            false
        }
    };

    Ok(RealizationReport {
        group_order: group.order(),
        pipeline: layout.pipeline(),
        k_size: k.len(),
        point_provenance: provenance.iter().enumerate().map(|(p, prov)| ProvenanceRecord::new(k.label(p), prov)).collect(),
        cover_size: if layout.tags.is_empty() { layout.f_sets.len() } else { layout.tags.len() - 1 },
        iso_order_of_k: iso_k.order(),
        embedding_verified,
        lemma1_verified: None,
        recovery_verified,
        all_isometries_extend,
        realized: embedding_verified && iso_k.order() == group.order(),
        cover: Vec::new(),
        failures,
    })
}

fn recovery(k: &FiniteMetricSpace, layout: &Layout, iso_k: &IsoGroup) -> Result<(), String> {
    let mut x_sorted = layout.x_points.clone();
    x_sorted.sort_unstable();
    let preserves = |set: &[usize]| {
        iso_k.elements().iter().all(|psi| {
            let mut image: Vec<usize> = set.iter().map(|&p| psi.apply(p)).collect();
            image.sort_unstable();
            image == set
        })
    };
    let dist_to_x = |z: usize| layout.x_points.iter().map(|&x| k.d(z, x)).min().cloned().unwrap_or_else(Rational::zero);

    if let Some(apex) = layout.apex {
        let c = k.d(apex, layout.x_points[0]).clone();
        let at_c: Vec<usize> = (0..k.len()).filter(|&z| k.d(z, apex) == &c).collect();
        if at_c != x_sorted {
            return Err(format!("points at distance {c} from the apex are not X"));
        }
        let mut levels = Vec::new();
        for (i, f_set) in &layout.f_sets {
            let level = dist_to_x(f_set[0]);
            let at_level: Vec<usize> = layout.z_points.iter().copied().filter(|&z| dist_to_x(z) == level).collect();
            if &at_level != f_set {
                return Err(format!("points of Z at distance {level} from X are not F_{i}"));
            }
            levels.push(level);
        }
        levels.sort();
        if levels.windows(2).any(|w| w[0] == w[1]) {
            return Err("two orbit sets share a level".into());
        }
        if !iso_k.elements().iter().all(|psi| psi.apply(apex) == apex) {
            return Err("some isometry moves the apex".into());
        }
    }

    if !layout.tags.is_empty() {
        let diam_z = layout
            .z_points
            .iter()
            .flat_map(|&p| layout.z_points.iter().map(move |&q| k.class(p, q)))
            .max()
            .map(|c| k.distance_values()[c as usize].clone())
            .unwrap_or_else(Rational::zero);
        for (i, &tag) in layout.tags.iter().enumerate() {
            let base = Rational::from_integer(i as i64 + 2);
            if base <= diam_z {
                return Err(format!("tag {i} level {base} does not exceed diam(Z) = {diam_z}"));
            }
            if layout.z_points.iter().any(|&z| k.d(z, tag) < &base) {
                return Err(format!("tag {i} is closer than {base} to Z"));
            }
            let at_base: Vec<usize> = layout.z_points.iter().copied().filter(|&z| k.d(z, tag) == &base).collect();
            // equal orbit maps under different indices share a point that
            // names only the first index, so named points give a lower bound
            let ok = if i == 0 {
                at_base == x_sorted
            } else {
                let named = layout.f_sets.get(&i).map(Vec::as_slice).unwrap_or(&[]);
                !at_base.is_empty()
                    && at_base.iter().all(|p| x_sorted.binary_search(p).is_err())
                    && named.iter().all(|p| at_base.binary_search(p).is_ok())
            };
            if !ok {
                return Err(format!("points at distance {base} from tag {i} do not match F_{i}"));
            }
            if !iso_k.elements().iter().all(|psi| psi.apply(tag) == tag) {
                return Err(format!("some isometry moves tag {i}"));
            }
        }
    }

    if !preserves(&x_sorted) {
        return Err("some isometry does not preserve X".into());
    }
    if layout.apex.is_some() {
        for (i, f_set) in &layout.f_sets {
            if !preserves(f_set) {
                return Err(format!("some isometry does not preserve F_{i}"));
            }
        }
    }
    Ok(())
}
