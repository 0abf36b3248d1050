//! Assembly of the realizing spaces.
//!
//! Compact pipeline: `Z = X ∪ ⋃ F_i` where `F_i` is the `G`-orbit of `f_i` at
//! level `1 + offset_i`, then `K = Z ∪ {apex}` with the apex at distance
//! `C + d(z, X)` from `z` and `C = diam(Z) + 1`.
//!
//! Polish pipeline: `Z = X ∪ ⋃ F_i` with level-free `f_i`, then one tag point
//! `y_i` per `F_i` (and `F_0 = X`) at distance `(i + 2) + d(z, F_i)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::iso::{IsoGroup, Isometry};
use crate::katetov::{adjoin, pushforward, staircase, KatetovMap, StaircaseSpec};
use crate::metric::{FiniteMetricSpace, PointSet};
use crate::rational::Rational;

use super::cover::Neighborhood;
use super::lemma::{build_pair_functions, lemma1_check, separation_check, OffsetSchedule};
use super::RealizeError;

pub const LEMMA1_RETRIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    #[default]
    Compact,
    Polish,
}

/// Where a point of `K` comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Point of `X`, i.e. a group element.
    Base { group_element: usize },
    /// `g*(f_i)`.
    Orbit { neighborhood: usize, group_element: usize },
    /// Level-1 staircase; `neighborhood == 0` is the constant map 1.
    YLayer { neighborhood: usize, group_element: usize },
    Tag { index: usize },
    Apex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AssemblyOptions {
    pub offsets: OffsetSchedule,
    /// Compact pipeline only.
    pub include_y_layer: bool,
}

/// The staircase pair finally used for a neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairValues {
    pub offset: Rational,
    pub f: Vec<Rational>,
    pub g: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct Assembly {
    pub pipeline: Pipeline,
    pub space: FiniteMetricSpace,
    pub provenance: Vec<Provenance>,
    /// The cover after any ε adjustment by the equivalence gate.
    pub cover: Vec<Neighborhood>,
    pub pairs: Vec<PairValues>,
    pub x_set: PointSet,
    /// `f_sets[i - 1]` is `F_i`.
    pub f_sets: Vec<PointSet>,
    /// Points of `Z` inside `K`.
    pub z_set: PointSet,
    pub apex: Option<usize>,
    pub apex_constant: Option<Rational>,
    /// `tags[i]` is `y_i`.
    pub tags: Vec<usize>,
}

pub(super) fn trivial_assembly(x: &FiniteMetricSpace, pipeline: Pipeline) -> Assembly {
    Assembly {
        pipeline,
        space: x.clone(),
        provenance: (0..x.len()).map(|g| Provenance::Base { group_element: g }).collect(),
        cover: Vec::new(),
        pairs: Vec::new(),
        x_set: PointSet::range(0, x.len()),
        f_sets: Vec::new(),
        z_set: PointSet::range(0, x.len()),
        apex: None,
        apex_constant: None,
        tags: Vec::new(),
    }
}

/// Builds `(f_i, g_i)` and gates it on the exhaustive membership equivalence check, halving
/// `ε` on failure. Also checks separation from the `G`-orbit.
fn gated_pair<'a>(
    x: &'a FiniteMetricSpace,
    iso_x: &IsoGroup,
    embedded: &[Isometry],
    nbhd: &Neighborhood,
    offset: &Rational,
) -> Result<(Neighborhood, KatetovMap<'a>, KatetovMap<'a>), RealizeError> {
    let mut nbhd = nbhd.clone();
    let mut attempt = 0;
    loop {
        let (f, g) = build_pair_functions(x, &nbhd, offset)?;
        match lemma1_check(x, iso_x, &nbhd, &f, &g) {
            Ok(()) => {
                separation_check(embedded, &nbhd, &f, &g)
                    .map_err(|h| RealizeError::SeparationFailed { neighborhood: nbhd.index, group_element: h })?;
                return Ok((nbhd, f, g));
            }
            Err(failure) if attempt == LEMMA1_RETRIES => {
                return Err(RealizeError::Lemma1Failed {
                    neighborhood: nbhd.index,
                    witness: failure.witness.into_vec(),
                    in_neighborhood: failure.in_neighborhood,
                    sup_distance: failure.sup_distance,
                })
            }
            Err(_) => {
                attempt += 1;
                nbhd.epsilon = &nbhd.epsilon / &Rational::from_integer(2);
            }
        }
    }
}

struct Layers<'a> {
    cover: Vec<Neighborhood>,
    pairs: Vec<PairValues>,
    maps: Vec<(String, KatetovMap<'a>)>,
    prov: Vec<Provenance>,
}

fn orbit_layers<'a>(
    x: &'a FiniteMetricSpace,
    iso_x: &IsoGroup,
    embedded: &[Isometry],
    cover: &[Neighborhood],
    offset_of: impl Fn(usize) -> Rational,
) -> Result<Layers<'a>, RealizeError> {
    let mut layers = Layers { cover: Vec::new(), pairs: Vec::new(), maps: Vec::new(), prov: Vec::new() };
    let mut seen = std::collections::HashSet::new();
    for nbhd in cover {
        let offset = offset_of(nbhd.index);
        if !seen.insert(offset.clone()) {
            return Err(RealizeError::OffsetCollision(nbhd.index));
        }
        let (nbhd, f, g) = gated_pair(x, iso_x, embedded, nbhd, &offset)?;
        for (h, phi) in embedded.iter().enumerate() {
            let label = format!("F{}*{}", nbhd.index, x.label(h));
            layers.maps.push((label, pushforward(&f, phi)?));
            layers.prov.push(Provenance::Orbit { neighborhood: nbhd.index, group_element: h });
        }
        layers.pairs.push(PairValues { offset, f: f.values().to_vec(), g: g.values().to_vec() });
        layers.cover.push(nbhd);
    }
    Ok(layers)
}

/// Adjoins the layer maps to `X` and records provenance; the first map placed
/// on a point names it.
fn build_z(
    x: &FiniteMetricSpace,
    layers: &Layers<'_>,
) -> Result<(FiniteMetricSpace, Vec<Provenance>, Vec<usize>), RealizeError> {
    let adj = adjoin(x, &layers.maps)?;
    let mut provenance: Vec<Option<Provenance>> = vec![None; adj.space.len()];
    for g in 0..x.len() {
        provenance[g] = Some(Provenance::Base { group_element: g });
    }
    for (p, prov) in adj.placed.iter().zip(&layers.prov) {
        if provenance[*p].is_none() {
            provenance[*p] = Some(prov.clone());
        }
    }
    let provenance = provenance.into_iter().map(|p| p.expect("every point is placed")).collect();
    Ok((adj.space, provenance, adj.placed))
}

fn f_sets_from(placed: &[usize], prov: &[Provenance], count: usize, z_len: usize) -> Result<Vec<PointSet>, RealizeError> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (p, pr) in placed.iter().zip(prov) {
        if let Provenance::Orbit { neighborhood, .. } = pr {
            members[neighborhood - 1].push(*p);
        }
    }
    members
        .into_iter()
        .map(|mut m| {
            m.sort_unstable();
            m.dedup();
            PointSet::new(m, z_len).map_err(RealizeError::from)
        })
        .collect()
}

/// Compact pipeline. Cover indices must be `1..=N` in order.
pub fn assemble_compact(
    x: &FiniteMetricSpace,
    iso_x: &IsoGroup,
    embedded: &[Isometry],
    cover: &[Neighborhood],
    options: &AssemblyOptions,
) -> Result<Assembly, RealizeError> {
    if x.len() == 1 {
        return Ok(trivial_assembly(x, Pipeline::Compact));
    }
    let schedule = options.offsets;
    let mut layers = orbit_layers(x, iso_x, embedded, cover, |i| schedule.offset(i))?;
    let orbit_count = layers.maps.len();
    if options.include_y_layer {
        let unit = staircase(x, &StaircaseSpec::new(Vec::new(), Rational::one(), Rational::zero()))?;
        layers.maps.push(("Y0".into(), unit));
        layers.prov.push(Provenance::YLayer { neighborhood: 0, group_element: 0 });
        for nbhd in &layers.cover {
            let spec = StaircaseSpec::new(nbhd.witnesses.clone(), nbhd.epsilon.clone(), Rational::zero());
            let y = staircase(x, &spec)?;
            for (h, phi) in embedded.iter().enumerate() {
                layers.maps.push((format!("Y{}*{}", nbhd.index, x.label(h)), pushforward(&y, phi)?));
                layers.prov.push(Provenance::YLayer { neighborhood: nbhd.index, group_element: h });
            }
        }
    }
    let (z, mut provenance, placed) = build_z(x, &layers)?;

    // orbit points of different levels must never coincide
    let mut level_of: HashMap<usize, usize> = HashMap::new();
    for (p, pr) in placed.iter().zip(&layers.prov).take(orbit_count) {
        if let Provenance::Orbit { neighborhood, .. } = pr {
            if *level_of.entry(*p).or_insert(*neighborhood) != *neighborhood {
                return Err(RealizeError::CrossLevelCollision(*p));
            }
        }
    }
    let f_sets = f_sets_from(&placed[..orbit_count], &layers.prov[..orbit_count], layers.cover.len(), z.len())?;

    let x_set = PointSet::range(0, x.len());
    let constant = z.diameter() + Rational::one();
    let apex_values = (0..z.len())
        .map(|p| Ok(&constant + &z.distance_to_subset(p, &x_set)?))
        .collect::<Result<Vec<_>, RealizeError>>()?;
    let apex_map = KatetovMap::new(&z, apex_values)?;
    let k = adjoin(&z, &[("apex".to_string(), apex_map)])?;
    let apex = k.placed[0];
    provenance.push(Provenance::Apex);

    let assembly = Assembly {
        pipeline: Pipeline::Compact,
        space: k.space,
        provenance,
        cover: layers.cover,
        pairs: layers.pairs,
        x_set,
        f_sets,
        z_set: PointSet::range(0, z.len()),
        apex: Some(apex),
        apex_constant: Some(constant),
        tags: Vec::new(),
    };
    if !compact_recovery_holds(&assembly) {
        return Err(RealizeError::RecoveryFailed);
    }
    Ok(assembly)
}

/// `X = {z : d(z, apex) = C}` and `F_i = {z ∈ Z : d(z, X) = 1 + offset_i}`.
pub fn compact_recovery_holds(a: &Assembly) -> bool {
    let (Some(apex), Some(c)) = (a.apex, a.apex_constant.as_ref()) else {
        return true;
    };
    let k = &a.space;
    let at_c: Vec<usize> = (0..k.len()).filter(|&z| k.d(z, apex) == c).collect();
    if at_c != a.x_set.as_slice() {
        return false;
    }
    a.pairs.iter().zip(&a.f_sets).all(|(pair, f_set)| {
        let level = Rational::one() + &pair.offset;
        let at_level: Vec<usize> = a
            .z_set
            .iter()
            .filter(|&z| k.distance_to_subset(z, &a.x_set).map(|d| d == level).unwrap_or(false))
            .collect();
        at_level == f_set.as_slice()
    })
}

/// Polish pipeline. Cover indices must be `1..=N` in order.
pub fn assemble_polish(
    x: &FiniteMetricSpace,
    iso_x: &IsoGroup,
    embedded: &[Isometry],
    cover: &[Neighborhood],
) -> Result<Assembly, RealizeError> {
    if x.len() == 1 {
        return Ok(trivial_assembly(x, Pipeline::Polish));
    }
    // offsets are all zero here; distinctness is not needed since tags, not
    // levels, tell the F_i apart
    let mut layers = Layers { cover: Vec::new(), pairs: Vec::new(), maps: Vec::new(), prov: Vec::new() };
    for nbhd in cover {
        let (nbhd, f, g) = gated_pair(x, iso_x, embedded, nbhd, &Rational::zero())?;
        for (h, phi) in embedded.iter().enumerate() {
            layers.maps.push((format!("F{}*{}", nbhd.index, x.label(h)), pushforward(&f, phi)?));
            layers.prov.push(Provenance::Orbit { neighborhood: nbhd.index, group_element: h });
        }
        layers.pairs.push(PairValues { offset: Rational::zero(), f: f.values().to_vec(), g: g.values().to_vec() });
        layers.cover.push(nbhd);
    }
    let (z, mut provenance, placed) = build_z(x, &layers)?;
    let x_set = PointSet::range(0, x.len());
    let f_sets = f_sets_from(&placed, &layers.prov, layers.cover.len(), z.len())?;

    let diam_z = z.diameter();
    let mut tag_maps = Vec::with_capacity(f_sets.len() + 1);
    for (i, set) in std::iter::once(&x_set).chain(&f_sets).enumerate() {
        let base = Rational::from_integer(i as i64 + 2);
        if base <= diam_z {
            return Err(RealizeError::TagSeparationFailed(i));
        }
        let values = (0..z.len())
            .map(|p| Ok(&base + &z.distance_to_subset(p, set)?))
            .collect::<Result<Vec<_>, RealizeError>>()?;
        tag_maps.push((format!("tag{i}"), KatetovMap::new(&z, values)?));
    }
    let k = adjoin(&z, &tag_maps)?;
    let mut tags = k.placed.clone();
    tags.dedup();
    if tags.len() != k.placed.len() {
        return Err(RealizeError::TagCollision);
    }
    provenance.extend((0..tags.len()).map(|index| Provenance::Tag { index }));

    let assembly = Assembly {
        pipeline: Pipeline::Polish,
        space: k.space,
        provenance,
        cover: layers.cover,
        pairs: layers.pairs,
        x_set,
        f_sets,
        z_set: PointSet::range(0, z.len()),
        apex: None,
        apex_constant: None,
        tags,
    };
    if !polish_recovery_holds(&assembly) {
        return Err(RealizeError::RecoveryFailed);
    }
    Ok(assembly)
}

/// `F_i = {z ∈ Z : d(z, y_i) = i + 2}` with `F_0 = X`, and every tag is
/// farther than `i + 2 > diam(Z)` from all of `Z`.
pub fn polish_recovery_holds(a: &Assembly) -> bool {
    let k = &a.space;
    let diam_z = a
        .z_set
        .iter()
        .flat_map(|p| a.z_set.iter().map(move |q| (p, q)))
        .map(|(p, q)| k.class(p, q))
        .max()
        .map(|c| k.distance_values()[c as usize].clone())
        .unwrap_or_else(Rational::zero);
    a.tags.iter().enumerate().all(|(i, &tag)| {
        let base = Rational::from_integer(i as i64 + 2);
        let expected = if i == 0 { &a.x_set } else { &a.f_sets[i - 1] };
        let at_base: Vec<usize> = a.z_set.iter().filter(|&z| k.d(z, tag) == &base).collect();
        base > diam_z && a.z_set.iter().all(|z| k.d(z, tag) >= &base) && at_base == expected.as_slice()
    })
}
