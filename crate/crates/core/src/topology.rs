//! Finite topological spaces on at most 20 points.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{is_subset, mask_of, points_of, Mask};

pub const MAX_POINTS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("universe of {0} points exceeds the limit of {MAX_POINTS}")]
    TooLarge(u32),
    #[error("set {0:?} leaves the universe")]
    OutOfRange(Vec<u32>),
    #[error("open sets are not closed under {0}")]
    NotClosed(&'static str),
    #[error("the empty set and the whole space must be open")]
    MissingBounds,
    #[error("{0:?} is not a nonempty open set")]
    NotOpen(Vec<u32>),
    #[error("space description needs exactly one of `opens` or `subbase`")]
    Description,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    points: u32,
    opens: Vec<Mask>,
}

/// Canonical enumeration: fewer points first, ties by mask value.
fn canonical_sort(opens: &mut Vec<Mask>) {
    opens.sort_by_key(|&m| (m.count_ones(), m));
    opens.dedup();
}

impl FiniteSpace {
    pub fn from_opens(points: u32, opens: Vec<Mask>) -> Result<Self, TopologyError> {
        if points > MAX_POINTS {
            return Err(TopologyError::TooLarge(points));
        }
        let full = full_mask(points);
        if let Some(&bad) = opens.iter().find(|&&o| o & !full != 0) {
            return Err(TopologyError::OutOfRange(points_of(bad)));
        }
        let mut opens = opens;
        canonical_sort(&mut opens);
        if !opens.contains(&0) || !opens.contains(&full) {
            return Err(TopologyError::MissingBounds);
        }
        let present: BTreeSet<Mask> = opens.iter().copied().collect();
        for &a in &opens {
            for &b in &opens {
                if !present.contains(&(a | b)) {
                    return Err(TopologyError::NotClosed("union"));
                }
                if !present.contains(&(a & b)) {
                    return Err(TopologyError::NotClosed("intersection"));
                }
            }
        }
        Ok(FiniteSpace { points, opens })
    }

    pub fn points(&self) -> u32 {
        self.points
    }

    pub fn full(&self) -> Mask {
        full_mask(self.points)
    }

    /// All opens in canonical order, the empty set first.
    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }

    /// Nonempty opens in canonical order.
    pub fn nonempty_opens(&self) -> &[Mask] {
        &self.opens[1..]
    }

    pub fn is_open(&self, set: Mask) -> bool {
        self.opens
            .binary_search_by_key(&(set.count_ones(), set), |&m| (m.count_ones(), m))
            .is_ok()
    }

    pub fn index_of(&self, set: Mask) -> Option<usize> {
        self.opens
            .binary_search_by_key(&(set.count_ones(), set), |&m| (m.count_ones(), m))
            .ok()
    }

    fn require_nonempty_open(&self, set: Mask) -> Result<(), TopologyError> {
        if set == 0 || !self.is_open(set) {
            Err(TopologyError::NotOpen(points_of(set)))
        } else {
            Ok(())
        }
    }

    /// Nonempty opens inside `u`, in canonical order.
    pub fn opens_within(&self, u: Mask) -> impl Iterator<Item = Mask> + '_ {
        self.nonempty_opens()
            .iter()
            .copied()
            .filter(move |&o| is_subset(o, u))
    }

    /// The smallest open set containing `x`.
    pub fn neighbourhood(&self, x: u32) -> Mask {
        self.opens
            .iter()
            .filter(|&&o| o >> x & 1 == 1)
            .fold(self.full(), |acc, &o| acc & o)
    }

    pub fn isolated_points(&self, u: Mask) -> Result<Mask, TopologyError> {
        self.require_nonempty_open(u)?;
        Ok(points_of(u)
            .into_iter()
            .filter(|&x| self.neighbourhood(x) & u == 1 << x)
            .fold(0, |m, x| m | (1 << x)))
    }

    /// Minimal nonempty opens inside `u`. They are pairwise disjoint and every
    /// nonempty open inside `u` contains one of them.
    pub fn atoms_within(&self, u: Mask) -> Vec<Mask> {
        let inside: Vec<Mask> = self.opens_within(u).collect();
        inside
            .iter()
            .copied()
            .filter(|&a| !inside.iter().any(|&b| b != a && is_subset(b, a)))
            .collect()
    }

    pub fn cellularity(&self, u: Mask) -> Result<Cellularity, TopologyError> {
        self.require_nonempty_open(u)?;
        let witness = self.atoms_within(u);
        let maximal_extension = self.extend_cellular(u, &witness);
        Ok(Cellularity {
            max_size: witness.len(),
            witness,
            maximal_extension,
        })
    }

    /// Greedily adds opens inside `u`, in canonical order, that miss everything chosen.
    pub fn extend_cellular(&self, u: Mask, start: &[Mask]) -> Vec<Mask> {
        let mut chosen = start.to_vec();
        for o in self.opens_within(u) {
            if chosen.iter().all(|&c| c & o == 0) {
                chosen.push(o);
            }
        }
        chosen
    }

    /// Every nonempty open meets a member of `family`.
    pub fn is_maximal_cellular(&self, u: Mask, family: &[Mask]) -> bool {
        let disjoint = family.iter().enumerate().all(|(i, &a)| {
            a != 0 && is_subset(a, u) && family[i + 1..].iter().all(|&b| a & b == 0)
        });
        disjoint
            && self
                .opens_within(u)
                .all(|o| family.iter().any(|&a| a & o != 0))
    }

    /// Opens whose nonempty open subsets all have the cellularity of the open itself.
    pub fn has_constant_cellularity(&self, a: Mask) -> bool {
        let c = self.atoms_within(a).len();
        self.opens_within(a)
            .all(|b| self.atoms_within(b).len() == c)
    }

    /// A maximal cellular family whose members have hereditarily constant cellularity.
    pub fn stabilized_cellular_partition(&self) -> Vec<Mask> {
        let stable: Vec<Mask> = self
            .nonempty_opens()
            .iter()
            .copied()
            .filter(|&a| self.has_constant_cellularity(a))
            .collect();
        let mut chosen: Vec<Mask> = Vec::new();
        for a in stable {
            if chosen.iter().all(|&c| c & a == 0) {
                chosen.push(a);
            }
        }
        chosen
    }

    /// For each nonempty open, a nonempty open inside it of least cellularity.
    pub fn least_cellularity_inside(&self, u: Mask) -> Result<Mask, TopologyError> {
        self.require_nonempty_open(u)?;
        Ok(self
            .opens_within(u)
            .min_by_key(|&b| self.atoms_within(b).len())
            .expect("u itself is a candidate"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cellularity {
    pub max_size: usize,
    pub witness: Vec<Mask>,
    pub maximal_extension: Vec<Mask>,
}

fn full_mask(points: u32) -> Mask {
    if points == 32 {
        !0
    } else {
        (1 << points) - 1
    }
}

pub fn generate_topology(points: u32, subbase: &[Mask]) -> Result<FiniteSpace, TopologyError> {
    if points > MAX_POINTS {
        return Err(TopologyError::TooLarge(points));
    }
    let full = full_mask(points);
    if let Some(&bad) = subbase.iter().find(|&&s| s & !full != 0) {
        return Err(TopologyError::OutOfRange(points_of(bad)));
    }
    // finite intersections of the subbase form a base
    let mut base: BTreeSet<Mask> = BTreeSet::new();
    base.insert(full);
    for &s in subbase {
        let next: Vec<Mask> = base.iter().map(|&b| b & s).collect();
        base.extend(next);
        base.insert(s);
    }
    let mut opens: BTreeSet<Mask> = BTreeSet::new();
    opens.insert(0);
    for &b in &base {
        let next: Vec<Mask> = opens.iter().map(|&o| o | b).collect();
        opens.extend(next);
    }
    FiniteSpace::from_opens(points, opens.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub universe: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subbase: Option<Vec<Vec<u32>>>,
}

fn masks(points: u32, sets: &[Vec<u32>]) -> Result<Vec<Mask>, TopologyError> {
    sets.iter()
        .map(|s| {
            if s.iter().any(|&p| p >= points) {
                Err(TopologyError::OutOfRange(s.clone()))
            } else {
                Ok(mask_of(s))
            }
        })
        .collect()
}

impl TryFrom<SpaceJson> for FiniteSpace {
    type Error = TopologyError;

    fn try_from(j: SpaceJson) -> Result<Self, Self::Error> {
        if j.universe > MAX_POINTS {
            return Err(TopologyError::TooLarge(j.universe));
        }
        match (j.opens, j.subbase) {
            (Some(opens), None) => FiniteSpace::from_opens(j.universe, masks(j.universe, &opens)?),
            (None, Some(sub)) => generate_topology(j.universe, &masks(j.universe, &sub)?),
            _ => Err(TopologyError::Description),
        }
    }
}

impl From<&FiniteSpace> for SpaceJson {
    fn from(s: &FiniteSpace) -> Self {
        SpaceJson {
            universe: s.points,
            opens: Some(s.opens.iter().map(|&o| points_of(o)).collect()),
            subbase: None,
        }
    }
}

pub fn sierpinski() -> FiniteSpace {
    generate_topology(2, &[0b01]).expect("valid subbase")
}

pub fn discrete(points: u32) -> Result<FiniteSpace, TopologyError> {
    let singletons: Vec<Mask> = (0..points).map(|p| 1 << p).collect();
    generate_topology(points, &singletons)
}

pub fn indiscrete(points: u32) -> Result<FiniteSpace, TopologyError> {
    generate_topology(points, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_examples() {
        assert_eq!(sierpinski().opens(), &[0, 0b01, 0b11]);
        assert_eq!(discrete(3).unwrap().opens().len(), 8);
        assert_eq!(indiscrete(2).unwrap().opens(), &[0, 0b11]);
        assert_eq!(generate_topology(21, &[]), Err(TopologyError::TooLarge(21)));
    }

    #[test]
    fn explicit_opens_are_checked() {
        assert_eq!(
            FiniteSpace::from_opens(3, vec![0, 0b001, 0b010, 0b111]),
            Err(TopologyError::NotClosed("union"))
        );
        assert_eq!(
            FiniteSpace::from_opens(2, vec![0b01, 0b11]),
            Err(TopologyError::MissingBounds)
        );
    }

    #[test]
    fn isolated_examples() {
        assert_eq!(sierpinski().isolated_points(0b11).unwrap(), 0b01);
        assert_eq!(indiscrete(2).unwrap().isolated_points(0b11).unwrap(), 0);
        let d = discrete(3).unwrap();
        assert_eq!(d.isolated_points(0b101).unwrap(), 0b101);
        assert!(sierpinski().isolated_points(0b10).is_err());
        assert!(sierpinski().isolated_points(0).is_err());
    }

    #[test]
    fn cellularity_examples() {
        let d = discrete(3).unwrap().cellularity(0b111).unwrap();
        assert_eq!(
            (d.max_size, d.witness.clone()),
            (3, vec![0b001, 0b010, 0b100])
        );
        assert_eq!(d.maximal_extension, d.witness);
        let i = indiscrete(2).unwrap().cellularity(0b11).unwrap();
        assert_eq!(
            (i.max_size, i.witness, i.maximal_extension),
            (1, vec![0b11], vec![0b11])
        );
        let s = sierpinski().cellularity(0b11).unwrap();
        assert_eq!(
            (s.max_size, s.witness, s.maximal_extension),
            (1, vec![0b01], vec![0b01])
        );
    }

    #[test]
    fn stabilized_examples() {
        assert_eq!(
            discrete(2).unwrap().stabilized_cellular_partition(),
            vec![0b01, 0b10]
        );
        assert_eq!(
            indiscrete(2).unwrap().stabilized_cellular_partition(),
            vec![0b11]
        );
        assert_eq!(sierpinski().stabilized_cellular_partition(), vec![0b01]);
    }

    #[test]
    fn json_forms() {
        let j: SpaceJson = serde_json::from_str(r#"{"universe": 2, "subbase": [[0]]}"#).unwrap();
        assert_eq!(FiniteSpace::try_from(j).unwrap(), sierpinski());
        let j: SpaceJson =
            serde_json::from_str(r#"{"universe": 2, "opens": [[], [0], [0, 1]]}"#).unwrap();
        assert_eq!(FiniteSpace::try_from(j).unwrap(), sierpinski());
        let both: SpaceJson =
            serde_json::from_str(r#"{"universe": 2, "opens": [], "subbase": []}"#).unwrap();
        assert_eq!(FiniteSpace::try_from(both), Err(TopologyError::Description));
    }
}
