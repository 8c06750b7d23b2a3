//! Finite explicit set families over a universe of at most 24 points.
//!
//! Members are bitsets; the list order of a [`SetFamily`] is its canonical
//! well-order and every "least" choice below resolves to the lowest index.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;

pub const MAX_UNIVERSE: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("universe of {0} points exceeds the limit of {MAX_UNIVERSE}")]
    UniverseTooLarge(u32),
    #[error("member {index} contains point {point} outside the universe")]
    PointOutOfRange { index: usize, point: u32 },
    #[error("member {0} is empty")]
    EmptyMember(usize),
    #[error("members {0} and {1} are equal")]
    Duplicate(usize, usize),
    #[error("invalid argument: {0}")]
    Argument(String),
}

/// Bit `i` set means point `i` belongs to the set.
pub type Mask = u32;

pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

pub fn is_proper_subset(a: Mask, b: Mask) -> bool {
    a != b && is_subset(a, b)
}

pub fn mask_of(points: &[u32]) -> Mask {
    points.iter().fold(0, |m, &p| m | (1 << p))
}

pub fn points_of(mask: Mask) -> Vec<u32> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe: u32,
    sets: Vec<Mask>,
}

impl SetFamily {
    pub fn new(universe: u32, sets: Vec<Mask>) -> Result<Self, FamilyError> {
        if universe > MAX_UNIVERSE {
            return Err(FamilyError::UniverseTooLarge(universe));
        }
        let full: Mask = if universe == 32 {
            !0
        } else {
            (1 << universe) - 1
        };
        for (i, &s) in sets.iter().enumerate() {
            if s == 0 {
                return Err(FamilyError::EmptyMember(i));
            }
            if s & !full != 0 {
                let point = points_of(s & !full)[0];
                return Err(FamilyError::PointOutOfRange { index: i, point });
            }
            if let Some(j) = sets[..i].iter().position(|&t| t == s) {
                return Err(FamilyError::Duplicate(j, i));
            }
        }
        Ok(SetFamily { universe, sets })
    }

    pub fn from_points(universe: u32, members: &[Vec<u32>]) -> Result<Self, FamilyError> {
        let mut sets = Vec::with_capacity(members.len());
        for (index, m) in members.iter().enumerate() {
            if let Some(&point) = m.iter().find(|&&p| p >= universe) {
                return Err(FamilyError::PointOutOfRange { index, point });
            }
            sets.push(mask_of(m));
        }
        SetFamily::new(universe, sets)
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn sets(&self) -> &[Mask] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn index_of(&self, set: Mask) -> Option<usize> {
        self.sets.iter().position(|&s| s == set)
    }

    /// The subfamily made of the listed member indices, kept in canonical order.
    pub fn subfamily(&self, indices: &[usize]) -> SetFamily {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        SetFamily {
            universe: self.universe,
            sets: idx.iter().map(|&i| self.sets[i]).collect(),
        }
    }

    /// Every member of `self` contains some member of `finer`.
    pub fn is_refined_by(&self, finer: &SetFamily) -> bool {
        self.sets
            .iter()
            .all(|&a| finer.sets.iter().any(|&b| is_subset(b, a)))
    }
}

/// Layers of iterated ⊆-maximal removal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankDecomposition {
    layers: Vec<Vec<usize>>,
    level_of: Vec<usize>,
}

impl RankDecomposition {
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn level(&self, member: usize) -> Ordinal {
        Ordinal::natural(self.level_of[member] as u64)
    }

    pub fn level_index(&self, member: usize) -> usize {
        self.level_of[member]
    }

    pub fn levels(&self) -> Vec<Ordinal> {
        (0..self.level_of.len()).map(|i| self.level(i)).collect()
    }

    /// Number of layers.
    pub fn rank(&self) -> Ordinal {
        Ordinal::natural(self.layers.len() as u64)
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

pub fn rank_decompose(family: &SetFamily) -> RankDecomposition {
    let n = family.len();
    let sets = family.sets();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut layers = Vec::new();
    let mut level_of = vec![0; n];
    while !remaining.is_empty() {
        let (top, rest): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&i| {
            !remaining
                .iter()
                .any(|&j| is_proper_subset(sets[i], sets[j]))
        });
        for &i in &top {
            level_of[i] = layers.len();
        }
        layers.push(top);
        remaining = rest;
    }
    RankDecomposition { layers, level_of }
}

/// Climbs from `member` through strictly larger members whose levels hit `targets`
/// in turn. The first target must be the level of `member`.
pub fn level_chain(
    family: &SetFamily,
    decomp: &RankDecomposition,
    member: usize,
    targets: &[usize],
) -> Result<Vec<usize>, FamilyError> {
    if member >= family.len() {
        return Err(FamilyError::Argument(format!("no member {member}")));
    }
    match targets.first() {
        Some(&t) if t == decomp.level_index(member) => {}
        _ => {
            return Err(FamilyError::Argument(
                "targets must start at the level of the member".into(),
            ))
        }
    }
    if targets.windows(2).any(|w| w[1] >= w[0]) {
        return Err(FamilyError::Argument(
            "targets must strictly descend".into(),
        ));
    }
    let sets = family.sets();
    let mut chain = vec![member];
    for &target in &targets[1..] {
        let current = *chain.last().unwrap();
        let next = (0..family.len())
            .find(|&j| decomp.level_index(j) == target && is_proper_subset(sets[current], sets[j]))
            .unwrap_or_else(|| {
                panic!(
                    "rank decomposition is inconsistent: member {current} has no strict superset at level {target}"
                )
            });
        chain.push(next);
    }
    Ok(chain)
}

/// Rows are the layers of a decomposition, each in some chosen order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoetherianTable {
    rows: Vec<Vec<usize>>,
    row_of: Vec<usize>,
    position_of: Vec<usize>,
}

impl NoetherianTable {
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn rank_of(&self, member: usize) -> usize {
        self.row_of[member]
    }

    pub fn order_of(&self, member: usize) -> usize {
        self.position_of[member]
    }

    /// `(α, β)`: the number of rows and the least bound on the row lengths.
    pub fn shape(&self) -> (usize, usize) {
        let width = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        (self.rows.len(), width)
    }

    /// The member at row `rank`, position `order`.
    pub fn at(&self, rank: usize, order: usize) -> Option<usize> {
        self.rows.get(rank).and_then(|r| r.get(order)).copied()
    }

    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

pub fn build_table(
    decomp: &RankDecomposition,
    row_order: Option<&[Vec<usize>]>,
) -> Result<NoetherianTable, FamilyError> {
    let rows: Vec<Vec<usize>> = match row_order {
        None => decomp.layers.clone(),
        Some(order) => {
            if order.len() != decomp.layers.len() {
                return Err(FamilyError::Argument(
                    "one ordering per layer is required".into(),
                ));
            }
            for (i, (given, layer)) in order.iter().zip(&decomp.layers).enumerate() {
                let mut a = given.clone();
                let mut b = layer.clone();
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    return Err(FamilyError::Argument(format!(
                        "row order {i} is not a permutation of layer {i}"
                    )));
                }
            }
            order.to_vec()
        }
    };
    let n = decomp.level_of.len();
    let mut row_of = vec![0; n];
    let mut position_of = vec![0; n];
    for (r, row) in rows.iter().enumerate() {
        for (o, &m) in row.iter().enumerate() {
            row_of[m] = r;
            position_of[m] = o;
        }
    }
    Ok(NoetherianTable {
        rows,
        row_of,
        position_of,
    })
}

/// Chooses layers in the order `level_map[0], level_map[1], …`, keeping a member
/// only if it contains no member kept from an earlier chosen layer.
pub fn reduce_rank(family: &SetFamily, level_map: &[usize]) -> Result<SetFamily, FamilyError> {
    let decomp = rank_decompose(family);
    let depth = decomp.depth();
    let mut seen = vec![false; depth];
    if level_map.len() != depth {
        return Err(FamilyError::Argument(format!(
            "level map has {} entries but the rank is {depth}",
            level_map.len()
        )));
    }
    for &l in level_map {
        if l >= depth || seen[l] {
            return Err(FamilyError::Argument("level map is not a bijection".into()));
        }
        seen[l] = true;
    }
    let sets = family.sets();
    let mut kept: Vec<usize> = Vec::new();
    for &level in level_map {
        let admitted: Vec<usize> = decomp.layers[level]
            .iter()
            .copied()
            .filter(|&b| !kept.iter().any(|&w| is_subset(sets[w], sets[b])))
            .collect();
        kept.extend(admitted);
    }
    Ok(family.subfamily(&kept))
}

/// Walks the family in order and rejects a member when an already chosen member
/// is a proper subset of it.
pub fn extract_noetherian(family: &SetFamily) -> SetFamily {
    let sets = family.sets();
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..family.len() {
        if !chosen.iter().any(|&j| is_proper_subset(sets[j], sets[i])) {
            chosen.push(i);
        }
    }
    family.subfamily(&chosen)
}

/// `a_i = {i, …, κ-1}` and `b_i = {i}`; `a_{κ-1}` and `b_{κ-1}` coincide and are listed once.
pub fn staircase_family(kappa: u32) -> Result<SetFamily, FamilyError> {
    if kappa == 0 {
        return Err(FamilyError::Argument("kappa must be positive".into()));
    }
    let full: Mask = (1u64 << kappa) as Mask - 1;
    let mut sets: Vec<Mask> = (0..kappa).map(|i| full & !((1 << i) - 1)).collect();
    sets.extend((0..kappa - 1).map(|i| 1 << i));
    SetFamily::new(kappa, sets)
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &s) in self.sets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let pts: Vec<String> = points_of(s).iter().map(u32::to_string).collect();
            write!(f, "{{{}}}", pts.join(","))?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub universe: u32,
    pub sets: Vec<Vec<u32>>,
}

impl TryFrom<FamilyJson> for SetFamily {
    type Error = FamilyError;

    fn try_from(j: FamilyJson) -> Result<Self, Self::Error> {
        SetFamily::from_points(j.universe, &j.sets)
    }
}

impl From<&SetFamily> for FamilyJson {
    fn from(f: &SetFamily) -> Self {
        FamilyJson {
            universe: f.universe,
            sets: f.sets.iter().map(|&s| points_of(s)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub layers: Vec<Vec<usize>>,
    pub levels: Vec<Ordinal>,
    pub rank: Ordinal,
}

impl From<&RankDecomposition> for DecompositionJson {
    fn from(d: &RankDecomposition) -> Self {
        DecompositionJson {
            layers: d.layers.clone(),
            levels: d.levels(),
            rank: d.rank(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCellJson {
    pub set: Vec<u32>,
    pub r: Ordinal,
    pub o: Ordinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub rows: Vec<Vec<usize>>,
    pub members: Vec<TableCellJson>,
    pub shape: (Ordinal, Ordinal),
}

impl TableJson {
    pub fn new(family: &SetFamily, table: &NoetherianTable) -> Self {
        let members = family
            .sets()
            .iter()
            .enumerate()
            .map(|(i, &s)| TableCellJson {
                set: points_of(s),
                r: Ordinal::natural(table.rank_of(i) as u64),
                o: Ordinal::natural(table.order_of(i) as u64),
            })
            .collect();
        let (a, b) = table.shape();
        TableJson {
            rows: table.rows.clone(),
            members,
            shape: (Ordinal::natural(a as u64), Ordinal::natural(b as u64)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> SetFamily {
        SetFamily::from_points(4, &[vec![0, 1, 2], vec![1, 2, 3], vec![0, 1], vec![1]]).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(
            SetFamily::new(25, vec![]),
            Err(FamilyError::UniverseTooLarge(25))
        );
        assert_eq!(
            SetFamily::new(3, vec![1, 0]),
            Err(FamilyError::EmptyMember(1))
        );
        assert_eq!(
            SetFamily::new(3, vec![1, 2, 1]),
            Err(FamilyError::Duplicate(0, 2))
        );
        assert!(matches!(
            SetFamily::from_points(2, &[vec![5]]),
            Err(FamilyError::PointOutOfRange { index: 0, point: 5 })
        ));
    }

    #[test]
    fn worked_levels() {
        let d = rank_decompose(&example());
        assert_eq!(d.layers(), &[vec![0, 1], vec![2], vec![3]]);
        assert_eq!(d.level(3), Ordinal::natural(2));
        assert_eq!(d.level(1), Ordinal::zero());
        assert_eq!(d.rank(), Ordinal::natural(3));
    }

    #[test]
    fn antichain_is_one_layer() {
        let f = SetFamily::from_points(3, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(rank_decompose(&f).layers(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn chain_examples() {
        let f = example();
        let d = rank_decompose(&f);
        assert_eq!(level_chain(&f, &d, 3, &[2, 1, 0]).unwrap(), vec![3, 2, 0]);
        assert_eq!(level_chain(&f, &d, 3, &[2]).unwrap(), vec![3]);
        assert!(level_chain(&f, &d, 3, &[1, 0]).is_err());
        assert!(level_chain(&f, &d, 3, &[2, 2]).is_err());
    }

    #[test]
    fn table_examples() {
        let d = rank_decompose(&example());
        let t = build_table(&d, None).unwrap();
        assert_eq!(t.shape(), (3, 2));
        assert_eq!((t.order_of(0), t.order_of(1)), (0, 1));
        let swapped = build_table(&d, Some(&[vec![1, 0], vec![2], vec![3]])).unwrap();
        assert_eq!(swapped.order_of(1), 0);
        assert!(build_table(&d, Some(&[vec![1, 2], vec![0], vec![3]])).is_err());
        let single = SetFamily::from_points(1, &[vec![0]]).unwrap();
        assert_eq!(
            build_table(&rank_decompose(&single), None).unwrap().shape(),
            (1, 1)
        );
    }

    #[test]
    fn reduction_examples() {
        let chain = SetFamily::from_points(4, &[vec![1], vec![1, 2], vec![1, 2, 3]]).unwrap();
        let reduced = reduce_rank(&chain, &[2, 1, 0]).unwrap();
        assert_eq!(reduced.sets(), &[mask_of(&[1])]);
        assert_eq!(rank_decompose(&reduced).depth(), 1);

        let f = example();
        assert_eq!(reduce_rank(&f, &[0, 1, 2]).unwrap(), f);
        let r = reduce_rank(&f, &[2, 1, 0]).unwrap();
        assert_eq!(r.sets(), &[mask_of(&[1])]);
        assert!(f.is_refined_by(&r));

        assert!(reduce_rank(&f, &[0, 0, 1]).is_err());
        assert!(reduce_rank(&f, &[0, 1]).is_err());
    }

    #[test]
    fn extraction_examples() {
        let a = SetFamily::from_points(4, &[vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(extract_noetherian(&a).sets(), &[mask_of(&[1, 2])]);
        let b = SetFamily::from_points(4, &[vec![1, 2, 3], vec![1, 2]]).unwrap();
        assert_eq!(extract_noetherian(&b), b);
        let s = SetFamily::from_points(2, &[vec![0, 1]]).unwrap();
        assert_eq!(extract_noetherian(&s), s);
    }

    #[test]
    fn staircase_layers() {
        let f = staircase_family(4).unwrap();
        // a0..a3 are indices 0..3, b0..b2 are 4..6
        let d = rank_decompose(&f);
        let mut layers: Vec<Vec<usize>> = d.layers().to_vec();
        layers.iter_mut().for_each(|l| l.sort_unstable());
        assert_eq!(layers, vec![vec![0], vec![1, 4], vec![2, 5], vec![3, 6]]);
    }

    #[test]
    fn json_shapes() {
        let f = example();
        let d = rank_decompose(&f);
        let dj = serde_json::to_value(DecompositionJson::from(&d)).unwrap();
        assert_eq!(dj["levels"], serde_json::json!(["0", "0", "1", "2"]));
        let fj: FamilyJson =
            serde_json::from_str(r#"{"universe": 4, "sets": [[0,1,2],[1,2,3],[0,1],[1]]}"#)
                .unwrap();
        assert_eq!(SetFamily::try_from(fj).unwrap(), f);
        let tj = TableJson::new(&f, &build_table(&d, None).unwrap());
        assert_eq!(tj.members[1].o, Ordinal::natural(1));
    }
}
