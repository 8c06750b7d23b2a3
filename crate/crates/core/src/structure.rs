//! Table oracles, the hat operator, ancestor enumerations and the coding
//! schemes used by the 2-tactic compiler.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::count::{Count, CountError};
use crate::family::{rank_decompose, SetFamily};
use crate::ordinal::Ordinal;
use crate::space::{BasicSet, Space, SpaceError};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{0} is not in the purgation")]
    NotPurged(String),
    #[error("level {theta} exceeds rank {rank} of {member}")]
    LevelTooHigh {
        member: String,
        theta: String,
        rank: String,
    },
    #[error("move {0} lies inside no code set")]
    Decode(String),
    #[error("invalid mock table: {0}")]
    Mock(String),
    #[error("unknown member `{0}`")]
    UnknownMember(String),
    #[error("no witness for {0}")]
    MissingWitness(String),
    #[error("unknown table source `{0}`")]
    UnknownSource(String),
    #[error("level {0} has no natural code")]
    Uncodable(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// `b` has no isolated point and every basic inside it splits infinitely.
pub fn pg_membership(space: &Space, b: &BasicSet) -> Result<bool, SpaceError> {
    space.validate(b)?;
    Ok(space.isolated(b)?.is_none() && space.split_capable(b))
}

/// Rank and order coordinates of a Noetherian table together with the
/// queries the compiler derives from them.
pub trait TableOracle: Send + Sync {
    type Member: Clone + PartialEq + fmt::Debug;

    fn describe(&self) -> String;
    fn label(&self, b: &Self::Member) -> String;
    fn rank(&self, b: &Self::Member) -> Result<Ordinal, StructureError>;
    /// The level as a natural, used inside codes.
    fn rank_code(&self, b: &Self::Member) -> Result<Count, StructureError>;
    fn order(&self, b: &Self::Member) -> Result<Count, StructureError>;
    fn is_pg(&self, b: &Self::Member) -> Result<bool, StructureError>;
    /// The member at the given level code and order, if any.
    fn member_at(
        &self,
        rank_code: &Count,
        order: &Count,
    ) -> Result<Option<Self::Member>, StructureError>;
    fn hat(&self, b: &Self::Member) -> Result<Self::Member, StructureError>;
    /// `{V at level θ : b ⊆ V, o(V) ≤ o(b)}` in row order.
    fn c_enum(&self, b: &Self::Member, theta: &Count) -> Result<Vec<Self::Member>, StructureError>;
    /// Longest `c_enum(b, θ)` over `θ ≤ rank(b)`.
    fn m_value(&self, b: &Self::Member) -> Result<usize, StructureError>;
}

/// Closed-form table of the Cantor cylinders: row `i` holds the words of
/// length `i` ordered by value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorOracle {
    radix: u8,
}

impl CantorOracle {
    pub fn new(radix: u8) -> Self {
        CantorOracle { radix }
    }

    fn word<'a>(&self, b: &'a BasicSet) -> Result<&'a Word, StructureError> {
        match b {
            BasicSet::Cylinder(w) if w.radix() == self.radix => Ok(w),
            _ => Err(SpaceError::Foreign(b.literal()).into()),
        }
    }
}

impl TableOracle for CantorOracle {
    type Member = BasicSet;

    fn describe(&self) -> String {
        format!("cantor:{}", self.radix)
    }

    fn label(&self, b: &BasicSet) -> String {
        b.literal()
    }

    fn rank(&self, b: &BasicSet) -> Result<Ordinal, StructureError> {
        let len = self.word(b)?.len();
        len.to_u64()
            .map(Ordinal::natural)
            .ok_or_else(|| StructureError::Uncodable(len.to_string()))
    }

    fn rank_code(&self, b: &BasicSet) -> Result<Count, StructureError> {
        Ok(self.word(b)?.len().clone())
    }

    fn order(&self, b: &BasicSet) -> Result<Count, StructureError> {
        Ok(self.word(b)?.value())
    }

    fn is_pg(&self, b: &BasicSet) -> Result<bool, StructureError> {
        self.word(b).map(|_| true)
    }

    fn member_at(
        &self,
        rank_code: &Count,
        order: &Count,
    ) -> Result<Option<BasicSet>, StructureError> {
        let w = Word::from_length_value(self.radix, rank_code, order).map_err(SpaceError::from)?;
        Ok(Some(BasicSet::Cylinder(w)))
    }

    /// Every extension of `w` has value at least that of `w`, and among
    /// extensions of equal value `w` sits on the lowest row.
    fn hat(&self, b: &BasicSet) -> Result<BasicSet, StructureError> {
        self.word(b)?;
        Ok(b.clone())
    }

    /// The unique ancestor on row θ is the prefix of length θ, whose value
    /// never exceeds that of the word.
    fn c_enum(&self, b: &BasicSet, theta: &Count) -> Result<Vec<BasicSet>, StructureError> {
        let w = self.word(b)?;
        if theta.try_cmp(w.len())? == std::cmp::Ordering::Greater {
            return Err(StructureError::LevelTooHigh {
                member: b.literal(),
                theta: theta.to_string(),
                rank: w.len().to_string(),
            });
        }
        Ok(vec![BasicSet::Cylinder(
            w.prefix(theta).map_err(SpaceError::from)?,
        )])
    }

    fn m_value(&self, b: &BasicSet) -> Result<usize, StructureError> {
        self.word(b).map(|_| 1)
    }
}

/// An explicit finite table: named members, rows, a strict-inclusion
/// relation and a purgation flag per member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MockTable {
    names: Vec<String>,
    rows: Vec<Vec<usize>>,
    rank: Vec<usize>,
    order: Vec<usize>,
    /// `below[a][b]`: member `a` is a subset of member `b` (reflexive).
    below: Vec<Vec<bool>>,
    pg: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockTableJson {
    pub rows: Vec<Vec<String>>,
    /// Pairs `[A, B]` meaning `A ⊊ B`; closed transitively.
    #[serde(default)]
    pub subset: Vec<[String; 2]>,
    #[serde(default)]
    pub pg: Vec<String>,
}

impl MockTable {
    pub fn from_json(json: &MockTableJson) -> Result<Self, StructureError> {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        let mut rows = Vec::new();
        let (mut rank, mut order) = (Vec::new(), Vec::new());
        for (r, row) in json.rows.iter().enumerate() {
            if row.is_empty() {
                return Err(StructureError::Mock(format!("row {r} is empty")));
            }
            let mut ids = Vec::new();
            for (o, name) in row.iter().enumerate() {
                if index.insert(name.clone(), names.len()).is_some() {
                    return Err(StructureError::Mock(format!("member {name} listed twice")));
                }
                ids.push(names.len());
                names.push(name.clone());
                rank.push(r);
                order.push(o);
            }
            rows.push(ids);
        }
        let n = names.len();
        let lookup = |s: &String| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| StructureError::UnknownMember(s.clone()))
        };
        let mut below = vec![vec![false; n]; n];
        for (i, row) in below.iter_mut().enumerate() {
            row[i] = true;
        }
        for [a, b] in &json.subset {
            let (a, b) = (lookup(a)?, lookup(b)?);
            if a == b {
                return Err(StructureError::Mock(format!(
                    "{} cannot be a strict subset of itself",
                    names[a]
                )));
            }
            below[a][b] = true;
        }
        for k in 0..n {
            let via = below[k].clone();
            for row in below.iter_mut() {
                if row[k] {
                    for (cell, &v) in row.iter_mut().zip(&via) {
                        *cell |= v;
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && below[a][b] {
                    if below[b][a] {
                        return Err(StructureError::Mock(format!(
                            "{} and {} include each other",
                            names[a], names[b]
                        )));
                    }
                    if rank[a] <= rank[b] {
                        return Err(StructureError::Mock(format!(
                            "{} ⊊ {} but its row is not lower",
                            names[a], names[b]
                        )));
                    }
                }
            }
        }
        let mut pg = vec![false; n];
        for name in &json.pg {
            pg[lookup(name)?] = true;
        }
        Ok(MockTable {
            names,
            rows,
            rank,
            order,
            below,
            pg,
        })
    }

    /// The table of a finite family's rank decomposition; `pg` flags members.
    pub fn from_family(family: &SetFamily, pg: &[bool]) -> Self {
        let decomp = rank_decompose(family);
        let sets = family.sets();
        let json = MockTableJson {
            rows: decomp
                .layers()
                .iter()
                .map(|layer| layer.iter().map(|&i| format!("S{i}")).collect())
                .collect(),
            subset: (0..sets.len())
                .flat_map(|a| (0..sets.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| crate::family::is_proper_subset(sets[a], sets[b]))
                .map(|(a, b)| [format!("S{a}"), format!("S{b}")])
                .collect(),
            pg: (0..sets.len())
                .filter(|&i| pg.get(i).copied().unwrap_or(false))
                .map(|i| format!("S{i}"))
                .collect(),
        };
        MockTable::from_json(&json).expect("rank decomposition yields a valid table")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn members(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    pub fn name(&self, m: usize) -> &str {
        &self.names[m]
    }

    pub fn find(&self, name: &str) -> Result<usize, StructureError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| StructureError::UnknownMember(name.into()))
    }

    pub fn is_subset(&self, a: usize, b: usize) -> bool {
        self.below[a][b]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Members containing `b`, itself included.
    pub fn upset(&self, b: usize) -> Vec<usize> {
        self.members().filter(|&v| self.below[b][v]).collect()
    }

    fn check(&self, b: &usize) -> Result<usize, StructureError> {
        if *b < self.len() {
            Ok(*b)
        } else {
            Err(StructureError::UnknownMember(format!("#{b}")))
        }
    }
}

impl TableOracle for MockTable {
    type Member = usize;

    fn describe(&self) -> String {
        format!("mock({} members, {} rows)", self.len(), self.rows.len())
    }

    fn label(&self, b: &usize) -> String {
        self.names
            .get(*b)
            .cloned()
            .unwrap_or_else(|| format!("#{b}"))
    }

    fn rank(&self, b: &usize) -> Result<Ordinal, StructureError> {
        Ok(Ordinal::natural(self.rank[self.check(b)?] as u64))
    }

    fn rank_code(&self, b: &usize) -> Result<Count, StructureError> {
        Ok(Count::from(self.rank[self.check(b)?]))
    }

    fn order(&self, b: &usize) -> Result<Count, StructureError> {
        Ok(Count::from(self.order[self.check(b)?]))
    }

    fn is_pg(&self, b: &usize) -> Result<bool, StructureError> {
        Ok(self.pg[self.check(b)?])
    }

    fn member_at(&self, rank_code: &Count, order: &Count) -> Result<Option<usize>, StructureError> {
        let (Some(r), Some(o)) = (rank_code.to_usize(), order.to_usize()) else {
            return Ok(None);
        };
        Ok(self.rows.get(r).and_then(|row| row.get(o)).copied())
    }

    /// Least order among purged members inside `b`, then the lowest row
    /// holding such a member.
    fn hat(&self, b: &usize) -> Result<usize, StructureError> {
        let b = self.check(b)?;
        if !self.pg[b] {
            return Err(StructureError::NotPurged(self.names[b].clone()));
        }
        let inside: Vec<usize> = self
            .members()
            .filter(|&a| self.pg[a] && self.below[a][b])
            .collect();
        let h = inside
            .iter()
            .map(|&a| self.order[a])
            .min()
            .expect("b lies inside itself");
        Ok(inside
            .into_iter()
            .filter(|&a| self.order[a] == h)
            .min_by_key(|&a| self.rank[a])
            .expect("some member attains the least order"))
    }

    fn c_enum(&self, b: &usize, theta: &Count) -> Result<Vec<usize>, StructureError> {
        let b = self.check(b)?;
        let theta = theta
            .to_usize()
            .filter(|&t| t <= self.rank[b])
            .ok_or_else(|| StructureError::LevelTooHigh {
                member: self.names[b].clone(),
                theta: theta.to_string(),
                rank: self.rank[b].to_string(),
            })?;
        Ok(self.rows[theta]
            .iter()
            .copied()
            .filter(|&v| self.below[b][v] && self.order[v] <= self.order[b])
            .collect())
    }

    fn m_value(&self, b: &usize) -> Result<usize, StructureError> {
        let b = self.check(b)?;
        (0..=self.rank[b])
            .map(|t| self.c_enum(&b, &Count::from(t)).map(|c| c.len()))
            .try_fold(0, |acc, n| n.map(|n| acc.max(n)))
    }
}

/// Members of the curated interval family: nested outer intervals
/// `[1-1/(n+1), 4+1/(n+1)]`, nested inner intervals `[2-1/(n+1), 3+1/(n+1)]`
/// and an antichain of sets disjoint from the reals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalMember {
    Outer(u64),
    Inner(u64),
    Antichain(u64),
}

impl fmt::Display for IntervalMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalMember::Outer(n) => write!(f, "outer{n}"),
            IntervalMember::Inner(n) => write!(f, "inner{n}"),
            IntervalMember::Antichain(n) => write!(f, "c{n}"),
        }
    }
}

impl IntervalMember {
    /// Endpoints as exact fractions `(numerator, denominator)` for the
    /// interval members.
    pub fn endpoints(&self) -> Option<((i64, i64), (i64, i64))> {
        match *self {
            IntervalMember::Outer(n) => {
                let d = n as i64 + 1;
                Some(((d - 1, d), (4 * d + 1, d)))
            }
            IntervalMember::Inner(n) => {
                let d = n as i64 + 1;
                Some(((2 * d - 1, d), (3 * d + 1, d)))
            }
            IntervalMember::Antichain(_) => None,
        }
    }
}

/// Closed-form levels of the curated family whose rank is `ω·2`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntervalsOracle {
    /// Restrict to the antichain and the inner chain.
    refined: bool,
}

impl IntervalsOracle {
    pub fn new() -> Self {
        IntervalsOracle { refined: false }
    }

    /// The subfamily without the outer chain.
    pub fn refining_subfamily() -> Self {
        IntervalsOracle { refined: true }
    }

    pub fn contains(&self, m: IntervalMember) -> bool {
        !(self.refined && matches!(m, IntervalMember::Outer(_)))
    }

    /// `a ⊊ b`.
    pub fn strict_subset(a: IntervalMember, b: IntervalMember) -> bool {
        use IntervalMember::*;
        match (a, b) {
            (Outer(x), Outer(y)) | (Inner(x), Inner(y)) => x > y,
            (Inner(_), Outer(_)) => true,
            _ => false,
        }
    }

    pub fn level(&self, m: IntervalMember) -> Ordinal {
        match (m, self.refined) {
            (IntervalMember::Outer(n), _) => Ordinal::natural(n),
            (IntervalMember::Inner(n), false) => Ordinal::omega().add_natural(n),
            (IntervalMember::Inner(n), true) => Ordinal::natural(n),
            (IntervalMember::Antichain(_), _) => Ordinal::zero(),
        }
    }

    /// Every level below the returned ordinal is inhabited.
    pub fn family_rank(&self) -> Ordinal {
        if self.refined {
            Ordinal::omega()
        } else {
            Ordinal::omega().omega_limit()
        }
    }

    /// `n ↦ 2n` and `ω+n ↦ 2n+1`.
    pub fn level_code(level: &Ordinal) -> Result<Count, StructureError> {
        match level.terms() {
            [] => Ok(Count::zero()),
            [(0, n)] => Ok(Count::from_u64(2 * n)),
            [(1, 1)] => Ok(Count::from_u64(1)),
            [(1, 1), (0, n)] => Ok(Count::from_u64(2 * n + 1)),
            _ => Err(StructureError::Uncodable(level.to_string())),
        }
    }

    /// Members of a row in order.
    pub fn row(&self, level: &Ordinal, width: u64) -> Vec<IntervalMember> {
        match level.terms() {
            [] => {
                let mut row = Vec::new();
                if !self.refined {
                    row.push(IntervalMember::Outer(0));
                } else {
                    row.push(IntervalMember::Inner(0));
                }
                row.extend((0..width).map(IntervalMember::Antichain));
                row
            }
            [(0, n)] if self.refined => vec![IntervalMember::Inner(*n)],
            [(0, n)] => vec![IntervalMember::Outer(*n)],
            [(1, 1)] if !self.refined => vec![IntervalMember::Inner(0)],
            [(1, 1), (0, n)] if !self.refined => vec![IntervalMember::Inner(*n)],
            _ => Vec::new(),
        }
    }

    /// A finite truncation: outer and inner chains up to `n`, `width`
    /// antichain members.
    pub fn truncation(&self, n: u64, width: u64) -> Vec<IntervalMember> {
        let mut out = Vec::new();
        if !self.refined {
            out.extend((0..=n).map(IntervalMember::Outer));
        }
        out.extend((0..=n).map(IntervalMember::Inner));
        out.extend((0..width).map(IntervalMember::Antichain));
        out
    }
}

impl TableOracle for IntervalsOracle {
    type Member = IntervalMember;

    fn describe(&self) -> String {
        if self.refined {
            "intervals-refined".into()
        } else {
            "intervals".into()
        }
    }

    fn label(&self, b: &IntervalMember) -> String {
        b.to_string()
    }

    fn rank(&self, b: &IntervalMember) -> Result<Ordinal, StructureError> {
        if !self.contains(*b) {
            return Err(StructureError::UnknownMember(b.to_string()));
        }
        Ok(self.level(*b))
    }

    fn rank_code(&self, b: &IntervalMember) -> Result<Count, StructureError> {
        IntervalsOracle::level_code(&self.rank(b)?)
    }

    fn order(&self, b: &IntervalMember) -> Result<Count, StructureError> {
        self.rank(b)?;
        Ok(match (b, self.refined) {
            (IntervalMember::Antichain(i), _) => Count::from_u64(i + 1),
            _ => Count::zero(),
        })
    }

    /// Nothing in this family is a topological basic set of a purged space.
    fn is_pg(&self, b: &IntervalMember) -> Result<bool, StructureError> {
        self.rank(b).map(|_| false)
    }

    fn member_at(
        &self,
        rank_code: &Count,
        order: &Count,
    ) -> Result<Option<IntervalMember>, StructureError> {
        let (Some(code), Some(o)) = (rank_code.to_u64(), order.to_u64()) else {
            return Ok(None);
        };
        let level = if code % 2 == 0 {
            Ordinal::natural(code / 2)
        } else {
            Ordinal::omega().add_natural(code / 2)
        };
        Ok(self.row(&level, o + 1).get(o as usize).copied())
    }

    fn hat(&self, b: &IntervalMember) -> Result<IntervalMember, StructureError> {
        Err(StructureError::NotPurged(b.to_string()))
    }

    fn c_enum(
        &self,
        b: &IntervalMember,
        theta: &Count,
    ) -> Result<Vec<IntervalMember>, StructureError> {
        let code = theta
            .to_u64()
            .ok_or_else(|| StructureError::Uncodable(theta.to_string()))?;
        let rank = self.rank_code(b)?.to_u64().expect("small code");
        let level = |c: u64| {
            if c.is_multiple_of(2) {
                Ordinal::natural(c / 2)
            } else {
                Ordinal::omega().add_natural(c / 2)
            }
        };
        if level(code) > self.level(*b) {
            return Err(StructureError::LevelTooHigh {
                member: b.to_string(),
                theta: level(code).to_string(),
                rank: level(rank).to_string(),
            });
        }
        let o = self.order(b)?.to_u64().expect("small order");
        Ok(self
            .row(&level(code), o + 1)
            .into_iter()
            .filter(|&v| {
                (v == *b || IntervalsOracle::strict_subset(*b, v))
                    && self.order(&v).unwrap().to_u64() <= Some(o)
            })
            .collect())
    }

    /// Each row holds at most one ancestor.
    fn m_value(&self, b: &IntervalMember) -> Result<usize, StructureError> {
        self.rank(b).map(|_| 1)
    }
}

/// A table oracle chosen by name.
#[derive(Debug, Clone)]
pub enum OracleSource {
    Cantor(CantorOracle),
    Mock(MockTable),
    Intervals(IntervalsOracle),
}

/// `cantor[:k]`, `intervals`, `intervals-refined` or `mock:<path>`.
pub fn table_oracle(source: &str) -> Result<OracleSource, StructureError> {
    let unknown = || StructureError::UnknownSource(source.to_string());
    match source.split_once(':') {
        Some(("mock", path)) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| StructureError::Mock(e.to_string()))?;
            let json: MockTableJson =
                serde_json::from_str(&text).map_err(|e| StructureError::Mock(e.to_string()))?;
            Ok(OracleSource::Mock(MockTable::from_json(&json)?))
        }
        _ if source == "intervals" => Ok(OracleSource::Intervals(IntervalsOracle::new())),
        _ if source == "intervals-refined" => Ok(OracleSource::Intervals(
            IntervalsOracle::refining_subfamily(),
        )),
        _ if source.starts_with("cantor") => match Space::preset(source).map_err(|_| unknown())? {
            Space::Cantor { radix } => Ok(OracleSource::Cantor(CantorOracle::new(radix))),
            _ => Err(unknown()),
        },
        _ => Err(unknown()),
    }
}

/// Index of the triple `(j, k, l)` in a coding family: `π(π(j, k), l)`.
pub fn triple_index(j: &Count, k: &Count, l: &Count) -> Count {
    Count::pair(&Count::pair(j, k), l)
}

pub fn triple_from_index(n: &Count) -> Result<(Count, Count, Count), CountError> {
    let (jk, l) = n.unpair()?;
    let (j, k) = jk.unpair()?;
    Ok((j, k, l))
}

/// Flattening of a nonempty coordinate sequence `((r0,o0), …, (rm,om))`:
/// `π(m, fold)` with `fold = π(r0,o0)` for one pair and
/// `fold(p0..pk) = π(fold(p0..pk-1), π(rk,ok))`.
pub fn sequence_index(pairs: &[(Count, Count)]) -> Count {
    assert!(!pairs.is_empty(), "coordinate sequences are nonempty");
    let mut it = pairs.iter();
    let (r, o) = it.next().expect("nonempty");
    let mut fold = Count::pair(r, o);
    for (r, o) in it {
        fold = Count::pair(&fold, &Count::pair(r, o));
    }
    Count::pair(&Count::from(pairs.len() - 1), &fold)
}

/// Upper bound on sequence length accepted by the decoder.
pub const MAX_SEQUENCE: usize = 4096;

pub fn sequence_from_index(n: &Count) -> Result<Vec<(Count, Count)>, StructureError> {
    Ok(sequence_folds_from_index(n)?.0)
}

/// Decoded coordinate pairs with the fold value after each one, so prefix
/// indices can be rebuilt from the decoded terms themselves.
pub type FoldedSequence = (Vec<(Count, Count)>, Vec<Count>);

pub fn sequence_folds_from_index(n: &Count) -> Result<FoldedSequence, StructureError> {
    let (last, mut fold) = n.unpair()?;
    let last = last
        .to_usize()
        .filter(|&m| m < MAX_SEQUENCE)
        .ok_or_else(|| StructureError::Decode(format!("sequence length {last}")))?;
    let mut pairs = Vec::with_capacity(last + 1);
    let mut folds = Vec::with_capacity(last + 1);
    for _ in 0..last {
        folds.push(fold.clone());
        let (rest, p) = fold.unpair()?;
        pairs.push(p.unpair()?);
        fold = rest;
    }
    folds.push(fold.clone());
    pairs.push(fold.unpair()?);
    pairs.reverse();
    folds.reverse();
    Ok((pairs, folds))
}

/// `π(len - 1, fold)` for a prefix whose fold is known.
pub fn sequence_index_from_fold(len: usize, fold: &Count) -> Count {
    Count::pair(&Count::from(len - 1), fold)
}

/// The fold of a sequence extended by one pair.
pub fn extend_fold(fold: Option<&Count>, pair: &(Count, Count)) -> Count {
    let p = Count::pair(&pair.0, &pair.1);
    match fold {
        None => p,
        Some(f) => Count::pair(f, &p),
    }
}

/// The disjoint family `{split_member(owner, n)}` of one owner.
#[derive(Debug, Clone)]
pub struct CodingScheme<'a> {
    space: &'a Space,
    owner: BasicSet,
}

impl<'a> CodingScheme<'a> {
    pub fn new(space: &'a Space, owner: BasicSet) -> Result<Self, StructureError> {
        if !pg_membership(space, &owner)? {
            return Err(StructureError::NotPurged(owner.literal()));
        }
        Ok(CodingScheme { space, owner })
    }

    pub fn owner(&self) -> &BasicSet {
        &self.owner
    }

    pub fn code(&self, index: &Count) -> Result<BasicSet, StructureError> {
        Ok(self.space.split_member(&self.owner, index)?)
    }

    pub fn encode(&self, j: &Count, k: &Count, l: &Count) -> Result<BasicSet, StructureError> {
        self.code(&triple_index(j, k, l))
    }

    /// The index of the code containing `mv`, and the code itself.
    pub fn locate(&self, mv: &BasicSet) -> Result<(Count, BasicSet), StructureError> {
        let n = self
            .space
            .locate_in_split(&self.owner, mv)?
            .ok_or_else(|| StructureError::Decode(mv.literal()))?;
        let code = self.code(&n)?;
        Ok((n, code))
    }

    pub fn decode(
        &self,
        mv: &BasicSet,
    ) -> Result<((Count, Count, Count), BasicSet), StructureError> {
        let (n, code) = self.locate(mv)?;
        Ok((triple_from_index(&n)?, code))
    }
}

/// Disjoint-family size available inside a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Witness {
    Finite(usize),
    Infinite,
}

impl Witness {
    fn at_least(&self, n: usize) -> bool {
        match self {
            Witness::Finite(k) => *k >= n,
            Witness::Infinite => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub member: String,
    pub rank: usize,
    pub order: usize,
    pub m_value: usize,
    pub upset: usize,
    pub witness: Witness,
    pub star: bool,
    pub dagger: bool,
    pub galvin: bool,
    /// The ancestor count dominates `max(rank, M)`.
    pub galvin_bound_implies_star: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarReport {
    /// `"pg"` when every member is purged, `"full"` otherwise.
    pub table: String,
    pub members: Vec<ConditionReport>,
    pub vacuous: bool,
}

impl StarReport {
    pub fn all(&self, pick: impl Fn(&ConditionReport) -> bool) -> bool {
        self.members.iter().all(pick)
    }
}

/// Check the three cardinality conditions on every purged member of a mock
/// table against the supplied disjoint-family sizes.
pub fn verify_star(
    table: &MockTable,
    witnesses: &BTreeMap<String, Witness>,
) -> Result<StarReport, StructureError> {
    let mut members = Vec::new();
    for b in table.members() {
        if !table.pg[b] {
            continue;
        }
        let name = table.name(b).to_string();
        let witness = *witnesses
            .get(&name)
            .ok_or_else(|| StructureError::MissingWitness(name.clone()))?;
        let rank = table.rank[b];
        let order = table.order[b];
        let m_value = table.m_value(&b)?;
        let upset = table.upset(b).len();
        members.push(ConditionReport {
            star: witness.at_least(rank.max(m_value)),
            dagger: witness.at_least(rank.max(order)),
            galvin: witness.at_least(upset),
            galvin_bound_implies_star: upset >= rank.max(m_value),
            member: name,
            rank,
            order,
            m_value,
            upset,
            witness,
        });
    }
    Ok(StarReport {
        table: if table.pg.iter().all(|&p| p) {
            "pg".into()
        } else {
            "full".into()
        },
        vacuous: members.is_empty(),
        members,
    })
}

/// On the Cantor table every member splits into infinitely many disjoint
/// cylinders, so every finite bound holds. Returns the members checked.
pub fn verify_star_cantor(
    oracle: &CantorOracle,
    sample: &[BasicSet],
) -> Result<Vec<ConditionReport>, StructureError> {
    sample
        .iter()
        .map(|b| {
            let rank = oracle.rank(b)?.as_natural().expect("finite rank") as usize;
            let order = oracle
                .order(b)?
                .to_usize()
                .ok_or_else(|| StructureError::Uncodable(b.literal()))?;
            let m_value = oracle.m_value(b)?;
            Ok(ConditionReport {
                member: b.literal(),
                rank,
                order,
                m_value,
                upset: rank + 1,
                witness: Witness::Infinite,
                star: true,
                dagger: true,
                galvin: true,
                galvin_bound_implies_star: rank + 1 >= rank.max(m_value),
            })
        })
        .collect()
}
