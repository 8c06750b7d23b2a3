//! Lazily presented spaces and their π-base queries.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::count::{Count, CountError, CountPrinter};
use crate::family::{is_subset, points_of, Mask};
use crate::topology::{FiniteSpace, SpaceJson, TopologyError};
use crate::word::{Word, WordError};

/// Dyadic intervals deeper than this are rejected.
pub const MAX_INTERVAL_LEVEL: u32 = 120;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("unknown space preset `{0}`")]
    UnknownPreset(String),
    #[error("malformed basic set literal `{0}`")]
    BadLiteral(String),
    #[error("{0} is not a basic set of this space")]
    Foreign(String),
    #[error("cannot split into {wanted} disjoint pieces; cellularity is {available}")]
    CellularityExceeded { wanted: usize, available: usize },
    #[error("union of basic sets is empty")]
    EmptyUnion,
    #[error("dyadic interval level exceeds {MAX_INTERVAL_LEVEL}")]
    TooDeep,
    #[error("basic sets of this space have no index in an ω-enumeration")]
    NotEnumerable,
    #[error("cannot read space file: {0}")]
    Io(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

impl From<CountError> for SpaceError {
    fn from(e: CountError) -> Self {
        SpaceError::Word(WordError::Count(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasicSet {
    /// All infinite sequences extending the word.
    Cylinder(Word),
    /// `[index / 2^level, (index + 1) / 2^level)` among the rationals of `[0, 1)`.
    Interval { level: u32, index: u128 },
    /// Index into the canonical open enumeration of a finite space.
    Open(usize),
    /// A basic set of one summand of a disjoint sum.
    Piece(usize, Box<BasicSet>),
}

impl BasicSet {
    pub fn cylinder(radix: u8, digits: &[u8]) -> BasicSet {
        BasicSet::Cylinder(Word::from_digits(radix, digits).expect("digits below radix"))
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            BasicSet::Cylinder(w) => Some(w),
            _ => None,
        }
    }

    pub fn literal(&self) -> String {
        self.render(&mut CountPrinter::default())
    }

    pub fn render(&self, printer: &mut CountPrinter) -> String {
        match self {
            BasicSet::Cylinder(w) => format!("[{}]", w.render_with(printer)),
            BasicSet::Interval { level, index } => format!("I({level},{index})"),
            BasicSet::Open(i) => format!("#{i}"),
            BasicSet::Piece(p, inner) => format!("{p}:{}", inner.render(printer)),
        }
    }
}

impl fmt::Display for BasicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal())
    }
}

/// A point used as a win certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    /// The sequence `prefix` followed by zeros forever.
    Sequence(Word),
    Finite(u32),
    /// The left endpoint `index / 2^level`.
    Dyadic {
        level: u32,
        index: u128,
    },
    InPiece(usize, Box<Point>),
}

impl Point {
    pub fn render(&self, printer: &mut CountPrinter) -> String {
        match self {
            Point::Sequence(w) => format!("{}(0)", w.render_with(printer)),
            Point::Finite(x) => format!("x{x}"),
            Point::Dyadic { level, index } => format!("{index}/2^{level}"),
            Point::InPiece(p, inner) => format!("{p}:{}", inner.render(printer)),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&mut CountPrinter::default()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    Cantor { radix: u8 },
    Dyadic,
    Finite(Arc<FiniteSpace>),
    Sum(Vec<Space>),
}

fn interval_word(level: u32, index: u128) -> Word {
    let digits: Vec<u8> = (0..level).rev().map(|b| (index >> b & 1) as u8).collect();
    Word::from_digits(2, &digits).expect("binary digits")
}

fn word_interval(w: &Word) -> Result<BasicSet, SpaceError> {
    let digits = w
        .digits(MAX_INTERVAL_LEVEL as u64)
        .ok_or(SpaceError::TooDeep)?;
    let index = digits.iter().fold(0u128, |acc, &d| acc << 1 | d as u128);
    Ok(BasicSet::Interval {
        level: digits.len() as u32,
        index,
    })
}

impl Space {
    pub fn cantor(radix: u8) -> Space {
        Space::Cantor { radix }
    }

    pub fn finite(space: FiniteSpace) -> Space {
        Space::Finite(Arc::new(space))
    }

    /// `cantor[:k]`, `dyadic`, `finite:<path>`, `sierpinski`, `discrete:<n>`,
    /// `indiscrete:<n>`, or `sum:<a>,<b>,…`.
    pub fn preset(name: &str) -> Result<Space, SpaceError> {
        let unknown = || SpaceError::UnknownPreset(name.to_string());
        let (head, arg) = match name.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (name, None),
        };
        match (head, arg) {
            ("cantor", None) => Ok(Space::cantor(2)),
            ("cantor", Some(k)) => {
                let k: u8 = k.parse().map_err(|_| unknown())?;
                if !(2..=10).contains(&k) {
                    return Err(unknown());
                }
                Ok(Space::cantor(k))
            }
            ("dyadic", None) | ("dyadic-rationals", None) => Ok(Space::Dyadic),
            ("finite", Some(path)) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| SpaceError::Io(e.to_string()))?;
                let json: SpaceJson =
                    serde_json::from_str(&text).map_err(|e| SpaceError::Io(e.to_string()))?;
                Ok(Space::finite(FiniteSpace::try_from(json)?))
            }
            ("sierpinski", None) => Ok(Space::finite(crate::topology::sierpinski())),
            ("discrete", Some(n)) => Ok(Space::finite(crate::topology::discrete(
                n.parse().map_err(|_| unknown())?,
            )?)),
            ("indiscrete", Some(n)) => Ok(Space::finite(crate::topology::indiscrete(
                n.parse().map_err(|_| unknown())?,
            )?)),
            ("sum", Some(parts)) => {
                let pieces = parts
                    .split(',')
                    .map(Space::preset)
                    .collect::<Result<Vec<_>, _>>()?;
                if pieces.is_empty() || pieces.iter().any(|p| matches!(p, Space::Sum(_))) {
                    return Err(unknown());
                }
                Ok(Space::Sum(pieces))
            }
            _ => Err(unknown()),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            Space::Cantor { radix } => format!("cantor:{radix}"),
            Space::Dyadic => "dyadic".into(),
            Space::Finite(f) => format!("finite({} points, {} opens)", f.points(), f.opens().len()),
            Space::Sum(pieces) => {
                let names: Vec<String> = pieces.iter().map(Space::descriptor).collect();
                format!("sum:{}", names.join(","))
            }
        }
    }

    fn foreign(&self, b: &BasicSet) -> SpaceError {
        SpaceError::Foreign(b.literal())
    }

    pub fn finite_space(&self) -> Option<&FiniteSpace> {
        match self {
            Space::Finite(f) => Some(f),
            _ => None,
        }
    }

    fn open_mask(&self, f: &FiniteSpace, b: &BasicSet) -> Result<Mask, SpaceError> {
        match b {
            BasicSet::Open(i) if *i >= 1 && *i < f.opens().len() => Ok(f.opens()[*i]),
            _ => Err(self.foreign(b)),
        }
    }

    fn cylinder<'a>(&self, radix: u8, b: &'a BasicSet) -> Result<&'a Word, SpaceError> {
        match b {
            BasicSet::Cylinder(w) if w.radix() == radix => Ok(w),
            _ => Err(self.foreign(b)),
        }
    }

    fn interval_as_word(&self, b: &BasicSet) -> Result<Word, SpaceError> {
        match b {
            BasicSet::Interval { level, index }
                if *level <= MAX_INTERVAL_LEVEL && (*level >= 128 || *index >> *level == 0) =>
            {
                Ok(interval_word(*level, *index))
            }
            _ => Err(self.foreign(b)),
        }
    }

    fn piece<'a>(
        &'a self,
        pieces: &'a [Space],
        b: &'a BasicSet,
    ) -> Result<(usize, &'a Space, &'a BasicSet), SpaceError> {
        match b {
            BasicSet::Piece(i, inner) if *i < pieces.len() => Ok((*i, &pieces[*i], inner)),
            _ => Err(self.foreign(b)),
        }
    }

    pub fn validate(&self, b: &BasicSet) -> Result<(), SpaceError> {
        match self {
            Space::Cantor { radix } => self.cylinder(*radix, b).map(|_| ()),
            Space::Dyadic => self.interval_as_word(b).map(|_| ()),
            Space::Finite(f) => self.open_mask(f, b).map(|_| ()),
            Space::Sum(pieces) => {
                let (_, s, inner) = self.piece(pieces, b)?;
                s.validate(inner)
            }
        }
    }

    /// `a ⊆ b`.
    pub fn subset(&self, a: &BasicSet, b: &BasicSet) -> Result<bool, SpaceError> {
        match self {
            Space::Cantor { radix } => Ok(self
                .cylinder(*radix, a)?
                .has_prefix(self.cylinder(*radix, b)?)?),
            Space::Dyadic => Ok(self
                .interval_as_word(a)?
                .has_prefix(&self.interval_as_word(b)?)?),
            Space::Finite(f) => Ok(is_subset(self.open_mask(f, a)?, self.open_mask(f, b)?)),
            Space::Sum(pieces) => {
                let (i, s, x) = self.piece(pieces, a)?;
                let (j, _, y) = self.piece(pieces, b)?;
                Ok(i == j && s.subset(x, y)?)
            }
        }
    }

    pub fn disjoint(&self, a: &BasicSet, b: &BasicSet) -> Result<bool, SpaceError> {
        Ok(self.meet(a, b)?.is_none())
    }

    pub fn meet(&self, a: &BasicSet, b: &BasicSet) -> Result<Option<BasicSet>, SpaceError> {
        match self {
            Space::Cantor { .. } | Space::Dyadic => {
                if self.subset(a, b)? {
                    Ok(Some(a.clone()))
                } else if self.subset(b, a)? {
                    Ok(Some(b.clone()))
                } else {
                    Ok(None)
                }
            }
            Space::Finite(f) => {
                let m = self.open_mask(f, a)? & self.open_mask(f, b)?;
                Ok(f.index_of(m).filter(|_| m != 0).map(BasicSet::Open))
            }
            Space::Sum(pieces) => {
                let (i, s, x) = self.piece(pieces, a)?;
                let (j, _, y) = self.piece(pieces, b)?;
                if i != j {
                    return Ok(None);
                }
                Ok(s.meet(x, y)?.map(|m| BasicSet::Piece(i, Box::new(m))))
            }
        }
    }

    /// Whether `b` admits the infinite disjoint splitting scheme.
    pub fn split_capable(&self, b: &BasicSet) -> bool {
        match self {
            Space::Cantor { .. } | Space::Dyadic => self.validate(b).is_ok(),
            Space::Finite(_) => false,
            Space::Sum(pieces) => match b {
                BasicSet::Piece(i, inner) if *i < pieces.len() => pieces[*i].split_capable(inner),
                _ => false,
            },
        }
    }

    /// The least isolated point of `b`, if any.
    pub fn isolated(&self, b: &BasicSet) -> Result<Option<Point>, SpaceError> {
        match self {
            Space::Cantor { .. } | Space::Dyadic => self.validate(b).map(|_| None),
            Space::Finite(f) => {
                let m = self.open_mask(f, b)?;
                let iso = f.isolated_points(m)?;
                Ok(points_of(iso).first().map(|&x| Point::Finite(x)))
            }
            Space::Sum(pieces) => {
                let (i, s, x) = self.piece(pieces, b)?;
                Ok(s.isolated(x)?.map(|p| Point::InPiece(i, Box::new(p))))
            }
        }
    }

    /// Canonical well-order: shortlex for words and intervals, enumeration
    /// index for finite opens, and summand first for sums.
    pub fn well_order_cmp(&self, a: &BasicSet, b: &BasicSet) -> Result<Ordering, SpaceError> {
        match self {
            Space::Cantor { radix } => Ok(self
                .cylinder(*radix, a)?
                .shortlex_cmp(self.cylinder(*radix, b)?)?),
            Space::Dyadic => Ok(self
                .interval_as_word(a)?
                .shortlex_cmp(&self.interval_as_word(b)?)?),
            Space::Finite(f) => {
                self.open_mask(f, a)?;
                self.open_mask(f, b)?;
                match (a, b) {
                    (BasicSet::Open(i), BasicSet::Open(j)) => Ok(i.cmp(j)),
                    _ => unreachable!(),
                }
            }
            Space::Sum(pieces) => {
                let (i, s, x) = self.piece(pieces, a)?;
                let (j, _, y) = self.piece(pieces, b)?;
                if i != j {
                    Ok(i.cmp(&j))
                } else {
                    s.well_order_cmp(x, y)
                }
            }
        }
    }

    /// Number of basic sets, if finite.
    pub fn basic_count(&self) -> Option<BigUint> {
        match self {
            Space::Finite(f) => Some(BigUint::from(f.nonempty_opens().len())),
            Space::Sum(pieces) => pieces.iter().map(Space::basic_count).sum(),
            _ => None,
        }
    }

    /// Index in the canonical enumeration.
    pub fn position(&self, b: &BasicSet) -> Result<BigUint, SpaceError> {
        match self {
            Space::Cantor { radix } => {
                let w = self.cylinder(*radix, b)?;
                let len = w.len().to_u64().ok_or(SpaceError::NotEnumerable)? as u32;
                let value = w.value().literal().ok_or(SpaceError::NotEnumerable)?;
                let k = BigUint::from(*radix);
                Ok((k.pow(len) - 1u32) / (*radix as u32 - 1) + value)
            }
            Space::Dyadic => {
                let w = self.interval_as_word(b)?;
                let len = w.len().to_u64().expect("literal level") as u32;
                Ok((BigUint::one() << len) - 1u32 + w.value().literal().expect("literal value"))
            }
            Space::Finite(f) => {
                self.open_mask(f, b)?;
                match b {
                    BasicSet::Open(i) => Ok(BigUint::from(*i - 1)),
                    _ => unreachable!(),
                }
            }
            Space::Sum(pieces) => {
                let (i, s, x) = self.piece(pieces, b)?;
                let mut offset = BigUint::from(0u32);
                for p in &pieces[..i] {
                    offset += p.basic_count().ok_or(SpaceError::NotEnumerable)?;
                }
                Ok(offset + s.position(x)?)
            }
        }
    }

    /// Member `index` of the disjoint scheme inside `b`: the word `w·1^index·0`.
    pub fn split_member(&self, b: &BasicSet, index: &Count) -> Result<BasicSet, SpaceError> {
        match self {
            Space::Cantor { radix } => {
                let mut w = self.cylinder(*radix, b)?.clone();
                w.push_run(1, index);
                w.push(0);
                Ok(BasicSet::Cylinder(w))
            }
            Space::Dyadic => {
                let mut w = self.interval_as_word(b)?;
                w.push_run(1, index);
                w.push(0);
                word_interval(&w)
            }
            Space::Finite(f) => {
                let available = f.cellularity(self.open_mask(f, b)?)?.max_size;
                let wanted = index.to_usize().map_or(usize::MAX, |i| i + 1);
                self.split(b, wanted)
                    .map_err(|_| SpaceError::CellularityExceeded { wanted, available })
                    .map(|mut v| v.pop().expect("nonempty split"))
            }
            Space::Sum(pieces) => {
                let (i, s, x) = self.piece(pieces, b)?;
                Ok(BasicSet::Piece(i, Box::new(s.split_member(x, index)?)))
            }
        }
    }

    /// The index `n` with `a ⊆ split_member(b, n)`, if there is one.
    pub fn locate_in_split(&self, b: &BasicSet, a: &BasicSet) -> Result<Option<Count>, SpaceError> {
        match self {
            Space::Cantor { radix } => {
                let owner = self.cylinder(*radix, b)?;
                let word = self.cylinder(*radix, a)?;
                Ok(locate_in_word_scheme(owner, word)?)
            }
            Space::Dyadic => Ok(locate_in_word_scheme(
                &self.interval_as_word(b)?,
                &self.interval_as_word(a)?,
            )?),
            Space::Finite(f) => {
                let inner = self.open_mask(f, a)?;
                let witness = f.cellularity(self.open_mask(f, b)?)?.witness;
                Ok(witness
                    .iter()
                    .position(|&m| is_subset(inner, m))
                    .map(Count::from))
            }
            Space::Sum(pieces) => {
                let (i, s, x) = self.piece(pieces, b)?;
                let (j, _, y) = self.piece(pieces, a)?;
                if i != j {
                    return Ok(None);
                }
                s.locate_in_split(x, y)
            }
        }
    }

    /// `n` pairwise disjoint basic subsets of `b`.
    pub fn split(&self, b: &BasicSet, n: usize) -> Result<Vec<BasicSet>, SpaceError> {
        match self {
            Space::Finite(f) => {
                let c = f.cellularity(self.open_mask(f, b)?)?;
                if n > c.max_size {
                    return Err(SpaceError::CellularityExceeded {
                        wanted: n,
                        available: c.max_size,
                    });
                }
                Ok(c.witness[..n]
                    .iter()
                    .map(|&m| BasicSet::Open(f.index_of(m).expect("open")))
                    .collect())
            }
            _ => (0..n)
                .map(|i| self.split_member(b, &Count::from(i)))
                .collect(),
        }
    }

    /// The least basic set contained in the union of `members`.
    pub fn min_basic(&self, members: &[BasicSet]) -> Result<BasicSet, SpaceError> {
        if members.is_empty() {
            return Err(SpaceError::EmptyUnion);
        }
        for m in members {
            self.validate(m)?;
        }
        if let [only] = members {
            if !matches!(self, Space::Finite(_)) {
                if let Space::Sum(pieces) = self {
                    let (i, s, x) = self.piece(pieces, only)?;
                    return Ok(BasicSet::Piece(
                        i,
                        Box::new(s.min_basic(std::slice::from_ref(x))?),
                    ));
                }
                return Ok(only.clone());
            }
        }
        match self {
            Space::Cantor { radix } => {
                let words: Vec<Word> = members
                    .iter()
                    .map(|m| self.cylinder(*radix, m).cloned())
                    .collect::<Result<_, _>>()?;
                Ok(BasicSet::Cylinder(least_covered_word(*radix, &words)?))
            }
            Space::Dyadic => {
                let words: Vec<Word> = members
                    .iter()
                    .map(|m| self.interval_as_word(m))
                    .collect::<Result<_, _>>()?;
                word_interval(&least_covered_word(2, &words)?)
            }
            Space::Finite(f) => {
                let union = members
                    .iter()
                    .try_fold(0, |acc, m| self.open_mask(f, m).map(|x| acc | x))?;
                let idx = (1..f.opens().len())
                    .find(|&i| is_subset(f.opens()[i], union))
                    .expect("members are opens inside the union");
                Ok(BasicSet::Open(idx))
            }
            Space::Sum(pieces) => {
                let first = members
                    .iter()
                    .map(|m| self.piece(pieces, m).map(|p| p.0))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .min()
                    .expect("nonempty");
                let inner: Vec<BasicSet> = members
                    .iter()
                    .filter_map(|m| match m {
                        BasicSet::Piece(i, x) if *i == first => Some((**x).clone()),
                        _ => None,
                    })
                    .collect();
                Ok(BasicSet::Piece(
                    first,
                    Box::new(pieces[first].min_basic(&inner)?),
                ))
            }
        }
    }

    /// Basic sets whose union is the whole space.
    pub fn top_basics(&self) -> Vec<BasicSet> {
        match self {
            Space::Cantor { radix } => vec![BasicSet::Cylinder(Word::empty(*radix))],
            Space::Dyadic => vec![BasicSet::Interval { level: 0, index: 0 }],
            Space::Finite(f) => vec![BasicSet::Open(f.opens().len() - 1)],
            Space::Sum(pieces) => pieces
                .iter()
                .enumerate()
                .flat_map(|(i, p)| {
                    p.top_basics()
                        .into_iter()
                        .map(move |b| BasicSet::Piece(i, Box::new(b)))
                })
                .collect(),
        }
    }

    pub fn parse_basic(&self, text: &str) -> Result<BasicSet, SpaceError> {
        let t = text.trim();
        let bad = || SpaceError::BadLiteral(t.to_string());
        let b = match self {
            Space::Cantor { radix } => {
                let inner = t
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .unwrap_or(t);
                BasicSet::Cylinder(Word::parse(*radix, inner).map_err(|_| bad())?)
            }
            Space::Dyadic => {
                let inner = t
                    .strip_prefix("I(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let (l, i) = inner.split_once(',').ok_or_else(bad)?;
                BasicSet::Interval {
                    level: l.trim().parse().map_err(|_| bad())?,
                    index: i.trim().parse().map_err(|_| bad())?,
                }
            }
            Space::Finite(_) => BasicSet::Open(
                t.strip_prefix('#')
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?,
            ),
            Space::Sum(pieces) => {
                let (p, rest) = t.split_once(':').ok_or_else(bad)?;
                let p: usize = p.trim().parse().map_err(|_| bad())?;
                let piece = pieces.get(p).ok_or_else(bad)?;
                BasicSet::Piece(p, Box::new(piece.parse_basic(rest)?))
            }
        };
        self.validate(&b).map_err(|_| bad())?;
        Ok(b)
    }
}

/// For the scheme `owner·1^n·0`, the `n` whose member contains `word`.
fn locate_in_word_scheme(owner: &Word, word: &Word) -> Result<Option<Count>, WordError> {
    let Some(rest) = word.strip_prefix(owner)? else {
        return Ok(None);
    };
    let runs = rest.runs();
    let (ones, next) = match runs.first() {
        Some(r) if r.digit == 1 => (r.count.clone(), runs.get(1)),
        other => (Count::zero(), other),
    };
    match next {
        Some(r) if r.digit == 0 => Ok(Some(ones)),
        _ => Ok(None),
    }
}

/// Shortlex-least word whose cylinder lies inside the union of the given cylinders.
fn least_covered_word(radix: u8, words: &[Word]) -> Result<Word, SpaceError> {
    let mut candidates: Vec<Vec<u8>> = Vec::new();
    let mut literal: Vec<Vec<u8>> = Vec::new();
    for w in words {
        let digits = w
            .digits(64)
            .ok_or(CountError::Undecided("union of long symbolic cylinders"))?;
        for l in 0..=digits.len() {
            candidates.push(digits[..l].to_vec());
        }
        literal.push(digits);
    }
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    candidates.dedup();
    let max_len = literal.iter().map(Vec::len).max().unwrap_or(0);
    fn covered(v: &[u8], radix: u8, members: &[Vec<u8>], max_len: usize) -> bool {
        if members.iter().any(|m| v.starts_with(m)) {
            return true;
        }
        if v.len() >= max_len {
            return false;
        }
        (0..radix).all(|d| {
            let mut child = v.to_vec();
            child.push(d);
            covered(&child, radix, members, max_len)
        })
    }
    let best = candidates
        .into_iter()
        .find(|v| covered(v, radix, &literal, max_len))
        .expect("every member covers itself");
    Ok(Word::from_digits(radix, &best)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyl(s: &str) -> BasicSet {
        BasicSet::Cylinder(Word::parse(2, s).unwrap())
    }

    #[test]
    fn cantor_relations() {
        let c = Space::preset("cantor:2").unwrap();
        assert!(c.subset(&cyl("01"), &cyl("0")).unwrap());
        assert!(!c.subset(&cyl("0"), &cyl("01")).unwrap());
        assert!(c.disjoint(&cyl("0"), &cyl("1")).unwrap());
        assert_eq!(c.meet(&cyl("0"), &cyl("011")).unwrap(), Some(cyl("011")));
        assert!(c.split_capable(&cyl("0")));
        assert_eq!(c.isolated(&cyl("0")).unwrap(), None);
    }

    #[test]
    fn dyadic_relations() {
        let d = Space::preset("dyadic").unwrap();
        let a = BasicSet::Interval { level: 1, index: 0 };
        let b = BasicSet::Interval { level: 2, index: 1 };
        assert_eq!(d.meet(&a, &b).unwrap(), Some(b.clone()));
        assert!(d
            .disjoint(&b, &BasicSet::Interval { level: 2, index: 2 })
            .unwrap());
        assert!(d
            .validate(&BasicSet::Interval { level: 1, index: 2 })
            .is_err());
        assert_eq!(
            d.split(&a, 2).unwrap()[1],
            BasicSet::Interval { level: 3, index: 2 }
        );
    }

    #[test]
    fn finite_relations() {
        let s = Space::preset("sierpinski").unwrap();
        assert_eq!(
            s.isolated(&BasicSet::Open(2)).unwrap(),
            Some(Point::Finite(0))
        );
        assert_eq!(
            s.min_basic(&[BasicSet::Open(2)]).unwrap(),
            BasicSet::Open(1)
        );
        let i = Space::preset("indiscrete:2").unwrap();
        assert_eq!(
            i.split(&BasicSet::Open(1), 2),
            Err(SpaceError::CellularityExceeded {
                wanted: 2,
                available: 1
            })
        );
        assert!(!i.split_capable(&BasicSet::Open(1)));
    }

    #[test]
    fn split_scheme() {
        let c = Space::cantor(2);
        assert_eq!(
            c.split(&cyl(""), 3).unwrap(),
            vec![cyl("0"), cyl("10"), cyl("110")]
        );
        assert_eq!(c.split(&cyl("01"), 1).unwrap(), vec![cyl("010")]);
        assert_eq!(
            c.locate_in_split(&cyl("01"), &cyl("0111001")).unwrap(),
            Some(Count::from_u64(2))
        );
        assert_eq!(c.locate_in_split(&cyl("01"), &cyl("0111")).unwrap(), None);
        assert_eq!(c.locate_in_split(&cyl("01"), &cyl("1")).unwrap(), None);
    }

    #[test]
    fn min_basic_examples() {
        let c = Space::cantor(2);
        assert_eq!(c.min_basic(&[cyl("10"), cyl("0")]).unwrap(), cyl("0"));
        assert_eq!(c.min_basic(&[cyl("11")]).unwrap(), cyl("11"));
        assert_eq!(
            c.min_basic(&[cyl("00"), cyl("01"), cyl("11")]).unwrap(),
            cyl("0")
        );
        assert_eq!(c.min_basic(&[]), Err(SpaceError::EmptyUnion));
    }

    #[test]
    fn positions_and_literals() {
        let c = Space::cantor(2);
        assert_eq!(c.position(&cyl("")).unwrap(), BigUint::from(0u32));
        assert_eq!(c.position(&cyl("1")).unwrap(), BigUint::from(2u32));
        assert_eq!(c.position(&cyl("00")).unwrap(), BigUint::from(3u32));
        assert_eq!(c.parse_basic("[0110]").unwrap(), cyl("0110"));
        assert_eq!(c.parse_basic("0110").unwrap(), cyl("0110"));
        assert!(c.parse_basic("[012]").is_err());
        let sum = Space::preset("sum:sierpinski,cantor:2").unwrap();
        let b = sum.parse_basic("1:[01]").unwrap();
        assert_eq!(b.literal(), "1:[01]");
        assert_eq!(sum.position(&b).unwrap(), BigUint::from(2u32 + 4));
        assert!(sum.disjoint(&b, &sum.parse_basic("0:#1").unwrap()).unwrap());
        assert!(Space::preset("torus").is_err());
    }
}
