//! The Banach–Mazur game: referee, adversaries, strategies and certificates.

use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::count::{CountError, CountPrinter};
use crate::family::{is_subset, points_of};
use crate::space::{BasicSet, Point, Space, SpaceError, MAX_INTERVAL_LEVEL};
use crate::structure::StructureError;
use crate::word::WordError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Actor {
    I,
    II,
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Actor::I => "I",
            Actor::II => "II",
        })
    }
}

/// Why a player could not produce a move.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unknown descriptor `{0}`")]
    Descriptor(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

impl From<CountError> for MoveError {
    fn from(e: CountError) -> Self {
        MoveError::Space(e.into())
    }
}

impl From<WordError> for MoveError {
    fn from(e: WordError) -> Self {
        MoveError::Space(e.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("cannot certify a trace with a failure: {0}")]
    Illegal(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A full-history strategy for Player II: the history is
/// `U_0, V_0, …, U_n` and the answer is `V_n`.
pub trait Strategy: Send + Sync {
    fn descriptor(&self) -> String;
    fn respond(&self, history: &[BasicSet]) -> Result<BasicSet, MoveError>;
}

/// A move rule that sees only the last `k` moves of Player I.
pub trait KTactic: Send + Sync {
    fn k(&self) -> usize;
    fn descriptor(&self) -> String;
    /// `prev` is always `None` for `k = 1` and in the first round.
    fn respond(&self, prev: Option<&BasicSet>, cur: &BasicSet) -> Result<BasicSet, MoveError>;
}

#[derive(Clone, Copy)]
pub enum Defender<'a> {
    Strategy(&'a dyn Strategy),
    Tactic(&'a dyn KTactic),
}

impl Defender<'_> {
    pub fn descriptor(&self) -> String {
        match self {
            Defender::Strategy(s) => s.descriptor(),
            Defender::Tactic(t) => t.descriptor(),
        }
    }
}

/// Player I.
pub trait Adversary {
    fn descriptor(&self) -> String;
    /// `history` holds all moves so far; it is empty in round 0.
    fn next_move(&mut self, space: &Space, history: &[BasicSet]) -> Result<BasicSet, MoveError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureKind {
    IllegalMove,
    NoMove,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub actor: Actor,
    pub round: usize,
    pub kind: FailureKind,
    pub reason: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            FailureKind::IllegalMove => "IllegalMove",
            FailureKind::NoMove => "NoMove",
        };
        write!(f, "{kind}({}, {}): {}", self.actor, self.round, self.reason)
    }
}

#[derive(Debug, Clone)]
pub struct PlayTrace {
    pub space: Space,
    pub adversary: String,
    pub defender: String,
    /// `U_0, V_0, U_1, V_1, …`
    pub moves: Vec<BasicSet>,
    pub failure: Option<Failure>,
}

impl PlayTrace {
    /// Completed rounds.
    pub fn depth(&self) -> usize {
        self.moves.len() / 2
    }

    pub fn moves_of(&self, actor: Actor) -> impl Iterator<Item = &BasicSet> {
        let skip = match actor {
            Actor::I => 0,
            Actor::II => 1,
        };
        self.moves.iter().skip(skip).step_by(2)
    }

    pub fn is_legal(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn run_play(
    space: &Space,
    adversary: &mut dyn Adversary,
    defender: Defender<'_>,
    depth: usize,
) -> Result<PlayTrace, GameError> {
    if depth == 0 {
        return Err(GameError::ZeroDepth);
    }
    let mut trace = PlayTrace {
        space: space.clone(),
        adversary: adversary.descriptor(),
        defender: defender.descriptor(),
        moves: Vec::new(),
        failure: None,
    };
    let fail = |actor, round, kind, reason: String| {
        Some(Failure {
            actor,
            round,
            kind,
            reason,
        })
    };
    for round in 0..depth {
        let u = match adversary.next_move(space, &trace.moves) {
            Ok(u) => u,
            Err(e) => {
                trace.failure = fail(Actor::I, round, FailureKind::NoMove, e.to_string());
                return Ok(trace);
            }
        };
        if let Some(reason) = move_violation(space, trace.moves.last(), &u) {
            trace.failure = fail(Actor::I, round, FailureKind::IllegalMove, reason);
            return Ok(trace);
        }
        trace.moves.push(u.clone());
        let answer = match defender {
            Defender::Strategy(s) => s.respond(&trace.moves),
            Defender::Tactic(t) => {
                let prev = if t.k() >= 2 && round > 0 {
                    trace.moves.get(trace.moves.len() - 3)
                } else {
                    None
                };
                t.respond(prev, &u)
            }
        };
        let v = match answer {
            Ok(v) => v,
            Err(e) => {
                trace.failure = fail(Actor::II, round, FailureKind::NoMove, e.to_string());
                return Ok(trace);
            }
        };
        if let Some(reason) = move_violation(space, Some(&u), &v) {
            trace.failure = fail(Actor::II, round, FailureKind::IllegalMove, reason);
            return Ok(trace);
        }
        trace.moves.push(v);
    }
    Ok(trace)
}

/// Why `mv` may not follow `last`, if it may not.
pub fn move_violation(space: &Space, last: Option<&BasicSet>, mv: &BasicSet) -> Option<String> {
    if let Err(e) = space.validate(mv) {
        return Some(e.to_string());
    }
    match last.map(|l| space.subset(mv, l)) {
        None | Some(Ok(true)) => None,
        Some(Ok(false)) => Some(format!(
            "{} is not inside {}",
            mv.literal(),
            last.expect("some").literal()
        )),
        Some(Err(e)) => Some(e.to_string()),
    }
}

/// Feed a tactic a sequence of Player I moves without refereeing, as if
/// they were consecutive rounds; returns every answer.
pub fn respond_sequence(
    tactic: &dyn KTactic,
    i_moves: &[BasicSet],
) -> Vec<Result<BasicSet, MoveError>> {
    i_moves
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let prev = if tactic.k() >= 2 && i > 0 {
                Some(&i_moves[i - 1])
            } else {
                None
            };
            tactic.respond(prev, u)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    CertifiedForII(Point),
    CertifiedForI(String),
    Undetermined(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameResult {
    pub verdict: Verdict,
    pub depth: usize,
}

impl GameResult {
    pub fn certified_for_ii(&self) -> bool {
        matches!(self.verdict, Verdict::CertifiedForII(_))
    }

    pub fn line(&self, printer: &mut CountPrinter) -> String {
        match &self.verdict {
            Verdict::CertifiedForII(p) => {
                format!("RESULT CertifiedForII point={}", p.render(printer))
            }
            Verdict::CertifiedForI(w) => format!("RESULT CertifiedForI witness={w}"),
            Verdict::Undetermined(d) => format!("RESULT Undetermined depth={d}"),
        }
    }
}

pub fn certify(trace: &PlayTrace) -> Result<GameResult, GameError> {
    if let Some(f) = &trace.failure {
        return Err(GameError::Illegal(f.to_string()));
    }
    let Some(first) = trace.moves.first() else {
        return Err(GameError::Illegal("empty trace".into()));
    };
    for w in trace.moves.windows(2) {
        if !trace.space.subset(&w[1], &w[0])? {
            return Err(GameError::Illegal(format!(
                "{} is not inside {}",
                w[1].literal(),
                w[0].literal()
            )));
        }
    }
    trace.space.validate(first)?;
    let verdict = verdict_for(&trace.space, &trace.moves)?;
    Ok(GameResult {
        verdict,
        depth: trace.depth(),
    })
}

fn verdict_for(space: &Space, moves: &[BasicSet]) -> Result<Verdict, GameError> {
    let last = moves.last().expect("nonempty");
    Ok(match space {
        // Nested cylinders all contain the last word followed by zeros.
        Space::Cantor { .. } => match last {
            BasicSet::Cylinder(w) => Verdict::CertifiedForII(Point::Sequence(w.clone())),
            _ => unreachable!("validated"),
        },
        Space::Dyadic => {
            let tail = moves.len().min(4);
            if moves.len() >= 4 && moves[moves.len() - tail..].iter().all(|m| m == last) {
                match last {
                    BasicSet::Interval { level, index } => Verdict::CertifiedForII(Point::Dyadic {
                        level: *level,
                        index: *index,
                    }),
                    _ => unreachable!("validated"),
                }
            } else {
                Verdict::Undetermined(moves.len() / 2)
            }
        }
        Space::Finite(f) => {
            let meet = moves.iter().fold(f.full(), |acc, m| match m {
                BasicSet::Open(i) => acc & f.opens()[*i],
                _ => acc,
            });
            match points_of(meet).first() {
                Some(&x) => Verdict::CertifiedForII(Point::Finite(x)),
                None => Verdict::CertifiedForI("empty intersection".into()),
            }
        }
        Space::Sum(pieces) => {
            let BasicSet::Piece(i, _) = last else {
                unreachable!("validated")
            };
            let inner: Vec<BasicSet> = moves
                .iter()
                .map(|m| match m {
                    BasicSet::Piece(_, x) => (**x).clone(),
                    _ => unreachable!("validated"),
                })
                .collect();
            match verdict_for(&pieces[*i], &inner)? {
                Verdict::CertifiedForII(p) => {
                    Verdict::CertifiedForII(Point::InPiece(*i, Box::new(p)))
                }
                other => other,
            }
        }
    })
}

/// One move per line, `DEF` lines naming symbolic lengths before first use,
/// then the result or failure.
pub fn format_trace(trace: &PlayTrace, result: Option<&GameResult>) -> String {
    let mut printer = CountPrinter::naming();
    let mut out = String::new();
    out.push_str(&format!("SPACE {}\n", trace.space.descriptor()));
    out.push_str(&format!(
        "PLAYERS I={} II={}\n",
        trace.adversary, trace.defender
    ));
    for (i, m) in trace.moves.iter().enumerate() {
        let literal = m.render(&mut printer);
        for def in printer.take_definitions() {
            out.push_str(&format!("DEF {def}\n"));
        }
        let actor = if i % 2 == 0 { Actor::I } else { Actor::II };
        out.push_str(&format!("{} {actor} {literal}\n", i / 2));
    }
    if let Some(f) = &trace.failure {
        out.push_str(&format!("FAILURE {f}\n"));
    }
    if let Some(r) = result {
        let line = r.line(&mut printer);
        for def in printer.take_definitions() {
            out.push_str(&format!("DEF {def}\n"));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// One step down: `b` followed by `digit`, for words and intervals.
pub fn extend(space: &Space, b: &BasicSet, digit: u8) -> Result<BasicSet, MoveError> {
    match (space, b) {
        (Space::Cantor { radix }, BasicSet::Cylinder(w)) => {
            Ok(BasicSet::Cylinder(w.appended(digit % radix)))
        }
        (Space::Dyadic, BasicSet::Interval { level, index }) => {
            if *level >= MAX_INTERVAL_LEVEL {
                return Err(SpaceError::TooDeep.into());
            }
            Ok(BasicSet::Interval {
                level: level + 1,
                index: index << 1 | (digit & 1) as u128,
            })
        }
        (Space::Sum(pieces), BasicSet::Piece(i, inner)) if *i < pieces.len() => Ok(
            BasicSet::Piece(*i, Box::new(extend(&pieces[*i], inner, digit)?)),
        ),
        (Space::Finite(_), _) => Ok(b.clone()),
        _ => Err(SpaceError::Foreign(b.literal()).into()),
    }
}

fn last_or_top(space: &Space, history: &[BasicSet], pick: usize) -> BasicSet {
    history.last().cloned().unwrap_or_else(|| {
        let tops = space.top_basics();
        tops[pick % tops.len()].clone()
    })
}

/// Plays a uniformly random refinement of II's last move.
pub struct RandomSplitter {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSplitter {
    pub fn new(seed: u64) -> Self {
        RandomSplitter {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

fn random_refinement(
    space: &Space,
    b: &BasicSet,
    rng: &mut ChaCha8Rng,
) -> Result<BasicSet, MoveError> {
    match (space, b) {
        (Space::Finite(f), BasicSet::Open(i)) => {
            let inside: Vec<usize> = f
                .opens()
                .iter()
                .enumerate()
                .filter(|&(_, &m)| m != 0 && is_subset(m, f.opens()[*i]))
                .map(|(j, _)| j)
                .collect();
            Ok(BasicSet::Open(inside[rng.gen_range(0..inside.len())]))
        }
        (Space::Sum(pieces), BasicSet::Piece(p, inner)) => Ok(BasicSet::Piece(
            *p,
            Box::new(random_refinement(&pieces[*p], inner, rng)?),
        )),
        (Space::Cantor { radix }, _) => {
            let mut out = b.clone();
            for _ in 0..rng.gen_range(0..=3) {
                out = extend(space, &out, rng.gen_range(0..*radix))?;
            }
            Ok(out)
        }
        _ => {
            let mut out = b.clone();
            for _ in 0..rng.gen_range(0..=3) {
                out = extend(space, &out, rng.gen_range(0..2))?;
            }
            Ok(out)
        }
    }
}

impl Adversary for RandomSplitter {
    fn descriptor(&self) -> String {
        format!("random-splitter:{}", self.seed)
    }

    fn next_move(&mut self, space: &Space, history: &[BasicSet]) -> Result<BasicSet, MoveError> {
        let pick = self.rng.gen_range(0..64);
        let base = last_or_top(space, history, pick);
        random_refinement(space, &base, &mut self.rng)
    }
}

/// Appends a fixed digit to II's last move; echoes in finite spaces.
pub struct Appender {
    digit: u8,
}

impl Appender {
    pub fn new(digit: u8) -> Self {
        Appender { digit }
    }
}

impl Adversary for Appender {
    fn descriptor(&self) -> String {
        format!("append-{}", self.digit)
    }

    fn next_move(&mut self, space: &Space, history: &[BasicSet]) -> Result<BasicSet, MoveError> {
        extend(space, &last_or_top(space, history, 0), self.digit)
    }
}

/// Dives eight levels at once with ones; in finite spaces takes the first
/// smallest open available.
pub struct DeepDiver;

impl Adversary for DeepDiver {
    fn descriptor(&self) -> String {
        "deep-diver".into()
    }

    fn next_move(&mut self, space: &Space, history: &[BasicSet]) -> Result<BasicSet, MoveError> {
        let mut b = last_or_top(space, history, 0);
        match finite_of(space, &b) {
            Some((f, m, wrap)) => {
                let atom = f.opens_within(m).find(|&o| o != 0).expect("nonempty open");
                Ok(wrap(BasicSet::Open(f.index_of(atom).expect("open"))))
            }
            None => {
                for _ in 0..8 {
                    b = extend(space, &b, 1)?;
                }
                Ok(b)
            }
        }
    }
}

type Rewrap = Box<dyn Fn(BasicSet) -> BasicSet>;

/// The finite space, mask and rewrapping of a finite basic set, if `b` is one.
fn finite_of<'a>(
    space: &'a Space,
    b: &BasicSet,
) -> Option<(&'a crate::topology::FiniteSpace, u32, Rewrap)> {
    match (space, b) {
        (Space::Finite(f), BasicSet::Open(i)) => Some((f, f.opens()[*i], Box::new(|x| x))),
        (Space::Sum(pieces), BasicSet::Piece(p, inner)) => {
            let (f, m, wrap) = finite_of(&pieces[*p], inner)?;
            let p = *p;
            Some((
                f,
                m,
                Box::new(move |x| BasicSet::Piece(p, Box::new(wrap(x)))),
            ))
        }
        _ => None,
    }
}

/// Always steps into the leftmost child; in finite spaces echoes.
pub struct LeftCrawler;

impl Adversary for LeftCrawler {
    fn descriptor(&self) -> String {
        "left-crawler".into()
    }

    fn next_move(&mut self, space: &Space, history: &[BasicSet]) -> Result<BasicSet, MoveError> {
        extend(space, &last_or_top(space, history, 0), 0)
    }
}

/// Plays a fixed list of moves, then echoes II.
pub struct Scripted {
    moves: Vec<BasicSet>,
    next: usize,
}

impl Scripted {
    pub fn new(moves: Vec<BasicSet>) -> Self {
        Scripted { moves, next: 0 }
    }
}

impl Adversary for Scripted {
    fn descriptor(&self) -> String {
        format!("scripted({})", self.moves.len())
    }

    fn next_move(&mut self, space: &Space, history: &[BasicSet]) -> Result<BasicSet, MoveError> {
        let mv = self
            .moves
            .get(self.next)
            .cloned()
            .unwrap_or_else(|| last_or_top(space, history, 0));
        self.next += 1;
        Ok(mv)
    }
}

/// `random:<seed>`, `random-splitter:<seed>`, `deep-diver`, `left-crawler`,
/// `append-<d>`.
pub fn adversary_from_descriptor(
    desc: &str,
    default_seed: u64,
) -> Result<Box<dyn Adversary>, MoveError> {
    let bad = || MoveError::Descriptor(desc.to_string());
    let (head, arg) = match desc.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (desc, None),
    };
    match (head, arg) {
        ("random" | "random-splitter", seed) => {
            let seed = seed
                .map(|s| s.parse().map_err(|_| bad()))
                .transpose()?
                .unwrap_or(default_seed);
            Ok(Box::new(RandomSplitter::new(seed)))
        }
        ("deep-diver", None) => Ok(Box::new(DeepDiver)),
        ("left-crawler", None) => Ok(Box::new(LeftCrawler)),
        (h, None) if h.starts_with("append-") => Ok(Box::new(Appender::new(
            h["append-".len()..].parse().map_err(|_| bad())?,
        ))),
        _ => Err(bad()),
    }
}

/// Digit-appending strategies over words and intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Ignore the history.
    Append(u8),
    /// Parity of the total length of all history words.
    LengthParity,
    /// Parity of the round number.
    RoundParity,
    /// Sum of the history's last digits, modulo the radix.
    LastDigitSum,
    /// Parity of `seed + Σ (i+1)·|h_i|`.
    Seeded(u64),
    /// Answer with I's move unchanged.
    Echo,
}

#[derive(Debug, Clone)]
pub struct DigitStrategy {
    space: Space,
    rule: Rule,
}

impl DigitStrategy {
    pub fn new(space: Space, rule: Rule) -> Self {
        DigitStrategy { space, rule }
    }

    /// `append-<d>`, `parity`, `round-parity`, `digit-sum`, `seeded:<n>`, `echo`.
    pub fn from_descriptor(space: Space, desc: &str) -> Result<Self, MoveError> {
        let bad = || MoveError::Descriptor(desc.to_string());
        let rule = match desc {
            "parity" => Rule::LengthParity,
            "round-parity" => Rule::RoundParity,
            "digit-sum" => Rule::LastDigitSum,
            "echo" => Rule::Echo,
            d if d.starts_with("append-") => {
                Rule::Append(d["append-".len()..].parse().map_err(|_| bad())?)
            }
            d if d.starts_with("seeded:") => {
                Rule::Seeded(d["seeded:".len()..].parse().map_err(|_| bad())?)
            }
            _ => return Err(bad()),
        };
        Ok(DigitStrategy { space, rule })
    }

    pub fn history_dependent(&self) -> bool {
        !matches!(self.rule, Rule::Append(_) | Rule::Echo)
    }
}

fn word_of(b: &BasicSet) -> Result<std::borrow::Cow<'_, crate::word::Word>, MoveError> {
    match b {
        BasicSet::Cylinder(w) => Ok(std::borrow::Cow::Borrowed(w)),
        BasicSet::Interval { level, index } => {
            let digits: Vec<u8> = (0..*level).rev().map(|i| (index >> i & 1) as u8).collect();
            Ok(std::borrow::Cow::Owned(crate::word::Word::from_digits(
                2, &digits,
            )?))
        }
        BasicSet::Piece(_, inner) => word_of(inner),
        BasicSet::Open(_) => Err(MoveError::Precondition("digit rules need words".into())),
    }
}

impl Strategy for DigitStrategy {
    fn descriptor(&self) -> String {
        match self.rule {
            Rule::Append(d) => format!("append-{d}"),
            Rule::LengthParity => "parity".into(),
            Rule::RoundParity => "round-parity".into(),
            Rule::LastDigitSum => "digit-sum".into(),
            Rule::Seeded(n) => format!("seeded:{n}"),
            Rule::Echo => "echo".into(),
        }
    }

    fn respond(&self, history: &[BasicSet]) -> Result<BasicSet, MoveError> {
        let cur = history
            .last()
            .ok_or_else(|| MoveError::Precondition("empty history".into()))?;
        let digit = match &self.rule {
            Rule::Echo => return Ok(cur.clone()),
            Rule::Append(d) => *d,
            Rule::LengthParity => {
                let mut sum = 0u64;
                for b in history {
                    sum += word_of(b)?.len().residue_u64(2)?;
                }
                (sum % 2) as u8
            }
            Rule::RoundParity => ((history.len() / 2) % 2) as u8,
            Rule::LastDigitSum => {
                let radix = match &self.space {
                    Space::Cantor { radix } => *radix as u64,
                    _ => 2,
                };
                let mut sum = 0u64;
                for b in history {
                    sum += word_of(b)?.last_digit().unwrap_or(0) as u64;
                }
                (sum % radix) as u8
            }
            Rule::Seeded(seed) => {
                let mut sum = *seed % 2;
                for (i, b) in history.iter().enumerate() {
                    sum += (i as u64 + 1) % 2 * word_of(b)?.len().residue_u64(2)?;
                }
                (sum % 2) as u8
            }
        };
        extend(&self.space, cur, digit)
    }
}

/// A history-free strategy used as a 1-tactic.
pub struct StrategyAsTactic<S: Strategy>(pub S);

impl<S: Strategy> KTactic for StrategyAsTactic<S> {
    fn k(&self) -> usize {
        1
    }

    fn descriptor(&self) -> String {
        self.0.descriptor()
    }

    fn respond(&self, _prev: Option<&BasicSet>, cur: &BasicSet) -> Result<BasicSet, MoveError> {
        self.0.respond(std::slice::from_ref(cur))
    }
}

/// How the pieces of a combined defense relate to the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PieceMode {
    /// Pieces are summands; per-piece rules act on the summand's own space.
    Summand,
    /// Pieces are basic sets of the space itself.
    Inside,
}

struct Pieces {
    space: Space,
    pieces: Vec<BasicSet>,
    mode: PieceMode,
    diagnostics: Mutex<Vec<String>>,
}

impl Pieces {
    fn new(space: &Space, pieces: Vec<BasicSet>, count: usize) -> Result<Self, MoveError> {
        if pieces.is_empty() || pieces.len() != count {
            return Err(MoveError::Precondition(
                "one rule per piece is required".into(),
            ));
        }
        for p in &pieces {
            space.validate(p)?;
        }
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                if !space.disjoint(a, b)? {
                    return Err(MoveError::Precondition(format!(
                        "{} meets {}",
                        a.literal(),
                        b.literal()
                    )));
                }
            }
        }
        let summand = matches!(space, Space::Sum(_)) && pieces == space.top_basics();
        if let (Space::Finite(f), false) = (space, summand) {
            let masks: Vec<u32> = pieces
                .iter()
                .map(|p| match p {
                    BasicSet::Open(i) => f.opens()[*i],
                    _ => unreachable!("validated"),
                })
                .collect();
            if !f.is_maximal_cellular(f.full(), &masks) {
                return Err(MoveError::Precondition(
                    "pieces are not a maximal cellular family".into(),
                ));
            }
        }
        let mode = if summand {
            PieceMode::Summand
        } else {
            PieceMode::Inside
        };
        Ok(Pieces {
            space: space.clone(),
            pieces,
            mode,
            diagnostics: Mutex::new(Vec::new()),
        })
    }

    /// The first piece meeting `b`.
    fn first_meeting(&self, b: &BasicSet) -> Result<usize, MoveError> {
        for (i, p) in self.pieces.iter().enumerate() {
            if !self.space.disjoint(p, b)? {
                return Ok(i);
            }
        }
        Err(MoveError::Invariant(format!(
            "no piece meets {}; the family is not maximal",
            b.literal()
        )))
    }

    /// The piece containing `b`.
    fn containing(&self, b: &BasicSet) -> Result<Option<usize>, MoveError> {
        for (i, p) in self.pieces.iter().enumerate() {
            if self.space.subset(b, p)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// `b ∩ A_i`, as a move of the piece's rule.
    fn restrict(&self, i: usize, b: &BasicSet) -> Result<BasicSet, MoveError> {
        match self.mode {
            PieceMode::Summand => match b {
                BasicSet::Piece(j, inner) if *j == i => Ok((**inner).clone()),
                _ => Err(MoveError::Invariant(format!(
                    "{} is outside summand {i}",
                    b.literal()
                ))),
            },
            PieceMode::Inside => self
                .space
                .meet(b, &self.pieces[i])?
                .ok_or_else(|| MoveError::Invariant(format!("{} misses piece {i}", b.literal()))),
        }
    }

    fn lift(&self, i: usize, b: BasicSet) -> BasicSet {
        match self.mode {
            PieceMode::Summand => BasicSet::Piece(i, Box::new(b)),
            PieceMode::Inside => b,
        }
    }

    fn note(&self, msg: String) {
        self.diagnostics.lock().expect("diagnostics lock").push(msg);
    }
}

/// Per-piece k-tactics glued over a maximal cellular family.
pub struct CombinedTactic {
    pieces: Pieces,
    tactics: Vec<Arc<dyn KTactic>>,
}

impl CombinedTactic {
    /// The piece a first move is dispatched to.
    pub fn piece_for(&self, u0: &BasicSet) -> Result<usize, MoveError> {
        self.pieces.first_meeting(u0)
    }

    pub fn pieces(&self) -> &[BasicSet] {
        &self.pieces.pieces
    }

    /// Fallback branches taken so far; nonempty only on foreign histories.
    pub fn diagnostics(&self) -> Vec<String> {
        self.pieces
            .diagnostics
            .lock()
            .expect("diagnostics lock")
            .clone()
    }
}

impl KTactic for CombinedTactic {
    fn k(&self) -> usize {
        self.tactics.iter().map(|t| t.k()).max().unwrap_or(1)
    }

    fn descriptor(&self) -> String {
        let parts: Vec<String> = self.tactics.iter().map(|t| t.descriptor()).collect();
        format!("combined[{}]", parts.join(";"))
    }

    fn respond(&self, prev: Option<&BasicSet>, cur: &BasicSet) -> Result<BasicSet, MoveError> {
        let p = &self.pieces;
        let Some(prev) = prev else {
            let i = p.first_meeting(cur)?;
            let out = self.tactics[i].respond(None, &p.restrict(i, cur)?)?;
            return Ok(p.lift(i, out));
        };
        let Some(i) = p.containing(cur)? else {
            p.note(format!("{} lies in no single piece", cur.literal()));
            return Ok(cur.clone());
        };
        let inner_prev = p.restrict(i, prev)?;
        let passed = if self.tactics[i].k() >= 2 {
            Some(&inner_prev)
        } else {
            None
        };
        let out = self.tactics[i].respond(passed, &p.restrict(i, cur)?)?;
        Ok(p.lift(i, out))
    }
}

/// Per-piece full-history strategies glued over a maximal cellular family.
pub struct CombinedStrategy {
    pieces: Pieces,
    strategies: Vec<Arc<dyn Strategy>>,
}

impl CombinedStrategy {
    pub fn diagnostics(&self) -> Vec<String> {
        self.pieces
            .diagnostics
            .lock()
            .expect("diagnostics lock")
            .clone()
    }
}

impl Strategy for CombinedStrategy {
    fn descriptor(&self) -> String {
        let parts: Vec<String> = self.strategies.iter().map(|s| s.descriptor()).collect();
        format!("combined[{}]", parts.join(";"))
    }

    fn respond(&self, history: &[BasicSet]) -> Result<BasicSet, MoveError> {
        let p = &self.pieces;
        let first = history
            .first()
            .ok_or_else(|| MoveError::Precondition("empty history".into()))?;
        let i = p.first_meeting(first)?;
        let mut inner = Vec::with_capacity(history.len());
        inner.push(p.restrict(i, first)?);
        for b in &history[1..] {
            match p.containing(b)? {
                Some(j) if j == i => inner.push(p.restrict(i, b)?),
                _ => {
                    p.note(format!("{} leaves piece {i}", b.literal()));
                    return Ok(history.last().expect("nonempty").clone());
                }
            }
        }
        Ok(p.lift(i, self.strategies[i].respond(&inner)?))
    }
}

pub fn combine_tactics(
    space: &Space,
    pieces: Vec<BasicSet>,
    per_piece: Vec<Arc<dyn KTactic>>,
) -> Result<CombinedTactic, MoveError> {
    Ok(CombinedTactic {
        pieces: Pieces::new(space, pieces, per_piece.len())?,
        tactics: per_piece,
    })
}

pub fn combine_strategies(
    space: &Space,
    pieces: Vec<BasicSet>,
    per_piece: Vec<Arc<dyn Strategy>>,
) -> Result<CombinedStrategy, MoveError> {
    Ok(CombinedStrategy {
        pieces: Pieces::new(space, pieces, per_piece.len())?,
        strategies: per_piece,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn cyl(s: &str) -> BasicSet {
        BasicSet::Cylinder(Word::parse(2, s).unwrap())
    }

    #[test]
    fn alternating_appends() {
        let c = Space::cantor(2);
        let ii = DigitStrategy::new(c.clone(), Rule::Append(1));
        let trace = run_play(&c, &mut Appender::new(0), Defender::Strategy(&ii), 3).unwrap();
        let lits: Vec<String> = trace.moves.iter().map(|m| m.literal()).collect();
        assert_eq!(
            lits,
            ["[0]", "[01]", "[010]", "[0101]", "[01010]", "[010101]"]
        );
        let result = certify(&trace).unwrap();
        assert_eq!(
            result.verdict,
            Verdict::CertifiedForII(Point::Sequence(Word::parse(2, "010101").unwrap()))
        );
        assert_eq!(
            run_play(&c, &mut Appender::new(0), Defender::Strategy(&ii), 0).unwrap_err(),
            GameError::ZeroDepth
        );
    }

    #[test]
    fn illegal_first_player() {
        let c = Space::cantor(2);
        let ii = DigitStrategy::new(c.clone(), Rule::Append(1));
        let mut i = Scripted::new(vec![cyl("0"), cyl("1")]);
        let trace = run_play(&c, &mut i, Defender::Strategy(&ii), 3).unwrap();
        let f = trace.failure.clone().unwrap();
        assert_eq!(
            (f.actor, f.round, f.kind),
            (Actor::I, 1, FailureKind::IllegalMove)
        );
        assert!(certify(&trace).is_err());
    }

    #[test]
    fn dyadic_undetermined() {
        let d = Space::Dyadic;
        let ii = DigitStrategy::new(d.clone(), Rule::Append(0));
        let trace = run_play(&d, &mut LeftCrawler, Defender::Strategy(&ii), 5).unwrap();
        assert_eq!(certify(&trace).unwrap().verdict, Verdict::Undetermined(5));
    }

    #[test]
    fn finite_stabilizes() {
        let s = Space::preset("indiscrete:2").unwrap();
        let ii = DigitStrategy::new(s.clone(), Rule::Echo);
        let trace = run_play(&s, &mut LeftCrawler, Defender::Strategy(&ii), 4).unwrap();
        assert_eq!(
            certify(&trace).unwrap().verdict,
            Verdict::CertifiedForII(Point::Finite(0))
        );
    }

    #[test]
    fn parity_rule() {
        let c = Space::cantor(2);
        let s = DigitStrategy::new(c, Rule::LengthParity);
        assert_eq!(s.respond(&[cyl("0")]).unwrap(), cyl("01"));
        assert_eq!(
            s.respond(&[cyl("0"), cyl("01"), cyl("01010")]).unwrap(),
            cyl("010100")
        );
    }

    #[test]
    fn trace_text() {
        let c = Space::cantor(2);
        let ii = DigitStrategy::new(c.clone(), Rule::Append(1));
        let trace = run_play(&c, &mut Appender::new(0), Defender::Strategy(&ii), 1).unwrap();
        let text = format_trace(&trace, Some(&certify(&trace).unwrap()));
        assert_eq!(
            text,
            "SPACE cantor:2\nPLAYERS I=append-0 II=append-1\n0 I [0]\n0 II [01]\nRESULT CertifiedForII point=01(0)\n"
        );
    }

    #[test]
    fn random_splitter_replays() {
        let c = Space::cantor(2);
        let ii = DigitStrategy::new(c.clone(), Rule::LengthParity);
        let a = run_play(&c, &mut RandomSplitter::new(7), Defender::Strategy(&ii), 10).unwrap();
        let b = run_play(&c, &mut RandomSplitter::new(7), Defender::Strategy(&ii), 10).unwrap();
        assert_eq!(a.moves, b.moves);
        assert!(a.is_legal());
    }

    #[test]
    fn discrete_combiner() {
        let s = Space::preset("discrete:2").unwrap();
        let f = s.finite_space().unwrap().clone();
        let pieces: Vec<BasicSet> = [0b01u32, 0b10]
            .iter()
            .map(|&m| BasicSet::Open(f.index_of(m).unwrap()))
            .collect();
        let per: Vec<Arc<dyn KTactic>> = pieces
            .iter()
            .map(|_| {
                Arc::new(StrategyAsTactic(DigitStrategy::new(s.clone(), Rule::Echo)))
                    as Arc<dyn KTactic>
            })
            .collect();
        let combined = combine_tactics(&s, pieces.clone(), per).unwrap();
        for seed in 0..20 {
            let trace = run_play(
                &s,
                &mut RandomSplitter::new(seed),
                Defender::Tactic(&combined),
                6,
            )
            .unwrap();
            assert!(certify(&trace).unwrap().certified_for_ii());
        }
        assert!(combine_tactics(&s, pieces[..1].to_vec(), vec![]).is_err());
    }
}
