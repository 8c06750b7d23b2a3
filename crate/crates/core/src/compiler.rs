//! Turning a full-history strategy into a 2-tactic, plus the 1-tactics for
//! isolated points and bounded cellularity and the dispatcher that picks
//! between them.

use std::sync::Arc;

use crate::count::Count;
use crate::family::{is_subset, points_of, Mask};
use crate::game::{combine_tactics, CombinedTactic, KTactic, MoveError, Strategy};
use crate::space::{BasicSet, Point, Space};
use crate::structure::{
    extend_fold, pg_membership, sequence_folds_from_index, sequence_index_from_fold, CantorOracle,
    CodingScheme, TableOracle,
};
use crate::topology::FiniteSpace;

pub type Oracle = Arc<dyn TableOracle<Member = BasicSet>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coding {
    /// Codes carry `(round, rank of the previous anchor, its C-index)`.
    Triple,
    /// Codes carry every anchor's `(rank, order)` so far.
    Sequence,
}

impl Coding {
    pub fn name(&self) -> &'static str {
        match self {
            Coding::Triple => "triple",
            Coding::Sequence => "seq",
        }
    }
}

/// The auxiliary play fed to σ: codes `O^j` alternating with σ's answers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Entwined {
    /// Anchors `hat(U'_j)`.
    pub anchors: Vec<BasicSet>,
    pub codes: Vec<BasicSet>,
    pub answers: Vec<BasicSet>,
    /// Code indices `n_j` inside each anchor's scheme.
    pub indices: Vec<Count>,
}

impl Entwined {
    /// `O^0, V_0, O^1, V_1, …`
    pub fn play(&self) -> Vec<BasicSet> {
        self.codes
            .iter()
            .zip(&self.answers)
            .flat_map(|(o, v)| [o.clone(), v.clone()])
            .collect()
    }
}

/// What a round computes: the recovered past and the new code.
#[derive(Debug, Clone)]
pub struct RoundState {
    pub past: Entwined,
    pub anchor: BasicSet,
    pub code: BasicSet,
    pub index: Count,
}

pub struct TwoTactic {
    space: Space,
    oracle: Oracle,
    sigma: Arc<dyn Strategy>,
    coding: Coding,
}

pub fn compile_2tactic(
    space: &Space,
    oracle: Oracle,
    sigma: Arc<dyn Strategy>,
) -> Result<TwoTactic, MoveError> {
    TwoTactic::new(space, oracle, sigma, Coding::Triple)
}

pub fn compile_2tactic_seqcode(
    space: &Space,
    oracle: Oracle,
    sigma: Arc<dyn Strategy>,
) -> Result<TwoTactic, MoveError> {
    TwoTactic::new(space, oracle, sigma, Coding::Sequence)
}

/// The canonical Cantor table for a Cantor space.
pub fn cantor_oracle(space: &Space) -> Result<Oracle, MoveError> {
    match space {
        Space::Cantor { radix } => Ok(Arc::new(CantorOracle::new(*radix))),
        other => Err(MoveError::Precondition(format!(
            "{} has no closed-form table",
            other.descriptor()
        ))),
    }
}

fn invariant(msg: String) -> MoveError {
    MoveError::Invariant(msg)
}

impl TwoTactic {
    fn new(
        space: &Space,
        oracle: Oracle,
        sigma: Arc<dyn Strategy>,
        coding: Coding,
    ) -> Result<Self, MoveError> {
        // The split scheme supplies infinitely many disjoint codes below every
        // purged basic set, which dominates every finite bound the codes need.
        for top in space.top_basics() {
            if !pg_membership(space, &top)? || !oracle.is_pg(&top)? {
                return Err(MoveError::Precondition(format!(
                    "{} is not purged; the coding families do not exist",
                    top.literal()
                )));
            }
        }
        Ok(TwoTactic {
            space: space.clone(),
            oracle,
            sigma,
            coding,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn coding(&self) -> Coding {
        self.coding
    }

    /// `hat(U')` where `U'` is the least basic set inside the move.
    pub fn anchor(&self, mv: &BasicSet) -> Result<BasicSet, MoveError> {
        let least = self.space.min_basic(std::slice::from_ref(mv))?;
        Ok(self.oracle.hat(&least)?)
    }

    fn scheme(&self, owner: BasicSet) -> Result<CodingScheme<'_>, MoveError> {
        Ok(CodingScheme::new(&self.space, owner)?)
    }

    /// Recover the entwined play of earlier rounds from the last two moves.
    pub fn reconstruct_entwined(
        &self,
        prev: Option<&BasicSet>,
        cur: &BasicSet,
    ) -> Result<Entwined, MoveError> {
        Ok(self.round(prev, cur)?.past)
    }

    pub fn round(&self, prev: Option<&BasicSet>, cur: &BasicSet) -> Result<RoundState, MoveError> {
        self.space.validate(cur)?;
        let anchor = self.anchor(cur)?;
        match self.coding {
            Coding::Triple => self.round_triple(prev, cur, anchor),
            Coding::Sequence => self.round_sequence(prev, cur, anchor),
        }
    }

    fn replay(&self, past: &mut Entwined) -> Result<(), MoveError> {
        let mut play = Vec::with_capacity(2 * past.codes.len() + 1);
        for code in &past.codes {
            play.push(code.clone());
            let v = self.sigma.respond(&play)?;
            if !self.space.subset(&v, code)? {
                return Err(MoveError::Precondition(format!(
                    "σ answered {} outside {}",
                    v.literal(),
                    code.literal()
                )));
            }
            play.push(v.clone());
            past.answers.push(v);
        }
        Ok(())
    }

    fn round_triple(
        &self,
        prev: Option<&BasicSet>,
        cur: &BasicSet,
        anchor: BasicSet,
    ) -> Result<RoundState, MoveError> {
        let mut past = Entwined::default();
        let (j, k, l) = match prev {
            None => (Count::zero(), Count::zero(), Count::zero()),
            Some(prev) => {
                let mut owner = self.anchor(prev)?;
                let mut inner = cur.clone();
                let mut expected: Option<u64> = None;
                let mut chain = Vec::new();
                loop {
                    let scheme = self.scheme(owner.clone())?;
                    let (n, code) = scheme.locate(&inner)?;
                    let (j, k, l) = crate::structure::triple_from_index(&n)?;
                    let j = j
                        .to_u64()
                        .ok_or_else(|| invariant(format!("round component {j} is not small")))?;
                    if expected.is_some_and(|e| e != j) {
                        return Err(invariant(format!(
                            "round {j} follows round {}",
                            expected.unwrap_or(0)
                        )));
                    }
                    chain.push((owner.clone(), code, n));
                    if j == 0 {
                        if !k.is_zero() || !l.is_zero() {
                            return Err(invariant("first code is not (0,0,0)".into()));
                        }
                        break;
                    }
                    let ancestors = self.oracle.c_enum(&owner, &k)?;
                    let l = l
                        .to_usize()
                        .ok_or_else(|| invariant(format!("C-index {l} is not small")))?;
                    let earlier = ancestors.get(l).cloned().ok_or_else(|| {
                        invariant(format!(
                            "C-index {l} is missing from C({}, {k})",
                            owner.literal()
                        ))
                    })?;
                    inner = owner;
                    owner = earlier;
                    expected = Some(j - 1);
                }
                chain.reverse();
                for (owner, code, n) in chain {
                    past.anchors.push(owner);
                    past.codes.push(code);
                    past.indices.push(n);
                }
                let last = past.anchors.last().expect("at least one round").clone();
                let k = self.oracle.rank_code(&last)?;
                let ancestors = self.oracle.c_enum(&anchor, &k)?;
                let l = ancestors.iter().position(|a| a == &last).ok_or_else(|| {
                    invariant(format!(
                        "{} is missing from C({}, {k})",
                        last.literal(),
                        anchor.literal()
                    ))
                })?;
                (Count::from(past.codes.len()), k, Count::from(l))
            }
        };
        self.replay(&mut past)?;
        let index = crate::structure::triple_index(&j, &k, &l);
        let code = self.scheme(anchor.clone())?.code(&index)?;
        Ok(RoundState {
            past,
            anchor,
            code,
            index,
        })
    }

    fn round_sequence(
        &self,
        prev: Option<&BasicSet>,
        cur: &BasicSet,
        anchor: BasicSet,
    ) -> Result<RoundState, MoveError> {
        let mut past = Entwined::default();
        let mut last_fold = None;
        if let Some(prev) = prev {
            let owner = self.anchor(prev)?;
            let (n, code) = self.scheme(owner.clone())?.locate(cur)?;
            let (coords, folds) = sequence_folds_from_index(&n)?;
            for (i, ((r, o), fold)) in coords.iter().zip(&folds).enumerate() {
                let a = self
                    .oracle
                    .member_at(r, o)?
                    .ok_or_else(|| invariant(format!("no member at ({r}, {o})")))?;
                let idx = if i + 1 == coords.len() {
                    n.clone()
                } else {
                    sequence_index_from_fold(i + 1, fold)
                };
                past.codes.push(self.scheme(a.clone())?.code(&idx)?);
                past.anchors.push(a);
                past.indices.push(idx);
            }
            if past.anchors.last() != Some(&owner) || past.codes.last() != Some(&code) {
                return Err(invariant(
                    "decoded coordinates do not rebuild the code".into(),
                ));
            }
            last_fold = folds.last().cloned();
        }
        self.replay(&mut past)?;
        let coord = (self.oracle.rank_code(&anchor)?, self.oracle.order(&anchor)?);
        let fold = extend_fold(last_fold.as_ref(), &coord);
        let index = sequence_index_from_fold(past.codes.len() + 1, &fold);
        let code = self.scheme(anchor.clone())?.code(&index)?;
        Ok(RoundState {
            past,
            anchor,
            code,
            index,
        })
    }
}

impl KTactic for TwoTactic {
    fn k(&self) -> usize {
        2
    }

    fn descriptor(&self) -> String {
        format!(
            "compiled-2tactic:{}:{}:{}",
            self.space.descriptor(),
            self.coding.name(),
            self.sigma.descriptor()
        )
    }

    fn respond(&self, prev: Option<&BasicSet>, cur: &BasicSet) -> Result<BasicSet, MoveError> {
        let state = self.round(prev, cur)?;
        let mut play = state.past.play();
        play.push(state.code.clone());
        let v = self.sigma.respond(&play)?;
        if !self.space.subset(&v, &state.code)? {
            return Err(MoveError::Precondition(format!(
                "σ answered {} outside {}",
                v.literal(),
                state.code.literal()
            )));
        }
        Ok(v)
    }
}

fn finite_mask(f: &FiniteSpace, b: &BasicSet) -> Result<Mask, MoveError> {
    match b {
        BasicSet::Open(i) if *i >= 1 && *i < f.opens().len() => Ok(f.opens()[*i]),
        _ => Err(MoveError::Precondition(format!(
            "{} is not a nonempty open",
            b.literal()
        ))),
    }
}

fn open_of(f: &FiniteSpace, m: Mask) -> BasicSet {
    BasicSet::Open(f.index_of(m).expect("open set"))
}

/// Answers with the least open neighbourhood of an isolated point.
pub struct IsolatedTactic {
    space: Space,
}

pub fn tactic_isolated(space: &Space) -> IsolatedTactic {
    IsolatedTactic {
        space: space.clone(),
    }
}

impl KTactic for IsolatedTactic {
    fn k(&self) -> usize {
        1
    }

    fn descriptor(&self) -> String {
        "isolated".into()
    }

    fn respond(&self, _prev: Option<&BasicSet>, cur: &BasicSet) -> Result<BasicSet, MoveError> {
        fn singleton(space: &Space, p: &Point, cur: &BasicSet) -> Result<BasicSet, MoveError> {
            match (space, p, cur) {
                (Space::Finite(f), Point::Finite(x), BasicSet::Open(_)) => Ok(open_of(f, 1 << x)),
                (Space::Sum(pieces), Point::InPiece(i, q), BasicSet::Piece(_, inner)) => Ok(
                    BasicSet::Piece(*i, Box::new(singleton(&pieces[*i], q, inner)?)),
                ),
                _ => Err(MoveError::Precondition(format!(
                    "{} has no isolated point",
                    cur.literal()
                ))),
            }
        }
        match self.space.isolated(cur)? {
            Some(p) => singleton(&self.space, &p, cur),
            None => Err(MoveError::Precondition(format!(
                "{} has no isolated point",
                cur.literal()
            ))),
        }
    }
}

/// A maximal cellular family inside `W` of size `n'` and a member `A*`
/// whose nonempty open subsets pairwise meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularWitness {
    pub size: usize,
    pub family: Vec<BasicSet>,
    pub star: BasicSet,
}

pub struct BoundedCellularityTactic {
    space: Space,
    w: BasicSet,
    star: BasicSet,
}

/// Valid for finite spaces, where every claim is rechecked exactly.
pub fn tactic_bounded_cellularity(
    space: &Space,
    w: &BasicSet,
    witness: &CellularWitness,
) -> Result<BoundedCellularityTactic, MoveError> {
    let f = space.finite_space().ok_or_else(|| {
        MoveError::Precondition("cellularity witnesses are checked on finite spaces".into())
    })?;
    let wm = finite_mask(f, w)?;
    let masks = witness
        .family
        .iter()
        .map(|b| finite_mask(f, b))
        .collect::<Result<Vec<_>, _>>()?;
    if masks.len() != witness.size {
        return Err(MoveError::Precondition(format!(
            "family has {} members, not {}",
            masks.len(),
            witness.size
        )));
    }
    for (i, &a) in masks.iter().enumerate() {
        if !is_subset(a, wm) {
            return Err(MoveError::Precondition(format!(
                "{} is not inside W",
                witness.family[i].literal()
            )));
        }
        if masks[i + 1..].iter().any(|&b| a & b != 0) {
            return Err(MoveError::Precondition(
                "family is not pairwise disjoint".into(),
            ));
        }
    }
    let c = f
        .cellularity(wm)
        .map_err(|e| MoveError::Precondition(e.to_string()))?
        .max_size;
    if c != witness.size {
        return Err(MoveError::Precondition(format!(
            "claimed size {} but the cellularity of W is {c}",
            witness.size
        )));
    }
    if !witness.family.contains(&witness.star) {
        return Err(MoveError::Precondition("A* is not in the family".into()));
    }
    let sm = finite_mask(f, &witness.star)?;
    if f.cellularity(sm)
        .map_err(|e| MoveError::Precondition(e.to_string()))?
        .max_size
        != 1
    {
        return Err(MoveError::Precondition(
            "A* contains two disjoint nonempty opens".into(),
        ));
    }
    Ok(BoundedCellularityTactic {
        space: space.clone(),
        w: w.clone(),
        star: witness.star.clone(),
    })
}

/// The witness built from the atoms of `W`, starred at the first atom.
pub fn atom_witness(space: &Space, w: &BasicSet) -> Result<CellularWitness, MoveError> {
    let f = space
        .finite_space()
        .ok_or_else(|| MoveError::Precondition("finite spaces only".into()))?;
    let atoms = f.atoms_within(finite_mask(f, w)?);
    let family: Vec<BasicSet> = atoms.iter().map(|&m| open_of(f, m)).collect();
    Ok(CellularWitness {
        size: family.len(),
        star: family[0].clone(),
        family,
    })
}

impl KTactic for BoundedCellularityTactic {
    fn k(&self) -> usize {
        1
    }

    fn descriptor(&self) -> String {
        format!("bounded-cellularity:{}", self.w.literal())
    }

    fn respond(&self, _prev: Option<&BasicSet>, cur: &BasicSet) -> Result<BasicSet, MoveError> {
        if self.space.subset(&self.w, cur)? {
            Ok(self.star.clone())
        } else {
            Ok(cur.clone())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Isolated,
    BoundedCellularity,
    Compiled,
}

/// Per-move choice between the two 1-tactics and the compiled 2-tactic.
pub enum Dispatch {
    Single {
        space: Space,
        compiled: Option<TwoTactic>,
    },
    Sum {
        combined: CombinedTactic,
        parts: Vec<Arc<Dispatch>>,
    },
}

struct Shared(Arc<Dispatch>);

impl KTactic for Shared {
    fn k(&self) -> usize {
        self.0.k()
    }

    fn descriptor(&self) -> String {
        self.0.descriptor()
    }

    fn respond(&self, prev: Option<&BasicSet>, cur: &BasicSet) -> Result<BasicSet, MoveError> {
        self.0.respond(prev, cur)
    }
}

pub type StrategyFactory<'a> = dyn Fn(&Space) -> Result<Arc<dyn Strategy>, MoveError> + 'a;

/// `sigma_for` supplies a winning strategy for each purged summand.
pub fn dispatch(space: &Space, sigma_for: &StrategyFactory<'_>) -> Result<Dispatch, MoveError> {
    match space {
        Space::Sum(pieces) => {
            let parts = pieces
                .iter()
                .map(|p| dispatch(p, sigma_for).map(Arc::new))
                .collect::<Result<Vec<_>, _>>()?;
            let tactics: Vec<Arc<dyn KTactic>> = parts
                .iter()
                .map(|d| Arc::new(Shared(d.clone())) as Arc<dyn KTactic>)
                .collect();
            let combined = combine_tactics(space, space.top_basics(), tactics)?;
            Ok(Dispatch::Sum { combined, parts })
        }
        Space::Finite(_) => Ok(Dispatch::Single {
            space: space.clone(),
            compiled: None,
        }),
        _ => {
            let compiled = compile_2tactic(space, cantor_oracle(space)?, sigma_for(space)?)?;
            Ok(Dispatch::Single {
                space: space.clone(),
                compiled: Some(compiled),
            })
        }
    }
}

impl Dispatch {
    pub fn branch_for(&self, cur: &BasicSet) -> Result<Branch, MoveError> {
        match self {
            Dispatch::Sum { parts, .. } => match cur {
                BasicSet::Piece(i, inner) if *i < parts.len() => parts[*i].branch_for(inner),
                _ => Err(MoveError::Precondition(format!(
                    "{} is not in a summand",
                    cur.literal()
                ))),
            },
            Dispatch::Single { space, .. } => {
                if space.isolated(cur)?.is_some() {
                    Ok(Branch::Isolated)
                } else if space.finite_space().is_some() {
                    Ok(Branch::BoundedCellularity)
                } else if pg_membership(space, cur)? {
                    Ok(Branch::Compiled)
                } else {
                    Err(MoveError::Invariant(format!(
                        "{} falls in no branch",
                        cur.literal()
                    )))
                }
            }
        }
    }

    /// The piece a first move goes to, for sums.
    pub fn piece_for(&self, u0: &BasicSet) -> Option<usize> {
        match self {
            Dispatch::Sum { combined, .. } => combined.piece_for(u0).ok(),
            Dispatch::Single { .. } => None,
        }
    }
}

impl KTactic for Dispatch {
    fn k(&self) -> usize {
        2
    }

    fn descriptor(&self) -> String {
        match self {
            Dispatch::Sum { combined, .. } => format!("dispatch:{}", combined.descriptor()),
            Dispatch::Single { space, .. } => format!("dispatch:{}", space.descriptor()),
        }
    }

    fn respond(&self, prev: Option<&BasicSet>, cur: &BasicSet) -> Result<BasicSet, MoveError> {
        let (space, compiled) = match self {
            Dispatch::Sum { combined, .. } => return combined.respond(prev, cur),
            Dispatch::Single { space, compiled } => (space, compiled),
        };
        match self.branch_for(cur)? {
            Branch::Isolated => tactic_isolated(space).respond(None, cur),
            Branch::BoundedCellularity => {
                let f = space.finite_space().expect("finite");
                let least = f
                    .least_cellularity_inside(finite_mask(f, cur)?)
                    .map_err(|e| invariant(e.to_string()))?;
                let w = open_of(f, least);
                tactic_bounded_cellularity(space, &w, &atom_witness(space, &w)?)?.respond(None, cur)
            }
            Branch::Compiled => compiled
                .as_ref()
                .ok_or_else(|| invariant("no compiled tactic for a purged move".into()))?
                .respond(prev, cur),
        }
    }
}

/// Points of a finite move, for diagnostics.
pub fn finite_points(space: &Space, b: &BasicSet) -> Option<Vec<u32>> {
    let f = space.finite_space()?;
    finite_mask(f, b).ok().map(points_of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{certify, run_play, Defender, DigitStrategy, RandomSplitter, Rule, Scripted};
    use crate::word::Word;

    fn cyl(s: &str) -> BasicSet {
        BasicSet::Cylinder(Word::parse(2, s).unwrap())
    }

    fn parity_tactic(coding: Coding) -> TwoTactic {
        let c = Space::cantor(2);
        let sigma = Arc::new(DigitStrategy::new(c.clone(), Rule::LengthParity));
        TwoTactic::new(&c, cantor_oracle(&c).unwrap(), sigma, coding).unwrap()
    }

    #[test]
    fn worked_trace() {
        let t = parity_tactic(Coding::Triple);
        assert_eq!(t.respond(None, &cyl("")).unwrap(), cyl("01"));
        let state = t.round(Some(&cyl("")), &cyl("010")).unwrap();
        assert_eq!(state.past.codes, vec![cyl("0")]);
        assert_eq!(state.past.answers, vec![cyl("01")]);
        assert_eq!(state.code, cyl("01010"));
        assert_eq!(
            t.respond(Some(&cyl("")), &cyl("010")).unwrap(),
            cyl("010100")
        );
        assert!(t
            .reconstruct_entwined(None, &cyl(""))
            .unwrap()
            .codes
            .is_empty());
        assert!(t.respond(Some(&cyl("")), &cyl("1")).is_err());
    }

    #[test]
    fn sequence_first_round() {
        let t = parity_tactic(Coding::Sequence);
        let state = t.round(None, &cyl("")).unwrap();
        assert_eq!(state.index, Count::zero());
        assert_eq!(state.code, cyl("0"));
    }

    #[test]
    fn plays_certify() {
        for coding in [Coding::Triple, Coding::Sequence] {
            let t = parity_tactic(coding);
            for seed in 0..5 {
                let trace = run_play(
                    t.space(),
                    &mut RandomSplitter::new(seed),
                    Defender::Tactic(&t),
                    12,
                )
                .unwrap();
                assert!(trace.is_legal(), "{:?}", trace.failure);
                assert!(certify(&trace).unwrap().certified_for_ii());
            }
        }
    }

    #[test]
    fn finite_one_tactics() {
        let s = Space::preset("sierpinski").unwrap();
        assert_eq!(
            tactic_isolated(&s)
                .respond(None, &BasicSet::Open(2))
                .unwrap(),
            BasicSet::Open(1)
        );
        assert!(tactic_isolated(&Space::cantor(2))
            .respond(None, &cyl("0"))
            .is_err());
        let i = Space::preset("indiscrete:2").unwrap();
        let w = BasicSet::Open(1);
        let witness = atom_witness(&i, &w).unwrap();
        assert_eq!(witness.family, vec![w.clone()]);
        let t = tactic_bounded_cellularity(&i, &w, &witness).unwrap();
        let trace = run_play(&i, &mut Scripted::new(vec![]), Defender::Tactic(&t), 4).unwrap();
        assert!(certify(&trace).unwrap().certified_for_ii());
        let d = Space::preset("discrete:3").unwrap();
        let top = BasicSet::Open(d.finite_space().unwrap().opens().len() - 1);
        let mut lying = atom_witness(&d, &top).unwrap();
        lying.family.pop();
        lying.size = 2;
        assert!(tactic_bounded_cellularity(&d, &top, &lying).is_err());
    }

    #[test]
    fn dispatch_branches() {
        let fac = |s: &Space| -> Result<Arc<dyn Strategy>, MoveError> {
            Ok(Arc::new(DigitStrategy::new(s.clone(), Rule::LengthParity)))
        };
        let c = Space::cantor(2);
        assert_eq!(
            dispatch(&c, &fac).unwrap().branch_for(&cyl("01")).unwrap(),
            Branch::Compiled
        );
        let s = Space::preset("sierpinski").unwrap();
        assert_eq!(
            dispatch(&s, &fac)
                .unwrap()
                .branch_for(&BasicSet::Open(2))
                .unwrap(),
            Branch::Isolated
        );
        let sum = Space::preset("sum:sierpinski,cantor:2").unwrap();
        let d = dispatch(&sum, &fac).unwrap();
        for seed in 0..5 {
            let trace = run_play(
                &sum,
                &mut RandomSplitter::new(seed),
                Defender::Tactic(&d),
                10,
            )
            .unwrap();
            assert!(trace.is_legal(), "{:?}", trace.failure);
            assert!(certify(&trace).unwrap().certified_for_ii());
        }
    }
}
