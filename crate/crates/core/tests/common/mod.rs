//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use bmt_core::count::Count;
use bmt_core::family::{Mask, SetFamily};
use bmt_core::ordinal::Ordinal;
use bmt_core::space::BasicSet;
use bmt_core::topology::{generate_topology, FiniteSpace};
use bmt_core::word::Word;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Up to `max_sets` distinct nonempty subsets of `points` points.
pub fn random_family(rng: &mut ChaCha8Rng, max_sets: usize, max_points: u32) -> SetFamily {
    let points = rng.gen_range(1..=max_points);
    let want = rng.gen_range(1..=max_sets);
    let mut sets: Vec<Mask> = Vec::new();
    for _ in 0..want * 4 {
        if sets.len() == want {
            break;
        }
        let m: Mask = rng.gen_range(1..(1u32 << points));
        if !sets.contains(&m) {
            sets.push(m);
        }
    }
    SetFamily::new(points, sets).expect("valid random family")
}

/// `level(A) = sup{level(B) + 1 : A ⊊ B}`, by memoized recursion.
pub fn sup_levels(family: &SetFamily) -> Vec<Ordinal> {
    fn go(i: usize, sets: &[Mask], memo: &mut HashMap<usize, Ordinal>) -> Ordinal {
        if let Some(l) = memo.get(&i) {
            return l.clone();
        }
        let a = sets[i];
        let above: Vec<Ordinal> = (0..sets.len())
            .filter(|&j| sets[j] != a && sets[j] & a == a)
            .map(|j| go(j, sets, memo).succ())
            .collect();
        let l = Ordinal::sup(above.iter());
        memo.insert(i, l.clone());
        l
    }
    let mut memo = HashMap::new();
    (0..family.len())
        .map(|i| go(i, family.sets(), &mut memo))
        .collect()
}

/// `sup{level + 1}` over all members.
pub fn sup_rank(levels: &[Ordinal]) -> Ordinal {
    let succ: Vec<Ordinal> = levels.iter().map(Ordinal::succ).collect();
    Ordinal::sup(succ.iter())
}

pub fn random_subfamily(rng: &mut ChaCha8Rng, family: &SetFamily) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..family.len()).collect();
    idx.shuffle(rng);
    let keep = rng.gen_range(1..=family.len());
    let mut out = idx[..keep].to_vec();
    out.sort_unstable();
    out
}

pub fn random_topology(rng: &mut ChaCha8Rng, points: u32) -> FiniteSpace {
    let count = rng.gen_range(0..=points as usize + 1);
    let subbase: Vec<Mask> = (0..count)
        .map(|_| rng.gen_range(1..(1u32 << points)))
        .collect();
    generate_topology(points, &subbase).expect("small topology")
}

/// Largest pairwise disjoint family of nonempty opens inside `u`, by trying
/// every subfamily.
pub fn brute_cellularity(space: &FiniteSpace, u: Mask) -> usize {
    let inside: Vec<Mask> = space
        .opens()
        .iter()
        .copied()
        .filter(|&o| o != 0 && o & u == o)
        .collect();
    assert!(inside.len() <= 16, "brute force is for small spaces");
    let mut best = 0;
    for pick in 0u32..(1 << inside.len()) {
        let chosen: Vec<Mask> = (0..inside.len())
            .filter(|i| pick >> i & 1 == 1)
            .map(|i| inside[i])
            .collect();
        let disjoint = chosen
            .iter()
            .enumerate()
            .all(|(i, a)| chosen[i + 1..].iter().all(|b| a & b == 0));
        if disjoint {
            best = best.max(chosen.len());
        }
    }
    best
}

/// The strategies under test, recomputed here without the library rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sigma {
    Parity,
    RoundParity,
    DigitSum,
    Append(u8),
}

impl Sigma {
    pub fn descriptor(&self) -> String {
        match self {
            Sigma::Parity => "parity".into(),
            Sigma::RoundParity => "round-parity".into(),
            Sigma::DigitSum => "digit-sum".into(),
            Sigma::Append(d) => format!("append-{d}"),
        }
    }

    pub fn answer(&self, play: &[Word]) -> Word {
        let cur = play.last().expect("nonempty play");
        let digit = match self {
            Sigma::Parity => {
                (play
                    .iter()
                    .map(|w| w.len().residue_u64(2).unwrap())
                    .sum::<u64>()
                    % 2) as u8
            }
            Sigma::RoundParity => ((play.len() / 2) % 2) as u8,
            Sigma::DigitSum => {
                (play
                    .iter()
                    .map(|w| w.last_digit().unwrap_or(0) as u64)
                    .sum::<u64>()
                    % 2) as u8
            }
            Sigma::Append(d) => *d,
        };
        cur.appended(digit)
    }
}

pub fn word(b: &BasicSet) -> Word {
    b.as_word().expect("cylinder move").clone()
}

/// `w·1^n·0`.
pub fn code_in(owner: &Word, n: &Count) -> Word {
    let mut w = owner.clone();
    w.push_run(1, n);
    w.push(0);
    w
}

/// Forward, stateful simulation of the entwined play on the binary Cantor
/// space, where the anchor of a cylinder is the cylinder itself.
pub struct ForwardSim {
    pub sigma: Sigma,
    pub sequence: bool,
    pub us: Vec<Word>,
    pub codes: Vec<Word>,
    pub answers: Vec<Word>,
    pub indices: Vec<Count>,
    coords: Vec<(Count, Count)>,
}

impl ForwardSim {
    pub fn new(sigma: Sigma, sequence: bool) -> Self {
        ForwardSim {
            sigma,
            sequence,
            us: Vec::new(),
            codes: Vec::new(),
            answers: Vec::new(),
            indices: Vec::new(),
            coords: Vec::new(),
        }
    }

    fn pair(x: &Count, y: &Count) -> Count {
        if let (Some(a), Some(b)) = (x.to_u64(), y.to_u64()) {
            if a + b < 1 << 20 {
                let s = a + b;
                return Count::from_u64(s * (s + 1) / 2 + b);
            }
        }
        Count::pair(x, y)
    }

    /// Feed I's move; returns II's answer.
    pub fn step(&mut self, u: &Word) -> Word {
        let m = self.codes.len();
        let n = if self.sequence {
            self.coords.push((u.len().clone(), u.value()));
            let mut fold = Self::pair(&self.coords[0].0, &self.coords[0].1);
            for (r, o) in &self.coords[1..] {
                fold = Self::pair(&fold, &Self::pair(r, o));
            }
            Self::pair(&Count::from(m), &fold)
        } else if m == 0 {
            Count::zero()
        } else {
            let k = self.us[m - 1].len().clone();
            Self::pair(&Self::pair(&Count::from(m), &k), &Count::zero())
        };
        let code = code_in(u, &n);
        self.us.push(u.clone());
        self.codes.push(code.clone());
        self.indices.push(n);
        let mut play: Vec<Word> = Vec::new();
        for (o, v) in self.codes.iter().zip(&self.answers) {
            play.push(o.clone());
            play.push(v.clone());
        }
        play.push(code);
        let v = self.sigma.answer(&play);
        self.answers.push(v.clone());
        v
    }
}
