mod common;

use std::cmp::Ordering;
use std::sync::Arc;

use bmt_core::compiler::{cantor_oracle, compile_2tactic, tactic_isolated};
use bmt_core::count::Count;
use bmt_core::family::{
    build_table, is_proper_subset, level_chain, rank_decompose, reduce_rank, Mask,
};
use bmt_core::game::{
    certify, combine_tactics, run_play, Actor, Defender, DigitStrategy, KTactic, RandomSplitter,
    Rule,
};
use bmt_core::ordinal::Ordinal;
use bmt_core::space::{BasicSet, Space};
use bmt_core::structure::{
    sequence_from_index, sequence_index, triple_from_index, triple_index, CantorOracle,
    CodingScheme, IntervalsOracle, MockTable, TableOracle,
};
use bmt_core::word::Word;
use common::{brute_cellularity, random_family, random_subfamily, random_topology, sup_levels};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn binary_word() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, 0..7)
}

fn cyl(digits: &[u8]) -> BasicSet {
    BasicSet::cylinder(2, digits)
}

fn is_prefix(p: &[u8], w: &[u8]) -> bool {
    p.len() <= w.len() && &w[..p.len()] == p
}

fn all_words(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for len in 1..=max_len {
        for v in 0..1u32 << len {
            out.push((0..len).rev().map(|i| (v >> i & 1) as u8).collect());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn levels_match_sup_recursion(seed in any::<u64>()) {
        let family = random_family(&mut rng(seed), 10, 8);
        prop_assert_eq!(rank_decompose(&family).levels(), sup_levels(&family));
    }

    #[test]
    fn subfamily_levels_do_not_grow(seed in any::<u64>()) {
        let mut r = rng(seed);
        let family = random_family(&mut r, 10, 8);
        let picks = random_subfamily(&mut r, &family);
        let whole = rank_decompose(&family);
        let part = rank_decompose(&family.subfamily(&picks));
        prop_assert!(part.rank() <= whole.rank());
        for (pos, &i) in picks.iter().enumerate() {
            prop_assert!(part.level(pos) <= whole.level(i));
        }
    }

    #[test]
    fn reduction_refines(seed in any::<u64>()) {
        let mut r = rng(seed);
        let family = random_family(&mut r, 10, 8);
        let mut perm: Vec<usize> = (0..rank_decompose(&family).depth()).collect();
        perm.shuffle(&mut r);
        let reduced = reduce_rank(&family, &perm).unwrap();
        prop_assert!(family.is_refined_by(&reduced));
        prop_assert!(rank_decompose(&reduced).rank() <= rank_decompose(&family).rank());
    }

    #[test]
    fn level_chains_climb_strictly(seed in any::<u64>()) {
        let family = random_family(&mut rng(seed), 10, 8);
        let decomp = rank_decompose(&family);
        for member in 0..family.len() {
            let top = decomp.level_index(member);
            let targets: Vec<usize> = (0..=top).rev().collect();
            let chain = level_chain(&family, &decomp, member, &targets).unwrap();
            prop_assert_eq!(chain.len(), targets.len());
            for (pair, &t) in chain.windows(2).zip(&targets[1..]) {
                prop_assert!(is_proper_subset(family.sets()[pair[0]], family.sets()[pair[1]]));
                prop_assert_eq!(decomp.level_index(pair[1]), t);
            }
        }
    }

    #[test]
    fn table_cells_are_members(seed in any::<u64>()) {
        let family = random_family(&mut rng(seed), 10, 8);
        let decomp = rank_decompose(&family);
        let table = build_table(&decomp, None).unwrap();
        prop_assert_eq!(table.cell_count(), family.len());
        prop_assert_eq!(table.shape().0, decomp.depth());
        for m in 0..family.len() {
            prop_assert_eq!(table.at(table.rank_of(m), table.order_of(m)), Some(m));
            prop_assert_eq!(table.rank_of(m), decomp.level_index(m));
        }
    }

    #[test]
    fn topology_brute_force(seed in any::<u64>(), points in 1u32..6) {
        let space = random_topology(&mut rng(seed), points);
        prop_assume!(space.opens().len() <= 13);
        for &u in space.nonempty_opens() {
            let isolated = space.isolated_points(u).unwrap();
            for x in 0..points {
                let brute = u >> x & 1 == 1 && space.opens().iter().any(|&o| o & u == 1 << x);
                prop_assert_eq!(isolated >> x & 1 == 1, brute, "point {} in {:b}", x, u);
            }
            let cell = space.cellularity(u).unwrap();
            prop_assert_eq!(cell.max_size, brute_cellularity(&space, u));
            prop_assert!(space.is_maximal_cellular(u, &cell.maximal_extension));
        }
        let partition = space.stabilized_cellular_partition();
        prop_assert!(space.is_maximal_cellular(space.full(), &partition));
        prop_assert!(partition.iter().all(|&a| space.has_constant_cellularity(a)));
    }

    #[test]
    fn cantor_well_order_is_total(a in binary_word(), b in binary_word(), c in binary_word()) {
        let space = Space::cantor(2);
        let (x, y, z) = (cyl(&a), cyl(&b), cyl(&c));
        let xy = space.well_order_cmp(&x, &y).unwrap();
        prop_assert_eq!(xy, space.well_order_cmp(&y, &x).unwrap().reverse());
        prop_assert_eq!(xy == Ordering::Equal, a == b);
        let yz = space.well_order_cmp(&y, &z).unwrap();
        if xy != Ordering::Greater && yz != Ordering::Greater {
            prop_assert_ne!(space.well_order_cmp(&x, &z).unwrap(), Ordering::Greater);
        }
        prop_assert_eq!(xy, (a.len(), &a).cmp(&(b.len(), &b)));
    }

    #[test]
    fn cylinder_algebra(a in binary_word(), b in binary_word()) {
        let space = Space::cantor(2);
        let (x, y) = (cyl(&a), cyl(&b));
        prop_assert_eq!(space.subset(&x, &y).unwrap(), is_prefix(&b, &a));
        let comparable = is_prefix(&a, &b) || is_prefix(&b, &a);
        prop_assert_eq!(space.disjoint(&x, &y).unwrap(), !comparable);
        let expected = comparable.then(|| if a.len() >= b.len() { x.clone() } else { y.clone() });
        prop_assert_eq!(space.meet(&x, &y).unwrap(), expected);
    }

    #[test]
    fn split_members_are_disjoint(b in binary_word(), n in 2usize..12) {
        let space = Space::cantor(2);
        let owner = cyl(&b);
        let parts: Vec<BasicSet> = (0..n).map(|i| space.split_member(&owner, &Count::from(i)).unwrap()).collect();
        for (i, p) in parts.iter().enumerate() {
            prop_assert!(space.subset(p, &owner).unwrap());
            prop_assert_eq!(space.locate_in_split(&owner, p).unwrap(), Some(Count::from(i)));
            for q in &parts[i + 1..] {
                prop_assert!(space.disjoint(p, q).unwrap());
            }
        }
    }

    #[test]
    fn min_basic_is_least(members in prop::collection::vec(binary_word(), 1..4)) {
        let space = Space::cantor(2);
        let sets: Vec<BasicSet> = members.iter().map(|w| cyl(w)).collect();
        let got = space.min_basic(&sets).unwrap();
        let deepest = members.iter().map(Vec::len).max().unwrap();
        let covered = |w: &Vec<u8>| {
            let pad = deepest.saturating_sub(w.len());
            (0..1u32 << pad).all(|v| {
                let mut e = w.clone();
                e.extend((0..pad).rev().map(|i| (v >> i & 1) as u8));
                members.iter().any(|m| is_prefix(m, &e))
            })
        };
        let mut candidates = all_words(deepest);
        candidates.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let least = candidates.into_iter().find(covered).unwrap();
        prop_assert_eq!(got, cyl(&least));
    }

    #[test]
    fn triple_round_trip(j in 0u64..1 << 20, k in 0u64..1 << 20, l in 0u64..1 << 20) {
        let (j, k, l) = (Count::from(j), Count::from(k), Count::from(l));
        let n = triple_index(&j, &k, &l);
        prop_assert_eq!(triple_from_index(&n).unwrap(), (j, k, l));
    }

    #[test]
    fn sequence_round_trip(pairs in prop::collection::vec((0u64..1000, 0u64..1000), 1..5)) {
        let pairs: Vec<(Count, Count)> = pairs.into_iter().map(|(r, o)| (Count::from(r), Count::from(o))).collect();
        let n = sequence_index(&pairs);
        prop_assert_eq!(sequence_from_index(&n).unwrap(), pairs);
    }

    #[test]
    fn certification_is_monotone_in_depth(seed in any::<u64>(), depth in 1usize..12) {
        let space = Space::cantor(2);
        let sigma = Arc::new(DigitStrategy::new(space.clone(), Rule::LengthParity));
        let t = compile_2tactic(&space, cantor_oracle(&space).unwrap(), sigma).unwrap();
        let short = run_play(&space, &mut RandomSplitter::new(seed), Defender::Tactic(&t), depth).unwrap();
        let long = run_play(&space, &mut RandomSplitter::new(seed), Defender::Tactic(&t), depth + 4).unwrap();
        prop_assert_eq!(&long.moves[..short.moves.len()], &short.moves[..]);
        if certify(&short).unwrap().certified_for_ii() {
            prop_assert!(certify(&long).unwrap().certified_for_ii());
        }
    }

    #[test]
    fn combiner_routes_to_the_meeting_piece(seed in any::<u64>()) {
        let space = Space::preset("sum:sierpinski,cantor:2").unwrap();
        let Space::Sum(parts) = &space else { unreachable!() };
        let sigma = Arc::new(DigitStrategy::new(parts[1].clone(), Rule::LengthParity));
        let compiled = compile_2tactic(&parts[1], cantor_oracle(&parts[1]).unwrap(), sigma).unwrap();
        let per_piece: Vec<Arc<dyn KTactic>> = vec![Arc::new(tactic_isolated(&parts[0])), Arc::new(compiled)];
        let pieces = space.top_basics();
        let combined = combine_tactics(&space, pieces.clone(), per_piece).unwrap();
        let trace = run_play(&space, &mut RandomSplitter::new(seed), Defender::Tactic(&combined), 10).unwrap();
        prop_assert!(trace.is_legal());
        prop_assert!(certify(&trace).unwrap().certified_for_ii());
        let u0 = trace.moves_of(Actor::I).next().unwrap();
        let chosen = combined.piece_for(u0).unwrap();
        prop_assert!(!space.disjoint(&pieces[chosen], u0).unwrap());
        prop_assert!(pieces.iter().enumerate().all(|(i, p)| i == chosen || space.disjoint(p, u0).unwrap()));
    }

    #[test]
    fn mock_strict_subsets_sit_deeper(seed in any::<u64>()) {
        let family = random_family(&mut rng(seed), 10, 8);
        let table = MockTable::from_family(&family, &vec![true; family.len()]);
        for a in table.members() {
            for b in table.members() {
                if table.is_subset(a, b) && a != b {
                    prop_assert!(table.rank(&a).unwrap() > table.rank(&b).unwrap());
                }
            }
        }
    }
}

#[test]
fn codes_are_pairwise_disjoint() {
    let space = Space::cantor(2);
    for owner in [cyl(&[]), cyl(&[1, 0, 1])] {
        let scheme = CodingScheme::new(&space, owner.clone()).unwrap();
        let codes: Vec<BasicSet> = (0..=64u64)
            .map(|n| scheme.code(&Count::from(n)).unwrap())
            .collect();
        for (i, c) in codes.iter().enumerate() {
            assert!(space.subset(c, &owner).unwrap());
            assert_eq!(scheme.locate(c).unwrap(), (Count::from(i), c.clone()));
            for d in &codes[i + 1..] {
                assert!(space.disjoint(c, d).unwrap());
            }
        }
    }
}

#[test]
fn curated_strict_subsets_sit_deeper() {
    for oracle in [
        IntervalsOracle::new(),
        IntervalsOracle::refining_subfamily(),
    ] {
        let members = oracle.truncation(8, 3);
        for &a in &members {
            for &b in &members {
                if IntervalsOracle::strict_subset(a, b) {
                    assert!(oracle.level(a) > oracle.level(b), "{a} ⊊ {b}");
                }
            }
        }
    }
    let cantor = CantorOracle::new(2);
    for w in all_words(4) {
        for v in all_words(4) {
            if is_prefix(&v, &w) && v != w {
                let (a, b) = (cyl(&w), cyl(&v));
                assert!(cantor.rank(&a).unwrap() > cantor.rank(&b).unwrap());
            }
        }
    }
    let _ = (Ordinal::zero(), Word::empty(2), 0 as Mask);
}
