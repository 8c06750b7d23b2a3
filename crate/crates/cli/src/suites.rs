//! Self-checks runnable from an installed binary. Each suite compares the
//! library against a small recomputation or a known closed form.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::Result;
use bmt_core::compiler::{
    cantor_oracle, compile_2tactic, compile_2tactic_seqcode, dispatch, tactic_isolated, Branch,
};
use bmt_core::family::{
    build_table, extract_noetherian, rank_decompose, reduce_rank, staircase_family, Mask, SetFamily,
};
use bmt_core::game::{
    certify, combine_tactics, run_play, Actor, Adversary, DeepDiver, Defender, DigitStrategy,
    KTactic, LeftCrawler, MoveError, RandomSplitter, Rule, Strategy,
};
use bmt_core::ordinal::Ordinal;
use bmt_core::space::Space;
use bmt_core::structure::{
    verify_star, IntervalMember, IntervalsOracle, MockTable, MockTableJson, TableOracle, Witness,
};
use bmt_core::topology::generate_topology;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

type Suite = (&'static str, fn(u64) -> Check);

const SUITES: [Suite; 11] = [
    ("rank", worked_example),
    ("tables", staircase),
    ("intervals", intervals),
    ("oracle", oracle),
    ("monotone", monotone),
    ("refine", refine),
    ("triple", |seed| compiled(seed, false)),
    ("seq", |seed| compiled(seed, true)),
    ("finite", finite),
    ("combiner", combiner),
    ("star", star),
];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn run(which: &str, seed: u64) -> Result<(String, bool)> {
    let picked: Vec<_> = SUITES
        .iter()
        .filter(|(name, _)| which == "all" || *name == which)
        .collect();
    if picked.is_empty() {
        let names: Vec<&str> = SUITES.iter().map(|s| s.0).collect();
        return Err(crate::usage(format!(
            "unknown suite {which:?}; choose all or one of {}",
            names.join(", ")
        )));
    }
    let mut out = String::new();
    let mut failed = 0;
    for (name, suite) in picked {
        match suite(seed) {
            Ok(detail) => writeln!(out, "suite {name}: PASS {detail}")?,
            Err(why) => {
                failed += 1;
                writeln!(out, "suite {name}: FAIL {why}")?;
            }
        }
    }
    writeln!(
        out,
        "{}",
        if failed == 0 {
            "verify: PASS".to_string()
        } else {
            format!("verify: FAIL ({failed})")
        }
    )?;
    Ok((out, failed == 0))
}

fn random_family(rng: &mut ChaCha8Rng) -> SetFamily {
    let points = rng.gen_range(1..=8u32);
    let want = rng.gen_range(1..=10usize);
    let mut sets: Vec<Mask> = Vec::new();
    for _ in 0..want * 4 {
        let m = rng.gen_range(1..1u32 << points);
        if sets.len() < want && !sets.contains(&m) {
            sets.push(m);
        }
    }
    SetFamily::new(points, sets).expect("distinct nonempty sets")
}

fn sup_levels(family: &SetFamily) -> Vec<Ordinal> {
    fn go(i: usize, sets: &[Mask], memo: &mut HashMap<usize, Ordinal>) -> Ordinal {
        if let Some(l) = memo.get(&i) {
            return l.clone();
        }
        let above: Vec<Ordinal> = (0..sets.len())
            .filter(|&j| sets[j] != sets[i] && sets[j] & sets[i] == sets[i])
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

fn worked_example(_: u64) -> Check {
    let family =
        SetFamily::from_points(4, &[vec![0, 1, 2], vec![1, 2, 3], vec![0, 1], vec![1]]).unwrap();
    let levels = rank_decompose(&family).levels();
    let want: Vec<Ordinal> = [0, 0, 1, 2].into_iter().map(Ordinal::natural).collect();
    ensure(levels == want, || format!("levels {levels:?}"))?;
    Ok("levels (0,0,1,2)".into())
}

fn staircase(_: u64) -> Check {
    for kappa in [4u32, 8, 16] {
        let family = staircase_family(kappa).unwrap();
        let table = build_table(&rank_decompose(&family), None).map_err(|e| e.to_string())?;
        ensure(table.shape() == (kappa as usize, 2), || {
            format!("κ={kappa}: shape {:?}", table.shape())
        })?;
        let singles: Vec<usize> = (kappa as usize - 1..2 * kappa as usize - 1).collect();
        let sub = build_table(&rank_decompose(&family.subfamily(&singles)), None)
            .map_err(|e| e.to_string())?;
        ensure(sub.shape() == (1, kappa as usize), || {
            format!("κ={kappa}: singletons {:?}", sub.shape())
        })?;
    }
    Ok("κ in 4, 8, 16".into())
}

fn intervals(_: u64) -> Check {
    let full = IntervalsOracle::new();
    let refined = IntervalsOracle::refining_subfamily();
    ensure(
        full.family_rank() == Ordinal::make(&[(1, 2)]).unwrap(),
        || format!("rank {}", full.family_rank()),
    )?;
    ensure(
        full.rank(&IntervalMember::Inner(0)).ok() == Some(Ordinal::omega()),
        || "level of the first inner".into(),
    )?;
    ensure(refined.family_rank() == Ordinal::omega(), || {
        format!("refined rank {}", refined.family_rank())
    })?;
    Ok(format!(
        "rank {}, refined rank {}",
        full.family_rank(),
        refined.family_rank()
    ))
}

fn oracle(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..500 {
        let family = random_family(&mut rng);
        ensure(
            rank_decompose(&family).levels() == sup_levels(&family),
            || format!("family {trial}: {family}"),
        )?;
    }
    Ok("500 families".into())
}

fn monotone(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..500 {
        let family = random_family(&mut rng);
        let mut picks: Vec<usize> = (0..family.len()).filter(|_| rng.gen_bool(0.6)).collect();
        if picks.is_empty() {
            picks.push(0);
        }
        let whole = rank_decompose(&family);
        let part = rank_decompose(&family.subfamily(&picks));
        let grew = picks
            .iter()
            .enumerate()
            .any(|(p, &i)| part.level(p) > whole.level(i));
        ensure(!grew && part.rank() <= whole.rank(), || {
            format!("pair {trial}: {family}")
        })?;
    }
    Ok("500 pairs".into())
}

fn refine(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..300 {
        let family = random_family(&mut rng);
        let mut perm: Vec<usize> = (0..rank_decompose(&family).depth()).collect();
        perm.shuffle(&mut rng);
        let reduced = reduce_rank(&family, &perm).map_err(|e| e.to_string())?;
        ensure(family.is_refined_by(&reduced), || {
            format!("reduce {trial}: {family}")
        })?;
        ensure(family.is_refined_by(&extract_noetherian(&family)), || {
            format!("extract {trial}: {family}")
        })?;
    }
    Ok("300 families".into())
}

fn adversaries(seed: u64, count: u64) -> Vec<Box<dyn Adversary>> {
    let mut out: Vec<Box<dyn Adversary>> = (0..count)
        .map(|s| Box::new(RandomSplitter::new(seed.wrapping_add(s))) as Box<dyn Adversary>)
        .collect();
    out.push(Box::new(DeepDiver));
    out.push(Box::new(LeftCrawler));
    out
}

fn compiled(seed: u64, sequence: bool) -> Check {
    let space = Space::cantor(2);
    let mut plays = 0;
    for rule in [Rule::LengthParity, Rule::RoundParity, Rule::LastDigitSum] {
        let sigma: Arc<dyn Strategy> = Arc::new(DigitStrategy::new(space.clone(), rule));
        let oracle = cantor_oracle(&space).map_err(|e| e.to_string())?;
        let t = if sequence {
            compile_2tactic_seqcode(&space, oracle, sigma.clone())
        } else {
            compile_2tactic(&space, oracle, sigma.clone())
        }
        .map_err(|e| e.to_string())?;
        for mut adv in adversaries(seed, 20) {
            let trace = run_play(&space, adv.as_mut(), Defender::Tactic(&t), 24)
                .map_err(|e| e.to_string())?;
            let who = format!("{} vs {}", t.descriptor(), trace.adversary);
            ensure(trace.is_legal(), || format!("{who}: {:?}", trace.failure))?;
            ensure(
                certify(&trace)
                    .map(|r| r.certified_for_ii())
                    .unwrap_or(false),
                || format!("{who}: uncertified"),
            )?;
            // The final round must rebuild a σ-play whose answers σ itself gives.
            let us: Vec<_> = trace.moves_of(Actor::I).collect();
            let state = t.round(Some(us[22]), us[23]).map_err(|e| e.to_string())?;
            let play = state.past.play();
            for m in 0..play.len() / 2 {
                let v = sigma.respond(&play[..=2 * m]).map_err(|e| e.to_string())?;
                ensure(v == play[2 * m + 1], || {
                    format!("{who}: entwined answer {m}")
                })?;
            }
            plays += 1;
        }
    }
    Ok(format!("{plays} plays at depth 24"))
}

fn parity(space: &Space) -> Result<Arc<dyn Strategy>, MoveError> {
    Ok(Arc::new(DigitStrategy::new(
        space.clone(),
        Rule::LengthParity,
    )))
}

fn finite(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..20 {
        let points = rng.gen_range(1..=5u32);
        let subbase: Vec<Mask> = (0..rng.gen_range(0..=points))
            .map(|_| rng.gen_range(1..1u32 << points))
            .collect();
        let space = Space::finite(generate_topology(points, &subbase).map_err(|e| e.to_string())?);
        let d = dispatch(&space, &parity).map_err(|e| e.to_string())?;
        for mut adv in adversaries(seed, 3) {
            let trace = run_play(&space, adv.as_mut(), Defender::Tactic(&d), 16)
                .map_err(|e| e.to_string())?;
            ensure(trace.is_legal(), || {
                format!("space {s}: {:?}", trace.failure)
            })?;
            let branches_ok = trace.moves_of(Actor::I).all(|u| {
                d.branch_for(u)
                    .map(|b| b != Branch::Compiled)
                    .unwrap_or(false)
            });
            ensure(branches_ok, || format!("space {s}: compiled branch"))?;
            ensure(
                certify(&trace)
                    .map(|r| r.certified_for_ii())
                    .unwrap_or(false),
                || format!("space {s}: uncertified"),
            )?;
        }
    }
    Ok("20 spaces".into())
}

fn combiner(seed: u64) -> Check {
    let space = Space::preset("sum:sierpinski,cantor:2").unwrap();
    let Space::Sum(parts) = &space else {
        unreachable!()
    };
    let compiled = compile_2tactic(
        &parts[1],
        cantor_oracle(&parts[1]).unwrap(),
        parity(&parts[1]).unwrap(),
    )
    .map_err(|e| e.to_string())?;
    let per_piece: Vec<Arc<dyn KTactic>> =
        vec![Arc::new(tactic_isolated(&parts[0])), Arc::new(compiled)];
    let pieces = space.top_basics();
    let combined = combine_tactics(&space, pieces.clone(), per_piece).map_err(|e| e.to_string())?;
    for s in 0..50 {
        let mut adv = RandomSplitter::new(seed.wrapping_add(s));
        let trace = run_play(&space, &mut adv, Defender::Tactic(&combined), 16)
            .map_err(|e| e.to_string())?;
        ensure(
            certify(&trace)
                .map(|r| r.certified_for_ii())
                .unwrap_or(false),
            || format!("seed {s}: uncertified"),
        )?;
        let chosen = combined
            .piece_for(&trace.moves[0])
            .map_err(|e| e.to_string())?;
        ensure(
            !space
                .disjoint(&pieces[chosen], &trace.moves[0])
                .unwrap_or(true),
            || format!("seed {s}: wrong piece"),
        )?;
    }
    Ok("50 plays".into())
}

fn star(seed: u64) -> Check {
    let json: MockTableJson = serde_json::from_str(
        r#"{"rows": [["P","Q"],["R"]], "subset": [["R","Q"]], "pg": ["P","Q","R"]}"#,
    )
    .unwrap();
    let mut tables = vec![MockTable::from_json(&json).map_err(|e| e.to_string())?];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50 {
        let family = random_family(&mut rng);
        let pg: Vec<bool> = (0..family.len()).map(|_| rng.gen_bool(0.7)).collect();
        tables.push(MockTable::from_family(&family, &pg));
    }
    for (t, table) in tables.iter().enumerate() {
        let witnesses: BTreeMap<String, Witness> = table
            .members()
            .map(|b| {
                (
                    table.name(b).to_string(),
                    Witness::Finite(table.upset(b).len()),
                )
            })
            .collect();
        let report = verify_star(table, &witnesses).map_err(|e| e.to_string())?;
        ensure(report.all(|m| !m.galvin || m.star), || {
            format!("table {t}: (*) without (★)")
        })?;
        ensure(report.all(|m| m.galvin_bound_implies_star), || {
            format!("table {t}: bound")
        })?;
    }
    Ok(format!("{} tables", tables.len()))
}
