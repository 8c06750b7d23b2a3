mod play;
mod suites;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use bmt_core::compiler::{cantor_oracle, compile_2tactic, compile_2tactic_seqcode, dispatch};
use bmt_core::family::{
    build_table, extract_noetherian, points_of, rank_decompose, reduce_rank, DecompositionJson,
    FamilyJson, Mask, SetFamily, TableJson,
};
use bmt_core::game::{move_violation, respond_sequence, KTactic};
use bmt_core::space::{BasicSet, Space};
use bmt_core::topology::FiniteSpace;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Rank tools, tactic compilation and game play for Noetherian families.
#[derive(Parser)]
#[command(name = "bmt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Layer decomposition and levels of a set family.
    Rank(FamilyArgs),
    /// The table whose rows are the layers.
    Table(FamilyArgs),
    /// Reduce the rank along a permutation of the levels.
    Reduce(ReduceArgs),
    /// Extract a Noetherian refinement in list order.
    Extract(FamilyArgs),
    /// Cellularity of the opens of a finite space.
    Cellularity(CellularityArgs),
    /// Compile a strategy into a 2-tactic and optionally feed it moves.
    Compile(CompileArgs),
    /// Play the game between two descriptors.
    Play(play::PlayArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// JSON file `{"universe": n, "sets": [[...], ...]}`.
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Comma separated image of each level, a permutation of 0..depth.
    #[arg(long, value_delimiter = ',', required = true)]
    map: Vec<usize>,
}

#[derive(Args)]
struct CellularityArgs {
    /// A finite space preset, e.g. `sierpinski` or `finite:space.json`.
    #[arg(long)]
    space: String,
    /// Restrict to one open, given by its points, e.g. `0,1`.
    #[arg(long)]
    open: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodingArg {
    Triple,
    Seq,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long, default_value = "cantor:2")]
    space: String,
    /// Full-history strategy descriptor.
    #[arg(long, default_value = "parity")]
    sigma: String,
    #[arg(long, value_enum, default_value = "triple")]
    coding: CodingArg,
    /// Player I moves separated by `;`, answered as consecutive rounds.
    #[arg(long)]
    moves: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// `all` or one of the suite names.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, env = "BMT_SEED", default_value_t = 0)]
    seed: u64,
}

/// Bad input from the command line: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow!(Usage(e.to_string()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_family(path: &Path) -> Result<SetFamily> {
    let json: FamilyJson = read_json(path)?;
    SetFamily::try_from(json).map_err(usage)
}

fn set(mask: Mask) -> String {
    let pts: Vec<String> = points_of(mask).iter().map(u32::to_string).collect();
    format!("{{{}}}", pts.join(","))
}

fn family_text(family: &SetFamily) -> String {
    let mut out = format!(
        "family of {} sets over {} points\n",
        family.len(),
        family.universe()
    );
    for &s in family.sets() {
        let _ = writeln!(out, "  {}", set(s));
    }
    out
}

fn rank(args: &FamilyArgs) -> Result<String> {
    let family = load_family(&args.family)?;
    let decomp = rank_decompose(&family);
    if args.json {
        return Ok(serde_json::to_string_pretty(&DecompositionJson::from(&decomp))? + "\n");
    }
    let mut out = String::new();
    for (i, layer) in decomp.layers().iter().enumerate() {
        let sets: Vec<String> = layer.iter().map(|&m| set(family.sets()[m])).collect();
        let _ = writeln!(out, "layer {i}: {}", sets.join(" "));
    }
    for (m, &s) in family.sets().iter().enumerate() {
        let _ = writeln!(out, "r({}) = {}", set(s), decomp.level(m));
    }
    let _ = writeln!(out, "rank {}", decomp.rank());
    Ok(out)
}

fn table(args: &FamilyArgs) -> Result<String> {
    let family = load_family(&args.family)?;
    let table = build_table(&rank_decompose(&family), None)?;
    if args.json {
        return Ok(serde_json::to_string_pretty(&TableJson::new(&family, &table))? + "\n");
    }
    let mut out = String::new();
    for (r, row) in table.rows().iter().enumerate() {
        let sets: Vec<String> = row.iter().map(|&m| set(family.sets()[m])).collect();
        let _ = writeln!(out, "row {r}: {}", sets.join(" "));
    }
    let (rows, width) = table.shape();
    let _ = writeln!(out, "shape {rows}x{width}");
    Ok(out)
}

fn emit_family(family: &SetFamily, json: bool) -> Result<String> {
    if json {
        Ok(serde_json::to_string(&FamilyJson::from(family))? + "\n")
    } else {
        Ok(family_text(family))
    }
}

fn cellularity(args: &CellularityArgs) -> Result<String> {
    let space = Space::preset(&args.space).map_err(usage)?;
    let finite: &FiniteSpace = space
        .finite_space()
        .ok_or_else(|| usage(format!("{} is not finite", args.space)))?;
    let opens: Vec<Mask> = match &args.open {
        None => finite.nonempty_opens().to_vec(),
        Some(text) => {
            let pts = text
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u32>()
                        .map_err(|_| usage(format!("bad point {p:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let mask = pts
                .iter()
                .fold(0, |m, &p| m | 1u32.checked_shl(p).unwrap_or(0));
            if !finite.is_open(mask) || mask == 0 {
                return Err(usage(format!("{} is not a nonempty open", set(mask))));
            }
            vec![mask]
        }
    };
    let mut out = String::new();
    for u in opens {
        let c = finite.cellularity(u)?;
        let isolated = finite.isolated_points(u)?;
        let witness: Vec<String> = c.witness.iter().map(|&m| set(m)).collect();
        let ext: Vec<String> = c.maximal_extension.iter().map(|&m| set(m)).collect();
        let _ = writeln!(
            out,
            "open {}: cellularity {} witness {} maximal {} isolated {}",
            set(u),
            c.max_size,
            witness.join(" "),
            ext.join(" "),
            set(isolated)
        );
    }
    let partition: Vec<String> = finite
        .stabilized_cellular_partition()
        .iter()
        .map(|&m| set(m))
        .collect();
    let _ = writeln!(out, "stabilized partition {}", partition.join(" "));
    Ok(out)
}

fn compile(args: &CompileArgs) -> Result<(String, bool)> {
    let space = Space::preset(&args.space).map_err(usage)?;
    let tactic: Box<dyn KTactic> = match space {
        Space::Cantor { .. } => {
            let sigma = play::strategy(&space, &args.sigma)?;
            let oracle = cantor_oracle(&space)?;
            Box::new(match args.coding {
                CodingArg::Triple => compile_2tactic(&space, oracle, sigma)?,
                CodingArg::Seq => compile_2tactic_seqcode(&space, oracle, sigma)?,
            })
        }
        _ => {
            let desc = args.sigma.clone();
            let d = dispatch(&space, &|s: &Space| {
                play::strategy(s, &desc)
                    .map_err(|e| bmt_core::game::MoveError::Descriptor(e.to_string()))
            })?;
            Box::new(d)
        }
    };
    let mut out = format!("TACTIC {}\n", tactic.descriptor());
    if let Some(moves) = &args.moves {
        let us: Vec<BasicSet> = moves
            .split(';')
            .map(|m| space.parse_basic(m))
            .collect::<Result<_, _>>()
            .map_err(usage)?;
        let mut printer = bmt_core::count::CountPrinter::naming();
        let mut healthy = true;
        let answers = respond_sequence(tactic.as_ref(), &us);
        for (round, (u, v)) in us.iter().zip(&answers).enumerate() {
            // answers are history-free, so refereeing happens here
            let last = round.checked_sub(1).and_then(|r| answers[r].as_ref().ok());
            let violation = move_violation(&space, last, u);
            let u = u.render(&mut printer);
            let v = match (&violation, v) {
                (Some(why), _) => Err(format!("illegal move by I: {why}")),
                (None, Ok(v)) => Ok(v.render(&mut printer)),
                (None, Err(e)) => Err(e.to_string()),
            };
            healthy &= v.is_ok();
            let v = v.unwrap_or_else(|e| format!("none ({e})"));
            for def in printer.take_definitions() {
                let _ = writeln!(out, "DEF {def}");
            }
            let _ = writeln!(out, "{round} I {u}\n{round} II {v}");
            if violation.is_some() {
                break;
            }
        }
        return Ok((out, healthy));
    }
    Ok((out, true))
}

fn run(cli: Cli) -> Result<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match cli.command {
        Command::Rank(a) => ok(rank(&a)?),
        Command::Table(a) => ok(table(&a)?),
        Command::Reduce(a) => {
            let family = load_family(&a.family.family)?;
            ok(emit_family(
                &reduce_rank(&family, &a.map).map_err(usage)?,
                a.family.json,
            )?)
        }
        Command::Extract(a) => ok(emit_family(
            &extract_noetherian(&load_family(&a.family)?),
            a.json,
        )?),
        Command::Cellularity(a) => ok(cellularity(&a)?),
        Command::Compile(a) => compile(&a),
        Command::Play(a) => play::run(&a),
        Command::Verify(a) => suites::run(&a.suite, a.seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, healthy)) => {
            print!("{out}");
            if healthy {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) if e.downcast_ref::<Usage>().is_some() => {
            eprintln!("error: {e}");
            eprintln!("run `bmt help` for usage");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
