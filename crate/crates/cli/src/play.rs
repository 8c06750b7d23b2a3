use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use bmt_core::compiler::{
    cantor_oracle, compile_2tactic, compile_2tactic_seqcode, dispatch, tactic_isolated,
};
use bmt_core::count::CountPrinter;
use bmt_core::game::{
    adversary_from_descriptor, certify, extend, format_trace, move_violation, run_play, Actor,
    Adversary, Defender, DigitStrategy, KTactic, MoveError, Strategy,
};
use bmt_core::space::{BasicSet, Space};
use clap::Args;

use crate::usage;

#[derive(Args)]
pub struct PlayArgs {
    #[arg(long, default_value = "cantor:2")]
    space: String,
    /// Player II: `compiled:<σ>`, `compiled-seq:<σ>`, `dispatch:<σ>`,
    /// `strategy:<σ>` or `isolated`.
    #[arg(long = "ii", default_value = "compiled:parity")]
    ii: String,
    /// Player I: `random[:seed]`, `deep-diver`, `left-crawler`, `append-<d>`.
    #[arg(long = "i", default_value = "random")]
    i: String,
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    /// Seed for randomized players without an explicit one.
    #[arg(long, env = "BMT_SEED")]
    seed: Option<u64>,
    /// Read Player I moves from standard input.
    #[arg(long, conflicts_with = "i")]
    interactive: bool,
    /// Also write the trace to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn strategy(space: &Space, desc: &str) -> Result<Arc<dyn Strategy>> {
    Ok(Arc::new(
        DigitStrategy::from_descriptor(space.clone(), desc).map_err(usage)?,
    ))
}

enum Player {
    Strategy(Arc<dyn Strategy>),
    Tactic(Box<dyn KTactic>),
}

fn player_ii(space: &Space, desc: &str) -> Result<Player> {
    let (head, sigma) = desc.split_once(':').unwrap_or((desc, ""));
    let compiled = |seq: bool| -> Result<Player> {
        let oracle = cantor_oracle(space).map_err(usage)?;
        let s = strategy(space, sigma)?;
        let t = if seq {
            compile_2tactic_seqcode(space, oracle, s)?
        } else {
            compile_2tactic(space, oracle, s)?
        };
        Ok(Player::Tactic(Box::new(t)))
    };
    match head {
        "compiled" => compiled(false),
        "compiled-seq" => compiled(true),
        "dispatch" => {
            strategy(space, sigma)?;
            let sigma = sigma.to_string();
            let factory = move |s: &Space| {
                DigitStrategy::from_descriptor(s.clone(), &sigma)
                    .map(|d| Arc::new(d) as Arc<dyn Strategy>)
            };
            Ok(Player::Tactic(Box::new(dispatch(space, &factory)?)))
        }
        "strategy" => Ok(Player::Strategy(strategy(space, sigma)?)),
        "isolated" if sigma.is_empty() => Ok(Player::Tactic(Box::new(tactic_isolated(space)))),
        _ => Err(usage(format!("unknown Player II descriptor {desc:?}"))),
    }
}

fn randomized(desc: &str) -> bool {
    matches!(desc, "random" | "random-splitter")
}

pub fn run(args: &PlayArgs) -> Result<(String, bool)> {
    let space = Space::preset(&args.space).map_err(usage)?;
    let ii = player_ii(&space, &args.ii)?;
    let mut adversary: Box<dyn Adversary> = if args.interactive {
        Box::new(Human::new(std::io::stdin().lock(), std::io::stdout()))
    } else {
        let seed = match args.seed {
            Some(s) => s,
            None if randomized(&args.i) => {
                return Err(usage(format!(
                    "{} needs a seed: use {0}:<n>, --seed or BMT_SEED",
                    args.i
                )))
            }
            None => 0,
        };
        adversary_from_descriptor(&args.i, seed).map_err(usage)?
    };
    let defender = match &ii {
        Player::Strategy(s) => Defender::Strategy(s.as_ref()),
        Player::Tactic(t) => Defender::Tactic(t.as_ref()),
    };
    let trace = run_play(&space, adversary.as_mut(), defender, args.depth as usize)?;
    let result = certify(&trace).ok();
    let text = format_trace(&trace, result.as_ref());
    if let Some(path) = &args.out {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    // Player I giving up is a finished game; a Player II failure is not.
    let healthy = trace.failure.as_ref().is_none_or(|f| f.actor == Actor::I);
    Ok((text, healthy))
}

/// Player I at the keyboard. Bad input is explained and asked for again.
pub struct Human<R, W> {
    input: R,
    output: W,
    printer: CountPrinter,
}

const HELP: &str =
    "enter a basic set inside Player II's last move: a literal such as [0110], [{1^40}0], \
I(3,5), #2 or 1:[01]; `+<digits>` extends Player II's last move; `quit` ends the game";

impl<R: BufRead, W: Write> Human<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Human {
            input,
            output,
            printer: CountPrinter::naming(),
        }
    }

    fn say(&mut self, text: &str) {
        let _ = writeln!(self.output, "{text}");
    }

    fn read(
        &mut self,
        space: &Space,
        last: Option<&BasicSet>,
        line: &str,
    ) -> Result<BasicSet, String> {
        let mv = match line.strip_prefix('+') {
            Some(digits) => {
                let last = last.ok_or("there is no earlier move to extend")?;
                if digits.is_empty() {
                    return Err("`+` needs at least one digit".into());
                }
                digits.chars().try_fold(last.clone(), |b, c| {
                    let d = c.to_digit(10).ok_or(format!("{c:?} is not a digit"))?;
                    extend(space, &b, d as u8).map_err(|e| e.to_string())
                })?
            }
            None => space.parse_basic(line).map_err(|e| e.to_string())?,
        };
        match move_violation(space, last, &mv) {
            Some(reason) => Err(reason),
            None => Ok(mv),
        }
    }
}

impl<R: BufRead, W: Write> Adversary for Human<R, W> {
    fn descriptor(&self) -> String {
        "human".into()
    }

    fn next_move(&mut self, space: &Space, history: &[BasicSet]) -> Result<BasicSet, MoveError> {
        let round = history.len() / 2;
        if let Some(v) = history.last() {
            let lit = v.render(&mut self.printer);
            let mut text = String::new();
            for def in self.printer.take_definitions() {
                let _ = writeln!(text, "DEF {def}");
            }
            let _ = write!(text, "{} II {lit}", round - 1);
            self.say(&text);
        } else {
            self.say(&format!("playing on {}; {HELP}", space.descriptor()));
        }
        loop {
            let _ = write!(self.output, "{round} I> ");
            let _ = self.output.flush();
            let mut line = String::new();
            match self.input.read_line(&mut line) {
                Ok(0) => return Err(MoveError::Precondition("input closed".into())),
                Ok(_) => {}
                Err(e) => return Err(MoveError::Precondition(format!("input: {e}"))),
            }
            let line = line.trim();
            match line {
                "" => continue,
                "help" | "?" => self.say(HELP),
                "quit" => return Err(MoveError::Precondition("Player I resigned".into())),
                _ => match self.read(space, history.last(), line) {
                    Ok(mv) => return Ok(mv),
                    Err(reason) => self.say(&format!("rejected: {reason}")),
                },
            }
        }
    }
}
