// Copyright 2026 The qpass Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpass::attack::AttackPlan;
use qpass::bounds::{standard_grid, verify_bounds, BoundsOptions};
use qpass::config::{parse_intercept, Overrides, RunConfig};
use qpass::fixture::Fixture;
use qpass::output::{in_dir, write_csv, write_json, DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV};
use qpass::{report, CliError};
use qpass_core::adversary::{authorize, AttackKind, MitmForward};
use qpass_core::analysis::{BoundCheckReport, OptimizerBudget};
use qpass_core::protocol::{enroll, Enrollment, Mode, ProtocolConfig, SessionHooks, SessionTranscript};
use qpass_core::qcore::RngStream;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "qpass", version, about = "Bell-pair quantum password authentication simulator")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Lock phase in radians.
    #[arg(long, global = true, conflicts_with = "xi")]
    delta: Option<f64>,
    /// Sets delta to acos(xi).
    #[arg(long, global = true)]
    xi: Option<f64>,
    /// Password blocks.
    #[arg(long = "N", visible_alias = "blocks", global = true)]
    blocks: Option<usize>,
    #[arg(long, global = true)]
    decoys: Option<usize>,
    #[arg(long, global = true)]
    mode: Option<ModeArg>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long = "out", env = OUTPUT_DIR_ENV, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Basic,
    Extended,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enroll a fresh password and card and save them as a fixture.
    Enroll {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Run honest sessions and write their transcripts.
    Run {
        #[arg(long)]
        sessions: Option<u64>,
        /// Continue from (and update) a saved enrollment.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Monte Carlo run of one adversary.
    Attack {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        trials: Option<u64>,
        /// off, random-zx, z, x, breidbart or angle:<radians>.
        #[arg(long)]
        intercept: Option<String>,
        /// What a man in the middle forwards: nothing or forged.
        #[arg(long)]
        forward: Option<String>,
        /// Comma-separated accumulation checkpoints.
        #[arg(long, value_delimiter = ',')]
        rounds: Option<Vec<usize>>,
    },
    /// Closed forms against the direct oracles and optimizers.
    VerifyBounds {
        /// Check only the configured (alpha, xi) instead of the 9x9 grid.
        #[arg(long)]
        point: bool,
        #[arg(long, default_value_t = 100)]
        forgeries: usize,
        #[arg(long, default_value_t = OptimizerBudget::default().starts)]
        starts: usize,
    },
    /// Headline numbers and detection curves.
    Report {
        #[arg(long)]
        trials: Option<u64>,
    },
}

struct Context {
    run: RunConfig,
    out: PathBuf,
}

impl Context {
    fn new(g: &Global, extra: Overrides) -> Result<Context, CliError> {
        let mut run = match &g.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        run.apply(&Overrides {
            blocks: g.blocks,
            decoys: g.decoys,
            alpha: g.alpha,
            delta: g.delta,
            xi: g.xi,
            mode: g.mode.map(|m| match m {
                ModeArg::Basic => Mode::Basic,
                ModeArg::Extended => Mode::Extended,
            }),
            seed: g.seed,
            output_dir: g.out.clone(),
            ..extra
        });
        let out = run.output_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        Ok(Context { run, out })
    }
}

#[derive(Serialize)]
struct Echo<'a, T: Serialize> {
    config: &'a RunConfig,
    protocol: &'a ProtocolConfig,
    #[serde(flatten)]
    body: T,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qpass: {e}");
            ExitCode::from(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    match cli.command {
        Command::Enroll { fixture } => cmd_enroll(Context::new(g, Overrides::default())?, &fixture),
        Command::Run { sessions, fixture } => {
            cmd_run(Context::new(g, Overrides { sessions, ..Default::default() })?, fixture.as_deref())
        }
        Command::Attack { kind, trials, intercept, forward, rounds } => {
            let kind = AttackKind::parse(&kind).ok_or_else(|| {
                let known: Vec<_> = AttackKind::ALL.iter().map(|k| k.name()).collect();
                CliError::Config(vec![format!("unknown attack `{kind}` (known: {})", known.join(", "))])
            })?;
            let intercept =
                intercept.map(|s| parse_intercept(&s)).transpose().map_err(|e| CliError::Config(vec![e]))?;
            let forward = forward.map(|s| parse_forward(&s)).transpose()?.flatten();
            let extra = Overrides { attack: Some(kind), trials, intercept, forward, rounds, ..Default::default() };
            cmd_attack(Context::new(g, extra)?)
        }
        Command::VerifyBounds { point, forgeries, starts } => {
            cmd_verify_bounds(Context::new(g, Overrides::default())?, point, forgeries, starts)
        }
        Command::Report { trials } => cmd_report(Context::new(g, Overrides { trials, ..Default::default() })?),
    }
}

/// `forged` keeps whatever forgery the config names, else the optimizer's.
fn parse_forward(s: &str) -> Result<Option<MitmForward>, CliError> {
    match s {
        "nothing" => Ok(Some(MitmForward::Nothing)),
        "forged" => Ok(None),
        _ => Err(CliError::Config(vec![format!("unknown forward `{s}` (nothing or forged)")])),
    }
}

fn cmd_enroll(ctx: Context, fixture: &Path) -> Result<(), CliError> {
    let seed = ctx.run.require_seed("enroll")?;
    let protocol = ctx.run.validate()?;
    let e = enroll(&protocol, &mut RngStream::new(seed, 0)).map_err(|e| CliError::Config(vec![e.to_string()]))?;
    let f = Fixture::from_enrollment(&e).expect("fresh enrollment is a product of pairs");
    f.save(fixture)?;
    println!("enrolled {} blocks into {}", protocol.blocks, fixture.display());
    Ok(())
}

#[derive(Serialize)]
struct Transcripts<'a> {
    accepted: usize,
    transcripts: &'a [SessionTranscript],
}

fn cmd_run(ctx: Context, fixture: Option<&Path>) -> Result<(), CliError> {
    let seed = ctx.run.require_seed("run")?;
    let mut protocol = ctx.run.validate()?;
    let mut e: Enrollment = match fixture {
        Some(path) => {
            let mut e = Fixture::load_enrollment(path)?;
            // Blocks and lock parameters are fixed at enrollment; session
            // settings come from the command line.
            let enrolled = e.config();
            let (a, b) = (enrolled.params, protocol.params);
            if enrolled.blocks != protocol.blocks
                || (a.alpha() - b.alpha()).abs() > 1e-12
                || (a.delta() - b.delta()).abs() > 1e-12
            {
                eprintln!("qpass: using the fixture's blocks and lock parameters");
            }
            protocol = ProtocolConfig { blocks: enrolled.blocks, params: enrolled.params, ..protocol };
            e.configure_sessions(protocol.decoys, protocol.decoy_error_budget);
            e
        }
        None => enroll(&protocol, &mut RngStream::new(seed, 0)).map_err(|e| CliError::Config(vec![e.to_string()]))?,
    };
    if protocol.mode == Mode::Extended && protocol.decoys == 0 {
        return Err(CliError::Config(vec!["extended mode needs protocol.decoys >= 1".into()]));
    }
    let first = e.last_pad_round().map_or(1, |r| r + 1);
    let mut rng = RngStream::new(seed, 1);
    let transcripts: Vec<SessionTranscript> = (0..ctx.run.sessions)
        .map(|i| e.run_session(protocol.mode, first + i, SessionHooks::default(), &mut rng))
        .collect();
    let accepted = transcripts.iter().filter(|t| t.accepted()).count();
    let path = in_dir(&ctx.out, "transcripts.json");
    write_json(
        &path,
        &Echo { config: &ctx.run, protocol: &protocol, body: Transcripts { accepted, transcripts: &transcripts } },
    )?;
    if let Some(fx) = fixture {
        let f = Fixture::from_enrollment(&e)
            .ok_or_else(|| CliError::BadFixture { path: fx.into(), reason: "card no longer restorable".into() })?;
        f.save(fx)?;
    }
    println!("{accepted}/{} sessions accepted; transcripts in {}", transcripts.len(), path.display());
    Ok(())
}

#[derive(Serialize)]
struct AttackOut<'a> {
    plan: &'a AttackPlan,
    result: &'a qpass::attack::AttackResult,
}

fn cmd_attack(ctx: Context) -> Result<(), CliError> {
    let seed = ctx.run.require_seed("attack")?;
    let protocol = ctx.run.validate()?;
    let section = ctx.run.attack.clone().expect("attack kind set by the command");
    authorize(section.kind, &[]).map_err(|e| CliError::Config(vec![e.to_string()]))?;
    let plan = AttackPlan::resolve(section.kind, &section.params, protocol.clone());
    let result = plan.execute(ctx.run.trials, seed);
    let stem = format!("attack_{}", section.kind.name());
    write_json(
        &in_dir(&ctx.out, &format!("{stem}.json")),
        &Echo { config: &ctx.run, protocol: &protocol, body: AttackOut { plan: &plan, result: &result } },
    )?;
    let rows = result.rows();
    write_csv(&in_dir(&ctx.out, &format!("{stem}.csv")), &rows)?;
    for r in &rows {
        let pred = r.predicted.map(|p| format!(" (predicted {p:.6})")).unwrap_or_default();
        println!("{:<26} {:.6} ± {:.6}{pred}", r.metric, r.estimate, r.std_error);
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundsOut<'a> {
    total: usize,
    failed: usize,
    rows: &'a [BoundCheckReport],
}

#[derive(Serialize)]
struct BoundsCsvRow<'a> {
    quantity: &'a str,
    alpha: f64,
    xi: f64,
    closed_form: f64,
    oracle: Option<f64>,
    optimizer: Option<f64>,
    discrepancy: f64,
    tolerance: f64,
    pass: bool,
}

fn cmd_verify_bounds(ctx: Context, point: bool, forgeries: usize, starts: usize) -> Result<(), CliError> {
    let protocol = ctx.run.validate()?;
    let seed = ctx.run.seed.unwrap_or(0);
    let points = if point { vec![(protocol.params.alpha(), protocol.params.xi())] } else { standard_grid() };
    if starts == 0 {
        return Err(CliError::Config(vec!["--starts must be at least 1".into()]));
    }
    let opts =
        BoundsOptions { points, forgeries, budget: OptimizerBudget { starts, ..OptimizerBudget::default() }, seed };
    let rows = verify_bounds(&opts);
    let failed = rows.iter().filter(|r| !r.pass).count();
    write_json(
        &in_dir(&ctx.out, "bounds.json"),
        &Echo { config: &ctx.run, protocol: &protocol, body: BoundsOut { total: rows.len(), failed, rows: &rows } },
    )?;
    let csv: Vec<BoundsCsvRow> = rows
        .iter()
        .map(|r| BoundsCsvRow {
            quantity: &r.quantity,
            alpha: r.alpha,
            xi: r.xi,
            closed_form: r.closed_form,
            oracle: r.oracle,
            optimizer: r.optimizer,
            discrepancy: r.discrepancy,
            tolerance: r.tolerance,
            pass: r.pass,
        })
        .collect();
    write_csv(&in_dir(&ctx.out, "bounds.csv"), &csv)?;
    for r in rows.iter().filter(|r| !r.pass) {
        eprintln!(
            "FAIL {} at alpha={} xi={}: discrepancy {:.3e} > {:.1e}",
            r.quantity, r.alpha, r.xi, r.discrepancy, r.tolerance
        );
    }
    println!("{} of {} checks passed", rows.len() - failed, rows.len());
    if failed > 0 {
        return Err(CliError::BoundsFailed { failed, total: rows.len() });
    }
    Ok(())
}

fn cmd_report(ctx: Context) -> Result<(), CliError> {
    let seed = ctx.run.require_seed("report")?;
    let protocol = ctx.run.validate()?;
    let s = report::build(&protocol, ctx.run.trials, seed, &ctx.out);
    write_json(&in_dir(&ctx.out, "summary.json"), &Echo { config: &ctx.run, protocol: &protocol, body: &s })?;
    let rows = s.rows();
    write_csv(&in_dir(&ctx.out, "summary.csv"), &rows)?;
    for r in &rows {
        println!("{:<32} {:.6}", r.quantity, r.value);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn intercept_policy_reaches_the_config() {
        let cli = Cli::parse_from(["qpass", "--seed", "3", "attack", "--kind", "intercept-resend", "--intercept", "z"]);
        match cli.command {
            Command::Attack { intercept, .. } => assert_eq!(intercept.as_deref(), Some("z")),
            other => panic!("{other:?}"),
        }
    }
}
