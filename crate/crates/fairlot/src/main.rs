//! `fairlot`: compute and audit randomized allocations from JSON files.
//!
//! Exit codes: 0 success with every requested property holding, 1 a
//! requested property failed, 2 usage or input error, 3 size or iteration
//! limit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fairlot::io::{self, Allocation};
use fairlot::report;
use fairlot_core::decomp::bvn_decompose;
use fairlot_core::mnw::{ceei_verify, mnw_v, solve_mnw, DEFAULT_TOL};
use fairlot_core::properties::{audit_lottery, check, AllocationRef, Audit, Property};
use fairlot_core::rational::zero;
use fairlot_core::rng::Sampler;
use fairlot_core::rounding::{gf_lottery, implement_with_utility_guarantee, prop1_ef11_lottery_bads, prop1_lottery};
use fairlot_core::rps::{randomized_round_robin, rps, rps_bads, rps_mixed, Outcome, RoundRobinMode, RpsConfig};
use fairlot_core::{Instance, Kind, Lottery};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fairlot", version, about = "Randomized allocations that are fair before and after the draw")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write JSON here instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RpsMode {
    Full,
    Poly,
    Sample,
}

#[derive(Args)]
struct RpsArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    mode: RpsMode,
    /// Seed for `--mode sample`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Support size at which full mode gives up.
    #[arg(long)]
    max_support: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SolverArgs {
    instance: PathBuf,
    /// Stopping tolerance of the equilibrium iteration.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand)]
enum Command {
    /// Recursive probabilistic serial over goods.
    Rps(RpsArgs),
    /// Recursive probabilistic serial over bads, padded with dummy goods.
    RpsBads(RpsArgs),
    /// Recursive probabilistic serial over mixed items.
    RpsMixed(RpsArgs),
    /// Round-robin under a random agent order.
    RoundRobin {
        instance: PathBuf,
        /// Every order with equal weight (the default).
        #[arg(long, conflicts_with = "seed")]
        exact: bool,
        /// Draw one order with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Maximum Nash welfare fractional allocation.
    Mnw(SolverArgs),
    /// Maximum Nash welfare after giving weak goods to their only valuer.
    MnwV(SolverArgs),
    /// Maximum Nash welfare implemented over Prop1 and EF11 allocations.
    GfLottery(SolverArgs),
    /// Implements a proportional fractional allocation over Prop1 parts.
    Prop1Lottery {
        instance: PathBuf,
        #[arg(long)]
        frac: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Implements a bads allocation over parts within one bad of it.
    BadsLottery {
        instance: PathBuf,
        #[arg(long)]
        ceei: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Decomposes a fractional allocation into a lottery.
    Decompose {
        alloc: PathBuf,
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Row and column quotas only.
        #[arg(long, conflicts_with = "bihierarchy")]
        bvn: bool,
        /// Prefix quotas from the instance's preferences (the default).
        #[arg(long)]
        bihierarchy: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Audits an allocation or lottery.
    Check {
        instance: PathBuf,
        #[arg(long, conflicts_with = "lottery", required_unless_present = "lottery")]
        alloc: Option<PathBuf>,
        #[arg(long)]
        lottery: Option<PathBuf>,
        /// Comma-separated notions checked on the marginal.
        #[arg(long, value_delimiter = ',')]
        ex_ante: Vec<String>,
        /// Comma-separated notions checked on every part.
        #[arg(long, value_delimiter = ',')]
        ex_post: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Draws one allocation from a lottery.
    Sample {
        lottery: PathBuf,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

fn outcome_json(outcome: Outcome) -> Value {
    match outcome {
        Outcome::Lottery(l) => io::lottery_json(&l),
        Outcome::Sample(a) => io::integral_json(&a),
    }
}

fn rps_command(args: &RpsArgs, rule: fn(&Instance, &RpsConfig) -> fairlot_core::Result<Outcome>) -> Result<u8> {
    let inst = io::load_instance(&args.instance)?;
    let mut cfg = match args.mode {
        RpsMode::Full => RpsConfig::full(),
        RpsMode::Poly => RpsConfig::poly(),
        RpsMode::Sample => RpsConfig::sample(args.seed),
    };
    if let Some(limit) = args.max_support {
        cfg.max_support = limit;
    }
    io::emit(&outcome_json(rule(&inst, &cfg)?), args.out.output.as_deref())?;
    Ok(0)
}

fn resolve(names: &[String], kind: Kind) -> Result<Vec<Property>> {
    names
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| Property::resolve(s, kind).with_context(|| format!("property `{s}`")))
        .collect()
}

fn check_command(
    inst: &Instance,
    alloc: Option<&Path>,
    lottery: Option<&Path>,
    ex_ante: &[Property],
    ex_post: &[Property],
) -> Result<Value> {
    let m = Some(inst.items());
    let (audit, marginal) = match (alloc, lottery) {
        (_, Some(path)) => {
            let l = io::load_lottery(path, m)?;
            (audit_lottery(inst, &l, ex_ante, ex_post)?, l.marginal())
        }
        (Some(path), None) => match io::load_allocation(path, m)? {
            alloc @ Allocation::Integral(_) => {
                let a = alloc.to_integral().expect("integral");
                let l = Lottery::certain(a);
                (audit_lottery(inst, &l, ex_ante, ex_post)?, l.marginal())
            }
            Allocation::Fractional(x) => match x.to_integral() {
                Some(a) => {
                    let l = Lottery::certain(a);
                    (audit_lottery(inst, &l, ex_ante, ex_post)?, x)
                }
                None => {
                    if !ex_post.is_empty() {
                        bail!("ex-post notions need an integral allocation or a lottery");
                    }
                    let verdicts = ex_ante
                        .iter()
                        .map(|&p| check(inst, AllocationRef::Fractional(&x), p))
                        .collect::<fairlot_core::Result<Vec<_>>>()?;
                    (
                        Audit {
                            ex_ante: verdicts,
                            ex_post: vec![],
                        },
                        x,
                    )
                }
            },
        },
        (None, None) => bail!("pass --alloc or --lottery"),
    };
    if marginal.agents() != inst.agents() || marginal.items() != inst.items() {
        bail!(
            "allocation is {}x{}, instance is {}x{}",
            marginal.agents(),
            marginal.items(),
            inst.agents(),
            inst.items()
        );
    }
    let mut report = report::audit_json(&audit);
    if let Value::Object(o) = &mut report {
        o.insert("utilities".into(), report::utility_table(inst, &marginal));
    }
    Ok(report)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Rps(args) => rps_command(&args, rps),
        Command::RpsBads(args) => rps_command(&args, rps_bads),
        Command::RpsMixed(args) => rps_command(&args, rps_mixed),
        Command::RoundRobin {
            instance,
            exact: _,
            seed,
            out,
        } => {
            let inst = io::load_instance(&instance)?;
            let mode = seed.map_or(RoundRobinMode::Exact, RoundRobinMode::Sample);
            io::emit(&outcome_json(randomized_round_robin(&inst, mode)?), out.output.as_deref())?;
            Ok(0)
        }
        Command::Mnw(args) => {
            let inst = io::load_instance(&args.instance)?;
            let sol = solve_mnw(&inst, args.tol)?;
            if !sol.is_exact() {
                eprintln!("note: exact reconstruction failed; the allocation meets the equilibrium condition up to slack {}", sol.slack);
            }
            io::emit(&report::mnw_json(&sol), args.out.output.as_deref())?;
            Ok(0)
        }
        Command::MnwV(args) => {
            let inst = io::load_instance(&args.instance)?;
            let x = mnw_v(&inst, args.tol)?;
            io::emit(&io::fractional_json(&x), args.out.output.as_deref())?;
            Ok(0)
        }
        Command::GfLottery(args) => {
            let inst = io::load_instance(&args.instance)?;
            io::emit(&io::lottery_json(&gf_lottery(&inst, args.tol)?), args.out.output.as_deref())?;
            Ok(0)
        }
        Command::Prop1Lottery { instance, frac, out } => {
            let inst = io::load_instance(&instance)?;
            let x = io::load_allocation(&frac, Some(inst.items()))?.to_fractional();
            io::emit(&io::lottery_json(&prop1_lottery(&inst, &x)?), out.output.as_deref())?;
            Ok(0)
        }
        Command::BadsLottery { instance, ceei, out } => {
            let inst = io::load_instance(&instance)?;
            let x = io::load_allocation(&ceei, Some(inst.items()))?.to_fractional();
            if inst.kind() == Kind::Bads {
                let verdict = ceei_verify(&inst, &x, &zero(), Kind::Bads)?;
                if !verdict.holds {
                    eprintln!(
                        "note: the input is not an equilibrium allocation, so only Prop1 is promised: {}",
                        report::ceei_json(&verdict)
                    );
                }
            }
            io::emit(&io::lottery_json(&prop1_ef11_lottery_bads(&inst, &x)?), out.output.as_deref())?;
            Ok(0)
        }
        Command::Decompose {
            alloc,
            instance,
            bvn,
            bihierarchy: _,
            out,
        } => {
            let inst = instance.as_deref().map(io::load_instance).transpose()?;
            let x = io::load_allocation(&alloc, inst.as_ref().map(Instance::items))?.to_fractional();
            let lottery = if bvn {
                bvn_decompose(&x)?
            } else {
                let Some(inst) = inst else {
                    bail!("prefix quotas need --instance");
                };
                implement_with_utility_guarantee(&inst, &x)?
            };
            io::emit(&io::lottery_json(&lottery), out.output.as_deref())?;
            Ok(0)
        }
        Command::Check {
            instance,
            alloc,
            lottery,
            ex_ante,
            ex_post,
            out,
        } => {
            let inst = io::load_instance(&instance)?;
            let ante = resolve(&ex_ante, inst.kind())?;
            let post = resolve(&ex_post, inst.kind())?;
            let report = check_command(&inst, alloc.as_deref(), lottery.as_deref(), &ante, &post)?;
            let holds = report["holds"].as_bool().unwrap_or(false);
            io::emit(&report, out.output.as_deref())?;
            Ok(if holds { 0 } else { 1 })
        }
        Command::Sample { lottery, seed, out } => {
            let l = io::load_lottery(&lottery, None)?.sorted();
            let weights: Vec<_> = l.support().iter().map(|(w, _)| w.clone()).collect();
            let k = Sampler::new(seed).pick(&weights);
            let (w, a) = &l.support()[k];
            let mut drawn = io::integral_json(a);
            if let Value::Object(o) = &mut drawn {
                o.insert("part".into(), json!(k));
                o.insert("weight".into(), io::rational_to_json(w));
            }
            io::emit(&drawn, out.output.as_deref())?;
            Ok(0)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let core = err.chain().find_map(|e| {
        e.downcast_ref::<fairlot_core::Error>().or_else(|| match e.downcast_ref::<io::FormatError>() {
            Some(io::FormatError::Model(c)) => Some(c),
            _ => None,
        })
    });
    match core {
        Some(e) if e.is_limit() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
