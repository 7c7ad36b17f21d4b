//! `bellchain` command-line front end.

mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use bellchain_core::chsh::{all_heterosexual_pairs, xi_exact};
use bellchain_core::claims::{
    emit_report, find_state, load_registry, resolve_preset, four_party_roster, three_party_roster, two_party_roster,
    PaperState, PresetPolicy, ReportFormat, Tolerances, VerifyConfig,
};
use bellchain_core::optimize::{
    maximize, min_all_pairs, Objective, OptimizationReport, Partition, SearchConfig, StrategySpace,
};
use bellchain_core::qcore::{format_state, parse_state};
use bellchain_core::synthesis::{mc_gluing_indices, synthesize_chains, write_trace_csv, McSummary, ProtocolConfig};
use bellchain_core::{ConventionPreset, PairSpec, Participant};

use config::FileConfig;

#[derive(Parser, Debug)]
#[command(name = "bellchain", version, about = "Gluing-index simulation and claim verification")]
struct Cli {
    /// Flat key = value file with defaults for the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// section2, figure4, triplet-cal or calibrated.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// text, json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recompute every registry state and quoted number.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        length: Option<usize>,
        /// Tolerance for values quoted to a few decimals.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Monte Carlo gluing indices for one state.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Registry id such as S5.G1.1.
        #[arg(long, conflicts_with = "ket")]
        state: Option<String>,
        /// State in ket notation, e.g. "|01> + |10>".
        #[arg(long)]
        ket: Option<String>,
        /// Pair label such as Alice-Bob; every pair when omitted.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        length: Option<usize>,
        /// Also write the per-monoblock trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Maximize (or minimize) one objective over one strategy space.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// single-pair-xi, sum-index, differentiation or min-max-index.
        #[arg(long)]
        objective: String,
        /// unrestricted, biphoton or classical.
        #[arg(long, default_value = "unrestricted")]
        space: String,
        /// Number of participants: 2, 3 or 4.
        #[arg(long, default_value_t = 3)]
        participants: usize,
        /// Comma-separated pair labels; all opposite-sex pairs by default.
        #[arg(long)]
        pairs: Option<String>,
        /// Legal pair for differentiation.
        #[arg(long)]
        legal: Option<String>,
        /// Blocks for the biphoton space, e.g. "Alice+Bob,Natalia".
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Print a registry state and its exact pair indices.
    ShowState {
        #[command(flatten)]
        common: Common,
        /// Registry id; every state when omitted.
        id: Option<String>,
    },
}

fn roster_for(n: usize) -> Result<Vec<Participant>> {
    Ok(match n {
        2 => two_party_roster(),
        3 => three_party_roster(),
        4 => four_party_roster(),
        _ => bail!("--participants must be 2, 3 or 4"),
    })
}

fn policy(name: &str) -> Result<PresetPolicy> {
    if name == "calibrated" {
        return Ok(PresetPolicy::Calibrated);
    }
    Ok(PresetPolicy::Fixed(name.parse::<ConventionPreset>()?))
}

fn preset_of(common: &Common, file: &FileConfig) -> Result<(PresetPolicy, ConventionPreset)> {
    let name = file.pick(common.preset.clone(), "preset", "calibrated".to_string())?;
    let p = policy(&name)?;
    Ok((p, resolve_preset(p)?))
}

fn format_of(common: &Common, file: &FileConfig, default: &str) -> Result<ReportFormat> {
    Ok(file.pick(common.format.clone(), "format", default.to_string())?.parse()?)
}

fn emit(common: &Common, file: &FileConfig, text: &str) -> Result<()> {
    let out: Option<PathBuf> = match &common.out {
        Some(p) => Some(p.clone()),
        None => file.get("out").map(PathBuf::from),
    };
    match out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn parse_pairs(list: &str, roster: &[Participant]) -> Result<Vec<PairSpec>> {
    list.split(',')
        .map(|l| Ok(PairSpec::from_label(l.trim(), roster)?))
        .collect()
}

fn run_verify(
    common: &Common,
    file: &FileConfig,
    trials: Option<usize>,
    length: Option<usize>,
    tolerance: Option<f64>,
    restarts: Option<usize>,
) -> Result<i32> {
    let (policy, _) = preset_of(common, file)?;
    let config = VerifyConfig {
        policy,
        seed: file.pick(common.seed, "seed", 2024)?,
        trials: file.pick(trials, "trials", 1000)?,
        chain_length: file.pick(length, "length", 1000)?,
        tolerances: Tolerances {
            coarse: file.pick(tolerance, "tolerance", Tolerances::default().coarse)?,
            ..Tolerances::default()
        },
        search: SearchConfig {
            restarts: file.pick(restarts, "restarts", SearchConfig::default().restarts)?,
            ..SearchConfig::default()
        },
        timestamp: None,
    };
    let run = bellchain_core::claims::verify_all(&config)?;
    emit(common, file, &emit_report(&run, format_of(common, file, "text")?)?)?;
    Ok(run.exit_code())
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(
    common: &Common,
    file: &FileConfig,
    state: Option<String>,
    ket: Option<String>,
    pair: Option<String>,
    trials: Option<usize>,
    length: Option<usize>,
    trace: Option<PathBuf>,
) -> Result<i32> {
    let (_, preset) = preset_of(common, file)?;
    let (state_id, state, roster) = match (state, ket) {
        (Some(id), _) => {
            let s = find_state(&id)?;
            (s.id, s.state, s.roster)
        }
        (None, Some(text)) => {
            let s = parse_state(&text)?;
            (text, s.clone(), roster_for(s.num_qubits())?)
        }
        (None, None) => bail!("give --state ID or --ket TEXT"),
    };
    let pairs = match pair {
        Some(l) => parse_pairs(&l, &roster)?,
        None => all_heterosexual_pairs(&roster)?,
    };
    let config = ProtocolConfig {
        state: state.clone(),
        participants: roster,
        preset,
        chain_length: file.pick(length, "length", 1000)?,
        trials: file.pick(trials, "trials", 1000)?,
        master_seed: file.pick(common.seed, "seed", 2024)?,
    };
    if let Some(path) = trace {
        let chains = synthesize_chains(&config)?;
        let f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write_trace_csv(std::io::BufWriter::new(f), &chains)?;
    }
    let estimates = mc_gluing_indices(&config, &pairs)?;
    let mut summaries = Vec::new();
    for (p, e) in pairs.iter().zip(estimates) {
        summaries.push(McSummary {
            state_id: state_id.clone(),
            pair: e.pair,
            preset: preset.name().into(),
            chain_length: config.chain_length,
            trials: config.trials,
            seed: config.master_seed,
            estimate: e.estimate,
            stderr: e.stderr,
            exact: xi_exact(&state, p, preset)?.gluing_index(),
        });
    }
    let text = match format_of(common, file, "json")? {
        ReportFormat::Json => serde_json::to_string_pretty(&summaries)?,
        ReportFormat::Csv => {
            let mut s = String::from("state_id,pair,preset,L,trials,seed,estimate,stderr,exact\n");
            for m in &summaries {
                s += &format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    m.state_id, m.pair, m.preset, m.chain_length, m.trials, m.seed, m.estimate, m.stderr, m.exact
                );
            }
            s
        }
        ReportFormat::Text => summaries
            .iter()
            .map(|m| {
                format!(
                    "{} {} estimate {:.6} ± {:.6} exact {:.6}\n",
                    m.state_id, m.pair, m.estimate, m.stderr, m.exact
                )
            })
            .collect(),
    };
    emit(common, file, &text)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_optimize(
    common: &Common,
    file: &FileConfig,
    objective: &str,
    space: &str,
    participants: usize,
    pairs: Option<String>,
    legal: Option<String>,
    partition: Option<String>,
    restarts: Option<usize>,
) -> Result<i32> {
    let (_, preset) = preset_of(common, file)?;
    let roster = roster_for(participants)?;
    let pair_set = match &pairs {
        Some(l) => parse_pairs(l, &roster)?,
        None => all_heterosexual_pairs(&roster)?,
    };
    let strategy = match space {
        "unrestricted" => StrategySpace::UnrestrictedPure,
        "classical" => StrategySpace::ClassicalDeterministic,
        "biphoton" => {
            let Some(p) = partition else { bail!("--space biphoton needs --partition") };
            StrategySpace::BiphotonProduct(Partition::parse(&p, &roster)?)
        }
        other => bail!("unknown space {other:?}"),
    };
    let search = SearchConfig {
        restarts: file.pick(restarts, "restarts", SearchConfig::default().restarts)?,
        seed: file.pick(common.seed, "seed", 0)?,
        ..SearchConfig::default()
    };
    let (obj, result) = match objective {
        "min-max-index" => {
            let o = Objective::MinMaxIndex(pair_set.clone());
            let r = min_all_pairs(pair_set, &strategy, &roster, preset, &search)?;
            (o, r)
        }
        _ => {
            let o = match objective {
                "single-pair-xi" => match pair_set.as_slice() {
                    [p] => Objective::SinglePairXi(p.clone()),
                    _ => bail!("single-pair-xi needs exactly one pair in --pairs"),
                },
                "sum-index" => Objective::SumIndex(pair_set),
                "differentiation" => {
                    let Some(l) = legal else { bail!("differentiation needs --legal") };
                    let legal = PairSpec::from_label(&l, &roster)?;
                    let illegal = pair_set.into_iter().filter(|p| p.label() != legal.label()).collect();
                    Objective::Differentiation { legal, illegal }
                }
                other => bail!("unknown objective {other:?}"),
            };
            let r = maximize(&o, &strategy, &roster, preset, &search)?;
            (o, r)
        }
    };
    let report = OptimizationReport::new(&obj, &strategy, preset, &result);
    let text = match format_of(common, file, "json")? {
        ReportFormat::Json => report.to_json()?,
        _ => format!(
            "{} over {} ({}): {:.12}\nargmax: {}\nmethod {} restarts {} residual {:.3e}\n",
            report.objective,
            report.space,
            report.preset,
            report.value,
            report.argmax,
            report.method,
            report.restarts,
            report.residual
        ),
    };
    emit(common, file, &text)?;
    Ok(0)
}

fn describe(s: &PaperState, preset: ConventionPreset) -> Result<serde_json::Value> {
    let mut pairs = Vec::new();
    for p in s.pairs() {
        let xi = xi_exact(&s.state, &p, preset)?;
        pairs.push(serde_json::json!({
            "pair": p.label(),
            "xi": xi.value(),
            "index": xi.gluing_index(),
            "claimed": s.claimed_index(&p.label()),
        }));
    }
    Ok(serde_json::json!({
        "id": s.id,
        "group": s.group,
        "expression": s.expression,
        "state": format_state(&s.state),
        "roster": s.roster.iter().map(|p| &p.id).collect::<Vec<_>>(),
        "preset": preset.name(),
        "pairs": pairs,
    }))
}

fn run_show(common: &Common, file: &FileConfig, id: Option<String>) -> Result<i32> {
    let (_, preset) = preset_of(common, file)?;
    let states = match id {
        Some(id) => vec![find_state(&id)?],
        None => load_registry(),
    };
    let text = match format_of(common, file, "text")? {
        ReportFormat::Json => {
            let all = states.iter().map(|s| describe(s, preset)).collect::<Result<Vec<_>>>()?;
            serde_json::to_string_pretty(&all)?
        }
        ReportFormat::Csv => bail!("show-state supports text and json"),
        ReportFormat::Text => {
            let mut out = String::new();
            for s in &states {
                let names: Vec<&str> = s.roster.iter().map(|p| p.id.as_str()).collect();
                out += &format!("{} ({})\n  {}\n  qubits: {}\n", s.id, s.group.title(), s.expression, names.join(", "));
                for p in s.pairs() {
                    let xi = xi_exact(&s.state, &p, preset)?;
                    let claimed = s.claimed_index(&p.label()).map_or("-".into(), |v| v.to_string());
                    out += &format!(
                        "  {:<13} xi {:+.6}  index {:.6}  quoted {}\n",
                        p.label(),
                        xi.value(),
                        xi.gluing_index(),
                        claimed
                    );
                }
            }
            out
        }
    };
    emit(common, file, &text)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Verify {
            common,
            trials,
            length,
            tolerance,
            restarts,
        } => run_verify(&common, &file, trials, length, tolerance, restarts),
        Command::Simulate {
            common,
            state,
            ket,
            pair,
            trials,
            length,
            trace,
        } => run_simulate(&common, &file, state, ket, pair, trials, length, trace),
        Command::Optimize {
            common,
            objective,
            space,
            participants,
            pairs,
            legal,
            partition,
            restarts,
        } => run_optimize(&common, &file, &objective, &space, participants, pairs, legal, partition, restarts),
        Command::ShowState { common, id } => run_show(&common, &file, id),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
