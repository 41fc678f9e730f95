//! `inertia` command-line front end.
//!
//! Exit status: 0 when the checked property holds, 1 when it fails, 2 for
//! usage errors and malformed input.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use inertia::algebra::{baidc_consistent, bridc_consistent, bridc_det_output, bridc_regimes};
use inertia::io::{emit_vcd, emit_waveforms, parse_waveforms, RunConfig, Waveforms, SEED_ENV};
use inertia::oracle::verify::{verify, Plan, Theorem};
use inertia::oracle::{enumerate_solutions, find_empty_witness};
use inertia::sim::{envelope_propagate, simulate, Netlist};
use inertia::{AicParams, Atom, BdcParams, CondExpr, GridConfig, RicParams, Signal};

#[derive(Parser)]
#[command(
    name = "inertia",
    version,
    about = "Delay conditions, consistency checks and gate simulation"
)]
struct Cli {
    /// TOML file with `time_unit`, `resolution` and `seed`.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an output waveform satisfies a condition for an input.
    Check {
        #[command(flatten)]
        cond: CondArgs,
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Compute an output waveform from an input.
    Solve {
        #[arg(long, value_enum)]
        cond: SolveKind,
        /// Bounded delay parameters as JSON.
        #[arg(long)]
        params: String,
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Name of the output waveform.
        #[arg(long, default_value = "x")]
        name: String,
    },
    /// Decide consistency of a parameter set.
    Consistent {
        #[arg(long, value_enum)]
        cond: ConsistencyKind,
        #[arg(long)]
        params: String,
    },
    /// Parameter algebra on bounded delay tuples.
    Algebra {
        #[arg(value_enum)]
        op: AlgebraOp,
        #[arg(long)]
        p: String,
        /// Second operand for binary operations.
        #[arg(long)]
        q: Option<String>,
    },
    /// Simulate a netlist and write VCD.
    Simulate {
        #[arg(long, value_name = "FILE")]
        netlist: PathBuf,
        #[arg(long, value_name = "FILE")]
        stimuli: PathBuf,
        /// First tick of the dump.
        #[arg(long, allow_negative_numbers = true)]
        from: Option<i64>,
        /// Last tick of the dump.
        #[arg(long, allow_negative_numbers = true)]
        to: Option<i64>,
        /// Print min/max envelopes as waveform text instead of VCD.
        #[arg(long)]
        envelope: bool,
        /// Write to this file instead of stdout.
        #[arg(long, short, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Brute-force oracle over a bounded tick horizon.
    Oracle {
        #[command(subcommand)]
        action: OracleCmd,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// List every solution for an input on the horizon.
    Enumerate {
        #[command(flatten)]
        cond: CondArgs,
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[command(flatten)]
        horizon: Horizon,
    },
    /// Search for an input with no solution on the horizon.
    Witness {
        #[command(flatten)]
        cond: CondArgs,
        #[command(flatten)]
        horizon: Horizon,
        /// Maximum switches of candidate inputs.
        #[arg(long, default_value_t = 3)]
        switches: usize,
    },
    /// Run a property suite against the oracle.
    Verify {
        #[arg(long)]
        theorem: String,
        /// Number of random trials; defaults to the suite's own count.
        #[arg(long)]
        trials: Option<usize>,
        /// Falls back to the config file, then the environment.
        #[arg(long)]
        seed: Option<u64>,
        /// Exhaustive sweep of parameters up to this many ticks.
        #[arg(long, conflicts_with_all = ["trials", "seed"])]
        sweep: Option<i64>,
    },
}

#[derive(Args)]
struct Horizon {
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    lo: i64,
    #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
    hi: i64,
}

#[derive(Args)]
struct CondArgs {
    #[arg(long, value_enum)]
    cond: CondKind,
    /// Parameters as JSON, or `@path` to read them from a file.
    #[arg(long)]
    params: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum CondKind {
    Fdc,
    Bdc,
    Aic,
    Ric,
    Baidc,
    Bridc,
    /// A JSON list of atoms, each tagged with `kind`.
    Expr,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveKind {
    Min,
    Max,
    Envelope,
    BridcDet,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConsistencyKind {
    Cc,
    Baidc,
    Bridc,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraOp {
    Intersect,
    UnionEnvelope,
    Compose,
    Includes,
    Deterministic,
    Symmetric,
}

/// Result of a command: what to print and whether the property held.
struct Outcome {
    text: String,
    holds: bool,
}

impl Outcome {
    fn json(v: Value, holds: bool) -> Self {
        Outcome {
            text: serde_json::to_string_pretty(&v).expect("json values serialize"),
            holds,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if !out.text.ends_with('\n') && !out.text.is_empty() {
                println!();
            }
            if out.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Check { cond, input, output } => check(&cfg, &cond, &input, &output),
        Command::Solve {
            cond,
            params,
            input,
            name,
        } => solve(&cfg, cond, &params, &input, &name),
        Command::Consistent { cond, params } => consistent(cond, &params),
        Command::Algebra { op, p, q } => algebra(op, &p, q.as_deref()),
        Command::Simulate {
            netlist,
            stimuli,
            from,
            to,
            envelope,
            out,
        } => {
            let o = sim(&cfg, &netlist, &stimuli, from, to, envelope)?;
            match out {
                Some(path) => {
                    fs::write(&path, &o.text).with_context(|| format!("writing {}", path.display()))?;
                    Ok(Outcome {
                        text: String::new(),
                        holds: o.holds,
                    })
                }
                None => Ok(o),
            }
        }
        Command::Oracle { action } => oracle(&cfg, action),
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    let text = path
        .map(|p| fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
        .transpose()?;
    let env = std::env::var(SEED_ENV).ok();
    Ok(RunConfig::from_sources(text.as_deref(), env.as_deref())?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Inline JSON, or the contents of a file when prefixed with `@`.
fn json_arg(arg: &str) -> Result<Value> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).with_context(|| format!("parameters are not valid JSON: {arg}"))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).with_context(|| format!("invalid {what} parameters"))
}

fn bdc_arg(arg: &str) -> Result<BdcParams> {
    from_value(json_arg(arg)?, "bounded delay")
}

/// Splits `{"bdc": .., "<key>": ..}` into its two parts.
fn pair<B: serde::de::DeserializeOwned>(v: Value, key: &str) -> Result<(BdcParams, B)> {
    let Value::Object(mut m) = v else {
        bail!("expected an object with \"bdc\" and \"{key}\"");
    };
    let bdc = m.remove("bdc").ok_or_else(|| anyhow!("missing \"bdc\""))?;
    let other = m.remove(key).ok_or_else(|| anyhow!("missing \"{key}\""))?;
    if let Some(extra) = m.keys().next() {
        bail!("unknown field {extra:?}");
    }
    Ok((from_value(bdc, "bdc")?, from_value(other, key)?))
}

fn cond_expr(c: &CondArgs) -> Result<(CondExpr, Value)> {
    let v = json_arg(&c.params)?;
    let expr = match c.cond {
        CondKind::Fdc => {
            #[derive(serde::Deserialize)]
            #[serde(deny_unknown_fields)]
            struct D {
                d: i64,
            }
            let D { d } = from_value(v.clone(), "fixed delay")?;
            if d < 0 {
                bail!("fixed delay must be non-negative, got {d}");
            }
            CondExpr::single(Atom::Fdc { d })?
        }
        CondKind::Bdc => CondExpr::bdc(from_value(v.clone(), "bdc")?),
        CondKind::Aic => CondExpr::single(Atom::Aic(from_value::<AicParams>(v.clone(), "aic")?))?,
        CondKind::Ric => CondExpr::single(Atom::Ric(from_value::<RicParams>(v.clone(), "ric")?))?,
        CondKind::Baidc => {
            let (p, a) = pair(v.clone(), "aic")?;
            CondExpr::baidc(p, a)
        }
        CondKind::Bridc => {
            let (p, r) = pair(v.clone(), "ric")?;
            CondExpr::bridc(p, r)
        }
        CondKind::Expr => from_value(v.clone(), "condition expression")?,
    };
    Ok((expr, v))
}

/// The only waveform in `path`.
fn single_waveform(cfg: &RunConfig, path: &Path) -> Result<(String, Signal)> {
    let w = parse_waveforms(&read(path)?, cfg.resolution).with_context(|| format!("parsing {}", path.display()))?;
    let mut it = w.into_iter();
    match (it.next(), it.next()) {
        (Some(one), None) => Ok(one),
        (None, _) => bail!("{} holds no waveform", path.display()),
        _ => bail!("{} holds more than one waveform", path.display()),
    }
}

fn check(cfg: &RunConfig, c: &CondArgs, input: &Path, output: &Path) -> Result<Outcome> {
    let (expr, params) = cond_expr(c)?;
    let (_, u) = single_waveform(cfg, input)?;
    let (_, x) = single_waveform(cfg, output)?;
    let mut failed = Vec::new();
    for atom in expr.atoms() {
        if !atom.member(&u, &x)? {
            failed.push(atom.to_string());
        }
    }
    let holds = failed.is_empty();
    Ok(Outcome::json(
        json!({
            "cond": c.cond.to_possible_value().map(|v| v.get_name().to_string()),
            "params": params,
            "member": holds,
            "failed_atoms": failed,
        }),
        holds,
    ))
}

fn solve(cfg: &RunConfig, kind: SolveKind, params: &str, input: &Path, name: &str) -> Result<Outcome> {
    let p = bdc_arg(params)?;
    let (_, u) = single_waveform(cfg, input)?;
    let mut w = Waveforms::new();
    match kind {
        SolveKind::Min => {
            w.insert(name.to_string(), p.min_solution(&u)?);
        }
        SolveKind::Max => {
            w.insert(name.to_string(), p.max_solution(&u)?);
        }
        SolveKind::Envelope => {
            w.insert(format!("{name}_min"), p.min_solution(&u)?);
            w.insert(format!("{name}_max"), p.max_solution(&u)?);
        }
        SolveKind::BridcDet => {
            w.insert(name.to_string(), bridc_det_output(&u, &p)?);
        }
    }
    Ok(Outcome {
        text: emit_waveforms(&w, cfg.resolution)?,
        holds: true,
    })
}

fn consistent(kind: ConsistencyKind, params: &str) -> Result<Outcome> {
    let v = json_arg(params)?;
    match kind {
        ConsistencyKind::Cc => {
            let p: BdcParams = from_value(v.clone(), "bdc")?;
            let ok = p.cc_holds();
            let clauses = json!({
                "dr >= df - mf": p.dr() >= p.rise_lower(),
                "df >= dr - mr": p.df() >= p.fall_lower(),
            });
            Ok(Outcome::json(
                json!({
                    "cond": "cc",
                    "params": v,
                    "consistent": ok,
                    "verdict": if ok { "CC holds" } else { "CC violated" },
                    "clauses": clauses,
                }),
                ok,
            ))
        }
        ConsistencyKind::Baidc => {
            let (p, a): (BdcParams, AicParams) = pair(v.clone(), "aic")?;
            let ok = baidc_consistent(&p, &a)?;
            Ok(Outcome::json(
                json!({
                    "cond": "baidc",
                    "params": v,
                    "consistent": ok,
                    "verdict": if ok { "BAIDC consistent" } else { "BAIDC inconsistent" },
                    "clauses": {
                        "cc": p.cc_holds(),
                        "delta_r + delta_f <= mr + mf": a.delta_r() + a.delta_f() <= p.mr() + p.mf(),
                    },
                }),
                ok,
            ))
        }
        ConsistencyKind::Bridc => {
            let (p, r): (BdcParams, RicParams) = pair(v.clone(), "ric")?;
            let ok = bridc_consistent(&p, &r)?;
            let fired: Vec<&str> = bridc_regimes(&p, &r)?.into_iter().map(|g| g.label()).collect();
            Ok(Outcome::json(
                json!({
                    "cond": "bridc",
                    "params": v,
                    "consistent": ok,
                    "verdict": if ok { "BRIDC consistent" } else { "BRIDC inconsistent" },
                    "cc": p.cc_holds(),
                    "regimes": fired,
                }),
                ok,
            ))
        }
    }
}

fn algebra(op: AlgebraOp, p: &str, q: Option<&str>) -> Result<Outcome> {
    let p = bdc_arg(p)?;
    let q = || -> Result<BdcParams> { bdc_arg(q.ok_or_else(|| anyhow!("this operation needs --q"))?) };
    let out = match op {
        AlgebraOp::Intersect => {
            let q = q()?;
            match p.intersection(&q)? {
                Some(r) => Outcome::json(json!({"op": "intersect", "p": p, "q": q, "result": r}), true),
                None => Outcome::json(
                    json!({"op": "intersect", "p": p, "q": q, "result": null, "verdict": "intersection violates CC"}),
                    false,
                ),
            }
        }
        AlgebraOp::UnionEnvelope => {
            let q = q()?;
            let r = p.union_envelope(&q)?;
            Outcome::json(json!({"op": "union-envelope", "p": p, "q": q, "result": r}), true)
        }
        AlgebraOp::Compose => {
            let q = q()?;
            let r = p.compose(&q)?;
            Outcome::json(json!({"op": "compose", "first": p, "second": q, "result": r}), true)
        }
        AlgebraOp::Includes => {
            let q = q()?;
            let ok = p.includes(&q)?;
            Outcome::json(json!({"op": "includes", "p": p, "q": q, "p_subset_of_q": ok}), ok)
        }
        AlgebraOp::Deterministic => {
            let ok = p.is_deterministic()?;
            let d = p.as_translation()?;
            Outcome::json(
                json!({"op": "deterministic", "p": p, "deterministic": ok, "translation": d}),
                ok,
            )
        }
        AlgebraOp::Symmetric => {
            let ok = p.is_symmetrical();
            Outcome::json(json!({"op": "symmetric", "p": p, "symmetric": ok}), ok)
        }
    };
    Ok(out)
}

/// Default dump window: from the earliest stimulus switch (or 0) to well
/// past the last one, allowing every gate its largest delay once more.
fn default_horizon(net: &Netlist, stim: &Waveforms) -> (i64, i64) {
    let switches = stim.values().flat_map(|s| s.switches().iter().copied());
    let (first, last) = switches.fold((0i64, 0i64), |(a, b), t| (a.min(t), b.max(t)));
    let slack: i64 = net
        .gates
        .iter()
        .map(|g| g.delay.as_bdc().map_or(0, |p| p.dr().max(p.df())))
        .sum();
    (first, last.saturating_add(slack).saturating_add(1))
}

fn sim(
    cfg: &RunConfig,
    netlist: &Path,
    stimuli: &Path,
    from: Option<i64>,
    to: Option<i64>,
    envelope: bool,
) -> Result<Outcome> {
    let net = Netlist::from_json(&read(netlist)?).with_context(|| format!("parsing {}", netlist.display()))?;
    let stim =
        parse_waveforms(&read(stimuli)?, cfg.resolution).with_context(|| format!("parsing {}", stimuli.display()))?;
    if envelope {
        let envs = envelope_propagate(&net, &stim)?;
        let mut w = Waveforms::new();
        for (name, e) in envs {
            w.insert(format!("{name}_min"), e.low);
            w.insert(format!("{name}_max"), e.high);
        }
        return Ok(Outcome {
            text: emit_waveforms(&w, cfg.resolution)?,
            holds: true,
        });
    }
    let (lo, hi) = default_horizon(&net, &stim);
    let nets: BTreeMap<String, Signal> = simulate(&net, &stim, from.unwrap_or(lo), to.unwrap_or(hi))?;
    Ok(Outcome {
        text: emit_vcd(&nets, cfg)?,
        holds: true,
    })
}

fn oracle(cfg: &RunConfig, action: OracleCmd) -> Result<Outcome> {
    match action {
        OracleCmd::Enumerate { cond, input, horizon } => {
            let (expr, _) = cond_expr(&cond)?;
            let (_, u) = single_waveform(cfg, &input)?;
            let g = GridConfig::new(horizon.lo, horizon.hi)?;
            let sols = enumerate_solutions(&u, &expr, &g)?;
            let w: Waveforms = sols
                .into_iter()
                .enumerate()
                .map(|(i, x)| (format!("x{i:04}"), x))
                .collect();
            let holds = !w.is_empty();
            Ok(Outcome {
                text: emit_waveforms(&w, cfg.resolution)?,
                holds,
            })
        }
        OracleCmd::Witness {
            cond,
            horizon,
            switches,
        } => {
            let (expr, params) = cond_expr(&cond)?;
            let g = GridConfig::new(horizon.lo, horizon.hi)?;
            let w = find_empty_witness(&expr, &g, switches)?;
            let text = match &w {
                Some(u) => {
                    let one: Waveforms = [("u".to_string(), u.clone())].into();
                    Some(emit_waveforms(&one, cfg.resolution)?.trim_end().to_string())
                }
                None => None,
            };
            Ok(Outcome::json(
                json!({
                    "params": params,
                    "horizon": [horizon.lo, horizon.hi],
                    "max_switches": switches,
                    "witness": text,
                }),
                w.is_none(),
            ))
        }
        OracleCmd::Verify {
            theorem,
            trials,
            seed,
            sweep,
        } => {
            let t: Theorem = theorem.parse()?;
            let plan = match sweep {
                Some(max) => Plan::sweep(max),
                None => Plan::sampled(trials.unwrap_or(t.default_trials()), seed.unwrap_or(cfg.seed)),
            };
            let report = verify(t, &plan)?;
            let holds = report.passed();
            if !holds {
                for c in &report.counterexamples {
                    eprintln!("counterexample: {c}");
                }
            }
            Ok(Outcome::json(serde_json::to_value(&report)?, holds))
        }
    }
}
