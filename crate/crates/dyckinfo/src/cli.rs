//! Command-line configuration and experiment dispatch.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use dyckinfo_core::augindex::{
    block_protocol, f_packed, make_mu, tradeoff_report, tradeoff_rhs, transcript_gap, ErrorSource, TradeoffReport,
    Which,
};
use dyckinfo_core::dyck::{
    height_band_check, stack_check, FreeGroupMachine, HeightBandMachine, ParenString, StackMachine,
};
use dyckinfo_core::protocol::{
    distributional_error, information_costs, information_costs_sampled, Budget, ProtocolSpec,
};
use dyckinfo_core::quantumkit::{examples, hybrid_check, q_tradeoff_report, QProtocolSpec};
use dyckinfo_core::reduction::{
    all_inputs, compile_protocol, embed, random_input, space_bound, OtherInstances, SegmentKind,
};
use dyckinfo_core::streamvm::{run, PassSchedule, RunReport, StreamMachine, Sym};
use dyckinfo_core::Error as CoreError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formats::{self, protocol_from_json, qprotocol_from_json};
use crate::report::{num, Format, Report, Table, VERSION};

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "dyckinfo", version = VERSION, about = "Information-cost and streaming experiments for Augmented Index and Dyck(2)")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on the number of weighted terms an exact enumeration may visit.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub budget: u128,
    /// Slack allowed when deciding whether an inequality holds.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Report path; standard output if absent. For `embed` this is the
    /// word file instead, with layouts in `<path>.layout.json`, and the
    /// report goes to standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Stack,
    Band,
    Freegroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Fwd,
    Alt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    FullSend,
    FixedReply,
    Constant,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Information trade-off for the block protocols or a protocol file.
    Tradeoff {
        #[arg(long)]
        n: usize,
        /// Block-index length; every valid value if absent.
        #[arg(long)]
        l: Option<usize>,
        /// Protocol JSON to analyze instead of the block family.
        #[arg(long, conflicts_with = "l")]
        protocol: Option<PathBuf>,
        /// Use this error instead of measuring it.
        #[arg(long)]
        eps: Option<f64>,
        /// Public-coin samples when exact costs exceed the budget.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Distance between Bob's final views on 0- and 1-inputs.
    TranscriptGap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, conflicts_with = "l")]
        protocol: Option<PathBuf>,
    },
    /// Per-line Dyck(2) verdicts for a corpus file.
    DyckCheck {
        #[arg(long, value_enum)]
        algo: Algo,
        /// Band width for the height-band checker.
        #[arg(long, default_value_t = 4)]
        w: usize,
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 61)]
        prime_bits: u32,
        #[arg(long, default_value_t = 2)]
        trials: usize,
    },
    /// Runs a streaming machine on each line of a file under a pass schedule.
    StreamRun {
        #[arg(long, value_enum)]
        machine: Algo,
        /// Pass count; what the machine needs if absent.
        #[arg(long)]
        passes: Option<usize>,
        #[arg(long, value_enum, default_value_t = Dir::Fwd)]
        dir: Dir,
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        w: usize,
        #[arg(long, default_value_t = 61)]
        prime_bits: u32,
        #[arg(long, default_value_t = 2)]
        trials: usize,
    },
    /// Embeds random Ascension inputs into Dyck(2) words.
    Embed {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Compiles the height-band machine into Augmented Index protocols.
    Compile {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        passes: usize,
        /// Target coordinate; all of them if absent.
        #[arg(long)]
        target: Option<usize>,
        /// Saves the protocol for the first target as JSON.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Space lower bound for T-pass recognition of Dyck(2).
    Bound {
        #[arg(long = "N")]
        #[serde(rename = "N")]
        big_n: f64,
        #[arg(long = "T")]
        #[serde(rename = "T")]
        t: f64,
        #[arg(long)]
        eps: f64,
    },
    /// Quantum information costs and the quantum trade-off.
    QuantumDemo {
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        spec: Option<PathBuf>,
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        /// Expected input length; checked against the protocol.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        /// Also tabulate the hybrid inequalities for every (j, l, z).
        #[arg(long)]
        hybrid: bool,
    },
    /// Quick end-to-end checks.
    Selftest,
}

/// A finished experiment.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    /// False when a check the command exists to perform failed.
    pub ok: bool,
}

impl Cli {
    /// Flat `key → value` echo of every setting, subcommand arguments included.
    pub fn config(&self) -> BTreeMap<String, String> {
        let v = serde_json::to_value(self).expect("plain data");
        v.as_object()
            .expect("struct")
            .iter()
            .map(|(k, v)| {
                let s = match v {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Null => String::new(),
                    other => other.to_string(),
                };
                (k.clone(), s)
            })
            .collect()
    }

    fn budget(&self) -> Budget {
        Budget(self.budget)
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!(
                "tolerance {} must be finite and nonnegative",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Runs the configured experiment.
pub fn run_experiment(cli: &Cli) -> Result<Outcome> {
    cli.validate()?;
    let name = cli.config().remove("command").unwrap_or_default();
    let mut report = Report::new(&name, cli.config());
    let ok = match &cli.command {
        Command::Tradeoff {
            n,
            l,
            protocol,
            eps,
            samples,
        } => tradeoff(cli, &mut report, *n, *l, protocol.as_deref(), *eps, *samples)?,
        Command::TranscriptGap { n, l, protocol } => gap(cli, &mut report, *n, *l, protocol.as_deref())?,
        Command::DyckCheck {
            algo,
            w,
            file,
            prime_bits,
            trials,
        } => dyck_check(cli, &mut report, *algo, *w, file, *prime_bits, *trials)?,
        Command::StreamRun {
            machine,
            passes,
            dir,
            file,
            w,
            prime_bits,
            trials,
        } => stream_run(
            cli,
            &mut report,
            *machine,
            *passes,
            *dir,
            file,
            *w,
            *prime_bits,
            *trials,
        )?,
        Command::Embed { n, count } => embed_cmd(cli, &mut report, *n, *count)?,
        Command::Compile {
            n,
            w,
            passes,
            target,
            save,
        } => compile(cli, &mut report, *n, *w, *passes, *target, save.as_deref())?,
        Command::Bound { big_n, t, eps } => {
            let mut t_ = Table::new("bound", &["N", "T", "eps", "bound"]);
            t_.push(vec![
                num(*big_n),
                num(*t),
                num(*eps),
                num(space_bound(*big_n, *t, *eps)?),
            ]);
            report.tables.push(t_);
            true
        }
        Command::QuantumDemo {
            spec,
            builtin,
            n,
            eps,
            hybrid,
        } => quantum(cli, &mut report, spec.as_deref(), *builtin, *n, *eps, *hybrid)?,
        Command::Selftest => selftest(cli, &mut report)?,
    };
    Ok(Outcome { report, ok })
}

/// Writes the report where the configuration asks.
pub fn emit(cli: &Cli, report: &Report) -> Result<()> {
    match &cli.out {
        Some(path) if !matches!(cli.command, Command::Embed { .. }) => {
            report.write(cli.format, fs::File::create(path)?)
        }
        _ => report.write(cli.format, std::io::stdout().lock()),
    }
}

fn holds(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs >= rhs - tol
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// The protocols a tradeoff-style command runs over, labeled by `l`.
fn fleet(n: usize, l: Option<usize>, protocol: Option<&Path>) -> Result<Vec<(String, ProtocolSpec)>> {
    if let Some(path) = protocol {
        return Ok(vec![(String::new(), protocol_from_json(&read(path)?)?)]);
    }
    let ls: Vec<usize> = match l {
        Some(l) => vec![l],
        None if n.is_power_of_two() && n >= 2 => (1..=n.trailing_zeros() as usize).collect(),
        None => {
            return Err(Error::Config(format!(
                "precondition: n = {n} is not a power of two ≥ 2"
            )))
        }
    };
    ls.into_iter()
        .map(|l| Ok((l.to_string(), block_protocol(n, l)?)))
        .collect()
}

fn tradeoff(
    cli: &Cli,
    report: &mut Report,
    n: usize,
    l: Option<usize>,
    protocol: Option<&Path>,
    eps: Option<f64>,
    samples: usize,
) -> Result<bool> {
    let source = eps.map_or(ErrorSource::Measured, ErrorSource::Asserted);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut t = Table::new(
        "tradeoff",
        &[
            "n",
            "l",
            "error",
            "ic_alice_over_n",
            "ic_bob",
            "lhs",
            "rhs",
            "holds",
            "error_mode",
            "mode",
            "ci_half_width",
            "budget",
        ],
    );
    let mut all = true;
    for (label, p) in fleet(n, l, protocol)? {
        let (r, half_width) = match tradeoff_report(&p, n, source, cli.budget()) {
            Err(CoreError::BudgetExceeded { .. }) => sampled_tradeoff(cli, &p, n, source, samples, &mut rng)?,
            other => (other?, None),
        };
        let ok = holds(r.lhs, r.rhs, cli.tolerance);
        all &= ok;
        t.push(vec![
            n.to_string(),
            label,
            num(r.error),
            num(r.d),
            num(r.c),
            num(r.lhs),
            num(r.rhs),
            ok.to_string(),
            if r.error_measured { "measured" } else { "asserted" }.into(),
            if half_width.is_some() { "sampled" } else { "exact" }.into(),
            half_width.map(num).unwrap_or_default(),
            cli.budget.to_string(),
        ]);
    }
    report.tables.push(t);
    Ok(all)
}

/// The trade-off with costs estimated from sampled public coins, plus the
/// 95% half-width on each cost.
fn sampled_tradeoff(
    cli: &Cli,
    p: &ProtocolSpec,
    n: usize,
    source: ErrorSource,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(TradeoffReport, Option<f64>)> {
    if !n.is_multiple_of(2) {
        return Err(CoreError::Precondition(format!("n = {n} must be even")).into());
    }
    let (error, error_measured) = match source {
        ErrorSource::Asserted(e) => (e, false),
        ErrorSource::Measured => {
            let mu = make_mu(n, Which::Mu)?;
            (
                distributional_error(p, &mu.joint, |x, y| f_packed(n, x, y), cli.budget())?,
                true,
            )
        }
    };
    if !(0.0..=0.25).contains(&error) {
        return Err(CoreError::Precondition(format!("error {error} outside [0, 1/4]")).into());
    }
    let mu0 = make_mu(n, Which::Mu0)?;
    let ic = information_costs_sampled(p, &mu0.joint, samples, rng, cli.budget())?;
    let (d, c) = (ic.alice / n as f64, ic.bob);
    let lhs = d.sqrt() + (2.0 * c).sqrt();
    let rhs = tradeoff_rhs(n, error)?;
    let report = TradeoffReport {
        n,
        error,
        error_measured,
        d,
        c,
        lhs,
        rhs,
        holds: holds(lhs, rhs, cli.tolerance),
    };
    Ok((report, Some(ic.half_width)))
}

fn gap(cli: &Cli, report: &mut Report, n: usize, l: Option<usize>, protocol: Option<&Path>) -> Result<bool> {
    let mut t = Table::new(
        "transcript_gap",
        &[
            "n",
            "l",
            "error",
            "c",
            "d",
            "d1",
            "gap",
            "correctness_lb",
            "lemma_rhs",
            "patched",
            "holds",
            "mode",
            "budget",
        ],
    );
    let mut all = true;
    for (label, p) in fleet(n, l, protocol)? {
        let g = transcript_gap(&p, n, cli.budget())?;
        let ok = holds(g.gap, g.correctness_lb, cli.tolerance) && holds(g.lemma_rhs, g.gap, cli.tolerance);
        all &= ok;
        t.push(vec![
            n.to_string(),
            label,
            num(g.error),
            num(g.c),
            num(g.d),
            num(g.d1),
            num(g.gap),
            num(g.correctness_lb),
            num(g.lemma_rhs),
            g.patched.to_string(),
            ok.to_string(),
            "exact".into(),
            cli.budget.to_string(),
        ]);
    }
    report.tables.push(t);
    Ok(all)
}

/// Parses a corpus: one word per line, blank lines skipped.
fn corpus(path: &Path) -> Result<Vec<(usize, Vec<Sym>)>> {
    read(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let w: ParenString = l.trim().parse()?;
            Ok((i + 1, w.into_inner()))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn run_machine(
    algo: Algo,
    w: &[Sym],
    width: usize,
    prime_bits: u32,
    trials: usize,
    passes: Option<usize>,
    dir: Dir,
    seed: u64,
) -> Result<RunReport> {
    fn go<M: StreamMachine>(m: &M, w: &[Sym], passes: usize, dir: Dir, seed: u64) -> Result<RunReport> {
        let sched = match dir {
            Dir::Fwd => PassSchedule::forward(passes)?,
            Dir::Alt => PassSchedule::alternating(passes)?,
        };
        Ok(run(m, w, &sched, seed)?)
    }
    match algo {
        Algo::Stack => go(&StackMachine, w, passes.unwrap_or(1), dir, seed),
        Algo::Band => {
            let m = HeightBandMachine::new(width)?;
            go(&m, w, passes.unwrap_or(m.passes_needed(w.len() / 2)), dir, seed)
        }
        Algo::Freegroup => go(
            &FreeGroupMachine::new(prime_bits, trials)?,
            w,
            passes.unwrap_or(1),
            dir,
            seed,
        ),
    }
}

fn dyck_check(
    cli: &Cli,
    report: &mut Report,
    algo: Algo,
    w: usize,
    file: &Path,
    prime_bits: u32,
    trials: usize,
) -> Result<bool> {
    let mut verdicts = Table::new(
        "verdicts",
        &[
            "line",
            "length",
            "accepted",
            "passes_used",
            "max_state_bits",
            "declared_bits",
        ],
    );
    let (mut acc, mut max_bits, mut declared) = (0usize, 0usize, 0usize);
    let words = corpus(file)?;
    for (line, word) in &words {
        let r = run_machine(algo, word, w, prime_bits, trials, None, Dir::Fwd, cli.seed)?;
        acc += r.verdict.accepted() as usize;
        max_bits = max_bits.max(r.max_state_bits);
        declared = declared.max(r.declared_bits);
        verdicts.push(vec![
            line.to_string(),
            word.len().to_string(),
            r.verdict.accepted().to_string(),
            r.passes_used.to_string(),
            r.max_state_bits.to_string(),
            r.declared_bits.to_string(),
        ]);
    }
    let mut summary = Table::new(
        "summary",
        &[
            "algo",
            "lines",
            "accepted",
            "rejected",
            "max_state_bits",
            "max_declared_bits",
        ],
    );
    summary.push(vec![
        format!("{algo:?}").to_lowercase(),
        words.len().to_string(),
        acc.to_string(),
        (words.len() - acc).to_string(),
        max_bits.to_string(),
        declared.to_string(),
    ]);
    report.tables.push(verdicts);
    report.tables.push(summary);
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn stream_run(
    cli: &Cli,
    report: &mut Report,
    machine: Algo,
    passes: Option<usize>,
    dir: Dir,
    file: &Path,
    w: usize,
    prime_bits: u32,
    trials: usize,
) -> Result<bool> {
    let mut t = Table::new(
        "runs",
        &[
            "line",
            "length",
            "verdict",
            "passes_used",
            "max_state_bits",
            "declared_bits",
            "steps",
            "steps_per_symbol",
        ],
    );
    for (line, word) in corpus(file)? {
        let r = run_machine(machine, &word, w, prime_bits, trials, passes, dir, cli.seed)?;
        t.push(vec![
            line.to_string(),
            word.len().to_string(),
            format!("{:?}", r.verdict).to_lowercase(),
            r.passes_used.to_string(),
            r.max_state_bits.to_string(),
            r.declared_bits.to_string(),
            r.steps.to_string(),
            num(r.steps_per_symbol),
        ]);
    }
    report.tables.push(t);
    Ok(true)
}

#[derive(Serialize)]
struct LayoutDoc {
    index: usize,
    n: usize,
    padding: String,
    /// Alice's inputs as bit strings `x_1 … x_n`, then Bob's `(k, b)`.
    instances: Vec<(String, usize, bool)>,
    segments: Vec<SegmentDoc>,
}

#[derive(Serialize)]
struct SegmentDoc {
    kind: &'static str,
    owner: formats::PartyDoc,
    instance: usize,
    offset: usize,
    len: usize,
}

fn embed_cmd(cli: &Cli, report: &mut Report, n: usize, count: usize) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut t = Table::new("embeddings", &["index", "n", "length", "value", "member"]);
    let mut lines = String::new();
    let mut layouts = Vec::new();
    let mut ok = true;
    for index in 0..count {
        let a = random_input(&mut rng, n)?;
        let (w, layout) = embed(&a);
        let member = stack_check(&w);
        ok &= member == !a.value();
        t.push(vec![
            index.to_string(),
            n.to_string(),
            w.len().to_string(),
            (a.value() as u8).to_string(),
            member.to_string(),
        ]);
        lines.extend(w.iter().map(|s| s.to_char()));
        lines.push('\n');
        layouts.push(LayoutDoc {
            index,
            n,
            padding: layout.padding.clone(),
            instances: a.instances().iter().map(|i| (i.x_string(), i.k(), i.b())).collect(),
            segments: layout
                .segments
                .iter()
                .map(|s| SegmentDoc {
                    kind: match s.kind {
                        SegmentKind::Ascent => "ascent",
                        SegmentKind::Check => "check",
                        SegmentKind::Descent => "descent",
                    },
                    owner: s.owner.into(),
                    instance: s.instance,
                    offset: s.offset,
                    len: s.len,
                })
                .collect(),
        });
    }
    if let Some(path) = &cli.out {
        fs::write(path, &lines)?;
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".layout.json");
        fs::write(PathBuf::from(sidecar), serde_json::to_string_pretty(&layouts)? + "\n")?;
    }
    report.tables.push(t);
    Ok(ok)
}

fn compile(
    cli: &Cli,
    report: &mut Report,
    n: usize,
    w: usize,
    passes: usize,
    target: Option<usize>,
    save: Option<&Path>,
) -> Result<bool> {
    let targets: Vec<usize> = match target {
        Some(t) => vec![t],
        None => (1..=n).collect(),
    };
    let mu = make_mu(n, Which::Mu)?;
    let mu0 = make_mu(n, Which::Mu0)?;
    let mut t = Table::new(
        "compiled",
        &[
            "target",
            "w",
            "passes",
            "messages",
            "space_bits",
            "max_message_bits",
            "error",
            "ic_alice",
            "ic_bob",
            "lhs",
            "rhs",
            "holds",
        ],
    );
    let mut min_bob = f64::INFINITY;
    let mut space = 0;
    let mut all = true;
    for (i, &target) in targets.iter().enumerate() {
        let c = compile_protocol(
            HeightBandMachine::new(w)?,
            n,
            passes,
            target,
            &OtherInstances::Mu0,
            &[cli.seed],
        )?;
        space = c.space_bits;
        if i == 0 {
            if let Some(path) = save {
                fs::write(path, formats::protocol_to_json(&c.protocol, cli.budget())? + "\n")?;
            }
        }
        let p = &c.protocol;
        let err = distributional_error(p, &mu.joint, |x, y| f_packed(n, x, y), cli.budget())?;
        let ic = information_costs(p, &mu0.joint, cli.budget())?;
        min_bob = min_bob.min(ic.bob);
        let (lhs, rhs, ok) = if n.is_multiple_of(2) && err <= 0.25 {
            let r = tradeoff_report(p, n, ErrorSource::Asserted(err), cli.budget())?;
            (num(r.lhs), num(r.rhs), holds(r.lhs, r.rhs, cli.tolerance))
        } else {
            (String::new(), String::new(), true)
        };
        all &= ok;
        t.push(vec![
            target.to_string(),
            w.to_string(),
            passes.to_string(),
            p.rounds().len().to_string(),
            c.space_bits.to_string(),
            p.rounds()
                .iter()
                .map(|r| r.message_length)
                .max()
                .unwrap_or(0)
                .to_string(),
            num(err),
            num(ic.alice),
            num(ic.bob),
            lhs,
            rhs,
            ok.to_string(),
        ]);
    }
    let cap = space as f64 * passes as f64 / n as f64;
    let mut s = Table::new("summary", &["min_ic_bob", "s_t_over_n", "holds"]);
    let cap_ok = targets.len() < n || min_bob <= cap + cli.tolerance;
    s.push(vec![num(min_bob), num(cap), cap_ok.to_string()]);
    report.tables.push(t);
    report.tables.push(s);
    Ok(all && cap_ok)
}

fn quantum(
    cli: &Cli,
    report: &mut Report,
    spec: Option<&Path>,
    builtin: Option<Builtin>,
    n: Option<usize>,
    eps: Option<f64>,
    hybrid: bool,
) -> Result<bool> {
    let p: QProtocolSpec = match (spec, builtin) {
        (Some(path), _) => qprotocol_from_json(&read(path)?)?,
        (None, Some(Builtin::FullSend)) => examples::full_send(),
        (None, Some(Builtin::FixedReply)) => examples::fixed_reply(),
        (None, Some(Builtin::Constant)) => examples::constant(2, 2),
        (None, None) => return Err(Error::Config("one of --spec or --builtin is required".into())),
    };
    if let Some(n) = n {
        if n != p.n() {
            return Err(Error::Config(format!(
                "--n {n} does not match the protocol's n = {}",
                p.n()
            )));
        }
    }
    let r = q_tradeoff_report(&p, eps.map_or(ErrorSource::Measured, ErrorSource::Asserted))?;
    let ok = holds(r.lhs, r.rhs, cli.tolerance);
    let mut t = Table::new(
        "quantum_tradeoff",
        &["n", "t", "error", "qic_alice", "qic_bob", "lhs", "rhs", "holds", "mode"],
    );
    t.push(vec![
        r.n.to_string(),
        r.t.to_string(),
        num(r.error),
        num(r.qic_alice),
        num(r.qic_bob),
        num(r.lhs),
        num(r.rhs),
        ok.to_string(),
        if r.error_measured { "exact" } else { "asserted" }.into(),
    ]);
    report.tables.push(t);
    let mut all = ok;
    if hybrid {
        let mut h = Table::new(
            "hybrid",
            &["j", "l", "z", "round", "h", "aligned", "bound", "slack", "holds"],
        );
        let n = p.n();
        for j in 1..=n / 2 {
            for l in n / 2 + 1..=n {
                for z in 0..1u64 << l {
                    let rep = hybrid_check(&p, j, l, z)?;
                    for row in rep.rounds {
                        let ok = row.slack >= -1e-6;
                        all &= ok;
                        h.push(vec![
                            j.to_string(),
                            l.to_string(),
                            format!("{z:0l$b}"),
                            row.round.to_string(),
                            num(row.h),
                            num(row.aligned),
                            num(row.bound),
                            num(row.slack),
                            ok.to_string(),
                        ]);
                    }
                }
            }
        }
        report.tables.push(h);
    }
    Ok(all)
}

fn selftest(cli: &Cli, report: &mut Report) -> Result<bool> {
    let mut t = Table::new("checks", &["check", "expected", "observed", "passed"]);
    let mut check = |name: &str, expected: String, observed: String, passed: bool| {
        t.push(vec![name.into(), expected, observed, passed.to_string()]);
        passed
    };
    let mut all = true;

    let b = space_bound(1e6, 2.0, 0.0)?;
    all &= check("bound(1e6,2,0)", "3.868±0.01".into(), num(b), (b - 3.868).abs() < 0.01);

    let mu0 = make_mu(2, Which::Mu0)?;
    let ic = information_costs(&block_protocol(2, 1)?, &mu0.joint, cli.budget())?;
    all &= check(
        "block(2,1) costs",
        "(0, 1)".into(),
        format!("({}, {})", num(ic.alice), num(ic.bob)),
        ic.alice.abs() < 1e-12 && (ic.bob - 1.0).abs() < 1e-12,
    );

    let inputs = all_inputs(2, Which::Mu)?;
    let agree = inputs.iter().filter(|a| stack_check(&embed(a).0) == !a.value()).count();
    all &= check(
        "embed n=2 membership",
        inputs.len().to_string(),
        agree.to_string(),
        agree == inputs.len(),
    );

    let mut disagreements = 0;
    for len in 0..=6usize {
        for idx in 0..1u64 << (2 * len) {
            let w: Vec<Sym> = (0..len).map(|i| Sym::ALL[((idx >> (2 * i)) & 3) as usize]).collect();
            if stack_check(&w) != height_band_check(&w, 2)? {
                disagreements += 1;
            }
        }
    }
    all &= check(
        "stack = band (len ≤ 6)",
        "0".into(),
        disagreements.to_string(),
        disagreements == 0,
    );

    let q = q_tradeoff_report(&examples::full_send(), ErrorSource::Measured)?;
    all &= check(
        "quantum full-send lhs",
        "1".into(),
        num(q.lhs),
        (q.lhs - 1.0).abs() < 1e-6 && q.holds,
    );
    let h = hybrid_check(&examples::full_send(), 1, 2, 0b10)?;
    all &= check("hybrid full-send", "holds".into(), h.holds.to_string(), h.holds);

    report.tables.push(t);
    Ok(all)
}
