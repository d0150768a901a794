//! shiftlab: reproducible experiments over binary shift spaces.
//!
//! Every subcommand assembles a full report in memory and only then writes
//! it, atomically, so no run leaves a partial file. Identical arguments and
//! seed produce byte-identical reports.
//!
//! Exit codes: 0 ok, 2 bad config or I/O, 3 cap exceeded, 4 hypothesis not
//! met at this horizon, 5 a verification verdict failed (report still
//! written, witness inside).

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use shiftlab::chaos::{classify_pair, orbit_prefix, sample_weiss_pairs, OrbitPrefix, PointDescriptor};
use shiftlab::density::{density_report, limiting_frequency, IndexSet, Rat, SetRule};
use shiftlab::independence::{
    is_independence_set, km_independence, maximal_extension, build_i_x, BlockFamily,
    IndependenceCertificate, IndependenceOutcome,
};
use shiftlab::report::{
    density_table, entropy_table, frequency_table, write_atomic, Cell, Format, Report, Table,
};
use shiftlab::shiftspace::{
    entropy_estimate, full_shift, golden_mean, sft_from_file, ShiftSpec,
};
use shiftlab::weiss::verify::{
    cap_stability_report, lemma_one_sweep, mixing_sweep, nesting_report, ones_density_profile,
    periodic_sweep,
};
use shiftlab::weiss::xs::{independent_family, sample_rotation_params, xs_pairwise_distinct};
use shiftlab::weiss::{WeissLanguage, WeissSpec};
use shiftlab::words::Block;
use shiftlab::{Config, Error};

#[derive(Parser)]
#[command(name = "shiftlab", version, about = "Block languages, densities, independence sets, and chaos detectors for binary shift spaces")]
struct Cli {
    /// Report file path; stdout when omitted. Writes are atomic.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, default_value = "json", value_parser = ["csv", "json"])]
    format: String,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Work budget override (blocks generated / search nodes visited).
    #[arg(long, global = true)]
    cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block counts and entropy estimates over 1..=nmax.
    Entropy {
        /// golden-mean | full:r | sft:@file | weiss:step=m[,S=rule] | ix:INNER
        #[arg(long, default_value = "golden-mean")]
        spec: String,
        #[arg(long, default_value_t = 20)]
        nmax: u32,
    },
    /// Entropy-driven independence set with certificate, densities, and the
    /// limiting frequency of the characteristic language.
    Independence {
        #[arg(long, default_value = "golden-mean")]
        spec: String,
        /// Block length the theorem machinery runs at.
        #[arg(long, default_value_t = 12)]
        n: u32,
        /// Horizon for the characteristic language and its frequency table.
        #[arg(long, default_value_t = 10)]
        ix_nmax: u32,
        /// Entropy margin reserved before inverting the binary entropy.
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Verification suites for the staged construction.
    WeissVerify {
        #[arg(long, default_value_t = 3)]
        step: u32,
        #[arg(long, default_value_t = 48)]
        horizon: u32,
        /// Cap slack for the stability regeneration.
        #[arg(long, default_value_t = 8)]
        slack: u32,
        /// Block length for the periodic-density sweep.
        #[arg(long, default_value_t = 8)]
        block_len: u32,
        /// Block length for the ones-density profiles.
        #[arg(long, default_value_t = 6)]
        ones_len: u32,
        /// Gap-rule pairs to separate, each as "RULE,RULE".
        #[arg(long, default_value = "even,odd")]
        distinct: Vec<String>,
        /// Joining-gap window above the threshold in the mixing sweep.
        #[arg(long, default_value_t = 16)]
        beta_window: u32,
    },
    /// Pair classification: Li-Yorke evidence and distributional classes.
    Chaos {
        /// Sampling language; must be weiss:step=m when pairs are sampled.
        #[arg(long, default_value = "weiss:step=2")]
        spec: String,
        /// Sampled pair count (ignored with --pairs-file).
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        /// File of point-descriptor pairs, one "X;Y" per line.
        #[arg(long)]
        pairs_file: Option<PathBuf>,
        /// Orbit prefix length.
        #[arg(long, default_value_t = 10_000)]
        n: u32,
        /// Largest window length in the distribution profiles.
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        /// Append the built-in oscillating fixture pair.
        #[arg(long, default_value_t = false)]
        fixture: bool,
        /// Closeness tolerance override for the distribution classes.
        #[arg(long)]
        tol: Option<f64>,
        /// Gap threshold override for the distribution classes.
        #[arg(long)]
        gap: Option<f64>,
    },
    /// Densities of index sets and limiting symbol frequencies.
    Densities {
        /// Index set: a rule (all|even|odd|multiples:k|list:a+b|rotation:p/q),
        /// chi:BITS, or ep:PRE,PERIOD.
        #[arg(long)]
        set: Option<String>,
        /// Horizon for the density report.
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        /// Language for the limiting-frequency table.
        #[arg(long)]
        spec: Option<String>,
        #[arg(long, default_value_t = 1)]
        symbol: u8,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        /// Pairwise intersection/difference counts for the five built-in
        /// rotation parameters.
        #[arg(long, default_value_t = false)]
        rotation_family: bool,
    },
}

enum Failure {
    Core(Error),
    Verdict(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Verdict(msg) => write!(f, "verdict failed: {msg}"),
        }
    }
}

fn failure_code(f: &Failure) -> u8 {
    match f {
        Failure::Core(Error::CapExceeded { .. }) => 3,
        Failure::Core(Error::Hypothesis(_)) => 4,
        Failure::Core(_) => 2,
        Failure::Verdict(_) => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(failure_code(&f))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = Format::parse(&cli.format)?;
    let mut cfg = Config::default();
    if let Some(cap) = cli.cap {
        cfg.block_budget = cap;
        cfg.subset_budget = cap;
    }
    let mut report = match &cli.command {
        Command::Entropy { spec, nmax } => cmd_entropy(spec, *nmax, &cfg)?,
        Command::Independence {
            spec,
            n,
            ix_nmax,
            margin,
        } => {
            if let Some(m) = margin {
                cfg.km_margin = *m;
            }
            cmd_independence(spec, *n, *ix_nmax, &cfg)?
        }
        Command::WeissVerify {
            step,
            horizon,
            slack,
            block_len,
            ones_len,
            distinct,
            beta_window,
        } => cmd_weiss_verify(
            *step,
            *horizon,
            *slack,
            *block_len,
            *ones_len,
            distinct,
            *beta_window,
            &cfg,
        )?,
        Command::Chaos {
            spec,
            pairs,
            pairs_file,
            n,
            kmax,
            fixture,
            tol,
            gap,
        } => {
            if let Some(t) = tol {
                cfg.chaos_tol = *t;
            }
            if let Some(g) = gap {
                cfg.chaos_gap = *g;
            }
            cmd_chaos(spec, *pairs, pairs_file.as_deref(), *n, *kmax, *fixture, cli.seed, &cfg)?
        }
        Command::Densities {
            set,
            horizon,
            spec,
            symbol,
            kmax,
            rotation_family,
        } => cmd_densities(
            set.as_deref(),
            *horizon,
            spec.as_deref(),
            *symbol,
            *kmax,
            *rotation_family,
            &cfg,
        )?,
    };
    report.meta("seed", cli.seed);
    report.meta("format", &cli.format);
    if let Some(cap) = cli.cap {
        report.meta("cap", cap);
    }
    let failed_verdict = report
        .tables
        .iter()
        .filter(|t| t.name == "verdicts")
        .flat_map(|t| &t.rows)
        .find(|row| row.get(1) == Some(&Cell::Bool(false)))
        .map(|row| format!("{}: {}", row[0], row.get(2).map(Cell::to_string).unwrap_or_default()));
    emit(cli.out.as_deref(), format, &report)?;
    match failed_verdict {
        Some(msg) => Err(Failure::Verdict(msg)),
        None => Ok(()),
    }
}

fn emit(out: Option<&Path>, format: Format, report: &Report) -> Result<(), Failure> {
    let bytes = report.render(format)?;
    match out {
        Some(path) => write_atomic(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(Error::from)?,
    }
    Ok(())
}

/// Resolves a spec descriptor. `horizon` bounds staged generation and the
/// characteristic-language depth.
fn parse_spec(desc: &str, horizon: u32, cfg: &Config) -> Result<ShiftSpec, Error> {
    if desc == "golden-mean" {
        return Ok(golden_mean());
    }
    if let Some(r) = desc.strip_prefix("full:") {
        let r: u32 = r
            .parse()
            .map_err(|_| Error::Config(format!("bad alphabet size in {desc:?}")))?;
        return full_shift(r);
    }
    if let Some(path) = desc.strip_prefix("sft:@") {
        return sft_from_file(Path::new(path));
    }
    if desc.starts_with("weiss:") {
        let spec = parse_weiss(desc, horizon)?;
        return Ok(ShiftSpec::Weiss(Arc::new(WeissLanguage::generate(spec, cfg)?)));
    }
    if let Some(inner) = desc.strip_prefix("ix:") {
        let inner = match inner.strip_prefix('@') {
            Some(path) => first_payload_line(Path::new(path))?,
            None => inner.to_string(),
        };
        let inner_spec = parse_spec(&inner, horizon, cfg)?;
        return build_i_x(&inner_spec, horizon, cfg);
    }
    Err(Error::Config(format!("unknown spec descriptor {desc:?}")))
}

fn parse_weiss(desc: &str, horizon: u32) -> Result<WeissSpec, Error> {
    let body = desc.strip_prefix("weiss:").expect("weiss descriptor");
    let mut step: Option<u32> = None;
    let mut rule: Option<SetRule> = None;
    for part in body.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value in {desc:?}")))?;
        match key {
            "step" => {
                step = Some(value.parse().map_err(|_| {
                    Error::Config(format!("bad step in {desc:?}"))
                })?)
            }
            "S" => rule = Some(SetRule::parse(value)?),
            other => return Err(Error::Config(format!("unknown weiss key {other:?}"))),
        }
    }
    let step = step.ok_or_else(|| Error::Config(format!("{desc:?} needs step=m")))?;
    let mut spec = WeissSpec::new(step, horizon)?;
    if let Some(rule) = rule {
        spec = spec.with_rule(rule);
    }
    Ok(spec)
}

fn first_payload_line(path: &Path) -> Result<String, Error> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .ok_or_else(|| Error::Config(format!("{} holds no descriptor", path.display())))
}

fn cmd_entropy(desc: &str, nmax: u32, cfg: &Config) -> Result<Report, Failure> {
    let spec = parse_spec(desc, nmax, cfg)?;
    let est = entropy_estimate(&spec, nmax, cfg)?;
    let mut report = Report::new("entropy");
    report.meta("spec", desc);
    report.meta("nmax", nmax);
    report.push(entropy_table(&est));
    Ok(report)
}

fn certificate_digest(cert: &IndependenceCertificate) -> String {
    let mut hasher = Sha256::new();
    let j: Vec<String> = cert.j.iter().map(u32::to_string).collect();
    hasher.update(format!("J:{}\n", j.join("+")));
    for w in &cert.witnesses {
        hasher.update(format!("{w}\n"));
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn set_text(j: &[u32]) -> String {
    let parts: Vec<String> = j.iter().map(u32::to_string).collect();
    parts.join("+")
}

fn cmd_independence(desc: &str, n: u32, ix_nmax: u32, cfg: &Config) -> Result<Report, Failure> {
    let spec = parse_spec(desc, n, cfg)?;
    let km = km_independence(&spec, n, cfg)?;
    let family = BlockFamily::from_language(&spec, n, cfg)?;
    let extended = maximal_extension(&family, &km.j, cfg)?;
    let extended_cert = match is_independence_set(&family, &extended, cfg)? {
        IndependenceOutcome::Independent(cert) => cert,
        IndependenceOutcome::Refuted(_) => {
            unreachable!("greedy extensions are independence sets by construction")
        }
    };

    let mut params = Table::new(
        "parameters",
        vec!["n", "entropy_inf", "eps", "target_size"],
    );
    params.push_row(vec![
        Cell::Nat(km.n.into()),
        Cell::Float(km.entropy_inf),
        Cell::Rat(km.eps),
        Cell::Nat(km.target_size.into()),
    ]);

    let mut sets = Table::new("independence", vec!["kind", "size", "j", "digest"]);
    sets.push_row(vec![
        Cell::Text("entropy-certified".into()),
        Cell::Nat(km.j.len() as u64),
        Cell::Text(set_text(&km.j)),
        Cell::Text(certificate_digest(&km.certificate)),
    ]);
    sets.push_row(vec![
        Cell::Text("greedy-maximal".into()),
        Cell::Nat(extended.len() as u64),
        Cell::Text(set_text(&extended)),
        Cell::Text(certificate_digest(&extended_cert)),
    ]);

    let chi = Block::from_fn(n, |i| extended.binary_search(&i).is_ok());
    let dens = density_report(&IndexSet::from_chi(chi), n.into())?;

    let ix = build_i_x(&spec, ix_nmax, cfg)?;
    let freq = limiting_frequency(&ix, 1, ix_nmax, cfg)?;

    let mut report = Report::new("independence");
    report.meta("spec", desc);
    report.meta("n", n);
    report.meta("ix_nmax", ix_nmax);
    report.meta("margin", cfg.km_margin);
    report.meta("theta_1", format!("{}/{}", freq.theta_estimate.numer(), freq.theta_estimate.denom()));
    report.push(params);
    report.push(sets);
    report.push(density_table(&dens));
    report.push(frequency_table(&freq));
    Ok(report)
}

struct Verdicts {
    table: Table,
}

impl Verdicts {
    fn new() -> Verdicts {
        Verdicts {
            table: Table::new("verdicts", vec!["suite", "pass", "detail"]),
        }
    }

    fn row(&mut self, suite: impl Into<String>, pass: bool, detail: String) {
        self.table
            .push_row(vec![Cell::Text(suite.into()), Cell::Bool(pass), Cell::Text(detail)]);
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_weiss_verify(
    step: u32,
    horizon: u32,
    slack: u32,
    block_len: u32,
    ones_len: u32,
    distinct: &[String],
    beta_window: u32,
    cfg: &Config,
) -> Result<Report, Failure> {
    let spec = WeissSpec::new(step, horizon)?;
    let lang = WeissLanguage::generate(spec.clone(), cfg)?;
    let mut verdicts = Verdicts::new();

    let nesting = nesting_report(&spec, cfg)?;
    verdicts.row(
        "nesting",
        nesting.pass,
        match nesting.mismatch {
            Some((s, n)) => format!("slice mismatch at step {s}, length {n}"),
            None => format!("{} steps nested up to length {}", nesting.steps, nesting.horizon),
        },
    );

    let lemma = lemma_one_sweep(&lang)?;
    let lemma_detail = if lemma.pass {
        format!("{} attributed blocks checked", lemma.checked)
    } else {
        let sample: Vec<String> = lemma
            .violations
            .iter()
            .take(3)
            .map(|v| format!("{} (step {}, {} ones)", v.block, v.step, v.ones))
            .collect();
        format!(
            "{} of {} blocks break a counting claim: {}",
            lemma.violation_count,
            lemma.checked,
            sample.join("; ")
        )
    };
    verdicts.row("lemma-counting", lemma.pass, lemma_detail);

    let stability = cap_stability_report(&spec, slack, cfg)?;
    verdicts.row(
        "cap-stability",
        stability.pass,
        match stability.mismatch {
            Some(n) => format!("slices differ at length {n} under slack {slack}"),
            None => format!("slices invariant under cap slack {slack}"),
        },
    );

    let mixing = mixing_sweep(&lang, 2, horizon.min(12), beta_window)?;
    let mixing_detail = if mixing.pass {
        format!(
            "{} pairs, {} gaps checked, {} horizon-limited",
            mixing.pairs, mixing.checked_rows, mixing.skipped_rows
        )
    } else {
        let (u, v, beta) = &mixing.violations[0];
        format!("{u} 0^{beta} {v} missing despite gap above threshold")
    };
    verdicts.row("mixing", mixing.pass, mixing_detail);

    let periodic = periodic_sweep(&lang, block_len.min(horizon))?;
    let periodic_detail = if periodic.pass {
        format!(
            "{} blocks, {} beyond the round cap",
            periodic.blocks, periodic.skipped
        )
    } else {
        let (b, at, len) = &periodic.violations[0];
        format!("window of the {b} orbit fails at position {at}, length {len}")
    };
    verdicts.row("periodic-density", periodic.pass, periodic_detail);

    let mut ones_pass = true;
    let mut ones_detail = String::new();
    let mut profiled = 0u64;
    for b in lang.blocks_of_length(ones_len.min(horizon))? {
        let profile = ones_density_profile(&lang, &b)?;
        profiled += 1;
        if !profile.pass && ones_pass {
            ones_pass = false;
            let row = profile.rows.iter().find(|r| !r.ok).expect("failing row");
            ones_detail = format!(
                "{} exceeds the round-{} bound at prefix {}: {} > {}",
                b,
                row.step,
                row.n,
                Cell::Rat(row.density),
                Cell::Rat(row.bound)
            );
        }
    }
    if ones_pass {
        ones_detail = format!("{profiled} prefixes within their round bounds");
    }
    verdicts.row("ones-density", ones_pass, ones_detail);

    for pair in distinct {
        let (a, b) = pair
            .split_once(',')
            .ok_or_else(|| Error::Config(format!("--distinct wants RULE,RULE, got {pair:?}")))?;
        let rule_a = SetRule::parse(a)?;
        let rule_b = SetRule::parse(b)?;
        let witness = xs_pairwise_distinct(&rule_a, &rule_b, horizon.min(24).max(6), cfg)?;
        verdicts.row(
            format!("distinct({a},{b})"),
            true,
            format!(
                "separator {} (gap {}) is allowed only for {}",
                witness.separator,
                witness.beta,
                if witness.in_first { a } else { b }
            ),
        );
    }

    let mut report = Report::new("weiss-verify");
    report.meta("step", step);
    report.meta("horizon", horizon);
    report.meta("slack", slack);
    report.meta("block_len", block_len);
    report.meta("ones_len", ones_len);
    report.meta("beta_window", beta_window);
    report.push(verdicts.table);
    Ok(report)
}

fn kebab<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn load_pairs(path: &Path, n: u32) -> Result<Vec<(OrbitPrefix, OrbitPrefix)>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (x, y) = line.split_once(';').ok_or_else(|| {
            Error::Config(format!("line {}: expected X;Y, got {line:?}", i + 1))
        })?;
        pairs.push((
            orbit_prefix(&PointDescriptor::parse(x.trim())?, n)?,
            orbit_prefix(&PointDescriptor::parse(y.trim())?, n)?,
        ));
    }
    if pairs.is_empty() {
        return Err(Error::Config(format!(
            "{} holds no descriptor pairs",
            path.display()
        )));
    }
    Ok(pairs)
}

#[allow(clippy::too_many_arguments)]
fn cmd_chaos(
    desc: &str,
    pair_count: usize,
    pairs_file: Option<&Path>,
    n: u32,
    kmax: u32,
    fixture: bool,
    seed: u64,
    cfg: &Config,
) -> Result<Report, Failure> {
    let mut pairs = match pairs_file {
        Some(path) => load_pairs(path, n)?,
        None => {
            if !desc.starts_with("weiss:") {
                return Err(Failure::Core(Error::Config(format!(
                    "pair sampling needs a weiss:step=m spec, got {desc:?}; pass --pairs-file for other points"
                ))));
            }
            let spec = parse_weiss(desc, 32)?;
            if spec.rule.is_some() {
                return Err(Failure::Core(Error::Config(
                    "sampling ignores gap rules; drop S= or pass --pairs-file".into(),
                )));
            }
            let lang = WeissLanguage::generate(spec, cfg)?;
            sample_weiss_pairs(&lang, pair_count, n, seed, cfg)?
        }
    };
    if fixture {
        pairs.push((
            orbit_prefix(&PointDescriptor::Zero, n)?,
            orbit_prefix(&PointDescriptor::AlternatingRuns { factor: 4 }, n)?,
        ));
    }

    let mut verdicts = Table::new("pairs", vec!["pair", "x", "y", "li_yorke", "dc_class"]);
    let mut profiles = Table::new("profiles", vec!["pair", "k", "lower", "upper"]);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let verdict = classify_pair(x, y, kmax, cfg)?;
        verdicts.push_row(vec![
            Cell::Nat(i as u64 + 1),
            Cell::Text(x.source.clone()),
            Cell::Text(y.source.clone()),
            Cell::Text(kebab(&verdict.li_yorke)),
            Cell::Text(kebab(&verdict.dc_class)),
        ]);
        let profile = shiftlab::chaos::distribution_profile(&x.point, &y.point, kmax)?;
        for r in &profile.rows {
            profiles.push_row(vec![
                Cell::Nat(i as u64 + 1),
                Cell::Nat(r.k.into()),
                Cell::Rat(r.lower),
                Cell::Rat(r.upper),
            ]);
        }
    }

    let mut report = Report::new("chaos");
    report.meta("spec", desc);
    report.meta("n", n);
    report.meta("kmax", kmax);
    report.meta("pairs", pairs.len());
    report.meta("tol", cfg.chaos_tol);
    report.meta("gap", cfg.chaos_gap);
    if let Some(path) = pairs_file {
        report.meta("pairs_file", path.display());
    }
    report.push(verdicts);
    report.push(profiles);
    Ok(report)
}

fn cmd_densities(
    set: Option<&str>,
    horizon: u64,
    spec: Option<&str>,
    symbol: u8,
    kmax: u32,
    rotation_family: bool,
    cfg: &Config,
) -> Result<Report, Failure> {
    if set.is_none() && spec.is_none() && !rotation_family {
        return Err(Failure::Core(Error::Config(
            "nothing to do: pass --set, --spec, or --rotation-family".into(),
        )));
    }
    let mut report = Report::new("densities");
    report.meta("horizon", horizon);
    if let Some(text) = set {
        let parsed = IndexSet::parse(text)?;
        report.meta("set", text);
        report.push(density_table(&density_report(&parsed, horizon)?));
    }
    if let Some(desc) = spec {
        let parsed = parse_spec(desc, kmax, cfg)?;
        report.meta("spec", desc);
        report.meta("symbol", symbol);
        report.meta("kmax", kmax);
        report.push(frequency_table(&limiting_frequency(&parsed, symbol, kmax, cfg)?));
    }
    if rotation_family {
        let family = independent_family(&sample_rotation_params(), horizon)?;
        let mut t = Table::new(
            "rotation_family",
            vec!["param_i", "param_j", "both", "only_i", "only_j"],
        );
        for p in &family.pairs {
            t.push_row(vec![
                Cell::Rat(rot_param(&family.rules[p.i])),
                Cell::Rat(rot_param(&family.rules[p.j])),
                Cell::Nat(p.both),
                Cell::Nat(p.only_i),
                Cell::Nat(p.only_j),
            ]);
        }
        report.push(t);
    }
    Ok(report)
}

fn rot_param(rule: &SetRule) -> Rat {
    match rule {
        SetRule::Rotation { p, q } => Rat::new(*p, *q),
        other => unreachable!("rotation family holds rotation rules, got {other:?}"),
    }
}
