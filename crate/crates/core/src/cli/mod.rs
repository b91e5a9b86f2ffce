//! Configuration-driven commands. Each command writes its artifacts under
//! the output directory and returns a [`Status`] that the binary turns into
//! an exit code.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

pub use config::{Caps, CensusConfig, DominateConfig, RunConfig, SimulateConfig, SweepConfig, SCHEMA_VERSION};

use crate::action::{function_battery, psd_battery, symmetric_battery, FiniteAction, Observable};
use crate::dominance::{
    limit_diagnostics, lower_estimate_check, write_reports_csv, DominanceReport, LevelEvaluation, LimitRow,
    LowerEstimateRow,
};
use crate::error::{Error, Result};
use crate::group::GroupKind;
use crate::measure::write_measure_csv;
use crate::omega::{
    biinvariant_folner_size, lamplighter_folner, right_folner_size, Chain, ChainManifest, FolnerFamily, StatusManifest,
};
use crate::rational::{parse_rational, to_f64};
use crate::schedule::{Schedule, ScheduleConfig};
use crate::set::{read_set, write_set, ExtractionStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Budget,
    Fail,
}

impl Status {
    /// 0 pass, 2 fail, 3 budget.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Budget => 3,
        }
    }

    /// A failure outranks a budget stop, which outranks a pass.
    fn join(self, other: Status) -> Status {
        self.max(other)
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

#[derive(Debug, Parser)]
#[command(name = "ergodom", version, about = "Exact dominance certificates for ergodic averages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate Følner sets and compare sizes with closed forms.
    Census(CommonArgs),
    /// Build the chain and write its manifest and sets.
    Chain(CommonArgs),
    /// Certify the measure comparison inequality per level.
    Dominate(CommonArgs),
    /// Run the action diagnostics on a finite quotient.
    Simulate(CommonArgs),
    /// Dominance reports across schedule variants.
    Sweep(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CommonArgs {
    /// Loads the config and applies the flag overrides.
    pub fn resolve(&self) -> Result<(RunConfig, PathBuf)> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(cap) = self.cap {
            cfg.caps.set = cap;
        }
        if let Some(depth) = self.depth {
            cfg.schedule.depth = depth;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.validate()?;
        let out = self
            .out
            .clone()
            .or_else(|| cfg.out.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        Ok((cfg, out))
    }
}

/// Parses `args`, runs the command and returns the process exit code.
/// Errors exit with 3 when a size cap was hit and 1 otherwise.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let (common, cmd): (&CommonArgs, fn(&RunConfig, &Path) -> Result<Outcome>) = match &cli.command {
        Command::Census(a) => (a, cmd_census),
        Command::Chain(a) => (a, cmd_chain),
        Command::Dominate(a) => (a, cmd_dominate),
        Command::Simulate(a) => (a, cmd_simulate),
        Command::Sweep(a) => (a, cmd_sweep),
    };
    match common.resolve().and_then(|(cfg, out)| cmd(&cfg, &out)) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            outcome.status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e.root(), Error::ResourceLimit { .. }) {
                Status::Budget.exit_code()
            } else {
                1
            }
        }
    }
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn level_of(e: &Error) -> Option<usize> {
    match e {
        Error::AtLevel { level, .. } => Some(*level),
        _ => None,
    }
}

/// Builds the configured chain. A size cap hit at level `L ≥ 2` yields the
/// chain of depth `L − 1` with a budget status.
pub fn build_chain(cfg: &RunConfig) -> Result<Chain> {
    let sched = Schedule::from_config(&cfg.schedule)?;
    let cap = cfg.caps.set;
    let attempt = |s: &Schedule| -> Result<Chain> {
        if cfg.folner_files.is_empty() {
            Chain::build(cfg.folner, &cfg.chain, s, cap)
        } else {
            let sets = cfg
                .folner_files
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let file = fs::File::open(p).map_err(|e| Error::Io(format!("{p}: {e}")))?;
                    Ok((i as u64 + 1, read_set(std::io::BufReader::new(file))?))
                })
                .collect::<Result<Vec<_>>>()?;
            Chain::from_sets(sets, s, cap)
        }
    };
    match attempt(&sched) {
        Err(e) if matches!(e.root(), Error::ResourceLimit { .. }) && level_of(&e).is_some_and(|l| l >= 2) => {
            let level = level_of(&e).expect("checked above");
            let mut chain = attempt(&sched.with_depth(level - 1))?;
            chain.status = ExtractionStatus::Budget { level, best: None, reason: e.root().to_string() };
            Ok(chain)
        }
        other => other,
    }
}

fn chain_status(chain: &Chain) -> Status {
    if chain.is_complete() {
        Status::Pass
    } else {
        Status::Budget
    }
}

fn heisenberg_box_size(n: u64) -> BigUint {
    // (2n+1)² pairs (a, b); 2n²+1 values of c, one fewer when ab is odd
    let n = BigUint::from(n);
    let side = &n * 2u32 + 1u32;
    let odd = (&n + 1u32) / 2u32 * 2u32;
    &side * &side * (&n * &n * 2u32 + 1u32) - &odd * &odd
}

fn zd_ball_size(dim: usize, n: u64) -> BigUint {
    // Σ_k 2^k C(d,k) C(n,k)
    let binom = |a: u64, k: u64| -> BigUint {
        if k > a {
            return BigUint::from(0u32);
        }
        (0..k).fold(BigUint::from(1u32), |acc, i| acc * (a - i) / (i + 1))
    };
    (0..=dim as u64).map(|k| (BigUint::from(1u32) << k) * binom(dim as u64, k) * binom(n, k)).sum()
}

/// Closed-form size of `family` at `n`, when one is known.
fn family_formula(family: &FolnerFamily, n: u64) -> Option<BigUint> {
    match *family {
        FolnerFamily::ZdCube { dim } => Some((BigUint::from(n) * 2u32 + 1u32).pow(dim as u32)),
        FolnerFamily::ZdPolyGrowth { dim } => {
            Some(((BigUint::from(1u32) << (n * n + 1)) + 1u32).pow(dim as u32))
        }
        FolnerFamily::HeisenbergBox => Some(heisenberg_box_size(n)),
        FolnerFamily::Lamplighter => Some(biinvariant_folner_size(n)),
        FolnerFamily::Ball { group: GroupKind::Zd { dim } } => Some(zd_ball_size(dim, n)),
        FolnerFamily::Ball { .. } => None,
    }
}

/// `n,set,size,formula,match` for `n ≤ census.max_n`.
pub fn cmd_census(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let cap = cfg.caps.set;
    let mut csv = String::from("n,set,size,formula,match\n");
    let mut status = Status::Pass;
    let mut row = |csv: &mut String, n: u64, set: &str, size: usize, formula: Option<BigUint>| {
        let (f, m) = match formula {
            Some(f) => {
                let ok = f == BigUint::from(size);
                if !ok {
                    status = Status::Fail;
                }
                (f.to_string(), ok.to_string())
            }
            None => (String::new(), "na".into()),
        };
        writeln!(csv, "{n},{set},{size},{f},{m}").expect("writing to a String");
    };
    let mut reached = 0;
    for n in 1..=cfg.census.max_n {
        let sets = match cfg.folner {
            FolnerFamily::Lamplighter => lamplighter_folner(n, cap).map(|(r, f)| vec![("right", r), ("two_sided", f)]),
            fam => fam.set(n, cap).map(|f| vec![("folner", f)]),
        };
        match sets {
            Ok(sets) => {
                for (name, s) in sets {
                    let formula = match name {
                        "right" => Some(right_folner_size(n)),
                        _ => family_formula(&cfg.folner, n),
                    };
                    row(&mut csv, n, name, s.len(), formula);
                }
                reached = n;
            }
            Err(e) if matches!(e.root(), Error::ResourceLimit { .. }) => {
                status = status.join(Status::Budget);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let path = write_atomic(out, "census.csv", csv.as_bytes())?;
    Ok(Outcome { status, files: vec![path], summary: format!("census: {status:?} through n = {reached}") })
}

/// Manifest JSON, one listing per set and `ω` as CSV.
pub fn cmd_chain(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let chain = build_chain(cfg)?;
    let mut manifest: ChainManifest = chain.manifest()?;
    let mut files = Vec::new();
    for (lvl, lm) in chain.levels.iter().zip(manifest.levels.iter_mut()) {
        for (set, name, slot) in [
            (&lvl.folner, format!("sets/level{}_folner.txt", lvl.level), &mut lm.folner_file),
            (&lvl.envelope, format!("sets/level{}_envelope.txt", lvl.level), &mut lm.envelope_file),
        ] {
            let mut buf = Vec::new();
            write_set(set, &mut buf)?;
            files.push(write_atomic(out, &name, &buf)?);
            *slot = Some(name);
        }
    }
    if chain.depth() > 0 {
        let mut buf = Vec::new();
        write_measure_csv(&chain.omega(chain.depth())?, &mut buf)?;
        files.push(write_atomic(out, "omega.csv", &buf)?);
    }
    files.insert(0, write_atomic(out, "manifest.json", &json_bytes(&manifest)?)?);
    let status = chain_status(&chain);
    Ok(Outcome { status, files, summary: format!("chain: {status:?}, depth {}", chain.depth()) })
}

#[derive(Debug, Clone, Serialize)]
struct LowerEstimateLevel {
    level: usize,
    holds: bool,
    rows: Vec<LowerEstimateRow>,
}

#[derive(Debug, Clone, Serialize)]
struct DominateOutput {
    schema: u32,
    group: GroupKind,
    schedule: ScheduleConfig,
    chain_status: StatusManifest,
    reports: Vec<DominanceReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    lower_estimate: Vec<LowerEstimateLevel>,
    limits: Vec<LimitRow>,
}

struct Reports {
    chain: Chain,
    reports: Vec<DominanceReport>,
    lower: Vec<LowerEstimateLevel>,
    status: Status,
}

fn compute_reports(cfg: &RunConfig) -> Result<Reports> {
    let chain = build_chain(cfg)?;
    let mut status = chain_status(&chain);
    let k = cfg.dominate.truncation.unwrap_or(chain.depth()).min(chain.depth());
    let levels: Vec<usize> = match &cfg.dominate.levels {
        Some(ls) => ls.clone(),
        None => (1..=k).collect(),
    };
    let mut reports = Vec::new();
    let mut lower = Vec::new();
    for n in levels {
        if n > k {
            status = status.join(Status::Budget);
            continue;
        }
        let big_n = match cfg.dominate.cesaro_length {
            Some(len) => len,
            None => chain.schedule.big_n(n)?,
        };
        let ev = LevelEvaluation::compute_with_length(&chain, n, k, big_n, cfg.caps.support)?;
        let report = DominanceReport::from_evaluation(&ev, &chain)?;
        if !report.passed() {
            status = Status::Fail;
        }
        if cfg.dominate.lower_estimate {
            let rows = lower_estimate_check(&ev, &chain)?;
            let holds = rows.iter().all(|r| r.holds);
            if !holds {
                status = Status::Fail;
            }
            lower.push(LowerEstimateLevel { level: n, holds, rows });
        }
        reports.push(report);
    }
    Ok(Reports { chain, reports, lower, status })
}

/// The dominance JSON document, its CSV summary and the overall status.
pub fn dominate_artifacts(cfg: &RunConfig) -> Result<(Status, String, String)> {
    let Reports { chain, reports, lower, status } = compute_reports(cfg)?;
    let limit_levels = 1..=chain.schedule.depth().max(8);
    let output = DominateOutput {
        schema: SCHEMA_VERSION,
        group: chain.kind,
        schedule: chain.schedule.to_config(),
        chain_status: StatusManifest::from(&chain.status),
        limits: limit_diagnostics(&chain.schedule, limit_levels)?,
        reports,
        lower_estimate: lower,
    };
    let mut csv = Vec::new();
    write_reports_csv(&output.reports, &mut csv)?;
    let json = String::from_utf8(json_bytes(&output)?).expect("serde_json emits UTF-8");
    let csv = String::from_utf8(csv).expect("CSV is ASCII");
    Ok((status, json, csv))
}

/// `dominance.json` and `dominance.csv`; fails iff some level fails.
pub fn cmd_dominate(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let (status, json, csv) = dominate_artifacts(cfg)?;
    let files = vec![
        write_atomic(out, "dominance.json", json.as_bytes())?,
        write_atomic(out, "dominance.csv", csv.as_bytes())?,
    ];
    let verdicts = csv
        .lines()
        .skip(1)
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            format!("level {}: {}", cols[0], cols[7])
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Outcome { status, files, summary: format!("dominate: {status:?} ({verdicts})") })
}

fn named(prefix: &'static str, v: Vec<Observable>) -> impl Iterator<Item = (String, Observable)> {
    v.into_iter().enumerate().map(move |(i, o)| (format!("{prefix}{i}"), o))
}

#[derive(Debug, Clone, Serialize)]
struct SimulateSummary {
    schema: u32,
    level: usize,
    c_emp: Option<String>,
    support_generates: bool,
    observables: usize,
    dominance_violations: usize,
    convergence_failures: usize,
    weak11_violations: usize,
    kadison_violations: usize,
}

/// Dominance transfer, convergence, weak (1,1) and Kadison tables on the
/// configured quotient.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let sim = cfg.simulate.as_ref().ok_or_else(|| Error::invalid("config has no simulate section"))?;
    let act = FiniteAction::new(sim.action.quotient)?;
    let dim = act.size();
    let chain = build_chain(cfg)?;
    if chain.kind != act.quotient().kind() {
        return Err(Error::GroupMismatch { left: chain.kind, right: act.quotient().kind() });
    }
    let n = sim.level;
    let k = chain.depth();
    let report = DominanceReport::from_evaluation(
        &LevelEvaluation::compute(&chain, n, k, cfg.caps.support)?,
        &chain,
    )?;
    let c_emp = report.c_emp_exact()?;
    let omega = chain.omega(k)?;
    let folner = &chain.level(n)?.folner;
    let big_n = chain.schedule.big_n(n)?;

    let mut observables: Vec<(String, Observable)> = sim
        .action
        .observables
        .iter()
        .enumerate()
        .map(|(i, s)| Ok((format!("config{i}"), s.build(dim)?)))
        .collect::<Result<_>>()?;
    observables.extend(named("battery", function_battery(dim, sim.battery, cfg.seed)));
    observables.extend(named("psd", psd_battery(dim, sim.matrix_battery, cfg.seed.wrapping_add(1))));

    let mut status = Status::Pass;
    let mut summary = SimulateSummary {
        schema: SCHEMA_VERSION,
        level: n,
        c_emp: c_emp.as_ref().map(BigRational::to_string),
        support_generates: act.support_generates(&omega.support())?,
        observables: observables.len(),
        dominance_violations: 0,
        convergence_failures: 0,
        weak11_violations: 0,
        kadison_violations: 0,
    };

    let mut dom_csv = String::from("observable,kind,holds,slack\n");
    if let Some(c) = &c_emp {
        for (name, x) in observables.iter().filter(|(_, x)| x.is_positive()) {
            let check = act.check_dominance(folner, &omega, big_n, c, x)?;
            if !check.holds {
                summary.dominance_violations += 1;
            }
            let kind = if x.is_matrix() { "matrix" } else { "function" };
            writeln!(dom_csv, "{name},{kind},{},{}", check.holds, check.slack).expect("String");
        }
    } else {
        status = Status::Fail;
    }

    let family = sim.convergence_family.unwrap_or(cfg.folner);
    let weights = sim
        .convergence_indices
        .iter()
        .map(|&m| Ok((m, act.folner_weights(&family, m, cfg.caps.set)?)))
        .collect::<Result<Vec<_>>>()?;
    let tol = parse_rational(&sim.tolerance)?;
    let mut conv_csv = String::from("observable,n,distance,distance_f64\n");
    for (name, x) in &observables {
        let rows = act.convergence_diagnostics(&weights, x)?;
        if rows.last().is_some_and(|r| r.distance > tol) {
            summary.convergence_failures += 1;
        }
        for r in rows {
            writeln!(conv_csv, "{name},{},{},{:e}", r.n, r.distance, to_f64(&r.distance)).expect("String");
        }
    }

    let mut weak_csv = String::from("observable,eps,good_states,complement_mass,bound,holds\n");
    if let Some(c) = &c_emp {
        for (name, x) in observables.iter().filter(|(_, x)| !x.is_matrix() && x.is_positive()) {
            for eps in &sim.weak11_eps {
                let probe = act.weak11_probe(&weights, x, &parse_rational(eps)?, c)?;
                if !probe.holds {
                    summary.weak11_violations += 1;
                }
                writeln!(
                    weak_csv,
                    "{name},{eps},{},{},{},{}",
                    probe.good_states.len(),
                    probe.complement_mass,
                    probe.bound,
                    probe.holds
                )
                .expect("String");
            }
        }
    }

    let mut kad_csv = String::from("observable,holds,min_pivot\n");
    let kadison_inputs = observables
        .iter()
        .filter(|(_, x)| x.is_matrix())
        .cloned()
        .chain(named("symmetric", symmetric_battery(dim, sim.kadison_battery, cfg.seed.wrapping_add(2))));
    for (name, x) in kadison_inputs {
        let check = act.kadison_check(folner, &x)?;
        if !check.holds {
            summary.kadison_violations += 1;
        }
        writeln!(kad_csv, "{name},{},{}", check.holds, check.slack).expect("String");
    }

    if summary.dominance_violations + summary.convergence_failures + summary.weak11_violations + summary.kadison_violations
        > 0
    {
        status = Status::Fail;
    }
    status = status.join(chain_status(&chain));
    let files = vec![
        write_atomic(out, "simulate.json", &json_bytes(&summary)?)?,
        write_atomic(out, "simulate_dominance.csv", dom_csv.as_bytes())?,
        write_atomic(out, "convergence.csv", conv_csv.as_bytes())?,
        write_atomic(out, "weak11.csv", weak_csv.as_bytes())?,
        write_atomic(out, "kadison.csv", kad_csv.as_bytes())?,
    ];
    Ok(Outcome {
        status,
        files,
        summary: format!(
            "simulate: {status:?} ({} observables, {} dominance, {} convergence, {} weak11, {} kadison violations)",
            summary.observables,
            summary.dominance_violations,
            summary.convergence_failures,
            summary.weak11_violations,
            summary.kadison_violations
        ),
    })
}

/// One dominance table per schedule variant plus its limit diagnostics.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| Error::invalid("config has no sweep section"))?;
    let mut status = Status::Pass;
    let mut csv = String::from(
        "variant,t_base,n_base,eps_scale,depth,level,index,folner_size,envelope_size,N,min_density,bound,c_emp,verdict,taint\n",
    );
    let mut limits_csv = String::from("variant,n,r_n_times_n,power,exponential,gap,limit_constant\n");
    for (i, sc) in sweep.schedules.iter().enumerate() {
        let mut variant = cfg.clone();
        variant.schedule = sc.clone();
        let result = compute_reports(&variant);
        let Reports { reports, status: s, .. } = match result {
            Ok(r) => r,
            Err(e) if matches!(e.root(), Error::ResourceLimit { .. }) => {
                status = status.join(Status::Budget);
                continue;
            }
            Err(e) => return Err(e),
        };
        status = status.join(s);
        for r in &reports {
            writeln!(
                csv,
                "{i},{},{},{},{},{},{},{},{},{},{}/{},{}/{},{},{},{}",
                sc.t_base,
                sc.n_base,
                sc.eps_scale,
                sc.depth,
                r.level,
                r.index,
                r.folner_size,
                r.envelope_size,
                r.big_n,
                r.min_scaled.num,
                r.min_scaled.den,
                r.bound.num,
                r.bound.den,
                r.c_emp.as_ref().map_or_else(|| "inf".into(), |c| format!("{}/{}", c.num, c.den)),
                if r.passed() { "pass" } else { "fail" },
                r.taint
            )
            .expect("String");
        }
        for row in limit_diagnostics(&Schedule::from_config(sc)?, sweep.limit_levels.iter().copied())? {
            writeln!(
                limits_csv,
                "{i},{},{:e},{:e},{:e},{:e},{:e}",
                row.n, row.r_n_times_n, row.power, row.exponential, row.gap, row.limit_constant
            )
            .expect("String");
        }
    }
    let files = vec![
        write_atomic(out, "sweep.csv", csv.as_bytes())?,
        write_atomic(out, "limits.csv", limits_csv.as_bytes())?,
    ];
    Ok(Outcome { status, files, summary: format!("sweep: {status:?} over {} schedules", sweep.schedules.len()) })
}
