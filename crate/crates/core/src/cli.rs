//! Command-line front end.
//!
//! Exit codes: `verify` returns 0 when decodable and 1 on a violation;
//! `attack` returns 0 with a certificate and 3 when a stage fails;
//! `family verify` returns 1 on a counterexample. Every error exits with 2.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::attack::{
    derive_params, run_general_attack, run_warmup1, run_warmup2, singleton_witness, AttackParams, AttackReport,
    GeneralOptions, Outcome, Warmup2Params, WarmupOptions,
};
use crate::bounds::{
    binomial_entropy_bounds, bound_table_to_csv, capacity_check, chernoff_tail, theorem_bound_table, BoundParams,
};
use crate::codefile::{load_code, save_document, to_text, CodeDocument, Metadata};
use crate::constructions::{
    avg_radius_expurgate, build_set_family, expurgate_violations, greedy_distance_subcode, random_code,
    sample_set_family, verify_set_family, FamilyCheck, FamilyOptions, Precondition, RandomCodeSpec, SetFamily,
    DEFAULT_CODE_CAP, DEFAULT_UNION_CAP,
};
use crate::error::{Error, Result};
use crate::fraction::{frac, to_f64, FracArg, Fraction};
use crate::model::Code;
use crate::verifier::{
    exact_radius, is_list_decodable, sample_violation, Decodability, DecodingMode, RadiusQuery, VerifierConfig,
    DEFAULT_SUBSET_CAP,
};

#[derive(Debug, Parser)]
#[command(name = "listdec", version, about = "List-decoding verifier, constructions and attack engine")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide (p, L)-list-decodability of a code exactly.
    Verify(VerifyArgs),
    /// Largest integer radius at which a code is list-decodable.
    Radius(RadiusArgs),
    /// Build codes: random with expurgation, greedy distance subcodes, average-radius expurgation.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Build or check set families with large W-wise unions.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Run a pigeonhole attack and emit a certificate or the failed stage.
    Attack(AttackArgs),
    /// Closed-form bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Exact radius of expurgated random codes across alphabet sizes, as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Ordinary,
    Average,
}

impl From<ModeArg> for DecodingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ordinary => DecodingMode::Ordinary,
            ModeArg::Average => DecodingMode::AverageRadius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Relative radius, e.g. 2/3 or 0.25.
    #[arg(long)]
    pub p: FracArg,
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long, value_enum, default_value = "ordinary")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
    pub subset_cap: u128,
    /// Check this many random subsets instead of all of them (needs --seed).
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the code with the violation block here (structured form).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct RadiusArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long, value_enum, default_value = "ordinary")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
    pub subset_cap: u128,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum ConstructCommand {
    /// floor(q^{Rn}) uniform words, then expurgation to (p, L)-decodability.
    Random(RandomArgs),
    /// Greedy subcode with minimum distance at least ceil(alpha n).
    Greedy(GreedyArgs),
    /// Greedy subcode with minimum distance above floor(3pn/2).
    AvgExpurgate(AvgExpurgateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct RandomArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "R")]
    pub rate: FracArg,
    #[arg(long)]
    pub eps: FracArg,
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_CODE_CAP)]
    pub cap: u128,
    #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
    pub subset_cap: u128,
    /// Skip the expurgation step.
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct GreedyArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub alpha: FracArg,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct AvgExpurgateArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub p: FracArg,
    /// Run the exact (p, 2)-average-radius check first and enforce the half-size guarantee.
    #[arg(long)]
    pub verified: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// Random family of a_F-subsets of [m] with verified W-wise unions >= a_union.
    Build(FamilyBuildArgs),
    /// Check the W-wise union property of a family file.
    Verify(FamilyVerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyBuildArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub a_f: usize,
    #[arg(long)]
    pub a_union: usize,
    #[arg(long)]
    pub seed: u64,
    /// Candidate count before repair.
    #[arg(long)]
    pub target: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_UNION_CAP)]
    pub union_cap: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyVerifyArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value_t = DEFAULT_UNION_CAP)]
    pub union_cap: u128,
    /// Check this many random W-subsets instead (needs --seed).
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackMode {
    General,
    Warmup1,
    Warmup2,
    Singleton,
}

#[derive(Debug, Args, Serialize)]
pub struct AttackArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum)]
    pub mode: AttackMode,
    #[arg(long = "L", default_value_t = 2)]
    pub list_size: usize,
    /// Rate; defaults to floor(log_q |C|) / n.
    #[arg(long = "R")]
    pub rate: Option<FracArg>,
    #[arg(long)]
    pub eps: Option<FracArg>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// General: family candidate count. Warmups: family enumeration/sampling cap.
    #[arg(long)]
    pub family_cap: Option<usize>,
    /// Use R and eps as given (they must already be suitable multiples) instead of rounding.
    #[arg(long)]
    pub no_round: bool,
    /// Write the code with the certificate block here (structured form).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Exponent table over a grid of (L, R, eps), as CSV.
    Table(TableArgs),
    /// Compare h_q(p) against 1 - R.
    Capacity(CapacityArgs),
    /// Chernoff upper-tail bound.
    Chernoff(ChernoffArgs),
    /// Exact binomial ball sum against 2^{h(alpha) n}.
    Binomial(BinomialArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub list_sizes: Vec<usize>,
    #[arg(long = "R", value_delimiter = ',', required = true)]
    pub rates: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CapacityArgs {
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long = "R")]
    pub rate: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct ChernoffArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct BinomialArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "L")]
    pub list_size: usize,
    #[arg(long = "R")]
    pub rate: FracArg,
    #[arg(long)]
    pub eps: FracArg,
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u32>,
    /// Number of seeds per alphabet size.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// First seed; seeds are seed, seed+1, ...
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
    pub subset_cap: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// One CSV row of `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SweepRow {
    pub q: u32,
    pub n: usize,
    #[serde(rename = "L")]
    pub list_size: usize,
    #[serde(rename = "R")]
    pub rate: String,
    pub seed: u64,
    pub size: usize,
    pub t_star: usize,
    pub t_star_over_n: f64,
    pub target_pn: f64,
    pub attack: String,
}

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_STAGE_FAILED: i32 = 3;

pub fn run(cli: Cli) -> i32 {
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return EXIT_ERROR;
        }
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Verify(a) => cmd_verify(&a),
        Command::Radius(a) => cmd_radius(&a),
        Command::Construct(ConstructCommand::Random(a)) => cmd_construct_random(&a),
        Command::Construct(ConstructCommand::Greedy(a)) => cmd_construct_greedy(&a),
        Command::Construct(ConstructCommand::AvgExpurgate(a)) => cmd_construct_avg(&a),
        Command::Family(FamilyCommand::Build(a)) => cmd_family_build(&a),
        Command::Family(FamilyCommand::Verify(a)) => cmd_family_verify(&a),
        Command::Attack(a) => cmd_attack(&a),
        Command::Bounds(BoundsCommand::Table(a)) => cmd_bounds_table(&a),
        Command::Bounds(BoundsCommand::Capacity(a)) => cmd_bounds_capacity(&a),
        Command::Bounds(BoundsCommand::Chernoff(a)) => cmd_bounds_chernoff(&a),
        Command::Bounds(BoundsCommand::Binomial(a)) => cmd_bounds_binomial(&a),
        Command::Sweep(a) => cmd_sweep(&a),
    }
}

fn emit(format: Format, command: &str, config: &impl Serialize, result: Value, text: &str) -> Result<()> {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => {
            let doc = json!({ "command": command, "config": config, "result": result });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::Input(format!("{what} is randomized and needs --seed")))
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let code = load_code(&a.code)?;
    let query = RadiusQuery::new(a.p.0, a.list_size, a.mode.into())?;
    let (violation, proven) = match a.sample {
        Some(samples) => {
            let seed = require_seed(a.seed, "sampling")?;
            (sample_violation(&code, &query, samples, seed, crate::center::DEFAULT_CENTER_CAP)?, false)
        }
        None => {
            let config = VerifierConfig { subset_cap: a.subset_cap, ..VerifierConfig::default() };
            match is_list_decodable(&code, &query, &config)? {
                Decodability::Decodable => (None, true),
                Decodability::Violated(v) => (Some(v), true),
            }
        }
    };
    let radius = query.radius(code.n());
    let budget = query.total_budget(code.n());
    match violation {
        None => {
            let text = if proven {
                format!(
                    "decodable: ({}, {})-{} list-decodable (radius {radius}, total budget {budget})\n",
                    a.p, a.list_size, query.mode
                )
            } else {
                format!("no violation in {} sampled subsets (not a proof)\n", a.sample.unwrap_or(0))
            };
            let result = json!({ "verdict": "decodable", "proven": proven, "radius": radius, "total_budget": budget });
            emit(a.format, "verify", a, result, &text)?;
            Ok(EXIT_OK)
        }
        Some(v) => {
            if let Some(out) = &a.out {
                let mut doc = CodeDocument::new(&code, Metadata { seed: a.seed, ..Metadata::default() });
                doc.violation = Some(v.clone());
                save_document(&doc, out)?;
            }
            let text = format!(
                "violation: center {} has codewords {:?} at distances {:?} (radius {radius}, total budget {budget})\n",
                v.center, v.indices, v.distances
            );
            let result = json!({ "verdict": "violated", "proven": true, "violation": v });
            emit(a.format, "verify", a, result, &text)?;
            Ok(EXIT_VIOLATION)
        }
    }
}

fn cmd_radius(a: &RadiusArgs) -> Result<i32> {
    let code = load_code(&a.code)?;
    let config = VerifierConfig { subset_cap: a.subset_cap, ..VerifierConfig::default() };
    let r = exact_radius(&code, a.list_size, a.mode.into(), &config)?;
    let text = format!("t* = {} (t*/n = {}/{})\n", r.t_star, r.t_star, code.n());
    emit(a.format, "radius", a, json!({ "n": code.n(), "t_star": r.t_star, "witness": r.witness }), &text)?;
    Ok(EXIT_OK)
}

fn save_with_metadata(code: &Code, path: &Path, metadata: Metadata) -> Result<()> {
    if path.extension().is_some_and(|e| e == "json") {
        save_document(&CodeDocument::new(code, metadata), path)
    } else {
        write_text(path, &to_text(code))
    }
}

fn cmd_construct_random(a: &RandomArgs) -> Result<i32> {
    let spec = RandomCodeSpec { q: a.q, n: a.n, rate: a.rate.0, eps: a.eps.0, list_size: a.list_size, seed: a.seed };
    let p = spec.radius()?;
    let code = random_code(&spec, a.cap)?;
    let drawn = code.len();
    let (code, removed) = if a.raw {
        (code, Vec::new())
    } else {
        let query = RadiusQuery::ordinary(p, a.list_size)?;
        let config = VerifierConfig { subset_cap: a.subset_cap, ..VerifierConfig::default() };
        let e = expurgate_violations(&code, &query, &config)?;
        (e.code, e.removed)
    };
    let mut metadata = Metadata {
        seed: Some(a.seed),
        construction: Some(if a.raw { "random" } else { "random+expurgate" }.into()),
        ..Metadata::default()
    };
    metadata.notes.insert("p".into(), p.to_string());
    metadata.notes.insert("drawn".into(), drawn.to_string());
    metadata.notes.insert("removed".into(), removed.len().to_string());
    save_with_metadata(&code, &a.out, metadata)?;
    let text = format!("drew {drawn} words, removed {}, kept {} (p = {p})\n", removed.len(), code.len());
    let result = json!({ "drawn": drawn, "removed": removed, "size": code.len(), "p": p.to_string() });
    emit(a.format, "construct random", a, result, &text)?;
    Ok(EXIT_OK)
}

fn cmd_construct_greedy(a: &GreedyArgs) -> Result<i32> {
    let code = load_code(&a.code)?;
    let sub = greedy_distance_subcode(&code, &a.alpha.0)?;
    save_with_metadata(&sub.code, &a.out, Metadata { construction: Some("greedy".into()), ..Metadata::default() })?;
    let text = format!("kept {} of {} words\n", sub.kept.len(), code.len());
    emit(a.format, "construct greedy", a, json!({ "kept": sub.kept, "size": sub.kept.len() }), &text)?;
    Ok(EXIT_OK)
}

fn cmd_construct_avg(a: &AvgExpurgateArgs) -> Result<i32> {
    let code = load_code(&a.code)?;
    let precondition = if a.verified {
        let query = RadiusQuery::average(a.p.0, 2)?;
        if !is_list_decodable(&code, &query, &VerifierConfig::default())?.is_decodable() {
            return Err(Error::Input(format!("code is not ({}, 2)-average-radius list-decodable", a.p)));
        }
        Precondition::Verified
    } else {
        Precondition::Assumed
    };
    let sub = avg_radius_expurgate(&code, &a.p.0, precondition)?;
    save_with_metadata(
        &sub.code,
        &a.out,
        Metadata { construction: Some("avg-expurgate".into()), ..Metadata::default() },
    )?;
    let text = format!("kept {} of {} words\n", sub.kept.len(), code.len());
    emit(a.format, "construct avg-expurgate", a, json!({ "kept": sub.kept, "size": sub.kept.len() }), &text)?;
    Ok(EXIT_OK)
}

fn cmd_family_build(a: &FamilyBuildArgs) -> Result<i32> {
    let options = FamilyOptions { target: a.target, union_cap: a.union_cap };
    let family = build_set_family(a.m, a.a_f, a.a_union, a.seed, &options)?;
    if let Some(out) = &a.out {
        write_text(out, &family.to_text())?;
    }
    let text = match &a.out {
        Some(_) => format!("{} sets, W = {}, verified = {}\n", family.len(), family.union_arity, family.verified),
        None => family.to_text(),
    };
    emit(a.format, "family build", a, serde_json::to_value(&family)?, &text)?;
    Ok(EXIT_OK)
}

fn cmd_family_verify(a: &FamilyVerifyArgs) -> Result<i32> {
    let mut family = SetFamily::from_text(&fs::read_to_string(&a.family)?)?;
    let check = match a.sample {
        Some(samples) => {
            let seed = require_seed(a.seed, "sampling")?;
            match sample_set_family(&family, samples, seed) {
                Some(t) => FamilyCheck::Counterexample(t),
                None => FamilyCheck::Ok,
            }
        }
        None => verify_set_family(&mut family, a.union_cap)?,
    };
    let (text, code) = match &check {
        FamilyCheck::Ok if family.verified => ("ok: every W-wise union is large (exhaustive)\n".to_string(), EXIT_OK),
        FamilyCheck::Ok => {
            (format!("no counterexample in {} samples (not verified)\n", a.sample.unwrap_or(0)), EXIT_OK)
        }
        FamilyCheck::Counterexample(t) => (format!("counterexample: sets {t:?}\n"), EXIT_VIOLATION),
    };
    emit(a.format, "family verify", a, json!({ "check": check, "verified": family.verified }), &text)?;
    Ok(code)
}

/// `floor(log_q |C|) / n` as an exact fraction.
fn code_rate(code: &Code) -> Fraction {
    frac(crate::attack::largest_dimension(code) as i128, code.n() as i128)
}

fn cmd_attack(a: &AttackArgs) -> Result<i32> {
    let code = load_code(&a.code)?;
    let rate = a.rate.map(|r| r.0).unwrap_or_else(|| code_rate(&code));
    let need_eps = || a.eps.map(|e| e.0).ok_or_else(|| Error::Input("this attack needs --eps".into()));
    let mut params_echo = Value::Null;
    let report: Option<AttackReport>;
    let certificate = match a.mode {
        AttackMode::Singleton => {
            report = None;
            singleton_witness(&code, a.list_size)?
        }
        mode => {
            let seed = require_seed(a.seed, "this attack")?;
            let r = match mode {
                AttackMode::General => {
                    let eps = need_eps()?;
                    let params = if a.no_round {
                        AttackParams::from_multiples(code.n(), a.list_size, &rate, &eps)?
                    } else {
                        derive_params(code.n(), a.list_size, &rate, &eps)?
                    };
                    params_echo = serde_json::to_value(&params)?;
                    let family = FamilyOptions { target: a.family_cap, ..FamilyOptions::default() };
                    run_general_attack(&code, &params, &GeneralOptions { seed, family })?
                }
                AttackMode::Warmup1 => {
                    let mut options = WarmupOptions { seed, ..WarmupOptions::default() };
                    if let Some(cap) = a.family_cap {
                        options.family_cap = cap as u128;
                    }
                    run_warmup1(&code, &options)?
                }
                _ => {
                    let eps = need_eps()?;
                    let params = if a.no_round {
                        Warmup2Params::from_multiples(code.n(), &rate, &eps)?
                    } else {
                        Warmup2Params::derive(code.n(), &rate, &eps)?
                    };
                    params_echo = serde_json::to_value(&params)?;
                    let mut options = WarmupOptions { seed, ..WarmupOptions::default() };
                    if let Some(cap) = a.family_cap {
                        options.family_cap = cap as u128;
                    }
                    run_warmup2(&code, &params, &options)?
                }
            };
            match &r.outcome {
                Outcome::Certificate { certificate } => {
                    let c = certificate.clone();
                    report = Some(r);
                    c
                }
                Outcome::StageFailed { .. } => {
                    let text = format!("{}\n", r.summary());
                    emit(a.format, "attack", a, json!({ "params": params_echo, "report": r }), &text)?;
                    return Ok(EXIT_STAGE_FAILED);
                }
            }
        }
    };
    crate::attack::verify_certificate(&code, &certificate)
        .map_err(|e| Error::Internal(format!("refusing to print an invalid certificate: {e}")))?;
    if let Some(out) = &a.out {
        let mut doc = CodeDocument::new(&code, Metadata { seed: a.seed, ..Metadata::default() });
        doc.certificate = Some(certificate.clone());
        save_document(&doc, out)?;
    }
    let text = match &report {
        Some(r) => format!("{}\n", r.summary()),
        None => format!(
            "singleton_witness: certificate on codewords {:?}, distances {:?}, threshold {}\n",
            certificate.codewords, certificate.distances, certificate.threshold
        ),
    };
    let result = json!({ "params": params_echo, "report": report, "certificate": certificate });
    emit(a.format, "attack", a, result, &text)?;
    Ok(EXIT_OK)
}

fn cmd_bounds_table(a: &TableArgs) -> Result<i32> {
    let mut grid = Vec::new();
    for &l in &a.list_sizes {
        for &r in &a.rates {
            for &e in &a.eps {
                grid.push((l, r, e));
            }
        }
    }
    let csv = bound_table_to_csv(&theorem_bound_table(&grid)?)?;
    match &a.out {
        Some(path) => write_text(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}

fn cmd_bounds_capacity(a: &CapacityArgs) -> Result<i32> {
    let params = BoundParams { list_size: a.list_size, rate: a.rate, eps: a.eps, q: a.q, n: a.n };
    let r = capacity_check(&params)?;
    let text = format!(
        "p = {:.6}, h_q(p) = {:.6}, 1 - R = {:.6}, margin = {:.6}: {:?}\n{}\n",
        r.radius, r.entropy, r.capacity, r.margin, r.verdict, r.note
    );
    emit(a.format, "bounds capacity", a, serde_json::to_value(&r)?, &text)?;
    Ok(EXIT_OK)
}

fn cmd_bounds_chernoff(a: &ChernoffArgs) -> Result<i32> {
    let v = chernoff_tail(a.alpha, a.m, a.delta)?;
    emit(a.format, "bounds chernoff", a, json!({ "bound": v }), &format!("{v:e}\n"))?;
    Ok(EXIT_OK)
}

fn cmd_bounds_binomial(a: &BinomialArgs) -> Result<i32> {
    let b = binomial_entropy_bounds(a.n, a.alpha)?;
    let text = format!(
        "C(n, r) = {} <= sum = {} <= 2^(h(alpha) n) = {:.6} ({})\n",
        b.central,
        b.exact_sum,
        b.upper,
        if b.sandwich_holds() { "holds" } else { "upper side fails" }
    );
    let result = json!({
        "n": b.n, "r": b.r, "central": b.central.to_string(), "exact_sum": b.exact_sum.to_string(),
        "upper": b.upper, "lower_estimate": b.lower_estimate, "sandwich_holds": b.sandwich_holds()
    });
    emit(a.format, "bounds binomial", a, result, &text)?;
    Ok(EXIT_OK)
}

/// Rows of the sweep experiment; also used by the library tests.
pub fn sweep_rows(a: &SweepArgs) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    let config = VerifierConfig { subset_cap: a.subset_cap, ..VerifierConfig::default() };
    for &q in &a.q {
        for seed in a.seed..a.seed + a.seeds {
            let spec = RandomCodeSpec { q, n: a.n, rate: a.rate.0, eps: a.eps.0, list_size: a.list_size, seed };
            let p = spec.radius()?;
            let code = random_code(&spec, DEFAULT_CODE_CAP)?;
            let code = expurgate_violations(&code, &RadiusQuery::ordinary(p, a.list_size)?, &config)?.code;
            let t_star = exact_radius(&code, a.list_size, DecodingMode::Ordinary, &config)?.t_star;
            let attack = match derive_params(a.n, a.list_size, &a.rate.0, &a.eps.0) {
                Ok(params) => {
                    let options = GeneralOptions { seed, family: FamilyOptions::default() };
                    match run_general_attack(&code, &params, &options) {
                        Ok(r) => match r.failed_stage() {
                            None => "certificate".to_string(),
                            Some(stage) => format!("stage_failed:{stage}"),
                        },
                        Err(e) => format!("error:{}", short_error(&e)),
                    }
                }
                Err(e) => format!("not_applicable:{}", short_error(&e)),
            };
            rows.push(SweepRow {
                q,
                n: a.n,
                list_size: a.list_size,
                rate: a.rate.0.to_string(),
                seed,
                size: code.len(),
                t_star,
                t_star_over_n: t_star as f64 / a.n as f64,
                target_pn: to_f64(&p) * a.n as f64,
                attack,
            });
        }
    }
    Ok(rows)
}

fn short_error(e: &Error) -> &'static str {
    match e {
        Error::Input(_) => "input",
        Error::Parse { .. } => "parse",
        Error::Resource(_) => "resource",
        Error::Parameterization(_) => "parameterization",
        Error::Construction(_) => "construction",
        Error::Internal(_) => "internal",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let csv = sweep_csv(&sweep_rows(a)?)?;
    match &a.out {
        Some(path) => write_text(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}
