//! Command line boundary. Computing subcommands emit one JSON report
//! envelope on stdout (or into --output); object-producing subcommands
//! (flatten, sampled functions, sampled squares, fl build) emit the plain
//! text formats understood by `textio`. Cell coordinates on this boundary
//! are 0-based; axis names and Latin entries stay 1-based like the text
//! formats. Exit codes: 0 ok, 1 failed validation or internal invariant,
//! 2 bad input or cap, 64 unusable command line.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num::BigUint;

use crate::boolfn::{BoolFunction, KBox};
use crate::caps::SearchCaps;
use crate::cover::{nondet_cc, BoxCover};
use crate::decompose::{
    cube_decompose_3, decompose_simple, decompose_separating, n_recursion, BoundCertificate,
    FlatteningRankProfile,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::fooling::{
    is_fooling_set, max_fooling_set, rank_vs_fooling_check, sample_fooling_function,
    union_bound_threshold,
};
use crate::latin::{latin_enumerate, latin_function, latin_hardness_experiment, latin_sample};
use crate::partition::{parse_axes, Bipartition, SeparatingCollection};
use crate::protocol::{det_cc_exact, partition_argument_bound};
use crate::relation::{
    build_relation, inner_product_function, rel_det_cc_exact, silent_induced_check,
    zero_comm_check, KRelation, MaskRelation, OutputRelation, RelOutput,
};
use crate::report::{digest_parts, to_results, OutputFormat, Report, RunConfig};
use crate::tensor::{eval_decomposition, Decomposition, KTensor};
use crate::textio::{
    bool_function_from_tensor, parse_latin, parse_tensor, render_latin, render_tensor,
    tensor_from_bool_function, TensorData,
};
use crate::verify::{run_suites, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "ccb",
    version,
    about = "Exact tools for number-in-hand multiparty communication: tensors and rank \
             certificates, protocol search, covers, fooling sets, Latin square functions, \
             and three-clause relations."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Output format; tsv applies only to histogram tables.
    #[arg(long, global = true, value_name = "json|tsv", default_value = "json")]
    format: String,

    /// Worker threads for the parallel suites.
    #[arg(long, global = true, env = "CCB_THREADS", default_value_t = 1, value_name = "N")]
    threads: usize,

    /// Search cap overrides, comma separated name=value pairs.
    #[arg(long, global = true, value_name = "NAME=VALUE,...")]
    cap: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact rank of a matrix, flattening a k-tensor first if asked.
    Rank(RankArgs),
    /// Flatten a k-tensor by grouping axes; prints tensor text.
    Flatten(FlattenArgs),
    /// Build a checked decomposition certificate for a tensor.
    Decompose(DecomposeArgs),
    /// Recursive term-count bound from a separating collection.
    Nbound(NboundArgs),
    /// Exact deterministic broadcast cost of a 0/1 tensor.
    Dcc(FunctionArgs),
    /// Exact covers for both colors and the combined guess-and-verify cost.
    Ndcc(FunctionArgs),
    /// Best two-camp bound: max over bipartitions of the induced exact cost.
    Lpar(FunctionArgs),
    /// Fooling sets: search, checking, rank identities, seeded sampling.
    #[command(subcommand)]
    Fooling(FoolingCmd),
    /// Latin squares: enumeration and seeded sampling.
    #[command(subcommand)]
    Latin(LatinCmd),
    /// Functions carved from Latin squares and their cover census.
    #[command(subcommand)]
    Fl(FlCmd),
    /// Three-clause output relations: build, silence checks, exact cost.
    #[command(subcommand)]
    Relation(RelationCmd),
    /// Re-run the consistency suites, or re-check an emitted certificate.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RankArgs {
    /// Tensor text file.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Axis groups, e.g. 12,3 (1-based digits; +-separated past axis 9).
    #[arg(long, value_name = "GROUPS")]
    groups: Option<String>,
}

#[derive(Args)]
struct FlattenArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Axis groups, e.g. 12,3; one group per output axis.
    #[arg(long, value_name = "GROUPS")]
    groups: String,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// cube3, simple, or separating.
    #[arg(long, value_name = "METHOD")]
    method: String,
    /// Separating collection, e.g. "12|34,13|24"; defaults to singletons.
    #[arg(long, value_name = "MEMBERS")]
    collection: Option<String>,
}

#[derive(Args)]
struct NboundArgs {
    /// Arity, when bounds are given directly.
    #[arg(long, value_name = "K")]
    k: Option<usize>,
    /// Separating collection, e.g. "12|34,13|24".
    #[arg(long, value_name = "MEMBERS")]
    collection: String,
    /// One rank bound per member, comma separated.
    #[arg(long, value_name = "R1,R2,...", conflicts_with = "input")]
    bounds: Option<String>,
    /// Tensor whose flattening ranks supply the bounds.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct FunctionArgs {
    /// 0/1 tensor text file.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum FoolingCmd {
    /// Largest b-fooling set, exact clique search.
    Find {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Color the set must hold, 0 or 1.
        #[arg(long)]
        b: u8,
    },
    /// Check a claimed fooling set.
    Check {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        b: u8,
        /// Cells, 0-based: "0,0,0;1,1,1".
        #[arg(long, value_name = "CELLS")]
        set: String,
    },
    /// Rank identities of the mixture matrix over a fooling set.
    Rankcheck {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        b: u8,
        #[arg(long, value_name = "CELLS")]
        set: String,
    },
    /// Seeded random function with an all-ones diagonal; prints tensor text.
    Sample {
        /// Bits per player; the cube has side 2^n.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_name = "q|gf2", default_value = "q")]
        field: String,
    },
    /// Smallest t where the counting argument goes strict for n-bit sides.
    Threshold {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 4096, value_name = "T")]
        t_max: u64,
    },
}

#[derive(Subcommand)]
enum LatinCmd {
    /// All squares of dimension m (full listing capped at m <= 4).
    Enumerate {
        #[arg(long)]
        m: usize,
        /// Report the count only; allows m = 5.
        #[arg(long)]
        count_only: bool,
    },
    /// Seeded random square; prints latin text.
    Sample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum FlCmd {
    /// Tensor of the square's cell-consistency function; prints tensor text.
    Build {
        /// Latin text file.
        #[arg(long, value_name = "FILE")]
        latin: PathBuf,
        #[arg(long, value_name = "q|gf2", default_value = "gf2")]
        field: String,
    },
    /// Cover-size census over every square of dimension m.
    Experiment {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Args)]
struct RelationInput {
    /// Clause between players 1 and 2: 0/1 tensor, arity 2.
    #[arg(long, value_name = "FILE")]
    f1: Option<PathBuf>,
    /// Clause between players 1 and 3.
    #[arg(long, value_name = "FILE")]
    f2: Option<PathBuf>,
    /// Clause between players 2 and 3.
    #[arg(long, value_name = "FILE")]
    f3: Option<PathBuf>,
    /// Use the n-bit inner product as all three clauses.
    #[arg(long, value_name = "N", conflicts_with_all = ["f1", "f2", "f3"])]
    ip: Option<u32>,
}

#[derive(Subcommand)]
enum RelationCmd {
    /// Assemble the relation and print its dense valid-output masks.
    Build(RelationInput),
    /// Silent answering on one bipartition, or on all of them.
    Check {
        #[command(flatten)]
        rel: RelationInput,
        /// Bipartition such as "1|23"; omitted means all three.
        #[arg(long, value_name = "PARTITION")]
        partition: Option<String>,
    },
    /// Exact deterministic cost of solving the relation.
    Dcc(RelationInput),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run; repeatable; "all" (the default) runs every suite.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    /// Latin-square scale knob for the suites.
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Base seed for the suites' random batches.
    #[arg(long, default_value_t = 0xccb)]
    seed: u64,
    /// Certificate report (JSON) to re-check instead of running suites.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["suites", "m", "seed"])]
    certificate: Option<PathBuf>,
    /// Tensor the certificate talks about.
    #[arg(long, value_name = "FILE", requires = "certificate")]
    input: Option<PathBuf>,
}

/// Body plus the process exit code; 0 unless a validation came back false.
struct Outcome {
    body: String,
    exit: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, exit: 0 }
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if let Err(e) = write_body(&cli, &out.body) {
                report_error(&e);
                return e.exit_code();
            }
            out.exit
        }
        Err(e) => {
            report_error(&e);
            e.exit_code()
        }
    }
}

fn report_error(e: &Error) {
    let obj = serde_json::json!({"error": {"kind": e.kind(), "message": e.to_string()}});
    eprintln!("{}", serde_json::to_string_pretty(&obj).expect("error objects serialize"));
}

fn write_body(cli: &Cli, body: &str) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

struct Ctx {
    caps: SearchCaps,
    threads: usize,
    format: OutputFormat,
}

impl Ctx {
    fn report(
        &self,
        command: &str,
        parts: &[Vec<u8>],
        seed: Option<u64>,
        field: Option<FieldTag>,
        results: serde_json::Value,
        started: Instant,
    ) -> String {
        let refs: Vec<&[u8]> = parts.iter().map(|p| p.as_slice()).collect();
        let config = RunConfig {
            seed,
            threads: self.threads,
            field,
            caps: self.caps.clone(),
            format: self.format,
        };
        Report::build(command, digest_parts(&refs), config, results, started).to_json()
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let format: OutputFormat = cli.format.parse()?;
    if format == OutputFormat::Tsv && !matches!(cli.command, Command::Fl(FlCmd::Experiment { .. }))
    {
        return Err(Error::precondition(
            "tsv output applies only to `fl experiment` histograms",
        ));
    }
    let mut caps = SearchCaps::default();
    if let Some(spec) = &cli.cap {
        caps = caps.with_overrides(spec)?;
    }
    if cli.threads == 0 {
        return Err(Error::precondition("--threads must be at least 1"));
    }
    let ctx = Ctx {
        caps,
        threads: cli.threads,
        format,
    };
    match &cli.command {
        Command::Rank(a) => cmd_rank(&ctx, a),
        Command::Flatten(a) => cmd_flatten(a),
        Command::Decompose(a) => cmd_decompose(&ctx, a),
        Command::Nbound(a) => cmd_nbound(&ctx, a),
        Command::Dcc(a) => cmd_dcc(&ctx, a),
        Command::Ndcc(a) => cmd_ndcc(&ctx, a),
        Command::Lpar(a) => cmd_lpar(&ctx, a),
        Command::Fooling(c) => cmd_fooling(&ctx, c),
        Command::Latin(c) => cmd_latin(&ctx, c),
        Command::Fl(c) => cmd_fl(&ctx, c),
        Command::Relation(c) => cmd_relation(&ctx, c),
        Command::Verify(a) => cmd_verify(&ctx, a),
    }
}

fn read_text(path: &PathBuf) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_tensor(path: &PathBuf) -> Result<(TensorData, Vec<u8>)> {
    let text = read_text(path)?;
    let t = parse_tensor(&text)?;
    Ok((t, text.into_bytes()))
}

fn load_function(path: &PathBuf) -> Result<(BoolFunction, FieldTag, Vec<u8>)> {
    let (t, bytes) = load_tensor(path)?;
    let f = bool_function_from_tensor(&t)?;
    Ok((f, t.field(), bytes))
}

fn parse_groups(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(',').map(parse_axes).collect()
}

/// "0,0,0;1,1,1" into cells, 0-based coordinates.
fn parse_cells(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for cell in s.split(';') {
        let cell = cell.trim();
        if cell.is_empty() {
            return Err(Error::parse("empty cell in set"));
        }
        let coords: Result<Vec<usize>> = cell
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad coordinate `{c}` (cells are 0-based)")))
            })
            .collect();
        out.push(coords?);
    }
    Ok(out)
}

fn parse_color(b: u8) -> Result<bool> {
    match b {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(Error::parse(format!("--b takes 0 or 1, got {other}"))),
    }
}

fn flag_part(name: &str, value: impl std::fmt::Display) -> Vec<u8> {
    format!("{name}={value}").into_bytes()
}

fn cmd_rank(ctx: &Ctx, a: &RankArgs) -> Result<Outcome> {
    let started = Instant::now();
    let (t, bytes) = load_tensor(&a.input)?;
    let groups = a.groups.as_deref().map(parse_groups).transpose()?;
    let (matrix_shape, rank) = match &t {
        TensorData::Rational(t) => matrix_rank_of(t, groups.as_deref())?,
        TensorData::Gf2(t) => matrix_rank_of(t, groups.as_deref())?,
    };
    let results = serde_json::json!({
        "field": t.field(),
        "shape": t.shape(),
        "groups": a.groups,
        "matrix_shape": matrix_shape,
        "rank": rank,
    });
    let mut parts = vec![bytes];
    if let Some(g) = &a.groups {
        parts.push(flag_part("groups", g));
    }
    Ok(Outcome::ok(ctx.report(
        "rank",
        &parts,
        None,
        Some(t.field()),
        results,
        started,
    )))
}

fn matrix_rank_of<F: Field>(
    t: &KTensor<F>,
    groups: Option<&[Vec<usize>]>,
) -> Result<(Vec<usize>, usize)> {
    let m = match groups {
        Some(g) => t.flatten(g)?,
        None => t.clone(),
    };
    if m.arity() != 2 {
        return Err(Error::precondition(format!(
            "rank needs a matrix; this tensor has arity {} (pass --groups to flatten)",
            m.arity()
        )));
    }
    let r = m.flattening_rank(&Bipartition::parse(2, "1|2")?)?;
    Ok((m.shape().to_vec(), r))
}

fn cmd_flatten(a: &FlattenArgs) -> Result<Outcome> {
    let (t, _) = load_tensor(&a.input)?;
    let groups = parse_groups(&a.groups)?;
    let body = match &t {
        TensorData::Rational(t) => render_tensor(&t.flatten(&groups)?),
        TensorData::Gf2(t) => render_tensor(&t.flatten(&groups)?),
    };
    Ok(Outcome::ok(body))
}

fn cmd_decompose(ctx: &Ctx, a: &DecomposeArgs) -> Result<Outcome> {
    let started = Instant::now();
    let (t, bytes) = load_tensor(&a.input)?;
    let results = match &t {
        TensorData::Rational(t) => certify(t, &a.method, a.collection.as_deref())?,
        TensorData::Gf2(t) => certify(t, &a.method, a.collection.as_deref())?,
    };
    let mut parts = vec![bytes, flag_part("method", &a.method)];
    if let Some(c) = &a.collection {
        parts.push(flag_part("collection", c));
    }
    Ok(Outcome::ok(ctx.report(
        "decompose",
        &parts,
        None,
        Some(t.field()),
        results,
        started,
    )))
}

fn certify<F: Field>(
    t: &KTensor<F>,
    method: &str,
    collection: Option<&str>,
) -> Result<serde_json::Value> {
    let cert: BoundCertificate<F> = match method {
        "cube3" => cube_decompose_3(t)?,
        "simple" => decompose_simple(t)?,
        "separating" => {
            let c = match collection {
                Some(s) => SeparatingCollection::parse(t.arity(), s)?,
                None => SeparatingCollection::singletons_vs_rest(t.arity()),
            };
            decompose_separating(t, &c)?
        }
        other => {
            return Err(Error::parse(format!(
                "unknown method `{other}` (expected cube3, simple, separating)"
            )))
        }
    };
    let factors: Vec<Vec<Vec<String>>> = cert
        .decomposition
        .terms
        .iter()
        .map(|term| {
            term.iter()
                .map(|vector| vector.iter().map(|e| e.render()).collect())
                .collect()
        })
        .collect();
    Ok(serde_json::json!({
        "method": to_results(&cert.method)?,
        "field": F::TAG,
        "shape": t.shape(),
        "bound": cert.bound.to_string(),
        "terms": cert.decomposition.terms.len(),
        "factors": factors,
        "reconstructs": true,
    }))
}

fn cmd_nbound(ctx: &Ctx, a: &NboundArgs) -> Result<Outcome> {
    let started = Instant::now();
    let mut parts = vec![flag_part("collection", &a.collection)];
    let mut field = None;
    let profile = match (&a.input, &a.bounds) {
        (Some(path), None) => {
            let (t, bytes) = load_tensor(path)?;
            field = Some(t.field());
            parts.insert(0, bytes);
            let c = SeparatingCollection::parse(t.arity(), &a.collection)?;
            match &t {
                TensorData::Rational(t) => FlatteningRankProfile::of_tensor(t, c)?,
                TensorData::Gf2(t) => FlatteningRankProfile::of_tensor(t, c)?,
            }
        }
        (None, Some(bounds)) => {
            let k = a.k.ok_or_else(|| {
                Error::precondition("--bounds needs --k to fix the arity")
            })?;
            let c = SeparatingCollection::parse(k, &a.collection)?;
            let bs: Result<Vec<BigUint>> = bounds
                .split(',')
                .map(|b| {
                    b.trim()
                        .parse::<BigUint>()
                        .map_err(|_| Error::parse(format!("bad bound `{b}`")))
                })
                .collect();
            parts.push(flag_part("bounds", bounds));
            FlatteningRankProfile::new(c, bs?)?
        }
        _ => {
            return Err(Error::precondition(
                "pass either --bounds (with --k) or --input, not both",
            ))
        }
    };
    let (value, trace) = n_recursion(&profile);
    let results = serde_json::json!({
        "k": profile.collection().k(),
        "collection": a.collection,
        "bounds": profile.bounds().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "value": value.to_string(),
        "trace": to_results(&trace)?,
    });
    Ok(Outcome::ok(ctx.report("nbound", &parts, None, field, results, started)))
}

/// Serializes `extra` into the object produced by `value`.
fn with_shape(value: serde_json::Value, shape: &[usize]) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    obj.insert("shape".into(), serde_json::json!(shape));
    if let serde_json::Value::Object(m) = value {
        obj.extend(m);
    }
    serde_json::Value::Object(obj)
}

fn cmd_dcc(ctx: &Ctx, a: &FunctionArgs) -> Result<Outcome> {
    let started = Instant::now();
    let (f, field, bytes) = load_function(&a.input)?;
    let cost = det_cc_exact(&f, &ctx.caps)?;
    let results = with_shape(to_results(&cost)?, f.shape());
    Ok(Outcome::ok(ctx.report("dcc", &[bytes], None, Some(field), results, started)))
}

fn cmd_ndcc(ctx: &Ctx, a: &FunctionArgs) -> Result<Outcome> {
    let started = Instant::now();
    let (f, field, bytes) = load_function(&a.input)?;
    let summary = nondet_cc(&f, &ctx.caps)?;
    let results = with_shape(to_results(&summary)?, f.shape());
    Ok(Outcome::ok(ctx.report("ndcc", &[bytes], None, Some(field), results, started)))
}

fn cmd_lpar(ctx: &Ctx, a: &FunctionArgs) -> Result<Outcome> {
    let started = Instant::now();
    let (f, field, bytes) = load_function(&a.input)?;
    let bound = partition_argument_bound(&f, &ctx.caps)?;
    let results = with_shape(to_results(&bound)?, f.shape());
    Ok(Outcome::ok(ctx.report("lpar", &[bytes], None, Some(field), results, started)))
}

fn cmd_fooling(ctx: &Ctx, c: &FoolingCmd) -> Result<Outcome> {
    let started = Instant::now();
    match c {
        FoolingCmd::Find { input, b } => {
            let (f, field, bytes) = load_function(input)?;
            let b = parse_color(*b)?;
            let found = max_fooling_set(&f, b, &ctx.caps)?;
            let results = with_shape(to_results(&found)?, f.shape());
            let parts = vec![bytes, flag_part("b", b as u8)];
            Ok(Outcome::ok(ctx.report("fooling find", &parts, None, Some(field), results, started)))
        }
        FoolingCmd::Check { input, b, set } => {
            let (f, field, bytes) = load_function(input)?;
            let b = parse_color(*b)?;
            let cells = parse_cells(set)?;
            let check = is_fooling_set(&f, &cells, b)?;
            let exit = if check.valid { 0 } else { 1 };
            let results = with_shape(to_results(&check)?, f.shape());
            let parts = vec![bytes, flag_part("b", b as u8), flag_part("set", set)];
            let body = ctx.report("fooling check", &parts, None, Some(field), results, started);
            Ok(Outcome { body, exit })
        }
        FoolingCmd::Rankcheck { input, b, set } => {
            let (f, field, bytes) = load_function(input)?;
            let b = parse_color(*b)?;
            let cells = parse_cells(set)?;
            let report = rank_vs_fooling_check(&f, &cells, b)?;
            let exit = if report.hadamard_is_identity { 0 } else { 1 };
            let results = with_shape(to_results(&report)?, f.shape());
            let parts = vec![bytes, flag_part("b", b as u8), flag_part("set", set)];
            let body = ctx.report("fooling rankcheck", &parts, None, Some(field), results, started);
            Ok(Outcome { body, exit })
        }
        FoolingCmd::Sample { n, seed, field } => {
            let tag: FieldTag = field.parse()?;
            let f = sample_fooling_function(*n, *seed)?;
            Ok(Outcome::ok(tensor_from_bool_function(&f, tag).render()))
        }
        FoolingCmd::Threshold { n, t_max } => {
            let threshold = union_bound_threshold(*n, *t_max);
            let results = serde_json::json!({
                "n": n,
                "t_max": t_max,
                "threshold": threshold,
            });
            let parts = vec![flag_part("n", n), flag_part("t_max", t_max)];
            Ok(Outcome::ok(ctx.report("fooling threshold", &parts, None, None, results, started)))
        }
    }
}

/// Latin rows 1-based for output, matching the text format.
fn rows_1based(l: &crate::latin::LatinSquare) -> Vec<Vec<usize>> {
    l.rows()
        .iter()
        .map(|row| row.iter().map(|v| v + 1).collect())
        .collect()
}

fn cmd_latin(ctx: &Ctx, c: &LatinCmd) -> Result<Outcome> {
    let started = Instant::now();
    match c {
        LatinCmd::Enumerate { m, count_only } => {
            let squares = latin_enumerate(*m)?;
            let mut results = serde_json::json!({
                "m": m,
                "count": squares.len(),
            });
            if !count_only {
                if *m > 4 {
                    return Err(Error::precondition(
                        "full listing capped at m <= 4; pass --count-only",
                    ));
                }
                let listed: Vec<Vec<Vec<usize>>> = squares.iter().map(rows_1based).collect();
                results["squares"] = serde_json::json!(listed);
            }
            let parts = vec![flag_part("m", m), flag_part("count_only", count_only)];
            Ok(Outcome::ok(ctx.report("latin enumerate", &parts, None, None, results, started)))
        }
        LatinCmd::Sample { m, seed } => {
            let l = latin_sample(*m, *seed)?;
            Ok(Outcome::ok(render_latin(&l)))
        }
    }
}

fn cmd_fl(ctx: &Ctx, c: &FlCmd) -> Result<Outcome> {
    let started = Instant::now();
    match c {
        FlCmd::Build { latin, field } => {
            let tag: FieldTag = field.parse()?;
            let text = read_text(latin)?;
            let l = parse_latin(&text)?;
            let f = latin_function(&l)?;
            Ok(Outcome::ok(tensor_from_bool_function(&f, tag).render()))
        }
        FlCmd::Experiment { m } => {
            let hard = latin_hardness_experiment(*m, &ctx.caps)?;
            if ctx.format == OutputFormat::Tsv {
                let mut body = String::from("cover_size\tsquares\n");
                for (size, count) in &hard.histogram {
                    body.push_str(&format!("{size}\t{count}\n"));
                }
                return Ok(Outcome::ok(body));
            }
            let mut results = to_results(&hard)?;
            results["witness"] = serde_json::json!(rows_1based(&hard.witness));
            let parts = vec![flag_part("m", m)];
            Ok(Outcome::ok(ctx.report("fl experiment", &parts, None, None, results, started)))
        }
    }
}

fn load_relation(inp: &RelationInput) -> Result<(KRelation, Vec<Vec<u8>>)> {
    if let Some(n) = inp.ip {
        let f = inner_product_function(n)?;
        let rel = build_relation(f.clone(), f.clone(), f)?;
        return Ok((rel, vec![flag_part("ip", n)]));
    }
    let (Some(p1), Some(p2), Some(p3)) = (&inp.f1, &inp.f2, &inp.f3) else {
        return Err(Error::precondition(
            "pass --f1 --f2 --f3 clause tensors, or --ip N",
        ));
    };
    let mut parts = Vec::new();
    let mut clauses = Vec::new();
    for path in [p1, p2, p3] {
        let (f, _, bytes) = load_function(path)?;
        parts.push(bytes);
        clauses.push(f);
    }
    let f3 = clauses.pop().expect("three clauses");
    let f2 = clauses.pop().expect("three clauses");
    let f1 = clauses.pop().expect("three clauses");
    Ok((build_relation(f1, f2, f3)?, parts))
}

fn cmd_relation(ctx: &Ctx, c: &RelationCmd) -> Result<Outcome> {
    let started = Instant::now();
    match c {
        RelationCmd::Build(inp) => {
            let (rel, parts) = load_relation(inp)?;
            let dense = MaskRelation::from_relation(&rel)?;
            let legend: Vec<String> = (0..6)
                .map(|code| RelOutput::from_code(code).render())
                .collect();
            let (c1, c2, c3) = rel.clauses();
            let results = serde_json::json!({
                "shape": rel.shape(),
                "clause_shapes": [c1.shape(), c2.shape(), c3.shape()],
                "outputs": legend,
                "masks": dense.masks(),
            });
            Ok(Outcome::ok(ctx.report("relation build", &parts, None, None, results, started)))
        }
        RelationCmd::Check { rel: inp, partition } => {
            let (rel, mut parts) = load_relation(inp)?;
            let results = match partition {
                Some(s) => {
                    let p = Bipartition::parse(3, s)?;
                    parts.push(flag_part("partition", s));
                    let answer = zero_comm_check(&rel, &p)?;
                    serde_json::json!({
                        "shape": rel.shape(),
                        "partition": p,
                        "answer": to_results(&answer)?,
                    })
                }
                None => {
                    let report = silent_induced_check(&rel)?;
                    with_shape(to_results(&report)?, rel.shape())
                }
            };
            Ok(Outcome::ok(ctx.report("relation check", &parts, None, None, results, started)))
        }
        RelationCmd::Dcc(inp) => {
            let (rel, parts) = load_relation(inp)?;
            let cost = rel_det_cc_exact(&rel, &ctx.caps)?;
            let results = with_shape(to_results(&cost)?, rel.shape());
            Ok(Outcome::ok(ctx.report("relation dcc", &parts, None, None, results, started)))
        }
    }
}

fn cmd_verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Outcome> {
    let started = Instant::now();
    if let Some(cert_path) = &a.certificate {
        return recheck_certificate(ctx, cert_path, a.input.as_ref(), started);
    }
    let names: Vec<String> = if a.suites.is_empty() {
        vec!["all".into()]
    } else {
        a.suites.clone()
    };
    let opts = VerifyOptions {
        m: a.m,
        threads: ctx.threads,
        seed: a.seed,
        caps: ctx.caps.clone(),
    };
    let run = run_suites(&names, &opts)?;
    let exit = if run.all_pass { 0 } else { 1 };
    let mut parts: Vec<Vec<u8>> = names.iter().map(|n| flag_part("suite", n)).collect();
    parts.push(flag_part("m", a.m));
    let body = ctx.report("verify", &parts, Some(a.seed), None, to_results(&run)?, started);
    Ok(Outcome { body, exit })
}

/// Re-validates an emitted certificate against the tensor it talks about.
/// Decomposition reports replay the sum of terms, fooling reports replay
/// the pair scan, cover reports replay membership and monochromaticity.
fn recheck_certificate(
    ctx: &Ctx,
    cert_path: &PathBuf,
    input: Option<&PathBuf>,
    started: Instant,
) -> Result<Outcome> {
    let cert_text = read_text(cert_path)?;
    let doc: serde_json::Value = serde_json::from_str(&cert_text)
        .map_err(|e| Error::parse(format!("certificate is not JSON: {e}")))?;
    let results = doc.get("results").cloned().unwrap_or(doc);
    let input = input.ok_or_else(|| {
        Error::precondition("--certificate needs --input, the tensor it was computed from")
    })?;
    let (t, t_bytes) = load_tensor(input)?;
    let parts = vec![cert_text.clone().into_bytes(), t_bytes];

    let (kind, valid, detail) = if results.get("factors").is_some() {
        recheck_decomposition(&results, &t)?
    } else if results.get("set").is_some() {
        recheck_fooling(&results, &t)?
    } else if results.get("zero").is_some() && results.get("one").is_some() {
        recheck_covers(&results, &t)?
    } else {
        return Err(Error::precondition(
            "certificate has none of: factors (decomposition), set (fooling), zero/one (covers)",
        ));
    };
    let exit = if valid { 0 } else { 1 };
    let results = serde_json::json!({
        "certificate_kind": kind,
        "valid": valid,
        "detail": detail,
    });
    let body = ctx.report("verify", &parts, None, Some(t.field()), results, started);
    Ok(Outcome { body, exit })
}

fn recheck_decomposition(
    results: &serde_json::Value,
    t: &TensorData,
) -> Result<(&'static str, bool, serde_json::Value)> {
    let claimed_field: FieldTag = serde_json::from_value(
        results
            .get("field")
            .cloned()
            .ok_or_else(|| Error::parse("decomposition certificate lacks `field`"))?,
    )
    .map_err(|e| Error::parse(format!("bad field tag: {e}")))?;
    if claimed_field != t.field() {
        return Err(Error::FieldMismatch(format!(
            "certificate is over {claimed_field}, tensor is over {}",
            t.field()
        )));
    }
    let factors: Vec<Vec<Vec<String>>> = serde_json::from_value(
        results.get("factors").cloned().expect("checked by caller"),
    )
    .map_err(|e| Error::parse(format!("bad factors: {e}")))?;
    let bound: BigUint = results
        .get("bound")
        .and_then(|b| b.as_str())
        .ok_or_else(|| Error::parse("decomposition certificate lacks `bound`"))?
        .parse()
        .map_err(|_| Error::parse("bad bound"))?;
    match t {
        TensorData::Rational(t) => recheck_decomposition_in(t, &factors, &bound),
        TensorData::Gf2(t) => recheck_decomposition_in(t, &factors, &bound),
    }
}

fn recheck_decomposition_in<F: Field>(
    t: &KTensor<F>,
    factors: &[Vec<Vec<String>>],
    bound: &BigUint,
) -> Result<(&'static str, bool, serde_json::Value)> {
    let mut terms = Vec::with_capacity(factors.len());
    for term in factors {
        let mut vectors = Vec::with_capacity(term.len());
        for vector in term {
            let parsed: Result<Vec<F>> = vector.iter().map(|s| F::parse(s)).collect();
            vectors.push(parsed?);
        }
        terms.push(vectors);
    }
    let d = Decomposition {
        shape: t.shape().to_vec(),
        terms,
    };
    let reconstructs = eval_decomposition(&d)? == *t;
    let within_bound = BigUint::from(d.terms.len()) <= *bound;
    let valid = reconstructs && within_bound;
    Ok((
        "decomposition",
        valid,
        serde_json::json!({
            "terms": d.terms.len(),
            "bound": bound.to_string(),
            "reconstructs": reconstructs,
            "within_bound": within_bound,
        }),
    ))
}

fn recheck_fooling(
    results: &serde_json::Value,
    t: &TensorData,
) -> Result<(&'static str, bool, serde_json::Value)> {
    let f = bool_function_from_tensor(t)?;
    let set: Vec<Vec<usize>> =
        serde_json::from_value(results.get("set").cloned().expect("checked by caller"))
            .map_err(|e| Error::parse(format!("bad set: {e}")))?;
    let b = results
        .get("b")
        .and_then(|b| b.as_bool())
        .ok_or_else(|| Error::parse("fooling certificate lacks boolean `b`"))?;
    let check = is_fooling_set(&f, &set, b)?;
    Ok(("fooling", check.valid, to_results(&check)?))
}

fn recheck_covers(
    results: &serde_json::Value,
    t: &TensorData,
) -> Result<(&'static str, bool, serde_json::Value)> {
    let f = bool_function_from_tensor(t)?;
    let mut detail = serde_json::Map::new();
    let mut valid = true;
    for color in ["zero", "one"] {
        let count = results.get(color).expect("checked by caller");
        let b = count
            .get("b")
            .and_then(|b| b.as_bool())
            .ok_or_else(|| Error::parse(format!("cover `{color}` lacks boolean `b`")))?;
        let boxes_v = count
            .get("cover")
            .and_then(|c| c.get("boxes"))
            .cloned()
            .ok_or_else(|| Error::parse(format!("cover `{color}` lacks `cover.boxes`")))?;
        let values: Vec<Vec<Vec<usize>>> = serde_json::from_value(boxes_v)
            .map_err(|e| Error::parse(format!("bad boxes: {e}")))?;
        let mut boxes = Vec::with_capacity(values.len());
        for axis_values in &values {
            let mut masks = vec![0u64; axis_values.len()];
            for (ax, vals) in axis_values.iter().enumerate() {
                for &v in vals {
                    if v >= 64 {
                        return Err(Error::parse(format!("box value {v} out of range")));
                    }
                    masks[ax] |= 1 << v;
                }
            }
            boxes.push(KBox::new(f.shape(), masks)?);
        }
        let cover = BoxCover { b, boxes };
        let ok = cover.verify(&f).is_ok();
        valid = valid && ok;
        detail.insert(color.into(), serde_json::json!({"b": b, "boxes": values.len(), "covers": ok}));
    }
    Ok(("covers", valid, serde_json::Value::Object(detail)))
}
