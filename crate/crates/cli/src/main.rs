use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use finepoly::data::{configs_3d, numerator_bound};
use finepoly::exact::{format_rational, parse_rational, QMatrix, QVector, Rational};
use finepoly::fine::{fine_adjoint, fine_profile};
use finepoly::io::{read_configs, read_polytopes, PolytopeRecord, ResultRow};
use finepoly::spectrum::{
    bordered_determinant, contributed_numerators, default_box, enumerate_configs, filter_opposing, scan_range, step_denominator, subset_etas,
    NormalConfiguration,
};
use finepoly::verify::{all_passed, Suite};
use finepoly::Error;

/// Exact Fine invariants of lattice polytopes.
#[derive(Parser)]
#[command(name = "finepoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fine number, mu^F and core data for every polytope of a file or directory.
    Compute(ComputeArgs),
    /// Vertices of the Fine adjoint polytope at level s.
    Adjoint {
        path: PathBuf,
        #[arg(long, value_parser = parse_level, allow_hyphen_values = true)]
        s: Rational,
    },
    /// Values of mu^F >= eps realized with a normal configuration.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_level)]
        eps: Rational,
        /// Bound R on the support points; defaults to 12 (d + 1).
        #[arg(long = "box")]
        box_bound: Option<i64>,
        /// Writes one polytope file per witness.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Numerator candidates of normal configurations.
    Numerators {
        /// Configuration file or directory; defaults to the built-in set of the dimension.
        #[arg(long)]
        configs: Option<PathBuf>,
        #[arg(long)]
        dim: usize,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// Writes the normal configurations of a small dimension as JSON.
    EnumerateConfigs {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ComputeArgs {
    path: PathBuf,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// The default format.
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_level(s: &str) -> Result<Rational, String> {
    let q = parse_rational(s).map_err(|e| e.to_string())?;
    if q > Rational::from_integer(0.into()) {
        Ok(q)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Bad input rather than a failed computation.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let input_error = err.chain().any(|e| {
        e.is::<Usage>()
            || matches!(
                e.downcast_ref::<Error>(),
                Some(
                    Error::Parse(_)
                        | Error::InvalidArgument(_)
                        | Error::Unsupported(_)
                        | Error::DimensionMismatch { .. }
                        | Error::NotFullDim { .. }
                        | Error::EmptyPolytope
                        | Error::NotIntegral(_)
                        | Error::ZeroVector
                )
            )
    });
    if input_error {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Compute(args) => compute(&args),
        Command::Adjoint { path, s } => adjoint(&path, &s),
        Command::Scan { config, eps, box_bound, out_dir } => scan(&config, &eps, box_bound, out_dir.as_deref()),
        Command::Numerators { configs, dim } => numerators(configs.as_deref(), dim),
        Command::Verify { suite } => verify(suite),
        Command::EnumerateConfigs { dim, out } => enumerate(dim, out.as_deref()),
    }
}

/// The output file, or stdout.
fn sink(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// A pool capped by `FINEPOLY_THREADS` when it is set.
fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("FINEPOLY_THREADS") {
        let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| usage(format!("FINEPOLY_THREADS must be a positive integer, got {raw:?}")))?;
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

fn compute(args: &ComputeArgs) -> anyhow::Result<ExitCode> {
    let records = read_polytopes(&args.path)?;
    let rows: Vec<ResultRow> = thread_pool()?.install(|| {
        records
            .par_iter()
            .map(|r| {
                let label = r.label();
                let source = r.source.display().to_string();
                let p = r.record.to_polytope().with_context(|| format!("{source}: {label}"))?;
                let profile = fine_profile(&p).with_context(|| format!("{source}: {label}"))?;
                Ok(ResultRow::new(label, p.ambient_dim(), &profile, source))
            })
            .collect::<anyhow::Result<_>>()
    })?;
    let mut out = sink(args.out.as_deref())?;
    if args.json {
        serde_json::to_writer_pretty(&mut out, &rows)?;
        writeln!(out)?;
    } else {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(ResultRow::HEADER)?;
        for row in &rows {
            w.write_record(row.fields())?;
        }
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn show_point(v: &QVector) -> String {
    format!("[{}]", v.iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

fn adjoint(path: &Path, s: &Rational) -> anyhow::Result<ExitCode> {
    let records = read_polytopes(path)?;
    let many = records.len() > 1;
    for r in &records {
        let p = r.record.to_polytope()?;
        if many {
            println!("# {}", r.label());
        }
        match fine_adjoint(&p, s)? {
            None => println!("EMPTY"),
            Some(q) => q.vertices().iter().for_each(|v| println!("{}", show_point(v))),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn single_config(path: &Path) -> anyhow::Result<NormalConfiguration> {
    let mut configs = read_configs(path)?;
    if configs.len() != 1 {
        return Err(usage(format!("{} holds {} configurations, expected one", path.display(), configs.len())));
    }
    let config = configs.remove(0);
    if config.is_empty() {
        return Err(usage(format!("{}: the configuration has no normals", path.display())));
    }
    Ok(config)
}

fn scan(path: &Path, eps: &Rational, box_bound: Option<i64>, out_dir: Option<&Path>) -> anyhow::Result<ExitCode> {
    let config = single_config(path)?;
    let r = box_bound.unwrap_or_else(|| default_box(config.dim));
    if r < 1 {
        return Err(usage(format!("--box must be at least 1, got {r}")));
    }
    let lower = Rational::new(1.into(), step_denominator(&config));
    let mut witnesses = scan_range(&config, &lower, &eps.recip(), r)?;
    if witnesses.is_empty() {
        eprintln!("no feasible instance with mu^F >= {} inside box {r}", format_rational(eps));
        return Ok(ExitCode::SUCCESS);
    }
    witnesses.sort_by(|a, b| a.fine_number.cmp(&b.fine_number));
    witnesses.dedup_by(|a, b| a.fine_number == b.fine_number);
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    for (i, w) in witnesses.iter().enumerate() {
        let mu = format_rational(&w.mu_f());
        println!("{mu}");
        if w.at_box_boundary {
            eprintln!("warning: the witness for {mu} touches the box bound {r}; optima at the boundary are inconclusive");
        }
        if let (Some(dir), Some(q)) = (out_dir, &w.polytope) {
            let record = PolytopeRecord::from_polytope(Some(format!("muF={mu}")), q);
            let file = dir.join(format!("witness_{:03}.json", i + 1));
            fs::write(&file, serde_json::to_string_pretty(&record)? + "\n").with_context(|| format!("cannot write {}", file.display()))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn default_configs(dim: usize) -> anyhow::Result<Vec<NormalConfiguration>> {
    match dim {
        3 => Ok(configs_3d()),
        _ => Ok(enumerate_configs(dim)?),
    }
}

fn show_set(set: &BTreeSet<u64>) -> String {
    format!("{{{}}}", set.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))
}

fn numerators(path: Option<&Path>, dim: usize) -> anyhow::Result<ExitCode> {
    if dim == 0 {
        return Err(usage("--dim must be positive"));
    }
    let configs = match path {
        Some(p) => read_configs(p)?,
        None => default_configs(dim)?,
    };
    if let Some(c) = configs.iter().find(|c| c.dim != dim) {
        return Err(usage(format!("configuration of dimension {} given with --dim {dim}", c.dim)));
    }
    for (i, c) in configs.iter().enumerate() {
        let id = c.id.clone().unwrap_or_else(|| format!("#{i}"));
        let etas = subset_etas(c);
        if etas.is_empty() {
            eprintln!("warning: {id} has no positively spanning subset of size {}", dim + 1);
        }
        for (subset, e) in etas {
            let rows: Vec<QVector> = subset.iter().map(|&j| QVector::from_ints(&c.normals[j])).collect();
            let a = QMatrix::new(rows, dim)?;
            println!("{id} {subset:?} det {} eta {e}", bordered_determinant(&a)?);
        }
    }
    let lower = if dim == 1 { Some(BTreeSet::new()) } else { numerator_bound(dim - 1).ok() };
    let dropped = configs.len() - filter_opposing(&configs).len();
    if dropped > 0 {
        match &lower {
            Some(l) => eprintln!("{dropped} configuration(s) with opposing normals contribute {}", show_set(l)),
            None => eprintln!("warning: {dropped} configuration(s) with opposing normals; numerators of dimension {} are not known here", dim - 1),
        }
    }
    println!("numerators {}", show_set(&contributed_numerators(&configs, lower.as_ref())));
    Ok(ExitCode::SUCCESS)
}

fn verify(suite: Suite) -> anyhow::Result<ExitCode> {
    let checks = suite.run();
    for c in &checks {
        println!("{c}");
    }
    let passed = all_passed(&checks);
    println!("{} {} ({} checks)", if passed { "PASS" } else { "FAIL" }, suite.name(), checks.len());
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn enumerate(dim: usize, out: Option<&Path>) -> anyhow::Result<ExitCode> {
    let configs = enumerate_configs(dim).map_err(|e| match e {
        Error::Unsupported(msg) => usage(msg),
        other => anyhow!(other),
    })?;
    let json = serde_json::to_string_pretty(&configs)? + "\n";
    match out {
        Some(path) => {
            fs::write(path, json).with_context(|| format!("cannot write {}", path.display()))?;
            println!("count {}", configs.len());
        }
        None => {
            print!("{json}");
            eprintln!("count {}", configs.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}
