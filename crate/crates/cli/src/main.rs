//! `blockmap`: series, block extraction, transition diagnostics, sampling,
//! scaling experiments, the map enumerator and the verification suite.

mod config;
mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use blockmap::oracle::{self, Family};
use blockmap::sampler::{
    decorate_blocks, largest_blocks, replicate_rng, scaling_experiment, scheme_law, BlockRecord, ConditionedSampler,
    ScalingOptions, ScalingReport, Strategy,
};
use blockmap::schemes::fixtures::{fixture_families, stamp_fixture};
use blockmap::schemes::{self, load_scheme, Fixture};
use blockmap::transition::{exact, Workbench, DEFAULT_EXPONENT_ORDER, DEFAULT_ORDER, DEFAULT_PREC};
use blockmap::verify::{self, SuiteOptions};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

const THREADS_ENV: &str = "BLOCKMAP_THREADS";

#[derive(Parser)]
#[command(
    name = "blockmap",
    version,
    about = "Block decompositions of random planar maps",
    args_override_self = true
)]
struct Cli {
    /// Write the main output here instead of standard output
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Mantissa bits for non-exact quantities
    #[arg(long, global = true, default_value_t = DEFAULT_PREC)]
    prec: u32,
    /// key = value file mirroring the flags; flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerChoice {
    Auto,
    Exact,
    Rejection,
}

impl From<SamplerChoice> for Strategy {
    fn from(s: SamplerChoice) -> Self {
        match s {
            SamplerChoice::Auto => Strategy::Auto,
            SamplerChoice::Exact => Strategy::Exact,
            SamplerChoice::Rejection => Strategy::Rejection,
        }
    }
}

fn parse_u(s: &str) -> std::result::Result<Rational, String> {
    if s.contains(['.', 'e', 'E']) {
        return Err(format!("{s:?}: give u as an exact fraction P/Q"));
    }
    let q: Rational = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if q.cmp0().is_le() {
        return Err(format!("u must be positive, got {q}"));
    }
    Ok(q)
}

fn scheme_arg() -> clap::builder::RangedI64ValueParser<u8> {
    clap::value_parser!(u8).range(1..=8)
}

#[derive(Subcommand)]
#[command(args_override_self = true)]
enum Command {
    /// Coefficients of M(z, u)
    Series {
        #[arg(long, value_parser = scheme_arg())]
        scheme: u8,
        #[arg(short, long, value_parser = parse_u, default_value = "1")]
        u: Rational,
        #[arg(short = 'N', long = "order", default_value_t = 10)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Coefficients of the block series extracted from the maps
    Blocks {
        #[arg(long, value_parser = scheme_arg())]
        scheme: u8,
        #[arg(short = 'N', long = "order", default_value_t = 10)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Singular data on a grid of weights, as CSV
    Transition {
        #[arg(long, value_parser = scheme_arg())]
        scheme: u8,
        #[arg(long, value_parser = parse_u)]
        u_min: Rational,
        #[arg(long, value_parser = parse_u)]
        u_max: Rational,
        /// Number of grid points, both ends included
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(short = 'N', long = "order", default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Critical weight by bisection, as JSON
    Critical {
        #[arg(long, value_parser = scheme_arg())]
        scheme: u8,
        #[arg(short = 'N', long = "order", default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Coefficient exponent of M(z, u), as JSON
    Exponent {
        #[arg(long, value_parser = scheme_arg())]
        scheme: u8,
        #[arg(short, long, value_parser = parse_u)]
        u: Rational,
        #[arg(short = 'N', long = "order", default_value_t = DEFAULT_EXPONENT_ORDER)]
        order: usize,
    },
    /// One conditioned block tree, as JSON
    Sample {
        #[arg(long, value_parser = scheme_arg())]
        scheme: u8,
        #[arg(short, long, value_parser = parse_u)]
        u: Rational,
        /// Tree vertices
        #[arg(short = 'n', long = "vertices")]
        vertices: usize,
        #[arg(long)]
        seed: u64,
        /// Include the degree sequence and block records
        #[arg(long)]
        emit_tree: bool,
        #[arg(long, default_value_t = 3)]
        j_max: usize,
        #[arg(long, value_enum, default_value_t = SamplerChoice::Auto)]
        sampler: SamplerChoice,
    },
    /// Largest-block statistics over replicates
    Scaling {
        #[arg(long, value_parser = scheme_arg())]
        scheme: u8,
        #[arg(short, long, value_parser = parse_u)]
        u: Rational,
        /// Map sizes
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Median L_j against ln n
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Empirical law of (L_1 - (1 - E) n) / n^(2/3); subcritical only
        #[arg(long)]
        fluctuation_svg: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        j_max: usize,
        #[arg(long, value_enum, default_value_t = SamplerChoice::Auto)]
        sampler: SamplerChoice,
    },
    /// Brute-force map counts; optionally stamps fixture files
    Oracle {
        /// Family name; every family if absent
        #[arg(long)]
        family: Option<Family>,
        #[arg(long, default_value_t = 4)]
        max: usize,
        /// Validate and stamp the fixture files in this directory
        #[arg(long)]
        stamp: Option<PathBuf>,
    },
    /// Full verification suite, as JSON; exit status 1 on any failure
    Verify {
        #[arg(long, value_parser = scheme_arg())]
        scheme: Option<u8>,
        #[arg(long)]
        skip_oracle: bool,
        #[arg(long)]
        skip_exponents: bool,
        #[arg(short = 'N', long = "order", default_value_t = DEFAULT_EXPONENT_ORDER)]
        order: usize,
    },
}

/// Failures that map to exit status 1 without being runtime errors.
#[derive(Debug)]
struct CheckFailure(String);

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailure {}

fn decimal(x: &Float) -> String {
    x.to_string_radix(10, Some(20))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn coefficient_table(values: &[Rational], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("n,coefficient\n");
            for (n, c) in values.iter().enumerate().skip(1) {
                s += &format!("{n},{c}\n");
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = values
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| serde_json::json!({ "n": n, "coefficient": c.to_string() }))
                .collect();
            json(&rows)?
        }
    })
}

#[derive(Serialize)]
struct FixtureVersion {
    family: String,
    validated_to: usize,
    sha256: String,
}

fn fixture_versions() -> Result<Vec<FixtureVersion>> {
    fixture_families()
        .map(|f| {
            let fx = Fixture::load(f)?;
            Ok(FixtureVersion {
                family: f.name().to_string(),
                validated_to: fx.validated_to,
                sha256: fx.digest,
            })
        })
        .collect()
}

fn scaling_csv(report: &ScalingReport) -> String {
    let mut s = String::from("n,rep");
    for j in 1..=report.j_max {
        s += &format!(",L{j}");
    }
    s += ",map_size,blocks_total\n";
    for r in &report.rows {
        s += &format!("{},{}", r.tree_vertices, r.rep);
        for l in &r.largest {
            s += &format!(",{l}");
        }
        s += &format!(",{},{}\n", r.mass, r.blocks_total);
    }
    s
}

#[derive(Serialize)]
struct SampleOutput {
    scheme: u8,
    u: String,
    seed: u64,
    tree_vertices: usize,
    map_size: usize,
    largest: Vec<usize>,
    blocks_total: usize,
    tail_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    degrees: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    records: Option<Vec<BlockRecord>>,
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.output.as_deref();
    let bench = Workbench::new(cli.prec);
    match cli.command {
        Command::Series {
            scheme,
            u,
            order,
            format,
        } => {
            let s = schemes::solve_weighted(load_scheme(scheme)?, &u, order)?;
            emit(out, &coefficient_table(s.coeffs(), format)?)
        }
        Command::Blocks { scheme, order, format } => {
            let s = schemes::extract_block_series(load_scheme(scheme)?, order)?;
            emit(out, &coefficient_table(s.coeffs(), format)?)
        }
        Command::Transition {
            scheme,
            u_min,
            u_max,
            steps,
            order,
        } => {
            if steps == 0 || u_min > u_max {
                bail!(blockmap::Error::InvalidArgument(
                    "need steps >= 1 and u-min <= u-max".into()
                ));
            }
            let grid: Vec<Rational> = (0..steps)
                .map(|i| {
                    if steps == 1 {
                        return u_min.clone();
                    }
                    let frac = Rational::from((i as u64, (steps - 1) as u64));
                    Rational::from(&u_max - &u_min) * frac + &u_min
                })
                .collect();
            let points = grid
                .par_iter()
                .map(|u| bench.singular_point(scheme, u, order))
                .collect::<blockmap::Result<Vec<_>>>()?;
            let mut s = String::from("u,rho,y,E,regime\n");
            for p in &points {
                s += &format!(
                    "{},{},{},{},{}\n",
                    p.u,
                    decimal(&p.rho),
                    decimal(&p.y),
                    decimal(&p.mean),
                    p.regime
                );
            }
            emit(out, &s)
        }
        Command::Critical { scheme, order } => {
            let c = bench.find_critical_u(scheme, order)?;
            let exact = exact::u_critical(scheme)?;
            let value = serde_json::json!({
                "scheme": scheme,
                "u_c": c.u_c.to_f64(),
                "u_c_decimal": decimal(&c.u_c),
                "rational": c.rational.to_string(),
                "exact": exact.to_string(),
                "residual": c.residual.to_f64(),
                "iterations": c.iterations,
            });
            emit(out, &json(&value)?)
        }
        Command::Exponent { scheme, u, order } => {
            let fit = bench.exponent_estimate(scheme, &u, order)?;
            emit(out, &json(&fit)?)
        }
        Command::Sample {
            scheme,
            u,
            vertices,
            seed,
            emit_tree,
            j_max,
            sampler,
        } => {
            let spec = load_scheme(scheme)?;
            let map_size = spec.map_size(vertices)?;
            let law = scheme_law(scheme, &u, map_size)?;
            let cond = ConditionedSampler::new(&law, vertices, sampler.into())?;
            let mut rng = replicate_rng(seed, 0);
            let tree = cond.sample(&mut rng)?;
            let records = decorate_blocks(spec, &law, &tree, &mut rng)?;
            let output = SampleOutput {
                scheme,
                u: u.to_string(),
                seed,
                tree_vertices: tree.n(),
                map_size: records.iter().flat_map(|r| &r.block_sizes).sum(),
                largest: largest_blocks(&records, j_max),
                blocks_total: records.iter().map(|r| r.block_sizes.len()).sum(),
                tail_fraction: cond.tail_fraction(),
                degrees: emit_tree.then(|| tree.degrees.clone()),
                records: emit_tree.then_some(records),
            };
            emit(out, &json(&output)?)
        }
        Command::Scaling {
            scheme,
            u,
            sizes,
            reps,
            seed,
            format,
            svg: svg_path,
            fluctuation_svg,
            j_max,
            sampler,
        } => {
            let options = ScalingOptions {
                j_max,
                strategy: sampler.into(),
            };
            let report = scaling_experiment(scheme, &u, &sizes, reps, seed, &options)?;
            if let Some(p) = &svg_path {
                svg::emit_plot(&report, p)?;
            }
            if let Some(p) = &fluctuation_svg {
                svg::emit_fluctuation_plot(&report, p)?;
            }
            match format {
                Format::Csv => emit(out, &scaling_csv(&report)),
                Format::Json => {
                    let generated = std::time::SystemTime::now()
                        .duration_since(std::time::UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0);
                    let value = serde_json::json!({
                        "report": report,
                        "fixtures": fixture_versions()?,
                        "metadata": { "generated_unix": generated, "version": env!("CARGO_PKG_VERSION") },
                    });
                    emit(out, &json(&value)?)
                }
            }
        }
        Command::Oracle { family, max, stamp } => {
            if let Some(dir) = stamp {
                let mut stamped = Vec::new();
                for f in fixture_families() {
                    let path = dir.join(format!("{}.txt", f.name()));
                    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let new = stamp_fixture(&text, max)?;
                    std::fs::write(&path, new).with_context(|| format!("writing {}", path.display()))?;
                    stamped.push(serde_json::json!({ "family": f.name(), "validated_to": max }));
                }
                return emit(out, &json(&stamped)?);
            }
            let families: Vec<Family> = family.map_or_else(|| Family::ALL.to_vec(), |f| vec![f]);
            let rows = families
                .par_iter()
                .map(|&f| oracle::census(f, max).map(|c| serde_json::json!({ "family": f.name(), "counts": c })))
                .collect::<blockmap::Result<Vec<_>>>()?;
            emit(out, &json(&rows)?)
        }
        Command::Verify {
            scheme,
            skip_oracle,
            skip_exponents,
            order,
        } => {
            let options = SuiteOptions {
                schemes: scheme.map_or_else(|| (1..=8).collect(), |s| vec![s]),
                oracle: !skip_oracle,
                chain: true,
                exponents: !skip_exponents,
                exponent_order: order,
            };
            let suite = verify::run(&options);
            emit(out, &json(&suite)?)?;
            if !suite.passed() {
                let failed: Vec<String> = suite.failures().map(|c| c.name.clone()).collect();
                return Err(CheckFailure(format!("{} check(s) failed: {}", failed.len(), failed.join(", "))).into());
            }
            Ok(())
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<CheckFailure>().is_some() {
        return 1;
    }
    match err.downcast_ref::<blockmap::Error>() {
        Some(blockmap::Error::InvalidArgument(_) | blockmap::Error::UnknownScheme(_) | blockmap::Error::Parse(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let mut args: Vec<String> = std::env::args().collect();
    let merged = config::take_config(&mut args).and_then(|path| match path {
        Some(p) => config::merge(args.clone(), Path::new(&p)),
        None => Ok(args.clone()),
    });
    let args = match merged {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
