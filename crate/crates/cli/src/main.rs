use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};
use u35_cli::cache::{self, hex};
use u35_cli::report::ManifestBuilder;
use u35_cli::targets::BUILD_CRITERIA;
use u35_cli::{CacheProblem, RunManifest, Target};
use u35_core::exact::{format_rational, parse_rational};
use u35_core::gram::{export_matrix, is_prime, DEFAULT_PRIMES};
use u35_core::permcore::CacheError;
use u35_core::suite::{run_standalone, CheckOutcome, Suite, SuiteConfig};

/// Verification suite for the Majorana representation of U3(5).
#[derive(Parser)]
#[command(name = "u35", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the graph and groups, certify them and write the cache.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Run a named verification suite.
    Verify {
        target: Target,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        options: CheckOptions,
    },
    /// Gram matrix utilities.
    Matrix {
        #[command(subcommand)]
        action: MatrixCommand,
    },
}

#[derive(Subcommand)]
enum MatrixCommand {
    /// Write the upper triangle of a Gram matrix, scaled to integers.
    Export {
        #[command(flatten)]
        common: Common,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
        /// "symbolic", "solved", or a rational such as 4/81.
        #[arg(long, default_value = "symbolic")]
        x: String,
        #[arg(long, value_enum, default_value_t = Block::Full)]
        block: Block,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Block {
    /// All 2275 axes.
    Full,
    /// The 525 Majorana axes.
    Majorana,
}

#[derive(Args)]
struct Common {
    /// Cache directory.
    #[arg(long, default_value = "u35-cache")]
    cache: PathBuf,
    /// Write the run manifest here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CheckOptions {
    /// Comma-separated primes for modular ranks.
    #[arg(long, value_parser = parse_primes)]
    primes: Option<Primes>,
    /// Use exact elimination instead of the modular consensus.
    #[arg(long)]
    exact: bool,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone)]
struct Primes(Vec<u64>);

fn parse_primes(s: &str) -> Result<Primes, String> {
    let mut primes = Vec::new();
    for part in s.split(',') {
        let p: u64 = part
            .trim()
            .parse()
            .map_err(|_| format!("`{part}` is not an integer"))?;
        if p <= 5 || !is_prime(p) {
            return Err(format!("{p} is not a prime above 5"));
        }
        if primes.contains(&p) {
            return Err(format!("{p} is repeated"));
        }
        primes.push(p);
    }
    Ok(Primes(primes))
}

impl CheckOptions {
    fn config(&self) -> SuiteConfig {
        SuiteConfig {
            primes: self
                .primes
                .clone()
                .map_or_else(|| DEFAULT_PRIMES.to_vec(), |p| p.0),
            exact: self.exact,
            seed: self.seed,
            ..SuiteConfig::default()
        }
    }
}

fn print_check(outcome: &CheckOutcome, seconds: f64) {
    println!(
        "{}  {:>2} {} ({seconds:.2} s)",
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.criterion,
        outcome.title
    );
    if !outcome.passed {
        println!("      {}", outcome.abbreviated_witness(12));
    }
}

fn finish(builder: ManifestBuilder, start: Instant, json: Option<&Path>) -> Result<bool> {
    let manifest: RunManifest = builder.finish(start.elapsed());
    println!("report hash {}", manifest.hash);
    if let Some(path) = json {
        manifest.write(path)?;
    }
    Ok(manifest.report.passed)
}

fn run_criteria(builder: &mut ManifestBuilder, suite: &Suite, criteria: &[u8]) {
    for &c in criteria {
        let (outcome, elapsed) = suite.run(c);
        print_check(&outcome, elapsed.as_secs_f64());
        builder.check(outcome, elapsed);
    }
}

fn config_json(config: &SuiteConfig) -> serde_json::Value {
    serde_json::to_value(config).expect("serializable")
}

fn build(common: &Common) -> Result<bool> {
    let start = Instant::now();
    let config = SuiteConfig::default();
    let mut builder = ManifestBuilder::new("build", config_json(&config));
    let (ctx, status, files) = cache::load_or_build(&common.cache)?;
    builder.cache(&common.cache, Some(status), files);
    let suite = Suite::new(ctx, start.elapsed(), config);
    run_criteria(&mut builder, &suite, &BUILD_CRITERIA);
    finish(builder, start, common.json.as_deref())
}

fn verify(target: Target, common: &Common, options: &CheckOptions) -> Result<bool> {
    let start = Instant::now();
    let config = options.config();
    let mut builder = ManifestBuilder::new(format!("verify {}", target.name()), config_json(&config));
    if target.cache_free() {
        for &c in target.criteria() {
            let (outcome, elapsed) = run_standalone(c, &config)
                .ok_or_else(|| anyhow!("criterion {c} needs the group cache"))?;
            print_check(&outcome, elapsed.as_secs_f64());
            builder.check(outcome, elapsed);
        }
    } else {
        let (ctx, files) = cache::open(&common.cache)?;
        builder.cache(&common.cache, None, files);
        let suite = Suite::new(ctx, start.elapsed(), config);
        run_criteria(&mut builder, &suite, target.criteria());
    }
    finish(builder, start, common.json.as_deref())
}

fn export(common: &Common, out: &Path, x: &str, block: Block) -> Result<bool> {
    let start = Instant::now();
    let (ctx, files) = cache::open(&common.cache)?;
    let config = SuiteConfig::default();
    let mut builder = ManifestBuilder::new(
        "matrix export",
        json!({ "x": x, "block": match block { Block::Full => "full", Block::Majorana => "majorana" } }),
    );
    builder.cache(&common.cache, None, files);
    let suite = Suite::new(ctx, start.elapsed(), config);
    let full = suite.gram().map_err(|e| anyhow!(e))?;
    let value = match x {
        "symbolic" => None,
        "solved" => Some(suite.x().map_err(|e| anyhow!(e))?.clone()),
        other => Some(parse_rational(other).map_err(|e| anyhow!("--x: {e}"))?),
    };
    let majorana;
    let m = match block {
        Block::Full => full,
        Block::Majorana => {
            majorana = full.majorana_block();
            &majorana
        }
    };
    let io = |e: std::io::Error| anyhow::Error::from(CacheProblem(format!("{}: {e}", out.display())));
    let file = File::create(out).map_err(io)?;
    let mut writer = BufWriter::new(file);
    let manifest = export_matrix(m, value.as_ref(), &mut writer)?;
    writer.flush().map_err(io)?;
    drop(writer);
    let digest = hex(&Sha256::digest(std::fs::read(out).map_err(io)?));
    println!(
        "wrote {} entries of a {}x{} matrix to {} (x {})",
        manifest.entries,
        manifest.dimension,
        manifest.dimension,
        out.display(),
        value.as_ref().map_or("symbolic".to_string(), format_rational),
    );
    builder.artifact(json!({ "export": manifest, "sha256": digest }));
    finish(builder, start, common.json.as_deref())
}

/// Cache and I/O problems exit with 3, anything else with 1.
fn exit_code(e: &anyhow::Error) -> u8 {
    let cache = e.chain().any(|c| {
        c.is::<CacheProblem>() || c.is::<std::io::Error>() || c.is::<CacheError>()
    });
    if cache {
        3
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build { common } => build(common),
        Command::Verify {
            target,
            common,
            options,
        } => verify(*target, common, options),
        Command::Matrix {
            action: MatrixCommand::Export { common, out, x, block },
        } => export(common, out, x, *block).context("matrix export"),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
