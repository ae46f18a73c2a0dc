//! `qprod`: command-line product-structure analysis for density matrices.
//!
//! Subcommands: `gen` (built-in states to JSON), `realign` (the realigned
//! matrix of a bipartite view), `svals` (its singular values), `test`
//! (product decision for a given partition), `factorize` (decision plus
//! extracted factors), `analyze` (finest product partition).
//!
//! Exit codes: 0 product/success, 1 non-product verdict, 2 usage or
//! validation error, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qprod::matcore::{self, DEFAULT_REL_TOL};
use qprod::partitions::{parse_partition, Partition};
use qprod::product;
use qprod::states::gen;
use qprod::DensityMatrix;
use sha2::{Digest, Sha256};

use qprod_cli::report::{format_complex, CutSummary, ReportFile};
use qprod_cli::statefile::StateFile;
use qprod_cli::CliError;

#[derive(Parser)]
#[command(
    name = "qprod",
    version,
    about = "Decide tensor-product structure of density matrices via realignment rank"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a built-in state as a JSON state file.
    Gen {
        /// State name: noisy-pair (alias example1), bell-zero (alias
        /// example2), w (alias example3), ghz, bell, random, product.
        #[arg(long)]
        state: String,
        /// Mixing weight for noisy-pair, in [0, 1].
        #[arg(long)]
        p: Option<f64>,
        /// Qubit count for ghz / w.
        #[arg(long)]
        n: Option<usize>,
        /// Subsystem dimensions, e.g. `2,2,3`; for `product`, blocks
        /// separated by `|`, e.g. `2,2|3`.
        #[arg(long)]
        dims: Option<String>,
        /// RNG seed for random / product.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the realigned matrix of a bipartite view.
    Realign {
        #[arg(short, long)]
        input: PathBuf,
        /// Bipartition such as `1|2,3`; the first block leads the view.
        #[arg(short = 'P', long)]
        partition: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Emit JSON (nested `[re, im]` rows) instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the singular values of the realigned bipartite view.
    Svals {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short = 'P', long)]
        partition: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the state is a product across a partition.
    Test {
        #[arg(short, long)]
        input: PathBuf,
        /// Bipartition (rank test) or k-partition (one-vs-rest family over
        /// the coarse-grained blocks).
        #[arg(short = 'P', long)]
        partition: String,
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        tol: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Like `test`, and extract the normalized factor states on success.
    Factorize {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short = 'P', long)]
        partition: String,
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        tol: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Search for the finest partition under which the state is a product.
    Analyze {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        tol: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Gen {
            state,
            p,
            n,
            dims,
            seed,
            output,
        } => cmd_gen(&state, p, n, dims.as_deref(), seed, output.as_deref()),
        Command::Realign {
            input,
            partition,
            output,
            json,
        } => cmd_realign(&input, &partition, output.as_deref(), json),
        Command::Svals {
            input,
            partition,
            output,
            json,
        } => cmd_svals(&input, &partition, output.as_deref(), json),
        Command::Test {
            input,
            partition,
            tol,
            output,
            json,
        } => cmd_test(&input, &partition, tol, output.as_deref(), json),
        Command::Factorize {
            input,
            partition,
            tol,
            output,
            json,
        } => cmd_factorize(&input, &partition, tol, output.as_deref(), json),
        Command::Analyze {
            input,
            tol,
            output,
            json,
        } => cmd_analyze(&input, tol, output.as_deref(), json),
    }
}

fn emit(text: String, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid dimension `{tok}` in --dims")))
        })
        .collect()
}

fn parse_dim_blocks(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    text.split('|').map(parse_dims).collect()
}

fn cmd_gen(
    state: &str,
    p: Option<f64>,
    n: Option<usize>,
    dims: Option<&str>,
    seed: u64,
    output: Option<&Path>,
) -> Result<u8, CliError> {
    let require_p = || p.ok_or_else(|| CliError::Usage(format!("--p is required for `{state}`")));
    let require_n = || n.ok_or_else(|| CliError::Usage(format!("--n is required for `{state}`")));
    let require_dims =
        || dims.ok_or_else(|| CliError::Usage(format!("--dims is required for `{state}`")));

    let file = match state {
        "noisy-pair" | "example1" => StateFile::from_density(&gen::noisy_pair(require_p()?)?),
        "ghz" => StateFile::from_pure(&gen::ghz(require_n()?)?),
        "w" | "example3" => StateFile::from_pure(&gen::w(require_n()?)?),
        "bell" => StateFile::from_pure(&gen::bell()),
        "bell-zero" | "example2" => StateFile::from_pure(&gen::bell_zero()),
        "random" => {
            let dims = parse_dims(require_dims()?)?;
            StateFile::from_density(&gen::random_density(&dims, seed)?)
        }
        "product" => {
            let blocks = parse_dim_blocks(require_dims()?)?;
            StateFile::from_density(&gen::random_product(&blocks, seed)?)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown state `{other}`; known states: noisy-pair (alias example1), \
                 bell-zero (alias example2), w (alias example3), ghz, bell, random, product"
            )))
        }
    };
    emit(file.to_json(), output)?;
    Ok(0)
}

/// Read a state file: returns the density-matrix view, the content digest,
/// and the path as text.
fn load_density(path: &Path) -> Result<(DensityMatrix, String, String), CliError> {
    let bytes =
        fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>();
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))?;
    let rho = StateFile::from_json(&text)?.parse()?.into_density();
    Ok((rho, digest, path.display().to_string()))
}

fn realigned_view(
    rho: &DensityMatrix,
    partition_text: &str,
) -> Result<(Partition, qprod::CMatrix), CliError> {
    let partition = parse_partition(partition_text, rho.n_subsystems())?;
    let view = product::bipartite_view(rho, &partition)?;
    let realigned = matcore::realign(&view.matrix, view.m, view.n)?;
    Ok((partition, realigned))
}

fn matrix_text(m: &qprod::CMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format_complex(m[(i, j)].re, m[(i, j)].im))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn matrix_json(m: &qprod::CMatrix) -> String {
    let mut out = String::from("[\n");
    for i in 0..m.nrows() {
        let row: Vec<[f64; 2]> = (0..m.ncols())
            .map(|j| [m[(i, j)].re, m[(i, j)].im])
            .collect();
        let line = serde_json::to_string(&row).expect("row serializes");
        let sep = if i + 1 < m.nrows() { "," } else { "" };
        out.push_str(&format!("  {line}{sep}\n"));
    }
    out.push_str("]\n");
    out
}

fn cmd_realign(
    input: &Path,
    partition: &str,
    output: Option<&Path>,
    json: bool,
) -> Result<u8, CliError> {
    let (rho, _, _) = load_density(input)?;
    let (_, realigned) = realigned_view(&rho, partition)?;
    let text = if json {
        matrix_json(&realigned)
    } else {
        matrix_text(&realigned)
    };
    emit(text, output)?;
    Ok(0)
}

fn cmd_svals(
    input: &Path,
    partition: &str,
    output: Option<&Path>,
    json: bool,
) -> Result<u8, CliError> {
    let (rho, _, _) = load_density(input)?;
    let (_, realigned) = realigned_view(&rho, partition)?;
    let fact = matcore::svd(&realigned)?;
    let text = if json {
        let mut out =
            serde_json::to_string_pretty(&fact.singular_values).expect("values serialize");
        out.push('\n');
        out
    } else {
        let mut out = String::new();
        for s in &fact.singular_values {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    };
    emit(text, output)?;
    Ok(0)
}

/// Render a partition of composite block labels in original subsystem
/// labels: composite label `t` stands for the user partition's block `t`.
fn composite_cut_text(user: &Partition, cut: &Partition) -> String {
    cut.blocks()
        .iter()
        .map(|blk| {
            let mut labels: Vec<usize> = blk
                .iter()
                .flat_map(|&t| user.blocks()[t - 1].iter().copied())
                .collect();
            labels.sort_unstable();
            labels
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("|")
}

/// Original-label text of peel step `s` of a k-partition: block `s` split
/// off the union of the later blocks.
fn peel_cut_text(user: &Partition, s: usize) -> String {
    let head = user.blocks()[s]
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let mut tail: Vec<usize> = user.blocks()[s + 1..].iter().flatten().copied().collect();
    tail.sort_unstable();
    let tail = tail
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",");
    format!("{head}|{tail}")
}

fn cmd_test(
    input: &Path,
    partition: &str,
    tol: f64,
    output: Option<&Path>,
    json: bool,
) -> Result<u8, CliError> {
    let (rho, digest, path_text) = load_density(input)?;
    let part = parse_partition(partition, rho.n_subsystems())?;
    let mut rep = ReportFile::new("test", &path_text, digest, tol);
    rep.partition = Some(part.to_string());

    let verdict = if part.k() == 2 {
        let r = product::is_product_bipartition(&rho, &part, tol)?;
        rep.rank = Some(r.rank);
        rep.ratio = Some(r.ratio);
        rep.singular_values = Some(r.singular_values);
        r.is_product
    } else {
        let r = product::is_k_product(&rho, &part, tol)?;
        rep.cuts = r
            .reports
            .iter()
            .map(|cr| CutSummary {
                partition: composite_cut_text(&part, &cr.partition),
                product: cr.is_product,
                rank: cr.rank,
                ratio: cr.ratio,
                singular_values: cr.singular_values.clone(),
            })
            .collect();
        r.is_k_product
    };
    rep.verdict = Some(verdict);
    emit(if json { rep.to_json() } else { rep.to_text() }, output)?;
    Ok(if verdict { 0 } else { 1 })
}

fn cmd_factorize(
    input: &Path,
    partition: &str,
    tol: f64,
    output: Option<&Path>,
    json: bool,
) -> Result<u8, CliError> {
    let (rho, digest, path_text) = load_density(input)?;
    let part = parse_partition(partition, rho.n_subsystems())?;
    let mut rep = ReportFile::new("factorize", &path_text, digest, tol);
    rep.partition = Some(part.to_string());

    let verdict = if part.k() == 2 {
        let r = product::factorize_bipartition(&rho, &part, tol)?;
        rep.rank = Some(r.rank);
        rep.ratio = Some(r.ratio);
        rep.singular_values = Some(r.singular_values.clone());
        if let Some(factors) = &r.factors {
            rep.factor_adjustment = Some(r.factor_adjustment);
            rep.factors = Some(factors.iter().map(StateFile::from_density).collect());
        }
        r.is_product
    } else {
        let r = product::factorize_partition(&rho, &part, tol)?;
        rep.cuts = r
            .reports
            .iter()
            .enumerate()
            .map(|(s, cr)| CutSummary {
                partition: peel_cut_text(&part, s),
                product: cr.is_product,
                rank: cr.rank,
                ratio: cr.ratio,
                singular_values: cr.singular_values.clone(),
            })
            .collect();
        if let Some(factors) = &r.factors {
            let adjustment = r
                .reports
                .iter()
                .map(|cr| cr.factor_adjustment)
                .fold(0.0f64, f64::max);
            rep.factor_adjustment = Some(adjustment);
            rep.factors = Some(factors.iter().map(StateFile::from_density).collect());
        }
        r.is_product
    };
    rep.verdict = Some(verdict);
    emit(if json { rep.to_json() } else { rep.to_text() }, output)?;
    Ok(if verdict { 0 } else { 1 })
}

fn cmd_analyze(input: &Path, tol: f64, output: Option<&Path>, json: bool) -> Result<u8, CliError> {
    let (rho, digest, path_text) = load_density(input)?;
    let tree = product::finest_product_partition(&rho, tol)?;
    let mut rep = ReportFile::new("analyze", &path_text, digest, tol);
    rep.finest_partition = Some(tree.partition.to_string());
    rep.cuts = tree
        .reports
        .iter()
        .map(|sr| CutSummary {
            partition: sr.original_partition_text(),
            product: sr.report.is_product,
            rank: sr.report.rank,
            ratio: sr.report.ratio,
            singular_values: sr.report.singular_values.clone(),
        })
        .collect();
    rep.factors = Some(tree.factors.iter().map(StateFile::from_density).collect());
    emit(if json { rep.to_json() } else { rep.to_text() }, output)?;
    Ok(0)
}
