mod files;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qchar_core::crystal::{generate_crystal, Convention};
use qchar_core::io::text::{classical_records, classical_to_text};
use qchar_core::restriction::{matrix_records, render_matrix};
use qchar_core::standard::check_order;
use qchar_core::{
    decompose, ic_matrix, kl_simple, restrict, standards_for, twisted_product, DrinfeldData, DynkinData, EngineConfig,
    EngineError, KlError, Mode, Monomial, Normalization, RestrictionError, Weight,
};

use files::{read_qchar_file, write_output, OutputFormat};

/// Exit status with a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_ALGORITHM: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_GUARD: u8 = 4;

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, msg: msg.into() }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match e {
            EngineError::AlgorithmFailed { .. } | EngineError::AlgorithmStopped(_) | EngineError::ThreadPool(_) => {
                EXIT_ALGORITHM
            }
            EngineError::DepthGuardExceeded(_) => EXIT_GUARD,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<KlError> for Failure {
    fn from(e: KlError) -> Self {
        match e {
            KlError::Engine(e) => e.into(),
            e => Failure { code: EXIT_ALGORITHM, msg: e.to_string() },
        }
    }
}

impl From<RestrictionError> for Failure {
    fn from(e: RestrictionError) -> Self {
        match e {
            RestrictionError::Engine(e) => e.into(),
            RestrictionError::Root(e) => Failure::usage(e.to_string()),
            e @ RestrictionError::CrossCheckFailed(_) => Failure { code: EXIT_MISMATCH, msg: e.to_string() },
            e => Failure { code: EXIT_ALGORITHM, msg: e.to_string() },
        }
    }
}

type CliResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "qchar", version, about = "t-analogs of q-characters for simply-laced quantum loop algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TypeArgs {
    /// Cartan type: A<n>, D<n>, E6, E7 or E8.
    #[arg(long = "type", value_name = "TYPE", conflicts_with = "cartan")]
    ty: Option<String>,
    /// File with one `i j` edge per line, for a custom simply-laced diagram.
    #[arg(long, value_name = "FILE")]
    cartan: Option<PathBuf>,
}

impl TypeArgs {
    fn data(&self) -> Result<DynkinData, Failure> {
        match (&self.ty, &self.cartan) {
            (Some(t), _) => t.parse().map_err(|e: qchar_core::RootError| Failure::usage(e.to_string())),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                DynkinData::from_adjacency_text(&text).map_err(|e| Failure::usage(e.to_string()))
            }
            (None, None) => Err(Failure::usage("one of --type or --cartan is required")),
        }
    }
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output file (stdout when absent).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Binary output without the shared-prefix tree.
    #[arg(long)]
    flat: bool,
    /// Write the bar-invariant normalization instead of `qch`.
    #[arg(long)]
    chi: bool,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, value_name = "D", default_value_t = qchar_core::engine::DEFAULT_MAX_DEPTH)]
    max_depth: u32,
    /// Worker threads (0: one per core).
    #[arg(long, value_name = "T", default_value_t = 0)]
    threads: usize,
    /// Per-layer size and resident-memory figures on stderr.
    #[arg(long)]
    mem_report: bool,
    /// Stop with exit 4 once the resident set exceeds this many MiB.
    #[arg(long, value_name = "MIB")]
    max_mem: Option<u64>,
    /// Checkpoint file, rewritten every `--checkpoint-every` layers and on a guard stop.
    #[arg(long, value_name = "FILE")]
    checkpoint: Option<PathBuf>,
    #[arg(long, value_name = "N", default_value_t = 10, requires = "checkpoint")]
    checkpoint_every: u32,
}

#[derive(Subcommand)]
enum Command {
    /// q-character of an l-fundamental module.
    Fund {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        node: usize,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the expansion from a general l-dominant monomial.
    General {
        #[command(flatten)]
        ty: TypeArgs,
        /// Roots as `i:k` tokens, e.g. `1:0,1:0` for a double root.
        #[arg(long)]
        drinfeld: String,
        /// Zero out non-anchor l-dominant monomials instead of stopping.
        #[arg(long)]
        tolerant: bool,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Continue a run from a checkpoint file.
    Resume {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        tolerant: bool,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classical character `Y[i,k] -> y_i` of a q-character file.
    Restrict {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[command(flatten)]
        ty: OptTypeArgs,
        /// Tab-separated machine records instead of the table.
        #[arg(long)]
        records: bool,
    },
    /// Decomposition of the restriction into irreducible characters.
    Decompose {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[command(flatten)]
        ty: OptTypeArgs,
        #[arg(long)]
        records: bool,
    },
    /// The matrices P(t) and IC(t) over a list of dominant weights.
    Ic {
        #[command(flatten)]
        ty: TypeArgs,
        /// Comma-separated weights, e.g. `w8,2w1,w2,w7,w1,0`.
        #[arg(long)]
        weights: String,
        #[arg(long)]
        tolerant: bool,
        #[arg(long, value_name = "T", default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        records: bool,
    },
    /// Twisted product of q-character files, in the given order.
    Tensor {
        /// Comma-separated q-character files.
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<PathBuf>,
        #[command(flatten)]
        ty: OptTypeArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Simple module character and its standard-module coefficients.
    Simple {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        drinfeld: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monomial crystal generated from `Y[node,0]`.
    Crystal {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        node: usize,
        #[arg(long, default_value_t = 10_000_000)]
        bound: usize,
        #[arg(long, value_enum, default_value_t = ConventionArg::Standard)]
        convention: ConventionArg,
        /// Print the edges `m --i--> m'` instead of the monomials.
        #[arg(long)]
        edges: bool,
        /// Compare the monomial set with a q-character file (exit 3 on mismatch).
        #[arg(long, value_name = "FILE")]
        check_against: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct OptTypeArgs {
    #[arg(long = "type", value_name = "TYPE")]
    ty: Option<String>,
}

impl OptTypeArgs {
    fn parse(&self) -> Result<Option<DynkinData>, Failure> {
        self.ty
            .as_deref()
            .map(|t| t.parse().map_err(|e: qchar_core::RootError| Failure::usage(e.to_string())))
            .transpose()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Standard,
    Dual,
}

fn parse_drinfeld(roots: &str, data: &DynkinData) -> Result<DrinfeldData, Failure> {
    let d: DrinfeldData = roots.parse().map_err(|e: qchar_core::MonomialError| Failure::usage(e.to_string()))?;
    d.check_rank(data.rank()).map_err(|e| Failure::usage(e.to_string()))?;
    if d.is_empty() {
        return Err(Failure::usage("empty Drinfeld data"));
    }
    Ok(d)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qchar: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Fund { ty, node, run, out } => {
            let data = ty.data()?;
            if node == 0 || node > data.rank() {
                return Err(Failure::usage(format!("node {node} outside 1..={}", data.rank())));
            }
            let q = run::run_engine(&data, run::Start::Anchor(Monomial::y(node, 0)), &run, Mode::Strict)?;
            write_output(&data, &q, &out)
        }
        Command::General { ty, drinfeld, tolerant, run, out } => {
            let data = ty.data()?;
            let d = parse_drinfeld(&drinfeld, &data)?;
            let mode = if tolerant { Mode::Tolerant } else { Mode::Strict };
            let q = run::run_engine(&data, run::Start::Anchor(d.to_monomial()), &run, mode)?;
            write_output(&data, &q, &out)
        }
        Command::Resume { input, tolerant, run, out } => {
            let bytes = std::fs::read(&input).map_err(|e| Failure::usage(format!("{}: {e}", input.display())))?;
            let (data, state) =
                qchar_core::io::binary::read_checkpoint(&bytes).map_err(|e| Failure::usage(e.to_string()))?;
            let mode = if tolerant { Mode::Tolerant } else { Mode::Strict };
            let q = run::run_engine(&data, run::Start::State(state), &run, mode)?;
            write_output(&data, &q, &out)
        }
        Command::Restrict { input, ty, records } => {
            let (data, q) = read_qchar_file(&input, ty.parse()?)?;
            let ch = restrict(&data, &q);
            print!("{}", if records { classical_records(&ch) } else { classical_to_text(&ch) });
            Ok(())
        }
        Command::Decompose { input, ty, records } => {
            let (data, q) = read_qchar_file(&input, ty.parse()?)?;
            let table = decompose(&data, &restrict(&data, &q))?;
            if records {
                print!("{}", table.machine_records());
            } else {
                print!("{table}");
            }
            Ok(())
        }
        Command::Ic { ty, weights, tolerant, threads, records } => {
            let data = ty.data()?;
            let weights = weights
                .split(',')
                .map(|w| Weight::parse(w.trim(), data.rank()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::usage(e.to_string()))?;
            let mode = if tolerant { Mode::Tolerant } else { Mode::Strict };
            let config = EngineConfig { threads, mode, ..EngineConfig::default() };
            let res = ic_matrix(&data, &weights, &config)?;
            if records {
                print!("# P\n{}# IC\n{}", matrix_records(&weights, &res.p), matrix_records(&weights, &res.ic));
            } else {
                print!("P(t)\n{}\nIC(t)\n{}", render_matrix(&weights, &res.p), render_matrix(&weights, &res.ic));
            }
            for w in &res.tolerant_rows {
                eprintln!("note: row {w} needed tolerant mode; Freudenthal cross-check passed");
            }
            Ok(())
        }
        Command::Tensor { factors, ty, out } => {
            let forced = ty.parse()?;
            let mut data: Option<DynkinData> = None;
            let mut qs = Vec::new();
            for f in &factors {
                let (d, q) = read_qchar_file(f, forced.clone())?;
                if let Some(prev) = &data {
                    if prev.edges() != d.edges() {
                        return Err(Failure::usage("factors have different Cartan types"));
                    }
                }
                qs.push(if q.norm() == Normalization::Chi { q.to_qch(&d) } else { q });
                data = Some(d);
            }
            let data = data.expect("at least one factor");
            let roots: Vec<DrinfeldData> = qs
                .iter()
                .map(|q| DrinfeldData::from_monomial(q.anchor()).map_err(|e| Failure::usage(e.to_string())))
                .collect::<Result<_, _>>()?;
            check_order(&roots)?;
            let prod = twisted_product(&data, &qs)?;
            write_output(&data, &prod, &out)
        }
        Command::Simple { ty, drinfeld, out } => {
            let data = ty.data()?;
            let p = parse_drinfeld(&drinfeld, &data)?;
            let standards = standards_for(&data, &p)?;
            let res = kl_simple(&data, &p, &standards)?;
            let mut head = String::new();
            for (q, a) in &res.coefficients {
                let q = DrinfeldData::from_monomial(q).expect("l-dominant");
                let q = if q.is_empty() { "-".to_string() } else { q.to_string() };
                head += &format!("# a[{q}] : {a}\n");
            }
            let simple = if out.chi { res.simple } else { res.simple.to_qch(&data) };
            files::write_with_head(&data, &simple, &out, &head)
        }
        Command::Crystal { ty, node, bound, convention, edges, check_against, out } => {
            let data = ty.data()?;
            if node == 0 || node > data.rank() {
                return Err(Failure::usage(format!("node {node} outside 1..={}", data.rank())));
            }
            let conv = match convention {
                ConventionArg::Standard => Convention::Standard,
                ConventionArg::Dual => Convention::Dual,
            };
            let g = generate_crystal(&data, &Monomial::y(node, 0), bound, conv)
                .map_err(|e| Failure { code: EXIT_GUARD, msg: e.to_string() })?;
            let text = if edges {
                g.edge_lines()
            } else {
                g.monomials().iter().map(|m| format!("{m}\n")).collect()
            };
            files::emit_text(&text, out.as_deref())?;
            if let Some(path) = check_against {
                let (_, q) = read_qchar_file(&path, Some(data.clone()))?;
                if q.monomials() == g.monomials() {
                    eprintln!("match: {} monomials", g.len());
                } else {
                    return Err(Failure {
                        code: EXIT_MISMATCH,
                        msg: format!("mismatch: crystal has {} monomials, file has {}", g.len(), q.len()),
                    });
                }
            }
            Ok(())
        }
    }
}
