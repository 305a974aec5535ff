//! `symconf`: build, check and catalogue symmetric configurations.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symconf::bdc::BdcSpec;
use symconf::catalog::{spectrum, RulerDb, SpectrumOptions};
use symconf::construct::{bose_ruler, ruzsa_ruler, singer_ruler};
use symconf::extend::{extend_chain, extend_chain_bdc};
use symconf::format::{self, Document};
use symconf::matrix::{CirculantSpec, IncidenceMatrix};
use symconf::ruler::{orbit_search, search_mgr, Ruler, SearchOutcome};
use symconf::Error;

// A closed downstream pipe is not an error worth reporting.
macro_rules! out {
    ($($t:tt)*) => {{
        let mut so = io::stdout().lock();
        match write!(so, $($t)*).and_then(|_| so.flush()) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
            r => r.map_err(|e| Failure::Io(e.to_string()))?,
        }
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        out!("{}\n", format!($($t)*))
    }};
}

#[derive(Parser)]
#[command(name = "symconf", version, about = "Symmetric configurations v_k from modular Golomb rulers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a cyclic configuration from a classical difference set.
    Construct(ConstructArgs),
    /// Check a matrix file and print v, k, deficiency and girth.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Modular Golomb ruler tools.
    #[command(subcommand)]
    Ruler(RulerCommand),
    /// Block double-circulant tools.
    #[command(subcommand)]
    Bdc(BdcCommand),
    /// Add `theta` points and lines by successive extension.
    Extend {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        theta: usize,
        /// Node budget for each aggregate search.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Dense)]
        format: MatrixFormat,
    },
    /// Spectrum of known parameters for one k.
    Spectrum {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = EffortArg::Formulas)]
        effort: EffortArg,
        /// CSV of `k,length` pairs overriding the built-in Golomb lengths.
        #[arg(long)]
        ruler_db: Option<PathBuf>,
        /// Node budget per ruler search (default 200000000).
        #[arg(long)]
        search_budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Convert a matrix file to another format.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: MatrixFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Singer,
    Bose,
    Ruzsa,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Ruler,
    Circulant,
    Dense,
    Alist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixFormat {
    Dense,
    Alist,
}

#[derive(Clone, Copy, ValueEnum)]
enum EffortArg {
    Formulas,
    Search,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    /// Field order (Singer, Bose).
    #[arg(long)]
    q: Option<u64>,
    /// Prime (Ruzsa).
    #[arg(long)]
    p: Option<u64>,
    /// Primitive root for Ruzsa; the smallest one by default.
    #[arg(long)]
    g: Option<u64>,
    /// Drop this many of the largest marks.
    #[arg(long, default_value_t = 0)]
    delta: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Ruler)]
    format: OutFormat,
}

/// A ruler given inline or as a file.
#[derive(Args)]
struct RulerInput {
    /// File holding an `mgr v k: ...` line.
    #[arg(long = "in", conflicts_with_all = ["marks"])]
    input: Option<PathBuf>,
    /// Comma-separated marks, used with `--v`.
    #[arg(long, value_delimiter = ',', requires = "v")]
    marks: Option<Vec<u64>>,
    #[arg(long)]
    v: Option<u64>,
}

#[derive(Subcommand)]
enum RulerCommand {
    /// Check that marks form a modular Golomb ruler.
    Check(RulerInput),
    /// Apply `a ↦ m·a + b (mod v)`.
    Transform {
        #[command(flatten)]
        ruler: RulerInput,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 0)]
        b: u64,
    },
    /// List the `Δ ≤ delta-max` for which the marks also work modulo `v + Δ`.
    Stretch {
        #[command(flatten)]
        ruler: RulerInput,
        #[arg(long)]
        delta_max: u64,
    },
    /// Exhaustive search for a `(v, k)` modular Golomb ruler.
    Search {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Transforms of a ruler that also work modulo the target moduli.
    Orbit {
        #[command(flatten)]
        ruler: RulerInput,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum BdcCommand {
    /// Split a circulant into `t × t` circulant blocks.
    Split {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower each diagonal weight by the given amounts.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shift by `j`, level the other diagonals and keep `c × c` blocks.
    Truncate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        c: usize,
        /// Diagonal to put first; the best one by default.
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Alternating variant for even `t`, keeping `2f × 2f` blocks.
    AltTruncate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures reported with exit code 1.
enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn write_matrix(m: &IncidenceMatrix, fmt: MatrixFormat, out: Option<&Path>) -> CliResult {
    m.verify()?;
    let text = match fmt {
        MatrixFormat::Dense => format::write_dense(m),
        MatrixFormat::Alist => format::write_alist(m),
    };
    emit(&text, out)
}

fn write_bdc(b: &BdcSpec, out: Option<&Path>) -> CliResult {
    b.verify()?;
    emit(&format::write_bdc(b), out)
}

fn load_ruler(input: &RulerInput) -> CliResult<Ruler> {
    match (&input.input, &input.marks, input.v) {
        (Some(path), _, _) => Ok(format::parse_ruler(&read(path)?)?),
        (None, Some(marks), Some(v)) => {
            let mut marks = marks.clone();
            marks.sort_unstable();
            Ok(Ruler::with_modulus(marks, v)?)
        }
        _ => Err(Failure::Domain(Error::ConstraintViolated("give --in FILE or --marks with --v".into()))),
    }
}

fn load_circulant(path: &Path) -> CliResult<CirculantSpec> {
    match format::parse(&read(path)?)? {
        Document::Ruler(r) => Ok(r.to_circulant()?),
        Document::Circulant(c) => Ok(c),
        _ => Err(Failure::Domain(Error::ConstraintViolated("expected a ruler or circulant file".into()))),
    }
}

fn load_bdc(path: &Path) -> CliResult<BdcSpec> {
    match format::parse(&read(path)?)? {
        Document::Bdc(b) => Ok(b),
        _ => Err(Failure::Domain(Error::ConstraintViolated("expected a bdc file".into()))),
    }
}

fn construct(a: &ConstructArgs) -> CliResult {
    let need = |x: Option<u64>, flag: &str| {
        x.ok_or_else(|| Failure::Domain(Error::ConstraintViolated(format!("{flag} is required for this family"))))
    };
    let ruler = match a.family {
        FamilyArg::Singer => singer_ruler(need(a.q, "--q")?)?,
        FamilyArg::Bose => bose_ruler(need(a.q, "--q")?)?,
        FamilyArg::Ruzsa => ruzsa_ruler(need(a.p, "--p")?, a.g)?,
    };
    let ruler = ruler.truncate(a.delta)?;
    let circ = ruler.to_circulant()?;
    let m = IncidenceMatrix::from_circulant(&circ);
    m.verify()?;
    let text = match a.format {
        OutFormat::Ruler => format::write_ruler(&ruler)?,
        OutFormat::Circulant => format::write_circulant(&circ),
        OutFormat::Dense => format::write_dense(&m),
        OutFormat::Alist => format::write_alist(&m),
    };
    emit(&text, a.out.as_deref())
}

fn verify(path: &Path) -> CliResult {
    let m = format::parse(&read(path)?)?.to_matrix()?;
    let r = m.verify()?;
    let girth = m.girth().map_or("inf".to_string(), |g| g.to_string());
    outln!("v={} k={} deficiency={} girth={girth}", r.v, r.k, r.deficiency);
    Ok(())
}

fn ruler_cmd(cmd: &RulerCommand) -> CliResult {
    match cmd {
        RulerCommand::Check(input) => {
            let r = load_ruler(input)?;
            let v = r.modulus().expect("loaded rulers carry a modulus");
            if r.is_modular_golomb(v)? {
                outln!("ok: ({v},{}) modular Golomb ruler", r.order());
                Ok(())
            } else {
                Err(Error::NotModularGolomb { v, k: r.order() }.into())
            }
        }
        RulerCommand::Transform { ruler, m, b } => {
            let r = load_ruler(ruler)?;
            let v = r.modulus().expect("loaded rulers carry a modulus");
            emit(&format::write_ruler(&r.transform(v, *m, *b)?)?, None)
        }
        RulerCommand::Stretch { ruler, delta_max } => {
            let r = load_ruler(ruler)?;
            let v = r.modulus().expect("loaded rulers carry a modulus");
            let deltas = r.stretch(v, *delta_max)?;
            let list: Vec<String> = deltas.iter().map(u64::to_string).collect();
            outln!("{}", if list.is_empty() { "none".to_string() } else { list.join(",") });
            Ok(())
        }
        RulerCommand::Search { v, k, budget } => {
            match search_mgr(*v, *k, *budget) {
                SearchOutcome::Found(r) => emit(&format::write_ruler(&r)?, None)?,
                SearchOutcome::NotFound => outln!("not found (exhaustive)"),
                SearchOutcome::BudgetExceeded => outln!("unknown (budget exceeded)"),
            }
            Ok(())
        }
        RulerCommand::Orbit { ruler, targets } => {
            let r = load_ruler(ruler)?;
            let v = r.modulus().expect("loaded rulers carry a modulus");
            for (_, hit) in orbit_search(&r, v, targets)? {
                out!("{}", format::write_ruler(&hit)?);
            }
            Ok(())
        }
    }
}

fn bdc_cmd(cmd: &BdcCommand) -> CliResult {
    match cmd {
        BdcCommand::Split { input, t, out } => write_bdc(&BdcSpec::split(&load_circulant(input)?, *t)?, out.as_deref()),
        BdcCommand::Reduce { input, deltas, out } => {
            write_bdc(&load_bdc(input)?.reduce_weights(deltas)?, out.as_deref())
        }
        BdcCommand::Truncate { input, c, j, out } => {
            let b = load_bdc(input)?;
            let j = j.unwrap_or_else(|| b.best_shift(*c).0);
            write_bdc(&b.shift_truncate(j, *c)?, out.as_deref())
        }
        BdcCommand::AltTruncate { input, f, j, out } => {
            let b = load_bdc(input)?;
            if b.t() % 2 == 1 {
                return Err(Error::OddBlockCount(b.t()).into());
            }
            let j = j.unwrap_or_else(|| b.best_alternate_shift(*f).0);
            write_bdc(&b.alternate_truncate(j, *f)?, out.as_deref())
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Construct(a) => construct(&a),
        Command::Verify { input } => verify(&input),
        Command::Ruler(cmd) => ruler_cmd(&cmd),
        Command::Bdc(cmd) => bdc_cmd(&cmd),
        Command::Extend { input, theta, budget, out, format: fmt } => {
            let m = match format::parse(&read(&input)?)? {
                Document::Bdc(b) => extend_chain_bdc(&b, theta, budget)?,
                doc => extend_chain(&doc.to_matrix()?, theta, budget)?,
            };
            write_matrix(&m, fmt, out.as_deref())
        }
        Command::Spectrum { k, effort, ruler_db, search_budget, json } => {
            let mut db = RulerDb::embedded();
            if let Some(path) = ruler_db {
                db = db.merged(&RulerDb::from_csv(&read(&path)?)?)?;
            }
            let opts = match effort {
                EffortArg::Formulas => SpectrumOptions::default(),
                EffortArg::Search => {
                    let base = SpectrumOptions::with_search();
                    SpectrumOptions { search_budget: search_budget.or(base.search_budget), ..base }
                }
            };
            let row = spectrum(k, &db, opts)?;
            if json {
                let text = serde_json::to_string_pretty(&row).map_err(|e| Failure::Io(e.to_string()))?;
                outln!("{text}");
            } else {
                out!("{row}");
            }
            Ok(())
        }
        Command::Export { input, format: fmt, out } => {
            let m = format::parse(&read(&input)?)?.to_matrix()?;
            write_matrix(&m, fmt, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: Io: {msg}");
            ExitCode::from(1)
        }
    }
}
