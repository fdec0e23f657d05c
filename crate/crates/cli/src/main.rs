use std::process::ExitCode;

use capcurl::diagrams::{arrow_diagram, cap_curl, Arrow, DiagramContext, Format, Mode, WallDrawing};
use capcurl::jantzen::{collect_terms, raw_jsf, reduced_jsf, DecompositionOracle, JsfTerm};
use capcurl::multiplicities::{
    brauer_decomposition_number, decomposition_matrix, decomposition_number, tilting_mult,
    DecompositionMatrix, MatrixKind,
};
use capcurl::order::{conjugate, lower_set, preceq, WeylGroup};
use capcurl::verify::{verify_sweep, SweepConfig};
use capcurl::{Error, GroupContext, Partition};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "capcurl",
    version,
    about = "Arrow diagrams, cap-curl diagrams and decomposition numbers for Sp_2m in characteristic p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Context {
    /// Characteristic, an odd prime
    #[arg(long)]
    p: u32,
    /// Rank, for Sp_2m
    #[arg(long)]
    m: u32,
    /// Number of arrows; defaults to max(1, l(lambda))
    #[arg(long)]
    s: Option<u32>,
    /// Wall drawing when the wall sits at the right end
    #[arg(long, value_enum)]
    drawing: Option<DrawingArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DrawingArg {
    Above,
    Below,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZeroArg {
    Up,
    Down,
}

impl From<ZeroArg> for Arrow {
    fn from(z: ZeroArg) -> Arrow {
        match z {
            ZeroArg::Up => Arrow::Up,
            ZeroArg::Down => Arrow::Down,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramFormat {
    Unicode,
    Ascii,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    C,
    Co,
}

#[derive(Clone, Copy, ValueEnum)]
enum JsfFormat {
    /// Collected character as JSON
    Json,
    /// Collected character as a formula
    Text,
    /// One row per term
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Chi,
    L,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Wp,
    Wpc,
    Wpd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Decomp,
    Tilt,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum BrauerFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Arrow diagram of a weight
    Diagram {
        #[command(flatten)]
        ctx: Context,
        #[arg(long)]
        lambda: Partition,
        /// Arrow at node 1
        #[arg(long, value_enum, default_value = "down")]
        zero: ZeroArg,
        #[arg(long, value_enum, default_value = "unicode")]
        format: DiagramFormat,
    },
    /// Cap-curl diagram (mode c) or codiagram (mode co) of a weight
    Capcurl {
        #[command(flatten)]
        ctx: Context,
        #[arg(long)]
        lambda: Partition,
        #[arg(long, value_enum, default_value = "c")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "down")]
        zero: ZeroArg,
        #[arg(long, value_enum, default_value = "unicode")]
        format: DiagramFormat,
    },
    /// Right-hand side of the Jantzen sum formula
    Jsf {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        lambda: Partition,
        /// Only the surviving terms (lambda must be a p-core)
        #[arg(long)]
        reduced: bool,
        /// `l` rewrites the reduced sum in irreducible characters
        #[arg(long, value_enum, default_value = "chi")]
        basis: BasisArg,
        #[arg(long, value_enum, default_value = "json")]
        format: JsfFormat,
    },
    /// The order generated by arrow moves, and conjugacy
    Order {
        #[command(flatten)]
        ctx: Context,
        /// Whether A ⪯ B
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        preceq: Option<Vec<Partition>>,
        /// All weights below LAMBDA, largest first
        #[arg(long, value_name = "LAMBDA")]
        lower_set: Option<Partition>,
        /// Whether A and B are conjugate under --group
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        conjugate: Option<Vec<Partition>>,
        #[arg(long, value_enum, default_value = "wpd")]
        group: GroupArg,
    },
    /// Weyl filtration multiplicity (T(lambda) : ∇(mu))
    Tilting {
        #[command(flatten)]
        ctx: Context,
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        mu: Partition,
    },
    /// Decomposition number [Δ(lambda) : L(mu)]
    Decnum {
        #[command(flatten)]
        ctx: Context,
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        mu: Partition,
    },
    /// Decomposition or tilting matrix over the lower set of lambda
    Decmat {
        #[command(flatten)]
        ctx: Context,
        #[arg(long)]
        lambda: Partition,
        #[arg(long, value_enum, default_value = "decomp")]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "json")]
        format: MatrixFormat,
    },
    /// Brauer algebra decomposition number [S(mu^T) : D(lambda^T)] for B_r(delta)
    Brauer {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        mu: Partition,
        #[arg(long, value_enum, default_value = "text")]
        format: BrauerFormat,
    },
    /// Cross-check the closed formulas against the Jantzen oracle; JSON lines on stdout
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,11")]
        primes: Vec<u32>,
        #[arg(long, default_value_t = 5)]
        m_max: u32,
        #[arg(long, default_value_t = 14)]
        size_max: u64,
        /// Worker threads; defaults to the available parallelism
        #[arg(long)]
        jobs: Option<usize>,
    },
}

enum Failure {
    Domain(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

fn no_unicode() -> bool {
    std::env::var_os("CAPCURL_NO_UNICODE").is_some_and(|v| !v.is_empty())
}

fn format_of(f: DiagramFormat) -> Format {
    match f {
        DiagramFormat::Unicode if no_unicode() => Format::Ascii,
        DiagramFormat::Unicode => Format::Unicode,
        DiagramFormat::Ascii => Format::Ascii,
        DiagramFormat::Json => Format::Json,
    }
}

fn text(s: &str) -> String {
    if no_unicode() {
        s.replace('⪯', "<=").replace('∧', "^").replace('∨', "v").replace('×', "x")
    } else {
        s.to_string()
    }
}

fn context(c: &Context, weights: &[&Partition]) -> Result<DiagramContext, Error> {
    let group = GroupContext::new(c.p, c.m)?;
    let longest = weights.iter().map(|w| w.len() as u32).max().unwrap_or(0);
    let s = c.s.unwrap_or(longest.max(1));
    let drawing = c.drawing.map(|d| match d {
        DrawingArg::Above => WallDrawing::Above,
        DrawingArg::Below => WallDrawing::Below,
    });
    DiagramContext::with_drawing(group, s, drawing)
}

fn csv_text(rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Internal(e.to_string()))
}

fn terms_csv(mut terms: Vec<JsfTerm>) -> Result<String, Failure> {
    terms.sort_by_key(|a| (a.root, a.l));
    let mut rows = vec![["root", "i", "j", "l", "a", "valuation", "sign", "target"]
        .iter()
        .map(|s| s.to_string())
        .collect()];
    for t in terms {
        let (i, j) = t.root.indices();
        rows.push(vec![
            t.root.to_string(),
            i.to_string(),
            j.to_string(),
            t.l.to_string(),
            t.a.to_string(),
            t.valuation.to_string(),
            t.sign.to_string(),
            t.target.to_string(),
        ]);
    }
    csv_text(rows)
}

fn matrix_csv(m: &DecompositionMatrix) -> Result<String, Failure> {
    let mut header = vec![String::new()];
    header.extend(m.labels.iter().map(|l| l.to_string()));
    let mut rows = vec![header];
    for (label, row) in m.labels.iter().zip(&m.entries) {
        let mut r = vec![label.to_string()];
        r.extend(row.iter().map(|e| e.to_string()));
        rows.push(r);
    }
    csv_text(rows)
}

fn json<T: serde::Serialize>(v: &T) -> Outcome {
    serde_json::to_string(v).map(|s| s + "\n").map_err(|e| Failure::Internal(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Diagram { ctx, lambda, zero, format } => {
            let c = context(&ctx, &[&lambda])?;
            let d = arrow_diagram(&lambda, &c, zero.into())?;
            Ok(d.render(format_of(format)) + "\n")
        }
        Command::Capcurl { ctx, lambda, mode, zero, format } => {
            let c = context(&ctx, &[&lambda])?;
            let mode = match mode {
                ModeArg::C => Mode::C,
                ModeArg::Co => Mode::Co,
            };
            let d = arrow_diagram(&lambda, &c, zero.into())?;
            Ok(cap_curl(&d, mode).render(format_of(format)) + "\n")
        }
        Command::Jsf { p, m, lambda, reduced, basis, format } => {
            let g = GroupContext::new(p, m)?;
            let terms = if reduced { reduced_jsf(&lambda, &g)? } else { raw_jsf(&lambda, &g)? };
            let character = match basis {
                BasisArg::Chi => collect_terms(&terms)?,
                BasisArg::L => DecompositionOracle::new(g).l_expansion(&lambda)?,
            };
            match (format, basis) {
                (JsfFormat::Csv, BasisArg::Chi) => terms_csv(terms),
                (JsfFormat::Csv, BasisArg::L) => Err(Failure::Domain(
                    "the term list is only available in the chi basis".into(),
                )),
                (JsfFormat::Json, _) => json(&character),
                (JsfFormat::Text, _) => Ok(format!("{character}\n")),
            }
        }
        Command::Order { ctx, preceq: pre, lower_set: lower, conjugate: conj, group } => {
            match (pre, lower, conj) {
                (Some(v), None, None) => {
                    let c = context(&ctx, &[&v[1]])?;
                    Ok(format!("{}\n", preceq(&v[0], &v[1], &c)?))
                }
                (None, Some(l), None) => {
                    let c = context(&ctx, &[&l])?;
                    Ok(lower_set(&l, &c)?.iter().map(|w| format!("{w}\n")).collect())
                }
                (None, None, Some(v)) => {
                    let c = context(&ctx, &[&v[0], &v[1]])?;
                    let g = match group {
                        GroupArg::Wp => WeylGroup::Wp,
                        GroupArg::Wpc => WeylGroup::WpC,
                        GroupArg::Wpd => WeylGroup::WpD,
                    };
                    Ok(format!("{}\n", conjugate(&v[0], &v[1], &c, g)?))
                }
                _ => Err(Failure::Domain(
                    "give exactly one of --preceq, --lower-set, --conjugate".into(),
                )),
            }
        }
        Command::Tilting { ctx, lambda, mu } => {
            let c = context(&ctx, &[&lambda])?;
            Ok(format!("{}\n", tilting_mult(&lambda, &mu, &c)?))
        }
        Command::Decnum { ctx, lambda, mu } => {
            let c = context(&ctx, &[&lambda])?;
            Ok(format!("{}\n", decomposition_number(&lambda, &mu, &c)?))
        }
        Command::Decmat { ctx, lambda, kind, format } => {
            let c = context(&ctx, &[&lambda])?;
            let kind = match kind {
                KindArg::Decomp => MatrixKind::Decomp,
                KindArg::Tilt => MatrixKind::Tilt,
            };
            let m = decomposition_matrix(&lambda, &c, kind)?;
            match format {
                MatrixFormat::Json => json(&m),
                MatrixFormat::Csv => matrix_csv(&m),
            }
        }
        Command::Brauer { p, delta, r, lambda, mu, format } => {
            let b = brauer_decomposition_number(p, delta, r, &lambda, &mu)?;
            match format {
                BrauerFormat::Text => Ok(format!("{}\n", b.value)),
                BrauerFormat::Json => json(&b),
            }
        }
        Command::Verify { primes, m_max, size_max, jobs } => {
            let report = verify_sweep(&SweepConfig { primes, m_max, size_max, jobs: jobs.unwrap_or(0) })?;
            let s = &report.summary;
            eprintln!(
                "weights: {}, checks: {}, discrepancies: {}, diagnostics: {}, elapsed: {:.2} s",
                s.weights, s.checks, s.discrepancies, s.diagnostics, s.elapsed_seconds
            );
            if s.discrepancies > 0 {
                eprint!("{}", report.to_json_lines());
                return Err(Failure::Internal(format!("{} discrepancies", s.discrepancies)));
            }
            Ok(report.to_json_lines())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", text(&out));
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
