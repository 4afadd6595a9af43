use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gauss_eof::bounds::bounds_report;
use gauss_eof::decomposition::verify_decomposition;
use gauss_eof::eof::{eof, EofReport, FamilyPoint};
use gauss_eof::io::{params_from_tuple, StateInput};
use gauss_eof::numerics::format_sig;
use gauss_eof::sweeps::{family_sweep, squeezed_vacuum_curve, CurvePoint};
use gauss_eof::benchmark::{self, RowResult};
use gauss_eof::{BoundsReport, Error, StandardFormParams};
use serde_json::{json, Value};

const THREADS_VAR: &str = "GAUSS_EOF_THREADS";

#[derive(Parser, Debug)]
#[command(name = "gauss-eof", version, about = "Entanglement of formation of two-mode Gaussian states")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct StateArgs {
    /// Standard-form parameters n m kx kp
    #[arg(long, num_args = 4, value_names = ["N", "M", "KX", "KP"], allow_negative_numbers = true)]
    params: Option<Vec<f64>>,

    /// JSON file with {"gamma": [[...]]} or {"params": {...}}
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entanglement of formation of one state
    Eof(StateArgs),
    /// EOF with Gaussian EOF and the symmetric-surrogate bounds
    Bounds(StateArgs),
    /// Recompute the six benchmark states against their reference values
    Table1 {
        /// Exit nonzero if any cell is outside its tolerance
        #[arg(long)]
        strict: bool,
    },
    /// EOF of the amplifier family over a (kappa, nbar) grid
    SweepFamily {
        #[arg(long, num_args = 1.., default_values_t = [2.0])]
        kappa: Vec<f64>,
        #[arg(long, num_args = 1.., default_values_t = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0])]
        nbar: Vec<f64>,
    },
    /// Uncertainty of two-mode squeezed vacua against squeezing
    Figure1 {
        /// Negative weight parameter(s)
        #[arg(long, num_args = 1.., allow_negative_numbers = true, default_values_t = [-1.0, -1.2, -1.5])]
        a: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        r_max: f64,
        #[arg(long, default_value_t = 2001)]
        points: usize,
    },
    /// Monte-Carlo reconstruction of the state from its optimal decomposition
    VerifyDecomposition {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check symmetry, positivity and the uncertainty relation
    Validate(StateArgs),
}

enum Failure {
    Lib(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn report(&self) -> (i32, Value) {
        match self {
            Failure::Lib(e) => (
                e.exit_code(),
                json!({ "error": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() }),
            ),
            Failure::Verification(msg) => (
                3,
                json!({ "error": "verification_failed", "message": msg, "exit_code": 3 }),
            ),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{THREADS_VAR} must be a non-negative integer, got {raw:?}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    }
    Ok(())
}

impl StateArgs {
    fn input(&self) -> CliResult<StateInput> {
        match (&self.params, &self.input) {
            (Some(v), None) => Ok(StateInput::Params {
                params: StandardFormParams::new(v[0], v[1], v[2], v[3]),
            }),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                Ok(StateInput::from_json(&text)?)
            }
            _ => Err(Error::InvalidInput("give exactly one of --params or --input".into()).into()),
        }
    }

    fn params(&self) -> CliResult<StandardFormParams> {
        match self.input()? {
            StateInput::Params { params: p } => Ok(params_from_tuple(p.n, p.m, p.kx, p.kp)?),
            other => Ok(other.standard_params()?),
        }
    }
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn params_json(p: &StandardFormParams) -> Value {
    json!({ "n": p.n, "m": p.m, "kx": p.kx, "kp": p.kp })
}

fn eof_json(r: &EofReport) -> Value {
    json!({
        "params": params_json(&r.params),
        "a0": r.epr.a0,
        "b0": r.epr.b0,
        "delta0": r.epr.delta0,
        "delta0_prime": r.epr.delta0_prime,
        "eof": r.eof,
        "method": r.method.as_str(),
        "separable": r.epr.separable,
    })
}

fn render_eof(r: &EofReport, format: Format) -> String {
    let p = &r.params;
    match format {
        Format::Json => pretty(&eof_json(r)),
        Format::Csv => csv(
            "n,m,kx,kp,a0,b0,delta0,delta0_prime,eof,method,separable",
            [[p.n, p.m, p.kx, p.kp, r.epr.a0, r.epr.b0, r.epr.delta0, r.epr.delta0_prime, r.eof]
                .iter()
                .map(|v| format_sig(*v, 12))
                .chain([r.method.as_str().to_string(), r.epr.separable.to_string()])
                .collect::<Vec<_>>()
                .join(",")],
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "state         n = {}, m = {}, kx = {}, kp = {}", p.n, p.m, p.kx, p.kp);
            let _ = writeln!(s, "method        {}", r.method.as_str());
            let _ = writeln!(s, "a0, b0        {}, {}", format_sig(r.epr.a0, 12), format_sig(r.epr.b0, 12));
            let _ = writeln!(s, "delta0        {}", format_sig(r.epr.delta0, 12));
            let _ = writeln!(s, "delta0'       {}", format_sig(r.epr.delta0_prime, 12));
            let _ = writeln!(s, "separable     {}", r.epr.separable);
            let _ = writeln!(s, "EOF (ebits)   {}", format_sig(r.eof, 12));
            s
        }
    }
}

fn render_bounds(r: &BoundsReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({
            "params": params_json(&r.params),
            "eof": r.eof,
            "gaussian_eof": r.gaussian_eof,
            "m_opt": r.m_opt,
            "lower_bound": r.lower_bound,
            "upper_bound": r.upper_bound,
            "upper_physical": r.upper_physical,
            "separable": r.separable,
        })),
        Format::Csv => csv(BoundsReport::CSV_HEADER, [r.to_csv_row()]),
        Format::Text => {
            let upper = r
                .upper_bound
                .map(|v| format_sig(v, 12))
                .unwrap_or_else(|| "non-physical surrogate".into());
            format!(
                "lower bound    {}\nEOF            {}\nupper bound    {}\nGaussian EOF   {}\nm_opt          {}\n",
                format_sig(r.lower_bound, 12),
                format_sig(r.eof, 12),
                upper,
                format_sig(r.gaussian_eof, 12),
                format_sig(r.m_opt, 12),
            )
        }
    }
}

fn render_table(rows: &[RowResult], format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({
            "tolerances": benchmark::reference().tolerances,
            "rows": rows,
            "all_within_tolerance": rows.iter().all(RowResult::ok),
        })),
        Format::Csv => csv(RowResult::CSV_HEADER, rows.iter().map(RowResult::to_csv_row)),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:<22} {:>10} {:>14} {:>10} {:>14} {:>8}",
                "n, m, kx, kp", "lower", "EOF", "upper", "Gaussian EOF", "ok"
            );
            for r in rows {
                let p = &r.params;
                let upper = r.upper_bound.computed.map(|v| format!("{v:.5}")).unwrap_or_else(|| "--".into());
                let gauss = r.gaussian_eof.computed.map(|v| format!("{v:.10}")).unwrap_or_else(|| "--".into());
                let _ = writeln!(
                    s,
                    "{:<22} {:>10.5} {:>14.10} {:>10} {:>14} {:>8}",
                    format!("{}, {}, {}, {}", p.n, p.m, p.kx, p.kp),
                    r.lower_bound.computed.unwrap_or(f64::NAN),
                    r.eof.computed.unwrap_or(f64::NAN),
                    upper,
                    gauss,
                    r.ok()
                );
            }
            s
        }
    }
}

fn render_family(points: &[FamilyPoint], format: Format) -> String {
    match format {
        Format::Json => pretty(&Value::Array(
            points
                .iter()
                .map(|p| json!({ "kappa": p.kappa, "nbar": p.nbar, "eof": p.report.eof, "g_kappa": p.g_kappa, "pure_boundary": p.pure_boundary }))
                .collect(),
        )),
        Format::Csv | Format::Text => csv(FamilyPoint::CSV_HEADER, points.iter().map(FamilyPoint::to_csv_row)),
    }
}

fn render_curve(points: &[CurvePoint], format: Format) -> String {
    match format {
        Format::Json => pretty(&serde_json::to_value(points).expect("serializable")),
        Format::Csv | Format::Text => csv(CurvePoint::CSV_HEADER, points.iter().map(CurvePoint::to_csv_row)),
    }
}

fn run(cli: &Cli) -> CliResult<String> {
    let format = cli.format;
    match &cli.command {
        Command::Eof(state) => Ok(render_eof(&eof(&state.params()?)?, format)),
        Command::Bounds(state) => Ok(render_bounds(&bounds_report(&state.params()?)?, format)),
        Command::Table1 { strict } => {
            let rows = benchmark::evaluate()?;
            let out = render_table(&rows, format);
            let bad = rows.iter().filter(|r| !r.ok()).count();
            if *strict && bad > 0 {
                print!("{out}");
                return Err(Failure::Verification(format!("{bad} of {} rows outside tolerance", rows.len())));
            }
            Ok(out)
        }
        Command::SweepFamily { kappa, nbar } => Ok(render_family(&family_sweep(kappa, nbar)?, format)),
        Command::Figure1 { a, r_max, points } => {
            let mut all = Vec::new();
            for &a in a {
                all.extend(squeezed_vacuum_curve(a, *r_max, *points)?);
            }
            Ok(render_curve(&all, format))
        }
        Command::VerifyDecomposition { state, samples, seed } => {
            let rep = verify_decomposition(&state.params()?, *samples, *seed)?;
            let out = match format {
                Format::Json | Format::Text => pretty(&json!({
                    "r_opt": rep.r_opt,
                    "n_samples": rep.n_samples,
                    "max_abs_error": rep.max_abs_error,
                    "tolerance": rep.tolerance,
                    "pass": rep.pass,
                })),
                Format::Csv => csv(
                    "r_opt,n_samples,max_abs_error,tolerance,pass",
                    [format!(
                        "{},{},{},{},{}",
                        format_sig(rep.r_opt, 12),
                        rep.n_samples,
                        format_sig(rep.max_abs_error, 12),
                        format_sig(rep.tolerance, 12),
                        rep.pass
                    )],
                ),
            };
            if !rep.pass {
                print!("{out}");
                return Err(Failure::Verification(format!(
                    "reconstruction error {} exceeds {}",
                    rep.max_abs_error, rep.tolerance
                )));
            }
            Ok(out)
        }
        Command::Validate(state) => {
            let input = state.input()?;
            let rep = input.validate()?;
            let out = match format {
                Format::Json | Format::Text => pretty(&serde_json::to_value(rep).expect("serializable")),
                Format::Csv => csv(
                    "is_symmetric_matrix,is_positive,nu_minus,nu_plus,is_bona_fide,is_pure",
                    [format!(
                        "{},{},{},{},{},{}",
                        rep.is_symmetric_matrix,
                        rep.is_positive,
                        format_sig(rep.symplectic_eigenvalues[0], 12),
                        format_sig(rep.symplectic_eigenvalues[1], 12),
                        rep.is_bona_fide,
                        rep.is_pure
                    )],
                ),
            };
            if !rep.is_bona_fide {
                print!("{out}");
                return Err(Error::NotBonaFide {
                    min_nu: rep.symplectic_eigenvalues[0],
                }
                .into());
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    // usage errors are input errors; clap's own exit code 2 is reserved for
    // numerical failures here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match configure_threads().and_then(|_| run(&cli)) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let (code, body) = failure.report();
            eprintln!("{body}");
            ExitCode::from(code as u8)
        }
    }
}
