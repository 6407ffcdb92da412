//! `spectra`: translation vectors, spectra, displacement and tropical limits
//! of free-group representations, from JSON inputs to JSON or CSV reports.
//!
//! Exit codes: 0 success, 1 failed `check`, 2 malformed input, 3 violated
//! mathematical precondition, 4 exhausted iteration budget (report written).

// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod check;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spectra_core::arch::{cartan_vector, jordan_vector};
use spectra_core::chamber::{chamber_norm, proj_distance, ChamberVector, Coord, Spectrum};
use spectra_core::degeneration::{convergence_report, rescaled_spectrum, RescaleMode, MONOTONE_SLACK};
use spectra_core::degeneration::{non_increasing_within, Family};
use spectra_core::displacement::min_displacement;
use spectra_core::groups::{ball, check_word_bound, Word, MAX_RADIUS};
use spectra_core::io::{
    float_matrix_json, floats_json, parse_family, parse_matrix, parse_representation, parse_valued_matrix, sig15,
    spectrum_json, LoadedRepresentation, ToJson,
};
use spectra_core::nonarch::{cartan_vector_trop, jordan_vector_trop};
use spectra_core::Error;

#[derive(Parser)]
#[command(name = "spectra", version, about = "Translation-vector spectra of free-group representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan projection of one matrix (real, or over a valued field).
    Jordan(MatrixArgs),
    /// Cartan projection of one matrix (real, or over a valued field).
    Cartan(MatrixArgs),
    /// Marked spectrum of a representation on the ball of radius R.
    Spectrum(RepArgs),
    /// Minimal displacement λ(ρ) and the word-length bound on the ball.
    Lambda(LambdaArgs),
    /// Exact tropical spectrum of a valued representation or a family.
    Tropical(TropicalArgs),
    /// Rescaled samples of a family against its tropical limit.
    Degenerate(DegenerateArgs),
    /// Property suites on the built-in fixtures.
    Check(OutputArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Log,
    Lambda,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RepArgs {
    #[arg(long)]
    rep: PathBuf,
    #[arg(short = 'R', long = "radius", default_value_t = 2)]
    radius: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LambdaArgs {
    #[arg(long)]
    rep: PathBuf,
    #[arg(short = 'R', long = "radius", default_value_t = 2)]
    radius: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TropicalArgs {
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    rep: Option<PathBuf>,
    #[arg(long)]
    family: Option<PathBuf>,
    #[arg(short = 'R', long = "radius", default_value_t = 2)]
    radius: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DegenerateArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(short = 'R', long = "radius", default_value_t = 2)]
    radius: usize,
    /// Comma-separated increasing samples, each > e.
    #[arg(long, default_value = "1e2,1e4,1e8")]
    samples: String,
    #[arg(long, value_enum, default_value = "log")]
    mode: Mode,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure of a run, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    Math(String),
    Budget,
    Check,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Input(_) => 2,
            Failure::Math(_) => 3,
            Failure::Budget => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_math_precondition() {
            Failure::Math(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Validated settings shared by the subcommands.
struct RunConfig {
    radius: usize,
    tol: f64,
    samples: Vec<f64>,
    output: OutputArgs,
}

impl RunConfig {
    fn new(radius: usize, output: OutputArgs) -> Run<Self> {
        if radius > MAX_RADIUS {
            return Err(Failure::Input(format!("radius {radius} exceeds {MAX_RADIUS}")));
        }
        Ok(RunConfig { radius, tol: 1e-6, samples: Vec::new(), output })
    }

    fn with_tol(mut self, tol: f64) -> Run<Self> {
        if !(1e-10..=1e-2).contains(&tol) {
            return Err(Failure::Input(format!("tolerance {tol} is outside [1e-10, 1e-2]")));
        }
        self.tol = tol;
        Ok(self)
    }

    fn with_samples(mut self, list: &str) -> Run<Self> {
        self.samples = parse_samples(list)?;
        Ok(self)
    }
}

fn parse_samples(list: &str) -> Run<Vec<f64>> {
    let samples = list
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Failure::Input(format!("bad sample {s:?}"))))
        .collect::<Run<Vec<f64>>>()?;
    if let Some(s) = samples.iter().find(|s| !(**s > std::f64::consts::E) || !s.is_finite()) {
        return Err(Failure::Input(format!("sample {s} must be a finite number > e")));
    }
    if samples.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::Input("samples must be strictly increasing".into()));
    }
    Ok(samples)
}

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn has_valuation(text: &str) -> Run<bool> {
    let v: Value = serde_json::from_str(text).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(v.get("valuation").is_some())
}

fn write_output(output: &OutputArgs, body: &[u8]) -> Run<()> {
    let result = match &output.out {
        Some(path) => fs::write(path, body),
        None => std::io::stdout().write_all(body),
    };
    result.map_err(|e| Failure::Input(format!("cannot write output: {e}")))
}

fn write_json(output: &OutputArgs, value: &Value) -> Run<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    write_output(output, text.as_bytes())
}

/// Structured diagnostic on standard error.
fn warn(kind: &str, detail: Value) {
    eprintln!("{}", json!({"warning": kind, "detail": detail}));
}

fn float_text(x: f64) -> String {
    sig15(x).to_string()
}

fn coord_texts<T: Coord>(v: &ChamberVector<T>) -> Vec<String>
where
    ChamberVector<T>: ToJson,
{
    match v.to_json() {
        Value::Array(items) => items
            .iter()
            .map(|x| x.as_f64().map_or_else(|| x.as_str().unwrap_or_default().to_owned(), float_text))
            .collect(),
        _ => unreachable!("chamber vectors serialize as arrays"),
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().flexible(false).from_writer(Vec::new())
}

fn finish_csv(output: &OutputArgs, w: csv::Writer<Vec<u8>>) -> Run<()> {
    let body = w.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
    write_output(output, &body)
}

fn coord_header(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

/// CSV columns: word, coordinates, norm.
fn spectrum_csv<T: Coord>(output: &OutputArgs, s: &Spectrum<T>) -> Run<()>
where
    ChamberVector<T>: ToJson,
{
    let mut w = csv_writer();
    let mut header = vec!["word".to_owned()];
    header.extend(coord_header(s.rank()));
    header.push("norm".into());
    w.write_record(&header).map_err(|e| Failure::Input(e.to_string()))?;
    for (word, v) in s.iter() {
        let mut row = vec![word.to_string()];
        row.extend(coord_texts(v));
        row.push(float_text(chamber_norm(v)));
        w.write_record(&row).map_err(|e| Failure::Input(e.to_string()))?;
    }
    finish_csv(output, w)
}

fn emit_spectrum<T: Coord>(output: &OutputArgs, s: &Spectrum<T>, extra: Value) -> Run<()>
where
    ChamberVector<T>: ToJson,
{
    match output.format {
        Format::Csv => spectrum_csv(output, s),
        Format::Json => {
            let mut v = extra;
            v["spectrum"] = spectrum_json(s);
            write_json(output, &v)
        }
    }
}

fn emit_vector<T: Coord>(output: &OutputArgs, v: &ChamberVector<T>, exact: bool) -> Run<()>
where
    ChamberVector<T>: ToJson,
{
    match output.format {
        Format::Json => write_json(output, &json!({"v": v.to_json(), "norm": sig15(chamber_norm(v)), "exact": exact})),
        Format::Csv => {
            let mut w = csv_writer();
            let mut header = coord_header(v.rank());
            header.push("norm".into());
            w.write_record(&header).map_err(|e| Failure::Input(e.to_string()))?;
            let mut row = coord_texts(v);
            row.push(float_text(chamber_norm(v)));
            w.write_record(&row).map_err(|e| Failure::Input(e.to_string()))?;
            finish_csv(output, w)
        }
    }
}

fn projection(args: MatrixArgs, jordan: bool) -> Run<()> {
    let text = read(&args.matrix)?;
    if has_valuation(&text)? {
        let g = parse_valued_matrix(&text)?;
        let v = if jordan { jordan_vector_trop(&g)? } else { cartan_vector_trop(&g)? };
        emit_vector(&args.output, &v, true)
    } else {
        let g = parse_matrix(&text)?;
        let v = if jordan { jordan_vector(&g)? } else { cartan_vector(&g)? };
        emit_vector(&args.output, &v, false)
    }
}

fn spectrum(args: RepArgs) -> Run<()> {
    let cfg = RunConfig::new(args.radius, args.output)?;
    match parse_representation(&read(&args.rep)?)? {
        LoadedRepresentation::Real(rep) => {
            let words = ball(rep.num_generators(), cfg.radius)?;
            emit_spectrum(&cfg.output, &rep.spectrum(&words)?, json!({"radius": cfg.radius, "exact": false}))
        }
        LoadedRepresentation::Valued(rep) => {
            let words = ball(rep.rep.num_generators(), cfg.radius)?;
            let extra = json!({"radius": cfg.radius, "exact": true, "valuation": rep.valuation.to_string()});
            emit_spectrum(&cfg.output, &rep.spectrum(&words)?, extra)
        }
    }
}

fn lambda(args: LambdaArgs) -> Run<()> {
    let cfg = RunConfig::new(args.radius, args.output)?.with_tol(args.tol)?;
    let rep = match parse_representation(&read(&args.rep)?)? {
        LoadedRepresentation::Real(rep) => rep,
        LoadedRepresentation::Valued(_) => {
            return Err(Failure::Input("lambda needs a rational representation".into()));
        }
    };
    let out = min_displacement(&rep, cfg.tol)?;
    let words = ball(rep.num_generators(), cfg.radius)?;
    let violations = check_word_bound(&rep, out.lambda_hat, &words)?;
    match cfg.output.format {
        Format::Json => {
            let violations: Vec<Value> = violations
                .iter()
                .map(|v| {
                    json!({"word": v.word.to_string(), "translation_length": sig15(v.translation_length),
                           "bound": sig15(v.bound)})
                })
                .collect();
            let report = json!({
                "lambda_hat": sig15(out.lambda_hat),
                "converged": out.converged,
                "iterations": out.iterations,
                "tol": cfg.tol,
                "minimizer": float_matrix_json(&out.minimizer.matrix()),
                "chart": floats_json(&out.chart.coords()),
                "radius": cfg.radius,
                "word_bound_violations": violations,
            });
            write_json(&cfg.output, &report)?;
        }
        Format::Csv => {
            let mut w = csv_writer();
            let e = |e: csv::Error| Failure::Input(e.to_string());
            w.write_record(["lambda_hat", "converged", "iterations", "violations"]).map_err(e)?;
            w.write_record([
                float_text(out.lambda_hat),
                out.converged.to_string(),
                out.iterations.to_string(),
                violations.len().to_string(),
            ])
            .map_err(e)?;
            finish_csv(&cfg.output, w)?;
        }
    }
    if !violations.is_empty() {
        warn("word_bound_violations", json!(violations.len()));
    }
    if !out.converged {
        warn("lambda_not_converged", json!({"iterations": out.iterations, "lambda_hat": sig15(out.lambda_hat)}));
        return Err(Failure::Budget);
    }
    Ok(())
}

fn tropical(args: TropicalArgs) -> Run<()> {
    let cfg = RunConfig::new(args.radius, args.output)?;
    let (s, valuation) = if let Some(path) = &args.family {
        let fam = parse_family(&read(path)?)?;
        let words = ball(fam.num_generators(), cfg.radius)?;
        (fam.tropical_spectrum(&words)?, "at-infinity".to_owned())
    } else {
        let path = args.rep.as_ref().expect("clap requires rep or family");
        match parse_representation(&read(path)?)? {
            LoadedRepresentation::Valued(rep) => {
                let words = ball(rep.rep.num_generators(), cfg.radius)?;
                (rep.spectrum(&words)?, rep.valuation.to_string())
            }
            LoadedRepresentation::Real(_) => {
                return Err(Failure::Input("tropical needs a ratfunc representation".into()));
            }
        }
    };
    if s.is_identically_zero() {
        warn("bounded_family", json!({"radius": cfg.radius}));
    }
    let extra = json!({"radius": cfg.radius, "valuation": valuation, "bounded_family": s.is_identically_zero()});
    emit_spectrum(&cfg.output, &s, extra)
}

/// One sample of the degeneration table.
struct DegenerateRow {
    s: f64,
    scale: f64,
    distance: Option<f64>,
    converged: Option<bool>,
    spectrum: Spectrum<f64>,
}

fn degenerate(args: DegenerateArgs) -> Run<()> {
    let cfg = RunConfig::new(args.radius, args.output)?.with_samples(&args.samples)?;
    let fam: Family = parse_family(&read(&args.family)?)?;
    let words: Vec<Word> = ball(fam.num_generators(), cfg.radius)?;
    let (tropical, rows, bounded) = match args.mode {
        Mode::Log => {
            let report = convergence_report(&fam, &words, &cfg.samples)?;
            let rows = report
                .rows
                .into_iter()
                .map(|r| DegenerateRow {
                    s: r.s,
                    scale: r.s.ln(),
                    distance: r.distance,
                    converged: None,
                    spectrum: r.rescaled,
                })
                .collect();
            (report.tropical, rows, report.bounded_family)
        }
        Mode::Lambda => {
            let tropical = fam.tropical_spectrum(&words)?;
            let bounded = tropical.is_identically_zero();
            let mut rows = Vec::new();
            for &s in &cfg.samples {
                let r = rescaled_spectrum(&fam, s, &words, RescaleMode::ByLambda)?;
                let distance = if bounded { None } else { proj_distance(&r.spectrum, &tropical)? };
                let converged = r.lambda.as_ref().map(|l| l.converged);
                rows.push(DegenerateRow { s, scale: r.scale, distance, converged, spectrum: r.spectrum });
            }
            (tropical, rows, bounded)
        }
    };
    let distances: Vec<f64> = rows.iter().filter_map(|r| r.distance).collect();
    let monotone = non_increasing_within(&distances, MONOTONE_SLACK);
    match cfg.output.format {
        Format::Json => {
            let samples: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = json!({
                        "s": r.s,
                        "scale": sig15(r.scale),
                        "distance": r.distance.map(sig15),
                        "spectrum": spectrum_json(&r.spectrum),
                    });
                    if let Some(c) = r.converged {
                        v["lambda_converged"] = json!(c);
                    }
                    v
                })
                .collect();
            let report = json!({
                "mode": match args.mode { Mode::Log => "log", Mode::Lambda => "lambda" },
                "radius": cfg.radius,
                "tropical": spectrum_json(&tropical),
                "samples": samples,
                "limit_nonzero": !bounded,
                "bounded_family": bounded,
                "monotone": monotone,
            });
            write_json(&cfg.output, &report)?;
        }
        Format::Csv => {
            let mut w = csv_writer();
            let e = |e: csv::Error| Failure::Input(e.to_string());
            let mut header = vec!["s".to_owned(), "word".to_owned()];
            header.extend(coord_header(fam.rank()));
            header.extend(["norm".to_owned(), "distance".to_owned()]);
            w.write_record(&header).map_err(e)?;
            for r in &rows {
                for (word, v) in r.spectrum.iter() {
                    let mut row = vec![r.s.to_string(), word.to_string()];
                    row.extend(coord_texts(v));
                    row.push(float_text(chamber_norm(v)));
                    row.push(r.distance.map(float_text).unwrap_or_default());
                    w.write_record(&row).map_err(e)?;
                }
            }
            finish_csv(&cfg.output, w)?;
        }
    }
    if bounded {
        warn("bounded_family", json!({"radius": cfg.radius}));
    }
    if !monotone {
        warn("distance_not_monotone", floats_json(&distances));
    }
    if rows.iter().any(|r| r.converged == Some(false)) {
        warn(
            "lambda_not_converged",
            json!(rows.iter().filter(|r| r.converged == Some(false)).map(|r| r.s).collect::<Vec<_>>()),
        );
        return Err(Failure::Budget);
    }
    Ok(())
}

fn run(cli: Cli) -> Run<()> {
    match cli.command {
        Command::Jordan(a) => projection(a, true),
        Command::Cartan(a) => projection(a, false),
        Command::Spectrum(a) => spectrum(a),
        Command::Lambda(a) => lambda(a),
        Command::Tropical(a) => tropical(a),
        Command::Degenerate(a) => degenerate(a),
        Command::Check(output) => {
            let results = check::run_all();
            let body = check::render(&results, output.format == Format::Json);
            write_output(&output, body.as_bytes())?;
            if results.iter().all(|r| r.passed) {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Math(m) => eprintln!("error: mathematical precondition violated: {m}"),
                Failure::Budget | Failure::Check => {}
            }
            ExitCode::from(f.code())
        }
    }
}
