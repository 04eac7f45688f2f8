//! Command-line front end.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on
//! input errors.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{catalog_entry, KEYS};
use crate::center::{
    certify_central, predicted_center_generators, verify_theorem, SmaxPolicy, VerifyOptions,
};
use crate::current::{CurrentAlgebra, GradedWindow, Variant};
use crate::error::{Error, Result};
use crate::pbw::Envelope;
use crate::presentation::{AlgebraPresentation, PresentationFile};
use crate::sym::{SymAlgebra, Verdict};

#[derive(Debug, Parser)]
#[command(
    name = "uea-center",
    version,
    about = "Exact PBW arithmetic and centers of current and loop Lie (super)algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Lie (super)algebra axioms and, in characteristic p, the p-map.
    Validate(SourceArgs),
    /// Basis of the center C(L) of the base algebra.
    Center(SourceArgs),
    /// Multiply two elements of U(g) and print the normal form.
    Mul {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value_t = VariantArg::Current)]
        variant: VariantArg,
        left: String,
        right: String,
    },
    /// Compare predicted and computed symmetric invariants per window.
    Invariants(WindowArgs),
    /// Verify the predicted description of the center per window.
    Verify(WindowArgs),
    /// List the predicted center generators with their certificates.
    Predict(WindowArgs),
    /// List the built-in presentations.
    Catalog,
    /// Print a presentation in an adapted basis as JSON.
    Adapt(SourceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Built-in presentation.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub catalog: Option<String>,
    /// Presentation file (JSON).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Characteristic of the ground field.
    #[arg(long = "char")]
    pub characteristic: Option<u64>,
    /// Replace the basis by one whose first vectors span the center.
    #[arg(long)]
    pub adapt_basis: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub out: OutputFormat,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum, default_value_t = VariantArg::Current)]
    pub variant: VariantArg,
    /// x-degrees, as `A..B` or a single integer.
    #[arg(long, allow_hyphen_values = true)]
    pub xdeg: Option<String>,
    /// Filtration bound (current variant).
    #[arg(long)]
    pub filt: Option<i64>,
    /// Monomial length bound (loop variant).
    #[arg(long)]
    pub len: Option<u32>,
    /// Range of x-degrees of generators, as `-R..R` (loop variant).
    #[arg(long, allow_hyphen_values = true)]
    pub rrange: Option<String>,
    /// Fixed test-degree bound.
    #[arg(long, conflicts_with = "smax_policy")]
    pub smax: Option<i64>,
    #[arg(long, value_enum)]
    pub smax_policy: Option<PolicyArg>,
    /// Same as `--smax-policy paranoid`.
    #[arg(long)]
    pub paranoid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Current,
    Loop,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Current => Variant::Current,
            VariantArg::Loop => Variant::Loop,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Default,
    Paranoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

/// The resolved configuration of a window-based command.
#[derive(Debug, Clone, Serialize)]
pub struct CommandConfig {
    pub algebra: String,
    pub variant: Variant,
    pub windows: Vec<GradedWindow>,
    pub options: VerifyOptions,
}

/// Result of a command: exit status and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse {
        location: format!("range {s:?}"),
        message: "expected an integer or A..B".into(),
    };
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let a = num(s)?;
            Ok((a, a))
        }
    }
}

/// Loads the presentation named by the source arguments, validated and
/// canonicalized, optionally in an adapted basis.
pub fn load(source: &SourceArgs) -> Result<AlgebraPresentation> {
    let pres = match (&source.catalog, &source.file) {
        (Some(key), _) => catalog_entry(key, source.characteristic.unwrap_or(0))?.presentation,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            match source.characteristic {
                None => AlgebraPresentation::from_json(&text)?,
                Some(ch) => {
                    let mut file = PresentationFile::from_json(&text)?;
                    file.char = ch;
                    AlgebraPresentation::from_json(&file.to_json())?
                }
            }
        }
        (None, None) => {
            return Err(Error::MalformedInput(
                "one of --catalog or --file is required".into(),
            ))
        }
    };
    if source.adapt_basis {
        Ok(pres.adapt_basis()?.0)
    } else {
        Ok(pres)
    }
}

/// Builds the window family of a command. Defaults: current variant,
/// x-degrees `0..2`, filtration bound `p` (characteristic p) or 3; loop
/// windows need `--rrange` and default to length 3.
pub fn windows(args: &WindowArgs, characteristic: u64) -> Result<Vec<GradedWindow>> {
    let variant = Variant::from(args.variant);
    let (lo, hi) = match &args.xdeg {
        Some(s) => parse_range(s)?,
        None => (0, 2),
    };
    let ws: Vec<GradedWindow> = match variant {
        Variant::Current => {
            if args.len.is_some() || args.rrange.is_some() {
                return Err(Error::MalformedInput(
                    "--len and --rrange apply to the loop variant only".into(),
                ));
            }
            if lo < 0 {
                return Err(Error::VariantMismatch(
                    "current algebras have no negative x-degrees".into(),
                ));
            }
            let filt = args.filt.unwrap_or(if characteristic > 0 {
                characteristic as i64
            } else {
                3
            });
            (lo..=hi).map(|d| GradedWindow::current(d, filt)).collect()
        }
        Variant::Loop => {
            if args.filt.is_some() {
                return Err(Error::MalformedInput(
                    "--filt applies to the current variant only".into(),
                ));
            }
            let r_range = args.rrange.as_deref().map(parse_range).transpose()?;
            let len = args.len.unwrap_or(3);
            (lo..=hi)
                .map(|d| GradedWindow::loop_window(d, len, r_range))
                .collect()
        }
    };
    for w in &ws {
        w.check()?;
    }
    Ok(ws)
}

fn options(args: &WindowArgs) -> VerifyOptions {
    VerifyOptions {
        policy: args.smax.map_or(SmaxPolicy::Default, SmaxPolicy::Fixed),
        paranoid: args.paranoid || args.smax_policy == Some(PolicyArg::Paranoid),
        invariants: true,
    }
}

fn render<T: Serialize>(format: OutputFormat, value: &T, table: impl FnOnce() -> String) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Table => table(),
    }
}

fn status_of(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    if verdicts.into_iter().any(|v| v == Verdict::Fail) {
        1
    } else {
        0
    }
}

fn source_of(cmd: &Command) -> Option<&SourceArgs> {
    match cmd {
        Command::Validate(s) | Command::Center(s) | Command::Adapt(s) => Some(s),
        Command::Mul { source, .. } => Some(source),
        Command::Invariants(w) | Command::Verify(w) | Command::Predict(w) => Some(&w.source),
        Command::Catalog => None,
    }
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Outcome {
    match execute(&cli.command) {
        Ok((status, text)) => {
            let out = source_of(&cli.command).and_then(|s| s.output.clone());
            match out {
                Some(path) => match std::fs::write(&path, &text) {
                    Ok(()) => Outcome {
                        status,
                        stdout: String::new(),
                        stderr: String::new(),
                    },
                    Err(e) => Outcome {
                        status: 2,
                        stdout: String::new(),
                        stderr: format!("error: {}: {e}\n", path.display()),
                    },
                },
                None => Outcome {
                    status,
                    stdout: text,
                    stderr: String::new(),
                },
            }
        }
        Err(e) => Outcome {
            status: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if status == 0 {
                Outcome {
                    status,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    status,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

fn execute(cmd: &Command) -> Result<(i32, String)> {
    match cmd {
        Command::Catalog => {
            let mut s = String::new();
            for key in KEYS {
                let e = catalog_entry(key, 0)?;
                s.push_str(&format!(
                    "{key:<12} dim {:<2} {}\n",
                    e.presentation.dim(),
                    e.notes
                ));
            }
            Ok((0, s))
        }
        Command::Validate(source) => validate(source),
        Command::Center(source) => {
            let pres = load(source)?;
            let basis: Vec<String> = pres
                .center_basis()
                .iter()
                .map(|v| pres.format_vector(v))
                .collect();
            #[derive(Serialize)]
            struct CenterReport<'a> {
                algebra: &'a str,
                field: String,
                dim: usize,
                basis: &'a [String],
            }
            let report = CenterReport {
                algebra: pres.name(),
                field: pres.field().to_string(),
                dim: basis.len(),
                basis: &basis,
            };
            let text = render(source.out, &report, || {
                let mut s = format!(
                    "{} over {}: dim C(L) = {}\n",
                    pres.name(),
                    pres.field(),
                    basis.len()
                );
                for b in &basis {
                    s.push_str(&format!("  {b}\n"));
                }
                s
            });
            Ok((0, text))
        }
        Command::Adapt(source) => {
            let pres = load(source)?;
            let (adapted, _) = pres.adapt_basis()?;
            Ok((0, adapted.to_json() + "\n"))
        }
        Command::Mul {
            source,
            variant,
            left,
            right,
        } => {
            let pres = load(source)?;
            let env = Envelope::new(CurrentAlgebra::new(pres, (*variant).into()));
            let u = env.parse(left)?;
            let v = env.parse(right)?;
            let product = env.multiply(&u, &v)?;
            let text = env.format(&product);
            let text = render(source.out, &serde_json::json!({ "product": text }), || {
                format!("{text}\n")
            });
            Ok((0, text))
        }
        Command::Invariants(args) => {
            let (env, cfg) = resolve(args)?;
            let sym = SymAlgebra::new(env.algebra().clone());
            let mut reports = Vec::with_capacity(cfg.windows.len());
            for w in &cfg.windows {
                let smax = cfg.options.policy.smax(w);
                reports.push(sym.compare_invariants(w, smax)?);
            }
            let status = status_of(reports.iter().map(|r| r.verdict));
            let text = render(args.source.out, &reports, || {
                reports.iter().map(|r| r.to_string()).collect()
            });
            Ok((status, text))
        }
        Command::Verify(args) => {
            let (env, cfg) = resolve(args)?;
            let reports = verify_theorem(&env, &cfg.windows, &cfg.options)?;
            let status = status_of(reports.iter().map(|r| r.verdict));
            let text = render(args.source.out, &reports, || {
                let mut s = crate::center::VerificationReport::table_header();
                s.push('\n');
                for r in &reports {
                    s.push_str(&r.to_string());
                }
                s
            });
            Ok((status, text))
        }
        Command::Predict(args) => {
            let (env, cfg) = resolve(args)?;
            let ws = &cfg.windows;
            let lo = ws.iter().map(|w| w.degree_range().0).min().unwrap_or(0);
            let hi = ws.iter().map(|w| w.degree_range().1).max().unwrap_or(0);
            let gens = predicted_center_generators(&env, lo, hi)?;
            #[derive(Serialize)]
            struct Row {
                generator: String,
                element: String,
                certificate: std::result::Result<String, String>,
            }
            let rows: Vec<Row> = gens
                .iter()
                .map(|g| Row {
                    generator: g.kind.describe(env.algebra()),
                    element: env.format(&g.element),
                    certificate: certify_central(&env, g)
                        .map(|c| c.check)
                        .map_err(|e| e.to_string()),
                })
                .collect();
            let status = if rows.iter().all(|r| r.certificate.is_ok()) {
                0
            } else {
                1
            };
            let text = render(args.source.out, &rows, || {
                let mut s = String::new();
                for r in &rows {
                    let cert = match &r.certificate {
                        Ok(c) => c.clone(),
                        Err(e) => format!("NOT CERTIFIED: {e}"),
                    };
                    s.push_str(&format!("{:<24} {:<28} {cert}\n", r.generator, r.element));
                }
                s
            });
            Ok((status, text))
        }
    }
}

/// Loads the algebra of a window-based command and resolves its windows and
/// options.
pub fn resolve(args: &WindowArgs) -> Result<(Envelope, CommandConfig)> {
    let pres = load(&args.source)?;
    let config = CommandConfig {
        algebra: pres.name().to_string(),
        variant: args.variant.into(),
        windows: windows(args, pres.characteristic())?,
        options: options(args),
    };
    let alg = CurrentAlgebra::from_shared(Arc::new(pres), config.variant);
    Ok((Envelope::new(alg), config))
}

fn validate(source: &SourceArgs) -> Result<(i32, String)> {
    // Validation must report failures rather than refuse to load.
    let pres = match (&source.catalog, &source.file) {
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut file = PresentationFile::from_json(&text)?;
            if let Some(ch) = source.characteristic {
                file.char = ch;
            }
            file.to_presentation()?
        }
        _ => load(source)?,
    };
    let axioms = pres.validate();
    let pmap = match pres.validate_p_map() {
        Ok(r) => Some(r),
        Err(Error::CharacteristicZero) => None,
        Err(e) => return Err(e),
    };
    let passed = axioms.passed() && pmap.as_ref().is_none_or(|r| r.passed());
    #[derive(Serialize)]
    struct Report<'a> {
        axioms: &'a crate::presentation::ValidationReport,
        pmap: Option<&'a crate::presentation::ValidationReport>,
        passed: bool,
    }
    let report = Report {
        axioms: &axioms,
        pmap: pmap.as_ref(),
        passed,
    };
    let text = render(source.out, &report, || {
        let mut s = format!("axioms: {axioms}");
        if !s.ends_with('\n') {
            s.push('\n');
        }
        if let Some(r) = &pmap {
            s.push_str(&format!("p-map: {r}"));
            if !s.ends_with('\n') {
                s.push('\n');
            }
        }
        s
    });
    Ok((if passed { 0 } else { 1 }, text))
}
