//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pinchip_core::layout::{process_checklist, BondingMode};
use pinchip_core::materials::MaterialCatalog;
use pinchip_core::rfnet::MismatchReport;
use serde::Serialize;

use crate::analysis;
use crate::catalog::{self, CatalogSource};
use crate::config::{self, Design, LoadedConfig};
use crate::error::{CliError, Result, EXIT_CONFIG, EXIT_OK};
use crate::formats::{layout_json, svg, table::Table, touchstone};
use crate::golden;
use crate::report::{write_atomic, RunReport};
use crate::sweep;

#[derive(Debug, Parser)]
#[command(
    name = "pinchip",
    version,
    about = "Scaling, impedance, RF, layout and heat-load analysis for pin-chip wiring"
)]
pub struct Cli {
    /// Materials catalog (TOML). Overrides the PINCHIP_MATERIALS variable.
    #[arg(long, global = true, value_name = "PATH")]
    pub materials: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the artifact here instead of stdout.
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, short)]
    pub format: Option<String>,
    /// Also write a JSON run manifest.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Bonding {
    Conical,
    Spherical,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Qubit and wire counts per wiring architecture.
    Scale {
        #[arg(long, short)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Characteristic impedance of every declared line.
    Impedance {
        #[arg(long, short)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// S-parameters of the signal path across the band.
    Rf {
        #[arg(long, short)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Interposer layout, design-rule check and assembly checklist.
    Layout {
        #[arg(long, short)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "conical")]
        bonding: Bonding,
        #[command(flatten)]
        output: Output,
    },
    /// Per-stage heat budget.
    Budget {
        #[arg(long, short)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run a declared parameter sweep.
    Sweep {
        #[arg(long, short)]
        config: PathBuf,
        /// Sweep to run; may be omitted when only one is declared.
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Reproduce the published worked numbers and check them against tolerance.
    PaperCheck {
        /// Optional config; validated before the checks run.
        #[arg(long, short)]
        config: Option<PathBuf>,
        /// Seed for the randomized consistency rows.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Draws per randomized row; 0 skips them.
        #[arg(long, default_value_t = 1000)]
        properties: usize,
        #[command(flatten)]
        output: Output,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Scale { .. } => "scale",
            Self::Impedance { .. } => "impedance",
            Self::Rf { .. } => "rf",
            Self::Layout { .. } => "layout",
            Self::Budget { .. } => "budget",
            Self::Sweep { .. } => "sweep",
            Self::PaperCheck { .. } => "paper-check",
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
/// Artifacts without `--out` go to stdout; errors and warnings go to stderr.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let (result, warnings) = run(&cli, &mut out);
    let _ = out.flush();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Session<'w> {
    stdout: &'w mut dyn Write,
    report: RunReport,
}

impl Session<'_> {
    fn emit(&mut self, kind: &str, out: Option<&Path>, bytes: &[u8]) -> Result<()> {
        match out {
            Some(p) => write_atomic(p, bytes)?,
            None => match self.stdout.write_all(bytes) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(CliError::io("<stdout>", e)),
                _ => {}
            },
        }
        self.report.record(kind, out, bytes);
        Ok(())
    }

    fn warn(&mut self, w: String) {
        self.report.warnings.push(w);
    }
}

/// Runs a parsed command, writing stdout artifacts to `stdout`. Returns the
/// outcome along with any warnings raised.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> (Result<()>, Vec<String>) {
    let name = cli.command.name();
    let mut session = None;
    let result = run_inner(cli, stdout, &mut session);
    let Some(mut s) = session else {
        return (result, Vec::new());
    };
    let report_path = match &cli.command {
        Command::Scale { output, .. }
        | Command::Impedance { output, .. }
        | Command::Rf { output, .. }
        | Command::Layout { output, .. }
        | Command::Budget { output, .. }
        | Command::Sweep { output, .. }
        | Command::PaperCheck { output, .. } => output.report.clone(),
    };
    debug_assert_eq!(s.report.command, name);
    let result = match (result, report_path) {
        (r, Some(p)) => {
            let written = s.report.to_json().and_then(|j| write_atomic(&p, j.as_bytes()));
            r.and(written)
        }
        (r, None) => r,
    };
    (result, std::mem::take(&mut s.report.warnings))
}

fn format<'a>(
    command: &'static str,
    given: &'a Option<String>,
    allowed: &'static [&'static str],
    expected: &'static str,
) -> Result<&'a str> {
    let f = given.as_deref().unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::UnsupportedFormat {
            command,
            format: f.to_string(),
            expected,
        })
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::analysis("json", e))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn table_bytes(t: &Table, fmt: &str) -> Result<Vec<u8>> {
    match fmt {
        "csv" => t.to_csv(),
        _ => Ok(t.to_text().into_bytes()),
    }
}

fn load_design(path: &Path, catalog: &MaterialCatalog) -> Result<(LoadedConfig, Design)> {
    let loaded = config::load(path)?;
    sweep::validate_all(&loaded)?;
    let design = loaded.raw.resolve(catalog)?;
    Ok((loaded, design))
}

fn run_inner<'w>(cli: &Cli, stdout: &'w mut dyn Write, session: &mut Option<Session<'w>>) -> Result<()> {
    let (catalog, source): (MaterialCatalog, CatalogSource) = catalog::load(cli.materials.as_deref())?;
    let name = cli.command.name();
    let config_path = match &cli.command {
        Command::Scale { config, .. }
        | Command::Impedance { config, .. }
        | Command::Rf { config, .. }
        | Command::Layout { config, .. }
        | Command::Budget { config, .. }
        | Command::Sweep { config, .. } => Some(config.as_path()),
        Command::PaperCheck { config, .. } => config.as_deref(),
    };
    let loaded = config_path.map(|p| load_design(p, &catalog)).transpose()?;
    let config_text = loaded.as_ref().map_or("", |(l, _)| l.text.as_str());
    let s = session.insert(Session {
        stdout,
        report: RunReport::new(name, config_text, &source.text),
    });

    match &cli.command {
        Command::Scale { output, .. } => {
            let fmt = format(name, &output.format, &["text", "csv", "json"], "text, csv, json")?;
            let rows = analysis::scale(&design(&loaded))?;
            let bytes = match fmt {
                "json" => json(&rows)?,
                f => table_bytes(&analysis::scale_table(&rows), f)?,
            };
            s.emit("scale", output.out.as_deref(), &bytes)
        }
        Command::Impedance { output, .. } => {
            let fmt = format(name, &output.format, &["text", "csv", "json"], "text, csv, json")?;
            let rows = analysis::impedance(&design(&loaded))?;
            for r in rows.iter().filter(|r| r.estimate) {
                s.warn(format!(
                    "line `{}`: coupling figure is an estimate, not a field solution",
                    r.name
                ));
            }
            let bytes = match fmt {
                "json" => json(&rows)?,
                f => table_bytes(&analysis::impedance_table(&rows), f)?,
            };
            s.emit("impedance", output.out.as_deref(), &bytes)
        }
        Command::Rf { output, .. } => {
            let fmt = format(
                name,
                &output.format,
                &["csv", "touchstone", "json", "text"],
                "csv, touchstone, json, text",
            )?;
            let report = analysis::rf(&design(&loaded))?;
            let bytes = match fmt {
                "touchstone" => touchstone::write(&report.response, "pinchip rf").into_bytes(),
                "json" => json(&RfJson::from(&report))?,
                "text" => {
                    let mut t = analysis::rf_summary(&report);
                    t.push('\n');
                    t.push_str(&analysis::rf_table(&report).to_text());
                    t.into_bytes()
                }
                _ => analysis::rf_table(&report).to_csv()?,
            };
            s.emit("rf", output.out.as_deref(), &bytes)
        }
        Command::Layout { bonding, output, .. } => {
            let fmt = format(
                name,
                &output.format,
                &["json", "svg", "drc", "checklist"],
                "json, svg, drc, checklist",
            )?;
            let result = analysis::layout(&design(&loaded))?;
            for f in result.drc.warnings() {
                s.warn(format!("{} ({}): {}", f.rule, f.severity, f.message));
            }
            let bytes = match fmt {
                "svg" => svg::render(&result.layout, Some(&result.drc)).into_bytes(),
                "drc" => analysis::drc_table(&result.drc).to_text().into_bytes(),
                "checklist" => {
                    let mode = match bonding {
                        Bonding::Conical => BondingMode::Conical,
                        Bonding::Spherical => BondingMode::Spherical,
                    };
                    let steps =
                        process_checklist(&result.config, mode, &catalog).map_err(|e| CliError::config("layout", e))?;
                    let mut text = format!("Assembly checklist ({mode} pin bonding)\n\n");
                    for step in steps {
                        text.push_str(&step.to_string());
                        text.push('\n');
                    }
                    text.into_bytes()
                }
                _ => layout_json::export(&result.layout, Some(&result.drc))?.into_bytes(),
            };
            s.emit(&format!("layout-{fmt}"), output.out.as_deref(), &bytes)?;
            let rules: Vec<String> = result.drc.errors().map(|f| f.rule.to_string()).collect();
            if !rules.is_empty() {
                return Err(CliError::analysis(
                    "layout",
                    format!("design-rule check failed: {}", rules.join(", ")),
                ));
            }
            Ok(())
        }
        Command::Budget { output, .. } => {
            let fmt = format(name, &output.format, &["text", "csv", "json"], "text, csv, json")?;
            let report = analysis::budget(&design(&loaded), &catalog)?;
            for r in &report.rows {
                if r.estimated {
                    s.warn(format!(
                        "stage `{}`: conduction load uses a Wiedemann-Franz estimate",
                        r.stage
                    ));
                }
                if !r.feasible {
                    s.warn(format!("stage `{}`: heat load exceeds cooling power", r.stage));
                }
            }
            let bytes = match fmt {
                "json" => json(&report)?,
                f => table_bytes(&analysis::budget_table(&report), f)?,
            };
            s.emit("budget", output.out.as_deref(), &bytes)
        }
        Command::Sweep {
            name: sweep_name,
            output,
            ..
        } => {
            let fmt = format(name, &output.format, &["csv", "text"], "csv, text")?;
            let (loaded, _) = loaded.as_ref().expect("sweep always has a config");
            let (index, _) = sweep::select(loaded, sweep_name.as_deref())?;
            let t = sweep::run(loaded, index, &catalog)?;
            s.emit("sweep", output.out.as_deref(), &table_bytes(&t, fmt)?)
        }
        Command::PaperCheck {
            seed,
            properties,
            output,
            ..
        } => {
            let fmt = format(name, &output.format, &["text", "csv", "json"], "text, csv, json")?;
            let mut rows = golden::golden_rows(&catalog)?;
            if *properties > 0 {
                rows.extend(golden::property_rows(*seed, *properties)?);
            }
            let bytes = match fmt {
                "json" => json(&rows)?,
                f => table_bytes(&golden::table(&rows), f)?,
            };
            s.emit("paper-check", output.out.as_deref(), &bytes)?;
            match golden::failures(&rows) {
                0 => Ok(()),
                n => Err(CliError::GoldenMiss(n)),
            }
        }
    }
}

fn design(loaded: &Option<(LoadedConfig, Design)>) -> Design {
    loaded.as_ref().expect("command takes a config").1.clone()
}

#[derive(Serialize)]
struct RfPoint {
    frequency: f64,
    s11: [f64; 2],
    s21: [f64; 2],
    s12: [f64; 2],
    s22: [f64; 2],
}

#[derive(Serialize)]
struct RfJson {
    source_impedance: f64,
    load_impedance: f64,
    worst_s11: f64,
    worst_s11_db: f64,
    worst_frequency: f64,
    first_reflection_minimum: Option<f64>,
    points: Vec<RfPoint>,
}

impl From<&MismatchReport> for RfJson {
    fn from(r: &MismatchReport) -> Self {
        let c = |z: pinchip_core::rfnet::C64| [z.re, z.im];
        Self {
            source_impedance: r.response.source_impedance,
            load_impedance: r.response.load_impedance,
            worst_s11: r.worst_s11,
            worst_s11_db: r.worst_s11_db,
            worst_frequency: r.worst_frequency,
            first_reflection_minimum: r.first_reflection_minimum,
            points: r
                .response
                .frequencies
                .iter()
                .zip(&r.response.s)
                .map(|(&frequency, s)| RfPoint {
                    frequency,
                    s11: c(s.s11),
                    s21: c(s.s21),
                    s12: c(s.s12),
                    s22: c(s.s22),
                })
                .collect(),
        }
    }
}
