//! The `pshscreen` command.
//!
//! Exit status: 0 success, 2 usage, 3 not found, 4 catalog parse failure,
//! 5 I/O failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use pshscreen_core::search::MatchKind;
use pshscreen_core::{
    AreaUnit, AssessError, EnergyOptions, PhysicalConstants, Screener, Thresholds, VolumeBasis,
};

use crate::catalog_io::{load_catalog, CatalogIoError};
use crate::export::{export_pairs, export_report, ExportError, ExportOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_PARSE: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "pshscreen", version, about = "Screen reservoir pairs for micro pumped-storage potential")]
pub struct Cli {
    /// Canonical catalog CSV.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    /// Load only reservoirs strictly larger than this.
    #[arg(long, global = true, default_value_t = 1.0, value_name = "F")]
    pub min_area_km2: f64,
    /// Unit for rows that leave `area_unit` blank.
    #[arg(long, global = true, value_enum, default_value_t = UnitArg::Km2)]
    pub default_area_unit: UnitArg,
    /// Largest boundary distance to a partner.
    #[arg(long, global = true, default_value_t = 1.0, value_name = "F")]
    pub horizontal_km: f64,
    /// Smallest head for a partner to carry energy.
    #[arg(long, global = true, default_value_t = 0.0, value_name = "F")]
    pub vertical_min_head_m: f64,
    /// Write CSV here.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Fixed-point decimals in CSV output.
    #[arg(long, global = true, default_value_t = 6, value_name = "N")]
    pub decimal_places: usize,
    /// Use the smaller of the two volumes instead of the upper one.
    #[arg(long, global = true)]
    pub min_volume: bool,
    /// Multiplier applied to gross energy.
    #[arg(long, global = true, default_value_t = 1.0, value_name = "F")]
    pub efficiency: f64,
    /// Water density, kg/m³.
    #[arg(long, global = true, default_value_t = PhysicalConstants::DEFAULT_RHO_WATER)]
    pub rho: f64,
    /// Gravitational acceleration, m/s².
    #[arg(long, global = true, default_value_t = PhysicalConstants::DEFAULT_G)]
    pub g: f64,
    /// Earth radius, m.
    #[arg(long, global = true, default_value_t = PhysicalConstants::DEFAULT_EARTH_RADIUS_M)]
    pub earth_radius_m: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitArg {
    Km2,
    Mi2,
}

impl From<UnitArg> for AreaUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Km2 => AreaUnit::Km2,
            UnitArg::Mi2 => AreaUnit::Mi2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load the catalog and print the ingest report.
    Ingest,
    /// Look a reservoir up by name.
    Search { query: String },
    /// Screen one reservoir (id, or a unique exact name) against its neighbors.
    Assess {
        target: String,
        /// Standard output format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Dump every pair as CSV.
    Pairs,
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::NotFound(_) => EXIT_NOT_FOUND,
            Self::Parse(_) => EXIT_PARSE,
            Self::Io(_) => EXIT_IO,
        }
    }
}

impl From<CatalogIoError> for CliError {
    fn from(e: CatalogIoError) -> Self {
        match e {
            CatalogIoError::Io(_) => Self::Io(e.to_string()),
            CatalogIoError::Catalog(_) => Self::Usage(e.to_string()),
            _ => Self::Parse(e.to_string()),
        }
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::DecimalPlaces(_) => Self::Usage(e.to_string()),
            ExportError::Write { .. } => Self::Io(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl Cli {
    fn thresholds(&self) -> Result<Thresholds, CliError> {
        if !self.horizontal_km.is_finite() || !self.vertical_min_head_m.is_finite() {
            return Err(CliError::Usage("thresholds must be finite".into()));
        }
        Thresholds::from_km(self.horizontal_km, self.vertical_min_head_m)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    fn energy_options(&self) -> Result<EnergyOptions, CliError> {
        for (flag, v) in [
            ("--rho", self.rho),
            ("--g", self.g),
            ("--earth-radius-m", self.earth_radius_m),
            ("--efficiency", self.efficiency),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage(format!("{flag} must be a positive number")));
            }
        }
        Ok(EnergyOptions {
            constants: PhysicalConstants {
                rho_water: self.rho,
                g: self.g,
                earth_radius_m: self.earth_radius_m,
            },
            volume_basis: if self.min_volume {
                VolumeBasis::Smaller
            } else {
                VolumeBasis::Upper
            },
            efficiency: self.efficiency,
        })
    }

    fn export_options(&self) -> Result<ExportOptions, CliError> {
        let o = ExportOptions {
            decimal_places: self.decimal_places,
            ..ExportOptions::default()
        };
        o.validate()?;
        Ok(o)
    }

    /// Loads the catalog, reporting rejected rows on `err`.
    fn screener(&self, err: &mut dyn Write) -> Result<Screener, CliError> {
        let path = self
            .catalog
            .as_ref()
            .ok_or_else(|| CliError::Usage("--catalog PATH is required".into()))?;
        let (catalog, report) =
            load_catalog(path, self.min_area_km2, self.default_area_unit.into())?;
        for r in &report.rejected {
            writeln!(err, "warning: row {}: {}", r.row, r.reason)?;
        }
        if catalog.is_empty() {
            return Err(CliError::Parse(format!(
                "no reservoirs loaded from {} (filtered {}, rejected {})",
                path.display(),
                report.filtered,
                report.rejected.len()
            )));
        }
        Ok(Screener::new(catalog, self.energy_options()?))
    }

    fn sink<'a>(&self, out: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, CliError> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::Io(format!("cannot create {}: {e}", p.display()))
            })?)),
            None => Box::new(out),
        })
    }
}

/// Parses `args` and runs the command, writing to `out` and `err`. Returns
/// the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest => cmd_ingest(cli, out, err),
        Command::Search { query } => cmd_search(cli, query, out, err),
        Command::Assess { target, format } => cmd_assess(cli, target, *format, out, err),
        Command::Pairs => cmd_pairs(cli, out, err),
        Command::Serve { host, port } => cmd_serve(cli, host, *port, out, err),
    }
}

fn cmd_ingest(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let path = cli
        .catalog
        .as_ref()
        .ok_or_else(|| CliError::Usage("--catalog PATH is required".into()))?;
    let (catalog, report) = load_catalog(path, cli.min_area_km2, cli.default_area_unit.into())?;
    writeln!(
        out,
        "loaded {}, filtered {}, rejected {}",
        report.loaded,
        report.filtered,
        report.rejected.len()
    )?;
    for r in &report.rejected {
        writeln!(err, "warning: row {}: {}", r.row, r.reason)?;
    }
    if catalog.is_empty() {
        return Err(CliError::Parse("no reservoirs loaded".into()));
    }
    Ok(())
}

fn cmd_search(
    cli: &Cli,
    query: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let screener = cli.screener(err)?;
    let outcome = screener
        .search(query)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match outcome.kind {
        MatchKind::ExactMatch => {
            for r in &outcome.matches {
                writeln!(
                    out,
                    "{}\t{}\t{:.5}, {:.5}\tarea {:.3} km²\tdepth {:.2} m\tvolume {:.3} million m³\tsurface {:.1} m",
                    r.id,
                    r.name,
                    r.latitude,
                    r.longitude,
                    r.surface_area_km2,
                    r.avg_depth_m,
                    r.volume_m3 / 1e6,
                    r.surface_elevation_m
                )?;
            }
            Ok(())
        }
        MatchKind::Suggestion => {
            let s = outcome.suggestion.expect("suggestion kind carries a name");
            writeln!(
                out,
                "no exact match for {:?}; did you mean {:?}? (edit distance {})",
                query.trim(),
                s.name,
                s.distance
            )?;
            Ok(())
        }
        MatchKind::NotFound => Err(CliError::NotFound(format!(
            "no reservoir named like {:?}",
            query.trim()
        ))),
    }
}

/// Accepts an id, or a name that matches exactly one record.
fn resolve_target(screener: &Screener, target: &str) -> Result<String, CliError> {
    if screener.catalog().get(target).is_some() {
        return Ok(target.to_string());
    }
    let outcome = screener
        .search(target)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match outcome.kind {
        MatchKind::ExactMatch if outcome.matches.len() == 1 => Ok(outcome.matches[0].id.clone()),
        MatchKind::ExactMatch => {
            let ids: Vec<_> = outcome.matches.iter().map(|r| r.id.as_str()).collect();
            Err(CliError::NotFound(format!(
                "{target:?} names {} reservoirs; pick an id: {}",
                ids.len(),
                ids.join(", ")
            )))
        }
        MatchKind::Suggestion => Err(CliError::NotFound(format!(
            "no reservoir {target:?}; did you mean {:?}?",
            outcome.suggestion.map(|s| s.name).unwrap_or_default()
        ))),
        MatchKind::NotFound => Err(CliError::NotFound(format!("no reservoir {target:?}"))),
    }
}

fn cmd_assess(
    cli: &Cli,
    target: &str,
    format: OutputFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let thresholds = cli.thresholds()?;
    let options = cli.export_options()?;
    let screener = cli.screener(err)?;
    let id = resolve_target(&screener, target)?;
    let report = screener.assess(&id, thresholds).map_err(|e| match e {
        AssessError::NotFound(_) => CliError::NotFound(e.to_string()),
        AssessError::InvalidThresholds(_) => CliError::Usage(e.to_string()),
    })?;

    if let Some(path) = &cli.out {
        let file = File::create(path)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        export_report(&report, &options, &mut w)?;
        w.flush()?;
    }
    match format {
        OutputFormat::Csv => {
            export_report(&report, &options, &mut *out)?;
        }
        OutputFormat::Table => print_table(&report, out)?,
    }
    Ok(())
}

fn print_table(report: &pshscreen_core::AssessmentReport, out: &mut dyn Write) -> io::Result<()> {
    let t = &report.target;
    writeln!(
        out,
        "{} ({})  surface {:.1} m  area {:.3} km²  volume {:.3} million m³",
        t.name,
        t.id,
        t.surface_elevation_m,
        t.surface_area_km2,
        t.volume_m3 / 1e6
    )?;
    writeln!(
        out,
        "horizontal threshold {} km, minimum head {} m, {} partner(s)",
        report.thresholds.horizontal_m / 1000.0,
        report.thresholds.vertical_min_head_m,
        report.rows.len()
    )?;
    if report.rows.is_empty() {
        return Ok(());
    }
    writeln!(
        out,
        "{:<10} {:<24} {:>12} {:>9} {:<10} {:>14} {:>11}  note",
        "partner", "name", "distance_m", "head_m", "upper", "volume_Mm3", "energy_GWh"
    )?;
    for r in &report.rows {
        writeln!(
            out,
            "{:<10} {:<24} {:>12.1} {:>9.1} {:<10} {:>14.3} {:>11}  {}",
            r.partner.id,
            r.partner.name,
            r.metrics.boundary_distance_m,
            r.metrics.head_m,
            r.designation.as_ref().map(|d| d.upper_id.as_str()).unwrap_or("-"),
            r.partner.volume_m3 / 1e6,
            r.energy
                .map(|e| format!("{:.4}", e.energy_gwh))
                .unwrap_or_else(|| "-".into()),
            r.note
        )?;
    }
    writeln!(out, "total {:.4} GWh", report.total_energy_gwh)
}

fn cmd_pairs(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let options = cli.export_options()?;
    let screener = cli.screener(err)?;
    let pairs = screener.pairs();
    let mut sink = cli.sink(out)?;
    export_pairs(&pairs, &options, &mut sink)?;
    sink.flush()?;
    Ok(())
}

fn cmd_serve(
    cli: &Cli,
    host: &str,
    port: u16,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let screener = cli.screener(err)?;
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|e| CliError::Usage(format!("bad address {host}:{port}: {e}")))?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        writeln!(out, "listening on http://{}", listener.local_addr()?)?;
        out.flush()?;
        crate::service::serve(listener, screener).await
    })?;
    Ok(())
}
