//! Spreadsheet-friendly CSV output for assessment reports and pair dumps.
//!
//! RFC 4180 quoting, UTF-8, LF line endings. Numbers are fixed-point with a
//! configurable number of decimals; column names carry their units.

use std::io::{self, Write};

use pshscreen_core::{AssessmentReport, PairMetrics};

/// Columns of an exported assessment, in order.
pub const REPORT_COLUMNS: [&str; 12] = [
    "partner_id",
    "partner_name",
    "boundary_distance_m",
    "centroid_distance_m",
    "head_m",
    "upper_id",
    "surface_area_km2",
    "volume_million_m3",
    "energy_kwh",
    "energy_gwh",
    "connected",
    "note",
];

/// Columns of a pair dump, in order.
pub const PAIR_COLUMNS: [&str; 6] = [
    "id_a",
    "id_b",
    "centroid_distance_m",
    "boundary_distance_m",
    "head_m",
    "connected",
];

/// Output format. CSV is the only one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExportFormat {
    #[default]
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExportOptions {
    pub format: ExportFormat,
    pub include_header: bool,
    /// Fixed-point decimals, 0 through 12.
    pub decimal_places: usize,
}

impl ExportOptions {
    pub const MAX_DECIMAL_PLACES: usize = 12;

    pub fn validate(&self) -> Result<(), ExportError> {
        if self.decimal_places > Self::MAX_DECIMAL_PLACES {
            return Err(ExportError::DecimalPlaces(self.decimal_places));
        }
        Ok(())
    }
}

impl Default for ExportOptions {
    fn default() -> Self {
        Self {
            format: ExportFormat::Csv,
            include_header: true,
            decimal_places: 6,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("decimal_places {0} outside 0..=12")]
    DecimalPlaces(usize),
    #[error("write failed after {bytes_written} bytes: {source}")]
    Write {
        source: io::Error,
        bytes_written: u64,
    },
}

/// Counts bytes the inner writer accepted.
struct Counting<W> {
    inner: W,
    written: u64,
}

impl<W: Write> Write for Counting<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.written += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

struct CsvSink<W: Write> {
    writer: csv::Writer<Counting<W>>,
}

impl<W: Write> CsvSink<W> {
    fn new(sink: W) -> Self {
        let writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Counting {
                inner: sink,
                written: 0,
            });
        Self { writer }
    }

    fn fail(&self, e: csv::Error) -> ExportError {
        let source = match e.into_kind() {
            csv::ErrorKind::Io(io) => io,
            other => io::Error::other(format!("{other:?}")),
        };
        ExportError::Write {
            source,
            bytes_written: self.writer.get_ref().written,
        }
    }

    fn row<I, T>(&mut self, fields: I) -> Result<(), ExportError>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(|e| self.fail(e))
    }

    fn finish(mut self) -> Result<(), ExportError> {
        self.writer.flush().map_err(|source| ExportError::Write {
            source,
            bytes_written: self.writer.get_ref().written,
        })
    }
}

fn fixed(v: f64, places: usize) -> String {
    format!("{v:.places$}")
}

/// Writes one line per report row and returns the number of data rows.
pub fn export_report<W: Write>(
    report: &AssessmentReport,
    options: &ExportOptions,
    sink: W,
) -> Result<usize, ExportError> {
    options.validate()?;
    let dp = options.decimal_places;
    let mut out = CsvSink::new(sink);
    if options.include_header {
        out.row(REPORT_COLUMNS)?;
    }
    for row in &report.rows {
        let m = &row.metrics;
        out.row([
            row.partner.id.clone(),
            row.partner.name.clone(),
            fixed(m.boundary_distance_m, dp),
            fixed(m.centroid_distance_m, dp),
            fixed(m.head_m, dp),
            row.designation
                .as_ref()
                .map(|d| d.upper_id.clone())
                .unwrap_or_default(),
            fixed(row.partner.surface_area_km2, dp),
            fixed(row.partner.volume_m3 / 1e6, dp),
            row.energy.map(|e| fixed(e.energy_kwh, dp)).unwrap_or_default(),
            row.energy.map(|e| fixed(e.energy_gwh, dp)).unwrap_or_default(),
            m.connected.to_string(),
            row.note.clone(),
        ])?;
    }
    out.finish()?;
    Ok(report.rows.len())
}

/// Writes a full pair dump and returns the number of data rows.
pub fn export_pairs<W: Write>(
    pairs: &[PairMetrics],
    options: &ExportOptions,
    sink: W,
) -> Result<usize, ExportError> {
    options.validate()?;
    let dp = options.decimal_places;
    let mut out = CsvSink::new(sink);
    if options.include_header {
        out.row(PAIR_COLUMNS)?;
    }
    for p in pairs {
        out.row([
            p.id_a.clone(),
            p.id_b.clone(),
            fixed(p.centroid_distance_m, dp),
            fixed(p.boundary_distance_m, dp),
            fixed(p.head_m, dp),
            p.connected.to_string(),
        ])?;
    }
    out.finish()?;
    Ok(pairs.len())
}

/// Renders a report to an in-memory CSV string.
pub fn report_to_string(
    report: &AssessmentReport,
    options: &ExportOptions,
) -> Result<String, ExportError> {
    let mut buf = Vec::new();
    export_report(report, options, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}
