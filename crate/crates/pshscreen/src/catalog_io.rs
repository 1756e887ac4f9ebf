//! Canonical catalog file: RFC 4180 CSV, UTF-8, header row required,
//! columns `id, name, latitude, longitude, surface_area, area_unit,
//! surface_elevation_m, bottom_elevation_m`.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use pshscreen_core::catalog::COLUMNS;
use pshscreen_core::{AreaUnit, Catalog, CatalogBuilder, CatalogError, IngestReport, RecordError};

/// Failures that abort a catalog load. Bad rows never do; they are counted in
/// the [`IngestReport`].
#[derive(Debug, thiserror::Error)]
pub enum CatalogIoError {
    #[error("cannot read catalog: {0}")]
    Io(#[from] io::Error),
    #[error("catalog has no header row")]
    MissingHeader,
    #[error("catalog header {found:?} does not match the expected columns {expected:?}")]
    BadHeader {
        found: Vec<String>,
        expected: Vec<&'static str>,
    },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Parses a catalog from `source`.
///
/// `default_unit` applies to rows whose `area_unit` field is blank; rows that
/// name a unit use it. Records with area at or below `min_area_km2` are
/// counted as filtered.
pub fn parse_catalog<R: Read>(
    source: R,
    min_area_km2: f64,
    default_unit: AreaUnit,
) -> Result<(Catalog, IngestReport), CatalogIoError> {
    let mut builder = CatalogBuilder::new(min_area_km2)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(source);
    let mut records = reader.records();

    let header = match records.next() {
        None => return Err(CatalogIoError::MissingHeader),
        Some(h) => h?,
    };
    let found: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
    let matches = found.len() == COLUMNS.len()
        && found
            .iter()
            .zip(COLUMNS)
            .all(|(f, c)| f.trim_start_matches('\u{feff}').eq_ignore_ascii_case(c));
    if !matches {
        return Err(CatalogIoError::BadHeader {
            found,
            expected: COLUMNS.to_vec(),
        });
    }

    for (i, rec) in records.enumerate() {
        let row = i + 1;
        match rec {
            Ok(rec) => {
                let mut fields: Vec<&str> = rec.iter().collect();
                if fields.len() == COLUMNS.len() && fields[5].trim().is_empty() {
                    fields[5] = default_unit.as_str();
                }
                builder.push_fields(row, &fields);
            }
            Err(e) => match e.kind() {
                csv::ErrorKind::Io(_) => return Err(e.into()),
                _ => builder.push_parsed(row, Err(RecordError::Malformed(e.to_string()))),
            },
        }
    }
    Ok(builder.finish())
}

/// Opens and parses a catalog file.
pub fn load_catalog(
    path: impl AsRef<Path>,
    min_area_km2: f64,
    default_unit: AreaUnit,
) -> Result<(Catalog, IngestReport), CatalogIoError> {
    parse_catalog(File::open(path)?, min_area_km2, default_unit)
}

/// Writes `catalog` in canonical form with areas in km². Numbers use the
/// shortest representation that parses back to the same value, so
/// [`parse_catalog`] recovers every record exactly.
pub fn write_catalog<W: Write>(catalog: &Catalog, sink: W) -> Result<(), CatalogIoError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(COLUMNS)?;
    for r in catalog.records() {
        w.write_record([
            r.id.clone(),
            r.name.clone(),
            r.latitude.to_string(),
            r.longitude.to_string(),
            r.surface_area_km2.to_string(),
            AreaUnit::Km2.as_str().to_string(),
            r.surface_elevation_m.to_string(),
            r.bottom_elevation_m.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
