//! Reservoir data model, row validation and the immutable [`Catalog`].
//!
//! Text tokenization (CSV quoting, IO) is the caller's business; this module
//! receives one row at a time as a slice of already-split fields in the
//! canonical column order:
//!
//! `id, name, latitude, longitude, surface_area, area_unit, surface_elevation_m, bottom_elevation_m`

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::constants::{KM2_PER_MI2, M2_PER_KM2};

/// Canonical column names, in order.
pub const COLUMNS: [&str; 8] = [
    "id",
    "name",
    "latitude",
    "longitude",
    "surface_area",
    "area_unit",
    "surface_elevation_m",
    "bottom_elevation_m",
];

/// Default area filter: only reservoirs strictly larger than this are loaded.
pub const DEFAULT_MIN_AREA_KM2: f64 = 1.0;

/// Unit of the `surface_area` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AreaUnit {
    /// Square kilometers.
    Km2,
    /// Square miles.
    Mi2,
}

impl AreaUnit {
    /// Parses `km2` or `mi2`, ignoring ASCII case and surrounding whitespace.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("km2") {
            Some(Self::Km2)
        } else if s.eq_ignore_ascii_case("mi2") {
            Some(Self::Mi2)
        } else {
            None
        }
    }

    /// The column spelling of this unit.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Km2 => "km2",
            Self::Mi2 => "mi2",
        }
    }

    /// Converts an area in this unit to square kilometers.
    pub fn to_km2(self, value: f64) -> f64 {
        match self {
            Self::Km2 => value,
            Self::Mi2 => value * KM2_PER_MI2,
        }
    }

    /// Converts an area in square kilometers to this unit.
    pub fn from_km2(self, km2: f64) -> f64 {
        match self {
            Self::Km2 => km2,
            Self::Mi2 => km2 / KM2_PER_MI2,
        }
    }
}

/// Why a single reservoir row could not be accepted.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordError {
    /// The row does not have exactly eight fields.
    ColumnCount {
        /// Number of fields found.
        found: usize,
    },
    /// The id field is blank.
    EmptyId,
    /// A numeric field failed to parse.
    InvalidNumber {
        /// Column name.
        field: &'static str,
        /// Raw text.
        value: String,
    },
    /// A numeric field parsed to NaN or infinity.
    NonFinite {
        /// Column name.
        field: &'static str,
    },
    /// The area unit is neither `km2` nor `mi2`.
    UnknownAreaUnit(String),
    /// Latitude outside [-90, 90].
    LatitudeOutOfRange(f64),
    /// Longitude outside [-180, 180].
    LongitudeOutOfRange(f64),
    /// Surface area is zero or negative.
    NonPositiveArea(f64),
    /// Bottom elevation is not strictly below the surface elevation.
    InvalidBathymetry {
        /// Surface elevation, m.
        surface_elevation_m: f64,
        /// Bottom elevation, m.
        bottom_elevation_m: f64,
    },
    /// The row could not be tokenized (bad quoting or encoding).
    Malformed(String),
    /// Another row already used this id.
    DuplicateId {
        /// The repeated id.
        id: String,
        /// Row number of the first occurrence.
        first_row: usize,
    },
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ColumnCount { found } => {
                write!(f, "expected {} fields, found {found}", COLUMNS.len())
            }
            Self::EmptyId => f.write_str("empty id"),
            Self::InvalidNumber { field, value } => {
                write!(f, "unparseable {field}: {value:?}")
            }
            Self::NonFinite { field } => write!(f, "{field} is not a finite number"),
            Self::UnknownAreaUnit(u) => write!(f, "unknown area unit {u:?} (expected km2 or mi2)"),
            Self::LatitudeOutOfRange(v) => write!(f, "latitude {v} outside [-90, 90]"),
            Self::LongitudeOutOfRange(v) => write!(f, "longitude {v} outside [-180, 180]"),
            Self::NonPositiveArea(v) => write!(f, "surface area {v} must be positive"),
            Self::InvalidBathymetry {
                surface_elevation_m,
                bottom_elevation_m,
            } => write!(
                f,
                "invalid bathymetry: bottom {bottom_elevation_m} m is not below surface {surface_elevation_m} m"
            ),
            Self::Malformed(why) => write!(f, "malformed row: {why}"),
            Self::DuplicateId { id, first_row } => {
                write!(f, "duplicate id {id:?} (first seen at row {first_row})")
            }
        }
    }
}

impl core::error::Error for RecordError {}

/// Quantities derived from elevations and area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derived {
    /// Surface minus bottom elevation, m.
    pub avg_depth_m: f64,
    /// Area × depth, m³.
    pub volume_m3: f64,
    /// Radius of the circle with the same area, m.
    pub equivalent_radius_m: f64,
}

/// Computes depth, volume and equivalent-circle radius.
///
/// Fails with [`RecordError::InvalidBathymetry`] when the depth is not
/// positive.
pub fn compute_derived(
    surface_elevation_m: f64,
    bottom_elevation_m: f64,
    area_km2: f64,
) -> Result<Derived, RecordError> {
    if !(area_km2 > 0.0) {
        return Err(RecordError::NonPositiveArea(area_km2));
    }
    let avg_depth_m = surface_elevation_m - bottom_elevation_m;
    if !(avg_depth_m > 0.0) {
        return Err(RecordError::InvalidBathymetry {
            surface_elevation_m,
            bottom_elevation_m,
        });
    }
    let area_m2 = area_km2 * M2_PER_KM2;
    Ok(Derived {
        avg_depth_m,
        volume_m3: area_m2 * avg_depth_m,
        equivalent_radius_m: libm::sqrt(area_m2 / core::f64::consts::PI),
    })
}

/// One reservoir. Construct through [`ReservoirRecord::new`] so the derived
/// fields always match their inputs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ReservoirRecord {
    /// Unique identifier.
    pub id: String,
    /// Display name; may repeat across records.
    pub name: String,
    /// Degrees north.
    pub latitude: f64,
    /// Degrees east.
    pub longitude: f64,
    /// Surface area, km².
    pub surface_area_km2: f64,
    /// Average water-surface elevation above sea level, m.
    pub surface_elevation_m: f64,
    /// Average bottom elevation above sea level, m.
    pub bottom_elevation_m: f64,
    /// Derived: surface minus bottom elevation, m.
    pub avg_depth_m: f64,
    /// Derived: area × depth, m³.
    pub volume_m3: f64,
    /// Derived: sqrt(area / π), m.
    pub equivalent_radius_m: f64,
}

impl ReservoirRecord {
    /// Validates inputs and fills the derived fields.
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        latitude: f64,
        longitude: f64,
        surface_area_km2: f64,
        surface_elevation_m: f64,
        bottom_elevation_m: f64,
    ) -> Result<Self, RecordError> {
        let id = id.into();
        if id.trim().is_empty() {
            return Err(RecordError::EmptyId);
        }
        for (field, v) in [
            ("latitude", latitude),
            ("longitude", longitude),
            ("surface_area", surface_area_km2),
            ("surface_elevation_m", surface_elevation_m),
            ("bottom_elevation_m", bottom_elevation_m),
        ] {
            if !v.is_finite() {
                return Err(RecordError::NonFinite { field });
            }
        }
        if !(-90.0..=90.0).contains(&latitude) {
            return Err(RecordError::LatitudeOutOfRange(latitude));
        }
        if !(-180.0..=180.0).contains(&longitude) {
            return Err(RecordError::LongitudeOutOfRange(longitude));
        }
        let d = compute_derived(surface_elevation_m, bottom_elevation_m, surface_area_km2)?;
        Ok(Self {
            id,
            name: name.into(),
            latitude,
            longitude,
            surface_area_km2,
            surface_elevation_m,
            bottom_elevation_m,
            avg_depth_m: d.avg_depth_m,
            volume_m3: d.volume_m3,
            equivalent_radius_m: d.equivalent_radius_m,
        })
    }

    /// Parses one canonical row.
    pub fn from_fields(fields: &[&str]) -> Result<Self, RecordError> {
        if fields.len() != COLUMNS.len() {
            return Err(RecordError::ColumnCount {
                found: fields.len(),
            });
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(RecordError::EmptyId);
        }
        let latitude = parse_number("latitude", fields[2])?;
        let longitude = parse_number("longitude", fields[3])?;
        let area = parse_number("surface_area", fields[4])?;
        let unit = AreaUnit::parse(fields[5])
            .ok_or_else(|| RecordError::UnknownAreaUnit(fields[5].to_string()))?;
        let surface = parse_number("surface_elevation_m", fields[6])?;
        let bottom = parse_number("bottom_elevation_m", fields[7])?;
        Self::new(
            id,
            fields[1].trim(),
            latitude,
            longitude,
            unit.to_km2(area),
            surface,
            bottom,
        )
    }
}

fn parse_number(field: &'static str, raw: &str) -> Result<f64, RecordError> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| RecordError::InvalidNumber {
            field,
            value: raw.to_string(),
        })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(RecordError::NonFinite { field })
    }
}

/// Errors building a [`Catalog`] directly from records.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogError {
    /// Two records share an id.
    DuplicateId(String),
    /// A record does not pass the area filter.
    BelowAreaFilter {
        /// Offending id.
        id: String,
        /// Its area, km².
        surface_area_km2: f64,
    },
    /// The area filter itself is negative or NaN.
    InvalidMinArea(f64),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateId(id) => write!(f, "duplicate id {id:?}"),
            Self::BelowAreaFilter {
                id,
                surface_area_km2,
            } => write!(
                f,
                "record {id:?} has area {surface_area_km2} km², not above the area filter"
            ),
            Self::InvalidMinArea(v) => write!(f, "minimum area {v} must be >= 0"),
        }
    }
}

impl core::error::Error for CatalogError {}

/// An immutable, ordered set of reservoirs with unique ids.
#[derive(Debug, Clone)]
pub struct Catalog {
    records: Vec<ReservoirRecord>,
    by_id: BTreeMap<String, usize>,
    min_area_km2: f64,
}

impl Catalog {
    /// Builds a catalog from already-validated records, rejecting duplicate
    /// ids and records at or below `min_area_km2`.
    pub fn new(records: Vec<ReservoirRecord>, min_area_km2: f64) -> Result<Self, CatalogError> {
        if !(min_area_km2 >= 0.0) {
            return Err(CatalogError::InvalidMinArea(min_area_km2));
        }
        let mut by_id = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            if !(r.surface_area_km2 > min_area_km2) {
                return Err(CatalogError::BelowAreaFilter {
                    id: r.id.clone(),
                    surface_area_km2: r.surface_area_km2,
                });
            }
            if by_id.insert(r.id.clone(), i).is_some() {
                return Err(CatalogError::DuplicateId(r.id.clone()));
            }
        }
        Ok(Self {
            records,
            by_id,
            min_area_km2,
        })
    }

    /// Records in load order.
    pub fn records(&self) -> &[ReservoirRecord] {
        &self.records
    }

    /// Number of records.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// True when no record was loaded.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The area filter applied at load, km².
    pub fn min_area_km2(&self) -> f64 {
        self.min_area_km2
    }

    /// Looks a record up by id.
    pub fn get(&self, id: &str) -> Option<&ReservoirRecord> {
        self.index_of(id).map(|i| &self.records[i])
    }

    /// Position of a record in [`Catalog::records`].
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }
}

/// A row the builder refused, with its 1-based data row number.
#[derive(Debug, Clone, PartialEq)]
pub struct RowRejection {
    /// 1-based data row number (the header is not counted).
    pub row: usize,
    /// Why it was refused.
    pub reason: RecordError,
}

/// Counts produced while loading a catalog.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    /// Rows offered to the builder.
    pub total_rows: usize,
    /// Rows that became catalog records.
    pub loaded: usize,
    /// Valid rows excluded by the area filter.
    pub filtered: usize,
    /// Invalid rows.
    pub rejected: Vec<RowRejection>,
}

/// Row-at-a-time catalog loader. Invalid rows are recorded and skipped; they
/// never abort the load.
#[derive(Debug)]
pub struct CatalogBuilder {
    min_area_km2: f64,
    records: Vec<ReservoirRecord>,
    first_row: BTreeMap<String, usize>,
    report: IngestReport,
}

impl CatalogBuilder {
    /// Starts a load with the given strict area filter.
    pub fn new(min_area_km2: f64) -> Result<Self, CatalogError> {
        if !(min_area_km2 >= 0.0) {
            return Err(CatalogError::InvalidMinArea(min_area_km2));
        }
        Ok(Self {
            min_area_km2,
            records: Vec::new(),
            first_row: BTreeMap::new(),
            report: IngestReport::default(),
        })
    }

    /// Offers one row. `row` is the caller's 1-based data row number.
    pub fn push_fields(&mut self, row: usize, fields: &[&str]) {
        let parsed = ReservoirRecord::from_fields(fields);
        self.push_parsed(row, parsed);
    }

    /// Offers a record built elsewhere; the result of a failed parse may be
    /// passed through so it is counted as rejected.
    pub fn push_parsed(&mut self, row: usize, parsed: Result<ReservoirRecord, RecordError>) {
        self.report.total_rows += 1;
        let record = match parsed {
            Ok(r) => r,
            Err(reason) => {
                self.report.rejected.push(RowRejection { row, reason });
                return;
            }
        };
        // Ids of filtered rows are reserved too, so a later row cannot reuse one.
        if let Some(&first_row) = self.first_row.get(&record.id) {
            self.report.rejected.push(RowRejection {
                row,
                reason: RecordError::DuplicateId {
                    id: record.id,
                    first_row,
                },
            });
            return;
        }
        self.first_row.insert(record.id.clone(), row);
        if record.surface_area_km2 > self.min_area_km2 {
            self.records.push(record);
            self.report.loaded += 1;
        } else {
            self.report.filtered += 1;
        }
    }

    /// Finishes the load.
    pub fn finish(self) -> (Catalog, IngestReport) {
        let catalog = Catalog::new(self.records, self.min_area_km2)
            .expect("builder enforces unique ids and the area filter");
        (catalog, self.report)
    }
}
