//! Screening engine for micro pumped-storage hydropower.
//!
//! The crate pairs reservoirs from an immutable [`Catalog`], measures the
//! great-circle and equivalent-shoreline separation between them, designates
//! the upper reservoir of each pair and computes the gross potential energy
//! the pair can store (`E = V * rho * g * h`).
//!
//! Everything here is `no_std` (with `alloc`). File formats, the command-line
//! tool and the HTTP service live in the `pshscreen` crate.
#![no_std]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod assess;
pub mod catalog;
pub mod constants;
pub mod energy;
pub mod geo;
pub mod schematic;
pub mod search;

pub use assess::{
    assess, AssessError, AssessmentReport, AssessmentRow, PartnerSummary, Screener, Thresholds,
    ThresholdError,
};
pub use catalog::{
    compute_derived, AreaUnit, Catalog, CatalogBuilder, CatalogError, Derived, IngestReport,
    RecordError, ReservoirRecord, RowRejection,
};
pub use constants::PhysicalConstants;
pub use energy::{
    designate_upper, pair_energy, potential_energy, Designation, EnergyError, EnergyOptions,
    EnergyResult, VolumeBasis,
};
pub use geo::{
    boundary_distance, enumerate_pairs, haversine, pair_metrics, GeoPoint, NeighborError,
    PairMetrics, SpatialIndex,
};
pub use schematic::{schematic_data, Role, SchematicError, SchematicModel, Silhouette};
pub use search::{levenshtein, search, MatchKind, SearchError, SearchOutcome, Suggestion};
