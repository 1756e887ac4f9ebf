//! Render-agnostic side view of one assessed pair.

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::assess::AssessmentReport;

/// Vertical role of a reservoir in the drawing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Role {
    /// Higher surface.
    Upper,
    /// Lower surface.
    Lower,
    /// Same surface elevation as the other reservoir.
    Level,
}

/// One reservoir outline: a basin from `bottom_elevation_m` up to
/// `surface_elevation_m`, `width_m` wide.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Silhouette {
    /// Reservoir id.
    pub id: String,
    /// Reservoir name.
    pub name: String,
    /// Upper, lower or level.
    pub role: Role,
    /// m above sea level.
    pub surface_elevation_m: f64,
    /// m above sea level.
    pub bottom_elevation_m: f64,
    /// Equivalent-circle diameter, m.
    pub width_m: f64,
}

/// Everything needed to draw a pair: the target on the left, the partner on
/// the right, a shared elevation axis and the head/energy labels.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SchematicModel {
    /// The assessed target.
    pub left: Silhouette,
    /// The row's partner.
    pub right: Silhouette,
    /// Gap between the silhouettes, m; zero when connected.
    pub separation_m: f64,
    /// True when the equivalent circles touch.
    pub connected: bool,
    /// Lowest bottom elevation, m.
    pub axis_min_m: f64,
    /// Highest surface elevation, m.
    pub axis_max_m: f64,
    /// Surface elevation difference, m.
    pub head_m: f64,
    /// Stored energy, when the row carries one.
    pub energy_gwh: Option<f64>,
    /// Text for the head annotation.
    pub head_label: String,
    /// Text for the energy annotation.
    pub energy_label: Option<String>,
}

/// Row index past the end of the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchematicError {
    /// Requested row.
    pub index: usize,
    /// Rows available.
    pub len: usize,
}

impl fmt::Display for SchematicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {} out of range (report has {} rows)", self.index, self.len)
    }
}

impl core::error::Error for SchematicError {}

fn role(own: f64, other: f64) -> Role {
    if own > other {
        Role::Upper
    } else if own < other {
        Role::Lower
    } else {
        Role::Level
    }
}

/// Builds the drawing model for `report.rows[row_index]`.
pub fn schematic_data(
    report: &AssessmentReport,
    row_index: usize,
) -> Result<SchematicModel, SchematicError> {
    let row = report.rows.get(row_index).ok_or(SchematicError {
        index: row_index,
        len: report.rows.len(),
    })?;
    let t = &report.target;
    let p = &row.partner;
    let left = Silhouette {
        id: t.id.clone(),
        name: t.name.clone(),
        role: role(t.surface_elevation_m, p.surface_elevation_m),
        surface_elevation_m: t.surface_elevation_m,
        bottom_elevation_m: t.bottom_elevation_m,
        width_m: 2.0 * t.equivalent_radius_m,
    };
    let right = Silhouette {
        id: p.id.clone(),
        name: p.name.clone(),
        role: role(p.surface_elevation_m, t.surface_elevation_m),
        surface_elevation_m: p.surface_elevation_m,
        bottom_elevation_m: p.bottom_elevation_m,
        width_m: 2.0 * p.equivalent_radius_m,
    };
    let energy_gwh = row.energy.map(|e| e.energy_gwh);
    Ok(SchematicModel {
        axis_min_m: left.bottom_elevation_m.min(right.bottom_elevation_m),
        axis_max_m: left.surface_elevation_m.max(right.surface_elevation_m),
        left,
        right,
        separation_m: row.metrics.boundary_distance_m,
        connected: row.metrics.connected,
        head_m: row.metrics.head_m,
        energy_gwh,
        head_label: format!("head {} m", row.metrics.head_m),
        energy_label: energy_gwh.map(|g| format!("{g} GWh")),
    })
}
