//! Screening query: neighbors within the horizontal threshold, head filter,
//! upper-reservoir designation, energy and ranking.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::catalog::{Catalog, ReservoirRecord};
use crate::energy::{pair_energy, Designation, EnergyOptions, EnergyResult};
use crate::geo::{enumerate_pairs, NeighborError, PairMetrics, SpatialIndex};
use crate::search::{search, SearchError, SearchOutcome};

/// Note for partners whose equivalent circles touch the target's.
pub const NOTE_CONNECTED: &str = "connected";
/// Note for partners at the target's surface elevation.
pub const NOTE_ZERO_HEAD: &str = "zero head, excluded from energy ranking";
/// Note for partners below the minimum head.
pub const NOTE_BELOW_MIN_HEAD: &str = "head below minimum, excluded from energy ranking";

/// Query parameters of an assessment.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Thresholds {
    /// Largest boundary distance to a partner, m.
    pub horizontal_m: f64,
    /// Smallest head for a partner to carry energy, m.
    pub vertical_min_head_m: f64,
}

impl Thresholds {
    /// Horizontal threshold used when none is given: 1 km.
    pub const DEFAULT_HORIZONTAL_M: f64 = 1000.0;
    /// Minimum head used when none is given.
    pub const DEFAULT_VERTICAL_MIN_HEAD_M: f64 = 0.0;

    /// Validated constructor.
    pub fn new(horizontal_m: f64, vertical_min_head_m: f64) -> Result<Self, ThresholdError> {
        let t = Self {
            horizontal_m,
            vertical_min_head_m,
        };
        t.validate()?;
        Ok(t)
    }

    /// Horizontal threshold given in kilometers.
    pub fn from_km(horizontal_km: f64, vertical_min_head_m: f64) -> Result<Self, ThresholdError> {
        Self::new(horizontal_km * 1000.0, vertical_min_head_m)
    }

    /// Both values must be non-negative numbers.
    pub fn validate(&self) -> Result<(), ThresholdError> {
        if !(self.horizontal_m >= 0.0) {
            return Err(ThresholdError::Horizontal(self.horizontal_m));
        }
        if !(self.vertical_min_head_m >= 0.0) {
            return Err(ThresholdError::Vertical(self.vertical_min_head_m));
        }
        Ok(())
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            horizontal_m: Self::DEFAULT_HORIZONTAL_M,
            vertical_min_head_m: Self::DEFAULT_VERTICAL_MIN_HEAD_M,
        }
    }
}

/// A negative or NaN threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdError {
    /// Bad horizontal threshold.
    Horizontal(f64),
    /// Bad minimum head.
    Vertical(f64),
}

impl fmt::Display for ThresholdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Horizontal(v) => write!(f, "horizontal threshold {v} must be >= 0"),
            Self::Vertical(v) => write!(f, "vertical minimum head {v} must be >= 0"),
        }
    }
}

impl core::error::Error for ThresholdError {}

/// Why an assessment could not run.
#[derive(Debug, Clone, PartialEq)]
pub enum AssessError {
    /// Unknown target id.
    NotFound(String),
    /// Thresholds failed validation.
    InvalidThresholds(ThresholdError),
}

impl fmt::Display for AssessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotFound(id) => write!(f, "no reservoir with id {id:?}"),
            Self::InvalidThresholds(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for AssessError {}

impl From<ThresholdError> for AssessError {
    fn from(e: ThresholdError) -> Self {
        Self::InvalidThresholds(e)
    }
}

/// The partner columns shown next to each candidate pairing.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PartnerSummary {
    /// Partner id.
    pub id: String,
    /// Partner name.
    pub name: String,
    /// km².
    pub surface_area_km2: f64,
    /// m³.
    pub volume_m3: f64,
    /// m above sea level.
    pub surface_elevation_m: f64,
    /// m above sea level.
    pub bottom_elevation_m: f64,
    /// m.
    pub equivalent_radius_m: f64,
}

impl From<&ReservoirRecord> for PartnerSummary {
    fn from(r: &ReservoirRecord) -> Self {
        Self {
            id: r.id.clone(),
            name: r.name.clone(),
            surface_area_km2: r.surface_area_km2,
            volume_m3: r.volume_m3,
            surface_elevation_m: r.surface_elevation_m,
            bottom_elevation_m: r.bottom_elevation_m,
            equivalent_radius_m: r.equivalent_radius_m,
        }
    }
}

/// One candidate pairing of the target with a partner.
///
/// `designation` and `energy` are both present or both absent.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AssessmentRow {
    /// The other reservoir.
    pub partner: PartnerSummary,
    /// Pair geometry.
    pub metrics: PairMetrics,
    /// Upper/lower assignment when the pair qualifies.
    pub designation: Option<Designation>,
    /// Stored energy when the pair qualifies.
    pub energy: Option<EnergyResult>,
    /// Annotations, `; `-separated.
    pub note: String,
}

/// Result of [`assess`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AssessmentReport {
    /// The searched reservoir.
    pub target: ReservoirRecord,
    /// Parameters used.
    pub thresholds: Thresholds,
    /// Energy-bearing rows by energy descending, then the rest by distance.
    pub rows: Vec<AssessmentRow>,
    /// Sum of `energy_gwh` over energy-bearing rows.
    pub total_energy_gwh: f64,
}

fn row_order(x: &AssessmentRow, y: &AssessmentRow) -> Ordering {
    let by_energy = match (&x.energy, &y.energy) {
        (Some(a), Some(b)) => b.energy_gwh.total_cmp(&a.energy_gwh),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    };
    by_energy
        .then_with(|| {
            x.metrics
                .boundary_distance_m
                .total_cmp(&y.metrics.boundary_distance_m)
        })
        .then_with(|| x.partner.id.cmp(&y.partner.id))
}

/// Screens `target_id` against every reservoir in `index`.
pub fn assess(
    catalog: &Catalog,
    index: &SpatialIndex,
    target_id: &str,
    thresholds: Thresholds,
    options: &EnergyOptions,
) -> Result<AssessmentReport, AssessError> {
    thresholds.validate()?;
    let target = catalog
        .get(target_id)
        .ok_or_else(|| AssessError::NotFound(target_id.into()))?;
    let pairs = index
        .neighbors_within(catalog, target_id, thresholds.horizontal_m)
        .map_err(|e| match e {
            NeighborError::NotFound(id) => AssessError::NotFound(id),
            NeighborError::InvalidThreshold(t) => ThresholdError::Horizontal(t).into(),
        })?;

    let mut rows: Vec<AssessmentRow> = pairs
        .into_iter()
        .map(|metrics| {
            let partner_id = metrics.partner_of(target_id).expect("pair involves target");
            let partner = catalog.get(partner_id).expect("index ids come from catalog");
            let mut notes: Vec<&str> = Vec::new();
            if metrics.connected {
                notes.push(NOTE_CONNECTED);
            }
            let qualified = match pair_energy(target, partner, options) {
                None => {
                    notes.push(NOTE_ZERO_HEAD);
                    None
                }
                Some((d, _)) if d.head_m < thresholds.vertical_min_head_m => {
                    notes.push(NOTE_BELOW_MIN_HEAD);
                    None
                }
                some => some,
            };
            let (designation, energy) = match qualified {
                Some((d, e)) => (Some(d), Some(e)),
                None => (None, None),
            };
            AssessmentRow {
                partner: partner.into(),
                metrics,
                designation,
                energy,
                note: notes.join("; "),
            }
        })
        .collect();
    rows.sort_by(row_order);
    let total_energy_gwh = rows
        .iter()
        .filter_map(|r| r.energy.map(|e| e.energy_gwh))
        .sum();
    Ok(AssessmentReport {
        target: target.clone(),
        thresholds,
        rows,
        total_energy_gwh,
    })
}

/// A catalog bundled with its spatial index and energy options.
#[derive(Debug, Clone)]
pub struct Screener {
    catalog: Catalog,
    index: SpatialIndex,
    options: EnergyOptions,
}

impl Screener {
    /// Indexes `catalog` on the earth radius in `options`.
    pub fn new(catalog: Catalog, options: EnergyOptions) -> Self {
        let index = SpatialIndex::build(&catalog, options.constants.earth_radius_m);
        Self {
            catalog,
            index,
            options,
        }
    }

    /// The catalog.
    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    /// Energy options in effect.
    pub fn options(&self) -> &EnergyOptions {
        &self.options
    }

    /// See [`assess`].
    pub fn assess(
        &self,
        target_id: &str,
        thresholds: Thresholds,
    ) -> Result<AssessmentReport, AssessError> {
        assess(&self.catalog, &self.index, target_id, thresholds, &self.options)
    }

    /// See [`search`].
    pub fn search(&self, query: &str) -> Result<SearchOutcome, SearchError> {
        search(&self.catalog, query)
    }

    /// See [`SpatialIndex::neighbors_within`].
    pub fn neighbors_within(
        &self,
        target_id: &str,
        threshold_m: f64,
    ) -> Result<Vec<PairMetrics>, NeighborError> {
        self.index
            .neighbors_within(&self.catalog, target_id, threshold_m)
    }

    /// Every unordered pair, sorted.
    pub fn pairs(&self) -> Vec<PairMetrics> {
        enumerate_pairs(&self.catalog, self.options.constants.earth_radius_m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;
    use rand::{Rng, SeedableRng};

    /// Five-reservoir cluster; expected values come from the chord-length
    /// oracle script shipped with the integration tests.
    fn cluster() -> Screener {
        let r = |id: &str, name: &str, lat, lon, area, s, b| {
            ReservoirRecord::new(id, name, lat, lon, area, s, b).unwrap()
        };
        let records = vec![
            r("C1", "Cluster Lake", 45.0, -85.0, 2.0, 250.0, 230.0),
            r("C2", "North Pond", 45.0161, -85.0, 1.5, 300.0, 280.0),
            r("C3", "Level Lake", 45.0, -84.985, 1.2, 250.0, 240.0),
            r("C4", "Round, Lake", 44.9803, -85.0, 1.1, 230.0, 215.0),
            r("C5", "Far Reservoir", 45.0, -85.07, 3.0, 400.0, 380.0),
        ];
        Screener::new(Catalog::new(records, 1.0).unwrap(), EnergyOptions::default())
    }

    #[test]
    fn cluster_rows_match_oracle() {
        let s = cluster();
        let rep = s.assess("C1", Thresholds::default()).unwrap();
        let ids: Vec<_> = rep.rows.iter().map(|r| r.partner.id.as_str()).collect();
        assert_eq!(ids, vec!["C2", "C4", "C3"]);
        let c2 = &rep.rows[0];
        assert!((c2.metrics.boundary_distance_m - 301.3679320145626).abs() < 1e-6);
        assert_eq!(c2.designation.as_ref().unwrap().upper_id, "C2");
        assert_eq!(c2.energy.unwrap().energy_j, 14715000000000.0);
        assert_eq!(c2.energy.unwrap().energy_gwh, 4.0875);
        let c4 = &rep.rows[1];
        assert!((c4.metrics.boundary_distance_m - 800.9314925277341).abs() < 1e-6);
        assert_eq!(c4.designation.as_ref().unwrap().upper_id, "C1");
        assert_eq!(c4.energy.unwrap().energy_kwh, 2180000.0);
        let c3 = &rep.rows[2];
        assert!(c3.metrics.connected && c3.designation.is_none() && c3.energy.is_none());
        assert_eq!(c3.note, format!("{NOTE_CONNECTED}; {NOTE_ZERO_HEAD}"));
        assert_eq!(rep.total_energy_gwh, 4.0875 + 2.18);
    }

    #[test]
    fn cluster_with_min_head() {
        let rep = cluster().assess("C1", Thresholds::new(1000.0, 30.0).unwrap()).unwrap();
        let energetic: Vec<_> = rep
            .rows
            .iter()
            .filter(|r| r.energy.is_some())
            .map(|r| r.partner.id.as_str())
            .collect();
        assert_eq!(energetic, vec!["C2"]);
        assert_eq!(rep.rows.len(), 3);
        assert_eq!(rep.rows[2].partner.id, "C4");
        assert_eq!(rep.rows[2].note, NOTE_BELOW_MIN_HEAD);
        assert_eq!(rep.total_energy_gwh, 4.0875);
    }

    #[test]
    fn zero_threshold_and_errors() {
        let s = cluster();
        let rep = s.assess("C5", Thresholds::new(0.0, 0.0).unwrap()).unwrap();
        assert!(rep.rows.is_empty());
        assert_eq!(rep.total_energy_gwh, 0.0);
        assert_eq!(
            s.assess("nope", Thresholds::default()),
            Err(AssessError::NotFound("nope".into()))
        );
        let bad = Thresholds {
            horizontal_m: -1.0,
            vertical_min_head_m: 0.0,
        };
        assert!(matches!(
            s.assess("C1", bad),
            Err(AssessError::InvalidThresholds(_))
        ));
        assert!(Thresholds::new(1.0, f64::NAN).is_err());
        assert_eq!(Thresholds::from_km(1.0, 0.0).unwrap(), Thresholds::default());
    }

    fn random_catalog(seed: u64, n: usize) -> Catalog {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let records = (0..n)
            .map(|i| {
                let s = rng.gen_range(0..40) as f64 * 5.0;
                ReservoirRecord::new(
                    format!("r{i:03}"),
                    format!("Lake {i}"),
                    rng.gen_range(44.0..44.2),
                    rng.gen_range(-84.2..-84.0),
                    rng.gen_range(1.01..4.0),
                    s,
                    s - rng.gen_range(1.0..30.0),
                )
                .unwrap()
            })
            .collect();
        Catalog::new(records, 1.0).unwrap()
    }

    #[test]
    fn randomized_threshold_properties() {
        let s = Screener::new(random_catalog(7, 60), EnergyOptions::default());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..60 {
            let id = format!("r{:03}", rng.gen_range(0..60));
            let h = rng.gen_range(0.0..3000.0);
            let v = rng.gen_range(0.0..100.0);
            let t = Thresholds::new(h, v).unwrap();
            let rep = s.assess(&id, t).unwrap();
            for row in &rep.rows {
                assert!(row.metrics.boundary_distance_m <= h);
                assert_eq!(row.designation.is_some(), row.energy.is_some());
                if let Some(d) = &row.designation {
                    assert!(d.head_m >= v);
                }
            }
            // Monotonicity in both thresholds.
            let wider = s.assess(&id, Thresholds::new(h * 1.5 + 10.0, v).unwrap()).unwrap();
            let ids = |r: &AssessmentReport| {
                let mut v: Vec<_> = r.rows.iter().map(|x| x.partner.id.clone()).collect();
                v.sort();
                v
            };
            let narrow_ids = ids(&rep);
            let wide_ids = ids(&wider);
            assert!(narrow_ids.iter().all(|i| wide_ids.contains(i)));
            let stricter = s.assess(&id, Thresholds::new(h, v + 25.0).unwrap()).unwrap();
            let energetic = |r: &AssessmentReport| {
                r.rows.iter().filter(|x| x.energy.is_some()).map(|x| x.partner.id.clone()).collect::<Vec<_>>()
            };
            assert!(energetic(&stricter).iter().all(|i| energetic(&rep).contains(i)));
            // Symmetry with the partner's own assessment.
            for row in &rep.rows {
                let back = s.assess(&row.partner.id, t).unwrap();
                let mirror = back.rows.iter().find(|x| x.partner.id == id).unwrap();
                assert_eq!(mirror.metrics, row.metrics);
                assert_eq!(mirror.energy, row.energy);
                assert_eq!(mirror.designation, row.designation);
            }
            // Sorted order.
            for w in rep.rows.windows(2) {
                assert_ne!(row_order(&w[0], &w[1]), Ordering::Greater);
            }
        }
    }
}
