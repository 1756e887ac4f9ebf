//! Great-circle distances, pair geometry and a latitude/longitude grid index
//! for threshold queries.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;

use crate::catalog::{Catalog, ReservoirRecord};

/// A position on the spherical earth model, in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeoPoint {
    /// Degrees north, [-90, 90].
    pub latitude: f64,
    /// Degrees east, [-180, 180].
    pub longitude: f64,
}

impl GeoPoint {
    /// Returns `None` when either coordinate is out of range or not finite.
    pub fn new(latitude: f64, longitude: f64) -> Option<Self> {
        ((-90.0..=90.0).contains(&latitude) && (-180.0..=180.0).contains(&longitude))
            .then_some(Self {
                latitude,
                longitude,
            })
    }
}

impl From<&ReservoirRecord> for GeoPoint {
    fn from(r: &ReservoirRecord) -> Self {
        Self {
            latitude: r.latitude,
            longitude: r.longitude,
        }
    }
}

/// Great-circle distance in meters on a sphere of `radius_m`.
///
/// The arguments are put in a fixed order before evaluation so the result is
/// bit-for-bit symmetric.
pub fn haversine(p1: GeoPoint, p2: GeoPoint, radius_m: f64) -> f64 {
    let (a, b) = if (p1.latitude, p1.longitude) <= (p2.latitude, p2.longitude) {
        (p1, p2)
    } else {
        (p2, p1)
    };
    let phi1 = a.latitude.to_radians();
    let phi2 = b.latitude.to_radians();
    let dphi = (b.latitude - a.latitude).to_radians();
    let dlambda = (b.longitude - a.longitude).to_radians();
    let s_phi = libm::sin(dphi / 2.0);
    let s_lambda = libm::sin(dlambda / 2.0);
    let h = (s_phi * s_phi + libm::cos(phi1) * libm::cos(phi2) * s_lambda * s_lambda).clamp(0.0, 1.0);
    radius_m * 2.0 * libm::atan2(libm::sqrt(h), libm::sqrt(1.0 - h))
}

/// Separation of two equivalent circles: `max(0, centroid - r_a - r_b)`.
pub fn boundary_distance(centroid_m: f64, r_a: f64, r_b: f64) -> f64 {
    (centroid_m - r_a - r_b).max(0.0)
}

/// Geometry between two reservoirs. `id_a < id_b` always.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PairMetrics {
    /// Lexicographically smaller id.
    pub id_a: String,
    /// Lexicographically larger id.
    pub id_b: String,
    /// Great-circle distance between centroids, m.
    pub centroid_distance_m: f64,
    /// Equivalent-shoreline distance, m.
    pub boundary_distance_m: f64,
    /// Absolute difference of surface elevations, m.
    pub head_m: f64,
    /// True when the equivalent circles touch or overlap.
    pub connected: bool,
}

impl PairMetrics {
    /// The id of the other reservoir, if `id` is one of the pair.
    pub fn partner_of(&self, id: &str) -> Option<&str> {
        if self.id_a == id {
            Some(&self.id_b)
        } else if self.id_b == id {
            Some(&self.id_a)
        } else {
            None
        }
    }
}

/// Pair geometry for two distinct reservoirs, in canonical order.
pub fn pair_metrics(a: &ReservoirRecord, b: &ReservoirRecord, radius_m: f64) -> PairMetrics {
    let (a, b) = if a.id <= b.id { (a, b) } else { (b, a) };
    let centroid_distance_m = haversine(a.into(), b.into(), radius_m);
    let boundary_distance_m =
        boundary_distance(centroid_distance_m, a.equivalent_radius_m, b.equivalent_radius_m);
    PairMetrics {
        id_a: a.id.clone(),
        id_b: b.id.clone(),
        centroid_distance_m,
        boundary_distance_m,
        head_m: (a.surface_elevation_m - b.surface_elevation_m).abs(),
        connected: boundary_distance_m == 0.0,
    }
}

/// Every unordered pair in the catalog, sorted by `(id_a, id_b)`.
pub fn enumerate_pairs(catalog: &Catalog, radius_m: f64) -> Vec<PairMetrics> {
    let mut order: Vec<&ReservoirRecord> = catalog.records().iter().collect();
    order.sort_by(|x, y| x.id.cmp(&y.id));
    let n = order.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for (i, a) in order.iter().enumerate() {
        for b in &order[i + 1..] {
            out.push(pair_metrics(a, b, radius_m));
        }
    }
    out
}

/// Errors from [`SpatialIndex::neighbors_within`].
#[derive(Debug, Clone, PartialEq)]
pub enum NeighborError {
    /// The target id is not in the catalog.
    NotFound(String),
    /// Threshold negative or NaN.
    InvalidThreshold(f64),
}

impl fmt::Display for NeighborError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotFound(id) => write!(f, "no reservoir with id {id:?}"),
            Self::InvalidThreshold(t) => write!(f, "threshold {t} must be >= 0"),
        }
    }
}

impl core::error::Error for NeighborError {}

/// Uniform latitude/longitude grid over a catalog's centroids.
///
/// A query scans every cell that can hold a centroid within
/// `threshold + r_target + r_max` of the target and then applies the exact
/// boundary-distance test, so results equal a full scan.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    cell_deg: f64,
    lat_bins: i64,
    lon_bins: i64,
    cells: BTreeMap<(i64, i64), Vec<usize>>,
    max_radius_m: f64,
    radius_m: f64,
    len: usize,
}

impl SpatialIndex {
    /// Default cell edge, degrees.
    pub const DEFAULT_CELL_DEG: f64 = 0.25;

    /// Indexes `catalog` for a sphere of `radius_m`.
    pub fn build(catalog: &Catalog, radius_m: f64) -> Self {
        Self::with_cell_size(catalog, radius_m, Self::DEFAULT_CELL_DEG)
    }

    /// Indexes with an explicit cell edge in degrees.
    pub fn with_cell_size(catalog: &Catalog, radius_m: f64, cell_deg: f64) -> Self {
        assert!(cell_deg > 0.0 && cell_deg <= 180.0, "cell size out of range");
        let lat_bins = libm::ceil(180.0 / cell_deg) as i64;
        let lon_bins = libm::ceil(360.0 / cell_deg) as i64;
        let mut index = Self {
            cell_deg,
            lat_bins,
            lon_bins,
            cells: BTreeMap::new(),
            max_radius_m: 0.0,
            radius_m,
            len: catalog.len(),
        };
        for (i, r) in catalog.records().iter().enumerate() {
            let key = (index.lat_bin(r.latitude), index.lon_bin(r.longitude));
            index.cells.entry(key).or_default().push(i);
            index.max_radius_m = index.max_radius_m.max(r.equivalent_radius_m);
        }
        index
    }

    /// Sphere radius the index measures distances on.
    pub fn earth_radius_m(&self) -> f64 {
        self.radius_m
    }

    fn lat_bin(&self, lat: f64) -> i64 {
        (libm::floor((lat + 90.0) / self.cell_deg) as i64).clamp(0, self.lat_bins - 1)
    }

    fn lon_bin(&self, lon: f64) -> i64 {
        (libm::floor((lon + 180.0) / self.cell_deg) as i64).clamp(0, self.lon_bins - 1)
    }

    /// Candidate record positions whose centroid may lie within
    /// `search_m` of `center`, or `None` when a full scan is cheaper.
    fn candidates(&self, center: GeoPoint, search_m: f64) -> Option<Vec<usize>> {
        // Pad the cap so rounding in the distance formula cannot drop a hit.
        let delta = (search_m * (1.0 + 1e-9) + 1.0) / self.radius_m + 1e-12;
        if !(delta < FRAC_PI_2) {
            return None;
        }
        let delta_deg = delta.to_degrees();
        let lat_lo = center.latitude - delta_deg;
        let lat_hi = center.latitude + delta_deg;
        let cos_phi = libm::cos(center.latitude.to_radians());
        let sin_delta = libm::sin(delta);

        let mut cols: Vec<i64> = Vec::new();
        if lat_lo <= -90.0 || lat_hi >= 90.0 || sin_delta >= cos_phi {
            cols.extend(0..self.lon_bins);
        } else {
            // Longitude half-width of a spherical cap that excludes both poles.
            let dlon = libm::asin(sin_delta / cos_phi).to_degrees() * (1.0 + 1e-9) + 1e-9;
            let (lo, hi) = (center.longitude - dlon, center.longitude + dlon);
            if hi - lo >= 360.0 {
                cols.extend(0..self.lon_bins);
            } else {
                let mut push = |a: f64, b: f64| {
                    cols.extend(self.lon_bin(a)..=self.lon_bin(b));
                };
                if lo < -180.0 {
                    push(lo + 360.0, 180.0);
                    push(-180.0, hi);
                } else if hi > 180.0 {
                    push(lo, 180.0);
                    push(-180.0, hi - 360.0);
                } else {
                    push(lo, hi);
                }
                cols.sort_unstable();
                cols.dedup();
            }
        }
        let row_lo = self.lat_bin(lat_lo.max(-90.0));
        let row_hi = self.lat_bin(lat_hi.min(90.0));
        let cell_count = (row_hi - row_lo + 1) as usize * cols.len();
        if cell_count > self.len.max(self.cells.len()) {
            return None;
        }
        let mut out = Vec::new();
        for row in row_lo..=row_hi {
            for &col in &cols {
                if let Some(v) = self.cells.get(&(row, col)) {
                    out.extend_from_slice(v);
                }
            }
        }
        Some(out)
    }

    /// All pairs involving `target_id` whose boundary distance is at most
    /// `threshold_m`, sorted by `(id_a, id_b)`.
    ///
    /// `catalog` must be the catalog the index was built from.
    pub fn neighbors_within(
        &self,
        catalog: &Catalog,
        target_id: &str,
        threshold_m: f64,
    ) -> Result<Vec<PairMetrics>, NeighborError> {
        debug_assert_eq!(catalog.len(), self.len, "index built from another catalog");
        if !(threshold_m >= 0.0) {
            return Err(NeighborError::InvalidThreshold(threshold_m));
        }
        let ti = catalog
            .index_of(target_id)
            .ok_or_else(|| NeighborError::NotFound(target_id.into()))?;
        let records = catalog.records();
        let target = &records[ti];
        let search_m = threshold_m + target.equivalent_radius_m + self.max_radius_m;
        let scan = |i: usize| -> Option<PairMetrics> {
            if i == ti {
                return None;
            }
            let m = pair_metrics(target, &records[i], self.radius_m);
            (m.boundary_distance_m <= threshold_m).then_some(m)
        };
        let mut out: Vec<PairMetrics> = match self.candidates(target.into(), search_m) {
            Some(c) => c.into_iter().filter_map(scan).collect(),
            None => (0..records.len()).filter_map(scan).collect(),
        };
        out.sort_by(|x, y| (&x.id_a, &x.id_b).cmp(&(&y.id_a, &y.id_b)));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use alloc::format;
    use alloc::vec;
    use core::f64::consts::PI;

    const R: f64 = PhysicalConstants::DEFAULT_EARTH_RADIUS_M;

    fn p(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint::new(lat, lon).unwrap()
    }

    #[test]
    fn haversine_examples() {
        assert_eq!(haversine(p(42.0, -83.0), p(42.0, -83.0), R), 0.0);
        // R * pi / 180 = 111_195.0802...
        assert!((haversine(p(0.0, 0.0), p(1.0, 0.0), R) - 111_195.08).abs() < 0.01);
        // pi * R = 20_015_114.44...
        assert!((haversine(p(0.0, 0.0), p(0.0, 180.0), R) - 20_015_114.4).abs() < 0.1);
        assert!((haversine(p(0.0, 0.0), p(0.0, 180.0), R) - PI * R).abs() < 1e-6);
    }

    #[test]
    fn geo_point_rejects_out_of_range() {
        assert!(GeoPoint::new(90.5, 0.0).is_none());
        assert!(GeoPoint::new(0.0, -180.5).is_none());
        assert!(GeoPoint::new(f64::NAN, 0.0).is_none());
    }

    #[test]
    fn boundary_distance_examples() {
        assert_eq!(boundary_distance(10_000.0, 2_000.0, 3_000.0), 5_000.0);
        assert_eq!(boundary_distance(4_000.0, 2_000.0, 3_000.0), 0.0);
        assert_eq!(boundary_distance(0.0, 0.0, 0.0), 0.0);
    }

    fn rec(id: &str, lat: f64, lon: f64, area: f64, surface: f64) -> ReservoirRecord {
        ReservoirRecord::new(id, id, lat, lon, area, surface, surface - 10.0).unwrap()
    }

    fn catalog(n: usize) -> Catalog {
        let records = (0..n)
            .map(|i| rec(&format!("r{i:03}"), 40.0 + i as f64 * 0.01, -80.0, 1.5, 100.0 + i as f64))
            .collect();
        Catalog::new(records, 1.0).unwrap()
    }

    #[test]
    fn pair_counts() {
        assert_eq!(enumerate_pairs(&catalog(1), R).len(), 0);
        assert_eq!(enumerate_pairs(&catalog(3), R).len(), 3);
        assert_eq!(enumerate_pairs(&catalog(428), R).len(), 91_378);
    }

    #[test]
    fn pairs_are_canonical_and_sorted() {
        let records = vec![rec("b", 0.0, 0.0, 2.0, 10.0), rec("a", 0.0, 0.01, 2.0, 30.0)];
        let cat = Catalog::new(records, 1.0).unwrap();
        let pairs = enumerate_pairs(&cat, R);
        assert_eq!((pairs[0].id_a.as_str(), pairs[0].id_b.as_str()), ("a", "b"));
        assert_eq!(pairs[0].head_m, 20.0);
        assert_eq!(pairs[0].partner_of("a"), Some("b"));
        assert_eq!(pairs[0].partner_of("c"), None);
    }

    #[test]
    fn coincident_centroids_are_connected() {
        let cat = Catalog::new(vec![rec("a", 5.0, 5.0, 2.0, 1.0), rec("b", 5.0, 5.0, 2.0, 1.0)], 1.0)
            .unwrap();
        let m = &enumerate_pairs(&cat, R)[0];
        assert_eq!((m.centroid_distance_m, m.boundary_distance_m, m.connected), (0.0, 0.0, true));
    }

    #[test]
    fn neighbor_query_edges() {
        // Rows 0.01 deg (about 1.1 km) apart with radii about 691 m: neighbors overlap.
        let cat = Catalog::new(
            (0..4)
                .map(|i| rec(&format!("r{i}"), i as f64 * 0.5, 0.0, 1.5, 1.0))
                .collect(),
            1.0,
        )
        .unwrap();
        let idx = SpatialIndex::build(&cat, R);
        assert!(idx.neighbors_within(&cat, "r0", 0.0).unwrap().is_empty());
        assert_eq!(idx.neighbors_within(&cat, "r0", f64::MAX).unwrap().len(), 3);
        assert_eq!(
            idx.neighbors_within(&cat, "nope", 1.0),
            Err(NeighborError::NotFound("nope".into()))
        );
        assert!(matches!(
            idx.neighbors_within(&cat, "r0", -1.0),
            Err(NeighborError::InvalidThreshold(_))
        ));
    }

    /// Full-scan oracle kept separate from the index path.
    fn scan(cat: &Catalog, id: &str, t: f64) -> Vec<(String, String)> {
        let target = cat.get(id).unwrap();
        let mut v: Vec<_> = cat
            .records()
            .iter()
            .filter(|r| r.id != id)
            .filter_map(|r| {
                let c = haversine(target.into(), r.into(), R);
                let b = (c - target.equivalent_radius_m - r.equivalent_radius_m).max(0.0);
                (b <= t).then(|| {
                    if target.id < r.id {
                        (target.id.clone(), r.id.clone())
                    } else {
                        (r.id.clone(), target.id.clone())
                    }
                })
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn ten_reservoir_grid_matches_scan() {
        // 2 x 5 grid at 0.02 deg spacing near 45N, areas 1.2 km2.
        let records: Vec<_> = (0..10)
            .map(|i| {
                rec(
                    &format!("g{i}"),
                    45.0 + (i / 5) as f64 * 0.02,
                    -85.0 + (i % 5) as f64 * 0.02,
                    1.2,
                    100.0,
                )
            })
            .collect();
        let cat = Catalog::new(records, 1.0).unwrap();
        let idx = SpatialIndex::with_cell_size(&cat, R, 0.01);
        for r in cat.records() {
            let got: Vec<_> = idx
                .neighbors_within(&cat, &r.id, 1_000.0)
                .unwrap()
                .into_iter()
                .map(|m| (m.id_a, m.id_b))
                .collect();
            assert_eq!(got, scan(&cat, &r.id, 1_000.0));
        }
        // g0 has east neighbor g1 (~1574 m centroid, ~337 m boundary) and north neighbor g5
        // (~2224 m centroid, ~988 m boundary); diagonal g6 is ~1470 m away.
        let got = idx.neighbors_within(&cat, "g0", 1_000.0).unwrap();
        let ids: Vec<_> = got.iter().map(|m| m.partner_of("g0").unwrap()).collect();
        assert_eq!(ids, vec!["g1", "g5"]);
    }

    #[test]
    fn index_handles_poles_and_antimeridian() {
        let records = vec![
            rec("a", 89.99, 179.99, 2.0, 1.0),
            rec("b", 89.99, -179.99, 2.0, 1.0),
            rec("c", 0.0, 179.999, 2.0, 1.0),
            rec("d", 0.0, -179.999, 2.0, 1.0),
            rec("e", -89.999, 0.0, 2.0, 1.0),
            rec("f", -89.999, 180.0, 2.0, 1.0),
        ];
        let cat = Catalog::new(records, 1.0).unwrap();
        let idx = SpatialIndex::with_cell_size(&cat, R, 0.001);
        for r in cat.records() {
            for t in [0.0, 10.0, 5_000.0, 1e6] {
                let got: Vec<_> = idx
                    .neighbors_within(&cat, &r.id, t)
                    .unwrap()
                    .into_iter()
                    .map(|m| (m.id_a, m.id_b))
                    .collect();
                assert_eq!(got, scan(&cat, &r.id, t), "{} {t}", r.id);
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn haversine_metric_axioms(
            a in (-90.0f64..=90.0, -180.0f64..=180.0),
            b in (-90.0f64..=90.0, -180.0f64..=180.0),
            c in (-90.0f64..=90.0, -180.0f64..=180.0),
        ) {
            let (a, b, c) = (p(a.0, a.1), p(b.0, b.1), p(c.0, c.1));
            let ab = haversine(a, b, R);
            proptest::prop_assert_eq!(ab, haversine(b, a, R));
            proptest::prop_assert!(ab >= 0.0);
            proptest::prop_assert!(haversine(a, c, R) <= ab + haversine(b, c, R) + 1e-6);
        }

        #[test]
        fn boundary_distance_monotone(
            c in 0.0f64..1e6, ra in 0.0f64..1e5, rb in 0.0f64..1e5, d in 0.0f64..1e4,
        ) {
            let base = boundary_distance(c, ra, rb);
            proptest::prop_assert!(boundary_distance(c, ra + d, rb) <= base);
            proptest::prop_assert!(boundary_distance(c, ra, rb + d) <= base);
            proptest::prop_assert!(boundary_distance(c + d, ra, rb) >= base);
            proptest::prop_assert!(base <= c);
        }
    }
}
