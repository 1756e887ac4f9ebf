//! Deterministic demo catalogs.
//!
//! The real statewide dataset is not redistributable, so the repository ships
//! catalogs produced here: a desk-scale statewide-like catalog, a five-lake
//! cluster with hand-checked results and a great-lake scenario. The files in
//! `data/` are byte-identical to these generators (a test enforces it).

use std::fmt::Write as _;

use pshscreen_core::constants::KM2_PER_MI2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HEADER: &str =
    "id,name,latitude,longitude,surface_area,area_unit,surface_elevation_m,bottom_elevation_m\n";

/// Seed used for `data/synthetic_catalog.csv`.
pub const DEFAULT_SEED: u64 = 20_241_108;

/// Row counts of the generated statewide-like catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticCounts {
    /// Rows that load.
    pub valid: usize,
    /// Valid rows at or below 1 km².
    pub filtered: usize,
    /// Broken rows (always 3: bad bathymetry, bad number, duplicate id).
    pub rejected: usize,
}

impl Default for SyntheticCounts {
    fn default() -> Self {
        Self {
            valid: 428,
            filtered: 12,
            rejected: 3,
        }
    }
}

const NAMES: [&str; 32] = [
    "Mud Lake",
    "Long Lake",
    "Round Lake",
    "Crystal Lake",
    "Bass Lake",
    "Silver Lake",
    "Big Lake",
    "Pine Lake",
    "Clear Lake",
    "Lost Lake",
    "Horseshoe Lake",
    "Twin Lake",
    "Spring Lake",
    "Fish Lake",
    "Cedar Lake",
    "Duck Lake",
    "Indian Lake",
    "Portage Lake",
    "Hardy Pond",
    "Hubbard Reservoir",
    "Croton Pond",
    "Tippy Reservoir",
    "Hodenpyl Pond",
    "Rogers Pond",
    "Foote Pond",
    "Alcona Pond",
    "Loud Pond",
    "Cooke Pond",
    "Five Channels Pond",
    "Mio Pond",
    "Way Dam Pond",
    "Peavy Pond",
];

struct Row {
    id: String,
    name: String,
    lat: f64,
    lon: f64,
    area: f64,
    unit: &'static str,
    surface: f64,
    bottom: f64,
}

impl Row {
    fn line(&self) -> String {
        let name = if self.name.contains([',', '"']) {
            format!("\"{}\"", self.name.replace('"', "\"\""))
        } else {
            self.name.clone()
        };
        format!(
            "{},{},{:.5},{:.5},{:.4},{},{:.1},{:.1}\n",
            self.id, name, self.lat, self.lon, self.area, self.unit, self.surface, self.bottom
        )
    }
}

/// Generates a statewide-like catalog as CSV text.
///
/// Reservoirs are grouped around clump centers inside a 42–47°N, 83–89°W box
/// so that a realistic handful of pairs fall within a kilometer of each other.
pub fn statewide_catalog(seed: u64, counts: SyntheticCounts) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clumps: Vec<(f64, f64, f64)> = (0..70)
        .map(|_| {
            (
                rng.gen_range(42.0..46.8),
                rng.gen_range(-89.3..-82.8),
                rng.gen_range(176.0..420.0),
            )
        })
        .collect();

    let make = |i: usize, area_range: (f64, f64), rng: &mut ChaCha8Rng| -> Row {
        let (clat, clon, base) = clumps[rng.gen_range(0..clumps.len())];
        let area_km2 = 10f64.powf(rng.gen_range(area_range.0.log10()..area_range.1.log10()));
        let in_miles = rng.gen_bool(0.2);
        let surface = base + rng.gen_range(-15.0..45.0);
        let depth = rng.gen_range(1.5..35.0);
        let name = if rng.gen_bool(0.85) {
            NAMES[rng.gen_range(0..NAMES.len())].to_string()
        } else {
            format!("Reservoir {}", i + 1)
        };
        Row {
            id: format!("MI{:04}", i + 1),
            name,
            lat: clat + rng.gen_range(-0.03..0.03),
            lon: clon + rng.gen_range(-0.04..0.04),
            area: if in_miles { area_km2 / KM2_PER_MI2 } else { area_km2 },
            unit: if in_miles { "mi2" } else { "km2" },
            surface,
            bottom: surface - depth,
        }
    };

    let mut rows: Vec<Row> = Vec::new();
    let mut next = 0usize;
    for _ in 0..counts.valid {
        rows.push(make(next, (1.05, 60.0), &mut rng));
        next += 1;
    }
    for k in 0..counts.filtered {
        let mut r = make(next, (0.2, 0.99), &mut rng);
        if k == 0 {
            // Exactly at the filter edge: excluded by the strict comparison.
            r.area = 1.0;
            r.unit = "km2";
        }
        let at = rng.gen_range(0..=rows.len());
        rows.insert(at, r);
        next += 1;
    }
    let mut broken = Vec::new();
    if counts.rejected > 0 {
        let mut r = make(next, (1.05, 60.0), &mut rng);
        r.bottom = r.surface + 2.0;
        broken.push(r.line());
        next += 1;
    }
    if counts.rejected > 1 {
        let r = make(next, (1.05, 60.0), &mut rng);
        broken.push(r.line().replacen(&format!(",{:.1}\n", r.bottom), ",n/a\n", 1));
        next += 1;
    }
    if counts.rejected > 2 {
        let mut r = make(next, (1.05, 60.0), &mut rng);
        r.id = rows[rng.gen_range(0..rows.len())].id.clone();
        broken.push(r.line());
    }

    let mut lines: Vec<String> = rows.iter().map(Row::line).collect();
    for b in broken {
        let at = rng.gen_range(1..=lines.len());
        lines.insert(at, b);
    }
    let mut out = String::from(HEADER);
    for l in lines {
        out.push_str(&l);
    }
    out
}

/// Five reservoirs around 45°N 85°W. Against `C1` with the default 1 km
/// threshold: `C2` 50 m higher (~301 m away), `C3` level and touching,
/// `C4` 20 m lower (~801 m away), `C5` out of range.
pub fn cluster_catalog() -> String {
    let mut out = String::from(HEADER);
    for (id, name, lat, lon, area, s, b) in [
        ("C1", "Cluster Lake", "45.0", "-85.0", "2.0", "250", "230"),
        ("C2", "North Pond", "45.0161", "-85.0", "1.5", "300", "280"),
        ("C3", "Level Lake", "45.0", "-84.985", "1.2", "250", "240"),
        ("C4", "\"Round, Lake\"", "44.9803", "-85.0", "1.1", "230", "215"),
        ("C5", "Far Reservoir", "45.0", "-85.07", "3.0", "400", "380"),
    ] {
        writeln!(out, "{id},{name},{lat},{lon},{area},km2,{s},{b}").unwrap();
    }
    out
}

/// A great-lake-sized record (69,650 km² × 20 m = 1.393×10¹² m³) and a small
/// bay whose equivalent circle falls inside it.
pub fn huron_catalog() -> String {
    let mut out = String::from(HEADER);
    out.push_str("H1,Lake Huron,44.8,-82.4,69650,km2,176.0,156.0\n");
    out.push_str("H2,North Bay,45.9,-81.9,5.0,km2,196.0,186.0\n");
    out
}
