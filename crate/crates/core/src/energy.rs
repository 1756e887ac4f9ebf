//! Upper-reservoir designation and gross potential energy.
//!
//! `E[J] = V * rho * g * h`, `E[kWh] = E[J] / 3.6e6`, with `V` the volume of
//! the upper reservoir (area × average depth) and `h` the difference of the
//! two surface elevations.

use alloc::string::String;
use core::fmt;

use crate::catalog::ReservoirRecord;
use crate::constants::{PhysicalConstants, JOULES_PER_KWH, KWH_PER_GWH};

/// One energy quantity in three units.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyResult {
    /// Joules.
    pub energy_j: f64,
    /// Kilowatt-hours.
    pub energy_kwh: f64,
    /// Gigawatt-hours.
    pub energy_gwh: f64,
}

impl EnergyResult {
    /// Derives kWh and GWh from joules.
    pub fn from_joules(energy_j: f64) -> Self {
        let energy_kwh = energy_j / JOULES_PER_KWH;
        Self {
            energy_j,
            energy_kwh,
            energy_gwh: energy_kwh / KWH_PER_GWH,
        }
    }
}

/// Invalid inputs to [`potential_energy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyError {
    /// Volume negative or NaN.
    NegativeVolume(f64),
    /// Head negative or NaN.
    NegativeHead(f64),
}

impl fmt::Display for EnergyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegativeVolume(v) => write!(f, "volume {v} m³ must be >= 0"),
            Self::NegativeHead(h) => write!(f, "head {h} m must be >= 0"),
        }
    }
}

impl core::error::Error for EnergyError {}

/// Gross potential energy of `volume_m3` of water dropped through `head_m`.
pub fn potential_energy(
    volume_m3: f64,
    head_m: f64,
    constants: &PhysicalConstants,
) -> Result<EnergyResult, EnergyError> {
    if !(volume_m3 >= 0.0) {
        return Err(EnergyError::NegativeVolume(volume_m3));
    }
    if !(head_m >= 0.0) {
        return Err(EnergyError::NegativeHead(head_m));
    }
    Ok(EnergyResult::from_joules(
        volume_m3 * constants.rho_water * constants.g * head_m,
    ))
}

/// Which reservoir of a pair is upper, and by how much.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Designation {
    /// Reservoir with the higher surface elevation.
    pub upper_id: String,
    /// The other reservoir.
    pub lower_id: String,
    /// Surface elevation difference, m (> 0).
    pub head_m: f64,
}

/// The record with the strictly higher surface elevation is upper. Equal
/// elevations give `None`.
pub fn designate_upper(a: &ReservoirRecord, b: &ReservoirRecord) -> Option<Designation> {
    let (upper, lower) = if a.surface_elevation_m > b.surface_elevation_m {
        (a, b)
    } else if b.surface_elevation_m > a.surface_elevation_m {
        (b, a)
    } else {
        return None;
    };
    Some(Designation {
        upper_id: upper.id.clone(),
        lower_id: lower.id.clone(),
        head_m: upper.surface_elevation_m - lower.surface_elevation_m,
    })
}

/// Which volume feeds the energy formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum VolumeBasis {
    /// The upper reservoir's full volume.
    #[default]
    Upper,
    /// The smaller of the two volumes.
    Smaller,
}

/// Knobs for [`pair_energy`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyOptions {
    /// Density, gravity and earth radius.
    pub constants: PhysicalConstants,
    /// Volume selection, upper reservoir by default.
    pub volume_basis: VolumeBasis,
    /// Multiplier on gross energy, 1.0 by default.
    pub efficiency: f64,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self {
            constants: PhysicalConstants::default(),
            volume_basis: VolumeBasis::Upper,
            efficiency: 1.0,
        }
    }
}

/// Designates the upper reservoir and computes the pair's stored energy.
/// Argument order does not matter.
pub fn pair_energy(
    a: &ReservoirRecord,
    b: &ReservoirRecord,
    options: &EnergyOptions,
) -> Option<(Designation, EnergyResult)> {
    let designation = designate_upper(a, b)?;
    let (upper, lower) = if designation.upper_id == a.id { (a, b) } else { (b, a) };
    let volume_m3 = match options.volume_basis {
        VolumeBasis::Upper => upper.volume_m3,
        VolumeBasis::Smaller => upper.volume_m3.min(lower.volume_m3),
    };
    let gross = potential_energy(volume_m3, designation.head_m, &options.constants)
        .expect("record volumes and designated heads are positive");
    let energy = if options.efficiency == 1.0 {
        gross
    } else {
        EnergyResult::from_joules(gross.energy_j * options.efficiency)
    };
    Some((designation, energy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, area: f64, surface: f64, bottom: f64) -> ReservoirRecord {
        ReservoirRecord::new(id, id, 0.0, 0.0, area, surface, bottom).unwrap()
    }

    #[test]
    fn worked_examples() {
        let c = PhysicalConstants::default();
        let zero = potential_energy(0.0, 42.0, &c).unwrap();
        assert_eq!((zero.energy_j, zero.energy_kwh, zero.energy_gwh), (0.0, 0.0, 0.0));
        // 3.6e5 * 1000 * 9.81 / 3.6e6 = 981
        let e = potential_energy(3.6e5, 1.0, &c).unwrap();
        assert_eq!(e.energy_j, 3.5316e9);
        assert_eq!(e.energy_kwh, 981.0);
        // 1e6 * 1000 * 9.81 * 100 = 9.81e11 J = 272_500 kWh
        let e = potential_energy(1.0e6, 100.0, &c).unwrap();
        assert_eq!((e.energy_j, e.energy_kwh, e.energy_gwh), (9.81e11, 272_500.0, 0.2725));
    }

    #[test]
    fn negative_inputs_rejected() {
        let c = PhysicalConstants::default();
        assert_eq!(potential_energy(-1.0, 1.0, &c), Err(EnergyError::NegativeVolume(-1.0)));
        assert_eq!(potential_energy(1.0, -1.0, &c), Err(EnergyError::NegativeHead(-1.0)));
        assert!(potential_energy(f64::NAN, 1.0, &c).is_err());
    }

    #[test]
    fn designation_examples() {
        let hi = rec("hi", 1.0, 200.0, 150.0);
        let lo = rec("lo", 1.0, 150.0, 100.0);
        let d = designate_upper(&hi, &lo).unwrap();
        assert_eq!((d.upper_id.as_str(), d.lower_id.as_str(), d.head_m), ("hi", "lo", 50.0));
        assert_eq!(designate_upper(&lo, &hi), Some(d));
        let level = rec("lv", 1.0, 150.0, 120.0);
        assert_eq!(designate_upper(&lo, &level), None);
    }

    #[test]
    fn pair_energy_uses_upper_volume() {
        // upper: 1 km2 * 50 m = 5e7 m3, head 20 m -> 9.81e12 J = 2.725 GWh
        let upper = rec("u", 1.0, 120.0, 70.0);
        let lower = rec("l", 0.1, 100.0, 99.0);
        let opts = EnergyOptions::default();
        let (d, e) = pair_energy(&upper, &lower, &opts).unwrap();
        assert_eq!(d.upper_id, "u");
        assert_eq!((e.energy_j, e.energy_kwh, e.energy_gwh), (9.81e12, 2_725_000.0, 2.725));
        assert_eq!(pair_energy(&lower, &upper, &opts), Some((d, e)));
        assert_eq!(pair_energy(&upper, &rec("x", 1.0, 120.0, 1.0), &opts), None);
    }

    #[test]
    fn smaller_volume_and_efficiency_options() {
        let upper = rec("u", 1.0, 120.0, 70.0);
        let lower = rec("l", 0.1, 100.0, 99.0);
        let opts = EnergyOptions {
            volume_basis: VolumeBasis::Smaller,
            efficiency: 0.5,
            ..EnergyOptions::default()
        };
        let (_, e) = pair_energy(&upper, &lower, &opts).unwrap();
        // min volume 1e5 m3; 1e5 * 1000 * 9.81 * 20 * 0.5
        assert_eq!(e.energy_j, 1.0e5 * 1000.0 * 9.81 * 20.0 * 0.5);
    }

    proptest::proptest! {
        #[test]
        fn linearity(v in 0.0f64..1e12, h in 0.0f64..2000.0) {
            let c = PhysicalConstants::default();
            let base = potential_energy(v, h, &c).unwrap().energy_j;
            for k in [0.5, 2.0, 10.0] {
                let kv = potential_energy(k * v, h, &c).unwrap().energy_j;
                let kh = potential_energy(v, k * h, &c).unwrap().energy_j;
                let want = k * base;
                let tol = 1e-12 * want.abs();
                proptest::prop_assert!((kv - want).abs() <= tol);
                proptest::prop_assert!((kh - want).abs() <= tol);
            }
        }

        #[test]
        fn unit_chain(v in 0.0f64..1e12, h in 0.0f64..2000.0) {
            let e = potential_energy(v, h, &PhysicalConstants::default()).unwrap();
            proptest::prop_assert!((e.energy_gwh * 3.6e12 - e.energy_j).abs() <= 1e-9 * e.energy_j);
        }

        #[test]
        fn designation_invariant_under_common_offset(
            qa in -400i64..12_000, qb in -400i64..12_000, qoff in -4_000i64..4_000,
        ) {
            // Quarter-meter grid keeps every sum and difference exact.
            let (sa, sb, off) = (qa as f64 / 4.0, qb as f64 / 4.0, qoff as f64 / 4.0);
            let d1 = designate_upper(&rec("a", 1.0, sa, sa - 5.0), &rec("b", 1.0, sb, sb - 5.0));
            let d2 = designate_upper(
                &rec("a", 1.0, sa + off, sa + off - 5.0),
                &rec("b", 1.0, sb + off, sb + off - 5.0),
            );
            proptest::prop_assert_eq!(
                d1.map(|d| (d.upper_id, d.head_m)),
                d2.map(|d| (d.upper_id, d.head_m))
            );
        }
    }
}
