//! Physical constants and unit conversions.

/// Joules in one kilowatt-hour.
pub const JOULES_PER_KWH: f64 = 3.6e6;

/// Kilowatt-hours in one gigawatt-hour.
pub const KWH_PER_GWH: f64 = 1.0e6;

/// Square meters in one square mile (1 mile = 1609.344 m exactly).
pub const M2_PER_MI2: f64 = 2_589_988.110_336;

/// Square kilometers in one square mile.
///
/// Written out rather than derived from [`M2_PER_MI2`] so the conversion is a
/// single correctly rounded multiplication.
pub const KM2_PER_MI2: f64 = 2.589_988_110_336;

/// Square meters in one square kilometer.
pub const M2_PER_KM2: f64 = 1.0e6;

/// Constants that parameterize the physics. Conversion factors are module
/// constants and cannot be overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalConstants {
    /// Density of water, kg/m³.
    pub rho_water: f64,
    /// Gravitational acceleration, m/s².
    pub g: f64,
    /// Mean radius of the spherical earth model, meters.
    pub earth_radius_m: f64,
}

impl PhysicalConstants {
    /// Water density used unless configured otherwise.
    pub const DEFAULT_RHO_WATER: f64 = 1000.0;
    /// Gravitational acceleration used unless configured otherwise.
    pub const DEFAULT_G: f64 = 9.81;
    /// Mean earth radius used unless configured otherwise.
    pub const DEFAULT_EARTH_RADIUS_M: f64 = 6_371_008.8;
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            rho_water: Self::DEFAULT_RHO_WATER,
            g: Self::DEFAULT_G,
            earth_radius_m: Self::DEFAULT_EARTH_RADIUS_M,
        }
    }
}
