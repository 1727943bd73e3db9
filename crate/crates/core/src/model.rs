//! Physical parameters, scalings and the regime of the dimensionless problem.
//!
//! Lengths are measured in units of the initial radius `R0` and time in units
//! of `R0^2 / (pi D)`. The whole reduced model then depends on the single
//! parameter
//!
//! ```text
//! eps = (Cs - C0) / (pi rho_p (1 - Cs / rho_m))
//! ```
//!
//! whose sign and magnitude select the branch of the exact solution.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::RadiusCurve;
use crate::error::{finite, Error, Result};

/// Dimensional material and transport parameters, all in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScenario {
    /// Solubility `Cs` (kg/m^3).
    pub solubility: f64,
    /// Far-field initial concentration `C0` (kg/m^3).
    pub initial_concentration: f64,
    /// Particle density (kg/m^3).
    pub particle_density: f64,
    /// Medium density (kg/m^3).
    pub medium_density: f64,
    /// Diffusivity (m^2/s).
    pub diffusivity: f64,
    /// Initial particle radius (m).
    pub initial_radius: f64,
}

impl PhysicalScenario {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("solubility", self.solubility),
            ("initial_concentration", self.initial_concentration),
            ("particle_density", self.particle_density),
            ("medium_density", self.medium_density),
            ("diffusivity", self.diffusivity),
            ("initial_radius", self.initial_radius),
        ];
        for (name, value) in fields {
            finite(name, value)?;
        }
        for (name, value) in [
            ("particle_density", self.particle_density),
            ("medium_density", self.medium_density),
            ("diffusivity", self.diffusivity),
            ("initial_radius", self.initial_radius),
        ] {
            if value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be positive",
                });
            }
        }
        for (name, value) in [
            ("solubility", self.solubility),
            ("initial_concentration", self.initial_concentration),
        ] {
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be non-negative",
                });
            }
        }
        if self.solubility >= self.medium_density {
            return Err(Error::InvalidParameter {
                name: "solubility",
                value: self.solubility,
                reason: "must be below the medium density",
            });
        }
        Ok(())
    }

    /// `R0^2 / (pi D)` in seconds.
    pub fn time_scale(&self) -> f64 {
        self.initial_radius * self.initial_radius / (PI * self.diffusivity)
    }

    pub fn length_scale(&self) -> f64 {
        self.initial_radius
    }
}

/// Branch of the exact solution selected by `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `eps == 0`: the radius never changes.
    Static,
    /// `0 < eps < 2`.
    Dissolution,
    /// `eps < 0`: precipitation growth in a supersaturated medium.
    Growth,
    /// `eps == 2` exactly.
    Critical,
    /// `eps > 2`.
    Supercritical,
}

impl Regime {
    pub const fn name(self) -> &'static str {
        match self {
            Regime::Static => "static",
            Regime::Dissolution => "dissolution",
            Regime::Growth => "growth",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        }
    }

    /// Whether the particle reaches zero radius in finite time.
    pub const fn dissolves(self) -> bool {
        matches!(
            self,
            Regime::Dissolution | Regime::Critical | Regime::Supercritical
        )
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_regime(epsilon: f64) -> Result<Regime> {
    let e = finite("epsilon", epsilon)?;
    Ok(if e == 0.0 {
        Regime::Static
    } else if e < 0.0 {
        Regime::Growth
    } else if e < 2.0 {
        Regime::Dissolution
    } else if e == 2.0 {
        Regime::Critical
    } else {
        Regime::Supercritical
    })
}

/// The reduced problem: `eps`, its regime and the scales used to form it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessProblem {
    pub epsilon: f64,
    pub regime: Regime,
    /// Seconds per unit of dimensionless time.
    pub time_scale: f64,
    /// Metres per unit of dimensionless length.
    pub length_scale: f64,
}

impl DimensionlessProblem {
    /// A problem given directly in dimensionless form (unit scales).
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        Ok(DimensionlessProblem {
            epsilon,
            regime: classify_regime(epsilon)?,
            time_scale: 1.0,
            length_scale: 1.0,
        })
    }

    /// `sqrt(eps / (2 - eps))`, defined for dissolution.
    pub fn eps_hat(&self) -> Option<f64> {
        (self.regime == Regime::Dissolution).then(|| (self.epsilon / (2.0 - self.epsilon)).sqrt())
    }

    /// `sqrt(-eps / (2 - eps))` for growth, `sqrt(eps / (eps - 2))` above critical.
    pub fn eps_tilde(&self) -> Option<f64> {
        let e = self.epsilon;
        match self.regime {
            Regime::Growth => Some((-e / (2.0 - e)).sqrt()),
            Regime::Supercritical => Some((e / (e - 2.0)).sqrt()),
            _ => None,
        }
    }
}

pub fn nondimensionalize(scenario: &PhysicalScenario) -> Result<DimensionlessProblem> {
    scenario.validate()?;
    let s = scenario;
    let epsilon = (s.solubility - s.initial_concentration)
        / (PI * s.particle_density * (1.0 - s.solubility / s.medium_density));
    Ok(DimensionlessProblem {
        epsilon,
        regime: classify_regime(epsilon)?,
        time_scale: s.time_scale(),
        length_scale: s.length_scale(),
    })
}

/// A curve in seconds and metres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionalCurve {
    pub epsilon: f64,
    /// `(time in s, radius in m)`.
    pub samples: Vec<(f64, f64)>,
}

pub fn redimensionalize(curve: &RadiusCurve, scenario: &PhysicalScenario) -> Result<DimensionalCurve> {
    let problem = nondimensionalize(scenario)?;
    if (curve.epsilon - problem.epsilon).abs() > 1e-12 {
        return Err(Error::EpsilonMismatch {
            curve: curve.epsilon,
            scenario: problem.epsilon,
        });
    }
    let samples = curve
        .samples
        .iter()
        .map(|&(t, r)| (t * problem.time_scale, r * problem.length_scale))
        .collect();
    Ok(DimensionalCurve {
        epsilon: problem.epsilon,
        samples,
    })
}

/// Inverse of [`redimensionalize`] for a single sample.
pub fn to_dimensionless(problem: &DimensionlessProblem, time_s: f64, radius_m: f64) -> (f64, f64) {
    (time_s / problem.time_scale, radius_m / problem.length_scale)
}
