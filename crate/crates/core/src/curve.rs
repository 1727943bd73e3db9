//! Radius-versus-time curves and the identifiers of the methods producing them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Solution or approximation method that generated a curve.
///
/// The string forms returned by [`MethodId::name`] are stable and are used
/// as CSV column headers and CLI arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodId {
    /// Exact quasi-stationary implicit solution.
    #[serde(rename = "exact")]
    ExactQS,
    /// Quasi-steady-state formula `sqrt(1 - 2 eps t)`.
    #[serde(rename = "qss")]
    Qss,
    /// Planar transient formula `1 - 2 eps sqrt(t)`.
    SmallTime,
    /// Sum of the steady and planar terms.
    Intuitive,
    /// Closed form from the uncorrected boundary-fitted mapping.
    #[serde(rename = "duda")]
    DudaVrentas,
    /// Weighted blend of [`MethodId::DudaVrentas`] and [`MethodId::Intuitive`].
    Blended,
    /// Adaptive Runge-Kutta integration of the radius ODE.
    #[serde(rename = "ode")]
    OdeOracle,
    /// Moving-boundary PDE solution.
    #[serde(rename = "pde")]
    PdeReference,
}

impl MethodId {
    pub const ALL: [MethodId; 8] = [
        MethodId::ExactQS,
        MethodId::Qss,
        MethodId::SmallTime,
        MethodId::Intuitive,
        MethodId::DudaVrentas,
        MethodId::Blended,
        MethodId::OdeOracle,
        MethodId::PdeReference,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            MethodId::ExactQS => "exact",
            MethodId::Qss => "qss",
            MethodId::SmallTime => "small-time",
            MethodId::Intuitive => "intuitive",
            MethodId::DudaVrentas => "duda",
            MethodId::Blended => "blended",
            MethodId::OdeOracle => "ode",
            MethodId::PdeReference => "pde",
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MethodId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_owned()))
    }
}

/// How a curve was generated.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub samples: usize,
    /// Free-form description of the sampling grid.
    pub grid: String,
    /// Named tolerances used while generating the curve.
    pub tolerances: Vec<(String, f64)>,
}

/// Ordered `(t, R)` samples in dimensionless units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusCurve {
    pub method: MethodId,
    pub epsilon: f64,
    pub samples: Vec<(f64, f64)>,
    pub metadata: CurveMetadata,
}

impl RadiusCurve {
    pub fn new(method: MethodId, epsilon: f64, samples: Vec<(f64, f64)>, grid: impl Into<String>) -> Self {
        let metadata = CurveMetadata {
            samples: samples.len(),
            grid: grid.into(),
            tolerances: Vec::new(),
        };
        RadiusCurve {
            method,
            epsilon,
            samples,
            metadata,
        }
    }

    pub fn with_tolerance(mut self, name: &str, value: f64) -> Self {
        self.metadata.tolerances.push((name.to_owned(), value));
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|&(t, _)| t)
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|&(_, r)| r)
    }

    pub fn last(&self) -> Option<(f64, f64)> {
        self.samples.last().copied()
    }

    /// Time span covered by the samples.
    pub fn span(&self) -> Option<(f64, f64)> {
        Some((self.samples.first()?.0, self.samples.last()?.0))
    }

    /// Piecewise-linear interpolation of the samples, `None` outside the span.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        let (first, last) = self.span()?;
        if !(first..=last).contains(&t) {
            return None;
        }
        let i = self.samples.partition_point(|&(ti, _)| ti < t);
        if i == 0 {
            return Some(self.samples[0].1);
        }
        let (t1, r1) = self.samples[i];
        let (t0, r0) = self.samples[i - 1];
        if t1 == t || t1 == t0 {
            return Some(r1);
        }
        Some(r0 + (r1 - r0) * (t - t0) / (t1 - t0))
    }

    /// True when sample times increase strictly.
    pub fn is_strictly_increasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].0 > w[0].0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in MethodId::ALL {
            assert_eq!(m.name().parse::<MethodId>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!(matches!("fast".parse::<MethodId>(), Err(Error::UnknownMethod(_))));
    }

    #[test]
    fn interpolation_is_linear_between_samples() {
        let c = RadiusCurve::new(MethodId::Qss, 0.1, vec![(0.0, 1.0), (1.0, 0.5), (3.0, 0.1)], "test");
        assert_eq!(c.interpolate(0.5), Some(0.75));
        assert!((c.interpolate(2.0).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(c.interpolate(3.0), Some(0.1));
        assert_eq!(c.interpolate(3.5), None);
        assert!(c.is_strictly_increasing());
    }
}
