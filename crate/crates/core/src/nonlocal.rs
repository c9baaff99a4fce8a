//! The nonlocal diffusion coefficient `a(u) = (int u^2)^gamma` and the
//! guards that flag when a run leaves the regime `m <= a <= M`.

use std::fmt;

use crate::assembly::{l2_norm_sq, FieldVector};
use crate::error::{Error, Result};
use crate::sparse::SparseSymMatrix;

pub const DEFAULT_FLOOR: f64 = 1e-12;
pub const DEFAULT_CEILING: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GuardStatus {
    Ok,
    BelowFloor,
    AboveCeiling,
    /// Squared norm exactly zero with `gamma < 0`; the field is frozen at zero.
    Degenerate,
}

impl fmt::Display for GuardStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GuardStatus::Ok => "ok",
            GuardStatus::BelowFloor => "below-floor",
            GuardStatus::AboveCeiling => "above-ceiling",
            GuardStatus::Degenerate => "degenerate",
        })
    }
}

/// What to do when a guard trips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardPolicy {
    Warn,
    Abort,
}

impl std::str::FromStr for GuardPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "warn" => Ok(Self::Warn),
            "abort" => Ok(Self::Abort),
            other => Err(Error::Config(format!("unknown guard policy `{other}`"))),
        }
    }
}

impl fmt::Display for GuardPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GuardPolicy::Warn => "warn",
            GuardPolicy::Abort => "abort",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlocalCoefficient {
    pub gamma: f64,
    pub floor: f64,
    pub ceiling: f64,
    /// Treat `a = 0` (zero field with `gamma > 0`) as an error.
    pub strict_positivity: bool,
}

impl NonlocalCoefficient {
    pub fn new(gamma: f64) -> Self {
        Self {
            gamma,
            floor: DEFAULT_FLOOR,
            ceiling: DEFAULT_CEILING,
            strict_positivity: false,
        }
    }

    pub fn with_guards(gamma: f64, floor: f64, ceiling: f64) -> Result<Self> {
        if !(floor > 0.0) || !(ceiling > floor) {
            return Err(Error::Config(format!(
                "guards need 0 < floor < ceiling, got floor = {floor}, ceiling = {ceiling}"
            )));
        }
        Ok(Self {
            floor,
            ceiling,
            ..Self::new(gamma)
        })
    }

    /// `s^gamma` for a squared norm `s`.
    pub fn value_from_energy(&self, s: f64) -> Result<f64> {
        let degenerate = Error::DegenerateCoefficient {
            energy: s,
            gamma: self.gamma,
        };
        if !s.is_finite() || s < 0.0 {
            return Err(degenerate);
        }
        if s == 0.0 && self.gamma != 0.0 && (self.gamma < 0.0 || self.strict_positivity) {
            return Err(degenerate);
        }
        Ok(s.powf(self.gamma))
    }

    /// `(U^T M U)^gamma`.
    pub fn evaluate(&self, u: &FieldVector, mass: &SparseSymMatrix) -> Result<f64> {
        if u.coefficients().iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteData {
                x: f64::NAN,
                y: f64::NAN,
            });
        }
        self.value_from_energy(l2_norm_sq(u, mass)?)
    }

    pub fn check_guards(&self, value: f64) -> GuardStatus {
        if value < self.floor {
            GuardStatus::BelowFloor
        } else if value > self.ceiling {
            GuardStatus::AboveCeiling
        } else {
            GuardStatus::Ok
        }
    }

    /// `|a(V) - a(W)| / ||V - W||_M`.
    pub fn lipschitz_witness(&self, v: &FieldVector, w: &FieldVector, mass: &SparseSymMatrix) -> Result<f64> {
        let diff = v.combine(1.0, w, -1.0);
        let dist = l2_norm_sq(&diff, mass)?.sqrt();
        if dist == 0.0 {
            return Err(Error::IdenticalInputs);
        }
        Ok((self.evaluate(v, mass)? - self.evaluate(w, mass)?).abs() / dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_values() {
        assert_eq!(NonlocalCoefficient::new(0.7).value_from_energy(1.0).unwrap(), 1.0);
        assert_eq!(NonlocalCoefficient::new(0.0).value_from_energy(0.3).unwrap(), 1.0);
        assert_eq!(NonlocalCoefficient::new(0.0).value_from_energy(0.0).unwrap(), 1.0);
        assert!((NonlocalCoefficient::new(-0.5).value_from_energy(0.25).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_energy() {
        assert!(matches!(
            NonlocalCoefficient::new(-1.0 / 3.0).value_from_energy(0.0),
            Err(Error::DegenerateCoefficient { .. })
        ));
        assert_eq!(NonlocalCoefficient::new(0.5).value_from_energy(0.0).unwrap(), 0.0);
        let strict = NonlocalCoefficient {
            strict_positivity: true,
            ..NonlocalCoefficient::new(0.5)
        };
        assert!(strict.value_from_energy(0.0).is_err());
    }

    #[test]
    fn guard_classification() {
        let c = NonlocalCoefficient::new(1.0);
        assert_eq!(c.check_guards(1.0), GuardStatus::Ok);
        assert_eq!(c.check_guards(1e-15), GuardStatus::BelowFloor);
        assert_eq!(c.check_guards(1e13), GuardStatus::AboveCeiling);
        assert!(NonlocalCoefficient::with_guards(1.0, 0.0, 1.0).is_err());
        assert!(NonlocalCoefficient::with_guards(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn monotone_in_energy() {
        let up = NonlocalCoefficient::new(0.5);
        let down = NonlocalCoefficient::new(-1.0 / 3.0);
        let samples = [1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3];
        for pair in samples.windows(2) {
            assert!(up.value_from_energy(pair[0]).unwrap() < up.value_from_energy(pair[1]).unwrap());
            assert!(down.value_from_energy(pair[0]).unwrap() > down.value_from_energy(pair[1]).unwrap());
        }
    }
}
