use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-gate depolarizing noise applied during inference.
///
/// Every gate is followed by a depolarizing channel on exactly the qubits it
/// touched: probability `scale * p1` for single-qubit gates and
/// `scale * p2` for two-qubit gates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub p1: f64,
    pub p2: f64,
    pub scale: f64,
    /// Number of measurement shots per expectation; `None` gives exact values.
    #[serde(default)]
    pub shots: Option<u32>,
}

impl NoiseConfig {
    pub const NOMINAL_P1: f64 = 0.001;
    pub const NOMINAL_P2: f64 = 0.01;

    pub fn new(p1: f64, p2: f64, scale: f64, shots: Option<u32>) -> Result<Self> {
        let cfg = NoiseConfig {
            p1,
            p2,
            scale,
            shots,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Nominal gate error rates (0.1% / 1%) multiplied by `scale`.
    pub fn nominal(scale: f64) -> Result<Self> {
        Self::new(Self::NOMINAL_P1, Self::NOMINAL_P2, scale, None)
    }

    pub fn with_scale(self, scale: f64) -> Result<Self> {
        Self::new(self.p1, self.p2, scale, self.shots)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Noise(format!("{name} = {p} outside [0, 1]")));
            }
        }
        if !(self.scale.is_finite() && self.scale >= 0.0) {
            return Err(Error::Noise(format!("scale {} must be nonnegative", self.scale)));
        }
        for (name, p) in [("p1", self.effective_p1()), ("p2", self.effective_p2())] {
            if p > 1.0 {
                return Err(Error::Noise(format!(
                    "effective {name} = {p} exceeds 1 at scale {}",
                    self.scale
                )));
            }
        }
        if self.shots == Some(0) {
            return Err(Error::Noise("shots must be positive".into()));
        }
        Ok(())
    }

    pub fn effective_p1(&self) -> f64 {
        self.scale * self.p1
    }

    pub fn effective_p2(&self) -> f64 {
        self.scale * self.p2
    }

    /// Channel probability for a gate acting on `arity` qubits.
    pub fn probability_for(&self, arity: usize) -> f64 {
        if arity == 1 {
            self.effective_p1()
        } else {
            self.effective_p2()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(NoiseConfig::nominal(4.0).is_ok());
        assert!(NoiseConfig::new(0.5, 0.5, 3.0, None).is_err());
        assert!(NoiseConfig::new(-0.1, 0.0, 1.0, None).is_err());
        assert!(NoiseConfig::new(0.1, 1.1, 0.5, None).is_err());
        assert!(NoiseConfig::new(0.1, 0.1, -1.0, None).is_err());
        assert!(NoiseConfig::new(0.1, 0.1, 1.0, Some(0)).is_err());
        assert!(NoiseConfig::new(1.0, 1.0, 1.0, Some(10)).is_ok());
    }

    #[test]
    fn effective_rates() {
        let n = NoiseConfig::nominal(2.0).unwrap();
        assert!((n.probability_for(1) - 0.002).abs() < 1e-15);
        assert!((n.probability_for(2) - 0.02).abs() < 1e-15);
    }
}
