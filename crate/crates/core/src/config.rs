//! Run parameters shared by every part of the simulator.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which gauge-field operator is inserted before the walk step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    /// Plain walk, no phase operator at all.
    None,
    /// Position- and spin-dependent phase `e^{±iφx}`.
    SpinPosition,
    /// Position-only ("electric") phase `e^{iφx}`.
    Electric,
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "off" => Ok(FieldKind::None),
            "b" | "spin_position" | "spin-position" => Ok(FieldKind::SpinPosition),
            "e" | "electric" => Ok(FieldKind::Electric),
            other => Err(Error::Parse(format!(
                "unknown field kind `{other}` (expected none|b|e)"
            ))),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::None => "none",
            FieldKind::SpinPosition => "b",
            FieldKind::Electric => "e",
        })
    }
}

/// Immutable parameters of a walk run.
///
/// The field magnitude is never stored: it is always `φ = 2πq/d`, which keeps
/// the electric phase single-valued on the cycle for integer `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub d: usize,
    pub theta: f64,
    pub q: u32,
    pub r: f64,
    pub field: FieldKind,
    pub steps: usize,
    pub realizations: usize,
    pub master_seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            d: 501,
            theta: PI / 4.0,
            q: 1,
            r: 0.9,
            field: FieldKind::Electric,
            steps: 400,
            realizations: 1000,
            master_seed: 0,
        }
    }
}

impl WalkConfig {
    pub fn phi(&self) -> f64 {
        2.0 * PI * f64::from(self.q) / self.d as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::domain(format!(
                "cycle length d must be >= 2, got {}",
                self.d
            )));
        }
        if !(0.0..=1.0).contains(&self.r) {
            return Err(Error::domain(format!(
                "r must lie in [0, 1], got {}",
                self.r
            )));
        }
        if !self.theta.is_finite() {
            return Err(Error::domain("theta must be finite"));
        }
        if self.realizations == 0 {
            return Err(Error::domain("realizations must be >= 1"));
        }
        Ok(())
    }

    pub fn with_field(mut self, field: FieldKind, q: u32, r: f64) -> Self {
        self.field = field;
        self.q = q;
        self.r = r;
        self
    }
}

/// Parses a coin angle: `pi`, `pi/<n>`, `<k>pi/<n>` or a plain radian value.
pub fn parse_theta(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    if let Some(idx) = t.find("pi") {
        let (num, rest) = t.split_at(idx);
        let rest = &rest[2..];
        let k = match num.trim_end_matches('*') {
            "" => 1.0,
            "-" => -1.0,
            n => n
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad theta `{s}`")))?,
        };
        let div = match rest {
            "" => 1.0,
            r => r
                .strip_prefix('/')
                .and_then(|n| n.parse::<f64>().ok())
                .ok_or_else(|| Error::Parse(format!("bad theta `{s}`")))?,
        };
        return Ok(k * PI / div);
    }
    t.parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad theta `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_is_derived_from_q_and_d() {
        let cfg = WalkConfig {
            d: 8,
            q: 1,
            ..WalkConfig::default()
        };
        assert_eq!(cfg.phi(), 2.0 * PI / 8.0);
        let cfg = WalkConfig { q: 0, ..cfg };
        assert_eq!(cfg.phi(), 0.0);
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let ok = WalkConfig::default();
        assert!(ok.validate().is_ok());
        assert!(WalkConfig { d: 1, ..ok.clone() }.validate().is_err());
        assert!(WalkConfig {
            r: 1.5,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(WalkConfig {
            r: -0.1,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(WalkConfig {
            realizations: 0,
            ..ok
        }
        .validate()
        .is_err());
    }

    #[test]
    fn theta_strings() {
        assert_eq!(parse_theta("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_theta("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_theta("pi").unwrap(), PI);
        assert_eq!(parse_theta("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_theta("0.25").unwrap(), 0.25);
        assert!(parse_theta("tau").is_err());
        assert!(parse_theta("pi/x").is_err());
    }

    #[test]
    fn field_names_round_trip() {
        for f in [
            FieldKind::None,
            FieldKind::SpinPosition,
            FieldKind::Electric,
        ] {
            assert_eq!(f.to_string().parse::<FieldKind>().unwrap(), f);
        }
    }
}
