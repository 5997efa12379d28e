use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Device constants in angular units (rad/s) and seconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "DeviceParamsFile", try_from = "DeviceParamsFile")]
pub struct DeviceParams {
    pub zeeman_mean: f64,
    pub zeeman_difference: f64,
    pub exchange_max: f64,
    pub drive_left: f64,
    pub drive_right: f64,
    /// Dephasing times of qubit 1 and qubit 2.
    pub t2: [f64; 2],
}

impl Default for DeviceParams {
    fn default() -> Self {
        Self {
            zeeman_mean: TAU * 20.64e9,
            zeeman_difference: TAU * 214e6,
            exchange_max: TAU * 19.7e6,
            drive_left: TAU * 5e6,
            drive_right: TAU * 55e6,
            t2: [120e-6, 61e-6],
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("zeeman_mean", self.zeeman_mean),
            ("zeeman_difference", self.zeeman_difference),
            ("exchange_max", self.exchange_max),
            ("drive_left", self.drive_left),
            ("drive_right", self.drive_right),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} is not finite")));
            }
        }
        if !(self.exchange_max > 0.0) {
            return Err(Error::InvalidParameter("exchange_max must be positive".into()));
        }
        if !self.t2.iter().all(|&t| t > 0.0) {
            return Err(Error::InvalidParameter(format!("dephasing times must be positive, got {:?}", self.t2)));
        }
        Ok(())
    }

    /// Lower and upper qubit carriers E_z -/+ dE_z/2.
    pub fn qubit_carriers(&self) -> (f64, f64) {
        (self.zeeman_mean - self.zeeman_difference / 2.0, self.zeeman_mean + self.zeeman_difference / 2.0)
    }

    /// Pure-dephasing rates 1/T2.
    pub fn dephasing_rates(&self) -> [f64; 2] {
        self.t2.map(|t| 1.0 / t)
    }
}

/// On-disk form: ordinary frequencies in Hz, times in seconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParamsFile {
    pub zeeman_mean_hz: f64,
    pub zeeman_difference_hz: f64,
    pub exchange_max_hz: f64,
    pub drive_left_hz: f64,
    pub drive_right_hz: f64,
    pub t2_qubit1_s: f64,
    pub t2_qubit2_s: f64,
}

impl From<DeviceParams> for DeviceParamsFile {
    fn from(p: DeviceParams) -> Self {
        Self {
            zeeman_mean_hz: p.zeeman_mean / TAU,
            zeeman_difference_hz: p.zeeman_difference / TAU,
            exchange_max_hz: p.exchange_max / TAU,
            drive_left_hz: p.drive_left / TAU,
            drive_right_hz: p.drive_right / TAU,
            t2_qubit1_s: p.t2[0],
            t2_qubit2_s: p.t2[1],
        }
    }
}

impl Default for DeviceParamsFile {
    fn default() -> Self {
        DeviceParams::default().into()
    }
}

impl TryFrom<DeviceParamsFile> for DeviceParams {
    type Error = Error;

    fn try_from(f: DeviceParamsFile) -> Result<Self> {
        let p = DeviceParams {
            zeeman_mean: f.zeeman_mean_hz * TAU,
            zeeman_difference: f.zeeman_difference_hz * TAU,
            exchange_max: f.exchange_max_hz * TAU,
            drive_left: f.drive_left_hz * TAU,
            drive_right: f.drive_right_hz * TAU,
            t2: [f.t2_qubit1_s, f.t2_qubit2_s],
        };
        p.validate()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_in_hertz() {
        let p = DeviceParams::default();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"zeeman_difference_hz\":214000000"), "{s}");
        let back: DeviceParams = serde_json::from_str(&s).unwrap();
        assert!((back.zeeman_mean - p.zeeman_mean).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_files() {
        let bad = r#"{"zeeman_mean_hz":1,"zeeman_difference_hz":1,"exchange_max_hz":1,"drive_left_hz":0,"drive_right_hz":0,"t2_qubit1_s":-1,"t2_qubit2_s":1}"#;
        assert!(serde_json::from_str::<DeviceParams>(bad).is_err());
        let extra = r#"{"zeeman_mean_hz":1,"zeeman_difference_hz":1,"exchange_max_hz":1,"drive_left_hz":0,"drive_right_hz":0,"t2_qubit1_s":1,"t2_qubit2_s":1,"x":2}"#;
        assert!(serde_json::from_str::<DeviceParams>(extra).is_err());
    }

    #[test]
    fn carriers_straddle_mean() {
        let (w1, w2) = DeviceParams::default().qubit_carriers();
        assert!(w2 > w1);
        assert!(((w2 - w1) / TAU - 214e6).abs() < 1e-3);
    }
}
