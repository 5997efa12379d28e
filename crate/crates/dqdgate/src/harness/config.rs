use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::device_model::{DeviceParams, DeviceParamsFile};
use crate::dynamics::{Dephasing, DephasingForm, ErrorInjection, Integrator};
use crate::error::{Error, Result};
use crate::experiments::{FsimDesign, FsimPulse, SimulationOptions};
use crate::fidelity::FidelityConvention;
use crate::inverse_engineering::check_fsim_range;
use crate::pulse_designs::PolynomialLayout;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    FsimRect,
    FsimPoly,
    Bgate,
    FsimGeometric,
}

impl SchemeName {
    pub const ALL: [SchemeName; 4] = [Self::FsimRect, Self::FsimPoly, Self::Bgate, Self::FsimGeometric];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::FsimRect => "fsim_rect",
            Self::FsimPoly => "fsim_poly",
            Self::Bgate => "bgate",
            Self::FsimGeometric => "fsim_geometric",
        }
    }
}

impl fmt::Display for SchemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scheme '{s}'")))
    }
}

/// One experiment. Frequencies are plain Hz, times seconds, angles radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: SchemeName,
    pub swap_angle: f64,
    pub phase: f64,
    /// Gate time; when absent it follows from the device exchange limit.
    pub gate_time_s: Option<f64>,
    pub repetitions: Vec<u32>,
    pub eta: Vec<f64>,
    pub layout: PolynomialLayout,
    pub rabi_deltas: Vec<f64>,
    pub detuning_eps: Vec<f64>,
    /// Relative phases (phi1, phi2, phi3) of the |01>, |10>, |11> amplitudes.
    pub initial_phases: Vec<[f64; 3]>,
    pub rwa: bool,
    pub decoherence: bool,
    pub dephasing_form: DephasingForm,
    pub convention: FidelityConvention,
    pub grid_n: usize,
    pub integrator: Integrator,
    pub step_factor: f64,
    pub min_steps: usize,
    /// Samples per exported schedule or trajectory.
    pub sample_points: usize,
    pub trajectory: bool,
    pub device: DeviceParamsFile,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scheme: SchemeName::FsimRect,
            swap_angle: FRAC_PI_4,
            phase: FRAC_PI_2,
            gate_time_s: None,
            repetitions: vec![1],
            eta: vec![-1.0 / 3.0],
            layout: PolynomialLayout::Repeated,
            rabi_deltas: vec![0.0],
            detuning_eps: vec![0.0],
            initial_phases: vec![[0.0; 3]],
            rwa: false,
            decoherence: true,
            dephasing_form: DephasingForm::AsWritten,
            convention: FidelityConvention::Standard,
            grid_n: 40,
            integrator: Integrator::Magnus4,
            step_factor: 4.0,
            min_steps: 2000,
            sample_points: 2001,
            trajectory: false,
            device: DeviceParamsFile::default(),
            output_dir: PathBuf::from("out"),
            seed: 0,
        }
    }
}

fn nonempty<T>(v: &[T], what: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidParameter(format!("{what} must not be empty")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Overrides one key, dotted for nested fields (`device.exchange_max_hz`).
    /// The value is parsed as JSON and taken as a bare string when that fails.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        let mut doc = serde_json::to_value(&*self)?;
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        let mut slot = &mut doc;
        for part in key.split('.') {
            slot = slot
                .as_object_mut()
                .and_then(|o| o.get_mut(part))
                .ok_or_else(|| Error::InvalidParameter(format!("unknown config key '{key}'")))?;
        }
        *slot = value;
        *self = serde_json::from_value(doc)?;
        Ok(())
    }

    pub fn device_params(&self) -> Result<DeviceParams> {
        DeviceParams::try_from(self.device)
    }

    pub fn validate(&self) -> Result<()> {
        self.device_params()?;
        if self.scheme != SchemeName::Bgate {
            check_fsim_range(self.swap_angle, self.phase)?;
        }
        if let Some(t) = self.gate_time_s {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidParameter(format!("gate_time_s must be positive, got {t}")));
            }
        }
        nonempty(&self.repetitions, "repetitions")?;
        if self.repetitions.contains(&0) {
            return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
        }
        nonempty(&self.eta, "eta")?;
        if self.eta.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter("eta values must be finite".into()));
        }
        nonempty(&self.rabi_deltas, "rabi_deltas")?;
        nonempty(&self.detuning_eps, "detuning_eps")?;
        nonempty(&self.initial_phases, "initial_phases")?;
        for &d in &self.rabi_deltas {
            for &e in &self.detuning_eps {
                ErrorInjection::new(d, e)?;
            }
        }
        if self.initial_phases.iter().flatten().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("initial phases must be finite".into()));
        }
        if self.scheme == SchemeName::Bgate
            && (self.rabi_deltas.iter().any(|&d| d != 0.0) || self.detuning_eps.iter().any(|&e| e != 0.0))
        {
            return Err(Error::InvalidParameter("error injection is not supported for bgate".into()));
        }
        if self.grid_n == 0 {
            return Err(Error::InvalidParameter("grid_n must be >= 1".into()));
        }
        if !(self.step_factor.is_finite() && self.step_factor >= 1.0) {
            return Err(Error::InvalidParameter(format!("step_factor must be >= 1, got {}", self.step_factor)));
        }
        if self.sample_points < 2 {
            return Err(Error::InvalidParameter("sample_points must be >= 2".into()));
        }
        Ok(())
    }

    pub fn pulse(&self, eta: f64) -> Option<FsimPulse> {
        match self.scheme {
            SchemeName::FsimRect => Some(FsimPulse::Rectangular),
            SchemeName::FsimPoly => Some(FsimPulse::Polynomial { eta, layout: self.layout }),
            SchemeName::FsimGeometric => Some(FsimPulse::Geometric),
            SchemeName::Bgate => None,
        }
    }

    /// fSim design for one (N, eta); None for the B gate.
    pub fn fsim_design(&self, repetitions: u32, eta: f64) -> Result<Option<FsimDesign>> {
        let Some(pulse) = self.pulse(eta) else { return Ok(None) };
        let design = match self.gate_time_s {
            Some(duration) => FsimDesign { pulse, swap_angle: self.swap_angle, phase: self.phase, repetitions, duration },
            None => FsimDesign::with_exchange_limit(
                pulse,
                self.swap_angle,
                self.phase,
                repetitions,
                self.device_params()?.exchange_max,
            )?,
        };
        Ok(Some(design))
    }

    pub fn simulation_options(&self) -> Result<SimulationOptions> {
        let dephasing = if self.decoherence {
            Some(Dephasing::from_t2(self.device_params()?.t2, self.dephasing_form))
        } else {
            None
        };
        Ok(SimulationOptions {
            grid_n: self.grid_n,
            convention: self.convention,
            dephasing,
            integrator: self.integrator,
            step_factor: self.step_factor,
            min_steps: self.min_steps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_defaults() {
        let c = ExperimentConfig::default();
        let back = ExperimentConfig::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
        let sparse = ExperimentConfig::from_json(r#"{"scheme": "fsim_poly", "repetitions": [1, 3]}"#).unwrap();
        assert_eq!(sparse.scheme, SchemeName::FsimPoly);
        assert_eq!(sparse.grid_n, 40);
        assert!((sparse.device.exchange_max_hz - 19.7e6).abs() < 1e-3);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"schema": "fsim_rect"}"#).is_err());
        let mut c = ExperimentConfig::default();
        assert!(c.set("grid_size", "10").is_err());
    }

    #[test]
    fn overrides() {
        let mut c = ExperimentConfig::default();
        c.set("scheme", "bgate").unwrap();
        c.set("device.exchange_max_hz", "2e7").unwrap();
        c.set("rabi_deltas", "[-0.1, 0.1]").unwrap();
        c.set("output_dir", "/tmp/x").unwrap();
        assert_eq!(c.scheme, SchemeName::Bgate);
        assert_eq!(c.device.exchange_max_hz, 2e7);
        assert_eq!(c.rabi_deltas, vec![-0.1, 0.1]);
        assert!(c.set("scheme", "nonsense").is_err());
    }

    #[test]
    fn validation() {
        let ok = ExperimentConfig::default();
        ok.validate().unwrap();
        let bad = [
            ExperimentConfig { repetitions: vec![], ..ok.clone() },
            ExperimentConfig { repetitions: vec![0], ..ok.clone() },
            ExperimentConfig { rabi_deltas: vec![0.2], ..ok.clone() },
            ExperimentConfig { gate_time_s: Some(-1.0), ..ok.clone() },
            ExperimentConfig { grid_n: 0, ..ok.clone() },
            ExperimentConfig { swap_angle: 3.0, ..ok.clone() },
            ExperimentConfig { scheme: SchemeName::Bgate, detuning_eps: vec![0.05], ..ok.clone() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn scheme_names_parse() {
        for s in SchemeName::ALL {
            assert_eq!(s.as_str().parse::<SchemeName>().unwrap(), s);
        }
    }
}
