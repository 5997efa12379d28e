use std::io::Write;

use serde::{Deserialize, Serialize};

use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::inverse_engineering::ExchangeProfile;

/// Transverse drive tone: field 2 B(s) cos(carrier t - phase) in the lab frame,
/// with effective rotating-frame amplitude B(s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveTone {
    pub amplitude: Polynomial,
    pub carrier: f64,
    pub phase: f64,
}

/// One piece of a schedule. The exchange is J(t) = 2 j(s) cos(carrier t + phase)
/// with s = (t - start) / (end - start).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub envelope: Polynomial,
    pub carrier: f64,
    pub phase: f64,
    pub drive: Option<DriveTone>,
}

impl Segment {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    fn local(&self, t: f64) -> f64 {
        ((t - self.start) / self.length()).clamp(0.0, 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveSample {
    pub amplitude: f64,
    pub carrier: f64,
    pub phase: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlSample {
    /// j(t), rad/s.
    pub envelope: f64,
    /// J(t) = 2 j cos(carrier t + phase), rad/s.
    pub exchange: f64,
    pub carrier: f64,
    pub phase: f64,
    pub drive: Option<DriveSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub label: String,
    pub duration: f64,
    pub segments: Vec<Segment>,
}

impl PulseSchedule {
    pub fn new(label: impl Into<String>, segments: Vec<Segment>) -> Result<Self> {
        let first = segments.first().ok_or_else(|| Error::InvalidParameter("schedule has no segments".into()))?;
        if first.start != 0.0 {
            return Err(Error::InvalidParameter(format!("schedule starts at {} instead of 0", first.start)));
        }
        for w in segments.windows(2) {
            if (w[0].end - w[1].start).abs() > 1e-12 * w[0].end.abs().max(1e-300) {
                return Err(Error::InvalidParameter(format!("gap between segments at {} and {}", w[0].end, w[1].start)));
            }
        }
        for s in &segments {
            if !(s.end > s.start) {
                return Err(Error::InvalidParameter(format!("segment [{}, {}] is empty", s.start, s.end)));
            }
        }
        let duration = segments.last().map(|s| s.end).unwrap_or(0.0);
        Ok(Self { label: label.into(), duration, segments })
    }

    pub fn segment_index(&self, t: f64) -> usize {
        let idx = self.segments.partition_point(|s| s.end <= t);
        idx.min(self.segments.len() - 1)
    }

    pub fn segment_at(&self, t: f64) -> &Segment {
        &self.segments[self.segment_index(t)]
    }

    pub fn sample(&self, t: f64) -> ControlSample {
        let seg = self.segment_at(t);
        let s = seg.local(t);
        let j = seg.envelope.eval(s);
        ControlSample {
            envelope: j,
            exchange: 2.0 * j * (seg.carrier * t + seg.phase).cos(),
            carrier: seg.carrier,
            phase: seg.phase,
            drive: seg.drive.as_ref().map(|d| DriveSample {
                amplitude: d.amplitude.eval(s),
                carrier: d.carrier,
                phase: d.phase,
            }),
        }
    }

    /// Interior segment boundaries.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.segments.iter().skip(1).map(|s| s.start).collect()
    }

    /// Largest carrier present in the exchange or drive, rad/s.
    pub fn max_carrier(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.carrier.abs().max(s.drive.as_ref().map_or(0.0, |d| d.carrier.abs())))
            .fold(0.0, f64::max)
    }

    pub fn peak_envelope(&self) -> f64 {
        self.segments
            .iter()
            .flat_map(|seg| (0..=2000).map(move |k| seg.envelope.eval(k as f64 / 2000.0).abs()))
            .fold(0.0, f64::max)
    }

    /// Duration at which the peak of |J| = 2|j| equals `exchange_max`, keeping the pulse shape.
    pub fn duration_for_exchange_limit(&self, exchange_max: f64) -> f64 {
        2.0 * self.peak_envelope() * self.duration / exchange_max
    }

    /// Copy with all exchange envelopes multiplied by `factor`.
    pub fn with_envelope_scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.segments {
            s.envelope = s.envelope.scaled(factor);
        }
        out
    }

    /// Integral over [0, t] of J(t) = 2 j cos(carrier t + phase).
    pub fn exchange_integral(&self, t: f64) -> f64 {
        self.fold_segments(t, |seg, s1| {
            let tau = seg.length();
            2.0 * tau * seg.envelope.oscillatory_integral(s1, seg.carrier * tau, seg.carrier * seg.start + seg.phase).re
        })
    }

    fn fold_segments(&self, t: f64, f: impl Fn(&Segment, f64) -> f64) -> f64 {
        let t = t.clamp(0.0, self.duration);
        let mut total = 0.0;
        for seg in &self.segments {
            if seg.start >= t {
                break;
            }
            total += f(seg, seg.local(t));
        }
        total
    }

    /// Writes samples at `points` evenly spaced times (endpoints included).
    pub fn write_csv(&self, out: impl Write, points: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t_ns", "j_over_2pi_MHz", "J_over_2pi_MHz", "psi_rad", "By_over_2pi_MHz"])?;
        let mhz = |x: f64| x / (2.0 * std::f64::consts::PI) / 1e6;
        let n = points.max(2);
        for k in 0..n {
            let t = self.duration * k as f64 / (n - 1) as f64;
            let c = self.sample(t);
            w.write_record(&[
                format!("{:.6}", t * 1e9),
                format!("{:.9}", mhz(c.envelope)),
                format!("{:.9}", mhz(c.exchange)),
                format!("{:.9}", c.phase),
                format!("{:.9}", mhz(c.drive.map_or(0.0, |d| d.amplitude))),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl ExchangeProfile for PulseSchedule {
    fn envelope(&self, t: f64) -> f64 {
        self.sample(t).envelope
    }

    fn envelope_integral(&self, t: f64) -> f64 {
        self.fold_segments(t, |seg, s1| seg.length() * seg.envelope.integral(s1))
    }

    fn carrier_integral(&self, t: f64, omega: f64) -> f64 {
        self.fold_segments(t, |seg, s1| {
            let tau = seg.length();
            tau * seg.envelope.oscillatory_integral(s1, omega * tau, omega * seg.start).re
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::simpson;

    fn two_piece() -> PulseSchedule {
        let seg = |a: f64, b: f64, p: Vec<f64>| Segment {
            start: a,
            end: b,
            envelope: Polynomial::new(p),
            carrier: 3.0,
            phase: 0.2,
            drive: None,
        };
        PulseSchedule::new("t", vec![seg(0.0, 0.4, vec![1.0, 2.0]), seg(0.4, 1.5, vec![0.5, 0.0, -1.0])]).unwrap()
    }

    #[test]
    fn rejects_gaps_and_empty() {
        let seg = |a: f64, b: f64| Segment {
            start: a,
            end: b,
            envelope: Polynomial::constant(1.0),
            carrier: 0.0,
            phase: 0.0,
            drive: None,
        };
        assert!(PulseSchedule::new("x", vec![seg(0.0, 1.0), seg(1.1, 2.0)]).is_err());
        assert!(PulseSchedule::new("x", vec![seg(0.0, 0.0)]).is_err());
        assert!(PulseSchedule::new("x", vec![seg(0.5, 1.0)]).is_err());
        assert!(PulseSchedule::new("x", vec![]).is_err());
    }

    #[test]
    fn boundary_belongs_to_later_segment() {
        let s = two_piece();
        assert_eq!(s.segment_index(0.4), 1);
        assert_eq!(s.segment_index(1.5), 1);
        assert_eq!(s.segment_index(0.0), 0);
    }

    #[test]
    fn integrals_match_quadrature() {
        let s = two_piece();
        // piecewise oracle built from the raw coefficients, each piece on its own span
        let pieces: [(f64, f64, fn(f64) -> f64); 2] =
            [(0.0, 0.4, |u| 1.0 + 2.0 * u), (0.4, 1.5, |u| 0.5 - u * u)];
        let oracle = |t: f64, weight: &dyn Fn(f64, f64) -> f64| {
            pieces
                .iter()
                .filter(|(a, _, _)| *a < t)
                .map(|&(a, b, p)| {
                    let hi = t.min(b);
                    simpson(|x| weight(x, p((x - a) / (b - a))), a, hi, &[], 20_000)
                })
                .sum::<f64>()
        };
        for &t in &[0.2, 0.4, 1.0, 1.5] {
            assert!((s.envelope_integral(t) - oracle(t, &|_, j| j)).abs() < 1e-10);
            assert!((s.carrier_integral(t, 7.0) - oracle(t, &|x, j| j * (7.0 * x).cos())).abs() < 1e-10);
            let big = oracle(t, &|x, j| 2.0 * j * (3.0 * x + 0.2).cos());
            assert!((s.exchange_integral(t) - big).abs() < 1e-10);
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut buf = Vec::new();
        two_piece().write_csv(&mut buf, 5).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t_ns,j_over_2pi_MHz,J_over_2pi_MHz,psi_rad,By_over_2pi_MHz"));
        assert_eq!(text.lines().count(), 6);
    }
}
