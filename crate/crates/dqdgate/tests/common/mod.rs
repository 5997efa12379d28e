#![allow(dead_code)]

use dqdgate::algebra::{kron2, Mat2, Mat4, C64};
use dqdgate::inverse_engineering::{AzimuthTrajectory, Azimuths, TrajectoryPoint};
use rand::Rng;

/// Sum of a few sinusoids, with closed-form derivative.
#[derive(Clone, Copy, Debug)]
pub struct Wiggle {
    pub offset: f64,
    pub terms: [(f64, f64, f64); 3],
    /// Subtract the t = 0 value so the curve starts at `offset`.
    pub pinned: bool,
}

impl Wiggle {
    pub fn random(rng: &mut impl Rng, offset: f64, pinned: bool) -> Self {
        let mut terms = [(0.0, 0.0, 0.0); 3];
        for t in &mut terms {
            *t = (rng.gen_range(-0.8..0.8), rng.gen_range(0.5..6.0), rng.gen_range(-3.0..3.0));
        }
        Self { offset, terms, pinned }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.offset
            + self.terms.iter().map(|&(c, w, p)| c * ((w * t + p).sin() - if self.pinned { p.sin() } else { 0.0 })).sum::<f64>()
    }

    pub fn rate(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(c, w, p)| c * w * (w * t + p).cos()).sum()
    }

    pub fn max_frequency(&self) -> f64 {
        self.terms.iter().map(|t| t.1).fold(0.0, f64::max)
    }
}

/// Smooth trajectory with both rotation angles zero at t = 0.
pub fn random_trajectory(rng: &mut impl Rng) -> (AzimuthTrajectory, f64) {
    let mut free = |lo: f64, hi: f64| {
        let offset = rng.gen_range(lo..hi);
        Wiggle::random(&mut *rng, offset, false)
    };
    let (theta1, phi1, theta2, phi2) = (free(0.2, 3.0), free(-3.0, 3.0), free(0.2, 3.0), free(-3.0, 3.0));
    let phases: [Wiggle; 3] = [free(-3.0, 3.0), free(-3.0, 3.0), free(-3.0, 3.0)];
    let angles: [Wiggle; 6] = [
        Wiggle::random(rng, 0.0, true),
        theta1,
        phi1,
        Wiggle::random(rng, 0.0, true),
        theta2,
        phi2,
    ];
    let fmax = angles.iter().chain(phases.iter()).map(Wiggle::max_frequency).fold(0.0, f64::max);
    let traj = AzimuthTrajectory::new(move |t| TrajectoryPoint {
        angles: Azimuths::from_array(angles.map(|w| w.value(t))),
        angle_rates: Azimuths::from_array(angles.map(|w| w.rate(t))),
        phases: phases.map(|w| w.value(t)),
        phase_rates: phases.map(|w| w.rate(t)),
    });
    (traj, fmax)
}

/// Composite Simpson over [a, b], splitting at every interior break so each piece is smooth.
pub fn simpson_pieces(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], panels: usize) -> f64 {
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let n = panels + panels % 2;
        let h = (hi - lo) / n as f64;
        // evaluate strictly inside the piece so one-sided limits are used at the cuts
        let nudge = h * 1e-9;
        let g = |k: usize| {
            let x = lo + k as f64 * h;
            f(x.clamp(lo + nudge, hi - nudge))
        };
        let mut s = g(0) + g(n);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * g(k);
        }
        total += s * h / 3.0;
    }
    total
}

pub fn random_su2(rng: &mut impl Rng) -> Mat2 {
    let v: [f64; 4] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = v.map(|x| x / n);
    Mat2::from_rows([[C64::new(a, b), C64::new(c, d)], [C64::new(-c, d), C64::new(a, -b)]])
}

pub fn random_local(rng: &mut impl Rng) -> Mat4 {
    kron2(&random_su2(rng), &random_su2(rng))
}

pub fn random_hermitian(rng: &mut impl Rng, scale: f64) -> Mat4 {
    let mut h = Mat4::zeros();
    for r in 0..4 {
        h[(r, r)] = C64::new(rng.gen_range(-scale..scale), 0.0);
        for c in r + 1..4 {
            let z = C64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
        }
    }
    h
}
