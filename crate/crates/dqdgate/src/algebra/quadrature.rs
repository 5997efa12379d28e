use super::matrix::C64;

/// Default total panel count for composite Simpson rules.
pub const DEFAULT_PANELS: usize = 10_000;

/// Composite Simpson rule over `[a, b]` with the given interior breakpoints as panel edges.
///
/// Panels are distributed proportionally to subinterval length, at least two per subinterval.
pub fn simpson_complex(f: impl Fn(f64) -> C64, a: f64, b: f64, breakpoints: &[f64], panels: usize) -> C64 {
    let edges = merge_edges(a, b, breakpoints);
    let span = b - a;
    let mut total = C64::new(0.0, 0.0);
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let share = ((hi - lo) / span * panels as f64).ceil() as usize;
        let n = (share.max(2) + 1) & !1;
        let h = (hi - lo) / n as f64;
        // evaluation stays inside [lo, hi] so one-sided limits at jumps are used
        let mut acc = f(lo) + f(hi);
        for k in 1..n {
            let x = lo + k as f64 * h;
            acc += f(x) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        total += acc * (h / 3.0);
    }
    total
}

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, breakpoints: &[f64], panels: usize) -> f64 {
    simpson_complex(|x| C64::new(f(x), 0.0), a, b, breakpoints, panels).re
}

fn merge_edges(a: f64, b: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut edges = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for x in inner {
        if x - edges.last().unwrap() > 1e-15 * (b - a).abs() {
            edges.push(x);
        }
    }
    edges.push(b);
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, &[], 2);
        assert!((v - 0.0).abs() < 1e-14);
    }

    #[test]
    fn kink_at_breakpoint_is_exact() {
        let f = |x: f64| (x - 0.3).abs();
        let v = simpson(f, 0.0, 1.0, &[0.3], 10);
        assert!((v - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integral_converges() {
        let w = 2.0 * std::f64::consts::PI * 7.0;
        let v = simpson(|x| x * (w * x).cos(), 0.0, 1.0, &[], DEFAULT_PANELS);
        let exact = ((w).cos() - 1.0) / (w * w) + (w).sin() / w;
        assert!((v - exact).abs() < 1e-12);
    }
}
