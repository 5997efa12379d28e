use super::matrix::{Matrix, C64};

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations, ascending.
pub fn hermitian_eigenvalues<const N: usize>(m: &Matrix<N>) -> [f64; N] {
    let mut a = (*m + m.adjoint()) * 0.5;
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..N {
            for q in p + 1..N {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let phase = apq / apq.norm();
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let theta = 0.5 * (2.0 * apq.norm()).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                // rotation acting on columns p, q: G = D R with D = diag(1, conj(phase)) in the (p, q) plane
                let mut g = Matrix::<N>::identity();
                g[(p, p)] = C64::new(c, 0.0);
                g[(p, q)] = C64::new(s, 0.0);
                g[(q, p)] = -phase.conj() * s;
                g[(q, q)] = phase.conj() * c;
                a = g.adjoint() * a * g;
            }
        }
    }
    let mut ev = a.diagonal().map(|z| z.re);
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}
