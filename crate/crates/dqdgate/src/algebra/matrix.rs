use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense square complex matrix of fixed dimension, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize> {
    pub data: [[C64; N]; N],
}

pub type Mat2 = Matrix<2>;
pub type Mat4 = Matrix<4>;
pub type Mat16 = Matrix<16>;

/// The 4x4 carrier for Hamiltonians, propagators and density matrices.
pub type ComplexMatrix4 = Mat4;

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Matrix<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Self { data: [[ZERO; N]; N] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for k in 0..N {
            m.data[k][k] = ONE;
        }
        m
    }

    pub fn from_rows(data: [[C64; N]; N]) -> Self {
        Self { data }
    }

    pub fn from_real(data: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for r in 0..N {
            for c in 0..N {
                m.data[r][c] = C64::new(data[r][c], 0.0);
            }
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for r in 0..N {
            for c in 0..N {
                m.data[r][c] = f(r, c);
            }
        }
        m
    }

    pub fn diag(d: [C64; N]) -> Self {
        let mut m = Self::zeros();
        for k in 0..N {
            m.data[k][k] = d[k];
        }
        m
    }

    pub fn diag_real(d: [f64; N]) -> Self {
        Self::diag(d.map(|x| C64::new(x, 0.0)))
    }

    pub fn diagonal(&self) -> [C64; N] {
        std::array::from_fn(|k| self.data[k][k])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, c| self.data[c][r].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, c| self.data[c][r])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|r, c| self.data[r][c].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|k| self.data[k][k]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|r, c| self.data[r][c] * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::from_fn(|r, c| self.data[r][c] * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..N)
            .map(|c| (0..N).map(|r| self.data[r][c].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// ||M - M^dagger||_F
    pub fn hermitian_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// ||M^dagger M - I||_F
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Self::identity()).frobenius_norm()
    }

    pub fn apply(&self, v: &[C64; N]) -> [C64; N] {
        std::array::from_fn(|r| {
            let mut acc = ZERO;
            for c in 0..N {
                acc += self.data[r][c] * v[c];
            }
            acc
        })
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .flat_map(|row| row.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.data;
        let mut det = ONE;
        for col in 0..N {
            let pivot = (col..N)
                .max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())
                .unwrap();
            if a[pivot][col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let p = a[col][col];
            det *= p;
            for r in col + 1..N {
                let f = a[r][col] / p;
                for c in col..N {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
        det
    }

    /// Matrix exponential by scaling and squaring with a truncated Taylor series.
    pub fn expm(&self) -> Self {
        let norm = self.norm_one();
        if norm == 0.0 {
            return Self::identity();
        }
        let mut squarings = 0u32;
        if norm > 0.5 {
            squarings = (norm / 0.5).log2().ceil() as u32;
        }
        let a = self.scale_real(0.5f64.powi(squarings as i32));
        // ||a|| <= 1/2, 18 terms leave a remainder far below f64 epsilon
        let mut result = Self::identity();
        let mut term = Self::identity();
        for k in 1..=18 {
            term = (term * a).scale_real(1.0 / k as f64);
            result = result + term;
        }
        for _ in 0..squarings {
            result = result * result;
        }
        result
    }

    /// exp(-i H dt), without Hermiticity checks.
    pub fn exp_i(&self, dt: f64) -> Self {
        self.scale(C64::new(0.0, -dt)).expm()
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r][c]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r][c]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.data[r][c] + rhs.data[r][c])
    }
}

impl<const N: usize> AddAssign for Matrix<N> {
    fn add_assign(&mut self, rhs: Self) {
        for r in 0..N {
            for c in 0..N {
                self.data[r][c] += rhs.data[r][c];
            }
        }
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.data[r][c] - rhs.data[r][c])
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|r, c| -self.data[r][c])
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for r in 0..N {
            for k in 0..N {
                let a = self.data[r][k];
                if a == ZERO {
                    continue;
                }
                for c in 0..N {
                    out.data[r][c] += a * rhs.data[k][c];
                }
            }
        }
        out
    }
}

impl<const N: usize> Mul<C64> for Matrix<N> {
    type Output = Self;
    fn mul(self, s: C64) -> Self {
        self.scale(s)
    }
}

impl<const N: usize> Mul<f64> for Matrix<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale_real(s)
    }
}

pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a.data[r / 2][c / 2] * b.data[r % 2][c % 2])
}

pub fn kron4(a: &Mat4, b: &Mat4) -> Mat16 {
    Mat16::from_fn(|r, c| a.data[r / 4][c / 4] * b.data[r % 4][c % 4])
}

/// Column-stacked vectorization: vec(rho)[4c + r] = rho[r][c].
pub fn vectorize(rho: &Mat4) -> [C64; 16] {
    std::array::from_fn(|k| rho.data[k % 4][k / 4])
}

pub fn unvectorize(v: &[C64; 16]) -> Mat4 {
    Mat4::from_fn(|r, c| v[4 * c + r])
}

/// min over phi of ||u - e^{i phi} v||_F.
pub fn phase_distance<const N: usize>(u: &Matrix<N>, v: &Matrix<N>) -> f64 {
    let overlap = (v.adjoint() * *u).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    (*u - v.scale(phase)).frobenius_norm()
}

pub fn outer<const N: usize>(a: &[C64; N], b: &[C64; N]) -> Matrix<N> {
    Matrix::from_fn(|r, c| a[r] * b[c].conj())
}

pub fn inner<const N: usize>(a: &[C64; N], b: &[C64; N]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn pauli_x() -> Mat2 {
    Mat2::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> Mat2 {
    Mat2::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> Mat2 {
    Mat2::diag_real([1.0, -1.0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_zero_is_identity() {
        assert_eq!(Mat4::zeros().expm(), Mat4::identity());
    }

    #[test]
    fn expm_diagonal() {
        let d = Mat4::diag_real([1.0, -2.0, 0.5, 3.0]);
        let e = d.exp_i(0.7);
        for (k, x) in [1.0, -2.0, 0.5, 3.0].iter().enumerate() {
            assert!((e[(k, k)] - C64::from_polar(1.0, -x * 0.7)).norm() < 1e-14);
        }
    }

    #[test]
    fn expm_large_norm_stays_unitary() {
        let h = Mat4::from_fn(|r, c| C64::new((r + c) as f64 * 40.0, (r as f64 - c as f64) * 13.0));
        let u = h.exp_i(1.0);
        assert!(u.unitarity_defect() < 1e-10);
    }

    #[test]
    fn determinant_of_permutation_and_product() {
        let p = Mat4::from_real([
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        assert!((p.det() - ONE).norm() < 1e-15);
        let a = Mat4::from_fn(|r, c| C64::new((r * 3 + c) as f64 % 5.0, (r as f64 - c as f64) * 0.3));
        let b = Mat4::from_fn(|r, c| C64::new(((r + 2 * c) % 3) as f64, 0.1 * (r + c) as f64));
        assert!(((a * b).det() - a.det() * b.det()).norm() < 1e-10 * (a.det() * b.det()).norm().max(1.0));
    }

    #[test]
    fn vectorization_roundtrip() {
        let m = Mat4::from_fn(|r, c| C64::new(r as f64, c as f64));
        assert_eq!(unvectorize(&vectorize(&m)), m);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let u = kron2(&pauli_x(), &pauli_y());
        let v = u.scale(C64::from_polar(1.0, 1.234));
        assert!(phase_distance(&u, &v) < 1e-14);
        assert!(phase_distance(&u, &Mat4::identity()) > 1.0);
    }
}
