//! Dense complex 2×2 and 4×4 matrices.
//!
//! Indices are zero-based `(row, col)`. The only decomposition offered is a
//! cyclic Jacobi eigensolver for Hermitian 4×4 input, which is all the
//! entropy and concurrence computations need.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Numerical tolerances shared by the whole crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Max entrywise deviation `|m - m†|` accepted as Hermitian.
    pub hermiticity: f64,
    /// Frobenius bound on `u u† - I` for unitaries.
    pub unitarity: f64,
    /// Max eigenpair residual `|A v - ν v|`.
    pub eigen_residual: f64,
    /// Jacobi sweeps stop once every off-diagonal magnitude is below this.
    pub jacobi_off_diagonal: f64,
    /// Allowed `|tr ρ - 1|` for a density matrix.
    pub trace: f64,
    /// Smallest eigenvalue still treated as round-off rather than a broken state.
    pub negative_eigenvalue: f64,
}

pub const TOL: Tolerances = Tolerances {
    hermiticity: 1e-10,
    unitarity: 1e-12,
    eigen_residual: 1e-9,
    jacobi_off_diagonal: 1e-13,
    trace: 1e-10,
    negative_eigenvalue: -1e-9,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = Mat<2>;
pub type Mat4 = Mat<4>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

impl<const N: usize> Mat<N> {
    pub fn zeros() -> Self {
        Mat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(values: [f64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { C64::new(values[i], 0.0) } else { ZERO })
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    /// `self += w * other`, used by the quadrature accumulators.
    pub fn add_scaled(&mut self, w: f64, other: &Self) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += other.0[i][j] * w;
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    /// Largest entrywise magnitude of `self - self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..N {
            for j in i..N {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint()).frobenius_distance(&Self::identity()) <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<const N: usize> Default for Mat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for Mat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Mat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Mul for Mat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Add for Mat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> Sub for Mat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

pub fn pauli_x() -> Mat2 {
    Mat::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> Mat2 {
    Mat([[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
}

/// Kronecker product: `kron(a, b)[2i + k][2j + l] = a[i][j] * b[k][l]`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.0[i][j];
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = aij * b.0[k][l];
                }
            }
        }
    }
    out
}

/// `u · rho · u†`.
pub fn conjugate_sandwich(u: &Mat4, rho: &Mat4) -> Mat4 {
    *u * *rho * u.adjoint()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult4 {
    /// Eigenvalues, sorted descending.
    pub values: [f64; 4],
    /// Column `k` is the unit eigenvector of `values[k]`; present when requested.
    pub vectors: Option<Mat4>,
    /// Max over pairs of `|A v - ν v|`; zero when vectors were not requested.
    pub residual: f64,
}

/// Eigenvalues of a Hermitian 4×4 matrix (cyclic complex Jacobi).
pub fn herm_eig4(m: &Mat4) -> Result<EigenResult4> {
    eig_impl(m, false)
}

/// Like [`herm_eig4`] but also returns the eigenvectors and their residual.
pub fn herm_eigh4(m: &Mat4) -> Result<EigenResult4> {
    eig_impl(m, true)
}

const MAX_SWEEPS: usize = 64;

#[allow(clippy::needless_range_loop)]
fn eig_impl(m: &Mat4, want_vectors: bool) -> Result<EigenResult4> {
    if !m.is_finite() {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let deviation = m.hermiticity_defect();
    if deviation > TOL.hermiticity {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: TOL.hermiticity,
        });
    }

    // Work on the exactly Hermitian part so round-off in the input cannot
    // leave an imaginary diagonal behind.
    let mut a = Mat4::from_fn(|i, j| 0.5 * (m.0[i][j] + m.0[j][i].conj()));
    let mut v = Mat4::identity();

    for _ in 0..MAX_SWEEPS {
        let off = (0..4)
            .flat_map(|p| ((p + 1)..4).map(move |q| (p, q)))
            .map(|(p, q)| a.0[p][q].norm())
            .fold(0.0_f64, f64::max);
        if off < TOL.jacobi_off_diagonal {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&x, &y| a.0[y][y].re.total_cmp(&a.0[x][x].re));
    let values = order.map(|k| a.0[k][k].re);

    if !want_vectors {
        return Ok(EigenResult4 {
            values,
            vectors: None,
            residual: 0.0,
        });
    }

    let vectors = Mat4::from_fn(|i, k| v.0[i][order[k]]);
    let mut residual = 0.0_f64;
    for k in 0..4 {
        let mut r2 = 0.0;
        for i in 0..4 {
            let av: C64 = (0..4).map(|j| m.0[i][j] * vectors.0[j][k]).sum();
            r2 += (av - vectors.0[i][k] * values[k]).norm_sqr();
        }
        residual = residual.max(r2.sqrt());
    }
    Ok(EigenResult4 {
        values,
        vectors: Some(vectors),
        residual,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`; accumulates `a ← J† a J`, `v ← v J`.
fn rotate(a: &mut Mat4, v: &mut Mat4, p: usize, q: usize) {
    let apq = a.0[p][q];
    let g = apq.norm();
    if g < f64::MIN_POSITIVE {
        return;
    }
    // Phase that makes the pivot real and positive.
    let phase = apq / g;
    let app = a.0[p][p].re;
    let aqq = a.0[q][q].re;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = identity except J[p][p] = J[q][q] = c, J[p][q] = s·e^{iα}, J[q][p] = -s·e^{-iα}.
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let cc = C64::new(c, 0.0);

    // a ← a J  (columns p, q)
    for i in 0..4 {
        let aip = a.0[i][p];
        let aiq = a.0[i][q];
        a.0[i][p] = aip * cc + aiq * jqp;
        a.0[i][q] = aip * jpq + aiq * cc;
    }
    // a ← J† a  (rows p, q)
    for j in 0..4 {
        let apj = a.0[p][j];
        let aqj = a.0[q][j];
        a.0[p][j] = cc * apj + jqp.conj() * aqj;
        a.0[q][j] = jpq.conj() * apj + cc * aqj;
    }
    a.0[p][q] = ZERO;
    a.0[q][p] = ZERO;
    a.0[p][p] = C64::new(a.0[p][p].re, 0.0);
    a.0[q][q] = C64::new(a.0[q][q].re, 0.0);

    for i in 0..4 {
        let vip = v.0[i][p];
        let viq = v.0[i][q];
        v.0[i][p] = vip * cc + viq * jqp;
        v.0[i][q] = vip * jpq + viq * cc;
    }
}

/// `f(A)` for Hermitian `A`, applied through its spectral decomposition.
pub fn hermitian_function(m: &Mat4, f: impl Fn(f64) -> f64) -> Result<Mat4> {
    let eig = herm_eigh4(m)?;
    let vecs = eig.vectors.expect("vectors requested");
    let fv = eig.values.map(f);
    Ok(Mat4::from_fn(|i, j| {
        (0..4)
            .map(|k| vecs.0[i][k] * vecs.0[j][k].conj() * fv[k])
            .sum()
    }))
}
