//! Small dense complex matrices.
//!
//! Gram matrices here are δ×δ with δ ≤ 16, so a plain row-major `Vec`
//! with partial-pivot LU and a cyclic Jacobi eigensolver is all that is
//! needed. Nothing in this module is tuned for large dimensions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
// f64 math via the trait in no_std builds; std builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n_rows: usize,
    n_cols: usize,
    a: Vec<Complex64>,
}

/// Error from a linear solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinalgError {
    /// Pivot below working precision; the matrix is singular.
    Singular,
    /// Operand shapes do not match.
    ShapeMismatch,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::Singular => f.write_str("matrix is singular to working precision"),
            LinalgError::ShapeMismatch => f.write_str("matrix shapes do not match"),
        }
    }
}

impl CMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CMatrix {
            n_rows,
            n_cols,
            a: vec![Complex64::new(0.0, 0.0); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = if n_rows == 0 { 0 } else { rows[0].len() };
        let mut a = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            assert_eq!(r.len(), n_cols, "ragged rows");
            a.extend_from_slice(r);
        }
        CMatrix { n_rows, n_cols, a }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.a {
            *v *= s;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// `(A + A†)/2`.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        let adj = self.adjoint();
        let mut out = self.clone();
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out[(i, j)] = (self[(i, j)] + adj[(i, j)]) * 0.5;
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.n_rows).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |entry| off the diagonal (0 for 1×1).
    pub fn max_abs_offdiag(&self) -> f64 {
        let mut m = 0.0;
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                if i != j {
                    m = f64::max(m, self[(i, j)].norm());
                }
            }
        }
        m
    }

    /// Largest |entry| of the departure from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let adj = self.adjoint();
        let mut m = 0.0;
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                m = f64::max(m, (self[(i, j)] - adj[(i, j)]).norm());
            }
        }
        m
    }

    /// Maximum column sum of absolute values (operator 1-norm).
    pub fn one_norm(&self) -> f64 {
        let mut best = 0.0;
        for j in 0..self.n_cols {
            let s: f64 = (0..self.n_rows).map(|i| self[(i, j)].norm()).sum();
            best = f64::max(best, s);
        }
        best
    }

    /// Solve `A x = b` for each column of `b` by LU with partial pivoting.
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix, LinalgError> {
        if !self.is_square() || b.n_rows != self.n_rows {
            return Err(LinalgError::ShapeMismatch);
        }
        let n = self.n_rows;
        let mut lu = self.a.clone();
        let mut x = b.clone();
        let at = |a: &Vec<Complex64>, i: usize, j: usize| a[i * n + j];
        for k in 0..n {
            // pivot
            let mut p = k;
            let mut best = at(&lu, k, k).norm();
            for i in (k + 1)..n {
                let v = at(&lu, i, k).norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(LinalgError::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                for j in 0..x.n_cols {
                    let tmp = x[(k, j)];
                    x[(k, j)] = x[(p, j)];
                    x[(p, j)] = tmp;
                }
            }
            let piv = at(&lu, k, k);
            for i in (k + 1)..n {
                let f = at(&lu, i, k) / piv;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    let v = at(&lu, k, j);
                    lu[i * n + j] -= f * v;
                }
            }
        }
        // forward substitution (unit lower)
        for j in 0..x.n_cols {
            for i in 1..n {
                let mut s = x[(i, j)];
                for k in 0..i {
                    s -= at(&lu, i, k) * x[(k, j)];
                }
                x[(i, j)] = s;
            }
            // back substitution
            for i in (0..n).rev() {
                let mut s = x[(i, j)];
                for k in (i + 1)..n {
                    s -= at(&lu, i, k) * x[(k, j)];
                }
                x[(i, j)] = s / at(&lu, i, i);
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMatrix, LinalgError> {
        self.solve(&CMatrix::identity(self.n_rows))
    }

    /// 1-norm condition estimate `‖A‖₁‖A⁻¹‖₁` via the explicit inverse.
    pub fn condition_estimate(&self) -> Result<f64, LinalgError> {
        Ok(self.one_norm() * self.inverse()?.one_norm())
    }

    /// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi.
    ///
    /// The input is Hermitized first, so small asymmetry from quadrature
    /// noise is tolerated.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square());
        let n = self.n_rows;
        let mut m = self.hermitize();
        for _sweep in 0..64 {
            let off = m.max_abs_offdiag();
            let scale = f64::max(m.max_abs(), 1e-300);
            if off <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[(p, q)];
                    if apq.norm() <= 1e-18 * scale {
                        continue;
                    }
                    let app = m[(p, p)].re;
                    let aqq = m[(q, q)].re;
                    // unitary 2x2 rotation diagonalizing the (p,q) block
                    let abs = apq.norm();
                    let phase = apq / abs;
                    let theta = 0.5 * (2.0 * abs).atan2(app - aqq);
                    let (s, c) = theta.sin_cos();
                    // columns
                    for i in 0..n {
                        let aip = m[(i, p)];
                        let aiq = m[(i, q)];
                        m[(i, p)] = aip * c + aiq * phase.conj() * s;
                        m[(i, q)] = -aip * phase * s + aiq * c;
                    }
                    // rows
                    for j in 0..n {
                        let apj = m[(p, j)];
                        let aqj = m[(q, j)];
                        m[(p, j)] = apj * c + aqj * phase * s;
                        m[(q, j)] = -apj * phase.conj() * s + aqj * c;
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
        eig.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalue NaN"));
        eig
    }

    /// True when Hermitian (to `tol`) with all eigenvalues positive.
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        if self.hermitian_defect() > tol * f64::max(self.max_abs(), 1.0) {
            return false;
        }
        self.hermitian_eigenvalues().first().map(|&e| e > 0.0).unwrap_or(false)
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.a[i * self.n_cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.a[i * self.n_cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols));
        let mut out = self.clone();
        for (v, w) in out.a.iter_mut().zip(&rhs.a) {
            *v += w;
        }
        out
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols));
        let mut out = self.clone();
        for (v, w) in out.a.iter_mut().zip(&rhs.a) {
            *v -= w;
        }
        out
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n_cols, rhs.n_rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let v = self[(i, k)];
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    out[(i, j)] += v * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Neumaier-compensated sum of complex terms.
///
/// Keeps quadrature rounding near `2ε·Σ|tᵢ|` independent of the number of
/// nodes; the adiabatic-curvature differences divide by `step²`, so the
/// quadrature noise floor matters there.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum_re: f64,
    sum_im: f64,
    c_re: f64,
    c_im: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.sum_re = neumaier_step(self.sum_re, v.re, &mut self.c_re);
        self.sum_im = neumaier_step(self.sum_im, v.im, &mut self.c_im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.sum_re + self.c_re, self.sum_im + self.c_im)
    }
}

#[inline]
fn neumaier_step(sum: f64, v: f64, comp: &mut f64) -> f64 {
    let t = sum + v;
    if sum.abs() >= v.abs() {
        *comp += (sum - t) + v;
    } else {
        *comp += (v - t) + sum;
    }
    t
}
