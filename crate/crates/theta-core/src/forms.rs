//! Quadratic-exponent Hermitian weights and constant-coefficient 2-forms.
//!
//! Every Hermitian metric in play is `h = e^Q` with `Q` a real quadratic
//! polynomial in `(z₁, z₂, μ₁, μ₂)`. Since `log h = Q`, the Chern curvature
//! `Θ = −∂∂̄ log h` is a constant form computed exactly from the quadratic
//! coefficients; the finite-difference route exists as an independent
//! numerical oracle for the same quantity.
//!
//! Wirtinger conversion happens in exactly one place ([`wirtinger_curvature`])
//! shared by the closed-form and finite-difference paths: factor-of-two
//! errors in `∂∂̄ = ¼(∂₁² + ∂₂²)` are a classic failure mode, so there is a
//! single source of truth for it.
//!
//! Forms are stored over ordered, labelled coframes. Mixing frames without
//! [`ConstTwoForm::change_frame`] is an error.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
// f64 math via the trait in no_std builds; std builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::coord::{Coord, PRODUCT_FRAME, TORUS_FRAME};
use crate::linalg::CMatrix;
use crate::torus::{FrameMatrix, TorusModulus};

const PI: f64 = core::f64::consts::PI;

/// Which variables a quadratic weight depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricDomain {
    /// `(z₁, z₂)` only.
    Torus,
    /// `(z₁, z₂, μ₁, μ₂)`.
    Product,
}

/// Error from form/metric operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormError {
    /// Coframe labels of the operands do not line up.
    CoordMismatch,
    /// A metric evaluation returned a non-positive value.
    NonPositiveValue,
    /// The finite-difference step must be positive.
    BadStep,
}

impl fmt::Display for FormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormError::CoordMismatch => f.write_str("coframe labels do not match"),
            FormError::NonPositiveValue => f.write_str("metric value is not positive"),
            FormError::BadStep => f.write_str("finite-difference step must be positive"),
        }
    }
}

/// Weight `h = e^Q`, `Q(v) = vᵀAv + bᵀv + c₀` over `v = (z₁, z₂, μ₁, μ₂)`.
///
/// `A` is kept fully symmetric, so the coefficient of a cross term
/// `v_i v_j` (i ≠ j) is `2A[i][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadExpMetric {
    domain: MetricDomain,
    c0: f64,
    lin: [f64; 4],
    quad: [[f64; 4]; 4],
}

const Z1: usize = 0;
const Z2: usize = 1;
const M1: usize = 2;
const M2: usize = 3;

impl QuadExpMetric {
    pub fn zero(domain: MetricDomain) -> Self {
        QuadExpMetric {
            domain,
            c0: 0.0,
            lin: [0.0; 4],
            quad: [[0.0; 4]; 4],
        }
    }

    /// Affine exponent `c₀ + b·v` (used to state transformation laws).
    pub fn affine(domain: MetricDomain, c0: f64, lin: [f64; 4]) -> Self {
        QuadExpMetric {
            domain,
            c0,
            lin,
            quad: [[0.0; 4]; 4],
        }
    }

    pub fn domain(&self) -> MetricDomain {
        self.domain
    }

    /// Set `A[i][j] = A[j][i] = v`.
    fn with_quad(mut self, i: usize, j: usize, v: f64) -> Self {
        self.quad[i][j] = v;
        self.quad[j][i] = v;
        self
    }

    /// `Q` at the point `(z, μ)`.
    pub fn log_eval(&self, z: Complex64, mu: Complex64) -> f64 {
        let v = [z.re, z.im, mu.re, mu.im];
        let mut q = self.c0;
        for i in 0..4 {
            q += self.lin[i] * v[i];
            for j in 0..4 {
                q += self.quad[i][j] * v[i] * v[j];
            }
        }
        q
    }

    /// `h = e^Q` at the point `(z, μ)`.
    pub fn eval(&self, z: Complex64, mu: Complex64) -> f64 {
        self.log_eval(z, mu).exp()
    }

    /// Product of weights (exponent sum). The result lives on the product
    /// torus unless both factors are z-only.
    pub fn mul(&self, other: &QuadExpMetric) -> QuadExpMetric {
        let domain = match (self.domain, other.domain) {
            (MetricDomain::Torus, MetricDomain::Torus) => MetricDomain::Torus,
            _ => MetricDomain::Product,
        };
        let mut out = *self;
        out.domain = domain;
        out.c0 += other.c0;
        for i in 0..4 {
            out.lin[i] += other.lin[i];
            for j in 0..4 {
                out.quad[i][j] += other.quad[i][j];
            }
        }
        out
    }

    /// Reciprocal weight (exponent negation).
    pub fn inv(&self) -> QuadExpMetric {
        let mut out = *self;
        out.c0 = -out.c0;
        for i in 0..4 {
            out.lin[i] = -out.lin[i];
            for j in 0..4 {
                out.quad[i][j] = -out.quad[i][j];
            }
        }
        out
    }

    /// Substitute `v → v + d` and re-expand (exact for a quadratic).
    pub fn shifted(&self, dz: Complex64, dmu: Complex64) -> QuadExpMetric {
        let d = [dz.re, dz.im, dmu.re, dmu.im];
        let mut out = *self;
        // Q(v+d) = v^T A v + (b + 2Ad)·v + (c0 + d^T A d + b·d)
        for i in 0..4 {
            let mut ad = 0.0;
            for (q, dj) in self.quad[i].iter().zip(&d) {
                ad += q * dj;
            }
            out.lin[i] = self.lin[i] + 2.0 * ad;
        }
        let mut c = self.c0;
        for i in 0..4 {
            c += self.lin[i] * d[i];
            for j in 0..4 {
                c += self.quad[i][j] * d[i] * d[j];
            }
        }
        out.c0 = c;
        out
    }

    /// Fix `μ` and restrict to a z-only weight.
    pub fn restrict_mu(&self, mu: Complex64) -> QuadExpMetric {
        let mut out = self.shifted(Complex64::new(0.0, 0.0), mu);
        for i in 0..4 {
            out.quad[M1][i] = 0.0;
            out.quad[i][M1] = 0.0;
            out.quad[M2][i] = 0.0;
            out.quad[i][M2] = 0.0;
        }
        out.lin[M1] = 0.0;
        out.lin[M2] = 0.0;
        out.domain = MetricDomain::Torus;
        out
    }

    /// Fix `z` and restrict to a μ-only exponent (still stored over the
    /// product variable slots).
    pub fn restrict_z(&self, z: Complex64) -> QuadExpMetric {
        let mut out = self.shifted(z, Complex64::new(0.0, 0.0));
        for i in 0..4 {
            out.quad[Z1][i] = 0.0;
            out.quad[i][Z1] = 0.0;
            out.quad[Z2][i] = 0.0;
            out.quad[i][Z2] = 0.0;
        }
        out.lin[Z1] = 0.0;
        out.lin[Z2] = 0.0;
        out
    }

    /// Swap the roles of `z` and `μ`. The result depends on `μ`, so it
    /// always lives on the product torus.
    pub fn swap_factors(&self) -> QuadExpMetric {
        let perm = [M1, M2, Z1, Z2];
        let mut out = *self;
        out.domain = MetricDomain::Product;
        for i in 0..4 {
            out.lin[i] = self.lin[perm[i]];
            for j in 0..4 {
                out.quad[i][j] = self.quad[perm[i]][perm[j]];
            }
        }
        out
    }

    /// Exponent difference `Q − Q′` as a coefficient table.
    pub fn sub(&self, other: &QuadExpMetric) -> QuadExpMetric {
        self.mul(&other.inv())
    }

    /// Largest absolute coefficient of the exponent polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        let mut m = self.c0.abs();
        for i in 0..4 {
            m = m.max(self.lin[i].abs());
            for j in 0..4 {
                m = m.max(self.quad[i][j].abs());
            }
        }
        m
    }

    /// Exact coefficient-table equality.
    pub fn coeffs_equal(&self, other: &QuadExpMetric) -> bool {
        self.c0 == other.c0 && self.lin == other.lin && self.quad == other.quad
    }
}

/// `h_{ref}(z) = e^{−2πz₂²/τ₂}`, the weight of the degree-δ reference bundle.
pub fn reference_weight(m: &TorusModulus) -> QuadExpMetric {
    QuadExpMetric::zero(MetricDomain::Torus).with_quad(Z2, Z2, -2.0 * PI / m.tau2())
}

/// Family weight `h(z, μ) = e^{−2π(z₂+μ₂)²/τ₂}` on `M×M`.
pub fn family_weight(m: &TorusModulus) -> QuadExpMetric {
    let a = -2.0 * PI / m.tau2();
    QuadExpMetric::zero(MetricDomain::Product)
        .with_quad(Z2, Z2, a)
        .with_quad(M2, M2, a)
        .with_quad(Z2, M2, a)
}

/// Weight `e^{−4πz₂μ₂/τ₂}` on the pulled-back Poincaré factor.
pub fn poincare_pullback_weight(m: &TorusModulus) -> QuadExpMetric {
    QuadExpMetric::zero(MetricDomain::Product).with_quad(Z2, M2, -2.0 * PI / m.tau2())
}

/// Reference weight in the second factor: `e^{−2πμ₂²/τ₂}`.
pub fn second_factor_weight(m: &TorusModulus) -> QuadExpMetric {
    QuadExpMetric::zero(MetricDomain::Product).with_quad(M2, M2, -2.0 * PI / m.tau2())
}

/// Direct-image weight `e^{−2π(z₂² + 2z₂μ₂)/τ₂}`, the family weight with
/// the second-factor reference weight divided out.
pub fn direct_image_weight(m: &TorusModulus) -> QuadExpMetric {
    let a = -2.0 * PI / m.tau2();
    QuadExpMetric::zero(MetricDomain::Product)
        .with_quad(Z2, Z2, a)
        .with_quad(Z2, M2, a)
}

// ---------------------------------------------------------------------------
// constant 2-forms
// ---------------------------------------------------------------------------

/// Constant-coefficient 2-form over an ordered labelled coframe.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstTwoForm {
    coords: Vec<Coord>,
    coeffs: CMatrix,
}

impl ConstTwoForm {
    pub fn zero(coords: &[Coord]) -> Self {
        ConstTwoForm {
            coords: coords.into(),
            coeffs: CMatrix::zeros(coords.len(), coords.len()),
        }
    }

    /// Build from wedge terms `c·eᵃ∧eᵇ`; fills the antisymmetric pair.
    pub fn from_wedge_terms(coords: &[Coord], terms: &[(Coord, Coord, Complex64)]) -> Self {
        let mut f = Self::zero(coords);
        for &(a, b, v) in terms {
            let i = f.index_of(a).expect("coord not in frame");
            let j = f.index_of(b).expect("coord not in frame");
            assert_ne!(i, j, "wedge of a coordinate with itself");
            f.coeffs[(i, j)] += v;
            f.coeffs[(j, i)] -= v;
        }
        f
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    fn index_of(&self, c: Coord) -> Option<usize> {
        self.coords.iter().position(|&x| x == c)
    }

    /// Coefficient of `eᵃ∧eᵇ`.
    pub fn coefficient(&self, a: Coord, b: Coord) -> Complex64 {
        let i = self.index_of(a).expect("coord not in frame");
        let j = self.index_of(b).expect("coord not in frame");
        self.coeffs[(i, j)]
    }

    pub fn add(&self, other: &ConstTwoForm) -> Result<ConstTwoForm, FormError> {
        if self.coords != other.coords {
            return Err(FormError::CoordMismatch);
        }
        Ok(ConstTwoForm {
            coords: self.coords.clone(),
            coeffs: &self.coeffs + &other.coeffs,
        })
    }

    pub fn scale(&self, s: Complex64) -> ConstTwoForm {
        ConstTwoForm {
            coords: self.coords.clone(),
            coeffs: self.coeffs.scale(s),
        }
    }

    /// Largest coefficient difference against another form over the same
    /// coframe.
    pub fn max_abs_diff(&self, other: &ConstTwoForm) -> Result<f64, FormError> {
        if self.coords != other.coords {
            return Err(FormError::CoordMismatch);
        }
        Ok((&self.coeffs - &other.coeffs).max_abs())
    }

    /// Congruence transform under a frame change: the frame's rows must be
    /// this form's coframe, and the coefficients become `Tᵀ C T`.
    pub fn change_frame(&self, frame: &FrameMatrix) -> Result<ConstTwoForm, FormError> {
        if self.coords.as_slice() != frame.rows() {
            return Err(FormError::CoordMismatch);
        }
        let t = frame.entries();
        let coeffs = &(&t.transpose() * &self.coeffs) * t;
        Ok(ConstTwoForm {
            coords: frame.cols().into(),
            coeffs,
        })
    }

    /// Relabel the coframe without touching coefficients (for identifying
    /// coordinates under a map that is the identity numerically, such as
    /// the lift `μ ↦ μ̂`).
    pub fn relabel(&self, coords: &[Coord]) -> ConstTwoForm {
        assert_eq!(coords.len(), self.coords.len());
        ConstTwoForm {
            coords: coords.into(),
            coeffs: self.coeffs.clone(),
        }
    }
}

/// `c₁ = (i/2π)·tr Θ` from the diagonal curvature entries of a bundle.
pub fn first_chern(diagonal: &[ConstTwoForm]) -> Result<ConstTwoForm, FormError> {
    let first = diagonal.first().ok_or(FormError::CoordMismatch)?;
    let mut trace = ConstTwoForm::zero(first.coords());
    for d in diagonal {
        trace = trace.add(d)?;
    }
    Ok(trace.scale(Complex64::new(0.0, 1.0 / (2.0 * PI))))
}

// ---------------------------------------------------------------------------
// curvature
// ---------------------------------------------------------------------------

/// Assemble `Θ = −∂∂̄L` from the real Hessian `H[i][j] = ∂ᵢ∂ⱼL` over
/// `(z₁, z₂, μ₁, μ₂)`. Single source of truth for the Wirtinger factors:
///
/// `∂_z∂_z̄ = ¼(∂₁² + ∂₂²)`,
/// `∂_z∂_μ̄ = ¼[(∂₁∂₃ + ∂₂∂₄) + i(∂₁∂₄ − ∂₂∂₃)]`.
fn wirtinger_curvature(h_mat: &[[f64; 4]; 4], domain: MetricDomain) -> ConstTwoForm {
    let dz_dzbar = Complex64::new(0.25 * (h_mat[Z1][Z1] + h_mat[Z2][Z2]), 0.0);
    match domain {
        MetricDomain::Torus => ConstTwoForm::from_wedge_terms(
            &TORUS_FRAME,
            &[(Coord::Z, Coord::ZBar, -dz_dzbar)],
        ),
        MetricDomain::Product => {
            let dmu_dmubar = Complex64::new(0.25 * (h_mat[M1][M1] + h_mat[M2][M2]), 0.0);
            let re = 0.25 * (h_mat[Z1][M1] + h_mat[Z2][M2]);
            let im = 0.25 * (h_mat[Z1][M2] - h_mat[Z2][M1]);
            let dz_dmubar = Complex64::new(re, im);
            let dmu_dzbar = Complex64::new(re, -im);
            ConstTwoForm::from_wedge_terms(
                &PRODUCT_FRAME,
                &[
                    (Coord::Z, Coord::ZBar, -dz_dzbar),
                    (Coord::Mu, Coord::MuBar, -dmu_dmubar),
                    (Coord::Z, Coord::MuBar, -dz_dmubar),
                    (Coord::Mu, Coord::ZBar, -dmu_dzbar),
                ],
            )
        }
    }
}

/// Chern curvature `Θ = −∂∂̄ log h`, exact since `log h` is quadratic.
pub fn curvature_closed(h: &QuadExpMetric) -> ConstTwoForm {
    let mut hess = [[0.0; 4]; 4];
    for (hrow, qrow) in hess.iter_mut().zip(&h.quad) {
        for (hv, qv) in hrow.iter_mut().zip(qrow) {
            *hv = 2.0 * qv;
        }
    }
    wirtinger_curvature(&hess, h.domain)
}

/// Finite-difference curvature oracle: central second differences of
/// `log h` at `(z, μ)` with the given step, combined through the same
/// Wirtinger conversion as [`curvature_closed`].
pub fn curvature_fd<F>(
    h: F,
    domain: MetricDomain,
    z: Complex64,
    mu: Complex64,
    step: f64,
) -> Result<ConstTwoForm, FormError>
where
    F: Fn(Complex64, Complex64) -> f64,
{
    if step.is_nan() || step <= 0.0 {
        return Err(FormError::BadStep);
    }
    let log_h = |v: [f64; 4]| -> Result<f64, FormError> {
        let val = h(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
        if val.is_nan() || val <= 0.0 {
            return Err(FormError::NonPositiveValue);
        }
        Ok(val.ln())
    };
    let base = [z.re, z.im, mu.re, mu.im];
    let active: &[usize] = match domain {
        MetricDomain::Torus => &[Z1, Z2],
        MetricDomain::Product => &[Z1, Z2, M1, M2],
    };
    let at = |di: isize, i: usize, dj: isize, j: usize| -> Result<f64, FormError> {
        let mut v = base;
        v[i] += di as f64 * step;
        v[j] += dj as f64 * step;
        log_h(v)
    };
    let l0 = log_h(base)?;
    let mut hess = [[0.0; 4]; 4];
    for &i in active {
        hess[i][i] = (at(1, i, 0, i)? - 2.0 * l0 + at(-1, i, 0, i)?) / (step * step);
    }
    for (a, &i) in active.iter().enumerate() {
        for &j in active.iter().skip(a + 1) {
            let mixed = (at(1, i, 1, j)? - at(1, i, -1, j)? - at(-1, i, 1, j)?
                + at(-1, i, -1, j)?)
                / (4.0 * step * step);
            hess[i][j] = mixed;
            hess[j][i] = mixed;
        }
    }
    Ok(wirtinger_curvature(&hess, domain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::coord::{DUAL_FRAME, REAL_FRAME};
    use crate::torus::{mu_to_x_frame, x_to_z_frame, xi_to_mu_hat_frame, TorusModulus};

    fn modulus(delta: u32, tau: Complex64) -> TorusModulus {
        TorusModulus::new(delta, tau).unwrap()
    }

    fn test_moduli() -> [TorusModulus; 3] {
        [
            modulus(1, c64(0.0, 1.0)),
            modulus(2, c64(0.0, 1.0)),
            modulus(3, c64(0.3, 1.1)),
        ]
    }

    #[test]
    fn reference_weight_curvature() {
        for m in test_moduli() {
            let theta = curvature_closed(&reference_weight(&m));
            let expect = ConstTwoForm::from_wedge_terms(
                &TORUS_FRAME,
                &[(Coord::Z, Coord::ZBar, c64(PI / m.tau2(), 0.0))],
            );
            assert!(theta.max_abs_diff(&expect).unwrap() < 1e-15);
        }
    }

    #[test]
    fn family_weight_curvature() {
        for m in test_moduli() {
            let theta = curvature_closed(&family_weight(&m));
            let p = c64(PI / m.tau2(), 0.0);
            let expect = ConstTwoForm::from_wedge_terms(
                &PRODUCT_FRAME,
                &[
                    (Coord::Z, Coord::ZBar, p),
                    (Coord::Mu, Coord::MuBar, p),
                    (Coord::Z, Coord::MuBar, p),
                    (Coord::Mu, Coord::ZBar, p),
                ],
            );
            assert!(theta.max_abs_diff(&expect).unwrap() < 1e-15);
        }
    }

    #[test]
    fn poincare_pullback_weight_curvature() {
        for m in test_moduli() {
            let theta = curvature_closed(&poincare_pullback_weight(&m));
            let p = c64(PI / m.tau2(), 0.0);
            let expect = ConstTwoForm::from_wedge_terms(
                &PRODUCT_FRAME,
                &[(Coord::Z, Coord::MuBar, p), (Coord::Mu, Coord::ZBar, p)],
            );
            assert!(theta.max_abs_diff(&expect).unwrap() < 1e-15);
        }
    }

    #[test]
    fn fd_matches_closed_for_every_weight() {
        for m in test_moduli() {
            let weights = [
                reference_weight(&m),
                family_weight(&m),
                poincare_pullback_weight(&m),
                direct_image_weight(&m),
            ];
            for w in weights {
                let closed = curvature_closed(&w);
                let fd = curvature_fd(
                    |z, mu| w.eval(z, mu),
                    w.domain(),
                    c64(0.23, 0.31),
                    c64(-0.17, 0.29),
                    1e-3,
                )
                .unwrap();
                let d = closed.max_abs_diff(&fd).unwrap();
                assert!(d < 1e-9, "fd/closed mismatch {d}");
            }
        }
    }

    #[test]
    fn fd_of_constant_weight_is_zero() {
        let fd = curvature_fd(
            |_, _| 2.5,
            MetricDomain::Product,
            c64(0.1, 0.2),
            c64(0.3, 0.4),
            1e-3,
        )
        .unwrap();
        assert!(fd.max_abs_diff(&ConstTwoForm::zero(&PRODUCT_FRAME)).unwrap() < 1e-12);
    }

    #[test]
    fn fd_is_log_additive_on_products() {
        let m = modulus(2, c64(0.3, 1.1));
        let h1 = reference_weight(&m);
        let h2 = poincare_pullback_weight(&m);
        let fd = curvature_fd(
            |z, mu| h1.eval(z, mu) * h2.eval(z, mu),
            MetricDomain::Product,
            c64(0.2, 0.1),
            c64(0.05, -0.3),
            1e-3,
        )
        .unwrap();
        let sum = curvature_closed(&h1.mul(&h2));
        assert!(fd.max_abs_diff(&sum).unwrap() < 1e-9);
    }

    #[test]
    fn fd_rejects_nonpositive_values() {
        let err = curvature_fd(
            |z, _| 0.5 - z.re,
            MetricDomain::Torus,
            c64(0.5, 0.0),
            c64(0.0, 0.0),
            1e-3,
        )
        .unwrap_err();
        assert_eq!(err, FormError::NonPositiveValue);
    }

    #[test]
    fn fd_order_of_accuracy_on_nonquadratic_weight() {
        // log h = -z2^2 + 0.3 cos(z1) sin(mu2) has analytic curvature;
        // FD error must shrink like step^2.
        let l = |z: Complex64, mu: Complex64| -z.im * z.im + 0.3 * z.re.cos() * mu.im.sin();
        let h = |z: Complex64, mu: Complex64| l(z, mu).exp();
        let z0 = c64(0.4, 0.3);
        let mu0 = c64(0.2, 0.6);
        // exact Hessian entries at (z0, mu0)
        let mut hess = [[0.0; 4]; 4];
        hess[Z2][Z2] = -2.0;
        hess[Z1][Z1] = -0.3 * z0.re.cos() * mu0.im.sin();
        hess[Z1][M2] = -0.3 * z0.re.sin() * mu0.im.cos();
        hess[M2][Z1] = hess[Z1][M2];
        hess[M2][M2] = -0.3 * z0.re.cos() * mu0.im.sin();
        let exact = wirtinger_curvature(&hess, MetricDomain::Product);

        let err_at = |s: f64| {
            curvature_fd(h, MetricDomain::Product, z0, mu0, s)
                .unwrap()
                .max_abs_diff(&exact)
                .unwrap()
        };
        let e1 = err_at(4e-3);
        let e2 = err_at(2e-3);
        let order = (e1 / e2).log2();
        assert!(order >= 1.9, "observed order {order} (errors {e1}, {e2})");
    }

    #[test]
    fn metric_transformation_laws_hold_exactly() {
        for m in test_moduli() {
            let t2 = m.tau2();
            let lam1 = c64(m.delta_f(), 0.0);
            let lam2 = m.tau();

            // reference weight: trivial along lambda_1, affine law along lambda_2
            let h = reference_weight(&m);
            assert!(h.shifted(lam1, c64(0.0, 0.0)).sub(&h).max_abs_coeff() < 1e-15);
            let law = QuadExpMetric::affine(
                MetricDomain::Torus,
                -2.0 * PI * t2,
                [0.0, -4.0 * PI, 0.0, 0.0],
            );
            let defect = h.shifted(lam2, c64(0.0, 0.0)).sub(&h.mul(&law));
            assert!(defect.max_abs_coeff() < 1e-12);

            // family weight: same law in z and in mu, with the mixed term
            let hf = family_weight(&m);
            let lawf = QuadExpMetric::affine(
                MetricDomain::Product,
                -2.0 * PI * t2,
                [0.0, -4.0 * PI, 0.0, -4.0 * PI],
            );
            let dz = hf.shifted(lam2, c64(0.0, 0.0)).sub(&hf.mul(&lawf));
            assert!(dz.max_abs_coeff() < 1e-12);
            let dm = hf.shifted(c64(0.0, 0.0), lam2).sub(&hf.mul(&lawf));
            assert!(dm.max_abs_coeff() < 1e-12);
            assert!(hf.shifted(lam1, c64(0.0, 0.0)).sub(&hf).max_abs_coeff() < 1e-15);
            assert!(hf.shifted(c64(0.0, 0.0), lam1).sub(&hf).max_abs_coeff() < 1e-15);

            // translated weight at fixed mu obeys the mu-shifted law
            let mu = c64(0.3, 0.45);
            let hmu = family_weight(&m).restrict_mu(mu);
            let lawmu = QuadExpMetric::affine(
                MetricDomain::Torus,
                -4.0 * PI * mu.im - 2.0 * PI * t2,
                [0.0, -4.0 * PI, 0.0, 0.0],
            );
            let dmu = hmu.shifted(lam2, c64(0.0, 0.0)).sub(&hmu.mul(&lawmu));
            assert!(dmu.max_abs_coeff() < 1e-12);
        }
    }

    #[test]
    fn family_weight_factorizes_exactly() {
        for m in test_moduli() {
            let product = reference_weight(&m)
                .mul(&poincare_pullback_weight(&m))
                .mul(&second_factor_weight(&m));
            assert!(product.coeffs_equal(&family_weight(&m)));
        }
    }

    #[test]
    fn direct_image_weight_is_family_without_second_factor() {
        for m in test_moduli() {
            let product = reference_weight(&m).mul(&poincare_pullback_weight(&m));
            assert!(product.coeffs_equal(&direct_image_weight(&m)));
            // and equals the translated weight times e^{2 pi mu2^2 / tau2}
            let mu = c64(0.21, 0.57);
            let lhs = direct_image_weight(&m).restrict_mu(mu);
            let factor = QuadExpMetric::affine(
                MetricDomain::Torus,
                2.0 * PI * mu.im * mu.im / m.tau2(),
                [0.0; 4],
            );
            let rhs = family_weight(&m).restrict_mu(mu).mul(&factor);
            assert!(lhs.sub(&rhs).max_abs_coeff() < 1e-12);
        }
    }

    #[test]
    fn poincare_pullback_weight_restricts_to_one_at_z_zero() {
        for m in test_moduli() {
            let r = poincare_pullback_weight(&m).restrict_z(c64(0.0, 0.0));
            assert_eq!(r.max_abs_coeff(), 0.0);
            assert_eq!(r.eval(c64(0.0, 0.0), c64(0.7, -0.4)), 1.0);
        }
    }

    #[test]
    fn swap_factors_moves_reference_weight_to_second_slot() {
        let m = modulus(2, c64(0.0, 1.0));
        let sw = reference_weight(&m).swap_factors();
        assert_eq!(sw.domain(), MetricDomain::Product);
        assert!(sw.coeffs_equal(&second_factor_weight(&m)));
    }

    #[test]
    fn change_frame_by_identity_is_identity() {
        let m = modulus(2, c64(0.3, 1.1));
        let theta = curvature_closed(&reference_weight(&m));
        let id = FrameMatrix::new(&TORUS_FRAME, &TORUS_FRAME, CMatrix::identity(2));
        let out = theta.change_frame(&id).unwrap();
        assert!(out.max_abs_diff(&theta).unwrap() == 0.0);
    }

    #[test]
    fn change_frame_rejects_wrong_labels() {
        let m = modulus(2, c64(0.3, 1.1));
        let theta = curvature_closed(&reference_weight(&m));
        let err = theta.change_frame(&mu_to_x_frame(&m)).unwrap_err();
        assert_eq!(err, FormError::CoordMismatch);
    }

    #[test]
    fn wedge_dmu_dmubar_in_real_frame() {
        // dmu ∧ dmu~ = -2i delta tau2 dx1 ∧ dx2
        for m in test_moduli() {
            let f = ConstTwoForm::from_wedge_terms(
                &[Coord::Mu, Coord::MuBar],
                &[(Coord::Mu, Coord::MuBar, c64(1.0, 0.0))],
            );
            let out = f.change_frame(&mu_to_x_frame(&m)).unwrap();
            let expect = ConstTwoForm::from_wedge_terms(
                &[Coord::X1, Coord::X2],
                &[(Coord::X1, Coord::X2, c64(0.0, -2.0 * m.delta_f() * m.tau2()))],
            );
            assert!(out.max_abs_diff(&expect).unwrap() < 1e-12);
        }
    }

    #[test]
    fn universal_curvature_pulls_back_to_poincare_curvature() {
        // dA = i(dxi1 ∧ dx1 + dxi2 ∧ dx2) expressed in (dz, dz~, dmuhat, dmuhat~)
        for m in test_moduli() {
            let i = c64(0.0, 1.0);
            let da = ConstTwoForm::from_wedge_terms(
                &REAL_FRAME,
                &[(Coord::Xi1, Coord::X1, i), (Coord::Xi2, Coord::X2, i)],
            );
            let frame = FrameMatrix::block_diag(&x_to_z_frame(&m), &xi_to_mu_hat_frame(&m));
            let pushed = da.change_frame(&frame).unwrap();
            let p = c64(PI / m.tau2(), 0.0);
            let expect = ConstTwoForm::from_wedge_terms(
                &[Coord::Z, Coord::ZBar, Coord::MuHat, Coord::MuHatBar],
                &[
                    (Coord::Z, Coord::MuHatBar, p),
                    (Coord::MuHat, Coord::ZBar, p),
                ],
            );
            assert!(pushed.max_abs_diff(&expect).unwrap() < 1e-12);

            // after the identity relabel muhat -> mu this is the closed-form
            // curvature of the Poincare pullback weight
            let relabeled = pushed.relabel(&PRODUCT_FRAME);
            let closed = curvature_closed(&poincare_pullback_weight(&m));
            assert!(relabeled.max_abs_diff(&closed).unwrap() < 1e-12);
        }
    }

    #[test]
    fn first_chern_of_dual_curvature() {
        for m in test_moduli() {
            let d = m.delta() as usize;
            let p = c64(-PI / m.tau2(), 0.0);
            let diag: alloc::vec::Vec<_> = (0..d)
                .map(|_| {
                    ConstTwoForm::from_wedge_terms(
                        &DUAL_FRAME,
                        &[(Coord::MuHat, Coord::MuHatBar, p)],
                    )
                })
                .collect();
            let c1 = first_chern(&diag).unwrap();
            let expect = ConstTwoForm::from_wedge_terms(
                &DUAL_FRAME,
                &[(
                    Coord::MuHat,
                    Coord::MuHatBar,
                    c64(0.0, -m.delta_f() / (2.0 * m.tau2())),
                )],
            );
            assert!(c1.max_abs_diff(&expect).unwrap() < 1e-14);
        }
    }

    #[test]
    fn first_chern_of_zero_is_zero() {
        let z = ConstTwoForm::zero(&DUAL_FRAME);
        let c1 = first_chern(&[z.clone(), z.clone()]).unwrap();
        assert!(c1.max_abs_diff(&ConstTwoForm::zero(&DUAL_FRAME)).unwrap() == 0.0);
    }

    #[test]
    fn diagonal_curvature_in_lattice_frame_is_two_pi_i_delta() {
        // per-diagonal -(pi/tau2) dmu ∧ dmu~ becomes 2 pi i delta dx1 ∧ dx2,
        // and the trace yields c1 = -delta^2 dx1 ∧ dx2 = -delta * omega
        for m in test_moduli() {
            let diag_mu = ConstTwoForm::from_wedge_terms(
                &[Coord::Mu, Coord::MuBar],
                &[(Coord::Mu, Coord::MuBar, c64(-PI / m.tau2(), 0.0))],
            );
            let in_x = diag_mu.change_frame(&mu_to_x_frame(&m)).unwrap();
            let expect = ConstTwoForm::from_wedge_terms(
                &[Coord::X1, Coord::X2],
                &[(Coord::X1, Coord::X2, c64(0.0, 2.0 * PI * m.delta_f()))],
            );
            assert!(in_x.max_abs_diff(&expect).unwrap() < 1e-12);

            let diag: alloc::vec::Vec<_> = (0..m.delta() as usize).map(|_| in_x.clone()).collect();
            let c1 = first_chern(&diag).unwrap();
            let omega_coeff = c1.coefficient(Coord::X1, Coord::X2);
            let expect_c1 = -m.delta_f() * m.delta_f();
            assert!((omega_coeff - c64(expect_c1, 0.0)).norm() < 1e-12);
        }
    }
}
