//! L² inner products, Gram fields and adiabatic curvature.
//!
//! The inner product on sections of a translated bundle is
//!
//! ```text
//! (f, g) = ∫_M h(z) f(z) conj(g(z)) (i/2) dz∧dz̄,
//! ```
//!
//! integrated over the fundamental domain as the rectangle
//! `[0, δ) × [0, τ₂)` in `(z₁, z₂)`. The integrand is `Λ`-periodic whenever
//! the sections and the weight belong to the same bundle, and the
//! `z₁`-integrated function is `τ₂`-periodic because a `z₂`-period equals a
//! lattice translation combined with a `z₁`-shift, under which the inner
//! integral is invariant. Equal-weight (trapezoid) tensor quadrature is
//! therefore spectrally accurate; node counts of 64 already reach the
//! roundoff floor for the weights in this crate.
//!
//! Quadrature sums are Neumaier-compensated: the adiabatic curvature
//! divides second differences of Gram matrices by `step²`, so the noise
//! floor of each entry has to stay near `2ε·Σ|terms|`.
//!
//! The curvature of the Chern connection of a Gram field `G(μ)` is
//! `∂̄(G⁻¹∂G)`; with `X = G⁻¹∂_μ̄∂_μG − G⁻¹(∂_μ̄G)G⁻¹(∂_μG)` the form is
//! `X dμ̄∧dμ = (−X) dμ∧dμ̄`, and the `dμ∧dμ̄` coefficient `−X` is what
//! [`adiabatic_curvature`] returns.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
// f64 math via the trait in no_std builds; std builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::forms::{direct_image_weight, family_weight, QuadExpMetric};
use crate::linalg::{CMatrix, CompensatedSum, LinalgError};
use crate::theta::{ThetaError, ThetaFamily};
use crate::torus::TorusModulus;

const PI: f64 = core::f64::consts::PI;

/// Residual above which the integrand is declared non-periodic (a
/// mismatched cocycle/metric combination).
pub const PERIODICITY_TOL: f64 = 1e-8;

/// Trapezoid node counts in `z₁ ∈ [0, δ)` and `z₂ ∈ [0, τ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    n1: usize,
    n2: usize,
}

impl QuadratureSpec {
    pub fn new(n1: usize, n2: usize) -> Result<Self, L2Error> {
        if n1 < 4 || n2 < 4 {
            return Err(L2Error::QuadratureTooCoarse);
        }
        Ok(QuadratureSpec { n1, n2 })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Same rule with both node counts doubled.
    pub fn refined(&self) -> QuadratureSpec {
        QuadratureSpec {
            n1: self.n1 * 2,
            n2: self.n2 * 2,
        }
    }
}

/// Which family weight backs the Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramMetric {
    /// Translated weight `h(z+μ)`; the Gram field of the push-forward of
    /// the family bundle. Constant in `μ`.
    Translated,
    /// Direct-image weight `e^{−2π(z₂²+2z₂μ₂)/τ₂}`; the Gram field of the
    /// spectral bundle over the translation parameter.
    DirectImage,
}

impl GramMetric {
    /// The z-only weight at a fixed `μ`.
    pub fn weight_at(self, m: &TorusModulus, mu: Complex64) -> QuadExpMetric {
        match self {
            GramMetric::Translated => family_weight(m).restrict_mu(mu),
            GramMetric::DirectImage => direct_image_weight(m).restrict_mu(mu),
        }
    }
}

impl fmt::Display for GramMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GramMetric::Translated => f.write_str("translated"),
            GramMetric::DirectImage => f.write_str("direct-image"),
        }
    }
}

/// Error from the L² machinery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum L2Error {
    /// Node counts below 4 per direction.
    QuadratureTooCoarse,
    /// Boundary spot-check failed: sections and weight do not belong to the
    /// same bundle.
    PeriodicityMismatch { residual: f64 },
    /// Gram matrix singular (or stencil inversion failed).
    Singular,
    /// Invalid theta family parameters.
    Theta(ThetaError),
}

impl fmt::Display for L2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            L2Error::QuadratureTooCoarse => f.write_str("need at least 4 nodes per direction"),
            L2Error::PeriodicityMismatch { residual } => {
                write!(f, "integrand is not lattice-periodic (residual {residual:.3e})")
            }
            L2Error::Singular => f.write_str("Gram matrix is singular"),
            L2Error::Theta(e) => write!(f, "theta family: {e}"),
        }
    }
}

impl From<ThetaError> for L2Error {
    fn from(e: ThetaError) -> Self {
        L2Error::Theta(e)
    }
}

impl From<LinalgError> for L2Error {
    fn from(_: LinalgError) -> Self {
        L2Error::Singular
    }
}

/// Closed-form norm² of the m-th theta section under the translated weight:
/// `√(τ₂/2)·δ·e^{2πm²τ₂/δ²}`, independent of `μ`.
pub fn theta_norm_closed_form(m: &TorusModulus, m_index: u32) -> f64 {
    let r = m_index as f64;
    (m.tau2() / 2.0).sqrt()
        * m.delta_f()
        * (2.0 * PI * r * r * m.tau2() / (m.delta_f() * m.delta_f())).exp()
}

fn periodicity_check<F>(integrand: &F, m: &TorusModulus, label_scale: f64) -> Result<(), L2Error>
where
    F: Fn(Complex64, Complex64) -> Complex64,
{
    // 4 pairs across the z1 seam and 4 across the z2 seam; a z2 period is
    // the lattice translation by tau, so the second seam closes at the
    // tau1-sheared point.
    let d = m.delta_f();
    let t2 = m.tau2();
    let t1 = m.tau1();
    let mut worst = 0.0f64;
    for k in 0..4 {
        let t = (0.13 + 0.22 * k as f64) * t2;
        let a = integrand(Complex64::new(0.0, t), Complex64::new(d, t));
        let s = (0.09 + 0.24 * k as f64) * d;
        let b = integrand(Complex64::new(s, 0.0), Complex64::new(s + t1, t2));
        worst = worst.max(a.norm()).max(b.norm());
    }
    let scale = 1.0 + label_scale;
    let worst = worst / scale;
    if worst > PERIODICITY_TOL {
        return Err(L2Error::PeriodicityMismatch { residual: worst });
    }
    Ok(())
}

/// L² inner product `(f, g)` of two section evaluators under the z-only
/// weight `h`, by equal-weight tensor quadrature.
///
/// Fails when the boundary spot-check sees a non-periodic integrand.
pub fn l2_inner<F, G>(
    f: F,
    g: G,
    h: &QuadExpMetric,
    m: &TorusModulus,
    q: &QuadratureSpec,
) -> Result<Complex64, L2Error>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    let integrand = |z: Complex64| h.eval(z, Complex64::new(0.0, 0.0)) * f(z) * g(z).conj();
    // scale for the relative periodicity residual
    let probe = integrand(Complex64::new(0.23 * m.delta_f(), 0.41 * m.tau2()));
    periodicity_check(
        &|a: Complex64, b: Complex64| integrand(a) - integrand(b),
        m,
        probe.norm(),
    )?;

    let (n1, n2) = (q.n1, q.n2);
    let dx = m.delta_f() / n1 as f64;
    let dy = m.tau2() / n2 as f64;
    let mut sum = CompensatedSum::new();
    for j in 0..n2 {
        let z2 = j as f64 * dy;
        for i in 0..n1 {
            let z1 = i as f64 * dx;
            sum.add(integrand(Complex64::new(z1, z2)));
        }
    }
    Ok(sum.value() * (dx * dy))
}

/// Gram matrix of the theta frame `{θ_a(·, μ)}` at `μ` under the chosen
/// family weight, Hermitized by conjugate-transpose averaging.
pub fn gram(
    mu: Complex64,
    metric: GramMetric,
    m: &TorusModulus,
    eps: f64,
    q: &QuadratureSpec,
) -> Result<CMatrix, L2Error> {
    let delta = m.delta() as usize;
    let h = metric.weight_at(m, mu);
    let families: Vec<ThetaFamily> = (0..delta as u32)
        .map(|a| ThetaFamily::new(*m, a, eps))
        .collect::<Result<_, _>>()?;

    // boundary check per section: h(z) |theta_a(z+mu)|^2 must close up
    for fam in &families {
        let integrand = |z: Complex64| {
            let v = fam.eval_family(z, mu);
            h.eval(z, Complex64::new(0.0, 0.0)) * v * v.conj()
        };
        let probe = integrand(Complex64::new(0.23 * m.delta_f(), 0.41 * m.tau2()));
        periodicity_check(
            &|a: Complex64, b: Complex64| integrand(a) - integrand(b),
            m,
            probe.norm(),
        )?;
    }

    let (n1, n2) = (q.n1, q.n2);
    let dx = m.delta_f() / n1 as f64;
    let dy = m.tau2() / n2 as f64;
    let n_pts = n1 * n2;

    // precompute weight and section values over the grid
    let mut weight = vec![0.0f64; n_pts];
    let mut sections = vec![Complex64::new(0.0, 0.0); delta * n_pts];
    for j in 0..n2 {
        let z2 = j as f64 * dy;
        for i in 0..n1 {
            let z1 = i as f64 * dx;
            let z = Complex64::new(z1, z2);
            let p = j * n1 + i;
            weight[p] = h.eval(z, Complex64::new(0.0, 0.0));
            for (a, fam) in families.iter().enumerate() {
                sections[a * n_pts + p] = fam.eval_family(z, mu);
            }
        }
    }

    let mut gram = CMatrix::zeros(delta, delta);
    for a in 0..delta {
        for b in 0..delta {
            let mut sum = CompensatedSum::new();
            for p in 0..n_pts {
                sum.add(weight[p] * sections[a * n_pts + p] * sections[b * n_pts + p].conj());
            }
            gram[(a, b)] = sum.value() * (dx * dy);
        }
    }
    Ok(gram.hermitize())
}

/// Gram matrices over a `side×side` grid of `μ` values in the fundamental
/// domain.
#[derive(Debug, Clone)]
pub struct GramField {
    pub metric: GramMetric,
    pub mu_grid: Vec<Complex64>,
    pub grams: Vec<CMatrix>,
}

pub fn gram_field(
    metric: GramMetric,
    m: &TorusModulus,
    eps: f64,
    q: &QuadratureSpec,
    side: usize,
) -> Result<GramField, L2Error> {
    let mut mu_grid = Vec::with_capacity(side * side);
    let mut grams = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let s = i as f64 / side as f64;
            let t = j as f64 / side as f64;
            let mu = Complex64::new(s * m.delta_f() + t * m.tau1(), t * m.tau2());
            mu_grid.push(mu);
            grams.push(gram(mu, metric, m, eps, q)?);
        }
    }
    Ok(GramField {
        metric,
        mu_grid,
        grams,
    })
}

/// 3×3 stencil of Gram matrices around a center, spacing `step` in both
/// `μ₁` and `μ₂`.
#[derive(Debug, Clone)]
pub struct GramStencil {
    pub center: Complex64,
    pub step: f64,
    /// Row-major `g[(di+1)*3 + (dj+1)]` at `μ = center + di·step + i·dj·step`.
    pub g: Vec<CMatrix>,
}

pub fn gram_stencil(
    center: Complex64,
    step: f64,
    metric: GramMetric,
    m: &TorusModulus,
    eps: f64,
    q: &QuadratureSpec,
) -> Result<GramStencil, L2Error> {
    let mut g = Vec::with_capacity(9);
    for di in -1i32..=1 {
        for dj in -1i32..=1 {
            let mu = center + Complex64::new(di as f64 * step, dj as f64 * step);
            g.push(gram(mu, metric, m, eps, q)?);
        }
    }
    Ok(GramStencil { center, step, g })
}

impl GramStencil {
    fn at(&self, di: i32, dj: i32) -> &CMatrix {
        &self.g[((di + 1) * 3 + (dj + 1)) as usize]
    }

    /// 1-norm condition estimate of the center Gram matrix.
    pub fn center_condition(&self) -> Result<f64, L2Error> {
        Ok(self.at(0, 0).condition_estimate()?)
    }
}

/// Coefficient of `dμ∧dμ̄` in the Chern curvature of the Gram field,
/// `−[G⁻¹(∂_μ̄∂_μG) − G⁻¹(∂_μ̄G)G⁻¹(∂_μG)]`, by central differences on the
/// stencil.
pub fn adiabatic_curvature(st: &GramStencil) -> Result<CMatrix, L2Error> {
    let h = st.step;
    let g0 = st.at(0, 0);
    let d1 = (st.at(1, 0) - st.at(-1, 0)).scale(Complex64::new(1.0 / (2.0 * h), 0.0));
    let d2 = (st.at(0, 1) - st.at(0, -1)).scale(Complex64::new(1.0 / (2.0 * h), 0.0));
    let d11 = (&(st.at(1, 0) + st.at(-1, 0)) - &g0.scale(Complex64::new(2.0, 0.0)))
        .scale(Complex64::new(1.0 / (h * h), 0.0));
    let d22 = (&(st.at(0, 1) + st.at(0, -1)) - &g0.scale(Complex64::new(2.0, 0.0)))
        .scale(Complex64::new(1.0 / (h * h), 0.0));

    let half = Complex64::new(0.5, 0.0);
    let i = Complex64::new(0.0, 1.0);
    // d/dmu = (d1 - i d2)/2, d/dmubar = (d1 + i d2)/2, mixed = (d11+d22)/4
    let dmu = (&d1 - &d2.scale(i)).scale(half);
    let dmubar = (&d1 + &d2.scale(i)).scale(half);
    let mixed = (&d11 + &d22).scale(Complex64::new(0.25, 0.0));

    let ginv = g0.inverse()?;
    let x = &(&ginv * &mixed) - &(&(&ginv * &dmubar) * &(&ginv * &dmu));
    Ok(x.scale(Complex64::new(-1.0, 0.0)))
}

/// The same curvature read on the dual torus.
///
/// The lift `μ ↦ μ̂` is the identity in coordinates, so the matrix is the
/// exact relabel of [`adiabatic_curvature`]; the returned coefficient is
/// that of `dμ̂∧dμ̂̄`.
pub fn curvature_on_dual(st: &GramStencil) -> Result<CMatrix, L2Error> {
    adiabatic_curvature(st)
}

/// Adiabatic curvature with one Richardson step: stencils at `step` and
/// `step/2` combine as `(4·X_{h/2} − X_h)/3`, cancelling the `O(h²)`
/// truncation of the central differences. The plain `step = 1e-3` value
/// carries a few units of `1e-5` relative truncation through the Gaussian
/// factor's fourth derivatives, so tighter comparisons go through here.
pub fn adiabatic_curvature_richardson(
    center: Complex64,
    step: f64,
    metric: GramMetric,
    m: &TorusModulus,
    eps: f64,
    q: &QuadratureSpec,
) -> Result<CMatrix, L2Error> {
    let coarse = adiabatic_curvature(&gram_stencil(center, step, metric, m, eps, q)?)?;
    let fine = adiabatic_curvature(&gram_stencil(center, step * 0.5, metric, m, eps, q)?)?;
    let third = Complex64::new(1.0 / 3.0, 0.0);
    Ok((&fine.scale(Complex64::new(4.0, 0.0)) - &coarse).scale(third))
}

/// Numerical shadow of the holomorphic splitting: the translated-weight
/// Gram field is a constant diagonal matrix, and the direct-image Gram
/// field is that constant diagonal scaled by `e^{2πμ₂²/τ₂}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingReport {
    /// max off-diagonal over max diagonal, translated-weight field.
    pub max_offdiag_ratio: f64,
    /// max relative deviation of the translated-weight Gram from its value
    /// at the first grid point.
    pub max_mu_variation: f64,
    /// max relative mismatch of the direct-image Gram against
    /// `e^{2πμ₂²/τ₂}` times the constant diagonal.
    pub max_factor_mismatch: f64,
    pub offdiag_ok: bool,
    pub constancy_ok: bool,
    pub factor_ok: bool,
    pub pass: bool,
}

pub const SPLITTING_OFFDIAG_TOL: f64 = 1e-10;
pub const SPLITTING_CONSTANCY_TOL: f64 = 1e-10;
pub const SPLITTING_FACTOR_TOL: f64 = 1e-9;

pub fn splitting_report(
    m: &TorusModulus,
    eps: f64,
    q: &QuadratureSpec,
    side: usize,
) -> Result<SplittingReport, L2Error> {
    let translated = gram_field(GramMetric::Translated, m, eps, q, side)?;
    let reference = &translated.grams[0];
    let max_diag = (0..reference.n_rows())
        .map(|i| reference[(i, i)].norm())
        .fold(0.0, f64::max);

    let mut max_offdiag = 0.0f64;
    let mut max_var = 0.0f64;
    for g in &translated.grams {
        max_offdiag = max_offdiag.max(g.max_abs_offdiag());
        max_var = max_var.max((g - reference).max_abs());
    }
    let max_offdiag_ratio = max_offdiag / max_diag;
    let max_mu_variation = max_var / max_diag;

    let direct = gram_field(GramMetric::DirectImage, m, eps, q, side)?;
    let mut max_factor_mismatch = 0.0f64;
    for (mu, g) in direct.mu_grid.iter().zip(&direct.grams) {
        let factor = (2.0 * PI * mu.im * mu.im / m.tau2()).exp();
        let expect = reference.scale(Complex64::new(factor, 0.0));
        max_factor_mismatch = max_factor_mismatch.max((g - &expect).max_abs() / (factor * max_diag));
    }

    let offdiag_ok = max_offdiag_ratio <= SPLITTING_OFFDIAG_TOL;
    let constancy_ok = max_mu_variation <= SPLITTING_CONSTANCY_TOL;
    let factor_ok = max_factor_mismatch <= SPLITTING_FACTOR_TOL;
    Ok(SplittingReport {
        max_offdiag_ratio,
        max_mu_variation,
        max_factor_mismatch,
        offdiag_ok,
        constancy_ok,
        factor_ok,
        pass: offdiag_ok && constancy_ok && factor_ok,
    })
}
