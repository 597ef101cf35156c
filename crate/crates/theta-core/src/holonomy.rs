//! Characters, flat `U(1)` connections, and the universal connection
//! `d + iξ` over `M × M*`.
//!
//! Paths live on the cover `V × V*` in coordinates `(x₁, x₂, ξ₁, ξ₂)`,
//! where `(x₁, x₂)` are lattice coordinates (dual pairing `⟨dxᵢ, λⱼ⟩ = δᵢⱼ`)
//! and `ξ = ξ₁dx₁ + ξ₂dx₂`. The quotient by `2πΛ*` glues the fibres with
//! the factor `e^{−2πi⟨ν, x⟩}`; transport along a path that closes up on
//! the quotient picks up that factor once, evaluated at the endpoint
//! (well-defined because `⟨ν, λ⟩ ∈ ℤ`). Along `M` itself the bundle is an
//! honest product, so lattice translations in `x` glue trivially.
//!
//! Transport integrates the abelian phase `φ′(t) = −A(γ(t), γ′(t))` with
//! the classical fourth-order one-step scheme and exponentiates once, so
//! `|σ| = 1` holds to roundoff. The plaquette extractor in
//! [`loop_curvature`] instead advances `σ′ = −Aσ` directly; its step-size
//! truncation is the controlled error that makes the convergence-order
//! measurement meaningful.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
// f64 math via the trait in no_std builds; std builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::coord::{Coord, REAL_FRAME};
use crate::forms::{curvature_closed, poincare_pullback_weight, ConstTwoForm};
use crate::torus::{x_to_z_frame, xi_to_mu_hat_frame, FrameMatrix, TorusModulus, XiPoint};

const TWO_PI: f64 = core::f64::consts::TAU;
const PI: f64 = core::f64::consts::PI;

/// Point of `V × V*` in `(x₁, x₂, ξ₁, ξ₂)` coordinates.
pub type PathPoint = [f64; 4];

/// Error from holonomy computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HolonomyError {
    /// The argument must be a lattice vector (integer coordinates, or
    /// `2π`-integer for the dual lattice).
    NotLatticeVector,
    /// Fewer than 16 integration steps requested.
    TooFewSteps,
    /// A square side must be positive.
    BadSide,
}

impl fmt::Display for HolonomyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolonomyError::NotLatticeVector => f.write_str("not a lattice vector"),
            HolonomyError::TooFewSteps => f.write_str("need at least 16 integration steps"),
            HolonomyError::BadSide => f.write_str("loop side must be positive"),
        }
    }
}

/// `U(1)` character of a lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Character {
    /// `χ_ξ(λ) = e^{−i⟨ξ, λ⟩}` on `Λ`.
    LatticeOnTorus { xi: XiPoint },
    /// `χ_x(2πν) = e^{−2πi⟨ν, x⟩}` on `2πΛ*`; `x` in lattice coordinates.
    DualLattice { x1: f64, x2: f64 },
}

const LATTICE_TOL: f64 = 1e-9;

fn as_integer(v: f64) -> Result<f64, HolonomyError> {
    let r = v.round();
    if (v - r).abs() > LATTICE_TOL {
        return Err(HolonomyError::NotLatticeVector);
    }
    Ok(r)
}

/// Value of the character on a lattice vector given in the coordinates of
/// its lattice (`(n₁, n₂)` for `Λ`, `2π(ν₁, ν₂)` for `2πΛ*`).
pub fn character_value(chi: &Character, v: [f64; 2]) -> Result<Complex64, HolonomyError> {
    match chi {
        Character::LatticeOnTorus { xi } => {
            let n1 = as_integer(v[0])?;
            let n2 = as_integer(v[1])?;
            Ok(Complex64::new(0.0, -(xi.xi1 * n1 + xi.xi2 * n2)).exp())
        }
        Character::DualLattice { x1, x2 } => {
            let nu1 = as_integer(v[0] / TWO_PI)?;
            let nu2 = as_integer(v[1] / TWO_PI)?;
            Ok(Complex64::new(0.0, -TWO_PI * (nu1 * x1 + nu2 * x2)).exp())
        }
    }
}

/// Connection 1-form evaluated on tangent vectors of `M × V*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConnectionOneForm {
    /// `∇^ξ = d + iξ` at a fixed `ξ` (a flat connection on `M`).
    FlatXi(XiPoint),
    /// The universal connection `d + iξ` with `ξ` read off the base point.
    Universal,
}

impl ConnectionOneForm {
    /// `A(p, t)`, purely imaginary for real inputs.
    pub fn value(&self, p: &PathPoint, tangent: &PathPoint) -> Complex64 {
        let (xi1, xi2) = match self {
            ConnectionOneForm::FlatXi(xi) => (xi.xi1, xi.xi2),
            ConnectionOneForm::Universal => (p[2], p[3]),
        };
        Complex64::new(0.0, xi1 * tangent[0] + xi2 * tangent[1])
    }
}

fn lerp(a: &PathPoint, b: &PathPoint, t: f64) -> PathPoint {
    [
        a[0] + (b[0] - a[0]) * t,
        a[1] + (b[1] - a[1]) * t,
        a[2] + (b[2] - a[2]) * t,
        a[3] + (b[3] - a[3]) * t,
    ]
}

fn segment_tangent(a: &PathPoint, b: &PathPoint) -> PathPoint {
    [b[0] - a[0], b[1] - a[1], b[2] - a[2], b[3] - a[3]]
}

/// Parallel transport `σ(1)` of `σ′ = −A(γ, γ′)σ`, `σ(0) = 1`, along a
/// piecewise-linear path, with `n_steps` fourth-order steps per segment.
///
/// The phase is accumulated and exponentiated once. When the path closes
/// up on `M × M*` (endpoint minus start in `Λ × 2πΛ*`) the `2πΛ*` gluing
/// factor `e^{−2πi⟨ν, x_end⟩}` is applied, realizing the dual character as
/// the holonomy of ξ-direction loops.
pub fn parallel_transport(
    a: &ConnectionOneForm,
    path: &[PathPoint],
    n_steps: u32,
) -> Result<Complex64, HolonomyError> {
    if n_steps < 16 {
        return Err(HolonomyError::TooFewSteps);
    }
    if path.len() < 2 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut phase = Complex64::new(0.0, 0.0);
    for seg in path.windows(2) {
        let (p, q) = (&seg[0], &seg[1]);
        let tangent = segment_tangent(p, q);
        if tangent.iter().all(|&c| c == 0.0) {
            continue;
        }
        let h = 1.0 / n_steps as f64;
        let f = |t: f64| -a.value(&lerp(p, q, t), &tangent);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n_steps {
            let t = k as f64 * h;
            // classical RK4 on phi' = f(t): Simpson weights
            let k1 = f(t);
            let k2 = f(t + 0.5 * h);
            let k4 = f(t + h);
            acc += (k1 + k2 * 4.0 + k4) * (h / 6.0);
        }
        phase += acc;
    }

    let start = &path[0];
    let end = path.last().expect("non-empty path");
    let dx1 = end[0] - start[0];
    let dx2 = end[1] - start[1];
    let dxi1 = end[2] - start[2];
    let dxi2 = end[3] - start[3];
    let closes_in_x = (dx1 - dx1.round()).abs() <= LATTICE_TOL
        && (dx2 - dx2.round()).abs() <= LATTICE_TOL;
    let nu1 = dxi1 / TWO_PI;
    let nu2 = dxi2 / TWO_PI;
    let closes_in_xi = (nu1 - nu1.round()).abs() <= LATTICE_TOL
        && (nu2 - nu2.round()).abs() <= LATTICE_TOL;
    if closes_in_x && closes_in_xi && (nu1.round() != 0.0 || nu2.round() != 0.0) {
        phase += Complex64::new(0.0, -TWO_PI * (nu1.round() * end[0] + nu2.round() * end[1]));
    }
    Ok(phase.exp())
}

/// Plaquette curvature: `−log` of the holonomy around the axis-aligned
/// square loop in `plane` at `center`, divided by `side²`. The loop
/// traverses `+u, +v, −u, −v`; the result converges to the coefficient of
/// `du∧dv` in the curvature 2-form.
///
/// Transport here advances `σ′ = −Aσ` by classical RK4 with
/// `n_steps_per_side` steps on each side, so the extraction error scales
/// like a power of `side` instead of sitting at the roundoff floor.
pub fn loop_curvature(
    a: &ConnectionOneForm,
    center: &PathPoint,
    plane: (Coord, Coord),
    side: f64,
    n_steps_per_side: u32,
) -> Result<Complex64, HolonomyError> {
    if side.is_nan() || side <= 0.0 {
        return Err(HolonomyError::BadSide);
    }
    if n_steps_per_side < 16 {
        return Err(HolonomyError::TooFewSteps);
    }
    let axis = |c: Coord| -> usize {
        match c {
            Coord::X1 => 0,
            Coord::X2 => 1,
            Coord::Xi1 => 2,
            Coord::Xi2 => 3,
            _ => panic!("loop plane must use (x1, x2, xi1, xi2) directions"),
        }
    };
    let (u, v) = (axis(plane.0), axis(plane.1));
    assert_ne!(u, v, "degenerate plane");

    let mut verts: Vec<PathPoint> = Vec::with_capacity(5);
    let mut p = *center;
    verts.push(p);
    p[u] += side;
    verts.push(p);
    p[v] += side;
    verts.push(p);
    p[u] -= side;
    verts.push(p);
    p[v] -= side;
    verts.push(p);

    let mut sigma = Complex64::new(1.0, 0.0);
    let h = 1.0 / n_steps_per_side as f64;
    for seg in verts.windows(2) {
        let (pp, q) = (&seg[0], &seg[1]);
        let tangent = segment_tangent(pp, q);
        let f = |t: f64, s: Complex64| -a.value(&lerp(pp, q, t), &tangent) * s;
        for k in 0..n_steps_per_side {
            let t = k as f64 * h;
            let k1 = f(t, sigma);
            let k2 = f(t + 0.5 * h, sigma + k1 * (0.5 * h));
            let k3 = f(t + 0.5 * h, sigma + k2 * (0.5 * h));
            let k4 = f(t + h, sigma + k3 * h);
            sigma += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
    }
    Ok(-sigma.ln() / (side * side))
}

/// Curvature `dA = i(dξ₁∧dx₁ + dξ₂∧dx₂)` of the universal connection, as a
/// constant form over `(dx₁, dx₂, dξ₁, dξ₂)`.
pub fn universal_curvature_form() -> ConstTwoForm {
    let i = Complex64::new(0.0, 1.0);
    ConstTwoForm::from_wedge_terms(
        &REAL_FRAME,
        &[(Coord::Xi1, Coord::X1, i), (Coord::Xi2, Coord::X2, i)],
    )
}

/// Outcome of the pullback identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullbackReport {
    /// Coefficient mismatch against `(π/τ₂)(dz∧dμ̂̄ + dμ̂∧dz̄)`.
    pub dual_frame_mismatch: f64,
    /// Mismatch against the closed-form curvature of the pulled-back
    /// Poincaré weight after the `μ̂ → μ` relabel.
    pub product_frame_mismatch: f64,
    pub pass: bool,
}

/// Push `dA` through explicit frame matrices and compare against the two
/// closed-form curvature expressions.
pub fn pullback_curvature_check_with(
    m: &TorusModulus,
    xi_frame: &FrameMatrix,
) -> PullbackReport {
    let frame = FrameMatrix::block_diag(&x_to_z_frame(m), xi_frame);
    let pushed = universal_curvature_form()
        .change_frame(&frame)
        .expect("frame labels chain by construction");

    let p = Complex64::new(PI / m.tau2(), 0.0);
    let expect = ConstTwoForm::from_wedge_terms(
        &[Coord::Z, Coord::ZBar, Coord::MuHat, Coord::MuHatBar],
        &[(Coord::Z, Coord::MuHatBar, p), (Coord::MuHat, Coord::ZBar, p)],
    );
    let dual_frame_mismatch = pushed.max_abs_diff(&expect).expect("same frame");

    let relabeled = pushed.relabel(&crate::coord::PRODUCT_FRAME);
    let closed = curvature_closed(&poincare_pullback_weight(m));
    let product_frame_mismatch = relabeled.max_abs_diff(&closed).expect("same frame");

    PullbackReport {
        dual_frame_mismatch,
        product_frame_mismatch,
        pass: dual_frame_mismatch <= 1e-12 && product_frame_mismatch <= 1e-12,
    }
}

/// The pullback identity with the canonical frame matrices.
pub fn pullback_curvature_check(m: &TorusModulus) -> PullbackReport {
    pullback_curvature_check_with(m, &xi_to_mu_hat_frame(m))
}
