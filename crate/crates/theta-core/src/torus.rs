//! Moduli data and coordinate charts.
//!
//! The lattice is `Λ = ℤ{λ₁, λ₂}` with `λ₁ = δe₁`, `λ₂ = τe₁`, `Im τ > 0`.
//! All complex coordinates are in `e₁` units (resp. `e₁*` units on the dual
//! torus), so the generators are simply the complex numbers `δ` and `τ` and
//! every displayed constant below stays dimensionless.
//!
//! Besides the modulus itself this module holds the three linear maps the
//! rest of the crate keeps re-deriving wrong by hand if left to its own
//! devices: the real frame change `(dx₁, dx₂) ↔ (dz, dz̄)`, the group
//! isomorphism `M̂ → M*`, and the lift `M → M̂` of the polarization map.

use core::fmt;

use num_complex::Complex64;
// f64 math via the trait in no_std builds; std builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::coord::Coord;
use crate::linalg::CMatrix;

/// Coordinate of a point on `M` (or its cover `V`), in `e₁` units.
pub type ZPoint = Complex64;

/// Degree and lattice shape `(δ, τ)` of the torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusModulus {
    delta: u32,
    tau: Complex64,
}

/// Rejected modulus data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusError {
    DegreeZero,
    TauNotInUpperHalfPlane,
}

impl fmt::Display for ModulusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModulusError::DegreeZero => f.write_str("degree must satisfy delta >= 1"),
            ModulusError::TauNotInUpperHalfPlane => f.write_str("tau must have Im(tau) > 0"),
        }
    }
}

/// The two lattice directions of one torus factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeDir {
    /// `λ₁ = δ` in `e₁` units.
    One,
    /// `λ₂ = τ`.
    Two,
}

impl TorusModulus {
    pub fn new(delta: u32, tau: Complex64) -> Result<Self, ModulusError> {
        if delta == 0 {
            return Err(ModulusError::DegreeZero);
        }
        if tau.im.is_nan() || tau.im <= 0.0 || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(ModulusError::TauNotInUpperHalfPlane);
        }
        Ok(TorusModulus { delta, tau })
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Degree as a float, for exponent arithmetic.
    pub fn delta_f(&self) -> f64 {
        self.delta as f64
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn tau1(&self) -> f64 {
        self.tau.re
    }

    pub fn tau2(&self) -> f64 {
        self.tau.im
    }

    /// Lattice generator as a complex number in `e₁` units.
    pub fn lattice_gen(&self, dir: LatticeDir) -> Complex64 {
        match dir {
            LatticeDir::One => Complex64::new(self.delta_f(), 0.0),
            LatticeDir::Two => self.tau,
        }
    }
}

/// Point `μ̂` on the dual torus `M̂ = Pic⁰(M)`, in `e₁*` units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPoint(pub Complex64);

/// Constant real 1-form `ξ = ξ₁dx₁ + ξ₂dx₂`, a point of `V*` (and of
/// `M* = V*/2πΛ*` after reduction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiPoint {
    pub xi1: f64,
    pub xi2: f64,
}

impl XiPoint {
    pub fn new(xi1: f64, xi2: f64) -> Self {
        XiPoint { xi1, xi2 }
    }
}

/// Invertible matrix expressing one constant coframe in another.
///
/// Row `i` gives the expansion of `rows[i]` in the coframe `cols`. Stored as
/// an explicit matrix rather than a closure so it can also push constant
/// 2-forms around by congruence.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    rows: alloc::vec::Vec<Coord>,
    cols: alloc::vec::Vec<Coord>,
    m: CMatrix,
}

impl FrameMatrix {
    /// Build from labels and entries; panics on shape mismatch or a zero
    /// determinant (2×2 and block-diagonal cases only need a cheap check).
    pub fn new(rows: &[Coord], cols: &[Coord], entries: CMatrix) -> Self {
        assert_eq!(entries.n_rows(), rows.len());
        assert_eq!(entries.n_cols(), cols.len());
        assert!(
            entries.inverse().is_ok(),
            "frame matrix must be invertible"
        );
        FrameMatrix {
            rows: rows.into(),
            cols: cols.into(),
            m: entries,
        }
    }

    pub fn rows(&self) -> &[Coord] {
        &self.rows
    }

    pub fn cols(&self) -> &[Coord] {
        &self.cols
    }

    pub fn entries(&self) -> &CMatrix {
        &self.m
    }

    /// Compose two frame changes: `self` expresses A in B, `other` expresses
    /// B in C; the result expresses A in C.
    pub fn compose(&self, other: &FrameMatrix) -> FrameMatrix {
        assert_eq!(self.cols, other.rows, "coframe labels must chain");
        FrameMatrix {
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            m: &self.m * &other.m,
        }
    }

    /// Block-diagonal juxtaposition of two frame changes.
    pub fn block_diag(a: &FrameMatrix, b: &FrameMatrix) -> FrameMatrix {
        let n1 = a.rows.len();
        let n2 = b.rows.len();
        let m1 = a.cols.len();
        let m2 = b.cols.len();
        let mut m = CMatrix::zeros(n1 + n2, m1 + m2);
        for i in 0..n1 {
            for j in 0..m1 {
                m[(i, j)] = a.m[(i, j)];
            }
        }
        for i in 0..n2 {
            for j in 0..m2 {
                m[(n1 + i, m1 + j)] = b.m[(i, j)];
            }
        }
        let mut rows = a.rows.clone();
        rows.extend_from_slice(&b.rows);
        let mut cols = a.cols.clone();
        cols.extend_from_slice(&b.cols);
        FrameMatrix { rows, cols, m }
    }
}

/// Split `z = z₀ + n₁δ + n₂τ` with `z₀ = sδ + tτ`, `s, t ∈ [0, 1)`.
///
/// The half-open parallelogram makes the reduction unique; a snap zone of a
/// few ulps keeps the operation idempotent when a reduced point is fed back
/// in with fresh rounding.
pub fn reduce_to_fundamental(z: ZPoint, m: &TorusModulus) -> (ZPoint, (i64, i64)) {
    let t = z.im / m.tau2();
    let s = (z.re - t * m.tau1()) / m.delta_f();
    let (fs, ns) = split_unit(s);
    let (ft, nt) = split_unit(t);
    let z0 = Complex64::new(
        fs * m.delta_f() + ft * m.tau1(),
        ft * m.tau2(),
    );
    (z0, (ns, nt))
}

/// Fractional part in `[0, 1)` plus integer offset, with a boundary snap of
/// width `8ε·max(1,|x|)` so that re-reducing a reduced coordinate cannot
/// fall on the wrong side of 1.
fn split_unit(x: f64) -> (f64, i64) {
    let mut n = x.floor();
    let mut frac = x - n;
    let snap = 8.0 * f64::EPSILON * f64::max(1.0, x.abs());
    if 1.0 - frac <= snap {
        frac = 0.0;
        n += 1.0;
    }
    (frac, n as i64)
}

/// Coefficients `Π₁₁ = (1 + iτ₁/τ₂)/(2δ)`, `Π₂₁ = −i/(2τ₂)` of the frame
/// relation `dxᵢ = Πᵢ₁ dz + Π̄ᵢ₁ dz̄`.
pub fn x_to_z_frame(m: &TorusModulus) -> FrameMatrix {
    let pi11 = Complex64::new(1.0, m.tau1() / m.tau2()) / (2.0 * m.delta_f());
    let pi21 = Complex64::new(0.0, -1.0 / (2.0 * m.tau2()));
    let entries = CMatrix::from_rows(&[&[pi11, pi11.conj()], &[pi21, pi21.conj()]]);
    FrameMatrix::new(&[Coord::X1, Coord::X2], &[Coord::Z, Coord::ZBar], entries)
}

/// The inverse relation `dz = δdx₁ + τdx₂`, `dz̄ = δdx₁ + τ̄dx₂`.
pub fn z_to_x_frame(m: &TorusModulus) -> FrameMatrix {
    let d = Complex64::new(m.delta_f(), 0.0);
    let entries = CMatrix::from_rows(&[&[d, m.tau()], &[d, m.tau().conj()]]);
    FrameMatrix::new(&[Coord::Z, Coord::ZBar], &[Coord::X1, Coord::X2], entries)
}

/// Same relation for the second factor coordinate `μ` of `M×M`.
pub fn mu_to_x_frame(m: &TorusModulus) -> FrameMatrix {
    let d = Complex64::new(m.delta_f(), 0.0);
    let entries = CMatrix::from_rows(&[&[d, m.tau()], &[d, m.tau().conj()]]);
    FrameMatrix::new(&[Coord::Mu, Coord::MuBar], &[Coord::X1, Coord::X2], entries)
}

/// Group isomorphism `M̂ → M*`: `ξ₁ = 2πδμ̂₂/τ₂`, `ξ₂ = 2π(τ₁μ̂₂ − τ₂μ̂₁)/τ₂`.
pub fn iso_map(mu_hat: DualPoint, m: &TorusModulus) -> XiPoint {
    let two_pi = 2.0 * core::f64::consts::PI;
    let (m1, m2) = (mu_hat.0.re, mu_hat.0.im);
    XiPoint {
        xi1: two_pi * m.delta_f() * m2 / m.tau2(),
        xi2: two_pi * (m.tau1() * m2 - m.tau2() * m1) / m.tau2(),
    }
}

/// Inverse of [`iso_map`]: `μ̂₁ = (−ξ₂ + ξ₁τ₁/δ)/2π`, `μ̂₂ = ξ₁τ₂/(2πδ)`.
pub fn iso_inverse(xi: XiPoint, m: &TorusModulus) -> DualPoint {
    let two_pi = 2.0 * core::f64::consts::PI;
    let m1 = -xi.xi2 / two_pi + (m.tau1() / m.delta_f()) * xi.xi1 / two_pi;
    let m2 = (m.tau2() / m.delta_f()) * xi.xi1 / two_pi;
    DualPoint(Complex64::new(m1, m2))
}

/// Frame change expressing `(dξ₁, dξ₂)` in `(dμ̂, dμ̂̄)`, the differential of
/// [`iso_map`] written in Wirtinger coordinates:
///
/// `dξ₁ = (πδ/τ₂)(−i dμ̂ + i dμ̂̄)`, `dξ₂ = (π/τ₂)(−iτ̄ dμ̂ + iτ dμ̂̄)`.
pub fn xi_to_mu_hat_frame(m: &TorusModulus) -> FrameMatrix {
    let pi = core::f64::consts::PI;
    let i = Complex64::new(0.0, 1.0);
    let a = pi * m.delta_f() / m.tau2();
    let b = pi / m.tau2();
    let entries = CMatrix::from_rows(&[
        &[-i * a, i * a],
        &[-i * b * m.tau().conj(), i * b * m.tau()],
    ]);
    FrameMatrix::new(
        &[Coord::Xi1, Coord::Xi2],
        &[Coord::MuHat, Coord::MuHatBar],
        entries,
    )
}

/// Lift of the polarization map `M → M̂`. Complex-linear with
/// `e₁ ↦ e₁*`, so in coordinates it is the identity relabel `μ ↦ μ̂`.
pub fn phi_l0_lift(mu: ZPoint) -> DualPoint {
    DualPoint(mu)
}
