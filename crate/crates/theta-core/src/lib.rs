//! Numerical and exact-symbolic geometry of positive line bundles on a
//! complex torus `M = V/Λ`, `Λ = ℤ{δe₁, τe₁}`.
//!
//! The crate provides, in `no_std + alloc` form:
//!
//! * [`torus`]: moduli data, range reduction, and the linear maps between
//!   the torus `M`, its dual `M̂ = Pic⁰(M)` and the real dual `M* = V*/2πΛ*`
//! * [`cocycle`]: exact algebra of exponential-affine multiplier systems
//!   (factors of automorphy) on `M` and `M×M`, with compatibility checks
//!   performed in exponent arithmetic mod `2πiℤ`
//! * [`theta`]: evaluation of the theta basis `θ_m(z)` and the two-variable
//!   family `θ_m(z, μ)` with certified series truncation
//! * [`forms`]: quadratic-exponent Hermitian weights, constant-coefficient
//!   2-forms over labelled coframes, closed-form and finite-difference Chern
//!   curvature
//! * [`l2`]: L² inner products by trapezoid quadrature over the fundamental
//!   domain, Gram fields over the translation parameter, and the adiabatic
//!   (Berry/Chern) curvature of the associated spectral bundles
//! * [`holonomy`]: characters, flat `U(1)` connections, the universal
//!   connection `d + iξ` over `M×M*`, numerical parallel transport and
//!   plaquette curvature extraction
//!
//! Everything is pure: no IO, no global state, no randomness. Sampling for
//! residual checks uses the fixed counter-based sequence in [`sample`].

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cocycle;
pub mod coord;
pub mod forms;
pub mod holonomy;
pub mod l2;
pub mod linalg;
pub mod sample;
pub mod theta;
pub mod torus;

pub use num_complex::Complex64;

/// Convenience constructor for `Complex64`.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
