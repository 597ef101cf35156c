//! Labels for the coordinate coframes in play.
//!
//! Four coordinate systems coexist: the holomorphic coordinate `z` on `M`,
//! the translation parameter `μ` on the second factor of `M×M`, the dual
//! coordinate `μ̂` on `M̂`, and the real pair `(x₁, x₂, ξ₁, ξ₂)` on `M×M*`.
//! Constant forms and frame matrices carry these labels so that mixing
//! frames without an explicit change of frame is an error, not a silent bug.

use core::fmt;

/// One coordinate differential of a constant coframe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    /// `dz` on the first torus factor.
    Z,
    /// `dz̄`.
    ZBar,
    /// `dμ` on the second torus factor.
    Mu,
    /// `dμ̄`.
    MuBar,
    /// `dμ̂` on the dual torus.
    MuHat,
    /// `dμ̂̄`.
    MuHatBar,
    /// `dx₁`, dual to the lattice generator `λ₁`.
    X1,
    /// `dx₂`, dual to `λ₂`.
    X2,
    /// `dξ₁` on the space of constant real 1-forms.
    Xi1,
    /// `dξ₂`.
    Xi2,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Coord::Z => "dz",
            Coord::ZBar => "dz~",
            Coord::Mu => "dmu",
            Coord::MuBar => "dmu~",
            Coord::MuHat => "dmuhat",
            Coord::MuHatBar => "dmuhat~",
            Coord::X1 => "dx1",
            Coord::X2 => "dx2",
            Coord::Xi1 => "dxi1",
            Coord::Xi2 => "dxi2",
        };
        f.write_str(s)
    }
}

/// The complex coframe `(dz, dz̄)` on a single torus.
pub const TORUS_FRAME: [Coord; 2] = [Coord::Z, Coord::ZBar];

/// The complex coframe `(dz, dz̄, dμ, dμ̄)` on the product torus.
pub const PRODUCT_FRAME: [Coord; 4] = [Coord::Z, Coord::ZBar, Coord::Mu, Coord::MuBar];

/// The complex coframe `(dμ̂, dμ̂̄)` on the dual torus.
pub const DUAL_FRAME: [Coord; 2] = [Coord::MuHat, Coord::MuHatBar];

/// The real coframe `(dx₁, dx₂, dξ₁, dξ₂)` on `M×M*`.
pub const REAL_FRAME: [Coord; 4] = [Coord::X1, Coord::X2, Coord::Xi1, Coord::Xi2];
