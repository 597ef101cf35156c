//! Exact algebra of exponential-affine multiplier systems.
//!
//! Every multiplier in play has the shape `e^{a_z·z + a_μ·μ + c}`, and the
//! class is closed under tensor product, dual, translation pullback and
//! change of trivialization. Working directly on the exponents turns the
//! compatibility relations and the multiplier-matching arguments into exact
//! arithmetic: two multipliers agree iff their linear coefficients agree and
//! their constants differ by an element of `2πiℤ`.
//!
//! Constant-term comparison mod `2πiℤ` rounds `(c − c′)/(2πi)` to the
//! nearest integer and requires the residual to be below `1e-12`; constants
//! like `−πiτ` are irrational multiples of `2πi`, so only genuinely integral
//! differences pass.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
// f64 math via the trait in no_std builds; std builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::sample::SampleSeq;
use crate::torus::{DualPoint, TorusModulus, XiPoint};

const TWO_PI: f64 = core::f64::consts::TAU;

/// Tolerance for the integer residual of `(c − c′)/(2πi)`.
pub const CONST_MOD_TOL: f64 = 1e-12;

/// A multiplier `exp(a_z·z + a_μ·μ + c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpAffine {
    pub a_z: Complex64,
    pub a_mu: Complex64,
    pub c: Complex64,
}

impl ExpAffine {
    pub fn new(a_z: Complex64, a_mu: Complex64, c: Complex64) -> Self {
        ExpAffine { a_z, a_mu, c }
    }

    /// The constant multiplier 1.
    pub fn one() -> Self {
        ExpAffine::new(Complex64::ZERO, Complex64::ZERO, Complex64::ZERO)
    }

    pub fn constant(c: Complex64) -> Self {
        ExpAffine::new(Complex64::ZERO, Complex64::ZERO, c)
    }

    pub fn is_one(&self) -> bool {
        self.a_z == Complex64::ZERO
            && self.a_mu == Complex64::ZERO
            && mod_2pii_defect(self.c) <= CONST_MOD_TOL
    }

    /// Pointwise product (exponent sum).
    pub fn mul(&self, other: &ExpAffine) -> ExpAffine {
        ExpAffine::new(
            self.a_z + other.a_z,
            self.a_mu + other.a_mu,
            self.c + other.c,
        )
    }

    /// Pointwise reciprocal (exponent negation).
    pub fn inv(&self) -> ExpAffine {
        ExpAffine::new(-self.a_z, -self.a_mu, -self.c)
    }

    /// Substitute `z → z + dz`, `μ → μ + dμ`.
    pub fn shifted(&self, dz: Complex64, dmu: Complex64) -> ExpAffine {
        ExpAffine::new(self.a_z, self.a_mu, self.c + self.a_z * dz + self.a_mu * dmu)
    }

    pub fn eval(&self, z: Complex64, mu: Complex64) -> Complex64 {
        (self.a_z * z + self.a_mu * mu + self.c).exp()
    }

    /// Equality as multipliers: exact linear parts, constants mod `2πiℤ`.
    pub fn equals_mod_2pii(&self, other: &ExpAffine) -> bool {
        self.a_z == other.a_z
            && self.a_mu == other.a_mu
            && mod_2pii_defect(self.c - other.c) <= CONST_MOD_TOL
    }

    /// `(|Δa_z| + |Δa_μ|, residual of Δc/(2πi) to the nearest integer)`.
    pub fn defect_mod_2pii(&self, other: &ExpAffine) -> (f64, f64) {
        let linear = (self.a_z - other.a_z).norm() + (self.a_mu - other.a_mu).norm();
        (linear, mod_2pii_defect(self.c - other.c))
    }
}

/// Distance of `w/(2πi)` to the nearest integer.
pub fn mod_2pii_defect(w: Complex64) -> f64 {
    let d = w / Complex64::new(0.0, TWO_PI);
    (d - Complex64::new(d.re.round(), 0.0)).norm()
}

/// The four lattice generators of `Λ×Λ` on `V×V`.
///
/// For bundles over a single torus the μ-generators carry the trivial
/// multiplier and the relations involving them hold vacuously.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    /// `λ₁₀`: `z → z + δ`.
    Z1,
    /// `λ₂₀`: `z → z + τ`.
    Z2,
    /// `λ₀₁`: `μ → μ + δ`.
    Mu1,
    /// `λ₀₂`: `μ → μ + τ`.
    Mu2,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::Z1, Gen::Z2, Gen::Mu1, Gen::Mu2];

    /// Shift `(Δz, Δμ)` effected by translation along this generator.
    pub fn shift(self, m: &TorusModulus) -> (Complex64, Complex64) {
        let zero = Complex64::ZERO;
        let d = Complex64::new(m.delta_f(), 0.0);
        match self {
            Gen::Z1 => (d, zero),
            Gen::Z2 => (m.tau(), zero),
            Gen::Mu1 => (zero, d),
            Gen::Mu2 => (zero, m.tau()),
        }
    }

    fn index(self) -> usize {
        match self {
            Gen::Z1 => 0,
            Gen::Z2 => 1,
            Gen::Mu1 => 2,
            Gen::Mu2 => 3,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gen::Z1 => "lambda_10",
            Gen::Z2 => "lambda_20",
            Gen::Mu1 => "lambda_01",
            Gen::Mu2 => "lambda_02",
        };
        f.write_str(s)
    }
}

/// Multiplier system `{e_λ}` of exponential-affine type over a fixed torus.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpAffineCocycle {
    modulus: TorusModulus,
    e: [ExpAffine; 4],
}

/// Operation rejected by the cocycle algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CocycleError {
    /// Translation pullback needs a single-torus cocycle; for a product
    /// cocycle it is ambiguous which factor to translate.
    ProductTorus,
}

impl fmt::Display for CocycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleError::ProductTorus => {
                f.write_str("translation pullback is only defined for single-torus cocycles")
            }
        }
    }
}

impl ExpAffineCocycle {
    pub fn new(
        modulus: TorusModulus,
        e_10: ExpAffine,
        e_20: ExpAffine,
        e_01: ExpAffine,
        e_02: ExpAffine,
    ) -> Self {
        ExpAffineCocycle {
            modulus,
            e: [e_10, e_20, e_01, e_02],
        }
    }

    pub fn modulus(&self) -> &TorusModulus {
        &self.modulus
    }

    pub fn multiplier(&self, g: Gen) -> &ExpAffine {
        &self.e[g.index()]
    }

    pub fn multiplier_mut(&mut self, g: Gen) -> &mut ExpAffine {
        &mut self.e[g.index()]
    }

    /// True when the μ-direction multipliers are trivial and nothing depends
    /// on μ, i.e. the cocycle lives on a single torus.
    pub fn is_single_torus(&self) -> bool {
        self.e[2].is_one()
            && self.e[3].is_one()
            && self.e[0].a_mu == Complex64::ZERO
            && self.e[1].a_mu == Complex64::ZERO
    }

    /// Entrywise product of two multiplier systems over the same torus.
    pub fn tensor(&self, other: &ExpAffineCocycle) -> ExpAffineCocycle {
        assert_eq!(
            self.modulus, other.modulus,
            "tensor operands must share the torus modulus"
        );
        ExpAffineCocycle {
            modulus: self.modulus,
            e: [
                self.e[0].mul(&other.e[0]),
                self.e[1].mul(&other.e[1]),
                self.e[2].mul(&other.e[2]),
                self.e[3].mul(&other.e[3]),
            ],
        }
    }

    /// Entrywise reciprocal.
    pub fn dual(&self) -> ExpAffineCocycle {
        ExpAffineCocycle {
            modulus: self.modulus,
            e: [
                self.e[0].inv(),
                self.e[1].inv(),
                self.e[2].inv(),
                self.e[3].inv(),
            ],
        }
    }

    /// Pullback under the translation `z → z + μ` of a single-torus cocycle.
    pub fn translate_pullback(&self, mu: Complex64) -> Result<ExpAffineCocycle, CocycleError> {
        if !self.is_single_torus() {
            return Err(CocycleError::ProductTorus);
        }
        let zero = Complex64::ZERO;
        Ok(ExpAffineCocycle {
            modulus: self.modulus,
            e: [
                self.e[0].shifted(mu, zero),
                self.e[1].shifted(mu, zero),
                self.e[2],
                self.e[3],
            ],
        })
    }

    /// Change of trivialization by `f`: `e_λ(v) → f(v+λ)·e_λ(v)/f(v)`.
    pub fn change_trivialization(&self, f: &ExpAffine) -> ExpAffineCocycle {
        let mut out = self.clone();
        for g in Gen::ALL {
            let (dz, dmu) = g.shift(&self.modulus);
            let factor = ExpAffine::constant(f.a_z * dz + f.a_mu * dmu);
            *out.multiplier_mut(g) = out.multiplier(g).mul(&factor);
        }
        out
    }

    /// Entrywise multiplier equality mod `2πiℤ`.
    pub fn equals_mod_2pii(&self, other: &ExpAffineCocycle) -> bool {
        Gen::ALL
            .iter()
            .all(|&g| self.multiplier(g).equals_mod_2pii(other.multiplier(g)))
    }

    /// Largest entrywise defect `(linear, constant)` against another system.
    pub fn defect_mod_2pii(&self, other: &ExpAffineCocycle) -> (f64, f64) {
        let mut lin = 0.0f64;
        let mut con = 0.0f64;
        for g in Gen::ALL {
            let (l, c) = self.multiplier(g).defect_mod_2pii(other.multiplier(g));
            lin = lin.max(l);
            con = con.max(c);
        }
        (lin, con)
    }
}

/// One compatibility relation, indexed by an unordered generator pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationCheck {
    pub pair: (Gen, Gen),
    /// `|Δa_z| + |Δa_μ|` between the two sides (must vanish exactly).
    pub linear_defect: f64,
    /// Residual of the constant difference in `2πi` units.
    pub const_defect: f64,
    pub ok: bool,
}

/// Verdict of the symbolic compatibility check with per-relation defects.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatReport {
    pub ok: bool,
    pub relations: Vec<RelationCheck>,
}

const PAIRS: [(Gen, Gen); 6] = [
    (Gen::Z1, Gen::Z2),
    (Gen::Z1, Gen::Mu1),
    (Gen::Z1, Gen::Mu2),
    (Gen::Z2, Gen::Mu1),
    (Gen::Z2, Gen::Mu2),
    (Gen::Mu1, Gen::Mu2),
];

/// Check all six generator-pair relations
/// `e_b(v+λ_a)·e_a(v) = e_a(v+λ_b)·e_b(v)` as exponent identities mod `2πiℤ`.
pub fn check_compatibility(c: &ExpAffineCocycle) -> CompatReport {
    let m = c.modulus();
    let mut relations = Vec::with_capacity(PAIRS.len());
    let mut ok = true;
    for (a, b) in PAIRS {
        let (dza, dmua) = a.shift(m);
        let (dzb, dmub) = b.shift(m);
        let lhs = c.multiplier(b).shifted(dza, dmua).mul(c.multiplier(a));
        let rhs = c.multiplier(a).shifted(dzb, dmub).mul(c.multiplier(b));
        let (linear_defect, const_defect) = lhs.defect_mod_2pii(&rhs);
        let rel_ok = linear_defect == 0.0 && const_defect <= CONST_MOD_TOL;
        ok &= rel_ok;
        relations.push(RelationCheck {
            pair: (a, b),
            linear_defect,
            const_defect,
            ok: rel_ok,
        });
    }
    CompatReport { ok, relations }
}

/// Brute-force oracle for [`check_compatibility`]: evaluate both sides of
/// every relation at sample points and return the worst relative deviation.
pub fn compatibility_numeric_residual(c: &ExpAffineCocycle, n_points: u32) -> f64 {
    let m = c.modulus();
    let mut seq = SampleSeq::keyed(0xc0c1);
    let mut worst = 0.0f64;
    for _ in 0..n_points {
        let z = Complex64::new(seq.next_in(0.0, m.delta_f()), seq.next_in(0.0, m.tau2()));
        let mu = Complex64::new(seq.next_in(0.0, m.delta_f()), seq.next_in(0.0, m.tau2()));
        for (a, b) in PAIRS {
            let (dza, dmua) = a.shift(m);
            let (dzb, dmub) = b.shift(m);
            let lhs = c.multiplier(b).eval(z + dza, mu + dmua) * c.multiplier(a).eval(z, mu);
            let rhs = c.multiplier(a).eval(z + dzb, mu + dmub) * c.multiplier(b).eval(z, mu);
            let scale = 1.0 + lhs.norm().max(rhs.norm());
            worst = worst.max((lhs - rhs).norm() / scale);
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// bundle constructions
// ---------------------------------------------------------------------------

fn minus_two_pi_i() -> Complex64 {
    Complex64::new(0.0, -TWO_PI)
}

fn minus_pi_i_tau(m: &TorusModulus) -> Complex64 {
    Complex64::new(0.0, -core::f64::consts::PI) * m.tau()
}

/// Degree-δ reference bundle: `e_{λ₁} = 1`, `e_{λ₂} = e^{−2πiz − πiτ}`.
pub fn reference_bundle(m: &TorusModulus) -> ExpAffineCocycle {
    ExpAffineCocycle::new(
        *m,
        ExpAffine::one(),
        ExpAffine::new(minus_two_pi_i(), Complex64::ZERO, minus_pi_i_tau(m)),
        ExpAffine::one(),
        ExpAffine::one(),
    )
}

/// Pullback of the reference bundle under translation by `μ`:
/// `e_{λ₂} = e^{−2πiz − 2πiμ − πiτ}` with `μ` a fixed parameter.
pub fn translated_bundle(m: &TorusModulus, mu: Complex64) -> ExpAffineCocycle {
    ExpAffineCocycle::new(
        *m,
        ExpAffine::one(),
        ExpAffine::new(
            minus_two_pi_i(),
            Complex64::ZERO,
            minus_two_pi_i() * mu + minus_pi_i_tau(m),
        ),
        ExpAffine::one(),
        ExpAffine::one(),
    )
}

/// Pullback of the reference bundle along the first projection of `M×M`.
pub fn first_factor_pullback(m: &TorusModulus) -> ExpAffineCocycle {
    reference_bundle(m)
}

/// Pullback of the reference bundle along the second projection of `M×M`.
pub fn second_factor_pullback(m: &TorusModulus) -> ExpAffineCocycle {
    ExpAffineCocycle::new(
        *m,
        ExpAffine::one(),
        ExpAffine::one(),
        ExpAffine::one(),
        ExpAffine::new(Complex64::ZERO, minus_two_pi_i(), minus_pi_i_tau(m)),
    )
}

/// The Poincaré factor on `M×M`: `e_{λ₂₀} = e^{−2πiμ}`, `e_{λ₀₂} = e^{−2πiz}`.
pub fn poincare_factor(m: &TorusModulus) -> ExpAffineCocycle {
    ExpAffineCocycle::new(
        *m,
        ExpAffine::one(),
        ExpAffine::new(Complex64::ZERO, minus_two_pi_i(), Complex64::ZERO),
        ExpAffine::one(),
        ExpAffine::new(minus_two_pi_i(), Complex64::ZERO, Complex64::ZERO),
    )
}

/// The two-variable family bundle on `M×M` carrying the theta family:
/// `e_{λ₂₀} = e_{λ₀₂} = e^{−2πiz − 2πiμ − πiτ}`, the other two trivial.
pub fn family_bundle(m: &TorusModulus) -> ExpAffineCocycle {
    let e2 = ExpAffine::new(minus_two_pi_i(), minus_two_pi_i(), minus_pi_i_tau(m));
    ExpAffineCocycle::new(*m, ExpAffine::one(), e2, ExpAffine::one(), e2)
}

/// Degree-0 slice of the Poincaré bundle at `μ̂`: constant multipliers
/// `e_{λ₁} = 1`, `e_{λ₂} = e^{−2πiμ̂}`.
pub fn poincare_slice(m: &TorusModulus, mu_hat: DualPoint) -> ExpAffineCocycle {
    ExpAffineCocycle::new(
        *m,
        ExpAffine::one(),
        ExpAffine::constant(minus_two_pi_i() * mu_hat.0),
        ExpAffine::one(),
        ExpAffine::one(),
    )
}

/// Trivial constant twist matching the `ξ₁` multiplier: with `a = ξ₁/δ`,
/// `e_{λ₁} = e^{iaδ}`, `e_{λ₂} = e^{iaτ}`.
pub fn constant_matching_twist(m: &TorusModulus, xi1: f64) -> ExpAffineCocycle {
    let a = xi1 / m.delta_f();
    let i = Complex64::new(0.0, 1.0);
    ExpAffineCocycle::new(
        *m,
        ExpAffine::constant(i * (a * m.delta_f())),
        ExpAffine::constant(i * a * m.tau()),
        ExpAffine::one(),
        ExpAffine::one(),
    )
}

/// Flat bundle of the character `χ_ξ`: `e_{λ₁} = e^{iξ₁}`, `e_{λ₂} = e^{iξ₂}`.
pub fn flat_character_bundle(m: &TorusModulus, xi: XiPoint) -> ExpAffineCocycle {
    ExpAffineCocycle::new(
        *m,
        ExpAffine::constant(Complex64::new(0.0, xi.xi1)),
        ExpAffine::constant(Complex64::new(0.0, xi.xi2)),
        ExpAffine::one(),
        ExpAffine::one(),
    )
}

/// Degree-0 bundle attached to the Dolbeault class `σ dz̄`:
/// `e_{λ₁} = e^{2πiσδ}`, `e_{λ₂} = e^{2πiστ̄}`.
pub fn dolbeault_class_bundle(m: &TorusModulus, sigma: Complex64) -> ExpAffineCocycle {
    let two_pi_i = Complex64::new(0.0, TWO_PI);
    ExpAffineCocycle::new(
        *m,
        ExpAffine::constant(two_pi_i * sigma * m.delta_f()),
        ExpAffine::constant(two_pi_i * sigma * m.tau().conj()),
        ExpAffine::one(),
        ExpAffine::one(),
    )
}

// ---------------------------------------------------------------------------
// section witnesses and the multiplier-matching verification
// ---------------------------------------------------------------------------

/// A nowhere-vanishing function `e^{a_z·z + a_μ·μ + c}` certifying that a
/// bundle is trivial (or that two bundles are isomorphic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionWitness {
    pub form: ExpAffine,
}

impl SectionWitness {
    pub fn new(form: ExpAffine) -> Self {
        SectionWitness { form }
    }

    /// Symbolic quasi-periodicity defect against `c`: the witness must
    /// satisfy `w(v+λ) = e_λ(v)·w(v)`, i.e. each `e_λ` must be constant and
    /// equal to `exp(a_w·λ)` mod `2πiℤ`. Returns the worst defect.
    pub fn quasi_periodicity_defect(&self, c: &ExpAffineCocycle) -> f64 {
        let m = c.modulus();
        let mut worst = 0.0f64;
        for g in Gen::ALL {
            let (dz, dmu) = g.shift(m);
            let expected = ExpAffine::constant(self.form.a_z * dz + self.form.a_mu * dmu);
            let (lin, con) = c.multiplier(g).defect_mod_2pii(&expected);
            worst = worst.max(lin).max(con);
        }
        worst
    }

    /// Numeric residual `max |w(v+λ) − e_λ(v)w(v)| / (1 + |w(v)| + |w(v+λ)|)`
    /// over sample points. Both sides enter the scale: for large `ξ` the
    /// shifted witness is exponentially larger than the base value and a
    /// one-sided normalization would report pure rounding noise.
    pub fn numeric_residual(&self, c: &ExpAffineCocycle, n_points: u32) -> f64 {
        let m = c.modulus();
        let mut seq = SampleSeq::keyed(0x5ec7);
        let mut worst = 0.0f64;
        for _ in 0..n_points {
            let z = Complex64::new(seq.next_in(0.0, m.delta_f()), seq.next_in(0.0, m.tau2()));
            let mu = Complex64::new(seq.next_in(0.0, m.delta_f()), seq.next_in(0.0, m.tau2()));
            for g in Gen::ALL {
                let (dz, dmu) = g.shift(m);
                let lhs = self.form.eval(z + dz, mu + dmu);
                let rhs = c.multiplier(g).eval(z, mu) * self.form.eval(z, mu);
                let scale = 1.0 + self.form.eval(z, mu).norm() + lhs.norm();
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
        worst
    }
}

/// Outcome of the multiplier-matching verification for one `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingReport {
    pub xi: XiPoint,
    pub mu_hat: DualPoint,
    /// Worst linear defect between the tensor product and the character
    /// bundle (must be exactly zero).
    pub linear_defect: f64,
    /// Worst constant defect mod `2πiℤ`.
    pub const_defect: f64,
    /// Symbolic quasi-periodicity defect of the witness `e^{iaz}`.
    pub witness_defect: f64,
    /// Numeric witness residual at 20 sample points.
    pub witness_residual: f64,
    pub witness: SectionWitness,
    pub ok: bool,
}

/// Verify that the degree-0 slice at `μ̂ = Iso⁻¹(ξ)` tensored with the
/// constant matching twist has exactly the multipliers `e^{iξ₁}`, `e^{iξ₂}`
/// of the flat character bundle, and that `Φ_ξ(z) = e^{iaz}` with
/// `a = ξ₁/δ` is a nowhere-vanishing section of the twist.
pub fn verify_matching(xi: XiPoint, m: &TorusModulus) -> MatchingReport {
    let mu_hat = crate::torus::iso_inverse(xi, m);
    let slice = poincare_slice(m, mu_hat);
    let twist = constant_matching_twist(m, xi.xi1);
    let product = slice.tensor(&twist);
    let target = flat_character_bundle(m, xi);
    let (linear_defect, const_defect) = product.defect_mod_2pii(&target);

    let a = xi.xi1 / m.delta_f();
    let witness = SectionWitness::new(ExpAffine::new(
        Complex64::new(0.0, a),
        Complex64::ZERO,
        Complex64::ZERO,
    ));
    let witness_defect = witness.quasi_periodicity_defect(&twist);
    let witness_residual = witness.numeric_residual(&twist, 20);

    let ok = linear_defect == 0.0
        && const_defect <= CONST_MOD_TOL
        && witness_defect <= CONST_MOD_TOL
        && witness_residual <= 1e-12;
    MatchingReport {
        xi,
        mu_hat,
        linear_defect,
        const_defect,
        witness_defect,
        witness_residual,
        witness,
        ok,
    }
}
