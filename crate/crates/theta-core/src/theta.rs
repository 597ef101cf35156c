//! Evaluation of the theta basis with certified truncation.
//!
//! The sections of the degree-δ reference bundle are spanned by
//!
//! ```text
//! θ_m(z) = Σ_{k ∈ ℤ} exp(πik²τ + 2πiτ(m/δ)k + 2πi(k + m/δ)z),   m = 0..δ-1,
//! ```
//!
//! and the two-variable family is `θ_m(z, μ) = θ_m(z + μ)`. A term has
//! magnitude `exp(−πk²τ₂ − 2πτ₂(m/δ)k − 2π(k + m/δ)z₂)`, so after range
//! reduction to the fundamental domain the series is truncated to a k-range
//! whose geometric-majorant tail bound is below the requested `eps`.
//!
//! Evaluation never sums at large `|z₂|`: the raw series loses precision
//! (and eventually overflows) for `|z₂| ≳ 5τ₂`. Quasi-periodicity factors
//! accumulated during range reduction are tracked as a single exponent and
//! exponentiated once, with the exactly-integral part of the exponent
//! (multiples of `2πi`) dropped before calling `exp`.

use core::fmt;

use num_complex::Complex64;
// f64 math via the trait in no_std builds; std builds resolve these inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::cocycle::ExpAffineCocycle;
use crate::sample::SampleSeq;
use crate::torus::{reduce_to_fundamental, TorusModulus};

const PI: f64 = core::f64::consts::PI;
const TWO_PI: f64 = core::f64::consts::TAU;

/// One member `θ_m` of the theta basis, with an evaluation accuracy target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaFamily {
    modulus: TorusModulus,
    m_index: u32,
    eps: f64,
}

/// Rejected theta family parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaError {
    IndexOutOfRange,
    EpsNotPositive,
}

impl fmt::Display for ThetaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaError::IndexOutOfRange => f.write_str("m_index must lie in [0, delta)"),
            ThetaError::EpsNotPositive => f.write_str("eps must be positive"),
        }
    }
}

/// k-range `[k_min, k_max]` with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPlan {
    pub k_min: i64,
    pub k_max: i64,
    pub tail_bound: f64,
}

impl ThetaFamily {
    pub fn new(modulus: TorusModulus, m_index: u32, eps: f64) -> Result<Self, ThetaError> {
        if m_index >= modulus.delta() {
            return Err(ThetaError::IndexOutOfRange);
        }
        if eps.is_nan() || eps <= 0.0 {
            return Err(ThetaError::EpsNotPositive);
        }
        Ok(ThetaFamily {
            modulus,
            m_index,
            eps,
        })
    }

    pub fn modulus(&self) -> &TorusModulus {
        &self.modulus
    }

    pub fn m_index(&self) -> u32 {
        self.m_index
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// log of the term-magnitude majorant over `|z₂| ≤ z2_max`.
    fn log_majorant(&self, k: i64, z2_max: f64) -> f64 {
        let t2 = self.modulus.tau2();
        let r = self.m_index as f64 / self.modulus.delta_f();
        let kf = k as f64;
        -PI * kf * kf * t2 - TWO_PI * t2 * r * kf + TWO_PI * (kf + r).abs() * z2_max
    }

    /// k-range whose excluded tail is below `eps` for `|z₂| ≤ z2_max`.
    ///
    /// Terms are kept while the majorant exceeds `eps/4`; each side stops
    /// once the next term is below that and successive majorants decay by at
    /// least a factor 2, so the excluded tail is at most `2·B` per side.
    pub fn plan_truncation(&self, z2_max: f64) -> TruncationPlan {
        let z2_max = z2_max.abs();
        let log_thresh = (0.25 * self.eps).ln();
        let log_half = -core::f64::consts::LN_2;

        let grow = |dir: i64| -> (i64, f64) {
            // first |k| in direction `dir` from which the tail is controlled
            let mut k: i64 = dir;
            loop {
                let lb = self.log_majorant(k, z2_max);
                let lb_next = self.log_majorant(k + dir, z2_max);
                if lb <= log_thresh && lb_next - lb <= log_half {
                    // tail from k (exclusive of range) bounded by 2 e^{lb}
                    return (k - dir, 2.0 * lb.exp());
                }
                k += dir;
                assert!(k.abs() < 1_000_000, "truncation plan failed to converge");
            }
        };

        let (k_max, tail_hi) = grow(1);
        let (k_min, tail_lo) = grow(-1);
        TruncationPlan {
            k_min: k_min.min(0),
            k_max: k_max.max(0),
            tail_bound: tail_hi + tail_lo,
        }
    }

    /// Truncated series at a point of the fundamental domain, using an
    /// explicit plan.
    fn sum_reduced(&self, z0: Complex64, plan: &TruncationPlan) -> Complex64 {
        let tau = self.modulus.tau();
        let r = self.m_index as f64 / self.modulus.delta_f();
        let i = Complex64::new(0.0, 1.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in plan.k_min..=plan.k_max {
            let kf = k as f64;
            let exponent =
                i * (PI * kf * kf) * tau + i * (TWO_PI * r * kf) * tau + i * (TWO_PI * (kf + r)) * z0;
            acc += exponent.exp();
        }
        acc
    }

    /// `θ_m(z)`: range-reduce, sum the truncated series, and multiply back
    /// the accumulated quasi-periodicity factor `exp(−πin₂²τ − 2πin₂z₀)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (z0, (_n1, n2)) = reduce_to_fundamental(z, &self.modulus);
        let plan = self.plan_truncation(self.modulus.tau2());
        let series = self.sum_reduced(z0, &plan);
        if n2 == 0 {
            return series;
        }
        // theta(z0 + n2*tau) = exp(-pi*i*n2^2*tau - 2*pi*i*n2*z0) * theta(z0);
        // the lambda_1 steps contribute exactly 1 and integer multiples of
        // 2*pi*i in the exponent are dropped before exponentiating.
        let nf = n2 as f64;
        let i = Complex64::new(0.0, 1.0);
        let factor_exp = -i * (PI * nf * nf) * self.modulus.tau() - i * (TWO_PI * nf) * z0;
        (factor_exp).exp() * series
    }

    /// The two-variable family `θ_m(z, μ) = θ_m(z + μ)`.
    pub fn eval_family(&self, z: Complex64, mu: Complex64) -> Complex64 {
        self.eval(z + mu)
    }

    /// Max quasi-periodicity residual
    /// `|θ(v+λ) − e_λ(v)θ(v)| / (1 + |θ(v)| + |θ(v+λ)|)` over `n_samples`
    /// points and all lattice directions carried by the cocycle.
    ///
    /// The denominator carries both sides of the identity: near the top of
    /// the fundamental domain `|e_λ|` reaches `e^{3π}`, so a residual
    /// normalized by `|θ(v)|` alone would sit at `1e-11` from rounding of
    /// the larger side no matter how the values are computed.
    ///
    /// The lattice shifts come from the cocycle's own modulus, so feeding a
    /// cocycle over a different torus reports an order-one residual instead
    /// of silently sampling the wrong lattice.
    pub fn quasi_periodicity_residual(&self, cocycle: &ExpAffineCocycle, n_samples: u32) -> f64 {
        let cm = cocycle.modulus();
        let single = cocycle.is_single_torus();
        let mut seq = SampleSeq::keyed(0x7e7a);
        let mut worst = 0.0f64;
        for _ in 0..n_samples {
            let z = Complex64::new(
                seq.next_in(0.0, cm.delta_f()),
                seq.next_in(0.0, cm.tau2()),
            );
            let mu = if single {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(seq.next_in(0.0, cm.delta_f()), seq.next_in(0.0, cm.tau2()))
            };
            let base = self.eval_family(z, mu);
            for g in crate::cocycle::Gen::ALL {
                if single && matches!(g, crate::cocycle::Gen::Mu1 | crate::cocycle::Gen::Mu2) {
                    continue;
                }
                let (dz, dmu) = g.shift(cm);
                let lhs = self.eval_family(z + dz, mu + dmu);
                let rhs = cocycle.multiplier(g).eval(z, mu) * base;
                let scale = 1.0 + base.norm() + lhs.norm();
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::cocycle::{family_bundle, reference_bundle};
    use crate::torus::TorusModulus;

    fn modulus(delta: u32, tau: Complex64) -> TorusModulus {
        TorusModulus::new(delta, tau).unwrap()
    }

    fn fam(delta: u32, tau: Complex64, m_index: u32) -> ThetaFamily {
        ThetaFamily::new(modulus(delta, tau), m_index, 1e-14).unwrap()
    }

    #[test]
    fn family_validates_inputs() {
        let m = modulus(2, c64(0.0, 1.0));
        assert_eq!(
            ThetaFamily::new(m, 2, 1e-14).unwrap_err(),
            ThetaError::IndexOutOfRange
        );
        assert_eq!(
            ThetaFamily::new(m, 0, 0.0).unwrap_err(),
            ThetaError::EpsNotPositive
        );
    }

    #[test]
    fn plan_is_tight_for_square_torus() {
        let f = fam(1, c64(0.0, 1.0), 0);
        let plan = f.plan_truncation(1.0);
        assert!(plan.k_min >= -6 && plan.k_max <= 6, "plan {plan:?}");
        assert!(plan.tail_bound <= 1e-14);
    }

    #[test]
    fn loose_eps_gives_small_plan() {
        let f = ThetaFamily::new(modulus(1, c64(0.0, 1.0)), 0, 1.0).unwrap();
        let plan = f.plan_truncation(1.0);
        assert!(plan.tail_bound <= 1.0);
        assert!(plan.k_max - plan.k_min <= 8);
    }

    #[test]
    fn doubling_z2_max_never_shrinks_the_range() {
        for (d, tau, m_idx) in [(1u32, c64(0.0, 1.0), 0u32), (3, c64(0.3, 1.1), 2)] {
            let f = fam(d, tau, m_idx);
            let mut z2 = 0.25;
            for _ in 0..6 {
                let a = f.plan_truncation(z2);
                let b = f.plan_truncation(2.0 * z2);
                assert!(b.k_max >= a.k_max && b.k_min <= a.k_min);
                z2 *= 2.0;
            }
        }
    }

    #[test]
    fn truncation_certificate() {
        // widening the plan by two summands on each side moves the value by
        // less than eps
        let f = fam(3, c64(0.3, 1.1), 2);
        let plan = f.plan_truncation(f.modulus().tau2());
        let wide = TruncationPlan {
            k_min: plan.k_min - 2,
            k_max: plan.k_max + 2,
            tail_bound: plan.tail_bound,
        };
        let mut seq = SampleSeq::keyed(3);
        for _ in 0..20 {
            let z0 = c64(seq.next_in(0.0, 3.0), seq.next_in(0.0, 1.1));
            let a = f.sum_reduced(z0, &plan);
            let b = f.sum_reduced(z0, &wide);
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn riemann_theta_at_origin() {
        // independent oracle: direct summation of exp(-pi k^2)
        let mut oracle = 0.0f64;
        for k in -6i32..=6 {
            oracle += (-PI * (k * k) as f64).exp();
        }
        let f = fam(1, c64(0.0, 1.0), 0);
        let v = f.eval(c64(0.0, 0.0));
        assert!(v.im.abs() < 1e-15);
        assert!((v.re - oracle).abs() < 1e-14, "{} vs {}", v.re, oracle);
        assert!((v.re - 1.086_434_811_213_308).abs() < 1e-13);
    }

    #[test]
    fn riemann_theta_is_even() {
        let f = fam(1, c64(0.0, 1.0), 0);
        let mut seq = SampleSeq::keyed(11);
        for _ in 0..20 {
            let z = c64(seq.next_in(-0.5, 0.5), seq.next_in(-0.5, 0.5));
            let a = f.eval(z);
            let b = f.eval(-z);
            assert!((a - b).norm() <= 1e-13 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn theta_m_is_twisted_translate_of_riemann_theta() {
        // theta_m(z) = e^{2 pi i (m/d) z} * theta(z + (m/d) tau)
        let tau = c64(0.3, 1.1);
        let f = fam(3, tau, 2);
        let base = fam(1, tau, 0);
        let r = 2.0 / 3.0;
        let mut seq = SampleSeq::keyed(12);
        for _ in 0..20 {
            let z = c64(seq.next_in(-1.0, 1.0), seq.next_in(-1.0, 1.0));
            let lhs = f.eval(z);
            let rhs = (Complex64::new(0.0, TWO_PI * r) * z).exp() * base.eval(z + tau * r);
            assert!(
                (lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()),
                "mismatch at z={z}"
            );
        }
    }

    #[test]
    fn family_evaluation_is_translation() {
        let f = fam(2, c64(0.0, 1.0), 1);
        let mut seq = SampleSeq::keyed(13);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let z = c64(seq.next_in(-1.0, 1.0), seq.next_in(-1.0, 1.0));
            let mu = c64(seq.next_in(-1.0, 1.0), seq.next_in(-1.0, 1.0));
            let d = (f.eval_family(z, mu) - f.eval(z + mu)).norm();
            worst = worst.max(d);
        }
        assert!(worst <= 1e-13);
    }

    #[test]
    fn family_quasi_periodicity_in_mu() {
        // theta_m(z, mu + tau) = e^{-2 pi i (z+mu) - pi i tau} theta_m(z, mu)
        let tau = c64(0.0, 1.0);
        let f = fam(2, tau, 1);
        let mut seq = SampleSeq::keyed(14);
        for _ in 0..25 {
            let z = c64(seq.next_in(0.0, 2.0), seq.next_in(0.0, 1.0));
            let mu = c64(seq.next_in(0.0, 2.0), seq.next_in(0.0, 1.0));
            let lhs = f.eval_family(z, mu + tau);
            let factor = (Complex64::new(0.0, -TWO_PI) * (z + mu)
                + Complex64::new(0.0, -PI) * tau)
                .exp();
            let rhs = factor * f.eval_family(z, mu);
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm().max(rhs.norm())));
        }
    }

    #[test]
    fn residual_against_reference_bundle() {
        let m = modulus(2, c64(0.0, 1.0));
        for idx in 0..2 {
            let f = ThetaFamily::new(m, idx, 1e-14).unwrap();
            let r = f.quasi_periodicity_residual(&reference_bundle(&m), 40);
            assert!(r <= 1e-12, "residual {r} for m={idx}");
        }
    }

    #[test]
    fn residual_against_family_bundle() {
        for m in [modulus(2, c64(0.0, 1.0)), modulus(3, c64(0.3, 1.1))] {
            for idx in 0..m.delta() {
                let f = ThetaFamily::new(m, idx, 1e-14).unwrap();
                let r = f.quasi_periodicity_residual(&family_bundle(&m), 25);
                assert!(r <= 1e-12, "residual {r} for delta={} m={idx}", m.delta());
            }
        }
    }

    #[test]
    fn residual_detects_wrong_cocycle() {
        // reference bundle over delta+1 has lattice shifts the theta basis
        // does not satisfy
        let m = modulus(2, c64(0.0, 1.0));
        let wrong = modulus(3, c64(0.0, 1.0));
        let f = ThetaFamily::new(m, 1, 1e-14).unwrap();
        let r = f.quasi_periodicity_residual(&reference_bundle(&wrong), 40);
        assert!(r > 0.1, "wrong-cocycle residual unexpectedly small: {r}");
    }

    #[test]
    fn range_reduction_consistency() {
        let m = modulus(2, c64(0.3, 1.1));
        let f = ThetaFamily::new(m, 1, 1e-14).unwrap();
        let mut seq = SampleSeq::keyed(15);
        for _ in 0..10 {
            let z = c64(seq.next_in(0.0, 2.0), seq.next_in(0.0, 1.1));
            let base = f.eval(z);
            for n1 in -3i64..=3 {
                for n2 in -3i64..=3 {
                    let shifted = z + c64(n1 as f64 * 2.0, 0.0) + m.tau() * (n2 as f64);
                    let v = f.eval(shifted);
                    // accumulated factor for n2 steps from z (lambda_1 contributes 1)
                    let nf = n2 as f64;
                    let i = Complex64::new(0.0, 1.0);
                    let fac = (-i * (PI * nf * nf) * m.tau() - i * (TWO_PI * nf) * z).exp();
                    let expected = fac * base;
                    assert!(
                        (v - expected).norm() <= 1e-11 * (1.0 + v.norm().max(expected.norm())),
                        "n=({n1},{n2}) v={v} expected={expected}"
                    );
                }
            }
        }
    }

    #[test]
    fn cauchy_riemann_residual_is_small() {
        // dbar = (d/dx + i d/dy)/2 must vanish for a holomorphic function;
        // the residual is measured against the size of the z-derivative so
        // the probe works wherever the section is large.
        let h = 1e-4;
        for f in [fam(1, c64(0.0, 1.0), 0), fam(2, c64(0.0, 1.0), 1)] {
            let mut seq = SampleSeq::keyed(16);
            for _ in 0..10 {
                let m = f.modulus();
                let z = c64(seq.next_in(0.0, m.delta_f()), seq.next_in(0.0, m.tau2()));
                let dx = (f.eval(z + c64(h, 0.0)) - f.eval(z - c64(h, 0.0))) / (2.0 * h);
                let dy = (f.eval(z + c64(0.0, h)) - f.eval(z - c64(0.0, h))) / (2.0 * h);
                let dbar = (dx + Complex64::new(0.0, 1.0) * dy) * 0.5;
                let dz = (dx - Complex64::new(0.0, 1.0) * dy) * 0.5;
                let res = dbar.norm() / (1.0 + dz.norm());
                assert!(res <= 1e-6, "CR residual {res}");
            }
        }
    }
}
