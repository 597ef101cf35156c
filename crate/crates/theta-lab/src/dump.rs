//! CSV dumps of Gram fields and theta samples.

use anyhow::{anyhow, Result};
use std::fmt::Write as _;
use theta_core::l2::{gram_field, GramMetric, QuadratureSpec};
use theta_core::theta::ThetaFamily;

use crate::config::RunConfig;

/// Gram field over the μ grid: one row per sample, `mu1, mu2` followed by
/// the row-major matrix entries as re/im pairs.
pub fn gram_csv(cfg: &RunConfig, metric: GramMetric) -> Result<String> {
    cfg.validate()?;
    let m = cfg.modulus();
    let q = QuadratureSpec::new(cfg.quad[0], cfg.quad[1]).map_err(|e| anyhow!("{e}"))?;
    let field = gram_field(metric, &m, cfg.eps, &q, cfg.grid).map_err(|e| anyhow!("{e}"))?;

    let d = m.delta() as usize;
    let mut out = String::new();
    out.push_str("mu1,mu2");
    for i in 0..d {
        for j in 0..d {
            write!(out, ",g_{i}_{j}_re,g_{i}_{j}_im").expect("string write");
        }
    }
    out.push('\n');
    for (mu, g) in field.mu_grid.iter().zip(&field.grams) {
        write!(out, "{},{}", mu.re, mu.im).expect("string write");
        for i in 0..d {
            for j in 0..d {
                write!(out, ",{},{}", g[(i, j)].re, g[(i, j)].im).expect("string write");
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Theta basis sampled over a `grid × grid` subdivision of the fundamental
/// domain: `z1, z2` followed by re/im of each basis section.
pub fn theta_csv(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let m = cfg.modulus();
    let families: Vec<ThetaFamily> = (0..m.delta())
        .map(|a| ThetaFamily::new(m, a, cfg.eps))
        .collect::<Result<_, _>>()
        .map_err(|e| anyhow!("{e}"))?;

    let mut out = String::new();
    out.push_str("z1,z2");
    for a in 0..m.delta() {
        write!(out, ",theta_{a}_re,theta_{a}_im").expect("string write");
    }
    out.push('\n');
    let side = cfg.grid;
    for i in 0..side {
        for j in 0..side {
            let s = i as f64 / side as f64;
            let t = j as f64 / side as f64;
            let z = num_complex::Complex64::new(
                s * m.delta_f() + t * m.tau1(),
                t * m.tau2(),
            );
            write!(out, "{},{}", z.re, z.im).expect("string write");
            for fam in &families {
                let v = fam.eval(z);
                write!(out, ",{},{}", v.re, v.im).expect("string write");
            }
            out.push('\n');
        }
    }
    Ok(out)
}
