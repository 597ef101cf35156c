//! The verification suites.
//!
//! Each suite turns a family of quantitative statements into [`ReportItem`]s
//! with pinned tolerances. Expected values are closed forms; observed values
//! come from the independent numerical routes in `theta-core`.

use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use num_complex::Complex64;
use theta_core::c64;
use theta_core::cocycle::{
    check_compatibility, compatibility_numeric_residual, dolbeault_class_bundle, family_bundle,
    first_factor_pullback, poincare_factor, reference_bundle, second_factor_pullback,
    verify_matching, ExpAffine, ExpAffineCocycle,
};
use theta_core::coord::{Coord, DUAL_FRAME, PRODUCT_FRAME};
use theta_core::forms::{
    curvature_closed, curvature_fd, family_weight, first_chern,
    poincare_pullback_weight, reference_weight, second_factor_weight, ConstTwoForm,
};
use theta_core::holonomy::{
    character_value, loop_curvature, parallel_transport, pullback_curvature_check, Character,
    ConnectionOneForm,
};
use theta_core::l2::{
    adiabatic_curvature, adiabatic_curvature_richardson, curvature_on_dual, gram, gram_field,
    gram_stencil, splitting_report, theta_norm_closed_form, GramMetric, QuadratureSpec,
};
use theta_core::linalg::CMatrix;
use theta_core::sample::SampleSeq;
use theta_core::torus::{mu_to_x_frame, TorusModulus, XiPoint};

use crate::config::RunConfig;
use crate::report::{
    cocycle_json, gram_field_json, two_form_json, ReportItem, SuiteReport, VerificationReport,
};

const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = std::f64::consts::TAU;

/// Step used for the flatness check: the constant Gram field has zero
/// truncation error, and a larger step keeps the 1/h² amplification of the
/// quadrature noise floor well under the 1e-9 bound.
const FLATNESS_STEP: f64 = 1e-2;

/// Fundamental-domain fractions of the adiabatic-curvature centers.
const CURVATURE_CENTERS: [(f64, f64); 3] = [(0.21, 0.37), (0.52, 0.18), (0.11, 0.62)];

fn quad(cfg: &RunConfig) -> Result<QuadratureSpec> {
    QuadratureSpec::new(cfg.quad[0], cfg.quad[1]).map_err(|e| anyhow!("{e}"))
}

fn mu_at(m: &TorusModulus, s: f64, t: f64) -> Complex64 {
    c64(s * m.delta_f() + t * m.tau1(), t * m.tau2())
}

/// Run one suite by name.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteReport> {
    match name {
        "lemma4" => suite_lemma4(cfg),
        "cocycles" => suite_cocycles(cfg),
        "curvature-forms" => suite_curvature_forms(cfg),
        "adiabatic" => suite_adiabatic(cfg),
        "holonomy" => suite_holonomy(cfg),
        "p2p" => suite_p2p(cfg),
        "splitting" => suite_splitting(cfg),
        other => Err(anyhow!("unknown suite {other:?}")),
    }
}

/// Run the configured suites and assemble the report.
pub fn run(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let names = cfg.selected_suites();
    let start = Instant::now();
    let suites: Vec<SuiteReport> = if cfg.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = names
                .iter()
                .map(|&n| scope.spawn(move || run_suite(n, cfg)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().map_err(|_| anyhow!("suite thread panicked"))?)
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        names
            .iter()
            .map(|&n| run_suite(n, cfg).with_context(|| format!("suite {n}")))
            .collect::<Result<Vec<_>>>()?
    };
    let runtime = start.elapsed().as_secs_f64();
    Ok(VerificationReport::new(cfg.clone(), suites, runtime))
}

// ---------------------------------------------------------------------------
// lemma4: orthogonal basis norms and quadrature convergence
// ---------------------------------------------------------------------------

fn suite_lemma4(cfg: &RunConfig) -> Result<SuiteReport> {
    let m = cfg.modulus();
    let q = quad(cfg)?;
    let mu = mu_at(&m, 0.13, 0.21);
    let g = gram(mu, GramMetric::Translated, &m, cfg.eps, &q).map_err(|e| anyhow!("{e}"))?;

    let mut items = Vec::new();
    let mut max_diag = 0.0f64;
    for a in 0..m.delta() {
        let expect = theta_norm_closed_form(&m, a);
        max_diag = max_diag.max(expect);
        items.push(ReportItem::relative(
            format!("norm^2 of theta_{a} under the translated weight"),
            "Lemma 4",
            expect,
            g[(a as usize, a as usize)].re,
            1e-10,
        ));
    }
    items.push(ReportItem::absolute(
        "largest off-diagonal inner product",
        "Lemma 4",
        0.0,
        g.max_abs_offdiag(),
        1e-12 * max_diag,
    ));

    let refined = gram(mu, GramMetric::Translated, &m, cfg.eps, &q.refined())
        .map_err(|e| anyhow!("{e}"))?;
    let rel_change = (&g - &refined).max_abs() / max_diag;
    items.push(ReportItem::absolute(
        format!(
            "Gram change under node doubling ({}x{} to {}x{})",
            q.n1(),
            q.n2(),
            q.refined().n1(),
            q.refined().n2()
        ),
        "Definition 2",
        0.0,
        rel_change,
        1e-12,
    ));

    items.push(ReportItem::absolute(
        "Hermitian defect of the Gram matrix",
        "Definition 2",
        0.0,
        g.hermitian_defect(),
        1e-12 * max_diag,
    ));

    Ok(SuiteReport::new("lemma4", items))
}

// ---------------------------------------------------------------------------
// cocycles: compatibility, tensor decomposition, normalization chain
// ---------------------------------------------------------------------------

fn compat_items(name: &str, anchor: &str, c: &ExpAffineCocycle, items: &mut Vec<ReportItem>) {
    let rep = check_compatibility(c);
    let worst_linear = rep
        .relations
        .iter()
        .map(|r| r.linear_defect)
        .fold(0.0, f64::max);
    let worst_const = rep
        .relations
        .iter()
        .map(|r| r.const_defect)
        .fold(0.0, f64::max);
    items.push(ReportItem::absolute(
        format!("compatibility of {name}: linear defect"),
        anchor,
        0.0,
        worst_linear,
        0.0,
    ));
    items.push(ReportItem::absolute(
        format!("compatibility of {name}: constant defect mod 2*pi*i"),
        anchor,
        0.0,
        worst_const,
        1e-12,
    ));
}

fn suite_cocycles(cfg: &RunConfig) -> Result<SuiteReport> {
    let m = cfg.modulus();
    let mut items = Vec::new();

    let reference = reference_bundle(&m);
    let family = family_bundle(&m);
    let poincare = poincare_factor(&m);
    let named: [(&str, &ExpAffineCocycle); 5] = [
        ("the reference bundle", &reference),
        ("the family bundle", &family),
        ("the Poincare factor", &poincare),
        ("the first-factor pullback", &first_factor_pullback(&m)),
        ("the second-factor pullback", &second_factor_pullback(&m)),
    ];
    for (name, c) in named {
        compat_items(name, "Eq. (compatibility2)", c, &mut items);
    }

    items.push(ReportItem::absolute(
        "numeric compatibility oracle over the family bundle",
        "Eq. (compatibility2)",
        0.0,
        compatibility_numeric_residual(&family, 50),
        1e-9,
    ));

    // tensor decomposition of the family bundle
    let product = first_factor_pullback(&m)
        .tensor(&poincare)
        .tensor(&second_factor_pullback(&m));
    let (lin, con) = product.defect_mod_2pii(&family);
    items.push(ReportItem::absolute(
        "tensor decomposition of the family bundle: linear defect",
        "Proposition 1",
        0.0,
        lin,
        0.0,
    ));
    items.push(ReportItem::absolute(
        "tensor decomposition of the family bundle: constant defect",
        "Proposition 1",
        0.0,
        con,
        1e-12,
    ));

    // metric factorization at the exponent level
    let metric_product = reference_weight(&m)
        .mul(&poincare_pullback_weight(&m))
        .mul(&second_factor_weight(&m));
    let exact = metric_product.coeffs_equal(&family_weight(&m));
    items.push(ReportItem::absolute(
        "family weight equals the product of factor weights",
        "Eq. (metric IdPhiP)",
        0.0,
        if exact {
            0.0
        } else {
            metric_product.sub(&family_weight(&m)).max_abs_coeff()
        },
        0.0,
    ));

    // normalization chain at the dual basis class, evaluated at mu = 1
    let sigma = c64(0.0, -1.0 / (2.0 * m.tau2()));
    let raw = dolbeault_class_bundle(&m, sigma);
    let f = ExpAffine::new(c64(0.0, -TWO_PI) * sigma, c64(0.0, 0.0), c64(0.0, 0.0));
    let normalized = raw.change_trivialization(&f);
    let twist = ExpAffineCocycle::new(
        m,
        ExpAffine::one(),
        ExpAffine::constant(c64(0.0, -TWO_PI)),
        ExpAffine::one(),
        ExpAffine::one(),
    );
    let (lin, con) = normalized.defect_mod_2pii(&twist);
    items.push(ReportItem::absolute(
        "normalized dual-basis class equals the unit translate twist: linear defect",
        "Property 1",
        0.0,
        lin,
        0.0,
    ));
    items.push(ReportItem::absolute(
        "normalized dual-basis class equals the unit translate twist: constant defect",
        "Property 1",
        0.0,
        con,
        1e-12,
    ));

    let artifacts = serde_json::json!({
        "reference_bundle": cocycle_json(&reference),
        "family_bundle": cocycle_json(&family),
        "poincare_factor": cocycle_json(&poincare),
    });
    Ok(SuiteReport::new("cocycles", items).with_artifacts(artifacts))
}

// ---------------------------------------------------------------------------
// curvature-forms: closed curvature, FD oracle, frame conversions
// ---------------------------------------------------------------------------

fn suite_curvature_forms(cfg: &RunConfig) -> Result<SuiteReport> {
    let m = cfg.modulus();
    let p = PI / m.tau2();
    let mut items = Vec::new();

    // closed forms against the displayed constants
    let ref_curv = curvature_closed(&reference_weight(&m));
    items.push(ReportItem::absolute(
        "curvature of the reference weight on dz^dz~",
        "Eq. (curv2)",
        c64(p, 0.0),
        ref_curv.coefficient(Coord::Z, Coord::ZBar),
        1e-14,
    ));

    let fam_curv = curvature_closed(&family_weight(&m));
    let fam_expect = ConstTwoForm::from_wedge_terms(
        &PRODUCT_FRAME,
        &[
            (Coord::Z, Coord::ZBar, c64(p, 0.0)),
            (Coord::Mu, Coord::MuBar, c64(p, 0.0)),
            (Coord::Z, Coord::MuBar, c64(p, 0.0)),
            (Coord::Mu, Coord::ZBar, c64(p, 0.0)),
        ],
    );
    items.push(ReportItem::absolute(
        "curvature of the family weight vs the four-term constant form",
        "Eq. (curv1)",
        0.0,
        fam_curv.max_abs_diff(&fam_expect).map_err(|e| anyhow!("{e}"))?,
        1e-14,
    ));

    let poi_curv = curvature_closed(&poincare_pullback_weight(&m));
    let poi_expect = ConstTwoForm::from_wedge_terms(
        &PRODUCT_FRAME,
        &[
            (Coord::Z, Coord::MuBar, c64(p, 0.0)),
            (Coord::Mu, Coord::ZBar, c64(p, 0.0)),
        ],
    );
    items.push(ReportItem::absolute(
        "curvature of the Poincare pullback weight vs the mixed-term form",
        "Eq. (curvP)",
        0.0,
        poi_curv.max_abs_diff(&poi_expect).map_err(|e| anyhow!("{e}"))?,
        1e-14,
    ));

    // finite-difference oracle at step 1e-3
    let z0 = c64(0.23, 0.31);
    let mu0 = c64(-0.17, 0.29);
    for (name, anchor, w, closed) in [
        (
            "FD curvature of the reference weight",
            "Eq. (curv2)",
            reference_weight(&m),
            &ref_curv,
        ),
        (
            "FD curvature of the family weight",
            "Eq. (curv1)",
            family_weight(&m),
            &fam_curv,
        ),
        (
            "FD curvature of the Poincare pullback weight",
            "Eq. (curvP)",
            poincare_pullback_weight(&m),
            &poi_curv,
        ),
    ] {
        let fd = curvature_fd(|z, mu| w.eval(z, mu), w.domain(), z0, mu0, 1e-3)
            .map_err(|e| anyhow!("{e}"))?;
        items.push(ReportItem::absolute(
            name,
            anchor,
            0.0,
            fd.max_abs_diff(closed).map_err(|e| anyhow!("{e}"))?,
            1e-9,
        ));
    }

    // restricting the Poincare pullback weight to z = 0 gives the constant 1
    let restricted = poincare_pullback_weight(&m).restrict_z(c64(0.0, 0.0));
    items.push(ReportItem::absolute(
        "Poincare pullback weight restricted to z = 0",
        "Theorem c=1",
        0.0,
        restricted.max_abs_coeff(),
        0.0,
    ));

    // per-diagonal curvature of the split bundle in the lattice frame
    let diag_mu = ConstTwoForm::from_wedge_terms(
        &[Coord::Mu, Coord::MuBar],
        &[(Coord::Mu, Coord::MuBar, c64(-p, 0.0))],
    );
    let in_x = diag_mu
        .change_frame(&mu_to_x_frame(&m))
        .map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::absolute(
        "diagonal curvature in the dx frame",
        "Theorem 1.1",
        c64(0.0, TWO_PI * m.delta_f()),
        in_x.coefficient(Coord::X1, Coord::X2),
        1e-12,
    ));
    let diag: Vec<ConstTwoForm> = (0..m.delta() as usize).map(|_| in_x.clone()).collect();
    let c1 = first_chern(&diag).map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::absolute(
        "first Chern form in the dx frame (-delta * omega)",
        "Theorem 1.1",
        c64(-m.delta_f() * m.delta_f(), 0.0),
        c1.coefficient(Coord::X1, Coord::X2),
        1e-12,
    ));

    let artifacts = serde_json::json!({
        "reference_curvature": two_form_json(&ref_curv),
        "family_curvature": two_form_json(&fam_curv),
        "poincare_pullback_curvature": two_form_json(&poi_curv),
    });
    Ok(SuiteReport::new("curvature-forms", items).with_artifacts(artifacts))
}

// ---------------------------------------------------------------------------
// adiabatic: flat family field, spectral-bundle curvature, dual reading
// ---------------------------------------------------------------------------

fn suite_adiabatic(cfg: &RunConfig) -> Result<SuiteReport> {
    let m = cfg.modulus();
    let q = quad(cfg)?;
    let mut items = Vec::new();

    // mu-independence of the translated-weight Gram over the grid
    let field = gram_field(GramMetric::Translated, &m, cfg.eps, &q, cfg.grid)
        .map_err(|e| anyhow!("{e}"))?;
    let g0 = &field.grams[0];
    let scale = g0.max_abs();
    let max_var = field
        .grams
        .iter()
        .map(|g| (g - g0).max_abs())
        .fold(0.0, f64::max)
        / scale;
    items.push(ReportItem::absolute(
        format!("translated Gram variation over the {0}x{0} grid", cfg.grid),
        "Theorem KK(1)",
        0.0,
        max_var,
        1e-10,
    ));

    // flatness of the adiabatic curvature of the translated field
    let st = gram_stencil(
        mu_at(&m, 0.3, 0.4),
        FLATNESS_STEP,
        GramMetric::Translated,
        &m,
        cfg.eps,
        &q,
    )
    .map_err(|e| anyhow!("{e}"))?;
    let flat = adiabatic_curvature(&st).map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::absolute(
        "adiabatic curvature of the translated field",
        "Theorem KK(1)",
        0.0,
        flat.max_abs(),
        1e-9,
    ));

    // spectral-bundle curvature at three centers
    let expect_diag = -PI / m.tau2();
    let mut last: Option<CMatrix> = None;
    for (i, (s, t)) in CURVATURE_CENTERS.iter().enumerate() {
        let center = mu_at(&m, *s, *t);
        let f = adiabatic_curvature_richardson(
            center,
            cfg.fd_step,
            GramMetric::DirectImage,
            &m,
            cfg.eps,
            &q,
        )
        .map_err(|e| anyhow!("{e}"))?;
        let worst_diag = (0..m.delta() as usize)
            .map(|a| f[(a, a)])
            .max_by(|x, y| {
                let dx = (x - Complex64::new(expect_diag, 0.0)).norm();
                let dy = (y - Complex64::new(expect_diag, 0.0)).norm();
                dx.partial_cmp(&dy).expect("finite")
            })
            .expect("delta >= 1");
        items.push(ReportItem::relative(
            format!("spectral curvature diagonal at center {i}"),
            "Theorem 7",
            c64(expect_diag, 0.0),
            worst_diag,
            1e-5,
        ));
        items.push(ReportItem::absolute(
            format!("spectral curvature off-diagonals at center {i}"),
            "Theorem 7",
            0.0,
            f.max_abs_offdiag(),
            1e-8,
        ));
        last = Some(f);
    }
    let f = last.expect("three centers");

    // Richardson consistency of the plain stencil value at the last center
    let plain_st = gram_stencil(
        mu_at(&m, CURVATURE_CENTERS[2].0, CURVATURE_CENTERS[2].1),
        cfg.fd_step,
        GramMetric::DirectImage,
        &m,
        cfg.eps,
        &q,
    )
    .map_err(|e| anyhow!("{e}"))?;
    let plain = adiabatic_curvature(&plain_st).map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::relative(
        "plain-step curvature before extrapolation",
        "Theorem 7",
        c64(expect_diag, 0.0),
        plain[(0, 0)],
        1e-3,
    ));

    // dual reading: exact relabel and first Chern form
    let dual_st = gram_stencil(
        mu_at(&m, CURVATURE_CENTERS[0].0, CURVATURE_CENTERS[0].1),
        cfg.fd_step,
        GramMetric::DirectImage,
        &m,
        cfg.eps,
        &q,
    )
    .map_err(|e| anyhow!("{e}"))?;
    let on_m = adiabatic_curvature(&dual_st).map_err(|e| anyhow!("{e}"))?;
    let on_dual = curvature_on_dual(&dual_st).map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::absolute(
        "dual-torus relabel of the curvature matrix",
        "Theorem 8(1)",
        0.0,
        (&on_m - &on_dual).max_abs(),
        1e-12,
    ));

    let diag_forms: Vec<ConstTwoForm> = (0..m.delta() as usize)
        .map(|a| {
            ConstTwoForm::from_wedge_terms(
                &DUAL_FRAME,
                &[(Coord::MuHat, Coord::MuHatBar, f[(a, a)])],
            )
        })
        .collect();
    let c1 = first_chern(&diag_forms).map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::relative(
        "first Chern form of the spectral bundle on the dual torus",
        "Theorem 8(2)",
        c64(0.0, -m.delta_f() / (2.0 * m.tau2())),
        c1.coefficient(Coord::MuHat, Coord::MuHatBar),
        1e-5,
    ));

    // lattice-frame conversion of the measured diagonal
    let mut worst_x = c64(0.0, 0.0);
    let mut worst_dev = -1.0f64;
    let expect_x = c64(0.0, TWO_PI * m.delta_f());
    for a in 0..m.delta() as usize {
        let form = ConstTwoForm::from_wedge_terms(
            &[Coord::Mu, Coord::MuBar],
            &[(Coord::Mu, Coord::MuBar, f[(a, a)])],
        );
        let in_x = form
            .change_frame(&mu_to_x_frame(&m))
            .map_err(|e| anyhow!("{e}"))?;
        let v = in_x.coefficient(Coord::X1, Coord::X2);
        let dev = (v - expect_x).norm();
        if dev > worst_dev {
            worst_dev = dev;
            worst_x = v;
        }
    }
    items.push(ReportItem::relative(
        "measured diagonal curvature in the dx frame",
        "Theorem 1.1",
        expect_x,
        worst_x,
        1e-5,
    ));

    Ok(SuiteReport::new("adiabatic", items))
}

// ---------------------------------------------------------------------------
// holonomy: character loops, plaquettes, pullback identity
// ---------------------------------------------------------------------------

fn suite_holonomy(cfg: &RunConfig) -> Result<SuiteReport> {
    let m = cfg.modulus();
    let mut items = Vec::new();

    // lattice loops against the character, 25 sampled xi
    let mut seq = SampleSeq::keyed(0x1007);
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let xi = XiPoint::new(seq.next_in(-TWO_PI, TWO_PI), seq.next_in(-TWO_PI, TWO_PI));
        let a = ConnectionOneForm::FlatXi(xi);
        for gen in [[1.0, 0.0], [0.0, 1.0]] {
            let start = [0.0, 0.0, xi.xi1, xi.xi2];
            let end = [gen[0], gen[1], xi.xi1, xi.xi2];
            let sigma = parallel_transport(&a, &[start, end], 1000).map_err(|e| anyhow!("{e}"))?;
            let chi = character_value(&Character::LatticeOnTorus { xi }, gen)
                .map_err(|e| anyhow!("{e}"))?;
            worst = worst.max((sigma - chi).norm());
        }
    }
    items.push(ReportItem::absolute(
        "lattice-loop transport vs character over 25 sampled xi (1000 steps)",
        "Section 6",
        0.0,
        worst,
        1e-12,
    ));

    // the pinned example: xi = (pi, 0) along the first generator
    let xi = XiPoint::new(PI, 0.0);
    let sigma = parallel_transport(
        &ConnectionOneForm::FlatXi(xi),
        &[[0.0, 0.0, PI, 0.0], [1.0, 0.0, PI, 0.0]],
        1000,
    )
    .map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::absolute(
        "holonomy of the first lattice loop at xi = (pi, 0)",
        "Section 6",
        c64(-1.0, 0.0),
        sigma,
        1e-12,
    ));

    // xi-direction loop at the origin: trivial gluing
    let sigma0 = parallel_transport(
        &ConnectionOneForm::Universal,
        &[[0.0, 0.0, 0.3, 0.7], [0.0, 0.0, 0.3 + TWO_PI, 0.7]],
        64,
    )
    .map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::absolute(
        "xi loop at x = 0",
        "Theorem P2P (2')",
        c64(1.0, 0.0),
        sigma0,
        1e-13,
    ));

    // xi-direction loop at x = (1/4, 0): the gluing factor is the character
    let sigma_q = parallel_transport(
        &ConnectionOneForm::Universal,
        &[[0.25, 0.0, 0.0, 0.0], [0.25, 0.0, TWO_PI, 0.0]],
        64,
    )
    .map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::absolute(
        "xi loop at x = (1/4, 0)",
        "Eq. (action2pilambda)",
        c64(0.0, -1.0),
        sigma_q,
        1e-13,
    ));

    // plaquettes of the universal connection
    let a = ConnectionOneForm::Universal;
    let center = [0.3, 0.1, 0.7, 0.4];
    for (name, plane) in [
        ("plaquette in the (x1, xi1) plane", (Coord::X1, Coord::Xi1)),
        ("plaquette in the (x2, xi2) plane", (Coord::X2, Coord::Xi2)),
    ] {
        let k = loop_curvature(&a, &center, plane, 1e-2, 64).map_err(|e| anyhow!("{e}"))?;
        items.push(ReportItem::absolute(
            name,
            "Eq. (dA)",
            c64(0.0, -1.0),
            k,
            1e-3,
        ));
    }
    for (name, plane) in [
        ("plaquette in the (x1, x2) plane", (Coord::X1, Coord::X2)),
        ("plaquette in the (xi1, xi2) plane", (Coord::Xi1, Coord::Xi2)),
    ] {
        let k = loop_curvature(&a, &center, plane, 1e-2, 64).map_err(|e| anyhow!("{e}"))?;
        items.push(ReportItem::absolute(name, "Eq. (conn1)", c64(0.0, 0.0), k, 1e-6));
    }

    // convergence order of the plaquette extraction (RK4 transport: 4)
    let err = |side: f64| -> Result<f64> {
        Ok(
            (loop_curvature(&a, &center, (Coord::X1, Coord::Xi1), side, 16)
                .map_err(|e| anyhow!("{e}"))?
                - c64(0.0, -1.0))
            .norm(),
        )
    };
    let order = (err(0.4)? / err(0.2)?).log2();
    items.push(ReportItem::absolute(
        "plaquette convergence order in side (>= 1.9 required)",
        "Eq. (dA)",
        4.0,
        order,
        2.1,
    ));

    // pullback identity through the explicit frame matrices
    let rep = pullback_curvature_check(&m);
    items.push(ReportItem::absolute(
        "universal curvature pushed to the dual coordinates",
        "Eq. (curvpullback)",
        0.0,
        rep.dual_frame_mismatch,
        1e-12,
    ));
    items.push(ReportItem::absolute(
        "pushed curvature equals the Poincare pullback curvature",
        "Theorem c=1",
        0.0,
        rep.product_frame_mismatch,
        1e-12,
    ));

    Ok(SuiteReport::new("holonomy", items))
}

// ---------------------------------------------------------------------------
// p2p: multiplier matching and triviality witnesses
// ---------------------------------------------------------------------------

fn suite_p2p(cfg: &RunConfig) -> Result<SuiteReport> {
    let m = cfg.modulus();
    let mut items = Vec::new();

    let mut seq = SampleSeq::keyed(0x0b2b);
    let mut worst_lin = 0.0f64;
    let mut worst_con = 0.0f64;
    let mut worst_wit = 0.0f64;
    let mut worst_wit_num = 0.0f64;
    for _ in 0..100 {
        let xi = XiPoint::new(seq.next_in(-12.0, 12.0), seq.next_in(-12.0, 12.0));
        let rep = verify_matching(xi, &m);
        worst_lin = worst_lin.max(rep.linear_defect);
        worst_con = worst_con.max(rep.const_defect);
        worst_wit = worst_wit.max(rep.witness_defect);
        worst_wit_num = worst_wit_num.max(rep.witness_residual);
    }
    items.push(ReportItem::absolute(
        "multiplier matching over 100 sampled xi: linear defect",
        "Theorem P2P (1')",
        0.0,
        worst_lin,
        0.0,
    ));
    items.push(ReportItem::absolute(
        "multiplier matching over 100 sampled xi: constant defect mod 2*pi*i",
        "Theorem P2P (1')",
        0.0,
        worst_con,
        1e-12,
    ));
    items.push(ReportItem::absolute(
        "triviality witness: symbolic quasi-periodicity defect",
        "Theorem P2P (1')",
        0.0,
        worst_wit,
        1e-12,
    ));
    items.push(ReportItem::absolute(
        "triviality witness: numeric residual",
        "Theorem P2P (1')",
        0.0,
        worst_wit_num,
        1e-12,
    ));

    // the lattice-image example: xi = (2*pi, 0) on the square torus maps to
    // mu-hat = i and the constant multipliers cancel exactly
    let sq = TorusModulus::new(1, c64(0.0, 1.0)).expect("square modulus");
    let rep = verify_matching(XiPoint::new(TWO_PI, 0.0), &sq);
    items.push(ReportItem::absolute(
        "matching at xi = (2*pi, 0) on the square torus",
        "Eq. (Iso)",
        0.0,
        rep.const_defect.max(rep.linear_defect),
        1e-12,
    ));

    // trivial gluing of the xi-quotient at x = 0
    let sigma0 = parallel_transport(
        &ConnectionOneForm::Universal,
        &[[0.0, 0.0, 1.3, -0.4], [0.0, 0.0, 1.3, -0.4 + TWO_PI]],
        64,
    )
    .map_err(|e| anyhow!("{e}"))?;
    items.push(ReportItem::absolute(
        "gluing factor at x = 0",
        "Theorem P2P (2')",
        c64(1.0, 0.0),
        sigma0,
        1e-13,
    ));

    Ok(SuiteReport::new("p2p", items))
}

// ---------------------------------------------------------------------------
// splitting: the numerical shadow of the holomorphic splitting
// ---------------------------------------------------------------------------

fn suite_splitting(cfg: &RunConfig) -> Result<SuiteReport> {
    let m = cfg.modulus();
    let q = quad(cfg)?;
    let rep = splitting_report(&m, cfg.eps, &q, cfg.grid).map_err(|e| anyhow!("{e}"))?;

    let items = vec![
        ReportItem::absolute(
            "off-diagonal mass of the translated Gram field",
            "Theorem KK(2)",
            0.0,
            rep.max_offdiag_ratio,
            theta_core::l2::SPLITTING_OFFDIAG_TOL,
        ),
        ReportItem::absolute(
            "mu variation of the translated Gram field",
            "Theorem KK(1)",
            0.0,
            rep.max_mu_variation,
            theta_core::l2::SPLITTING_CONSTANCY_TOL,
        ),
        ReportItem::absolute(
            "direct-image Gram field equals the Gaussian factor times the constant diagonal",
            "Eq. (Esplit1)",
            0.0,
            rep.max_factor_mismatch,
            theta_core::l2::SPLITTING_FACTOR_TOL,
        ),
    ];

    let field = gram_field(GramMetric::Translated, &m, cfg.eps, &q, cfg.grid)
        .map_err(|e| anyhow!("{e}"))?;
    let artifacts = serde_json::json!({ "translated_gram_field": gram_field_json(&field) });
    Ok(SuiteReport::new("splitting", items).with_artifacts(artifacts))
}
