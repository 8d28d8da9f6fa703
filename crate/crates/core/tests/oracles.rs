//! Closed-form and frozen-value oracles for the full pipeline.
//!
//! The expected numbers here were computed independently of the shooting
//! code: trigonometric characteristic functions evaluated in extended
//! precision, their roots refined on the closed form, and classical
//! Fourier-sine coefficients.

use slgreen_core::expansion::{
    coefficients, expansion_error, inner_product_h, inner_product_h1, parseval_report,
};
use slgreen_core::greens::{FunctionPart, HVector};
use slgreen_core::spectrum::{eigenpair, orthogonality_check, scan, EigenvalueFlag};
use slgreen_core::{parse, presets, Config, Eigenpair64};

/// Roots of the paper-example characteristic function in [0.1, 40],
/// refined on the closed form in extended precision.
const PAPER_ROOTS: [f64; 3] = [3.5208326978030695, 15.685579329751839, 27.383030059801236];

/// First eight eigenvalues of the lambda-dependent preset in [-0.5, 45],
/// from the closed form s(1-lambda) sin(s pi) + 2 lambda cos(s pi).
const LAMBDA_DEP_ROOTS: [f64; 8] = [
    0.0,
    0.40745531059157203,
    1.948184623026209,
    5.1289260685645308,
    10.196576918778545,
    17.226772082515765,
    26.242364029756242,
    37.251337424191817,
];

fn pairs_of(config: &Config, lambdas: &[slgreen_core::Eigenvalue64]) -> Vec<Eigenpair64> {
    lambdas.iter().map(|ev| eigenpair(config, ev).unwrap()).collect()
}

#[test]
fn paper_example_spectrum_matches_closed_form_roots() {
    let cfg = presets::paper_example::<f64>();
    let out = scan(&cfg, 0.1, 40.0, 1600, 1e-10).unwrap();
    let found: Vec<f64> = out.eigenvalues.iter().map(|e| e.lambda).collect();
    assert_eq!(found.len(), PAPER_ROOTS.len(), "found {found:?}");
    for (l, expect) in found.iter().zip(PAPER_ROOTS) {
        assert!(
            ((l - expect) / expect).abs() <= 1e-6,
            "root {l} vs closed-form {expect}"
        );
    }
    for ev in &out.eigenvalues {
        assert!(ev.residual <= 1e-7);
    }
}

#[test]
fn lambda_dependent_spectrum_matches_closed_form_roots() {
    let cfg = presets::lambda_dependent::<f64>();
    let out = scan(&cfg, -0.5, 45.0, 1800, 1e-10).unwrap();
    let found: Vec<f64> = out.eigenvalues.iter().map(|e| e.lambda).collect();
    assert_eq!(found.len(), LAMBDA_DEP_ROOTS.len(), "found {found:?}");
    for (l, expect) in found.iter().zip(LAMBDA_DEP_ROOTS) {
        if expect == 0.0 {
            assert!(l.abs() <= 1e-7, "ground eigenvalue {l}");
        } else {
            assert!(
                ((l - expect) / expect).abs() <= 1e-6,
                "root {l} vs closed-form {expect}"
            );
        }
    }
}

#[test]
fn lambda_dependent_diagnostics() {
    // orthogonality in the full modified product, simplicity, dependency
    let cfg = presets::lambda_dependent::<f64>();
    let out = scan(&cfg, -0.5, 45.0, 1800, 1e-10).unwrap();
    let pairs = pairs_of(&cfg, &out.eigenvalues[..6]);

    for p in &pairs {
        assert!((p.h_norm - 1.0).abs() < 1e-10, "h_norm {}", p.h_norm);
        assert!(p.f1.is_some() && p.f2.is_some());
        assert!(
            p.dependency_residual <= 1e-4,
            "dependency at {}: {}",
            p.lambda(),
            p.dependency_residual
        );
        assert_eq!(p.eigenvalue.flag, EigenvalueFlag::Simple);
        assert!(p.eigenvalue.omega_derivative.abs() > 1e-6);
    }

    let gram = orthogonality_check(&cfg, &pairs).unwrap();
    assert!(
        gram.max_off_diagonal <= 1e-5,
        "off-diagonal {}",
        gram.max_off_diagonal
    );
    assert!(gram.max_diagonal_deviation <= 1e-8);

    // the boundary entries genuinely participate: dropping them from the
    // product must break orthogonality for at least one pair
    let mut max_bare = 0.0f64;
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            let v = inner_product_h1(&cfg, &pairs[i].h_vector().f, &pairs[j].h_vector().f)
                .unwrap();
            max_bare = max_bare.max(v.abs());
        }
    }
    assert!(
        max_bare > 1e-3,
        "scalar components should be load-bearing, bare max {max_bare}"
    );
}

#[test]
fn dirichlet_fourier_sine_expansion() {
    let cfg = presets::dirichlet::<f64>();
    let out = scan(&cfg, 0.5, 150.0, 6000, 1e-10).unwrap();
    assert!(out.eigenvalues.len() >= 12);
    let pairs = pairs_of(&cfg, &out.eigenvalues[..12]);

    let f = HVector::with_trace_entries(
        &cfg,
        FunctionPart::from_exprs(parse("x*(pi - x)").unwrap(), parse("x*(pi - x)").unwrap()),
    )
    .unwrap();
    assert!(f.f1.is_none() && f.f2.is_none());

    // closed form: c_n = sqrt(2/pi) * 4 / n^3 for odd n, 0 for even
    let coeffs = coefficients(&cfg, &pairs, &f, 12).unwrap();
    let amp = (2.0 / std::f64::consts::PI).sqrt();
    for (i, c) in coeffs.iter().enumerate() {
        let n = i + 1;
        let expect = if n % 2 == 1 { amp * 4.0 / (n * n * n) as f64 } else { 0.0 };
        assert!(
            (c - expect).abs() <= 1e-5,
            "c_{n} = {c}, closed form {expect}"
        );
    }

    let report = parseval_report(&cfg, &pairs, &f, 12).unwrap();
    let norm_expect = std::f64::consts::PI.powi(5) / 30.0;
    assert!((report.norm_sq - norm_expect).abs() < 1e-8 * norm_expect);
    assert!(!report.indefinite);
    assert!(report.deficit.abs() <= 1e-5, "deficit {}", report.deficit);
    for w in report.partial_sums.windows(2) {
        assert!(w[1] >= w[0]);
    }
    for s in &report.partial_sums {
        assert!(*s <= report.norm_sq * (1.0 + 1e-6), "Bessel violated: {s}");
    }

    let table = expansion_error(&cfg, &pairs, &f, 12, 400).unwrap();
    let get = |k: usize| table.iter().find(|(kk, _)| *kk == k).unwrap().1;
    assert!(get(12) < get(2), "e_12 {} vs e_2 {}", get(12), get(2));
    assert!(get(12) < 5e-3);
}

#[test]
fn expansion_reproduces_eigenvectors() {
    let cfg = presets::dirichlet::<f64>();
    let out = scan(&cfg, 0.5, 30.0, 600, 1e-10).unwrap();
    let pairs = pairs_of(&cfg, &out.eigenvalues);

    // F = Psi_2: coefficients are the second unit vector
    let f2 = pairs[1].h_vector();
    let coeffs = coefficients(&cfg, &pairs, &f2, 5).unwrap();
    for (i, c) in coeffs.iter().enumerate() {
        let expect = if i == 1 { 1.0 } else { 0.0 };
        assert!((c - expect).abs() <= 1e-5, "c_{} = {c}", i + 1);
    }
    // finite expansion: zero deficit and tiny sup error at k >= 2
    let report = parseval_report(&cfg, &pairs, &f2, 5).unwrap();
    assert!(report.deficit.abs() <= 1e-6);
    let table = expansion_error(&cfg, &pairs, &f2, 5, 300).unwrap();
    let e2 = table.iter().find(|(k, _)| *k == 2).unwrap().1;
    assert!(e2 <= 1e-5, "e_2 = {e2}");

    // linearity: F = 2 Psi_1 + 3 Psi_2
    let p1 = &pairs[0];
    let p2 = &pairs[1];
    let mut left = p1.left.clone();
    let mut right = p1.right.clone();
    for (n, m) in left.nodes.iter_mut().zip(&p2.left.nodes) {
        n.y = 2.0 * n.y + 3.0 * m.y;
        n.yp = 2.0 * n.yp + 3.0 * m.yp;
    }
    for (n, m) in right.nodes.iter_mut().zip(&p2.right.nodes) {
        n.y = 2.0 * n.y + 3.0 * m.y;
        n.yp = 2.0 * n.yp + 3.0 * m.yp;
    }
    let combo = HVector { f: FunctionPart::Paths { left, right }, f1: None, f2: None };
    let coeffs = coefficients(&cfg, &pairs, &combo, 5).unwrap();
    let expect = [2.0, 3.0, 0.0, 0.0, 0.0];
    for (c, e) in coeffs.iter().zip(expect) {
        assert!((c - e).abs() <= 1e-5, "{coeffs:?}");
    }
}

#[test]
fn incompatible_function_shows_gibbs_plateau() {
    // f = 1 violates the Dirichlet conditions; the sup error must stall
    // (diagnostic only, nothing converges uniformly here)
    let cfg = presets::dirichlet::<f64>();
    let out = scan(&cfg, 0.5, 150.0, 6000, 1e-10).unwrap();
    let pairs = pairs_of(&cfg, &out.eigenvalues[..12]);
    let f = HVector::with_trace_entries(
        &cfg,
        FunctionPart::from_exprs(parse("1").unwrap(), parse("1").unwrap()),
    )
    .unwrap();
    let table = expansion_error(&cfg, &pairs, &f, 12, 400).unwrap();
    let last = table.last().unwrap().1;
    assert!(last > 0.05, "expected a Gibbs-like plateau, got {last}");
}

#[test]
fn inner_product_stable_under_grid_refinement() {
    let mut cfg = presets::dirichlet::<f64>();
    let out = scan(&cfg, 0.5, 2.0, 60, 1e-10).unwrap();
    let coarse = eigenpair(&cfg, &out.eigenvalues[0]).unwrap();
    let coarse_ip = inner_product_h1(&cfg, &coarse.h_vector().f, &coarse.h_vector().f).unwrap();

    cfg.steps_per_side = 4000;
    let out = scan(&cfg, 0.5, 2.0, 60, 1e-10).unwrap();
    let fine = eigenpair(&cfg, &out.eigenvalues[0]).unwrap();
    let fine_ip = inner_product_h1(&cfg, &fine.h_vector().f, &fine.h_vector().f).unwrap();

    assert!(
        ((coarse_ip - fine_ip) / fine_ip).abs() <= 1e-6,
        "{coarse_ip} vs {fine_ip}"
    );
}

#[test]
fn boundary_identities_vanish_at_shooting_endpoints() {
    // Ba[phi] - lambda B'a[phi] and Bb[psi] + lambda B'b[psi] cancel
    // algebraically for every lambda
    use slgreen_core::spectrum::boundary_functionals;
    for cfg in [presets::dirichlet::<f64>(), presets::paper_example::<f64>()] {
        for i in 0..20 {
            let lambda = -5.0 + 2.7 * i as f64;
            let tol = 1e-12 * (1.0 + lambda.abs()).powi(2);
            let (y, yp) = slgreen_core::initial_left(&cfg, lambda);
            let bf = boundary_functionals(&cfg, y, yp, 0.0, 0.0);
            assert!((bf.b_a - lambda * bf.bp_a).abs() <= tol);
            let (y, yp) = slgreen_core::initial_right(&cfg, lambda);
            let bf = boundary_functionals(&cfg, 0.0, 0.0, y, yp);
            assert!((bf.b_b + lambda * bf.bp_b).abs() <= tol);
        }
    }
}

#[test]
fn resolvent_eigen_direction_on_lambda_dependent_config() {
    // full H-space eigen-direction action: the resolvent scales the whole
    // eigen-element, boundary entries included
    let cfg = presets::lambda_dependent::<f64>();
    let out = scan(&cfg, -0.5, 3.0, 200, 1e-10).unwrap();
    let pair = eigenpair(&cfg, &out.eigenvalues[1]).unwrap();
    let lambda_n = pair.lambda();
    let lambda = lambda_n + 2.0;
    let scale = 1.0 / (lambda - lambda_n);

    let u = pair.h_vector();
    let out_h = slgreen_core::resolve(&cfg, lambda, &u.f, u.f1.unwrap(), u.f2.unwrap()).unwrap();
    if let FunctionPart::Paths { left, right } = &out_h.f {
        for (n, m) in left
            .nodes
            .iter()
            .zip(&pair.left.nodes)
            .chain(right.nodes.iter().zip(&pair.right.nodes))
        {
            assert!(
                (n.y - scale * m.y).abs() <= 1e-5 * scale.abs(),
                "x = {}: {} vs {}",
                n.x,
                n.y,
                scale * m.y
            );
        }
    }
    let f1 = out_h.f1.unwrap();
    assert!((f1 - scale * pair.f1.unwrap()).abs() <= 1e-5 * scale.abs());
    let f2 = out_h.f2.unwrap();
    assert!((f2 - scale * pair.f2.unwrap()).abs() <= 1e-5 * scale.abs());

    // self-consistency of the returned element
    let rep =
        slgreen_core::verify_resolvent(&cfg, lambda, &out_h, &u.f, u.f1.unwrap(), u.f2.unwrap())
            .unwrap();
    assert!(rep.ode_sup <= 1e-4);
    assert!(rep.boundary_left <= 1e-6);
    assert!(rep.boundary_right <= 1e-6);
    assert!(rep.transmission <= 1e-9);
}

#[test]
fn gram_is_h_orthogonal_for_inner_product_check(){
    // cross-check: [F_i, F_j]_H for Dirichlet eigenpairs equals the plain
    // L2 product (no scalar entries) and matches sine orthogonality
    let cfg = presets::dirichlet::<f64>();
    let out = scan(&cfg, 0.5, 10.0, 400, 1e-10).unwrap();
    let pairs = pairs_of(&cfg, &out.eigenvalues);
    let v0 = pairs[0].h_vector();
    let v1 = pairs[1].h_vector();
    let h = inner_product_h(&cfg, &v0, &v1).unwrap();
    let h1 = inner_product_h1(&cfg, &v0.f, &v1.f).unwrap();
    assert_eq!(h, h1);
    assert!(h.abs() <= 1e-6);
}
